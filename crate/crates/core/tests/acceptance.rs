use std::time::{Duration, Instant};

use num_bigint::BigUint;

use kform::decomposition::{
    count_forms, decompose, default_plan, enumerate_plans, sigma_count, verify_divergence, DEFAULT_CEILING,
};
use kform::fixtures::{self, WaveBranch};
use kform::forms::{assemble, forms_equivalent};
use kform::numeric::{catalog_case, run_catalog, ManufacturedSolution, QuadratureSpec, TAGS};
use kform::parse::parse_poly;
use kform::random::{random_operators, RandomSpec};
use kform::spectral::{
    adjoint_constraint, check_parameterization, global_relation, integral_representation, reduce_mod_quadric,
    substitute_exponential, verify_stokes_adjoint, BoxDomain, ConstraintVariety, ExponentialAnsatz, LinearExpr,
    ParamOutcome, Parameterization, SpinorTriple,
};
use kform::{parse_operator, Execution, MultiIndex, Operator, SymbolMode};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn op(src: &str) -> Operator {
    parse_operator(src).unwrap()
}

type Criterion = (&'static str, fn() -> Outcome);

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

fn counting() -> Outcome {
    let t = Instant::now();
    let counts: Vec<BigUint> =
        [fixtures::WAVE, fixtures::SEXTIC, fixtures::BIHARMONIC].iter().map(|s| count_forms(&op(s))).collect();
    let sigmas = [sigma_count(&MultiIndex::new(vec![2, 2, 4])), sigma_count(&MultiIndex::new(vec![2, 2, 5, 6]))];
    let ok = counts == [1u32, 12, 8].map(BigUint::from) && sigmas == [12u32, 420].map(BigUint::from);
    outcome(
        ok && within(t, Duration::from_secs(1)),
        format!("N = {counts:?}, sigma = {sigmas:?}, {:?}", t.elapsed()),
    )
}

fn oracle_soundness() -> Outcome {
    let t = Instant::now();
    let ops = random_operators(2024, 200, &RandomSpec::default());
    let mut failed = 0;
    for s in ops {
        let o = Operator::from(s);
        let pass = decompose(&o, &default_plan(&o)).and_then(|d| verify_divergence(&d, &o)).map(|v| v.is_pass());
        if !matches!(pass, Ok(true)) {
            failed += 1;
        }
    }
    outcome(failed == 0 && within(t, Duration::from_secs(30)), format!("{failed} of 200 failed, {:?}", t.elapsed()))
}

fn enumeration() -> Outcome {
    let t = Instant::now();
    let o = op(fixtures::SEXTIC);
    let plans: Vec<_> = enumerate_plans(&o.op_terms(), DEFAULT_CEILING).unwrap().collect();
    let mut forms = Vec::new();
    for p in &plans {
        let d = decompose(&o, p).unwrap();
        if !verify_divergence(&d, &o).unwrap().is_pass() {
            return outcome(false, "a plan failed to verify");
        }
        forms.push(assemble(&d).unwrap());
    }
    let mut pairs = 0;
    let mut equivalent = 0;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            pairs += 1;
            if forms_equivalent(&forms[i], &forms[j]).unwrap() {
                equivalent += 1;
            }
        }
    }
    let ok = plans.len() == 12 && pairs == 66 && equivalent == 66;
    outcome(
        ok && within(t, Duration::from_secs(10)),
        format!("{} plans, {equivalent}/{pairs} pairs equivalent, {:?}", plans.len(), t.elapsed()),
    )
}

fn fixture_fidelity() -> Outcome {
    let wave = op(fixtures::WAVE);
    let dw = decompose(&wave, &default_plan(&wave)).unwrap();
    let wave_ok = dw.fluxes() == fixtures::fluxes_from_text(dw.labels(), &fixtures::WAVE_FLUXES).unwrap();

    let sextic = op(fixtures::SEXTIC);
    let d2 = decompose(&sextic, &default_plan(&sextic)).unwrap();
    let sextic_ok = d2.fluxes() == fixtures::fluxes_from_text(d2.labels(), &fixtures::SEXTIC_FLUXES).unwrap();

    let stokes = op(fixtures::STOKES);
    let ds = decompose(&stokes, &default_plan(&stokes)).unwrap();
    let corrected = fixtures::stokes_fluxes(false).unwrap();
    let dx_variant = fixtures::stokes_fluxes(true).unwrap();
    let rho_j_ok = ds.fluxes()[..3] == corrected[..3];
    let j3_ok = ds.fluxes()[3] == corrected[3];
    let j3_dx = ds.fluxes()[3] == dx_variant[3];
    let m = stokes.as_matrix();
    let verified = verify_divergence(&ds, &stokes).unwrap().is_pass() && m.system_bilinear_rhs() == m.system_bilinear_rhs_direct();
    outcome(
        wave_ok && sextic_ok && rho_j_ok && j3_ok && !j3_dx && verified,
        format!(
            "wave {wave_ok}, sextic {sextic_ok}, rho/J1/J2 {rho_j_ok}, J3 with d_z {j3_ok}, J3 with d_x {j3_dx}, verified {verified}"
        ),
    )
}

fn relation_structure() -> Outcome {
    let wave = op(fixtures::WAVE);
    let form = assemble(&decompose(&wave, &default_plan(&wave)).unwrap()).unwrap();
    let domain = BoxDomain::parse(&wave.space().axes, fixtures::WAVE_BOX).unwrap();
    let mut detail = Vec::new();
    let mut ok = true;
    for branch in [WaveBranch::Minus, WaveBranch::Plus] {
        let ans = ExponentialAnsatz::parse(wave.space(), &wave.field_names(), branch.ansatz()).unwrap();
        let s = substitute_exponential(&form, &ans).unwrap();
        let r = fixtures::wave_dirichlet(&global_relation(&s, &domain).unwrap());
        let same = r == fixtures::wave_relation_fixture(branch);
        ok &= same;
        detail.push(format!("{branch:?} {same}"));
    }
    outcome(ok, detail.join(", "))
}

fn constraint_and_parameterization() -> Outcome {
    let cv = adjoint_constraint(&op(fixtures::SEXTIC));
    let expected = parse_poly("s_x^2*s_y^2*(1 - s_z^2) - s_z^2", cv.vars()).unwrap();
    let unit = ConstraintVariety::equals_up_to_unit(cv.poly(), &expected);
    let good = Parameterization::parse(fixtures::SEXTIC_PARAMETERIZATION, "lambda").unwrap();
    let bad = Parameterization::parse(fixtures::SEXTIC_PERTURBED, "lambda").unwrap();
    let pass = check_parameterization(&cv, &good, 20, 1).unwrap();
    let fail = check_parameterization(&cv, &bad, 20, 1).unwrap();
    let ok = unit && matches!(pass, ParamOutcome::Pass { samples: 20, .. }) && !fail.is_pass();
    outcome(ok, format!("P = {}, parameterization {pass:?}, perturbed pass {}", cv.to_text().trim(), fail.is_pass()))
}

fn biharmonic_defect(corrected: bool) -> LinearExpr {
    let display = fixtures::biharmonic_display(corrected).unwrap();
    let bih = op(fixtures::BIHARMONIC);
    let mut target = LinearExpr::zero(3);
    for t in bih.op_terms() {
        target.add_term(0, t.alpha.clone(), t.coeff.clone());
    }
    let rule = fixtures::biharmonic_rule();
    (&display.exterior_derivative() - &target).map_coeffs(|c| reduce_mod_quadric(c, &rule).unwrap())
}

fn biharmonic_closure() -> Outcome {
    let corrected = biharmonic_defect(true);
    let slipped = biharmonic_defect(false);
    outcome(
        corrected.is_zero(),
        format!("corrected display closes {}, slipped display leaves {} terms", corrected.is_zero(), slipped.len()),
    )
}

fn spinor() -> Outcome {
    let t = SpinorTriple::symbolic();
    let iso = t.isotropy().is_zero();
    let even = t.evenness_residual().iter().all(|p| p.is_zero());
    let rows = verify_stokes_adjoint(&t, &op(fixtures::STOKES).as_matrix()).unwrap();
    let adj = rows.iter().all(|p| p.is_zero());
    outcome(iso && even && adj, format!("k.k = 0 {iso}, even {even}, adjoint rows vanish {adj}"))
}

fn numeric() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for tag in TAGS {
        let r = run_catalog(tag, 20, Execution::Parallel).unwrap();
        let pass = r.residual.passes(1e-8) && r.pde_defect <= 1e-10 && r.adjoint_defect <= 1e-12;
        ok &= pass;
        detail.push(format!("{tag} {:.1e}", r.residual.relative()));
    }
    let case = catalog_case("wave").unwrap().prepare().unwrap();
    let wrong = ManufacturedSolution::parse(&case.op.space().axes, &["x^4"], &Default::default()).unwrap();
    let domain = BoxDomain::unit(&case.op.space().axes);
    let r = case.run_with(&wrong, &domain, &QuadratureSpec::uniform(2, 20), Execution::Parallel).unwrap();
    let control = r.residual.value.norm() / r.residual.scale;
    ok &= control >= 1e-2;
    detail.push(format!("control {control:.2e}"));
    outcome(ok && within(t, Duration::from_secs(10)), format!("{}, {:?}", detail.join(", "), t.elapsed()))
}

fn representation() -> Outcome {
    let ops = random_operators(99, 50, &RandomSpec::default());
    let mut mismatched = 0;
    for s in &ops {
        let rep = integral_representation(&Operator::from(s.clone())).unwrap();
        let symbol = s.symbol(SymbolMode::PlusI);
        if rep.vars() != s.symbol_names() || rep.denominator() != &symbol || rep.denominator_from_form() != symbol {
            mismatched += 1;
        }
    }
    let lap = integral_representation(&op(fixtures::LAPLACE_2D)).unwrap();
    let doc = lap.to_doc();
    let fz = lap.fokas_zyskin_latex().unwrap_or_default();
    let shape = doc.prefactor == "-1/(2*pi)^2"
        && doc.integrals == 2
        && doc.boundary_integral
        && fz.contains("\\frac{1}{(2\\pi)^{2}}")
        && fz.contains("\\int_{\\mathbb{R}^{2}}")
        && fz.contains("\\int_{\\partial\\Omega}")
        && fz.contains("\\mathfrak{p}");
    outcome(mismatched == 0 && shape, format!("{mismatched} of 50 mismatched, n = 2 shape {shape}"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("counting", counting),
        ("oracle soundness", oracle_soundness),
        ("enumeration completeness", enumeration),
        ("fixture fidelity", fixture_fidelity),
        ("global relation structure", relation_structure),
        ("constraint and parameterization", constraint_and_parameterization),
        ("biharmonic closure", biharmonic_closure),
        ("spinor lemma", spinor),
        ("numeric global relations", numeric),
        ("integral representation", representation),
    ];
    let mut failures = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let r = run();
        println!("{} {:>2} {name}: {}", if r.ok { "PASS" } else { "FAIL" }, k + 1, r.detail);
        if !r.ok {
            failures.push(k + 1);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
