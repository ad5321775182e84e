use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kform::decomposition::rules::{brace_collapse, exchange_step, reduce_step, Fields};
use kform::decomposition::{count_forms, decompose, default_plan, enumerate_plans, verify_divergence};
use kform::forms::{assemble, exterior_derivative, forms_equivalent};
use kform::numeric::{catalog_case, QuadratureSpec};
use kform::random::{random_scalar, random_scalar_in, random_space, RandomSpec};
use kform::spectral::{
    global_relation, integral_representation, substitute_exponential, substituted_rhs, BoxDomain, ExponentSign,
    ExponentialAnsatz,
};
use kform::{
    brace, bracket, parse_scalar, partial, BilinearExpr, Execution, GaussRational, Monomial, MultiIndex, Operator,
    Pairing, Poly, ScalarPDO, SymbolMode, TermKey,
};

fn gauss(a: i64, b: i64, c: i64) -> GaussRational {
    GaussRational::new(BigRational::new(a.into(), b.into()), BigRational::from_integer(c.into()))
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3), (-6i64..6, 1i64..4, -3i64..3)), 0..5).prop_map(|terms| {
        Poly::from_terms(terms.into_iter().map(|((e0, e1), (a, b, c))| (Monomial::new(vec![e0, e1]), gauss(a, b, c))))
    })
}

fn index(dim: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, dim).prop_map(MultiIndex::new)
}

fn expr_strategy(dim: usize) -> impl Strategy<Value = BilinearExpr> {
    prop::collection::vec((index(dim, 2), index(dim, 2), -5i64..5, 0usize..2, 0usize..2), 0..6).prop_map(
        move |terms| {
            let mut e = BilinearExpr::zero(dim);
            for (l, r, c, fq, fqt) in terms {
                e.add_term(TermKey::new(fq, fqt, l, r), Poly::int(c));
            }
            e
        },
    )
}

fn operator(seed: u64) -> ScalarPDO {
    random_scalar(&mut ChaCha8Rng::seed_from_u64(seed), &RandomSpec::default())
}

fn small_operator(seed: u64) -> ScalarPDO {
    let spec = RandomSpec { max_dim: 3, max_order: 5, max_terms: 3, bound: 4 };
    random_scalar(&mut ChaCha8Rng::seed_from_u64(seed), &spec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn canonical_form_is_idempotent(e in expr_strategy(3)) {
        let once = BilinearExpr::from_terms(3, e.terms().map(|(k, c)| (k.clone(), c.clone()))).unwrap();
        let twice = BilinearExpr::from_terms(3, once.terms().map(|(k, c)| (k.clone(), c.clone()))).unwrap();
        prop_assert_eq!(&once, &e);
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn partials_commute(e in expr_strategy(3), j in 0usize..3, k in 0usize..3) {
        let jk = partial(&partial(&e, j).unwrap(), k).unwrap();
        let kj = partial(&partial(&e, k).unwrap(), j).unwrap();
        prop_assert_eq!(jk, kj);
    }

    #[test]
    fn bracket_and_brace_symmetry(a in index(3, 3), b in index(3, 3)) {
        prop_assert_eq!(bracket(&a, &b, 0, 0).unwrap(), -bracket(&b, &a, 0, 0).unwrap());
        prop_assert_eq!(brace(&a, &b, 0, 0).unwrap(), brace(&b, &a, 0, 0).unwrap());
    }

    #[test]
    fn rewrite_steps_satisfy_their_identities(a in index(3, 3), b in index(3, 3), k in 0usize..3, j in 0usize..3) {
        let f = Fields::default();
        if a.get(k) > 0 {
            for kind in [Pairing::Bracket, Pairing::Brace] {
                let (flux, rest) = reduce_step(kind, &a, &b, k, f).unwrap();
                let lhs = &partial(&flux, k).unwrap() + &rest;
                let rhs = if kind == Pairing::Bracket { bracket(&a, &b, 0, 0) } else { brace(&a, &b, 0, 0) };
                prop_assert_eq!(lhs, rhs.unwrap());
            }
        }
        let up = b.plus_unit(k);
        let flux = brace_collapse(&b, &up, k, f).unwrap();
        prop_assert_eq!(partial(&flux, k).unwrap(), brace(&b, &up, 0, 0).unwrap());
        if a.get(k) > 0 && b.get(j) > 0 {
            let x = exchange_step(&a, &b, k, j, f).unwrap();
            let single = |l: &MultiIndex, r: &MultiIndex| BilinearExpr::product(Poly::one(), TermKey::new(0, 0, l.clone(), r.clone()));
            let rebuilt = &(&single(&x.left, &x.right) + &partial(&x.flux_k, k).unwrap()) + &partial(&x.flux_j, j).unwrap();
            prop_assert_eq!(rebuilt, single(&a, &b));
        }
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>()) {
        let op = operator(seed);
        prop_assert_eq!(op.adjoint().adjoint(), op);
    }

    #[test]
    fn even_odd_split_parts(seed in any::<u64>()) {
        let op = operator(seed);
        let (even, odd) = op.even_odd_split();
        prop_assert_eq!(even.adjoint(), even.clone());
        prop_assert_eq!(odd.adjoint(), odd.scale(&Poly::int(-1)));
        prop_assert_eq!(even.add(&odd).unwrap(), op);
    }

    #[test]
    fn concomitant_routes_agree(seed in any::<u64>()) {
        let op = operator(seed);
        prop_assert_eq!(op.bilinear_rhs(), op.bilinear_rhs_direct());
    }

    #[test]
    fn dsl_round_trip(seed in any::<u64>()) {
        let op = operator(seed);
        prop_assert_eq!(parse_scalar(&op.to_dsl()).unwrap(), op);
    }

    #[test]
    fn default_plan_verifies_and_assembles(seed in any::<u64>()) {
        let op = Operator::from(operator(seed));
        let d = decompose(&op, &default_plan(&op)).unwrap();
        prop_assert!(verify_divergence(&d, &op).unwrap().is_pass());
        prop_assert_eq!(exterior_derivative(&assemble(&d).unwrap()), op.concomitant());
    }

    #[test]
    fn decomposition_is_linear(seed in any::<u64>(), dim in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = random_space(dim);
        let spec = RandomSpec::default();
        let a = random_scalar_in(&mut rng, &space, &spec);
        let b = random_scalar_in(&mut rng, &space, &spec);
        let sum = a.add(&b).unwrap();
        let flux = |s: ScalarPDO| {
            let o = Operator::from(s);
            decompose(&o, &default_plan(&o)).unwrap().fluxes().to_vec()
        };
        let (fa, fb) = (flux(a), flux(b));
        if !sum.is_zero() {
            let expected: Vec<BilinearExpr> = fa.iter().zip(&fb).map(|(x, y)| x + y).collect();
            prop_assert_eq!(flux(sum), expected);
        }
    }

    #[test]
    fn substitution_commutes_with_exterior_derivative(seed in any::<u64>()) {
        let s = small_operator(seed);
        let op = Operator::from(s);
        let f = assemble(&decompose(&op, &default_plan(&op)).unwrap()).unwrap();
        let ans = ExponentialAnsatz::standard(op.space(), 1, ExponentSign::Plus);
        let sub = substitute_exponential(&f, &ans).unwrap();
        prop_assert_eq!(sub.exterior_derivative(), substituted_rhs(&op, &ans));
    }

    #[test]
    fn representation_denominator_is_the_symbol(seed in any::<u64>()) {
        let s = operator(seed);
        let rep = integral_representation(&Operator::from(s.clone())).unwrap();
        prop_assert_eq!(rep.denominator(), &s.symbol(SymbolMode::PlusI));
        prop_assert_eq!(rep.denominator_from_form(), s.symbol(SymbolMode::PlusI));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_matches_count_and_verifies(seed in any::<u64>()) {
        let op = Operator::from(small_operator(seed));
        let n = count_forms(&op);
        prop_assume!(n <= 500u32.into());
        let plans: Vec<_> = enumerate_plans(&op.op_terms(), 500).unwrap().collect();
        prop_assert_eq!(num_bigint::BigUint::from(plans.len()), n);
        let forms: Vec<_> = plans
            .iter()
            .map(|p| {
                let d = decompose(&op, p).unwrap();
                assert!(verify_divergence(&d, &op).unwrap().is_pass());
                assemble(&d).unwrap()
            })
            .collect();
        for f in &forms {
            prop_assert!(forms_equivalent(f, f).unwrap());
            prop_assert!(forms_equivalent(f, &forms[0]).unwrap());
            prop_assert!(forms_equivalent(&forms[0], f).unwrap());
        }
    }

    #[test]
    fn relation_normal_form_is_plan_invariant(seed in any::<u64>()) {
        let op = Operator::from(small_operator(seed));
        prop_assume!(count_forms(&op) <= 50u32.into());
        let ans = ExponentialAnsatz::standard(op.space(), 1, ExponentSign::Plus);
        let domain = BoxDomain::unit(&op.space().axes);
        let mut normal = None;
        for p in enumerate_plans(&op.op_terms(), 50).unwrap() {
            let f = assemble(&decompose(&op, &p).unwrap()).unwrap();
            let r = global_relation(&substitute_exponential(&f, &ans).unwrap(), &domain).unwrap().face_normal_form();
            match &normal {
                None => normal = Some(r),
                Some(first) => prop_assert_eq!(first, &r),
            }
        }
    }
}

#[test]
fn residual_is_plan_invariant() {
    let case = catalog_case("biharmonic").unwrap().prepare().unwrap();
    let domain = BoxDomain::unit(&case.op.space().axes);
    let quad = QuadratureSpec::uniform(3, 12);
    let ans = &case.ansatz;
    let mut values: Vec<Complex64> = Vec::new();
    for p in enumerate_plans(&case.op.op_terms(), 100).unwrap() {
        let f = assemble(&decompose(&case.op, &p).unwrap()).unwrap();
        let form = substitute_exponential(&f, ans).unwrap();
        let r = kform::numeric::boundary_residual(
            &form,
            &case.point,
            &case.solution,
            &kform::numeric::concrete_box(&domain).unwrap(),
            &quad,
            Execution::Parallel,
        )
        .unwrap();
        assert!(r.passes(1e-8));
        values.push(r.faces.iter().map(|f| f.value).sum());
    }
    assert_eq!(values.len(), 8);
    for v in &values {
        assert!((v - values[0]).norm() < 1e-10);
    }
}

#[test]
fn residual_converges_with_node_count() {
    for tag in kform::numeric::TAGS {
        let r: Vec<f64> = [5, 10, 20]
            .iter()
            .map(|&n| kform::numeric::run_catalog(tag, n, Execution::Parallel).unwrap().residual.relative())
            .collect();
        assert!(r[2] <= 1e-8, "{tag}: {r:?}");
        assert!(r[1] <= r[0].max(1e-8) && r[2] <= r[1].max(1e-8), "{tag}: {r:?}");
    }
}

#[test]
fn wrong_solutions_are_detected() {
    let case = catalog_case("wave").unwrap().prepare().unwrap();
    let axes = &case.op.space().axes;
    let domain = BoxDomain::unit(axes);
    for text in ["x^4", "t^3", "exp(x)"] {
        let q = kform::numeric::ManufacturedSolution::parse(axes, &[text], &Default::default()).unwrap();
        let r = case.run_with(&q, &domain, &QuadratureSpec::uniform(2, 20), Execution::Sequential).unwrap();
        assert!(r.residual.value.norm() / r.residual.scale >= 1e-2, "{text}");
    }
}
