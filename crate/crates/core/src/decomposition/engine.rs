use super::plan::{DecompositionPlan, TermPlan};
use super::rules::{brace_collapse, exchange_step, product_collapse, reduce_step, Fields};
use super::DivergenceDecomposition;
use crate::bilinear::{divergence, pairing, BilinearExpr, Pairing};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::{MatrixPDO, Operator, OperatorTerm};
use crate::parallel::{par_map, Execution};
use crate::render::Labels;

/// Decompose under `plan`; the result has passed the divergence check.
pub fn decompose(op: &Operator, plan: &DecompositionPlan) -> Result<DivergenceDecomposition> {
    decompose_with(op, plan, Execution::Sequential)
}

pub fn decompose_system(m: &MatrixPDO, plan: &DecompositionPlan) -> Result<DivergenceDecomposition> {
    let labels = Labels::new(m.space().axes.clone(), m.space().params.clone(), m.fields().to_vec());
    run(labels, &m.op_terms(), m.system_bilinear_rhs(), plan, Execution::Sequential)
}

/// As [`decompose`], with per-term work scheduled by `exec`.
pub fn decompose_with(op: &Operator, plan: &DecompositionPlan, exec: Execution) -> Result<DivergenceDecomposition> {
    let space = op.space();
    let labels = Labels::new(space.axes.clone(), space.params.clone(), op.field_names());
    run(labels, &op.op_terms(), op.concomitant(), plan, exec)
}

/// Decompose under every plan in `plans`, preserving order.
pub fn decompose_all(
    op: &Operator,
    plans: &[DecompositionPlan],
    exec: Execution,
) -> Vec<Result<DivergenceDecomposition>> {
    par_map(exec, plans, |p| decompose(op, p))
}

fn run(
    labels: Labels,
    terms: &[OperatorTerm],
    target: BilinearExpr,
    plan: &DecompositionPlan,
    exec: Execution,
) -> Result<DivergenceDecomposition> {
    plan.validate(terms)?;
    let n = labels.axes.len();
    let jobs: Vec<(&OperatorTerm, &TermPlan)> = terms.iter().zip(&plan.terms).collect();
    let per_term = par_map(exec, &jobs, |(t, p)| term_fluxes(t, p, n));
    let mut fluxes = vec![BilinearExpr::zero(n); n];
    for r in per_term {
        for (acc, f) in fluxes.iter_mut().zip(r?) {
            acc.add_assign(&f);
        }
    }
    let d = DivergenceDecomposition::from_fluxes(labels, fluxes, target)?;
    d.into_verified().map_err(|e| match e {
        Error::Unverified(r) => Error::IdentityCheck { stage: "final divergence".into(), residual: r },
        other => other,
    })
}

/// Fluxes for one term `c ∂^α` acting on `q_col`, paired with `q̃_row`.
fn term_fluxes(t: &OperatorTerm, plan: &TermPlan, n: usize) -> Result<Vec<BilinearExpr>> {
    let f = Fields { q: t.col, qt: t.row };
    let kind = Pairing::for_order(t.alpha.order());
    let mut fluxes = vec![BilinearExpr::zero(n); n];
    let mut a = t.alpha.clone();
    let mut b = MultiIndex::zero(n);
    let mut sign = t.coeff.clone();

    let transfer: &[usize] = plan.odd.as_ref().map_or(&[], |o| &o.transfer);
    for &k in plan.path.iter().chain(transfer) {
        let (flux, _) = reduce_step(kind, &a, &b, k, f)?;
        fluxes[k].add_assign(&flux.scale(&sign));
        a = a.minus_unit(k).expect("checked by reduce_step");
        b = b.plus_unit(k);
        sign = -&sign;
    }

    match &plan.odd {
        None => {
            if a != b {
                return Err(Error::IdentityCheck {
                    stage: "bracket remainder".into(),
                    residual: pairing(kind, &a, &b, f.q, f.qt)?.to_string(),
                });
            }
        }
        Some(odd) => {
            let (a0, b0) = (a.clone(), b.clone());
            for &(j, k) in &odd.exchanges {
                let ex = exchange_step(&a, &b, k, j, f)?;
                fluxes[k].add_assign(&ex.flux_k.scale(&sign));
                fluxes[j].add_assign(&ex.flux_j.scale(&sign));
                a = ex.left;
                b = ex.right;
            }
            match kind {
                Pairing::Bracket => {
                    if a != b0 || b != a0 {
                        return Err(Error::IdentityCheck {
                            stage: "exchange chain".into(),
                            residual: format!("left {a}, right {b} do not cancel {b0}, {a0}"),
                        });
                    }
                }
                Pairing::Brace => {
                    let l = (0..n)
                        .find(|&l| b0.plus_unit(l) == a)
                        .ok_or_else(|| Error::IdentityCheck {
                            stage: "brace finish".into(),
                            residual: format!("left {a} is not {b0} plus one derivative"),
                        })?;
                    let flux = if a0 == b0.plus_unit(l) {
                        brace_collapse(&a0, &b0, l, f)?
                    } else {
                        product_collapse(&a0, &b0, l, f)?
                    };
                    fluxes[l].add_assign(&flux.scale(&sign));
                }
            }
        }
    }

    let expected = pairing(kind, &t.alpha, &MultiIndex::zero(n), f.q, f.qt)?.scale(&t.coeff);
    let got = divergence(&fluxes)?;
    if got != expected {
        return Err(Error::IdentityCheck { stage: "term decomposition".into(), residual: (&got - &expected).to_string() });
    }
    Ok(fluxes)
}

#[cfg(test)]
mod tests {
    use super::super::{default_plan, enumerate_plans, verify_divergence, Verification};
    use super::*;
    use crate::bilinear::{bracket, TermKey};
    use crate::operator::parse_operator;
    use crate::poly::Poly;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn dec(src: &str) -> DivergenceDecomposition {
        let op = parse_operator(src).unwrap();
        decompose(&op, &default_plan(&op)).unwrap()
    }

    #[test]
    fn wave_fluxes() {
        let d = dec("axes x,t; Dt^2 - Dx^2");
        let z = mi(&[0, 0]);
        assert_eq!(d.flux(1), &bracket(&mi(&[0, 1]), &z, 0, 0).unwrap());
        assert_eq!(d.flux(0), &-bracket(&mi(&[1, 0]), &z, 0, 0).unwrap());
    }

    #[test]
    fn heat_fluxes() {
        let d = dec("axes x,t; Dt - Dx^2");
        let z = mi(&[0, 0]);
        assert_eq!(d.flux(1), &BilinearExpr::product(Poly::one(), TermKey::scalar(z.clone(), z.clone())));
        assert_eq!(d.flux(0), &-bracket(&mi(&[1, 0]), &z, 0, 0).unwrap());
    }

    #[test]
    fn odd_cases_verify_under_all_plans() {
        for src in [
            "axes x,y; Dx*Dy",
            "axes x,y,z; Dx*Dy*Dz",
            "axes x,y,z,w; Dx*Dy*Dz*Dw + 2*Dx^3*Dy",
            "axes x,y,z,w; Dx^3*Dy*Dz^2*Dw - Dx",
        ] {
            let op = parse_operator(src).unwrap();
            let plans: Vec<_> = enumerate_plans(&op.op_terms(), 10_000).unwrap().collect();
            for p in &plans {
                let d = decompose(&op, p).unwrap();
                assert_eq!(verify_divergence(&d, &op).unwrap(), Verification::Pass);
            }
        }
    }

    #[test]
    fn corrupted_wave_is_reported() {
        let d = dec("axes x,t; Dt^2 - Dx^2");
        let mut fluxes = d.fluxes().to_vec();
        fluxes[0].add_term(TermKey::scalar(mi(&[0, 0]), mi(&[0, 0])), Poly::one());
        let bad = DivergenceDecomposition::from_fluxes(d.labels().clone(), fluxes, d.target().clone()).unwrap();
        let Verification::Mismatch(r) = bad.verify() else { panic!() };
        let qqt = BilinearExpr::product(Poly::one(), TermKey::scalar(mi(&[0, 0]), mi(&[0, 0])));
        assert_eq!(r, crate::bilinear::partial(&qqt, 0).unwrap());
    }

    #[test]
    fn invalid_plan_is_an_error() {
        let op = parse_operator("axes x,t; Dt^2 - Dx^2").unwrap();
        let mut p = default_plan(&op);
        p.terms[0].path = vec![0];
        assert!(matches!(decompose(&op, &p), Err(Error::InvalidPlan { .. })));
    }

    #[test]
    fn coupled_system() {
        let src = r#"{"axes":["x","t"],"fields":["a","b"],"entries":[["Dt - Dx^2","Dx"],["0","Dt - Dx^2"]]}"#;
        let Operator::Matrix(m) = parse_operator(src).unwrap() else { panic!() };
        let plan = DecompositionPlan::default_for(&m.op_terms());
        let d = decompose_system(&m, &plan).unwrap();
        assert!(d.is_verified());
        // the coupling puts q_b paired with q̃_a into the x flux
        assert!(d.flux(0).terms().any(|(k, _)| k.left_field == 1 && k.right_field == 0));
    }
}
