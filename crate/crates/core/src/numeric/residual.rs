//! Quadrature of a substituted form over the boundary of a box.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;
use crate::parallel::{par_map, Execution};
use crate::spectral::{BoxDomain, End, ExponentialAnsatz, SubstitutedForm};

use super::expr::Expr;
use super::quadrature::{integrate_box, QuadratureSpec};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// One expression per field over the operator's axes.
#[derive(Clone, Debug, PartialEq)]
pub struct ManufacturedSolution {
    pub axes: Vec<String>,
    pub fields: Vec<Expr>,
    pub text: Vec<String>,
}

impl ManufacturedSolution {
    pub fn parse(axes: &[String], texts: &[&str], params: &HashMap<String, Complex64>) -> Result<Self> {
        let fields = texts.iter().map(|t| Expr::parse(t, axes, params)).collect::<Result<_>>()?;
        Ok(Self { axes: axes.to_vec(), fields, text: texts.iter().map(|s| s.to_string()).collect() })
    }

    pub fn zero(axes: &[String], fields: usize) -> Self {
        Self { axes: axes.to_vec(), fields: vec![Expr::zero(); fields], text: vec!["0".into(); fields] }
    }

    pub fn trace(&self, field: usize, alpha: &MultiIndex) -> Expr {
        self.fields[field].derivative(alpha)
    }
}

/// Concrete intervals from a box whose endpoints are all numbers.
pub fn concrete_box(b: &BoxDomain) -> Result<Vec<(f64, f64)>> {
    b.intervals
        .iter()
        .zip(&b.axes)
        .map(|((lo, hi), a)| {
            let (Some(l), Some(h)) = (lo.as_f64(), hi.as_f64()) else {
                return Err(Error::UnsupportedDomain(format!("axis {a} has a symbolic endpoint")));
            };
            if l == h {
                return Err(Error::DegenerateBox(format!("axis {a} has zero length")));
            }
            Ok((l, h))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaceIntegral {
    pub axis: usize,
    pub end: End,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// `Σ_faces ∫ η`.
    pub value: Complex64,
    /// Largest single face integral in magnitude.
    pub scale: f64,
    pub faces: Vec<FaceIntegral>,
}

impl Residual {
    pub fn relative(&self) -> f64 {
        self.value.norm() / self.scale.max(1.0)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.relative() <= tol
    }
}

/// Integrate `η` over `∂Ω` at a concrete spectral point (values for every
/// variable of `f`, in order). Faces are integrated independently and summed
/// in sorted order.
pub fn boundary_residual(
    f: &SubstitutedForm,
    point: &[Complex64],
    q: &ManufacturedSolution,
    domain: &[(f64, f64)],
    quad: &QuadratureSpec,
    exec: Execution,
) -> Result<Residual> {
    let n = f.dim();
    if point.len() != f.vars().len() {
        return Err(Error::DimensionMismatch { expected: f.vars().len(), found: point.len() });
    }
    if domain.len() != n || q.axes.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: domain.len() });
    }
    quad.validate(n)?;
    if let Some((k, _)) = domain.iter().enumerate().find(|(_, (a, b))| a == b) {
        return Err(Error::DegenerateBox(format!("axis {} has zero length", f.labels().axes[k])));
    }
    let w: Vec<Complex64> = f.weight().iter().map(|p| p.eval_complex(point)).collect();
    let fluxes: Vec<Vec<(Complex64, Expr)>> = f
        .fluxes()
        .iter()
        .map(|e| {
            e.terms()
                .map(|((field, d), c)| (c.eval_complex(point), q.trace(*field, d)))
                .filter(|(_, t)| !t.is_zero())
                .collect()
        })
        .collect();
    let faces: Vec<(usize, End)> = (0..n).flat_map(|j| [(j, End::Lo), (j, End::Hi)]).collect();
    let results = par_map(exec, &faces, |&(j, end)| {
        let fixed = match end {
            End::Lo => domain[j].0,
            End::Hi => domain[j].1,
        };
        let free: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let ranges: Vec<(f64, f64)> = free.iter().map(|&k| domain[k]).collect();
        let counts: Vec<usize> = free.iter().map(|&k| quad.nodes[k]).collect();
        let terms = &fluxes[j];
        let sign = f64::from(end.sign());
        let value = if terms.is_empty() {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            integrate_box(&ranges, &counts, |y| {
                let mut x = vec![0.0; n];
                x[j] = fixed;
                for (slot, &k) in free.iter().enumerate() {
                    x[k] = y[slot];
                }
                let phase: Complex64 = w.iter().zip(&x).map(|(wk, xk)| wk * xk).sum();
                let weight = (Complex64::i() * phase).exp();
                let body: Complex64 = terms.iter().map(|(c, t)| c * t.eval(&x)).sum();
                weight * body * sign
            })
        };
        value.map(|v| FaceIntegral { axis: j, end, value: v })
    });
    let faces: Vec<FaceIntegral> = results.into_iter().collect::<Result<_>>()?;
    let value = faces.iter().map(|fi| fi.value).sum();
    let scale = faces.iter().map(|fi| fi.value.norm()).fold(0.0, f64::max);
    Ok(Residual { value, scale, faces })
}

/// Largest `|(Lq)_i|` relative to the size of its terms, over `samples`
/// seeded interior points of `domain`.
pub fn pde_defect(
    op: &Operator,
    q: &ManufacturedSolution,
    params: &[Complex64],
    domain: &[(f64, f64)],
    samples: usize,
    seed: u64,
) -> f64 {
    let m = op.as_matrix();
    let mut rows: Vec<Vec<(Complex64, Expr)>> = vec![Vec::new(); m.size()];
    for t in op.op_terms() {
        rows[t.row].push((t.coeff.eval_complex(params), q.trace(t.col, &t.alpha)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x: Vec<f64> = domain.iter().map(|&(a, b)| a + (b - a) * rng.gen_range(0.05..0.95)).collect();
        for r in &rows {
            let vals: Vec<Complex64> = r.iter().map(|(c, e)| c * e.eval(&x)).collect();
            let size: f64 = vals.iter().map(|v| v.norm()).sum();
            let total: Complex64 = vals.iter().sum();
            worst = worst.max(total.norm() / size.max(1.0));
        }
    }
    worst
}

/// Largest `|(L† q̃)_j|` (weight removed) at a concrete point.
pub fn adjoint_defect(op: &Operator, ansatz: &ExponentialAnsatz, point: &[Complex64]) -> Result<f64> {
    let adj = op.as_matrix().adjoint();
    let mut worst: f64 = 0.0;
    for j in 0..adj.size() {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..adj.size() {
            let amp = ansatz.amplitudes.get(i).map_or(Complex64::new(1.0, 0.0), |a| a.eval_complex(point));
            acc += adj.entry(j, i).symbol_at(&ansatz.weight)?.eval_complex(point) * amp;
        }
        worst = worst.max(acc.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{decompose, default_plan};
    use crate::forms::assemble;
    use crate::operator::parse_operator;
    use crate::spectral::substitute_exponential;

    #[test]
    fn zero_solution_gives_zero() {
        let op = parse_operator("axes t,x; Dt^2 - Dx^2").unwrap();
        let f = assemble(&decompose(&op, &default_plan(&op)).unwrap()).unwrap();
        let ans = ExponentialAnsatz::parse(op.space(), &op.field_names(), "s_t=-1, s_x=1").unwrap();
        let s = substitute_exponential(&f, &ans).unwrap();
        let q = ManufacturedSolution::zero(&op.space().axes, 1);
        let r = boundary_residual(&s, &[], &q, &[(0.0, 1.0); 2], &QuadratureSpec::uniform(2, 5), Execution::Sequential)
            .unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
        assert!(r.passes(1e-12));
    }

    #[test]
    fn degenerate_and_invalid() {
        let op = parse_operator("axes t,x; Dt^2 - Dx^2").unwrap();
        let f = assemble(&decompose(&op, &default_plan(&op)).unwrap()).unwrap();
        let ans = ExponentialAnsatz::parse(op.space(), &op.field_names(), "s_t=-1, s_x=1").unwrap();
        let s = substitute_exponential(&f, &ans).unwrap();
        let q = ManufacturedSolution::zero(&op.space().axes, 1);
        let seq = Execution::Sequential;
        assert!(matches!(
            boundary_residual(&s, &[], &q, &[(0.0, 0.0), (0.0, 1.0)], &QuadratureSpec::uniform(2, 5), seq),
            Err(Error::DegenerateBox(_))
        ));
        assert!(matches!(
            boundary_residual(&s, &[], &q, &[(0.0, 1.0); 2], &QuadratureSpec::uniform(2, 0), seq),
            Err(Error::InvalidQuadrature(_))
        ));
    }
}
