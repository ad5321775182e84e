//! Tensor Gauss–Legendre quadrature.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `P_n` from the Chebyshev initial guesses.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuadrature("node count must be at least 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let h = 0.5 * (b - a);
        let m = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| (m + h * x, h * w)).collect()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Per-axis node counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub nodes: Vec<usize>,
}

impl QuadratureSpec {
    pub fn uniform(dim: usize, n: usize) -> Self {
        Self { nodes: vec![n; dim] }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.nodes.len() != dim {
            return Err(Error::InvalidQuadrature(format!("{} node counts for {dim} axes", self.nodes.len())));
        }
        if self.nodes.contains(&0) {
            return Err(Error::InvalidQuadrature("node count must be at least 1".into()));
        }
        Ok(())
    }
}

/// `∫ f` over the box `ranges` with `counts[k]` nodes on axis `k`.
pub fn integrate_box(ranges: &[(f64, f64)], counts: &[usize], f: impl Fn(&[f64]) -> Complex64) -> Result<Complex64> {
    let rules: Vec<Vec<(f64, f64)>> = ranges
        .iter()
        .zip(counts)
        .map(|(&(a, b), &n)| GaussLegendre::new(n).map(|g| g.on(a, b)))
        .collect::<Result<_>>()?;
    let d = rules.len();
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    let mut acc = Complex64::new(0.0, 0.0);
    if rules.iter().any(Vec::is_empty) {
        return Ok(acc);
    }
    loop {
        let mut w = 1.0;
        for k in 0..d {
            let (xk, wk) = rules[k][idx[k]];
            x[k] = xk;
            w *= wk;
        }
        acc += f(&x) * w;
        let mut k = 0;
        loop {
            if k == d {
                return Ok(acc);
            }
            idx[k] += 1;
            if idx[k] < rules[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials() {
        for n in 1..=12 {
            let g = GaussLegendre::new(n).unwrap();
            let wsum: f64 = g.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            // degree 2n-1 is integrated exactly
            let deg = 2 * n as i32 - 1;
            let got: f64 = g.on(0.0, 1.0).iter().map(|(x, w)| w * x.powi(deg)).sum();
            assert!((got - 1.0 / f64::from(deg + 1)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn twenty_nodes_match_reference() {
        let g = GaussLegendre::new(20).unwrap();
        assert!((g.nodes[19] - 0.993_128_599_185_094_9).abs() < 1e-15);
        assert!((g.weights[19] - 0.017_614_007_139_152_1).abs() < 1e-15);
    }

    #[test]
    fn tensor_box() {
        let v = integrate_box(&[(0.0, 1.0), (0.0, 2.0)], &[4, 4], |x| Complex64::new(x[0] * x[1] * x[1], 0.0)).unwrap();
        assert!((v.re - 4.0 / 3.0).abs() < 1e-13);
        let empty = integrate_box(&[], &[], |_| Complex64::new(3.0, 0.0)).unwrap();
        assert_eq!(empty.re, 3.0);
        assert!(QuadratureSpec { nodes: vec![3, 0] }.validate(2).is_err());
    }
}
