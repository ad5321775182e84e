//! Isotropic vectors from 2-spinors and the Stokes adjoint solution.

use crate::error::{Error, Result};
use crate::operator::MatrixPDO;
use crate::poly::Poly;

pub const SPINOR_VARS: [&str; 3] = ["xi1", "xi2", "xi3"];

/// `k = (ξ₁² − ξ₂², i(ξ₁² + ξ₂²), −2ξ₁ξ₂)` and a free `ξ₃`, as polynomials
/// over [`SPINOR_VARS`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinorTriple {
    pub xi: [Poly; 3],
    pub k: [Poly; 3],
}

/// Build the triple from arbitrary `ξ₁, ξ₂, ξ₃` (symbols or constants).
pub fn spinor_isotropic(xi1: Poly, xi2: Poly, xi3: Poly) -> SpinorTriple {
    let a = xi1.pow(2);
    let b = xi2.pow(2);
    let k = [&a - &b, &Poly::i() * &(&a + &b), &(&Poly::int(-2) * &xi1) * &xi2];
    SpinorTriple { xi: [xi1, xi2, xi3], k }
}

impl SpinorTriple {
    /// Fully symbolic triple in `xi1, xi2, xi3`.
    pub fn symbolic() -> Self {
        spinor_isotropic(Poly::var(0), Poly::var(1), Poly::var(2))
    }

    pub fn vars() -> Vec<String> {
        SPINOR_VARS.iter().map(|s| s.to_string()).collect()
    }

    /// `k·k`, identically zero.
    pub fn isotropy(&self) -> Poly {
        self.k.iter().fold(Poly::zero(), |acc, c| &acc + &c.pow(2))
    }

    /// `k(−ξ) − k(ξ)` componentwise.
    pub fn evenness_residual(&self) -> [Poly; 3] {
        let neg = spinor_isotropic(-&self.xi[0], -&self.xi[1], self.xi[2].clone());
        [&neg.k[0] - &self.k[0], &neg.k[1] - &self.k[1], &neg.k[2] - &self.k[2]]
    }
}

/// Rows of `L† φ̃` (weight removed) for `φ̃ = (k, ξ₃) e^{−i k·x + i ξ₃ t}`.
///
/// `m` must be a 4×4 system over axes `t` plus three spatial axes, with the
/// velocity fields first and the pressure last. The result is over
/// `params ++ xi1, xi2, xi3`; all rows vanish when the lemma holds.
pub fn verify_stokes_adjoint(t: &SpinorTriple, m: &MatrixPDO) -> Result<Vec<Poly>> {
    let space = m.space();
    if space.dim() != 4 || m.size() != 4 {
        return Err(Error::Invalid("the Stokes check needs a 4x4 system in four variables".into()));
    }
    let time = space.axis_index("t").ok_or_else(|| Error::UnknownName("t".into()))?;
    let np = space.params.len();
    let map: Vec<usize> = (0..3).map(|i| np + i).collect();
    let shift = |p: &Poly| p.remap(&map);
    let k: Vec<Poly> = t.k.iter().map(shift).collect();
    let xi3 = shift(&t.xi[2]);
    let mut w = Vec::with_capacity(4);
    let mut spatial = 0;
    for a in 0..4 {
        if a == time {
            w.push(xi3.clone());
        } else {
            w.push(-&k[spatial]);
            spatial += 1;
        }
    }
    let amp = [k[0].clone(), k[1].clone(), k[2].clone(), xi3];
    let adj = m.adjoint();
    let mut rows = Vec::with_capacity(4);
    for i in 0..4 {
        let mut r = Poly::zero();
        for (j, a) in amp.iter().enumerate() {
            r = &r + &(&adj.entry(i, j).symbol_at(&w)? * a);
        }
        rows.push(r);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussRational;
    use crate::operator::{parse_operator, Operator};

    #[test]
    fn isotropic_and_even() {
        let t = SpinorTriple::symbolic();
        assert!(t.isotropy().is_zero());
        assert!(t.evenness_residual().iter().all(Poly::is_zero));
    }

    #[test]
    fn exact_values() {
        let c = |n| Poly::constant(GaussRational::from_int(n));
        let t = spinor_isotropic(c(2), c(3), c(5));
        assert!(t.isotropy().is_zero());
        assert_eq!(t.k[2], c(-12));
    }

    #[test]
    fn stokes_rows_vanish() {
        let src = r#"{"axes":["t","x","y","z"],"params":["nu"],"fields":["u1","u2","u3","p"],"entries":[
            ["Dt - nu*(Dx^2+Dy^2+Dz^2)","0","0","Dx"],
            ["0","Dt - nu*(Dx^2+Dy^2+Dz^2)","0","Dy"],
            ["0","0","Dt - nu*(Dx^2+Dy^2+Dz^2)","Dz"],
            ["Dx","Dy","Dz","0"]]}"#;
        let Operator::Matrix(m) = parse_operator(src).unwrap() else { panic!() };
        let rows = verify_stokes_adjoint(&SpinorTriple::symbolic(), &m).unwrap();
        assert!(rows.iter().all(Poly::is_zero), "{rows:?}");
        // a non-isotropic k leaves the Laplacian term behind
        let c = |n| Poly::constant(GaussRational::from_int(n));
        let bad = SpinorTriple { xi: [c(1), c(1), Poly::var(2)], k: [c(1), c(0), c(0)] };
        assert!(verify_stokes_adjoint(&bad, &m).unwrap().iter().any(|r| !r.is_zero()));
    }
}
