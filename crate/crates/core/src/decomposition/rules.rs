//! Single rewrite steps. Every function checks its defining identity against
//! the product-rule oracle before returning.

use crate::bilinear::{pairing, partial, BilinearExpr, Pairing, TermKey};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::Poly;

/// Field slots of a pairing: `q_left` and `q̃_right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Fields {
    pub q: usize,
    pub qt: usize,
}

fn term(a: &MultiIndex, b: &MultiIndex, f: Fields) -> BilinearExpr {
    BilinearExpr::product(Poly::one(), TermKey::new(f.q, f.qt, a.clone(), b.clone()))
}

fn check(stage: &str, lhs: &BilinearExpr, rhs: &BilinearExpr) -> Result<()> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(Error::IdentityCheck { stage: stage.to_string(), residual: (lhs - rhs).to_string() })
    }
}

/// One peel along axis `k`:
/// `P(α,β) = ∂_k P(α−e_k, β) − P(α−e_k, β+e_k)`.
/// Returns `(flux, remainder)` with `∂_k flux + remainder = P(α,β)`.
pub fn reduce_step(
    kind: Pairing,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    k: usize,
    f: Fields,
) -> Result<(BilinearExpr, BilinearExpr)> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: beta.dim() });
    }
    if k >= alpha.dim() {
        return Err(Error::AxisOutOfRange { axis: k, dim: alpha.dim() });
    }
    let lowered = alpha
        .minus_unit(k)
        .ok_or_else(|| Error::InvalidRewrite(format!("left index {alpha} has no derivative on axis {k}")))?;
    let flux = pairing(kind, &lowered, beta, f.q, f.qt)?;
    let remainder = -pairing(kind, &lowered, &beta.plus_unit(k), f.q, f.qt)?;
    let original = pairing(kind, alpha, beta, f.q, f.qt)?;
    check("reduce_step", &(&partial(&flux, k)? + &remainder), &original)?;
    Ok((flux, remainder))
}

/// `{β, β+e_k} = ∂_k(∂^β q · ∂^β q̃)`; accepts either orientation.
pub fn brace_collapse(left: &MultiIndex, right: &MultiIndex, k: usize, f: Fields) -> Result<BilinearExpr> {
    if left.dim() != right.dim() {
        return Err(Error::DimensionMismatch { expected: left.dim(), found: right.dim() });
    }
    if k >= left.dim() {
        return Err(Error::AxisOutOfRange { axis: k, dim: left.dim() });
    }
    let beta = if right.minus_unit(k).as_ref() == Some(left) {
        left
    } else if left.minus_unit(k).as_ref() == Some(right) {
        right
    } else {
        return Err(Error::InvalidRewrite(format!("{{{left}, {right}}} is not of the shape {{b, b+e_{k}}}")));
    };
    let flux = term(beta, beta, f);
    let original = pairing(Pairing::Brace, left, right, f.q, f.qt)?;
    check("brace_collapse", &partial(&flux, k)?, &original)?;
    Ok(flux)
}

/// Generalized collapse of a brace whose two products differ by moving one
/// derivative on axis `l`:
/// `∂^{B+e_l} q ∂^{A−e_l} q̃ + ∂^B q ∂^A q̃ = ∂_l(∂^B q ∂^{A−e_l} q̃)`.
pub fn product_collapse(a: &MultiIndex, b: &MultiIndex, l: usize, f: Fields) -> Result<BilinearExpr> {
    let lowered = a
        .minus_unit(l)
        .ok_or_else(|| Error::InvalidRewrite(format!("{a} has no derivative on axis {l}")))?;
    let flux = term(b, &lowered, f);
    let original = &term(&b.plus_unit(l), &lowered, f) + &term(b, a, f);
    check("product_collapse", &partial(&flux, l)?, &original)?;
    Ok(flux)
}

/// Result of moving `e_k` from the `q` slot to the `q̃` slot and `e_j` back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exchange {
    pub left: MultiIndex,
    pub right: MultiIndex,
    /// Flux on axis `k`.
    pub flux_k: BilinearExpr,
    /// Flux on axis `j` (sign included).
    pub flux_j: BilinearExpr,
}

/// `∂^A q ∂^B q̃ = ∂^{A−e_k+e_j} q ∂^{B−e_j+e_k} q̃ + ∂_k(∂^{A−e_k} q ∂^B q̃)
///   − ∂_j(∂^{A−e_k} q ∂^{B−e_j+e_k} q̃)`.
pub fn exchange_step(a: &MultiIndex, b: &MultiIndex, k: usize, j: usize, f: Fields) -> Result<Exchange> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    for ax in [k, j] {
        if ax >= a.dim() {
            return Err(Error::AxisOutOfRange { axis: ax, dim: a.dim() });
        }
    }
    let a_k = a
        .minus_unit(k)
        .ok_or_else(|| Error::InvalidRewrite(format!("q slot {a} has no derivative on axis {k}")))?;
    let b_j = b
        .minus_unit(j)
        .ok_or_else(|| Error::InvalidRewrite(format!("q~ slot {b} has no derivative on axis {j}")))?;
    let left = a_k.plus_unit(j);
    let right = b_j.plus_unit(k);
    let flux_k = term(&a_k, b, f);
    let flux_j = -term(&a_k, &right, f);
    let rebuilt = &(&term(&left, &right, f) + &partial(&flux_k, k)?) + &partial(&flux_j, j)?;
    check("exchange_step", &rebuilt, &term(a, b, f))?;
    Ok(Exchange { left, right, flux_k, flux_j })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{brace, bracket};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    const F: Fields = Fields { q: 0, qt: 0 };

    #[test]
    fn sextic_first_step() {
        let (flux, rem) = reduce_step(Pairing::Bracket, &mi(&[2, 2, 2]), &mi(&[0, 0, 0]), 0, F).unwrap();
        assert_eq!(flux, bracket(&mi(&[1, 2, 2]), &mi(&[0, 0, 0]), 0, 0).unwrap());
        assert_eq!(rem, -bracket(&mi(&[1, 2, 2]), &mi(&[1, 0, 0]), 0, 0).unwrap());
    }

    #[test]
    fn bracket_vanishes_after_full_reduction() {
        let (_, rem) = reduce_step(Pairing::Bracket, &mi(&[2, 0]), &mi(&[0, 0]), 0, F).unwrap();
        assert!(rem.is_zero());
    }

    #[test]
    fn brace_reduction() {
        let (flux, rem) = reduce_step(Pairing::Brace, &mi(&[2, 0]), &mi(&[0, 0]), 0, F).unwrap();
        assert_eq!(flux, brace(&mi(&[1, 0]), &mi(&[0, 0]), 0, 0).unwrap());
        assert_eq!(rem, -brace(&mi(&[1, 0]), &mi(&[1, 0]), 0, 0).unwrap());
    }

    #[test]
    fn reduce_needs_a_derivative() {
        assert!(matches!(
            reduce_step(Pairing::Bracket, &mi(&[0, 2]), &mi(&[0, 0]), 0, F),
            Err(Error::InvalidRewrite(_))
        ));
    }

    #[test]
    fn collapse_examples() {
        let flux = brace_collapse(&mi(&[0, 0]), &mi(&[1, 0]), 0, F).unwrap();
        assert_eq!(flux, term(&mi(&[0, 0]), &mi(&[0, 0]), F));
        let flux = brace_collapse(&mi(&[1, 0]), &mi(&[1, 1]), 1, F).unwrap();
        assert_eq!(flux, term(&mi(&[1, 0]), &mi(&[1, 0]), F));
        let mirror = brace_collapse(&mi(&[1, 1]), &mi(&[1, 0]), 1, F).unwrap();
        assert_eq!(mirror, flux);
        assert!(brace_collapse(&mi(&[0, 0]), &mi(&[2, 0]), 0, F).is_err());
    }

    #[test]
    fn smallest_exchange() {
        let ex = exchange_step(&mi(&[1, 0]), &mi(&[0, 1]), 0, 1, F).unwrap();
        assert_eq!((ex.left.clone(), ex.right.clone()), (mi(&[0, 1]), mi(&[1, 0])));
        assert_eq!(ex.flux_k, term(&mi(&[0, 0]), &mi(&[0, 1]), F));
        assert_eq!(ex.flux_j, -term(&mi(&[0, 0]), &mi(&[1, 0]), F));
    }

    #[test]
    fn degenerate_exchange() {
        let ex = exchange_step(&mi(&[1, 1]), &mi(&[1, 0]), 0, 0, F).unwrap();
        assert_eq!((ex.left, ex.right), (mi(&[1, 1]), mi(&[1, 0])));
        assert!((&ex.flux_k + &ex.flux_j).is_zero());
    }
}
