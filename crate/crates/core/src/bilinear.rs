//! Bilinear differential expressions `Σ c · ∂^μ q_i · ∂^ν q̃_j`.
//!
//! A [`BilinearExpr`] is kept in canonical form at all times: a sorted map
//! keyed by `(q field, q̃ field, μ, ν)` with no zero coefficients. Equality of
//! two expressions is therefore an exact identity test, and [`partial`] (the
//! product rule) is the oracle every rewrite in the engine is checked against.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::poly::{Coeff, Poly};

/// Key of a single product `∂^left q_{left_field} · ∂^right q̃_{right_field}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub left_field: usize,
    pub right_field: usize,
    pub left: MultiIndex,
    pub right: MultiIndex,
}

impl TermKey {
    pub fn new(left_field: usize, right_field: usize, left: MultiIndex, right: MultiIndex) -> Self {
        Self { left_field, right_field, left, right }
    }

    pub fn scalar(left: MultiIndex, right: MultiIndex) -> Self {
        Self::new(0, 0, left, right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTerm {
    pub coeff: Coeff,
    pub key: TermKey,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearExpr {
    dim: usize,
    terms: BTreeMap<TermKey, Coeff>,
}

impl BilinearExpr {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    /// Canonicalize an arbitrary term sequence (merging duplicates, dropping zeros).
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (TermKey, Coeff)>) -> Result<Self> {
        let mut e = Self::zero(dim);
        for (k, c) in terms {
            e.check_key(&k)?;
            e.add_term(k, c);
        }
        Ok(e)
    }

    /// `c · ∂^left q · ∂^right q̃` with explicit fields.
    pub fn product(coeff: Coeff, key: TermKey) -> Self {
        let mut e = Self::zero(key.left.dim());
        e.add_term(key, coeff);
        e
    }

    fn check_key(&self, k: &TermKey) -> Result<()> {
        for d in [k.left.dim(), k.right.dim()] {
            if d != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, found: d });
            }
        }
        Ok(())
    }

    pub fn add_term(&mut self, key: TermKey, coeff: Coeff) {
        debug_assert_eq!(key.left.dim(), self.dim);
        debug_assert_eq!(key.right.dim(), self.dim);
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn to_terms(&self) -> Vec<BilinearTerm> {
        self.terms
            .iter()
            .map(|(k, c)| BilinearTerm { coeff: c.clone(), key: k.clone() })
            .collect()
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(self + other)
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    /// Exchange the roles of `q` and `q̃` in every term.
    pub fn swap_roles(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(
                TermKey::new(k.right_field, k.left_field, k.right.clone(), k.left.clone()),
                c.clone(),
            );
        }
        out
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> Self {
        let mut out = Self::zero(self.dim);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c));
        }
        out
    }
}

impl Add for &BilinearExpr {
    type Output = BilinearExpr;
    fn add(self, o: &BilinearExpr) -> BilinearExpr {
        assert_eq!(self.dim, o.dim, "mixing dimensions");
        let mut out = self.clone();
        out.add_assign(o);
        out
    }
}

impl Sub for &BilinearExpr {
    type Output = BilinearExpr;
    fn sub(self, o: &BilinearExpr) -> BilinearExpr {
        self + &(-o)
    }
}

impl Neg for &BilinearExpr {
    type Output = BilinearExpr;
    fn neg(self) -> BilinearExpr {
        BilinearExpr {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Add for BilinearExpr {
    type Output = BilinearExpr;
    fn add(self, o: BilinearExpr) -> BilinearExpr {
        &self + &o
    }
}

impl Sub for BilinearExpr {
    type Output = BilinearExpr;
    fn sub(self, o: BilinearExpr) -> BilinearExpr {
        &self - &o
    }
}

impl Neg for BilinearExpr {
    type Output = BilinearExpr;
    fn neg(self) -> BilinearExpr {
        -&self
    }
}

/// Symmetric (`+1`) or antisymmetric (`-1`) pairing of two multi-indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pairing {
    /// `[α, β] = ∂^β q̃ ∂^α q − ∂^β q ∂^α q̃`
    Bracket,
    /// `{α, β} = ∂^β q̃ ∂^α q + ∂^β q ∂^α q̃`
    Brace,
}

impl Pairing {
    /// Pairing produced by `c_α ∂^α`: odd orders give braces, even give brackets.
    pub fn for_order(order: u32) -> Self {
        if order % 2 == 1 {
            Pairing::Brace
        } else {
            Pairing::Bracket
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Pairing::Bracket => -1,
            Pairing::Brace => 1,
        }
    }
}

/// `∂^α q_{lf} ∂^β q̃_{rf} ± ∂^β q_{lf} ∂^α q̃_{rf}` in canonical form.
pub fn pairing(
    kind: Pairing,
    alpha: &MultiIndex,
    beta: &MultiIndex,
    left_field: usize,
    right_field: usize,
) -> Result<BilinearExpr> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: beta.dim() });
    }
    let mut e = BilinearExpr::zero(alpha.dim());
    e.add_term(
        TermKey::new(left_field, right_field, alpha.clone(), beta.clone()),
        Poly::one(),
    );
    e.add_term(
        TermKey::new(left_field, right_field, beta.clone(), alpha.clone()),
        Poly::int(kind.sign()),
    );
    Ok(e)
}

/// The antisymmetric object `[α, β]`.
pub fn bracket(alpha: &MultiIndex, beta: &MultiIndex, left_field: usize, right_field: usize) -> Result<BilinearExpr> {
    pairing(Pairing::Bracket, alpha, beta, left_field, right_field)
}

/// The symmetric object `{α, β}`.
pub fn brace(alpha: &MultiIndex, beta: &MultiIndex, left_field: usize, right_field: usize) -> Result<BilinearExpr> {
    pairing(Pairing::Brace, alpha, beta, left_field, right_field)
}

/// `∂_k` of a bilinear expression by the product rule.
pub fn partial(expr: &BilinearExpr, k: usize) -> Result<BilinearExpr> {
    if k >= expr.dim {
        return Err(Error::AxisOutOfRange { axis: k, dim: expr.dim });
    }
    let mut out = BilinearExpr::zero(expr.dim);
    for (key, c) in &expr.terms {
        out.add_term(
            TermKey::new(key.left_field, key.right_field, key.left.plus_unit(k), key.right.clone()),
            c.clone(),
        );
        out.add_term(
            TermKey::new(key.left_field, key.right_field, key.left.clone(), key.right.plus_unit(k)),
            c.clone(),
        );
    }
    Ok(out)
}

/// `Σ_j ∂_j a_j`.
pub fn divergence(fluxes: &[BilinearExpr]) -> Result<BilinearExpr> {
    let dim = fluxes.first().map_or(0, BilinearExpr::dim);
    if fluxes.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: fluxes.len() });
    }
    let mut out = BilinearExpr::zero(dim);
    for (j, a) in fluxes.iter().enumerate() {
        if a.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: a.dim() });
        }
        out.add_assign(&partial(a, j)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn key(l: &[u32], r: &[u32]) -> TermKey {
        TermKey::scalar(mi(l), mi(r))
    }

    #[test]
    fn bracket_of_second_derivative() {
        // [(2,0),(0,0)] = q̃ q_xx − q q̃_xx
        let b = bracket(&mi(&[2, 0]), &mi(&[0, 0]), 0, 0).unwrap();
        let expected = BilinearExpr::from_terms(
            2,
            [(key(&[2, 0], &[0, 0]), Poly::one()), (key(&[0, 0], &[2, 0]), Poly::int(-1))],
        )
        .unwrap();
        assert_eq!(b, expected);
    }

    #[test]
    fn bracket_of_equal_indices_vanishes() {
        assert!(bracket(&mi(&[1, 3]), &mi(&[1, 3]), 0, 0).unwrap().is_zero());
    }

    #[test]
    fn bracket_mixed_first_derivatives() {
        // [(1,0),(0,1)] = q̃_y q_x − q_y q̃_x
        let b = bracket(&mi(&[1, 0]), &mi(&[0, 1]), 0, 0).unwrap();
        assert_eq!(b.coeff(&key(&[1, 0], &[0, 1])), Poly::one());
        assert_eq!(b.coeff(&key(&[0, 1], &[1, 0])), Poly::int(-1));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn brace_examples() {
        let b = brace(&mi(&[1, 0, 0]), &mi(&[0, 0, 0]), 0, 0).unwrap();
        assert_eq!(b.coeff(&key(&[1, 0, 0], &[0, 0, 0])), Poly::one());
        assert_eq!(b.coeff(&key(&[0, 0, 0], &[1, 0, 0])), Poly::one());

        let d = brace(&mi(&[1, 1]), &mi(&[1, 1]), 0, 0).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.coeff(&key(&[1, 1], &[1, 1])), Poly::int(2));

        assert_eq!(
            brace(&mi(&[0, 1]), &mi(&[1, 0]), 0, 0).unwrap(),
            brace(&mi(&[1, 0]), &mi(&[0, 1]), 0, 0).unwrap()
        );
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(matches!(
            bracket(&mi(&[1, 0]), &mi(&[0, 0, 0]), 0, 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn product_rule() {
        let qqt = BilinearExpr::product(Poly::one(), key(&[0, 0], &[0, 0]));
        let d = partial(&qqt, 0).unwrap();
        assert_eq!(d.coeff(&key(&[1, 0], &[0, 0])), Poly::one());
        assert_eq!(d.coeff(&key(&[0, 0], &[1, 0])), Poly::one());
        assert!(partial(&qqt, 2).is_err());

        // ∂_k{0,0} = 2(q_k q̃ + q q̃_k) = 2 {e_k, 0}
        let b00 = brace(&mi(&[0, 0]), &mi(&[0, 0]), 0, 0).unwrap();
        let lhs = partial(&b00, 1).unwrap();
        let rhs = brace(&mi(&[0, 1]), &mi(&[0, 0]), 0, 0).unwrap().scale(&Poly::int(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cross_terms_cancel_for_bracket_derivative() {
        // ∂_x [(1,0),0] = q̃ q_xx − q q̃_xx; the q_x q̃_x products cancel.
        let b = bracket(&mi(&[1, 0]), &mi(&[0, 0]), 0, 0).unwrap();
        let d = partial(&b, 0).unwrap();
        assert_eq!(d, bracket(&mi(&[2, 0]), &mi(&[0, 0]), 0, 0).unwrap());
    }
}
