use std::fmt;

use serde::{Deserialize, Serialize};

/// Derivative counts per axis: `α ∈ ℤⁿ₊` indexing `∂^α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit vector `e_k`.
    pub fn unit(dim: usize, k: usize) -> Self {
        let mut v = vec![0; dim];
        v[k] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0[k]
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn plus_unit(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v[k] += 1;
        MultiIndex(v)
    }

    pub fn minus_unit(&self, k: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[k] = v[k].checked_sub(1)?;
        Some(MultiIndex(v))
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Split `α = 2γ + δ` with `δ ∈ {0,1}ⁿ`.
    pub fn halve(&self) -> (Self, Self) {
        let gamma = self.0.iter().map(|a| a / 2).collect();
        let delta = self.0.iter().map(|a| a % 2).collect();
        (MultiIndex(gamma), MultiIndex(delta))
    }

    /// Axes with an odd component, ascending.
    pub fn odd_axes(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.0[k] % 2 == 1).collect()
    }

    /// `O_α`, the number of odd components.
    pub fn odd_count(&self) -> usize {
        self.0.iter().filter(|a| *a % 2 == 1).count()
    }

    /// Subscript rendering such as `xxy` (or `x,x,y` for multi-letter axes).
    pub fn subscript(&self, axes: &[String]) -> String {
        let multi = axes.iter().any(|a| a.chars().count() > 1);
        let mut parts = Vec::new();
        for (k, &a) in self.0.iter().enumerate() {
            for _ in 0..a {
                parts.push(axes[k].clone());
            }
        }
        parts.join(if multi { "," } else { "" })
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halving_matches_parity() {
        let a = MultiIndex::new(vec![2, 2, 5, 6]);
        let (g, d) = a.halve();
        assert_eq!(g, MultiIndex::new(vec![1, 1, 2, 3]));
        assert_eq!(d, MultiIndex::new(vec![0, 0, 1, 0]));
        assert_eq!(a.odd_axes(), vec![2]);
        assert_eq!(a.order(), 15);
    }

    #[test]
    fn unit_steps() {
        let a = MultiIndex::new(vec![1, 0]);
        assert_eq!(a.minus_unit(0), Some(MultiIndex::zero(2)));
        assert_eq!(a.minus_unit(1), None);
        assert_eq!(a.plus_unit(1), MultiIndex::new(vec![1, 1]));
    }

    #[test]
    fn subscripts() {
        let axes = vec!["x".to_string(), "y".to_string()];
        assert_eq!(MultiIndex::new(vec![1, 2]).subscript(&axes), "xyy");
    }
}
