//! Decomposition plans, their validation, counting and enumeration.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::OperatorTerm;

/// Default enumeration ceiling; overridden by `KFORM_ENUM_CEILING`.
pub const DEFAULT_CEILING: u64 = 1_000_000;

pub fn enumeration_ceiling() -> u64 {
    std::env::var("KFORM_ENUM_CEILING")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CEILING)
}

/// Transfer subset and exchange order for the odd axes of one term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OddPlan {
    /// Odd axes whose derivative moves to the `q̃` slot, ascending.
    pub transfer: Vec<usize>,
    /// `(transferred axis, kept axis)` pairs, applied in order.
    pub exchanges: Vec<(usize, usize)>,
}

/// Plan for a single operator term `c_α ∂^α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TermPlan {
    pub alpha: MultiIndex,
    /// Reduction path: axis `k` occurs `γ_k` times.
    pub path: Vec<usize>,
    pub odd: Option<OddPlan>,
}

/// One [`TermPlan`] per operator term, in operator term order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecompositionPlan {
    pub terms: Vec<TermPlan>,
}

impl TermPlan {
    /// Ascending path, first `m` odd axes transferred, ascending pairing.
    pub fn default_for(alpha: &MultiIndex) -> Self {
        let (gamma, _) = alpha.halve();
        let path = ascending_path(&gamma);
        let odd_axes = alpha.odd_axes();
        let odd = if odd_axes.is_empty() {
            None
        } else {
            let m = odd_axes.len() / 2;
            let transfer = odd_axes[..m].to_vec();
            let kept = &odd_axes[m..];
            let exchanges = transfer.iter().zip(kept).map(|(&j, &k)| (j, k)).collect();
            Some(OddPlan { transfer, exchanges })
        };
        TermPlan { alpha: alpha.clone(), path, odd }
    }

    /// Check consistency with `alpha`; `index` only labels the error.
    pub fn validate(&self, index: usize, alpha: &MultiIndex) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidPlan { term: index, reason });
        if &self.alpha != alpha {
            return bad(format!("plan is for {} but the term has {alpha}", self.alpha));
        }
        let (gamma, _) = alpha.halve();
        let mut counts = vec![0u32; alpha.dim()];
        for &k in &self.path {
            if k >= alpha.dim() {
                return bad(format!("path axis {k} out of range"));
            }
            counts[k] += 1;
        }
        if counts.as_slice() != gamma.entries() {
            return bad(format!("path multiset {} differs from gamma {gamma}", MultiIndex::new(counts)));
        }
        let odd_axes = alpha.odd_axes();
        match (&self.odd, odd_axes.is_empty()) {
            (None, true) => Ok(()),
            (Some(_), true) => bad("term has no odd axes but an odd plan was given".into()),
            (None, false) => bad("term has odd axes but no odd plan was given".into()),
            (Some(op), false) => {
                let m = odd_axes.len() / 2;
                if op.transfer.len() != m {
                    return bad(format!("transfer set must have {m} axes, got {}", op.transfer.len()));
                }
                if op.transfer.windows(2).any(|w| w[0] >= w[1]) {
                    return bad("transfer set must be strictly ascending".into());
                }
                if op.transfer.iter().any(|t| !odd_axes.contains(t)) {
                    return bad("transfer set contains an even axis".into());
                }
                let kept: Vec<usize> = odd_axes.iter().copied().filter(|a| !op.transfer.contains(a)).collect();
                if op.exchanges.len() != m {
                    return bad(format!("expected {m} exchanges, got {}", op.exchanges.len()));
                }
                let mut used_j = Vec::new();
                let mut used_k = Vec::new();
                for &(j, k) in &op.exchanges {
                    if !op.transfer.contains(&j) || used_j.contains(&j) {
                        return bad(format!("exchange ({j},{k}) must consume each transferred axis once"));
                    }
                    if !kept.contains(&k) || used_k.contains(&k) {
                        return bad(format!("exchange ({j},{k}) must use distinct kept axes"));
                    }
                    used_j.push(j);
                    used_k.push(k);
                }
                Ok(())
            }
        }
    }
}

impl DecompositionPlan {
    pub fn default_for(terms: &[OperatorTerm]) -> Self {
        Self { terms: terms.iter().map(|t| TermPlan::default_for(&t.alpha)).collect() }
    }

    pub fn validate(&self, terms: &[OperatorTerm]) -> Result<()> {
        if self.terms.len() != terms.len() {
            return Err(Error::InvalidPlan {
                term: self.terms.len().min(terms.len()),
                reason: format!("plan has {} terms, operator has {}", self.terms.len(), terms.len()),
            });
        }
        for (i, (p, t)) in self.terms.iter().zip(terms).enumerate() {
            p.validate(i, &t.alpha)?;
        }
        Ok(())
    }
}

fn ascending_path(gamma: &MultiIndex) -> Vec<usize> {
    let mut path = Vec::new();
    for (k, &g) in gamma.entries().iter().enumerate() {
        path.extend(std::iter::repeat_n(k, g as usize));
    }
    path
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `σ(α) = (Σγ_k)! / Πγ_k!`, the number of distinct reduction paths.
pub fn sigma_count(alpha: &MultiIndex) -> BigUint {
    let (gamma, _) = alpha.halve();
    let total = factorial(gamma.order() as u64);
    let denom = gamma.entries().iter().fold(BigUint::one(), |acc, &g| acc * factorial(g as u64));
    total / denom
}

/// Per-term counting data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermCount {
    pub row: usize,
    pub col: usize,
    pub alpha: MultiIndex,
    pub odd_count: usize,
    pub odd_factorial: BigUint,
    pub sigma: BigUint,
}

impl TermCount {
    pub fn plans(&self) -> BigUint {
        &self.odd_factorial * &self.sigma
    }
}

pub fn term_counts(terms: &[OperatorTerm]) -> Vec<TermCount> {
    terms
        .iter()
        .map(|t| {
            let o = t.alpha.odd_count();
            TermCount {
                row: t.row,
                col: t.col,
                alpha: t.alpha.clone(),
                odd_count: o,
                odd_factorial: factorial(o as u64),
                sigma: sigma_count(&t.alpha),
            }
        })
        .collect()
}

/// `N(L) = Π_α O_α! σ(α)`.
pub fn count_plans(terms: &[OperatorTerm]) -> BigUint {
    term_counts(terms).iter().fold(BigUint::one(), |acc, c| acc * c.plans())
}

/// All distinct permutations of a multiset, in lexicographic order.
pub fn multiset_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Size-`m` subsets in lexicographic order.
fn combinations(items: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, m, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, m, 0, &mut Vec::new(), &mut out);
    out
}

/// Injective length-`m` sequences drawn from `items`.
fn arrangements(items: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], m: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                cur.push(items[i]);
                go(items, m, used, cur, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(items, m, &mut vec![false; items.len()], &mut Vec::new(), &mut out);
    out
}

/// Every plan for a single term; `O_α! σ(α)` of them.
pub fn term_plans(alpha: &MultiIndex) -> Vec<TermPlan> {
    let (gamma, _) = alpha.halve();
    let paths = multiset_permutations(&ascending_path(&gamma));
    let odd_axes = alpha.odd_axes();
    let odds: Vec<Option<OddPlan>> = if odd_axes.is_empty() {
        vec![None]
    } else {
        let m = odd_axes.len() / 2;
        let mut v = Vec::new();
        for transfer in combinations(&odd_axes, m) {
            let kept: Vec<usize> = odd_axes.iter().copied().filter(|a| !transfer.contains(a)).collect();
            for js in arrangements(&transfer, m) {
                for ks in arrangements(&kept, m) {
                    let exchanges = js.iter().copied().zip(ks).collect();
                    v.push(Some(OddPlan { transfer: transfer.clone(), exchanges }));
                }
            }
        }
        v
    };
    let mut out = Vec::with_capacity(paths.len() * odds.len());
    for p in &paths {
        for o in &odds {
            out.push(TermPlan { alpha: alpha.clone(), path: p.clone(), odd: o.clone() });
        }
    }
    out
}

/// Lazy cartesian product of per-term plan lists.
#[derive(Clone, Debug)]
pub struct PlanEnumeration {
    choices: Vec<Vec<TermPlan>>,
    counter: Vec<usize>,
    done: bool,
    total: u64,
}

impl PlanEnumeration {
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for PlanEnumeration {
    type Item = DecompositionPlan;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let plan = DecompositionPlan {
            terms: self.counter.iter().zip(&self.choices).map(|(&i, c)| c[i].clone()).collect(),
        };
        // odometer, last term fastest
        let mut pos = self.counter.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.counter[pos] += 1;
            if self.counter[pos] < self.choices[pos].len() {
                break;
            }
            self.counter[pos] = 0;
        }
        Some(plan)
    }
}

/// Enumerate all plans, refusing when their number exceeds `ceiling`.
pub fn enumerate_plans(terms: &[OperatorTerm], ceiling: u64) -> Result<PlanEnumeration> {
    let count = count_plans(terms);
    if count > BigUint::from(ceiling) {
        return Err(Error::EnumerationCeiling { count: count.to_string(), ceiling });
    }
    let total: u64 = count.try_into().expect("bounded by the ceiling");
    let choices: Vec<Vec<TermPlan>> = terms.iter().map(|t| term_plans(&t.alpha)).collect();
    Ok(PlanEnumeration { counter: vec![0; choices.len()], choices, done: false, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::parse_scalar;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma_count(&mi(&[2, 2, 4])), BigUint::from(12u32));
        assert_eq!(sigma_count(&mi(&[2, 2, 5, 6])), BigUint::from(420u32));
        assert_eq!(sigma_count(&mi(&[1, 1])), BigUint::from(1u32));
    }

    #[test]
    fn default_plans() {
        assert_eq!(TermPlan::default_for(&mi(&[2, 0])).path, vec![0]);
        assert_eq!(TermPlan::default_for(&mi(&[2, 2, 2])).path, vec![0, 1, 2]);
        let p = TermPlan::default_for(&mi(&[1, 1]));
        assert!(p.path.is_empty());
        assert_eq!(p.odd, Some(OddPlan { transfer: vec![0], exchanges: vec![(0, 1)] }));
    }

    #[test]
    fn counts() {
        let ex2 = parse_scalar("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2").unwrap();
        assert_eq!(count_plans(&ex2.op_terms()), BigUint::from(12u32));
        let bih = parse_scalar("axes x,y,z; Dx^4 + Dy^4 + Dz^4 + 2*Dx^2*Dy^2 + 2*Dy^2*Dz^2 + 2*Dz^2*Dx^2").unwrap();
        assert_eq!(count_plans(&bih.op_terms()), BigUint::from(8u32));
        let wave = parse_scalar("axes x,t; Dt^2 - Dx^2").unwrap();
        assert_eq!(count_plans(&wave.op_terms()), BigUint::from(1u32));
    }

    #[test]
    fn term_plan_counts_match_formula() {
        for v in [[1, 1, 1, 0], [1, 1, 1, 1], [3, 1, 2, 1], [2, 3, 1, 0], [5, 0, 0, 1]] {
            let a = mi(&v);
            let plans = term_plans(&a);
            let n: BigUint = factorial(a.odd_count() as u64) * sigma_count(&a);
            assert_eq!(BigUint::from(plans.len()), n, "{a}");
            let mut dedup = plans.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), plans.len());
            for p in &plans {
                p.validate(0, &a).unwrap();
            }
        }
    }

    #[test]
    fn ceiling_refuses() {
        let op = parse_scalar("axes x,y,z,w; Dx^3*Dy^3*Dz^3*Dw^3 + Dx^2*Dy^2*Dz^2*Dw^2").unwrap();
        let err = enumerate_plans(&op.op_terms(), 10).unwrap_err();
        assert!(matches!(err, Error::EnumerationCeiling { .. }));
    }

    #[test]
    fn invalid_plans_rejected() {
        let a = mi(&[2, 1, 1]);
        let mut p = TermPlan::default_for(&a);
        p.validate(0, &a).unwrap();
        p.path = vec![1];
        assert!(p.validate(0, &a).is_err());
        let mut p = TermPlan::default_for(&a);
        p.odd = Some(OddPlan { transfer: vec![1], exchanges: vec![(1, 1)] });
        assert!(p.validate(0, &a).is_err());
        let mut p = TermPlan::default_for(&a);
        p.odd = None;
        assert!(p.validate(0, &a).is_err());
    }
}
