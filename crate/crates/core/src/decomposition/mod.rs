//! Divergence decompositions `q̃Lq − qL†q̃ = Σ_j ∂_j a_j` built by explicit
//! rewrite plans.

mod engine;
mod plan;
pub mod rules;

use serde::{Deserialize, Serialize};

use crate::bilinear::{divergence, BilinearExpr, TermKey};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::operator::Operator;
use crate::parse::parse_poly;
use crate::render::{Labels, Style};

pub use engine::{decompose, decompose_all, decompose_system, decompose_with};
pub use plan::{
    count_plans, enumerate_plans, enumeration_ceiling, multiset_permutations, sigma_count, term_counts, term_plans,
    DecompositionPlan, OddPlan, PlanEnumeration, TermCount, TermPlan, DEFAULT_CEILING,
};

/// `N(L)` for any operator.
pub fn count_forms(op: &Operator) -> num_bigint::BigUint {
    count_plans(&op.op_terms())
}

pub fn default_plan(op: &Operator) -> DecompositionPlan {
    DecompositionPlan::default_for(&op.op_terms())
}

/// Outcome of the divergence identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass,
    Mismatch(BilinearExpr),
}

impl Verification {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verification::Pass)
    }
}

/// Fluxes `a_1..a_n` with `Σ_j ∂_j a_j` equal to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceDecomposition {
    labels: Labels,
    fluxes: Vec<BilinearExpr>,
    target: BilinearExpr,
    verified: bool,
}

impl DivergenceDecomposition {
    /// Wrap externally supplied fluxes; the result is unverified until
    /// [`DivergenceDecomposition::into_verified`] succeeds.
    pub fn from_fluxes(labels: Labels, fluxes: Vec<BilinearExpr>, target: BilinearExpr) -> Result<Self> {
        let n = labels.axes.len();
        if fluxes.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: fluxes.len() });
        }
        for f in fluxes.iter().chain(std::iter::once(&target)) {
            if f.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
            }
        }
        Ok(Self { labels, fluxes, target, verified: false })
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn axes(&self) -> &[String] {
        &self.labels.axes
    }

    pub fn dim(&self) -> usize {
        self.fluxes.len()
    }

    pub fn fluxes(&self) -> &[BilinearExpr] {
        &self.fluxes
    }

    pub fn flux(&self, k: usize) -> &BilinearExpr {
        &self.fluxes[k]
    }

    pub fn target(&self) -> &BilinearExpr {
        &self.target
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// `Σ_j ∂_j a_j − target`, empty on success.
    pub fn verify(&self) -> Verification {
        let residual = &divergence(&self.fluxes).expect("dimensions checked") - &self.target;
        if residual.is_zero() {
            Verification::Pass
        } else {
            Verification::Mismatch(residual)
        }
    }

    pub fn into_verified(mut self) -> Result<Self> {
        match self.verify() {
            Verification::Pass => {
                self.verified = true;
                Ok(self)
            }
            Verification::Mismatch(r) => Err(Error::Unverified(self.labels.bilinear(&r, Style::Text))),
        }
    }

    /// Termwise sum of two decompositions in the same space.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::Invalid("decompositions use different labels".into()));
        }
        let fluxes = self.fluxes.iter().zip(&other.fluxes).map(|(a, b)| a + b).collect();
        let out = Self { labels: self.labels.clone(), fluxes, target: &self.target + &other.target, verified: false };
        if self.verified && other.verified {
            out.into_verified()
        } else {
            Ok(out)
        }
    }

    pub fn to_doc(&self) -> DecompositionDoc {
        DecompositionDoc {
            axes: self.labels.axes.clone(),
            params: self.labels.params.clone(),
            fields: self.labels.fields.clone(),
            verified: self.verified,
            fluxes: self
                .fluxes
                .iter()
                .enumerate()
                .map(|(k, f)| FluxDoc { axis: self.labels.axes[k].clone(), terms: term_docs(f, &self.labels.params) })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }

    pub fn to_latex(&self) -> String {
        let mut lines = Vec::new();
        for (k, f) in self.fluxes.iter().enumerate() {
            let axis = crate::poly::latex_symbol(&self.labels.axes[k]);
            lines.push(format!("a_{{{axis}}} &= {}", self.labels.bilinear(f, Style::Latex)));
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, f) in self.fluxes.iter().enumerate() {
            out.push_str(&format!("a_{} = {}\n", self.labels.axes[k], self.labels.bilinear(f, Style::Text)));
        }
        out
    }
}

/// Check a decomposition against the concomitant of `op`.
pub fn verify_divergence(d: &DivergenceDecomposition, op: &Operator) -> Result<Verification> {
    if d.dim() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: d.dim() });
    }
    let residual = &divergence(d.fluxes())? - &op.concomitant();
    Ok(if residual.is_zero() { Verification::Pass } else { Verification::Mismatch(residual) })
}

/// JSON term: `coeff · ∂^dq q_{field_q} · ∂^dqt q̃_{field_qt}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub coeff: String,
    pub dq: Vec<u32>,
    pub dqt: Vec<u32>,
    pub field_q: usize,
    pub field_qt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FluxDoc {
    pub axis: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub axes: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub fields: Vec<String>,
    #[serde(default)]
    pub verified: bool,
    pub fluxes: Vec<FluxDoc>,
}

pub fn term_docs(e: &BilinearExpr, params: &[String]) -> Vec<TermDoc> {
    e.terms()
        .map(|(k, c)| TermDoc {
            coeff: c.to_text(params),
            dq: k.left.entries().to_vec(),
            dqt: k.right.entries().to_vec(),
            field_q: k.left_field,
            field_qt: k.right_field,
        })
        .collect()
}

/// Rebuild a bilinear expression from JSON terms.
pub fn expr_from_docs(dim: usize, terms: &[TermDoc], params: &[String]) -> Result<BilinearExpr> {
    let mut out = Vec::new();
    for t in terms {
        let c = parse_poly(&t.coeff, params)?;
        out.push((
            TermKey::new(t.field_q, t.field_qt, MultiIndex::new(t.dq.clone()), MultiIndex::new(t.dqt.clone())),
            c,
        ));
    }
    BilinearExpr::from_terms(dim, out)
}

impl DecompositionDoc {
    /// Fluxes in axis order (unverified).
    pub fn fluxes(&self) -> Result<Vec<BilinearExpr>> {
        let n = self.axes.len();
        let mut out = vec![BilinearExpr::zero(n); n];
        for f in &self.fluxes {
            let k = self
                .axes
                .iter()
                .position(|a| *a == f.axis)
                .ok_or_else(|| Error::UnknownName(f.axis.clone()))?;
            out[k] = &out[k] + &expr_from_docs(n, &f.terms, &self.params)?;
        }
        Ok(out)
    }
}
