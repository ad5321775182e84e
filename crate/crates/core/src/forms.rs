//! Fundamental (n−1)-forms `η = Σ_j (−1)^{j+1} a_j dx¹∧…∧\widehat{dxʲ}∧…∧dxⁿ`.

use serde::{Deserialize, Serialize};

use crate::bilinear::{divergence, BilinearExpr};
use crate::decomposition::{term_docs, DivergenceDecomposition, TermDoc};
use crate::error::{Error, Result};
use crate::poly::latex_symbol;
use crate::render::{Labels, Style};

pub const CONVENTION: &str = "eta = sum_j (-1)^(j+1) a_j dx^1 ^ ... ^ (omit dx^j) ^ ... ^ dx^n";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalForm {
    labels: Labels,
    fluxes: Vec<BilinearExpr>,
}

/// Assemble the form of a verified decomposition.
pub fn assemble(d: &DivergenceDecomposition) -> Result<FundamentalForm> {
    if !d.is_verified() {
        return Err(Error::Unverified("decomposition has not passed verify_divergence".into()));
    }
    Ok(FundamentalForm { labels: d.labels().clone(), fluxes: d.fluxes().to_vec() })
}

/// `dη = (Σ_j ∂_j a_j) dx¹∧…∧dxⁿ`; returns the coefficient.
pub fn exterior_derivative(f: &FundamentalForm) -> BilinearExpr {
    divergence(&f.fluxes).expect("form dimensions are consistent")
}

/// Two forms are equivalent when their flux difference is identically
/// divergence-free.
pub fn forms_equivalent(f: &FundamentalForm, g: &FundamentalForm) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let diff: Vec<BilinearExpr> = f.fluxes.iter().zip(&g.fluxes).map(|(a, b)| a - b).collect();
    Ok(divergence(&diff)?.is_zero())
}

/// One summand `sign · a_j · dx^{basis}` of the form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub omitted: usize,
    pub sign: i32,
    pub basis: Vec<usize>,
    pub flux: BilinearExpr,
}

impl FundamentalForm {
    /// Build directly from fluxes (used for hand-entered forms).
    pub fn from_fluxes(labels: Labels, fluxes: Vec<BilinearExpr>) -> Result<Self> {
        let n = labels.axes.len();
        if fluxes.len() != n || fluxes.iter().any(|f| f.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: fluxes.len() });
        }
        Ok(Self { labels, fluxes })
    }

    pub fn dim(&self) -> usize {
        self.fluxes.len()
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn fluxes(&self) -> &[BilinearExpr] {
        &self.fluxes
    }

    pub fn components(&self) -> Vec<Component> {
        let n = self.dim();
        (0..n)
            .map(|j| Component {
                omitted: j,
                sign: if j % 2 == 0 { 1 } else { -1 },
                basis: (0..n).filter(|&k| k != j).collect(),
                flux: self.fluxes[j].clone(),
            })
            .collect()
    }

    /// Signed coefficient of the basis element with `dx^{omitted}` removed.
    pub fn coefficient(&self, omitted: usize) -> BilinearExpr {
        if omitted.is_multiple_of(2) {
            self.fluxes[omitted].clone()
        } else {
            -&self.fluxes[omitted]
        }
    }

    pub fn to_latex(&self) -> String {
        let n = self.dim();
        let mut parts = Vec::new();
        for c in self.components() {
            if c.flux.is_zero() {
                continue;
            }
            let wedge: Vec<String> = (0..n)
                .map(|k| {
                    let d = format!("d{}", latex_symbol(&self.labels.axes[k]));
                    if k == c.omitted {
                        format!("\\widehat{{{d}}}")
                    } else {
                        d
                    }
                })
                .collect();
            let body = self.labels.bilinear(&c.flux, Style::Latex);
            let sign = if c.sign > 0 { "+" } else { "-" };
            parts.push(format!("{sign} \\left({body}\\right) {}", wedge.join(" \\wedge ")));
        }
        if parts.is_empty() {
            return "\\eta = 0".into();
        }
        let joined = parts.join(" ");
        let joined = joined.strip_prefix("+ ").map(str::to_string).unwrap_or(joined);
        format!("\\eta = {joined}")
    }

    pub fn to_doc(&self) -> FormDoc {
        FormDoc {
            axes: self.labels.axes.clone(),
            params: self.labels.params.clone(),
            fields: self.labels.fields.clone(),
            convention: CONVENTION.to_string(),
            components: self
                .components()
                .into_iter()
                .map(|c| ComponentDoc {
                    axis: self.labels.axes[c.omitted].clone(),
                    sign: c.sign,
                    basis: c.basis.iter().map(|&k| self.labels.axes[k].clone()).collect(),
                    terms: term_docs(&c.flux, &self.labels.params),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    /// Axis whose flux this is (and whose differential is omitted).
    pub axis: String,
    pub sign: i32,
    pub basis: Vec<String>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDoc {
    pub axes: Vec<String>,
    pub params: Vec<String>,
    pub fields: Vec<String>,
    pub convention: String,
    pub components: Vec<ComponentDoc>,
}
