//! Exponential adjoint solutions `q̃_g = A_g · exp(i Σ_j w_j x^j)` substituted
//! into fundamental forms.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::FundamentalForm;
use crate::multi_index::MultiIndex;
use crate::operator::{Operator, Space};
use crate::parse::{parse_assignments, Ast};
use crate::poly::{latex_symbol, Poly};
use crate::render::{field_factor, parse_factored, signed_sum, Labels, Style};

/// `Σ c · ∂^μ q_field`, coefficients over a shared variable table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearExpr {
    dim: usize,
    terms: BTreeMap<(usize, MultiIndex), Poly>,
}

impl LinearExpr {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, field: usize, deriv: MultiIndex, c: Poly) {
        debug_assert_eq!(deriv.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        let key = (field, deriv);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, MultiIndex), &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, field: usize, deriv: &MultiIndex) -> Poly {
        self.terms.get(&(field, deriv.clone())).cloned().unwrap_or_default()
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

    /// `∂_k` acting on `q` only.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for ((f, d), c) in &self.terms {
            out.add_term(*f, d.plus_unit(k), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Poly) -> Self {
        let mut out = Self::zero(self.dim);
        for ((f, d), v) in &self.terms {
            out.add_term(*f, d.clone(), v * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = Self::zero(self.dim);
        for ((fi, d), v) in &self.terms {
            out.add_term(*fi, d.clone(), f(v));
        }
        out
    }

    pub fn render(&self, labels: &Labels, vars: &[String], style: Style) -> String {
        let items: Vec<(Poly, String)> = self
            .terms
            .iter()
            .map(|((f, d), c)| (c.clone(), field_factor(&labels.field(*f), false, d, &labels.axes, style)))
            .collect();
        signed_sum(&items, vars, style)
    }

    /// Parse text such as `q_xxx + i*s1^3*q`; identifiers are either
    /// coefficient variables from `vars` or field factors.
    pub fn parse(text: &str, vars: &[String], labels: &Labels) -> Result<Self> {
        let mut out = Self::zero(labels.axes.len());
        for t in parse_factored(text, vars, labels)? {
            match t.factors.as_slice() {
                [(f, false, d)] => out.add_term(*f, d.clone(), t.coeff),
                _ => return Err(Error::Invalid(format!("each product needs exactly one field factor in `{text}`"))),
            }
        }
        Ok(out)
    }
}

impl Add for &LinearExpr {
    type Output = LinearExpr;

    fn add(self, rhs: &LinearExpr) -> LinearExpr {
        let mut out = self.clone();
        for ((f, d), c) in &rhs.terms {
            out.add_term(*f, d.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LinearExpr {
    type Output = LinearExpr;

    fn sub(self, rhs: &LinearExpr) -> LinearExpr {
        self + &(-rhs)
    }
}

impl Neg for &LinearExpr {
    type Output = LinearExpr;

    fn neg(self) -> LinearExpr {
        self.map_coeffs(|c| -c)
    }
}

/// Sign of the exponent in `exp(± i s·x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentSign {
    Plus,
    Minus,
}

/// `q̃_g = A_g exp(i Σ_j w_j x^j)` with `w_j`, `A_g` polynomials over
/// `params ++ names`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentialAnsatz {
    pub names: Vec<String>,
    pub weight: Vec<Poly>,
    pub amplitudes: Vec<Poly>,
}

impl ExponentialAnsatz {
    /// `w_j = ± s_j` with `s_j` named `s_<axis>`, unit amplitudes.
    pub fn standard(space: &Space, fields: usize, sign: ExponentSign) -> Self {
        let p = space.params.len();
        let sgn = match sign {
            ExponentSign::Plus => Poly::one(),
            ExponentSign::Minus => Poly::int(-1),
        };
        Self {
            names: space.spectral_names(),
            weight: (0..space.dim()).map(|k| &sgn * &Poly::var(p + k)).collect(),
            amplitudes: vec![Poly::one(); fields],
        }
    }

    /// Build from explicit names and polynomials, checking for collisions.
    pub fn new(space: &Space, names: Vec<String>, weight: Vec<Poly>, amplitudes: Vec<Poly>) -> Result<Self> {
        check_names(space, &names)?;
        if weight.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: weight.len() });
        }
        Ok(Self { names, weight, amplitudes })
    }

    /// Parse `s_x=k, s_t=-k` (keys `s_<axis>` or `<axis>`; optional
    /// `amp_<field>=...`). Unassigned axes keep their own `s_<axis>` variable.
    pub fn parse(space: &Space, fields: &[String], src: &str) -> Result<Self> {
        let assigns = parse_assignments(src)?;
        let mut weight_ast: Vec<Option<&Ast>> = vec![None; space.dim()];
        let mut amp_ast: Vec<Option<&Ast>> = vec![None; fields.len()];
        for (key, ast) in &assigns {
            let axis = key.strip_prefix("s_").unwrap_or(key);
            if let Some(k) = space.axis_index(axis) {
                weight_ast[k] = Some(ast);
            } else if let Some(f) = key.strip_prefix("amp_").and_then(|f| fields.iter().position(|x| x == f)) {
                amp_ast[f] = Some(ast);
            } else {
                return Err(Error::UnknownName(key.clone()));
            }
        }
        let mut names: Vec<String> = Vec::new();
        for (k, w) in weight_ast.iter().enumerate() {
            let ids = match w {
                Some(ast) => ast.identifiers(),
                None => vec![format!("s_{}", space.axes[k])],
            };
            for id in ids {
                if id != "i" && !space.params.contains(&id) && !names.contains(&id) {
                    names.push(id);
                }
            }
        }
        for a in amp_ast.iter().flatten() {
            for id in a.identifiers() {
                if id != "i" && !space.params.contains(&id) && !names.contains(&id) {
                    names.push(id);
                }
            }
        }
        check_names(space, &names)?;
        let vars: Vec<String> = space.params.iter().chain(&names).cloned().collect();
        let resolve = |n: &str| vars.iter().position(|v| v == n);
        let mut weight = Vec::new();
        for (k, w) in weight_ast.iter().enumerate() {
            weight.push(match w {
                Some(ast) => ast.to_poly(src, &resolve)?,
                None => Poly::var(resolve(&format!("s_{}", space.axes[k])).expect("registered above")),
            });
        }
        let mut amplitudes = Vec::new();
        for a in &amp_ast {
            amplitudes.push(match a {
                Some(ast) => ast.to_poly(src, &resolve)?,
                None => Poly::one(),
            });
        }
        Ok(Self { names, weight, amplitudes })
    }

    /// Full coefficient variable table `params ++ names`.
    pub fn vars(&self, space: &Space) -> Vec<String> {
        space.params.iter().chain(&self.names).cloned().collect()
    }

    /// `∂^ν q̃_g ↦ A_g Π_k (i w_k)^{ν_k}` (weight factored out).
    pub fn derivative_factor(&self, field: usize, nu: &MultiIndex) -> Poly {
        let mut c = self.amplitudes.get(field).cloned().unwrap_or_else(Poly::one);
        for (k, &e) in nu.entries().iter().enumerate() {
            if e > 0 {
                c = &c * &(&Poly::i() * &self.weight[k]).pow(e);
            }
        }
        c
    }
}

fn check_names(space: &Space, names: &[String]) -> Result<()> {
    for n in names {
        if space.axes.contains(n) || space.params.contains(n) || n == "i" || space.axes.iter().any(|a| format!("D{a}") == *n)
        {
            return Err(Error::NameCollision(n.clone()));
        }
    }
    Ok(())
}

/// Fluxes `F_j` with the common weight `exp(i Σ w_j x^j)` factored out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutedForm {
    labels: Labels,
    vars: Vec<String>,
    weight: Vec<Poly>,
    fluxes: Vec<LinearExpr>,
}

/// Replace every `∂^ν q̃` in a verified form by the exponential ansatz.
pub fn substitute_exponential(f: &FundamentalForm, ansatz: &ExponentialAnsatz) -> Result<SubstitutedForm> {
    let labels = f.labels().clone();
    let space = Space { axes: labels.axes.clone(), params: labels.params.clone() };
    check_names(&space, &ansatz.names)?;
    if ansatz.weight.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: ansatz.weight.len() });
    }
    let n = f.dim();
    let fluxes = f
        .fluxes()
        .iter()
        .map(|a| {
            let mut out = LinearExpr::zero(n);
            for (k, c) in a.terms() {
                out.add_term(k.left_field, k.left.clone(), c * &ansatz.derivative_factor(k.right_field, &k.right));
            }
            out
        })
        .collect();
    Ok(SubstitutedForm { vars: ansatz.vars(&space), labels, weight: ansatz.weight.clone(), fluxes })
}

/// Expected `dη` after substitution, straight from the operator:
/// `Σ A_i c ∂^α q_j − (−1)^{|α|} c (i w)^α A_i q_j`.
pub fn substituted_rhs(op: &Operator, ansatz: &ExponentialAnsatz) -> LinearExpr {
    let n = op.dim();
    let zero = MultiIndex::zero(n);
    let mut out = LinearExpr::zero(n);
    for t in op.op_terms() {
        let amp = ansatz.amplitudes.get(t.row).cloned().unwrap_or_else(Poly::one);
        out.add_term(t.col, t.alpha.clone(), &t.coeff * &amp);
        let mut adj = &t.coeff * &ansatz.derivative_factor(t.row, &t.alpha);
        if t.alpha.order() % 2 == 1 {
            adj = -&adj;
        }
        out.add_term(t.col, zero.clone(), -&adj);
    }
    out
}

impl SubstitutedForm {
    /// Hand-entered substituted fluxes.
    pub fn from_fluxes(labels: Labels, vars: Vec<String>, weight: Vec<Poly>, fluxes: Vec<LinearExpr>) -> Result<Self> {
        let n = labels.axes.len();
        if weight.len() != n || fluxes.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: fluxes.len() });
        }
        Ok(Self { labels, vars, weight, fluxes })
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn weight(&self) -> &[Poly] {
        &self.weight
    }

    pub fn fluxes(&self) -> &[LinearExpr] {
        &self.fluxes
    }

    pub fn dim(&self) -> usize {
        self.fluxes.len()
    }

    /// Coefficient of `weight · vol` in `dη`: `Σ_j (∂_j + i w_j) F_j`.
    pub fn exterior_derivative(&self) -> LinearExpr {
        let mut out = LinearExpr::zero(self.dim());
        for (j, f) in self.fluxes.iter().enumerate() {
            out = &out + &f.partial(j);
            out = &out + &f.scale(&(&Poly::i() * &self.weight[j]));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        Self {
            labels: self.labels.clone(),
            vars: self.vars.clone(),
            weight: self.weight.iter().map(&f).collect(),
            fluxes: self.fluxes.iter().map(|e| e.map_coeffs(&f)).collect(),
        }
    }

    pub fn weight_latex(&self) -> String {
        let terms: Vec<(Poly, String)> = self
            .weight
            .iter()
            .enumerate()
            .map(|(k, w)| (w.clone(), latex_symbol(&self.labels.axes[k])))
            .collect();
        format!("e^{{i({})}}", signed_sum(&terms, &self.vars, Style::Latex))
    }

    pub fn to_latex(&self) -> String {
        let mut lines = Vec::new();
        for (k, f) in self.fluxes.iter().enumerate() {
            let axis = latex_symbol(&self.labels.axes[k]);
            lines.push(format!(
                "a_{{{axis}}} &= {} \\left({}\\right)",
                self.weight_latex(),
                f.render(&self.labels, &self.vars, Style::Latex)
            ));
        }
        format!("\\begin{{aligned}}\n{}\n\\end{{aligned}}", lines.join(" \\\\\n"))
    }

    pub fn to_doc(&self) -> SubstitutedDoc {
        SubstitutedDoc {
            axes: self.labels.axes.clone(),
            vars: self.vars.clone(),
            fields: self.labels.fields.clone(),
            weight: self.weight.iter().map(|w| w.to_text(&self.vars)).collect(),
            fluxes: self
                .fluxes
                .iter()
                .enumerate()
                .map(|(k, f)| LinearFluxDoc {
                    axis: self.labels.axes[k].clone(),
                    terms: f
                        .terms()
                        .map(|((fi, d), c)| LinearTermDoc {
                            coeff: c.to_text(&self.vars),
                            field: *fi,
                            deriv: d.entries().to_vec(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearTermDoc {
    pub coeff: String,
    pub field: usize,
    pub deriv: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFluxDoc {
    pub axis: String,
    pub terms: Vec<LinearTermDoc>,
}

/// JSON form; the weight is `exp(i Σ_j weight_j x^j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutedDoc {
    pub axes: Vec<String>,
    pub vars: Vec<String>,
    pub fields: Vec<String>,
    pub weight: Vec<String>,
    pub fluxes: Vec<LinearFluxDoc>,
}
