//! Global relations `0 = ∫_{∂Ω} η` on boxes, with traces left symbolic.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::multi_index::MultiIndex;
use crate::parse::{parse_expr, parse_rational, Ast};
use crate::poly::{latex_symbol, Poly};
use crate::render::{field_factor, signed_sum, Labels, Style};

use super::substitute::SubstitutedForm;

/// A box endpoint: an exact rational or a named length such as `l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Value(BigRational),
    Symbol(String),
}

impl Endpoint {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        match parse_expr(t)? {
            Ast::Ident { name, .. } if name != "i" => Ok(Endpoint::Symbol(name)),
            _ => Ok(Endpoint::Value(parse_rational(t)?)),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Endpoint::Value(v) => v.to_string(),
            Endpoint::Symbol(s) => s.clone(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Endpoint::Value(v) => v.to_f64(),
            Endpoint::Symbol(_) => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Closed intervals per axis, aligned with the axis order of the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDomain {
    pub axes: Vec<String>,
    pub intervals: Vec<(Endpoint, Endpoint)>,
}

impl BoxDomain {
    pub fn new(axes: Vec<String>, intervals: Vec<(Endpoint, Endpoint)>) -> Result<Self> {
        if axes.len() != intervals.len() {
            return Err(Error::DimensionMismatch { expected: axes.len(), found: intervals.len() });
        }
        for (a, (lo, hi)) in axes.iter().zip(&intervals) {
            if lo == hi {
                return Err(Error::DegenerateBox(format!("axis {a} has zero length")));
            }
            if let (Endpoint::Value(l), Endpoint::Value(h)) = (lo, hi) {
                if l > h {
                    return Err(Error::DegenerateBox(format!("axis {a} has lo > hi")));
                }
            }
        }
        Ok(Self { axes, intervals })
    }

    /// Parse `x=0:l, t=0:T`; every axis must appear exactly once.
    pub fn parse(axes: &[String], src: &str) -> Result<Self> {
        let mut found: Vec<Option<(Endpoint, Endpoint)>> = vec![None; axes.len()];
        for part in src.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, range) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("box entry `{part}` is not of the form axis=lo:hi")))?;
            let name = name.trim();
            let k = axes.iter().position(|a| a == name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
            let (lo, hi) = range
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("box range `{range}` is not of the form lo:hi")))?;
            if found[k].is_some() {
                return Err(Error::Invalid(format!("axis {name} appears twice in the box")));
            }
            found[k] = Some((Endpoint::parse(lo)?, Endpoint::parse(hi)?));
        }
        let mut intervals = Vec::new();
        for (a, f) in axes.iter().zip(found) {
            intervals.push(f.ok_or_else(|| Error::Invalid(format!("box is missing axis {a}")))?);
        }
        Self::new(axes.to_vec(), intervals)
    }

    /// `[0, 1]` on every axis.
    pub fn unit(axes: &[String]) -> Self {
        let zero = Endpoint::Value(BigRational::from_integer(0.into()));
        let one = Endpoint::Value(BigRational::from_integer(1.into()));
        Self { axes: axes.to_vec(), intervals: vec![(zero, one); axes.len()] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Named endpoints in first-seen order.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (lo, hi) in &self.intervals {
            for e in [lo, hi] {
                if let Endpoint::Symbol(s) = e {
                    if !out.contains(s) {
                        out.push(s.clone());
                    }
                }
            }
        }
        out
    }

    pub fn endpoint(&self, axis: usize, end: End) -> &Endpoint {
        match end {
            End::Lo => &self.intervals[axis].0,
            End::Hi => &self.intervals[axis].1,
        }
    }

    pub fn to_text(&self) -> String {
        self.axes
            .iter()
            .zip(&self.intervals)
            .map(|(a, (lo, hi))| format!("{a}={lo}:{hi}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lo,
    Hi,
}

impl End {
    pub fn sign(self) -> i32 {
        match self {
            End::Lo => -1,
            End::Hi => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            End::Lo => "lo",
            End::Hi => "hi",
        }
    }
}

/// `sign · coeff · e^{i·weight} ∫_face e^{i Σ kernel_k x^k} ∂^deriv q_field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTerm {
    pub axis: usize,
    pub end: End,
    pub sign: i32,
    pub coeff: Poly,
    /// Exponent contributed by the fixed coordinate: `w_axis · endpoint`.
    pub weight: Poly,
    /// `w_k` for every axis except `axis`, in axis order.
    pub kernel: Vec<Poly>,
    pub field: usize,
    pub deriv: MultiIndex,
}

impl RelationTerm {
    fn key(&self) -> (usize, End, usize, MultiIndex) {
        (self.axis, self.end, self.field, self.deriv.clone())
    }

    /// `sign · coeff` as a single polynomial.
    pub fn signed_coeff(&self) -> Poly {
        if self.sign < 0 {
            -&self.coeff
        } else {
            self.coeff.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalRelation {
    labels: Labels,
    vars: Vec<String>,
    domain: BoxDomain,
    terms: Vec<RelationTerm>,
}

/// Integrate the substituted form over the boundary of `domain`:
/// the `a_j` flux on each face, with `+` on the high end and `−` on the low.
pub fn global_relation(f: &SubstitutedForm, domain: &BoxDomain) -> Result<GlobalRelation> {
    let n = f.dim();
    if domain.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: domain.dim() });
    }
    if domain.axes != f.labels().axes {
        return Err(Error::Invalid("box axes differ from the form's axes".into()));
    }
    let mut vars = f.vars().to_vec();
    for s in domain.symbols() {
        if vars.contains(&s) || f.labels().axes.contains(&s) || s == "i" {
            return Err(Error::NameCollision(s));
        }
        vars.push(s);
    }
    let endpoint_poly = |e: &Endpoint| -> Poly {
        match e {
            Endpoint::Value(v) => Poly::constant(GaussRational::real(v.clone())),
            Endpoint::Symbol(s) => Poly::var(vars.iter().position(|x| x == s).expect("registered")),
        }
    };
    let mut terms = Vec::new();
    for (j, flux) in f.fluxes().iter().enumerate() {
        let kernel: Vec<Poly> = (0..n).filter(|&k| k != j).map(|k| f.weight()[k].clone()).collect();
        for end in [End::Lo, End::Hi] {
            let weight = &f.weight()[j] * &endpoint_poly(domain.endpoint(j, end));
            for ((field, deriv), c) in flux.terms() {
                terms.push(RelationTerm {
                    axis: j,
                    end,
                    sign: end.sign(),
                    coeff: c.clone(),
                    weight: weight.clone(),
                    kernel: kernel.clone(),
                    field: *field,
                    deriv: deriv.clone(),
                });
            }
        }
    }
    Ok(GlobalRelation::from_terms(f.labels().clone(), vars, domain.clone(), terms))
}

impl GlobalRelation {
    /// Canonicalize: merge equal traces on the same face and sort.
    pub fn from_terms(labels: Labels, vars: Vec<String>, domain: BoxDomain, terms: Vec<RelationTerm>) -> Self {
        let mut merged: BTreeMap<(usize, End, usize, MultiIndex), RelationTerm> = BTreeMap::new();
        for t in terms {
            match merged.get_mut(&t.key()) {
                Some(old) => {
                    let sum = &old.signed_coeff() + &t.signed_coeff();
                    old.sign = old.end.sign();
                    old.coeff = if old.sign < 0 { -&sum } else { sum };
                }
                None => {
                    let mut t = t;
                    if t.sign != t.end.sign() {
                        t.coeff = -&t.coeff;
                        t.sign = t.end.sign();
                    }
                    merged.insert(t.key(), t);
                }
            }
        }
        let terms = merged.into_values().filter(|t| !t.coeff.is_zero()).collect();
        Self { labels, vars, domain, terms }
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn terms(&self) -> &[RelationTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drop traces known to vanish (e.g. from boundary conditions).
    pub fn retain(&self, keep: impl Fn(&RelationTerm) -> bool) -> Self {
        Self {
            labels: self.labels.clone(),
            vars: self.vars.clone(),
            domain: self.domain.clone(),
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }

    /// Integrate tangential derivatives by parts on every face,
    /// `∫ e^{i w·x} ∂_k g ↦ −i w_k ∫ e^{i w·x} g`, discarding the edge
    /// contributions. Exact pieces of a form vanish in this normal form, so
    /// equivalent forms give equal results.
    pub fn face_normal_form(&self) -> Self {
        let n = self.labels.axes.len();
        let mut out = Vec::new();
        for t in &self.terms {
            let mut coeff = t.coeff.clone();
            let mut d = vec![0u32; n];
            d[t.axis] = t.deriv.get(t.axis);
            let mut slot = 0;
            for k in 0..n {
                if k == t.axis {
                    continue;
                }
                let e = t.deriv.get(k);
                if e > 0 {
                    let f = -&(&Poly::i() * &t.kernel[slot]);
                    coeff = &coeff * &f.pow(e);
                }
                slot += 1;
            }
            out.push(RelationTerm { coeff, deriv: MultiIndex::new(d), ..t.clone() });
        }
        Self::from_terms(self.labels.clone(), self.vars.clone(), self.domain.clone(), out)
    }

    fn trace(&self, t: &RelationTerm, style: Style) -> String {
        let base = field_factor(&self.labels.field(t.field), false, &t.deriv, &self.labels.axes, style);
        let axis = &self.labels.axes[t.axis];
        let at = self.domain.endpoint(t.axis, t.end);
        match style {
            Style::Text => format!("{base}|{axis}={at}"),
            Style::Latex => {
                let at = match at {
                    Endpoint::Symbol(s) => latex_symbol(s),
                    Endpoint::Value(v) => v.to_string(),
                };
                format!("{base}\\big|_{{{}={at}}}", latex_symbol(axis))
            }
        }
    }

    fn exponent(&self, t: &RelationTerm, style: Style) -> String {
        let items: Vec<(Poly, String)> = self
            .labels
            .axes
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != t.axis)
            .zip(&t.kernel)
            .map(|((_, a), w)| {
                let name = match style {
                    Style::Text => a.clone(),
                    Style::Latex => latex_symbol(a),
                };
                (w.clone(), name)
            })
            .collect();
        signed_sum(&items, &self.vars, style)
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0 = 0\n".into();
        }
        let mut out = String::from("0 =\n");
        for t in &self.terms {
            let sign = if t.sign > 0 { "+" } else { "-" };
            out.push_str(&format!(
                "  {sign} ({}) * exp(i*({})) * int exp(i*({})) {}\n",
                t.coeff.to_text(&self.vars),
                t.weight.to_text(&self.vars),
                self.exponent(t, Style::Text),
                self.trace(t, Style::Text)
            ));
        }
        out
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0 = 0".into();
        }
        let mut parts = Vec::new();
        for t in &self.terms {
            let sign = if t.sign > 0 { "+" } else { "-" };
            let w = if t.weight.is_zero() {
                String::new()
            } else {
                format!("e^{{i({})}} ", t.weight.to_latex(&self.vars))
            };
            let free: Vec<String> = (0..self.labels.axes.len())
                .filter(|&k| k != t.axis)
                .map(|k| format!("d{}", latex_symbol(&self.labels.axes[k])))
                .collect();
            parts.push(format!(
                "{sign} \\left({}\\right) {w}\\int e^{{i({})}} {} \\, {}",
                t.coeff.to_latex(&self.vars),
                self.exponent(t, Style::Latex),
                self.trace(t, Style::Latex),
                free.join("\\,")
            ));
        }
        format!("0 = {}", parts.join(" "))
    }

    pub fn to_doc(&self) -> RelationDoc {
        RelationDoc {
            vars: self.vars.clone(),
            fields: self.labels.fields.clone(),
            r#box: self
                .domain
                .axes
                .iter()
                .zip(&self.domain.intervals)
                .map(|(a, (lo, hi))| BoxDoc { axis: a.clone(), lo: lo.to_text(), hi: hi.to_text() })
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let free = (0..self.labels.axes.len()).filter(|&k| k != t.axis);
                    RelationTermDoc {
                        axis: self.labels.axes[t.axis].clone(),
                        end: t.end,
                        sign: t.sign,
                        coeff: t.coeff.to_text(&self.vars),
                        weight: t.weight.to_text(&self.vars),
                        kernel: free
                            .zip(&t.kernel)
                            .map(|(k, w)| KernelDoc { axis: self.labels.axes[k].clone(), w: w.to_text(&self.vars) })
                            .collect(),
                        trace: TraceDoc { field: t.field, deriv: t.deriv.entries().to_vec() },
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub axis: String,
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceDoc {
    pub field: usize,
    pub deriv: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelDoc {
    pub axis: String,
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationTermDoc {
    pub axis: String,
    pub end: End,
    pub sign: i32,
    pub coeff: String,
    pub weight: String,
    pub kernel: Vec<KernelDoc>,
    pub trace: TraceDoc,
}

/// JSON form of a [`GlobalRelation`]; `weight` and `kernel` are exponents of
/// `e^{i·(...)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub vars: Vec<String>,
    pub fields: Vec<String>,
    pub r#box: Vec<BoxDoc>,
    pub terms: Vec<RelationTermDoc>,
}
