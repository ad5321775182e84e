//! Shared text/LaTeX rendering of coefficient-weighted sums.

use crate::bilinear::{BilinearExpr, TermKey};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::parse::parse_expr;
use crate::poly::{latex_symbol, Monomial, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

/// Render `Σ c_i · f_i`, folding signs of single-term coefficients into the
/// separators and parenthesizing multi-term ones.
pub fn signed_sum(items: &[(Poly, String)], names: &[String], style: Style) -> String {
    let mut out = String::new();
    for (c, factor) in items {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = signed_product(c, factor, names, style);
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn signed_product(c: &Poly, factor: &str, names: &[String], style: Style) -> (bool, String) {
    let (sep, text) = match style {
        Style::Text => ("*", c.to_text(names)),
        Style::Latex => (" ", c.to_latex(names)),
    };
    if !c.is_single_term() {
        let body = if factor.is_empty() { format!("({text})") } else { format!("({text}){sep}{factor}") };
        return (false, body);
    }
    let (neg, mag) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, text),
    };
    let body = if factor.is_empty() {
        mag
    } else if mag == "1" {
        factor.to_string()
    } else {
        format!("{mag}{sep}{factor}")
    };
    (neg, body)
}

/// `q_{xxy}`, `\tilde{q}_{x}`, `u1~_y`, … for a derivative of a named field.
pub fn field_factor(name: &str, tilde: bool, deriv: &MultiIndex, axes: &[String], style: Style) -> String {
    let sub = deriv.subscript(axes);
    match style {
        Style::Text => {
            let base = if tilde { format!("{name}~") } else { name.to_string() };
            if sub.is_empty() {
                base
            } else {
                format!("{base}_{sub}")
            }
        }
        Style::Latex => {
            let sym = latex_symbol(name);
            let base = if tilde { format!("\\tilde{{{sym}}}") } else { sym };
            if sub.is_empty() {
                base
            } else if base.contains('_') {
                format!("\\partial_{{{sub}}} {base}")
            } else {
                format!("{base}_{{{sub}}}")
            }
        }
    }
}

/// Names used when printing bilinear expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels {
    pub axes: Vec<String>,
    pub params: Vec<String>,
    pub fields: Vec<String>,
}

impl Labels {
    pub fn new(axes: Vec<String>, params: Vec<String>, fields: Vec<String>) -> Self {
        Self { axes, params, fields }
    }

    /// Generic labels `x1..xn`, a single field `q`.
    pub fn generic(dim: usize) -> Self {
        Self {
            axes: (1..=dim).map(|k| format!("x{k}")).collect(),
            params: Vec::new(),
            fields: vec!["q".to_string()],
        }
    }

    pub fn field(&self, i: usize) -> String {
        self.fields.get(i).cloned().unwrap_or_else(|| format!("q{}", i + 1))
    }

    pub fn bilinear(&self, expr: &BilinearExpr, style: Style) -> String {
        let items: Vec<(Poly, String)> = expr
            .terms()
            .map(|(k, c)| {
                let q = field_factor(&self.field(k.left_field), false, &k.left, &self.axes, style);
                let qt = field_factor(&self.field(k.right_field), true, &k.right, &self.axes, style);
                let factor = match style {
                    Style::Text => format!("{q}*{qt}"),
                    Style::Latex => format!("{qt} {q}"),
                };
                (c.clone(), factor)
            })
            .collect();
        signed_sum(&items, &self.params, style)
    }
}

impl std::fmt::Display for BilinearExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&Labels::generic(self.dim()).bilinear(self, Style::Text))
    }
}


/// Split `q~_xyy` into (field, adjoint?, derivative). Subscripts are read one
/// character per derivative, so this only handles single-letter axes.
pub fn parse_field_factor(ident: &str, labels: &Labels) -> Option<(usize, bool, MultiIndex)> {
    let (head, sub) = match ident.split_once('_') {
        Some((h, s)) if labels.fields.iter().any(|f| f == h || format!("{f}~") == h) => (h, s),
        _ => (ident, ""),
    };
    let (name, tilde) = match head.strip_suffix('~') {
        Some(n) => (n, true),
        None => (head, false),
    };
    let field = labels.fields.iter().position(|f| f == name)?;
    let mut d = vec![0u32; labels.axes.len()];
    for ch in sub.chars() {
        let k = labels.axes.iter().position(|a| a.len() == ch.len_utf8() && a.starts_with(ch))?;
        d[k] += 1;
    }
    Some((field, tilde, MultiIndex::new(d)))
}

/// A parsed product: coefficient over `params ++ extra` and its field factors.
pub(crate) struct FactoredTerm {
    pub coeff: Poly,
    pub factors: Vec<(usize, bool, MultiIndex)>,
}

/// Parse a sum of products whose identifiers are coefficient variables
/// (`vars`) or field factors; returns each monomial with its factors split out.
pub(crate) fn parse_factored(text: &str, vars: &[String], labels: &Labels) -> Result<Vec<FactoredTerm>> {
    let ast = parse_expr(text)?;
    let mut factor_names: Vec<String> = Vec::new();
    for id in ast.identifiers() {
        if vars.contains(&id) || id == "i" {
            continue;
        }
        if parse_field_factor(&id, labels).is_none() {
            return Err(Error::UnknownName(id));
        }
        factor_names.push(id);
    }
    let nv = vars.len();
    let resolve = |name: &str| -> Option<usize> {
        vars.iter()
            .position(|v| v == name)
            .or_else(|| factor_names.iter().position(|f| f == name).map(|i| nv + i))
    };
    let poly = ast.to_poly(text, &resolve)?;
    let mut out = Vec::new();
    for (m, c) in poly.terms() {
        let e = m.exponents();
        let coeff = Poly::monomial(Monomial::new(e.iter().take(nv).copied().collect()), c.clone());
        let mut factors = Vec::new();
        for (i, name) in factor_names.iter().enumerate() {
            for _ in 0..m.exponent(nv + i) {
                factors.push(parse_field_factor(name, labels).expect("checked above"));
            }
        }
        out.push(FactoredTerm { coeff, factors });
    }
    Ok(out)
}

impl Labels {
    /// Inverse of [`Labels::bilinear`] in text style, e.g. `q~*q_xx - q*q~_xx`.
    pub fn parse_bilinear(&self, text: &str) -> Result<BilinearExpr> {
        let n = self.axes.len();
        let mut out = BilinearExpr::zero(n);
        for t in parse_factored(text, &self.params, self)? {
            let q: Vec<_> = t.factors.iter().filter(|f| !f.1).collect();
            let qt: Vec<_> = t.factors.iter().filter(|f| f.1).collect();
            if q.len() != 1 || qt.len() != 1 {
                return Err(Error::Invalid(format!(
                    "each product needs exactly one field and one adjoint field factor in `{text}`"
                )));
            }
            out.add_term(TermKey::new(q[0].0, qt[0].0, q[0].2.clone(), qt[0].2.clone()), t.coeff);
        }
        Ok(out)
    }
}
