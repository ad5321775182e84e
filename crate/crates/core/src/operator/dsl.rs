//! Text front end: `params nu; axes x,t; Dt - nu*Dx^2`, plus the JSON grid
//! format for matrix operators.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{MatrixPDO, Operator, ScalarPDO, Space};
use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::parse::{error_at, ident_list, ParseError, Parser, Tok};
use crate::poly::{Monomial, Poly};

/// Matrix operator input: a grid of DSL expressions sharing one header.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixSource {
    pub axes: Vec<String>,
    #[serde(default)]
    pub params: Vec<String>,
    #[serde(default)]
    pub fields: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

/// Parse either a DSL operator or a JSON matrix grid (detected by a leading `{`).
pub fn parse_operator(src: &str) -> Result<Operator> {
    if src.trim_start().starts_with('{') {
        let m: MatrixSource = serde_json::from_str(src).map_err(|e| Error::Invalid(format!("matrix JSON: {e}")))?;
        return Ok(Operator::Matrix(m.build()?));
    }
    Ok(Operator::Scalar(parse_scalar(src)?))
}

/// Parse a scalar operator with its header.
pub fn parse_scalar(src: &str) -> Result<ScalarPDO> {
    let mut p = Parser::new(src)?;
    let mut params = Vec::new();
    if matches!(p.peek(), Tok::Ident(s) if s == "params") {
        p.bump();
        params = ident_list(&mut p)?;
        p.expect(Tok::Semi, "`;`")?;
    }
    match p.peek() {
        Tok::Ident(s) if s == "axes" => {
            p.bump();
        }
        _ => return Err(p.unexpected(&["`axes`", "`params`"]).into()),
    }
    let axes = ident_list(&mut p)?;
    p.expect(Tok::Semi, "`;`")?;
    let space = Space {
        axes: axes.iter().map(|(a, _)| a.clone()).collect(),
        params: params.iter().map(|(a, _)| a.clone()).collect(),
    };
    check_names(src, &params, &axes)?;
    let start = p.pos();
    let ast = p.expr()?;
    p.expect_eof()?;
    lower(src, start, &ast, &space)
}

/// Parse a bare expression (no header) in a known space.
pub fn parse_in_space(src: &str, space: &Space) -> Result<ScalarPDO> {
    let mut p = Parser::new(src)?;
    let ast = p.expr()?;
    p.expect_eof()?;
    lower(src, 0, &ast, space)
}

fn check_names(src: &str, params: &[(String, usize)], axes: &[(String, usize)]) -> std::result::Result<(), ParseError> {
    let mut seen: Vec<&str> = Vec::new();
    for (name, pos) in params.iter().chain(axes) {
        if seen.contains(&name.as_str()) {
            return Err(error_at(src, *pos, format!("duplicate name `{name}`"), &[]));
        }
        if name == "i" {
            return Err(error_at(src, *pos, "`i` is reserved for the imaginary unit", &[]));
        }
        seen.push(name);
    }
    for (name, pos) in params {
        if axes.iter().any(|(a, _)| format!("D{a}") == *name) {
            return Err(error_at(src, *pos, format!("parameter `{name}` shadows a derivative"), &[]));
        }
    }
    Ok(())
}

fn lower(src: &str, _start: usize, ast: &crate::parse::Ast, space: &Space) -> Result<ScalarPDO> {
    let np = space.params.len();
    let resolve = |name: &str| -> Option<usize> {
        if let Some(i) = space.params.iter().position(|p| p == name) {
            return Some(i);
        }
        let axis = name.strip_prefix('D')?;
        space.axis_index(axis).map(|k| np + k)
    };
    let poly = ast.to_poly(src, &resolve)?;
    let n = space.dim();
    let mut terms: BTreeMap<MultiIndex, Poly> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let e = m.exponents();
        let coeff_mono = Monomial::new(e.iter().take(np).copied().collect());
        let alpha = MultiIndex::new((0..n).map(|k| m.exponent(np + k)).collect());
        let entry = terms.entry(alpha).or_default();
        *entry = &*entry + &Poly::monomial(coeff_mono, c.clone());
    }
    ScalarPDO::from_terms(space.clone(), terms)
}

impl MatrixSource {
    pub fn build(&self) -> Result<MatrixPDO> {
        let space = Space { axes: self.axes.clone(), params: self.params.clone() };
        let m = self.entries.len();
        let fields = if self.fields.is_empty() {
            (1..=m).map(|i| format!("q{i}")).collect()
        } else {
            self.fields.clone()
        };
        let mut rows = Vec::with_capacity(m);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::NonSquare { rows: m, row: i, cols: row.len() });
            }
            let mut out = Vec::with_capacity(m);
            for (j, text) in row.iter().enumerate() {
                let op = parse_in_space(text, &space)
                    .map_err(|e| Error::Invalid(format!("entry ({i},{j}) `{text}`: {e}")))?;
                out.push(op);
            }
            rows.push(out);
        }
        MatrixPDO::new(space, fields, rows)
    }
}

fn derivative_text(alpha: &MultiIndex, axes: &[String]) -> String {
    let mut parts = Vec::new();
    for (k, &a) in alpha.entries().iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("D{}", axes[k])),
            _ => parts.push(format!("D{}^{a}", axes[k])),
        }
    }
    parts.join("*")
}

/// Expression body only (no header), parseable by [`parse_in_space`].
pub(crate) fn print_expr(op: &ScalarPDO) -> String {
    let space = op.space();
    let mut out = String::new();
    for (alpha, c) in op.terms() {
        let d = derivative_text(alpha, &space.axes);
        let neg_one = -&Poly::one();
        let mut term = if d.is_empty() {
            if c.is_single_term() {
                c.to_text(&space.params)
            } else {
                format!("({})", c.to_text(&space.params))
            }
        } else if c.is_one() {
            d
        } else if *c == neg_one {
            format!("-{d}")
        } else if c.is_single_term() {
            format!("{}*{d}", c.to_text(&space.params))
        } else {
            format!("({})*{d}", c.to_text(&space.params))
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&std::mem::take(&mut term));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn print_scalar(op: &ScalarPDO) -> String {
    let space = op.space();
    let mut s = String::new();
    if !space.params.is_empty() {
        s.push_str(&format!("params {}; ", space.params.join(",")));
    }
    s.push_str(&format!("axes {}; ", space.axes.join(",")));
    s.push_str(&print_expr(op));
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauss::GaussRational;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn wave_terms() {
        let op = parse_scalar("axes x,t; Dt^2 - Dx^2").unwrap();
        assert_eq!(op.coeff(&mi(&[0, 2])), Poly::one());
        assert_eq!(op.coeff(&mi(&[2, 0])), Poly::int(-1));
        assert_eq!(op.terms().count(), 2);
    }

    #[test]
    fn example_two_terms() {
        let op = parse_scalar("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2").unwrap();
        let keys: Vec<_> = op.terms().map(|(a, _)| a.clone()).collect();
        assert_eq!(keys, vec![mi(&[0, 0, 2]), mi(&[2, 2, 0]), mi(&[2, 2, 2])]);
    }

    #[test]
    fn symbolic_parameter() {
        let op = parse_scalar("params nu; axes x,y,z,t; Dt - nu*(Dx^2+Dy^2+Dz^2)").unwrap();
        assert_eq!(op.coeff(&mi(&[0, 0, 0, 1])), Poly::one());
        assert_eq!(op.coeff(&mi(&[2, 0, 0, 0])), -&Poly::var(0));
        assert_eq!(op.terms().count(), 4);
    }

    #[test]
    fn round_trip() {
        for src in [
            "axes x,t; Dt^2 - Dx^2",
            "params nu; axes x,y,z,t; Dt - nu*(Dx^2+Dy^2+Dz^2)",
            "params a,b; axes x,y; (a+2*b)*Dx*Dy - 3/4*i*Dy^3 + (1+2i)*Dx + a^2 - 5",
            "axes x; 0",
        ] {
            let op = parse_scalar(src).unwrap();
            let printed = op.to_dsl();
            assert_eq!(parse_scalar(&printed).unwrap(), op, "{printed}");
        }
    }

    #[test]
    fn diagnostics() {
        let err = parse_scalar("axes x,t; Dt^2 - Dy^2").unwrap_err();
        let Error::Parse(e) = err else { panic!("{err}") };
        assert_eq!(e.col, 18);
        assert!(e.message.contains("Dy"));

        let err = parse_scalar("axes x,t Dt").unwrap_err();
        let Error::Parse(e) = err else { panic!() };
        assert!(e.expected.iter().any(|s| s.contains(';')));

        assert!(parse_scalar("axes x,x; Dx").is_err());
        assert!(parse_scalar("axes x; Dx/Dx").is_err());
    }

    #[test]
    fn non_square_matrix() {
        let src = r#"{"axes":["x"],"fields":["a","b"],"entries":[["Dx","0"],["Dx"]]}"#;
        assert!(matches!(parse_operator(src), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn gaussian_coefficient() {
        let op = parse_scalar("axes x; (1/2 + 3i)*Dx").unwrap();
        let c = op.coeff(&mi(&[1])).constant_value().unwrap();
        assert_eq!(c, GaussRational::from_ratio(1, 2) + GaussRational::from_ratio(3, 1) * GaussRational::i());
    }
}
