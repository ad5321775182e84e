//! Closed-form manufactured solutions with exact symbolic differentiation.

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::parse::{parse_expr, Ast};

/// Expression tree over coordinates; sums and products are n-ary.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
    Exp(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
}

fn c(re: f64) -> Expr {
    Expr::Const(Complex64::new(re, 0.0))
}

impl Expr {
    pub fn zero() -> Self {
        c(0.0)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == Complex64::new(0.0, 0.0))
    }

    fn is_one(&self) -> bool {
        matches!(self, Expr::Const(v) if *v == Complex64::new(1.0, 0.0))
    }

    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut k = Complex64::new(0.0, 0.0);
        let mut out = Vec::new();
        for t in terms {
            match t {
                Expr::Const(v) => k += v,
                Expr::Add(inner) => {
                    for s in inner {
                        match s {
                            Expr::Const(v) => k += v,
                            s => out.push(s),
                        }
                    }
                }
                t => out.push(t),
            }
        }
        if k != Complex64::new(0.0, 0.0) {
            out.push(Expr::Const(k));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().expect("one term"),
            _ => Expr::Add(out),
        }
    }

    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut k = Complex64::new(1.0, 0.0);
        let mut out = Vec::new();
        for f in factors {
            match f {
                Expr::Const(v) => k *= v,
                Expr::Mul(inner) => {
                    for s in inner {
                        match s {
                            Expr::Const(v) => k *= v,
                            s => out.push(s),
                        }
                    }
                }
                f => out.push(f),
            }
        }
        if k == Complex64::new(0.0, 0.0) {
            return Expr::zero();
        }
        if k != Complex64::new(1.0, 0.0) || out.is_empty() {
            out.insert(0, Expr::Const(k));
        }
        match out.len() {
            1 => out.pop().expect("one factor"),
            _ => Expr::Mul(out),
        }
    }

    pub fn pow(base: Expr, e: u32) -> Expr {
        match (e, &base) {
            (0, _) => c(1.0),
            (1, _) => base,
            (_, Expr::Const(v)) => Expr::Const(v.powu(e)),
            _ => Expr::Pow(Box::new(base), e),
        }
    }

    /// `∂/∂x_k`.
    pub fn diff(&self, k: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(j) => c(if *j == k { 1.0 } else { 0.0 }),
            Expr::Add(ts) => Expr::add(ts.iter().map(|t| t.diff(k)).collect()),
            Expr::Mul(fs) => {
                let mut terms = Vec::new();
                for i in 0..fs.len() {
                    let d = fs[i].diff(k);
                    if d.is_zero() {
                        continue;
                    }
                    let mut prod: Vec<Expr> = fs.clone();
                    prod[i] = d;
                    terms.push(Expr::mul(prod));
                }
                Expr::add(terms)
            }
            Expr::Pow(b, e) => {
                let d = b.diff(k);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(vec![c(f64::from(*e)), Expr::pow((**b).clone(), e - 1), d])
            }
            Expr::Exp(a) => {
                let d = a.diff(k);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(vec![self.clone(), d])
            }
            Expr::Sin(a) => {
                let d = a.diff(k);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(vec![Expr::Cos(a.clone()), d])
            }
            Expr::Cos(a) => {
                let d = a.diff(k);
                if d.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(vec![c(-1.0), Expr::Sin(a.clone()), d])
            }
        }
    }

    /// `∂^alpha`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Expr {
        let mut e = self.clone();
        for (k, &n) in alpha.entries().iter().enumerate() {
            for _ in 0..n {
                if e.is_zero() {
                    return e;
                }
                e = e.diff(k);
            }
        }
        e
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        match self {
            Expr::Const(v) => *v,
            Expr::Var(k) => Complex64::new(x[*k], 0.0),
            Expr::Add(ts) => ts.iter().map(|t| t.eval(x)).sum(),
            Expr::Mul(fs) => fs.iter().map(|f| f.eval(x)).product(),
            Expr::Pow(b, e) => b.eval(x).powu(*e),
            Expr::Exp(a) => a.eval(x).exp(),
            Expr::Sin(a) => a.eval(x).sin(),
            Expr::Cos(a) => a.eval(x).cos(),
        }
    }

    /// Parse text over the given axes; `params` binds named constants.
    /// Supports `+ - * / ^`, `exp`, `sin`, `cos` and literals such as `2+3i`.
    pub fn parse(src: &str, axes: &[String], params: &HashMap<String, Complex64>) -> Result<Expr> {
        let ast = parse_expr(src)?;
        lower(&ast, src, axes, params)
    }
}

fn lower(a: &Ast, src: &str, axes: &[String], params: &HashMap<String, Complex64>) -> Result<Expr> {
    let rec = |x: &Ast| lower(x, src, axes, params);
    Ok(match a {
        Ast::Num(n) => c(num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN)),
        Ast::Imag(n) => Expr::Const(Complex64::new(0.0, num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN))),
        Ast::Ident { name, .. } => {
            if let Some(k) = axes.iter().position(|x| x == name) {
                Expr::Var(k)
            } else if let Some(v) = params.get(name) {
                Expr::Const(*v)
            } else if name == "i" {
                Expr::Const(Complex64::new(0.0, 1.0))
            } else if name == "pi" {
                c(std::f64::consts::PI)
            } else {
                return Err(Error::UnknownName(name.clone()));
            }
        }
        Ast::Call { name, arg, .. } => {
            let inner = Box::new(rec(arg)?);
            match name.as_str() {
                "exp" => Expr::Exp(inner),
                "sin" => Expr::Sin(inner),
                "cos" => Expr::Cos(inner),
                _ => return Err(Error::UnknownName(name.clone())),
            }
        }
        Ast::Add(x, y) => Expr::add(vec![rec(x)?, rec(y)?]),
        Ast::Sub(x, y) => Expr::add(vec![rec(x)?, Expr::mul(vec![c(-1.0), rec(y)?])]),
        Ast::Mul(x, y) => Expr::mul(vec![rec(x)?, rec(y)?]),
        Ast::Div(x, y, _) => match rec(y)? {
            Expr::Const(v) if v != Complex64::new(0.0, 0.0) => Expr::mul(vec![rec(x)?, Expr::Const(v.inv())]),
            _ => return Err(Error::Invalid(format!("only division by nonzero constants is supported in `{src}`"))),
        },
        Ast::Neg(x) => Expr::mul(vec![c(-1.0), rec(x)?]),
        Ast::Pow(x, e) => Expr::pow(rec(x)?, *e),
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) if v.im == 0.0 => write!(f, "{}", v.re),
            Expr::Const(v) => write!(f, "({}{:+}i)", v.re, v.im),
            Expr::Var(k) => write!(f, "x{k}"),
            Expr::Add(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Expr::Mul(fs) => {
                let parts: Vec<String> = fs.iter().filter(|x| !x.is_one()).map(|t| t.to_string()).collect();
                if parts.is_empty() {
                    return write!(f, "1");
                }
                write!(f, "{}", parts.join("*"))
            }
            Expr::Pow(b, e) => write!(f, "{b}^{e}"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn axes() -> Vec<String> {
        vec!["t".into(), "x".into()]
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12 * (1.0 + b.norm())
    }

    #[test]
    fn polynomial_derivatives() {
        let e = Expr::parse("(x - t)^3 + (x + t)^2", &axes(), &HashMap::new()).unwrap();
        let wave = Expr::add(vec![
            e.derivative(&MultiIndex::new(vec![2, 0])),
            Expr::mul(vec![c(-1.0), e.derivative(&MultiIndex::new(vec![0, 2]))]),
        ]);
        for p in [[0.1, 0.7], [0.9, -0.3]] {
            assert!(close(wave.eval(&p), Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn transcendental() {
        let params = HashMap::from([("nu".to_string(), Complex64::new(0.5, 0.0))]);
        let e = Expr::parse("exp(-nu*t)*sin(x) + (2+3i)*cos(x)", &axes(), &params).unwrap();
        let p = [0.3, 1.1];
        let dt = e.diff(0).eval(&p);
        assert!(close(dt, Complex64::new(-0.5 * (-0.15f64).exp() * 1.1f64.sin(), 0.0)));
        let dxx = e.derivative(&MultiIndex::new(vec![0, 2])).eval(&p);
        assert!(close(dxx, -e.eval(&p)));
    }

    #[test]
    fn rejects_unknown() {
        assert!(Expr::parse("y + 1", &axes(), &HashMap::new()).is_err());
        assert!(Expr::parse("tan(x)", &axes(), &HashMap::new()).is_err());
        assert!(Expr::parse("1/x", &axes(), &HashMap::new()).is_err());
    }
}
