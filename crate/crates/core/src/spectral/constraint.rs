//! Constraint varieties of the adjoint symbol and reduction modulo a quadric.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::operator::{Operator, SymbolMode};
use crate::poly::{Monomial, Poly};

/// `s_var² = rhs`, both over a shared variable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricRule {
    pub var: usize,
    pub rhs: Poly,
}

impl QuadricRule {
    pub fn new(var: usize, rhs: Poly) -> Result<Self> {
        let r = Self { var, rhs };
        r.check()?;
        Ok(r)
    }

    fn check(&self) -> Result<()> {
        if self.rhs.degree_in(self.var) > 0 {
            return Err(Error::BadQuadricRule { var: format!("#{}", self.var) });
        }
        Ok(())
    }

    /// The rule's polynomial `s_var² − rhs`.
    pub fn poly(&self) -> Poly {
        &Poly::var(self.var).pow(2) - &self.rhs
    }

    /// Two branches `s_var = ±√rhs` when `rhs` is a perfect square.
    pub fn branches(&self) -> Option<[Poly; 2]> {
        if self.rhs.is_zero() {
            return Some([Poly::zero(), Poly::zero()]);
        }
        let lc = self.rhs.leading_term()?.1.clone();
        let root_c = lc.real_root(2).or_else(|| {
            // -c for c > 0 has root i·√c
            let neg = -&lc;
            neg.real_root(2).map(|r| &r * &GaussRational::i())
        })?;
        let monic = self.rhs.div_constant(&lc)?;
        let r = monic.exact_root(2)?.scale(&root_c);
        Some([r.clone(), -&r])
    }
}

/// Rewrite every `s_var^{2a+b}` as `rhs^a s_var^b`; the result has degree at
/// most one in `s_var` and agrees with `p` modulo `s_var² − rhs`.
pub fn reduce_mod_quadric(p: &Poly, rule: &QuadricRule) -> Result<Poly> {
    if rule.rhs.degree_in(rule.var) > 0 {
        return Err(Error::BadQuadricRule { var: format!("#{}", rule.var) });
    }
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let e = m.exponent(rule.var);
        let rest = Poly::monomial(m.with_exponent(rule.var, e % 2), c.clone());
        out = &out + &(&rest * &rule.rhs.pow(e / 2));
    }
    Ok(out)
}

/// `P(s) = 0` with `P` the (determinant of the) adjoint symbol at `+i s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintVariety {
    vars: Vec<String>,
    spectral: Vec<usize>,
    poly: Poly,
    reduced: Poly,
    multiplicity: u32,
    solved: Option<QuadricRule>,
}

/// Constraint variety of `L† q̃ = 0` for exponential `q̃ = A e^{i s·x}`.
pub fn adjoint_constraint(op: &Operator) -> ConstraintVariety {
    let space = op.space().clone();
    let np = space.params.len();
    let mut vars = space.params.clone();
    vars.extend(space.spectral_names());
    let adj = op.adjoint();
    let raw = match &adj {
        Operator::Scalar(s) => s.symbol(SymbolMode::PlusI),
        Operator::Matrix(m) => {
            let n = m.size();
            let rows: Vec<Vec<Poly>> = (0..n)
                .map(|i| (0..n).map(|j| m.entry(i, j).symbol(SymbolMode::PlusI)).collect())
                .collect();
            determinant(&rows)
        }
    };
    let poly = clear_denominators(&raw);
    let (reduced, multiplicity) = match poly.perfect_power() {
        Some((root, e)) => (clear_denominators(&root), e),
        None => (poly.clone(), 1),
    };
    let spectral: Vec<usize> = (np..np + space.dim()).collect();
    let solved = spectral.iter().rev().find_map(|&v| solve_for_square(&reduced, v));
    ConstraintVariety { vars, spectral, poly, reduced, multiplicity, solved }
}

fn solve_for_square(p: &Poly, v: usize) -> Option<QuadricRule> {
    if p.degree_in(v) != 2 || p.terms().any(|(m, _)| m.exponent(v) == 1) {
        return None;
    }
    let lead = p.coefficient_in(v, 2).constant_value()?;
    let rhs = (-&p.coefficient_in(v, 0)).div_constant(&lead)?;
    Some(QuadricRule { var: v, rhs })
}

/// Laplace expansion along the first row.
pub fn determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut out = Poly::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = &m[0][j] * &determinant(&minor);
                out = if j % 2 == 0 { &out + &t } else { &out - &t };
            }
            out
        }
    }
}

/// Scale by the lcm of all rational denominators so every coefficient is a
/// Gaussian integer.
pub fn clear_denominators(p: &Poly) -> Poly {
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        l = l.lcm(c.re.denom()).lcm(c.im.denom());
    }
    if l.is_one() {
        return p.clone();
    }
    p.scale(&GaussRational::real(BigRational::from_integer(l)))
}

impl ConstraintVariety {
    /// Build from an explicit polynomial (for hand-entered constraints).
    pub fn from_poly(vars: Vec<String>, spectral: Vec<usize>, poly: Poly) -> Self {
        let poly = clear_denominators(&poly);
        let (reduced, multiplicity) = match poly.perfect_power() {
            Some((root, e)) => (clear_denominators(&root), e),
            None => (poly.clone(), 1),
        };
        let solved = spectral.iter().rev().find_map(|&v| solve_for_square(&reduced, v));
        Self { vars, spectral, poly, reduced, multiplicity, solved }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Indices of the spectral variables in [`ConstraintVariety::vars`].
    pub fn spectral(&self) -> &[usize] {
        &self.spectral
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// `P` with a perfect-power factor removed, e.g. `Σ s²` for `(Σ s²)²`.
    pub fn reduced(&self) -> &Poly {
        &self.reduced
    }

    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    pub fn solved(&self) -> Option<&QuadricRule> {
        self.solved.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.poly.is_zero()
    }

    /// `true` when `a` and `b` differ by a nonzero constant factor.
    pub fn equals_up_to_unit(a: &Poly, b: &Poly) -> bool {
        if a.is_zero() || b.is_zero() {
            return a.is_zero() && b.is_zero();
        }
        a.monic() == b.monic()
    }

    pub fn to_doc(&self) -> ConstraintDoc {
        ConstraintDoc {
            vars: self.vars.clone(),
            poly: self.poly.to_text(&self.vars),
            reduced: self.reduced.to_text(&self.vars),
            multiplicity: self.multiplicity,
            solved: self.solved.as_ref().map(|r| SolvedDoc {
                var: self.vars[r.var].clone(),
                rhs: r.rhs.to_text(&self.vars),
                branches: r.branches().map(|b| b.iter().map(|p| p.to_text(&self.vars)).collect()),
            }),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_doc()).expect("serializable")
    }

    pub fn to_latex(&self) -> String {
        let mut out = format!("{} = 0", self.poly.to_latex(&self.vars));
        if self.multiplicity > 1 {
            out.push_str(&format!(" \\iff {} = 0", self.reduced.to_latex(&self.vars)));
        }
        if let Some(r) = &self.solved {
            let v = Poly::var(r.var).to_latex(&self.vars);
            out.push_str(&format!(" \\iff {v}^{{2}} = {}", r.rhs.to_latex(&self.vars)));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} = 0", self.poly.to_text(&self.vars));
        if self.multiplicity > 1 {
            out.push_str(&format!("\nreduced: {} = 0", self.reduced.to_text(&self.vars)));
        }
        if let Some(r) = &self.solved {
            out.push_str(&format!("\nsolved: {}^2 = {}", self.vars[r.var], r.rhs.to_text(&self.vars)));
            if let Some([a, b]) = r.branches() {
                let v = &self.vars[r.var];
                out.push_str(&format!(
                    "\nbranches: {v} = {}, {v} = {}",
                    a.to_text(&self.vars),
                    b.to_text(&self.vars)
                ));
            }
        }
        out.push('\n');
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvedDoc {
    pub var: String,
    pub rhs: String,
    pub branches: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub vars: Vec<String>,
    pub poly: String,
    pub reduced: String,
    pub multiplicity: u32,
    pub solved: Option<SolvedDoc>,
}

/// Monomial `s_var^e` helper for tests and fixtures.
pub fn power(var: usize, e: u32) -> Poly {
    Poly::monomial(Monomial::var(var, e), GaussRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::parse_operator;
    use crate::parse::parse_poly;

    fn cv(src: &str) -> ConstraintVariety {
        adjoint_constraint(&parse_operator(src).unwrap())
    }

    #[test]
    fn wave_constraint_and_branches() {
        let c = cv("axes t,x; Dt^2 - Dx^2");
        let p = parse_poly("s_x^2 - s_t^2", c.vars()).unwrap();
        assert_eq!(c.poly(), &p);
        let r = c.solved().unwrap();
        assert_eq!(c.vars()[r.var], "s_x");
        let [a, b] = r.branches().unwrap();
        let st = parse_poly("s_t", c.vars()).unwrap();
        assert!((a == st && b == -&st) || (a == -&st && b == st));
    }

    #[test]
    fn sextic_cleared_form() {
        let c = cv("axes x,y,z; Dx^2*Dy^2*Dz^2 + Dx^2*Dy^2 + Dz^2");
        let p = parse_poly("s_x^2*s_y^2*(1 - s_z^2) - s_z^2", c.vars()).unwrap();
        assert!(ConstraintVariety::equals_up_to_unit(c.poly(), &p));
        assert!(c.solved().is_none());
    }

    #[test]
    fn biharmonic_reduced() {
        let c = cv("axes x,y,z; Dx^4 + Dy^4 + Dz^4 + 2*Dx^2*Dy^2 + 2*Dy^2*Dz^2 + 2*Dz^2*Dx^2");
        assert_eq!(c.multiplicity(), 2);
        let s = parse_poly("s_x^2 + s_y^2 + s_z^2", c.vars()).unwrap();
        assert!(ConstraintVariety::equals_up_to_unit(c.reduced(), &s));
        let r = c.solved().unwrap();
        assert_eq!(c.vars()[r.var], "s_z");
        assert_eq!(r.rhs, parse_poly("-s_x^2 - s_y^2", c.vars()).unwrap());
    }

    #[test]
    fn heat_branch() {
        let c = cv("axes t,x; Dt - Dx^2");
        // -i s_t + s_x^2 = 0
        let p = parse_poly("s_x^2 - i*s_t", c.vars()).unwrap();
        assert!(ConstraintVariety::equals_up_to_unit(c.poly(), &p));
    }

    #[test]
    fn quadric_reduction() {
        let names: Vec<String> = ["s1", "s2", "s3"].iter().map(|s| s.to_string()).collect();
        let rule = QuadricRule::new(2, parse_poly("-s1^2 - s2^2", &names).unwrap()).unwrap();
        let p = parse_poly("s3^4", &names).unwrap();
        let r = reduce_mod_quadric(&p, &rule).unwrap();
        assert_eq!(r, parse_poly("(s1^2 + s2^2)^2", &names).unwrap());
        assert_eq!(reduce_mod_quadric(&r, &rule).unwrap(), r);
        let odd = parse_poly("s3^3 + s1*s3", &names).unwrap();
        assert_eq!(reduce_mod_quadric(&odd, &rule).unwrap(), parse_poly("-s1^2*s3 - s2^2*s3 + s1*s3", &names).unwrap());
        assert!(matches!(
            QuadricRule::new(2, parse_poly("s3", &names).unwrap()),
            Err(Error::BadQuadricRule { .. })
        ));
    }

    #[test]
    fn system_uses_determinant() {
        let src = r#"{"axes":["x","t"],"fields":["a","b"],"entries":[["Dt","Dx"],["Dx","Dt"]]}"#;
        let c = cv(src);
        // det [[-i s_t, -i s_x], [-i s_x, -i s_t]] = -s_t^2 + s_x^2
        let p = parse_poly("s_x^2 - s_t^2", c.vars()).unwrap();
        assert!(ConstraintVariety::equals_up_to_unit(c.poly(), &p));
    }

    #[test]
    fn denominators_cleared() {
        let c = cv("axes x,y; 1/2*Dx^2 + 1/3*Dy^2");
        for (_, k) in c.poly().terms() {
            assert!(k.re.is_integer() && k.im.is_integer());
        }
    }
}
