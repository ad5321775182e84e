//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! One ring serves every coefficient role in the engine: operator coefficients
//! (polynomials in declared parameters such as `nu`), spectral polynomials (in
//! `s_x`, `s_t`, `xi1`, ...) and box endpoint symbols. Variables are plain
//! indices; names live with whoever owns the variable table.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::gauss::GaussRational;

/// Exponent vector with trailing zeros trimmed, so that polynomials over
/// different-length variable tables still compare correctly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(idx: usize, exp: u32) -> Self {
        let mut v = vec![0; idx + 1];
        v[idx] = exp;
        Monomial::new(v)
    }

    pub fn exponent(&self, idx: usize) -> u32 {
        self.0.get(idx).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let v = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial::new(v)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let len = self.0.len().max(other.0.len());
        let mut v = Vec::with_capacity(len);
        for i in 0..len {
            v.push(self.exponent(i).checked_sub(other.exponent(i))?);
        }
        Some(Monomial::new(v))
    }

    pub fn with_exponent(&self, idx: usize, exp: u32) -> Monomial {
        let mut v = self.0.clone();
        if v.len() <= idx {
            v.resize(idx + 1, 0);
        }
        v[idx] = exp;
        Monomial::new(v)
    }

    /// Graded-lex comparison key: total degree first, then exponents.
    fn graded_key(&self) -> (u32, &[u32]) {
        (self.degree(), &self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, GaussRational>,
}

pub type Coeff = Poly;

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRational::from_int(n))
    }

    pub fn i() -> Self {
        Self::constant(GaussRational::i())
    }

    pub fn var(idx: usize) -> Self {
        Self::monomial(Monomial::var(idx, 1), GaussRational::one())
    }

    pub fn monomial(m: Monomial, c: GaussRational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, GaussRational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// The value if the polynomial is a constant (zero included).
    pub fn constant_value(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// Number of variable slots the polynomial touches.
    pub fn arity(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient of `var^exp` viewing `self` as a polynomial in `var`.
    pub fn coefficient_in(&self, var: usize, exp: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            if m.exponent(var) == exp {
                out.add_term(m.with_exponent(var, 0), c.clone());
            }
        }
        out
    }

    /// Replace variable `var` by the polynomial `value`.
    pub fn substitute(&self, var: usize, value: &Poly) -> Poly {
        let mut cache: BTreeMap<u32, Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let rest = Poly::monomial(m.with_exponent(var, 0), c.clone());
            if e == 0 {
                out = &out + &rest;
                continue;
            }
            let pw = cache.entry(e).or_insert_with(|| value.pow(e));
            out = &out + &(&rest * pw);
        }
        out
    }

    /// Rename variables: variable `i` becomes `map[i]`.
    pub fn remap(&self, map: &[usize]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let width = map.iter().copied().max().map_or(0, |x| x + 1);
            let mut v = vec![0u32; width];
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v[map[i]] += e;
                }
            }
            out.add_term(Monomial::new(v), c.clone());
        }
        out
    }

    pub fn eval_complex(&self, values: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= values[i].powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_exact(&self, values: &[GaussRational]) -> GaussRational {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &values[i].pow(e);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &GaussRational)> {
        self.terms.iter().max_by(|a, b| a.0.graded_key().cmp(&b.0.graded_key()))
    }

    /// Divide by a nonzero constant.
    pub fn div_constant(&self, c: &GaussRational) -> Option<Poly> {
        c.inv().map(|inv| self.scale(&inv))
    }

    /// Make the leading coefficient one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => self.div_constant(c).unwrap_or_default(),
            None => Poly::zero(),
        }
    }

    /// If `self = u · root^e` for a constant unit `u` and the largest such
    /// `e ≥ 2`, return `(root, e)` with `root` monic.
    pub fn perfect_power(&self) -> Option<(Poly, u32)> {
        let monic = self.monic();
        let deg = monic.total_degree();
        (2..=deg)
            .rev()
            .filter(|e| deg.is_multiple_of(*e))
            .find_map(|e| monic.exact_root(e).map(|r| (r, e)))
    }

    /// Exact `e`-th root of a polynomial whose leading coefficient has one,
    /// found by peeling leading terms under graded-lex order.
    pub fn exact_root(&self, e: u32) -> Option<Poly> {
        if e == 0 {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading_term()?;
        let root_m = Monomial::new(
            lm.0.iter().map(|&x| if x % e == 0 { Some(x / e) } else { None }).collect::<Option<Vec<_>>>()?,
        );
        let root_c = lc.real_root(e)?;
        let lead = Poly::monomial(root_m.clone(), root_c.clone());
        let mut root = lead.clone();
        // e * lead^(e-1), the divisor for every correction term
        let denom_c = &GaussRational::from_int(e as i64) * &root_c.pow(e - 1);
        let denom_m = Monomial::new(root_m.0.iter().map(|x| x * (e - 1)).collect());
        for _ in 0..=self.len() * (e as usize) + 4 {
            let rem = self - &root.pow(e);
            if rem.is_zero() {
                return Some(root);
            }
            let (rm, rc) = rem.leading_term()?;
            if rm.graded_key() >= lm.graded_key() {
                return None;
            }
            let tm = rm.div(&denom_m)?;
            let tc = rc.checked_div(&denom_c)?;
            root.add_term(tm, tc);
        }
        None
    }

    /// Text accepted by the expression parser, e.g. `3/2*nu^2 - i*s_x`.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // highest graded term first reads naturally
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.graded_key().cmp(&a.0.graded_key()));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative_like();
            let mag = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_text(m, names, "*", "^");
            if mono.is_empty() {
                out.push_str(&mag.to_text());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&mag.to_text());
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn to_latex(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.graded_key().cmp(&a.0.graded_key()));
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative_like();
            let mag = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = monomial_latex(m, names);
            if mono.is_empty() {
                out.push_str(&mag.to_latex());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&mag.to_latex());
                out.push(' ');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Whether the polynomial prints as a single signed product, so it can be
    /// used as a factor without parentheses.
    pub fn is_single_term(&self) -> bool {
        self.terms.len() <= 1
    }
}

fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("v{i}"))
}

fn monomial_text(m: &Monomial, names: &[String], mul: &str, pow: &str) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(var_name(names, i)),
            _ => parts.push(format!("{}{pow}{e}", var_name(names, i))),
        }
    }
    parts.join(mul)
}

fn monomial_latex(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        let n = latex_symbol(&var_name(names, i));
        match e {
            0 => {}
            1 => parts.push(n),
            _ => parts.push(format!("{n}^{{{e}}}")),
        }
    }
    parts.join(" ")
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "kappa", "lambda", "mu",
    "nu", "xi", "pi", "rho", "sigma", "tau", "phi", "chi", "psi", "omega",
];

/// LaTeX for an identifier: greek names get a backslash, `a_b`/`xi1` get subscripts.
pub fn latex_symbol(name: &str) -> String {
    let (base, sub) = match name.split_once('_') {
        Some((b, s)) => (b.to_string(), Some(s.to_string())),
        None => {
            let digits = name.len() - name.trim_end_matches(|c: char| c.is_ascii_digit()).len();
            if digits > 0 && digits < name.len() {
                let (b, s) = name.split_at(name.len() - digits);
                (b.to_string(), Some(s.to_string()))
            } else {
                (name.to_string(), None)
            }
        }
    };
    let base = if GREEK.contains(&base.as_str()) { format!("\\{base}") } else { base };
    match sub {
        Some(s) => format!("{base}_{{{s}}}"),
        None => base,
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(&[]))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<GaussRational> for Poly {
    fn from(c: GaussRational) -> Self {
        Poly::constant(c)
    }
}
