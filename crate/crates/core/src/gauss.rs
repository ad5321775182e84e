//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// True when the value prints with a leading minus sign (used by printers
    /// to fold the sign into the separating operator).
    pub fn is_negative_like(&self) -> bool {
        if self.im.is_zero() {
            self.re.is_negative()
        } else if self.re.is_zero() {
            self.im.is_negative()
        } else {
            false
        }
    }

    /// Exact `e`-th root for real rationals when one exists.
    pub fn real_root(&self, e: u32) -> Option<Self> {
        if !self.im.is_zero() || e == 0 {
            return None;
        }
        let neg = self.re.is_negative();
        if neg && e.is_multiple_of(2) {
            return None;
        }
        let n = int_root(&self.re.numer().abs(), e)?;
        let d = int_root(&self.re.denom().abs(), e)?;
        let r = BigRational::new(n, d);
        Some(Self::real(if neg { -r } else { r }))
    }

    /// Text form accepted by the expression parser: `3/2`, `-i`, `2/3*i`, `(1+2*i)`.
    pub fn to_text(&self) -> String {
        fmt_rational_pair(&self.re, &self.im, "*i", true)
    }

    pub fn to_latex(&self) -> String {
        let re = latex_rational(&self.re);
        let im = latex_rational(&self.im.abs());
        if self.im.is_zero() {
            return re;
        }
        let unit = if self.im.abs().is_one() { "i".to_string() } else { format!("{im} i") };
        if self.re.is_zero() {
            if self.im.is_negative() {
                format!("-{unit}")
            } else {
                unit
            }
        } else {
            let sep = if self.im.is_negative() { "-" } else { "+" };
            format!("({re} {sep} {unit})")
        }
    }
}

fn int_root(n: &BigInt, e: u32) -> Option<BigInt> {
    let r = n.nth_root(e);
    if num_traits::pow(r.clone(), e as usize) == *n {
        Some(r)
    } else {
        None
    }
}

fn latex_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
    }
}

fn fmt_rational_pair(re: &BigRational, im: &BigRational, unit: &str, parens: bool) -> String {
    if im.is_zero() {
        return re.to_string();
    }
    let im_abs = im.abs();
    let im_part = if im_abs.is_one() {
        "i".to_string()
    } else {
        format!("{im_abs}{unit}")
    };
    if re.is_zero() {
        return if im.is_negative() { format!("-{im_part}") } else { im_part };
    }
    let sep = if im.is_negative() { "-" } else { "+" };
    if parens {
        format!("({re}{sep}{im_part})")
    } else {
        format!("{re}{sep}{im_part}")
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational_pair(&self.re, &self.im, "i", false))
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for GaussRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Add for GaussRational {
    type Output = GaussRational;
    fn add(self, o: GaussRational) -> GaussRational {
        &self + &o
    }
}

impl Sub for GaussRational {
    type Output = GaussRational;
    fn sub(self, o: GaussRational) -> GaussRational {
        &self - &o
    }
}

impl Mul for GaussRational {
    type Output = GaussRational;
    fn mul(self, o: GaussRational) -> GaussRational {
        &self * &o
    }
}

impl Div for GaussRational {
    type Output = GaussRational;
    /// Panics on division by zero; use [`GaussRational::checked_div`] otherwise.
    fn div(self, o: GaussRational) -> GaussRational {
        self.checked_div(&o).expect("division by zero")
    }
}

impl Neg for GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, o: &GaussRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, o: &GaussRational) {
        *self = &*self * o;
    }
}
