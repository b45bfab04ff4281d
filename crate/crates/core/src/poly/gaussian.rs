//! Exact Gaussian rationals `a + b i` with `a, b` in Q.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num / den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        )
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// Exact conversion of a finite float pair.
    pub fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Self::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    /// One of `1, i, -1, -i`.
    pub fn is_unit_root(&self) -> bool {
        let one = BigRational::one();
        (self.im.is_zero() && self.re.abs() == one) || (self.re.is_zero() && self.im.abs() == one)
    }

    /// Exact power by squaring. Roots of unity `±1, ±i` are reduced mod 4 so
    /// arbitrarily large exponents stay cheap.
    pub fn pow(&self, exp: &BigUint) -> Self {
        if exp.is_zero() {
            return Self::one();
        }
        if self.is_unit_root() {
            let r = (exp % 4u32).to_u32().unwrap_or(0);
            let mut acc = Self::one();
            for _ in 0..r {
                acc = &acc * self;
            }
            return acc;
        }
        let mut base = self.clone();
        let mut acc = Self::one();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = &acc * &base;
            }
            if i + 1 < bits {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Natural log of the modulus, robust for huge/tiny numerators and denominators.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let n = self.norm_sqr();
        0.5 * (ln_big(n.numer()) - ln_big(n.denom()))
    }

    pub fn arg(&self) -> f64 {
        self.to_complex().arg()
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (ln_big(r.numer()) - ln_big(r.denom())).exp()
}

/// `ln |n|` for arbitrary-size integers.
pub(crate) fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::from_real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: GaussianRational) -> GaussianRational {
        &self / &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `3/4`, `-1/2+3i`, `2/5i`, `0`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "" } else { "+" };
                write!(f, "{}{}{}i", fmt_rational(&self.re), sign, fmt_rational(&self.im))
            }
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

impl FromStr for GaussianRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || format!("invalid Gaussian rational `{s}`");
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(s).map(Self::from_real).ok_or_else(bad);
        };
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            Some(i) => {
                let re = parse_rational(&body[..i]).ok_or_else(bad)?;
                let im_str = body[i..].strip_prefix('+').unwrap_or(&body[i..]);
                let im = parse_rational(im_str).ok_or_else(bad)?;
                Ok(Self::new(re, im))
            }
            None => {
                let im = parse_rational(body).ok_or_else(bad)?;
                Ok(Self::new(BigRational::zero(), im))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = GaussianRational::from_parts((1, 2), (1, 3));
        let b = GaussianRational::from_parts((-2, 1), (3, 4));
        let p = &a * &b;
        // (1/2 + i/3)(-2 + 3i/4) = -1 - 1/4 + i(3/8 - 2/3)
        assert_eq!(p, GaussianRational::from_parts((-5, 4), (-7, 24)));
        assert_eq!(&(&p / &b) - &a, GaussianRational::zero());
    }

    #[test]
    fn unit_root_powers_reduce_mod_four() {
        let i = GaussianRational::i();
        let big = BigUint::one() << 200u32;
        assert_eq!(i.pow(&big), GaussianRational::one());
        assert_eq!(i.pow(&(big + 3u32)), -GaussianRational::i());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3/4", "-1/2+3i", "2/5i", "-7i", "1-1/3i"] {
            let z: GaussianRational = s.parse().unwrap();
            assert_eq!(z.to_string(), s);
        }
        assert!("1/0".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn ln_abs_handles_huge_values() {
        let two = GaussianRational::from_integer(2);
        let z = two.pow(&BigUint::from(5000u32));
        assert!((z.ln_abs() - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }
}
