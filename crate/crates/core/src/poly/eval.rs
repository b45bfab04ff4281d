//! Evaluation in log-polar coordinates.
//!
//! Iterate exponents grow like `2^k`, so `z^e` overflows any float long before
//! the interesting regime. Each monomial is evaluated as `ln|c| + <e, ln|z|>`
//! and terms are combined by a rescaled (log-sum-exp) summation.

use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::{Exponents, PolyTuple, SparsePoly};
use crate::error::{Error, Result};

/// A point coordinate `exp(log_modulus + i*phase)`. `log_modulus = -inf` is 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogPolar {
    pub log_modulus: f64,
    pub phase: f64,
}

impl LogPolar {
    pub fn new(log_modulus: f64, phase: f64) -> Self {
        LogPolar { log_modulus, phase }
    }

    pub fn zero() -> Self {
        LogPolar::new(f64::NEG_INFINITY, 0.0)
    }

    pub fn from_complex(z: num_complex::Complex64) -> Self {
        if z.norm() == 0.0 {
            Self::zero()
        } else {
            LogPolar::new(z.norm().ln(), z.arg())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }
}

/// One evaluated component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogValue {
    pub log_modulus: f64,
    pub phase: f64,
    /// True when the value is a single monomial (or structurally zero).
    pub exact: bool,
    /// Bound on the absolute error of `log_modulus`.
    pub error_bound: f64,
}

impl LogValue {
    pub fn is_zero(&self) -> bool {
        self.log_modulus == f64::NEG_INFINITY
    }
}

/// `e * x` for a possibly huge integer `e`; the product is exact in the sense
/// that `e` is converted once, with relative rounding `2^-53`.
fn big_mul(e: &BigUint, x: f64) -> f64 {
    if e.is_zero() {
        return 0.0;
    }
    e.to_f64().unwrap_or(f64::INFINITY) * x
}

/// Phase `e * theta mod 2pi`. For exponents below 2^53 the integer product is
/// reduced exactly before rounding.
fn big_phase(e: &BigUint, theta: f64) -> f64 {
    if e.is_zero() || theta == 0.0 {
        return 0.0;
    }
    match e.to_u64() {
        Some(k) if k < (1u64 << 53) => {
            // split k = hi*2^26 + lo to keep the product well conditioned
            let hi = (k >> 26) as f64;
            let lo = (k & ((1 << 26) - 1)) as f64;
            let a = (hi * 67108864.0 * theta).rem_euclid(TAU);
            (a + lo * theta).rem_euclid(TAU)
        }
        _ => (e.to_f64().unwrap_or(0.0) * theta).rem_euclid(TAU),
    }
}

fn monomial_log(e: &Exponents, point: &[LogPolar]) -> (f64, f64, f64) {
    let mut lm = 0.0;
    let mut ph = 0.0;
    let mut scale = 0.0;
    for (ei, z) in e.iter().zip(point) {
        if ei.is_zero() {
            continue;
        }
        if z.is_zero() {
            return (f64::NEG_INFINITY, 0.0, 0.0);
        }
        let t = big_mul(ei, z.log_modulus);
        lm += t;
        scale += t.abs();
        ph += big_phase(ei, z.phase);
    }
    (lm, ph, scale)
}

/// Evaluates one polynomial in log-polar form.
pub fn eval_poly_log(p: &SparsePoly, point: &[LogPolar]) -> LogValue {
    let mut terms = Vec::with_capacity(p.num_terms());
    let mut scale = 0.0f64;
    for (e, c) in p.terms() {
        let (lm, ph, s) = monomial_log(e, point);
        if lm == f64::NEG_INFINITY {
            continue;
        }
        scale = scale.max(s + c.ln_abs().abs());
        terms.push((lm + c.ln_abs(), ph + c.arg()));
    }
    let rounding = 4.0 * f64::EPSILON * scale.max(1.0);
    match terms.len() {
        0 => LogValue {
            log_modulus: f64::NEG_INFINITY,
            phase: 0.0,
            exact: true,
            error_bound: 0.0,
        },
        1 => LogValue {
            log_modulus: terms[0].0,
            phase: terms[0].1.rem_euclid(TAU),
            exact: true,
            error_bound: rounding,
        },
        n => {
            let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
            let mut re = 0.0;
            let mut im = 0.0;
            let mut mass = 0.0;
            for (lm, ph) in &terms {
                let w = (lm - top).exp();
                re += w * ph.cos();
                im += w * ph.sin();
                mass += w;
            }
            let modulus = re.hypot(im);
            // each term carries relative error ~rounding; cancellation amplifies by mass/|sum|
            let rel = (rounding + n as f64 * f64::EPSILON) * mass / modulus;
            LogValue {
                log_modulus: top + modulus.ln(),
                phase: im.atan2(re).rem_euclid(TAU),
                exact: false,
                error_bound: if modulus > 0.0 { rel.min(f64::INFINITY) } else { f64::INFINITY },
            }
        }
    }
}

/// Evaluates every component of `t` at a point given in log-polar form.
///
/// Fails with [`Error::Indeterminate`] when every component vanishes.
pub fn eval_log(t: &PolyTuple, point: &[LogPolar]) -> Result<Vec<LogValue>> {
    if point.len() != t.nvars() {
        return Err(Error::VariableMismatch {
            left: t.nvars(),
            right: point.len(),
        });
    }
    let vals: Vec<LogValue> = t
        .components()
        .iter()
        .map(|p| eval_poly_log(p, point))
        .collect();
    if vals.iter().all(LogValue::is_zero) {
        return Err(Error::Indeterminate);
    }
    Ok(vals)
}

/// Max-modulus normalized homogeneous coordinates from log-polar values.
pub fn normalize_log(vals: &[LogValue]) -> Vec<num_complex::Complex64> {
    let top = vals
        .iter()
        .map(|v| v.log_modulus)
        .fold(f64::NEG_INFINITY, f64::max);
    vals.iter()
        .map(|v| {
            if v.is_zero() {
                num_complex::Complex64::new(0.0, 0.0)
            } else {
                num_complex::Complex64::from_polar((v.log_modulus - top).exp(), v.phase)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GaussianRational;
    use num_complex::Complex64;

    #[test]
    fn huge_power_in_log_coordinates() {
        let k = 10u32;
        let p = SparsePoly::var(1, 0).pow(&(BigUint::from(1u32) << k));
        let t = PolyTuple::new(vec![p]).unwrap();
        let v = eval_log(&t, &[LogPolar::new(-0.1, 0.0)]).unwrap();
        assert!((v[0].log_modulus + 102.4).abs() < 1e-12);
        assert!(v[0].exact);
    }

    #[test]
    fn identity_returns_the_point() {
        let pt = [LogPolar::new(0.3, 1.0), LogPolar::new(-2.0, 2.5)];
        let v = eval_log(&PolyTuple::identity(2), &pt).unwrap();
        for (a, b) in v.iter().zip(&pt) {
            assert!((a.log_modulus - b.log_modulus).abs() < 1e-15);
            assert!((a.phase - b.phase).abs() < 1e-15);
        }
    }

    #[test]
    fn multi_term_matches_direct_evaluation() {
        let p = SparsePoly::from_terms(
            2,
            [
                (GaussianRational::from_parts((1, 2), (1, 1)), Exponents::from_u64s(&[3, 1])),
                (GaussianRational::from_integer(-2), Exponents::from_u64s(&[0, 2])),
                (GaussianRational::from_integer(1), Exponents::from_u64s(&[0, 0])),
            ],
        );
        let z = [Complex64::new(0.7, -0.2), Complex64::new(-0.4, 1.1)];
        let direct = p.eval(&z);
        let pt: Vec<_> = z.iter().map(|&w| LogPolar::from_complex(w)).collect();
        let v = eval_poly_log(&p, &pt);
        assert!((v.log_modulus - direct.norm().ln()).abs() < 1e-12);
        assert!(v.error_bound < 1e-10);
    }

    #[test]
    fn all_zero_is_indeterminate() {
        let t = PolyTuple::identity(2);
        assert_eq!(
            eval_log(&t, &[LogPolar::zero(), LogPolar::zero()]),
            Err(Error::Indeterminate)
        );
    }
}
