//! Multivariate GCD over Q(i).
//!
//! Monomial content is split off first (that is all the iterate families ever
//! need). Remaining primitive parts go through a recursive subresultant
//! pseudo-remainder sequence in the highest variable present.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{Exponents, SparsePoly};

/// Greatest common divisor, normalized so the lexicographically greatest
/// term has coefficient 1. `gcd(0, b)` is `b` normalized; `gcd(0, 0)` is 0.
pub fn poly_gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    assert_eq!(a.nvars(), b.nvars(), "variable count mismatch");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.meet(&mb);
    let a1 = a.div_monomial(&ma).unwrap();
    let b1 = b.div_monomial(&mb).unwrap();
    let rest = gcd_no_monomial(&a1, &b1);
    rest.mul_monomial(&m).monic()
}

/// GCD of polynomials with no common monomial factor worth tracking.
fn gcd_no_monomial(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() || a.is_monomial() || b.is_monomial() {
        // monomial content was already split off by the caller
        return SparsePoly::one(n);
    }
    let Some(v) = main_variable(a, b) else {
        return SparsePoly::one(n);
    };
    let in_a = a.degree_in(v).map_or(false, |d| !d.is_zero());
    let in_b = b.degree_in(v).map_or(false, |d| !d.is_zero());
    match (in_a, in_b) {
        (true, false) => poly_gcd(&content_in(a, v), b),
        (false, true) => poly_gcd(a, &content_in(b, v)),
        _ => {
            let ca = content_in(a, v);
            let cb = content_in(b, v);
            let pa = a.div_exact(&ca).expect("content divides");
            let pb = b.div_exact(&cb).expect("content divides");
            let c = poly_gcd(&ca, &cb);
            let g = primitive_gcd(&pa, &pb, v);
            (&c * &g).monic()
        }
    }
}

fn main_variable(a: &SparsePoly, b: &SparsePoly) -> Option<usize> {
    (0..a.nvars()).rev().find(|&v| {
        a.degree_in(v).map_or(false, |d| !d.is_zero()) || b.degree_in(v).map_or(false, |d| !d.is_zero())
    })
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
pub(crate) fn content_in(p: &SparsePoly, v: usize) -> SparsePoly {
    let mut g = SparsePoly::zero(p.nvars());
    for c in p.univariate_view(v).values() {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

fn primitive_part(p: &SparsePoly, v: usize) -> SparsePoly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn deg(p: &SparsePoly, v: usize) -> BigUint {
    p.degree_in(v).unwrap_or_default()
}

/// Pseudo-remainder `lc(b)^(δ+1) a mod b` in the variable `v`.
fn prem(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let db = deg(b, v);
    let delta = &deg(a, v) - &db;
    let lcb = b.lc_in(v);
    let mut r = a.clone();
    let mut steps = BigUint::zero();
    while !r.is_zero() && deg(&r, v) >= db {
        let dr = deg(&r, v);
        let lcr = r.lc_in(v);
        let mut shift = Exponents::zeros(r.nvars());
        shift.set(v, &dr - &db);
        r = &(&lcb * &r) - &(&lcr * &b.mul_monomial(&shift));
        steps += 1u32;
    }
    let extra = &delta + 1u32;
    if extra > steps {
        r = &r * &lcb.pow(&(extra - steps));
    }
    r
}

/// GCD of two polynomials primitive in `v`, both of positive degree in `v`.
fn primitive_gcd(a: &SparsePoly, b: &SparsePoly, v: usize) -> SparsePoly {
    let (mut a, mut b) = if deg(a, v) >= deg(b, v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let n = a.nvars();
    let mut g = SparsePoly::one(n);
    let mut h = SparsePoly::one(n);
    loop {
        let delta = &deg(&a, v) - &deg(&b, v);
        let r = prem(&a, &b, v);
        if r.is_zero() {
            return primitive_part(&b, v).monic();
        }
        if deg(&r, v).is_zero() {
            return SparsePoly::one(n);
        }
        let divisor = &g * &h.pow(&delta);
        a = b;
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.lc_in(v);
        if !delta.is_zero() {
            let num = g.pow(&delta);
            h = if delta.is_one() {
                num
            } else {
                num.div_exact(&h.pow(&(&delta - 1u32)))
                    .expect("subresultant division is exact")
            };
        }
    }
}
