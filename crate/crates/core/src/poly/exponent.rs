use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Exponent vector of a monomial. Entries are arbitrary precision so iterate
/// exponents like `2^(k+1) - 1` never overflow.
///
/// Ordering is lexicographic, which is a monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponents(Vec<BigUint>);

impl Exponents {
    pub fn zeros(nvars: usize) -> Self {
        Exponents(vec![BigUint::zero(); nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = Self::zeros(nvars);
        e.0[var] = BigUint::from(1u32);
        e
    }

    pub fn from_u64s(exps: &[u64]) -> Self {
        Exponents(exps.iter().map(|&e| BigUint::from(e)).collect())
    }

    pub fn from_vec(exps: Vec<BigUint>) -> Self {
        Exponents(exps)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, var: usize) -> &BigUint {
        &self.0[var]
    }

    pub fn set(&mut self, var: usize, e: BigUint) {
        self.0[var] = e;
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &BigUint> {
        self.0.iter()
    }

    pub fn total_degree(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, `None` unless `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponents) -> Option<Exponents> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Exponents(out))
    }

    pub fn divides(&self, other: &Exponents) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn meet(&self, other: &Exponents) -> Exponents {
        Exponents(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.min(b).clone())
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigUint) -> Exponents {
        Exponents(self.0.iter().map(|a| a * s).collect())
    }

    /// Variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|e| e.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }

    /// Drop variable `var`.
    pub fn remove(&self, var: usize) -> Exponents {
        let mut v = self.0.clone();
        v.remove(var);
        Exponents(v)
    }

    /// Insert a zero exponent at position `var`.
    pub fn insert_zero(&self, var: usize) -> Exponents {
        let mut v = self.0.clone();
        v.insert(var, BigUint::zero());
        Exponents(v)
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
