use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{Exponents, GaussianRational};
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// Terms are kept in a `BTreeMap` keyed by lexicographically ordered exponent
/// vectors and zero coefficients are never stored, so `==` is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponents, GaussianRational>,
}

/// Which ring operation `poly_arith` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
}

/// Checked sum or product.
pub fn poly_arith(a: &SparsePoly, b: &SparsePoly, op: ArithOp) -> Result<SparsePoly> {
    if a.nvars != b.nvars {
        return Err(Error::VariableMismatch {
            left: a.nvars,
            right: b.nvars,
        });
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Mul => a * b,
    })
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(c, Exponents::zeros(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::monomial(GaussianRational::one(), Exponents::unit(nvars, var))
    }

    pub fn monomial(c: GaussianRational, exps: Exponents) -> Self {
        let nvars = exps.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        SparsePoly { nvars, terms }
    }

    /// Builds from `(coefficient, exponents)` pairs, merging duplicates.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (GaussianRational, Exponents)>,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.nvars(), nvars, "exponent length mismatch");
            p.add_term(e, &c);
        }
        p
    }

    /// Convenience constructor from integer coefficients and small exponents.
    pub fn from_int_terms(nvars: usize, terms: &[(i64, &[u64])]) -> Self {
        Self::from_terms(
            nvars,
            terms
                .iter()
                .map(|(c, e)| (GaussianRational::from_integer(*c), Exponents::from_u64s(e))),
        )
    }

    fn add_term(&mut self, e: Exponents, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Nonzero and free of variables.
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_zero()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> Option<&GaussianRational> {
        self.terms.get(e)
    }

    /// Term with the lexicographically greatest exponent vector.
    pub fn leading_term(&self) -> Option<(&Exponents, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<BigUint> {
        self.terms.keys().map(Exponents::total_degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exponents::total_degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn degree_in(&self, var: usize) -> Option<BigUint> {
        self.terms.keys().map(|e| e.get(var).clone()).max()
    }

    /// Coefficient of `x_var^d` as a polynomial in the remaining variables
    /// (same variable count, exponent of `var` zeroed).
    pub fn coeff_in(&self, var: usize, d: &BigUint) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.get(var) == d {
                let mut e2 = e.clone();
                e2.set(var, BigUint::zero());
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `var`.
    pub fn lc_in(&self, var: usize) -> SparsePoly {
        match self.degree_in(var) {
            Some(d) => self.coeff_in(var, &d),
            None => SparsePoly::zero(self.nvars),
        }
    }

    /// Distinct powers of `var` with their coefficient polynomials.
    pub fn univariate_view(&self, var: usize) -> BTreeMap<BigUint, SparsePoly> {
        let mut out: BTreeMap<BigUint, SparsePoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.get(var).clone();
            let mut e2 = e.clone();
            e2.set(var, BigUint::zero());
            out.entry(d)
                .or_insert_with(|| SparsePoly::zero(self.nvars))
                .terms
                .insert(e2, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, e: &Exponents) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.add(e), v.clone()))
                .collect(),
        }
    }

    /// Componentwise minimum of all exponent vectors: the largest monomial
    /// dividing every term.
    pub fn monomial_content(&self) -> Exponents {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Exponents::zeros(self.nvars);
        };
        it.fold(first.clone(), |acc, e| acc.meet(e))
    }

    /// Divides by a monomial that divides every term.
    pub fn div_monomial(&self, e: &Exponents) -> Option<SparsePoly> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            terms.insert(k.checked_sub(e)?, v.clone());
        }
        Some(SparsePoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// Scalar multiple with leading (lex greatest) coefficient 1.
    pub fn monic(&self) -> SparsePoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, exp: &BigUint) -> SparsePoly {
        if exp.is_zero() {
            return SparsePoly::one(self.nvars);
        }
        if self.is_monomial() {
            let (e, c) = self.leading_term().unwrap();
            return SparsePoly::monomial(c.pow(exp), e.scale(exp));
        }
        let mut base = self.clone();
        let mut acc = SparsePoly::one(self.nvars);
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

    pub fn pow_u64(&self, exp: u64) -> SparsePoly {
        self.pow(&BigUint::from(exp))
    }

    /// Exact division. Returns `None` when `divisor` does not divide `self`.
    ///
    /// Lexicographic order is a monomial order, so an exact quotient exists
    /// only if every step's leading term is divisible by `lt(divisor)`.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Option<SparsePoly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (de, dc) = divisor.leading_term()?;
        if divisor.is_monomial() {
            let inv = dc.inv().unwrap();
            return self.div_monomial(de).map(|p| p.scale(&inv));
        }
        let dinv = dc.inv().unwrap();
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading_term() {
            let qe = re.checked_sub(de)?;
            let qc = rc * &dinv;
            let qterm = SparsePoly::monomial(qc.clone(), qe.clone());
            rem = &rem - &(&divisor.mul_monomial(&qe)).scale(&qc);
            quot = &quot + &qterm;
        }
        Some(quot)
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let d = e.get(var);
            if d.is_zero() {
                continue;
            }
            let mut e2 = e.clone();
            e2.set(var, d - 1u32);
            let factor = GaussianRational::from_real(BigRational::from_integer(d.clone().into()));
            out.add_term(e2, &(c * &factor));
        }
        out
    }

    /// Substitutes `subs[i]` for variable `i`. All substitutes share a variable
    /// count, which becomes the variable count of the result.
    pub fn substitute(&self, subs: &[SparsePoly]) -> Result<SparsePoly> {
        if subs.len() != self.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: subs.len(),
            });
        }
        let m = subs.first().map(|s| s.nvars).unwrap_or(0);
        if subs.iter().any(|s| s.nvars != m) {
            return Err(Error::DimensionMismatch(
                "substituted polynomials have different variable counts".into(),
            ));
        }
        let mut cache: Vec<BTreeMap<BigUint, SparsePoly>> = vec![BTreeMap::new(); self.nvars];
        let mut out = SparsePoly::zero(m);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(m, c.clone());
            for (i, d) in e.iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let p = cache[i]
                    .entry(d.clone())
                    .or_insert_with(|| subs[i].pow(d))
                    .clone();
                term = &term * &p;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Sets `x_var = 1` and drops the variable.
    pub fn dehomogenize(&self, var: usize) -> SparsePoly {
        SparsePoly::from_terms(
            self.nvars - 1,
            self.terms.iter().map(|(e, c)| (c.clone(), e.remove(var))),
        )
    }

    /// Sets `x_var = 0` (keeps the variable count).
    pub fn restrict_zero(&self, var: usize) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.get(var).is_zero())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Homogenizes with a new variable inserted at position `var`.
    pub fn homogenize(&self, var: usize) -> SparsePoly {
        let Some(d) = self.total_degree() else {
            return SparsePoly::zero(self.nvars + 1);
        };
        SparsePoly::from_terms(
            self.nvars + 1,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.insert_zero(var);
                e2.set(var, &d - e.total_degree());
                (c.clone(), e2)
            }),
        )
    }

    /// Floating point evaluation.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_complex() * monomial_value(e, z))
            .sum()
    }

    /// Exact evaluation at a point with Gaussian rational coordinates.
    pub fn eval_exact(&self, z: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (zi, ei) in z.iter().zip(e.iter()) {
                if ei.is_zero() {
                    continue;
                }
                if zi.is_zero() {
                    t = GaussianRational::zero();
                    break;
                }
                t = &t * &zi.pow(ei);
            }
            acc += &t;
        }
        acc
    }

    /// Affine change of variables `x_i -> x_i + shift_i`.
    pub fn shift(&self, shift: &[GaussianRational]) -> SparsePoly {
        let subs: Vec<SparsePoly> = (0..self.nvars)
            .map(|i| &SparsePoly::var(self.nvars, i) + &SparsePoly::constant(self.nvars, shift[i].clone()))
            .collect();
        self.substitute(&subs).expect("matching variable count")
    }
}

pub(crate) fn cpow(z: Complex64, e: &BigUint) -> Complex64 {
    if e.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    match e.to_u32() {
        Some(k) if k < (1 << 20) => z.powu(k),
        _ => {
            if z == Complex64::new(0.0, 0.0) {
                return z;
            }
            let ef = e.to_f64().unwrap_or(f64::INFINITY);
            Complex64::from_polar(z.norm().powf(ef), z.arg() * ef)
        }
    }
}

pub(crate) fn monomial_value(e: &Exponents, z: &[Complex64]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for (zi, ei) in z.iter().zip(e.iter()) {
        if !ei.is_zero() {
            v *= cpow(*zi, ei);
        }
    }
    v
}

impl<'a> Add<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePoly> for &'a SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = SparsePoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-GaussianRational::one())
    }
}

/// Human-readable form, e.g. `z0^2*z1 - 1/2*z2`.
impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, d)| !d.is_zero())
                .map(|(i, d)| {
                    if d.is_one() {
                        format!("z{i}")
                    } else {
                        format!("z{i}^{d}")
                    }
                })
                .collect();
            let cs = c.to_string();
            let coef = if mono.is_empty() {
                cs.clone()
            } else if c.is_one() {
                String::new()
            } else if cs.contains(['+', 'i']) || cs[1..].contains('-') {
                format!("({cs})*")
            } else {
                format!("{cs}*")
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{coef}{}", mono.join("*"))?;
        }
        Ok(())
    }
}
