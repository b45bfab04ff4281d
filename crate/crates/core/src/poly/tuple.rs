use num_bigint::BigUint;
use num_complex::Complex64;

use super::{poly_gcd, GaussianRational, SparsePoly};
use crate::error::{Error, Result};

/// Ordered tuple `(f^0, ..., f^N)` of polynomials in a common set of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyTuple {
    components: Vec<SparsePoly>,
    degree: Option<BigUint>,
}

impl PolyTuple {
    /// Fails with [`Error::ZeroTuple`] if every component vanishes.
    pub fn new(components: Vec<SparsePoly>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::ZeroTuple);
        };
        let n = first.nvars();
        if let Some(bad) = components.iter().find(|c| c.nvars() != n) {
            return Err(Error::VariableMismatch {
                left: n,
                right: bad.nvars(),
            });
        }
        if components.iter().all(SparsePoly::is_zero) {
            return Err(Error::ZeroTuple);
        }
        let degree = common_degree(&components);
        Ok(PolyTuple { components, degree })
    }

    /// Identity tuple `(z0, ..., z_{n-1})`.
    pub fn identity(nvars: usize) -> Self {
        Self::new((0..nvars).map(|i| SparsePoly::var(nvars, i)).collect()).unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SparsePoly {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<SparsePoly> {
        self.components
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree.is_some()
    }

    /// Common total degree when every term of every component has it.
    pub fn degree(&self) -> Option<&BigUint> {
        self.degree.as_ref()
    }

    /// Largest total degree over all components.
    pub fn max_degree(&self) -> BigUint {
        self.components
            .iter()
            .filter_map(SparsePoly::total_degree)
            .max()
            .unwrap_or_default()
    }

    pub fn is_monomial(&self) -> bool {
        self.components.iter().all(|c| c.is_zero() || c.is_monomial())
    }

    pub fn scale(&self, c: &GaussianRational) -> Result<Self> {
        Self::new(self.components.iter().map(|p| p.scale(c)).collect())
    }

    pub fn mul_poly(&self, g: &SparsePoly) -> Result<Self> {
        Self::new(self.components.iter().map(|p| p * g).collect())
    }

    /// Exact division of every component; `None` if `g` fails to divide one.
    pub fn div_exact(&self, g: &SparsePoly) -> Option<Self> {
        let comps = self
            .components
            .iter()
            .map(|p| if p.is_zero() { Some(p.clone()) } else { p.div_exact(g) })
            .collect::<Option<Vec<_>>>()?;
        Self::new(comps).ok()
    }

    /// Scalar multiple whose first nonzero component has leading coefficient 1.
    pub fn normalized(&self) -> Self {
        let lead = self
            .components
            .iter()
            .find_map(|p| p.leading_term().map(|(_, c)| c.clone()))
            .expect("nonzero tuple");
        self.scale(&lead.inv().unwrap()).unwrap()
    }

    pub fn eval(&self, z: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|p| p.eval(z)).collect()
    }

    /// Substitutes `subs` for the variables of every component.
    pub fn substitute(&self, subs: &[SparsePoly]) -> Result<Self> {
        Self::new(
            self.components
                .iter()
                .map(|p| p.substitute(subs))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

fn common_degree(components: &[SparsePoly]) -> Option<BigUint> {
    let mut deg: Option<BigUint> = None;
    for c in components {
        if c.is_zero() {
            continue;
        }
        if !c.is_homogeneous() {
            return None;
        }
        let d = c.total_degree().unwrap();
        match &deg {
            None => deg = Some(d),
            Some(e) if *e != d => return None,
            _ => {}
        }
    }
    deg
}

/// GCD of all components, normalized to leading coefficient 1.
pub fn tuple_content(t: &PolyTuple) -> SparsePoly {
    let mut g = SparsePoly::zero(t.nvars());
    for c in t.components() {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}
