use num_bigint::BigUint;
use serde::Serialize;

use super::MonomialMap;
use crate::error::{Error, Result};
use crate::poly::{tuple_content, tuple_to_text, PolyTuple, SparsePoly};

/// Where the variables of a representation live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// Homogeneous coordinates `z0, ..., zn` of `P^n`; components homogeneous.
    Projective,
    /// Affine coordinates of an open set of `C^n`; components arbitrary.
    Local,
}

/// Representation `[f^0 : ... : f^N]` of a meromorphic map into `P^N`, either
/// a rational map `P^n -> P^N` in homogeneous coordinates or a local
/// representation on a domain of `C^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogRep {
    tuple: PolyTuple,
    source: Source,
    reduced: bool,
}

impl HomogRep {
    /// Rational map of projective spaces. The reduced flag starts unset.
    pub fn new(tuple: PolyTuple) -> Result<Self> {
        if !tuple.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(HomogRep {
            tuple,
            source: Source::Projective,
            reduced: false,
        })
    }

    /// Local representation on a domain of `C^n`.
    pub fn local(tuple: PolyTuple) -> Self {
        HomogRep {
            tuple,
            source: Source::Local,
            reduced: false,
        }
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn is_projective(&self) -> bool {
        self.source == Source::Projective
    }

    pub fn from_components(components: Vec<SparsePoly>) -> Result<Self> {
        Self::new(PolyTuple::new(components)?)
    }

    /// Builds from integer-coefficient terms, one slice per component.
    pub fn from_int_terms(nvars: usize, comps: &[&[(i64, &[u64])]]) -> Result<Self> {
        Self::from_components(
            comps
                .iter()
                .map(|t| SparsePoly::from_int_terms(nvars, t))
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        HomogRep {
            tuple: PolyTuple::identity(n + 1),
            source: Source::Projective,
            reduced: true,
        }
    }

    pub fn tuple(&self) -> &PolyTuple {
        &self.tuple
    }

    pub fn component(&self, j: usize) -> &SparsePoly {
        self.tuple.component(j)
    }

    pub fn source_dim(&self) -> usize {
        match self.source {
            Source::Projective => self.tuple.nvars() - 1,
            Source::Local => self.tuple.nvars(),
        }
    }

    pub fn target_dim(&self) -> usize {
        self.tuple.len() - 1
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Common homogeneous degree of the components.
    pub fn algebraic_degree(&self) -> BigUint {
        self.tuple.degree().cloned().unwrap_or_default()
    }

    pub fn is_monomial(&self) -> bool {
        self.tuple.is_monomial()
    }

    /// Local representation in the source chart `U_j` (sets `z_j = 1`).
    pub fn dehomogenize(&self, j: usize) -> Result<HomogRep> {
        if !self.is_projective() {
            return Err(Error::InvalidInput("representation is already local".into()));
        }
        let t = PolyTuple::new(
            self.tuple
                .components()
                .iter()
                .map(|p| p.dehomogenize(j))
                .collect(),
        )?;
        Ok(HomogRep {
            tuple: t,
            source: Source::Local,
            reduced: false,
        })
    }

    pub fn to_text(&self) -> String {
        tuple_to_text(&self.tuple)
    }

    /// Serializable summary.
    pub fn summary(&self) -> RepSummary {
        RepSummary {
            components: self.tuple.components().iter().map(|p| p.to_string()).collect(),
            degree: self.algebraic_degree().to_string(),
            source: self.source,
            reduced: self.reduced,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepSummary {
    pub components: Vec<String>,
    pub degree: String,
    pub source: Source,
    pub reduced: bool,
}

impl std::fmt::Display for HomogRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.tuple.components().iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// Divides out the common content and fixes the scalar so that the first
/// nonzero component has leading coefficient 1.
pub fn reduce_rep(r: &HomogRep) -> Result<HomogRep> {
    let g = tuple_content(&r.tuple);
    let t = r.tuple.div_exact(&g).ok_or(Error::ZeroTuple)?;
    Ok(HomogRep {
        tuple: t.normalized(),
        source: r.source,
        reduced: true,
    })
}

/// `g ∘ f`, reduced. `g` must be a map of projective spaces; the result
/// lives on the source of `f`.
pub fn compose_reduce(g: &HomogRep, f: &HomogRep) -> Result<HomogRep> {
    if !g.is_projective() {
        return Err(Error::InvalidInput("outer map must be projective".into()));
    }
    if g.source_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose: source P^{} vs target P^{}",
            g.source_dim(),
            f.target_dim()
        )));
    }
    let t = g.tuple.substitute(f.tuple.components())?;
    reduce_rep(&HomogRep {
        tuple: t,
        source: f.source,
        reduced: false,
    })
}

/// `k`-fold iterate, reduced. Monomial maps go through exponent-matrix
/// powering; everything else through repeated squaring of `compose_reduce`.
pub fn iterate_closed(f: &HomogRep, k: u64) -> Result<HomogRep> {
    if k == 0 {
        return Err(Error::InvalidInput("iterate count must be at least 1".into()));
    }
    if !f.is_projective() || f.source_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch("iteration needs a self-map of P^n".into()));
    }
    if let Ok(m) = MonomialMap::from_rep(f) {
        return m.power(&BigUint::from(k))?.to_rep();
    }
    let base = reduce_rep(f)?;
    let mut acc: Option<HomogRep> = None;
    let mut sq = base;
    let mut e = k;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(a) => compose_reduce(&a, &sq)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        sq = compose_reduce(&sq, &sq)?;
    }
    Ok(acc.unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_f() -> HomogRep {
        HomogRep::from_int_terms(
            3,
            &[&[(1, &[2, 1, 0])], &[(1, &[0, 3, 0])], &[(1, &[2, 0, 1])]],
        )
        .unwrap()
    }

    #[test]
    fn strips_common_factor() {
        let r = HomogRep::from_int_terms(
            3,
            &[&[(1, &[1, 1, 0])], &[(1, &[0, 2, 0])], &[(1, &[0, 1, 1])]],
        )
        .unwrap();
        assert_eq!(reduce_rep(&r).unwrap(), HomogRep::identity(2));
    }

    #[test]
    fn second_iterate_by_substitution() {
        let f = map_f();
        let ff = compose_reduce(&f, &f).unwrap();
        let expect = HomogRep::from_int_terms(
            3,
            &[&[(1, &[4, 3, 0])], &[(1, &[0, 7, 0])], &[(1, &[6, 0, 1])]],
        )
        .unwrap();
        assert_eq!(ff, reduce_rep(&expect).unwrap());
    }

    #[test]
    fn non_self_map_composition_is_rejected() {
        let g = HomogRep::identity(1);
        assert!(matches!(
            compose_reduce(&g, &map_f()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn local_rep_with_coprime_components_is_unchanged() {
        // [z1 : z1 - 1/10 : z2 : z3^2] on C^3
        let t = PolyTuple::new(vec![
            SparsePoly::var(3, 0),
            &SparsePoly::var(3, 0) - &SparsePoly::constant(3, crate::poly::GaussianRational::from_ratio(1, 10)),
            SparsePoly::var(3, 1),
            SparsePoly::var(3, 2).pow_u64(2),
        ])
        .unwrap();
        let r = HomogRep::local(t.clone());
        let red = reduce_rep(&r).unwrap();
        assert_eq!(red.tuple(), &t);
        assert!(red.is_reduced());
    }

    #[test]
    fn non_monomial_iterates_by_squaring() {
        // [z0^2 + z1^2 : z1^2]
        let f = HomogRep::from_int_terms(2, &[&[(1, &[2, 0]), (1, &[0, 2])], &[(1, &[0, 2])]])
            .unwrap();
        let f3 = iterate_closed(&f, 3).unwrap();
        let step = compose_reduce(&f, &compose_reduce(&f, &f).unwrap()).unwrap();
        assert_eq!(f3, step);
        assert_eq!(f3.algebraic_degree(), BigUint::from(8u32));
    }
}
