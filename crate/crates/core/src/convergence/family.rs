use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::{ContourSpec, Domain, ZeroSet};
use crate::poly::{GaussianRational, PolyTuple};
use crate::projmap::{common_zeros_local, reduce_rep, HomogRep};

type Generator = dyn Fn(u64) -> Result<HomogRep> + Send + Sync;

/// Sequence `k ↦ f_k` of local representations on a domain of `C^n`.
#[derive(Clone)]
pub struct MapFamily {
    pub name: String,
    generator: Arc<Generator>,
    pub ks: Vec<u64>,
    /// Closed-form limit candidate, if one is known.
    pub limit: Option<HomogRep>,
    pub domain: Domain,
    /// Source chart the local coordinates refer to, for families coming
    /// from projective maps.
    pub chart: Option<usize>,
    /// Slices used for divisor counts; defaults from the domain when empty.
    pub slices: Vec<Slice>,
    /// `k` values at which masses are computed; defaults to the last three.
    pub mass_ks: Option<Vec<u64>>,
    cache: Arc<Mutex<BTreeMap<u64, HomogRep>>>,
}

impl fmt::Debug for MapFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapFamily")
            .field("name", &self.name)
            .field("ks", &self.ks)
            .field("limit", &self.limit.as_ref().map(|l| l.to_string()))
            .field("domain", &self.domain)
            .finish()
    }
}

/// Complex line through `base` in coordinate `direction`, cut to a disk.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Slice {
    pub direction: usize,
    #[serde(serialize_with = "super::ser_points")]
    pub base: Vec<Complex64>,
    pub contour: ContourSpec,
}

impl Slice {
    pub fn point(&self, t: Complex64) -> Vec<Complex64> {
        let mut z = self.base.clone();
        z[self.direction] = t;
        z
    }
}

impl MapFamily {
    pub fn new(
        name: impl Into<String>,
        domain: Domain,
        ks: Vec<u64>,
        generator: impl Fn(u64) -> Result<HomogRep> + Send + Sync + 'static,
    ) -> Self {
        let mut ks = ks;
        ks.sort_unstable();
        ks.dedup();
        MapFamily {
            name: name.into(),
            generator: Arc::new(generator),
            ks,
            limit: None,
            domain,
            chart: None,
            slices: Vec::new(),
            mass_ks: None,
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn with_limit(mut self, limit: HomogRep) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn with_slices(mut self, slices: Vec<Slice>) -> Self {
        self.slices = slices;
        self
    }

    pub fn with_mass_ks(mut self, ks: Vec<u64>) -> Self {
        self.mass_ks = Some(ks);
        self
    }

    pub fn with_chart(mut self, chart: usize) -> Self {
        self.chart = Some(chart);
        self
    }

    pub fn with_ks(mut self, ks: Vec<u64>) -> Self {
        let mut ks = ks;
        ks.sort_unstable();
        ks.dedup();
        self.ks = ks;
        self
    }

    /// Same family with every representation multiplied by `c`.
    pub fn scaled(&self, c: GaussianRational) -> Self {
        let inner = self.clone();
        let mut out = MapFamily::new(self.name.clone(), self.domain.clone(), self.ks.clone(), move |k| {
            let r = inner.raw(k)?;
            Ok(HomogRep::local(r.tuple().scale(&c)?))
        });
        out.limit = self.limit.clone();
        out.chart = self.chart;
        out.slices = self.slices.clone();
        out.mass_ks = self.mass_ks.clone();
        out
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn raw(&self, k: u64) -> Result<HomogRep> {
        let r = (self.generator)(k)?;
        if r.is_projective() {
            return Err(Error::InvalidInput("family members must be local representations".into()));
        }
        if r.source_dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "member in {} variables on a domain of C^{}",
                r.source_dim(),
                self.dim()
            )));
        }
        Ok(r)
    }

    /// Reduced representation of `f_k`.
    pub fn rep(&self, k: u64) -> Result<HomogRep> {
        if let Some(r) = self.cache.lock().expect("cache lock").get(&k) {
            return Ok(r.clone());
        }
        let r = reduce_rep(&self.raw(k)?)?;
        self.cache.lock().expect("cache lock").insert(k, r.clone());
        Ok(r)
    }

    /// Slices for divisor counts: the configured ones, or one disk of half
    /// the domain radius per coordinate direction through two fixed base
    /// points.
    pub fn slice_panel(&self) -> Vec<Slice> {
        if !self.slices.is_empty() {
            return self.slices.clone();
        }
        let n = self.dim();
        let c = self.domain.center().to_vec();
        let radii = radii(&self.domain);
        let mut out = Vec::new();
        for a in 0..n {
            let phases: &[f64] = if n == 1 { &[0.0] } else { &[0.7, 2.3] };
            for &ph in phases {
                let mut base = c.clone();
                for b in 0..n {
                    if b != a {
                        base[b] += Complex64::from_polar(0.3 * radii[b], ph + 0.9 * b as f64);
                    }
                }
                out.push(Slice {
                    direction: a,
                    base,
                    contour: ContourSpec::new(c[a], 0.5 * radii[a]),
                });
            }
        }
        out
    }
}

/// Per-coordinate radii of the smallest centered polydisk containing the domain.
pub(crate) fn radii(d: &Domain) -> Vec<f64> {
    match d {
        Domain::Polydisk { radii, .. } => radii.clone(),
        Domain::Ball { radius, center } => vec![*radius; center.len()],
    }
}

/// Zero set of a local tuple for the tube cut, when it can be found exactly.
pub(crate) fn zero_set_of(t: &PolyTuple) -> ZeroSet {
    let Ok(rep) = common_zeros_local(t) else { return ZeroSet::Unknown };
    if !rep.is_conclusive() {
        return ZeroSet::Unknown;
    }
    let n = t.nvars();
    let mut pieces: Vec<Vec<usize>> = rep.components.iter().map(|c| c.zero_vars.clone()).collect();
    if !rep.exact_points.is_empty() {
        pieces.push((0..n).collect());
    }
    if pieces.is_empty() {
        ZeroSet::Empty
    } else {
        ZeroSet::Subspaces {
            base: vec![Complex64::new(0.0, 0.0); n],
            pieces,
        }
    }
}
