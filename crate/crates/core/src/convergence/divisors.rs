use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::family::{MapFamily, Slice};
use crate::error::{Error, Result};
use crate::geom::{contour_roots, zero_count_contour, ContourSpec, Lift, PolyLift, ScalarFn};
use crate::poly::{GaussianRational, PolyTuple, SparsePoly};
use crate::projmap::HomogRep;

type C = Complex64;

/// Hyperplane `Σ a_j Z_j = 0` of `P^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub coeffs: Vec<GaussianRational>,
    pub label: String,
}

impl Hyperplane {
    /// `{Z_j = 0}` in `P^N`, given `N + 1` coordinates.
    pub fn coordinate(ncoords: usize, j: usize) -> Self {
        let coeffs = (0..ncoords)
            .map(|i| GaussianRational::from_integer((i == j) as i64))
            .collect();
        Hyperplane {
            coeffs,
            label: format!("Z{j}=0"),
        }
    }

    /// Hyperplane with small nonzero Gaussian-integer coefficients.
    pub fn random(ncoords: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut coeffs = Vec::with_capacity(ncoords);
        let mut parts = Vec::with_capacity(ncoords);
        for _ in 0..ncoords {
            let (re, im) = loop {
                let re: i64 = rng.gen_range(-3..=3);
                let im: i64 = rng.gen_range(-3..=3);
                if re != 0 || im != 0 {
                    break (re, im);
                }
            };
            coeffs.push(GaussianRational::from_parts((re, 1), (im, 1)));
            parts.push(format!("({re}{:+}i)Z{}", im, parts.len()));
        }
        Hyperplane {
            coeffs,
            label: parts.join(" + ") + "=0",
        }
    }

    /// `H ∘ F` as an exact polynomial.
    pub fn compose(&self, t: &PolyTuple) -> Result<SparsePoly> {
        if self.coeffs.len() != t.len() {
            return Err(Error::DimensionMismatch(format!(
                "hyperplane in P^{} vs map into P^{}",
                self.coeffs.len() - 1,
                t.len() - 1
            )));
        }
        let mut h = SparsePoly::zero(t.nvars());
        for (a, p) in self.coeffs.iter().zip(t.components()) {
            if !a.is_zero() {
                h = &h + &p.scale(a);
            }
        }
        Ok(h)
    }
}

/// Coordinate hyperplanes followed by `random` seeded ones.
pub fn hyperplane_panel(ncoords: usize, random: usize, seed: u64) -> Vec<Hyperplane> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Hyperplane> = (0..ncoords).map(|j| Hyperplane::coordinate(ncoords, j)).collect();
    for _ in 0..random {
        out.push(Hyperplane::random(ncoords, &mut rng));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperplaneCounts {
    pub hyperplane: String,
    /// Set when the limit maps into the hyperplane; no counts are taken.
    pub skipped: Option<String>,
    pub ks: Vec<u64>,
    /// Largest slice count per `k`; `None` when every slice was skipped.
    pub counts: Vec<Option<usize>>,
    pub bounded: bool,
    pub notes: Vec<String>,
}

/// Restriction of a polynomial to a slice, with its derivative.
fn slice_fn<'a>(lift: &'a PolyLift, s: &'a Slice) -> ScalarFn<'a> {
    let a = s.direction;
    ScalarFn::new(move |t| lift.eval(&s.point(t))[0]).with_derivative(move |t| lift.jet(&s.point(t)).df[a])
}

fn count_on_slice(lift: &PolyLift, s: &Slice) -> std::result::Result<usize, String> {
    let h = slice_fn(lift, s);
    match zero_count_contour(&h, &s.contour) {
        Ok(c) => Ok(c.count),
        Err(Error::VanishingOnContour { .. }) | Err(Error::ResidualTooLarge { .. }) => {
            let moved = ContourSpec {
                radius: s.contour.radius * 1.037,
                ..s.contour
            };
            zero_count_contour(&h, &moved)
                .map(|c| c.count)
                .map_err(|e| format!("slice through {:?} skipped: {e}", s.base))
        }
        Err(e) => Err(format!("slice through {:?} skipped: {e}", s.base)),
    }
}

/// Whether the counts stay bounded: eventually constant, or no growth
/// beyond the first half of the range.
pub(crate) fn counts_bounded(counts: &[Option<usize>]) -> bool {
    let v: Vec<usize> = counts.iter().flatten().copied().collect();
    if v.len() < 2 {
        return true;
    }
    let half = v.len() / 2;
    let tail = &v[half..];
    if tail.iter().all(|&c| c == tail[0]) {
        return true;
    }
    let head_max = v[..half.max(1)].iter().max().copied().unwrap_or(0);
    v.iter().max().copied().unwrap_or(0) <= head_max
}

/// Zero counts of `H ∘ f_k` on the slices, per `k`.
pub fn divisor_count_bound(
    fam: &MapFamily,
    h: &Hyperplane,
    slices: &[Slice],
    limit: Option<&HomogRep>,
) -> Result<HyperplaneCounts> {
    let mut out = HyperplaneCounts {
        hyperplane: h.label.clone(),
        skipped: None,
        ks: fam.ks.clone(),
        counts: Vec::new(),
        bounded: true,
        notes: Vec::new(),
    };
    if let Some(l) = limit {
        if h.compose(l.tuple())?.is_zero() {
            out.skipped = Some("the limit maps into the hyperplane".into());
            out.ks.clear();
            return Ok(out);
        }
    }
    let reps: Vec<HomogRep> = fam.ks.iter().map(|&k| fam.rep(k)).collect::<Result<_>>()?;
    let per_k: Vec<(Option<usize>, Vec<String>)> = reps
        .par_iter()
        .zip(fam.ks.par_iter())
        .map(|(r, &k)| -> Result<(Option<usize>, Vec<String>)> {
            let hk = h.compose(r.tuple())?;
            if hk.is_zero() {
                return Ok((None, vec![format!("k={k}: f_k maps into the hyperplane")]));
            }
            let lift = PolyLift::new(&PolyTuple::new(vec![hk])?)?;
            let mut best: Option<usize> = None;
            let mut notes = Vec::new();
            for s in slices {
                match count_on_slice(&lift, s) {
                    Ok(c) => best = Some(best.map_or(c, |b| b.max(c))),
                    Err(msg) => notes.push(format!("k={k}: {msg}")),
                }
            }
            Ok((best, notes))
        })
        .collect::<Result<_>>()?;
    for (c, notes) in per_k {
        out.counts.push(c);
        out.notes.extend(notes);
    }
    out.bounded = counts_bounded(&out.counts);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationPoint {
    pub k: u64,
    /// Sampled Hausdorff distance; `None` stands for an empty pullback.
    pub distance: Option<f64>,
    pub points: [usize; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub hyperplanes: [String; 2],
    pub per_k: Vec<SeparationPoint>,
    /// Infimum over the `k` with both pullbacks nonempty.
    pub infimum: Option<f64>,
    pub slices: usize,
    pub notes: Vec<String>,
}

fn pullback_points(hk: &SparsePoly, slices: &[Slice], notes: &mut Vec<String>) -> Result<Vec<Vec<C>>> {
    if hk.is_zero() {
        return Err(Error::InvalidInput("the member maps into the hyperplane".into()));
    }
    let lift = PolyLift::new(&PolyTuple::new(vec![hk.clone()])?)?;
    let mut pts = Vec::new();
    for s in slices {
        let f = slice_fn(&lift, s);
        let roots = contour_roots(&f, &s.contour).or_else(|_| {
            contour_roots(
                &f,
                &ContourSpec {
                    radius: s.contour.radius * 1.037,
                    ..s.contour
                },
            )
        });
        match roots {
            Ok(rs) => pts.extend(rs.iter().map(|r| s.point(r.z()))),
            Err(e) => notes.push(format!("slice through {:?} skipped: {e}", s.base)),
        }
    }
    Ok(pts)
}

fn dist(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn hausdorff(a: &[Vec<C>], b: &[Vec<C>]) -> f64 {
    let one = |p: &[Vec<C>], q: &[Vec<C>]| {
        p.iter()
            .map(|x| q.iter().map(|y| dist(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// Sampled Hausdorff distance between the pullbacks of two hyperplanes,
/// per `k`, located by root finding on the slices.
pub fn uniform_separation(
    fam: &MapFamily,
    h0: &Hyperplane,
    h1: &Hyperplane,
    slices: &[Slice],
) -> Result<SeparationReport> {
    let mut notes = Vec::new();
    let mut per_k = Vec::new();
    for &k in &fam.ks {
        let r = fam.rep(k)?;
        let p0 = pullback_points(&h0.compose(r.tuple())?, slices, &mut notes)?;
        let p1 = pullback_points(&h1.compose(r.tuple())?, slices, &mut notes)?;
        let distance = (!p0.is_empty() && !p1.is_empty()).then(|| hausdorff(&p0, &p1));
        per_k.push(SeparationPoint {
            k,
            distance,
            points: [p0.len(), p1.len()],
        });
    }
    let infimum = per_k.iter().filter_map(|p| p.distance).reduce(f64::min);
    Ok(SeparationReport {
        hyperplanes: [h0.label.clone(), h1.label.clone()],
        per_k,
        infimum,
        slices: slices.len(),
        notes,
    })
}
