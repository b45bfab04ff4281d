use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::family::{radii, MapFamily};
use crate::error::Result;
use crate::geom::Domain;
use crate::poly::{tuple_content, Exponents, GaussianRational, PolyTuple, SparsePoly};
use crate::projmap::HomogRep;

type C = Complex64;
type Key = (usize, Exponents);

/// Unit coefficient vector of a representation, with weights `ρ^α`.
pub(crate) type CoeffVector = BTreeMap<Key, C>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepTrend {
    Cauchy,
    NonCauchy,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricPoint {
    pub k: u64,
    /// Distance between the normalized reps at the previous `k` and this one.
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepLimit {
    pub metric: Vec<MetricPoint>,
    pub trend: RepTrend,
    /// `exact`, `power`, `geometric` or `none`.
    pub decay: String,
    /// Predicted distance from the last rep to the limit.
    pub tail_estimate: f64,
    #[serde(serialize_with = "ser_rep")]
    pub limit: Option<HomogRep>,
    pub limit_source: Option<String>,
    /// Distance from the last normalized rep to the normalized limit.
    pub limit_distance: Option<f64>,
}

pub(crate) fn ser_rep<S: serde::Serializer>(r: &Option<HomogRep>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Tolerances of the Cauchy test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RepConfig {
    /// Distances at or below this count as zero.
    pub cauchy_tol: f64,
    /// Largest admissible predicted tail sum for a decaying series.
    pub tail_tol: f64,
}

impl Default for RepConfig {
    fn default() -> Self {
        RepConfig {
            cauchy_tol: 1e-8,
            tail_tol: 0.05,
        }
    }
}

/// Weighted coefficient frame of a family's domain: center and log radii.
pub(crate) struct Frame {
    center: Vec<GaussianRational>,
    neg_center: Vec<GaussianRational>,
    log_r: Vec<f64>,
    shifted: bool,
}

impl Frame {
    pub(crate) fn of(fam: &MapFamily) -> Self {
        let c = fam.domain.center();
        let center: Vec<GaussianRational> = c
            .iter()
            .map(|z| GaussianRational::from_f64(z.re, z.im).unwrap_or_default())
            .collect();
        let neg_center = center.iter().map(|g| -g).collect();
        Frame {
            shifted: center.iter().any(|g| !g.is_zero()),
            center,
            neg_center,
            log_r: radii(&fam.domain).iter().map(|r| r.ln()).collect(),
        }
    }

    fn local_tuple(&self, t: &PolyTuple) -> Vec<SparsePoly> {
        t.components()
            .iter()
            .map(|p| if self.shifted { p.shift(&self.center) } else { p.clone() })
            .collect()
    }

    fn log_weight(&self, e: &Exponents) -> f64 {
        e.iter()
            .zip(&self.log_r)
            .map(|(a, lr)| if a.is_zero() { 0.0 } else { a.to_f64().unwrap_or(f64::INFINITY) * lr })
            .sum()
    }

    /// Unit weighted coefficient vector of `t` about the domain center.
    pub(crate) fn vector(&self, t: &PolyTuple) -> CoeffVector {
        let mut raw = Vec::new();
        for (j, p) in self.local_tuple(t).into_iter().enumerate() {
            for (e, c) in p.terms() {
                raw.push(((j, e.clone()), c.ln_abs() + self.log_weight(e), c.arg()));
            }
        }
        let top = raw.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        let mut v: CoeffVector = raw
            .into_iter()
            .map(|(key, lw, ph)| (key, C::from_polar((lw - top).exp(), ph)))
            .collect();
        let norm = v.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.values_mut().for_each(|z| *z /= norm);
        }
        v
    }

    /// Local tuple in absolute coordinates from a weighted vector.
    fn tuple_from(&self, v: &CoeffVector, ncomps: usize, nvars: usize, snap_tol: f64) -> Option<PolyTuple> {
        let mut coeffs: Vec<(Key, C)> = v
            .iter()
            .map(|(key, z)| (key.clone(), *z * (-self.log_weight(&key.1)).exp()))
            .collect();
        let lead = coeffs.first()?.1;
        for c in coeffs.iter_mut() {
            c.1 /= lead;
        }
        let mut comps = vec![SparsePoly::zero(nvars); ncomps];
        for ((j, e), z) in coeffs {
            let tol = snap_tol * z.norm().max(1.0);
            let g = GaussianRational::new(snap(z.re, tol)?, snap(z.im, tol)?);
            comps[j] = &comps[j] + &SparsePoly::monomial(g, e);
        }
        let comps = comps
            .into_iter()
            .map(|p| if self.shifted { p.shift(&self.neg_center) } else { p })
            .collect();
        PolyTuple::new(comps).ok()
    }
}

/// Nearest fraction with denominator at most 64 when within `tol`, else the
/// float itself.
fn snap(x: f64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let mut best: Option<(f64, i64, i64)> = None;
    for q in 1..=64i64 {
        let p = (x * q as f64).round();
        let err = (x - p / q as f64).abs();
        if best.map_or(true, |b| err < b.0 - 1e-15) {
            best = Some((err, p as i64, q));
        }
    }
    match best {
        Some((err, p, q)) if err <= tol => Some(BigRational::new(BigInt::from(p), BigInt::from(q))),
        _ => BigRational::from_float(x),
    }
}

/// Projective distance between unit vectors: `min_λ ||a − λ b||` over `|λ| = 1`.
pub(crate) fn vector_distance(a: &CoeffVector, b: &CoeffVector) -> f64 {
    let mut ip = C::new(0.0, 0.0);
    for (key, x) in a {
        if let Some(y) = b.get(key) {
            ip += x.conj() * y;
        }
    }
    (2.0 - 2.0 * ip.norm()).max(0.0).sqrt()
}

/// Least-squares slope and residual of `y` against `x`.
fn fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let icpt = my - slope * mx;
    let res = x.iter().zip(y).map(|(a, b)| (b - icpt - slope * a).powi(2)).sum::<f64>();
    (slope, icpt, res)
}

/// Decay model of the tail: `(trend, model, predicted remaining sum)`.
fn tail_model(metric: &[MetricPoint], ks: &[u64], cfg: &RepConfig) -> (RepTrend, String, f64) {
    if metric.is_empty() {
        return (RepTrend::Inconclusive, "none".into(), f64::INFINITY);
    }
    let m = metric.len().min(5);
    let tail = &metric[metric.len() - m..];
    if tail.iter().all(|p| p.distance <= cfg.cauchy_tol) {
        return (RepTrend::Cauchy, "exact".into(), tail.iter().map(|p| p.distance).fold(0.0, f64::max));
    }
    let last = tail[m - 1].distance;
    if m >= 3 && last <= cfg.cauchy_tol && tail.windows(2).all(|w| w[1].distance <= w[0].distance) {
        return (RepTrend::Cauchy, "exact".into(), last);
    }
    if m >= 3 && metric.iter().rev().take(3).all(|p| p.distance >= 0.1) {
        return (RepTrend::NonCauchy, "none".into(), f64::INFINITY);
    }
    if m < 3 || tail.iter().any(|p| p.distance <= 0.0) {
        return (RepTrend::Inconclusive, "none".into(), f64::INFINITY);
    }
    // per-unit-k rates at interval midpoints
    let idx0 = metric.len() - m;
    let mut kk = Vec::new();
    let mut ls = Vec::new();
    for (i, p) in tail.iter().enumerate() {
        let hi = p.k as f64;
        let lo = ks[idx0 + i] as f64;
        kk.push(0.5 * (lo + hi));
        ls.push((p.distance / (hi - lo)).ln());
    }
    let last_rate = ls.last().unwrap().exp();
    let k_last = *ks.last().unwrap() as f64;
    let logk: Vec<f64> = kk.iter().map(|k| k.ln()).collect();
    let (pa, _, pres) = fit(&logk, &ls);
    let (gl, _, gres) = fit(&kk, &ls);
    let power = (-pa > 1.0).then(|| last_rate * k_last / (-pa - 1.0));
    let geometric = (gl < 0.0).then(|| last_rate / -gl);
    let pick = match (power, geometric) {
        (Some(p), Some(g)) => Some(if gres <= pres { ("geometric", g) } else { ("power", p) }),
        (Some(p), None) => Some(("power", p)),
        (None, Some(g)) => Some(("geometric", g)),
        (None, None) => None,
    };
    match pick {
        None => (RepTrend::NonCauchy, "none".into(), f64::INFINITY),
        Some((name, r)) if r <= cfg.tail_tol => (RepTrend::Cauchy, name.into(), r),
        Some((name, r)) => (RepTrend::Inconclusive, name.into(), r),
    }
}

/// Distances between consecutive normalized representations and, when the
/// series is Cauchy, a limit candidate.
///
/// Coefficients are taken about the domain center and weighted by `ρ^α`,
/// `ρ` the domain radii, so the vector norm is the Hardy norm of the rep on
/// the distinguished boundary. Consecutive vectors are phase-aligned.
pub fn rep_limit(fam: &MapFamily, cfg: &RepConfig) -> Result<RepLimit> {
    let frame = Frame::of(fam);
    let mut vecs = Vec::with_capacity(fam.ks.len());
    let mut last_rep = None;
    for &k in &fam.ks {
        let r = fam.rep(k)?;
        vecs.push(frame.vector(r.tuple()));
        last_rep = Some(r);
    }
    let metric: Vec<MetricPoint> = (1..vecs.len())
        .map(|i| MetricPoint {
            k: fam.ks[i],
            distance: vector_distance(&vecs[i - 1], &vecs[i]),
        })
        .collect();
    let (trend, decay, tail) = tail_model(&metric, &fam.ks, cfg);
    let mut out = RepLimit {
        metric,
        trend,
        decay,
        tail_estimate: tail,
        limit: None,
        limit_source: None,
        limit_distance: None,
    };
    if trend != RepTrend::Cauchy {
        return Ok(out);
    }
    let (Some(last), Some(rep)) = (vecs.last(), last_rep) else { return Ok(out) };
    let admissible = (2.0 * tail).max(10.0 * cfg.cauchy_tol);
    if let Some(closed) = &fam.limit {
        let d = vector_distance(last, &frame.vector(closed.tuple()));
        if d <= admissible {
            out.limit = Some(closed.clone());
            out.limit_source = Some("closed-form".into());
            out.limit_distance = Some(d);
            return Ok(out);
        }
    }
    let drop = (3.0 * tail).max(1e-12);
    let kept: CoeffVector = last.iter().filter(|(_, z)| z.norm() > drop).map(|(k, z)| (k.clone(), *z)).collect();
    let t = rep.tuple();
    if let Some(cand) = frame.tuple_from(&kept, t.len(), t.nvars(), 10.0 * tail + 1e-9) {
        let d = vector_distance(last, &frame.vector(&cand));
        if d <= admissible {
            out.limit = Some(HomogRep::local(cand));
            out.limit_source = Some("extrapolated".into());
            out.limit_distance = Some(d);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reducedness {
    pub reduced: bool,
    /// Common divisor of the components (`1` when the content is constant).
    pub divisor: String,
    pub divisor_degree: String,
    /// The divisor has no zero on the closed domain, so it is a unit there.
    pub unit: bool,
}

/// Content of a limit tuple.
pub fn reducedness_of_limit(t: &PolyTuple) -> Reducedness {
    let g = tuple_content(t);
    let deg = g.total_degree().unwrap_or_else(BigUint::zero);
    Reducedness {
        reduced: g.is_constant(),
        divisor: if g.is_constant() { "1".into() } else { g.to_string() },
        divisor_degree: deg.to_string(),
        unit: g.is_constant(),
    }
}

/// [`reducedness_of_limit`] up to units of the domain: a content whose
/// constant term about the center dominates the rest on the enclosing
/// polydisk does not vanish there.
pub fn reducedness_on(t: &PolyTuple, dom: &Domain) -> Reducedness {
    let mut r = reducedness_of_limit(t);
    if r.reduced {
        return r;
    }
    let g = tuple_content(t);
    let center: Option<Vec<GaussianRational>> = dom.center().iter().map(|z| GaussianRational::from_f64(z.re, z.im)).collect();
    let Some(center) = center else { return r };
    let local = g.shift(&center);
    let rad = radii(dom);
    let (mut constant, mut rest) = (0.0, 0.0);
    for (e, c) in local.terms() {
        let size = c.to_complex().norm()
            * e.iter().zip(&rad).map(|(a, r)| r.powf(a.to_f64().unwrap_or(f64::INFINITY))).product::<f64>();
        if e.iter().all(|a| a.is_zero()) {
            constant = size;
        } else {
            rest += size;
        }
    }
    if constant > rest {
        r.unit = true;
        r.reduced = true;
    }
    r
}
