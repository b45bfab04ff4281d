//! Common zero locus of the components of a reduced representation.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::HomogRep;
use crate::error::{Error, Result};
use crate::poly::{GaussianRational, PolyTuple, SparsePoly};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IndetMode {
    /// Combinatorial solution from monomial supports (monomial or binomial
    /// components only).
    ExactMonomial,
    /// Grid search for small normalized component values followed by local
    /// minimization. Every hit is reported as inconclusive.
    Sampled { grid: usize, tol: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndetMethod {
    ExactMonomial,
    Sampled,
}

/// The coordinate subspace `{z_i = 0 : i in zero_vars}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordinateSubspace {
    pub zero_vars: Vec<usize>,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InconclusiveCell {
    /// Coordinates (re, im) of the best point found, in the source variables.
    pub point: Vec<[f64; 2]>,
    /// Normalized max-component modulus at `point`.
    pub residual: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndeterminacyReport {
    /// Exactly verified common zeros that are isolated points.
    #[serde(serialize_with = "ser_points")]
    pub exact_points: Vec<Vec<GaussianRational>>,
    /// Positive-dimensional coordinate subspaces contained in the locus.
    pub components: Vec<CoordinateSubspace>,
    pub inconclusive: Vec<InconclusiveCell>,
    pub method: IndetMethod,
}

fn ser_points<S: serde::Serializer>(
    pts: &[Vec<GaussianRational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for p in pts {
        let v: Vec<String> = p.iter().map(|c| c.to_string()).collect();
        seq.serialize_element(&format!("[{}]", v.join(":")))?;
    }
    seq.end()
}

impl IndeterminacyReport {
    pub fn is_empty(&self) -> bool {
        self.exact_points.is_empty() && self.components.is_empty() && self.inconclusive.is_empty()
    }

    /// True when the locus was resolved completely.
    pub fn is_conclusive(&self) -> bool {
        self.inconclusive.is_empty()
    }

    /// Largest dimension of a reported piece (`None` when empty).
    pub fn max_dim(&self) -> Option<usize> {
        let pts = if self.exact_points.is_empty() { None } else { Some(0) };
        self.components.iter().map(|c| c.dim).max().max(pts)
    }
}

/// Indeterminacy locus of a reduced representation. Projective sources are
/// treated in `P^n`, local ones in `C^n`.
pub fn indeterminacy(r: &HomogRep, mode: IndetMode) -> Result<IndeterminacyReport> {
    if !r.is_reduced() {
        return Err(Error::InvalidInput("indeterminacy needs a reduced representation".into()));
    }
    match mode {
        IndetMode::ExactMonomial => exact_locus(r.tuple(), r.is_projective()),
        IndetMode::Sampled { grid, tol } => Ok(sampled_locus(r, grid, tol)),
    }
}

/// Exact common zeros of a local tuple on `C^n` (monomial or binomial components).
pub fn common_zeros_local(t: &PolyTuple) -> Result<IndeterminacyReport> {
    exact_locus(t, false)
}

fn exact_locus(t: &PolyTuple, projective: bool) -> Result<IndeterminacyReport> {
    if t.components().iter().any(|p| p.num_terms() > 2) {
        return Err(Error::Unsupported(
            "exact mode needs monomial or binomial components".into(),
        ));
    }
    let n = t.nvars();
    let mut vanishing: Vec<u64> = Vec::new();
    let mut unresolved: Vec<u64> = Vec::new();
    let full: u64 = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    // subsets ordered by size so minimality is a subset check against earlier hits
    let mut subsets: Vec<u64> = (0..=full).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    for s in subsets {
        if projective && s == full {
            continue;
        }
        if vanishing.iter().any(|&v| v & s == v) {
            continue;
        }
        let restricted: Vec<SparsePoly> = t
            .components()
            .iter()
            .map(|p| (0..n).filter(|i| s >> i & 1 == 1).fold(p.clone(), |q, i| q.restrict_zero(i)))
            .collect();
        if restricted.iter().all(SparsePoly::is_zero) {
            vanishing.push(s);
        } else if restricted.iter().any(SparsePoly::is_monomial) {
            // a surviving monomial has no zeros on the torus of this stratum
        } else {
            unresolved.push(s);
        }
    }
    let mut report = IndeterminacyReport {
        exact_points: Vec::new(),
        components: Vec::new(),
        inconclusive: Vec::new(),
        method: IndetMethod::ExactMonomial,
    };
    for s in vanishing {
        let zero_vars: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        let free = n - zero_vars.len();
        let dim = if projective { free - 1 } else { free };
        if dim == 0 {
            let point: Vec<GaussianRational> = (0..n)
                .map(|i| if s >> i & 1 == 1 { GaussianRational::zero() } else { GaussianRational::one() })
                .collect();
            if t.components().iter().any(|p| !p.eval_exact(&point).is_zero()) {
                return Err(Error::InvalidInput("exact point failed verification".into()));
            }
            report.exact_points.push(point);
        } else {
            report.components.push(CoordinateSubspace { zero_vars, dim });
        }
    }
    for s in unresolved {
        if report.components.iter().any(|c| c.zero_vars.iter().all(|&i| s >> i & 1 == 1)) {
            continue;
        }
        let zero_vars: Vec<String> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| format!("z{i}")).collect();
        report.inconclusive.push(InconclusiveCell {
            point: Vec::new(),
            residual: f64::NAN,
            note: format!(
                "binomial system on the torus of {{{}}} not solved",
                if zero_vars.is_empty() { "open torus".to_string() } else { zero_vars.join("=") + "=0" }
            ),
        });
    }
    Ok(report)
}

fn normalized_residual(t: &PolyTuple, z: &[Complex64], deg: f64, projective: bool) -> f64 {
    let norm = z.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    let scale = if projective { norm } else { norm.max(1.0) };
    let m = t.eval(z).iter().map(|w| w.norm()).fold(0.0, f64::max);
    m / scale.powf(deg)
}

fn sampled_locus(r: &HomogRep, grid: usize, tol: f64) -> IndeterminacyReport {
    let projective = r.is_projective();
    let t = r.tuple();
    let n = t.nvars();
    let deg = crate::poly::rational_to_f64(&num_rational::BigRational::from_integer(
        t.max_degree().into(),
    ));
    let charts: Vec<Option<usize>> = if projective { (0..n).map(Some).collect() } else { vec![None] };
    let radius = if projective { 2.0 } else { 1.0 };
    let free = if projective { n - 1 } else { n };
    let g = grid.max(2);
    let mut hits: Vec<(Vec<Complex64>, f64)> = Vec::new();
    for chart in charts {
        let total = g.pow(2 * free as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut coords = Vec::with_capacity(free);
            for _ in 0..free {
                let a = rem % g;
                rem /= g;
                let b = rem % g;
                rem /= g;
                let step = 2.0 * radius / (g - 1) as f64;
                coords.push(Complex64::new(-radius + a as f64 * step, -radius + b as f64 * step));
            }
            let lift = |c: &[Complex64]| -> Vec<Complex64> {
                match chart {
                    Some(j) => {
                        let mut v = c.to_vec();
                        v.insert(j, Complex64::new(1.0, 0.0));
                        v
                    }
                    None => c.to_vec(),
                }
            };
            let val = normalized_residual(t, &lift(&coords), deg, projective);
            if val >= tol {
                continue;
            }
            let (best, res) = compass_search(
                |c| normalized_residual(t, &lift(c), deg, projective),
                coords,
                2.0 * radius / g as f64,
                2.0 * radius,
            );
            // minima on the box edge run off to infinity; another chart sees them
            if best.iter().any(|w| w.re.abs().max(w.im.abs()) > 2.0 * radius * 0.999) {
                continue;
            }
            let point = lift(&best);
            if hits.iter().all(|(p, _)| proj_dist(p, &point) > 1e-3) {
                hits.push((point, res));
            }
        }
    }
    IndeterminacyReport {
        exact_points: Vec::new(),
        components: Vec::new(),
        inconclusive: hits
            .into_iter()
            .map(|(p, res)| InconclusiveCell {
                point: p.iter().map(|w| [w.re, w.im]).collect(),
                residual: res,
                note: "sampled near-zero of all components".into(),
            })
            .collect(),
        method: IndetMethod::Sampled,
    }
}

fn proj_dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    let na = a.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    (1.0 - (ip.norm() / (na * nb)).min(1.0).powi(2)).max(0.0).sqrt()
}

/// Derivative-free minimization over the real and imaginary parts, confined
/// to the box `|re|, |im| <= bound`.
fn compass_search(
    f: impl Fn(&[Complex64]) -> f64,
    mut x: Vec<Complex64>,
    mut step: f64,
    bound: f64,
) -> (Vec<Complex64>, f64) {
    let mut fx = f(&x);
    let mut iters = 0;
    while step > 1e-12 && fx > 1e-15 && iters < 5000 {
        iters += 1;
        let mut improved = false;
        for i in 0..x.len() {
            for d in [
                Complex64::new(step, 0.0),
                Complex64::new(-step, 0.0),
                Complex64::new(0.0, step),
                Complex64::new(0.0, -step),
            ] {
                let mut y = x.clone();
                y[i] += d;
                if y[i].re.abs() > bound || y[i].im.abs() > bound {
                    continue;
                }
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}
