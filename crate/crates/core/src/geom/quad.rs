//! Quadrature backends: graded polar Gauss-Legendre grids in one and two
//! complex variables, antithetic Monte Carlo in three or more.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::num::NonZeroUsize;
use std::sync::{Mutex, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::domain::{Domain, QuadBudget, ZeroSet};
use crate::error::{Error, Result};

type C = Complex64;

const MC_CHUNK: u64 = 1 << 16;

/// Gauss-Legendre rule on `[0, 1]`.
pub fn gl_unit(m: usize) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<(f64, f64)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(m.max(1))
        .or_insert_with(|| {
            let rule = GaussLegendre::new(NonZeroUsize::new(m.max(1)).unwrap());
            let mut v: Vec<(f64, f64)> = rule
                .as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
                .collect();
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v
        })
        .clone()
}

/// Gauss-Legendre nodes on `[a, b]` with panels shrinking geometrically
/// (ratio 1/2) toward `a`.
pub fn graded_toward(a: f64, b: f64, panels: usize, m: usize) -> Vec<(f64, f64)> {
    let rule = gl_unit(m);
    let len = b - a;
    let mut breaks = vec![a];
    let mut x = len * 0.5f64.powi(panels as i32);
    for _ in 0..panels {
        breaks.push(a + x);
        x *= 2.0;
    }
    breaks.push(b);
    breaks.dedup();
    let mut out = Vec::with_capacity((breaks.len() - 1) * rule.len());
    for w in breaks.windows(2) {
        let h = w[1] - w[0];
        for &(t, wt) in &rule {
            out.push((w[0] + h * t, h * wt));
        }
    }
    out
}

/// Equally spaced angles with trapezoid weights over a full period.
pub fn trapezoid(m: usize) -> Vec<(f64, f64)> {
    let m = m.max(1);
    (0..m).map(|j| (TAU * j as f64 / m as f64, TAU / m as f64)).collect()
}

/// How the ε-tube around the zero set is cut out.
#[derive(Clone, Debug)]
pub enum Cut<'a> {
    None,
    /// The zero set is the center point of the domain; integrate over `|z - c| > ε`.
    Radial(f64),
    /// Drop nodes within distance ε of the set.
    Tube(&'a ZeroSet, f64),
}

impl<'a> Cut<'a> {
    pub fn for_zero_set(dom: &Domain, zs: &'a ZeroSet, eps: f64) -> Self {
        if zs.is_empty() || eps <= 0.0 {
            return Cut::None;
        }
        match zs.as_point() {
            Some(p) if p.iter().zip(dom.center()).all(|(a, b)| (a - b).norm() < 1e-14) => Cut::Radial(eps),
            _ if matches!(zs, ZeroSet::Unknown) => Cut::None,
            _ => Cut::Tube(zs, eps),
        }
    }

    fn inner(&self) -> f64 {
        match self {
            Cut::Radial(e) => *e,
            _ => 0.0,
        }
    }

    fn keeps(&self, z: &[C]) -> bool {
        match self {
            Cut::Tube(zs, e) => zs.distance(z) > *e,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// Resolution difference for grids, one standard error for Monte Carlo.
    pub error: f64,
    pub evals: u64,
}

/// Integral of `f` against Lebesgue measure over the domain minus the cut.
/// Grid rules are run at two resolutions; the finer value is returned.
pub fn integrate<F>(dom: &Domain, cut: &Cut, budget: &QuadBudget, f: &F) -> Result<QuadResult>
where
    F: Fn(&[C]) -> f64 + Sync,
{
    let n = dom.dim();
    if cut.inner() >= dom.min_radius() {
        return Err(Error::InvalidInput("ε must be smaller than every radius".into()));
    }
    let r = if n <= 2 {
        let (fine, e1) = grid(dom, cut, budget, f);
        let (coarse, e2) = grid(dom, cut, &budget.coarser(), f);
        QuadResult {
            value: fine,
            error: (fine - coarse).abs(),
            evals: e1 + e2,
        }
    } else {
        monte_carlo(dom, cut, budget, f)
    };
    if !r.value.is_finite() {
        return Err(Error::Quadrature("non-finite integral".into()));
    }
    Ok(r)
}

fn grid<F>(dom: &Domain, cut: &Cut, b: &QuadBudget, f: &F) -> (f64, u64)
where
    F: Fn(&[C]) -> f64 + Sync,
{
    let c = dom.center();
    let eps = cut.inner();
    let ang = trapezoid(b.angular);
    let at = |z: &[C]| if cut.keeps(z) { f(z) } else { 0.0 };
    match (dom, dom.dim()) {
        (_, 1) => {
            let r = dom.min_radius();
            let rad = graded_toward(eps, r, b.radial_panels, b.nodes_per_panel);
            let v: f64 = rad
                .par_iter()
                .map(|&(rho, w)| {
                    let s: f64 = ang.iter().map(|&(t, wt)| wt * at(&[c[0] + C::from_polar(rho, t)])).sum();
                    s * rho * w
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum();
            (v, (rad.len() * ang.len()) as u64)
        }
        (_, 2) => {
            // z_a = c_a + ρ (cos α e^{iθ1}, sin α e^{iθ2}),  dV = ρ³ cos α sin α dρ dα dθ1 dθ2
            let (r1, r2) = match dom {
                Domain::Polydisk { radii, .. } => (radii[0], radii[1]),
                Domain::Ball { radius, .. } => (*radius, *radius),
            };
            let split = match dom {
                Domain::Polydisk { .. } => (r2 / r1).atan(),
                Domain::Ball { .. } => FRAC_PI_2 / 2.0,
            };
            let rule = gl_unit(b.nodes_per_panel);
            let mut alphas = Vec::new();
            for (lo, hi) in [(0.0, split), (split, FRAC_PI_2)] {
                for &(t, w) in &rule {
                    alphas.push((lo + (hi - lo) * t, (hi - lo) * w));
                }
            }
            let v: f64 = alphas
                .par_iter()
                .map(|&(al, wa)| {
                    let (ca, sa) = (al.cos(), al.sin());
                    let rmax = match dom {
                        Domain::Polydisk { .. } => (r1 / ca).min(r2 / sa),
                        Domain::Ball { .. } => r1,
                    };
                    let rad = graded_toward(eps, rmax, b.radial_panels, b.nodes_per_panel);
                    let mut acc = 0.0;
                    for &(rho, wr) in &rad {
                        let mut s = 0.0;
                        for &(t1, w1) in &ang {
                            let z1 = c[0] + C::from_polar(rho * ca, t1);
                            for &(t2, w2) in &ang {
                                s += w1 * w2 * at(&[z1, c[1] + C::from_polar(rho * sa, t2)]);
                            }
                        }
                        acc += s * wr * rho.powi(3);
                    }
                    acc * wa * ca * sa
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum();
            let per = graded_toward(eps, 1.0, b.radial_panels, b.nodes_per_panel).len();
            (v, (alphas.len() * per * ang.len() * ang.len()) as u64)
        }
        _ => unreachable!("grid rules cover one and two variables"),
    }
}

/// Lower end of the log-uniform modulus law, relative to the radius.
const LOG_FLOOR: f64 = 1e-6;

/// Per-coordinate radii of the enclosing polydisk.
fn radii_of(dom: &Domain) -> Vec<f64> {
    match dom {
        Domain::Polydisk { radii, .. } => radii.clone(),
        Domain::Ball { center, radius } => vec![*radius; center.len()],
    }
}

/// Draws an offset from the center: each coordinate has uniform phase and a
/// modulus drawn half the time uniformly by area, half the time
/// log-uniformly on `[R·LOG_FLOOR, R]`. Returns the proposal density with
/// respect to Lebesgue measure, or 0 outside the domain.
fn sample(dom: &Domain, radii: &[f64], rng: &mut ChaCha8Rng, out: &mut [C]) -> f64 {
    use rand::Rng;
    let span = -LOG_FLOOR.ln();
    let mut q = 1.0;
    for (o, &r) in out.iter_mut().zip(radii) {
        let u: f64 = rng.gen();
        let rho = if rng.gen::<bool>() { r * u.sqrt() } else { r * LOG_FLOOR.powf(u) };
        *o = C::from_polar(rho, rng.gen::<f64>() * TAU);
        let area = 1.0 / (PI * r * r);
        let log = if rho >= r * LOG_FLOOR { 1.0 / (span * TAU * rho * rho) } else { 0.0 };
        q *= 0.5 * (area + log);
    }
    if let Domain::Ball { radius, .. } = dom {
        if out.iter().map(|w| w.norm_sqr()).sum::<f64>() > radius * radius {
            return 0.0;
        }
    }
    q
}

fn monte_carlo<F>(dom: &Domain, cut: &Cut, b: &QuadBudget, f: &F) -> QuadResult
where
    F: Fn(&[C]) -> f64 + Sync,
{
    let n = dom.dim();
    let c = dom.center().to_vec();
    let radii = radii_of(dom);
    let pairs = (b.samples / 2).max(1);
    let chunks = pairs.div_ceil(MC_CHUNK);
    let eps = cut.inner();
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
            rng.set_stream(chunk);
            let count = MC_CHUNK.min(pairs - chunk * MC_CHUNK);
            let mut w = vec![C::new(0.0, 0.0); n];
            let mut zp = vec![C::new(0.0, 0.0); n];
            let mut zm = vec![C::new(0.0, 0.0); n];
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..count {
                let q = sample(dom, &radii, &mut rng, &mut w);
                let rad = w.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
                let mut v = 0.0;
                if q > 0.0 && rad > eps {
                    for a in 0..n {
                        zp[a] = c[a] + w[a];
                        zm[a] = c[a] - w[a];
                    }
                    if cut.keeps(&zp) {
                        v += f(&zp);
                    }
                    if cut.keeps(&zm) {
                        v += f(&zm);
                    }
                    v *= 0.5 / q;
                }
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (mut s, mut s2) = (0.0, 0.0);
    for (a, b2) in parts {
        s += a;
        s2 += b2;
    }
    let m = pairs as f64;
    let mean = s / m;
    let var = (s2 / m - mean * mean).max(0.0);
    QuadResult {
        value: mean,
        error: (var / m).sqrt(),
        evals: 2 * pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_rule_integrates_log_singularity() {
        let v: f64 = graded_toward(0.0, 1.0, 30, 8).iter().map(|&(x, w)| w * x.ln()).sum();
        assert!((v + 1.0).abs() < 1e-7);
    }

    #[test]
    fn volumes_of_balls_and_polydisks() {
        let b = QuadBudget::default();
        let one = |_: &[C]| 1.0;
        let ball = Domain::centered_ball(2, 0.7);
        let v = integrate(&ball, &Cut::None, &b, &one).unwrap().value;
        assert!((v - PI * PI * 0.7f64.powi(4) / 2.0).abs() < 1e-12);
        let pd = Domain::polydisk(vec![C::new(0.0, 0.0); 2], vec![1.0, 0.5]).unwrap();
        let v = integrate(&pd, &Cut::None, &b, &one).unwrap().value;
        assert!((v - PI * PI * 0.25).abs() < 1e-5, "{v} vs {}", PI * PI * 0.25);
        let b3 = Domain::centered_ball(3, 0.5);
        let r = integrate(&b3, &Cut::None, &QuadBudget { samples: 200_000, ..b }, &one).unwrap();
        let exact = PI.powi(3) * 0.5f64.powi(6) / 6.0;
        assert!((r.value - exact).abs() < 5.0 * r.error && r.error < 0.05 * exact, "{r:?} vs {exact}");
    }

    #[test]
    fn radial_cut_and_monte_carlo_moment() {
        let b = QuadBudget { samples: 400_000, ..QuadBudget::default() };
        // ∫_{B³(R)} |z|² dV = π³ R⁸ / 8 (radial density 2π³ρ⁵/2! · ρ²)
        let dom = Domain::centered_ball(3, 1.0);
        let r = integrate(&dom, &Cut::None, &b, &|z: &[C]| z.iter().map(|w| w.norm_sqr()).sum()).unwrap();
        let exact = PI.powi(3) * 6.0 / 8.0 / 6.0;
        assert!((r.value - exact).abs() < 5.0 * r.error + 1e-3, "{} ± {} vs {exact}", r.value, r.error);
        // annulus in C: area π(1 - ε²)
        let disk = Domain::centered_ball(1, 1.0);
        let a = integrate(&disk, &Cut::Radial(0.25), &b, &|_: &[C]| 1.0).unwrap();
        assert!((a.value - PI * (1.0 - 0.0625)).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let b = QuadBudget { samples: 150_000, ..QuadBudget::default() };
        let dom = Domain::centered_ball(3, 0.5);
        let f = |z: &[C]| (z[0].re + z[1].im * z[2].re).exp();
        let a = integrate(&dom, &Cut::None, &b, &f).unwrap();
        let c = integrate(&dom, &Cut::None, &b, &f).unwrap();
        assert_eq!(a, c);
    }
}
