use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{graded_toward, potential_mass, Domain, GammaPotential, QuadBudget, ZeroSet};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeConfig {
    pub radial_panels: usize,
    pub nodes_per_panel: usize,
    /// Iterates at which the general quadrature is run as a cross-check.
    pub cross_check_ks: Vec<u64>,
    pub budget: QuadBudget,
    /// Tube width of the general quadrature, relative to ε.
    pub tube: f64,
}

impl Default for VolumeConfig {
    fn default() -> Self {
        VolumeConfig {
            radial_panels: 60,
            nodes_per_panel: 12,
            cross_check_ks: vec![1, 2],
            budget: QuadBudget {
                angular: 4,
                ..QuadBudget::default()
            },
            tube: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossCheck {
    pub k: u64,
    pub order: usize,
    pub radial: f64,
    pub general: f64,
    pub general_error: f64,
    pub relative_difference: f64,
}

/// The two mixed masses of `φ_k = |u1|^{2N} + ln(|u1|^{2N-2} + |u2|²)`,
/// `N = 2^k`, over the bidisk of radius ε: order one (`M1`) and order two
/// (`M2`), in `dd^c` normalization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaVolumeSeries {
    pub eps: f64,
    pub ks: Vec<u64>,
    pub first: Vec<f64>,
    pub first_error: Vec<f64>,
    pub second: Vec<f64>,
    pub second_error: Vec<f64>,
    /// `4N² ε^{2N-2} / (2N - 2)`.
    pub second_bound: Vec<f64>,
    pub method: String,
    pub cross_checks: Vec<CrossCheck>,
}

/// `∫_0^ε g(r) dr` on panels graded toward both ends.
fn radial(g: impl Fn(f64) -> f64, eps: f64, panels: usize, nodes: usize) -> f64 {
    let lower: f64 = graded_toward(0.0, eps / 2.0, panels, nodes).iter().map(|&(r, w)| w * g(r)).sum();
    let upper: f64 = graded_toward(eps, eps / 2.0, panels, nodes).iter().map(|&(r, w)| w * g(r)).sum();
    lower - upper
}

fn first_inner(r: f64, n: f64, eps: f64) -> f64 {
    let e2 = eps * eps;
    let a = r.powf(2.0 * n - 2.0);
    n * n * r.powf(2.0 * n - 1.0) * e2 / 2.0
        + (n - 1.0).powi(2) * r.powf(2.0 * n - 3.0) * 0.5
            * ((a + e2).ln() - (2.0 * n - 2.0) * r.ln() + a / (a + e2) - 1.0)
        + r * e2 / (2.0 * (a + e2))
}

fn second_inner(r: f64, n: f64, eps: f64) -> f64 {
    r.powf(2.0 * n - 1.0) / (r.powf(2.0 * n - 2.0) + eps * eps)
}

fn masses(k: u64, eps: f64, panels: usize, nodes: usize) -> (f64, f64) {
    let n = 2f64.powi(k as i32);
    let m1 = 4.0 * radial(|r| first_inner(r, n, eps), eps, panels, nodes);
    let m2 = 4.0 * n * n * eps * eps * radial(|r| second_inner(r, n, eps), eps, panels, nodes);
    (m1, m2)
}

pub fn gamma_volume_series(ks: &[u64], eps: f64, cfg: &VolumeConfig) -> Result<GammaVolumeSeries> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput("ε must lie in (0, 1)".into()));
    }
    if ks.iter().any(|&k| k == 0 || k > 30) {
        return Err(Error::InvalidInput("iterates must lie in 1..=30".into()));
    }
    let mut s = GammaVolumeSeries {
        eps,
        ks: ks.to_vec(),
        first: vec![],
        first_error: vec![],
        second: vec![],
        second_error: vec![],
        second_bound: vec![],
        method: "radial-closed-form".into(),
        cross_checks: vec![],
    };
    let coarse_nodes = (cfg.nodes_per_panel * 2 / 3).max(3);
    for &k in ks {
        let (m1, m2) = masses(k, eps, cfg.radial_panels, cfg.nodes_per_panel);
        let (c1, c2) = masses(k, eps, cfg.radial_panels, coarse_nodes);
        if !(m1.is_finite() && m2.is_finite()) {
            return Err(Error::Quadrature(format!("non-finite mass at k = {k}")));
        }
        let n = 2f64.powi(k as i32);
        s.first.push(m1);
        s.first_error.push((m1 - c1).abs());
        s.second.push(m2);
        s.second_error.push((m2 - c2).abs());
        s.second_bound.push(4.0 * n * n * eps.powf(2.0 * n - 2.0) / (2.0 * n - 2.0));
    }
    let zero = Complex64::new(0.0, 0.0);
    let dom = Domain::polydisk(vec![zero; 2], vec![eps; 2])?;
    for &k in &cfg.cross_check_ks {
        let Some(i) = ks.iter().position(|&x| x == k) else { continue };
        let pot = GammaPotential { n: 1 << k };
        for order in 1..=2 {
            let m = potential_mass(&pot, &dom, order, &ZeroSet::origin(2), cfg.tube * eps, &cfg.budget)?;
            let radial = if order == 1 { s.first[i] } else { s.second[i] };
            s.cross_checks.push(CrossCheck {
                k,
                order,
                radial,
                general: m.value,
                general_error: m.error,
                relative_difference: (m.value - radial).abs() / radial.abs().max(1e-300),
            });
        }
    }
    Ok(s)
}
