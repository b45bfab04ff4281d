use num_complex::Complex64;
use serde::Serialize;

use super::orbit::{numeric_orbit, LimitPoint};
use crate::convergence::{classify, fs_distance, iterate_family, ser_points, ClassifyConfig, Level};
use crate::error::{Error, Result};
use crate::geom::QuadBudget;
use crate::poly::{eval_log, LogPolar};
use crate::projmap::HomogRep;

type C = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InclusionConfig {
    /// Radius of the polydisk around the point in each chart.
    pub radius: f64,
    pub ks: Vec<u64>,
    /// Additive perturbation of each affine coordinate for the
    /// equicontinuity test.
    pub perturb: f64,
    pub kmax: u64,
    pub tol: f64,
    /// Largest FS diameter of the perturbed tails counted as equicontinuous.
    pub diameter_tol: f64,
    pub classify: ClassifyConfig,
}

impl Default for InclusionConfig {
    fn default() -> Self {
        InclusionConfig {
            radius: 0.1,
            ks: (1..=6).collect(),
            perturb: 1e-3,
            kmax: 40,
            tol: 1e-4,
            diameter_tol: 1e-2,
            classify: ClassifyConfig::default().with_budget(QuadBudget {
                radial_panels: 12,
                nodes_per_panel: 6,
                angular: 12,
                ..QuadBudget::default()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartVerdict {
    pub chart: usize,
    pub level: Level,
    pub established: Level,
    pub limit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointMembership {
    #[serde(serialize_with = "ser_points")]
    pub point: Vec<C>,
    /// Equicontinuity in the FS sense.
    pub phi: Option<bool>,
    pub phi_s: Option<bool>,
    pub phi_w: Option<bool>,
    pub phi_gamma: Option<bool>,
    pub orbit_limit: LimitPoint,
    /// First `k ≥ 0` with `f^k(point)` in the indeterminacy set.
    pub meets_indeterminacy: Option<u64>,
    /// FS diameter of the perturbed orbits over the tail window.
    pub neighborhood_diameter: f64,
    pub charts: Vec<ChartVerdict>,
}

/// Largest FS distance between the tail iterates of the point and of its
/// perturbations; infinite when an orbit meets the indeterminacy locus.
fn neighborhood_diameter(f: &HomogRep, z: &[C], cfg: &InclusionConfig) -> Result<(f64, LimitPoint, Option<u64>)> {
    let chart = (0..z.len()).max_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm())).unwrap();
    let z: Vec<C> = z.iter().map(|w| w / z[chart]).collect();
    let center = numeric_orbit(f, &z, cfg.kmax, cfg.tol)?;
    let meets = first_indeterminate(f, &z, cfg.kmax);
    if center.indeterminate_at.is_some() {
        return Ok((f64::INFINITY, LimitPoint::None, meets));
    }
    let mut diam: f64 = 0.0;
    let dirs = [C::new(1.0, 0.0), C::new(-1.0, 0.0), C::new(0.0, 1.0), C::new(0.0, -1.0)];
    for a in (0..z.len()).filter(|&a| a != chart) {
        for d in dirs {
            let mut w = z.clone();
            w[a] += cfg.perturb * d;
            let o = numeric_orbit(f, &w, cfg.kmax, cfg.tol)?;
            if o.indeterminate_at.is_some() {
                return Ok((f64::INFINITY, center.limit, meets));
            }
            let tail = center.steps.len().saturating_sub(super::orbit::TAIL);
            for (s, t) in center.steps[tail..].iter().zip(&o.steps[tail..]) {
                diam = diam.max(fs_distance(&s.coords, &t.coords));
            }
        }
    }
    Ok((diam, center.limit, meets))
}

/// Steps `f` in log-polar form, where zeros are exact, and returns the first
/// iterate of `z` lying in the indeterminacy set.
fn first_indeterminate(f: &HomogRep, z: &[C], kmax: u64) -> Option<u64> {
    let mut w: Vec<LogPolar> = z.iter().map(|&x| LogPolar::from_complex(x)).collect();
    for k in 0..=kmax {
        let v = match eval_log(f.tuple(), &w) {
            Ok(v) => v,
            Err(Error::Indeterminate) => return Some(k),
            Err(_) => return None,
        };
        let top = v.iter().map(|x| x.log_modulus).fold(f64::NEG_INFINITY, f64::max);
        w = v.iter().map(|x| LogPolar::new(x.log_modulus - top, x.phase)).collect();
    }
    None
}

fn member(charts: &[ChartVerdict], at: Level) -> Option<bool> {
    if charts.iter().any(|c| c.level >= at && c.level != Level::Inconclusive || c.established >= at && c.established != Level::Inconclusive) {
        Some(true)
    } else if charts.iter().all(|c| c.level != Level::Inconclusive) {
        Some(false)
    } else {
        None
    }
}

/// Membership of sample points of `P²` in the Fatou sets of `f` in the
/// equicontinuity, strong, weak and Γ senses.
///
/// Equicontinuity needs a small tail diameter over perturbed orbits and an
/// orbit that never enters the indeterminacy set.
///
/// The last three come from classifying the iterate family on a small
/// polydisk around the point, in every chart containing it; the best
/// verdict over charts counts, since representations are unique only up to
/// units and a change of chart supplies them.
pub fn fatou_inclusion_report(f: &HomogRep, points: &[Vec<C>], cfg: &InclusionConfig) -> Result<Vec<PointMembership>> {
    if !f.is_projective() || f.source_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch("inclusion reports need a self-map of P^n".into()));
    }
    let mut out = Vec::new();
    for z in points {
        if z.len() != f.source_dim() + 1 || z.iter().all(|w| w.norm() == 0.0) {
            return Err(Error::InvalidInput("points are given by nonzero homogeneous coordinates".into()));
        }
        let (diam, orbit_limit, meets_indeterminacy) = neighborhood_diameter(f, z, cfg)?;
        let top = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
        let mut charts = Vec::new();
        for j in (0..z.len()).filter(|&j| z[j].norm() >= 1e-3 * top) {
            let center: Vec<C> = (0..z.len()).filter(|&i| i != j).map(|i| z[i] / z[j]).collect();
            let fam = iterate_family(format!("iterates in chart {j}"), f, j, center, cfg.radius, cfg.ks.clone())?;
            let v = classify(&fam, &cfg.classify);
            charts.push(ChartVerdict {
                chart: j,
                level: v.level,
                established: v.established,
                limit: v.rep.limit.as_ref().map(|l| l.to_string()),
            });
        }
        out.push(PointMembership {
            point: z.clone(),
            phi: Some(diam <= cfg.diameter_tol && meets_indeterminacy.is_none()),
            phi_s: member(&charts, Level::Strong),
            phi_w: member(&charts, Level::Weak),
            phi_gamma: member(&charts, Level::Gamma),
            orbit_limit,
            meets_indeterminacy,
            neighborhood_diameter: diam,
            charts,
        });
    }
    Ok(out)
}
