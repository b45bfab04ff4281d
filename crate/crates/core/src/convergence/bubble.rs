use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::family::MapFamily;
use super::replimit::{rep_limit, RepConfig};
use super::{fs_distance, ser_points};
use crate::error::{Error, Result};
use crate::poly::{eval_log, normalize_log, LogPolar, PolyTuple};
use crate::projmap::reduce_rep;

type C = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BubbleConfig {
    /// Decreasing sphere radii.
    pub radii: Vec<f64>,
    /// Increasing `k`; defaults to the last three of the family.
    pub ks: Option<Vec<u64>>,
    /// Magnitude levels per transverse coordinate, one decade pair apart.
    pub levels: usize,
    /// Phases per coordinate.
    pub phases: usize,
    /// Fubini-Study distance separating a cluster from the limit values.
    /// The status counts only clusters at twice this distance.
    pub separation: f64,
}

impl Default for BubbleConfig {
    fn default() -> Self {
        BubbleConfig {
            radii: vec![0.1, 0.03, 0.01],
            ks: None,
            levels: 48,
            phases: 8,
            separation: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BubbleStatus {
    Nonempty,
    Empty,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cluster {
    #[serde(serialize_with = "ser_points")]
    pub center: Vec<C>,
    pub size: usize,
    /// Distance from the center to the limit values.
    pub limit_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BubbleStage {
    pub radius: f64,
    pub k: u64,
    pub cloud: usize,
    pub clusters: Vec<Cluster>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BubbleReport {
    #[serde(serialize_with = "ser_points")]
    pub base: Vec<C>,
    pub stages: Vec<BubbleStage>,
    /// Clusters at the smallest radius and largest `k`.
    pub clusters: Vec<Cluster>,
    pub status: BubbleStatus,
    pub limit: Option<String>,
    pub note: String,
}

/// Unit directions in `C^n` concentrating toward every coordinate axis.
fn directions(n: usize, levels: usize, phases: usize) -> Vec<Vec<C>> {
    let ph: Vec<C> = (0..phases)
        .map(|j| C::from_polar(1.0, std::f64::consts::TAU * (j as f64 + 0.25) / phases as f64))
        .collect();
    let mags: Vec<f64> = (0..levels).map(|m| 10f64.powi(-2 * m as i32)).collect();
    let mut out = Vec::new();
    for main in 0..n {
        let others = n - 1;
        let mag_combos = levels.pow(others as u32);
        let ph_combos = phases.pow(n as u32);
        for mc in 0..mag_combos {
            let mut v = vec![0.0; n];
            let mut rem = mc;
            for (b, x) in v.iter_mut().enumerate() {
                if b == main {
                    *x = 1.0;
                } else {
                    *x = mags[rem % levels];
                    rem /= levels;
                }
            }
            if (0..n).any(|b| b != main && v[b] == 1.0) && main > 0 {
                continue;
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            for pc in 0..ph_combos {
                let mut rem = pc;
                let d: Vec<C> = v
                    .iter()
                    .map(|&x| {
                        let p = ph[rem % phases];
                        rem /= phases;
                        p * (x / norm)
                    })
                    .collect();
                out.push(d);
            }
        }
    }
    out
}

fn cloud(t: &PolyTuple, pts: &[Vec<C>]) -> Vec<Vec<C>> {
    pts.par_iter()
        .filter_map(|z| {
            let lp: Vec<LogPolar> = z.iter().map(|&w| LogPolar::from_complex(w)).collect();
            eval_log(t, &lp).ok().map(|v| normalize_log(&v))
        })
        .collect()
}

/// Greedy net: every point lies within `radius` of some center.
fn net(points: &[Vec<C>], radius: f64) -> Vec<(Vec<C>, usize)> {
    let mut centers: Vec<(Vec<C>, usize)> = Vec::new();
    for p in points {
        match centers.iter_mut().find(|(c, _)| fs_distance(c, p) <= radius) {
            Some(c) => c.1 += 1,
            None => centers.push((p.clone(), 1)),
        }
    }
    centers
}

/// Samples `f_k` on spheres around `a` and reports value clusters bounded
/// away from the values of the limit map.
///
/// The fiber of the limit graph over `a` is rationally connected when
/// nonempty; that is context for the clusters, not something checked here.
pub fn bubble_probe(fam: &MapFamily, a: &[C], cfg: &BubbleConfig) -> Result<BubbleReport> {
    let n = fam.dim();
    if a.len() != n {
        return Err(Error::DimensionMismatch(format!("base point in C^{} for a family on C^{n}", a.len())));
    }
    let ks = cfg.ks.clone().unwrap_or_else(|| fam.ks[fam.ks.len().saturating_sub(3)..].to_vec());
    let limit = match &fam.limit {
        Some(l) => Some(l.clone()),
        None => rep_limit(fam, &RepConfig::default())?.limit,
    };
    let note = "a nonempty fiber over the base point is rationally connected".to_string();
    let Some(limit) = limit.map(|l| reduce_rep(&l)).transpose()? else {
        return Ok(BubbleReport {
            base: a.to_vec(),
            stages: vec![],
            clusters: vec![],
            status: BubbleStatus::Inconclusive,
            limit: None,
            note,
        });
    };
    let phases = if n >= 3 { 3 } else { cfg.phases };
    let levels = if n >= 3 { cfg.levels.min(8) } else { cfg.levels };
    let dirs = directions(n, levels, if n == 1 { 8 * cfg.phases } else { phases });
    let mut stages = Vec::new();
    for &r in &cfg.radii {
        let pts: Vec<Vec<C>> = dirs
            .iter()
            .map(|d| a.iter().zip(d).map(|(x, y)| x + r * y).collect())
            .collect();
        let lim = net(&cloud(limit.tuple(), &pts), cfg.separation / 4.0);
        for &k in &ks {
            let vals = cloud(fam.rep(k)?.tuple(), &pts);
            let far: Vec<Vec<C>> = vals
                .iter()
                .filter(|v| lim.iter().all(|(c, _)| fs_distance(c, v) > cfg.separation))
                .cloned()
                .collect();
            let clusters = net(&far, cfg.separation)
                .into_iter()
                .map(|(center, size)| Cluster {
                    limit_distance: lim.iter().map(|(c, _)| fs_distance(c, &center)).fold(f64::INFINITY, f64::min),
                    center,
                    size,
                })
                .collect();
            stages.push(BubbleStage {
                radius: r,
                k,
                cloud: vals.len(),
                clusters,
            });
        }
    }
    let last_r = stages.last().map(|s| s.radius);
    let fin: Vec<&BubbleStage> = stages.iter().filter(|s| Some(s.radius) == last_r).collect();
    let tail = &fin[fin.len().saturating_sub(2)..];
    let firm = |s: &BubbleStage| s.clusters.iter().any(|c| c.limit_distance >= 2.0 * cfg.separation);
    let status = if !tail.is_empty() && tail.iter().all(|s| firm(s)) {
        BubbleStatus::Nonempty
    } else if !tail.is_empty() && tail.iter().all(|s| !firm(s)) {
        BubbleStatus::Empty
    } else {
        BubbleStatus::Inconclusive
    };
    Ok(BubbleReport {
        base: a.to_vec(),
        clusters: stages.last().map(|s| s.clusters.clone()).unwrap_or_default(),
        stages,
        status,
        limit: Some(limit.to_string()),
        note,
    })
}
