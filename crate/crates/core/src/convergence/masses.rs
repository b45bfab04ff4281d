use serde::Serialize;

use super::family::{zero_set_of, MapFamily};
use crate::error::Result;
use crate::geom::{mixed_ma_mass, PolyLift, QuadBudget, ZeroSet};
use crate::projmap::{reduce_rep, HomogRep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassTrend {
    Converging,
    Diverging,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassSeries {
    pub order: usize,
    pub ks: Vec<u64>,
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// Mass of the limit map, when a candidate exists.
    pub limit_mass: Option<f64>,
    pub trend: MassTrend,
    /// Whether the tail agrees with `limit_mass`.
    pub matches_limit: Option<bool>,
    pub notes: Vec<String>,
}

/// Settings for mass series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MassConfig {
    /// Relative tail variation counted as convergence.
    pub tol: f64,
    /// Tube width around zero sets, relative to the smallest domain radius.
    pub eps: f64,
    pub budget: QuadBudget,
}

impl Default for MassConfig {
    fn default() -> Self {
        MassConfig {
            tol: 0.05,
            eps: 0.05,
            budget: QuadBudget::default(),
        }
    }
}

fn mass_of(rep: &HomogRep, fam: &MapFamily, order: usize, cfg: &MassConfig) -> Result<(f64, f64)> {
    let lift = PolyLift::new(rep.tuple())?;
    let zs = zero_set_of(rep.tuple());
    let eps = if matches!(zs, ZeroSet::Subspaces { .. }) { cfg.eps * fam.domain.min_radius() } else { 0.0 };
    let m = mixed_ma_mass(&lift, &fam.domain, order, &zs, eps, &cfg.budget)?;
    Ok((m.value, m.error))
}

/// Trend of the last three values against tolerance `tol`, relative to the
/// larger of their mean and `floor`.
pub(crate) fn trend(values: &[f64], errors: &[f64], tol: f64, floor: f64) -> MassTrend {
    if values.len() < 3 {
        return MassTrend::Inconclusive;
    }
    let t = &values[values.len() - 3..];
    let err = errors[errors.len() - 3..].iter().fold(0.0f64, |a, &b| a.max(b));
    let mean = t.iter().sum::<f64>() / 3.0;
    let scale = mean.abs().max(floor);
    let spread = t.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - t.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if spread <= tol * scale + 2.0 * err {
        return MassTrend::Converging;
    }
    let settled = t.windows(2).all(|w| w[1] <= w[0] + 2.0 * err) && t[2].abs() <= tol * floor + 2.0 * err;
    if settled {
        return MassTrend::Converging;
    }
    let rising = t.windows(2).all(|w| w[1] - w[0] > 2.0 * err);
    if rising && t[2] - t[0] > tol * scale {
        return MassTrend::Diverging;
    }
    MassTrend::Inconclusive
}

/// Mixed Monge-Ampère masses of `ln ||f_k||²` on the family's domain, one
/// series per order, with their trends.
pub fn mass_convergence(
    fam: &MapFamily,
    orders: &[usize],
    ks: &[u64],
    limit: Option<&HomogRep>,
    cfg: &MassConfig,
) -> Vec<MassSeries> {
    let floor = 1e-3 * fam.domain.euclidean_mass();
    let limit = limit.and_then(|l| reduce_rep(l).ok());
    orders
        .iter()
        .map(|&order| {
            let mut s = MassSeries {
                order,
                ks: ks.to_vec(),
                values: Vec::new(),
                errors: Vec::new(),
                limit_mass: None,
                trend: MassTrend::Inconclusive,
                matches_limit: None,
                notes: Vec::new(),
            };
            for &k in ks {
                match fam.rep(k).and_then(|r| mass_of(&r, fam, order, cfg)) {
                    Ok((v, e)) => {
                        s.values.push(v);
                        s.errors.push(e);
                    }
                    Err(e) => {
                        s.notes.push(format!("k={k}: {e}"));
                        return s;
                    }
                }
            }
            s.trend = trend(&s.values, &s.errors, cfg.tol, floor);
            if let Some(l) = &limit {
                match mass_of(l, fam, order, cfg) {
                    Ok((v, e)) => {
                        s.limit_mass = Some(v);
                        let last = *s.values.last().unwrap_or(&f64::NAN);
                        let err = s.errors.last().copied().unwrap_or(0.0) + e;
                        s.matches_limit = Some((last - v).abs() <= cfg.tol * v.abs().max(floor) + 2.0 * err);
                    }
                    Err(e) => s.notes.push(format!("limit: {e}")),
                }
            }
            s
        })
        .collect()
}
