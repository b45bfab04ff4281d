use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::orbit::{numeric_orbit, LimitPoint, MonomialOrbits, OrbitRecord};
use crate::convergence::fs_distance;
use crate::error::{Error, Result};
use crate::poly::LogPolar;
use crate::projmap::{HomogRep, MonomialMap};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanLabel {
    Phi1ToR,
    Phi2ToQ,
    DeltaStarToP,
    /// Equicontinuous with a limit other than `p`, `q`, `r`.
    Fatou,
    Julia,
    Indeterminate,
}

impl ScanLabel {
    pub fn name(self) -> &'static str {
        match self {
            ScanLabel::Phi1ToR => "phi1-to-r",
            ScanLabel::Phi2ToQ => "phi2-to-q",
            ScanLabel::DeltaStarToP => "delta-star-to-p",
            ScanLabel::Fatou => "fatou",
            ScanLabel::Julia => "julia",
            ScanLabel::Indeterminate => "indeterminate",
        }
    }

    fn of_limit(l: LimitPoint) -> Self {
        match l {
            LimitPoint::R => ScanLabel::Phi1ToR,
            LimitPoint::Q => ScanLabel::Phi2ToQ,
            LimitPoint::P => ScanLabel::DeltaStarToP,
            LimitPoint::None => ScanLabel::Fatou,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub chart: usize,
    /// Range of `|u1|`; cell centers split it evenly.
    pub u1_modulus: (f64, f64),
    /// Range of `|u2|`, endpoints included.
    pub u2_modulus: (f64, f64),
    pub grid: (usize, usize),
    /// Phases of `u1` and `u2`.
    pub phases: (f64, f64),
    pub kmax: u64,
    /// FS Cauchy tolerance.
    pub tol: f64,
    /// Relative change of the moduli for the four neighbours.
    pub perturb: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            chart: 0,
            u1_modulus: (0.2, 2.0),
            u2_modulus: (0.0, 2.0),
            grid: (200, 200),
            phases: (0.3, 1.1),
            kmax: 40,
            tol: 1e-4,
            perturb: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanCell {
    pub u1: [f64; 2],
    pub u2: [f64; 2],
    pub label: ScanLabel,
    /// `|ln|z1/z0||`, distance in log-modulus to the cone `{|z0| = |z1|}`.
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FatouScanGrid {
    pub map: String,
    pub config: ScanConfig,
    pub method: String,
    pub cells: Vec<ScanCell>,
    pub counts: BTreeMap<ScanLabel, usize>,
}

impl FatouScanGrid {
    /// One row per cell: `u1_re,u1_im,u2_re,u2_im,label,margin`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("u1_re,u1_im,u2_re,u2_im,label,margin\n");
        for c in &self.cells {
            let _ = writeln!(s, "{},{},{},{},{},{}", c.u1[0], c.u1[1], c.u2[0], c.u2[1], c.label.name(), c.margin);
        }
        s
    }
}

fn homogeneous(chart: usize, u: [C; 2]) -> Vec<C> {
    let mut z = u.to_vec();
    z.insert(chart, C::new(1.0, 0.0));
    z
}

enum Engine {
    Log(MonomialOrbits),
    Numeric(HomogRep),
}

impl Engine {
    fn orbit(&self, z: &[C], cfg: &ScanConfig) -> Result<OrbitRecord> {
        match self {
            Engine::Log(m) => m.orbit(&z.iter().map(|&w| LogPolar::from_complex(w)).collect::<Vec<_>>()),
            Engine::Numeric(f) => numeric_orbit(f, z, cfg.kmax, cfg.tol),
        }
    }
}

fn label(orbits: &[OrbitRecord], tol: f64) -> ScanLabel {
    if orbits.iter().any(|o| o.indeterminate_at.is_some()) {
        return ScanLabel::Indeterminate;
    }
    let l0 = orbits[0].limit;
    if l0 != LimitPoint::None {
        return if orbits.iter().all(|o| o.limit == l0) { ScanLabel::of_limit(l0) } else { ScanLabel::Julia };
    }
    let c0 = orbits[0].last();
    let same = orbits.iter().all(|o| {
        o.limit == LimitPoint::None && o.converged && !o.julia && fs_distance(o.last().unwrap(), c0.unwrap()) <= 10.0 * tol.max(1e-3)
    });
    if same {
        ScanLabel::Fatou
    } else {
        ScanLabel::Julia
    }
}

/// Labels a `|u1| × |u2|` grid of a chart of `P²` by the limit of the
/// iterates at each cell center and four neighbours with perturbed moduli.
///
/// Monomial maps are evaluated exactly through their exponent forms; other
/// maps through [`numeric_orbit`].
pub fn fatou_scan(f: &HomogRep, cfg: &ScanConfig) -> Result<FatouScanGrid> {
    if !f.is_projective() || f.source_dim() != 2 || f.target_dim() != 2 {
        return Err(Error::DimensionMismatch("scans need a self-map of P^2".into()));
    }
    if cfg.chart > 2 || cfg.grid.0 == 0 || cfg.grid.1 == 0 || cfg.kmax == 0 {
        return Err(Error::InvalidInput("chart must be 0..=2 and the grid nonempty".into()));
    }
    let engine = match MonomialMap::from_rep(f) {
        Ok(m) => Engine::Log(MonomialOrbits::new(&m, cfg.kmax, cfg.tol)?),
        Err(_) => Engine::Numeric(f.clone()),
    };
    let (n1, n2) = cfg.grid;
    let (a1, b1) = cfg.u1_modulus;
    let (a2, b2) = cfg.u2_modulus;
    let r1: Vec<f64> = (0..n1).map(|i| a1 + (i as f64 + 0.5) * (b1 - a1) / n1 as f64).collect();
    let r2: Vec<f64> = (0..n2)
        .map(|j| if n2 == 1 { a2 } else { a2 + j as f64 * (b2 - a2) / (n2 - 1) as f64 })
        .collect();
    let idx: Vec<(usize, usize)> = (0..n2).flat_map(|j| (0..n1).map(move |i| (i, j))).collect();
    let d = cfg.perturb;
    let cells: Vec<Result<ScanCell>> = idx
        .par_iter()
        .map(|&(i, j)| {
            let at = |m1: f64, m2: f64| homogeneous(cfg.chart, [C::from_polar(m1, cfg.phases.0), C::from_polar(m2, cfg.phases.1)]);
            let (m1, m2) = (r1[i], r2[j]);
            let samples = [
                at(m1, m2),
                at(m1 * (1.0 + d), m2),
                at(m1 * (1.0 - d), m2),
                at(m1, m2 * (1.0 + d)),
                at(m1, m2 * (1.0 - d)),
            ];
            let orbits = samples.iter().map(|z| engine.orbit(z, cfg)).collect::<Result<Vec<_>>>()?;
            let z = &samples[0];
            let margin = if z[0].norm() > 0.0 && z[1].norm() > 0.0 { (z[1].norm() / z[0].norm()).ln().abs() } else { f64::INFINITY };
            Ok(ScanCell {
                u1: [z_chart(z, cfg.chart, 0).re, z_chart(z, cfg.chart, 0).im],
                u2: [z_chart(z, cfg.chart, 1).re, z_chart(z, cfg.chart, 1).im],
                label: label(&orbits, cfg.tol),
                margin,
            })
        })
        .collect();
    let cells = cells.into_iter().collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    for c in &cells {
        *counts.entry(c.label).or_insert(0) += 1;
    }
    Ok(FatouScanGrid {
        map: f.to_string(),
        config: cfg.clone(),
        method: match engine {
            Engine::Log(_) => "log-forms".into(),
            Engine::Numeric(_) => "numeric".into(),
        },
        cells,
        counts,
    })
}

/// Affine coordinate `a` of a homogeneous point in `chart`.
fn z_chart(z: &[C], chart: usize, a: usize) -> C {
    let idx: Vec<usize> = (0..z.len()).filter(|&i| i != chart).collect();
    z[idx[a]] / z[chart]
}
