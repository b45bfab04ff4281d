use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::domain::{ContourSpec, Domain, QuadBudget};
use super::lift::Lift;
use super::potential::{log_norm_jet, LogNormPotential, Potential};
use super::quad::{integrate, Cut};
use super::zeros::lift_zero_count;
use crate::error::{Error, Result};

type C = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaReport {
    pub value: f64,
    pub error: f64,
    pub method: String,
    /// Zeros of the lift inside the disk (boundary method only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift_zeros: Option<usize>,
    pub nodes: u64,
}

/// Fubini-Study area of `F(Δ)` from the pulled-back form `(1/π) u_{zz̄} dV`,
/// `u = ln ||F||²`; a line has area 1.
pub fn fs_area_interior(f: &dyn Lift, d: &ContourSpec, budget: &QuadBudget) -> Result<AreaReport> {
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch("area needs a map of one variable".into()));
    }
    let dom = Domain::ball(vec![d.center], d.radius)?;
    let u = LogNormPotential::new(f);
    let r = integrate(&dom, &Cut::None, budget, &|z: &[C]| {
        u.jet(z).map_or(0.0, |j| j.hess[0].re) / PI
    })?;
    Ok(AreaReport {
        value: r.value,
        error: r.error,
        method: "interior".into(),
        lift_zeros: None,
        nodes: r.evals,
    })
}

/// Boundary value of `d^c ln ||F||²` on the circle, minus the number of
/// zeros of `F` inside.
pub fn fs_area_boundary(f: &dyn Lift, d: &ContourSpec) -> Result<AreaReport> {
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch("area needs a map of one variable".into()));
    }
    let nf = lift_zero_count(f, d)?;
    let term = |m: usize| -> Result<f64> {
        let mut s = 0.0;
        for k in 0..m {
            let w = C::from_polar(d.radius, TAU * k as f64 / m as f64);
            let j = f.jet(&[d.center + w]);
            let pj = log_norm_jet(&j.f, &j.df, 1).ok_or(Error::VanishingOnContour { min_modulus: 0.0 })?;
            s += (w * pj.du[0]).re;
        }
        Ok(s / m as f64)
    };
    let mut m = d.nodes.max(16);
    let mut prev = term(m)?;
    let mut err;
    loop {
        let next = term(2 * m)?;
        m *= 2;
        err = (next - prev).abs();
        prev = next;
        if err < 1e-12 || m >= 1 << 18 {
            break;
        }
    }
    Ok(AreaReport {
        value: prev - nf as f64,
        error: err,
        method: "boundary".into(),
        lift_zeros: Some(nf),
        nodes: 2 * m as u64,
    })
}
