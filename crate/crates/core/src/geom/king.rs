use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::domain::{Domain, QuadBudget, ZeroSet};
use super::lift::Lift;
use super::mass::mixed_ma_mass;
use super::potential::{LogNormPotential, Potential};
use super::quad::{gl_unit, trapezoid};
use crate::error::{Error, Result};

type C = Complex64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KingReport {
    pub radius: f64,
    /// `∫_{∂B} d^c u ∧ dd^c u`: total mass of `(dd^c u)²` on the ball.
    pub boundary: f64,
    /// Non-pluripolar part on the punctured ball.
    pub interior: f64,
    /// `boundary - interior`: mass carried by the isolated zero.
    pub atom: f64,
    pub error: f64,
}

/// Residue check for `u = ln ||F||²` in `C²` with an isolated zero of `F`
/// at the origin: the atom of `(dd^c u)²` is the boundary integral minus
/// the non-pluripolar interior mass.
pub fn king_residue_check(f: &dyn Lift, radius: f64, budget: &QuadBudget) -> Result<KingReport> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch("residue check needs a map of two variables".into()));
    }
    let u = LogNormPotential::new(f);
    let fine = sphere_integral(&u, radius, budget)?;
    let coarse = sphere_integral(&u, radius, &budget.coarser())?;
    let dom = Domain::centered_ball(2, radius);
    let interior = mixed_ma_mass(f, &dom, 2, &ZeroSet::origin(2), radius * 0.25, budget)?;
    Ok(KingReport {
        radius,
        boundary: fine,
        interior: interior.value,
        atom: fine - interior.value,
        error: (fine - coarse).abs() + interior.error,
    })
}

/// `∫_{|z|=r} d^c u ∧ dd^c u` in the coordinates
/// `z = r (cos α e^{iθ1}, sin α e^{iθ2})`.
pub fn sphere_integral(u: &dyn Potential, r: f64, b: &QuadBudget) -> Result<f64> {
    let rule = gl_unit(2 * b.nodes_per_panel);
    let ang = trapezoid(2 * b.angular);
    let alphas: Vec<(f64, f64)> = [(0.0, FRAC_PI_2 / 2.0), (FRAC_PI_2 / 2.0, FRAC_PI_2)]
        .iter()
        .flat_map(|&(lo, hi)| rule.iter().map(move |&(t, w)| (lo + (hi - lo) * t, (hi - lo) * w)))
        .collect();
    let i = C::new(0.0, 1.0);
    let parts: Vec<Option<f64>> = alphas
        .par_iter()
        .map(|&(al, wa)| {
            let (ca, sa) = (al.cos(), al.sin());
            let mut acc = 0.0;
            for &(t1, w1) in &ang {
                let e1 = C::from_polar(1.0, t1);
                for &(t2, w2) in &ang {
                    let e2 = C::from_polar(1.0, t2);
                    let z = [r * ca * e1, r * sa * e2];
                    let j = u.jet(&z)?;
                    // tangent vectors ∂α, ∂θ1, ∂θ2 as (dz1, dz2)
                    let v = [
                        [-r * sa * e1, r * ca * e2],
                        [i * z[0], C::new(0.0, 0.0)],
                        [C::new(0.0, 0.0), i * z[1]],
                    ];
                    let beta = |x: &[C; 2]| -> C {
                        let mut s = C::new(0.0, 0.0);
                        for a in 0..2 {
                            s += j.du[a].conj() * x[a].conj() - j.du[a] * x[a];
                        }
                        s * i / (4.0 * std::f64::consts::PI)
                    };
                    let gamma = |x: &[C; 2], y: &[C; 2]| -> C {
                        let mut s = C::new(0.0, 0.0);
                        for a in 0..2 {
                            for c in 0..2 {
                                s += j.hess[a * 2 + c] * (x[a] * y[c].conj() - y[a] * x[c].conj());
                            }
                        }
                        s * i / (2.0 * std::f64::consts::PI)
                    };
                    let val = beta(&v[0]) * gamma(&v[1], &v[2]) - beta(&v[1]) * gamma(&v[0], &v[2])
                        + beta(&v[2]) * gamma(&v[0], &v[1]);
                    acc += w1 * w2 * val.re;
                }
            }
            Some(acc * wa)
        })
        .collect();
    let mut total = 0.0;
    for p in parts {
        total += p.ok_or_else(|| Error::Quadrature("lift vanishes on the sphere".into()))?;
    }
    // (α, θ1, θ2) is negatively oriented for the outward normal
    Ok(-total)
}
