use std::f64::consts::PI;
use std::sync::atomic::{AtomicBool, Ordering};

use num_complex::Complex64;
use serde::Serialize;

use super::domain::{binomial, factorial, Domain, QuadBudget, ZeroSet};
use super::lift::Lift;
use super::potential::{elementary_symmetric, LogNormPotential, Potential};
use super::quad::{integrate, Cut, QuadResult};
use crate::error::{Error, Result};

type C = Complex64;

/// Tolerated negative part of `e_p(H)`, relative to `(tr H)^p`.
const NEGATIVE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassReport {
    pub value: f64,
    pub error: f64,
    pub order: usize,
    /// Tube widths used, with the mass obtained at each.
    pub eps: Vec<f64>,
    pub samples: Vec<f64>,
    pub extrapolated: bool,
    /// False when the ε schedule did not settle.
    pub stabilized: bool,
    pub seed: u64,
    pub budget: QuadBudget,
    pub method: String,
    /// Mass concentrated at the zero set, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<f64>,
}

/// Density of `(dd^c u)^p ∧ (dd^c ||z||²)^{n-p}` with respect to Lebesgue
/// measure, from the Levi matrix `H` of `u`.
pub fn mixed_density(h: &[C], n: usize, p: usize) -> f64 {
    factorial(p) * factorial(n - p) * elementary_symmetric(h, n, p) / PI.powi(n as i32)
}

fn method_name(dom: &Domain) -> &'static str {
    if dom.dim() <= 2 {
        "gauss-legendre"
    } else {
        "monte-carlo"
    }
}

/// Integral of the order-`p` density over the domain minus the ε-tube.
fn mass_at(pot: &dyn Potential, dom: &Domain, p: usize, zs: &ZeroSet, eps: f64, budget: &QuadBudget) -> Result<QuadResult> {
    let n = dom.dim();
    let bad = AtomicBool::new(false);
    let cut = Cut::for_zero_set(dom, zs, eps);
    let r = integrate(dom, &cut, budget, &|z: &[C]| {
        let Some(j) = pot.jet(z) else { return 0.0 };
        let e = elementary_symmetric(&j.hess, n, p);
        let tr = elementary_symmetric(&j.hess, n, 1);
        if e < -NEGATIVE_TOL * tr.abs().powi(p as i32).max(1e-300) && e.abs() > 1e-300 {
            bad.store(true, Ordering::Relaxed);
        }
        if !e.is_finite() {
            return 0.0;
        }
        factorial(p) * factorial(n - p) * e / PI.powi(n as i32)
    })?;
    if bad.load(Ordering::Relaxed) {
        return Err(Error::Quadrature("Monge-Ampere density is negative; derivatives are inconsistent".into()));
    }
    Ok(r)
}

/// Non-pluripolar mixed Monge-Ampère mass of order `p` of a potential,
/// `∫ (dd^c u)^p ∧ (dd^c ||z||²)^{n-p}` off the zero set, via the tube
/// schedule `ε, ε/2, ε/4` and geometric extrapolation.
pub fn potential_mass(
    pot: &dyn Potential,
    dom: &Domain,
    p: usize,
    zs: &ZeroSet,
    eps: f64,
    budget: &QuadBudget,
) -> Result<MassReport> {
    let n = dom.dim();
    if pot.dim() != n {
        return Err(Error::DimensionMismatch(format!("potential on C^{} vs domain in C^{n}", pot.dim())));
    }
    if p > n {
        return Err(Error::InvalidInput(format!("order {p} exceeds dimension {n}")));
    }
    if p == 0 {
        return Ok(MassReport {
            value: dom.euclidean_mass(),
            error: 0.0,
            order: 0,
            eps: vec![],
            samples: vec![],
            extrapolated: false,
            stabilized: true,
            seed: budget.seed,
            budget: *budget,
            method: "closed-form".into(),
            atom: None,
        });
    }
    if zs.is_empty() || matches!(zs, ZeroSet::Unknown) || eps <= 0.0 {
        let r = mass_at(pot, dom, p, zs, 0.0, budget)?;
        return Ok(MassReport {
            value: r.value,
            error: r.error,
            order: p,
            eps: vec![],
            samples: vec![r.value],
            extrapolated: false,
            stabilized: true,
            seed: budget.seed,
            budget: *budget,
            method: method_name(dom).into(),
            atom: None,
        });
    }
    if eps >= dom.min_radius() {
        return Err(Error::InvalidInput("ε must be smaller than every radius".into()));
    }
    let schedule = [eps, eps / 2.0, eps / 4.0];
    let mut vals = Vec::new();
    let mut qerr: f64 = 0.0;
    for &e in &schedule {
        let r = mass_at(pot, dom, p, zs, e, budget)?;
        qerr = qerr.max(r.error);
        vals.push(r.value);
    }
    let (d1, d2) = (vals[1] - vals[0], vals[2] - vals[1]);
    let tiny = (3.0 * qerr).max(1e-10 * vals[2].abs()).max(1e-12);
    let (value, error, extrapolated, stabilized) = if d1.abs() < tiny && d2.abs() < tiny {
        (vals[2], qerr + d2.abs(), false, true)
    } else {
        let q = d2 / d1;
        if q > 0.0 && q < 0.9 {
            let corr = d2 * q / (1.0 - q);
            (vals[2] + corr, qerr + corr.abs(), true, true)
        } else {
            (vals[2], qerr + d2.abs(), false, false)
        }
    };
    Ok(MassReport {
        value,
        error,
        order: p,
        eps: schedule.to_vec(),
        samples: vals,
        extrapolated,
        stabilized,
        seed: budget.seed,
        budget: *budget,
        method: method_name(dom).into(),
        atom: None,
    })
}

/// [`potential_mass`] for `u = ln ||F||²`.
pub fn mixed_ma_mass(
    f: &dyn Lift,
    dom: &Domain,
    p: usize,
    zs: &ZeroSet,
    eps: f64,
    budget: &QuadBudget,
) -> Result<MassReport> {
    potential_mass(&LogNormPotential::new(f), dom, p, zs, eps, budget)
}

/// Volume of the graph of `F` over the domain,
/// `Σ_p C(n,p) ∫ (dd^c u)^p ∧ (dd^c ||z||²)^{n-p}`.
pub fn graph_volume(f: &dyn Lift, dom: &Domain, zs: &ZeroSet, eps: f64, budget: &QuadBudget) -> Result<MassReport> {
    let n = dom.dim();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut samples = Vec::new();
    let mut stabilized = true;
    let mut extrapolated = false;
    for p in 0..=n {
        let m = mixed_ma_mass(f, dom, p, zs, eps, budget)?;
        let c = binomial(n, p);
        value += c * m.value;
        error += c * m.error;
        samples.push(m.value);
        stabilized &= m.stabilized;
        extrapolated |= m.extrapolated;
    }
    Ok(MassReport {
        value,
        error,
        order: n,
        eps: if zs.is_empty() { vec![] } else { vec![eps, eps / 2.0, eps / 4.0] },
        samples,
        extrapolated,
        stabilized,
        seed: budget.seed,
        budget: *budget,
        method: format!("graph/{}", method_name(dom)),
        atom: None,
    })
}
