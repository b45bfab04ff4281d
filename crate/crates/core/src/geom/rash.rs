use serde::Serialize;

use super::domain::{Domain, QuadBudget, ZeroSet};
use super::mass::{potential_mass, MassReport};
use super::potential::RashPotential;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RashReport {
    pub k: u32,
    pub eps: f64,
    pub mass: MassReport,
}

/// Monge-Ampère mass of `ln(|z1|² + |z1 - ε|² + |z2|² + |z3|^k)` on a ball
/// of `C³` centered at the origin.
///
/// For `ε > 0` the potential is smooth and the whole mass is absolutely
/// continuous. For `ε = 0` and even `k` it is `ln ||G||²` with
/// `G = (√2 z1, z2, z3^{k/2})`, whose mass is an atom of size `k/2` at the
/// origin (the local degree of `G`); that value is attached to the report.
pub fn rashkovskii_mass(k: u32, eps: f64, dom: &Domain, budget: &QuadBudget) -> Result<RashReport> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if dom.dim() != 3 {
        return Err(Error::DimensionMismatch("the potential lives on C^3".into()));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidInput("ε must be nonnegative".into()));
    }
    let pot = RashPotential { k: k as f64, eps };
    let zs = if eps == 0.0 { ZeroSet::origin(3) } else { ZeroSet::Empty };
    let mut mass = potential_mass(&pot, dom, 3, &zs, 0.0, budget)?;
    if eps == 0.0 && k % 2 == 0 {
        let atom = (k / 2) as f64;
        mass.atom = Some(atom);
    }
    Ok(RashReport { k, eps, mass })
}

/// Parameter `ε_k = 1/(8 + 2k)` of the divergent family.
pub fn rash_eps(k: u32) -> f64 {
    1.0 / (8.0 + 2.0 * k as f64)
}
