//! Numerical pluripotential quantities of holomorphic lifts: Fubini-Study
//! areas, zero counts, mixed Monge-Ampère masses, graph volumes and residue
//! checks.
//!
//! Normalization: `dd^c = (i/2π)∂∂̄`, so `dd^c ln |z|²` has unit mass at the
//! origin and a projective line has Fubini-Study area 1.

mod area;
mod domain;
mod king;
mod lift;
mod mass;
mod potential;
mod quad;
mod rash;
mod zeros;

pub use area::{fs_area_boundary, fs_area_interior, AreaReport};
pub use domain::{ContourSpec, Domain, QuadBudget, ZeroSet};
pub use king::{king_residue_check, sphere_integral, KingReport};
pub use lift::{check_derivatives, ClosureLift, Jet, Lift, PolyLift};
pub use mass::{graph_volume, mixed_density, mixed_ma_mass, potential_mass, MassReport};
pub use potential::{
    elementary_symmetric, log_norm_jet, GammaPotential, LogNormPotential, PotJet, Potential, RashPotential,
};
pub use quad::{gl_unit, graded_toward, integrate, trapezoid, Cut, QuadResult};
pub use rash::{rash_eps, rashkovskii_mass, RashReport};
pub use zeros::{contour_roots, lift_zero_count, zero_count_contour, ContourRoot, ScalarFn, ZeroCount};
