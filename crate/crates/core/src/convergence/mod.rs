//! Convergence of families of meromorphic maps: representation limits,
//! divisor counts, Monge-Ampère masses and the resulting classification.

mod bubble;
mod classify;
mod divisors;
mod family;
mod masses;
mod registry;
mod replimit;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};

pub use bubble::{bubble_probe, BubbleConfig, BubbleReport, BubbleStage, BubbleStatus, Cluster};
pub use classify::{classify, ClassifyConfig, Level, Verdict};
pub use divisors::{
    divisor_count_bound, hyperplane_panel, uniform_separation, Hyperplane, HyperplaneCounts, SeparationPoint,
    SeparationReport,
};
pub use family::{MapFamily, Slice};
pub use masses::{mass_convergence, MassConfig, MassSeries, MassTrend};
pub use registry::{
    cremona, cremona_family, exp_b_family, exp_family, iterate_family, lookup, map_f, map_f_d, rash_family, registry,
    rutish_family, RegistryEntry, EXAMPLES,
};
pub use replimit::{reducedness_of_limit, reducedness_on, rep_limit, MetricPoint, RepConfig, RepLimit, RepTrend, Reducedness};

/// Chordal Fubini-Study distance between two points of `P^m` given by
/// homogeneous coordinates.
pub fn fs_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let ip: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    (1.0 - ip.norm_sqr() / (na * nb)).max(0.0).sqrt()
}

pub(crate) fn ser_points<S: Serializer>(pts: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(pts.len()))?;
    for z in pts {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}
