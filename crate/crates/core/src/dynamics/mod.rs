//! Iteration of rational self-maps of `P²`: orbits, Fatou/Julia scans, the
//! volume series of the quadratic example and Fatou-set memberships.

mod inclusion;
mod orbit;
mod scan;
mod volumes;

pub use inclusion::{fatou_inclusion_report, ChartVerdict, InclusionConfig, PointMembership};
pub use orbit::{log_orbit, numeric_orbit, Dominance, LimitPoint, MonomialOrbits, OrbitRecord, OrbitStep, TAIL};
pub use scan::{fatou_scan, FatouScanGrid, ScanCell, ScanConfig, ScanLabel};
pub use volumes::{gamma_volume_series, CrossCheck, GammaVolumeSeries, VolumeConfig};
