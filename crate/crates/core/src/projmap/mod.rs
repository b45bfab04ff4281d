//! Projective map representations, reduction, composition and iteration.

mod chart;
mod indet;
mod monomial;
mod rep;

pub use chart::{restrict_chart, restrict_charts, AffineRationalMap, AffineSummary};
pub use indet::{
    common_zeros_local, indeterminacy, CoordinateSubspace, InconclusiveCell, IndetMethod,
    IndetMode, IndeterminacyReport,
};
pub use monomial::{determinant, topological_degree, ContractedCurve, ContractedCurveSummary, MonomialMap};
pub use rep::{compose_reduce, iterate_closed, reduce_rep, HomogRep, RepSummary, Source};
