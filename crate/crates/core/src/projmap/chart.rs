use serde::Serialize;

use super::HomogRep;
use crate::error::{Error, Result};
use crate::poly::{poly_gcd, SparsePoly};

/// Affine coordinates of the image, each a reduced fraction of polynomials
/// in the chart coordinates of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRationalMap {
    pub source_chart: usize,
    pub target_chart: usize,
    pub numerators: Vec<SparsePoly>,
    pub denominators: Vec<SparsePoly>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSummary {
    pub source_chart: usize,
    pub target_chart: usize,
    pub coordinates: Vec<String>,
}

impl AffineRationalMap {
    pub fn summary(&self) -> AffineSummary {
        AffineSummary {
            source_chart: self.source_chart,
            target_chart: self.target_chart,
            coordinates: self
                .numerators
                .iter()
                .zip(&self.denominators)
                .map(|(n, d)| {
                    if d.is_constant() && d.leading_term().unwrap().1 == &num_traits::One::one() {
                        n.to_string()
                    } else {
                        format!("({n}) / ({d})")
                    }
                })
                .collect(),
        }
    }
}

/// Restriction to the chart `U_j` in source and target.
pub fn restrict_chart(r: &HomogRep, chart: usize) -> Result<AffineRationalMap> {
    restrict_charts(r, chart, chart)
}

/// Restriction from the source chart `U_src` to the target chart `U_dst`.
pub fn restrict_charts(r: &HomogRep, src: usize, dst: usize) -> Result<AffineRationalMap> {
    if !r.is_projective() {
        return Err(Error::InvalidInput("chart restriction needs a projective source".into()));
    }
    if src > r.source_dim() || dst > r.target_dim() {
        return Err(Error::InvalidInput(format!("no chart U_{src} -> U_{dst}")));
    }
    let local: Vec<SparsePoly> = r
        .tuple()
        .components()
        .iter()
        .map(|p| p.dehomogenize(src))
        .collect();
    let den = &local[dst];
    if den.is_zero() {
        return Err(Error::InvalidInput(format!(
            "component {dst} vanishes identically; the image misses U_{dst}"
        )));
    }
    let nv = den.nvars();
    let mut numerators = Vec::new();
    let mut denominators = Vec::new();
    for (i, num) in local.iter().enumerate() {
        if i == dst {
            continue;
        }
        if num.is_zero() {
            numerators.push(SparsePoly::zero(nv));
            denominators.push(SparsePoly::one(nv));
            continue;
        }
        let g = poly_gcd(num, den);
        let n = num.div_exact(&g).expect("gcd divides");
        let d = den.div_exact(&g).expect("gcd divides");
        let (_, lc) = d.leading_term().unwrap();
        let inv = lc.inv().unwrap();
        numerators.push(n.scale(&inv));
        denominators.push(d.scale(&inv));
    }
    Ok(AffineRationalMap {
        source_chart: src,
        target_chart: dst,
        numerators,
        denominators,
    })
}
