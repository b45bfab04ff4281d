use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{HomogRep, Source};
use crate::error::{Error, Result};
use crate::poly::{Exponents, GaussianRational, PolyTuple, SparsePoly};

/// Exact coefficient powers are refused when the result would need more than
/// about this many bits, unless the coefficient is a root of unity `±1, ±i`.
const MAX_COEFF_BITS: u64 = 1 << 20;

/// Self-map of `P^n` whose components are single monomials `c_j z^{E_j}`.
///
/// Stored in reduced form: every column of `E` has minimum 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    exps: Vec<Vec<BigUint>>,
    coeffs: Vec<GaussianRational>,
}

impl MonomialMap {
    /// Fails unless `r` is a projective self-map with nonzero monomial components.
    pub fn from_rep(r: &HomogRep) -> Result<Self> {
        if !r.is_projective() || r.source_dim() != r.target_dim() {
            return Err(Error::Unsupported("monomial maps must be self-maps of P^n".into()));
        }
        let mut exps = Vec::new();
        let mut coeffs = Vec::new();
        for p in r.tuple().components() {
            if !p.is_monomial() {
                return Err(Error::Unsupported("component is not a single monomial".into()));
            }
            let (e, c) = p.leading_term().unwrap();
            exps.push(e.as_slice().to_vec());
            coeffs.push(c.clone());
        }
        Ok(Self::reduced(exps, coeffs))
    }

    fn reduced(mut exps: Vec<Vec<BigUint>>, mut coeffs: Vec<GaussianRational>) -> Self {
        let ncols = exps[0].len();
        for c in 0..ncols {
            let m = exps.iter().map(|row| row[c].clone()).min().unwrap();
            if !m.is_zero() {
                for row in exps.iter_mut() {
                    row[c] -= &m;
                }
            }
        }
        let lead = coeffs[0].inv().unwrap();
        for c in coeffs.iter_mut() {
            *c = &*c * &lead;
        }
        MonomialMap { exps, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.exps.len() - 1
    }

    /// Homogeneous exponent matrix; row `j` is the exponent of component `j`.
    pub fn exponent_matrix(&self) -> &[Vec<BigUint>] {
        &self.exps
    }

    pub fn coefficients(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn to_rep(&self) -> Result<HomogRep> {
        let n = self.exps[0].len();
        let comps = self
            .exps
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| SparsePoly::monomial(c.clone(), Exponents::from_vec(e.clone())))
            .collect();
        let rep = HomogRep::new(PolyTuple::new(comps)?)?;
        debug_assert_eq!(rep.tuple().nvars(), n);
        super::reduce_rep(&rep)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap> {
        if self.dim() != inner.dim() {
            return Err(Error::DimensionMismatch("monomial maps of different dimension".into()));
        }
        let n = self.exps[0].len();
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut coeffs = Vec::with_capacity(self.exps.len());
        for (row, c) in self.exps.iter().zip(&self.coeffs) {
            let mut e = vec![BigUint::zero(); n];
            let mut coef = c.clone();
            for (i, k) in row.iter().enumerate() {
                if k.is_zero() {
                    continue;
                }
                for (col, x) in inner.exps[i].iter().enumerate() {
                    e[col] += k * x;
                }
                coef = &coef * &checked_coeff_pow(&inner.coeffs[i], k)?;
            }
            exps.push(e);
            coeffs.push(coef);
        }
        Ok(Self::reduced(exps, coeffs))
    }

    /// `k`-fold iterate by binary powering of the exponent matrix.
    pub fn power(&self, k: &BigUint) -> Result<MonomialMap> {
        if k.is_zero() {
            return Err(Error::InvalidInput("iterate count must be at least 1".into()));
        }
        let mut acc: Option<MonomialMap> = None;
        let mut sq = self.clone();
        let bits = k.bits();
        for i in 0..bits {
            if k.bit(i) {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.compose(&sq)?,
                });
            }
            if i + 1 < bits {
                sq = sq.compose(&sq)?;
            }
        }
        Ok(acc.unwrap())
    }

    /// Laurent exponent matrix of the map in the affine chart `U_j` (source
    /// and target): entry `(a, b)` is `E[a][b] - E[j][b]` over indices `≠ j`.
    pub fn affine_matrix(&self, chart: usize) -> Vec<Vec<BigInt>> {
        let idx: Vec<usize> = (0..=self.dim()).filter(|&i| i != chart).collect();
        idx.iter()
            .map(|&a| {
                idx.iter()
                    .map(|&b| BigInt::from(self.exps[a][b].clone()) - BigInt::from(self.exps[chart][b].clone()))
                    .collect()
            })
            .collect()
    }

    /// Generic fiber cardinality: `|det|` of the affine exponent matrix.
    pub fn topological_degree(&self) -> Result<BigUint> {
        let d = determinant(&self.affine_matrix(0));
        if d.is_zero() {
            return Err(Error::SingularExponentMatrix);
        }
        Ok(d.abs().to_biguint().unwrap())
    }

    /// Coordinate hyperplanes `{z_i = 0}` whose generic point maps to a
    /// single point, with that point.
    pub fn contracted_curves(&self) -> Vec<ContractedCurve> {
        let n = self.exps[0].len();
        let mut out = Vec::new();
        for line in 0..n {
            let survivors: Vec<usize> = (0..self.exps.len())
                .filter(|&j| self.exps[j][line].is_zero())
                .collect();
            if survivors.is_empty() {
                continue;
            }
            let first = &self.exps[survivors[0]];
            let constant_ratio = survivors.iter().all(|&j| {
                (0..n).all(|b| b == line || self.exps[j][b] == first[b])
            });
            if constant_ratio {
                let image = (0..self.exps.len())
                    .map(|j| {
                        if survivors.contains(&j) {
                            self.coeffs[j].clone()
                        } else {
                            GaussianRational::zero()
                        }
                    })
                    .collect();
                out.push(ContractedCurve { line, image });
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedCurve {
    /// Index `i` of the coordinate hyperplane `{z_i = 0}`.
    pub line: usize,
    /// Homogeneous coordinates of the image point.
    pub image: Vec<GaussianRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractedCurveSummary {
    pub line: String,
    pub image: String,
}

impl ContractedCurve {
    pub fn summary(&self) -> ContractedCurveSummary {
        let img: Vec<String> = self.image.iter().map(|c| c.to_string()).collect();
        ContractedCurveSummary {
            line: format!("z{}=0", self.line),
            image: format!("[{}]", img.join(":")),
        }
    }
}

fn checked_coeff_pow(c: &GaussianRational, k: &BigUint) -> Result<GaussianRational> {
    if !c.is_unit_root() {
        let size = c.re().numer().bits() + c.re().denom().bits() + c.im().numer().bits() + c.im().denom().bits();
        if k * BigUint::from(size) > BigUint::from(MAX_COEFF_BITS) {
            return Err(Error::ExponentTooLarge(k.bits()));
        }
    }
    Ok(c.pow(k))
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Convenience: the topological degree of a representation, or
/// [`Error::Unsupported`] for non-monomial maps.
pub fn topological_degree(r: &HomogRep) -> Result<BigUint> {
    MonomialMap::from_rep(r)?.topological_degree()
}

impl HomogRep {
    pub fn as_monomial(&self) -> Option<MonomialMap> {
        if self.source() != Source::Projective {
            return None;
        }
        MonomialMap::from_rep(self).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_f_d(d: u64) -> HomogRep {
        HomogRep::from_int_terms(
            3,
            &[&[(1, &[d, 1, 0])], &[(1, &[0, d + 1, 0])], &[(1, &[d, 0, 1])]],
        )
        .unwrap()
    }

    fn bi(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn chart_matrix_and_degree() {
        let m = MonomialMap::from_rep(&map_f_d(2)).unwrap();
        assert_eq!(m.affine_matrix(0), bi(&[&[2, 0], &[-1, 1]]));
        assert_eq!(m.topological_degree().unwrap(), BigUint::from(2u32));
        for d in 2..=5u64 {
            let m = MonomialMap::from_rep(&map_f_d(d)).unwrap();
            assert_eq!(m.topological_degree().unwrap(), BigUint::from(d));
        }
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = bi(&[&[2, -1, 3], &[0, 4, 1], &[5, 2, -2]]);
        // 2(-8-2) + 1(0-5) + 3(0-20) = -20 - 5 - 60
        assert_eq!(determinant(&m), BigInt::from(-85));
        assert_eq!(determinant(&bi(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }

    #[test]
    fn degenerate_map_is_singular() {
        // [z0 : z0 : z1] collapses onto a line
        let r = HomogRep::from_int_terms(
            3,
            &[&[(1, &[1, 0, 0])], &[(1, &[1, 0, 0])], &[(1, &[0, 1, 0])]],
        )
        .unwrap();
        assert_eq!(topological_degree(&r), Err(Error::SingularExponentMatrix));
    }

    #[test]
    fn contracted_lines_of_quadratic_example() {
        let m = MonomialMap::from_rep(&map_f_d(2)).unwrap();
        let c = m.contracted_curves();
        let one = GaussianRational::from_integer(1);
        let zero = GaussianRational::zero();
        assert_eq!(
            c,
            vec![
                ContractedCurve { line: 0, image: vec![zero.clone(), one.clone(), zero.clone()] },
                ContractedCurve { line: 1, image: vec![zero.clone(), zero.clone(), one.clone()] },
            ]
        );
        let id = MonomialMap::from_rep(&HomogRep::identity(2)).unwrap();
        assert!(id.contracted_curves().is_empty());
    }

    #[test]
    fn large_power_of_non_unit_coefficient_is_refused() {
        let r = HomogRep::from_int_terms(2, &[&[(3, &[2, 0])], &[(1, &[0, 2])]]).unwrap();
        let m = MonomialMap::from_rep(&r).unwrap();
        assert!(m.power(&BigUint::from(5u32)).is_ok());
        assert!(matches!(m.power(&BigUint::from(40u32)), Err(Error::ExponentTooLarge(_))));
    }
}
