use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::family::MapFamily;
use crate::error::{Error, Result};
use crate::geom::Domain;
use crate::poly::{Exponents, GaussianRational, PolyTuple, SparsePoly};
use crate::projmap::{iterate_closed, HomogRep};

/// A named example: a rational map, a family of local maps, or both.
#[derive(Clone, Debug)]
pub struct RegistryEntry {
    pub name: String,
    pub description: String,
    pub map: Option<HomogRep>,
    pub family: Option<MapFamily>,
}

/// Names accepted by [`lookup`]; `deg-d` also accepts `deg-<d>`.
pub const EXAMPLES: [&str; 7] = ["exp", "exp-b", "rutish", "rash", "cremona", "deg2", "deg-d"];

fn mono(c: GaussianRational, e: &[u64]) -> SparsePoly {
    SparsePoly::monomial(c, Exponents::from_u64s(e))
}

fn ratio(num: i64, den: &BigInt) -> GaussianRational {
    GaussianRational::from_real(BigRational::new(BigInt::from(num), den.clone()))
}

fn local(comps: Vec<SparsePoly>) -> Result<HomogRep> {
    Ok(HomogRep::local(PolyTuple::new(comps)?))
}

/// `[z^k : z^k + z^{k-1} + ... + 1/k!]`, the partial sums of `e^{1/z}`.
pub fn exp_family() -> MapFamily {
    MapFamily::new("exp", Domain::unit_polydisk(1), (1..=12).collect(), |k| {
        let one = GaussianRational::one();
        let mut sum = SparsePoly::zero(1);
        let mut fact = BigInt::one();
        for j in 0..=k {
            if j > 0 {
                fact *= j;
            }
            sum = &sum + &mono(ratio(1, &fact), &[k - j]);
        }
        local(vec![mono(one, &[k]), sum])
    })
}

/// `[z : z − 1/k]`.
pub fn exp_b_family() -> Result<MapFamily> {
    let z = SparsePoly::var(1, 0);
    let limit = local(vec![z.clone(), z])?;
    Ok(MapFamily::new("exp-b", Domain::unit_polydisk(1), (1..=50).collect(), |k| {
        let z = SparsePoly::var(1, 0);
        let c = SparsePoly::constant(1, ratio(-1, &BigInt::from(k)));
        local(vec![z.clone(), &z + &c])
    })
    .with_limit(limit))
}

/// `[z1 : 2^{-k} z2^k]` on the bidisk.
pub fn rutish_family() -> Result<MapFamily> {
    let limit = local(vec![SparsePoly::var(2, 0), SparsePoly::zero(2)])?;
    Ok(MapFamily::new("rutish", Domain::unit_polydisk(2), (1..=12).collect(), |k| {
        let c = ratio(1, &(BigInt::one() << k as usize));
        local(vec![SparsePoly::var(2, 0), mono(c, &[0, k])])
    })
    .with_limit(limit))
}

/// `[z1 : z1 − ε_k : z2 : z3^k]` with `ε_k = 1/(8 + 2k)`, on the ball of
/// radius 1/2.
pub fn rash_family() -> Result<MapFamily> {
    let z1 = SparsePoly::var(3, 0);
    let limit = local(vec![z1.clone(), z1, SparsePoly::var(3, 1), SparsePoly::zero(3)])?;
    Ok(MapFamily::new("rash", Domain::centered_ball(3, 0.5), (1..=24).collect(), |k| {
        let z1 = SparsePoly::var(3, 0);
        let den = BigInt::from(8 + 2 * k);
        let e = SparsePoly::constant(3, ratio(-1, &den));
        local(vec![
            z1.clone(),
            &z1 + &e,
            SparsePoly::var(3, 1),
            mono(GaussianRational::one(), &[0, 0, k]),
        ])
    })
    .with_limit(limit)
    .with_mass_ks(vec![1, 2, 3]))
}

/// `[z1 z2 : z0 z2 : z0 z1]`.
pub fn cremona() -> HomogRep {
    HomogRep::from_int_terms(3, &[&[(1, &[0, 1, 1])], &[(1, &[1, 0, 1])], &[(1, &[1, 1, 0])]])
        .expect("homogeneous")
}

/// The Cremona involution in the chart `z0 = 1`, as a family constant in `k`.
pub fn cremona_family() -> Result<MapFamily> {
    let r = cremona().dehomogenize(0)?;
    let g = r.clone();
    Ok(MapFamily::new("cremona", Domain::unit_polydisk(2), (1..=5).collect(), move |_| Ok(g.clone()))
        .with_limit(r)
        .with_chart(0))
}

/// `[z0^d z1 : z1^{d+1} : z0^d z2]`, of topological degree `d`.
pub fn map_f_d(d: u64) -> Result<HomogRep> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be at least 1".into()));
    }
    HomogRep::from_int_terms(3, &[&[(1, &[d, 1, 0])], &[(1, &[0, d + 1, 0])], &[(1, &[d, 0, 1])]])
}

/// `[z0² z1 : z1³ : z0² z2]`.
pub fn map_f() -> HomogRep {
    map_f_d(2).expect("d = 2")
}

/// Iterates `f^k` in the source chart `U_chart`, on a polydisk there.
pub fn iterate_family(
    name: impl Into<String>,
    f: &HomogRep,
    chart: usize,
    center: Vec<Complex64>,
    radius: f64,
    ks: Vec<u64>,
) -> Result<MapFamily> {
    let n = f.source_dim();
    let dom = Domain::polydisk(center, vec![radius; n])?;
    let g = f.clone();
    Ok(MapFamily::new(name, dom, ks, move |k| iterate_closed(&g, k)?.dehomogenize(chart)).with_chart(chart))
}

fn deg_family(name: &str, d: u64) -> Result<MapFamily> {
    iterate_family(name, &map_f_d(d)?, 0, vec![Complex64::new(0.0, 0.0); 2], 0.9, (1..=8).collect())
}

/// Looks up a registry entry by name.
pub fn lookup(name: &str) -> Result<RegistryEntry> {
    let entry = |desc: &str, map: Option<HomogRep>, family: Option<MapFamily>| RegistryEntry {
        name: name.to_string(),
        description: desc.to_string(),
        map,
        family,
    };
    Ok(match name {
        "exp" => entry("[z^k : z^k + ... + 1/k!] on the unit disk", None, Some(exp_family())),
        "exp-b" => entry("[z : z - 1/k] on the unit disk", None, Some(exp_b_family()?)),
        "rutish" => entry("[z1 : 2^-k z2^k] on the unit bidisk", None, Some(rutish_family()?)),
        "rash" => entry(
            "[z1 : z1 - 1/(8+2k) : z2 : z3^k] on the ball of radius 1/2",
            None,
            Some(rash_family()?),
        ),
        "cremona" => entry(
            "[z1z2 : z0z2 : z0z1]; family constant in k, chart z0 = 1",
            Some(cremona()),
            Some(cremona_family()?),
        ),
        "deg2" => entry(
            "[z0^2 z1 : z1^3 : z0^2 z2]; family of iterates in the chart z0 = 1",
            Some(map_f()),
            Some(deg_family(name, 2)?),
        ),
        _ => {
            let d = match name.strip_prefix("deg-") {
                Some("d") => 3,
                Some(s) => s
                    .parse::<u64>()
                    .ok()
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown example {name:?}")))?,
                None => return Err(Error::InvalidInput(format!("unknown example {name:?}"))),
            };
            entry(
                &format!("[z0^{d} z1 : z1^{} : z0^{d} z2]; family of iterates in the chart z0 = 1", d + 1),
                Some(map_f_d(d)?),
                Some(deg_family(name, d)?),
            )
        }
    })
}

/// Every registry entry, in listing order.
pub fn registry() -> Result<Vec<RegistryEntry>> {
    EXAMPLES.iter().map(|n| lookup(n)).collect()
}
