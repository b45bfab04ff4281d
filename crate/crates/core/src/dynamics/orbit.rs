use std::f64::consts::TAU;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::convergence::{fs_distance, ser_points};
use crate::error::{Error, Result};
use crate::poly::{eval_log, normalize_log, Exponents, GaussianRational, LogPolar, LogValue, PolyTuple, SparsePoly};
use crate::projmap::{HomogRep, MonomialMap};

type C = Complex64;

/// Number of trailing iterates used for the Cauchy test.
pub const TAIL: usize = 5;

/// Coordinate points `p = [1:0:0]`, `r = [0:1:0]`, `q = [0:0:1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitPoint {
    P,
    R,
    Q,
    None,
}

impl LimitPoint {
    pub fn of_index(j: usize) -> Self {
        match j {
            0 => LimitPoint::P,
            1 => LimitPoint::R,
            2 => LimitPoint::Q,
            _ => LimitPoint::None,
        }
    }

    pub fn index(self) -> Option<usize> {
        match self {
            LimitPoint::P => Some(0),
            LimitPoint::R => Some(1),
            LimitPoint::Q => Some(2),
            LimitPoint::None => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LimitPoint::P => "p",
            LimitPoint::R => "r",
            LimitPoint::Q => "q",
            LimitPoint::None => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitStep {
    pub k: u64,
    /// Homogeneous coordinates with max modulus 1.
    #[serde(serialize_with = "ser_points")]
    pub coords: Vec<C>,
}

/// Which exponent form of the last iterate wins, and by how much.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Dominance {
    pub k: u64,
    /// `ln|f^k_j|` minus the largest of them.
    pub forms: Vec<f64>,
    pub leader: Option<usize>,
    /// Gap between the leader and the runner-up at `k`.
    pub margin: f64,
    /// Change of the margin from `k - 1` to `k`.
    pub growth: f64,
    /// Components whose gap to the top does not grow.
    pub active: Vec<usize>,
    /// Whether the exponent rows of active components drift apart.
    pub unstable_tie: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitRecord {
    #[serde(serialize_with = "ser_points")]
    pub point: Vec<C>,
    pub steps: Vec<OrbitStep>,
    pub limit: LimitPoint,
    /// Largest FS distance among the trailing iterates.
    pub tail_diameter: f64,
    pub converged: bool,
    /// Leading forms tie and separate under perturbation.
    pub julia: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Dominance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indeterminate_at: Option<u64>,
    pub method: String,
}

impl OrbitRecord {
    pub fn last(&self) -> Option<&[C]> {
        self.steps.last().map(|s| s.coords.as_slice())
    }
}

fn tail_diameter(steps: &[OrbitStep]) -> f64 {
    let t = &steps[steps.len().saturating_sub(TAIL)..];
    let mut d: f64 = 0.0;
    for (i, a) in t.iter().enumerate() {
        for b in &t[i + 1..] {
            d = d.max(fs_distance(&a.coords, &b.coords));
        }
    }
    d
}

fn unit_vector(n: usize, j: usize) -> Vec<C> {
    (0..n).map(|i| if i == j { C::new(1.0, 0.0) } else { C::new(0.0, 0.0) }).collect()
}

/// Coordinate point within `tol` of `z`, if any.
fn coordinate_point(z: &[C], tol: f64) -> LimitPoint {
    (0..z.len())
        .find(|&j| fs_distance(z, &unit_vector(z.len(), j)) <= tol)
        .map(LimitPoint::of_index)
        .unwrap_or(LimitPoint::None)
}

/// Exact exponent matrices and coefficient logs of the iterates of a
/// monomial map, for evaluating orbits in log coordinates.
#[derive(Clone, Debug)]
pub struct MonomialOrbits {
    exps: Vec<Vec<Vec<BigUint>>>,
    fexps: Vec<Vec<Vec<f64>>>,
    log_c: Vec<Vec<f64>>,
    arg_c: Vec<Vec<f64>>,
    tol: f64,
}

impl MonomialOrbits {
    /// Iterates `1..=kmax`; `tol` is the FS Cauchy tolerance.
    pub fn new(m: &MonomialMap, kmax: u64, tol: f64) -> Result<Self> {
        if kmax == 0 {
            return Err(Error::InvalidInput("kmax must be at least 1".into()));
        }
        let rows = m.exponent_matrix();
        let nv = rows[0].len();
        let comps: Vec<SparsePoly> = rows
            .iter()
            .map(|r| SparsePoly::monomial(GaussianRational::one(), Exponents::from_vec(r.clone())))
            .collect();
        let unit = MonomialMap::from_rep(&HomogRep::new(PolyTuple::new(comps)?)?)?;
        let e1: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(big_f64).collect()).collect();
        let c1: Vec<f64> = m.coefficients().iter().map(|c| c.ln_abs()).collect();
        let a1: Vec<f64> = m.coefficients().iter().map(|c| c.arg()).collect();
        let mut exps = vec![unit.exponent_matrix().to_vec()];
        let mut log_c = vec![c1.clone()];
        let mut arg_c = vec![a1.clone()];
        let mut cur = unit.clone();
        for _ in 1..kmax {
            cur = unit.compose(&cur)?;
            exps.push(cur.exponent_matrix().to_vec());
            let (pl, pa) = (log_c.last().unwrap(), arg_c.last().unwrap());
            let mut nl = c1.clone();
            let mut na = a1.clone();
            for i in 0..rows.len() {
                for j in 0..nv {
                    if e1[i][j] != 0.0 {
                        nl[i] += e1[i][j] * pl[j];
                        na[i] = (na[i] + e1[i][j] * pa[j]).rem_euclid(TAU);
                    }
                }
            }
            log_c.push(nl);
            arg_c.push(na);
        }
        let fexps = exps.iter().map(|m| m.iter().map(|r| r.iter().map(big_f64).collect()).collect()).collect();
        Ok(MonomialOrbits {
            exps,
            fexps,
            log_c,
            arg_c,
            tol,
        })
    }

    pub fn kmax(&self) -> u64 {
        self.exps.len() as u64
    }

    /// Exponent matrix of the reduced `k`-th iterate.
    pub fn exponent_matrix(&self, k: u64) -> &[Vec<BigUint>] {
        &self.exps[k as usize - 1]
    }

    /// `(ln|f^k_j|, arg f^k_j)` at a point; `None` when every component
    /// vanishes.
    pub fn forms(&self, k: u64, x: &[LogPolar]) -> Option<Vec<(f64, f64)>> {
        let e = &self.fexps[k as usize - 1];
        let out: Vec<(f64, f64)> = e
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut l = self.log_c[k as usize - 1][i];
                let mut a = self.arg_c[k as usize - 1][i];
                for (j, &ej) in row.iter().enumerate() {
                    if ej != 0.0 {
                        l += ej * x[j].log_modulus;
                        a += (ej * x[j].phase).rem_euclid(TAU);
                    }
                }
                (l, a.rem_euclid(TAU))
            })
            .collect();
        if out.iter().all(|(l, _)| *l == f64::NEG_INFINITY) {
            None
        } else {
            Some(out)
        }
    }

    fn row_spread(&self, k: u64, set: &[usize]) -> f64 {
        let e = &self.fexps[k as usize - 1];
        let mut s: f64 = 0.0;
        for (a, &i) in set.iter().enumerate() {
            for &l in &set[a + 1..] {
                s = s.max(e[i].iter().zip(&e[l]).map(|(x, y)| (x - y).abs()).sum());
            }
        }
        s
    }

    /// Orbit of a point given by homogeneous log-polar coordinates.
    pub fn orbit(&self, x: &[LogPolar]) -> Result<OrbitRecord> {
        if x.len() != self.exps[0].len() {
            return Err(Error::VariableMismatch {
                left: self.exps[0].len(),
                right: x.len(),
            });
        }
        let point = normalize_log(&x.iter().map(|p| log_value(p.log_modulus, p.phase)).collect::<Vec<_>>());
        let mut steps = Vec::new();
        let mut forms = Vec::new();
        for k in 1..=self.kmax() {
            let Some(f) = self.forms(k, x) else {
                return Ok(OrbitRecord {
                    point,
                    tail_diameter: f64::INFINITY,
                    steps,
                    limit: LimitPoint::None,
                    converged: false,
                    julia: false,
                    certificate: None,
                    indeterminate_at: Some(k),
                    method: "log-forms".into(),
                });
            };
            let vals: Vec<LogValue> = f.iter().map(|&(l, a)| log_value(l, a)).collect();
            steps.push(OrbitStep {
                k,
                coords: normalize_log(&vals),
            });
            forms.push(f);
        }
        let cert = self.dominance(&forms);
        let diam = tail_diameter(&steps);
        let converged = diam <= self.tol;
        let (limit, julia) = match &cert {
            Some(c) if c.leader.is_some() && c.growth > 0.0 => (LimitPoint::of_index(c.leader.unwrap()), false),
            Some(c) if c.unstable_tie => (LimitPoint::None, true),
            _ if converged => (coordinate_point(&steps.last().unwrap().coords, self.tol), false),
            _ => (LimitPoint::None, false),
        };
        Ok(OrbitRecord {
            point,
            steps,
            limit,
            tail_diameter: diam,
            converged,
            julia,
            certificate: cert,
            indeterminate_at: None,
            method: "log-forms".into(),
        })
    }

    fn dominance(&self, forms: &[Vec<(f64, f64)>]) -> Option<Dominance> {
        let k = forms.len();
        let last = &forms[k - 1];
        let top = last.iter().map(|f| f.0).fold(f64::NEG_INFINITY, f64::max);
        let scale = 1.0 + last.iter().map(|f| f.0.abs()).filter(|v| v.is_finite()).fold(0.0, f64::max);
        let eq_tol = 1e-12 * scale;
        let rel: Vec<f64> = last.iter().map(|f| f.0 - top).collect();
        let mut order: Vec<usize> = (0..rel.len()).collect();
        order.sort_by(|&a, &b| rel[b].total_cmp(&rel[a]));
        let margin = if order.len() > 1 { -rel[order[1]] } else { f64::INFINITY };
        let leader = (margin > eq_tol).then_some(order[0]);
        let (growth, active) = if k >= 2 {
            let prev = &forms[k - 2];
            let ptop = prev.iter().map(|f| f.0).fold(f64::NEG_INFINITY, f64::max);
            let gap = |f: &[(f64, f64)], t: f64, i: usize| t - f[i].0;
            let active: Vec<usize> = (0..rel.len())
                .filter(|&i| rel[i].is_finite() && gap(last, top, i) <= gap(prev, ptop, i) + eq_tol)
                .collect();
            let growth = if order.len() > 1 && prev[order[1]].0.is_finite() {
                margin - (prev[order[0]].0 - prev[order[1]].0)
            } else if margin.is_infinite() {
                f64::INFINITY
            } else {
                0.0
            };
            (growth, active)
        } else {
            (0.0, vec![order[0]])
        };
        let unstable_tie = k >= 2 && active.len() >= 2 && self.row_spread(k as u64, &active) > self.row_spread(k as u64 - 1, &active);
        Some(Dominance {
            k: k as u64,
            forms: rel,
            leader,
            margin,
            growth,
            active,
            unstable_tie,
        })
    }
}

fn big_f64(b: &BigUint) -> f64 {
    if b.is_zero() {
        0.0
    } else {
        b.to_f64().unwrap_or(f64::INFINITY)
    }
}

fn log_value(l: f64, a: f64) -> LogValue {
    LogValue {
        log_modulus: l,
        phase: a,
        exact: true,
        error_bound: 0.0,
    }
}

/// Orbit of a monomial self-map in log coordinates, iterates `1..=k`.
pub fn log_orbit(m: &MonomialMap, x: &[LogPolar], k: u64) -> Result<OrbitRecord> {
    MonomialOrbits::new(m, k, 1e-4)?.orbit(x)
}

/// Orbit by evaluation: closed-form iterates for monomial maps, stepwise
/// renormalized iteration otherwise. The limit is read off the FS Cauchy
/// test on the last iterates.
pub fn numeric_orbit(f: &HomogRep, point: &[C], kmax: u64, tol: f64) -> Result<OrbitRecord> {
    if !f.is_projective() || f.source_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch("orbits need a self-map of P^n".into()));
    }
    if point.len() != f.source_dim() + 1 {
        return Err(Error::VariableMismatch {
            left: f.source_dim() + 1,
            right: point.len(),
        });
    }
    let lp = |z: &[C]| z.iter().map(|&w| LogPolar::from_complex(w)).collect::<Vec<_>>();
    let x0 = lp(point);
    let start = normalize_log(&x0.iter().map(|p| log_value(p.log_modulus, p.phase)).collect::<Vec<_>>());
    let monomial = MonomialMap::from_rep(f).ok();
    let mut steps: Vec<OrbitStep> = Vec::new();
    let mut cur = start.clone();
    let mut power = monomial.clone();
    let mut indeterminate_at = None;
    for k in 1..=kmax {
        let vals = match &monomial {
            Some(m) => {
                if k > 1 {
                    power = Some(m.compose(power.as_ref().unwrap())?);
                }
                eval_log(power.as_ref().unwrap().to_rep()?.tuple(), &x0)
            }
            None => eval_log(f.tuple(), &lp(&cur)),
        };
        let vals = match vals {
            Ok(v) if monomial.is_some() || v.iter().any(|v| v.log_modulus > -700.0) => v,
            Ok(_) | Err(Error::Indeterminate) => {
                indeterminate_at = Some(k);
                break;
            }
            Err(e) => return Err(e),
        };
        cur = normalize_log(&vals);
        steps.push(OrbitStep { k, coords: cur.clone() });
    }
    let diam = if indeterminate_at.is_some() || steps.is_empty() { f64::INFINITY } else { tail_diameter(&steps) };
    let converged = diam <= tol;
    let limit = if converged { coordinate_point(&steps.last().unwrap().coords, tol) } else { LimitPoint::None };
    Ok(OrbitRecord {
        point: start,
        steps,
        limit,
        tail_diameter: diam,
        converged,
        julia: false,
        certificate: None,
        indeterminate_at,
        method: if monomial.is_some() { "closed-form".into() } else { "stepwise".into() },
    })
}
