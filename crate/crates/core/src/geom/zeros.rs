use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::domain::ContourSpec;
use super::lift::Lift;
use crate::error::{Error, Result};

type C = Complex64;
type Scalar<'a> = dyn Fn(C) -> C + Send + Sync + 'a;

const MAX_NODES: usize = 1 << 18;

/// Holomorphic function of one variable with an optional derivative.
/// Without one, a sixth-order central difference is used.
pub struct ScalarFn<'a> {
    f: Box<Scalar<'a>>,
    df: Option<Box<Scalar<'a>>>,
}

impl<'a> ScalarFn<'a> {
    pub fn new(f: impl Fn(C) -> C + Send + Sync + 'a) -> Self {
        ScalarFn { f: Box::new(f), df: None }
    }

    pub fn with_derivative(mut self, df: impl Fn(C) -> C + Send + Sync + 'a) -> Self {
        self.df = Some(Box::new(df));
        self
    }

    pub fn eval(&self, z: C) -> C {
        (self.f)(z)
    }

    pub fn derivative(&self, z: C) -> C {
        match &self.df {
            Some(d) => d(z),
            None => {
                let h = 1e-3 * z.norm().max(1.0);
                let f = &self.f;
                (-f(z - 3.0 * h) + 9.0 * f(z - 2.0 * h) - 45.0 * f(z - h) + 45.0 * f(z + h)
                    - 9.0 * f(z + 2.0 * h)
                    + f(z + 3.0 * h))
                    / (60.0 * h)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCount {
    pub count: usize,
    /// Distance of the contour integral from the nearest integer.
    pub residual: f64,
    /// `min |h| / max |h|` over the nodes.
    pub min_modulus: f64,
    pub nodes: usize,
}

/// Samples of `w^j h'/h · (z - c)` moments on the contour, `j = 0..=jmax`,
/// with `w = (z - c)/r`; each entry is `Σ_roots w^j`.
fn moments(h: &ScalarFn, c: &ContourSpec, m: usize, jmax: usize) -> Result<(Vec<C>, f64)> {
    let mut s = vec![C::new(0.0, 0.0); jmax + 1];
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for k in 0..m {
        let w = C::from_polar(1.0, TAU * k as f64 / m as f64);
        let z = c.center + c.radius * w;
        let v = h.eval(z);
        let a = v.norm();
        lo = lo.min(a);
        hi = hi.max(a);
        let g = h.derivative(z) / v * (c.radius * w);
        let mut p = g;
        for sj in s.iter_mut() {
            *sj += p;
            p *= w;
        }
    }
    let rel = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(rel >= 1e-12) {
        return Err(Error::VanishingOnContour { min_modulus: lo });
    }
    for sj in s.iter_mut() {
        *sj /= m as f64;
    }
    Ok((s, rel))
}

/// Winding number of `h` around the circle: zeros inside, counted with
/// multiplicity. The node count doubles until successive values agree.
pub fn zero_count_contour(h: &ScalarFn, c: &ContourSpec) -> Result<ZeroCount> {
    if !(c.radius > 0.0) {
        return Err(Error::InvalidInput("contour radius must be positive".into()));
    }
    let mut m = c.nodes.max(8);
    let (mut prev, mut rel) = moments(h, c, m, 0)?;
    loop {
        let (next, r2) = moments(h, c, 2 * m, 0)?;
        m *= 2;
        rel = rel.min(r2);
        let done = (next[0] - prev[0]).norm() < 1e-9;
        prev = next;
        if done || m >= MAX_NODES {
            break;
        }
    }
    let v = prev[0];
    let count = v.re.round();
    let residual = (v - count).norm();
    if residual >= 0.1 || count < 0.0 {
        return Err(Error::ResidualTooLarge { residual });
    }
    Ok(ZeroCount {
        count: count as usize,
        residual,
        min_modulus: rel,
        nodes: m,
    })
}

/// A zero inside the contour, with multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourRoot {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

impl ContourRoot {
    pub fn z(&self) -> C {
        C::new(self.re, self.im)
    }
}

/// Zeros of `h` inside the circle from contour moments: power sums give the
/// polynomial with the same roots (Newton identities), whose roots are found
/// by Durand-Kerner and merged into clusters.
pub fn contour_roots(h: &ScalarFn, c: &ContourSpec) -> Result<Vec<ContourRoot>> {
    let zc = zero_count_contour(h, c)?;
    let k = zc.count;
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut m = zc.nodes;
    let (mut s, _) = moments(h, c, m, k)?;
    while m < MAX_NODES {
        let (s2, _) = moments(h, c, 2 * m, k)?;
        m *= 2;
        let diff = s.iter().zip(&s2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        s = s2;
        if diff < 1e-11 {
            break;
        }
    }
    // e_j from power sums p_j = s[j]
    let mut e = vec![C::new(1.0, 0.0); k + 1];
    for j in 1..=k {
        let mut acc = C::new(0.0, 0.0);
        for i in 1..=j {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * e[j - i] * s[i];
        }
        e[j] = acc / j as f64;
    }
    // monic coefficients of Π (w - w_i): a_j = (-1)^j e_j
    let coef: Vec<C> = (0..=k).map(|j| if j % 2 == 0 { e[j] } else { -e[j] }).collect();
    let roots = durand_kerner(&coef);
    let tol = 1e-2;
    let mut used = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        used[i] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..k {
                if !used[j] && members.iter().any(|&a| (roots[a] - roots[j]).norm() < tol) {
                    used[j] = true;
                    members.push(j);
                    grew = true;
                }
            }
        }
        let mean = members.iter().map(|&a| roots[a]).sum::<C>() / members.len() as f64;
        let z = c.center + c.radius * mean;
        out.push(ContourRoot {
            re: z.re,
            im: z.im,
            multiplicity: members.len(),
        });
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// Roots of the monic polynomial `w^k + a_1 w^{k-1} + ... + a_k`.
fn durand_kerner(a: &[C]) -> Vec<C> {
    let k = a.len() - 1;
    let p = |w: C| a.iter().fold(C::new(0.0, 0.0), |acc, &c| acc * w + c);
    let seed = C::new(0.4, 0.9);
    let mut r: Vec<C> = (0..k).map(|i| 0.5 * seed.powu(i as u32 + 1)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..k {
            let mut den = C::new(1.0, 0.0);
            for j in 0..k {
                if j != i {
                    den *= r[i] - r[j];
                }
            }
            if den.norm() == 0.0 {
                r[i] += C::new(1e-8, 1e-8);
                continue;
            }
            let step = p(r[i]) / den;
            r[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    r
}

/// Common zeros of a lift of a map of one variable inside the circle,
/// counted with multiplicity.
///
/// The zeros of a generic combination `L∘F` are located from contour
/// moments; a cluster counts only if `F` itself vanishes there. Two
/// combinations must agree.
pub fn lift_zero_count(lift: &dyn Lift, c: &ContourSpec) -> Result<usize> {
    if lift.nvars() != 1 {
        return Err(Error::DimensionMismatch("lift zero count needs one variable".into()));
    }
    let scale = (0..256)
        .map(|k| {
            let z = c.center + C::from_polar(c.radius, TAU * k as f64 / 256.0);
            norm(&lift.eval(&[z]))
        })
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::VanishingOnContour { min_modulus: 0.0 });
    }
    let combos = [
        [C::new(1.0, 0.0), C::new(0.613, 0.347), C::new(-0.271, 0.829), C::new(0.158, -0.477)],
        [C::new(0.389, -0.731), C::new(1.0, 0.0), C::new(0.517, 0.262), C::new(-0.644, -0.193)],
    ];
    let mut counts = Vec::new();
    for coeffs in combos {
        let n = lift.ncomps();
        let lc: Vec<C> = (0..n).map(|i| coeffs[i % 4] * (1.0 + (i / 4) as f64 * 0.37)).collect();
        let lc2 = lc.clone();
        let h = ScalarFn::new(move |z| lift.eval(&[z]).iter().zip(&lc).map(|(a, b)| a * b).sum())
            .with_derivative(move |z| lift.jet(&[z]).df.iter().zip(&lc2).map(|(a, b)| a * b).sum());
        let roots = contour_roots(&h, c)?;
        let n_f: usize = roots
            .iter()
            .filter(|r| norm(&lift.eval(&[r.z()])) < 1e-6 * scale)
            .map(|r| r.multiplicity)
            .sum();
        counts.push(n_f);
    }
    if counts[0] != counts[1] {
        return Err(Error::ZeroCountDisagreement {
            first: counts[0],
            second: counts[1],
        });
    }
    Ok(counts[0])
}

fn norm(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
