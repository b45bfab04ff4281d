use num_complex::Complex64;

use super::lift::Lift;

type C = Complex64;

/// First derivatives and Levi matrix of a real potential at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct PotJet {
    /// `∂u/∂z_a`.
    pub du: Vec<C>,
    /// Row-major `H[a * n + b] = ∂²u/∂z_a∂z̄_b` (Hermitian).
    pub hess: Vec<C>,
}

/// Plurisubharmonic potential on a domain of `C^n`.
pub trait Potential: Sync {
    fn dim(&self) -> usize;
    /// `None` where the potential is singular.
    fn jet(&self, z: &[C]) -> Option<PotJet>;
}

/// `u = ln ||F||²` for a holomorphic lift `F`.
pub struct LogNormPotential<'a> {
    pub lift: &'a dyn Lift,
}

impl<'a> LogNormPotential<'a> {
    pub fn new(lift: &'a dyn Lift) -> Self {
        LogNormPotential { lift }
    }
}

impl Potential for LogNormPotential<'_> {
    fn dim(&self) -> usize {
        self.lift.nvars()
    }

    fn jet(&self, z: &[C]) -> Option<PotJet> {
        let j = self.lift.jet(z);
        log_norm_jet(&j.f, &j.df, z.len())
    }
}

/// Derivatives of `ln ||F||²` from values and Jacobian of `F`.
///
/// The Levi matrix is taken in Lagrange form
/// `H_ab = Σ_{i<j} W_a conj(W_b) / ||F||⁴` with `W_a = F_{i,a} F_j - F_{j,a} F_i`,
/// which is manifestly positive semidefinite and free of cancellation. Both
/// sides are homogeneous in `(F, dF)`, so the data is rescaled first.
pub fn log_norm_jet(f: &[C], df: &[C], n: usize) -> Option<PotJet> {
    let scale = f.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return None;
    }
    let inv = 1.0 / scale;
    let f: Vec<C> = f.iter().map(|v| v * inv).collect();
    let df: Vec<C> = df.iter().map(|v| v * inv).collect();
    let s: f64 = f.iter().map(|v| v.norm_sqr()).sum();
    let m = f.len();
    let mut du = vec![C::new(0.0, 0.0); n];
    for i in 0..m {
        let fc = f[i].conj();
        for a in 0..n {
            du[a] += df[i * n + a] * fc;
        }
    }
    for v in du.iter_mut() {
        *v /= s;
    }
    let mut hess = vec![C::new(0.0, 0.0); n * n];
    let mut w = vec![C::new(0.0, 0.0); n];
    for i in 0..m {
        for j in i + 1..m {
            for a in 0..n {
                w[a] = df[i * n + a] * f[j] - df[j * n + a] * f[i];
            }
            for a in 0..n {
                for b in 0..n {
                    hess[a * n + b] += w[a] * w[b].conj();
                }
            }
        }
    }
    let s2 = s * s;
    for v in hess.iter_mut() {
        *v /= s2;
    }
    Some(PotJet { du, hess })
}

/// `u = ln(|z1|² + |z1 - ε|² + |z2|² + |z3|^k)` on `C³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RashPotential {
    pub k: f64,
    pub eps: f64,
}

impl Potential for RashPotential {
    fn dim(&self) -> usize {
        3
    }

    fn jet(&self, z: &[C]) -> Option<PotJet> {
        let (z1, z2, z3) = (z[0], z[1], z[2]);
        let a3 = z3.norm();
        let t3 = if a3 > 0.0 { a3.powf(self.k) } else { 0.0 };
        let rho = z1.norm_sqr() + (z1 - self.eps).norm_sqr() + z2.norm_sqr() + t3;
        if !(rho > 0.0) {
            return None;
        }
        // |z3|^(k-2) blows up at z3 = 0 for k < 2; that slice is null.
        let p3 = if a3 > 0.0 {
            a3.powf(self.k - 2.0)
        } else if self.k == 2.0 {
            1.0
        } else if self.k > 2.0 {
            0.0
        } else {
            return None;
        };
        let half = 0.5 * self.k;
        let d = [
            (z1 + (z1 - self.eps)).conj(),
            z2.conj(),
            half * z3.conj() * p3,
        ];
        let dd = [2.0, 1.0, half * half * p3];
        let mut hess = vec![C::new(0.0, 0.0); 9];
        for a in 0..3 {
            for b in 0..3 {
                let mut v = -d[a] * d[b].conj() / (rho * rho);
                if a == b {
                    v += dd[a] / rho;
                }
                hess[a * 3 + b] = v;
            }
        }
        Some(PotJet {
            du: d.iter().map(|v| v / rho).collect(),
            hess,
        })
    }
}

/// `φ = |u1|^{2N} + ln(|u1|^{2N-2} + |u2|²)` on `C²`: pullback of a product
/// metric by the vertical-line preserving iterates of the quadratic example,
/// up to a pluriharmonic term.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaPotential {
    pub n: u32,
}

impl Potential for GammaPotential {
    fn dim(&self) -> usize {
        2
    }

    fn jet(&self, z: &[C]) -> Option<PotJet> {
        let n = self.n;
        let (u1, u2) = (z[0], z[1]);
        let f = [u1.powu(n - 1), u2];
        let df = [
            if n >= 2 { (n - 1) as f64 * u1.powu(n - 2) } else { C::new(0.0, 0.0) },
            C::new(0.0, 0.0),
            C::new(0.0, 0.0),
            C::new(1.0, 0.0),
        ];
        let mut j = log_norm_jet(&f, &df, 2)?;
        let nf = n as f64;
        let r2 = u1.norm_sqr();
        j.du[0] += nf * u1.powu(n - 1) * u1.conj().powu(n);
        j.hess[0] += nf * nf * r2.powi(n as i32 - 1);
        Some(j)
    }
}

/// Elementary symmetric function `e_p` of the eigenvalues of a Hermitian
/// matrix, as the sum of principal `p × p` minors.
pub fn elementary_symmetric(h: &[C], n: usize, p: usize) -> f64 {
    match p {
        0 => 1.0,
        1 => (0..n).map(|a| h[a * n + a].re).sum(),
        _ if p > n => 0.0,
        _ => {
            let mut total = 0.0;
            let mut idx: Vec<usize> = (0..p).collect();
            loop {
                total += det(&idx.iter().flat_map(|&a| idx.iter().map(move |&b| h[a * n + b])).collect::<Vec<_>>(), p).re;
                // next combination
                let mut i = p;
                while i > 0 && idx[i - 1] == n - p + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..p {
                    idx[j] = idx[j - 1] + 1;
                }
            }
            total
        }
    }
}

fn det(m: &[C], n: usize) -> C {
    match n {
        1 => m[0],
        2 => m[0] * m[3] - m[1] * m[2],
        3 => {
            m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6])
                + m[2] * (m[3] * m[7] - m[4] * m[6])
        }
        _ => {
            let mut a = m.to_vec();
            let mut d = C::new(1.0, 0.0);
            for k in 0..n {
                let piv = (k..n).max_by(|&i, &j| a[i * n + k].norm().total_cmp(&a[j * n + k].norm())).unwrap();
                if a[piv * n + k].norm() == 0.0 {
                    return C::new(0.0, 0.0);
                }
                if piv != k {
                    for c in 0..n {
                        a.swap(k * n + c, piv * n + c);
                    }
                    d = -d;
                }
                d *= a[k * n + k];
                for i in k + 1..n {
                    let r = a[i * n + k] / a[k * n + k];
                    for c in k..n {
                        let v = a[k * n + c];
                        a[i * n + c] -= r * v;
                    }
                }
            }
            d
        }
    }
}
