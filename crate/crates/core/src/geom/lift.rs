use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::{PolyTuple, SparsePoly};

type C = Complex64;

/// Values and first derivatives of a lift at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    pub f: Vec<C>,
    /// Row-major `df[i * n + a] = ∂f_i/∂z_a`.
    pub df: Vec<C>,
}

/// Holomorphic lift `F = (f^0, ..., f^N)` of a map from a domain of `C^n`.
pub trait Lift: Sync {
    fn nvars(&self) -> usize;
    fn ncomps(&self) -> usize;
    fn eval(&self, z: &[C]) -> Vec<C>;
    fn jet(&self, z: &[C]) -> Jet;
}

/// Polynomial with exponents unpacked for fast floating point evaluation.
#[derive(Clone, Debug)]
struct FastPoly {
    terms: Vec<(C, Vec<u32>)>,
}

impl FastPoly {
    fn new(p: &SparsePoly) -> Result<Self> {
        let terms = p
            .terms()
            .map(|(e, c)| {
                let ex = e
                    .iter()
                    .map(|k| k.to_u32().filter(|&k| k < (1 << 24)).ok_or(Error::ExponentTooLarge(k.bits())))
                    .collect::<Result<Vec<u32>>>()?;
                Ok((c.to_complex(), ex))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FastPoly { terms })
    }

    fn eval(&self, z: &[C]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (c, e) in &self.terms {
            let mut t = *c;
            for (zi, &k) in z.iter().zip(e) {
                if k > 0 {
                    t *= zi.powu(k);
                }
            }
            acc += t;
        }
        acc
    }
}

/// Lift given by a polynomial tuple in local coordinates, with exact
/// symbolic derivatives.
#[derive(Clone, Debug)]
pub struct PolyLift {
    nvars: usize,
    comps: Vec<FastPoly>,
    derivs: Vec<FastPoly>,
}

impl PolyLift {
    pub fn new(t: &PolyTuple) -> Result<Self> {
        let n = t.nvars();
        let comps = t.components().iter().map(FastPoly::new).collect::<Result<Vec<_>>>()?;
        let mut derivs = Vec::with_capacity(t.len() * n);
        for p in t.components() {
            for a in 0..n {
                derivs.push(FastPoly::new(&p.derivative(a))?);
            }
        }
        Ok(PolyLift { nvars: n, comps, derivs })
    }
}

impl Lift for PolyLift {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn ncomps(&self) -> usize {
        self.comps.len()
    }

    fn eval(&self, z: &[C]) -> Vec<C> {
        self.comps.iter().map(|p| p.eval(z)).collect()
    }

    fn jet(&self, z: &[C]) -> Jet {
        Jet {
            f: self.eval(z),
            df: self.derivs.iter().map(|p| p.eval(z)).collect(),
        }
    }
}

type Eval = dyn Fn(&[C]) -> Vec<C> + Send + Sync;

/// Lift given by an arbitrary function. Without an explicit derivative the
/// Jacobian comes from sixth-order central differences along real directions.
pub struct ClosureLift {
    nvars: usize,
    ncomps: usize,
    f: Box<Eval>,
    df: Option<Box<Eval>>,
    /// Relative step of the difference quotient.
    pub step: f64,
}

impl ClosureLift {
    pub fn new(nvars: usize, ncomps: usize, f: impl Fn(&[C]) -> Vec<C> + Send + Sync + 'static) -> Self {
        ClosureLift {
            nvars,
            ncomps,
            f: Box::new(f),
            df: None,
            step: 1e-3,
        }
    }

    /// Supplies the row-major Jacobian.
    pub fn with_jacobian(mut self, df: impl Fn(&[C]) -> Vec<C> + Send + Sync + 'static) -> Self {
        self.df = Some(Box::new(df));
        self
    }

    /// Error model of the difference quotient: `O(h^6)` truncation plus
    /// `O(ε_mach / h)` rounding, relative to the function scale.
    pub fn fd_error_model(&self) -> f64 {
        self.step.powi(6) + f64::EPSILON / self.step
    }

    fn fd_jacobian(&self, z: &[C]) -> Vec<C> {
        let n = self.nvars;
        let mut out = vec![C::new(0.0, 0.0); self.ncomps * n];
        let mut w = z.to_vec();
        for a in 0..n {
            let h = self.step * z[a].norm().max(1.0);
            let mut at = |k: f64| {
                w[a] = z[a] + k * h;
                (self.f)(&w)
            };
            let (m3, m2, m1) = (at(-3.0), at(-2.0), at(-1.0));
            let (p1, p2, p3) = (at(1.0), at(2.0), at(3.0));
            w[a] = z[a];
            for i in 0..self.ncomps {
                let d = (-m3[i] + 9.0 * m2[i] - 45.0 * m1[i] + 45.0 * p1[i] - 9.0 * p2[i] + p3[i]) / (60.0 * h);
                out[i * n + a] = d;
            }
        }
        out
    }
}

impl Lift for ClosureLift {
    fn nvars(&self) -> usize {
        self.nvars
    }

    fn ncomps(&self) -> usize {
        self.ncomps
    }

    fn eval(&self, z: &[C]) -> Vec<C> {
        (self.f)(z)
    }

    fn jet(&self, z: &[C]) -> Jet {
        let df = match &self.df {
            Some(d) => d(z),
            None => self.fd_jacobian(z),
        };
        Jet { f: (self.f)(z), df }
    }
}

/// Largest discrepancy between the Jacobian of `lift` and a central
/// difference of its values, over random probes in the polydisk of radius
/// `radius`, relative to the local scale of `F`.
pub fn check_derivatives(lift: &dyn Lift, radius: f64, probes: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = lift.nvars();
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let z: Vec<C> = (0..n)
            .map(|_| C::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen::<f64>() * std::f64::consts::TAU))
            .collect();
        let jet = lift.jet(&z);
        let scale = jet.f.iter().chain(&jet.df).map(|v| v.norm()).fold(1e-300, f64::max);
        for a in 0..n {
            let mut w = z.clone();
            w[a] = z[a] + h;
            let fp = lift.eval(&w);
            w[a] = z[a] - h;
            let fm = lift.eval(&w);
            for i in 0..lift.ncomps() {
                let d = (fp[i] - fm[i]) / (2.0 * h);
                worst = worst.max((d - jet.df[i * n + a]).norm() / scale);
            }
        }
    }
    worst
}
