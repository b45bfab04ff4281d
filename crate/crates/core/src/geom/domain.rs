use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Circle `|z - center| = radius` in one complex variable, also used as the
/// closed disk it bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourSpec {
    #[serde(serialize_with = "ser_c")]
    pub center: Complex64,
    pub radius: f64,
    /// Initial number of trapezoid nodes; refinement doubles from here.
    pub nodes: usize,
}

impl ContourSpec {
    pub fn new(center: Complex64, radius: f64) -> Self {
        ContourSpec {
            center,
            radius,
            nodes: 64,
        }
    }

    pub fn centered(radius: f64) -> Self {
        Self::new(Complex64::new(0.0, 0.0), radius)
    }
}

fn ser_c<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_cv<S: serde::Serializer>(z: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    z.iter().map(|w| [w.re, w.im]).collect::<Vec<_>>().serialize(s)
}

/// Quadrature resources.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadBudget {
    /// Geometrically graded radial panels (ratio 1/2 toward the center).
    pub radial_panels: usize,
    /// Gauss-Legendre nodes per radial panel (also used for the polar angle
    /// of balls in `C^2`).
    pub nodes_per_panel: usize,
    /// Trapezoid nodes per angular variable.
    pub angular: usize,
    /// Monte Carlo samples (three variables).
    pub samples: u64,
    pub seed: u64,
}

impl Default for QuadBudget {
    fn default() -> Self {
        QuadBudget {
            radial_panels: 20,
            nodes_per_panel: 8,
            angular: 16,
            samples: 2_000_000,
            seed: 7,
        }
    }
}

impl QuadBudget {
    /// Coarser companion rule used for error estimates.
    pub fn coarser(&self) -> Self {
        QuadBudget {
            radial_panels: self.radial_panels,
            nodes_per_panel: (self.nodes_per_panel * 2 / 3).max(3),
            angular: (self.angular * 3 / 4).max(4),
            samples: self.samples / 2,
            seed: self.seed ^ 0x9e37_79b9_7f4a_7c15,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    Polydisk {
        #[serde(serialize_with = "ser_cv")]
        center: Vec<Complex64>,
        radii: Vec<f64>,
    },
    Ball {
        #[serde(serialize_with = "ser_cv")]
        center: Vec<Complex64>,
        radius: f64,
    },
}

impl Domain {
    pub fn polydisk(center: Vec<Complex64>, radii: Vec<f64>) -> Result<Self> {
        if center.len() != radii.len() || radii.is_empty() {
            return Err(Error::DimensionMismatch("polydisk center/radii".into()));
        }
        if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidInput("radii must be positive".into()));
        }
        Ok(Domain::Polydisk { center, radii })
    }

    pub fn unit_polydisk(n: usize) -> Self {
        Domain::Polydisk {
            center: vec![Complex64::new(0.0, 0.0); n],
            radii: vec![1.0; n],
        }
    }

    pub fn ball(center: Vec<Complex64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::DimensionMismatch("empty ball center".into()));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput("radius must be positive".into()));
        }
        Ok(Domain::Ball { center, radius })
    }

    pub fn centered_ball(n: usize, radius: f64) -> Self {
        Domain::Ball {
            center: vec![Complex64::new(0.0, 0.0); n],
            radius,
        }
    }

    pub fn dim(&self) -> usize {
        self.center().len()
    }

    pub fn center(&self) -> &[Complex64] {
        match self {
            Domain::Polydisk { center, .. } | Domain::Ball { center, .. } => center,
        }
    }

    /// Smallest radius, bounding admissible tube widths.
    pub fn min_radius(&self) -> f64 {
        match self {
            Domain::Polydisk { radii, .. } => radii.iter().cloned().fold(f64::INFINITY, f64::min),
            Domain::Ball { radius, .. } => *radius,
        }
    }

    pub fn contains(&self, z: &[Complex64]) -> bool {
        match self {
            Domain::Polydisk { center, radii } => z
                .iter()
                .zip(center)
                .zip(radii)
                .all(|((w, c), r)| (w - c).norm() < *r),
            Domain::Ball { center, radius } => {
                z.iter().zip(center).map(|(w, c)| (w - c).norm_sqr()).sum::<f64>() < radius * radius
            }
        }
    }

    /// `∫ (dd^c ||z||^2)^n` over the domain, i.e. `n! vol / π^n`.
    pub fn euclidean_mass(&self) -> f64 {
        match self {
            Domain::Polydisk { radii, .. } => {
                let n = radii.len();
                factorial(n) * radii.iter().map(|r| r * r).product::<f64>()
            }
            Domain::Ball { center, radius } => radius.powi(2 * center.len() as i32),
        }
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Where a lift vanishes; the ε-tube of non-pluripolar integrals is taken
/// around this set.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ZeroSet {
    Empty,
    /// Affine subspaces `{z_i = p_i : i in vars}`; a point when `vars` is every index.
    Subspaces {
        #[serde(serialize_with = "ser_cv")]
        base: Vec<Complex64>,
        pieces: Vec<Vec<usize>>,
    },
    /// Not located; quadrature runs without a tube.
    Unknown,
}

impl ZeroSet {
    pub fn point(p: Vec<Complex64>) -> Self {
        let all = (0..p.len()).collect();
        ZeroSet::Subspaces {
            base: p,
            pieces: vec![all],
        }
    }

    pub fn origin(n: usize) -> Self {
        Self::point(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ZeroSet::Empty => true,
            ZeroSet::Subspaces { pieces, .. } => pieces.is_empty(),
            ZeroSet::Unknown => false,
        }
    }

    /// Euclidean distance to the set (`+inf` when empty or unknown).
    pub fn distance(&self, z: &[Complex64]) -> f64 {
        match self {
            ZeroSet::Subspaces { base, pieces } => pieces
                .iter()
                .map(|vars| vars.iter().map(|&i| (z[i] - base[i]).norm_sqr()).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        }
    }

    /// The single point this set consists of, if so.
    pub fn as_point(&self) -> Option<&[Complex64]> {
        match self {
            ZeroSet::Subspaces { base, pieces } if pieces.len() == 1 && pieces[0].len() == base.len() => {
                Some(base)
            }
            _ => None,
        }
    }
}
