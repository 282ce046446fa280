//! Distances induced by a kernel, the classical disk and ball metrics, and
//! length functionals built on them.
//!
//! All three kernel distances are functions of the pairing magnitude
//! `c = |⟨k̂_x, k̂_y⟩|`:
//!
//! * `δ = sqrt(1 - c²)`,
//! * `δ̂ = √2 · sqrt(1 - c)`,
//! * `δ̌ = arccos c`, the projective (Fubini–Study) geodesic distance.
//!
//! They are evaluated from the stable defect `1 - c²` so that nearby points keep
//! full relative accuracy.

mod curve;
mod density;
mod inner;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kernels::{rho_ball_sq, rho_disk_sq, Domain, ReproducingKernel};
use crate::{Error, Point, Result, C64};

pub use curve::{
    curve_length, Curve, CurveLength, DEFAULT_INITIAL_SAMPLES, DEFAULT_REFINEMENTS,
    LENGTH_TOLERANCE,
};
pub use density::{bs_density, bs_length, BsDensity, BsLength};
pub use inner::{inner_distance, GridSearch, InnerDistance};

fn undefined_distance(e: Error) -> Error {
    match e {
        Error::UndefinedPairing => Error::UndefinedDistance,
        e => e,
    }
}

/// `δ(x, y)²`, the pairing defect.
pub fn delta_squared<K: ReproducingKernel + ?Sized>(
    kernel: &K,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    kernel.pairing_defect(x, y).map_err(undefined_distance)
}

/// `δ(x, y) = sqrt(1 - |⟨k̂_x, k̂_y⟩|²)`.
pub fn delta<K: ReproducingKernel + ?Sized>(kernel: &K, x: &Point, y: &Point) -> Result<f64> {
    Ok(delta_squared(kernel, x, y)?.sqrt())
}

/// `δ̂(x, y) = √2 · sqrt(1 - |⟨k̂_x, k̂_y⟩|)`.
pub fn delta_hat<K: ReproducingKernel + ?Sized>(kernel: &K, x: &Point, y: &Point) -> Result<f64> {
    let d = delta_squared(kernel, x, y)?;
    let c = (1.0 - d).sqrt();
    // 1 - c = (1 - c²) / (1 + c)
    Ok((2.0 * d / (1.0 + c)).sqrt())
}

/// `δ̌(x, y) = arccos |⟨k̂_x, k̂_y⟩|`.
pub fn delta_check<K: ReproducingKernel + ?Sized>(kernel: &K, x: &Point, y: &Point) -> Result<f64> {
    let d = delta_squared(kernel, x, y)?;
    Ok(d.sqrt().atan2((1.0 - d).sqrt()))
}

fn disk_coordinate(p: &Point) -> Result<C64> {
    Domain::Disk.check_point(p)?;
    Ok(p.coords()[0])
}

/// Pseudohyperbolic distance `|z - w| / |1 - z̄ w|` on the unit disk.
pub fn rho_disk(z: &Point, w: &Point) -> Result<f64> {
    Ok(rho_disk_sq(disk_coordinate(z)?, disk_coordinate(w)?).sqrt())
}

/// Hyperbolic distance `log((1 + ρ) / (1 - ρ))`.
pub fn beta_disk(z: &Point, w: &Point) -> Result<f64> {
    Ok(2.0 * rho_disk(z, w)?.atanh())
}

/// `sqrt(1 - (1 - |z|²)(1 - |w|²) / |1 - ⟨z, w⟩|²)` on the unit ball of `ℂⁿ`.
pub fn rho_ball(n: usize, z: &Point, w: &Point) -> Result<f64> {
    let ball = if n == 1 {
        Domain::Disk
    } else {
        Domain::Ball(n)
    };
    ball.check_point(z)?;
    ball.check_point(w)?;
    Ok(rho_ball_sq(z.coords(), w.coords()).sqrt())
}

/// Euclidean distance between coordinate vectors.
pub fn euclidean(x: &Point, y: &Point) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Which distance to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Delta,
    DeltaHat,
    DeltaCheck,
    RhoDisk,
    BetaDisk,
    RhoBall(usize),
    /// Infinitesimal Bergman-type metric `sqrt(T) |dz|`; only meaningful for lengths.
    BsGeodesic,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Delta => "delta",
            MetricKind::DeltaHat => "delta_hat",
            MetricKind::DeltaCheck => "delta_check",
            MetricKind::RhoDisk => "rho_disk",
            MetricKind::BetaDisk => "beta_disk",
            MetricKind::RhoBall(_) => "rho_ball",
            MetricKind::BsGeodesic => "bs_geodesic",
        }
    }
}

/// A distance function usable by the length functionals.
pub trait Distance {
    fn distance(&self, x: &Point, y: &Point) -> Result<f64>;

    /// Whether the triangle inequality holds, so refined partition sums never decrease.
    fn is_metric(&self) -> bool {
        true
    }
}

impl<F> Distance for F
where
    F: Fn(&Point, &Point) -> Result<f64>,
{
    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        self(x, y)
    }
}

/// A [`MetricKind`] bound to a kernel.
#[derive(Debug, Clone, Copy)]
pub struct KernelMetric<'k, K: ?Sized> {
    pub kind: MetricKind,
    pub kernel: &'k K,
}

impl<'k, K: ReproducingKernel + ?Sized> KernelMetric<'k, K> {
    pub fn new(kind: MetricKind, kernel: &'k K) -> Self {
        KernelMetric { kind, kernel }
    }
}

impl<K: ReproducingKernel + ?Sized> Distance for KernelMetric<'_, K> {
    fn distance(&self, x: &Point, y: &Point) -> Result<f64> {
        match self.kind {
            MetricKind::Delta => delta(self.kernel, x, y),
            MetricKind::DeltaHat => delta_hat(self.kernel, x, y),
            MetricKind::DeltaCheck => delta_check(self.kernel, x, y),
            MetricKind::RhoDisk => rho_disk(x, y),
            MetricKind::BetaDisk => beta_disk(x, y),
            MetricKind::RhoBall(n) => rho_ball(n, x, y),
            MetricKind::BsGeodesic => {
                let (a, b) = match (x.as_scalar(), y.as_scalar()) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(Error::Unsupported(
                            "the BS metric needs scalar points".into(),
                        ))
                    }
                };
                if a == b {
                    return Ok(0.0);
                }
                let mid = Point::scalar(0.5 * (a + b));
                Ok(bs_density(self.kernel, &mid)?.value.sqrt() * (a - b).norm())
            }
        }
    }

    fn is_metric(&self) -> bool {
        self.kind != MetricKind::BsGeodesic
    }
}

/// Evaluates `kind` between `x` and `y`.
pub fn distance<K: ReproducingKernel + ?Sized>(
    kind: MetricKind,
    kernel: &K,
    x: &Point,
    y: &Point,
) -> Result<f64> {
    KernelMetric::new(kind, kernel).distance(x, y)
}
