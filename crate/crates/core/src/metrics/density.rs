//! The Riemannian density `T(z) = ∂∂̄ log K(z, z)`, so that `ds² = T |dz|²`.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::Curve;
use crate::kernels::{Domain, ReproducingKernel};
use crate::quad::integrate;
use crate::{Error, Point, Result, C64};

/// Density at a point, with both evaluation routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsDensity {
    /// Preferred value: the analytic route when available, otherwise finite differences.
    pub value: f64,
    pub finite_difference: f64,
    /// Error estimate of the finite-difference value (step halving plus rounding).
    pub finite_difference_error: f64,
    /// From the kernel's derivatives, `(∂_x∂_ȳK · K - |∂_x K|²) / K²` or a closed form.
    pub analytic: Option<f64>,
}

/// Relative agreement demanded between the two routes, unless the
/// finite-difference error estimate is larger.
pub const DENSITY_CONSISTENCY: f64 = 1e-6;

fn log_diagonal<K: ReproducingKernel + ?Sized>(kernel: &K, z: C64) -> Result<f64> {
    Ok(kernel.log_eval(&Point::scalar(z), &Point::scalar(z))?.re)
}

/// Fourth-order Laplacian over four of `log K(z, z)` with step `h` (9 samples),
/// and an estimate of its rounding error.
fn laplacian_quarter<K: ReproducingKernel + ?Sized>(
    kernel: &K,
    z: C64,
    h: f64,
    conditioning: f64,
) -> Result<(f64, f64)> {
    let u0 = log_diagonal(kernel, z)?;
    let mut acc = -60.0 * u0;
    let mut size = u0.abs();
    let mut slope = 0.0f64;
    for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
        for (k, w) in [(1.0, 16.0), (2.0, -1.0)] {
            let a = log_diagonal(kernel, z + dir * (k * h))?;
            let b = log_diagonal(kernel, z - dir * (k * h))?;
            acc += w * (a + b);
            size = size.max(a.abs()).max(b.abs());
            slope = slope.max((a - b).abs() / (2.0 * k * h));
        }
    }
    // each sample carries the error of u itself plus that of rounding z; terms of
    // u can cancel, so the slope alone may understate the latter
    let sample_error = f64::EPSILON * (size + slope * z.norm().max(1.0) + conditioning);
    let denom = 12.0 * h * h;
    Ok((acc / denom / 4.0, 128.0 * sample_error / denom / 4.0))
}

/// `T(z)` computed by finite differences and, where the kernel exposes its jet,
/// analytically; the two are cross-checked.
pub fn bs_density<K: ReproducingKernel + ?Sized>(kernel: &K, z: &Point) -> Result<BsDensity> {
    kernel.check_point(z)?;
    let w = z
        .as_scalar()
        .ok_or_else(|| Error::Unsupported("the BS density needs a scalar domain".into()))?;
    // on the disk the step shrinks with the distance to the boundary, where the density blows up
    let (h, conditioning) = match kernel.domain() {
        Domain::Disk => (1e-3 * (1.0 - w.norm()), 1.0 / (1.0 - w.norm())),
        _ => (1e-3 * w.norm().max(1.0), 0.0),
    };
    let (coarse, round_coarse) = laplacian_quarter(kernel, w, h, conditioning)?;
    let (fine, round_fine) = laplacian_quarter(kernel, w, 0.5 * h, conditioning)?;
    let fd_error = (fine - coarse).abs() + round_fine + round_coarse;
    let analytic = kernel.log_diagonal_laplacian(z)?;
    if let Some(a) = analytic {
        let tol = (DENSITY_CONSISTENCY * a.abs()).max(fd_error);
        if (a - fine).abs() > tol {
            return Err(Error::Inconsistent {
                numeric: fine,
                analytic: a,
            });
        }
    }
    Ok(BsDensity {
        value: analytic.unwrap_or(fine),
        finite_difference: fine,
        finite_difference_error: fd_error,
        analytic,
    })
}

/// `∫ sqrt(T(γ(t))) |γ'(t)| dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsLength {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

pub fn bs_length<K: ReproducingKernel + ?Sized>(kernel: &K, curve: &Curve<'_>) -> Result<BsLength> {
    let mut knots = Vec::with_capacity(curve.breaks().len() + 2);
    knots.push(0.0);
    knots.extend_from_slice(curve.breaks());
    knots.push(1.0);
    let (mut value, mut error, mut converged) = (0.0, 0.0, true);
    for w in knots.windows(2) {
        let q = integrate(
            |t| {
                let speed = curve.tangent(t)?.norm();
                if speed == 0.0 {
                    return Ok(0.0);
                }
                let d = bs_density(kernel, &curve.at(t))?;
                Ok(d.value.max(0.0).sqrt() * speed)
            },
            w[0],
            w[1],
            1e-10,
            1e-10,
            2000,
        )?;
        value += q.value;
        error += q.error;
        converged &= q.converged;
    }
    Ok(BsLength {
        value,
        error,
        converged,
    })
}
