//! Complete Nevanlinna–Pick structure.
//!
//! A kernel normalized at some point is complete Nevanlinna–Pick when
//! `1 - 1/K` is positive semidefinite. On such spaces the function
//!
//! `G_{x,y}(ζ) = δ(x, y)⁻¹ (1 - K(x, y) K(ζ, x) / (K(x, x) K(ζ, y)))`
//!
//! is a contractive multiplier vanishing at `x` with `G_{x,y}(y) = δ(x, y)`, and
//! products of such factors play the role of Blaschke products.

mod blaschke;

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kernels::{Domain, Kernel, ReproducingKernel};
use crate::linalg::{min_eigenpair, trace, CMatrix, PSD_RELATIVE_TOLERANCE};
use crate::metrics::{delta, rho_ball};
use crate::{Error, Point, Result, C64};

pub use blaschke::{
    blaschke_product, blaschke_values, zero_set_criteria, Classification, CriteriaSpace, TailLaw,
    ZeroPoint, ZeroSetCriteria, ZeroSetGenerator, ZeroSetReport, ZeroSetVerdict, DEFAULT_PREFIX,
};

/// Result of testing `[1 - 1/K(x_i, x_j)]` for positivity on a finite set.
///
/// A pass is only a necessary condition for the complete Pick property; a
/// failure, with its witness vector, disproves it.
#[derive(Debug, Clone, PartialEq)]
pub struct NPVerdict {
    pub points: Vec<Point>,
    pub matrix: CMatrix,
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub is_psd: bool,
    /// Unit eigenvector for the smallest eigenvalue when the test fails.
    pub witness: Option<Vec<C64>>,
}

pub fn np_test<K: ReproducingKernel + ?Sized>(kernel: &K, points: &[Point]) -> Result<NPVerdict> {
    for (i, p) in points.iter().enumerate() {
        kernel.check_point(p)?;
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(Error::DuplicatePoint(j, i));
        }
    }
    let n = points.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = kernel.eval(&points[i], &points[j])?;
            if k.norm() == 0.0 {
                return Err(Error::Pole);
            }
            let v = C64::new(1.0, 0.0) - C64::new(1.0, 0.0) / k;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)].im = 0.0;
    }
    let tr = trace(&m).re;
    let (min, vec) = if n == 0 {
        (0.0, Vec::new())
    } else {
        min_eigenpair(&m)
    };
    let is_psd = min >= -PSD_RELATIVE_TOLERANCE * tr.abs();
    Ok(NPVerdict {
        points: points.to_vec(),
        matrix: m,
        min_eigenvalue: min,
        trace: tr,
        is_psd,
        witness: (!is_psd).then_some(vec),
    })
}

fn require_np(kernel: &Kernel) -> Result<()> {
    if kernel.is_complete_np() {
        Ok(())
    } else {
        Err(Error::Unsupported(alloc::format!(
            "{} is not a known complete Nevanlinna–Pick kernel",
            kernel.label()
        )))
    }
}

/// The extremal multiplier `G_{x,y}`, normalized to be positive at `y`.
#[derive(Debug, Clone)]
pub struct MaximalMultiplier<'k> {
    kernel: &'k Kernel,
    pub x: Point,
    pub y: Point,
    pub delta: f64,
    kxy: C64,
    kxx: f64,
}

impl MaximalMultiplier<'_> {
    pub fn eval(&self, zeta: &Point) -> Result<C64> {
        let kzy = self.kernel.eval(zeta, &self.y)?;
        if kzy.norm() == 0.0 {
            return Err(Error::Pole);
        }
        let kzx = self.kernel.eval(zeta, &self.x)?;
        Ok((C64::new(1.0, 0.0) - self.kxy * kzx / (self.kxx * kzy)) / self.delta)
    }

    /// `G(y)`, which equals `δ(x, y)`.
    pub fn value_at_base(&self) -> Result<C64> {
        self.eval(&self.y)
    }
}

pub fn maximal_multiplier<'k>(
    kernel: &'k Kernel,
    x: &Point,
    y: &Point,
) -> Result<MaximalMultiplier<'k>> {
    require_np(kernel)?;
    let d = delta(kernel, x, y)?;
    if d == 0.0 {
        return Err(Error::Degenerate(
            "maximal multiplier for indistinguishable points",
        ));
    }
    let kxy = kernel.eval(x, y)?;
    if kxy.norm() == 0.0 {
        return Err(Error::Pole);
    }
    let g = MaximalMultiplier {
        kernel,
        x: x.clone(),
        y: y.clone(),
        delta: d,
        kxy,
        kxx: kernel.eval(x, x)?.re,
    };
    let at_x = g.eval(x)?;
    let at_y = g.value_at_base()?;
    let tol = 1e-12 * boundary_conditioning(kernel, x).max(boundary_conditioning(kernel, y));
    if at_x.norm() > tol || (at_y.re - d).abs() > tol {
        return Err(Error::Inconsistent {
            numeric: at_y.re,
            analytic: d,
        });
    }
    Ok(g)
}

/// `1 / (1 - |x|)` on the disk and ball, where `K(x, x)` loses relative accuracy
/// as `x` approaches the boundary; 1 elsewhere.
fn boundary_conditioning(kernel: &Kernel, x: &Point) -> f64 {
    match kernel.domain() {
        Domain::Disk | Domain::Ball(_) => {
            let r = x.coords().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (1.0 / (1.0 - r)).max(1.0)
        }
        _ => 1.0,
    }
}

/// Largest deviations of `K` and `δ` from a candidate Drury–Arveson realization
/// `K(x, y) = b(x) conj(b(y)) / (1 - ⟨γ(x), γ(y)⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingDefect {
    pub kernel_defect: f64,
    pub delta_defect: f64,
}

pub fn da_embedding_check<K, B, G>(
    kernel: &K,
    b: B,
    gamma: G,
    points: &[Point],
) -> Result<EmbeddingDefect>
where
    K: ReproducingKernel + ?Sized,
    B: Fn(&Point) -> C64,
    G: Fn(&Point) -> Point,
{
    let images: Vec<Point> = points.iter().map(&gamma).collect();
    let n = images.first().map(|p| p.dim()).unwrap_or(1);
    let mut out = EmbeddingDefect {
        kernel_defect: 0.0,
        delta_defect: 0.0,
    };
    for (i, x) in points.iter().enumerate() {
        for (j, y) in points.iter().enumerate() {
            let (gx, gy) = (&images[i], &images[j]);
            let d_ball = rho_ball(n, gx, gy)?;
            let inner: C64 = gx
                .coords()
                .iter()
                .zip(gy.coords())
                .map(|(a, c)| a * c.conj())
                .sum();
            let model = b(x) * b(y).conj() / (C64::new(1.0, 0.0) - inner);
            let k = kernel.eval(x, y)?;
            out.kernel_defect = out.kernel_defect.max((k - model).norm());
            out.delta_defect = out.delta_defect.max((delta(kernel, x, y)? - d_ball).abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
