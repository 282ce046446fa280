//! Distances on multiplier-invariant subspaces `J ⊆ H` and their complements.
//!
//! Kernels split as `K = K_J + K_{J⊥}`. For a subspace of functions vanishing
//! (to order one or two) on a finite set, `K_{J⊥}` is the Gram projection onto
//! the representers of the vanishing functionals. For `J = Θ H¹` in the Hardy
//! space everything is in closed form.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kernels::{normalized_pairing, Domain, Kernel, KernelJet, ReproducingKernel};
use crate::linalg::{cholesky_with_jitter, CMatrix, Factor};
use crate::metrics::{delta_squared, rho_disk};
use crate::{Error, Point, Result, C64};

/// A point functional `f ↦ f(s)` or `f ↦ f′(s)`.
#[derive(Debug, Clone, PartialEq)]
enum Functional {
    Eval(Point),
    Derivative(Point),
}

#[derive(Debug, Clone)]
enum Variant {
    VanishOn {
        points: Vec<Point>,
        orders: Vec<usize>,
        functionals: Vec<Functional>,
        factor: Factor,
    },
    HardyInner {
        zeros: Vec<C64>,
        constant: C64,
    },
}

/// An invariant subspace `J` of the space of `parent`.
#[derive(Debug, Clone)]
pub struct SubspaceSpec {
    parent: Kernel,
    variant: Variant,
}

fn jet_of(kernel: &Kernel, x: &Point, y: &Point) -> Result<KernelJet> {
    kernel.jet(x, y)?.ok_or_else(|| {
        Error::Unsupported(alloc::format!("{} exposes no derivatives", kernel.label()))
    })
}

/// `ℓ_a(r_b)`: functional `a` applied to the representer of `b`.
fn pair(kernel: &Kernel, a: &Functional, b: &Functional) -> Result<C64> {
    Ok(match (a, b) {
        (Functional::Eval(s), Functional::Eval(t)) => kernel.eval(s, t)?,
        (Functional::Derivative(s), Functional::Eval(t)) => jet_of(kernel, s, t)?.dx,
        (Functional::Eval(s), Functional::Derivative(t)) => jet_of(kernel, s, t)?.dyb,
        (Functional::Derivative(s), Functional::Derivative(t)) => jet_of(kernel, s, t)?.dxdyb,
    })
}

impl SubspaceSpec {
    /// Functions vanishing on `points`, to order `orders[i] ∈ {1, 2}` at `points[i]`
    /// (order 2 meaning `f(s) = f′(s) = 0`, scalar disk kernels only).
    pub fn vanish_on(parent: Kernel, points: Vec<Point>, orders: Vec<usize>) -> Result<Self> {
        if orders.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: orders.len(),
            });
        }
        let mut functionals = Vec::new();
        for (i, (p, &order)) in points.iter().zip(&orders).enumerate() {
            parent.check_point(p)?;
            if let Some(j) = points[..i].iter().position(|q| q == p) {
                return Err(Error::DuplicatePoint(j, i));
            }
            functionals.push(Functional::Eval(p.clone()));
            match order {
                1 => {}
                2 if parent.domain() == Domain::Disk => {
                    functionals.push(Functional::Derivative(p.clone()))
                }
                2 => {
                    return Err(Error::Unsupported(
                        "second-order vanishing needs a scalar disk kernel".into(),
                    ))
                }
                _ => {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "vanishing order must be 1 or 2, got {order}"
                    )))
                }
            }
        }
        if functionals.is_empty() {
            return Err(Error::Degenerate("vanishing set is empty"));
        }
        let n = functionals.len();
        let mut gamma = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gamma[(i, j)] = pair(&parent, &functionals[i], &functionals[j])?;
            }
        }
        let factor = cholesky_with_jitter(&gamma)?;
        Ok(SubspaceSpec {
            parent,
            variant: Variant::VanishOn {
                points,
                orders,
                functionals,
                factor,
            },
        })
    }

    /// `J = Θ H¹` for the finite Blaschke product
    /// `Θ(z) = c Π (z - a_i) / (1 - ā_i z)`, `|c| = 1`.
    pub fn hardy_inner(parent: Kernel, zeros: Vec<C64>, constant: C64) -> Result<Self> {
        if parent.dhb_alpha() != Some(1.0) {
            return Err(Error::Unsupported(alloc::format!(
                "inner-function subspaces are only modeled in the Hardy space, not {}",
                parent.label()
            )));
        }
        for z in &zeros {
            Domain::Disk.check_point(&Point::scalar(*z))?;
        }
        if (constant.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(alloc::format!(
                "inner-function constant must be unimodular, got |c| = {}",
                constant.norm()
            )));
        }
        Ok(SubspaceSpec {
            parent,
            variant: Variant::HardyInner { zeros, constant },
        })
    }

    pub fn parent(&self) -> &Kernel {
        &self.parent
    }

    /// The vanishing set and orders, for `vanish_on` subspaces.
    pub fn vanishing_set(&self) -> Option<(&[Point], &[usize])> {
        match &self.variant {
            Variant::VanishOn { points, orders, .. } => Some((points, orders)),
            Variant::HardyInner { .. } => None,
        }
    }

    /// The zeros of `Θ`, for inner-function subspaces.
    pub fn inner_zeros(&self) -> Option<&[C64]> {
        match &self.variant {
            Variant::HardyInner { zeros, .. } => Some(zeros),
            Variant::VanishOn { .. } => None,
        }
    }

    /// Whether the Gram system of the vanishing functionals needed a diagonal shift.
    pub fn is_jittered(&self) -> bool {
        matches!(&self.variant, Variant::VanishOn { factor, .. } if factor.is_jittered())
    }

    /// `Θ(z)` for inner-function subspaces.
    pub fn theta(&self, z: C64) -> Option<C64> {
        match &self.variant {
            Variant::HardyInner { zeros, constant } => Some(blaschke(zeros, *constant, z)),
            Variant::VanishOn { .. } => None,
        }
    }

    /// Whether `x` is a prescribed zero, where every function of `J` vanishes.
    pub fn is_zero_of(&self, x: &Point) -> bool {
        match &self.variant {
            Variant::VanishOn { points, .. } => points.contains(x),
            Variant::HardyInner { zeros, .. } => x.as_scalar().is_some_and(|z| zeros.contains(&z)),
        }
    }

    /// `L⁻¹ v_x` with `(v_x)_i = ℓ_i(k_x)`.
    fn whitened(&self, x: &Point) -> Result<CMatrix> {
        let Variant::VanishOn {
            functionals,
            factor,
            ..
        } = &self.variant
        else {
            unreachable!("whitened is only used for vanish-on subspaces")
        };
        let query = Functional::Eval(x.clone());
        let mut v = CMatrix::zeros(functionals.len(), 1);
        for (i, f) in functionals.iter().enumerate() {
            v[(i, 0)] = pair(&self.parent, f, &query)?;
        }
        Ok(factor
            .lower
            .solve_lower_triangular(&v)
            .expect("nonzero Cholesky diagonal"))
    }
}

fn blaschke(zeros: &[C64], constant: C64, z: C64) -> C64 {
    zeros.iter().fold(constant, |acc, a| {
        acc * (z - a) / (C64::new(1.0, 0.0) - a.conj() * z)
    })
}

/// `(K_J(x, y), K_{J⊥}(x, y))`. The two parts sum to `K(x, y)`; at prescribed
/// zeros `K_J` is exactly 0.
pub fn subspace_kernels(sub: &SubspaceSpec, x: &Point, y: &Point) -> Result<(C64, C64)> {
    let k = sub.parent.eval(x, y)?;
    match &sub.variant {
        Variant::VanishOn { .. } => {
            if sub.is_zero_of(x) || sub.is_zero_of(y) {
                return Ok((C64::new(0.0, 0.0), k));
            }
            let wx = sub.whitened(x)?;
            let wy = sub.whitened(y)?;
            let perp = (wx.adjoint() * wy)[(0, 0)];
            Ok((k - perp, perp))
        }
        Variant::HardyInner { zeros, constant } => {
            let (zx, zy) = (x.coords()[0], y.coords()[0]);
            let tt = blaschke(zeros, *constant, zx) * blaschke(zeros, *constant, zy).conj();
            Ok((tt * k, (C64::new(1.0, 0.0) - tt) * k))
        }
    }
}

/// Which half of `H = J ⊕ J⊥`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    J,
    JPerp,
}

/// The reproducing kernel of `J` or `J⊥`.
#[derive(Debug, Clone, Copy)]
pub struct SubspaceKernel<'a> {
    pub sub: &'a SubspaceSpec,
    pub part: Part,
}

impl<'a> SubspaceKernel<'a> {
    pub fn new(sub: &'a SubspaceSpec, part: Part) -> Self {
        SubspaceKernel { sub, part }
    }
}

impl ReproducingKernel for SubspaceKernel<'_> {
    fn domain(&self) -> Domain {
        self.sub.parent.domain()
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        self.sub.parent.check_point(x)
    }

    fn eval(&self, x: &Point, y: &Point) -> Result<C64> {
        let (j, perp) = subspace_kernels(self.sub, x, y)?;
        Ok(match self.part {
            Part::J => j,
            Part::JPerp => perp,
        })
    }
}

/// `δ` of `J` or `J⊥`; undefined where that kernel vanishes on the diagonal.
pub fn delta_sub(sub: &SubspaceSpec, part: Part, x: &Point, y: &Point) -> Result<f64> {
    let k = SubspaceKernel::new(sub, part);
    let kxx = k.eval(x, x)?.re;
    let kyy = k.eval(y, y)?.re;
    let scale = sub.parent.eval(x, x)?.re.max(sub.parent.eval(y, y)?.re);
    // a diagonal at rounding level relative to K means the kernel function is zero
    if kxx <= 1e-14 * scale || kyy <= 1e-14 * scale {
        return Err(Error::UndefinedDistance);
    }
    if x == y {
        return Ok(0.0);
    }
    match (&sub.variant, part) {
        (Variant::VanishOn { .. }, Part::JPerp) if !sub.is_zero_of(x) && !sub.is_zero_of(y) => {
            // Gram determinant of the projected kernel functions by the Lagrange identity,
            // exact when they are parallel
            let (wx, wy) = (sub.whitened(x)?, sub.whitened(y)?);
            let n = wx.nrows();
            let mut det = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    det += (wx[(i, 0)] * wy[(j, 0)] - wx[(j, 0)] * wy[(i, 0)]).norm_sqr();
                }
            }
            Ok((det / (kxx * kyy)).clamp(0.0, 1.0).sqrt())
        }
        (Variant::HardyInner { zeros, constant }, Part::JPerp) => {
            Ok(hardy_inner_delta(zeros, *constant, x, y)?.1)
        }
        _ => {
            let kxy = k.eval(x, y)?;
            Ok((1.0 - kxy.norm_sqr() / (kxx * kyy)).clamp(0.0, 1.0).sqrt())
        }
    }
}

/// Closed-form `(δ_J, δ_{J⊥})` for `J = Θ H¹`; `δ_J` is `None` where `Θ` vanishes.
pub fn hardy_inner_delta(
    zeros: &[C64],
    constant: C64,
    x: &Point,
    y: &Point,
) -> Result<(Option<f64>, f64)> {
    let rho = rho_disk(x, y)?;
    let (zx, zy) = (x.coords()[0], y.coords()[0]);
    let (tx, ty) = (blaschke(zeros, constant, zx), blaschke(zeros, constant, zy));
    let delta_j = (tx.norm() > 0.0 && ty.norm() > 0.0).then_some(rho);
    // a single factor is a disk automorphism and preserves ρ
    let rho_theta = if zeros.len() == 1 {
        rho
    } else {
        rho_disk(&Point::scalar(tx), &Point::scalar(ty))?
    };
    let (r2, t2) = (rho * rho, rho_theta * rho_theta);
    let perp = ((r2 - t2) / (1.0 - t2)).max(0.0).sqrt();
    Ok((delta_j, perp))
}

/// Triangle data for three kernel functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeData {
    /// `Re(⟨k̂_x, k̂_y⟩⟨k̂_y, k̂_z⟩⟨k̂_z, k̂_x⟩)`.
    pub upsilon: f64,
    pub triple_product: C64,
    /// `δ²` for the pairs `(x, y)`, `(y, z)`, `(z, x)`.
    pub delta_sq: [f64; 3],
    /// `δ_J(y, z)²` for `J = {f : f(x) = 0}` from
    /// `(δ_xy² + δ_xz² + δ_yz² - 2 + 2Υ) / (δ_xy² δ_xz²)`.
    pub delta_j_sq: f64,
    /// The same quantity by Gram projection.
    pub delta_j_sq_projection: f64,
    /// `δ_J(y, z)²` from the symmetric form `δ δ_J = sqrt(N) / (δ_xy δ_xz δ_yz)`.
    pub delta_j_sq_symmetric: f64,
}

impl ShapeData {
    /// Whether the symmetric form agrees with the projection within `tol`.
    pub fn symmetric_form_matches(&self, tol: f64) -> bool {
        (self.delta_j_sq_symmetric - self.delta_j_sq_projection).abs() <= tol
    }
}

pub const SHAPE_TOLERANCE: f64 = 1e-10;

pub fn shape_invariant(kernel: &Kernel, x: &Point, y: &Point, z: &Point) -> Result<ShapeData> {
    let pxy = normalized_pairing(kernel, x, y)?.value;
    let pyz = normalized_pairing(kernel, y, z)?.value;
    let pzx = normalized_pairing(kernel, z, x)?.value;
    let triple_product = pxy * pyz * pzx;
    let upsilon = triple_product.re;
    let dxy = delta_squared(kernel, x, y)?;
    let dyz = delta_squared(kernel, y, z)?;
    let dzx = delta_squared(kernel, z, x)?;
    if dxy == 0.0 || dyz == 0.0 || dzx == 0.0 {
        return Err(Error::Degenerate(
            "two of the three points have the same kernel line",
        ));
    }
    let numerator = dxy + dzx + dyz - 2.0 + 2.0 * upsilon;
    let delta_j_sq = numerator / (dxy * dzx);
    let delta_j_sq_symmetric = numerator / (dxy * dzx * dyz * dyz);
    let sub = SubspaceSpec::vanish_on(kernel.clone(), alloc::vec![x.clone()], alloc::vec![1])?;
    let projected = delta_sub(&sub, Part::J, y, z)?;
    let delta_j_sq_projection = projected * projected;
    if (delta_j_sq - delta_j_sq_projection).abs() > SHAPE_TOLERANCE {
        return Err(Error::Inconsistent {
            numeric: delta_j_sq_projection,
            analytic: delta_j_sq,
        });
    }
    Ok(ShapeData {
        upsilon,
        triple_product,
        delta_sq: [dxy, dyz, dzx],
        delta_j_sq,
        delta_j_sq_projection,
        delta_j_sq_symmetric,
    })
}

/// One pair of a [`MonotonicityReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityRow {
    pub x: Point,
    pub y: Point,
    pub delta_j: Option<f64>,
    pub delta_h: f64,
    pub delta_jperp: Option<f64>,
    /// `δ_J ≥ δ_H ≥ δ_{J⊥}`, checked for complete Pick kernels.
    pub pick_ordering: Option<bool>,
    /// `δ_J ≤ δ_H`, checked for DHB(α), `1 ≤ α ≤ 2`, with vanish-on subspaces.
    pub bergman_ordering: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub rows: Vec<MonotonicityRow>,
    pub checks_pick: bool,
    pub checks_bergman: bool,
    pub all_hold: bool,
}

pub const MONOTONICITY_SLACK: f64 = 1e-10;

fn optional(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UndefinedDistance) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Tabulates `δ_J`, `δ_H`, `δ_{J⊥}` and checks the orderings known to hold for
/// the parent kernel.
pub fn monotonicity_report(
    sub: &SubspaceSpec,
    pairs: &[(Point, Point)],
) -> Result<MonotonicityReport> {
    let checks_pick = sub.parent.is_complete_np();
    let checks_bergman = matches!(sub.variant, Variant::VanishOn { .. })
        && sub
            .parent
            .dhb_alpha()
            .is_some_and(|a| (1.0..=2.0).contains(&a));
    if !checks_pick && !checks_bergman {
        return Err(Error::Unsupported(alloc::format!(
            "no monotonicity statement is available for {}",
            sub.parent.label()
        )));
    }
    let s = MONOTONICITY_SLACK;
    let mut rows = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        let delta_h = delta_squared(&sub.parent, x, y)?.sqrt();
        let delta_j = optional(delta_sub(sub, Part::J, x, y))?;
        let delta_jperp = optional(delta_sub(sub, Part::JPerp, x, y))?;
        let pick_ordering = checks_pick.then(|| {
            delta_j.is_none_or(|j| j >= delta_h - s) && delta_jperp.is_none_or(|p| delta_h >= p - s)
        });
        let bergman_ordering = checks_bergman.then(|| delta_j.is_none_or(|j| j <= delta_h + s));
        rows.push(MonotonicityRow {
            x: x.clone(),
            y: y.clone(),
            delta_j,
            delta_h,
            delta_jperp,
            pick_ordering,
            bergman_ordering,
        });
    }
    let all_hold = rows
        .iter()
        .all(|r| r.pick_ordering.unwrap_or(true) && r.bergman_ordering.unwrap_or(true));
    Ok(MonotonicityReport {
        rows,
        checks_pick,
        checks_bergman,
        all_hold,
    })
}

/// Comparison of `1 - δ_{J⊥}²` and `1 - δ_H²` at `(t, -t)` for `H` the weighted
/// Bergman space DHB(2) and `J = {f : f(0) = f′(0) = 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TSeries {
    pub t: f64,
    /// `(1 - 2t²)² / (1 + 2t²)²`
    pub lhs: f64,
    /// `(1 - t²)⁴ / (1 + t²)⁴`
    pub rhs: f64,
    pub difference: f64,
    /// Extrapolated `t⁶` coefficients of the two sides.
    pub lhs_t6: f64,
    pub rhs_t6: f64,
    /// `(rhs_t6 - lhs_t6) t⁶`.
    pub leading_difference: f64,
}

fn lhs_of(t: f64) -> f64 {
    let t2 = t * t;
    let q = (1.0 - 2.0 * t2) / (1.0 + 2.0 * t2);
    q * q
}

fn rhs_of(t: f64) -> f64 {
    let t2 = t * t;
    let q = (1.0 - t2) / (1.0 + t2);
    (q * q) * (q * q)
}

/// `t⁶` coefficient of `f = 1 - 8t² + 32t⁴ + c t⁶ + O(t⁸)` by two rounds of
/// Richardson extrapolation in `h²`.
fn sixth_coefficient(f: fn(f64) -> f64) -> f64 {
    let c = |h: f64| {
        let h2 = h * h;
        (f(h) - (1.0 - 8.0 * h2 + 32.0 * h2 * h2)) / (h2 * h2 * h2)
    };
    let (a, b, d) = (c(0.08), c(0.04), c(0.02));
    let (r1, r2) = ((4.0 * b - a) / 3.0, (4.0 * d - b) / 3.0);
    (16.0 * r2 - r1) / 15.0
}

pub fn t_series_check(t: f64) -> Result<TSeries> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "t must lie in (0, 1), got {t}"
        )));
    }
    let (lhs, rhs) = (lhs_of(t), rhs_of(t));
    let (lhs_t6, rhs_t6) = (sixth_coefficient(lhs_of), sixth_coefficient(rhs_of));
    Ok(TSeries {
        t,
        lhs,
        rhs,
        difference: lhs - rhs,
        lhs_t6,
        rhs_t6,
        leading_difference: (rhs_t6 - lhs_t6) * t.powi(6),
    })
}

#[cfg(test)]
mod tests;
