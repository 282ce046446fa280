//! Kernel families and kernel algebra.
//!
//! A [`Kernel`] is an immutable, validated description of a positive definite
//! kernel. Besides plain evaluation every kernel provides
//!
//! * a logarithm of `K(x, y)` that is continuous on the domain, used for
//!   non-integer powers and for overflow-free normalized pairings;
//! * the defect `1 - |⟨k̂_x, k̂_y⟩|²`, in closed form wherever the family allows,
//!   so that `δ` keeps full relative accuracy for nearby points;
//! * for scalar domains, the jet `(K, ∂_x K, ∂_ȳ K, ∂_x ∂_ȳ K)` which carries the
//!   derivative functionals `f ↦ f'(z)`.
//!
//! The trait [`ReproducingKernel`] abstracts over these so that subspace kernels
//! can reuse every metric.

mod custom;
mod family;
mod gram;
mod radial;
mod rescale;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;

use num_traits::Float;

use crate::point::PointView;
use crate::{Error, Point, Result, Side, C64};

pub use custom::CustomKernel;
pub use gram::{gram, kernel_norm, normalized_pairing, GramMatrix, NormalizedPairing};
pub use radial::{moments_from_weight, RadialSeries, DEFAULT_TERMS, MAX_TAIL};
pub use rescale::Rescaling;

pub(crate) use family::{dhb_value, dirichlet_value, rho_ball_sq, rho_disk_sq};

/// `K(x, y)` and its first mixed derivatives; `x` enters holomorphically and
/// `y` anti-holomorphically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelJet {
    pub value: C64,
    /// `∂K/∂x`, equal to `⟨k_y, k_x^{(1)}⟩`.
    pub dx: C64,
    /// `∂K/∂ȳ`, equal to `⟨k_y^{(1)}, k_x⟩`.
    pub dyb: C64,
    /// `∂²K/∂x∂ȳ`, equal to `⟨k_y^{(1)}, k_x^{(1)}⟩`.
    pub dxdyb: C64,
}

impl KernelJet {
    fn zero() -> Self {
        let z = C64::new(0.0, 0.0);
        KernelJet {
            value: z,
            dx: z,
            dyb: z,
            dxdyb: z,
        }
    }
}

/// Anything with a reproducing kernel on a set of [`Point`]s.
pub trait ReproducingKernel {
    /// The set the kernel lives on.
    fn domain(&self) -> Domain;

    /// Validates that `x` lies in the domain.
    fn check_point(&self, x: &Point) -> Result<()>;

    /// `K(x, y) = k_y(x) = ⟨k_y, k_x⟩`.
    fn eval(&self, x: &Point, y: &Point) -> Result<C64>;

    /// A logarithm of `K(x, y)`; real part `-∞` where the kernel vanishes.
    fn log_eval(&self, x: &Point, y: &Point) -> Result<C64> {
        Ok(log_or_neg_inf(self.eval(x, y)?))
    }

    /// `1 - |⟨k̂_x, k̂_y⟩|²`, i.e. `δ(x, y)²`.
    fn pairing_defect(&self, x: &Point, y: &Point) -> Result<f64> {
        let lv = log_normalized(self, x, y)?;
        Ok(defect_from_log_magnitude(lv.re))
    }

    /// Jet of `K` at `(x, y)`, when the kernel is smooth and its derivatives are known.
    fn jet(&self, _x: &Point, _y: &Point) -> Result<Option<KernelJet>> {
        Ok(None)
    }

    /// `∂∂̄ log K(z, z)` from the jet, `(∂_x∂_ȳK · K - ∂_xK · ∂_ȳK) / K²`.
    fn log_diagonal_laplacian(&self, z: &Point) -> Result<Option<f64>> {
        Ok(self.jet(z, z)?.map(|j| {
            let k = j.value;
            ((j.dxdyb * k - j.dx * j.dyb) / (k * k)).re
        }))
    }
}

pub(crate) fn log_or_neg_inf(v: C64) -> C64 {
    if v.norm() == 0.0 {
        C64::new(f64::neg_infinity(), 0.0)
    } else {
        v.ln()
    }
}

/// `t mod 2π` in `[0, 2π)`.
pub(crate) fn rem_two_pi(t: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    let r = t - tau * (t / tau).floor();
    if r >= tau {
        0.0
    } else {
        r
    }
}

fn defect_from_log_magnitude(l: f64) -> f64 {
    (-(2.0 * l).exp_m1()).clamp(0.0, 1.0)
}

/// `log K(x, x)` after checking that the diagonal value is real and positive.
fn diagonal_log<K: ReproducingKernel + ?Sized>(k: &K, x: &Point) -> Result<f64> {
    let l = k.log_eval(x, x)?;
    if l.re == f64::neg_infinity() {
        return Err(Error::UndefinedPairing);
    }
    let phase = rem_two_pi(l.im);
    if phase > 1e-9 && phase < 2.0 * core::f64::consts::PI - 1e-9 {
        let v = k.eval(x, x)?;
        return Err(Error::NotPositive(v.re));
    }
    Ok(l.re)
}

/// `log ⟨k̂_x, k̂_y⟩ = log K(x, y) - ½ log K(x, x) - ½ log K(y, y)`.
pub(crate) fn log_normalized<K: ReproducingKernel + ?Sized>(
    k: &K,
    x: &Point,
    y: &Point,
) -> Result<C64> {
    let lxx = diagonal_log(k, x)?;
    if x == y {
        return Ok(C64::new(0.0, 0.0));
    }
    let lyy = diagonal_log(k, y)?;
    let lxy = k.log_eval(x, y)?;
    Ok(C64::new(lxy.re - 0.5 * (lxx + lyy), lxy.im))
}

/// Shape of a kernel's domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Domain {
    /// Open unit disk in `ℂ`.
    Disk,
    /// The whole complex plane.
    Plane,
    /// Open unit ball in `ℂⁿ`, `n ≥ 2`.
    Ball(usize),
    /// Disjoint union; points carry a [`Side`] tag.
    Union(Box<Domain>, Box<Domain>),
    /// The listed points of a custom kernel.
    Finite(usize),
}

impl Domain {
    pub fn is_scalar(&self) -> bool {
        matches!(self, Domain::Disk | Domain::Plane)
    }

    /// Checks membership; finite domains accept any point here, the custom
    /// kernel itself checks against its point list.
    pub fn check_point(&self, x: &Point) -> Result<()> {
        self.check(x.view())
    }

    fn check(&self, x: PointView<'_>) -> Result<()> {
        match self {
            Domain::Union(l, r) => match x.pop_side() {
                Some((Side::Left, rest)) => l.check(rest),
                Some((Side::Right, rest)) => r.check(rest),
                None => Err(Error::Domain {
                    coordinate: 0,
                    value: x.coords.first().copied().unwrap_or(C64::new(f64::NAN, 0.0)),
                    reason: "direct-sum point is missing its side tag",
                }),
            },
            Domain::Finite(_) => Ok(()),
            _ => {
                if !x.sides.is_empty() {
                    return Err(Error::Domain {
                        coordinate: 0,
                        value: x.coords.first().copied().unwrap_or(C64::new(f64::NAN, 0.0)),
                        reason: "side tag on a point outside any direct sum",
                    });
                }
                let n = match self {
                    Domain::Ball(n) => *n,
                    _ => 1,
                };
                if x.coords.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: x.coords.len(),
                    });
                }
                if let Some((i, z)) = x
                    .coords
                    .iter()
                    .enumerate()
                    .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
                {
                    return Err(Error::Domain {
                        coordinate: i,
                        value: *z,
                        reason: "coordinate is not finite",
                    });
                }
                match self {
                    Domain::Plane => Ok(()),
                    _ => {
                        let norm_sq: f64 = x.coords.iter().map(|z| z.norm_sqr()).sum();
                        if norm_sq < 1.0 {
                            Ok(())
                        } else {
                            let (i, z) = x
                                .coords
                                .iter()
                                .enumerate()
                                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                                .expect("nonempty coordinates");
                            Err(Error::Domain {
                                coordinate: i,
                                value: *z,
                                reason: if n == 1 {
                                    "|z| >= 1 (unit disk)"
                                } else {
                                    "|z| >= 1 (unit ball)"
                                },
                            })
                        }
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Dhb(f64),
    Fock(f64),
    DruryArveson(usize),
    FiniteLength,
    Radial(RadialSeries),
    Product(Box<Kernel>, Box<Kernel>),
    Power(Box<Kernel>, f64),
    Rescale(Box<Kernel>, Rescaling),
    DirectSum(Box<Kernel>, Box<Kernel>),
    Custom(CustomKernel),
}

/// Borrowed view of a kernel's construction, for inspection and rendering.
#[derive(Debug, Clone, Copy)]
pub enum Family<'a> {
    /// `(1 - x ȳ)^{-α}`; `α = 0` is the Dirichlet kernel `(1/u) log(1/(1-u))`.
    Dhb {
        alpha: f64,
    },
    /// `exp(β x ȳ)` on the plane.
    Fock {
        beta: f64,
    },
    /// `1 / (1 - ⟨x, y⟩)` on the unit ball of `ℂⁿ`.
    DruryArveson {
        n: usize,
    },
    /// `(2 - x - ȳ) / (1 - x ȳ)`: curves to the boundary can have finite length.
    FiniteLength,
    RadialBergman(&'a RadialSeries),
    Product(&'a Kernel, &'a Kernel),
    Power(&'a Kernel, f64),
    Rescale(&'a Kernel, &'a Rescaling),
    DirectSum(&'a Kernel, &'a Kernel),
    Custom(&'a CustomKernel),
}

/// A validated kernel description. Construct through the associated functions.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    repr: Repr,
}

impl Kernel {
    pub fn dhb(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "DHB exponent must be >= 0, got {alpha}"
            )));
        }
        Ok(Kernel {
            repr: Repr::Dhb(alpha),
        })
    }

    /// The Hardy space kernel, `dhb(1)`.
    pub fn hardy() -> Self {
        Kernel {
            repr: Repr::Dhb(1.0),
        }
    }

    pub fn fock(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Fock parameter must be > 0, got {beta}"
            )));
        }
        Ok(Kernel {
            repr: Repr::Fock(beta),
        })
    }

    pub fn drury_arveson(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "Drury–Arveson dimension must be >= 1".into(),
            ));
        }
        Ok(Kernel {
            repr: Repr::DruryArveson(n),
        })
    }

    pub fn finite_length_example() -> Self {
        Kernel {
            repr: Repr::FiniteLength,
        }
    }

    /// Radially weighted Bergman kernel from `moments[n] = ‖zⁿ‖²`.
    pub fn radial_bergman(moments: alloc::vec::Vec<f64>) -> Result<Self> {
        Ok(Kernel {
            repr: Repr::Radial(RadialSeries::new(moments)?),
        })
    }

    pub fn product(left: Kernel, right: Kernel) -> Result<Self> {
        let (dl, dr) = (left.domain(), right.domain());
        if dl != dr {
            return Err(Error::InvalidParameter(format!(
                "product operands live on different domains ({dl:?} vs {dr:?})"
            )));
        }
        Ok(Kernel {
            repr: Repr::Product(Box::new(left), Box::new(right)),
        })
    }

    /// `K^α` through `exp(α log K)`. Only offered for bases whose logarithm is
    /// known in closed form and whose powers are known to stay positive definite.
    pub fn power(base: Kernel, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "power exponent must be > 0, got {alpha}"
            )));
        }
        if !base.power_safe() {
            return Err(Error::Unsupported(
                "powers are only offered for DHB, Fock and Drury–Arveson kernels and their products/rescalings".into(),
            ));
        }
        Ok(Kernel {
            repr: Repr::Power(Box::new(base), alpha),
        })
    }

    pub fn rescale(base: Kernel, g: Rescaling) -> Result<Self> {
        g.validate()?;
        match base.domain() {
            Domain::Disk => {}
            Domain::Plane if g.entire_nonvanishing() => {}
            _ if g.is_constant() => {}
            d => {
                return Err(Error::Unsupported(format!(
                    "rescaling {g:?} is not nonvanishing on domain {d:?}"
                )))
            }
        }
        Ok(Kernel {
            repr: Repr::Rescale(Box::new(base), g),
        })
    }

    pub fn direct_sum(left: Kernel, right: Kernel) -> Self {
        Kernel {
            repr: Repr::DirectSum(Box::new(left), Box::new(right)),
        }
    }

    pub fn custom(points: alloc::vec::Vec<Point>, matrix: crate::linalg::CMatrix) -> Result<Self> {
        Ok(Kernel {
            repr: Repr::Custom(CustomKernel::new(points, matrix)?),
        })
    }

    pub fn family(&self) -> Family<'_> {
        match &self.repr {
            Repr::Dhb(a) => Family::Dhb { alpha: *a },
            Repr::Fock(b) => Family::Fock { beta: *b },
            Repr::DruryArveson(n) => Family::DruryArveson { n: *n },
            Repr::FiniteLength => Family::FiniteLength,
            Repr::Radial(s) => Family::RadialBergman(s),
            Repr::Product(a, b) => Family::Product(a, b),
            Repr::Power(b, a) => Family::Power(b, *a),
            Repr::Rescale(b, g) => Family::Rescale(b, g),
            Repr::DirectSum(a, b) => Family::DirectSum(a, b),
            Repr::Custom(c) => Family::Custom(c),
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.repr {
            Repr::Dhb(_) | Repr::FiniteLength | Repr::Radial(_) | Repr::DruryArveson(1) => {
                Domain::Disk
            }
            Repr::DruryArveson(n) => Domain::Ball(*n),
            Repr::Fock(_) => Domain::Plane,
            Repr::Product(a, _) | Repr::Power(a, _) | Repr::Rescale(a, _) => a.domain(),
            Repr::DirectSum(a, b) => Domain::Union(Box::new(a.domain()), Box::new(b.domain())),
            Repr::Custom(c) => Domain::Finite(c.points().len()),
        }
    }

    /// Families whose kernels are known to be complete Nevanlinna–Pick:
    /// `DHB(α)` for `0 ≤ α ≤ 1` and the Drury–Arveson kernels.
    pub fn is_complete_np(&self) -> bool {
        match self.repr {
            Repr::Dhb(a) => a <= 1.0,
            Repr::DruryArveson(_) => true,
            _ => false,
        }
    }

    /// The DHB exponent, if this is a plain DHB kernel.
    pub fn dhb_alpha(&self) -> Option<f64> {
        match self.repr {
            Repr::Dhb(a) => Some(a),
            Repr::DruryArveson(1) => Some(1.0),
            _ => None,
        }
    }

    fn power_safe(&self) -> bool {
        match &self.repr {
            Repr::Dhb(_) | Repr::Fock(_) | Repr::DruryArveson(_) => true,
            Repr::Product(a, b) => a.power_safe() && b.power_safe(),
            Repr::Power(b, _) | Repr::Rescale(b, _) => b.power_safe(),
            _ => false,
        }
    }

    fn check_view(&self, x: PointView<'_>) -> Result<()> {
        match &self.repr {
            Repr::Custom(c) => c.check(x).map(|_| ()),
            Repr::DirectSum(a, b) => match x.pop_side() {
                Some((Side::Left, rest)) => a.check_view(rest),
                Some((Side::Right, rest)) => b.check_view(rest),
                None => self.domain().check(x),
            },
            Repr::Product(a, b) => {
                a.check_view(x)?;
                b.check_view(x)
            }
            Repr::Power(a, _) | Repr::Rescale(a, _) => a.check_view(x),
            _ => self.domain().check(x),
        }
    }

    fn eval_view(&self, x: PointView<'_>, y: PointView<'_>) -> Result<C64> {
        Ok(match &self.repr {
            Repr::Dhb(a) => {
                let u = x.scalar() * y.scalar().conj();
                if *a == 0.0 {
                    family::dirichlet_value(u)
                } else {
                    family::dhb_value(*a, u)
                }
            }
            Repr::Fock(b) => (*b * x.scalar() * y.scalar().conj()).exp(),
            Repr::DruryArveson(_) => {
                C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - ball_inner(x.coords, y.coords))
            }
            Repr::FiniteLength => family::finite_length_value(x.scalar(), y.scalar()),
            Repr::Radial(s) => s.profile(x.scalar() * y.scalar().conj())?.f,
            Repr::Product(a, b) => a.eval_view(x, y)? * b.eval_view(x, y)?,
            Repr::Power(b, alpha) => (*alpha * b.log_view(x, y)?).exp(),
            Repr::Rescale(b, g) => {
                g.value(x.coords[0]) * g.value(y.coords[0]).conj() * b.eval_view(x, y)?
            }
            Repr::DirectSum(a, b) => match split_sides(x, y)? {
                (Some(Side::Left), xs, ys) => a.eval_view(xs, ys)?,
                (Some(Side::Right), xs, ys) => b.eval_view(xs, ys)?,
                _ => C64::new(0.0, 0.0),
            },
            Repr::Custom(c) => c.entry(c.check(x)?, c.check(y)?),
        })
    }

    fn log_view(&self, x: PointView<'_>, y: PointView<'_>) -> Result<C64> {
        Ok(match &self.repr {
            Repr::Dhb(a) => {
                let u = x.scalar() * y.scalar().conj();
                if *a == 0.0 {
                    // real part of the Dirichlet kernel is positive on the disk
                    family::dirichlet_value(u).ln()
                } else {
                    family::dhb_log(*a, u)
                }
            }
            Repr::Fock(b) => *b * x.scalar() * y.scalar().conj(),
            Repr::DruryArveson(_) => -(C64::new(1.0, 0.0) - ball_inner(x.coords, y.coords)).ln(),
            Repr::FiniteLength => family::finite_length_log(x.scalar(), y.scalar()),
            Repr::Product(a, b) => a.log_view(x, y)? + b.log_view(x, y)?,
            Repr::Power(b, alpha) => *alpha * b.log_view(x, y)?,
            Repr::Rescale(b, g) => {
                g.log(x.coords[0]) + g.log(y.coords[0]).conj() + b.log_view(x, y)?
            }
            Repr::DirectSum(a, b) => match split_sides(x, y)? {
                (Some(Side::Left), xs, ys) => a.log_view(xs, ys)?,
                (Some(Side::Right), xs, ys) => b.log_view(xs, ys)?,
                _ => C64::new(f64::neg_infinity(), 0.0),
            },
            Repr::Radial(_) | Repr::Custom(_) => log_or_neg_inf(self.eval_view(x, y)?),
        })
    }

    /// Closed-form `1 - |⟨k̂_x, k̂_y⟩|²` where available, `None` otherwise.
    fn stable_defect(
        &self,
        x: &Point,
        y: &Point,
        xv: PointView<'_>,
        yv: PointView<'_>,
    ) -> Result<Option<f64>> {
        Ok(match &self.repr {
            Repr::Dhb(a) if *a > 0.0 => Some(family::defect_power(
                rho_disk_sq(xv.scalar(), yv.scalar()),
                *a,
            )),
            Repr::Fock(b) => Some(-(-*b * (xv.scalar() - yv.scalar()).norm_sqr()).exp_m1()),
            Repr::DruryArveson(_) => Some(rho_ball_sq(xv.coords, yv.coords)),
            Repr::Product(a, b) => {
                let da = a.defect_views(x, y, xv, yv)?;
                let db = b.defect_views(x, y, xv, yv)?;
                Some((da + db - da * db).clamp(0.0, 1.0))
            }
            Repr::Power(b, alpha) => {
                Some(family::defect_power(b.defect_views(x, y, xv, yv)?, *alpha))
            }
            Repr::Rescale(b, _) => Some(b.defect_views(x, y, xv, yv)?),
            Repr::DirectSum(a, b) => match split_sides(xv, yv)? {
                (Some(Side::Left), xs, ys) => Some(a.defect_views(x, y, xs, ys)?),
                (Some(Side::Right), xs, ys) => Some(b.defect_views(x, y, xs, ys)?),
                _ => {
                    // orthogonal summands, provided both kernel functions are nonzero
                    diagonal_log(self, x)?;
                    diagonal_log(self, y)?;
                    Some(1.0)
                }
            },
            _ => None,
        })
    }

    fn defect_views(
        &self,
        x: &Point,
        y: &Point,
        xv: PointView<'_>,
        yv: PointView<'_>,
    ) -> Result<f64> {
        match self.stable_defect(x, y, xv, yv)? {
            Some(d) => Ok(d),
            None => {
                let lxx = self.log_view(xv, xv)?;
                let lyy = self.log_view(yv, yv)?;
                if lxx.re == f64::neg_infinity() || lyy.re == f64::neg_infinity() {
                    return Err(Error::UndefinedPairing);
                }
                for (l, p) in [(lxx, xv), (lyy, yv)] {
                    let phase = rem_two_pi(l.im);
                    if phase > 1e-9 && phase < 2.0 * core::f64::consts::PI - 1e-9 {
                        return Err(Error::NotPositive(self.eval_view(p, p)?.re));
                    }
                }
                if xv.coords == yv.coords && xv.sides == yv.sides {
                    return Ok(0.0);
                }
                let lxy = self.log_view(xv, yv)?;
                Ok(defect_from_log_magnitude(lxy.re - 0.5 * (lxx.re + lyy.re)))
            }
        }
    }

    fn jet_view(&self, x: PointView<'_>, y: PointView<'_>) -> Result<Option<KernelJet>> {
        Ok(match &self.repr {
            Repr::Dhb(a) => {
                let u = x.scalar() * y.scalar().conj();
                let p = if *a == 0.0 {
                    family::dirichlet_profile(u)
                } else {
                    family::dhb_profile(*a, u)
                };
                Some(p.jet(x.scalar(), y.scalar()))
            }
            Repr::DruryArveson(1) => Some(
                family::dhb_profile(1.0, x.scalar() * y.scalar().conj())
                    .jet(x.scalar(), y.scalar()),
            ),
            Repr::DruryArveson(_) | Repr::Custom(_) => None,
            Repr::Fock(b) => Some(
                family::fock_profile(*b, x.scalar() * y.scalar().conj())
                    .jet(x.scalar(), y.scalar()),
            ),
            Repr::FiniteLength => Some(family::finite_length_jet(x.scalar(), y.scalar())),
            Repr::Radial(s) => Some(
                s.profile(x.scalar() * y.scalar().conj())?
                    .jet(x.scalar(), y.scalar()),
            ),
            Repr::Product(a, b) => match (a.jet_view(x, y)?, b.jet_view(x, y)?) {
                (Some(p), Some(q)) => Some(KernelJet {
                    value: p.value * q.value,
                    dx: p.dx * q.value + p.value * q.dx,
                    dyb: p.dyb * q.value + p.value * q.dyb,
                    dxdyb: p.dxdyb * q.value + p.dx * q.dyb + p.dyb * q.dx + p.value * q.dxdyb,
                }),
                _ => None,
            },
            Repr::Power(b, alpha) => match b.jet_view(x, y)? {
                Some(p) => {
                    let v = (*alpha * b.log_view(x, y)?).exp();
                    let lx = p.dx / p.value;
                    let ly = p.dyb / p.value;
                    Some(KernelJet {
                        value: v,
                        dx: v * *alpha * lx,
                        dyb: v * *alpha * ly,
                        dxdyb: v * *alpha * ((*alpha - 1.0) * lx * ly + p.dxdyb / p.value),
                    })
                }
                None => None,
            },
            Repr::Rescale(b, g) => match b.jet_view(x, y)? {
                Some(p) => {
                    let (gx, dgx) = (g.value(x.scalar()), g.derivative(x.scalar()));
                    let (hy, dhy) = (g.value(y.scalar()).conj(), g.derivative(y.scalar()).conj());
                    Some(KernelJet {
                        value: gx * hy * p.value,
                        dx: dgx * hy * p.value + gx * hy * p.dx,
                        dyb: gx * dhy * p.value + gx * hy * p.dyb,
                        dxdyb: dgx * dhy * p.value
                            + dgx * hy * p.dyb
                            + gx * dhy * p.dx
                            + gx * hy * p.dxdyb,
                    })
                }
                None => None,
            },
            Repr::DirectSum(a, b) => match split_sides(x, y)? {
                (Some(Side::Left), xs, ys) => a.jet_view(xs, ys)?,
                (Some(Side::Right), xs, ys) => b.jet_view(xs, ys)?,
                _ => Some(KernelJet::zero()),
            },
        })
    }

    /// `∂∂̄ log K(z, z)`, in closed form where products, powers and rescalings
    /// allow it, since `log K` is additive under them.
    fn laplacian_view(&self, z: PointView<'_>) -> Result<Option<f64>> {
        let w = z.scalar();
        Ok(match &self.repr {
            Repr::Dhb(a) if *a > 0.0 => {
                let d = (1.0 - w.norm()) * (1.0 + w.norm());
                Some(*a / (d * d))
            }
            Repr::DruryArveson(1) => {
                let d = (1.0 - w.norm()) * (1.0 + w.norm());
                Some(1.0 / (d * d))
            }
            Repr::Fock(b) => Some(*b),
            Repr::FiniteLength => {
                // |1 - z|² (3 - 2 Re z - |z|²) / (4 (1 - |z|²)² (1 - Re z)²)
                let d = (1.0 - w.norm()) * (1.0 + w.norm());
                let one_minus_x = 1.0 - w.re;
                Some(
                    (C64::new(1.0, 0.0) - w).norm_sqr() * (3.0 - 2.0 * w.re - w.norm_sqr())
                        / (4.0 * d * d * one_minus_x * one_minus_x),
                )
            }
            Repr::Product(a, b) => match (a.laplacian_view(z)?, b.laplacian_view(z)?) {
                (Some(p), Some(q)) => Some(p + q),
                _ => None,
            },
            Repr::Power(b, alpha) => b.laplacian_view(z)?.map(|t| alpha * t),
            Repr::Rescale(b, _) => b.laplacian_view(z)?,
            Repr::DirectSum(a, b) => match z.pop_side() {
                Some((Side::Left, rest)) => a.laplacian_view(rest)?,
                Some((Side::Right, rest)) => b.laplacian_view(rest)?,
                None => None,
            },
            _ => self.jet_view(z, z)?.map(|j| {
                let k = j.value;
                ((j.dxdyb * k - j.dx * j.dyb) / (k * k)).re
            }),
        })
    }

    /// Short human-readable name, e.g. `DHB(α=1)`.
    pub fn label(&self) -> String {
        match &self.repr {
            Repr::Dhb(a) => format!("DHB(alpha={a})"),
            Repr::Fock(b) => format!("Fock(beta={b})"),
            Repr::DruryArveson(n) => format!("DruryArveson(n={n})"),
            Repr::FiniteLength => "FiniteLengthExample".into(),
            Repr::Radial(s) => format!("RadialBergman({} moments)", s.moments().len()),
            Repr::Product(a, b) => format!("Product({}, {})", a.label(), b.label()),
            Repr::Power(b, a) => format!("Power({}, {a})", b.label()),
            Repr::Rescale(b, _) => format!("Rescale({})", b.label()),
            Repr::DirectSum(a, b) => format!("DirectSum({}, {})", a.label(), b.label()),
            Repr::Custom(c) => format!("Custom({} points)", c.points().len()),
        }
    }
}

/// Splits the outermost side tags; `None` side means the points are on different summands.
fn split_sides<'a>(
    x: PointView<'a>,
    y: PointView<'a>,
) -> Result<(Option<Side>, PointView<'a>, PointView<'a>)> {
    match (x.pop_side(), y.pop_side()) {
        (Some((sx, xs)), Some((sy, ys))) => Ok((if sx == sy { Some(sx) } else { None }, xs, ys)),
        _ => Err(Error::Domain {
            coordinate: 0,
            value: x.coords.first().copied().unwrap_or(C64::new(f64::NAN, 0.0)),
            reason: "direct-sum point is missing its side tag",
        }),
    }
}

fn ball_inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

impl ReproducingKernel for Kernel {
    fn domain(&self) -> Domain {
        Kernel::domain(self)
    }

    fn check_point(&self, x: &Point) -> Result<()> {
        self.check_view(x.view())
    }

    fn eval(&self, x: &Point, y: &Point) -> Result<C64> {
        self.check_point(x)?;
        self.check_point(y)?;
        self.eval_view(x.view(), y.view())
    }

    fn log_eval(&self, x: &Point, y: &Point) -> Result<C64> {
        self.check_point(x)?;
        self.check_point(y)?;
        self.log_view(x.view(), y.view())
    }

    fn pairing_defect(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check_point(x)?;
        self.check_point(y)?;
        self.defect_views(x, y, x.view(), y.view())
    }

    fn jet(&self, x: &Point, y: &Point) -> Result<Option<KernelJet>> {
        self.check_point(x)?;
        self.check_point(y)?;
        let scalar = |p: &Point| p.dim() == 1;
        if !scalar(x) || !scalar(y) {
            return Ok(None);
        }
        self.jet_view(x.view(), y.view())
    }

    fn log_diagonal_laplacian(&self, z: &Point) -> Result<Option<f64>> {
        self.check_point(z)?;
        if z.dim() != 1 {
            return Ok(None);
        }
        self.laplacian_view(z.view())
    }
}

impl<K: ReproducingKernel + ?Sized> ReproducingKernel for &K {
    fn domain(&self) -> Domain {
        (**self).domain()
    }
    fn check_point(&self, x: &Point) -> Result<()> {
        (**self).check_point(x)
    }
    fn eval(&self, x: &Point, y: &Point) -> Result<C64> {
        (**self).eval(x, y)
    }
    fn log_eval(&self, x: &Point, y: &Point) -> Result<C64> {
        (**self).log_eval(x, y)
    }
    fn pairing_defect(&self, x: &Point, y: &Point) -> Result<f64> {
        (**self).pairing_defect(x, y)
    }
    fn jet(&self, x: &Point, y: &Point) -> Result<Option<KernelJet>> {
        (**self).jet(x, y)
    }
    fn log_diagonal_laplacian(&self, z: &Point) -> Result<Option<f64>> {
        (**self).log_diagonal_laplacian(z)
    }
}
