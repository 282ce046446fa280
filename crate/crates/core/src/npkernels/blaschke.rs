//! Generalized Blaschke products `B_{S,x₀} = Π G_{x_i,x₀}` and zero-set criteria.
//!
//! Zero sets approaching the boundary are given by generators so that
//! `1 - |x_n|²` stays exact long after `x_n` itself rounds to 1. Convergence of
//! an infinite product is decided by the declared tail law of the generator, the
//! finite prefix only supplies partial sums and products.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::maximal_multiplier;
use crate::kernels::{dhb_value, dirichlet_value, Kernel, ReproducingKernel};
use crate::{Error, Point, Result, C64};

pub const DEFAULT_PREFIX: usize = 10_000;

/// A prescribed zero with its defect `1 - |z|²` carried separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroPoint {
    pub z: C64,
    pub defect: f64,
}

impl ZeroPoint {
    pub fn new(z: C64) -> Result<Self> {
        let r = z.norm();
        if r.is_nan() || r >= 1.0 {
            return Err(Error::Domain {
                coordinate: 0,
                value: z,
                reason: "|z| >= 1 (unit disk)",
            });
        }
        Ok(ZeroPoint {
            z,
            defect: (1.0 - r) * (1.0 + r),
        })
    }

    /// Real zero `1 - t` with `t` small, keeping `1 - |z|² = t (2 - t)` exact.
    fn near_one(t: f64) -> Self {
        ZeroPoint {
            z: C64::new(1.0 - t, 0.0),
            defect: t * (2.0 - t),
        }
    }

    /// Whether `z` itself is still inside the disk in floating point.
    pub fn is_representable(&self) -> bool {
        self.z.norm() < 1.0
    }
}

/// How the zero set is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSetGenerator {
    Explicit(Vec<C64>),
    /// `x_n = 1 - ratio^n`, `n = 1, 2, …`
    Geometric {
        ratio: f64,
    },
    /// `x_n = 1 - n^{-exponent}`, `n = 2, 3, …`
    Power {
        exponent: f64,
    },
}

/// Asymptotics of `1 - |x_n|²`, used to decide convergence of infinite sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailLaw {
    Finite,
    /// `1 - |x_n|² ≍ ratio^n`
    Geometric {
        ratio: f64,
    },
    /// `1 - |x_n|² ≍ n^{-exponent}`
    Power {
        exponent: f64,
    },
}

impl ZeroSetGenerator {
    pub fn validate(&self) -> Result<()> {
        match self {
            ZeroSetGenerator::Explicit(zs) => {
                zs.iter().try_for_each(|z| ZeroPoint::new(*z).map(|_| ()))
            }
            ZeroSetGenerator::Geometric { ratio } if !(*ratio > 0.0 && *ratio < 1.0) => {
                Err(Error::InvalidParameter(alloc::format!(
                    "geometric ratio must be in (0, 1), got {ratio}"
                )))
            }
            ZeroSetGenerator::Power { exponent } if !(*exponent > 0.0 && exponent.is_finite()) => {
                Err(Error::InvalidParameter(alloc::format!(
                    "power exponent must be > 0, got {exponent}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn tail_law(&self) -> TailLaw {
        match self {
            ZeroSetGenerator::Explicit(_) => TailLaw::Finite,
            ZeroSetGenerator::Geometric { ratio } => TailLaw::Geometric { ratio: *ratio },
            ZeroSetGenerator::Power { exponent } => TailLaw::Power {
                exponent: *exponent,
            },
        }
    }

    /// The first `prefix` zeros (all of them for explicit sets).
    pub fn points(&self, prefix: usize) -> Result<Vec<ZeroPoint>> {
        self.validate()?;
        Ok(match self {
            ZeroSetGenerator::Explicit(zs) => zs
                .iter()
                .map(|z| ZeroPoint::new(*z))
                .collect::<Result<_>>()?,
            ZeroSetGenerator::Geometric { ratio } => (1..=prefix)
                .map(|n| ZeroPoint::near_one(ratio.powi(n as i32)))
                .collect(),
            ZeroSetGenerator::Power { exponent } => (2..prefix + 2)
                .map(|n| ZeroPoint::near_one((n as f64).powf(-exponent)))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Converges,
    DivergesToZero,
}

/// Convergence data for `B_{S,x₀}` in a DHB space.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSetReport {
    pub alpha: f64,
    pub basepoint: Point,
    pub tail_law: TailLaw,
    pub prefix: usize,
    /// `(N, Π_{i≤N} δ²(x_i, x₀))` at `N = 1, 2, 4, …` and at the full prefix.
    pub partial_products: Vec<(usize, f64)>,
    /// `Σ_{i≤N} |k_{x₀}(x_i)|² / (‖k_{x₀}‖² ‖k_{x_i}‖²)` over the prefix.
    pub criterion_sum: f64,
    pub classification: Classification,
}

impl ZeroSetReport {
    /// `B²_{S,x₀}(x₀)` over the whole prefix.
    pub fn product_at_basepoint(&self) -> f64 {
        self.partial_products.last().map(|p| p.1).unwrap_or(1.0)
    }
}

fn disk_np_alpha(kernel: &Kernel) -> Result<f64> {
    match kernel.dhb_alpha() {
        Some(a) if a <= 1.0 => Ok(a),
        _ => Err(Error::Unsupported(alloc::format!(
            "Blaschke products are built for DHB kernels with alpha <= 1, not {}",
            kernel.label()
        ))),
    }
}

/// `K(x, x)` from the defect `d = 1 - |x|²`.
fn diagonal_from_defect(alpha: f64, p: &ZeroPoint) -> f64 {
    if alpha > 0.0 {
        (-alpha * p.defect.ln()).exp()
    } else if p.z.norm_sqr() > 0.5 {
        -p.defect.ln() / p.z.norm_sqr()
    } else {
        dirichlet_value(C64::new(p.z.norm_sqr(), 0.0)).re
    }
}

fn off_diagonal(alpha: f64, x: C64, y: C64) -> C64 {
    let u = x * y.conj();
    if alpha > 0.0 {
        dhb_value(alpha, u)
    } else {
        dirichlet_value(u)
    }
}

fn classify(alpha: f64, law: TailLaw) -> Classification {
    let converges = match law {
        TailLaw::Finite => true,
        // terms behave like 1/K(x_n, x_n), i.e. (1 - |x_n|²)^α, or 1/log(1/(1 - |x_n|²)) when α = 0
        _ if alpha == 0.0 => false,
        TailLaw::Geometric { .. } => true,
        TailLaw::Power { exponent } => exponent * alpha > 1.0,
    };
    if converges {
        Classification::Converges
    } else {
        Classification::DivergesToZero
    }
}

/// Partial products and criterion sums of `B_{S,x₀}` for a DHB(α ≤ 1) kernel.
pub fn blaschke_product(
    kernel: &Kernel,
    zeros: &ZeroSetGenerator,
    basepoint: &Point,
    prefix: usize,
) -> Result<ZeroSetReport> {
    let alpha = disk_np_alpha(kernel)?;
    kernel.check_point(basepoint)?;
    let x0 = basepoint.coords()[0];
    let points = zeros.points(prefix)?;
    let k00 = kernel.eval(basepoint, basepoint)?.re;
    let mut log_product = 0.0;
    let mut criterion_sum = 0.0;
    let mut partial_products = Vec::new();
    let mut mark = 1;
    for (i, p) in points.iter().enumerate() {
        if p.z == x0 {
            return Err(Error::Degenerate("basepoint belongs to the zero set"));
        }
        let t = (off_diagonal(alpha, p.z, x0).norm_sqr() / (k00 * diagonal_from_defect(alpha, p)))
            .min(1.0);
        criterion_sum += t;
        log_product += (-t).ln_1p();
        let n = i + 1;
        if n == mark || n == points.len() {
            partial_products.push((n, log_product.exp()));
            if n == mark {
                mark *= 2;
            }
        }
    }
    Ok(ZeroSetReport {
        alpha,
        basepoint: basepoint.clone(),
        tail_law: zeros.tail_law(),
        prefix: points.len(),
        partial_products,
        criterion_sum,
        classification: classify(alpha, zeros.tail_law()),
    })
}

/// `Π G_{x_i,x₀}(ζ)` at each query point, over the zeros of the prefix that are
/// representable in floating point. Returns the values and the number of factors used.
pub fn blaschke_values(
    kernel: &Kernel,
    zeros: &ZeroSetGenerator,
    basepoint: &Point,
    prefix: usize,
    queries: &[Point],
) -> Result<(Vec<C64>, usize)> {
    disk_np_alpha(kernel)?;
    let factors = zeros
        .points(prefix)?
        .into_iter()
        .filter(ZeroPoint::is_representable)
        .map(|p| {
            let x = Point::scalar(p.z);
            if &x == basepoint {
                return Err(Error::Degenerate("basepoint belongs to the zero set"));
            }
            maximal_multiplier(kernel, &x, basepoint)
        })
        .collect::<Result<Vec<_>>>()?;
    let values = queries
        .iter()
        .map(|q| {
            factors
                .iter()
                .try_fold(C64::new(1.0, 0.0), |acc, g| Ok(acc * g.eval(q)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((values, factors.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriteriaSpace {
    Hardy,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroSetVerdict {
    ZeroSet,
    NotZeroSet,
    /// The available condition is only sufficient and it fails.
    Inconclusive,
}

/// The Blaschke and Shapiro–Shields sums over a prefix, with tail-law verdicts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSetCriteria {
    pub space: CriteriaSpace,
    pub blaschke_sum: f64,
    pub blaschke_converges: bool,
    /// `Σ log(1/(1 - |x_i|²))`.
    pub shapiro_shields_sum: f64,
    pub shapiro_shields_converges: bool,
    pub verdict: ZeroSetVerdict,
}

pub fn zero_set_criteria(
    space: CriteriaSpace,
    zeros: &ZeroSetGenerator,
    prefix: usize,
) -> Result<ZeroSetCriteria> {
    let points = zeros.points(prefix)?;
    let blaschke_sum = points.iter().map(|p| p.defect).sum();
    let shapiro_shields_sum = points.iter().map(|p| -p.defect.ln()).sum();
    let law = zeros.tail_law();
    let blaschke_converges = match law {
        TailLaw::Finite | TailLaw::Geometric { .. } => true,
        TailLaw::Power { exponent } => exponent > 1.0,
    };
    // log(1/(1 - |x_n|²)) → ∞ along any infinite set tending to the boundary
    let shapiro_shields_converges = law == TailLaw::Finite;
    let verdict = match space {
        CriteriaSpace::Hardy if blaschke_converges => ZeroSetVerdict::ZeroSet,
        CriteriaSpace::Hardy => ZeroSetVerdict::NotZeroSet,
        CriteriaSpace::Dirichlet if shapiro_shields_converges => ZeroSetVerdict::ZeroSet,
        CriteriaSpace::Dirichlet => ZeroSetVerdict::Inconclusive,
    };
    Ok(ZeroSetCriteria {
        space,
        blaschke_sum,
        blaschke_converges,
        shapiro_shields_sum,
        shapiro_shields_converges,
        verdict,
    })
}
