use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result, C64};

/// A nonvanishing function `G` used to rescale a space to `G·H`, whose kernel is
/// `G(x) conj(G(y)) K(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Rescaling {
    /// `G ≡ c`, `c ≠ 0`.
    Constant(C64),
    /// `G(z) = scale · exp(Σ_k coeffs[k] z^k)`.
    ExpPolynomial { scale: C64, coeffs: Vec<C64> },
    /// `G(z) = a + b z` with `|b| < |a|`, nonvanishing on the closed disk.
    Affine { a: C64, b: C64 },
}

impl Rescaling {
    pub fn validate(&self) -> Result<()> {
        match self {
            Rescaling::Constant(c) if c.norm() == 0.0 => Err(Error::InvalidParameter(
                "rescaling constant must be nonzero".into(),
            )),
            Rescaling::ExpPolynomial { scale, .. } if scale.norm() == 0.0 => Err(
                Error::InvalidParameter("rescaling scale must be nonzero".into()),
            ),
            Rescaling::Affine { a, b } if b.norm() >= a.norm() => {
                Err(Error::InvalidParameter(format!(
                    "affine rescaling a + b z vanishes in the disk (|b| = {} ≥ |a| = {})",
                    b.norm(),
                    a.norm()
                )))
            }
            _ => Ok(()),
        }
    }

    /// Whether `G` is nonvanishing on the whole plane (affine maps are not).
    pub fn entire_nonvanishing(&self) -> bool {
        !matches!(self, Rescaling::Affine { .. })
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Rescaling::Constant(_) => true,
            Rescaling::ExpPolynomial { coeffs, .. } => {
                coeffs.iter().skip(1).all(|c| c.norm() == 0.0)
            }
            Rescaling::Affine { b, .. } => b.norm() == 0.0,
        }
    }

    fn exponent(coeffs: &[C64], z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for (k, c) in coeffs.iter().enumerate().rev() {
            p = p * z + c;
            if k >= 1 {
                dp = dp * z + c * k as f64;
            }
        }
        (p, dp)
    }

    pub fn value(&self, z: C64) -> C64 {
        match self {
            Rescaling::Constant(c) => *c,
            Rescaling::ExpPolynomial { scale, coeffs } => scale * Self::exponent(coeffs, z).0.exp(),
            Rescaling::Affine { a, b } => a + b * z,
        }
    }

    pub fn derivative(&self, z: C64) -> C64 {
        match self {
            Rescaling::Constant(_) => C64::new(0.0, 0.0),
            Rescaling::ExpPolynomial { scale, coeffs } => {
                let (p, dp) = Self::exponent(coeffs, z);
                scale * p.exp() * dp
            }
            Rescaling::Affine { b, .. } => *b,
        }
    }

    /// A logarithm of `G` that is continuous on the domain.
    pub fn log(&self, z: C64) -> C64 {
        match self {
            Rescaling::Constant(c) => c.ln(),
            Rescaling::ExpPolynomial { scale, coeffs } => scale.ln() + Self::exponent(coeffs, z).0,
            // 1 + (b/a) z stays in the right half-plane
            Rescaling::Affine { a, b } => a.ln() + (C64::new(1.0, 0.0) + b / a * z).ln(),
        }
    }
}
