use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::quad;
use crate::{Error, Result, C64};

use super::family::Profile;

/// Default number of monomials kept in a radial-weight Bergman kernel.
pub const DEFAULT_TERMS: usize = 512;

/// Largest tail estimate accepted when evaluating the truncated series.
pub const MAX_TAIL: f64 = 1e-8;

/// `K(z, w) = Σ_{n=0}^{N} (z w̄)ⁿ / ‖zⁿ‖²` for a radially weighted Bergman space.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSeries {
    moments: Vec<f64>,
}

impl RadialSeries {
    pub fn new(moments: Vec<f64>) -> Result<Self> {
        if moments.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "radial Bergman kernel needs at least 3 moments, got {}",
                moments.len()
            )));
        }
        if let Some((i, m)) = moments
            .iter()
            .enumerate()
            .find(|(_, m)| !(**m > 0.0 && m.is_finite()))
        {
            return Err(Error::InvalidParameter(format!(
                "moment {i} = {m} is not positive"
            )));
        }
        Ok(RadialSeries { moments })
    }

    pub fn moments(&self) -> &[f64] {
        &self.moments
    }

    /// Estimated size of the omitted terms `Σ_{n>N} |u|ⁿ / m_n`, extrapolating
    /// the ratio of the last two retained terms geometrically.
    pub fn tail_bound(&self, u: C64) -> f64 {
        let n = self.moments.len() - 1;
        let r = u.norm();
        if r == 0.0 {
            return 0.0;
        }
        let last = r.powi(n as i32) / self.moments[n];
        let ratio = r * self.moments[n - 1] / self.moments[n];
        if ratio >= 1.0 {
            f64::infinity()
        } else {
            last * ratio / (1.0 - ratio)
        }
    }

    pub(crate) fn profile(&self, u: C64) -> Result<Profile> {
        let tail = self.tail_bound(u);
        let mut f = C64::new(0.0, 0.0);
        let mut df = C64::new(0.0, 0.0);
        let mut d2f = C64::new(0.0, 0.0);
        for (n, m) in self.moments.iter().enumerate().rev() {
            let nf = n as f64;
            f = f * u + 1.0 / m;
            if n >= 1 {
                df = df * u + nf / m;
            }
            if n >= 2 {
                d2f = d2f * u + nf * (nf - 1.0) / m;
            }
        }
        if tail > MAX_TAIL * f.norm().max(1.0) {
            return Err(Error::Truncation(tail));
        }
        Ok(Profile { f, df, d2f })
    }

    /// Small-`z` coefficient `c` in `δ(0, z) = c |z| (1 + O(|z|²))`, namely `sqrt(m_0 / m_1)`.
    pub fn origin_slope(&self) -> f64 {
        (self.moments[0] / self.moments[1]).sqrt()
    }
}

/// `‖zⁿ‖² = 2π ∫_0^1 r^{2n+1} v(r) dr` for `n = 0..count`, by adaptive Gauss–Kronrod
/// quadrature to relative accuracy 1e-10.
pub fn moments_from_weight<V>(weight: V, count: usize) -> Result<Vec<f64>>
where
    V: Fn(f64) -> f64,
{
    (0..count)
        .map(|n| {
            let p = (2 * n + 1) as i32;
            let q = quad::integrate(|r| Ok(r.powi(p) * weight(r)), 0.0, 1.0, 0.0, 1e-10, 4000)?;
            Ok(2.0 * PI * q.value)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_moments() {
        let m = moments_from_weight(|_| 1.0, 6).unwrap();
        for (n, v) in m.iter().enumerate() {
            let exact = PI / (n as f64 + 1.0);
            assert!((v - exact).abs() < 1e-10 * exact, "n={n}: {v} vs {exact}");
        }
    }

    #[test]
    fn rejects_bad_moments() {
        assert!(RadialSeries::new(alloc::vec![1.0, 2.0]).is_err());
        assert!(RadialSeries::new(alloc::vec![1.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn slow_tail_is_an_error() {
        // all-ones moments: Σ uⁿ converges like a geometric series with ratio |u|
        let s = RadialSeries::new(alloc::vec![1.0; 20]).unwrap();
        assert!(s.profile(C64::new(0.1, 0.0)).is_ok());
        assert!(matches!(
            s.profile(C64::new(0.9, 0.0)),
            Err(Error::Truncation(_))
        ));
    }
}
