//! Gram matrices and normalized pairings.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::{log_normalized, ReproducingKernel};
use crate::linalg::CMatrix;
use crate::{Error, Point, Result, C64};

/// `G[i][j] = K(x_i, x_j) = ⟨k_{x_j}, k_{x_i}⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub points: Vec<Point>,
    pub matrix: CMatrix,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Builds the Gram matrix, rejecting repeated points.
pub fn gram<K: ReproducingKernel + ?Sized>(kernel: &K, points: &[Point]) -> Result<GramMatrix> {
    for (i, p) in points.iter().enumerate() {
        kernel.check_point(p)?;
        if let Some(j) = points[..i].iter().position(|q| q == p) {
            return Err(Error::DuplicatePoint(j, i));
        }
    }
    let n = points.len();
    let mut matrix = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(&points[i], &points[j])?;
            matrix[(i, j)] = v;
            if i != j {
                matrix[(j, i)] = v.conj();
            } else {
                matrix[(i, i)] = C64::new(v.re, 0.0);
            }
        }
    }
    Ok(GramMatrix {
        points: points.to_vec(),
        matrix,
    })
}

/// `‖k_x‖ = sqrt(K(x, x))`.
pub fn kernel_norm<K: ReproducingKernel + ?Sized>(kernel: &K, x: &Point) -> Result<f64> {
    let v = kernel.eval(x, x)?;
    if v.re.is_nan() || v.re <= 0.0 {
        return Err(Error::UndefinedPairing);
    }
    Ok(v.re.sqrt())
}

/// Normalized kernel pairing `K(x, y) / sqrt(K(x, x) K(y, y))`, with
/// `magnitude = cos θ` and `phase = φ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPairing {
    pub value: C64,
    pub magnitude: f64,
    pub phase: f64,
}

/// Normalized pairing computed in log space, so large kernel values do not overflow.
pub fn normalized_pairing<K: ReproducingKernel + ?Sized>(
    kernel: &K,
    x: &Point,
    y: &Point,
) -> Result<NormalizedPairing> {
    let l = log_normalized(kernel, x, y)?;
    let magnitude = l.re.exp().min(1.0);
    let phase = if magnitude == 0.0 {
        0.0
    } else {
        super::rem_two_pi(l.im)
    };
    Ok(NormalizedPairing {
        value: C64::from_polar(magnitude, phase),
        magnitude,
        phase,
    })
}
