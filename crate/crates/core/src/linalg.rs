//! Dense Hermitian helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Float;

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;

/// `(A + Aᴴ) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * C64::new(0.5, 0.0)
}

/// Largest entrywise deviation from Hermitian symmetry, relative to the largest entry.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let scale = a.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if scale == 0.0 {
        return 0.0;
    }
    let diff = a - a.adjoint();
    diff.iter().fold(0.0_f64, |m, z| m.max(z.norm())) / scale
}

/// Eigenvalues of the Hermitian part of `a`, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let eig = hermitian_part(a).symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|x, y| x.total_cmp(y));
    vals
}

/// Smallest eigenvalue of the Hermitian part of `a` with a unit eigenvector.
pub fn min_eigenpair(a: &CMatrix) -> (f64, Vec<C64>) {
    let eig = hermitian_part(a).symmetric_eigen();
    let (idx, val) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("non-empty matrix");
    (val, eig.eigenvectors.column(idx).iter().copied().collect())
}

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.nrows() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().copied().sum()
}

/// PSD verdict with tolerance `-1e-10 · |trace|` on the smallest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdReport {
    pub min_eigenvalue: f64,
    pub trace: f64,
    pub is_psd: bool,
}

pub const PSD_RELATIVE_TOLERANCE: f64 = 1e-10;

pub fn psd_report(a: &CMatrix) -> PsdReport {
    let vals = hermitian_eigenvalues(a);
    let min = vals.first().copied().unwrap_or(0.0);
    let tr = trace(a).re;
    PsdReport {
        min_eigenvalue: min,
        trace: tr,
        is_psd: min >= -PSD_RELATIVE_TOLERANCE * tr.abs(),
    }
}

/// Lower Cholesky factor, with a diagonal shift when the matrix is close to singular.
#[derive(Debug, Clone)]
pub struct Factor {
    pub lower: CMatrix,
    pub jitter: f64,
    pub min_eigenvalue: f64,
    /// `λ_max / λ_min` of the unshifted matrix (infinite when `λ_min ≤ 0`).
    pub condition: f64,
}

impl Factor {
    pub fn is_jittered(&self) -> bool {
        self.jitter > 0.0
    }

    /// Solves `(L Lᴴ) x = b`.
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let y = self
            .lower
            .solve_lower_triangular(b)
            .expect("nonzero Cholesky diagonal");
        self.lower
            .adjoint()
            .solve_upper_triangular(&y)
            .expect("nonzero Cholesky diagonal")
    }
}

pub const JITTER_RELATIVE: f64 = 1e-12;

/// Cholesky factorization of a Hermitian PSD matrix. If the smallest eigenvalue
/// is below `1e-12 · trace`, `1e-12 · trace` is added to the diagonal and the
/// shift is recorded in the returned [`Factor`].
pub fn cholesky_with_jitter(g: &CMatrix) -> Result<Factor> {
    let g = hermitian_part(g);
    let vals = hermitian_eigenvalues(&g);
    let min = vals.first().copied().unwrap_or(0.0);
    let max = vals.last().copied().unwrap_or(0.0);
    let tr = trace(&g).re;
    let condition = if min > 0.0 {
        max / min
    } else {
        f64::infinity()
    };
    let mut jitter = 0.0;
    let mut m = g.clone();
    if min < JITTER_RELATIVE * tr {
        jitter = JITTER_RELATIVE * tr;
        for i in 0..m.nrows() {
            m[(i, i)] += C64::new(jitter, 0.0);
        }
    }
    let chol = m.cholesky().ok_or(Error::Conditioning {
        min_eigenvalue: min,
    })?;
    Ok(Factor {
        lower: chol.l(),
        jitter,
        min_eigenvalue: min,
        condition,
    })
}
