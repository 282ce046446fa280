use alloc::format;
use alloc::vec::Vec;

use crate::linalg::{self, CMatrix};
use crate::point::PointView;
use crate::{Error, Point, Result, C64};

/// A kernel given by an explicit Hermitian PSD matrix on a finite point list.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomKernel {
    points: Vec<Point>,
    matrix: CMatrix,
}

impl CustomKernel {
    pub fn new(points: Vec<Point>, matrix: CMatrix) -> Result<Self> {
        let n = points.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.nrows(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if points[i] == points[j] {
                    return Err(Error::DuplicatePoint(j, i));
                }
            }
        }
        let defect = linalg::hermitian_defect(&matrix);
        if defect > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "custom kernel matrix is not Hermitian (relative defect {defect:e})"
            )));
        }
        let psd = linalg::psd_report(&matrix);
        if !psd.is_psd {
            return Err(Error::InvalidParameter(format!(
                "custom kernel matrix is not PSD (min eigenvalue {:e})",
                psd.min_eigenvalue
            )));
        }
        Ok(CustomKernel { points, matrix })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub(crate) fn index_of(&self, x: PointView<'_>) -> Option<usize> {
        self.points
            .iter()
            .position(|p| p.coords() == x.coords && p.sides() == x.sides)
    }

    pub(crate) fn check(&self, x: PointView<'_>) -> Result<usize> {
        self.index_of(x).ok_or(Error::Domain {
            coordinate: 0,
            value: x.coords.first().copied().unwrap_or(C64::new(f64::NAN, 0.0)),
            reason: "not one of the custom kernel's points",
        })
    }

    pub(crate) fn entry(&self, i: usize, j: usize) -> C64 {
        self.matrix[(i, j)]
    }
}
