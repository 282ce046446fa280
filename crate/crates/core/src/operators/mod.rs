//! Finite-rank operators on spans of kernel functions.
//!
//! A [`SpanOperator`] over points `x_1, …, x_n` stores coefficients `C` with
//! `A = Σ C[i][j] |k_{x_i}⟩⟨k_{x_j}|`. With `G = L Lᴴ` the Gram matrix, the map
//! `a ↦ Lᴴ a` takes coefficient vectors to orthonormal coordinates, in which `A`
//! is the matrix `M = Lᴴ C L`. Norms, spectra and traces are always read off `M`.

use alloc::sync::Arc;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::kernels::{gram, GramMatrix, ReproducingKernel};
use crate::linalg::{
    cholesky_with_jitter, hermitian_defect, hermitian_eigenvalues, singular_values, trace, CMatrix,
    Factor,
};
use crate::metrics::{curve_length, delta, Curve, CurveLength, KernelMetric, MetricKind};
use crate::{Error, Point, Result, C64};

/// Kernel functions at distinct points together with their Gram factorization.
#[derive(Debug, Clone)]
pub struct SpanBasis<K> {
    kernel: K,
    gram: GramMatrix,
    factor: Factor,
}

impl<K: ReproducingKernel> SpanBasis<K> {
    pub fn new(kernel: K, points: &[Point]) -> Result<Arc<Self>> {
        if points.is_empty() {
            return Err(Error::Degenerate("a span basis needs at least one point"));
        }
        let gram = gram(&kernel, points)?;
        let factor = cholesky_with_jitter(&gram.matrix)?;
        Ok(Arc::new(SpanBasis {
            kernel,
            gram,
            factor,
        }))
    }

    pub fn kernel(&self) -> &K {
        &self.kernel
    }

    pub fn points(&self) -> &[Point] {
        &self.gram.points
    }

    pub fn len(&self) -> usize {
        self.gram.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gram.points.is_empty()
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram.matrix
    }

    /// Cholesky factor and conditioning report.
    pub fn factor(&self) -> &Factor {
        &self.factor
    }

    pub fn index_of(&self, x: &Point) -> Option<usize> {
        self.gram.points.iter().position(|p| p == x)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(alloc::format!(
                "basis index {i} out of range for {} points",
                self.len()
            )))
        }
    }

    /// `(k_{x_i}(y))_i = (K(y, x_i))_i`.
    fn evaluations(&self, y: &Point) -> Result<Vec<C64>> {
        self.points()
            .iter()
            .map(|x| self.kernel.eval(y, x))
            .collect()
    }

    /// `sup { |f(y)| : f in the span, ‖f‖ ≤ 1 }`; equals `‖k_y‖` when `y` is a basis point.
    pub fn max_point_value(&self, y: &Point) -> Result<f64> {
        let v = CMatrix::from_column_slice(self.len(), 1, &self.evaluations(y)?);
        let sol = self.factor.solve(&v.map(|z| z.conj()));
        let q = (v.transpose() * sol)[(0, 0)];
        Ok(q.re.max(0.0).sqrt())
    }
}

/// `A = Σ C[i][j] |k_{x_i}⟩⟨k_{x_j}|` on a shared [`SpanBasis`].
#[derive(Debug, Clone)]
pub struct SpanOperator<K> {
    basis: Arc<SpanBasis<K>>,
    coeffs: CMatrix,
    orthonormal: CMatrix,
}

/// Relative tolerance for treating `M` as Hermitian.
pub const SELF_ADJOINT_TOLERANCE: f64 = 1e-12;

impl<K: ReproducingKernel> SpanOperator<K> {
    pub fn new(basis: Arc<SpanBasis<K>>, coeffs: CMatrix) -> Result<Self> {
        let n = basis.len();
        if coeffs.nrows() != n || coeffs.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coeffs.nrows().max(coeffs.ncols()),
            });
        }
        let l = &basis.factor.lower;
        let orthonormal = l.adjoint() * &coeffs * l;
        Ok(SpanOperator {
            basis,
            coeffs,
            orthonormal,
        })
    }

    pub fn zero(basis: Arc<SpanBasis<K>>) -> Self {
        let n = basis.len();
        SpanOperator::new(basis, CMatrix::zeros(n, n)).expect("square zero matrix")
    }

    /// The identity on the span, `C = G⁻¹`.
    pub fn identity(basis: Arc<SpanBasis<K>>) -> Self {
        let n = basis.len();
        let inv = basis.factor.solve(&CMatrix::identity(n, n));
        SpanOperator::new(basis, inv).expect("square inverse")
    }

    pub fn basis(&self) -> &Arc<SpanBasis<K>> {
        &self.basis
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    /// `M = Lᴴ C L`, the operator in orthonormal coordinates.
    pub fn orthonormal_matrix(&self) -> &CMatrix {
        &self.orthonormal
    }

    pub fn is_self_adjoint(&self) -> bool {
        hermitian_defect(&self.orthonormal) <= SELF_ADJOINT_TOLERANCE
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "operators live on different span bases".into(),
            ))
        }
    }

    /// `A B`: coefficients `C_A G C_B`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        SpanOperator::new(
            self.basis.clone(),
            &self.coeffs * self.basis.gram() * &other.coeffs,
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        SpanOperator::new(self.basis.clone(), &self.coeffs + &other.coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        SpanOperator::new(self.basis.clone(), &self.coeffs - &other.coeffs)
    }

    pub fn scale(&self, s: C64) -> Self {
        SpanOperator::new(self.basis.clone(), &self.coeffs * s).expect("same shape")
    }

    /// `A*`: coefficients `Cᴴ`.
    pub fn adjoint(&self) -> Self {
        SpanOperator::new(self.basis.clone(), self.coeffs.adjoint()).expect("same shape")
    }

    /// Coefficients of `A f` for `f = Σ a_i k_{x_i}`.
    pub fn apply(&self, a: &[C64]) -> Result<Vec<C64>> {
        let n = self.basis.len();
        if a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        let v = CMatrix::from_column_slice(n, 1, a);
        Ok((&self.coeffs * self.basis.gram() * v)
            .iter()
            .copied()
            .collect())
    }

    /// Singular values of `A`, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.orthonormal)
    }

    /// Eigenvalues of a self-adjoint `A`, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_self_adjoint() {
            return Err(Error::InvalidParameter(
                "eigenvalues requested for a non-self-adjoint operator".into(),
            ));
        }
        Ok(hermitian_eigenvalues(&self.orthonormal))
    }

    pub fn trace(&self) -> C64 {
        trace(&self.orthonormal)
    }

    /// Operator norm.
    pub fn norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Schatten `p`-norm; `p = f64::INFINITY` is the operator norm and `p = 1` the trace norm.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        schatten_from_singular_values(&self.singular_values(), p)
    }

    /// `⟨A k̂_x, k̂_x⟩ = Σ C[i][j] K(x_j, x) K(x, x_i) / K(x, x)`.
    pub fn berezin(&self, x: &Point) -> Result<C64> {
        let kernel = &self.basis.kernel;
        let kxx = kernel.eval(x, x)?.re;
        if kxx.is_nan() || kxx <= 0.0 {
            return Err(Error::UndefinedPairing);
        }
        // k_{x_i}(x) = K(x, x_i); ⟨k_x, k_{x_j}⟩ = K(x_j, x) = conj K(x, x_j)
        let v = self.basis.evaluations(x)?;
        let mut acc = C64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += self.coeffs[(i, j)] * vj.conj() * vi;
            }
        }
        let value = acc / kxx;
        if self.is_self_adjoint()
            && value.im.abs() > 1e-12 * value.re.abs().max(1.0) * self.condition_scale()
        {
            return Err(Error::Inconsistent {
                numeric: value.im,
                analytic: 0.0,
            });
        }
        Ok(value)
    }

    // imaginary parts of Berezin values of self-adjoint operators grow with the
    // conditioning of the coefficient representation
    fn condition_scale(&self) -> f64 {
        let c = self.coeffs.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let g = self
            .basis
            .gram()
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        (c * g * self.basis.len() as f64).max(1.0)
    }
}

fn schatten_from_singular_values(s: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(alloc::format!(
            "Schatten exponent must be >= 1, got {p}"
        )));
    }
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or(0.0));
    }
    let max = s.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return Ok(0.0);
    }
    Ok(max
        * s.iter()
            .map(|v| (v / max).powf(p))
            .sum::<f64>()
            .powf(1.0 / p))
}

/// Orthogonal projection onto `k_{x_i}`: `C` has the single entry `1 / K(x_i, x_i)`.
pub fn projection<K: ReproducingKernel>(
    basis: &Arc<SpanBasis<K>>,
    index: usize,
) -> Result<SpanOperator<K>> {
    basis.check_index(index)?;
    let kxx = basis.gram()[(index, index)].re;
    if kxx.is_nan() || kxx <= 0.0 {
        return Err(Error::UndefinedPairing);
    }
    let n = basis.len();
    let mut c = CMatrix::zeros(n, n);
    c[(index, index)] = C64::new(1.0 / kxx, 0.0);
    SpanOperator::new(basis.clone(), c)
}

/// `‖P_{x_i} P_{x_j} - P_{x_j} P_{x_i}‖`.
pub fn commutator_norm<K: ReproducingKernel>(
    basis: &Arc<SpanBasis<K>>,
    i: usize,
    j: usize,
) -> Result<f64> {
    let a = projection(basis, i)?;
    let b = projection(basis, j)?;
    Ok(a.compose(&b)?.sub(&b.compose(&a)?)?.norm())
}

/// Norm of the difference of the rank-one Hankel forms at `x_i` and `x_j`, with
/// its trace-class analogue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelGap {
    pub norm: f64,
    pub trace_norm: f64,
}

/// `‖L_{x_i} - L_{x_j}‖` through `β*β = P_x + P_y - P_x P_y - P_y P_x`.
pub fn hankel_gap_norm<K: ReproducingKernel>(
    basis: &Arc<SpanBasis<K>>,
    i: usize,
    j: usize,
) -> Result<HankelGap> {
    let px = projection(basis, i)?;
    let py = projection(basis, j)?;
    let bb = px
        .add(&py)?
        .sub(&px.compose(&py)?)?
        .sub(&py.compose(&px)?)?;
    let eig = hermitian_eigenvalues(bb.orthonormal_matrix());
    let roots: Vec<f64> = eig.iter().map(|v| v.max(0.0).sqrt()).collect();
    Ok(HankelGap {
        norm: roots.iter().copied().fold(0.0, f64::max),
        trace_norm: roots.iter().sum(),
    })
}

/// Restriction of `M_m*` to the span: `k_{x_i} ↦ conj(m(x_i)) k_{x_i}`, i.e.
/// `C = diag(conj m) G⁻¹`.
pub fn multiplier_adjoint_action<K: ReproducingKernel>(
    basis: &Arc<SpanBasis<K>>,
    symbol: &[C64],
) -> Result<SpanOperator<K>> {
    let n = basis.len();
    if symbol.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: symbol.len(),
        });
    }
    let inv = basis.factor.solve(&CMatrix::identity(n, n));
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        symbol.iter().map(|m| m.conj()),
    ));
    SpanOperator::new(basis.clone(), d * inv)
}

/// The unit vector `F = (k_w - K(z, w) / K(z, z) · k_z) / (‖k_w‖ δ(z, w))`,
/// which vanishes at `z` and maximizes `Re F(w)` there.
#[derive(Debug, Clone)]
pub struct Extremal<'k, K: ?Sized> {
    kernel: &'k K,
    pub z: Point,
    pub w: Point,
    /// Coefficients of `k_z` and `k_w`.
    pub coeff_z: C64,
    pub coeff_w: C64,
    /// `F(w) = ‖k_w‖ δ(z, w)`.
    pub value_at_w: f64,
    /// `‖F‖` computed from the Gram matrix.
    pub norm: f64,
}

impl<K: ReproducingKernel + ?Sized> Extremal<'_, K> {
    pub fn eval(&self, x: &Point) -> Result<C64> {
        Ok(self.coeff_z * self.kernel.eval(x, &self.z)?
            + self.coeff_w * self.kernel.eval(x, &self.w)?)
    }
}

pub fn extremal_function<'k, K: ReproducingKernel + ?Sized>(
    kernel: &'k K,
    z: &Point,
    w: &Point,
) -> Result<Extremal<'k, K>> {
    let d = delta(kernel, z, w)?;
    if d == 0.0 {
        return Err(Error::Degenerate(
            "extremal function for indistinguishable points",
        ));
    }
    let kzz = kernel.eval(z, z)?.re;
    let kww = kernel.eval(w, w)?.re;
    let kzw = kernel.eval(z, w)?;
    let scale = 1.0 / (kww.sqrt() * d);
    let coeff_w = C64::new(scale, 0.0);
    let coeff_z = -kzw / kzz * scale;
    // ‖a k_z + b k_w‖² = |a|² K(z,z) + |b|² K(w,w) + 2 Re(a b̄ K(w,z))
    let kwz = kzw.conj();
    let norm_sq = coeff_z.norm_sqr() * kzz
        + coeff_w.norm_sqr() * kww
        + 2.0 * (coeff_z * coeff_w.conj() * kwz).re;
    Ok(Extremal {
        kernel,
        z: z.clone(),
        w: w.clone(),
        coeff_z,
        coeff_w,
        value_at_w: kww.sqrt() * d,
        norm: norm_sq.max(0.0).sqrt(),
    })
}

/// Total variation of the Berezin transform along a curve, with the bound
/// `2 ‖A‖ ℓ_δ(γ)` it must respect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Variation {
    pub variation: CurveLength,
    pub delta_length: CurveLength,
    pub bound: f64,
}

pub fn variation_along_curve<K: ReproducingKernel>(
    op: &SpanOperator<K>,
    curve: &Curve<'_>,
) -> Result<Variation> {
    let jump =
        |x: &Point, y: &Point| -> Result<f64> { Ok((op.berezin(x)? - op.berezin(y)?).norm()) };
    let variation = curve_length(&jump, curve)?;
    let delta_length = curve_length(
        &KernelMetric::new(MetricKind::Delta, op.basis.kernel()),
        curve,
    )?;
    let bound = 2.0 * op.norm() * delta_length.value;
    if variation.value > bound + 1e-8 {
        return Err(Error::BoundViolated {
            value: variation.value,
            bound,
        });
    }
    Ok(Variation {
        variation,
        delta_length,
        bound,
    })
}

#[cfg(test)]
mod tests;
