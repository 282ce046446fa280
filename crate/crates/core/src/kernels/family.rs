//! Closed forms for the scalar families. Kernels of the form `K(x, y) = F(x ȳ)`
//! share one jet formula; the finite-length example is handled separately.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::C64;

use super::KernelJet;

/// Below this `|u|` the Dirichlet kernel `(1/u) log(1/(1-u))` is summed as a series.
pub(crate) const DIRICHLET_SERIES_RADIUS: f64 = 0.1;

/// `F(u)`, `F'(u)`, `F''(u)` for a kernel `K(x, y) = F(x ȳ)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Profile {
    pub f: C64,
    pub df: C64,
    pub d2f: C64,
}

impl Profile {
    /// Jet of `F(x ȳ)` at `(x, y)`.
    pub fn jet(&self, x: C64, y: C64) -> KernelJet {
        let u = x * y.conj();
        KernelJet {
            value: self.f,
            dx: self.df * y.conj(),
            dyb: self.df * x,
            dxdyb: self.df + self.d2f * u,
        }
    }
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `(1 - u)^{-alpha}`, exact powers for small integer exponents.
pub(crate) fn dhb_value(alpha: f64, u: C64) -> C64 {
    let w = one() - u;
    if alpha.fract() == 0.0 && alpha <= 32.0 {
        w.powi(-(alpha as i32))
    } else {
        (-alpha * w.ln()).exp()
    }
}

pub(crate) fn dhb_log(alpha: f64, u: C64) -> C64 {
    -alpha * (one() - u).ln()
}

pub(crate) fn dhb_profile(alpha: f64, u: C64) -> Profile {
    let w = one() - u;
    let f = dhb_value(alpha, u);
    Profile {
        f,
        df: f * alpha / w,
        d2f: f * (alpha * (alpha + 1.0)) / (w * w),
    }
}

/// `(1/u) log(1/(1-u))`, continuous at `u = 0` with value 1.
pub(crate) fn dirichlet_value(u: C64) -> C64 {
    dirichlet_profile(u).f
}

pub(crate) fn dirichlet_profile(u: C64) -> Profile {
    if u.norm() < DIRICHLET_SERIES_RADIUS {
        // Σ uⁿ/(n+1) and its first two derivatives; 0.1^40 is far below f64 resolution.
        let mut f = C64::new(0.0, 0.0);
        let mut df = C64::new(0.0, 0.0);
        let mut d2f = C64::new(0.0, 0.0);
        for n in (0..40).rev() {
            let nf = n as f64;
            f = f * u + 1.0 / (nf + 1.0);
            if n >= 1 {
                df = df * u + nf / (nf + 1.0);
            }
            if n >= 2 {
                d2f = d2f * u + nf * (nf - 1.0) / (nf + 1.0);
            }
        }
        Profile { f, df, d2f }
    } else {
        let w = one() - u;
        let l = -w.ln();
        let f = l / u;
        let df = one() / (u * w) - l / (u * u);
        let d2f = one() / (u * w * w) - 2.0 / (u * u * w) + 2.0 * l / (u * u * u);
        Profile { f, df, d2f }
    }
}

pub(crate) fn fock_profile(beta: f64, u: C64) -> Profile {
    let f = (beta * u).exp();
    Profile {
        f,
        df: f * beta,
        d2f: f * (beta * beta),
    }
}

/// `K(x, y) = (2 - x - ȳ) / (1 - x ȳ)`.
pub(crate) fn finite_length_value(x: C64, y: C64) -> C64 {
    (C64::new(2.0, 0.0) - x - y.conj()) / (one() - x * y.conj())
}

pub(crate) fn finite_length_log(x: C64, y: C64) -> C64 {
    // both factors have positive real part on the disk
    (C64::new(2.0, 0.0) - x - y.conj()).ln() - (one() - x * y.conj()).ln()
}

pub(crate) fn finite_length_jet(x: C64, y: C64) -> KernelJet {
    let yb = y.conj();
    let num = C64::new(2.0, 0.0) - x - yb;
    let den = one() - x * yb;
    let den2 = den * den;
    KernelJet {
        value: num / den,
        dx: (num * yb - den) / den2,
        dyb: (num * x - den) / den2,
        dxdyb: (x - yb + num) / den2 + 2.0 * x * (num * yb - den) / (den2 * den),
    }
}

/// `|z - w|² / |1 - z̄ w|²` without cancellation.
pub(crate) fn rho_disk_sq(z: C64, w: C64) -> f64 {
    (z - w).norm_sqr() / (one() - z.conj() * w).norm_sqr()
}

/// `1 - (1 - |z|²)(1 - |w|²) / |1 - ⟨z, w⟩|²` on the unit ball, written as
/// `(|z - w|² - Σ_{i<j} |z_i h_j - z_j h_i|²) / |1 - ⟨z, w⟩|²` with `h = w - z`
/// so that nearby points do not cancel.
pub(crate) fn rho_ball_sq(z: &[C64], w: &[C64]) -> f64 {
    let mut inner = C64::new(0.0, 0.0);
    let mut diff = 0.0;
    for (a, b) in z.iter().zip(w) {
        inner += a * b.conj();
        diff += (a - b).norm_sqr();
    }
    let mut wedge = 0.0;
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            let hi = w[i] - z[i];
            let hj = w[j] - z[j];
            wedge += (z[i] * hj - z[j] * hi).norm_sqr();
        }
    }
    let num = (diff - wedge).max(0.0);
    (num / (one() - inner).norm_sqr()).min(1.0)
}

/// `1 - (1 - a)^p` for `a ∈ [0, 1]`.
pub(crate) fn defect_power(a: f64, p: f64) -> f64 {
    if a >= 1.0 {
        return 1.0;
    }
    -(p * (-a).ln_1p()).exp_m1()
}
