//! Distances that a reproducing kernel Hilbert space induces on its underlying set.
//!
//! For a kernel `K` on a set `X` with kernel functions `k_x = K(·, x)`, the
//! normalized pairing `⟨k̂_x, k̂_y⟩` measures how close the lines `[k_x]` and
//! `[k_y]` are. Everything here is built on top of that one number:
//!
//! | Quantity | Module |
//! |----------|--------|
//! | kernel families, products, powers, rescalings, direct sums | [`kernels`] |
//! | `δ`, `δ̂`, `δ̌`, `ρ`, `β`, `ρ_n`, curve lengths, inner distances, `ds_BS` | [`metrics`] |
//! | projections, Schatten norms, commutators, Berezin transforms on kernel spans | [`operators`] |
//! | complete Nevanlinna–Pick tests, maximal multipliers, Blaschke-type products | [`npkernels`] |
//! | invariant subspaces, complements, the shape invariant | [`subspaces`] |
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line front-end live in the `rkhs-geometry` crate.
//!
//! ```
//! use rkhs_core::{kernels::Kernel, metrics, Point};
//!
//! let hardy = Kernel::dhb(1.0).unwrap();
//! let d = metrics::delta(&hardy, &Point::real(0.0), &Point::real(0.6)).unwrap();
//! assert!((d - 0.6).abs() < 1e-14);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod kernels;
pub mod linalg;
pub mod metrics;
pub mod npkernels;
pub mod operators;
pub mod point;
pub mod quad;
pub mod subspaces;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use point::{Point, Side};
