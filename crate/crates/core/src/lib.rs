//! Hybrid solver for the stationary Schrödinger equation `ε²ψ″ + a(x)ψ = 0`
//! with a first-order turning point at `x = 0`.
//!
//! Near the turning point the solution is represented by Airy functions
//! (linear `a`) or parabolic cylinder functions (quadratic `a`). On `[x₁, 1]`
//! a second-order WKB-marching scheme carries it on a coarse grid, and a
//! complex scaling enforces the transparent boundary condition at `x = 1`.
//!
//! The coefficient, phase, marching and Runge-Kutta layers are generic over
//! [`Real`]; the special functions and the assembled solutions work in `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod baseline;
pub mod coefficient;
pub mod error;
pub mod experiments;
pub mod fit;
pub mod grid;
pub mod hybrid;
pub mod jet;
pub mod phase;
pub mod scalar;
pub mod specfun;
pub mod wkbmarch;

pub use error::{Error, Result};
pub use scalar::Real;

/// Coefficient in double precision.
pub type Coefficient = coefficient::Coefficient<f64>;
/// Phase table in double precision.
pub type PhaseTable = phase::PhaseTable<f64>;
/// Marching state in double precision.
pub type MarchState = wkbmarch::MarchState<f64>;
/// W-frame vector in double precision.
pub type WVector = wkbmarch::WVector<f64>;
/// Runge-Kutta run record in double precision.
pub type RkRun = baseline::RkRun<f64>;
/// Complex double.
pub type C64 = num_complex::Complex<f64>;
