//! Oscillation-resolving reference integrators for the first-order system
//! `d/dx (ψ, εψ′) = ((εψ′)/ε, −a(x)ψ/ε)`: the Dormand-Prince (4,5) pair with
//! step-size control and classical fixed-step RK4.

use std::time::Instant;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::Real;

const SAFETY: f64 = 0.9;
const MIN_STEP: f64 = 1e-14;
const GROW_MAX: f64 = 5.0;
const SHRINK_MIN: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RkMode<T> {
    /// Adaptive Dormand-Prince with equal absolute and relative tolerance.
    Dp45 { tol: T },
    /// Classical RK4 with a fixed step (the last step is shortened).
    Rk4 { step: T },
}

/// Outcome of one integration from `xa` to `xb`.
#[derive(Debug, Clone, PartialEq)]
pub struct RkRun<T> {
    pub mode: RkMode<T>,
    pub accepted: usize,
    pub rejected: usize,
    pub runtime_s: f64,
    /// `(ψ, εψ′)` at the right end.
    pub terminal: [T; 2],
    /// Accepted step points and states, when recording was requested.
    pub trajectory: Vec<(T, [T; 2])>,
}

fn rhs<T: Real, A: Fn(T) -> T>(a: &A, eps: T, x: T, y: [T; 2]) -> [T; 2] {
    [y[1] / eps, -a(x) * y[0] / eps]
}

fn axpy<T: Real>(y: [T; 2], h: T, terms: &[(f64, [T; 2])]) -> [T; 2] {
    let mut out = y;
    for (c, k) in terms {
        let c = T::lit(*c) * h;
        out[0] = out[0] + c * k[0];
        out[1] = out[1] + c * k[1];
    }
    out
}

fn rk4_step<T: Real, A: Fn(T) -> T>(a: &A, eps: T, x: T, y: [T; 2], h: T) -> [T; 2] {
    let half = T::lit(0.5) * h;
    let k1 = rhs(a, eps, x, y);
    let k2 = rhs(a, eps, x + half, axpy(y, h, &[(0.5, k1)]));
    let k3 = rhs(a, eps, x + half, axpy(y, h, &[(0.5, k2)]));
    let k4 = rhs(a, eps, x + h, axpy(y, h, &[(1.0, k3)]));
    axpy(
        y,
        h,
        &[(1.0 / 6.0, k1), (1.0 / 3.0, k2), (1.0 / 3.0, k3), (1.0 / 6.0, k4)],
    )
}

// Dormand-Prince tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step: fifth-order solution, error estimate, and the FSAL slope.
fn dp_step<T: Real, A: Fn(T) -> T>(a: &A, eps: T, x: T, y: [T; 2], k1: [T; 2], h: T) -> ([T; 2], [T; 2], [T; 2]) {
    let at = |i: usize| x + T::lit(C[i]) * h;
    let k2 = rhs(a, eps, at(1), axpy(y, h, &[(A2[0], k1)]));
    let k3 = rhs(a, eps, at(2), axpy(y, h, &[(A3[0], k1), (A3[1], k2)]));
    let k4 = rhs(a, eps, at(3), axpy(y, h, &[(A4[0], k1), (A4[1], k2), (A4[2], k3)]));
    let k5 = rhs(
        a,
        eps,
        at(4),
        axpy(y, h, &[(A5[0], k1), (A5[1], k2), (A5[2], k3), (A5[3], k4)]),
    );
    let k6 = rhs(
        a,
        eps,
        at(5),
        axpy(y, h, &[(A6[0], k1), (A6[1], k2), (A6[2], k3), (A6[3], k4), (A6[4], k5)]),
    );
    let y5 = axpy(y, h, &[(B5[0], k1), (B5[2], k3), (B5[3], k4), (B5[4], k5), (B5[5], k6)]);
    let k7 = rhs(a, eps, at(6), y5);
    let ks = [k1, k2, k3, k4, k5, k6, k7];
    let mut err = [T::zero(); 2];
    for (i, k) in ks.iter().enumerate() {
        let d = T::lit(B5[i] - B4[i]) * h;
        err[0] = err[0] + d * k[0];
        err[1] = err[1] + d * k[1];
    }
    (y5, err, k7)
}

/// Integrates `ε²ψ″ + a(x)ψ = 0` from `xa` to `xb` starting at `ic = (ψ, εψ′)(xa)`.
pub fn rk_solve_fn<T: Real, A: Fn(T) -> T>(
    a: A,
    eps: T,
    xa: T,
    xb: T,
    ic: [T; 2],
    mode: RkMode<T>,
    record: bool,
) -> Result<RkRun<T>> {
    if !(eps > T::zero() && xb > xa) {
        return Err(Error::Domain(format!(
            "need eps > 0 and xb > xa (eps={eps}, [{xa}, {xb}])"
        )));
    }
    let start = Instant::now();
    let mut trajectory = Vec::new();
    if record {
        trajectory.push((xa, ic));
    }
    let (mut x, mut y) = (xa, ic);
    let (mut accepted, mut rejected) = (0usize, 0usize);
    match mode {
        RkMode::Rk4 { step } => {
            if !(step > T::zero()) {
                return Err(Error::Domain(format!("rk4 step must be positive, got {step}")));
            }
            while x < xb {
                let h = step.min(xb - x);
                y = rk4_step(&a, eps, x, y, h);
                x = if xb - x <= step { xb } else { x + h };
                accepted += 1;
                if record {
                    trajectory.push((x, y));
                }
            }
        }
        RkMode::Dp45 { tol } => {
            let mut h = T::lit(0.01) * eps.min(xb - xa);
            let mut k1 = rhs(&a, eps, x, y);
            let fifth = T::lit(0.2);
            while x < xb {
                if h < T::lit(MIN_STEP) {
                    return Err(Error::StepUnderflow { x: x.to_f64_lossy() });
                }
                let last = x + h >= xb;
                let hs = if last { xb - x } else { h };
                let (yn, e, k7) = dp_step(&a, eps, x, y, k1, hs);
                let mut sq = T::zero();
                for i in 0..2 {
                    let sc = tol + tol * y[i].abs().max(yn[i].abs());
                    sq = sq + (e[i] / sc).powi(2);
                }
                let err = (sq / T::lit(2.0)).sqrt();
                let factor = if err == T::zero() {
                    T::lit(GROW_MAX)
                } else {
                    (T::lit(SAFETY) * err.powf(-fifth))
                        .max(T::lit(SHRINK_MIN))
                        .min(T::lit(GROW_MAX))
                };
                if err <= T::one() {
                    x = if last { xb } else { x + hs };
                    y = yn;
                    k1 = k7;
                    accepted += 1;
                    if record {
                        trajectory.push((x, y));
                    }
                    h = hs * factor;
                } else {
                    rejected += 1;
                    h = hs * factor.min(T::one());
                }
            }
        }
    }
    Ok(RkRun {
        mode,
        accepted,
        rejected,
        runtime_s: start.elapsed().as_secs_f64(),
        terminal: y,
        trajectory,
    })
}

/// Integrates across the body `[x₁, 1]` of a coefficient.
pub fn rk_solve<T: Real>(c: &Coefficient<T>, eps: T, ic: [T; 2], mode: RkMode<T>, record: bool) -> Result<RkRun<T>> {
    rk_solve_fn(|x| c.a(x), eps, c.x1, T::one(), ic, mode, record)
}
