//! Uniform turning-point asymptotics of `U(−μ²/2, μt√2)`, leading order.

use std::f64::consts::PI;

use super::airy::airy;
use super::pcf::{PcfParams, ScaledPcfPair};
use crate::error::{Error, Result};

/// `ζ(t)` and `φ(t)` of the Airy-type uniform expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningMaps {
    pub zeta: f64,
    pub varphi: f64,
}

const LIMIT_BAND: f64 = 1e-8;
const SERIES_BAND: f64 = 0.25;

/// `(4/3)·2^{-1/2}·s^{-3/2}·(3/4)(arccos t − t√(1−t²))` for `s = 1 − t`, as a series in `s`.
fn reduced_area(s: f64) -> f64 {
    // 2∫₀ˢ √(2v)√(1 − v/2) dv expanded termwise
    let mut binom = 1.0;
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let term = binom * pow / (kf + 1.5);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        binom *= (kf - 0.5) / (kf + 1.0);
        pow *= s / 2.0;
    }
    sum
}

/// The maps `ζ(t)` and `φ(t)` for `t ∈ (−1, 1]`.
pub fn turning_maps(t: f64) -> Result<TurningMaps> {
    if !(t > -1.0 && t <= 1.0) {
        return Err(Error::Domain(format!("turning maps need t in (-1, 1], got {t}")));
    }
    let s = 1.0 - t;
    if s < LIMIT_BAND {
        let zeta = if s == 0.0 {
            0.0
        } else {
            -(1.5 * 2f64.sqrt() * s.powf(1.5) * reduced_area(s)).powf(2.0 / 3.0)
        };
        return Ok(TurningMaps {
            zeta,
            varphi: 2f64.powf(-1.0 / 6.0),
        });
    }
    if s < SERIES_BAND {
        return Ok(maps_series(s));
    }
    Ok(maps_closed(t))
}

fn maps_series(s: f64) -> TurningMaps {
    let c = (1.5 * 2f64.sqrt() * reduced_area(s)).powf(2.0 / 3.0);
    TurningMaps {
        zeta: -c * s,
        varphi: (c / (2.0 - s)).powf(0.25),
    }
}

fn maps_closed(t: f64) -> TurningMaps {
    let w = 1.0 - t * t;
    let area = 0.75 * t.acos() - 0.75 * t * w.sqrt();
    let zeta = -area.powf(2.0 / 3.0);
    TurningMaps {
        zeta,
        varphi: (-zeta / w).powf(0.25),
    }
}

/// `ln h(μ) = −(μ²/4 + 1/4) ln 2 − μ²/4 + (μ²/2 − 1/2) ln μ`
pub fn h_mu_log(mu: f64) -> f64 {
    let m2 = mu * mu;
    -(m2 / 4.0 + 0.25) * std::f64::consts::LN_2 - m2 / 4.0 + (m2 / 2.0 - 0.5) * mu.ln()
}

/// Leading-order uniform expansion of `U/h` and `U′/h` with `f(μ)` set to one.
/// `delta` bounds `t` away from the second turning point.
pub fn pcf_uniform_asymptotic(k1: f64, k2: f64, eps: f64, x: f64, delta: f64) -> Result<ScaledPcfPair> {
    let p = PcfParams::new(k1, k2, eps)?;
    p.check_x(x)?;
    let t = p.t(x);
    if !(t >= -1.0 + delta && t <= 1.0) {
        return Err(Error::Domain(format!("t = {t} outside [-1 + {delta}, 1]")));
    }
    let m = turning_maps(t)?;
    let mu = p.mu();
    let mu13 = mu.cbrt();
    let a = airy(mu13.powi(4) * m.zeta);
    Ok(ScaledPcfPair {
        u_over_h: 2.0 * PI.sqrt() * mu13 * m.varphi * a.ai,
        du_over_h: (2.0 * PI).sqrt() * mu13 * mu13 / m.varphi * a.ai_prime,
        log_h_mu: h_mu_log(mu),
    })
}
