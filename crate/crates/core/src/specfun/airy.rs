//! Airy functions `Ai`, `Ai′` (and `Bi`, `Bi′`) in double precision with
//! double-double internals.
//!
//! Three paths cover the real line: the Maclaurin series on
//! `[SERIES_NEG, SERIES_POS]`, the oscillatory expansion in modulus-phase
//! form below, and the exponential expansion above.

use twofloat::TwoFloat;

/// Left end of the series window.
pub const SERIES_NEG: f64 = -12.0;
/// Right end of the series window.
pub const SERIES_POS: f64 = 9.0;

const AI0: (f64, f64) = (0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: (f64, f64) = (0.2588194037928068, -2.522243111610832e-17);
const FRAC_PI_4_DD: (f64, f64) = (std::f64::consts::FRAC_PI_4, 3.061616997868383e-17);
const INV_SQRT_PI: f64 = 0.5641895835477563;
const MAX_TERMS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub ai_prime: f64,
}

fn dd(p: (f64, f64)) -> TwoFloat {
    TwoFloat::new_add(p.0, p.1)
}

/// The four Maclaurin sums `f, g, f′, g′` with `Ai = c₁f − c₂g`, `Bi = √3(c₁f + c₂g)`.
fn maclaurin(z: f64) -> [TwoFloat; 4] {
    let zz = TwoFloat::new_mul(z, z);
    let z3 = zz * z;
    let mut t = TwoFloat::from(1.0);
    let mut s = TwoFloat::from(z);
    let mut p = zz / 2.0;
    let mut q = TwoFloat::from(1.0);
    let mut f = t;
    let mut g = s;
    let mut fp = p;
    let mut gp = q;
    for k in 1..400usize {
        let k3 = (3 * k) as f64;
        t = t * z3 / ((k3 - 1.0) * k3);
        s = s * z3 / (k3 * (k3 + 1.0));
        q = q * z3 / (k3 * (k3 - 2.0));
        if k >= 2 {
            p = p * z3 / ((k3 - 3.0) * (k3 - 1.0));
            fp += p;
        }
        f += t;
        g += s;
        gp += q;
        let tail = t.hi().abs() + s.hi().abs() + p.hi().abs() + q.hi().abs();
        let scale = f.hi().abs() + g.hi().abs() + fp.hi().abs() + gp.hi().abs();
        if k > 2 && tail < 1e-34 * scale {
            break;
        }
    }
    [f, g, fp, gp]
}

/// Series path, accurate on the series window.
pub fn airy_series(z: f64) -> AiryPair {
    let [f, g, fp, gp] = maclaurin(z);
    let (c1, c2) = (dd(AI0), dd(MINUS_AIP0));
    AiryPair {
        ai: (c1 * f - c2 * g).hi(),
        ai_prime: (c1 * fp - c2 * gp).hi(),
    }
}

/// Coefficients `u_k` of the Airy asymptotic expansions.
fn u_coeffs() -> [f64; MAX_TERMS] {
    let mut u = [0.0; MAX_TERMS];
    u[0] = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn v_coeff(u: &[f64; MAX_TERMS], k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    }
}

/// Even and odd parts `(Σ(−1)^k c_{2k}ξ^{-2k}, Σ(−1)^k c_{2k+1}ξ^{-2k-1})`,
/// truncated at the smallest term.
fn oscillatory_sums(c: impl Fn(usize) -> f64, xi: f64) -> (f64, f64) {
    let (mut even, mut odd) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut pw = 1.0;
    for j in 0..MAX_TERMS {
        let term = c(j) * pw;
        if term.abs() > last || term.abs() < 1e-20 {
            break;
        }
        last = term.abs();
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            even += sign * term;
        } else {
            odd += sign * term;
        }
        pw /= xi;
    }
    (even, odd)
}

fn alternating_sum(c: impl Fn(usize) -> f64, xi: f64, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut pw = 1.0;
    for j in 0..MAX_TERMS {
        let term = c(j) * pw;
        if term.abs() > last || term.abs() < 1e-20 {
            break;
        }
        last = term.abs();
        sum += if alternate && j % 2 == 1 { -term } else { term };
        pw /= xi;
    }
    sum
}

/// `ξ − π/4` for `ξ = (2/3)x^{3/2}`, in double-double.
fn shifted_phase(x: f64) -> (TwoFloat, f64) {
    let sx = TwoFloat::from(x).sqrt();
    let xi = sx * x * TwoFloat::new_div(2.0, 3.0);
    (xi - dd(FRAC_PI_4_DD), xi.hi())
}

/// Oscillatory expansion for `z < 0`, returned as `(Ai, Ai′, Bi, Bi′)`.
fn negative_asymptotic(z: f64) -> [f64; 4] {
    let x = -z;
    let u = u_coeffs();
    let (theta, xi) = shifted_phase(x);
    let (p, q) = oscillatory_sums(|k| u[k], xi);
    let (r, s) = oscillatory_sums(|k| v_coeff(&u, k), xi);
    let chi_a = q.atan2(p);
    let chi_b = s.atan2(r);
    let m_a = p.hypot(q);
    let m_b = r.hypot(s);
    let (sa, ca) = (theta - chi_a).sin_cos();
    let (sb, cb) = (theta - chi_b).sin_cos();
    let x4 = x.powf(0.25);
    [
        INV_SQRT_PI / x4 * m_a * ca.hi(),
        INV_SQRT_PI * x4 * m_b * sb.hi(),
        -INV_SQRT_PI / x4 * m_a * sa.hi(),
        INV_SQRT_PI * x4 * m_b * cb.hi(),
    ]
}

/// Exponential expansion for `z > 0`, returned as `(Ai, Ai′, Bi, Bi′)`.
fn positive_asymptotic(z: f64) -> [f64; 4] {
    let u = u_coeffs();
    let xi = 2.0 / 3.0 * z * z.sqrt();
    let z4 = z.powf(0.25);
    let dec = (-xi).exp();
    let grow = xi.exp();
    let su = alternating_sum(|k| u[k], xi, true);
    let sv = alternating_sum(|k| v_coeff(&u, k), xi, true);
    let gu = alternating_sum(|k| u[k], xi, false);
    let gv = alternating_sum(|k| v_coeff(&u, k), xi, false);
    [
        0.5 * INV_SQRT_PI / z4 * dec * su,
        -0.5 * INV_SQRT_PI * z4 * dec * sv,
        INV_SQRT_PI / z4 * grow * gu,
        INV_SQRT_PI * z4 * grow * gv,
    ]
}

/// Asymptotic path for either sign of `z` (`z ≠ 0`).
pub fn airy_asymptotic(z: f64) -> AiryPair {
    let v = if z < 0.0 {
        negative_asymptotic(z)
    } else {
        positive_asymptotic(z)
    };
    AiryPair {
        ai: v[0],
        ai_prime: v[1],
    }
}

/// `Ai(z)` and `Ai′(z)`.
pub fn airy(z: f64) -> AiryPair {
    if (SERIES_NEG..=SERIES_POS).contains(&z) {
        airy_series(z)
    } else {
        airy_asymptotic(z)
    }
}

/// `Bi(z)` and `Bi′(z)` as an [`AiryPair`].
pub fn airy_bi(z: f64) -> AiryPair {
    if (SERIES_NEG..=SERIES_POS).contains(&z) {
        let [f, g, fp, gp] = maclaurin(z);
        let (c1, c2) = (dd(AI0), dd(MINUS_AIP0));
        let r3 = 3f64.sqrt();
        AiryPair {
            ai: r3 * (c1 * f + c2 * g).hi(),
            ai_prime: r3 * (c1 * fp + c2 * gp).hi(),
        }
    } else {
        let v = if z < 0.0 {
            negative_asymptotic(z)
        } else {
            positive_asymptotic(z)
        };
        AiryPair {
            ai: v[2],
            ai_prime: v[3],
        }
    }
}

/// Initial data `(ε^{-1/6}Ai(−xε^{-2/3}), −ε^{1/6}Ai′(−xε^{-2/3}))`.
pub fn airy_scaled_ic(x: f64, eps: f64) -> (f64, f64) {
    let p = airy(-x * eps.powf(-2.0 / 3.0));
    (eps.powf(-1.0 / 6.0) * p.ai, -eps.powf(1.0 / 6.0) * p.ai_prime)
}

/// Location of the global maximum of `Ai` on the negative axis.
pub fn ai_argmax() -> f64 {
    // Ai′ has its first negative zero here
    let (mut a, mut b) = (-1.1, -0.9);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if airy(m).ai_prime > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn values_at_zero() {
        let p = airy(0.0);
        assert!((p.ai - 0.3550280539).abs() < 1e-10);
        assert!((p.ai_prime + 0.2588194038).abs() < 1e-10);
        let b = airy_bi(0.0);
        assert!((b.ai - 0.6149266274460007).abs() < 1e-15);
    }

    #[test]
    fn maximum_location() {
        let m = ai_argmax();
        assert!((m + 1.01879).abs() < 1e-5, "{m}");
    }

    #[test]
    fn far_negative_leading_terms() {
        let zt: f64 = 1e4;
        let xi = 2.0 / 3.0 * zt.powf(1.5);
        let th = xi - PI / 4.0;
        let lead = INV_SQRT_PI * zt.powf(-0.25) * (th.cos() + 5.0 / 72.0 * th.sin() / xi);
        let v = airy(-zt).ai;
        assert!((v - lead).abs() < 1e-6 * lead.abs());
    }

    #[test]
    fn series_and_asymptotic_agree_in_crossover() {
        let mut z = -14.0;
        while z <= -10.0 {
            let s = airy_series(z);
            let a = airy_asymptotic(z);
            let env = (z.abs()).powf(-0.25);
            assert!((s.ai - a.ai).abs() < 1e-10 * env, "z={z}");
            assert!((s.ai_prime - a.ai_prime).abs() < 1e-10 * env * z.abs().sqrt(), "z={z}");
            z += 0.0173;
        }
        for z in [8.0, 8.5, 9.5, 10.0] {
            let s = airy_series(z);
            let a = airy_asymptotic(z);
            assert!((s.ai - a.ai).abs() < 1e-10 * a.ai.abs());
        }
    }

    #[test]
    fn envelope_bounds() {
        let mut z = -1.21;
        while z > -500.0 {
            let p = airy(z);
            assert!(p.ai.abs() <= 0.6 * z.abs().powf(-0.25));
            assert!(p.ai_prime.abs() <= 1.2 * z.abs().powf(0.25));
            z *= 1.013;
        }
    }

    #[test]
    fn wronskian_ai_bi() {
        for z in [-300.0, -20.0, -12.5, -11.0, -3.0, 0.5, 4.0, 8.9, 9.1, 12.0] {
            let a = airy(z);
            let b = airy_bi(z);
            let w = a.ai * b.ai_prime - a.ai_prime * b.ai;
            assert!((w - 1.0 / PI).abs() < 1e-12, "z={z}: {w}");
        }
    }

    #[test]
    fn scaled_ic_trivial_at_unit_eps() {
        let (p, d) = airy_scaled_ic(0.3, 1.0);
        let r = airy(-0.3);
        assert_eq!(p, r.ai);
        assert_eq!(d, -r.ai_prime);
    }

    #[test]
    fn scaled_ic_leading_asymptotics() {
        let (x, eps) = (0.5f64, 2f64.powi(-8));
        let xi = 2.0 / 3.0 * x.powf(1.5) / eps;
        let approx = INV_SQRT_PI * x.powf(-0.25) * (xi - PI / 4.0).cos();
        let (p, _) = airy_scaled_ic(x, eps);
        assert!((p - approx).abs() < 1e-2);
    }
}
