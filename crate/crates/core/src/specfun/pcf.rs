//! Parabolic cylinder function `U(ν, z)` scaled by `h(μ)`, evaluated through
//! the even/odd Kummer series in MPFR arithmetic.
//!
//! `U(a,z) = U(a,0)u₁(a,z) + U′(a,0)u₂(a,z)` with
//! `u₁ = e^{-z²/4}M(a/2+1/4, 1/2, z²/2)` and `u₂ = z e^{-z²/4}M(a/2+3/4, 3/2, z²/2)`.
//! The series cancel by a factor of roughly `e^{μ²}`, so the working
//! precision grows with `μ²`; `h(μ)` is divided out before converting to `f64`.

use rug::float::Constant;
use rug::Float;

use super::uniform::h_mu_log;
use crate::error::{Error, Result};

/// Scaled pair `U/h(μ)`, `U′/h(μ)` (derivative in `z`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPcfPair {
    pub u_over_h: f64,
    pub du_over_h: f64,
    pub log_h_mu: f64,
}

/// Even and odd solutions of the Weber equation with their `z`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenOdd {
    pub u1: f64,
    pub du1: f64,
    pub u2: f64,
    pub du2: f64,
}

/// Working-precision limits for the MPFR path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcfBudget {
    /// Largest working precision in bits.
    pub max_bits: u32,
    /// Bits that must survive cancellation.
    pub min_retained_bits: i64,
}

impl Default for PcfBudget {
    fn default() -> Self {
        PcfBudget {
            max_bits: 1 << 21,
            min_retained_bits: 64,
        }
    }
}

/// Parameters of a quadratic turning region `a = k₁x² + k₂x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcfParams {
    pub k1: f64,
    pub k2: f64,
    pub eps: f64,
}

impl PcfParams {
    pub fn new(k1: f64, k2: f64, eps: f64) -> Result<Self> {
        if !(k1 < 0.0 && k2 > 0.0 && eps > 0.0) {
            return Err(Error::Domain(format!(
                "pcf parameters need k1 < 0, k2 > 0, eps > 0 (k1={k1}, k2={k2}, eps={eps})"
            )));
        }
        Ok(PcfParams { k1, k2, eps })
    }

    fn k1_34(&self) -> f64 {
        (-self.k1).powf(0.75)
    }

    /// `ν = −k₂²/(8ε√(−k₁³))`
    pub fn nu(&self) -> f64 {
        -self.k2 * self.k2 / (8.0 * self.eps * (-self.k1).powf(1.5))
    }

    /// `μ = k₂/(2(−k₁³)^{1/4}√ε)`
    pub fn mu(&self) -> f64 {
        self.k2 / (2.0 * self.k1_34() * self.eps.sqrt())
    }

    /// `z(x) = (k₂ + 2k₁x)/(√(2ε)(−k₁³)^{1/4})`
    pub fn z(&self, x: f64) -> f64 {
        (self.k2 + 2.0 * self.k1 * x) / ((2.0 * self.eps).sqrt() * self.k1_34())
    }

    /// `dz/dx`
    pub fn dz_dx(&self) -> f64 {
        2.0 * self.k1 / ((2.0 * self.eps).sqrt() * self.k1_34())
    }

    /// `t = 1 + 2k₁x/k₂`
    pub fn t(&self, x: f64) -> f64 {
        1.0 + 2.0 * self.k1 * x / self.k2
    }

    /// Second zero of `a`.
    pub fn second_zero(&self) -> f64 {
        -self.k2 / self.k1
    }

    pub fn check_x(&self, x: f64) -> Result<()> {
        if !(x >= 0.0 && x < self.second_zero()) {
            return Err(Error::Domain(format!(
                "x = {x} outside [0, {}) for the quadratic region",
                self.second_zero()
            )));
        }
        Ok(())
    }
}

/// Working precision for `ν`: at least `20 + ⌈μ² log₁₀ e⌉` decimal digits.
pub fn working_bits(nu: f64) -> u64 {
    let mu2 = -2.0 * nu;
    let digits = 20.0 + (mu2.max(0.0) * std::f64::consts::LOG10_E).ceil();
    (digits * std::f64::consts::LOG2_10).ceil() as u64 + 64
}

struct Kummer {
    f: Float,
    /// `Σ n c_n wⁿ`
    g: Float,
    lost_bits: i64,
}

fn exp_of(x: &Float) -> i64 {
    x.get_exp().map(i64::from).unwrap_or(i64::MIN / 4)
}

/// `M(α, b, w)` with `b = 1/2` (`odd = false`) or `b = 3/2` (`odd = true`).
fn kummer(alpha: &Float, w: &Float, odd: bool, prec: u32) -> Kummer {
    let mut term = Float::with_val(prec, 1);
    let mut f = Float::with_val(prec, 1);
    let mut g = Float::with_val(prec, 0);
    let mut fac = Float::with_val(prec, 0);
    let mut max_exp = 1i64;
    let wabs = w.to_f64();
    let aabs = alpha.to_f64().abs();
    let mut n: u64 = 0;
    loop {
        let an = Float::with_val(256.max(alpha.prec()), alpha + n);
        fac.assign_mul(&an, w);
        term *= &fac;
        term *= 2u32;
        let d = if odd { 2 * n + 3 } else { 2 * n + 1 };
        term /= d;
        term /= n + 1;
        n += 1;
        f += &term;
        g += Float::with_val(prec, &term * n);
        let te = exp_of(&term);
        max_exp = max_exp.max(te);
        let nf = n as f64;
        if term.is_zero() {
            break;
        }
        if nf > aabs + wabs && te < exp_of(&f).min(exp_of(&g)) - prec as i64 - 8 {
            break;
        }
    }
    let lost_bits = max_exp - exp_of(&f).min(exp_of(&g).max(exp_of(&f)));
    Kummer { f, g, lost_bits }
}

trait AssignMul {
    fn assign_mul(&mut self, a: &Float, b: &Float);
}

impl AssignMul for Float {
    fn assign_mul(&mut self, a: &Float, b: &Float) {
        use rug::Assign;
        self.assign(a * b);
    }
}

struct EvenOddMp {
    u1: Float,
    du1: Float,
    u2: Float,
    du2: Float,
    lost_bits: i64,
}

fn even_odd_mp(nu: f64, z: f64, prec: u32) -> EvenOddMp {
    let zf = Float::with_val(prec, z);
    let w = Float::with_val(prec, zf.square_ref()) / 2u32;
    let a = Float::with_val(prec, nu);
    let alpha1 = Float::with_val(prec, &a / 2u32) + 0.25f64;
    let alpha2 = Float::with_val(prec, &a / 2u32) + 0.75f64;
    let k1 = kummer(&alpha1, &w, false, prec);
    let k2 = kummer(&alpha2, &w, true, prec);
    let damp = (-Float::with_val(prec, &w / 2u32)).exp();
    let u1 = Float::with_val(prec, &k1.f * &damp);
    // u₁′ = e^{-w/2}(2G₁/z − zF₁/2)
    let du1 = if z == 0.0 {
        Float::with_val(prec, 0)
    } else {
        let a2 = Float::with_val(prec, &k1.g * 2u32) / &zf;
        let b2 = Float::with_val(prec, &k1.f * &zf) / 2u32;
        Float::with_val(prec, a2 - b2) * &damp
    };
    let u2 = Float::with_val(prec, &k2.f * &zf) * &damp;
    // u₂′ = e^{-w/2}((1 − w)F₂ + 2G₂)
    let one_minus_w = Float::with_val(prec, 1 - &w);
    let du2 = (Float::with_val(prec, &one_minus_w * &k2.f) + Float::with_val(prec, &k2.g * 2u32)) * &damp;
    EvenOddMp {
        u1,
        du1,
        u2,
        du2,
        lost_bits: k1.lost_bits.max(k2.lost_bits),
    }
}

fn check_budget(nu: f64, budget: &PcfBudget) -> Result<u32> {
    let bits = working_bits(nu);
    if bits > u64::from(budget.max_bits) {
        return Err(Error::Precision(format!(
            "needs {bits} bits of working precision, budget is {}",
            budget.max_bits
        )));
    }
    Ok(bits as u32)
}

fn check_retained(prec: u32, lost: i64, budget: &PcfBudget) -> Result<()> {
    let kept = prec as i64 - lost;
    if kept < budget.min_retained_bits {
        return Err(Error::Precision(format!(
            "only {kept} bits survive cancellation at {prec} bits"
        )));
    }
    Ok(())
}

/// Even/odd Weber solutions `u₁, u₂` at `(ν, z)` and their `z`-derivatives.
pub fn pcf_even_odd(nu: f64, z: f64, budget: &PcfBudget) -> Result<EvenOdd> {
    if !nu.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("non-finite pcf argument ({nu}, {z})")));
    }
    let prec = check_budget(nu, budget)?;
    let e = even_odd_mp(nu, z, prec);
    check_retained(prec, e.lost_bits, budget)?;
    Ok(EvenOdd {
        u1: e.u1.to_f64(),
        du1: e.du1.to_f64(),
        u2: e.u2.to_f64(),
        du2: e.du2.to_f64(),
    })
}

/// `ln Γ(s)` for `s > 0` to a few digits, enough to size the gamma series.
fn ln_gamma_rough(s: f64) -> f64 {
    let mut shift = 0.0;
    let mut s = s;
    while s < 10.0 {
        shift -= s.ln();
        s += 1.0;
    }
    shift + (s - 0.5) * s.ln() - s + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * s)
}

/// `v = m/2ʲ` with `m` odd or `j = 0`, for a finite positive double.
fn dyadic(v: f64) -> Option<(u64, u32)> {
    let bits = v.to_bits();
    let raw = ((bits >> 52) & 0x7ff) as i32;
    if raw == 0 || raw == 0x7ff {
        return None;
    }
    let frac = (bits & ((1u64 << 52) - 1)) | (1u64 << 52);
    let e = raw - 1075;
    if e >= 0 {
        return frac.checked_shl(e as u32).filter(|m| m >> e == frac).map(|m| (m, 0));
    }
    let tz = frac.trailing_zeros().min((-e) as u32);
    Some((frac >> tz, (-e) as u32 - tz))
}

/// `Γ(s)` for `s > 0` from the lower incomplete gamma series
/// `γ(s, x) = xˢe⁻ˣ Σ xᵏ/(s(s+1)⋯(s+k))` at an integer `x` past which the
/// upper tail is below the working precision. All terms are positive, so
/// the cost is linear in `x` with no Bernoulli numbers.
fn gamma_mp(s: &Float) -> Float {
    let prec = s.prec();
    let work = prec + 32;
    let sf = s.to_f64();
    let target = -(f64::from(prec) + 32.0) * std::f64::consts::LN_2 + ln_gamma_rough(sf);
    let tail = |x: f64| (sf - 1.0) * x.ln() - x + (x / (x - sf + 1.0)).ln();
    let mut x = (sf + 1.0).max(2.0);
    while tail(x) > target {
        x *= 1.1;
    }
    let x = x.ceil() as u64;
    let sw = Float::with_val(work, s);
    // s + k = (m + k·2ʲ)/2ʲ exactly when s is a double
    let exact = dyadic(sf).filter(|_| Float::with_val(64, sf) == *s);
    let mut term = Float::with_val(work, sw.recip_ref());
    let mut sum = term.clone();
    let mut k: u64 = 0;
    loop {
        k += 1;
        term *= x;
        let int = exact.and_then(|(m, j)| {
            k.checked_shl(j)
                .filter(|v| v >> j == k)
                .and_then(|v| v.checked_add(m))
                .map(|n| (n, j))
        });
        match int {
            Some((n, j)) => {
                term <<= j;
                term /= n;
            }
            None => term /= Float::with_val(work, &sw + k),
        }
        sum += &term;
        if k > x && exp_of(&term) < exp_of(&sum) - i64::from(work) - 4 {
            break;
        }
    }
    let ln_x = Float::with_val(work, x).ln();
    let pre = Float::with_val(work, &sw * &ln_x) - x;
    Float::with_val(prec, sum * pre.exp())
}

/// `1/Γ(y)`, through the reflection formula for `y < 1/2`.
fn recip_gamma(y: Float) -> Float {
    let prec = y.prec();
    if y < 0.5f64 {
        let pi = Float::with_val(prec, Constant::Pi);
        let s = Float::with_val(prec, &pi * &y).sin();
        let g = gamma_mp(&Float::with_val(prec, 1 - &y));
        s * g / pi
    } else {
        gamma_mp(&y).recip()
    }
}

/// `U(ν, z(x))/h(μ)` and `U′(ν, z(x))/h(μ)` with the default budget.
pub fn pcf_scaled(k1: f64, k2: f64, eps: f64, x: f64) -> Result<ScaledPcfPair> {
    pcf_scaled_with(k1, k2, eps, x, &PcfBudget::default())
}

pub fn pcf_scaled_with(k1: f64, k2: f64, eps: f64, x: f64, budget: &PcfBudget) -> Result<ScaledPcfPair> {
    let p = PcfParams::new(k1, k2, eps)?;
    p.check_x(x)?;
    scaled_at(p.nu(), p.z(x), budget)
}

/// Scaled pair at raw `(ν, z)`, `ν < 0`; `h` uses `μ = √(−2ν)`.
pub fn scaled_at(nu: f64, z: f64, budget: &PcfBudget) -> Result<ScaledPcfPair> {
    if !(nu < 0.0) {
        return Err(Error::Domain(format!("scaled pcf needs nu < 0, got {nu}")));
    }
    let prec = check_budget(nu, budget)?;
    let e = even_odd_mp(nu, z, prec);
    check_retained(prec, e.lost_bits, budget)?;
    let a = Float::with_val(prec, nu);
    let sqrt_pi = Float::with_val(prec, Constant::Pi).sqrt();
    let half_a = Float::with_val(prec, &a / 2u32);
    // U(a,0) = √π/(2^{a/2+1/4}Γ(3/4+a/2)), U′(a,0) = −√π/(2^{a/2−1/4}Γ(1/4+a/2))
    let u0 = Float::with_val(prec, &sqrt_pi * recip_gamma(Float::with_val(prec, &half_a + 0.75f64)))
        / Float::with_val(prec, &half_a + 0.25f64).exp2();
    let du0 = -Float::with_val(prec, &sqrt_pi * recip_gamma(Float::with_val(prec, &half_a + 0.25f64)))
        / Float::with_val(prec, &half_a - 0.25f64).exp2();
    let t1 = Float::with_val(prec, &u0 * &e.u1);
    let t2 = Float::with_val(prec, &du0 * &e.u2);
    let u = Float::with_val(prec, &t1 + &t2);
    let lost = exp_of(&t1).max(exp_of(&t2)) - exp_of(&u);
    let s1 = Float::with_val(prec, &u0 * &e.du1);
    let s2 = Float::with_val(prec, &du0 * &e.du2);
    let du = Float::with_val(prec, &s1 + &s2);
    let lost_d = exp_of(&s1).max(exp_of(&s2)) - exp_of(&du);
    check_retained(prec, e.lost_bits + lost.max(lost_d).max(0), budget)?;
    let mu = (-Float::with_val(prec, &a * 2u32)).sqrt();
    let log_h = log_h_mp(&mu);
    let inv_h = Float::with_val(prec, -&log_h).exp();
    let out = ScaledPcfPair {
        u_over_h: Float::with_val(prec, &u * &inv_h).to_f64(),
        du_over_h: Float::with_val(prec, &du * &inv_h).to_f64(),
        log_h_mu: h_mu_log(mu.to_f64()),
    };
    if !(out.u_over_h.is_finite() && out.du_over_h.is_finite()) {
        return Err(Error::Precision(format!("scaled pcf not finite at nu={nu}, z={z}")));
    }
    Ok(out)
}

/// `ln h(μ)` in working precision.
fn log_h_mp(mu: &Float) -> Float {
    let prec = mu.prec();
    let mu2 = Float::with_val(prec, mu.square_ref());
    let ln2 = Float::with_val(prec, Constant::Log2);
    let lnmu = Float::with_val(prec, mu.ln_ref());
    let q = Float::with_val(prec, &mu2 / 4u32);
    let c1 = Float::with_val(prec, &q + 0.25f64) * &ln2;
    let c3 = Float::with_val(prec, Float::with_val(prec, &mu2 / 2u32) - 0.5f64) * &lnmu;
    -c1 - q + c3
}
