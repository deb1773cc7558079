//! The coefficient `a(x) = E − V(x)`: an analytic turning-region formula on
//! `[0, x₁]` and a polynomial body on `[x₁, 1]` with exact derivatives.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::Real;

/// Number of Taylor coefficients carried for `a` (orders 0 through 5).
pub const A_ORDER: usize = 6;
pub type AJet<T> = Jet<T, A_ORDER>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Region<T> {
    /// `a(x) = x`
    Linear,
    /// `a(x) = k₁x² + k₂x`
    Quadratic { k1: T, k2: T },
}

/// Polynomial with ascending coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Real> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Poly { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != T::zero()).unwrap_or(0)
    }

    /// Value and the first `out.len() − 1` derivatives at `x`.
    pub fn derivatives(&self, x: T, out: &mut [T]) {
        let mut work = self.coeffs.clone();
        for slot in out.iter_mut() {
            let mut acc = T::zero();
            for c in work.iter().rev() {
                acc = acc * x + *c;
            }
            *slot = acc;
            if work.len() > 1 {
                work = work
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| *c * T::from_usize(k).unwrap())
                    .collect();
            } else {
                work = vec![T::zero()];
            }
        }
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x + *c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaChain<T> {
    pub beta: T,
    pub b0: T,
    pub b1: T,
    pub b2: T,
    pub b3: T,
}

/// Admissible range of ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsBudget<T> {
    pub eps0: T,
    pub tau1: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient<T> {
    pub region: Region<T>,
    pub x1: T,
    pub body: Poly<T>,
}

/// Sample count used for sampled assumption checks.
const SAMPLES: usize = 10_000;

impl<T: Real> Coefficient<T> {
    pub fn new(region: Region<T>, x1: T, body: Poly<T>) -> Result<Self> {
        let c = Coefficient { region, x1, body };
        c.check_structure()?;
        Ok(c)
    }

    /// `a(x) = x` on all of `[0, 1]`.
    pub fn airy_linear(x1: T) -> Result<Self> {
        Self::new(Region::Linear, x1, Poly::new(vec![T::zero(), T::one()]))
    }

    /// `a(x) = k₁x² + k₂x` on all of `[0, 1]`.
    pub fn pcf_quadratic(k1: T, k2: T, x1: T) -> Result<Self> {
        Self::new(Region::Quadratic { k1, k2 }, x1, Poly::new(vec![T::zero(), k2, k1]))
    }

    fn check_structure(&self) -> Result<()> {
        let x1 = self.x1;
        if !(x1 > T::zero() && x1 < T::one()) {
            return Err(Error::Assumption(format!(
                "transition point x1 = {x1} must lie in (0, 1)"
            )));
        }
        if let Region::Quadratic { k1, k2 } = self.region {
            if !(k1 < T::zero()) {
                return Err(Error::Assumption(format!("quadratic region needs k1 < 0, got {k1}")));
            }
            if !(k2 > -k1 * x1) {
                return Err(Error::Assumption(format!(
                    "quadratic region needs k2 > -k1*x1 > 0, got k2 = {k2}, -k1*x1 = {}",
                    -k1 * x1
                )));
            }
        }
        let jump = (self.region_a(x1) - self.body.eval(x1)).abs();
        if jump > T::lit(1e-12) {
            return Err(Error::Assumption(format!("a is not continuous at x1: jump {jump}")));
        }
        Ok(())
    }

    pub fn region_a(&self, x: T) -> T {
        match self.region {
            Region::Linear => x,
            Region::Quadratic { k1, k2 } => k1 * x * x + k2 * x,
        }
    }

    /// `a(x)` on `[0, 1]`, piecewise.
    pub fn a(&self, x: T) -> T {
        if x < self.x1 {
            self.region_a(x)
        } else {
            self.body.eval(x)
        }
    }

    /// `a, a′, …, a⁽⁵⁾` of the body at `x`.
    pub fn derivatives(&self, x: T) -> [T; A_ORDER] {
        let mut d = [T::zero(); A_ORDER];
        self.body.derivatives(x, &mut d);
        d
    }

    pub fn jet(&self, x: T) -> AJet<T> {
        AJet::from_derivatives(&self.derivatives(x))
    }

    /// True when the body is affine, so the phase has a closed form.
    pub fn is_affine(&self) -> bool {
        self.body.degree() <= 1
    }

    fn positive_a(&self, x: T) -> Result<AJet<T>> {
        let j = self.jet(x);
        if !(j.value() > T::zero()) {
            return Err(Error::Domain(format!("a({x}) = {} is not positive", j.value())));
        }
        Ok(j)
    }

    fn beta_jet(a: &AJet<T>) -> AJet<T> {
        let d1 = a.deriv();
        let d2 = d1.deriv();
        a.powf(T::lit(-2.5)) * d1 * d1 * AJet::constant(T::lit(-5.0 / 32.0))
            + a.powf(T::lit(-1.5)) * d2 * AJet::constant(T::lit(1.0 / 8.0))
    }

    /// `β = −(5/32)a^{-5/2}a′² + (1/8)a^{-3/2}a″`.
    pub fn beta(&self, x: T) -> Result<T> {
        Ok(Self::beta_jet(&self.positive_a(x)?).value())
    }

    /// `β₀ = β/(2φ′)` and `β_{k+1} = β_k′/(2φ′)` with `φ′ = √a − ε²β`.
    pub fn beta_chain(&self, eps: T, x: T) -> Result<BetaChain<T>> {
        let a = self.positive_a(x)?;
        let beta = Self::beta_jet(&a);
        let dphi = a.sqrt() - beta.scale(eps * eps);
        if !(dphi.value() > T::zero()) {
            return Err(Error::Domain(format!(
                "phase derivative {} is not positive at x = {x}",
                dphi.value()
            )));
        }
        let two_dphi = dphi.scale(T::lit(2.0));
        let b0 = beta / two_dphi;
        let b1 = b0.deriv() / two_dphi;
        let b2 = b1.deriv() / two_dphi;
        let b3 = b2.deriv() / two_dphi;
        Ok(BetaChain {
            beta: beta.value(),
            b0: b0.value(),
            b1: b1.value(),
            b2: b2.value(),
            b3: b3.value(),
        })
    }

    /// Phase density `√a − ε²β`.
    pub fn phase_density(&self, eps: T, x: T) -> Result<T> {
        let a = self.positive_a(x)?;
        Ok(a.value().sqrt() - eps * eps * Self::beta_jet(&a).value())
    }

    /// Closed-form phase increment over `[xa, xb]` for an affine body.
    pub fn exact_phase_increment(&self, eps: T, xa: T, xb: T) -> Option<T> {
        if !self.is_affine() {
            return None;
        }
        let slope = self.body.coeffs.get(1).copied().unwrap_or(T::zero());
        if slope == T::zero() {
            return Some(self.body.eval(xa).sqrt() * (xb - xa));
        }
        let (aa, ab) = (self.body.eval(xa), self.body.eval(xb));
        let sa = aa.sqrt();
        let sb = ab.sqrt();
        let two_thirds = T::lit(2.0 / 3.0);
        // a^{3/2} difference written to avoid cancellation for short intervals
        let d32 = (ab - aa) * (aa + sa * sb + ab) / (sa + sb);
        let dm32 = d32 / (aa * ab * sa * sb);
        Some(two_thirds * d32 / slope + eps * eps * T::lit(5.0 / 48.0) * slope * dm32)
    }

    /// Checks the standing assumptions for this ε and returns the budget.
    pub fn validate(&self, eps: T) -> Result<EpsBudget<T>> {
        self.check_structure()?;
        let one = T::one();
        let mut amin = T::infinity();
        let mut ratio_min = one;
        let n = T::from_usize(SAMPLES - 1).unwrap();
        for k in 0..SAMPLES {
            let x = self.x1 + (one - self.x1) * T::from_usize(k).unwrap() / n;
            let av = self.body.eval(x);
            if !(av > T::zero()) {
                return Err(Error::Assumption(format!(
                    "a must stay positive on [x1, 1]; a({x}) = {av}"
                )));
            }
            amin = amin.min(av);
            let b = self.beta(x)?;
            if b > T::zero() {
                ratio_min = ratio_min.min(av.powf(T::lit(0.25)) / b.sqrt());
            }
        }
        let eps0 = ratio_min.min(one);
        if !(eps > T::zero()) || eps > eps0 {
            return Err(Error::Assumption(format!(
                "eps = {eps} outside the admissible range (0, {eps0}]"
            )));
        }
        Ok(EpsBudget {
            eps0,
            tau1: amin * T::lit(0.99),
        })
    }
}
