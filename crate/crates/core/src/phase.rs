//! WKB phase `φ(x) = ∫_{x₁}^x (√a − ε²β)` and its per-interval increments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::grid;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseMethod {
    Exact,
    Simpson(usize),
    Adaptive(f64),
}

impl fmt::Display for PhaseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseMethod::Exact => write!(f, "exact"),
            PhaseMethod::Simpson(m) => write!(f, "simpson:{m}"),
            PhaseMethod::Adaptive(t) => write!(f, "adaptive:{t:e}"),
        }
    }
}

impl FromStr for PhaseMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("unknown phase method '{s}'"));
        match s.split_once(':') {
            None if s == "exact" => Ok(PhaseMethod::Exact),
            Some(("simpson", m)) => {
                let m: usize = m.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                Ok(PhaseMethod::Simpson(m))
            }
            Some(("adaptive", t)) => {
                let t: f64 = t.parse().map_err(|_| bad())?;
                if !(t > 0.0) {
                    return Err(bad());
                }
                Ok(PhaseMethod::Adaptive(t))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable<T> {
    pub eps: T,
    pub nodes: Vec<T>,
    /// `S_n = φ(x_{n+1}) − φ(x_n)`
    pub increments: Vec<T>,
    /// `φ(x_n)`, with `φ(x₁) = 0`
    pub cumulative: Vec<T>,
    /// `φ(x_n)/ε` reduced to `[0, 2π)` by accumulating increments
    pub reduced: Vec<T>,
    pub method: PhaseMethod,
}

impl<T: Real> PhaseTable<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn simpson<T: Real, F: Fn(T) -> Result<T>>(f: &F, a: T, b: T, m: usize) -> Result<T> {
    let w = (b - a) / T::from_usize(m).unwrap();
    let half = T::lit(0.5);
    let mut s = T::zero();
    let mut left = f(a)?;
    for k in 0..m {
        let xa = a + w * T::from_usize(k).unwrap();
        let xb = if k + 1 == m { b } else { xa + w };
        let right = f(xb)?;
        s = s + w / T::lit(6.0) * (left + T::lit(4.0) * f(xa + half * (xb - xa))? + right);
        left = right;
    }
    Ok(s)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod<T: Real, F: Fn(T) -> Result<T>>(f: &F, a: T, b: T) -> Result<(T, T)> {
    let c = T::lit(0.5) * (a + b);
    let r = T::lit(0.5) * (b - a);
    let mut k15 = T::zero();
    let mut g7 = T::zero();
    for i in 0..8 {
        let wk = T::lit(K15_WEIGHTS[i]);
        if i == 7 {
            let fc = f(c)?;
            k15 = k15 + wk * fc;
            g7 = g7 + T::lit(G7_WEIGHTS[3]) * fc;
        } else {
            let d = r * T::lit(GK_NODES[i]);
            let s = f(c - d)? + f(c + d)?;
            k15 = k15 + wk * s;
            if i % 2 == 1 {
                g7 = g7 + T::lit(G7_WEIGHTS[i / 2]) * s;
            }
        }
    }
    Ok((k15 * r, ((k15 - g7) * r).abs()))
}

fn adaptive<T: Real, F: Fn(T) -> Result<T>>(f: &F, a: T, b: T, tol: T, depth: u32) -> Result<T> {
    let (v, err) = gauss_kronrod(f, a, b)?;
    if err <= tol * v.abs().max(T::lit(1e-300)) || depth == 0 || (b - a) <= T::epsilon() * b.abs() {
        return Ok(v);
    }
    let m = T::lit(0.5) * (a + b);
    Ok(adaptive(f, a, m, tol, depth - 1)? + adaptive(f, m, b, tol, depth - 1)?)
}

/// Integrates `√a − ε²β` over every grid interval.
pub fn build_phase<T: Real>(c: &Coefficient<T>, eps: T, nodes: &[T], method: PhaseMethod) -> Result<PhaseTable<T>> {
    grid::check_sorted(nodes)?;
    if nodes[0] < c.x1 || *nodes.last().unwrap() > T::one() {
        return Err(Error::Domain("phase nodes must lie in [x1, 1]".into()));
    }
    if method == PhaseMethod::Exact && !c.is_affine() {
        return Err(Error::UnsupportedExact);
    }
    let f = |x: T| c.phase_density(eps, x);
    let mut increments = Vec::with_capacity(nodes.len() - 1);
    for w in nodes.windows(2) {
        let (xa, xb) = (w[0], w[1]);
        let s = if xa == xb {
            T::zero()
        } else {
            match method {
                PhaseMethod::Exact => c.exact_phase_increment(eps, xa, xb).unwrap(),
                PhaseMethod::Simpson(m) => simpson(&f, xa, xb, m)?,
                PhaseMethod::Adaptive(tol) => adaptive(&f, xa, xb, T::lit(tol), 40)?,
            }
        };
        increments.push(s);
    }
    let two_pi = T::lit(2.0) * T::PI();
    let mut cumulative = Vec::with_capacity(nodes.len());
    let mut reduced = Vec::with_capacity(nodes.len());
    let (mut phi, mut theta) = (T::zero(), T::zero());
    cumulative.push(phi);
    reduced.push(theta);
    for s in &increments {
        phi = phi + *s;
        theta = (theta + *s / eps) % two_pi;
        cumulative.push(phi);
        reduced.push(theta);
    }
    Ok(PhaseTable {
        eps,
        nodes: nodes.to_vec(),
        increments,
        cumulative,
        reduced,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["exact", "simpson:4", "adaptive:1e-12"] {
            let m: PhaseMethod = s.parse().unwrap();
            let back: PhaseMethod = m.to_string().parse().unwrap();
            assert_eq!(m, back);
        }
        assert!("simpson:0".parse::<PhaseMethod>().is_err());
        assert!("gauss".parse::<PhaseMethod>().is_err());
    }

    #[test]
    fn exact_unsupported_for_quadratic() {
        let c = Coefficient::pcf_quadratic(-0.5, 1.0, 0.1).unwrap();
        let nodes = grid::uniform(0.1, 0.25).unwrap();
        assert_eq!(
            build_phase(&c, 0.1, &nodes, PhaseMethod::Exact),
            Err(Error::UnsupportedExact)
        );
    }

    #[test]
    fn quadrature_agrees_with_closed_form() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let nodes = grid::uniform(0.1, 0.05).unwrap();
        let eps = 2f64.powi(-6);
        let ex = build_phase(&c, eps, &nodes, PhaseMethod::Exact).unwrap();
        let ad = build_phase(&c, eps, &nodes, PhaseMethod::Adaptive(1e-13)).unwrap();
        for (a, b) in ex.increments.iter().zip(&ad.increments) {
            assert!((a - b).abs() < 1e-13 * a.abs());
        }
        let total: f64 = ex.increments.iter().sum();
        assert_eq!(*ex.cumulative.last().unwrap(), total);
    }

    #[test]
    fn simpson_self_convergence_order_four() {
        let c = Coefficient::pcf_quadratic(-0.5, 1.0, 0.1).unwrap();
        let eps = 2f64.powi(-6);
        let reference = build_phase(&c, eps, &[0.1, 0.3], PhaseMethod::Adaptive(1e-14)).unwrap();
        let errs: Vec<f64> = [8usize, 16, 32, 64]
            .iter()
            .map(|&m| {
                let t = build_phase(&c, eps, &[0.1, 0.3], PhaseMethod::Simpson(m)).unwrap();
                (t.increments[0] - reference.increments[0]).abs()
            })
            .collect();
        let xs: Vec<f64> = [8.0f64, 16.0, 32.0, 64.0].iter().map(|m| (0.2 / m).ln()).collect();
        let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
        let slope = crate::fit::slope(&xs, &ys);
        assert!((slope - 4.0).abs() < 0.2, "slope {slope}, errs {errs:?}");
    }
}
