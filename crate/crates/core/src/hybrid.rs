//! The assembled scattering solution: analytic turning-region part on
//! `[0, x₁]`, marched part on `[x₁, 1]`, and the complex scaling that
//! enforces `εψ′(1) − i√a(1)ψ(1) = −2i√a(1)`.
//!
//! Also home of the closed-form two-piece solutions of the linear
//! approximation study.

use num_complex::Complex;
use serde::Serialize;

use crate::coefficient::{Coefficient, Region};
use crate::error::{Error, Result};
use crate::grid;
use crate::phase::{build_phase, PhaseMethod};
use crate::specfun::pcf::{scaled_at, PcfBudget, PcfParams};
use crate::specfun::{airy, airy_bi, airy_scaled_ic, pcf_even_odd, pcf_scaled, pcf_uniform_asymptotic};
use crate::wkbmarch::{march, psi_from_w, w_from_psi};
use crate::C64;

/// Samples used for continuum sup-norms on `[0, x₁]`.
pub const SUP_SAMPLES: usize = 2000;
const GOLDEN_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TurningKind {
    Airy,
    Pcf { k1: f64, k2: f64 },
}

impl TurningKind {
    pub fn of(c: &Coefficient<f64>) -> Self {
        match c.region {
            Region::Linear => TurningKind::Airy,
            Region::Quadratic { k1, k2 } => TurningKind::Pcf { k1, k2 },
        }
    }

    /// The decaying turning-region solution `(ψ₋, εψ₋′)` used as initial data.
    pub fn shape(&self, eps: f64, x: f64) -> Result<(f64, f64)> {
        match *self {
            TurningKind::Airy => Ok(airy_scaled_ic(x, eps)),
            TurningKind::Pcf { k1, k2 } => {
                let p = pcf_scaled(k1, k2, eps, x)?;
                Ok((p.u_over_h, -(2.0 * eps).sqrt() * (-k1).powf(0.25) * p.du_over_h))
            }
        }
    }

    /// Cheap approximation of [`TurningKind::shape`], used only to locate maxima.
    fn shape_guess(&self, eps: f64, x: f64) -> Result<(f64, f64)> {
        match *self {
            TurningKind::Airy => Ok(airy_scaled_ic(x, eps)),
            TurningKind::Pcf { k1, k2 } => {
                let p = pcf_uniform_asymptotic(k1, k2, eps, x, 1e-3)?;
                Ok((p.u_over_h, -(2.0 * eps).sqrt() * (-k1).powf(0.25) * p.du_over_h))
            }
        }
    }
}

/// Scattering solution on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct HybridSolution {
    pub kind: TurningKind,
    pub coefficient: Coefficient<f64>,
    pub eps: f64,
    pub x1: f64,
    pub phase: PhaseMethod,
    pub alpha: C64,
    /// `α` times the initial-data scale; the analytic part is this times the shape.
    pub left_amplitude: C64,
    pub nodes: Vec<f64>,
    pub psi: Vec<C64>,
    pub eps_dpsi: Vec<C64>,
    /// Largest imaginary residue of the back-transformed W vectors.
    pub max_residue: f64,
}

fn i() -> C64 {
    Complex::new(0.0, 1.0)
}

/// Solves the scattering problem with the turning-region kind read off the coefficient.
pub fn solve(c: &Coefficient<f64>, eps: f64, nodes: &[f64], method: PhaseMethod) -> Result<HybridSolution> {
    solve_with_ic_scale(c, eps, nodes, method, 1.0)
}

pub fn solve_airy(c: &Coefficient<f64>, eps: f64, nodes: &[f64], method: PhaseMethod) -> Result<HybridSolution> {
    if c.region != Region::Linear {
        return Err(Error::Config("solve_airy needs a linear turning region".into()));
    }
    solve(c, eps, nodes, method)
}

pub fn solve_pcf(c: &Coefficient<f64>, eps: f64, nodes: &[f64], method: PhaseMethod) -> Result<HybridSolution> {
    if !matches!(c.region, Region::Quadratic { .. }) {
        return Err(Error::Config("solve_pcf needs a quadratic turning region".into()));
    }
    solve(c, eps, nodes, method)
}

/// As [`solve`], with the initial vector multiplied by `scale`.
pub fn solve_with_ic_scale(
    c: &Coefficient<f64>,
    eps: f64,
    nodes: &[f64],
    method: PhaseMethod,
    scale: f64,
) -> Result<HybridSolution> {
    c.validate(eps)?;
    grid::check_sorted(nodes)?;
    if nodes[0] != c.x1 || *nodes.last().unwrap() != 1.0 {
        return Err(Error::Domain(format!(
            "grid must run from x1 = {} to 1, got [{}, {}]",
            c.x1,
            nodes[0],
            nodes.last().unwrap()
        )));
    }
    let kind = TurningKind::of(c);
    let (p0, d0) = kind.shape(eps, c.x1)?;
    let table = build_phase(c, eps, nodes, method)?;
    let w1 = w_from_psi(c, eps, c.x1, scale * p0, scale * d0)?;
    let ws = march(c, &table, w1)?;
    let mut max_residue = 0.0f64;
    let mut real = Vec::with_capacity(ws.len());
    for w in &ws {
        let re = [w[0].re, w[1].re];
        let residue = w[0].im.hypot(w[1].im);
        let tol = 1e-8f64.max(f64::EPSILON * 1e5) * re[0].hypot(re[1]).max(f64::MIN_POSITIVE);
        if residue > tol {
            return Err(Error::Reality { residue });
        }
        max_residue = max_residue.max(residue);
        real.push(re);
    }
    let d = c.derivatives(1.0);
    let (a1, da1) = (d[0], d[1]);
    let wl = real[real.len() - 1];
    let denom = Complex::new(wl[1], 0.0) - (i() + eps / 4.0 * a1.powf(-1.5) * da1) * wl[0];
    if denom.norm() < 1e-300 {
        return Err(Error::SingularAlpha(denom.norm()));
    }
    let alpha = -2.0 * i() * a1.powf(0.25) / denom;
    let mut psi = Vec::with_capacity(nodes.len());
    let mut eps_dpsi = Vec::with_capacity(nodes.len());
    for (x, w) in nodes.iter().zip(&real) {
        let (p, q) = psi_from_w(c, eps, *x, crate::WVector { w: *w })?;
        psi.push(alpha * p);
        eps_dpsi.push(alpha * q);
    }
    Ok(HybridSolution {
        kind,
        coefficient: c.clone(),
        eps,
        x1: c.x1,
        phase: method,
        alpha,
        left_amplitude: alpha * scale,
        nodes: nodes.to_vec(),
        psi,
        eps_dpsi,
        max_residue,
    })
}

impl HybridSolution {
    /// `(ψ, εψ′)` from the analytic sampler on `[0, x₁)` or the nearest node.
    pub fn eval(&self, x: f64) -> Result<(C64, C64)> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        if x < self.x1 {
            let (p, d) = self.kind.shape(self.eps, x)?;
            return Ok((self.left_amplitude * p, self.left_amplitude * d));
        }
        let k = self.nearest_node(x);
        Ok((self.psi[k], self.eps_dpsi[k]))
    }

    fn nearest_node(&self, x: f64) -> usize {
        let k = self.nodes.partition_point(|&n| n < x);
        if k == 0 {
            return 0;
        }
        if k == self.nodes.len() || x - self.nodes[k - 1] <= self.nodes[k] - x {
            k - 1
        } else {
            k
        }
    }

    /// Density `n = |ψ|²` and current `j = ε Im(ψ̄ψ′)`.
    pub fn observables(&self, x: f64) -> Result<(f64, f64)> {
        let (p, d) = self.eval(x)?;
        Ok(observables_of(p, d))
    }

    pub fn psi_at_one(&self) -> (C64, C64) {
        let k = self.psi.len() - 1;
        (self.psi[k], self.eps_dpsi[k])
    }

    /// `|εψ′(1) − i√a(1)ψ(1) + 2i√a(1)|`
    pub fn right_bc_residual(&self) -> f64 {
        let s = self.coefficient.a(1.0).sqrt();
        let (p, d) = self.psi_at_one();
        (d - i() * s * p + 2.0 * i() * s).norm()
    }

    /// Relative mismatch of `(ψ, εψ′)(x₁)` against the decaying turning-region solution.
    pub fn left_robin_residual(&self) -> Result<f64> {
        let (p0, d0) = self.kind.shape(self.eps, self.x1)?;
        let (p, d) = (self.psi[0], self.eps_dpsi[0]);
        let scale = p.norm().hypot(d.norm()) * p0.hypot(d0);
        Ok((d * p0 - p * d0).norm() / scale)
    }

    /// `| |ψ(1) − 1| − 1 |`
    pub fn reflection_defect(&self) -> f64 {
        ((self.psi_at_one().0 - 1.0).norm() - 1.0).abs()
    }

    /// `max_n |j(x_n)| / |ψ(x_n)|²`
    pub fn max_relative_current(&self) -> f64 {
        self.psi
            .iter()
            .zip(&self.eps_dpsi)
            .map(|(p, d)| {
                let (n, j) = observables_of(*p, *d);
                j.abs() / n.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max)
    }

    /// `(max |ψ|, max ε|ψ′|)` over `[0, 1]`: continuum sup on `[0, x₁]`, node max beyond.
    pub fn sup_norms(&self) -> Result<(f64, f64)> {
        let (sp, sd) = shape_sup(self.kind, self.eps, self.x1)?;
        let amp = self.left_amplitude.norm();
        let np = self.psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let nd = self.eps_dpsi.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok(((amp * sp).max(np), (amp * sd).max(nd)))
    }
}

pub fn observables_of(psi: C64, eps_dpsi: C64) -> (f64, f64) {
    (psi.norm_sqr(), (psi.conj() * eps_dpsi).im)
}

/// Golden-section refinement of a maximum of `f` bracketed by `[a, b]`.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    let mut best = fc.max(fd);
    for _ in 0..GOLDEN_ITERS {
        if b - a < 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
        best = best.max(fc).max(fd);
    }
    Ok(best)
}

/// Sup of `|exact|` on `[a, b]`: `guess` is sampled on a uniform grid, the
/// three best local candidates are refined with `exact`, and the endpoints
/// are evaluated exactly.
pub fn sup_abs<G, F>(guess: G, exact: F, a: f64, b: f64, n: usize) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
    F: Fn(f64) -> Result<f64>,
{
    let xs: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| guess(x).map(f64::abs)).collect::<Result<_>>()?;
    let mut peaks: Vec<usize> = (1..n)
        .filter(|&k| vals[k] >= vals[k - 1] && vals[k] >= vals[k + 1])
        .collect();
    peaks.sort_by(|&p, &q| vals[q].total_cmp(&vals[p]));
    peaks.truncate(3);
    let abs_exact = |x: f64| exact(x).map(f64::abs);
    let mut best = abs_exact(a)?.max(abs_exact(b)?);
    for k in peaks {
        best = best.max(golden_max(&abs_exact, xs[k - 1], xs[k + 1])?);
    }
    Ok(best)
}

/// `(sup|ψ₋|, sup ε|ψ₋′|)` of the turning-region shape on `[0, x₁]`.
pub fn shape_sup(kind: TurningKind, eps: f64, x1: f64) -> Result<(f64, f64)> {
    let sp = sup_abs(
        |x| Ok(kind.shape_guess(eps, x)?.0),
        |x| Ok(kind.shape(eps, x)?.0),
        0.0,
        x1,
        SUP_SAMPLES,
    )?;
    let sd = sup_abs(
        |x| Ok(kind.shape_guess(eps, x)?.1),
        |x| Ok(kind.shape(eps, x)?.1),
        0.0,
        x1,
        SUP_SAMPLES,
    )?;
    Ok((sp, sd))
}

/// Closed-form solution of the model problems, where the body continues the
/// turning-region formula up to `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pub kind: TurningKind,
    pub eps: f64,
    /// `ψ = amplitude · ψ₋`
    pub amplitude: C64,
}

impl ExactSolution {
    pub fn for_model(c: &Coefficient<f64>, eps: f64) -> Result<Self> {
        let continues = (0..=8).all(|k| {
            let x = c.x1 + (1.0 - c.x1) * k as f64 / 8.0;
            (c.region_a(x) - c.body.eval(x)).abs() <= 1e-14 * (1.0 + c.body.eval(x).abs())
        });
        if !continues {
            return Err(Error::Config(
                "no closed-form solution: the body does not continue the turning region".into(),
            ));
        }
        let kind = TurningKind::of(c);
        let s = c.a(1.0).sqrt();
        let (p, d) = kind.shape(eps, 1.0)?;
        let amplitude = -2.0 * i() * s / (d - i() * s * p);
        Ok(ExactSolution { kind, eps, amplitude })
    }

    pub fn eval(&self, x: f64) -> Result<(C64, C64)> {
        let (p, d) = self.kind.shape(self.eps, x)?;
        Ok((self.amplitude * p, self.amplitude * d))
    }
}

/// Errors `(sup|ψ_h − ψ|, sup ε|ψ_h′ − ψ′|)` over the nodes and the
/// continuum `[0, x₁]`.
pub fn sup_errors(sol: &HybridSolution, exact: &ExactSolution) -> Result<(f64, f64)> {
    let mut ep = 0.0f64;
    let mut ed = 0.0f64;
    for ((x, p), d) in sol.nodes.iter().zip(&sol.psi).zip(&sol.eps_dpsi) {
        let (qp, qd) = exact.eval(*x)?;
        ep = ep.max((p - qp).norm());
        ed = ed.max((d - qd).norm());
    }
    let (sp, sd) = shape_sup(sol.kind, sol.eps, sol.x1)?;
    let da = (sol.left_amplitude - exact.amplitude).norm();
    Ok((ep.max(da * sp), ed.max(da * sd)))
}

/// Closed-form turning-region solution usable on either side of a matching point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Piece {
    /// `a(x) = x`
    AiryLinear,
    /// `a(x) = k₁x² + k₂x`
    PcfQuadratic { k1: f64, k2: f64 },
}

impl Piece {
    pub fn a(&self, x: f64) -> f64 {
        match *self {
            Piece::AiryLinear => x,
            Piece::PcfQuadratic { k1, k2 } => k1 * x * x + k2 * x,
        }
    }

    /// The solution decaying into `x → −∞`, as `(ψ, εψ′)`.
    fn decaying(&self, eps: f64, x: f64) -> Result<(f64, f64)> {
        match *self {
            Piece::AiryLinear => {
                let p = airy(-x * eps.powf(-2.0 / 3.0));
                Ok((p.ai, -eps.cbrt() * p.ai_prime))
            }
            Piece::PcfQuadratic { k1, k2 } => {
                let pp = PcfParams::new(k1, k2, eps)?;
                let v = scaled_at(pp.nu(), pp.z(x), &PcfBudget::default())?;
                Ok((v.u_over_h, eps * pp.dz_dx() * v.du_over_h))
            }
        }
    }

    /// A real fundamental system, as two `(ψ, εψ′)` pairs.
    fn basis(&self, eps: f64, x: f64) -> Result<[(f64, f64); 2]> {
        match *self {
            Piece::AiryLinear => {
                let y = -x * eps.powf(-2.0 / 3.0);
                let (a, b) = (airy(y), airy_bi(y));
                let e = -eps.cbrt();
                Ok([(a.ai, e * a.ai_prime), (b.ai, e * b.ai_prime)])
            }
            Piece::PcfQuadratic { k1, k2 } => {
                let pp = PcfParams::new(k1, k2, eps)?;
                let v = pcf_even_odd(pp.nu(), pp.z(x), &PcfBudget::default())?;
                let e = eps * pp.dz_dx();
                Ok([(v.u1, e * v.du1), (v.u2, e * v.du2)])
            }
        }
    }
}

/// Two closed-form pieces, `C¹`-matched at `x_m` and scaled to the transparent condition at `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPiece {
    pub left: Piece,
    pub right: Piece,
    pub x_m: f64,
    pub eps: f64,
    /// Amplitudes of the right basis.
    pub coeffs: [f64; 2],
    pub gamma: C64,
}

pub fn match_two_piece(left: Piece, right: Piece, x_m: f64, eps: f64) -> Result<TwoPiece> {
    if !(x_m < 1.0 && eps > 0.0) {
        return Err(Error::Domain(format!(
            "matching needs x_m < 1 and eps > 0 (x_m={x_m}, eps={eps})"
        )));
    }
    let (lp, ld) = left.decaying(eps, x_m)?;
    let [b1, b2] = right.basis(eps, x_m)?;
    let det = b1.0 * b2.1 - b2.0 * b1.1;
    if det.abs() < 1e-300 {
        return Err(Error::SingularMatch(det.abs()));
    }
    let c1 = (lp * b2.1 - b2.0 * ld) / det;
    let c2 = (b1.0 * ld - lp * b1.1) / det;
    let [r1, r2] = right.basis(eps, 1.0)?;
    let (p1, d1) = (c1 * r1.0 + c2 * r2.0, c1 * r1.1 + c2 * r2.1);
    let s = right.a(1.0).sqrt();
    let denom = Complex::new(d1, 0.0) - i() * s * p1;
    if denom.norm() < 1e-300 {
        return Err(Error::SingularAlpha(denom.norm()));
    }
    let gamma = -2.0 * i() * s / denom;
    Ok(TwoPiece {
        left,
        right,
        x_m,
        eps,
        coeffs: [c1, c2],
        gamma,
    })
}

impl TwoPiece {
    /// `(ψ, εψ′)` at `x ≤ 1`.
    pub fn eval(&self, x: f64) -> Result<(C64, C64)> {
        if x > 1.0 {
            return Err(Error::Domain(format!("x = {x} beyond 1")));
        }
        let (p, d) = if x <= self.x_m {
            self.left.decaying(self.eps, x)?
        } else {
            let [b1, b2] = self.right.basis(self.eps, x)?;
            (
                self.coeffs[0] * b1.0 + self.coeffs[1] * b2.0,
                self.coeffs[0] * b1.1 + self.coeffs[1] * b2.1,
            )
        };
        Ok((self.gamma * p, self.gamma * d))
    }
}

/// `max |ψ_a − ψ_b|` over `n + 1` uniform samples of `[lo, hi]`.
pub fn max_difference(a: &TwoPiece, b: &TwoPiece, lo: f64, hi: f64, n: usize) -> Result<f64> {
    let mut m = 0.0f64;
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        m = m.max((a.eval(x)?.0 - b.eval(x)?.0).norm());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn airy_case(eps: f64, h: f64) -> HybridSolution {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let nodes = grid::uniform(0.1, h).unwrap();
        solve_airy(&c, eps, &nodes, PhaseMethod::Exact).unwrap()
    }

    #[test]
    fn boundary_conditions_hold() {
        let s = airy_case(2f64.powi(-6), 1e-2);
        assert!(s.right_bc_residual() < 1e-12);
        assert!(s.left_robin_residual().unwrap() < 1e-12);
        assert!(s.reflection_defect() < 1e-8);
        assert!(s.max_relative_current() < 1e-12);
    }

    #[test]
    fn alpha_is_one_for_matching_data() {
        // W at x = 1 from (ψ, εψ′) = (1, −i) with a = x: α must come out as 1
        let eps: f64 = 0.1;
        let (w1, w2) = (C64::new(1.0, 0.0), C64::new(eps / 4.0, -1.0));
        let alpha = -2.0 * i() / (w2 - (i() + eps / 4.0) * w1);
        assert!((alpha - 1.0).norm() < 1e-15);
    }

    #[test]
    fn ic_scale_invariance() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let nodes = grid::uniform(0.1, 1e-2).unwrap();
        let eps = 2f64.powi(-5);
        let base = solve(&c, eps, &nodes, PhaseMethod::Exact).unwrap();
        for scale in [1e5, 1e-5] {
            let s = solve_with_ic_scale(&c, eps, &nodes, PhaseMethod::Exact, scale).unwrap();
            for (a, b) in base.psi.iter().zip(&s.psi) {
                assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
            }
            assert!((s.alpha * scale - base.alpha).norm() < 1e-12 * base.alpha.norm());
        }
    }

    #[test]
    fn exact_solution_matches_closed_form_at_zero() {
        let c = Coefficient::airy_linear(0.1).unwrap();
        let eps = 2f64.powi(-6);
        let e = ExactSolution::for_model(&c, eps).unwrap();
        let ai = |z: f64| airy(z);
        let y = -eps.powf(-2.0 / 3.0);
        let d = C64::new(eps.powf(-1.0 / 6.0) * ai(y).ai, -eps.powf(1.0 / 6.0) * ai(y).ai_prime);
        let expect = 2.0 * eps.powf(-1.0 / 6.0) * ai(0.0).ai / d;
        assert!((e.eval(0.0).unwrap().0 - expect).norm() < 1e-13 * expect.norm());
        let (p1, d1) = e.eval(1.0).unwrap();
        assert!((d1 - i() * p1 + 2.0 * i()).norm() < 1e-13);
    }

    #[test]
    fn marcher_is_close_to_exact() {
        let eps = 2f64.powi(-8);
        let s = airy_case(eps, 1e-3);
        let e = ExactSolution::for_model(&s.coefficient, eps).unwrap();
        let (ep, ed) = sup_errors(&s, &e).unwrap();
        assert!(ep + ed < 1e-6, "{ep} {ed}");
    }

    #[test]
    fn nearest_node_lookup() {
        let s = airy_case(2f64.powi(-4), 0.25);
        assert_eq!(s.nodes.len(), 5);
        assert_eq!(s.nearest_node(0.1), 0);
        assert_eq!(s.nearest_node(0.2), 0);
        assert_eq!(s.nearest_node(0.3), 1);
        assert_eq!(s.nearest_node(1.0), 4);
    }

    #[test]
    fn sup_finds_airy_peak() {
        let eps = 2f64.powi(-6);
        let (sp, _) = shape_sup(TurningKind::Airy, eps, 0.1).unwrap();
        let peak = eps.powf(-1.0 / 6.0) * airy(crate::specfun::airy::ai_argmax()).ai;
        assert!((sp - peak).abs() < 1e-12 * peak);
    }

    #[test]
    fn two_piece_degenerate_cases() {
        let eps = 2f64.powi(-5);
        let pcf = Piece::PcfQuadratic { k1: -0.5, k2: 1.0 };
        let a = match_two_piece(Piece::AiryLinear, pcf, 0.0, eps).unwrap();
        let b = match_two_piece(Piece::AiryLinear, pcf, 0.0, eps).unwrap();
        assert_eq!(max_difference(&a, &b, 0.0, 1.0, 50).unwrap(), 0.0);
        let l = match_two_piece(Piece::AiryLinear, Piece::AiryLinear, 0.3, eps).unwrap();
        assert!(l.coeffs[1].abs() < 1e-12 && (l.coeffs[0] - 1.0).abs() < 1e-12);
        let c = Coefficient::airy_linear(0.1).unwrap();
        let e = ExactSolution::for_model(&c, eps).unwrap();
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            let want = e.eval(x).unwrap().0;
            assert!((l.eval(x).unwrap().0 - want).norm() < 1e-10 * want.norm().max(1.0));
        }
    }

    #[test]
    fn two_piece_is_c1_at_interface() {
        let eps = 2f64.powi(-5);
        let t = match_two_piece(Piece::AiryLinear, Piece::PcfQuadratic { k1: -0.5, k2: 1.0 }, 0.05, eps).unwrap();
        let (pl, dl) = t.eval(0.05).unwrap();
        let (pr, dr) = t.eval(0.05 + 1e-12).unwrap();
        assert!((pl - pr).norm() < 1e-9 * pl.norm());
        assert!((dl - dr).norm() < 1e-9 * dl.norm().max(pl.norm()));
        let (p1, d1) = t.eval(1.0).unwrap();
        let s = 0.5f64.sqrt();
        assert!((d1 - i() * s * p1 + 2.0 * i() * s).norm() < 1e-12);
    }
}
