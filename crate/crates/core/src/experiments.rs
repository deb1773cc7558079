//! Study runners behind the command line: convergence tables, blow-up fits,
//! the marcher versus Dormand-Prince benchmark and the linear-approximation
//! study.

use std::time::Instant;

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::baseline::{rk_solve, RkMode};
use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::fit;
use crate::grid;
use crate::hybrid::{self, match_two_piece, shape_sup, ExactSolution, HybridSolution, Piece, TurningKind};
use crate::phase::PhaseMethod;
use crate::C64;

/// Errors below this are treated as round-off and left out of slope fits.
pub const ROUNDOFF_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Solve,
    Convergence,
    Blowup,
    Bench,
    Approx,
}

/// Built-in model potentials or a user coefficient.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSel {
    AiryLinear,
    PcfQuadratic,
    Custom(Coefficient<f64>),
}

impl PotentialSel {
    /// Coefficient for this selector; the model potentials use `x1`.
    pub fn coefficient(&self, x1: f64) -> Result<Coefficient<f64>> {
        match self {
            PotentialSel::AiryLinear => Coefficient::airy_linear(x1),
            PotentialSel::PcfQuadratic => Coefficient::pcf_quadratic(-0.5, 1.0, x1),
            PotentialSel::Custom(c) => Ok(c.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub kind: StudyKind,
    pub potential: PotentialSel,
    pub eps: Vec<f64>,
    pub h: Vec<f64>,
    pub x1: f64,
    pub phase: PhaseMethod,
    pub repeats: usize,
    /// Left end of the approximation study's output window.
    pub x0: f64,
}

impl StudyConfig {
    pub fn new(kind: StudyKind, potential: PotentialSel, eps: Vec<f64>, h: Vec<f64>, x1: f64) -> Self {
        StudyConfig {
            kind,
            potential,
            eps,
            h,
            x1,
            phase: PhaseMethod::Exact,
            repeats: 5,
            x0: -0.5,
        }
    }

    /// Rejects empty or non-positive lists and sorts `h` descending.
    pub fn checked(mut self) -> Result<Self> {
        if self.eps.is_empty() || self.eps.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::Config("eps list must be non-empty and positive".into()));
        }
        if self.kind != StudyKind::Approx && (self.h.is_empty() || self.h.iter().any(|h| !(*h > 0.0))) {
            return Err(Error::Config("h list must be non-empty and positive".into()));
        }
        self.h.sort_by(|a, b| b.total_cmp(a));
        if self.repeats == 0 {
            self.repeats = 1;
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub eps: f64,
    pub h: f64,
    pub phase_method: String,
    pub err_psi_inf: f64,
    pub err_eps_dpsi_inf: f64,
    pub runtime_s: f64,
}

impl ErrorRecord {
    /// `‖e_h‖∞ + ε‖e_h′‖∞`
    pub fn total(&self) -> f64 {
        self.err_psi_inf + self.err_eps_dpsi_inf
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub records: Vec<ErrorRecord>,
    /// Fitted order in `h` for each `ε`.
    pub order_h: Vec<(f64, Option<f64>)>,
    /// Fitted order in `ε` for each `h`.
    pub order_eps: Vec<(f64, Option<f64>)>,
}

impl ConvergenceReport {
    pub fn record(&self, eps: f64, h: f64) -> Option<&ErrorRecord> {
        self.records.iter().find(|r| r.eps == eps && r.h == h)
    }
}

/// Tolerance standing in for the exact phase on non-affine bodies.
pub const QUADRATURE_EXACT_TOL: f64 = 1e-12;

/// `Exact` on a body without a closed-form phase becomes adaptive quadrature.
pub fn resolve_phase(c: &Coefficient<f64>, method: PhaseMethod) -> PhaseMethod {
    match method {
        PhaseMethod::Exact if !c.is_affine() => PhaseMethod::Adaptive(QUADRATURE_EXACT_TOL),
        m => m,
    }
}

/// Solve plus error against the closed-form solution.
pub fn error_record(
    c: &Coefficient<f64>,
    eps: f64,
    h: f64,
    phase: PhaseMethod,
) -> Result<(ErrorRecord, HybridSolution)> {
    let phase = resolve_phase(c, phase);
    let nodes = grid::uniform(c.x1, h)?;
    let t = Instant::now();
    let sol = hybrid::solve(c, eps, &nodes, phase)?;
    let runtime_s = t.elapsed().as_secs_f64();
    let exact = ExactSolution::for_model(c, eps)?;
    let (ep, ed) = hybrid::sup_errors(&sol, &exact)?;
    Ok((
        ErrorRecord {
            eps,
            h,
            phase_method: phase.to_string(),
            err_psi_inf: ep,
            err_eps_dpsi_inf: ed,
            runtime_s,
        },
        sol,
    ))
}

pub fn run_convergence(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    let c = cfg.potential.coefficient(cfg.x1)?;
    let points: Vec<(f64, f64)> = cfg
        .eps
        .iter()
        .flat_map(|&e| cfg.h.iter().map(move |&h| (e, h)))
        .collect();
    let records = points
        .par_iter()
        .map(|&(eps, h)| error_record(&c, eps, h, cfg.phase).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    let order_h = cfg
        .eps
        .iter()
        .map(|&e| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                records.iter().filter(|r| r.eps == e).map(|r| (r.h, r.total())).unzip();
            (e, fit::loglog_slope(&xs, &ys, ROUNDOFF_FLOOR))
        })
        .collect();
    let order_eps = cfg
        .h
        .iter()
        .map(|&h| {
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                records.iter().filter(|r| r.h == h).map(|r| (r.eps, r.total())).unzip();
            (h, fit::loglog_slope(&xs, &ys, ROUNDOFF_FLOOR))
        })
        .collect();
    Ok(ConvergenceReport {
        records,
        order_h,
        order_eps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupRow {
    pub eps: f64,
    pub max_psi: f64,
    pub max_eps_dpsi: f64,
    pub alpha_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub rows: Vec<BlowupRow>,
    pub slope_psi: f64,
    pub slope_psi_se: f64,
    pub slope_eps_dpsi: f64,
    pub slope_eps_dpsi_se: f64,
}

impl BlowupReport {
    /// `max/min` of `ε‖ψ′‖∞` across the sweep.
    pub fn eps_dpsi_spread(&self) -> f64 {
        let v = self.rows.iter().map(|r| r.max_eps_dpsi);
        let (lo, hi) = v.fold((f64::INFINITY, 0.0f64), |(l, h), x| (l.min(x), h.max(x)));
        hi / lo
    }
}

pub fn run_blowup(cfg: &StudyConfig) -> Result<BlowupReport> {
    if cfg.eps.len() < 2 {
        return Err(Error::Config("blow-up fit needs at least two eps values".into()));
    }
    let c = cfg.potential.coefficient(cfg.x1)?;
    let h = cfg.h[cfg.h.len() - 1];
    let nodes = grid::uniform(c.x1, h)?;
    let rows = cfg
        .eps
        .par_iter()
        .map(|&eps| {
            let sol = hybrid::solve(&c, eps, &nodes, resolve_phase(&c, cfg.phase))?;
            let (mp, md) = sol.sup_norms()?;
            Ok(BlowupRow {
                eps,
                max_psi: mp,
                max_eps_dpsi: md,
                alpha_abs: sol.alpha.norm(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let le: Vec<f64> = rows.iter().map(|r| r.eps.ln()).collect();
    let lp: Vec<f64> = rows.iter().map(|r| r.max_psi.ln()).collect();
    let ld: Vec<f64> = rows.iter().map(|r| r.max_eps_dpsi.ln()).collect();
    let (slope_psi, slope_psi_se) = fit::slope_with_se(&le, &lp);
    let (slope_eps_dpsi, slope_eps_dpsi_se) = fit::slope_with_se(&le, &ld);
    Ok(BlowupReport {
        rows,
        slope_psi,
        slope_psi_se,
        slope_eps_dpsi,
        slope_eps_dpsi_se,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub eps: f64,
    pub marcher_runtime_s: f64,
    pub marcher_error: f64,
    pub dp45_runtime_s: f64,
    pub dp45_error: f64,
    pub dp45_tol: f64,
    pub dp45_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub h: f64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// `max/min` of the marcher runtimes.
    pub fn marcher_spread(&self) -> f64 {
        let v: Vec<f64> = self.rows.iter().map(|r| r.marcher_runtime_s).collect();
        v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// dp45 runtime at the smallest `ε` over that at the largest.
    pub fn dp45_growth(&self) -> f64 {
        let by_eps = |pick: fn(f64, f64) -> bool| {
            self.rows.iter().fold(None::<&BenchRow>, |acc, r| match acc {
                Some(a) if !pick(r.eps, a.eps) => Some(a),
                _ => Some(r),
            })
        };
        let small = by_eps(|a, b| a < b).unwrap();
        let large = by_eps(|a, b| a > b).unwrap();
        small.dp45_runtime_s / large.dp45_runtime_s
    }
}

/// Median over `repeats` samples after one warm-up. Each sample times a batch
/// of calls long enough to sit well above the clock resolution.
pub fn median_runtime<F: FnMut() -> Result<()>>(mut f: F, repeats: usize) -> Result<f64> {
    let t = Instant::now();
    f()?;
    let once = t.elapsed().as_secs_f64().max(1e-9);
    let batch = ((0.02 / once).ceil() as usize).clamp(1, 10_000);
    let mut samples = Vec::with_capacity(repeats);
    for _ in 0..repeats.max(1) {
        let t = Instant::now();
        for _ in 0..batch {
            f()?;
        }
        samples.push(t.elapsed().as_secs_f64() / batch as f64);
    }
    samples.sort_by(|a, b| a.total_cmp(b));
    Ok(samples[samples.len() / 2])
}

/// Dormand-Prince solution of the same problem, scaled to the right
/// boundary condition, and its error in the marcher's norm.
pub fn dp45_error(c: &Coefficient<f64>, eps: f64, tol: f64) -> Result<(f64, usize)> {
    let kind = TurningKind::of(c);
    let (p0, d0) = kind.shape(eps, c.x1)?;
    let run = rk_solve(c, eps, [p0, d0], RkMode::Dp45 { tol }, true)?;
    let s = c.a(1.0).sqrt();
    let [p1, d1] = run.terminal;
    let i = Complex::new(0.0, 1.0);
    let alpha: C64 = -2.0 * i * s / (Complex::new(d1, 0.0) - i * s * p1);
    let exact = ExactSolution::for_model(c, eps)?;
    let (mut ep, mut ed) = (0.0f64, 0.0f64);
    for (x, y) in &run.trajectory {
        let (qp, qd) = exact.eval(*x)?;
        ep = ep.max((alpha * y[0] - qp).norm());
        ed = ed.max((alpha * y[1] - qd).norm());
    }
    let (sp, sd) = shape_sup(kind, eps, c.x1)?;
    let da = (alpha - exact.amplitude).norm();
    Ok((ep.max(da * sp) + ed.max(da * sd), run.accepted))
}

/// Bisects `log tol` until the dp45 error is within a factor 2 of `target`.
/// Returns `(tol, error, steps)` of the closest attempt.
pub fn match_tolerance(c: &Coefficient<f64>, eps: f64, target: f64) -> Result<(f64, f64, usize)> {
    let (mut lo, mut hi) = (1e-14f64.ln(), 1e-2f64.ln());
    let mut best: Option<(f64, f64, usize)> = None;
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let tol = mid.exp();
        let (err, steps) = dp45_error(c, eps, tol)?;
        let ratio = err / target;
        if best.is_none_or(|(_, e, _)| (e / target).ln().abs() > ratio.ln().abs()) {
            best = Some((tol, err, steps));
        }
        if (0.5..=2.0).contains(&ratio) {
            break;
        }
        if ratio > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(best.unwrap())
}

pub fn run_bench(cfg: &StudyConfig) -> Result<BenchReport> {
    let c = cfg.potential.coefficient(cfg.x1)?;
    if !c.is_affine() {
        return Err(Error::Config(
            "the benchmark runs on the linear potential with exact phase".into(),
        ));
    }
    let h = cfg.h[cfg.h.len() - 1];
    let nodes = grid::uniform(c.x1, h)?;
    let mut rows = Vec::new();
    for &eps in &cfg.eps {
        let (rec, _) = error_record(&c, eps, h, PhaseMethod::Exact)?;
        let marcher_error = rec.total();
        let marcher_runtime_s = median_runtime(
            || hybrid::solve(&c, eps, &nodes, PhaseMethod::Exact).map(|_| ()),
            cfg.repeats,
        )?;
        let (tol, dp45_error, dp45_steps) = match_tolerance(&c, eps, marcher_error)?;
        let kind = TurningKind::of(&c);
        let (p0, d0) = kind.shape(eps, c.x1)?;
        let dp45_runtime_s = median_runtime(
            || rk_solve(&c, eps, [p0, d0], RkMode::Dp45 { tol }, false).map(|_| ()),
            cfg.repeats,
        )?;
        rows.push(BenchRow {
            eps,
            marcher_runtime_s,
            marcher_error,
            dp45_runtime_s,
            dp45_error,
            dp45_tol: tol,
            dp45_steps,
        });
    }
    Ok(BenchReport { h, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxRow {
    pub eps: f64,
    pub x1: f64,
    pub max_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub x0: f64,
    pub rows: Vec<ApproxRow>,
    pub exponent_x1: f64,
    pub exponent_eps: f64,
}

/// Samples of `[0, 1]` for `max|E|`.
pub const APPROX_SAMPLES: usize = 2000;

/// `max_{[0,1]} |E|` between the original composite potential (linear left
/// of 0, quadratic right of it) and its linear approximation up to `x1`.
pub fn approx_error(eps: f64, x1: f64) -> Result<f64> {
    let right = Piece::PcfQuadratic { k1: -0.5, k2: 1.0 };
    let original = match_two_piece(Piece::AiryLinear, right, 0.0, eps)?;
    let approx = match_two_piece(Piece::AiryLinear, right, x1, eps)?;
    hybrid::max_difference(&original, &approx, 0.0, 1.0, APPROX_SAMPLES)
}

/// `max|E|` over the `(ε, x₁)` product grid and a plane fit of both exponents.
pub fn run_approx_study(eps: &[f64], x1s: &[f64], x0: f64) -> Result<ApproxReport> {
    let points: Vec<(f64, f64)> = eps.iter().flat_map(|&e| x1s.iter().map(move |&x| (e, x))).collect();
    let rows = points
        .par_iter()
        .map(|&(e, x1)| {
            Ok(ApproxRow {
                eps: e,
                x1,
                max_error: approx_error(e, x1)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.x1).collect();
    let es: Vec<f64> = rows.iter().map(|r| r.eps).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.max_error).collect();
    let (exponent_x1, exponent_eps) = fit::loglog_plane(&xs, &es, &ys);
    Ok(ApproxReport {
        x0,
        rows,
        exponent_x1,
        exponent_eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_checks() {
        let cfg = StudyConfig::new(
            StudyKind::Convergence,
            PotentialSel::AiryLinear,
            vec![0.1],
            vec![0.01, 0.1],
            0.1,
        );
        let c = cfg.checked().unwrap();
        assert_eq!(c.h, vec![0.1, 0.01]);
        let bad = StudyConfig::new(StudyKind::Convergence, PotentialSel::AiryLinear, vec![], vec![0.1], 0.1);
        assert!(bad.checked().is_err());
    }

    #[test]
    fn small_convergence_table() {
        let cfg = StudyConfig::new(
            StudyKind::Convergence,
            PotentialSel::AiryLinear,
            vec![2f64.powi(-5), 2f64.powi(-6)],
            vec![2f64.powi(-4), 2f64.powi(-5), 2f64.powi(-6)],
            0.1,
        );
        let r = run_convergence(&cfg).unwrap();
        assert_eq!(r.records.len(), 6);
        for rec in &r.records {
            assert!(rec.err_psi_inf >= 0.0 && rec.err_eps_dpsi_inf >= 0.0);
        }
        for (_, p) in &r.order_h {
            assert!(p.unwrap() > 1.0);
        }
    }

    #[test]
    fn approx_error_vanishes_with_x1() {
        let e = approx_error(2f64.powi(-5), 1e-9).unwrap();
        assert!(e < 1e-12, "{e}");
        let e = approx_error(2f64.powi(-5), 0.05).unwrap();
        assert!(e > 1e-6);
    }

    #[test]
    fn median_runtime_is_positive() {
        let t = median_runtime(|| Ok(()), 3).unwrap();
        assert!(t >= 0.0);
    }
}
