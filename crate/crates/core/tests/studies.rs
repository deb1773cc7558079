use turnwkb_core::baseline::{rk_solve, RkMode};
use turnwkb_core::experiments::{run_blowup, run_convergence, PotentialSel, StudyConfig, StudyKind};
use turnwkb_core::grid;
use turnwkb_core::hybrid::{self, TurningKind};
use turnwkb_core::phase::PhaseMethod;
use turnwkb_core::Coefficient;

fn eps_range(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

#[test]
fn alpha_stays_in_band() {
    let airy = Coefficient::airy_linear(0.1).unwrap();
    let pcf = PotentialSel::PcfQuadratic.coefficient(0.1).unwrap();
    for (c, eps, phase) in [
        (&airy, eps_range(4, 12), PhaseMethod::Exact),
        (&pcf, eps_range(4, 9), PhaseMethod::Adaptive(1e-12)),
    ] {
        let nodes = grid::uniform(0.1, 2f64.powi(-7)).unwrap();
        for e in eps {
            let a = hybrid::solve(c, e, &nodes, phase).unwrap().alpha.norm();
            assert!((0.1..=10.0).contains(&a), "eps={e}: |alpha| = {a}");
        }
    }
}

#[test]
fn derivative_stays_bounded() {
    let cfg = StudyConfig::new(
        StudyKind::Blowup,
        PotentialSel::AiryLinear,
        eps_range(4, 12),
        vec![1e-3],
        0.1,
    );
    let r = run_blowup(&cfg).unwrap();
    assert!(r.slope_eps_dpsi.abs() < 0.05, "{}", r.slope_eps_dpsi);
    assert!(r.eps_dpsi_spread() < 2.0);
    assert!((r.slope_psi + 1.0 / 6.0).abs() < 0.02, "{}", r.slope_psi);
}

#[test]
fn error_records_are_well_formed() {
    let cfg = StudyConfig::new(
        StudyKind::Convergence,
        PotentialSel::PcfQuadratic,
        eps_range(4, 6),
        vec![2f64.powi(-4), 2f64.powi(-6)],
        0.1,
    );
    let r = run_convergence(&cfg).unwrap();
    assert_eq!(r.records.len(), 6);
    for rec in &r.records {
        assert!(rec.err_psi_inf >= 0.0 && rec.err_eps_dpsi_inf >= 0.0 && rec.runtime_s >= 0.0);
        assert!(rec.phase_method.starts_with("adaptive"));
    }
    let again = run_convergence(&cfg).unwrap();
    for (a, b) in r.records.iter().zip(&again.records) {
        assert_eq!(
            (a.eps, a.h, a.err_psi_inf, a.err_eps_dpsi_inf),
            (b.eps, b.h, b.err_psi_inf, b.err_eps_dpsi_inf)
        );
    }
}

#[test]
fn rk4_and_dp45_agree() {
    let c = Coefficient::airy_linear(0.1).unwrap();
    for e in eps_range(4, 6) {
        let (p0, d0) = TurningKind::of(&c).shape(e, 0.1).unwrap();
        let a = rk_solve(&c, e, [p0, d0], RkMode::Rk4 { step: 1e-6 }, false).unwrap();
        let b = rk_solve(&c, e, [p0, d0], RkMode::Dp45 { tol: 1e-11 }, false).unwrap();
        for k in 0..2 {
            assert!(
                (a.terminal[k] - b.terminal[k]).abs() < 1e-8,
                "eps={e}: {:?} vs {:?}",
                a.terminal,
                b.terminal
            );
        }
    }
}
