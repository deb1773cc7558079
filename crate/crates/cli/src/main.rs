//! `turnwkb`: command line front end for the hybrid solver and its studies.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use turnwkb_core::coefficient::{Poly, Region};
use turnwkb_core::experiments::{
    resolve_phase, run_approx_study, run_bench, run_blowup, run_convergence, PotentialSel, StudyConfig, StudyKind,
};
use turnwkb_core::hybrid::{self, observables_of};
use turnwkb_core::phase::PhaseMethod;
use turnwkb_core::{grid, Coefficient};

#[derive(Parser, Debug)]
#[command(name = "turnwkb", version, about = "Hybrid turning-point and WKB-marching solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one scattering problem and export the solution.
    Solve(Common),
    /// Error table over an (eps, h) grid with fitted orders.
    Convergence(Common),
    /// Fit the growth of max|psi| and max eps|psi'| in eps.
    Blowup(Common),
    /// Marcher versus Dormand-Prince at matched accuracy.
    Bench(Common),
    /// Linear-approximation error over an (eps, x1) grid.
    Approx(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// `airy`, `pcf`, or a TOML potential file.
    #[arg(long, default_value = "airy")]
    potential: String,
    /// Comma-separated list; entries may be written `2^-k`.
    #[arg(long, value_parser = parse_list)]
    eps: List,
    #[arg(long, value_parser = parse_list, default_value = "1e-3")]
    h: List,
    /// Transition point; `approx` accepts a list.
    #[arg(long, value_parser = parse_list, default_value = "0.1")]
    x1: List,
    /// `exact`, `simpson:<m>` or `adaptive:<tol>`.
    #[arg(long, default_value = "exact")]
    phase: PhaseMethod,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    /// Left interface of the composite potential in `approx`.
    #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
    x0: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_value(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some((b, e)) = s.split_once('^') {
        let b: f64 = b.parse().map_err(|_| format!("bad base in '{s}'"))?;
        let e: f64 = e.parse().map_err(|_| format!("bad exponent in '{s}'"))?;
        return Ok(b.powf(e));
    }
    s.parse().map_err(|_| format!("not a number: '{s}'"))
}

#[derive(Clone, Debug, PartialEq)]
struct List(Vec<f64>);

fn parse_list(s: &str) -> Result<List, String> {
    let v = s
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(parse_value)
        .collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(List(v))
}

/// User potential in TOML.
#[derive(Debug, Deserialize)]
struct PotentialFile {
    x1: f64,
    region: Region<f64>,
    /// Ascending coefficients of `a` on `[x1, 1]`.
    coefficients: Vec<f64>,
}

fn load_potential(sel: &str, x1: f64) -> anyhow::Result<PotentialSel> {
    match sel {
        "airy" | "airy-linear" => Ok(PotentialSel::AiryLinear),
        "pcf" | "pcf-quadratic" => Ok(PotentialSel::PcfQuadratic),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading potential file {path}"))?;
            let f: PotentialFile = toml::from_str(&text).with_context(|| format!("parsing potential file {path}"))?;
            if f.x1 != x1 {
                eprintln!("note: using x1 = {} from {path}", f.x1);
            }
            Ok(PotentialSel::Custom(Coefficient::new(
                f.region,
                f.x1,
                Poly::new(f.coefficients),
            )?))
        }
    }
}

fn single(v: &[f64], name: &str) -> anyhow::Result<f64> {
    match v {
        [x] => Ok(*x),
        _ => bail!("--{name} takes exactly one value here, got {}", v.len()),
    }
}

fn config(kind: StudyKind, a: &Common) -> anyhow::Result<StudyConfig> {
    let x1 = single(&a.x1.0, "x1")?;
    let potential = load_potential(&a.potential, x1)?;
    let x1 = match &potential {
        PotentialSel::Custom(c) => c.x1,
        _ => x1,
    };
    let mut cfg = StudyConfig::new(kind, potential, a.eps.0.clone(), a.h.0.clone(), x1);
    cfg.phase = a.phase;
    cfg.repeats = a.repeats;
    cfg.x0 = a.x0;
    Ok(cfg.checked()?)
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

/// Sidecar path for fitted quantities next to a CSV table.
fn fit_path(out: &Path) -> PathBuf {
    out.with_extension("fit.json")
}

fn write_table<R: Serialize, F: Serialize>(out: &Path, format: Format, rows: &[R], fit: &F) -> anyhow::Result<()> {
    match format {
        Format::Json => {
            let mut w = create(out)?;
            serde_json::to_writer_pretty(&mut w, &serde_json::json!({ "fit": fit, "rows": rows }))?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(create(out)?);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
            let mut f = create(&fit_path(out))?;
            serde_json::to_writer_pretty(&mut f, fit)?;
            writeln!(f)?;
        }
    }
    eprintln!("{}", serde_json::to_string(fit)?);
    Ok(())
}

#[derive(Serialize)]
struct SolutionHeader {
    eps: f64,
    h: f64,
    x1: f64,
    phase_method: String,
    alpha_re: f64,
    alpha_im: f64,
}

#[derive(Serialize)]
struct SolutionRow {
    x: f64,
    re_psi: f64,
    im_psi: f64,
    re_eps_dpsi: f64,
    im_eps_dpsi: f64,
    n: f64,
    j: f64,
}

fn solve(a: &Common) -> anyhow::Result<()> {
    let cfg = config(StudyKind::Solve, a)?;
    let eps = single(&cfg.eps, "eps")?;
    let h = single(&cfg.h, "h")?;
    let c = cfg.potential.coefficient(cfg.x1)?;
    let phase = resolve_phase(&c, cfg.phase);
    let nodes = grid::uniform(c.x1, h)?;
    let sol = hybrid::solve(&c, eps, &nodes, phase)?;
    let header = SolutionHeader {
        eps,
        h,
        x1: c.x1,
        phase_method: phase.to_string(),
        alpha_re: sol.alpha.re,
        alpha_im: sol.alpha.im,
    };
    let left = (c.x1 / h).ceil() as usize;
    let mut xs: Vec<f64> = (0..left).map(|k| k as f64 * h).filter(|x| *x < c.x1).collect();
    xs.extend_from_slice(&sol.nodes);
    let mut rows = Vec::with_capacity(xs.len());
    for x in xs {
        let (p, d) = sol.eval(x)?;
        let (n, j) = observables_of(p, d);
        rows.push(SolutionRow {
            x,
            re_psi: p.re,
            im_psi: p.im,
            re_eps_dpsi: d.re,
            im_eps_dpsi: d.im,
            n,
            j,
        });
    }
    match a.format {
        Format::Json => {
            let mut w = create(&a.out)?;
            serde_json::to_writer_pretty(&mut w, &serde_json::json!({ "header": header, "rows": rows }))?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut w = create(&a.out)?;
            writeln!(w, "# {}", serde_json::to_string(&header)?)?;
            let mut cw = csv::Writer::from_writer(w);
            for r in &rows {
                cw.serialize(r)?;
            }
            cw.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve(a) => solve(&a),
        Command::Convergence(a) => {
            let r = run_convergence(&config(StudyKind::Convergence, &a)?)?;
            let fit = serde_json::json!({ "order_h": r.order_h, "order_eps": r.order_eps });
            write_table(&a.out, a.format, &r.records, &fit)
        }
        Command::Blowup(a) => {
            let r = run_blowup(&config(StudyKind::Blowup, &a)?)?;
            let fit = serde_json::json!({
                "slope_psi": r.slope_psi,
                "slope_psi_se": r.slope_psi_se,
                "slope_eps_dpsi": r.slope_eps_dpsi,
                "slope_eps_dpsi_se": r.slope_eps_dpsi_se,
                "eps_dpsi_spread": r.eps_dpsi_spread(),
            });
            write_table(&a.out, a.format, &r.rows, &fit)
        }
        Command::Bench(a) => {
            let r = run_bench(&config(StudyKind::Bench, &a)?)?;
            let fit = serde_json::json!({
                "h": r.h,
                "marcher_spread": r.marcher_spread(),
                "dp45_growth": r.dp45_growth(),
            });
            write_table(&a.out, a.format, &r.rows, &fit)
        }
        Command::Approx(a) => {
            let r = run_approx_study(&a.eps.0, &a.x1.0, a.x0)?;
            let fit = serde_json::json!({
                "x0": r.x0,
                "exponent_x1": r.exponent_x1,
                "exponent_eps": r.exponent_eps,
            });
            write_table(&a.out, a.format, &r.rows, &fit)
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    e.chain()
        .find_map(|c| c.downcast_ref::<turnwkb_core::Error>())
        .map_or(1, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli).map_err(|e| anyhow!(e)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
