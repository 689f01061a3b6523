//! Command-line front end: simulation, c-tilde tables, parameter sweeps,
//! law checks, and entanglement profiles, all emitting plot-ready CSV or
//! JSON. Identical invocations produce byte-identical files.

mod state_spec;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use coinwalk::catalog::{uniform_grid, Family};
use coinwalk::entanglement::q_lattice_profile;
use coinwalk::io;
use coinwalk::lab::{
    distribution_symmetry, fit_least_squares, mean_law_check, q_time_series, run_sweep,
    sweep_and_fit_a0, variance_law_check, FitModel, SweepReport,
};
use coinwalk::spectral::{c1_tilde, c2_tilde, CtildeCache, QuadratureSpec};
use coinwalk::walk::{StepConfig, WalkState, WEIGHT_THRESHOLD};

use state_spec::{entry_for_checks, resolve_state, ResolvedState};

#[derive(Parser)]
#[command(
    name = "coinwalk",
    version,
    about = "Multi-coin discrete-time quantum walk simulator and analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileMode {
    Lattice,
    Timeseries,
}

#[derive(Args)]
struct CommonOpts {
    /// Output file; stdout when omitted. Files are written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for the data file.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Quadrature grid size; default auto = max(64, 32 t).
    #[arg(long, global = true)]
    quad_points: Option<usize>,
    /// Lattice size; default auto = 2 t + 21 (start at the central site).
    #[arg(long, global = true)]
    lattice_size: Option<usize>,
    /// Seed for the random-state test generator (`--state random:coins=M`).
    #[arg(long, global = true, default_value = "0")]
    seed: u64,
}

#[derive(Args)]
struct StateOpts {
    /// Initial coin state: `gammaGHZ:gamma=0.3`, `psi6:delta=2`,
    /// `psi78:delta=2`, `phi1:alpha3=0.5`, `phi2:beta1=0.25`,
    /// `file:<path>`, or `random:coins=M`.
    #[arg(long)]
    state: String,
    /// Expected number of coin qubits; errors if the state disagrees.
    #[arg(long)]
    coins: Option<usize>,
    /// Coin qubit the toss and conditional shift act on (1-based).
    #[arg(long, default_value = "1")]
    active_qubit: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a walk and write the position distribution.
    Simulate {
        #[command(flatten)]
        state: StateOpts,
        /// Number of steps.
        #[arg(long, default_value = "50")]
        steps: usize,
        /// Also write the full amplitude snapshot (coin_index,site,re,im).
        #[arg(long)]
        snapshot_out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Tabulate c1_tilde(t) and c2_tilde(t) for t = 0..=t_max.
    Ctilde {
        #[arg(long, default_value = "100")]
        t_max: usize,
        /// Append least-squares fit lines (a0, a1 and b0) over t >= 1.
        #[arg(long)]
        fit: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Sweep a catalog family and fit A0 in mean^2 = A0 (1 - IC^2).
    Sweep {
        /// Family: gammaGHZ, psi6, psi78, phi1, phi1b, phi2.
        #[arg(long)]
        family: String,
        /// Grid as min,max,count; default is the family's natural grid.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value = "1")]
        active_qubit: usize,
        #[arg(long, default_value = "50")]
        steps: usize,
        /// Where to put the JSON fit summary (default: derived from --out).
        #[arg(long)]
        fit_out: Option<PathBuf>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check the mean law `<x>^2 = c1_tilde^2 (1 - IC^2)` for one state.
    Meancheck {
        #[command(flatten)]
        state: StateOpts,
        #[arg(long, default_value = "50")]
        steps: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check the variance law for one state.
    Varcheck {
        #[command(flatten)]
        state: StateOpts,
        #[arg(long, default_value = "50")]
        steps: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Per-site global entanglement Q: lattice profile or time series.
    Qprofile {
        #[command(flatten)]
        state: StateOpts,
        #[arg(long, value_enum, default_value = "lattice")]
        mode: ProfileMode,
        /// Steps (lattice mode) or maximum time (timeseries mode).
        #[arg(long, default_value = "50")]
        steps: usize,
        /// Sites for timeseries mode, comma-separated; default
        /// start, start-10, start-20.
        #[arg(long)]
        sites: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Left/right asymmetry of the position and Q distributions.
    Symmetry {
        #[command(flatten)]
        state: StateOpts,
        #[arg(long, default_value = "50")]
        steps: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            state,
            steps,
            snapshot_out,
            common,
        } => cmd_simulate(state, steps, snapshot_out, common),
        Command::Ctilde { t_max, fit, common } => cmd_ctilde(t_max, fit, common),
        Command::Sweep {
            family,
            grid,
            active_qubit,
            steps,
            fit_out,
            common,
        } => cmd_sweep(family, grid, active_qubit, steps, fit_out, common),
        Command::Meancheck {
            state,
            steps,
            common,
        } => cmd_meancheck(state, steps, common),
        Command::Varcheck {
            state,
            steps,
            common,
        } => cmd_varcheck(state, steps, common),
        Command::Qprofile {
            state,
            mode,
            steps,
            sites,
            common,
        } => cmd_qprofile(state, mode, steps, sites, common),
        Command::Symmetry {
            state,
            steps,
            common,
        } => cmd_symmetry(state, steps, common),
    }
}

/// Writes to `--out` via a temp-file rename, or to stdout.
fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut file =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        file.write_all(bytes)?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn resolve(state: &StateOpts, common: &CommonOpts) -> Result<ResolvedState> {
    let resolved = resolve_state(&state.state, common.seed)?;
    if let Some(expected) = state.coins {
        if expected != resolved.coin.num_coins() {
            bail!(
                "coin count mismatch: --coins {expected} but state `{}` has {} coin qubits",
                resolved.label,
                resolved.coin.num_coins()
            );
        }
    }
    Ok(resolved)
}

/// Builds and evolves the walk; honors `--lattice-size` and refuses
/// geometries that could wrap.
fn evolve_walk(
    resolved: &ResolvedState,
    active_qubit: usize,
    steps: usize,
    common: &CommonOpts,
) -> Result<WalkState> {
    let state = match common.lattice_size {
        Some(n) => {
            let required = 2 * steps + 2;
            if n < required {
                bail!(
                    "lattice of {n} sites would wrap after {steps} steps; need at least {required}"
                );
            }
            WalkState::new(&resolved.coin, n, (n - 1) / 2)?
        }
        None => WalkState::for_moment_analysis(&resolved.coin, steps)?,
    };
    let evolved = state.evolve(&StepConfig::unbiased(active_qubit), steps)?;
    let norm = evolved.total_norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        bail!("norm violated after evolution: squared norm {norm}");
    }
    Ok(evolved)
}

fn quad_for(t: usize, common: &CommonOpts) -> QuadratureSpec {
    match common.quad_points {
        Some(n) => QuadratureSpec::new(n),
        None => QuadratureSpec::auto(t),
    }
}

fn cmd_simulate(
    state: StateOpts,
    steps: usize,
    snapshot_out: Option<PathBuf>,
    common: CommonOpts,
) -> Result<()> {
    let resolved = resolve(&state, &common)?;
    let evolved = evolve_walk(&resolved, state.active_qubit, steps, &common)?;
    let distribution = evolved.position_distribution();
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => io::write_distribution_csv(&mut buf, &distribution)?,
        Format::Json => {
            let rows: Vec<_> = distribution
                .iter()
                .enumerate()
                .map(|(site, p)| json!({ "site": site, "probability": p }))
                .collect();
            serde_json::to_writer_pretty(
                &mut buf,
                &json!({
                    "state": resolved.label,
                    "active_qubit": state.active_qubit,
                    "steps": steps,
                    "start_site": evolved.start_site(),
                    "distribution": rows,
                }),
            )?;
            buf.push(b'\n');
        }
    }
    emit(&common.out, &buf)?;
    if let Some(path) = snapshot_out {
        let mut snap = Vec::new();
        io::write_state_snapshot_csv(&mut snap, &evolved)?;
        write_atomic(&path, &snap)?;
    }
    Ok(())
}

fn cmd_ctilde(t_max: usize, fit: bool, common: CommonOpts) -> Result<()> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for t in 0..=t_max {
        let quad = quad_for(t, &common);
        match (c1_tilde(t, &quad), c2_tilde(t, &quad)) {
            (Ok(c1), Ok(c2)) => rows.push((t, c1, c2)),
            (r1, r2) => {
                for err in [r1.err(), r2.err()].into_iter().flatten() {
                    eprintln!("warning: t = {t}: {err}");
                }
                failures.push(t);
            }
        }
    }
    let fit_pair = if fit {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|(t, _, _)| *t >= 1)
            .map(|(t, c1, _)| (*t as f64, *c1))
            .collect();
        let pts2: Vec<(f64, f64)> = rows
            .iter()
            .filter(|(t, _, _)| *t >= 1)
            .map(|(t, _, c2)| (*t as f64, *c2))
            .collect();
        if pts.len() < 2 {
            eprintln!("warning: need at least two rows with t >= 1 to fit; skipping fits");
            None
        } else {
            Some((
                fit_least_squares(&pts, FitModel::Linear)?,
                fit_least_squares(&pts2, FitModel::QuadraticOrigin)?,
            ))
        }
    } else {
        None
    };
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => {
            io::write_ctilde_csv(&mut buf, &rows, fit_pair.as_ref().map(|(a, b)| (a, b)))?
        }
        Format::Json => {
            let table: Vec<_> = rows
                .iter()
                .map(|(t, c1, c2)| json!({ "t": t, "c1_tilde": c1, "c2_tilde": c2 }))
                .collect();
            let fits = fit_pair.as_ref().map(
                |(linear, quadratic)| json!({ "c1_linear": linear, "c2_quadratic": quadratic }),
            );
            serde_json::to_writer_pretty(&mut buf, &json!({ "rows": table, "fits": fits }))?;
            buf.push(b'\n');
        }
    }
    emit(&common.out, &buf)?;
    if !failures.is_empty() {
        bail!("quadrature failed for t in {failures:?}");
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        bail!("--grid expects min,max,count");
    }
    let min: f64 = parts[0].parse().context("bad grid minimum")?;
    let max: f64 = parts[1].parse().context("bad grid maximum")?;
    let count: usize = parts[2].parse().context("bad grid count")?;
    if count < 2 {
        bail!("--grid count must be at least 2");
    }
    Ok(uniform_grid(min, max, count))
}

fn cmd_sweep(
    family: String,
    grid: Option<String>,
    active_qubit: usize,
    steps: usize,
    fit_out: Option<PathBuf>,
    common: CommonOpts,
) -> Result<()> {
    let family = Family::from_name(&family)
        .with_context(|| format!("unknown family `{family}`; see coinwalk sweep --help"))?;
    let grid = match grid {
        Some(spec) => parse_grid(&spec)?,
        None => family.default_grid(),
    };
    let cache = CtildeCache::new();
    let report: SweepReport = if family.is_pure() {
        sweep_and_fit_a0(family, &grid, active_qubit, steps, &cache)?
    } else {
        eprintln!(
            "warning: degenerate sweep: family {} carries mixed entanglement, \
             means are identically zero and A0 is not fitted",
            family.name()
        );
        let points = run_sweep(family, &grid, active_qubit, steps)?;
        let (c1t, _) = cache.get(steps)?;
        SweepReport {
            family: family.name().into(),
            param_name: family.param_name().into(),
            active_qubit,
            t: steps,
            num_coins: family.num_coins(),
            points,
            fit_a0: None,
            c1_tilde_squared: c1t * c1t,
            a0_relative_deviation: None,
        }
    };
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => io::write_sweep_csv(&mut buf, &report.points, report.num_coins)?,
        Format::Json => io::write_sweep_json(&mut buf, &report)?,
    }
    emit(&common.out, &buf)?;
    // Fit summary JSON: explicit path, or derived `<out>.fit.json` when
    // writing CSV to a file.
    let fit_path = fit_out.or_else(|| {
        common
            .out
            .as_ref()
            .filter(|_| common.format == Format::Csv)
            .map(|p| {
                let mut name = p.file_name().unwrap_or_default().to_os_string();
                name.push(".fit.json");
                p.with_file_name(name)
            })
    });
    if let Some(path) = fit_path {
        if let Some(fit) = &report.fit_a0 {
            let mut buf = Vec::new();
            serde_json::to_writer_pretty(
                &mut buf,
                &json!({
                    "family": report.family,
                    "active_qubit": report.active_qubit,
                    "t": report.t,
                    "fit": fit,
                    "c1_tilde_squared": report.c1_tilde_squared,
                    "a0_relative_deviation": report.a0_relative_deviation,
                }),
            )?;
            buf.push(b'\n');
            write_atomic(&path, &buf)?;
        } else {
            eprintln!("warning: no fit to write for {}", report.family);
        }
    }
    Ok(())
}

fn cmd_meancheck(state: StateOpts, steps: usize, common: CommonOpts) -> Result<()> {
    let resolved = resolve(&state, &common)?;
    let entry = entry_for_checks(&resolved);
    let cache = CtildeCache::new();
    let report = mean_law_check(&entry, state.active_qubit, steps, &cache)?;
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => {
            writeln!(
                buf,
                "state,active_qubit,t,mean_direct,mean_integral,ic_squared,coherence_abs,\
                 c1_tilde,law_lhs,law_rhs,residual,tolerance,passes,mixed_entanglement_exception"
            )?;
            writeln!(
                buf,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                report.state,
                report.active_qubit,
                report.t,
                io::fmt_f64(report.mean_direct),
                io::fmt_f64(report.mean_integral),
                io::fmt_f64(report.ic_squared),
                io::fmt_f64(report.coherence_abs),
                io::fmt_f64(report.c1_tilde),
                io::fmt_f64(report.law_lhs),
                io::fmt_f64(report.law_rhs),
                io::fmt_f64(report.residual),
                io::fmt_f64(report.tolerance),
                report.passes,
                report.mixed_entanglement_exception
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &report)?;
            buf.push(b'\n');
        }
    }
    emit(&common.out, &buf)
}

fn cmd_varcheck(state: StateOpts, steps: usize, common: CommonOpts) -> Result<()> {
    let resolved = resolve(&state, &common)?;
    let entry = entry_for_checks(&resolved);
    let cache = CtildeCache::new();
    let report = variance_law_check(&entry, state.active_qubit, steps, &cache)?;
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => {
            writeln!(
                buf,
                "state,active_qubit,t,variance_direct,ic_squared,c1_tilde,c2_tilde,law_rhs,\
                 residual,tolerance,passes"
            )?;
            writeln!(
                buf,
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.state,
                report.active_qubit,
                report.t,
                io::fmt_f64(report.variance_direct),
                io::fmt_f64(report.ic_squared),
                io::fmt_f64(report.c1_tilde),
                io::fmt_f64(report.c2_tilde),
                io::fmt_f64(report.law_rhs),
                io::fmt_f64(report.residual),
                io::fmt_f64(report.tolerance),
                report.passes
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &report)?;
            buf.push(b'\n');
        }
    }
    emit(&common.out, &buf)
}

fn parse_sites(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .with_context(|| format!("bad site `{s}`"))
        })
        .collect()
}

fn cmd_qprofile(
    state: StateOpts,
    mode: ProfileMode,
    steps: usize,
    sites: Option<String>,
    common: CommonOpts,
) -> Result<()> {
    let resolved = resolve(&state, &common)?;
    let mut buf = Vec::new();
    match mode {
        ProfileMode::Lattice => {
            let evolved = evolve_walk(&resolved, state.active_qubit, steps, &common)?;
            let profile = q_lattice_profile(&evolved, WEIGHT_THRESHOLD)?;
            match common.format {
                Format::Csv => io::write_profile_csv(&mut buf, &profile)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut buf, &profile)?;
                    buf.push(b'\n');
                }
            }
        }
        ProfileMode::Timeseries => {
            let entry = entry_for_checks(&resolved);
            let start = (2 * steps + 21 - 1) / 2;
            let sites = match sites {
                Some(spec) => parse_sites(&spec)?,
                None => vec![start, start.saturating_sub(10), start.saturating_sub(20)],
            };
            let series = q_time_series(&entry, state.active_qubit, &sites, steps)?;
            match common.format {
                Format::Csv => io::write_qtimeseries_csv(&mut buf, &series)?,
                Format::Json => {
                    serde_json::to_writer_pretty(&mut buf, &series)?;
                    buf.push(b'\n');
                }
            }
        }
    }
    emit(&common.out, &buf)
}

fn cmd_symmetry(state: StateOpts, steps: usize, common: CommonOpts) -> Result<()> {
    let resolved = resolve(&state, &common)?;
    let entry = entry_for_checks(&resolved);
    let report = distribution_symmetry(&entry, state.active_qubit, steps)?;
    let mut buf = Vec::new();
    match common.format {
        Format::Csv => {
            writeln!(buf, "state,active_qubit,t,p_asymmetry,q_asymmetry")?;
            writeln!(
                buf,
                "{},{},{},{},{}",
                report.state,
                report.active_qubit,
                report.t,
                io::fmt_f64(report.p_asymmetry),
                io::fmt_f64(report.q_asymmetry)
            )?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, &report)?;
            buf.push(b'\n');
        }
    }
    emit(&common.out, &buf)
}
