//! `parares`: stability tongues and resonant modes of a parametrically
//! stiffened immersed fiber, from the command line.
//!
//! Four subcommands cover the workflow: `contours` sweeps the (p, τ) plane
//! and writes the point cloud plus an SVG plot, `modes` reports the integer
//! wavenumbers that can actually resonate, `simulate` runs the 2D
//! immersed-boundary verification, and `bessel` exposes the special-function
//! kernel for spot checks.  Exit codes are stable: 0 success, 2 configuration
//! rejected, 3 numerical failure, 4 I/O failure.

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use parares_cli::{config::RunConfig, emit, error::CliError};
use parares_core::ibsim::{run_simulation, FORCING_PERIOD};
use parares_core::{assemble_pencil, bessel, physical_modes, sweep, FloquetClass};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Parser)]
#[command(
    name = "parares",
    version,
    about = "Parametric-resonance analysis of a periodically stiffened immersed fiber"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the (p, τ) plane; write points.csv and tongues.svg
    Contours(SweepArgs),
    /// Report the physically realizable resonances (integer p, onset τ)
    Modes(SweepArgs),
    /// Run the immersed-boundary verification simulation; write modes.csv
    Simulate(SimArgs),
    /// Evaluate the Bessel/Hankel kernel terms at one argument
    Bessel(BesselArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Built-in parameter preset (1..4)
    #[arg(long)]
    case: Option<u8>,
    /// Flat key=value configuration file ('#' comments)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for generated files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Chatty progress on stderr
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Lowest wavenumber in the sweep
    #[arg(long)]
    pmin: Option<f64>,
    /// Highest wavenumber in the sweep
    #[arg(long)]
    pmax: Option<f64>,
    /// Wavenumber grid spacing
    #[arg(long)]
    pstep: Option<f64>,
    /// Largest forcing amplitude kept
    #[arg(long)]
    taumax: Option<f64>,
    /// Initial Floquet truncation (harmonics −N..N)
    #[arg(long = "N")]
    n_initial: Option<usize>,
    /// Also dump the assembled pencil at this wavenumber as plain text
    #[arg(long, value_name = "P")]
    dump_pencil: Option<f64>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Wavenumber of the seeded shape perturbation
    #[arg(long)]
    seed_mode: Option<u32>,
    /// Forcing periods to run
    #[arg(long)]
    periods: Option<usize>,
    /// Stiffness modulation amplitude τ
    #[arg(long)]
    tau: Option<f64>,
    /// Also dump one fiber shape CSV per period
    #[arg(long)]
    snapshots: bool,
}

#[derive(Args)]
struct BesselArgs {
    /// Integer order p
    #[arg(long)]
    p: u32,
    /// Real part of the argument z
    #[arg(long)]
    re: f64,
    /// Imaginary part of the argument z
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    im: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version travel the error path but are successes.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Contours(args) => cmd_contours(&args),
        Command::Modes(args) => cmd_modes(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Bessel(args) => cmd_bessel(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}

/// Merges defaults ← preset ← file, leaving flag overrides to the caller.
fn base_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut rc = RunConfig::default();
    if let Some(case) = common.case {
        rc.apply_preset(case)?;
    }
    if let Some(path) = &common.config {
        rc.apply_file(path)?;
    }
    Ok(rc)
}

fn sweep_config(args: &SweepArgs) -> Result<RunConfig, CliError> {
    let mut rc = base_config(&args.common)?;
    if let Some(v) = args.pmin {
        rc.p_min = v;
    }
    if let Some(v) = args.pmax {
        rc.p_max = v;
    }
    if let Some(v) = args.pstep {
        rc.p_step = v;
    }
    if let Some(v) = args.taumax {
        rc.tau_max = v;
    }
    if let Some(v) = args.n_initial {
        rc.n_initial = v;
    }
    Ok(rc)
}

fn print_modes(points: &[parares_core::StabilityPoint]) {
    let modes = physical_modes(points);
    if modes.is_empty() {
        println!("none");
        return;
    }
    for m in modes {
        println!("{} {} {:.12e}", m.class, m.p, m.tau_onset);
    }
}

fn cmd_contours(args: &SweepArgs) -> Result<(), CliError> {
    let rc = sweep_config(args)?;
    let params = rc.physical_parameters()?;
    let cfg = rc.sweep_config();
    let out = &args.common.out;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;

    if let Some(p) = args.dump_pencil {
        dump_pencils(out, p, &params, cfg.n_initial)?;
    }

    if args.common.verbose {
        eprintln!(
            "sweeping p in [{}, {}] step {} at κ={:e}, ν={:e}, φ={:e}",
            cfg.p_min, cfg.p_max, cfg.p_step, params.kappa, params.nu, params.phi
        );
    }
    let points = sweep(&cfg, &params)?;
    let csv = out.join("points.csv");
    emit::write_points_csv(&csv, &points).map_err(|e| io_err(&csv, e))?;
    let svg = out.join("tongues.svg");
    emit::write_tongues_svg(&svg, &points, cfg.p_min, cfg.p_max, cfg.tau_max)
        .map_err(|e| io_err(&svg, e))?;

    let harmonic = points
        .iter()
        .filter(|p| p.class == FloquetClass::Harmonic)
        .count();
    println!(
        "{} stability points ({} harmonic, {} subharmonic)",
        points.len(),
        harmonic,
        points.len() - harmonic
    );
    println!("wrote {} and {}", csv.display(), svg.display());
    println!("physical modes (class p tau_onset):");
    print_modes(&points);
    Ok(())
}

fn cmd_modes(args: &SweepArgs) -> Result<(), CliError> {
    let rc = sweep_config(args)?;
    let params = rc.physical_parameters()?;
    let cfg = rc.sweep_config();
    if let Some(p) = args.dump_pencil {
        let out = &args.common.out;
        std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
        dump_pencils(out, p, &params, cfg.n_initial)?;
    }
    let points = sweep(&cfg, &params)?;
    print_modes(&points);
    Ok(())
}

fn dump_pencils(
    out: &Path,
    p: f64,
    params: &parares_core::PhysicalParameters,
    n: usize,
) -> Result<(), CliError> {
    for class in [FloquetClass::Harmonic, FloquetClass::Subharmonic] {
        let pencil = assemble_pencil(p, class, params, n)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let path = out.join(format!("pencil_{class}_p{p}_N{n}.txt"));
        let label = format!(
            "pencil at p = {p}, {class}, truncation N = {n} (side {})",
            pencil.a.side()
        );
        emit::write_pencil_txt(&path, &label, &pencil.a, &pencil.b)
            .map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimArgs) -> Result<(), CliError> {
    let mut rc = base_config(&args.common)?;
    if let Some(v) = args.seed_mode {
        rc.seed_mode = Some(v);
    }
    if let Some(v) = args.periods {
        rc.periods = v;
    }
    if let Some(v) = args.tau {
        rc.tau = Some(v);
    }
    let params = rc.physical_parameters()?;
    let (tau, seed_mode, sim_cfg) = rc.sim_setup()?;
    let out = &args.common.out;
    std::fs::create_dir_all(out).map_err(|e| io_err(out, e))?;

    if args.common.verbose {
        eprintln!(
            "simulating {} periods at κ={:e}, ν={:e}, τ={tau}, seed mode {seed_mode}",
            sim_cfg.periods, params.kappa, params.nu
        );
        eprintln!(
            "grid {}², {} fiber points, {} steps/period",
            sim_cfg.grid_points, sim_cfg.fiber_points, sim_cfg.steps_per_period
        );
    }
    let run = run_simulation(&params, tau, seed_mode, &sim_cfg)?;

    let csv = out.join("modes.csv");
    emit::write_modes_csv(&csv, &run.series).map_err(|e| io_err(&csv, e))?;
    if args.snapshots {
        for (i, (_, shape)) in run.snapshots.iter().enumerate() {
            let path = out.join(format!("shape_{i:03}.csv"));
            emit::write_shape_csv(&path, shape).map_err(|e| io_err(&path, e))?;
        }
    }
    println!("wrote {}", csv.display());

    // Envelope verdicts over the final five periods for the tracked modes.
    let tail = 5;
    for p in 1..=8usize.min(run.series.p_max()) {
        let verdict = if run.series.envelope_grows(p, FORCING_PERIOD, tail) {
            "GROWING"
        } else if run.series.envelope_decays(p, FORCING_PERIOD, tail) {
            "DECAYING"
        } else {
            "FLAT"
        };
        println!("p={p} {verdict}");
    }
    Ok(())
}

fn cmd_bessel(args: &BesselArgs) -> Result<(), CliError> {
    let p = args.p;
    let z = Complex64::new(args.re, args.im);
    let fmt = |w: Complex64| format!("{:.14e} {:+.14e}i", w.re, w.im);

    let j = bessel::bessel_j(p, z).map_err(|e| CliError::Numerical(e.to_string()))?;
    println!("J_{p}({}) = {}", fmt(z), fmt(j));
    let h = bessel::hankel1(p, z).map_err(|e| CliError::Numerical(e.to_string()))?;
    println!("H1_{p}({}) = {}", fmt(z), fmt(h));

    // The four ratio terms the stability pencil consumes.
    let rh1 = bessel::ratio_h(p, z).map_err(|e| CliError::Numerical(e.to_string()))?;
    let rj1 = bessel::ratio_j(p, z).map_err(|e| CliError::Numerical(e.to_string()))?;
    let two_p_over_z = 2.0 * p as f64 / z;
    let rh2 = two_p_over_z * rh1 - 1.0;
    let rj2 = two_p_over_z * rj1 - 1.0;
    println!("H_p/H_(p-1)     = {}", fmt(rh1));
    println!("J_p/J_(p+1)     = {}", fmt(rj1));
    println!("H_(p+1)/H_(p-1) = {}", fmt(rh2));
    println!("J_(p-1)/J_(p+1) = {}", fmt(rj2));
    Ok(())
}
