//! Subcommand definitions and drivers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use wedgeflow::assembly::{assemble_forms, make_grid, WedgeGrid};
use wedgeflow::evolve;
use wedgeflow::geometry::{builtin_profile, ThetaProfile, BUILTIN_PROFILES};
use wedgeflow::hardy;
use wedgeflow::spectral;
use wedgeflow::{Result, WedgeError};

use crate::config::{ConfigFile, Resolved};
use crate::output::{csv, fmt, write_text};

/// Numerical laboratory for the heat flow and Hardy inequalities in
/// curved planar wedges.
#[derive(Parser)]
#[command(name = "wedgeflow", version, about)]
pub struct Cli {
    /// Worker threads (default: all cores; env fallback WEDGEFLOW_THREADS)
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// key=value config file; explicit flags override file values
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory results are written to
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in angular-shift profiles
    Profiles,
    /// Lowest discrete eigenvalues of the reference operator L against
    /// the exact spectrum n + 1/2 + m/(4a)
    Spectrum(SpectrumArgs),
    /// Trajectory of the lowest eigenvalue of L_s
    Trajectory(TrajectoryArgs),
    /// Integrate the transformed heat flow and write the decay series
    Evolve(EvolveArgs),
    /// Integrate, then fit the decay rate against 1/2 + 1/(4a)
    Rate(RateArgs),
    /// Local Hardy constant and the certified global Hardy inequality
    Hardy(HardyArgs),
}

#[derive(Args, Clone)]
struct ProfileArgs {
    /// Built-in profile name (see `wedgeflow profiles`)
    #[arg(long)]
    profile: Option<String>,
    /// Tabulated profile file: columns `r theta theta_prime`
    #[arg(long, value_name = "FILE")]
    table: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Opening-angle parameter, 2πa is the wedge angle
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Radial truncation of the half-strip
    #[arg(long = "rho-max", allow_negative_numbers = true)]
    rho_max: Option<f64>,
    /// Radial cell count
    #[arg(long = "n-rho")]
    n_rho: Option<usize>,
    /// Angular interior node count
    #[arg(long = "n-phi")]
    n_phi: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// How many eigenvalues
    #[arg(long)]
    k: Option<usize>,
    /// Eigensolver residual tolerance
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Eigensolver start-block seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Largest self-similar time
    #[arg(long, allow_negative_numbers = true)]
    smax: Option<f64>,
    /// Spacing of the s grid
    #[arg(long = "s-step", allow_negative_numbers = true)]
    s_step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
}

#[derive(Args, Clone)]
struct EvolveArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Integration horizon in self-similar time
    #[arg(long, allow_negative_numbers = true)]
    smax: Option<f64>,
    /// Crank-Nicolson step
    #[arg(long, allow_negative_numbers = true)]
    ds: Option<f64>,
    /// Initial datum: `gaussian` bump or discrete `ground` state
    #[arg(long)]
    psi0: Option<String>,
}

#[derive(Args)]
struct RateArgs {
    #[command(flatten)]
    evolve: EvolveArgs,
    /// Fit window start (default: s_max/2)
    #[arg(long = "fit-lo", allow_negative_numbers = true)]
    fit_lo: Option<f64>,
    /// Fit window end (default: s_max)
    #[arg(long = "fit-hi", allow_negative_numbers = true)]
    fit_hi: Option<f64>,
}

#[derive(Args)]
struct HardyArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    /// Opening-angle parameter
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Truncation radius of the local Hardy quotient
    #[arg(long = "R", allow_negative_numbers = true)]
    radius: Option<f64>,
    #[arg(long = "n-rho")]
    n_rho: Option<usize>,
    #[arg(long = "n-phi")]
    n_phi: Option<usize>,
}

/// Run a parsed command line; returns the process exit code
/// (0 success, 2 validation failure, 3 numerical failure).
pub fn run(cli: Cli) -> i32 {
    init_threads(cli.threads);
    let outcome = dispatch(&cli);
    match outcome {
        Ok(()) => 0,
        Err(e @ WedgeError::Validation(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    }
}

#[cfg(feature = "parallel")]
fn init_threads(threads: Option<usize>) {
    let n = threads.or_else(|| {
        std::env::var("WEDGEFLOW_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        if n >= 1 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads(threads: Option<usize>) {
    if threads.map_or(false, |n| n > 1) {
        log::warn!("built without the `parallel` feature; running single-threaded");
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Profiles => cmd_profiles(),
        Command::Spectrum(args) => cmd_spectrum(args, &file, &cli.out),
        Command::Trajectory(args) => cmd_trajectory(args, &file, &cli.out),
        Command::Evolve(args) => cmd_evolve(args, &file, &cli.out),
        Command::Rate(args) => cmd_rate(args, &file, &cli.out),
        Command::Hardy(args) => cmd_hardy(args, &file, &cli.out),
    }
}

fn cmd_profiles() -> Result<()> {
    println!("built-in profiles:");
    for name in BUILTIN_PROFILES {
        let p = builtin_profile(name)?;
        let supp = match p.support_radius() {
            Some(r) => format!("supp theta' = [0, {r:.6}]"),
            None => "theta' not compactly supported".to_string(),
        };
        println!(
            "  {name:<11} C = sup|r theta'| = {:.6}, sup|theta'| = {}, {supp}",
            p.twist_bound(),
            if p.sup_theta_prime().is_finite() {
                format!("{:.6}", p.sup_theta_prime())
            } else {
                "inf".to_string()
            }
        );
    }
    println!("tabulated profiles: pass --table FILE (columns `r theta theta_prime`)");
    Ok(())
}

fn resolve_profile(args: &ProfileArgs, file: &ConfigFile, default: &str, resolved: &mut Resolved) -> Result<ThetaProfile> {
    let table = file.resolve_opt(args.table.clone(), "table")?;
    let name = file.resolve_opt(args.profile.clone(), "profile")?;
    if table.is_some() && name.is_some() {
        return Err(WedgeError::validation(
            "give either --profile or --table, not both",
        ));
    }
    if let Some(path) = table {
        resolved.push("table", path.display());
        return ThetaProfile::from_table_path(&path);
    }
    let name = name.unwrap_or_else(|| default.to_string());
    resolved.push("profile", &name);
    builtin_profile(&name)
}

/// CLI-level grid resolution with the production lower bounds.
fn resolve_grid(
    args: &GridArgs,
    file: &ConfigFile,
    defaults: (f64, f64, usize, usize),
    resolved: &mut Resolved,
) -> Result<WedgeGrid> {
    let a = file.resolve(args.a, "a", defaults.0)?;
    let rho_max = file.resolve(args.rho_max, "rho_max", defaults.1)?;
    let n_rho = file.resolve(args.n_rho, "n_rho", defaults.2)?;
    let n_phi = file.resolve(args.n_phi, "n_phi", defaults.3)?;
    if n_rho < 8 || n_phi < 4 {
        return Err(WedgeError::validation(format!(
            "grid must be at least 8 x 4, got {n_rho} x {n_phi}"
        )));
    }
    resolved.push("a", a);
    resolved.push("rho_max", rho_max);
    resolved.push("n_rho", n_rho);
    resolved.push("n_phi", n_phi);
    make_grid(a, rho_max, n_rho, n_phi)
}

fn emit(out_dir: &Path, stem: &str, resolved: &Resolved, files: &[(&str, String)]) -> Result<()> {
    let echo = resolved.render();
    print!("{echo}");
    write_text(&out_dir.join(format!("{stem}_config.txt")), &echo)?;
    for (name, content) in files {
        write_text(&out_dir.join(name), content)?;
    }
    Ok(())
}

fn cmd_spectrum(args: &SpectrumArgs, file: &ConfigFile, out_dir: &Path) -> Result<()> {
    let mut resolved = Resolved::default();
    resolved.push("command", "spectrum");
    let grid = resolve_grid(&args.grid, file, (1.0, 12.0, 400, 64), &mut resolved)?;
    let k = file.resolve(args.k, "k", 3)?;
    let tol = file.resolve(args.tol, "tol", 1e-9)?;
    let seed = file.resolve(args.seed, "seed", 7)?;
    resolved.push("k", k);
    resolved.push("tol", tol);
    resolved.push("seed", seed);

    let straight = builtin_profile("straight")?;
    let forms = assemble_forms(&grid, &straight, 0.0)?;
    let opts = wedgeflow::linalg::EigOptions {
        k,
        tol,
        shift: 0.0,
        max_iter: 400,
        seed,
    };
    let pairs = wedgeflow::linalg::smallest_eigenpairs(&forms.l_mat, &forms.mass, &opts)?;
    let exact = spectral::exact_spectrum(grid.a(), k)?;
    let rows: Vec<Vec<String>> = pairs
        .iter()
        .zip(&exact)
        .enumerate()
        .map(|(i, (p, e))| {
            vec![
                i.to_string(),
                fmt(p.value),
                fmt(e.value),
                fmt((p.value - e.value).abs()),
            ]
        })
        .collect();
    let table = csv("k,computed,exact,abs_err", &rows, None);
    emit(out_dir, "spectrum", &resolved, &[("spectrum.csv", table)])
}

fn cmd_trajectory(args: &TrajectoryArgs, file: &ConfigFile, out_dir: &Path) -> Result<()> {
    let mut resolved = Resolved::default();
    resolved.push("command", "trajectory");
    let profile = resolve_profile(&args.profile, file, "straight", &mut resolved)?;
    let grid = resolve_grid(&args.grid, file, (1.0, 12.0, 240, 48), &mut resolved)?;
    let s_max = file.resolve(args.smax, "smax", 12.0)?;
    let s_step = file.resolve(args.s_step, "s_step", 1.0)?;
    let tol = file.resolve(args.tol, "tol", 1e-9)?;
    if !(s_step > 0.0) || !(s_max >= 0.0) {
        return Err(WedgeError::validation(format!(
            "need smax >= 0 and s_step > 0, got smax = {s_max}, s_step = {s_step}"
        )));
    }
    resolved.push("smax", s_max);
    resolved.push("s_step", s_step);
    resolved.push("tol", tol);

    let mut s_values = Vec::new();
    let mut s = 0.0;
    while s <= s_max + 1e-9 {
        s_values.push(s);
        s += s_step;
    }
    let points = spectral::eigenvalue_trajectory(&grid, &profile, &s_values, tol)?;
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| vec![fmt(p.s), fmt(p.lambda0), fmt(p.residual)])
        .collect();
    let limit = 0.5 + 1.0 / (4.0 * grid.a());
    let footer = format!("# limit = {limit}");
    let table = csv("s,lambda0,residual", &rows, Some(&footer));
    emit(out_dir, "trajectory", &resolved, &[("trajectory.csv", table)])
}

struct EvolveRun {
    resolved: Resolved,
    profile: ThetaProfile,
    grid: WedgeGrid,
    series: Vec<(f64, f64)>,
    s_max: f64,
}

fn run_evolution(args: &EvolveArgs, file: &ConfigFile) -> Result<EvolveRun> {
    let mut resolved = Resolved::default();
    let profile = resolve_profile(&args.profile, file, "straight", &mut resolved)?;
    let grid = resolve_grid(&args.grid, file, (1.0, 12.0, 240, 40), &mut resolved)?;
    let s_max = file.resolve(args.smax, "smax", 12.0)?;
    let ds = file.resolve(args.ds, "ds", 0.025)?;
    let psi0_kind = file.resolve(args.psi0.clone(), "psi0", "gaussian".to_string())?;
    resolved.push("smax", s_max);
    resolved.push("ds", ds);
    resolved.push("psi0", &psi0_kind);

    let state = match psi0_kind.as_str() {
        "gaussian" => {
            let freq = 1.0 / (2.0 * grid.a());
            evolve::prepare_initial(&grid, |rho, phi| (-rho * rho).exp() * (freq * phi).sin(), true)?
        }
        "ground" => {
            let forms = assemble_forms(&grid, &profile, 0.0)?;
            let pairs = spectral::lowest_eigenpairs_of(&forms.l_mat, &forms.mass, 1, 1e-9)?;
            evolve::SelfSimilarState {
                s: 0.0,
                phi_vec: pairs[0].vector.clone(),
                norm: 1.0,
            }
        }
        other => {
            return Err(WedgeError::validation(format!(
                "psi0 must be `gaussian` or `ground`, got `{other}`"
            )))
        }
    };
    let series = evolve::integrate(&grid, &profile, &state, s_max, ds)?;
    Ok(EvolveRun {
        resolved,
        profile,
        grid,
        series,
        s_max,
    })
}

fn decay_csv(series: &[(f64, f64)]) -> String {
    let rows: Vec<Vec<String>> = series
        .iter()
        .map(|&(s, norm)| {
            vec![fmt(s), fmt(s.exp() - 1.0), fmt(norm), fmt(norm.ln())]
        })
        .collect();
    csv("s,t,norm,log_norm", &rows, None)
}

fn cmd_evolve(args: &EvolveArgs, file: &ConfigFile, out_dir: &Path) -> Result<()> {
    let mut run = run_evolution(args, file)?;
    let mut resolved = Resolved::default();
    resolved.push("command", "evolve");
    resolved.extend_from(&run.resolved);
    run.resolved = resolved;
    emit(out_dir, "evolve", &run.resolved, &[("decay.csv", decay_csv(&run.series))])
}

#[derive(Serialize)]
struct FitSummary {
    gamma_hat: f64,
    window: [f64; 2],
    rms_residual: f64,
    gamma_theory: f64,
    relative_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    hypothesis_violated: Option<String>,
}

fn cmd_rate(args: &RateArgs, file: &ConfigFile, out_dir: &Path) -> Result<()> {
    let run = run_evolution(&args.evolve, file)?;
    let mut resolved = Resolved::default();
    resolved.push("command", "rate");
    resolved.extend_from(&run.resolved);

    let fit_lo = file.resolve_opt(args.fit_lo, "fit_lo")?;
    let fit_hi = file.resolve_opt(args.fit_hi, "fit_hi")?;
    let window = match (fit_lo, fit_hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (None, None) => (0.5 * run.s_max, run.s_max),
        _ => {
            return Err(WedgeError::validation(
                "fit window needs both --fit-lo and --fit-hi (or neither)",
            ))
        }
    };
    resolved.push("fit_lo", window.0);
    resolved.push("fit_hi", window.1);

    let fit = evolve::fit_decay(&run.series, window)?;
    let gamma_theory = 0.5 + 1.0 / (4.0 * run.grid.a());
    let summary = FitSummary {
        gamma_hat: fit.gamma_hat,
        window: [fit.window.0, fit.window.1],
        rms_residual: fit.rms_residual,
        gamma_theory,
        relative_gap: (fit.gamma_hat - gamma_theory).abs() / gamma_theory,
        hypothesis_violated: if run.profile.is_compactly_supported() {
            None
        } else {
            Some("supp theta' not compact".to_string())
        },
    };
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| WedgeError::numerical(format!("json: {e}")))?;
    emit(
        out_dir,
        "rate",
        &resolved,
        &[("decay.csv", decay_csv(&run.series)), ("fit.json", json)],
    )
}

fn cmd_hardy(args: &HardyArgs, file: &ConfigFile, out_dir: &Path) -> Result<()> {
    let mut resolved = Resolved::default();
    resolved.push("command", "hardy");
    let profile = resolve_profile(&args.profile, file, "sin-capped", &mut resolved)?;
    let a = file.resolve(args.a, "a", 1.0)?;
    let radius = file.resolve(args.radius, "R", 6.0)?;
    let n_rho = file.resolve(args.n_rho, "n_rho", 240)?;
    let n_phi = file.resolve(args.n_phi, "n_phi", 48)?;
    if !(radius > 0.0) {
        return Err(WedgeError::validation(format!(
            "R must be positive, got {radius}"
        )));
    }
    if n_rho < 8 || n_phi < 4 {
        return Err(WedgeError::validation(format!(
            "grid must be at least 8 x 4, got {n_rho} x {n_phi}"
        )));
    }
    resolved.push("a", a);
    resolved.push("R", radius);
    resolved.push("n_rho", n_rho);
    resolved.push("n_phi", n_phi);

    let cert = hardy::certify_global(&profile, a, radius, n_rho, n_phi)?;
    let json = serde_json::to_string_pretty(&cert)
        .map_err(|e| WedgeError::numerical(format!("json: {e}")))?;
    emit(out_dir, "hardy", &resolved, &[("hardy.json", json)])
}
