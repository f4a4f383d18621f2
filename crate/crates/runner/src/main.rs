use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use xxz_core::{HamiltonianVariant, build_boson, build_spin};
use xxz_runner::config::WARN_SITES;
use xxz_runner::csv::{operator_csv, write_atomic};
use xxz_runner::experiments::{FIG2_LAMBDAS, FIG3_LAMBDAS};
use xxz_runner::{Result, RunConfig, RunError, RunReport, SweepAxis, run_fig1, run_fig2, run_fig3, run_sweep, selftest};

/// Entanglement dynamics of XXZ spin chains with nearest and next-nearest
/// neighbour couplings.
#[derive(Parser)]
#[command(name = "xxz", version)]
struct Cli {
    #[command(flatten)]
    flags: Flags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Flags {
    /// `key = value` file applied before the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Number of sites L.
    #[arg(long, global = true)]
    size: Option<usize>,
    /// Exchange coupling J.
    #[arg(long, global = true)]
    j: Option<f64>,
    /// Anisotropy mu.
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// NNN weight of the coupled model.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true)]
    tmax: Option<f64>,
    /// Start of the averaging window.
    #[arg(long, global = true)]
    tau: Option<f64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Report Q instead of L * Q.
    #[arg(long, global = true)]
    normalized: bool,
    /// Also store every sample's curve in the trajectory CSVs.
    #[arg(long, global = true)]
    keep_samples: bool,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    no_svg: bool,
    /// Worker threads (default: $XXZ_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// NN, NNN and coupled trajectories with their long-time averages.
    Fig1,
    /// Coupled-model trajectories for several lambda.
    Fig2 {
        #[arg(long, value_delimiter = ',', default_values_t = FIG2_LAMBDAS.to_vec())]
        lambdas: Vec<f64>,
    },
    /// Oscillation metric gamma against lambda.
    Fig3 {
        #[arg(long, value_delimiter = ',', default_values_t = FIG3_LAMBDAS.to_vec())]
        lambdas: Vec<f64>,
    },
    /// Coupled-model trajectory and gamma over one parameter.
    Sweep {
        /// lambda, mu, L, samples or dt.
        #[arg(long)]
        axis: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Check entanglement measures and Hamiltonians against exact values.
    Selftest,
    /// Write a Hamiltonian as sparse `row,col,re,im` CSV.
    Hamiltonian {
        /// nn, nnn or coupled.
        #[arg(long, default_value = "coupled")]
        variant: String,
        /// Build from the hard-core boson form instead of Pauli strings.
        #[arg(long)]
        boson: bool,
    },
}

fn build_config(flags: &Flags) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &flags.config {
        cfg.apply_file(path)?;
    }
    let Flags { seed, samples, size, j, mu, lambda, tmax, tau, dt, out, workers, .. } = flags;
    if let Some(v) = seed {
        cfg.seed = *v;
    }
    if let Some(v) = samples {
        cfg.samples = *v;
    }
    if let Some(v) = size {
        cfg.sites = *v;
    }
    if let Some(v) = j {
        cfg.coupling = *v;
    }
    if let Some(v) = mu {
        cfg.anisotropy = *v;
    }
    if let Some(v) = lambda {
        cfg.lambda = *v;
    }
    if let Some(v) = tmax {
        cfg.t_max = *v;
    }
    if let Some(v) = tau {
        cfg.tau = *v;
    }
    if let Some(v) = dt {
        cfg.dt = *v;
    }
    if let Some(v) = out {
        cfg.output_dir = v.clone();
    }
    if workers.is_some() {
        cfg.workers = *workers;
    }
    if flags.normalized {
        cfg.extensive = false;
    }
    if flags.keep_samples {
        cfg.keep_samples = true;
    }
    if flags.no_svg {
        cfg.emit_svg = false;
    }
    Ok(cfg)
}

fn print_report(report: &RunReport) {
    for o in &report.outcomes {
        match o.gamma {
            Some(g) => println!("{:<16} average {:.6}  gamma {:.6}", o.spec.label, o.expected, g.gamma),
            None => println!("{:<16} average {:.6}  gamma undefined", o.spec.label, o.expected),
        }
    }
    for path in report.manifest.output_paths() {
        println!("wrote {}", path.display());
    }
}

fn run(cli: Cli) -> Result<bool> {
    let cfg = build_config(&cli.flags)?;
    if cfg.sites > WARN_SITES && !matches!(cli.command, Command::Selftest) {
        eprintln!("warning: L = {} gives dimension {}; this will be slow", cfg.sites, 1usize << cfg.sites.min(63));
    }
    let report = match cli.command {
        Command::Fig1 => run_fig1(&cfg)?,
        Command::Fig2 { lambdas } => run_fig2(&cfg, &lambdas)?,
        Command::Fig3 { lambdas } => run_fig3(&cfg, &lambdas)?,
        Command::Sweep { axis, values } => run_sweep(&cfg, SweepAxis::parse(&axis)?, &values)?,
        Command::Selftest => {
            let mut ok = true;
            for c in selftest() {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            return Ok(ok);
        }
        Command::Hamiltonian { variant, boson } => {
            let variant = match variant.as_str() {
                "nn" => HamiltonianVariant::NearestNeighbor,
                "nnn" => HamiltonianVariant::NextNearestNeighbor,
                "coupled" => HamiltonianVariant::Coupled,
                other => return Err(RunError::Config(format!("unknown variant `{other}`"))),
            };
            let chain = cfg.chain()?;
            let op = if boson { build_boson(&chain, variant)? } else { build_spin(&chain, variant)? };
            std::fs::create_dir_all(&cfg.output_dir).map_err(|e| RunError::io(&cfg.output_dir, e))?;
            let path = cfg.output_dir.join(format!("hamiltonian_{}.csv", variant.tag()));
            write_atomic(&path, &operator_csv(&op))?;
            println!("wrote {}", path.display());
            return Ok(true);
        }
    };
    print_report(&report);
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
