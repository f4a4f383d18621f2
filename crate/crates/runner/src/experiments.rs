//! Figure reproductions, parameter sweeps and the self-test.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use xxz_core::{
    ChainParams, EnsembleConfig, EntanglementTrajectory, Error as CoreError, GammaResult, HamiltonianVariant,
    expected_entanglement, gamma_metric,
};

use crate::config::{RunConfig, VariantSpec, check_labels};
use crate::csv::{fmt_f64, gamma_header, gamma_row, trajectory_csv, write_atomic};
use crate::error::{Result, RunError};
use crate::manifest::RunManifest;
use crate::simulate::{Simulator, TrajectorySource};
use crate::svg::{Level, Panel, Series, render};

/// λ values of the second figure.
pub const FIG2_LAMBDAS: [f64; 3] = [0.5, 2.0, 4.0];
/// λ values of the third figure.
pub const FIG3_LAMBDAS: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 4.0];

/// Result for one Hamiltonian of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub spec: VariantSpec,
    /// Value of the swept parameter for sweeps, otherwise λ.
    pub parameter: f64,
    pub trajectory: EntanglementTrajectory,
    pub expected: f64,
    /// `None` when the window average is zero.
    pub gamma: Option<GammaResult>,
}

/// Everything a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub outcomes: Vec<Outcome>,
}

impl RunReport {
    pub fn outcome(&self, label: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.spec.label == label)
    }
}

/// Sweepable parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Lambda,
    Mu,
    Size,
    Samples,
    Dt,
}

impl SweepAxis {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "lambda" => Ok(Self::Lambda),
            "mu" => Ok(Self::Mu),
            "L" | "size" => Ok(Self::Size),
            "samples" => Ok(Self::Samples),
            "dt" => Ok(Self::Dt),
            other => Err(RunError::Config(format!(
                "unknown sweep axis `{other}` (expected lambda, mu, L, samples or dt)"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::Mu => "mu",
            Self::Size => "L",
            Self::Samples => "samples",
            Self::Dt => "dt",
        }
    }

    fn apply(self, cfg: &mut RunConfig, value: f64) -> Result<()> {
        let count = |v: f64| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(RunError::Config(format!("{} must be a positive integer, got {v}", self.name())))
            }
        };
        match self {
            Self::Lambda => cfg.lambda = value,
            Self::Mu => cfg.anisotropy = value,
            Self::Size => cfg.sites = count(value)?,
            Self::Samples => cfg.samples = count(value)?,
            Self::Dt => cfg.dt = value,
        }
        Ok(())
    }
}

/// First grid time at which the mean reaches `fraction * level`.
pub fn time_to_fraction(traj: &EntanglementTrajectory, fraction: f64, level: f64) -> Option<f64> {
    traj.times().iter().zip(traj.mean()).find(|(_, &q)| q >= fraction * level).map(|(&t, _)| t)
}

fn num_label(x: f64) -> String {
    format!("{x}")
}

fn measure_label(cfg: &RunConfig) -> &'static str {
    if cfg.extensive { "L * Q (ensemble mean)" } else { "Q (ensemble mean)" }
}

fn gamma_or_none(traj: &EntanglementTrajectory, tau: f64) -> Result<Option<GammaResult>> {
    match gamma_metric(traj, tau) {
        Ok(g) => Ok(Some(g)),
        Err(CoreError::DegenerateTrajectory) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn evaluate(
    source: &dyn TrajectorySource,
    chain: &ChainParams,
    ensemble: &EnsembleConfig,
    spec: VariantSpec,
    parameter: f64,
) -> Result<Outcome> {
    let trajectory = source.trajectory(chain, &spec, ensemble)?;
    let expected = expected_entanglement(&trajectory, ensemble.tau)?;
    let gamma = gamma_or_none(&trajectory, ensemble.tau)?;
    Ok(Outcome { spec, parameter, trajectory, expected, gamma })
}

fn series(o: &Outcome) -> Series {
    Series {
        label: o.spec.label.clone(),
        points: o.trajectory.times().iter().copied().zip(o.trajectory.mean().iter().copied()).collect(),
    }
}

fn summary_csv(outcomes: &[Outcome]) -> String {
    let mut s = String::from("label,lambda,expected,gamma,window_max,window_min,tau,t_max\n");
    for o in outcomes {
        let g = o.gamma.unwrap_or(GammaResult {
            gamma: f64::NAN,
            window_max: f64::NAN,
            window_min: f64::NAN,
            window_time_average: o.expected,
            tau: f64::NAN,
            t_max: f64::NAN,
        });
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            o.spec.label,
            fmt_f64(o.spec.lambda),
            fmt_f64(o.expected),
            fmt_f64(g.gamma),
            fmt_f64(g.window_max),
            fmt_f64(g.window_min),
            fmt_f64(g.tau),
            fmt_f64(g.t_max)
        );
    }
    s
}

/// Files of a run, written only after all numerics finished.
struct Writer {
    dir: PathBuf,
    files: Vec<(String, PathBuf, String)>,
}

impl Writer {
    fn new(cfg: &RunConfig) -> Self {
        Self { dir: cfg.output_dir.clone(), files: Vec::new() }
    }

    fn add(&mut self, label: impl Into<String>, file: impl Into<PathBuf>, contents: String) {
        self.files.push((label.into(), file.into(), contents));
    }

    fn finish(self, command: &str, cfg: &RunConfig, workers: usize, started: Instant) -> Result<RunManifest> {
        fs::create_dir_all(&self.dir).map_err(|e| RunError::io(&self.dir, e))?;
        let mut outputs = Vec::new();
        for (label, file, contents) in self.files {
            write_atomic(&self.dir.join(&file), &contents)?;
            outputs.push((label, file));
        }
        let manifest = RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            workers,
            duration_secs: started.elapsed().as_secs_f64(),
            config: cfg.clone(),
            outputs,
        };
        write_atomic(&self.dir.join(RunManifest::file_name(command)), &manifest.to_text())?;
        Ok(manifest)
    }
}

fn simulator(cfg: &RunConfig) -> Result<Simulator> {
    Ok(Simulator::new(cfg.effective_workers()?))
}

/// NN, NNN and coupled (`cfg.lambda`) trajectories with their time averages.
pub fn run_fig1(cfg: &RunConfig) -> Result<RunReport> {
    let sim = simulator(cfg)?;
    run_fig1_with(cfg, &sim, sim.workers)
}

pub fn run_fig1_with(cfg: &RunConfig, source: &dyn TrajectorySource, workers: usize) -> Result<RunReport> {
    let started = Instant::now();
    let chain = cfg.chain()?;
    let ensemble = cfg.ensemble()?;
    let variants = vec![
        VariantSpec::new("nn", HamiltonianVariant::NearestNeighbor, 0.0),
        VariantSpec::new("nnn", HamiltonianVariant::NextNearestNeighbor, 0.0),
        VariantSpec::new("coupled", HamiltonianVariant::Coupled, cfg.lambda),
    ];
    check_labels(&variants)?;
    let outcomes = variants
        .into_iter()
        .map(|v| {
            let lambda = v.lambda;
            evaluate(source, &chain, &ensemble, v, lambda)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut w = Writer::new(cfg);
    for o in &outcomes {
        w.add(&o.spec.label, format!("fig1_{}.csv", o.spec.label), trajectory_csv(&o.trajectory));
    }
    w.add("summary", "fig1_summary.csv", summary_csv(&outcomes));
    if cfg.emit_svg {
        w.add("plot", "fig1.svg", render(&[fig1_panel(cfg, &outcomes)]));
    }
    let manifest = w.finish("fig1", cfg, workers, started)?;
    Ok(RunReport { manifest, outcomes })
}

fn fig1_panel(cfg: &RunConfig, outcomes: &[Outcome]) -> Panel {
    Panel {
        title: format!("L = {}, mu = {}, lambda = {}", cfg.sites, cfg.anisotropy, cfg.lambda),
        x_label: "t".into(),
        y_label: measure_label(cfg).into(),
        series: outcomes.iter().map(series).collect(),
        levels: outcomes
            .iter()
            .enumerate()
            .map(|(k, o)| Level { label: format!("{} avg {:.2}", o.spec.label, o.expected), y: o.expected, color_of: k })
            .collect(),
        markers: false,
    }
}

/// Coupled-model trajectories at the given λ values (default [`FIG2_LAMBDAS`]).
pub fn run_fig2(cfg: &RunConfig, lambdas: &[f64]) -> Result<RunReport> {
    let sim = simulator(cfg)?;
    run_fig2_with(cfg, lambdas, &sim, sim.workers)
}

pub fn run_fig2_with(
    cfg: &RunConfig,
    lambdas: &[f64],
    source: &dyn TrajectorySource,
    workers: usize,
) -> Result<RunReport> {
    let started = Instant::now();
    let outcomes = coupled_outcomes(cfg, lambdas, source)?;
    let mut w = Writer::new(cfg);
    for o in &outcomes {
        w.add(&o.spec.label, format!("fig2_{}.csv", o.spec.label), trajectory_csv(&o.trajectory));
    }
    w.add("summary", "fig2_summary.csv", summary_csv(&outcomes));
    if cfg.emit_svg {
        let panels: Vec<Panel> = outcomes
            .iter()
            .map(|o| Panel {
                title: format!("L = {}, mu = {}, lambda = {}", cfg.sites, cfg.anisotropy, num_label(o.spec.lambda)),
                x_label: "t".into(),
                y_label: measure_label(cfg).into(),
                series: vec![series(o)],
                levels: vec![Level { label: format!("avg {:.2}", o.expected), y: o.expected, color_of: 0 }],
                markers: false,
            })
            .collect();
        w.add("plot", "fig2.svg", render(&panels));
    }
    let manifest = w.finish("fig2", cfg, workers, started)?;
    Ok(RunReport { manifest, outcomes })
}

fn coupled_outcomes(cfg: &RunConfig, lambdas: &[f64], source: &dyn TrajectorySource) -> Result<Vec<Outcome>> {
    if lambdas.is_empty() {
        return Err(RunError::Config("no lambda values given".into()));
    }
    let chain = cfg.chain()?;
    let ensemble = cfg.ensemble()?;
    let variants: Vec<VariantSpec> = lambdas
        .iter()
        .map(|&l| VariantSpec::new(format!("lambda_{}", num_label(l)), HamiltonianVariant::Coupled, l))
        .collect();
    check_labels(&variants)?;
    variants
        .into_iter()
        .map(|v| {
            let lambda = v.lambda;
            evaluate(source, &chain, &ensemble, v, lambda)
        })
        .collect()
}

/// γ against λ (default [`FIG3_LAMBDAS`]).
pub fn run_fig3(cfg: &RunConfig, lambdas: &[f64]) -> Result<RunReport> {
    let sim = simulator(cfg)?;
    run_fig3_with(cfg, lambdas, &sim, sim.workers)
}

pub fn run_fig3_with(
    cfg: &RunConfig,
    lambdas: &[f64],
    source: &dyn TrajectorySource,
    workers: usize,
) -> Result<RunReport> {
    if lambdas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RunError::Config("lambda values must be strictly ascending".into()));
    }
    let started = Instant::now();
    let outcomes = coupled_outcomes(cfg, lambdas, source)?;
    let mut w = Writer::new(cfg);
    let mut table = gamma_header("lambda");
    for o in &outcomes {
        let g = o.gamma.ok_or(RunError::Numeric(CoreError::DegenerateTrajectory))?;
        table.push_str(&gamma_row(o.spec.lambda, &g));
        w.add(&o.spec.label, format!("fig3_{}.csv", o.spec.label), trajectory_csv(&o.trajectory));
    }
    w.add("gamma", "fig3_gamma.csv", table);
    if cfg.emit_svg {
        let points = outcomes.iter().filter_map(|o| Some((o.spec.lambda, o.gamma?.gamma))).collect();
        let panel = Panel {
            title: format!("L = {}, mu = {}, tau = {}, T = {}", cfg.sites, cfg.anisotropy, cfg.tau, cfg.t_max),
            x_label: "lambda".into(),
            y_label: "gamma".into(),
            series: vec![Series { label: "gamma".into(), points }],
            levels: Vec::new(),
            markers: true,
        };
        w.add("plot", "fig3.svg", render(&[panel]));
    }
    let manifest = w.finish("fig3", cfg, workers, started)?;
    Ok(RunReport { manifest, outcomes })
}

/// Coupled-model trajectory and γ for each value of one parameter.
pub fn run_sweep(cfg: &RunConfig, axis: SweepAxis, values: &[f64]) -> Result<RunReport> {
    let sim = simulator(cfg)?;
    run_sweep_with(cfg, axis, values, &sim, sim.workers)
}

pub fn run_sweep_with(
    cfg: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    source: &dyn TrajectorySource,
    workers: usize,
) -> Result<RunReport> {
    if values.is_empty() {
        return Err(RunError::Config("no sweep values given".into()));
    }
    let started = Instant::now();
    let mut outcomes = Vec::new();
    for &value in values {
        let mut point = cfg.clone();
        axis.apply(&mut point, value)?;
        let chain = point.chain()?;
        let ensemble = point.ensemble()?;
        let spec = VariantSpec::new(format!("{}_{}", axis.name(), num_label(value)), HamiltonianVariant::Coupled, point.lambda);
        outcomes.push(evaluate(source, &chain, &ensemble, spec, value)?);
    }
    check_labels(&outcomes.iter().map(|o| o.spec.clone()).collect::<Vec<_>>())?;

    let mut w = Writer::new(cfg);
    let mut table = gamma_header(axis.name());
    for o in &outcomes {
        let g = o.gamma.unwrap_or(GammaResult {
            gamma: f64::NAN,
            window_max: f64::NAN,
            window_min: f64::NAN,
            window_time_average: o.expected,
            tau: cfg.tau,
            t_max: o.trajectory.times().last().copied().unwrap_or(f64::NAN),
        });
        table.push_str(&gamma_row(o.parameter, &g));
        w.add(&o.spec.label, format!("sweep_{}.csv", o.spec.label), trajectory_csv(&o.trajectory));
    }
    w.add("gamma", format!("sweep_{}.csv", axis.name()), table);
    if cfg.emit_svg {
        let panel = Panel {
            title: format!("sweep over {}", axis.name()),
            x_label: "t".into(),
            y_label: measure_label(cfg).into(),
            series: outcomes.iter().map(series).collect(),
            levels: Vec::new(),
            markers: false,
        };
        w.add("plot", format!("sweep_{}.svg", axis.name()), render(&[panel]));
    }
    let manifest = w.finish(&format!("sweep_{}", axis.name()), cfg, workers, started)?;
    Ok(RunReport { manifest, outcomes })
}

/// One line of the self-test.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Analytic entanglement values and the spin/boson equivalence.
pub fn selftest() -> Vec<Check> {
    use std::f64::consts::FRAC_1_SQRT_2;
    use xxz_core::{C64, PureState, build_boson, build_spin, linear_entropy, meyer_wallach, scott_measure};

    let mut checks = Vec::new();
    let mut check = |name: &'static str, value: f64, expected: f64, tol: f64| {
        let passed = (value - expected).abs() <= tol;
        checks.push(Check { name, passed, detail: format!("got {value:.15}, expected {expected:.15} (tol {tol:e})") });
    };
    let ghz = |l: usize| {
        let mut a = vec![C64::new(0.0, 0.0); 1 << l];
        a[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        a[(1 << l) - 1] = C64::new(FRAC_1_SQRT_2, 0.0);
        PureState::new(l, a).expect("GHZ state")
    };
    let w3 = {
        let mut a = vec![C64::new(0.0, 0.0); 8];
        for k in 0..3 {
            a[1 << k] = C64::new(1.0 / 3f64.sqrt(), 0.0);
        }
        PureState::new(3, a).expect("W state")
    };
    let product = PureState::basis(6, 0b010110).expect("basis state");

    check("Q(product) = 0", meyer_wallach(&product).map_or(f64::NAN, |q| q.normalized_q), 0.0, 1e-10);
    let worst_ghz = (2..=8)
        .map(|l| meyer_wallach(&ghz(l)).map_or(f64::NAN, |q| (q.normalized_q - 1.0).abs()))
        .fold(0.0, f64::max);
    check("Q(GHZ_L) = 1, L = 2..8", worst_ghz, 0.0, 1e-10);
    check("Q(W_3) = 8/9", meyer_wallach(&w3).map_or(f64::NAN, |q| q.normalized_q), 8.0 / 9.0, 1e-10);
    check("S_L(Bell, {0}) = 1", linear_entropy(&ghz(2), &[0]).unwrap_or(f64::NAN), 1.0, 1e-10);
    check("Q^2(GHZ_4) = 2/3", scott_measure(&ghz(4), 2).unwrap_or(f64::NAN), 2.0 / 3.0, 1e-10);

    let mut worst = 0.0f64;
    for sites in 2..=6 {
        for mu in [0.0, 1.0, 1.5] {
            for variant in [HamiltonianVariant::NearestNeighbor, HamiltonianVariant::NextNearestNeighbor] {
                if sites < 3 && variant != HamiltonianVariant::NearestNeighbor {
                    continue;
                }
                let diff = ChainParams::new(sites, 1.0, mu, 0.0).and_then(|p| {
                    let s = build_spin(&p, variant)?;
                    let b = build_boson(&p, variant)?;
                    Ok(s.matrix()
                        .as_slice()
                        .iter()
                        .zip(b.matrix().as_slice())
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0, f64::max))
                });
                worst = worst.max(diff.unwrap_or(f64::INFINITY));
            }
        }
    }
    check("spin == hard-boson Hamiltonian", worst, 0.0, 1e-12);
    checks
}
