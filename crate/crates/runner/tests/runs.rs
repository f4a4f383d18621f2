use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;
use xxz_core::{ChainParams, EnsembleConfig, EntanglementTrajectory, HamiltonianVariant, build_spin};
use xxz_runner::csv::{parse_gamma_csv, parse_operator_csv, read_trajectory_csv};
use xxz_runner::experiments::{run_fig3_with, run_sweep_with};
use xxz_runner::svg::polyline_points;
use xxz_runner::{
    Result, RunConfig, RunError, RunManifest, Simulator, SweepAxis, TrajectorySource, VariantSpec, run_fig1, run_fig2,
    run_sweep,
};

fn small(dir: &Path) -> RunConfig {
    RunConfig {
        sites: 4,
        samples: 6,
        t_max: 12.0,
        dt: 0.5,
        tau: 4.0,
        output_dir: dir.to_path_buf(),
        workers: Some(2),
        ..RunConfig::default()
    }
}

#[test]
fn manifest_lists_every_output_and_parses_back() {
    let dir = TempDir::new().unwrap();
    let cfg = small(dir.path());
    let report = run_fig1(&cfg).unwrap();
    let path = dir.path().join(RunManifest::file_name("fig1"));
    let parsed = RunManifest::read(&path).unwrap();
    assert_eq!(parsed, RunManifest { duration_secs: parsed.duration_secs, ..report.manifest.clone() });
    assert_eq!(parsed.config, cfg);
    let labels: Vec<&str> = parsed.outputs.iter().map(|(l, _)| l.as_str()).collect();
    assert_eq!(labels, ["nn", "nnn", "coupled", "summary", "plot"]);
    for p in parsed.output_paths() {
        assert!(p.is_file(), "{} missing", p.display());
    }
    let text = fs::read_to_string(&path).unwrap();
    for key in ["size", "j", "mu", "lambda", "samples", "seed", "tmax", "dt", "tau", "extensive", "keep_samples", "out", "svg"] {
        assert!(text.contains(&format!("config.{key} = ")), "manifest lacks config.{key}");
    }
    assert!(!dir.path().read_dir().unwrap().any(|e| e.unwrap().path().extension().is_some_and(|x| x == "tmp")));
}

#[test]
fn svg_polylines_are_the_csv_data() {
    let dir = TempDir::new().unwrap();
    run_fig1(&small(dir.path())).unwrap();
    let svg = fs::read_to_string(dir.path().join("fig1.svg")).unwrap();
    let lines = polyline_points(&svg);
    let trajs: Vec<EntanglementTrajectory> = ["nn", "nnn", "coupled"]
        .iter()
        .map(|l| read_trajectory_csv(&dir.path().join(format!("fig1_{l}.csv"))).unwrap())
        .collect();
    assert_eq!(lines.len(), trajs.len());

    let t_max = trajs[0].times().last().copied().unwrap();
    let y_max = trajs.iter().flat_map(|t| t.mean().iter().copied()).fold(0.0, f64::max) * 1.05;
    let (plot_w, plot_h) = (640.0 - 64.0 - 150.0, 360.0 - 36.0 - 48.0);
    for (line, traj) in lines.iter().zip(&trajs) {
        assert_eq!(line.len(), traj.times().len());
        for ((px, py), (t, q)) in line.iter().zip(traj.times().iter().zip(traj.mean())) {
            assert!((px - (64.0 + t / t_max * plot_w)).abs() < 1e-3);
            assert!((py - (36.0 + plot_h - q / y_max * plot_h)).abs() < 1e-3);
        }
    }
}

#[test]
fn runs_are_byte_identical_and_seed_dependent() {
    let (a, b, c) = (TempDir::new().unwrap(), TempDir::new().unwrap(), TempDir::new().unwrap());
    run_fig2(&small(a.path()), &[0.5, 2.0]).unwrap();
    run_fig2(&RunConfig { workers: Some(5), ..small(b.path()) }, &[0.5, 2.0]).unwrap();
    run_fig2(&RunConfig { seed: 8, ..small(c.path()) }, &[0.5, 2.0]).unwrap();
    for f in ["fig2_lambda_0.5.csv", "fig2_lambda_2.csv", "fig2_summary.csv", "fig2.svg"] {
        let x = fs::read(a.path().join(f)).unwrap();
        assert_eq!(x, fs::read(b.path().join(f)).unwrap(), "{f}");
        assert_ne!(x, fs::read(c.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn lambda_sweep_at_one_is_fig1_coupled() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    run_fig1(&small(a.path())).unwrap();
    let report = run_sweep(&small(b.path()), SweepAxis::Lambda, &[1.0]).unwrap();
    assert_eq!(
        fs::read(a.path().join("fig1_coupled.csv")).unwrap(),
        fs::read(b.path().join("sweep_lambda_1.csv")).unwrap()
    );
    let (axis, rows) = parse_gamma_csv(Path::new("x"), &fs::read_to_string(b.path().join("sweep_lambda.csv")).unwrap()).unwrap();
    assert_eq!(axis, "lambda");
    assert_eq!(rows[0].1.gamma, report.outcomes[0].gamma.unwrap().gamma);
}

struct Constant(f64);

impl TrajectorySource for Constant {
    fn trajectory(&self, _: &ChainParams, _: &VariantSpec, ensemble: &EnsembleConfig) -> Result<EntanglementTrajectory> {
        let n = ensemble.times.len();
        Ok(EntanglementTrajectory::from_mean(ensemble.times.clone(), vec![self.0; n])?)
    }
}

#[test]
fn constant_trajectories_give_zero_gamma() {
    let dir = TempDir::new().unwrap();
    let cfg = small(dir.path());
    run_fig3_with(&cfg, &[0.5, 1.0, 2.0], &Constant(2.5), 1).unwrap();
    let text = fs::read_to_string(dir.path().join("fig3_gamma.csv")).unwrap();
    let (_, rows) = parse_gamma_csv(Path::new("x"), &text).unwrap();
    assert_eq!(rows.len(), 3);
    for (_, g) in rows {
        assert_eq!(g.gamma, 0.0);
        assert_eq!(g.window_time_average, 2.5);
    }

    let zero = run_sweep_with(&cfg, SweepAxis::Mu, &[1.0], &Constant(0.0), 1).unwrap();
    assert!(zero.outcomes[0].gamma.is_none());
    assert!(matches!(run_fig3_with(&cfg, &[1.0], &Constant(0.0), 1), Err(RunError::Numeric(_))));
}

#[test]
fn sweep_rejects_bad_axes_and_values() {
    let dir = TempDir::new().unwrap();
    let cfg = small(dir.path());
    assert!(matches!(SweepAxis::parse("beta"), Err(RunError::Config(_))));
    assert!(matches!(run_sweep(&cfg, SweepAxis::Size, &[2.5]), Err(RunError::Config(_))));
    assert!(matches!(run_sweep(&cfg, SweepAxis::Lambda, &[]), Err(RunError::Config(_))));
    let sim = Simulator::new(1);
    let report = run_sweep_with(&cfg, SweepAxis::Size, &[3.0, 5.0], &sim, 1).unwrap();
    assert_eq!(report.outcomes.len(), 2);
}

fn xxz(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_xxz")).args(args).env("XXZ_WORKERS", "2").output().unwrap()
}

#[test]
fn cli_errors_map_to_categories() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap();

    let r = xxz(&["sweep", "--axis", "beta", "--values", "1", "--out", out]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error[config]"));

    let r = xxz(&["fig1", "--config", dir.path().join("absent.txt").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error[io]"));

    let r = xxz(&["fig1", "--size", "1", "--out", out]);
    assert_eq!(r.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error[numeric]"));
}

#[test]
fn cli_flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# small run\nsize = 4\nsamples = 3\ntmax = 6\ntau = 2\nseed = 11\nsvg = false\n").unwrap();
    let out = dir.path().join("o");
    let r = xxz(&["fig1", "--config", conf.to_str().unwrap(), "--seed", "12", "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let m = RunManifest::read(&out.join("manifest_fig1.txt")).unwrap();
    assert_eq!((m.seed, m.config.sites, m.config.samples, m.config.emit_svg), (12, 4, 3, false));
    assert_eq!(m.workers, 2);
    assert!(!out.join("fig1.svg").exists());
}

#[test]
fn cli_selftest_and_hamiltonian_export() {
    let r = xxz(&["selftest"]);
    assert!(r.status.success());
    let text = String::from_utf8_lossy(&r.stdout);
    assert!(text.lines().count() >= 6 && text.lines().all(|l| l.starts_with("PASS")), "{text}");

    let dir = TempDir::new().unwrap();
    for boson in [false, true] {
        let mut args = vec!["hamiltonian", "--variant", "nnn", "--size", "5", "--mu", "0.5", "--out"];
        args.push(dir.path().to_str().unwrap());
        if boson {
            args.push("--boson");
        }
        assert!(xxz(&args).status.success());
        let path = dir.path().join("hamiltonian_nnn.csv");
        let entries = parse_operator_csv(&path, &fs::read_to_string(&path).unwrap()).unwrap();
        let h = build_spin(&ChainParams::new(5, 1.0, 0.5, 1.0).unwrap(), HamiltonianVariant::NextNearestNeighbor).unwrap();
        assert_eq!(entries.len(), h.matrix().nonzeros(1e-14).count());
        for (r, c, z) in entries {
            assert!((h.matrix()[(r, c)] - z).norm() < 1e-12);
        }
    }
}
