//! Subcommand implementations behind the `dirac-edge` binary. Each
//! `cmd_*` function writes its files into an output directory and returns
//! the report it wrote, so the same code paths are usable from tests and
//! examples.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{self, power_law_fit, ErrorSeries, PowerLawFit};
use crate::ansatz::{AnsatzKind, CurvedAnsatz};
use crate::config::{GeometryConfig, ProfileName, RunConfig};
use crate::error::{Error, Result};
use crate::fields::energy;
use crate::mass::TransitionProfile;
use crate::propagator::{evolve, observation_times};
use crate::snapshot::{write_snapshot, write_snapshot_1d, Snapshot1DHeader};
use crate::spectrum::{scan_point, DispersionRow, Grid1D};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_FIT: i32 = 4;

/// Exit status for a failed command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonFinite { .. } => EXIT_NUMERICAL,
        Error::TooFewPoints(_) | Error::NonPositive(..) => EXIT_FIT,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub tag: String,
    pub geometry: String,
    pub grid: [f64; 4],
    pub n1: usize,
    pub n2: usize,
    pub dt: f64,
    pub steps: usize,
    pub final_error: f64,
    pub max_energy_drift: f64,
    pub max_leak_ratio: f64,
    pub leaked: bool,
    #[serde(skip)]
    pub series: ErrorSeries,
    pub snapshots: Vec<PathBuf>,
}

/// Propagates the configured ansatz and records the error series.
/// Snapshots are written only when `snapshot_dir` is given.
pub fn simulate(cfg: &RunConfig, snapshot_dir: Option<&Path>) -> Result<RunSummary> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let model = cfg.mass_model()?;
    let ansatz = cfg.ansatz()?;
    let geometry = model.geometry.clone();
    let mass = model.sample(&grid);
    let dt = cfg.time_step(&grid);
    let times = observation_times(cfg.t_final, cfg.sample_interval, &cfg.snapshots);
    let f0 = ansatz.sample(&grid, 0.0);
    let mut series = ErrorSeries::default();
    let mut snapshots = Vec::new();
    let tol = 1e-9 * cfg.t_final.max(1.0);
    let report = evolve(&f0, &mass, &times, dt, |t, f| {
        series.push(analysis::sample(t, f, &ansatz, &geometry)?)?;
        if let Some(dir) = snapshot_dir {
            if let Some(k) = cfg.snapshots.iter().position(|&s| (s - t).abs() <= tol) {
                let stem = format!("{}_snap{k:02}_t{t:.4}", cfg.tag);
                snapshots.push(write_snapshot(dir, &stem, f, t, geometry.tag())?);
            }
        }
        Ok(())
    })?;
    Ok(RunSummary {
        tag: cfg.tag.clone(),
        geometry: geometry.tag().to_string(),
        grid: grid.bounds(),
        n1: grid.n1,
        n2: grid.n2,
        dt,
        steps: report.steps,
        final_error: series.last().map_or(0.0, |s| s.l2_error),
        max_energy_drift: report.max_energy_drift,
        max_leak_ratio: report.max_leak_ratio,
        leaked: report.leaked,
        series,
        snapshots,
    })
}

/// Single run: `<tag>.csv`, `<tag>_summary.json` and any snapshots.
pub fn cmd_run(cfg: &RunConfig, out_dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let summary = simulate(cfg, Some(out_dir))?;
    summary.series.write_csv(&out_dir.join(format!("{}.csv", cfg.tag)))?;
    fs::write(
        out_dir.join(format!("{}_summary.json", cfg.tag)),
        serde_json::to_string_pretty(&summary)?,
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub parameter: f64,
    pub error: f64,
    pub max_energy_drift: f64,
    pub leaked: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub parameter: String,
    pub t_final: f64,
    pub runs: Vec<SweepPoint>,
    pub fit: PowerLawFit,
}

/// Runs `runner` over `params` on a pool of `workers` threads. Results come
/// back in parameter order regardless of completion order.
pub fn run_parallel<T, F>(params: &[f64], workers: usize, runner: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(f64) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("worker pool: {e}")))?;
    pool.install(|| params.par_iter().map(|&p| runner(p)).collect())
}

/// Power-law fit over the runs whose leak monitor stayed quiet.
pub fn fit_sweep(name: &str, t_final: f64, runs: Vec<SweepPoint>) -> Result<SweepReport> {
    let pts: Vec<(f64, f64)> = runs.iter().filter(|r| !r.leaked).map(|r| (r.parameter, r.error)).collect();
    let fit = power_law_fit(&pts)?;
    Ok(SweepReport { parameter: name.to_string(), t_final, runs, fit })
}

fn write_sweep(report: &SweepReport, out_dir: &Path, stem: &str) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let mut csv = format!("{},l2_error,max_energy_drift,leaked\n", report.parameter);
    for r in &report.runs {
        csv.push_str(&format!("{},{:e},{:e},{}\n", r.parameter, r.error, r.max_energy_drift, r.leaked));
    }
    fs::write(out_dir.join(format!("{stem}.csv")), csv)?;
    fs::write(out_dir.join(format!("{stem}_fit.json")), serde_json::to_string_pretty(&report.fit)?)?;
    Ok(())
}

fn point_from(parameter: f64, s: &RunSummary) -> SweepPoint {
    SweepPoint { parameter, error: s.final_error, max_energy_drift: s.max_energy_drift, leaked: s.leaked }
}

/// Sweep with an injectable runner (the real one propagates; tests stub it).
pub fn sweep_with<F>(name: &str, t_final: f64, params: &[f64], workers: usize, runner: F) -> Result<SweepReport>
where
    F: Fn(f64) -> Result<SweepPoint> + Sync,
{
    if params.len() < 3 {
        return Err(Error::TooFewPoints(params.len()));
    }
    let runs = run_parallel(params, workers, runner)?;
    fit_sweep(name, t_final, runs)
}

/// Error at `t_final` against the circle ansatz for each radius.
pub fn cmd_sweep_radius(template: &RunConfig, radii: &[f64], workers: usize, out_dir: &Path) -> Result<SweepReport> {
    let configs = radii.iter().map(|&r| template.with_radius(r)).collect::<Result<Vec<_>>>()?;
    let report = sweep_with("R", template.t_final, radii, workers, |r| {
        let k = radii.iter().position(|&x| x == r).expect("listed radius");
        Ok(point_from(r, &simulate(&configs[k], None)?))
    })?;
    write_sweep(&report, out_dir, &format!("{}_sweep_radius", template.tag))?;
    Ok(report)
}

/// Error at `t_final` against the curved-edge ansatz for each ε.
pub fn cmd_sweep_epsilon(template: &RunConfig, eps: &[f64], workers: usize, out_dir: &Path) -> Result<SweepReport> {
    let configs = eps.iter().map(|&e| template.with_epsilon(e)).collect::<Result<Vec<_>>>()?;
    let report = sweep_with("epsilon", template.t_final, eps, workers, |e| {
        let k = eps.iter().position(|&x| x == e).expect("listed epsilon");
        Ok(point_from(e, &simulate(&configs[k], None)?))
    })?;
    write_sweep(&report, out_dir, &format!("{}_sweep_epsilon", template.tag))?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub parameter: String,
    pub rows: Vec<(f64, f64)>,
    pub fit: PowerLawFit,
}

/// L² norm at `t = 0` of the configured ansatz's residual on its grid.
pub fn residual_norm(cfg: &RunConfig) -> Result<f64> {
    let grid = cfg.grid()?;
    let ansatz = cfg.ansatz()?;
    Ok(energy(&ansatz.sample_residual(&grid, 0.0)).sqrt())
}

/// Residual norm of the curved ansatz at an arbitrary `ε ∈ [0, 1)`,
/// including `ε = 0` where it vanishes identically.
pub fn curved_residual_norm(cfg: &RunConfig, epsilon: f64) -> Result<f64> {
    let grid = cfg.grid()?;
    let ansatz = cfg.ansatz()?;
    let AnsatzKind::Curved(c) = &ansatz.kind else {
        return Err(Error::Precondition("configuration is not a perturbed edge".into()));
    };
    let a = CurvedAnsatz::new(c.chi.clone(), c.h.clone(), epsilon, c.envelope)?;
    let f = crate::fields::SpinorField::from_fn(grid, |x| {
        let [p, q] = a.residual(0.0, x);
        [p * ansatz.scale, q * ansatz.scale]
    });
    Ok(energy(&f).sqrt())
}

/// Residual norms across radii (circle) or ε values (perturbed), without
/// time stepping, and their power-law fit.
pub fn cmd_ansatz_check(template: &RunConfig, values: &[f64], workers: usize, out_dir: &Path) -> Result<ResidualReport> {
    let (name, configs) = match template.geometry {
        GeometryConfig::Circle { .. } => ("R", values.iter().map(|&r| template.with_radius(r)).collect::<Result<Vec<_>>>()?),
        GeometryConfig::Perturbed { .. } => {
            ("epsilon", values.iter().map(|&e| template.with_epsilon(e)).collect::<Result<Vec<_>>>()?)
        }
        GeometryConfig::Straight { .. } => {
            return Err(Error::Config(vec!["ansatz-check needs a circle or perturbed geometry".into()]))
        }
    };
    let norms = run_parallel(values, workers, |v| {
        let k = values.iter().position(|&x| x == v).expect("listed value");
        residual_norm(&configs[k])
    })?;
    let rows: Vec<(f64, f64)> = values.iter().copied().zip(norms).collect();
    let fit = power_law_fit(&rows)?;
    let report = ResidualReport { parameter: name.to_string(), rows, fit };
    fs::create_dir_all(out_dir)?;
    let mut csv = format!("{name},residual_l2\n");
    for (p, r) in &report.rows {
        csv.push_str(&format!("{p},{r:e}\n"));
    }
    let stem = format!("{}_ansatz_check", template.tag);
    fs::write(out_dir.join(format!("{stem}.csv")), csv)?;
    fs::write(out_dir.join(format!("{stem}_fit.json")), serde_json::to_string_pretty(&report.fit)?)?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumArgs {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub count: usize,
    pub n: usize,
    pub half_width: f64,
    pub profile: ProfileName,
    pub m_inf: f64,
    pub dump_eigenvectors: bool,
}

impl Default for SpectrumArgs {
    fn default() -> Self {
        Self {
            lambda_min: -0.8,
            lambda_max: 0.8,
            count: 17,
            n: 1024,
            half_width: 30.0,
            profile: ProfileName::Tanh,
            m_inf: 1.0,
            dump_eigenvectors: false,
        }
    }
}

impl SpectrumArgs {
    pub fn lambdas(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.lambda_min],
            c => (0..c)
                .map(|k| self.lambda_min + (self.lambda_max - self.lambda_min) * k as f64 / (c - 1) as f64)
                .collect(),
        }
    }

    pub fn transition_profile(&self) -> Result<TransitionProfile> {
        match self.profile {
            ProfileName::Tanh => TransitionProfile::tanh(self.m_inf),
            ProfileName::Sign => TransitionProfile::sign(self.m_inf),
        }
    }
}

/// `spectrum.csv` with columns `lambda,omega_gap,edge` (empty `omega_gap`
/// when no edge mode lies in the gap), plus optional eigenvector dumps.
pub fn cmd_spectrum(args: &SpectrumArgs, workers: usize, out_dir: &Path) -> Result<Vec<DispersionRow>> {
    let profile = args.transition_profile()?;
    let grid = Grid1D::symmetric(args.half_width, args.n);
    let lambdas = args.lambdas();
    let points = run_parallel(&lambdas, workers, |l| scan_point(l, &profile, grid))?;
    fs::create_dir_all(out_dir)?;
    let mut csv = String::from("lambda,omega_gap,edge\n");
    for (r, _) in &points {
        let w = r.gap_omega.map(|w| format!("{w:.15e}")).unwrap_or_default();
        csv.push_str(&format!("{:.15e},{w},{:.15e}\n", r.lambda, r.edge));
    }
    fs::write(out_dir.join("spectrum.csv"), csv)?;
    if args.dump_eigenvectors {
        for (k, (r, modes)) in points.iter().enumerate() {
            for (j, m) in modes.iter().enumerate() {
                let header = Snapshot1DHeader { bounds: [grid.u_min, grid.u_max], n: grid.n, lambda: r.lambda, omega: m.omega };
                write_snapshot_1d(out_dir, &format!("eigvec_{k:03}_{j}"), &header, m.first(), m.second())?;
            }
        }
    }
    let rows = points.into_iter().map(|(r, _)| r).collect();
    Ok(rows)
}

/// Parses `"a,b,c"` into numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Config(vec![format!("bad number {x:?}: {e}")])))
        .collect()
}
