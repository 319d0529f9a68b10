use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dirac_edge::cli::{self, SpectrumArgs, EXIT_NUMERICAL, EXIT_OK};
use dirac_edge::config::{parse_config, ProfileName, RunConfig};
use dirac_edge::Result;

#[derive(Parser)]
#[command(name = "dirac-edge", version, about = "Edge states of the massive Dirac equation")]
struct Cli {
    /// Worker threads for sweeps and scans.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Output directory (overrides `output.dir`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured edge state and record its error against the ansatz.
    Run {
        #[command(flatten)]
        config: ConfigArg,
        /// Snapshot times, e.g. `0,31.4159,62.8319`.
        #[arg(long)]
        snapshots: Option<String>,
    },
    /// Error at t_final over a list of circle radii, with a power-law fit.
    SweepRadius {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "10,15,20,30,40")]
        values: String,
    },
    /// Error at t_final over a list of ε, with a power-law fit.
    SweepEpsilon {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value = "0.05,0.1,0.15,0.2,0.3")]
        values: String,
    },
    /// Residual norms of the ansatz over radii (circle) or ε (perturbed).
    AnsatzCheck {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        values: String,
    },
    /// Dispersion scan of the transverse 1D operator.
    Spectrum {
        #[arg(long, default_value_t = -0.8, allow_negative_numbers = true)]
        lambda_min: f64,
        #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long, default_value_t = 17)]
        count: usize,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 30.0)]
        half_width: f64,
        #[arg(long, value_enum, default_value_t = Profile::Tanh)]
        profile: Profile,
        #[arg(long, default_value_t = 1.0)]
        m_inf: f64,
        /// Also write the gap eigenvectors as 1D snapshots.
        #[arg(long)]
        dump_eigenvectors: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Tanh,
    Sign,
}

fn out_dir(cli_dir: &Option<PathBuf>, cfg: &RunConfig) -> PathBuf {
    cli_dir.clone().unwrap_or_else(|| cfg.out_dir.clone())
}

fn load(path: &Path) -> Result<RunConfig> {
    parse_config(path)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { config, snapshots } => {
            let mut cfg = load(&config.config)?;
            if let Some(s) = snapshots {
                cfg.snapshots = cli::parse_list(&s)?;
                cfg.validate()?;
            }
            let dir = out_dir(&cli.out_dir, &cfg);
            let s = cli::cmd_run(&cfg, &dir)?;
            println!(
                "{}: error {:.6e} at t = {}, energy drift {:.2e}, leak ratio {:.2e}, {} snapshot(s) in {}",
                s.tag,
                s.final_error,
                cfg.t_final,
                s.max_energy_drift,
                s.max_leak_ratio,
                s.snapshots.len(),
                dir.display()
            );
            if s.leaked {
                eprintln!("warning: field reached the box boundary (leak ratio {:.2e})", s.max_leak_ratio);
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
        Command::SweepRadius { config, values } => {
            let cfg = load(&config.config)?;
            let r = cli::cmd_sweep_radius(&cfg, &cli::parse_list(&values)?, cli.workers, &out_dir(&cli.out_dir, &cfg))?;
            report_sweep(&r)
        }
        Command::SweepEpsilon { config, values } => {
            let cfg = load(&config.config)?;
            let r = cli::cmd_sweep_epsilon(&cfg, &cli::parse_list(&values)?, cli.workers, &out_dir(&cli.out_dir, &cfg))?;
            report_sweep(&r)
        }
        Command::AnsatzCheck { config, values } => {
            let cfg = load(&config.config)?;
            let r = cli::cmd_ansatz_check(&cfg, &cli::parse_list(&values)?, cli.workers, &out_dir(&cli.out_dir, &cfg))?;
            for (p, n) in &r.rows {
                println!("{} = {p}: residual {n:.6e}", r.parameter);
            }
            println!("slope {:.4} (rms {:.2e})", r.fit.slope, r.fit.residual_rms);
            Ok(EXIT_OK)
        }
        Command::Spectrum { lambda_min, lambda_max, count, n, half_width, profile, m_inf, dump_eigenvectors } => {
            let args = SpectrumArgs {
                lambda_min,
                lambda_max,
                count,
                n,
                half_width,
                profile: match profile {
                    Profile::Tanh => ProfileName::Tanh,
                    Profile::Sign => ProfileName::Sign,
                },
                m_inf,
                dump_eigenvectors,
            };
            let dir = cli.out_dir.unwrap_or_else(|| PathBuf::from("out"));
            let rows = cli::cmd_spectrum(&args, cli.workers, &dir)?;
            for r in &rows {
                match r.gap_omega {
                    Some(w) => println!("lambda {:+.4}: omega {w:+.10}, continuum edge {:.6}", r.lambda, r.edge),
                    None => println!("lambda {:+.4}: no gap mode, continuum edge {:.6}", r.lambda, r.edge),
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn report_sweep(r: &cli::SweepReport) -> Result<i32> {
    for p in &r.runs {
        let flag = if p.leaked { "  (leaked, excluded)" } else { "" };
        println!("{} = {}: error {:.6e}{flag}", r.parameter, p.parameter, p.error);
    }
    println!("slope {:.4}, intercept {:.4} (rms {:.2e})", r.fit.slope, r.fit.intercept, r.fit.residual_rms);
    if r.runs.iter().any(|p| p.leaked) {
        return Ok(EXIT_NUMERICAL);
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
