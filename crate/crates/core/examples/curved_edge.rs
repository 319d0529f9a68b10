//! Error at T = 5 against the curved-edge ansatz as the perturbation
//! parameter shrinks, with its log-log slope.
//!
//! cargo run --release --example curved_edge [workers]

use dirac_edge::cli::cmd_sweep_epsilon;
use dirac_edge::config::{GeometryConfig, RunConfig};

fn main() -> dirac_edge::Result<()> {
    let workers = std::env::args().nth(1).map_or(1, |s| s.parse().expect("worker count"));
    let mut template = RunConfig::new(GeometryConfig::Perturbed { epsilon: 0.1, amplitude: 1.0, frequency: 1.0 });
    // small enough that the smallest ε is not polluted by splitting error
    template.dt = Some(0.01);
    let report = cmd_sweep_epsilon(&template, &[0.05, 0.1, 0.15, 0.2, 0.3], workers, "out/curved_edge".as_ref())?;
    for r in &report.runs {
        println!("eps {:<5} error {:.4e}  drift {:.1e}", r.parameter, r.error, r.max_energy_drift);
    }
    println!("slope {:.4}", report.fit.slope);
    Ok(())
}
