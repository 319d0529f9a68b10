//! Error at T = 5 against the circle ansatz for several radii.
//!
//! The fitted slope comes out steeper than -2 at these radii: see the
//! README for why.
//!
//! cargo run --release --example radius_sweep [workers]

use dirac_edge::cli::cmd_sweep_radius;
use dirac_edge::config::{GeometryConfig, RunConfig};

fn main() -> dirac_edge::Result<()> {
    let workers = std::env::args().nth(1).map_or(1, |s| s.parse().expect("worker count"));
    let template = RunConfig::new(GeometryConfig::Circle { radius: 20.0 });
    let report = cmd_sweep_radius(&template, &[10.0, 15.0, 20.0, 30.0, 40.0], workers, "out/radius_sweep".as_ref())?;
    for r in &report.runs {
        println!("R {:<4} error {:.4e}  R^2*error {:.3}", r.parameter, r.error, r.parameter.powi(2) * r.error);
    }
    println!("slope {:.4}", report.fit.slope);
    Ok(())
}
