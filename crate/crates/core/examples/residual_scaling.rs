//! How far each ansatz is from solving the equation, without time
//! stepping: the residual norm falls as 1/R² on a circle and as ε² on a
//! perturbed line.
//!
//! cargo run --release --example residual_scaling

use dirac_edge::cli::cmd_ansatz_check;
use dirac_edge::config::{GeometryConfig, RunConfig};

fn main() -> dirac_edge::Result<()> {
    let out = std::path::Path::new("out/residual_scaling");
    let circle = RunConfig::new(GeometryConfig::Circle { radius: 20.0 });
    let curved = RunConfig::new(GeometryConfig::Perturbed { epsilon: 0.1, amplitude: 1.0, frequency: 1.0 });
    for (cfg, values) in [(circle, vec![20.0, 40.0, 80.0]), (curved, vec![0.05, 0.1, 0.2])] {
        let report = cmd_ansatz_check(&cfg, &values, 1, out)?;
        for (p, r) in &report.rows {
            println!("{} = {p:<5} residual {r:.4e}", report.parameter);
        }
        println!("slope {:.4}\n", report.fit.slope);
    }
    Ok(())
}
