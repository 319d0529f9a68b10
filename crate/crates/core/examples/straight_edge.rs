//! A Gaussian packet on the straight edge travels without changing shape.
//! Prints the error against the exact traveling wave, the centroid speed
//! and the direction of travel.
//!
//! cargo run --release --example straight_edge

use dirac_edge::analysis::{chirality_sign, linear_fit};
use dirac_edge::cli::simulate;
use dirac_edge::config::{GeometryConfig, RunConfig};

fn main() -> dirac_edge::Result<()> {
    let mut cfg = RunConfig::new(GeometryConfig::Straight { theta: 0.0 });
    // 256² already resolves the packet to roundoff; dt sets the error
    cfg.grid.n1 = Some(256);
    cfg.grid.n2 = Some(256);
    cfg.dt = Some(0.01);

    let run = simulate(&cfg, None)?;
    println!("{:>5} {:>12} {:>18} {:>10}", "t", "error", "energy", "x2 centroid");
    for s in &run.series.samples {
        println!("{:>5.2} {:>12.3e} {:>18.15} {:>10.5}", s.t, s.l2_error, s.energy, s.centroid);
    }
    let line = cfg.mass_model()?.geometry;
    let track = run.series.centroid_track(&line);
    let (v, _, _) = linear_fit(&track)?;
    println!("velocity {v:.6}, chirality {:+}", chirality_sign(&track, &line)?);
    Ok(())
}
