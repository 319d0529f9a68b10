//! A quarter turn around a circular edge of radius 20, with snapshots read
//! back from disk to follow the packet's angular position.
//!
//! cargo run --release --example circle_edge [out_dir]

use std::path::PathBuf;

use dirac_edge::analysis::edge_centroid;
use dirac_edge::cli::cmd_run;
use dirac_edge::config::parse_config;
use dirac_edge::mass::EdgeGeometry;
use dirac_edge::snapshot::read_snapshot;

fn main() -> dirac_edge::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("out/circle_edge"), PathBuf::from);
    let cfg = parse_config(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/circle_quarter_turn.toml"))?;
    let summary = cmd_run(&cfg, &out)?;
    println!(
        "error {:.4e} at t = {:.4}, energy drift {:.1e}, leak ratio {:.1e}",
        summary.final_error,
        cfg.t_final,
        summary.max_energy_drift,
        summary.max_leak_ratio
    );

    let ring = EdgeGeometry::Circle { radius: 20.0 };
    for path in &summary.snapshots {
        let (header, field) = read_snapshot(path)?;
        let angle = edge_centroid(&field, &ring)?;
        println!("t = {:>8.4}  centroid angle {angle:.5}  expected {:.5}", header.t, std::f64::consts::PI + header.t / 20.0);
    }
    println!("snapshots in {}", out.display());
    Ok(())
}
