//! The configuration files shipped with the crate parse and validate.

use std::path::PathBuf;

use dirac_edge::config::{parse_config, GeometryConfig};

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

#[test]
fn every_shipped_config_is_valid() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg = parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.validate().unwrap();
        cfg.grid().unwrap();
        n += 1;
    }
    assert!(n >= 4);
}

#[test]
fn quarter_turn_snapshots_end_at_the_final_time() {
    let cfg = parse_config(&shipped("circle_quarter_turn.toml")).unwrap();
    let GeometryConfig::Circle { radius } = cfg.geometry else { panic!("circle expected") };
    assert!((cfg.t_final - std::f64::consts::PI * radius / 2.0).abs() < 1e-12);
    assert_eq!(cfg.snapshots.len(), 4);
    assert_eq!(*cfg.snapshots.last().unwrap(), cfg.t_final);
}

#[test]
fn perturbed_box_holds_whole_periods() {
    let cfg = parse_config(&shipped("perturbed.toml")).unwrap();
    let g = cfg.grid().unwrap();
    let periods = g.len2() / cfg.x2_period().unwrap();
    assert!((periods - periods.round()).abs() < 1e-9, "{periods}");
}
