//! Raw field snapshots: little-endian `f64` quadruples
//! `[re β₁, im β₁, re β₂, im β₂]` per node, `x₁` fastest, plus a JSON
//! sidecar describing the grid.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{GridSpec, SpinorField};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub bounds: [f64; 4],
    pub n1: usize,
    pub n2: usize,
    pub t: f64,
    pub geometry: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot1DHeader {
    pub bounds: [f64; 2],
    pub n: usize,
    pub lambda: f64,
    pub omega: f64,
}

fn push_complex(out: &mut Vec<u8>, z: Complex64) {
    out.extend_from_slice(&z.re.to_le_bytes());
    out.extend_from_slice(&z.im.to_le_bytes());
}

pub fn encode(field: &SpinorField) -> Vec<u8> {
    let (n2, n1) = field.grid.shape();
    let mut out = Vec::with_capacity(n1 * n2 * 32);
    for j in 0..n2 {
        for i in 0..n1 {
            push_complex(&mut out, field.beta1[[j, i]]);
            push_complex(&mut out, field.beta2[[j, i]]);
        }
    }
    out
}

fn read_f64s(bytes: &[u8]) -> Vec<f64> {
    bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect()
}

pub fn decode(header: &SnapshotHeader, bytes: &[u8]) -> Result<SpinorField> {
    let grid = GridSpec::new(header.bounds, header.n1, header.n2)?;
    let expected = header.n1 * header.n2 * 32;
    if bytes.len() != expected {
        return Err(Error::Precondition(format!("snapshot has {} bytes, expected {expected}", bytes.len())));
    }
    let v = read_f64s(bytes);
    let mut beta1 = Array2::zeros(grid.shape());
    let mut beta2 = Array2::zeros(grid.shape());
    for j in 0..header.n2 {
        for i in 0..header.n1 {
            let k = 4 * (j * header.n1 + i);
            beta1[[j, i]] = Complex64::new(v[k], v[k + 1]);
            beta2[[j, i]] = Complex64::new(v[k + 2], v[k + 3]);
        }
    }
    SpinorField::from_components(grid, beta1, beta2)
}

fn sidecar(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

/// Writes `<stem>.bin` and `<stem>.json` into `dir`; returns the binary path.
pub fn write_snapshot(dir: &Path, stem: &str, field: &SpinorField, t: f64, geometry: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let bin = dir.join(format!("{stem}.bin"));
    let header = SnapshotHeader {
        bounds: field.grid.bounds(),
        n1: field.grid.n1,
        n2: field.grid.n2,
        t,
        geometry: geometry.to_string(),
    };
    fs::write(&bin, encode(field))?;
    fs::write(sidecar(&bin), serde_json::to_string_pretty(&header)?)?;
    Ok(bin)
}

pub fn read_snapshot(bin: &Path) -> Result<(SnapshotHeader, SpinorField)> {
    let header: SnapshotHeader = serde_json::from_str(&fs::read_to_string(sidecar(bin))?)?;
    let field = decode(&header, &fs::read(bin)?)?;
    Ok((header, field))
}

/// 1D variant for eigenvectors: `[re v₁, im v₁, re v₂, im v₂]` per node.
pub fn write_snapshot_1d(
    dir: &Path,
    stem: &str,
    header: &Snapshot1DHeader,
    first: &[Complex64],
    second: &[Complex64],
) -> Result<PathBuf> {
    if first.len() != header.n || second.len() != header.n {
        return Err(Error::Precondition("eigenvector length does not match header".into()));
    }
    fs::create_dir_all(dir)?;
    let bin = dir.join(format!("{stem}.bin"));
    let mut out = Vec::with_capacity(header.n * 32);
    for (a, b) in first.iter().zip(second) {
        push_complex(&mut out, *a);
        push_complex(&mut out, *b);
    }
    fs::write(&bin, out)?;
    fs::write(sidecar(&bin), serde_json::to_string_pretty(header)?)?;
    Ok(bin)
}

pub fn read_snapshot_1d(bin: &Path) -> Result<(Snapshot1DHeader, Vec<Complex64>, Vec<Complex64>)> {
    let header: Snapshot1DHeader = serde_json::from_str(&fs::read_to_string(sidecar(bin))?)?;
    let v = read_f64s(&fs::read(bin)?);
    if v.len() != 4 * header.n {
        return Err(Error::Precondition(format!("1D snapshot has {} values, expected {}", v.len(), 4 * header.n)));
    }
    let first = v.chunks_exact(4).map(|c| Complex64::new(c[0], c[1])).collect();
    let second = v.chunks_exact(4).map(|c| Complex64::new(c[2], c[3])).collect();
    Ok((header, first, second))
}
