//! Diagnostics on trajectories: distance to an ansatz, edge centroid,
//! chirality, and log-log power-law fits.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::ansatz::AnsatzSolution;
use crate::error::{Error, Result};
use crate::fields::{energy, l2_distance, SpinorField};
use crate::mass::EdgeGeometry;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub l2_error: f64,
    pub energy: f64,
    pub centroid: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ErrorSeries {
    pub samples: Vec<Sample>,
}

impl ErrorSeries {
    pub fn push(&mut self, s: Sample) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(s.t > last.t) {
                return Err(Error::Precondition(format!("sample times must increase: {} after {}", s.t, last.t)));
            }
        }
        self.samples.push(s);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn max_energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        if first.energy == 0.0 {
            return 0.0;
        }
        self.samples
            .iter()
            .map(|s| (s.energy - first.energy).abs() / first.energy)
            .fold(0.0, f64::max)
    }

    /// `max/min` of `error(t)/t` over samples with `t ∈ [t_lo, t_hi]`.
    pub fn growth_ratio(&self, t_lo: f64, t_hi: f64) -> Option<f64> {
        let q: Vec<f64> = self
            .samples
            .iter()
            .filter(|s| s.t >= t_lo - 1e-12 && s.t <= t_hi + 1e-12 && s.t > 0.0)
            .map(|s| s.l2_error / s.t)
            .collect();
        if q.len() < 2 {
            return None;
        }
        let max = q.iter().copied().fold(f64::MIN, f64::max);
        let min = q.iter().copied().fold(f64::MAX, f64::min);
        Some(max / min)
    }

    /// Centroid samples with circle angles unwrapped to a continuous track.
    pub fn centroid_track(&self, geometry: &EdgeGeometry) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(self.samples.len());
        for s in &self.samples {
            let mut c = s.centroid;
            if let (EdgeGeometry::Circle { .. }, Some(&(_, prev))) = (geometry, out.last()) {
                c = prev + wrap_angle(c - prev);
            }
            out.push((s.t, c));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,l2_error,energy,centroid\n");
        for p in &self.samples {
            s.push_str(&format!("{:e},{:e},{:e},{:e}\n", p.t, p.l2_error, p.energy, p.centroid));
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }
}

/// Maps an angle difference into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let r = a.rem_euclid(TAU);
    if r > PI { r - TAU } else { r }
}

/// Density-weighted centroid: circular mean of the polar angle (in
/// `[0, 2π)`) for a circle, mean tangential coordinate `t̂·x` for a
/// straight edge, mean `x₂` for a perturbed one.
pub fn edge_centroid(f: &SpinorField, geometry: &EdgeGeometry) -> Result<f64> {
    let total = energy(f);
    if !(total >= 1e-12) {
        return Err(Error::EmptyField(total));
    }
    Ok(match geometry {
        EdgeGeometry::Circle { .. } => {
            let s = f.moment(|x| x[1].atan2(x[0]).sin());
            let c = f.moment(|x| x[1].atan2(x[0]).cos());
            s.atan2(c).rem_euclid(std::f64::consts::TAU)
        }
        EdgeGeometry::Straight { theta } => {
            let (sn, cs) = theta.sin_cos();
            f.moment(|x| -sn * x[0] + cs * x[1]) / total
        }
        EdgeGeometry::Perturbed { .. } => f.moment(|x| x[1]) / total,
    })
}

pub fn sample(t: f64, f: &SpinorField, ansatz: &AnsatzSolution, geometry: &EdgeGeometry) -> Result<Sample> {
    let reference = ansatz.sample(&f.grid, t);
    Ok(Sample {
        t,
        l2_error: l2_distance(f, &reference)?,
        energy: energy(f),
        centroid: edge_centroid(f, geometry)?,
    })
}

/// L² distance to the ansatz, energy and centroid at every trajectory time.
pub fn error_vs_ansatz(
    trajectory: &[(f64, SpinorField)],
    ansatz: &AnsatzSolution,
    geometry: &EdgeGeometry,
) -> Result<ErrorSeries> {
    let mut series = ErrorSeries::default();
    if let Some((_, first)) = trajectory.first() {
        if trajectory.iter().any(|(_, f)| f.grid != first.grid) {
            return Err(Error::GridMismatch);
        }
    }
    for (t, f) in trajectory {
        series.push(sample(*t, f, ansatz, geometry)?)?;
    }
    Ok(series)
}

/// Drift below this is indistinguishable from a stationary packet.
pub const CHIRALITY_NOISE: f64 = 1e-8;

/// Sign of the centroid drift from the first to the last recorded sample,
/// in the geometry's positive orientation (counterclockwise for a circle,
/// along `t̂` for a line).
pub fn chirality_sign(track: &[(f64, f64)], geometry: &EdgeGeometry) -> Result<i32> {
    if track.len() < 2 {
        return Err(Error::Precondition(format!("chirality needs at least 2 samples, got {}", track.len())));
    }
    let mut drift = 0.0;
    for w in track.windows(2) {
        let d = w[1].1 - w[0].1;
        drift += match geometry {
            EdgeGeometry::Circle { .. } => wrap_angle(d),
            _ => d,
        };
    }
    if drift.abs() < CHIRALITY_NOISE {
        return Err(Error::NoDrift { drift, threshold: CHIRALITY_NOISE });
    }
    Ok(if drift > 0.0 { 1 } else { -1 })
}

/// Ordinary least squares `y = slope·x + intercept` with residual RMS.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("fit abscissae are all equal".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    /// `(ln p, ln e)` pairs the line was fitted to.
    pub points: Vec<(f64, f64)>,
}

impl PowerLawFit {
    pub fn predict(&self, p: f64) -> f64 {
        (self.intercept + self.slope * p.ln()).exp()
    }
}

/// Least-squares line through `(ln p, ln e)`; at least three points, all positive.
pub fn power_law_fit(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if let Some(&(p, e)) = points.iter().find(|(p, e)| !(*p > 0.0 && *e > 0.0)) {
        return Err(Error::NonPositive(p, e));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(p, e)| (p.ln(), e.ln())).collect();
    let (slope, intercept, residual_rms) = linear_fit(&logs)?;
    if !residual_rms.is_finite() {
        return Err(Error::Precondition("fit residual is not finite".into()));
    }
    Ok(PowerLawFit { slope, intercept, residual_rms, points: logs })
}
