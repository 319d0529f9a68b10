//! Strang split-step propagator for `i∂t β + Dβ = 0`.
//!
//! `D` splits into the constant-coefficient derivative block, applied
//! exactly per Fourier mode, and the pointwise mass block
//! `m(x)·[[0, 1], [1, 0]]`, applied exactly per grid point. Both factors are
//! unitary, so the discrete energy is conserved up to roundoff. Only the
//! field has to be periodic: the mass never enters Fourier space.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::fields::{energy, GridSpec, SpinorField};

/// Per-mode coefficients of `exp(iτA_k)`, stored transposed (`k₁`-major)
/// to match the spectral layout used by [`Fft2`].
#[derive(Debug, Clone)]
struct DerivativeFactor {
    c: Vec<f64>,
    sk1: Vec<f64>,
    sk2: Vec<f64>,
}

impl DerivativeFactor {
    /// `U_k = [[c − i s k̂₂, s k̂₁], [−s k̂₁, c + i s k̂₂]]`, scaled by `scale`.
    fn new(grid: &GridSpec, tau: f64, scale: f64) -> Self {
        let k1 = GridSpec::wavenumbers(grid.n1, grid.len1());
        let k2 = GridSpec::wavenumbers(grid.n2, grid.len2());
        let n = grid.n1 * grid.n2;
        let (mut c, mut sk1, mut sk2) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for &a in &k1 {
            for &b in &k2 {
                let k = a.hypot(b);
                let (s, co) = (k * tau).sin_cos();
                c.push(co * scale);
                if k > 0.0 {
                    sk1.push(s * a / k * scale);
                    sk2.push(s * b / k * scale);
                } else {
                    sk1.push(0.0);
                    sk2.push(0.0);
                }
            }
        }
        Self { c, sk1, sk2 }
    }

    fn apply(&self, b1: &mut [Complex64], b2: &mut [Complex64]) {
        for idx in 0..b1.len() {
            let (c, s1, s2) = (self.c[idx], self.sk1[idx], self.sk2[idx]);
            let (x, y) = (b1[idx], b2[idx]);
            b1[idx] = Complex64::new(c, -s2) * x + s1 * y;
            b2[idx] = -s1 * x + Complex64::new(c, s2) * y;
        }
    }

    /// 2×2 matrix of mode `idx` (transposed index).
    fn matrix(&self, idx: usize) -> [[Complex64; 2]; 2] {
        let (c, s1, s2) = (self.c[idx], self.sk1[idx], self.sk2[idx]);
        [
            [Complex64::new(c, -s2), Complex64::new(s1, 0.0)],
            [Complex64::new(-s1, 0.0), Complex64::new(c, s2)],
        ]
    }
}

/// Pointwise `cos(mτ)I + i sin(mτ)·[[0, 1], [1, 0]]`.
#[derive(Debug, Clone)]
struct MassFactor {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl MassFactor {
    fn new(mass: &Array2<f64>, tau: f64) -> Self {
        let (sin, cos) = mass.iter().map(|m| (m * tau).sin_cos()).unzip();
        Self { cos, sin }
    }

    fn apply(&self, b1: &mut [Complex64], b2: &mut [Complex64]) {
        for idx in 0..b1.len() {
            let (c, s) = (self.cos[idx], self.sin[idx]);
            let (x, y) = (b1[idx], b2[idx]);
            b1[idx] = c * x + Complex64::new(0.0, s) * y;
            b2[idx] = Complex64::new(0.0, s) * x + c * y;
        }
    }
}

/// Unnormalized 2D FFT on `(n2, n1)` row-major data. The forward transform
/// leaves the spectrum transposed (`(n1, n2)`); the inverse expects that
/// layout and restores the original one.
struct Fft2 {
    n1: usize,
    n2: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Fft2 {
    fn new(n1: usize, n2: usize) -> Self {
        let mut planner = FftPlanner::new();
        let row_fwd = planner.plan_fft_forward(n1);
        let row_inv = planner.plan_fft_inverse(n1);
        let col_fwd = planner.plan_fft_forward(n2);
        let col_inv = planner.plan_fft_inverse(n2);
        let scratch_len = [&row_fwd, &row_inv, &col_fwd, &col_inv]
            .iter()
            .map(|p| p.get_inplace_scratch_len())
            .max()
            .unwrap_or(0);
        Self {
            n1,
            n2,
            row_fwd,
            row_inv,
            col_fwd,
            col_inv,
            scratch: vec![Complex64::default(); scratch_len],
            tmp: vec![Complex64::default(); n1 * n2],
        }
    }

    fn forward(&mut self, data: &mut [Complex64]) {
        self.row_fwd.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.tmp, self.n2, self.n1);
        self.col_fwd.process_with_scratch(&mut self.tmp, &mut self.scratch);
        data.copy_from_slice(&self.tmp);
    }

    fn inverse(&mut self, data: &mut [Complex64]) {
        self.col_inv.process_with_scratch(data, &mut self.scratch);
        transpose(data, &mut self.tmp, self.n1, self.n2);
        self.row_inv.process_with_scratch(&mut self.tmp, &mut self.scratch);
        data.copy_from_slice(&self.tmp);
    }
}

/// `dst[c][r] = src[r][c]` for a `rows × cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 32;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Precomputed factors for one grid, mass and step size.
pub struct SplitStepPlan {
    pub grid: GridSpec,
    pub mass: Array2<f64>,
    pub dt: f64,
    derivative: DerivativeFactor,
    half_mass: MassFactor,
    full_mass: MassFactor,
    fft: Fft2,
}

impl std::fmt::Debug for SplitStepPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitStepPlan").field("grid", &self.grid).field("dt", &self.dt).finish()
    }
}

impl SplitStepPlan {
    pub fn new(grid: GridSpec, mass: Array2<f64>, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(Error::Precondition(format!("time step must be finite and nonzero, got {dt}")));
        }
        if mass.dim() != grid.shape() {
            return Err(Error::GridMismatch);
        }
        let scale = 1.0 / (grid.n1 * grid.n2) as f64;
        Ok(Self {
            derivative: DerivativeFactor::new(&grid, dt, scale),
            half_mass: MassFactor::new(&mass, 0.5 * dt),
            full_mass: MassFactor::new(&mass, dt),
            fft: Fft2::new(grid.n1, grid.n2),
            grid,
            mass,
            dt,
        })
    }

    /// Same grid and mass, step `−dt`.
    pub fn reversed(&self) -> Self {
        Self::new(self.grid, self.mass.clone(), -self.dt).expect("validated plan")
    }

    /// Largest deviation of `U*U` from the identity over all modes and
    /// grid points, for the derivative and the half-step mass factors.
    pub fn unitarity_defect(&self) -> (f64, f64) {
        let scale = (self.grid.n1 * self.grid.n2) as f64;
        let mut worst_d = 0.0_f64;
        for idx in 0..self.derivative.c.len() {
            let m = self.derivative.matrix(idx);
            let m = m.map(|row| row.map(|z| z * scale));
            worst_d = worst_d.max(defect(&m));
        }
        let mut worst_m = 0.0_f64;
        for idx in 0..self.half_mass.cos.len() {
            let c = Complex64::new(self.half_mass.cos[idx], 0.0);
            let s = Complex64::new(0.0, self.half_mass.sin[idx]);
            worst_m = worst_m.max(defect(&[[c, s], [s, c]]));
        }
        (worst_d, worst_m)
    }

    fn derivative_in_place(&mut self, f: &mut SpinorField) {
        let b1 = f.beta1.as_slice_mut().expect("standard layout");
        let b2 = f.beta2.as_slice_mut().expect("standard layout");
        self.fft.forward(b1);
        self.fft.forward(b2);
        self.derivative.apply(b1, b2);
        self.fft.inverse(b1);
        self.fft.inverse(b2);
    }

    fn mass_in_place(factor: &MassFactor, f: &mut SpinorField) {
        let b1 = f.beta1.as_slice_mut().expect("standard layout");
        let b2 = f.beta2.as_slice_mut().expect("standard layout");
        factor.apply(b1, b2);
    }

    /// One Strang step: half mass, full derivative, half mass.
    pub fn strang_step(&mut self, f: &mut SpinorField) {
        Self::mass_in_place(&self.half_mass, f);
        self.derivative_in_place(f);
        Self::mass_in_place(&self.half_mass, f);
    }

    /// `n` Strang steps with adjacent half mass steps merged.
    pub fn advance(&mut self, f: &mut SpinorField, n: usize) {
        if n == 0 {
            return;
        }
        Self::mass_in_place(&self.half_mass, f);
        for k in 0..n {
            self.derivative_in_place(f);
            let factor = if k + 1 == n { &self.half_mass } else { &self.full_mass };
            Self::mass_in_place(factor, f);
        }
    }
}

fn defect(m: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let e: Complex64 = (0..2).map(|k| m[k][i].conj() * m[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((e - want).norm());
        }
    }
    worst
}

fn standard(f: &SpinorField) -> SpinorField {
    // guarantees contiguous row-major storage for the FFT passes
    SpinorField {
        beta1: f.beta1.as_standard_layout().into_owned(),
        beta2: f.beta2.as_standard_layout().into_owned(),
        grid: f.grid,
    }
}

/// Exact flow of the derivative block over time `tau`.
pub fn derivative_step(f: &SpinorField, tau: f64) -> SpinorField {
    let grid = f.grid;
    let mut out = standard(f);
    if tau == 0.0 {
        return out;
    }
    let factor = DerivativeFactor::new(&grid, tau, 1.0 / (grid.n1 * grid.n2) as f64);
    let mut fft = Fft2::new(grid.n1, grid.n2);
    let b1 = out.beta1.as_slice_mut().expect("standard layout");
    let b2 = out.beta2.as_slice_mut().expect("standard layout");
    fft.forward(b1);
    fft.forward(b2);
    factor.apply(b1, b2);
    fft.inverse(b1);
    fft.inverse(b2);
    out
}

/// Exact pointwise flow of the mass block over time `tau`.
pub fn mass_step(f: &SpinorField, mass: &Array2<f64>, tau: f64) -> Result<SpinorField> {
    if mass.dim() != f.grid.shape() {
        return Err(Error::GridMismatch);
    }
    let mut out = standard(f);
    SplitStepPlan::mass_in_place(&MassFactor::new(mass, tau), &mut out);
    Ok(out)
}

/// One Strang step of size `dt` (builds a throwaway plan).
pub fn strang_step(f: &SpinorField, mass: &Array2<f64>, dt: f64) -> Result<SpinorField> {
    let mut plan = SplitStepPlan::new(f.grid, mass.clone(), dt)?;
    let mut out = standard(f);
    plan.strang_step(&mut out);
    Ok(out)
}

/// Default step `0.4·min(dx₁, dx₂)`.
pub fn default_dt(grid: &GridSpec) -> f64 {
    0.4 * grid.dx1().min(grid.dx2())
}

/// Observation times `0, Δ, 2Δ, …` up to `t_final`, merged with `extra`.
/// Times beyond `t_final` are dropped; `t_final` itself is always present.
pub fn observation_times(t_final: f64, interval: f64, extra: &[f64]) -> Vec<f64> {
    let mut times = vec![0.0];
    if t_final > 0.0 && interval > 0.0 {
        let n = (t_final / interval * (1.0 + 1e-12)).floor() as usize;
        times.extend((1..=n).map(|k| k as f64 * interval));
    }
    times.extend(extra.iter().copied().filter(|&t| (0.0..=t_final * (1.0 + 1e-12)).contains(&t)));
    times.push(t_final);
    times.sort_by(f64::total_cmp);
    times.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * t_final.max(1.0));
    times
}

#[derive(Debug, Clone)]
pub struct EvolveReport {
    pub field: SpinorField,
    pub steps: usize,
    pub energy0: f64,
    /// Largest `|𝓔(t) − 𝓔(0)|/𝓔(0)` over the observation times.
    pub max_energy_drift: f64,
    /// Largest frame-to-peak amplitude ratio over the observation times.
    pub max_leak_ratio: f64,
    pub leaked: bool,
}

/// Frame amplitude relative to the field maximum above which a run is flagged.
pub const LEAK_THRESHOLD: f64 = 1e-6;

/// Evolves `f0` through the given observation times (sorted, starting at 0)
/// and calls `observe(t, field)` at each of them. Between consecutive times
/// the step is shrunk from `dt` so that it divides the gap exactly.
pub fn evolve<F>(f0: &SpinorField, mass: &Array2<f64>, times: &[f64], dt: f64, mut observe: F) -> Result<EvolveReport>
where
    F: FnMut(f64, &SpinorField) -> Result<()>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Precondition(format!("time step must be positive, got {dt}")));
    }
    if times.first() != Some(&0.0) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition("observation times must start at 0 and increase".into()));
    }
    if mass.dim() != f0.grid.shape() {
        return Err(Error::GridMismatch);
    }
    let mut field = standard(f0);
    let energy0 = energy(&field);
    let mut plans: BTreeMap<u64, SplitStepPlan> = BTreeMap::new();
    let mut steps = 0;
    let mut max_drift = 0.0_f64;
    let mut max_leak = 0.0_f64;
    let mut prev = 0.0;
    for &t in times {
        if t > prev {
            let gap = t - prev;
            let n = (gap / dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = gap / n as f64;
            let plan = match plans.entry(h.to_bits()) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(SplitStepPlan::new(field.grid, mass.clone(), h)?)
                }
            };
            plan.advance(&mut field, n);
            steps += n;
            prev = t;
        }
        if !field.is_finite() {
            return Err(Error::NonFinite { step: steps, t });
        }
        let e = energy(&field);
        if energy0 > 0.0 {
            max_drift = max_drift.max((e - energy0).abs() / energy0);
        }
        let peak = field.max_amplitude();
        if peak > 0.0 {
            max_leak = max_leak.max(field.frame_max(2) / peak);
        }
        observe(t, &field)?;
    }
    Ok(EvolveReport {
        field,
        steps,
        energy0,
        max_energy_drift: max_drift,
        max_leak_ratio: max_leak,
        leaked: max_leak >= LEAK_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{l2_distance, l2_norm, make_grid};
    use std::f64::consts::PI;

    fn grid(n: usize, half: f64) -> GridSpec {
        make_grid([-half, half, -half, half], n, n).unwrap()
    }

    fn gaussian_field(g: GridSpec) -> SpinorField {
        SpinorField::from_fn(g, |x| {
            let r2 = (x[0] - 0.3).powi(2) + (x[1] + 0.5).powi(2);
            let e = (-r2 / 2.0).exp();
            [Complex64::new(e, 0.2 * x[0] * e), Complex64::new(-0.4 * x[1] * e, 0.7 * e)]
        })
    }

    /// `exp(iτH)` for a Hermitian 2×2 `H` by scaling and squaring of the
    /// Taylor series.
    fn expm_i(h: [[Complex64; 2]; 2], tau: f64) -> [[Complex64; 2]; 2] {
        let mul = |a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]| {
            let mut c = [[Complex64::default(); 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        };
        let squarings = 10;
        let z = Complex64::new(0.0, tau / (1u64 << squarings) as f64);
        let a = h.map(|row| row.map(|v| v * z));
        let mut term = [[Complex64::new(1.0, 0.0), Complex64::default()], [Complex64::default(), Complex64::new(1.0, 0.0)]];
        let mut sum = term;
        for k in 1..30 {
            term = mul(term, a).map(|row| row.map(|v| v / k as f64));
            for i in 0..2 {
                for j in 0..2 {
                    sum[i][j] += term[i][j];
                }
            }
        }
        for _ in 0..squarings {
            sum = mul(sum, sum);
        }
        sum
    }

    /// Single Fourier mode `e^{ik·x}(a, b)` on the grid.
    fn mode(g: GridSpec, k: [f64; 2], a: Complex64, b: Complex64) -> SpinorField {
        SpinorField::from_fn(g, |x| {
            let p = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]);
            [p * a, p * b]
        })
    }

    #[test]
    fn zero_tau_is_the_identity() {
        let g = grid(32, 6.0);
        let f = gaussian_field(g);
        assert_eq!(derivative_step(&f, 0.0), f);
        let m = Array2::from_elem(g.shape(), 0.7);
        assert_eq!(mass_step(&f, &m, 0.0).unwrap(), f);
    }

    #[test]
    fn single_mode_matches_matrix_exponential() {
        // box of length 2π: integer wavenumbers
        let g = make_grid([-PI, PI, -PI, PI], 16, 16).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        for (k, tau) in [([1.0, 0.0], 0.3), ([2.0, -3.0], 0.77), ([0.0, 1.0], -1.1)] {
            let f = mode(g, k, one, Complex64::new(0.2, -0.5));
            let out = derivative_step(&f, tau);
            let sym = [
                [Complex64::new(-k[1], 0.0), Complex64::new(0.0, -k[0])],
                [Complex64::new(0.0, k[0]), Complex64::new(k[1], 0.0)],
            ];
            let u = expm_i(sym, tau);
            let a = u[0][0] * one + u[0][1] * Complex64::new(0.2, -0.5);
            let b = u[1][0] * one + u[1][1] * Complex64::new(0.2, -0.5);
            let want = mode(g, k, a, b);
            assert!(l2_distance(&out, &want).unwrap() < 1e-12);
        }
        // k = (1, 0), input (1, 0): output (cos τ, −sin τ)
        let tau = 0.4;
        let out = derivative_step(&mode(g, [1.0, 0.0], one, zero), tau);
        let want = mode(g, [1.0, 0.0], Complex64::new(tau.cos(), 0.0), Complex64::new(-tau.sin(), 0.0));
        assert!(l2_distance(&out, &want).unwrap() < 1e-12);
    }

    #[test]
    fn zero_mode_is_unchanged() {
        let g = grid(16, 4.0);
        let one = Complex64::new(1.0, 0.0);
        let f = mode(g, [0.0, 0.0], one, Complex64::new(0.0, 2.0));
        let out = derivative_step(&f, 1.3);
        assert!(l2_distance(&out, &f).unwrap() < 1e-13);
    }

    #[test]
    fn constant_mass_rotation_and_group_property() {
        let g = grid(16, 4.0);
        let m0 = 0.8;
        let tau = 0.9;
        let mass = Array2::from_elem(g.shape(), m0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        let f = SpinorField::from_fn(g, |_| [one, zero]);
        let out = mass_step(&f, &mass, tau).unwrap();
        let want = SpinorField::from_fn(g, |_| [Complex64::new((m0 * tau).cos(), 0.0), Complex64::new(0.0, (m0 * tau).sin())]);
        assert!(l2_distance(&out, &want).unwrap() < 1e-14);
        let h = gaussian_field(g);
        let mass = g.sample(|x| x[0].tanh() * 1.7);
        let two = mass_step(&mass_step(&h, &mass, tau / 2.0).unwrap(), &mass, tau / 2.0).unwrap();
        let one_step = mass_step(&h, &mass, tau).unwrap();
        assert!(l2_distance(&two, &one_step).unwrap() < 1e-14 * l2_norm(&h).max(1.0));
    }

    #[test]
    fn every_factor_is_unitary() {
        let g = grid(64, 10.0);
        let mass = g.sample(|x| 3.0 * x[0].tanh());
        let plan = SplitStepPlan::new(g, mass, 0.37).unwrap();
        let (d, m) = plan.unitarity_defect();
        assert!(d < 1e-14 && m < 1e-14, "{d} {m}");
    }

    #[test]
    fn norm_preserved_by_each_factor() {
        let g = grid(64, 8.0);
        let f = gaussian_field(g);
        let n0 = l2_norm(&f);
        let mass = g.sample(|x| x[0].tanh());
        for out in [derivative_step(&f, 0.7), mass_step(&f, &mass, 0.7).unwrap(), strang_step(&f, &mass, 0.7).unwrap()] {
            assert!((l2_norm(&out) - n0).abs() / n0 < 1e-13);
        }
    }

    #[test]
    fn massless_strang_step_is_the_derivative_flow() {
        let g = grid(32, 6.0);
        let f = gaussian_field(g);
        let zero = Array2::zeros(g.shape());
        let a = strang_step(&f, &zero, 0.2).unwrap();
        let b = derivative_step(&f, 0.2);
        assert!(l2_distance(&a, &b).unwrap() < 1e-14);
    }

    #[test]
    fn constant_mass_local_error_is_third_order() {
        // exact flow of a single mode: exp(iτ(A_k + mσx))
        let g = make_grid([-PI, PI, -PI, PI], 16, 16).unwrap();
        let m0 = 1.3;
        let k = [2.0, 1.0];
        let mass = Array2::from_elem(g.shape(), m0);
        let a0 = Complex64::new(1.0, 0.0);
        let b0 = Complex64::new(0.3, 0.4);
        let f = mode(g, k, a0, b0);
        let sym = [
            [Complex64::new(-k[1], 0.0), Complex64::new(m0, -k[0])],
            [Complex64::new(m0, k[0]), Complex64::new(k[1], 0.0)],
        ];
        let err = |dt: f64| {
            let u = expm_i(sym, dt);
            let exact = mode(g, k, u[0][0] * a0 + u[0][1] * b0, u[1][0] * a0 + u[1][1] * b0);
            l2_distance(&strang_step(&f, &mass, dt).unwrap(), &exact).unwrap()
        };
        let (e1, e2) = (err(0.02), err(0.01));
        let ratio = e1 / e2;
        assert!(ratio > 7.0 && ratio < 9.0, "{ratio}");
    }

    #[test]
    fn evolve_at_zero_time_returns_initial_data() {
        let g = grid(32, 6.0);
        let f = gaussian_field(g);
        let mass = g.sample(|x| x[0].tanh());
        let mut seen = Vec::new();
        let rep = evolve(&f, &mass, &[0.0], 0.1, |t, _| {
            seen.push(t);
            Ok(())
        })
        .unwrap();
        assert_eq!(rep.field, f);
        assert_eq!(rep.steps, 0);
        assert_eq!(seen, vec![0.0]);
    }

    #[test]
    fn evolve_hits_observation_times_exactly() {
        let times = observation_times(1.0, 0.3, &[0.45]);
        assert_eq!(times.len(), 6);
        assert!((times[2] - 0.45).abs() < 1e-15 && times[5] == 1.0);
        let g = grid(32, 6.0);
        let f = gaussian_field(g);
        let mass = g.sample(|x| x[0].tanh());
        let mut seen = Vec::new();
        let rep = evolve(&f, &mass, &times, 0.07, |t, _| {
            seen.push(t);
            Ok(())
        })
        .unwrap();
        assert_eq!(seen, times);
        assert!(rep.max_energy_drift < 1e-12);
        assert!(evolve(&f, &mass, &[0.0, 0.5, 0.4], 0.1, |_, _| Ok(())).is_err());
        assert!(evolve(&f, &mass, &[0.0, 1.0], -0.1, |_, _| Ok(())).is_err());
    }

    #[test]
    fn reversal_recovers_initial_data() {
        let g = grid(64, 8.0);
        let f = gaussian_field(g);
        let mass = g.sample(|x| 2.0 * (x[0] - 0.5 * x[1]).tanh());
        let mut plan = SplitStepPlan::new(g, mass, 0.05).unwrap();
        let mut back = plan.reversed();
        let mut h = f.clone();
        plan.advance(&mut h, 200);
        back.advance(&mut h, 200);
        assert!(l2_distance(&h, &f).unwrap() / l2_norm(&f) < 1e-9);
    }

    #[test]
    fn nan_aborts_the_run() {
        let g = grid(16, 4.0);
        let mut f = gaussian_field(g);
        f.beta1[[3, 3]] = Complex64::new(f64::NAN, 0.0);
        let mass = Array2::zeros(g.shape());
        let err = evolve(&f, &mass, &[0.0, 0.1], 0.05, |_, _| Ok(())).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn leak_monitor_flags_mass_at_the_frame() {
        let g = grid(32, 4.0);
        let f = SpinorField::from_fn(g, |_| [Complex64::new(1.0, 0.0), Complex64::default()]);
        let mass = Array2::zeros(g.shape());
        let rep = evolve(&f, &mass, &[0.0], 0.1, |_, _| Ok(())).unwrap();
        assert!(rep.leaked);
        let g = grid(64, 12.0);
        let rep = evolve(&gaussian_field(g), &Array2::zeros(g.shape()), &[0.0], 0.1, |_, _| Ok(())).unwrap();
        assert!(!rep.leaked);
    }
}
