//! Uniform periodic grids and two-component complex fields.
//!
//! Arrays are stored with shape `(n2, n1)` in row-major order, so the
//! `x1` index runs fastest in memory. Element `[[j, i]]` is the value at
//! `(x1_min + i·dx1, x2_min + j·dx2)`.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane.
pub type Point = [f64; 2];

/// Two complex components at one point.
pub type Spinor = [Complex64; 2];

/// Uniform grid on a periodic box `[x1_min, x1_max) × [x2_min, x2_max)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x1_min: f64,
    pub x1_max: f64,
    pub x2_min: f64,
    pub x2_max: f64,
    pub n1: usize,
    pub n2: usize,
}

impl GridSpec {
    /// Validates the bounds and sizes. Both sizes must be powers of two.
    pub fn new(bounds: [f64; 4], n1: usize, n2: usize) -> Result<Self> {
        let [x1_min, x1_max, x2_min, x2_max] = bounds;
        if !n1.is_power_of_two() || !n2.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "grid sizes must be powers of two, got {n1}×{n2}"
            )));
        }
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x1_max <= x1_min || x2_max <= x2_min {
            return Err(Error::InvalidGrid(format!(
                "degenerate bounds [{x1_min}, {x1_max}] × [{x2_min}, {x2_max}]"
            )));
        }
        Ok(Self {
            x1_min,
            x1_max,
            x2_min,
            x2_max,
            n1,
            n2,
        })
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.x1_min, self.x1_max, self.x2_min, self.x2_max]
    }

    pub fn len1(&self) -> f64 {
        self.x1_max - self.x1_min
    }

    pub fn len2(&self) -> f64 {
        self.x2_max - self.x2_min
    }

    pub fn dx1(&self) -> f64 {
        self.len1() / self.n1 as f64
    }

    pub fn dx2(&self) -> f64 {
        self.len2() / self.n2 as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx1() * self.dx2()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n2, self.n1)
    }

    pub fn x1(&self, i: usize) -> f64 {
        self.x1_min + i as f64 * self.dx1()
    }

    pub fn x2(&self, j: usize) -> f64 {
        self.x2_min + j as f64 * self.dx2()
    }

    /// Coordinates of node `(i, j)`; `i` indexes `x1`.
    pub fn point(&self, i: usize, j: usize) -> Point {
        [self.x1(i), self.x2(j)]
    }

    /// Angular wavenumbers in FFT order for an axis of `n` points over `len`.
    pub fn wavenumbers(n: usize, len: f64) -> Vec<f64> {
        let base = 2.0 * std::f64::consts::PI / len;
        (0..n)
            .map(|i| {
                let s = if i < n / 2 { i as isize } else { i as isize - n as isize };
                base * s as f64
            })
            .collect()
    }

    /// Samples a scalar function at every node.
    pub fn sample<F: Fn(Point) -> f64>(&self, f: F) -> Array2<f64> {
        Array2::from_shape_fn(self.shape(), |(j, i)| f(self.point(i, j)))
    }
}

/// Grid constructor with the argument order used throughout the docs.
pub fn make_grid(bounds: [f64; 4], n1: usize, n2: usize) -> Result<GridSpec> {
    GridSpec::new(bounds, n1, n2)
}

/// The canonical state `(β₁, β₂)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    pub beta1: Array2<Complex64>,
    pub beta2: Array2<Complex64>,
    pub grid: GridSpec,
}

impl SpinorField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            beta1: Array2::zeros(grid.shape()),
            beta2: Array2::zeros(grid.shape()),
            grid,
        }
    }

    pub fn from_components(
        grid: GridSpec,
        beta1: Array2<Complex64>,
        beta2: Array2<Complex64>,
    ) -> Result<Self> {
        if beta1.dim() != grid.shape() || beta2.dim() != grid.shape() {
            return Err(Error::InvalidGrid(format!(
                "component shapes {:?}/{:?} do not match grid {:?}",
                beta1.dim(),
                beta2.dim(),
                grid.shape()
            )));
        }
        Ok(Self { beta1, beta2, grid })
    }

    /// Evaluates a spinor-valued function at every node.
    pub fn from_fn<F: Fn(Point) -> Spinor>(grid: GridSpec, f: F) -> Self {
        let mut out = Self::zeros(grid);
        for j in 0..grid.n2 {
            for i in 0..grid.n1 {
                let [a, b] = f(grid.point(i, j));
                out.beta1[[j, i]] = a;
                out.beta2[[j, i]] = b;
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.beta1.iter().chain(self.beta2.iter()).all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Pointwise density `|β₁|² + |β₂|²`.
    pub fn density(&self) -> Array2<f64> {
        let mut d = self.beta1.mapv(|z| z.norm_sqr());
        d.zip_mut_with(&self.beta2, |a, b| *a += b.norm_sqr());
        d
    }

    pub fn max_amplitude(&self) -> f64 {
        self.density().iter().fold(0.0_f64, |m, &v| m.max(v)).sqrt()
    }

    /// Largest amplitude on the outermost `width` cells of the box.
    pub fn frame_max(&self, width: usize) -> f64 {
        let (n2, n1) = self.grid.shape();
        let d = self.density();
        let mut m = 0.0_f64;
        for j in 0..n2 {
            for i in 0..n1 {
                let on_frame = i < width || j < width || i + width >= n1 || j + width >= n2;
                if on_frame {
                    m = m.max(d[[j, i]]);
                }
            }
        }
        m.sqrt()
    }

    pub fn scale(&mut self, s: f64) {
        self.beta1.mapv_inplace(|z| z * s);
        self.beta2.mapv_inplace(|z| z * s);
    }

    pub fn scaled(mut self, s: f64) -> Self {
        self.scale(s);
        self
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            beta1: &self.beta1 - &other.beta1,
            beta2: &self.beta2 - &other.beta2,
            grid: self.grid,
        })
    }

    /// Weighted sum of the density against a scalar function of position.
    pub fn moment<F: Fn(Point) -> f64>(&self, f: F) -> f64 {
        let g = &self.grid;
        let d = self.density();
        let mut acc = 0.0;
        for j in 0..g.n2 {
            for i in 0..g.n1 {
                acc += d[[j, i]] * f(g.point(i, j));
            }
        }
        acc * g.cell_area()
    }
}

/// The original unknowns `(α₁, α₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaField {
    pub alpha1: Array2<Complex64>,
    pub alpha2: Array2<Complex64>,
    pub grid: GridSpec,
}

impl AlphaField {
    pub fn from_components(
        grid: GridSpec,
        alpha1: Array2<Complex64>,
        alpha2: Array2<Complex64>,
    ) -> Result<Self> {
        if alpha1.dim() != grid.shape() || alpha2.dim() != grid.shape() {
            return Err(Error::InvalidGrid("component shapes do not match grid".into()));
        }
        Ok(Self { alpha1, alpha2, grid })
    }

    /// `∫|α₁|² + |α₂|²` by the cell sum.
    pub fn energy(&self) -> f64 {
        let s: f64 = self
            .alpha1
            .iter()
            .chain(self.alpha2.iter())
            .map(|z| z.norm_sqr())
            .sum();
        s * self.grid.cell_area()
    }
}

fn check_same_grid(a: &GridSpec, b: &GridSpec) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `𝓔 = ∫|β₁|² + |β₂|²` by the rectangle rule.
pub fn energy(f: &SpinorField) -> f64 {
    let s: f64 = f
        .beta1
        .iter()
        .chain(f.beta2.iter())
        .map(|z| z.norm_sqr())
        .sum();
    s * f.grid.cell_area()
}

pub fn l2_norm(f: &SpinorField) -> f64 {
    energy(f).sqrt()
}

pub fn l2_distance(a: &SpinorField, b: &SpinorField) -> Result<f64> {
    check_same_grid(&a.grid, &b.grid)?;
    let s: f64 = a
        .beta1
        .iter()
        .zip(b.beta1.iter())
        .chain(a.beta2.iter().zip(b.beta2.iter()))
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    Ok((s * a.grid.cell_area()).sqrt())
}

/// `β₁ = α₁ + iα₂`, `β₂ = α₁ − iα₂`.
pub fn alpha_to_beta(a: &AlphaField) -> SpinorField {
    let i = Complex64::i();
    let mut beta1 = a.alpha1.clone();
    let mut beta2 = a.alpha1.clone();
    beta1.zip_mut_with(&a.alpha2, |b, &z| *b += i * z);
    beta2.zip_mut_with(&a.alpha2, |b, &z| *b -= i * z);
    SpinorField {
        beta1,
        beta2,
        grid: a.grid,
    }
}

/// Inverse of [`alpha_to_beta`]: `α₁ = (β₁ + β₂)/2`, `α₂ = (β₁ − β₂)/(2i)`.
pub fn beta_to_alpha(f: &SpinorField) -> AlphaField {
    let half_i = Complex64::new(0.0, -0.5);
    let mut alpha1 = f.beta1.clone();
    let mut alpha2 = f.beta1.clone();
    alpha1.zip_mut_with(&f.beta2, |a, &z| *a = (*a + z) * 0.5);
    alpha2.zip_mut_with(&f.beta2, |a, &z| *a = (*a - z) * half_i);
    AlphaField {
        alpha1,
        alpha2,
        grid: f.grid,
    }
}
