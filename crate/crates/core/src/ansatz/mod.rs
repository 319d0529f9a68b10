//! Closed-form edge states: exact ones for a straight edge and the
//! leading-order asymptotic ones for a circle and a slowly curved edge,
//! together with their analytic residuals.

pub mod chi;
pub mod circle;
pub mod curved;
pub mod envelope;
pub mod straight;

use num_complex::Complex64;

pub use chi::{chi, ChiProfile};
pub use circle::{circle_phi, CircleAnsatz, CirclePhi, SpinorBranch};
pub use curved::CurvedAnsatz;
pub use envelope::Envelope;
pub use straight::{edge_spinor, plane_wave, rotation_spinor, straight_traveling, SpinMatrix};

use crate::error::{Error, Result};
use crate::fields::{energy, GridSpec, Point, Spinor, SpinorField};
use crate::mass::{EdgeGeometry, MassModel, Perturbation};

#[derive(Debug, Clone)]
pub enum AnsatzKind {
    Plane { theta: f64, lambda: f64 },
    Straight { theta: f64, envelope: Envelope },
    Circle(CircleAnsatz),
    Curved(CurvedAnsatz),
}

/// Evaluator `(t, x) ↦ spinor` for one of the closed-form states, times a
/// fixed amplitude `scale`.
#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub kind: AnsatzKind,
    pub chi: ChiProfile,
    pub scale: f64,
}

impl AnsatzSolution {
    pub fn plane(chi: ChiProfile, theta: f64, lambda: f64) -> Self {
        Self { kind: AnsatzKind::Plane { theta, lambda }, chi, scale: 1.0 }
    }

    pub fn straight(chi: ChiProfile, theta: f64, envelope: Envelope) -> Result<Self> {
        if envelope.is_periodic() {
            return Err(Error::InvalidEnvelope("a straight edge needs a line envelope".into()));
        }
        Ok(Self { kind: AnsatzKind::Straight { theta, envelope }, chi, scale: 1.0 })
    }

    pub fn circle(chi: ChiProfile, radius: f64, envelope: Envelope, branch: SpinorBranch) -> Result<Self> {
        let phi = CirclePhi::new(radius, chi.clone())?;
        Ok(Self {
            kind: AnsatzKind::Circle(CircleAnsatz::new(phi, envelope, branch)?),
            chi,
            scale: 1.0,
        })
    }

    pub fn curved(chi: ChiProfile, h: Perturbation, epsilon: f64, envelope: Envelope) -> Result<Self> {
        Ok(Self {
            kind: AnsatzKind::Curved(CurvedAnsatz::new(chi.clone(), h, epsilon, envelope)?),
            chi,
            scale: 1.0,
        })
    }

    /// The traveling state matching a mass model's geometry.
    pub fn for_model(model: &MassModel, envelope: Envelope, branch: SpinorBranch) -> Result<Self> {
        let chi = ChiProfile::new(model.profile.clone())?;
        match &model.geometry {
            EdgeGeometry::Straight { theta } => Self::straight(chi, *theta, envelope),
            EdgeGeometry::Circle { radius } => Self::circle(chi, *radius, envelope, branch),
            EdgeGeometry::Perturbed { h, epsilon } => Self::curved(chi, h.clone(), *epsilon, envelope),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            AnsatzKind::Plane { .. } => "plane",
            AnsatzKind::Straight { .. } => "straight",
            AnsatzKind::Circle(_) => "circle",
            AnsatzKind::Curved(_) => "curved",
        }
    }

    pub fn evaluate(&self, t: f64, x: Point) -> Spinor {
        let [a, b] = match &self.kind {
            AnsatzKind::Plane { theta, lambda } => plane_wave(&self.chi, *theta, *lambda, t, x),
            AnsatzKind::Straight { theta, envelope } => straight_traveling(&self.chi, *theta, envelope, t, x),
            AnsatzKind::Circle(c) => c.evaluate(t, x),
            AnsatzKind::Curved(c) => c.evaluate(t, x),
        };
        [a * self.scale, b * self.scale]
    }

    /// `(i∂t + D)` applied to the state; identically zero for the exact
    /// straight-edge solutions.
    pub fn residual(&self, t: f64, x: Point) -> Spinor {
        let [a, b] = match &self.kind {
            AnsatzKind::Plane { .. } | AnsatzKind::Straight { .. } => [Complex64::new(0.0, 0.0); 2],
            AnsatzKind::Circle(c) => c.residual(t, x),
            AnsatzKind::Curved(c) => c.residual(t, x),
        };
        [a * self.scale, b * self.scale]
    }

    pub fn sample(&self, grid: &GridSpec, t: f64) -> SpinorField {
        SpinorField::from_fn(*grid, |x| self.evaluate(t, x))
    }

    pub fn sample_residual(&self, grid: &GridSpec, t: f64) -> SpinorField {
        SpinorField::from_fn(*grid, |x| self.residual(t, x))
    }

    /// Rescales so that the state sampled on `grid` at `t = 0` has unit energy.
    pub fn normalize_on(&mut self, grid: &GridSpec) -> Result<f64> {
        self.scale = 1.0;
        let e = energy(&self.sample(grid, 0.0));
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::Precondition("ansatz has zero energy on this grid".into()));
        }
        self.scale = 1.0 / e.sqrt();
        Ok(self.scale)
    }

    pub fn normalized_on(mut self, grid: &GridSpec) -> Result<Self> {
        self.normalize_on(grid)?;
        Ok(self)
    }

    /// Envelope amplitude at the polarization cut (circle only).
    pub fn cut_amplitude(&self, t: f64) -> f64 {
        match &self.kind {
            AnsatzKind::Circle(c) => c.cut_amplitude(t),
            _ => 0.0,
        }
    }
}

pub fn circle_ansatz(chi: &ChiProfile, radius: f64, g: &Envelope, t: f64, x: Point) -> Result<Spinor> {
    let a = AnsatzSolution::circle(chi.clone(), radius, *g, SpinorBranch::Fixed)?;
    Ok(a.evaluate(t, x))
}

pub fn circle_residual(chi: &ChiProfile, radius: f64, g: &Envelope, t: f64, x: Point) -> Result<Spinor> {
    let a = AnsatzSolution::circle(chi.clone(), radius, *g, SpinorBranch::Fixed)?;
    Ok(a.residual(t, x))
}

pub fn curved_ansatz(chi: &ChiProfile, h: &Perturbation, epsilon: f64, g: &Envelope, t: f64, x: Point) -> Result<Spinor> {
    Ok(CurvedAnsatz::new(chi.clone(), h.clone(), epsilon, *g)?.evaluate(t, x))
}

pub fn curved_residual(chi: &ChiProfile, h: &Perturbation, epsilon: f64, g: &Envelope, t: f64, x: Point) -> Result<Spinor> {
    Ok(CurvedAnsatz::new(chi.clone(), h.clone(), epsilon, *g)?.residual(t, x))
}
