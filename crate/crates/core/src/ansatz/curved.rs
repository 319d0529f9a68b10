//! Asymptotic edge state along the curve `x₁ + h(εx₂) = 0`.

use num_complex::Complex64;

use super::chi::ChiProfile;
use super::envelope::Envelope;
use crate::error::{Error, Result};
use crate::fields::{Point, Spinor};
use crate::mass::Perturbation;

#[derive(Debug, Clone)]
pub struct CurvedAnsatz {
    pub chi: ChiProfile,
    pub h: Perturbation,
    pub epsilon: f64,
    pub envelope: Envelope,
}

struct Local {
    u: f64,
    arg: f64,
    h1: f64,
    h2: f64,
}

impl CurvedAnsatz {
    pub fn new(chi: ChiProfile, h: Perturbation, epsilon: f64, envelope: Envelope) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidModel(format!("epsilon must lie in [0, 1), got {epsilon}")));
        }
        if envelope.is_periodic() {
            return Err(Error::InvalidEnvelope("the curved ansatz needs a line envelope".into()));
        }
        Ok(Self { chi, h, epsilon, envelope })
    }

    fn local(&self, t: f64, x: Point) -> Local {
        let e = self.epsilon;
        let s = e * x[1];
        let u = x[0] + self.h.value(s);
        let h1 = self.h.d1(s);
        Local {
            u,
            arg: -e * h1 * u + x[1] - t,
            h1,
            h2: self.h.d2(s),
        }
    }

    /// `χ(u)·g(−εh'u + x₂ − t)·(1, (i/2)εh')` with `u = x₁ + h(εx₂)`.
    pub fn evaluate(&self, t: f64, x: Point) -> Spinor {
        let l = self.local(t, x);
        let amp = self.chi.eval(l.u) * self.envelope.value(l.arg);
        [
            Complex64::new(amp, 0.0),
            Complex64::new(0.0, 0.5 * self.epsilon * l.h1 * amp),
        ]
    }

    /// Exact value of `(i∂t + D^ε)` applied to [`Self::evaluate`]:
    /// `(ε²/2)·( −2iuχg'h'' − iχg'h'²,
    ///           χgh'' + χ'gh'² − εuχg'h'h'' − εχg'h'³ )`.
    pub fn residual(&self, t: f64, x: Point) -> Spinor {
        let e = self.epsilon;
        let Local { u, arg, h1, h2 } = self.local(t, x);
        let c = self.chi.eval(u);
        let dc = self.chi.derivative(u);
        let g = self.envelope.value(arg);
        let dg = self.envelope.derivative(arg);
        let k = 0.5 * e * e;
        let first = -2.0 * u * c * dg * h2 - c * dg * h1 * h1;
        let second = c * g * h2 + dc * g * h1 * h1 - e * u * c * dg * h1 * h2 - e * c * dg * h1.powi(3);
        [Complex64::new(0.0, k * first), Complex64::new(k * second, 0.0)]
    }
}
