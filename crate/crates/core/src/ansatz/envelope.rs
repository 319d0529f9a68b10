use crate::error::{Error, Result};

/// Slowly varying amplitude carried along the edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// `exp(−(v − center)²/(2·width²))` on the line.
    Gaussian { center: f64, width: f64 },
    /// `exp(κ(cos(θ − center) − 1))`, 2π-periodic.
    PeriodicBump { center: f64, kappa: f64 },
}

impl Envelope {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite() && center.is_finite()) {
            return Err(Error::InvalidEnvelope(format!("gaussian width must be positive, got {width}")));
        }
        Ok(Self::Gaussian { center, width })
    }

    pub fn periodic_bump(center: f64, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite() && center.is_finite()) {
            return Err(Error::InvalidEnvelope(format!("bump kappa must be positive, got {kappa}")));
        }
        Ok(Self::PeriodicBump { center, kappa })
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Self::PeriodicBump { .. })
    }

    pub fn center(&self) -> f64 {
        match *self {
            Self::Gaussian { center, .. } | Self::PeriodicBump { center, .. } => center,
        }
    }

    pub fn value(&self, v: f64) -> f64 {
        match *self {
            Self::Gaussian { center, width } => {
                let z = (v - center) / width;
                (-0.5 * z * z).exp()
            }
            Self::PeriodicBump { center, kappa } => (kappa * ((v - center).cos() - 1.0)).exp(),
        }
    }

    pub fn derivative(&self, v: f64) -> f64 {
        match *self {
            Self::Gaussian { center, width } => -(v - center) / (width * width) * self.value(v),
            Self::PeriodicBump { center, kappa } => -kappa * (v - center).sin() * self.value(v),
        }
    }
}
