//! Asymptotic edge state on a circle of radius `R`:
//! `φ(r)·g(θ − t/R)·(cos θ/2, i sin θ/2)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::chi::ChiProfile;
use super::envelope::Envelope;
use crate::error::{Error, Result};
use crate::fields::{Point, Spinor};

/// Radial profile: zero on `[0, R/3]`, `χ(r − R)·e^{−r/2R}/√R` on `[R/2, ∞)`,
/// and a smoothstep blend of the outer formula in between.
#[derive(Debug, Clone)]
pub struct CirclePhi {
    pub radius: f64,
    pub chi: ChiProfile,
}

impl CirclePhi {
    pub fn new(radius: f64, chi: ChiProfile) -> Result<Self> {
        if !(radius > 3.0 * chi.profile.r0) {
            return Err(Error::InvalidModel(format!(
                "R ≤ 3·r0 (R = {radius}, r0 = {})",
                chi.profile.r0
            )));
        }
        Ok(Self { radius, chi })
    }

    fn outer(&self, r: f64) -> f64 {
        let rr = self.radius;
        self.chi.eval(r - rr) * (-r / (2.0 * rr)).exp() / rr.sqrt()
    }

    /// `d/dr` of the outer formula: `(−m(r − R) − 1/2R)·outer`.
    fn outer_derivative(&self, r: f64) -> f64 {
        let rr = self.radius;
        (-self.chi.profile.eval(r - rr) - 0.5 / rr) * self.outer(r)
    }

    /// Smoothstep weight and its derivative on `(R/3, R/2)`.
    fn blend(&self, r: f64) -> (f64, f64) {
        let (a, b) = (self.radius / 3.0, self.radius / 2.0);
        if r <= a {
            (0.0, 0.0)
        } else if r >= b {
            (1.0, 0.0)
        } else {
            let w = b - a;
            let s = (r - a) / w;
            (s * s * (3.0 - 2.0 * s), 6.0 * s * (1.0 - s) / w)
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        let (w, _) = self.blend(r);
        if w == 0.0 {
            0.0
        } else {
            w * self.outer(r)
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let (w, dw) = self.blend(r);
        if w == 0.0 {
            0.0
        } else {
            dw * self.outer(r) + w * self.outer_derivative(r)
        }
    }

    /// `max |φ'(r)| · R / (12 φ(R/2))` over the blend interval; the slope
    /// condition on the blend asks for a value below one.
    pub fn blend_slope_ratio(&self) -> f64 {
        let rr = self.radius;
        let (a, b) = (rr / 3.0, rr / 2.0);
        let scale = 12.0 * self.value(b) / rr;
        (1..2000)
            .map(|k| {
                let r = a + (b - a) * k as f64 / 2000.0;
                self.derivative(r).abs() / scale
            })
            .fold(0.0, f64::max)
    }
}

/// How the double-valued half-angle polarization is made single-valued.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinorBranch {
    /// `θ ∈ [0, 2π)`: the cut sits on the positive `x₁` axis for all time.
    #[default]
    Fixed,
    /// `θ ∈ [θ_c − π, θ_c + π)` with `θ_c = center + t/R`: the cut stays
    /// opposite the packet, following the continuous evolution.
    Comoving,
}

#[derive(Debug, Clone)]
pub struct CircleAnsatz {
    pub phi: CirclePhi,
    pub envelope: Envelope,
    pub branch: SpinorBranch,
}

impl CircleAnsatz {
    pub fn new(phi: CirclePhi, envelope: Envelope, branch: SpinorBranch) -> Result<Self> {
        if !envelope.is_periodic() {
            return Err(Error::InvalidEnvelope("the circle ansatz needs a periodic envelope".into()));
        }
        Ok(Self { phi, envelope, branch })
    }

    pub fn radius(&self) -> f64 {
        self.phi.radius
    }

    /// Lower end of the angle branch at time `t`.
    fn cut(&self, t: f64) -> f64 {
        match self.branch {
            SpinorBranch::Fixed => 0.0,
            SpinorBranch::Comoving => self.envelope.center() + t / self.radius() - PI,
        }
    }

    fn polar(&self, t: f64, x: Point) -> (f64, f64) {
        let r = x[0].hypot(x[1]);
        let lo = self.cut(t);
        let theta = lo + (x[1].atan2(x[0]) - lo).rem_euclid(TAU);
        (r, theta)
    }

    pub fn evaluate(&self, t: f64, x: Point) -> Spinor {
        let (r, theta) = self.polar(t, x);
        let amp = self.phi.value(r) * self.envelope.value(theta - t / self.radius());
        let (s, c) = (theta / 2.0).sin_cos();
        [Complex64::new(amp * c, 0.0), Complex64::new(0.0, amp * s)]
    }

    /// `(i∂t + D̃)` applied to [`Self::evaluate`]:
    /// `( i(φ' + mφ + φ/2r)g sin θ/2 + i(1/r − 1/R)φg' cos θ/2,
    ///    (φ' + mφ + φ/2r)g cos θ/2 − (1/r − 1/R)φg' sin θ/2 )`.
    pub fn residual(&self, t: f64, x: Point) -> Spinor {
        let (r, theta) = self.polar(t, x);
        let phi = self.phi.value(r);
        if phi == 0.0 && self.phi.derivative(r) == 0.0 {
            return [Complex64::new(0.0, 0.0); 2];
        }
        let rr = self.radius();
        let m = self.phi.chi.profile.eval(r - rr);
        let arg = theta - t / rr;
        let (g, dg) = (self.envelope.value(arg), self.envelope.derivative(arg));
        let radial = self.phi.derivative(r) + m * phi + phi / (2.0 * r);
        let angular = (1.0 / r - 1.0 / rr) * phi * dg;
        let (s, c) = (theta / 2.0).sin_cos();
        [
            Complex64::new(0.0, radial * g * s + angular * c),
            Complex64::new(radial * g * c - angular * s, 0.0),
        ]
    }

    /// Envelope value at the branch cut relative to its peak; the
    /// polarization jumps there, so this must stay negligible.
    pub fn cut_amplitude(&self, t: f64) -> f64 {
        self.envelope.value(self.cut(t) - t / self.radius())
    }
}

pub fn circle_phi(radius: f64, r: f64, chi: &ChiProfile) -> Result<f64> {
    Ok(CirclePhi::new(radius, chi.clone())?.value(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mass::TransitionProfile;

    fn chi() -> ChiProfile {
        ChiProfile::new(TransitionProfile::tanh(1.0).unwrap()).unwrap()
    }

    #[test]
    fn phi_branches() {
        let rr = 20.0;
        let p = CirclePhi::new(rr, chi()).unwrap();
        assert_eq!(p.value(rr / 4.0), 0.0);
        assert_eq!(p.value(rr / 3.0), 0.0);
        let want = chi().eval(0.0) * (-0.5f64).exp() / rr.sqrt();
        assert!((p.value(rr) - want).abs() < 1e-15);
        assert!(circle_phi(0.5, 1.0, &chi()).is_err());
    }

    #[test]
    fn phi_is_c1_at_the_joins() {
        let p = CirclePhi::new(10.0, chi()).unwrap();
        for r0 in [10.0 / 3.0, 5.0] {
            let h = 1e-7;
            assert!((p.value(r0 + h) - p.value(r0 - h)).abs() < 1e-8);
            assert!((p.derivative(r0 + h) - p.derivative(r0 - h)).abs() < 1e-6);
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let p = CirclePhi::new(12.0, chi()).unwrap();
        for k in 1..200 {
            let r = 0.1 * k as f64;
            let h = 1e-6;
            let fd = (p.value(r + h) - p.value(r - h)) / (2.0 * h);
            assert!((fd - p.derivative(r)).abs() < 1e-8, "r = {r}");
        }
    }

    #[test]
    fn blend_slope_bound_holds_only_for_small_radii() {
        // Finite-difference scan of the blend. At r = R/2 any C¹ profile has
        // |φ'| ≈ (1 − 1/2R)·φ(R/2), which exceeds 12φ(R/2)/R once R > 12.5.
        let ratio = |rr: f64| {
            let p = CirclePhi::new(rr, chi()).unwrap();
            let (a, b) = (rr / 3.0, rr / 2.0);
            let h = 1e-6;
            (1..400)
                .map(|k| {
                    let r = a + (b - a) * k as f64 / 400.0;
                    ((p.value(r + h) - p.value(r - h)) / (2.0 * h)).abs()
                })
                .fold(0.0, f64::max)
                * rr
                / (12.0 * p.value(b))
        };
        assert!(ratio(6.0) < 1.0);
        assert!(ratio(10.0) < 1.0);
        assert!(ratio(20.0) > 1.0);
        let p = CirclePhi::new(10.0, chi()).unwrap();
        assert!((p.blend_slope_ratio() - ratio(10.0)).abs() < 1e-3);
    }

    fn ansatz(branch: SpinorBranch) -> CircleAnsatz {
        CircleAnsatz::new(
            CirclePhi::new(20.0, chi()).unwrap(),
            Envelope::periodic_bump(PI, 40.0).unwrap(),
            branch,
        )
        .unwrap()
    }

    #[test]
    fn initial_condition_and_rotation() {
        let a = ansatz(SpinorBranch::Fixed);
        let rr = 20.0;
        // peak on the ring at θ = π, polarization (0, i)
        let [b1, b2] = a.evaluate(0.0, [-rr, 0.0]);
        assert!(b1.norm() < 1e-15);
        assert!((b2.im - a.phi.value(rr)).abs() < 1e-15);
        // quarter turn at t = πR/2: the peak moves to θ = 3π/2
        let t = PI * rr / 2.0;
        let peak = a.evaluate(t, [0.0, -rr]);
        let amp = (peak[0].norm_sqr() + peak[1].norm_sqr()).sqrt();
        assert!((amp - a.phi.value(rr)).abs() < 1e-14);
        // a full revolution returns the fixed-branch field exactly
        let t = TAU * rr;
        for x in [[-19.5, 2.0], [3.0, -20.4], [14.0, 14.0]] {
            let (p, q) = (a.evaluate(0.0, x), a.evaluate(t, x));
            assert!((p[0] - q[0]).norm() < 1e-12 && (p[1] - q[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn comoving_branch_agrees_away_from_the_cut_and_flips_after_a_turn() {
        let fixed = ansatz(SpinorBranch::Fixed);
        let moving = ansatz(SpinorBranch::Comoving);
        for x in [[-19.5, 2.0], [-15.0, -13.0]] {
            let (p, q) = (fixed.evaluate(0.0, x), moving.evaluate(0.0, x));
            assert!((p[0] - q[0]).norm() < 1e-15 && (p[1] - q[1]).norm() < 1e-15);
        }
        assert!(fixed.cut_amplitude(0.0) < 1e-30);
        // at t = πR the packet sits on the fixed cut; the comoving one is clear
        let t = PI * 20.0;
        assert!(fixed.cut_amplitude(t) > 0.5);
        assert!(moving.cut_amplitude(t) < 1e-30);
        // one revolution of the comoving branch picks up a sign
        let t = TAU * 20.0;
        let x = [-19.5, 2.0];
        let (p, q) = (moving.evaluate(0.0, x), moving.evaluate(t, x));
        assert!((p[1] + q[1]).norm() < 1e-12);
    }

    #[test]
    fn residual_vanishes_near_the_origin_and_matches_outer_identity() {
        let a = ansatz(SpinorBranch::Fixed);
        let [r1, r2] = a.residual(0.3, [2.0, -1.0]);
        assert_eq!(r1.norm() + r2.norm(), 0.0);
        // on r ≥ R/2 the radial bracket is (1/2r − 1/2R)φ
        let rr = 20.0;
        let x: [f64; 2] = [-21.0, 3.0];
        let r = x[0].hypot(x[1]);
        let theta = x[1].atan2(x[0]).rem_euclid(TAU);
        let g = a.envelope.value(theta);
        let bracket = (0.5 / r - 0.5 / rr) * a.phi.value(r);
        let dg = a.envelope.derivative(theta);
        let angular = (1.0 / r - 1.0 / rr) * a.phi.value(r) * dg;
        let want = bracket * g * (theta / 2.0).cos() - angular * (theta / 2.0).sin();
        assert!((a.residual(0.0, x)[1].re - want).abs() < 1e-15);
    }
}
