//! Transverse bound-state profile `χ(u) = C·exp(−∫₀ᵘ m)`.

use crate::error::{Error, Result};
use crate::mass::{ProfileKind, TransitionProfile};

/// Tabulated exponent for custom profiles (uniform step, Hermite interpolation).
#[derive(Debug, Clone)]
struct ExponentTable {
    u_max: f64,
    step: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl ExponentTable {
    fn eval(&self, u: f64, profile: &TransitionProfile) -> f64 {
        if u >= self.u_max {
            return self.values[self.values.len() - 1] + profile.m_inf * (u - self.u_max);
        }
        if u <= -self.u_max {
            return self.values[0] + profile.m_inf * (-self.u_max - u);
        }
        let pos = (u + self.u_max) / self.step;
        let k = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - k as f64;
        let (y0, y1) = (self.values[k], self.values[k + 1]);
        let (d0, d1) = (self.slopes[k] * self.step, self.slopes[k + 1] * self.step);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1
    }
}

/// Normalized profile `χ` for a given transition function, `∫χ² = 1`.
#[derive(Debug, Clone)]
pub struct ChiProfile {
    pub profile: TransitionProfile,
    /// Normalization constant `C = χ(0)`.
    pub norm: f64,
    table: Option<ExponentTable>,
}

impl ChiProfile {
    pub fn new(profile: TransitionProfile) -> Result<Self> {
        let table = match &profile.kind {
            ProfileKind::Custom(_) => Some(tabulate_exponent(&profile)?),
            _ => None,
        };
        let mut chi = Self {
            profile,
            norm: 1.0,
            table,
        };
        chi.norm = chi.normalization()?;
        Ok(chi)
    }

    /// `∫₀ᵘ m(s) ds`.
    pub fn exponent(&self, u: f64) -> f64 {
        let m = self.profile.m_inf;
        match &self.profile.kind {
            // ln cosh u, written to stay finite for large |u|
            ProfileKind::Tanh => {
                let a = u.abs();
                m * (a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2)
            }
            ProfileKind::Sign => m * u.abs(),
            ProfileKind::Custom(_) => self
                .table
                .as_ref()
                .expect("custom profiles carry a table")
                .eval(u, &self.profile),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.norm * (-self.exponent(u)).exp()
    }

    /// `χ'(u) = −m(u)·χ(u)`.
    pub fn derivative(&self, u: f64) -> f64 {
        -self.profile.eval(u) * self.eval(u)
    }

    fn normalization(&self) -> Result<f64> {
        let m = self.profile.m_inf;
        match self.profile.kind {
            ProfileKind::Sign => Ok(m.sqrt()),
            _ => {
                // exponent grows like m_inf·|u|; e^{-2E} < 1e-30 beyond this
                let half = 35.0 / m + 4.0 * self.profile.r0 + 5.0;
                let tail = (-2.0 * self.exponent(half)).exp() + (-2.0 * self.exponent(-half)).exp();
                if !(tail < 1e-14) {
                    return Err(Error::Quadrature(format!(
                        "χ is not localized: χ²(±{half:.1}) sums to {tail:e}"
                    )));
                }
                let n = 40_000;
                let h = 2.0 * half / n as f64;
                let mut s = 0.0;
                for k in 0..=n {
                    let u = -half + k as f64 * h;
                    let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                    s += w * (-2.0 * self.exponent(u)).exp();
                }
                let integral = s * h;
                if !(integral.is_finite() && integral > 0.0) {
                    return Err(Error::Quadrature("normalization integral is not finite".into()));
                }
                Ok(1.0 / integral.sqrt())
            }
        }
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if !delta.is_finite() {
            return Err(Error::Quadrature("integrand is not finite".into()));
        }
        if delta.abs() <= 15.0 * tol {
            return Ok(left + right + delta / 15.0);
        }
        if depth == 0 {
            return Err(Error::Quadrature(format!("no convergence on [{a}, {b}]")));
        }
        Ok(recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)?
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)?)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, depth)
}

fn tabulate_exponent(profile: &TransitionProfile) -> Result<ExponentTable> {
    let u_max = 40.0 / profile.m_inf + 4.0 * profile.r0 + 5.0;
    let step = 2e-3;
    let n_half = (u_max / step).ceil() as usize;
    let u_max = n_half as f64 * step;
    let m = |u: f64| profile.eval(u);
    let mut values = vec![0.0; 2 * n_half + 1];
    let mut acc = 0.0;
    for k in 0..n_half {
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        acc += adaptive_simpson(&m, a, b, 1e-14, 30)?;
        values[n_half + k + 1] = acc;
    }
    acc = 0.0;
    for k in 0..n_half {
        let (a, b) = (-(k as f64) * step, -((k + 1) as f64) * step);
        acc += adaptive_simpson(&m, a, b, 1e-14, 30)?;
        values[n_half - k - 1] = acc;
    }
    let slopes = (0..=2 * n_half)
        .map(|k| m(-u_max + k as f64 * step))
        .collect();
    Ok(ExponentTable {
        u_max,
        step,
        values,
        slopes,
    })
}

/// Convenience wrapper: builds the normalized profile and evaluates it.
pub fn chi(profile: &TransitionProfile, u: f64) -> Result<f64> {
    Ok(ChiProfile::new(profile.clone())?.eval(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    /// Composite Simpson on [a, b]; independent of the trapezoid used above.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            s += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn tanh_normalization_matches_quadrature_oracle() {
        // ∫ sech² = 2, so C = 1/√2
        let oracle = 1.0 / simpson(|u| 1.0 / u.cosh().powi(2), -40.0, 40.0, 100_000).sqrt();
        assert!((oracle - 0.5f64.sqrt()).abs() < 1e-12);
        let c = ChiProfile::new(TransitionProfile::tanh(1.0).unwrap()).unwrap();
        assert!((c.norm - oracle).abs() < 1e-12);
        assert!((c.eval(0.0) - 0.707_106_781_186_547_5).abs() < 1e-12);
        assert!((c.eval(3.0) - oracle / 3f64.cosh()).abs() < 1e-14);
        assert!(c.eval(800.0) == 0.0 && c.eval(-800.0) == 0.0);
    }

    #[test]
    fn sign_profile_closed_form() {
        let c = ChiProfile::new(TransitionProfile::sign(1.0).unwrap()).unwrap();
        assert_eq!(c.norm, 1.0);
        assert!((c.eval(1.0) - (-1.0f64).exp()).abs() < 1e-16);
        let integral = simpson(|u| c.eval(u).powi(2), -40.0, 0.0, 200_000)
            + simpson(|u| c.eval(u).powi(2), 0.0, 40.0, 200_000);
        assert!((integral - 1.0).abs() < 1e-10);
    }

    #[test]
    fn custom_profile_reproduces_tanh() {
        let p = TransitionProfile::custom(Arc::new(|u: f64| 2.0 * u.tanh()), 2.0, 0.6).unwrap();
        let custom = ChiProfile::new(p).unwrap();
        let builtin = ChiProfile::new(TransitionProfile::tanh(2.0).unwrap()).unwrap();
        for k in -60..=60 {
            let u = 0.137 * k as f64;
            assert!((custom.eval(u) - builtin.eval(u)).abs() < 1e-10, "u = {u}");
        }
        // m_inf = 2: ∫ sech⁴ = 4/3
        assert!((builtin.norm - (0.75f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_mass_is_not_localized() {
        let p = TransitionProfile::custom(Arc::new(|_| 0.0), 1.0, 1.0).unwrap();
        assert!(matches!(ChiProfile::new(p), Err(Error::Quadrature(_))));
    }

    #[test]
    fn chi_solves_its_ode_at_fourth_order() {
        // centered 4th-order difference of χ against −mχ; error ~ h⁴
        let c = ChiProfile::new(TransitionProfile::tanh(1.0).unwrap()).unwrap();
        let err = |h: f64| {
            (-400..=400)
                .map(|k| {
                    let u = 0.01 * k as f64;
                    let d = (-c.eval(u + 2.0 * h) + 8.0 * c.eval(u + h) - 8.0 * c.eval(u - h)
                        + c.eval(u - 2.0 * h))
                        / (12.0 * h);
                    (d - c.derivative(u)).abs()
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2, e3) = (err(0.08), err(0.04), err(0.02));
        assert!(e1 / e2 > 14.0 && e1 / e2 < 18.0, "ratio {}", e1 / e2);
        assert!(e2 / e3 > 14.0 && e2 / e3 < 18.0, "ratio {}", e2 / e3);
    }
}
