//! Edge-admissible masses `m(f(x))`: a transition profile composed with a
//! signed coordinate across the edge curve `f(x) = 0`.

use std::fmt;
use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::fields::{GridSpec, Point};

/// Real function of one real variable, shareable across workers.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ProfileKind {
    /// `m_inf · tanh(u)`
    Tanh,
    /// `m_inf · sign(u)`, zero at `u = 0`.
    Sign,
    /// Arbitrary transition function; `m_inf` and `r0` are taken on trust.
    Custom(ScalarFn),
}

impl fmt::Debug for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Tanh => write!(f, "Tanh"),
            Self::Sign => write!(f, "Sign"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Transition function `u ↦ m(u)` with limits `±m_inf`.
///
/// `r0` bounds the transition layer: `|m(u)| > m_inf/2` for `|u| > r0`.
#[derive(Debug, Clone)]
pub struct TransitionProfile {
    pub kind: ProfileKind,
    pub m_inf: f64,
    pub r0: f64,
}

/// `atanh(1/2)`: the point where `tanh` crosses one half.
pub const TANH_R0: f64 = 0.549_306_144_334_054_8;
pub const SIGN_R0_DEFAULT: f64 = 0.1;

impl TransitionProfile {
    pub fn tanh(m_inf: f64) -> Result<Self> {
        Self::new(ProfileKind::Tanh, m_inf, TANH_R0)
    }

    pub fn sign(m_inf: f64) -> Result<Self> {
        Self::new(ProfileKind::Sign, m_inf, SIGN_R0_DEFAULT)
    }

    pub fn custom(f: ScalarFn, m_inf: f64, r0: f64) -> Result<Self> {
        Self::new(ProfileKind::Custom(f), m_inf, r0)
    }

    pub fn new(kind: ProfileKind, m_inf: f64, r0: f64) -> Result<Self> {
        if !(m_inf > 0.0 && m_inf.is_finite()) {
            return Err(Error::InvalidModel(format!("m_inf must be positive, got {m_inf}")));
        }
        if !(r0 > 0.0 && r0.is_finite()) {
            return Err(Error::InvalidModel(format!("r0 must be positive, got {r0}")));
        }
        Ok(Self { kind, m_inf, r0 })
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            ProfileKind::Tanh => self.m_inf * u.tanh(),
            ProfileKind::Sign => {
                if u > 0.0 {
                    self.m_inf
                } else if u < 0.0 {
                    -self.m_inf
                } else {
                    0.0
                }
            }
            ProfileKind::Custom(f) => f(u),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self.kind, ProfileKind::Custom(_))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ProfileKind::Tanh => "tanh",
            ProfileKind::Sign => "sign",
            ProfileKind::Custom(_) => "custom",
        }
    }

    /// Samples the transition-function properties: limits at `|u| = 50`,
    /// the `r0` bound on a set of points and (for built-ins) oddness.
    pub fn check(&self) -> Result<()> {
        let lim_tol = if self.is_builtin() { 1e-10 } else { 1e-6 * self.m_inf };
        let hi = self.eval(50.0);
        let lo = self.eval(-50.0);
        if (hi - self.m_inf).abs() > lim_tol || (lo + self.m_inf).abs() > lim_tol {
            return Err(Error::InvalidModel(format!(
                "profile limits m(±50) = ({hi}, {lo}) differ from ±{}",
                self.m_inf
            )));
        }
        for k in 1..=200 {
            let u = self.r0 * (1.0 + 1e-9) + 0.05 * k as f64;
            for s in [u, -u] {
                if self.eval(s).abs() <= self.m_inf / 2.0 {
                    return Err(Error::InvalidModel(format!(
                        "|m({s})| ≤ m_inf/2 although |u| > r0 = {}",
                        self.r0
                    )));
                }
            }
        }
        if self.is_builtin() {
            for k in 0..100 {
                let u = 0.173 * k as f64;
                if (self.eval(-u) + self.eval(u)).abs() > 1e-15 * self.m_inf {
                    return Err(Error::InvalidModel("built-in profile is not odd".into()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
pub enum PerturbationKind {
    /// `amplitude · sin(frequency · s)`
    Sine { amplitude: f64, frequency: f64 },
    /// User-supplied `h` with analytic `h'` and `h''`.
    Custom { h: ScalarFn, dh: ScalarFn, d2h: ScalarFn },
}

impl fmt::Debug for PerturbationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sine { amplitude, frequency } => f
                .debug_struct("Sine")
                .field("amplitude", amplitude)
                .field("frequency", frequency)
                .finish(),
            Self::Custom { .. } => write!(f, "Custom(..)"),
        }
    }
}

/// Edge perturbation `h` together with its first two derivatives.
#[derive(Debug, Clone)]
pub struct Perturbation {
    pub kind: PerturbationKind,
}

impl Perturbation {
    pub fn sine(amplitude: f64, frequency: f64) -> Self {
        Self {
            kind: PerturbationKind::Sine { amplitude, frequency },
        }
    }

    pub fn custom(h: ScalarFn, dh: ScalarFn, d2h: ScalarFn) -> Self {
        Self {
            kind: PerturbationKind::Custom { h, dh, d2h },
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match &self.kind {
            PerturbationKind::Sine { amplitude, frequency } => amplitude * (frequency * s).sin(),
            PerturbationKind::Custom { h, .. } => h(s),
        }
    }

    pub fn d1(&self, s: f64) -> f64 {
        match &self.kind {
            PerturbationKind::Sine { amplitude, frequency } => {
                amplitude * frequency * (frequency * s).cos()
            }
            PerturbationKind::Custom { dh, .. } => dh(s),
        }
    }

    pub fn d2(&self, s: f64) -> f64 {
        match &self.kind {
            PerturbationKind::Sine { amplitude, frequency } => {
                -amplitude * frequency * frequency * (frequency * s).sin()
            }
            PerturbationKind::Custom { d2h, .. } => d2h(s),
        }
    }

    /// Period of `h` in its own argument, when known.
    pub fn period(&self) -> Option<f64> {
        match &self.kind {
            PerturbationKind::Sine { frequency, .. } if *frequency != 0.0 => {
                Some(2.0 * std::f64::consts::PI / frequency.abs())
            }
            _ => None,
        }
    }

    /// Sup of `|h|` over a period (or a sample window for custom `h`).
    pub fn max_abs(&self) -> f64 {
        match &self.kind {
            PerturbationKind::Sine { amplitude, .. } => amplitude.abs(),
            PerturbationKind::Custom { h, .. } => (-2000..=2000)
                .map(|k| h(0.05 * k as f64).abs())
                .fold(0.0, f64::max),
        }
    }

    fn check_finite(&self) -> Result<()> {
        for k in -400..=400 {
            let s = 0.25 * k as f64;
            let v = [self.value(s), self.d1(s), self.d2(s)];
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidModel(format!("h or a derivative is not finite at {s}")));
            }
        }
        Ok(())
    }
}

/// Shape of the edge curve.
#[derive(Debug, Clone)]
pub enum EdgeGeometry {
    /// Line through the origin with unit normal `(cos θ, sin θ)`.
    Straight { theta: f64 },
    /// Circle of radius `radius` about the origin; positive mass outside.
    Circle { radius: f64 },
    /// The curve `x₁ + h(ε x₂) = 0`.
    Perturbed { h: Perturbation, epsilon: f64 },
}

impl EdgeGeometry {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Straight { .. } => "straight",
            Self::Circle { .. } => "circle",
            Self::Perturbed { .. } => "perturbed",
        }
    }

    /// Signed coordinate across the edge: zero on it, positive on the
    /// positive-mass side.
    pub fn signed_edge_coordinate(&self, x: Point) -> f64 {
        match self {
            Self::Straight { theta } => theta.cos() * x[0] + theta.sin() * x[1],
            Self::Circle { radius } => x[0].hypot(x[1]) - radius,
            Self::Perturbed { h, epsilon } => x[0] + h.value(epsilon * x[1]),
        }
    }

    /// Unit normal pointing toward positive mass.
    pub fn normal(&self, x: Point) -> Point {
        match self {
            Self::Straight { theta } => [theta.cos(), theta.sin()],
            Self::Circle { .. } => {
                let r = x[0].hypot(x[1]);
                if r == 0.0 {
                    [1.0, 0.0]
                } else {
                    [x[0] / r, x[1] / r]
                }
            }
            Self::Perturbed { h, epsilon } => {
                let s = epsilon * h.d1(epsilon * x[1]);
                let n = (1.0 + s * s).sqrt();
                [1.0 / n, s / n]
            }
        }
    }

    /// Unit tangent: the normal rotated by +90°. Edge states travel along it.
    pub fn tangent(&self, x: Point) -> Point {
        let [n1, n2] = self.normal(x);
        [-n2, n1]
    }

    pub fn validate(&self, profile: &TransitionProfile) -> Result<()> {
        match self {
            Self::Straight { theta } if !theta.is_finite() => {
                Err(Error::InvalidModel("theta must be finite".into()))
            }
            Self::Circle { radius } if !(*radius > 3.0 * profile.r0) => Err(Error::InvalidModel(
                format!("R ≤ 3·r0 (R = {radius}, r0 = {})", profile.r0),
            )),
            Self::Perturbed { epsilon, .. } if !(*epsilon > 0.0 && *epsilon < 1.0) => Err(
                Error::InvalidModel(format!("epsilon must lie in (0, 1), got {epsilon}")),
            ),
            Self::Perturbed { h, .. } => h.check_finite(),
            _ => Ok(()),
        }
    }
}

/// `m(x) = profile(signed_edge_coordinate(x))`.
#[derive(Debug, Clone)]
pub struct MassModel {
    pub profile: TransitionProfile,
    pub geometry: EdgeGeometry,
}

impl MassModel {
    pub fn new(profile: TransitionProfile, geometry: EdgeGeometry) -> Result<Self> {
        geometry.validate(&profile)?;
        Ok(Self { profile, geometry })
    }

    /// Builds the model without checking geometry hypotheses.
    pub fn unchecked(profile: TransitionProfile, geometry: EdgeGeometry) -> Self {
        Self { profile, geometry }
    }

    pub fn eval(&self, x: Point) -> f64 {
        self.profile.eval(self.geometry.signed_edge_coordinate(x))
    }

    pub fn sample(&self, grid: &GridSpec) -> Array2<f64> {
        grid.sample(|x| self.eval(x))
    }
}

pub fn signed_edge_coordinate(g: &EdgeGeometry, x: Point) -> f64 {
    g.signed_edge_coordinate(x)
}

pub fn eval_mass(mm: &MassModel, x: Point) -> f64 {
    mm.eval(x)
}

pub fn sample_mass(mm: &MassModel, grid: &GridSpec) -> Array2<f64> {
    mm.sample(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn tanh1() -> TransitionProfile {
        TransitionProfile::tanh(1.0).unwrap()
    }

    #[test]
    fn builtin_profiles_are_transition_functions() {
        tanh1().check().unwrap();
        TransitionProfile::sign(1.0).unwrap().check().unwrap();
        TransitionProfile::tanh(2.5).unwrap().check().unwrap();
        assert!((TANH_R0 - 0.5f64.atanh()).abs() < 1e-16);
    }

    #[test]
    fn slow_custom_profile_fails_limit_check() {
        let p = TransitionProfile::custom(Arc::new(|u: f64| (u / 100.0).tanh()), 1.0, 0.5).unwrap();
        assert!(p.check().is_err());
        assert!(TransitionProfile::tanh(0.0).is_err());
    }

    #[test]
    fn sign_profile_is_zero_on_the_edge() {
        let p = TransitionProfile::sign(1.0).unwrap();
        assert_eq!(p.eval(0.0), 0.0);
        assert_eq!(p.eval(-1e-300), -1.0);
    }

    #[test]
    fn edge_coordinate_examples() {
        let c = EdgeGeometry::Circle { radius: 20.0 };
        assert_eq!(c.signed_edge_coordinate([20.0, 0.0]), 0.0);
        let s = EdgeGeometry::Straight { theta: 0.0 };
        assert_eq!(s.signed_edge_coordinate([3.0, 7.0]), 3.0);
        let p = EdgeGeometry::Perturbed { h: Perturbation::sine(1.0, 1.0), epsilon: 0.2 };
        let x = [-(0.2f64 * 5.0).sin(), 5.0];
        assert!(p.signed_edge_coordinate(x).abs() < 1e-15);
    }

    #[test]
    fn eval_mass_examples() {
        for g in [
            EdgeGeometry::Straight { theta: 0.7 },
            EdgeGeometry::Circle { radius: 20.0 },
            EdgeGeometry::Perturbed { h: Perturbation::sine(1.0, 1.0), epsilon: 0.2 },
        ] {
            let mm = MassModel::new(tanh1(), g.clone()).unwrap();
            // a point on each edge
            let x = match g {
                EdgeGeometry::Straight { theta } => [-theta.sin() * 4.0, theta.cos() * 4.0],
                EdgeGeometry::Circle { radius } => [radius * 0.6, radius * 0.8],
                EdgeGeometry::Perturbed { .. } => [-(0.2f64 * 3.0).sin(), 3.0],
            };
            assert!(eval_mass(&mm, x).abs() < 1e-12);
        }
        let mm = MassModel::new(tanh1(), EdgeGeometry::Straight { theta: 0.0 }).unwrap();
        assert!((eval_mass(&mm, [50.0, 0.0]) - 1.0).abs() < 1e-15);
        let mm = MassModel::new(
            TransitionProfile::sign(1.0).unwrap(),
            EdgeGeometry::Circle { radius: 10.0 },
        )
        .unwrap();
        assert_eq!(eval_mass(&mm, [0.0, 0.0]), -1.0);
    }

    #[test]
    fn circle_hypothesis_is_enforced() {
        let err = MassModel::new(tanh1(), EdgeGeometry::Circle { radius: 0.5 }).unwrap_err();
        assert!(err.to_string().contains("R ≤ 3·r0"));
        let bad_eps = EdgeGeometry::Perturbed { h: Perturbation::sine(1.0, 1.0), epsilon: 0.0 };
        assert!(MassModel::new(tanh1(), bad_eps).is_err());
    }

    #[test]
    fn sample_mass_examples() {
        let g = GridSpec::new([-60.0, 60.0, -60.0, 60.0], 64, 64).unwrap();
        let zero = TransitionProfile::custom(Arc::new(|_| 0.0), 1.0, 1.0).unwrap();
        let mm = MassModel::unchecked(zero, EdgeGeometry::Straight { theta: 0.0 });
        assert!(sample_mass(&mm, &g).iter().all(|&v| v == 0.0));

        let mm = MassModel::new(tanh1(), EdgeGeometry::Circle { radius: 20.0 }).unwrap();
        let m = sample_mass(&mm, &g);
        // node (32, 32) is the origin
        assert_eq!(g.point(32, 32), [0.0, 0.0]);
        assert!((m[[32, 32]] + 1.0).abs() < 1e-15);

        // odd under x1 ↦ −x1: node i ↔ n1 − i on a box symmetric about 0
        let mm = MassModel::new(tanh1(), EdgeGeometry::Straight { theta: 0.0 }).unwrap();
        let m = sample_mass(&mm, &g);
        for j in 0..64 {
            for i in 1..64 {
                assert!((m[[j, i]] + m[[j, 64 - i]]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn straight_normal_and_tangent() {
        let g = EdgeGeometry::Straight { theta: PI / 3.0 };
        let n = g.normal([0.0, 0.0]);
        let t = g.tangent([0.0, 0.0]);
        assert!((n[0] - 0.5).abs() < 1e-15);
        assert!((t[0] + (PI / 3.0).sin()).abs() < 1e-15 && (t[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn perturbed_mass_tends_to_straight_as_epsilon_vanishes() {
        // h(0) = 0, so the shift at ε = 1e-6 is at most Lip(tanh)·|h(ε x₂)| ≤ ε|x₂|.
        let p = MassModel::new(
            tanh1(),
            EdgeGeometry::Perturbed { h: Perturbation::sine(1.0, 1.0), epsilon: 1e-6 },
        )
        .unwrap();
        let s = MassModel::new(tanh1(), EdgeGeometry::Straight { theta: 0.0 }).unwrap();
        for k in -20..=20 {
            for l in -20..=20 {
                let x = [0.5 * k as f64, 0.5 * l as f64];
                assert!((p.eval(x) - s.eval(x)).abs() < 1e-5);
            }
        }
    }

    proptest! {
        #[test]
        fn mass_changes_sign_across_the_edge(
            a in 0.0..(2.0 * PI), d in 0.01f64..5.0, sgn in prop::bool::ANY,
            which in 0usize..3,
        ) {
            let profile = if sgn { tanh1() } else { TransitionProfile::sign(1.0).unwrap() };
            let (g, on_edge, normal) = match which {
                0 => {
                    let g = EdgeGeometry::Straight { theta: a };
                    let x = [-a.sin() * 3.0, a.cos() * 3.0];
                    let n = g.normal(x);
                    (g, x, n)
                }
                1 => {
                    let g = EdgeGeometry::Circle { radius: 20.0 };
                    let x = [20.0 * a.cos(), 20.0 * a.sin()];
                    let n = g.normal(x);
                    (g, x, n)
                }
                _ => {
                    let g = EdgeGeometry::Perturbed { h: Perturbation::sine(1.0, 1.0), epsilon: 0.2 };
                    let x2 = 3.0 * (a - PI);
                    let x = [-(0.2 * x2).sin(), x2];
                    let n = g.normal(x);
                    (g, x, n)
                }
            };
            let mm = MassModel::new(profile, g).unwrap();
            let plus = mm.eval([on_edge[0] + d * normal[0], on_edge[1] + d * normal[1]]);
            let minus = mm.eval([on_edge[0] - d * normal[0], on_edge[1] - d * normal[1]]);
            prop_assert!(plus > 0.0 && minus < 0.0);
        }

        #[test]
        fn circle_mass_is_rotation_invariant(r in 0.0f64..80.0, a in 0.0..(2.0 * PI), b in 0.0..(2.0 * PI)) {
            let mm = MassModel::new(tanh1(), EdgeGeometry::Circle { radius: 20.0 }).unwrap();
            let va = mm.eval([r * a.cos(), r * a.sin()]);
            let vb = mm.eval([r * b.cos(), r * b.sin()]);
            prop_assert!((va - vb).abs() < 1e-12);
        }
    }
}
