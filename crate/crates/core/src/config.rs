//! Run configuration: a flat TOML file with the sections `[geometry]`,
//! `[profile]`, `[grid]`, `[envelope]`, `[time]` and `[output]`, plus a
//! top-level `tag`. Unknown keys are rejected, missing ones take the
//! defaults listed on each field, and every violation is reported at once.
//!
//! ```toml
//! tag = "circle-r20"
//!
//! [geometry]
//! kind = "circle"       # straight | circle | perturbed
//! radius = 20.0
//!
//! [envelope]
//! kind = "periodic_bump"
//! center = 3.141592653589793
//! kappa = 40.0
//!
//! [time]
//! t_final = 5.0
//! dt = "auto"
//! sample_interval = 0.5
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::ansatz::{AnsatzSolution, Envelope, SpinorBranch};
use crate::error::{Error, Result};
use crate::fields::GridSpec;
use crate::mass::{EdgeGeometry, MassModel, Perturbation, TransitionProfile};
use crate::propagator::default_dt;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeometryConfig {
    Straight { theta: f64 },
    Circle { radius: f64 },
    /// `h(s) = amplitude·sin(frequency·s)`.
    Perturbed { epsilon: f64, amplitude: f64, frequency: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileName {
    Tanh,
    Sign,
}

/// Explicit grid entries; anything left `None` follows the geometry's
/// default box rule (see [`RunConfig::grid`]).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridConfig {
    pub x1: Option<[f64; 2]>,
    pub x2: Option<[f64; 2]>,
    pub n1: Option<usize>,
    pub n2: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tag: String,
    pub geometry: GeometryConfig,
    pub profile: ProfileName,
    /// Default 1.
    pub m_inf: f64,
    pub grid: GridConfig,
    /// Default: periodic bump `κ = 40` at `θ₀ = π` on a circle, unit
    /// Gaussian at 0 otherwise.
    pub envelope: Envelope,
    /// Default 5.
    pub t_final: f64,
    /// `None` means `0.4·min(dx₁, dx₂)`.
    pub dt: Option<f64>,
    /// Default 0.5.
    pub sample_interval: f64,
    pub snapshots: Vec<f64>,
    /// Default `out`.
    pub out_dir: PathBuf,
    pub branch: SpinorBranch,
}

/// Envelope amplitude at the polarization cut above which a fixed-branch
/// circle run is rejected.
pub const CUT_TOLERANCE: f64 = 1e-8;

fn default_envelope(g: &GeometryConfig) -> Envelope {
    match g {
        GeometryConfig::Circle { .. } => Envelope::PeriodicBump { center: PI, kappa: 40.0 },
        _ => Envelope::Gaussian { center: 0.0, width: 1.0 },
    }
}

impl RunConfig {
    /// Defaults around a given geometry.
    pub fn new(geometry: GeometryConfig) -> Self {
        Self {
            tag: geometry_tag(&geometry).to_string(),
            envelope: default_envelope(&geometry),
            geometry,
            profile: ProfileName::Tanh,
            m_inf: 1.0,
            grid: GridConfig::default(),
            t_final: 5.0,
            dt: None,
            sample_interval: 0.5,
            snapshots: Vec::new(),
            out_dir: PathBuf::from("out"),
            branch: SpinorBranch::Fixed,
        }
    }

    pub fn transition_profile(&self) -> Result<TransitionProfile> {
        match self.profile {
            ProfileName::Tanh => TransitionProfile::tanh(self.m_inf),
            ProfileName::Sign => TransitionProfile::sign(self.m_inf),
        }
    }

    pub fn edge_geometry(&self) -> EdgeGeometry {
        match self.geometry {
            GeometryConfig::Straight { theta } => EdgeGeometry::Straight { theta },
            GeometryConfig::Circle { radius } => EdgeGeometry::Circle { radius },
            GeometryConfig::Perturbed { epsilon, amplitude, frequency } => EdgeGeometry::Perturbed {
                h: Perturbation::sine(amplitude, frequency),
                epsilon,
            },
        }
    }

    pub fn mass_model(&self) -> Result<MassModel> {
        MassModel::new(self.transition_profile()?, self.edge_geometry())
    }

    /// Period of the edge in `x₂` (perturbed geometry only).
    pub fn x2_period(&self) -> Option<f64> {
        match self.geometry {
            GeometryConfig::Perturbed { epsilon, frequency, .. } => Some(2.0 * PI / (frequency * epsilon)),
            _ => None,
        }
    }

    /// Resolved grid. Defaults: straight `[−30, 30]²` at 512²; circle
    /// `[−(R+20), R+20]²` at 512²; perturbed `x₁ ∈ [−20, 20]` at 256 and an
    /// `x₂` box of the smallest whole number of edge periods reaching 40,
    /// centred on 0, with `n₂` the power of two closest to spacing `dx₁`.
    pub fn grid(&self) -> Result<GridSpec> {
        let (x1, x2, n1, n2) = match self.geometry {
            GeometryConfig::Straight { .. } => ([-30.0, 30.0], [-30.0, 30.0], 512, 512),
            GeometryConfig::Circle { radius } => {
                let h = radius + 20.0;
                ([-h, h], [-h, h], 512, 512)
            }
            GeometryConfig::Perturbed { .. } => {
                let x1 = self.grid.x1.unwrap_or([-20.0, 20.0]);
                let n1 = self.grid.n1.unwrap_or(256);
                let period = self.x2_period().expect("perturbed");
                let len = (40.0 / period).ceil().max(1.0) * period;
                let dx1 = (x1[1] - x1[0]) / n1 as f64;
                let n2 = ((len / dx1).round().max(2.0) as usize).next_power_of_two();
                (x1, [-len / 2.0, len / 2.0], n1, n2)
            }
        };
        let x1 = self.grid.x1.unwrap_or(x1);
        let x2 = self.grid.x2.unwrap_or(x2);
        GridSpec::new(
            [x1[0], x1[1], x2[0], x2[1]],
            self.grid.n1.unwrap_or(n1),
            self.grid.n2.unwrap_or(n2),
        )
    }

    pub fn time_step(&self, grid: &GridSpec) -> f64 {
        self.dt.unwrap_or_else(|| default_dt(grid))
    }

    /// The traveling state the run starts from and is compared against,
    /// normalized to unit energy on the run's grid.
    pub fn ansatz(&self) -> Result<AnsatzSolution> {
        let grid = self.grid()?;
        AnsatzSolution::for_model(&self.mass_model()?, self.envelope, self.branch)?.normalized_on(&grid)
    }

    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        let GeometryConfig::Circle { .. } = self.geometry else {
            return Err(Error::Config(vec!["radius sweep needs geometry.kind = \"circle\"".into()]));
        };
        let mut c = self.clone();
        c.geometry = GeometryConfig::Circle { radius };
        c.tag = format!("{}-R{radius}", self.tag);
        c.validate()?;
        Ok(c)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        let GeometryConfig::Perturbed { amplitude, frequency, .. } = self.geometry else {
            return Err(Error::Config(vec!["epsilon sweep needs geometry.kind = \"perturbed\"".into()]));
        };
        let mut c = self.clone();
        c.geometry = GeometryConfig::Perturbed { epsilon, amplitude, frequency };
        c.tag = format!("{}-eps{epsilon}", self.tag);
        c.validate()?;
        Ok(c)
    }

    /// Checks every constraint and reports all violations together.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if !(self.m_inf > 0.0 && self.m_inf.is_finite()) {
            errs.push(format!("profile.m_inf must be positive, got {}", self.m_inf));
        }
        let profile = self.transition_profile().ok();
        match self.geometry {
            GeometryConfig::Circle { radius } => {
                if let Some(p) = &profile {
                    if !(radius > 3.0 * p.r0) {
                        errs.push(format!("geometry.radius: R ≤ 3·r0 (R = {radius}, r0 = {:.4})", p.r0));
                    }
                }
                if !self.envelope.is_periodic() {
                    errs.push("envelope.kind must be \"periodic_bump\" on a circle".into());
                }
            }
            GeometryConfig::Perturbed { epsilon, amplitude, frequency } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    errs.push(format!("geometry.epsilon must lie in the open interval (0, 1), got {epsilon}"));
                }
                if !(frequency > 0.0 && frequency.is_finite()) || !amplitude.is_finite() {
                    errs.push("geometry.h_frequency must be positive and h_amplitude finite".into());
                }
                if self.envelope.is_periodic() {
                    errs.push("envelope.kind must be \"gaussian\" on a perturbed edge".into());
                }
            }
            GeometryConfig::Straight { theta } => {
                if !theta.is_finite() {
                    errs.push("geometry.theta must be finite".into());
                }
                if self.envelope.is_periodic() {
                    errs.push("envelope.kind must be \"gaussian\" on a straight edge".into());
                }
            }
        }
        match self.envelope {
            Envelope::Gaussian { width, .. } if !(width > 0.0) => {
                errs.push(format!("envelope.width must be positive, got {width}"))
            }
            Envelope::PeriodicBump { kappa, .. } if !(kappa > 0.0) => {
                errs.push(format!("envelope.kappa must be positive, got {kappa}"))
            }
            _ => {}
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            errs.push(format!("time.t_final must be nonnegative, got {}", self.t_final));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                errs.push(format!("time.dt must be positive or \"auto\", got {dt}"));
            }
        }
        if !(self.sample_interval > 0.0) {
            errs.push(format!("time.sample_interval must be positive, got {}", self.sample_interval));
        }
        for &t in &self.snapshots {
            if !(t >= 0.0 && t <= self.t_final * (1.0 + 1e-12)) {
                errs.push(format!("snapshot time {t} outside [0, t_final = {}]", self.t_final));
            }
        }
        let grid_ok = (epsilon_ok(&self.geometry)).then(|| self.grid());
        match grid_ok {
            Some(Err(e)) => errs.push(format!("grid: {e}")),
            Some(Ok(g)) => self.check_grid(&g, &mut errs),
            None => {}
        }
        if let (GeometryConfig::Circle { radius }, SpinorBranch::Fixed, true) =
            (self.geometry, self.branch, self.envelope.is_periodic())
        {
            if radius > 0.0 {
                let cut = max_cut_amplitude(&self.envelope, radius, self.t_final);
                if cut > CUT_TOLERANCE {
                    errs.push(format!(
                        "envelope reaches the spinor branch cut at θ = 0 (amplitude {cut:.2e} > {CUT_TOLERANCE:e}) \
                         during [0, {}]; move envelope.center or set output.branch = \"comoving\"",
                        self.t_final
                    ));
                }
            }
        }
        if errs.is_empty() { Ok(()) } else { Err(Error::Config(errs)) }
    }

    fn check_grid(&self, g: &GridSpec, errs: &mut Vec<String>) {
        match self.geometry {
            GeometryConfig::Perturbed { .. } => {
                let period = self.x2_period().expect("perturbed");
                let k = g.len2() / period;
                if (k - k.round()).abs() > 1e-6 * k.max(1.0) || k.round() < 1.0 {
                    errs.push(format!(
                        "grid.x2 length {:.6} is not a whole multiple of the edge period 2π/(h_frequency·ε) = {period:.6}",
                        g.len2()
                    ));
                }
            }
            GeometryConfig::Circle { radius } => {
                let reach = radius + 10.0 / self.m_inf.max(1e-12);
                let b = g.bounds();
                if b[0] > -reach || b[1] < reach || b[2] > -reach || b[3] < reach {
                    errs.push(format!("grid must contain the disc of radius R + 10/m_inf = {reach}"));
                }
            }
            GeometryConfig::Straight { .. } => {}
        }
    }
}

fn epsilon_ok(g: &GeometryConfig) -> bool {
    match *g {
        GeometryConfig::Perturbed { epsilon, frequency, .. } => epsilon > 0.0 && epsilon < 1.0 && frequency > 0.0,
        _ => true,
    }
}

/// Largest envelope value at `θ = 0` while the packet turns through `[0, t_final]`.
pub fn max_cut_amplitude(envelope: &Envelope, radius: f64, t_final: f64) -> f64 {
    let steps = 2000;
    (0..=steps)
        .map(|k| envelope.value(-(t_final * k as f64 / steps as f64) / radius))
        .fold(0.0, f64::max)
}

pub fn geometry_tag(g: &GeometryConfig) -> &'static str {
    match g {
        GeometryConfig::Straight { .. } => "straight",
        GeometryConfig::Circle { .. } => "circle",
        GeometryConfig::Perturbed { .. } => "perturbed",
    }
}

/// Collects typed lookups over one section, recording every problem.
struct Section<'a> {
    name: &'a str,
    table: Table,
    errs: &'a mut Vec<String>,
}

impl<'a> Section<'a> {
    fn new(root: &mut Table, name: &'a str, errs: &'a mut Vec<String>) -> Self {
        let table = match root.remove(name) {
            None => Table::new(),
            Some(Value::Table(t)) => t,
            Some(_) => {
                errs.push(format!("`{name}` must be a section"));
                Table::new()
            }
        };
        Self { name, table, errs }
    }

    fn f64(&mut self, key: &str) -> Option<f64> {
        match self.table.remove(key)? {
            Value::Float(x) => Some(x),
            Value::Integer(i) => Some(i as f64),
            other => {
                self.errs.push(format!("{}.{key}: expected a number, got {}", self.name, other.type_str()));
                None
            }
        }
    }

    fn usize(&mut self, key: &str) -> Option<usize> {
        match self.table.remove(key)? {
            Value::Integer(i) if i > 0 => Some(i as usize),
            other => {
                self.errs.push(format!("{}.{key}: expected a positive integer, got {other}", self.name));
                None
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.table.remove(key)? {
            Value::String(s) => Some(s),
            other => {
                self.errs.push(format!("{}.{key}: expected a string, got {}", self.name, other.type_str()));
                None
            }
        }
    }

    fn numbers(&mut self, key: &str) -> Option<Vec<f64>> {
        match self.table.remove(key)? {
            Value::Array(a) => {
                let v: Option<Vec<f64>> = a
                    .iter()
                    .map(|x| x.as_float().or_else(|| x.as_integer().map(|i| i as f64)))
                    .collect();
                if v.is_none() {
                    self.errs.push(format!("{}.{key}: expected an array of numbers", self.name));
                }
                v
            }
            other => {
                self.errs.push(format!("{}.{key}: expected an array, got {}", self.name, other.type_str()));
                None
            }
        }
    }

    fn pair(&mut self, key: &str) -> Option<[f64; 2]> {
        let v = self.numbers(key)?;
        if v.len() == 2 {
            Some([v[0], v[1]])
        } else {
            self.errs.push(format!("{}.{key}: expected [min, max]", self.name));
            None
        }
    }

    fn finish(self) {
        for key in self.table.keys() {
            self.errs.push(format!("unknown key `{}.{key}`", self.name));
        }
    }
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut root: Table = text.parse().map_err(|e: toml::de::Error| Error::Config(vec![e.to_string()]))?;
    let mut errs = Vec::new();

    let tag = match root.remove("tag") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => {
            errs.push("tag: expected a string".into());
            None
        }
    };

    let mut s = Section::new(&mut root, "geometry", &mut errs);
    let kind = s.string("kind").unwrap_or_else(|| "straight".into());
    let geometry = match kind.as_str() {
        "straight" => Some(GeometryConfig::Straight { theta: s.f64("theta").unwrap_or(0.0) }),
        "circle" => match s.f64("radius") {
            Some(radius) => Some(GeometryConfig::Circle { radius }),
            None => {
                s.errs.push("geometry.radius is required for a circle".into());
                None
            }
        },
        "perturbed" => {
            match s.string("h") {
                Some(h) if h != "sin" => s.errs.push(format!("geometry.h: only \"sin\" is supported, got {h:?}")),
                _ => {}
            }
            let amplitude = s.f64("h_amplitude").unwrap_or(1.0);
            let frequency = s.f64("h_frequency").unwrap_or(1.0);
            match s.f64("epsilon") {
                Some(epsilon) => Some(GeometryConfig::Perturbed { epsilon, amplitude, frequency }),
                None => {
                    s.errs.push("geometry.epsilon is required for a perturbed edge".into());
                    None
                }
            }
        }
        other => {
            s.errs.push(format!("geometry.kind: expected straight | circle | perturbed, got {other:?}"));
            None
        }
    };
    s.finish();

    let mut s = Section::new(&mut root, "profile", &mut errs);
    let profile = match s.string("kind").as_deref() {
        None | Some("tanh") => ProfileName::Tanh,
        Some("sign") => ProfileName::Sign,
        Some(other) => {
            s.errs.push(format!("profile.kind: expected tanh | sign, got {other:?}"));
            ProfileName::Tanh
        }
    };
    let m_inf = s.f64("m_inf").unwrap_or(1.0);
    s.finish();

    let mut s = Section::new(&mut root, "grid", &mut errs);
    let grid = GridConfig { x1: s.pair("x1"), x2: s.pair("x2"), n1: s.usize("n1"), n2: s.usize("n2") };
    s.finish();

    let mut s = Section::new(&mut root, "envelope", &mut errs);
    let env_kind = s.string("kind");
    let center = s.f64("center");
    let width = s.f64("width");
    let kappa = s.f64("kappa");
    let envelope = geometry.as_ref().map(|g| {
        let default = default_envelope(g);
        match env_kind.as_deref() {
            None => match default {
                Envelope::Gaussian { center: c, width: w } => {
                    Envelope::Gaussian { center: center.unwrap_or(c), width: width.unwrap_or(w) }
                }
                Envelope::PeriodicBump { center: c, kappa: k } => {
                    Envelope::PeriodicBump { center: center.unwrap_or(c), kappa: kappa.unwrap_or(k) }
                }
            },
            Some("gaussian") => Envelope::Gaussian { center: center.unwrap_or(0.0), width: width.unwrap_or(1.0) },
            Some("periodic_bump") => Envelope::PeriodicBump { center: center.unwrap_or(PI), kappa: kappa.unwrap_or(40.0) },
            Some(other) => {
                s.errs.push(format!("envelope.kind: expected gaussian | periodic_bump, got {other:?}"));
                default
            }
        }
    });
    if matches!(envelope, Some(Envelope::Gaussian { .. })) && kappa.is_some() {
        s.errs.push("envelope.kappa applies to periodic_bump only".into());
    }
    if matches!(envelope, Some(Envelope::PeriodicBump { .. })) && width.is_some() {
        s.errs.push("envelope.width applies to gaussian only".into());
    }
    s.finish();

    let mut s = Section::new(&mut root, "time", &mut errs);
    let t_final = s.f64("t_final").unwrap_or(5.0);
    let dt = match s.table.remove("dt") {
        None => None,
        Some(Value::String(a)) if a == "auto" => None,
        Some(Value::Float(x)) => Some(x),
        Some(Value::Integer(i)) => Some(i as f64),
        Some(other) => {
            s.errs.push(format!("time.dt: expected a number or \"auto\", got {other}"));
            None
        }
    };
    let sample_interval = s.f64("sample_interval").unwrap_or(0.5);
    s.finish();

    let mut s = Section::new(&mut root, "output", &mut errs);
    let out_dir = s.string("dir").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"));
    let snapshots = s.numbers("snapshots").unwrap_or_default();
    let branch = match s.string("branch").as_deref() {
        None | Some("fixed") => SpinorBranch::Fixed,
        Some("comoving") => SpinorBranch::Comoving,
        Some(other) => {
            s.errs.push(format!("output.branch: expected fixed | comoving, got {other:?}"));
            SpinorBranch::Fixed
        }
    };
    s.finish();

    for key in root.keys() {
        errs.push(format!("unknown key `{key}`"));
    }

    let Some(geometry) = geometry else { return Err(Error::Config(errs)) };
    let cfg = RunConfig {
        tag: tag.unwrap_or_else(|| geometry_tag(&geometry).to_string()),
        envelope: envelope.expect("geometry present"),
        geometry,
        profile,
        m_inf,
        grid,
        t_final,
        dt,
        sample_interval,
        snapshots,
        out_dir,
        branch,
    };
    if let Err(Error::Config(more)) = cfg.validate() {
        errs.extend(more);
    }
    if errs.is_empty() { Ok(cfg) } else { Err(Error::Config(errs)) }
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<String> {
        match parse_config_str(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_straight_config_takes_defaults() {
        let c = parse_config_str("").unwrap();
        assert_eq!(c.geometry, GeometryConfig::Straight { theta: 0.0 });
        assert_eq!(c.tag, "straight");
        assert_eq!(c.t_final, 5.0);
        assert_eq!(c.dt, None);
        assert_eq!(c.envelope, Envelope::Gaussian { center: 0.0, width: 1.0 });
        let g = c.grid().unwrap();
        assert_eq!(g.bounds(), [-30.0, 30.0, -30.0, 30.0]);
        assert_eq!((g.n1, g.n2), (512, 512));
        assert!((c.time_step(&g) - 0.4 * 60.0 / 512.0).abs() < 1e-15);
    }

    #[test]
    fn small_circle_is_rejected_with_the_rule() {
        let v = violations("[geometry]\nkind = \"circle\"\nradius = 0.5\n");
        assert!(v.iter().any(|m| m.contains("R ≤ 3·r0")), "{v:?}");
    }

    #[test]
    fn one_period_perturbed_box_is_accepted() {
        let text = format!(
            "[geometry]\nkind = \"perturbed\"\nh = \"sin\"\nepsilon = 0.2\n[grid]\nx1 = [-10.0, 10.0]\nx2 = [{}, {}]\nn1 = 256\nn2 = 256\n",
            -5.0 * PI,
            5.0 * PI
        );
        let c = parse_config_str(&text).unwrap();
        assert!((c.grid().unwrap().len2() - 10.0 * PI).abs() < 1e-12);
        // the two-period box of the snapshot figure
        let text = text.replace(&format!("{}", -5.0 * PI), &format!("{}", -10.0 * PI)).replace(&format!("{}]", 5.0 * PI), &format!("{}]", 10.0 * PI));
        parse_config_str(&text).unwrap();
    }

    #[test]
    fn off_period_box_is_rejected() {
        let v = violations("[geometry]\nkind = \"perturbed\"\nepsilon = 0.2\n[grid]\nx2 = [-15.0, 15.0]\n");
        assert!(v.iter().any(|m| m.contains("whole multiple")), "{v:?}");
    }

    #[test]
    fn default_perturbed_box_spans_whole_periods() {
        for eps in [0.05, 0.1, 0.15, 0.2, 0.3] {
            let c = RunConfig::new(GeometryConfig::Perturbed { epsilon: eps, amplitude: 1.0, frequency: 1.0 });
            c.validate().unwrap();
            let g = c.grid().unwrap();
            assert!(g.len2() >= 40.0);
            assert!(g.dx2() < 0.16, "{}", g.dx2());
        }
    }

    #[test]
    fn all_violations_are_reported() {
        let v = violations(
            "colour = 1\n[geometry]\nkind = \"circle\"\nradius = 1.0\nwobble = 2\n[time]\ndt = -1.0\n[envelope]\nkind = \"gaussian\"\n",
        );
        assert!(v.iter().any(|m| m.contains("unknown key `colour`")));
        assert!(v.iter().any(|m| m.contains("unknown key `geometry.wobble`")));
        assert!(v.iter().any(|m| m.contains("time.dt")));
        assert!(v.iter().any(|m| m.contains("periodic_bump")));
        assert!(v.iter().any(|m| m.contains("R ≤ 3·r0")));
    }

    #[test]
    fn epsilon_must_be_inside_the_open_interval() {
        for eps in ["0.0", "1.0", "-0.2"] {
            let v = violations(&format!("[geometry]\nkind = \"perturbed\"\nepsilon = {eps}\n"));
            assert!(v.iter().any(|m| m.contains("open interval")), "{v:?}");
        }
    }

    #[test]
    fn fixed_branch_cut_check() {
        // a quarter turn from π never approaches θ = 0
        let ok = "[geometry]\nkind = \"circle\"\nradius = 20.0\n[time]\nt_final = 31.4\n";
        parse_config_str(ok).unwrap();
        // three quarter turns cross it
        let long = "[geometry]\nkind = \"circle\"\nradius = 20.0\n[time]\nt_final = 94.3\n";
        let v = violations(long);
        assert!(v.iter().any(|m| m.contains("branch cut")), "{v:?}");
        parse_config_str(&format!("{long}[output]\nbranch = \"comoving\"\n")).unwrap();
    }

    #[test]
    fn sweep_overrides_revalidate() {
        let c = RunConfig::new(GeometryConfig::Circle { radius: 20.0 });
        assert_eq!(c.with_radius(40.0).unwrap().grid().unwrap().bounds(), [-60.0, 60.0, -60.0, 60.0]);
        assert!(c.with_radius(1.0).is_err());
        assert!(c.with_epsilon(0.1).is_err());
        let p = RunConfig::new(GeometryConfig::Perturbed { epsilon: 0.2, amplitude: 1.0, frequency: 1.0 });
        assert!(p.with_epsilon(0.0).is_err());
        p.with_epsilon(0.05).unwrap();
    }

    #[test]
    fn explicit_values_are_read() {
        let c = parse_config_str(
            "tag = \"fig4\"\n[geometry]\nkind = \"circle\"\nradius = 20\n[envelope]\nkappa = 10\ncenter = 3.0\n\
             [time]\nt_final = 2.0\ndt = 0.01\nsample_interval = 0.25\n[output]\ndir = \"x\"\nsnapshots = [0, 1.0]\n\
             [profile]\nkind = \"sign\"\nm_inf = 2.0\n",
        )
        .unwrap();
        assert_eq!(c.tag, "fig4");
        assert_eq!(c.envelope, Envelope::PeriodicBump { center: 3.0, kappa: 10.0 });
        assert_eq!((c.dt, c.sample_interval, c.snapshots.clone()), (Some(0.01), 0.25, vec![0.0, 1.0]));
        assert_eq!((c.profile, c.m_inf), (ProfileName::Sign, 2.0));
        assert_eq!(c.out_dir, PathBuf::from("x"));
    }
}
