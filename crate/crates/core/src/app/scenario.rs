//! Scenario documents (TOML) and the built-in experiment catalogue.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Topology;
use crate::nls::DispersiveSolverKind;

pub const SNAPSHOT_COLUMNS: [&str; 10] = [
    "x", "h_num", "h_ref", "q_num", "q_ref", "re_psi", "im_psi", "b", "eta_num", "eta_ref",
];

pub const BUILTINS: [&str; 7] = [
    "dam_break_dry",
    "dam_break_wet",
    "vacuum_generation",
    "oscillating_lake",
    "lake_at_rest_wet",
    "lake_at_rest_dry",
    "plane_wave",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub physics: Physics,
    pub init: InitRecipe,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sponge: Option<SpongeInputs>,
    #[serde(default)]
    pub discretization: Discretization,
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Physics {
    #[serde(default = "one")]
    pub g: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitRecipe {
    RiemannTanh {
        h_left: f64,
        u_left: f64,
        h_right: f64,
        u_right: f64,
        #[serde(default = "default_delta")]
        delta_over_eps: f64,
    },
    SoftplusSurface {
        surface: Surface,
        #[serde(default = "default_delta")]
        delta_over_eps: f64,
    },
    PlaneWave { height: f64, velocity: f64 },
}

/// Initial free surface for the softplus recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Surface {
    /// `max(0.5 - sqrt(2) x, x^2)`
    ThackerInitial,
    Constant { level: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Bathymetry {
    Flat,
    /// `b = x^2`
    Parabolic,
    /// `b = b_max exp(-10 x^2)`
    GaussianBump { b_max: f64 },
    /// Piecewise-linear through the given points, constant beyond them.
    Tabulated { x: Vec<f64>, b: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Neumann,
    SpongeNeumann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    /// Interior domain is `[-half_width, half_width]`.
    pub half_width: f64,
    pub boundary: Boundary,
    #[serde(default = "flat")]
    pub bathymetry: Bathymetry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpongeInputs {
    /// Dominant outgoing wavenumber; derived from the Riemann data when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default = "default_wavelengths")]
    pub wavelengths: usize,
    #[serde(default = "default_reduction")]
    pub reduction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Discretization {
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default = "default_dx_over_eps")]
    pub dx_over_eps: f64,
    #[serde(default = "yes")]
    pub dt_equals_dx: bool,
    /// Used only when `dt_equals_dx` is false.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default)]
    pub solver: DispersiveSolverKind,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization {
            degree: default_degree(),
            dx_over_eps: default_dx_over_eps(),
            dt_equals_dx: true,
            dt: None,
            solver: DispersiveSolverKind::DirectBanded,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub times: Vec<f64>,
    #[serde(default = "all_fields")]
    pub fields: Vec<String>,
    #[serde(default = "default_directory")]
    pub directory: String,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn flat() -> Bathymetry {
    Bathymetry::Flat
}
fn default_delta() -> f64 {
    1.2
}
fn default_wavelengths() -> usize {
    16
}
fn default_reduction() -> f64 {
    1e-6
}
fn default_degree() -> usize {
    1
}
fn default_dx_over_eps() -> f64 {
    0.05
}
fn default_tolerance() -> f64 {
    1e-12
}
fn default_directory() -> String {
    "out".into()
}
fn all_fields() -> Vec<String> {
    SNAPSHOT_COLUMNS.iter().map(|s| s.to_string()).collect()
}

impl Bathymetry {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Bathymetry::Flat => 0.0,
            Bathymetry::Parabolic => x * x,
            Bathymetry::GaussianBump { b_max } => b_max * (-10.0 * x * x).exp(),
            Bathymetry::Tabulated { x: xs, b } => {
                let i = xs.partition_point(|&p| p <= x);
                if i == 0 {
                    b[0]
                } else if i == xs.len() {
                    b[b.len() - 1]
                } else {
                    let s = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
                    b[i - 1] + s * (b[i] - b[i - 1])
                }
            }
        }
    }
}

impl Surface {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Surface::ThackerInitial => crate::exact::thacker_initial_surface(x),
            Surface::Constant { level } => level,
        }
    }
}

impl Boundary {
    pub fn topology(self) -> Topology {
        match self {
            Boundary::Periodic => Topology::Periodic,
            Boundary::Neumann | Boundary::SpongeNeumann => Topology::Neumann,
        }
    }
}

fn check(ok: bool, key: &str, message: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::parse(key, message()))
    }
}

impl Scenario {
    pub fn t_final(&self) -> f64 {
        self.output.times.last().copied().unwrap_or(0.0)
    }

    /// Smoothing width of the initial data.
    pub fn delta(&self) -> Option<f64> {
        match self.init {
            InitRecipe::RiemannTanh { delta_over_eps, .. } | InitRecipe::SoftplusSurface { delta_over_eps, .. } => {
                Some(delta_over_eps * self.physics.eps)
            }
            InitRecipe::PlaneWave { .. } => None,
        }
    }

    /// Sponge wavenumber: explicit, or fastest characteristic speed of the Riemann data.
    pub fn sponge_omega(&self) -> Option<f64> {
        let inputs = self.sponge.as_ref()?;
        if let Some(w) = inputs.omega {
            return Some(w);
        }
        match self.init {
            InitRecipe::RiemannTanh {
                h_left,
                u_left,
                h_right,
                u_right,
                ..
            } => {
                let g = self.physics.g;
                Some(u_left.abs().max(u_right.abs()) + (g * h_left).sqrt().max((g * h_right).sqrt()))
            }
            InitRecipe::PlaneWave { height, velocity } => Some(velocity.abs() + (self.physics.g * height).sqrt()),
            InitRecipe::SoftplusSurface { .. } => None,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.physics.eps = eps;
        self
    }

    /// Replaces the output schedule so the run ends at `t_final`.
    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.output.times.retain(|&t| t < t_final);
        self.output.times.push(t_final);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.physics;
        check(p.eps.is_finite() && p.eps > 0.0, "physics.eps", || format!("must be positive, got {}", p.eps))?;
        check(p.g.is_finite() && p.g > 0.0, "physics.g", || format!("must be positive, got {}", p.g))?;
        check(!self.name.is_empty(), "name", || "must not be empty".into())?;

        match &self.init {
            InitRecipe::RiemannTanh {
                h_left,
                u_left,
                h_right,
                u_right,
                delta_over_eps,
            } => {
                check(*h_left >= 0.0, "init.h_left", || format!("must be nonnegative, got {h_left}"))?;
                check(*h_right >= 0.0, "init.h_right", || format!("must be nonnegative, got {h_right}"))?;
                check(u_left.is_finite() && u_right.is_finite(), "init.u_left", || "velocities must be finite".into())?;
                check(*delta_over_eps > 0.0, "init.delta_over_eps", || {
                    format!("must be positive, got {delta_over_eps}")
                })?;
            }
            InitRecipe::SoftplusSurface { delta_over_eps, .. } => {
                check(*delta_over_eps > 0.0, "init.delta_over_eps", || {
                    format!("must be positive, got {delta_over_eps}")
                })?;
            }
            InitRecipe::PlaneWave { height, velocity } => {
                check(*height >= 0.0, "init.height", || format!("must be nonnegative, got {height}"))?;
                check(self.domain.boundary == Boundary::Periodic, "domain.boundary", || {
                    "plane_wave requires a periodic domain".into()
                })?;
                let cycles = velocity * 2.0 * self.domain.half_width / (2.0 * std::f64::consts::PI * p.eps);
                check((cycles - cycles.round()).abs() < 1e-6, "init.velocity", || {
                    format!("phase must be periodic on the domain ({cycles} wavelengths)")
                })?;
            }
        }

        let d = &self.domain;
        check(d.half_width.is_finite() && d.half_width > 0.0, "domain.half_width", || {
            format!("must be positive, got {}", d.half_width)
        })?;
        if let Bathymetry::Tabulated { x, b } = &d.bathymetry {
            check(x.len() >= 2 && x.len() == b.len(), "domain.bathymetry", || {
                "tabulated bathymetry needs at least two (x, b) pairs of equal length".into()
            })?;
            check(x.windows(2).all(|w| w[0] < w[1]), "domain.bathymetry.x", || {
                "must be strictly increasing".into()
            })?;
        }

        match (d.boundary, &self.sponge) {
            (Boundary::SpongeNeumann, None) => {
                return Err(Error::parse("sponge", "sponge_neumann boundary requires a [sponge] section"))
            }
            (Boundary::SpongeNeumann, Some(s)) => {
                let omega = self.sponge_omega();
                check(omega.is_some_and(|w| w != 0.0 && w.is_finite()), "sponge.omega", || {
                    "must be nonzero (or derivable from Riemann data)".into()
                })?;
                check(s.wavelengths >= 1, "sponge.wavelengths", || "must be at least 1".into())?;
                check(s.reduction > 0.0 && s.reduction < 1.0, "sponge.reduction", || {
                    format!("must lie in (0, 1), got {}", s.reduction)
                })?;
            }
            (_, Some(_)) => {
                return Err(Error::parse("sponge", "only valid with boundary = \"sponge_neumann\""));
            }
            _ => {}
        }

        let z = &self.discretization;
        check((1..=crate::mesh::MAX_DEGREE).contains(&z.degree), "discretization.degree", || {
            format!("must lie in 1..=16, got {}", z.degree)
        })?;
        check(z.dx_over_eps.is_finite() && z.dx_over_eps > 0.0, "discretization.dx_over_eps", || {
            format!("must be positive, got {}", z.dx_over_eps)
        })?;
        if !z.dt_equals_dx {
            check(z.dt.is_some_and(|dt| dt > 0.0 && dt.is_finite()), "discretization.dt", || {
                "a positive dt is required when dt_equals_dx = false".into()
            })?;
        }
        check(z.tolerance > 0.0 && z.tolerance <= 1e-6, "discretization.tolerance", || {
            format!("must lie in (0, 1e-6], got {}", z.tolerance)
        })?;

        let o = &self.output;
        check(!o.times.is_empty(), "output.times", || "at least one output time is required".into())?;
        check(o.times.iter().all(|t| t.is_finite() && *t >= 0.0), "output.times", || {
            "times must be finite and nonnegative".into()
        })?;
        check(o.times.windows(2).all(|w| w[0] <= w[1]), "output.times", || "must be nondecreasing".into())?;
        for f in &o.fields {
            check(SNAPSHOT_COLUMNS.contains(&f.as_str()), "output.fields", || format!("unknown column `{f}`"))?;
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    /// Settings echo for run logs, including every defaulted value.
    pub fn describe(&self) -> String {
        self.to_toml()
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let message = e.message().to_string();
        let key = message
            .split('`')
            .nth(1)
            .map(str::to_string)
            .unwrap_or_else(|| "document".into());
        Error::parse(key, message)
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Built-in experiment at the given semiclassical parameter.
pub fn builtin(name: &str, eps: f64) -> Option<Scenario> {
    let riemann = |hl, ul, hr, ur| InitRecipe::RiemannTanh {
        h_left: hl,
        u_left: ul,
        h_right: hr,
        u_right: ur,
        delta_over_eps: default_delta(),
    };
    let domain = |boundary, bathymetry| Domain {
        half_width: 2.0,
        boundary,
        bathymetry,
    };
    let output = |times: &[f64]| Output {
        times: times.to_vec(),
        fields: all_fields(),
        directory: default_directory(),
    };
    let lake = |b_max: f64| {
        (
            InitRecipe::SoftplusSurface {
                surface: Surface::Constant { level: 1.0 },
                delta_over_eps: default_delta(),
            },
            domain(Boundary::Periodic, Bathymetry::GaussianBump { b_max }),
            output(&[1.0]),
        )
    };
    let (init, domain, output, sponge) = match name {
        "dam_break_dry" => (riemann(1.0, 0.0, 0.0, 0.0), domain(Boundary::Neumann, Bathymetry::Flat), output(&[0.6]), None),
        "dam_break_wet" => (riemann(1.0, 0.0, 0.2, 0.0), domain(Boundary::Neumann, Bathymetry::Flat), output(&[0.6]), None),
        "vacuum_generation" => (
            riemann(1.0, -3.0, 2.0, 3.0),
            domain(Boundary::SpongeNeumann, Bathymetry::Flat),
            output(&[0.3]),
            Some(SpongeInputs {
                omega: Some(3.0),
                wavelengths: default_wavelengths(),
                reduction: default_reduction(),
            }),
        ),
        "oscillating_lake" => (
            InitRecipe::SoftplusSurface {
                surface: Surface::ThackerInitial,
                delta_over_eps: default_delta(),
            },
            domain(Boundary::Neumann, Bathymetry::Parabolic),
            output(&[2.0, 3.0, 4.0]),
            None,
        ),
        "lake_at_rest_wet" => {
            let (i, d, o) = lake(0.9);
            (i, d, o, None)
        }
        "lake_at_rest_dry" => {
            let (i, d, o) = lake(1.1);
            (i, d, o, None)
        }
        "plane_wave" => (
            InitRecipe::PlaneWave {
                height: 1.0,
                velocity: 1.0,
            },
            Domain {
                half_width: std::f64::consts::PI,
                boundary: Boundary::Periodic,
                bathymetry: Bathymetry::Flat,
            },
            output(&[1.0]),
            None,
        ),
        _ => return None,
    };
    Some(Scenario {
        name: name.to_string(),
        physics: Physics { g: 1.0, eps },
        init,
        domain,
        sponge,
        discretization: Discretization::default(),
        output,
    })
}

/// Default semiclassical parameter of a builtin.
pub fn builtin_default_eps(name: &str) -> f64 {
    if name == "plane_wave" {
        0.1
    } else {
        0.01
    }
}
