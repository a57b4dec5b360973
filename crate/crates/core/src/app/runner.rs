//! Drives a scenario from its initial data to the requested output times.

use std::sync::Arc;

use crate::app::scenario::{Bathymetry, Boundary, InitRecipe, Scenario, Surface};
use crate::diagnostics::{energy, error_norm, ErrorReport, HydroField, NormKind, Window};
use crate::error::{Error, Result};
use crate::exact::{thacker_exact, thacker_velocity, RiemannData, RiemannSolution};
use crate::madelung::{init_plane_wave, init_riemann, init_softplus_surface, recover, InitParams};
use crate::mesh::build_mesh;
use crate::nls::{build_sponge, sponge_params, SolverConfig, SpongeDesign, StrangStepper};
use crate::{Energy, Field, Hydro, Mesh, Sponge};

/// Closed-form solution a scenario is compared against.
#[derive(Debug, Clone)]
pub enum Reference {
    Riemann(RiemannSolution<f64>),
    Thacker,
    LakeAtRest { level: f64, bathymetry: Bathymetry },
    PlaneWave { height: f64, velocity: f64 },
}

/// Reference height, discharge and surface at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefValues {
    pub h: f64,
    pub q: f64,
    pub eta: f64,
}

impl Reference {
    pub fn eval(&self, x: f64, t: f64) -> RefValues {
        match self {
            Reference::Riemann(sol) => {
                let (h, u) = sol.sample(x, t);
                RefValues { h, q: h * u, eta: h }
            }
            Reference::Thacker => {
                let (h, eta) = thacker_exact(x, t);
                RefValues {
                    h,
                    q: h * thacker_velocity(t),
                    eta,
                }
            }
            Reference::LakeAtRest { level, bathymetry } => {
                let b = bathymetry.eval(x);
                RefValues {
                    h: (level - b).max(0.0),
                    q: 0.0,
                    eta: level.max(b),
                }
            }
            Reference::PlaneWave { height, velocity } => RefValues {
                h: *height,
                q: height * velocity,
                eta: *height,
            },
        }
    }

    pub fn field(&self, field: HydroField, x: f64, t: f64) -> f64 {
        let v = self.eval(x, t);
        match field {
            HydroField::Height => v.h,
            HydroField::Discharge => v.q,
            HydroField::Surface => v.eta,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Reference::Riemann(_) => "exact Riemann solution",
            Reference::Thacker => "oscillating lake",
            Reference::LakeAtRest { .. } => "lake at rest",
            Reference::PlaneWave { .. } => "plane wave",
        }
    }
}

/// Reference solution for a scenario, if one is known.
pub fn reference_for(s: &Scenario) -> Result<Option<Reference>> {
    let g = s.physics.g;
    Ok(match (&s.init, &s.domain.bathymetry) {
        (
            InitRecipe::RiemannTanh {
                h_left,
                u_left,
                h_right,
                u_right,
                ..
            },
            Bathymetry::Flat,
        ) => Some(Reference::Riemann(RiemannSolution::new(RiemannData::new(
            *h_left, *u_left, *h_right, *u_right, g,
        ))?)),
        (
            InitRecipe::SoftplusSurface {
                surface: Surface::ThackerInitial,
                ..
            },
            Bathymetry::Parabolic,
        ) if g == 1.0 => Some(Reference::Thacker),
        (
            InitRecipe::SoftplusSurface {
                surface: Surface::Constant { level },
                ..
            },
            b,
        ) => Some(Reference::LakeAtRest {
            level: *level,
            bathymetry: b.clone(),
        }),
        (InitRecipe::PlaneWave { height, velocity }, Bathymetry::Flat) => Some(Reference::PlaneWave {
            height: *height,
            velocity: *velocity,
        }),
        _ => None,
    })
}

/// Default comparison window at time `t`.
///
/// Sponge runs exclude the last half unit before the layer; runs with a
/// right-moving shock stop 0.2 short of the classical shock, where the
/// dispersive shock train does not converge pointwise.
pub fn default_window(s: &Scenario, reference: Option<&Reference>, t: f64) -> Window<f64> {
    let l = s.domain.half_width;
    if s.domain.boundary == Boundary::SpongeNeumann {
        return Window::new(-(l - 0.5), l - 0.5);
    }
    if let Some(Reference::Riemann(sol)) = reference {
        if let Some(speed) = sol.structure.right_shock_speed() {
            let hi = (speed * t - 0.2).min(l);
            let lo = -0.6 * l;
            if hi > lo {
                return Window::new(lo, hi);
            }
        }
    }
    Window::new(-l, l)
}

/// Grid, bathymetry and absorbing layer derived from a scenario.
#[derive(Debug, Clone)]
pub struct Setup {
    pub mesh: Arc<Mesh>,
    pub bathymetry: Vec<f64>,
    pub sponge: Option<Sponge>,
    pub dt: f64,
    pub delta: Option<f64>,
}

pub fn setup(s: &Scenario) -> Result<Setup> {
    s.validate()?;
    let eps = s.physics.eps;
    let l = s.domain.half_width;
    let design = if s.domain.boundary == Boundary::SpongeNeumann {
        let inputs = s.sponge.as_ref().ok_or_else(|| Error::parse("sponge", "missing"))?;
        let omega = s.sponge_omega().ok_or(Error::UndefinedWavenumber)?;
        Some(SpongeDesign {
            omega,
            wavelengths: inputs.wavelengths,
            reduction: inputs.reduction,
        })
    } else {
        None
    };
    let layer = design.as_ref().map(|d| sponge_params(eps, d)).transpose()?;
    let outer = l + layer.map_or(0.0, |(ell, _)| ell);

    let disc = &s.discretization;
    let target = disc.dx_over_eps * eps;
    let elements = ((2.0 * outer / target).round() as usize).max(2);
    let mesh = Arc::new(build_mesh(-outer, outer, elements, disc.degree, s.domain.boundary.topology())?);
    let dt = if disc.dt_equals_dx {
        mesh.element_length()
    } else {
        disc.dt.unwrap_or(mesh.element_length())
    };
    let bathymetry = mesh.sample(|x| s.domain.bathymetry.eval(x));
    let sponge = match (layer, design) {
        (Some((ell, sigma_max)), Some(d)) => {
            let mut p = build_sponge(&mesh, l, ell, sigma_max)?;
            p.design = Some(d);
            Some(p)
        }
        _ => None,
    };
    Ok(Setup {
        mesh,
        bathymetry,
        sponge,
        dt,
        delta: s.delta(),
    })
}

pub fn initial_field(s: &Scenario, mesh: &Arc<Mesh>) -> Result<Field> {
    let eps = s.physics.eps;
    match &s.init {
        InitRecipe::RiemannTanh {
            h_left,
            u_left,
            h_right,
            u_right,
            delta_over_eps,
        } => init_riemann(
            Arc::clone(mesh),
            &InitParams::RiemannTanh {
                h_left: *h_left,
                u_left: *u_left,
                h_right: *h_right,
                u_right: *u_right,
                delta: delta_over_eps * eps,
            },
            eps,
        ),
        InitRecipe::SoftplusSurface {
            surface,
            delta_over_eps,
        } => init_softplus_surface(
            Arc::clone(mesh),
            |x| surface.eval(x),
            |x| s.domain.bathymetry.eval(x),
            delta_over_eps * eps,
            eps,
        ),
        InitRecipe::PlaneWave { height, velocity } => init_plane_wave(Arc::clone(mesh), *height, *velocity, eps),
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub field: Field,
    pub hydro: Hydro,
    pub energy: Energy,
}

/// Mass and energy after one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    /// Step count (0 for rows built from snapshots).
    pub step: usize,
    pub t: f64,
    pub mass: f64,
    pub energy_total: f64,
    pub energy_fisher: f64,
    pub energy_potential: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub scenario: Scenario,
    pub setup: Setup,
    pub reference: Option<Reference>,
    pub snapshots: Vec<Snapshot>,
    pub log: Vec<LogRow>,
    pub steps: usize,
}

impl RunOutput {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a run has at least one snapshot")
    }

    /// Error of one snapshot against the reference, on `window` or the default one.
    pub fn error(
        &self,
        snapshot: &Snapshot,
        field: HydroField,
        kind: NormKind,
        window: Option<Window<f64>>,
    ) -> Result<ErrorReport<f64>> {
        let reference = self
            .reference
            .as_ref()
            .ok_or_else(|| Error::Validation(format!("scenario `{}` has no reference solution", self.scenario.name)))?;
        let t = snapshot.hydro.time;
        let window = window.unwrap_or_else(|| default_window(&self.scenario, Some(reference), t));
        let mut report = error_norm(
            &snapshot.hydro,
            field,
            &self.setup.bathymetry,
            |x, t| reference.field(field, x, t),
            window,
            kind,
        )?;
        report.reference = reference.label().to_string();
        Ok(report)
    }
}

fn log_row(step: usize, field: &Field, e: &Energy) -> LogRow {
    LogRow {
        step,
        t: field.time,
        mass: e.mass,
        energy_total: e.total,
        energy_fisher: e.fisher,
        energy_potential: e.potential,
    }
}

pub fn run(s: &Scenario) -> Result<RunOutput> {
    run_with(s, |_, _| {})
}

/// Runs a scenario, calling `observe(step, field)` after every step.
///
/// Steps have the configured length except for the last one before each
/// output time, which is shortened so snapshots land exactly on it.
pub fn run_with(s: &Scenario, mut observe: impl FnMut(usize, &Field)) -> Result<RunOutput> {
    let setup = setup(s)?;
    let reference = reference_for(s)?;
    let g = s.physics.g;
    let mut field = initial_field(s, &setup.mesh)?;
    let mut cfg = SolverConfig::new(g, s.physics.eps, setup.dt);
    cfg.solver = s.discretization.solver;
    cfg.tolerance = s.discretization.tolerance;
    let mut stepper = StrangStepper::new(
        Arc::clone(&setup.mesh),
        cfg,
        setup.bathymetry.clone(),
        setup.sponge.clone(),
    )?;

    let dt = setup.dt;
    let mut log = vec![log_row(0, &field, &energy(&field, &setup.bathymetry, g)?)];
    let mut snapshots = Vec::with_capacity(s.output.times.len());
    let (mut t_base, mut n, mut step) = (0.0f64, 0usize, 0usize);
    for &target in &s.output.times {
        loop {
            let t = t_base + n as f64 * dt;
            let remaining = target - t;
            if remaining <= 1e-9 * dt {
                break;
            }
            if remaining >= dt * (1.0 - 1e-9) {
                stepper.step(&mut field)?;
                n += 1;
                field.time = t_base + n as f64 * dt;
            } else {
                stepper.step_by(&mut field, remaining)?;
                (t_base, n) = (target, 0);
                field.time = target;
            }
            step += 1;
            if !field.is_finite() {
                return Err(Error::NumericAbort { step, time: field.time });
            }
            observe(step, &field);
            log.push(log_row(step, &field, &energy(&field, &setup.bathymetry, g)?));
        }
        if (field.time - target).abs() <= 1e-9 * dt {
            (t_base, n) = (target, 0);
            field.time = target;
        }
        let e = energy(&field, &setup.bathymetry, g)?;
        snapshots.push(Snapshot {
            hydro: recover(&field),
            field: field.clone(),
            energy: e,
        });
    }
    Ok(RunOutput {
        scenario: s.clone(),
        setup,
        reference,
        snapshots,
        log,
        steps: step,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::app::scenario::builtin;

    #[test]
    fn zero_duration_returns_initial_state() {
        let s = builtin("dam_break_dry", 0.05).unwrap().with_t_final(0.0);
        let out = run(&s).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.steps, 0);
        let init = initial_field(&s, &out.setup.mesh).unwrap();
        assert_eq!(out.last().field.psi, init.psi);
        assert_eq!(out.last().hydro.time, 0.0);
    }

    #[test]
    fn snapshots_land_on_output_times() {
        let mut s = builtin("oscillating_lake", 0.05).unwrap();
        s.output.times = vec![0.013, 0.05, 0.05, 0.101];
        let out = run(&s).unwrap();
        let times: Vec<f64> = out.snapshots.iter().map(|p| p.field.time).collect();
        assert_eq!(times, s.output.times);
        assert_eq!(out.log.last().unwrap().t, 0.101);
    }

    #[test]
    fn mesh_sizes_follow_eps() {
        let s = builtin("dam_break_dry", 0.01).unwrap();
        let st = setup(&s).unwrap();
        assert_eq!(st.mesh.elements(), 8000);
        assert!((st.dt - 5e-4).abs() < 1e-15);
        assert_eq!(st.mesh.len(), 8001);

        let s = builtin("vacuum_generation", 0.01).unwrap();
        let st = setup(&s).unwrap();
        let sp = st.sponge.unwrap();
        assert!((sp.ell - 16.0 * 2.0 * std::f64::consts::PI * 0.01 / 3.0).abs() < 1e-12);
        assert!((st.mesh.bounds().1 - (2.0 + sp.ell)).abs() < 1e-12);

        let s = builtin("plane_wave", 0.1).unwrap();
        let st = setup(&s).unwrap();
        assert_eq!(st.mesh.len(), st.mesh.elements());
    }

    #[test]
    fn references_match_scenarios() {
        for (name, label) in [
            ("dam_break_dry", "exact Riemann solution"),
            ("oscillating_lake", "oscillating lake"),
            ("lake_at_rest_dry", "lake at rest"),
            ("plane_wave", "plane wave"),
        ] {
            let s = builtin(name, 0.1).unwrap();
            assert_eq!(reference_for(&s).unwrap().unwrap().label(), label);
        }
        let mut s = builtin("oscillating_lake", 0.1).unwrap();
        s.physics.g = 2.0;
        assert!(reference_for(&s).unwrap().is_none());
    }

    #[test]
    fn default_windows() {
        let s = builtin("dam_break_wet", 0.01).unwrap();
        let r = reference_for(&s).unwrap();
        let w = default_window(&s, r.as_ref(), 0.6);
        let speed = match &r {
            Some(Reference::Riemann(sol)) => sol.structure.right_shock_speed().unwrap(),
            _ => unreachable!(),
        };
        assert_eq!(w.lo, -1.2);
        assert!((w.hi - (0.6 * speed - 0.2)).abs() < 1e-14);

        let s = builtin("vacuum_generation", 0.01).unwrap();
        assert_eq!(default_window(&s, None, 0.3), Window::new(-1.5, 1.5));
        let s = builtin("dam_break_dry", 0.01).unwrap();
        let r = reference_for(&s).unwrap();
        assert_eq!(default_window(&s, r.as_ref(), 0.6), Window::new(-2.0, 2.0));
    }

    #[test]
    fn plane_wave_keeps_its_height() {
        let s = builtin("plane_wave", 0.1).unwrap().with_t_final(0.2);
        let out = run(&s).unwrap();
        let snap = out.last();
        let err = out.error(snap, HydroField::Height, NormKind::Linf, None).unwrap();
        assert!(err.value < 1e-10, "{}", err.value);
    }
}
