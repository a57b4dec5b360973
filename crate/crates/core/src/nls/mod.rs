//! Strang-split time stepping for the semiclassical defocusing NLS
//!
//! ```text
//! i eps psi_t = -(eps^2/2) psi_xx + g |psi|^2 psi + g b psi - i sigma psi
//! ```
//!
//! Each step is a nodal potential half step, a Crank–Nicolson step for the
//! dispersive part, and a second potential half step.

mod banded;
mod iterative;
mod sponge;

pub use banded::{interleaved_order, BandedLu};
pub use iterative::cocg;
pub use sponge::{build_sponge, sigma_at, smoothstep, sponge_params, SpongeDesign, SpongeProfile};

use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::madelung::WaveField;
use crate::mesh::{Mesh1D, Topology};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DispersiveSolverKind {
    #[default]
    DirectBanded,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    pub g: T,
    pub eps: T,
    pub dt: T,
    /// Relative residual target of the iterative path.
    pub tolerance: T,
    pub solver: DispersiveSolverKind,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(g: T, eps: T, dt: T) -> Self {
        SolverConfig {
            g,
            eps,
            dt,
            tolerance: T::lit(1e-12),
            solver: DispersiveSolverKind::DirectBanded,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g > T::zero()) {
            return Err(Error::Validation(format!("g must be positive, got {}", self.g)));
        }
        if !(self.eps > T::zero()) {
            return Err(Error::Validation(format!("eps must be positive, got {}", self.eps)));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::Validation(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.tolerance > T::zero() && self.tolerance <= T::lit(1e-6)) {
            return Err(Error::Validation(format!(
                "solver tolerance must lie in (0, 1e-6], got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Nodal update `psi <- exp(-i g (|psi|^2 + b) tau / eps) exp(-sigma tau / eps) psi`.
/// The phase uses the modulus before damping.
pub fn apply_potential<T: Real>(psi: &mut [Complex<T>], b: &[T], sigma: Option<&[T]>, g: T, eps: T, tau: T) {
    let rate = g * tau / eps;
    for (j, z) in psi.iter_mut().enumerate() {
        let theta = -rate * (z.norm_sqr() + b[j]);
        let mut factor = Complex::from_polar(T::one(), theta);
        if let Some(s) = sigma {
            factor = factor * (-s[j] * tau / eps).exp();
        }
        *z = *z * factor;
    }
}

/// Potential sub-step over `tau`; the field's time stamp is left unchanged.
pub fn potential_half_step<T: Real>(
    field: &WaveField<T>,
    b: &[T],
    sponge: Option<&SpongeProfile<T>>,
    cfg: &SolverConfig<T>,
    tau: T,
) -> Result<WaveField<T>> {
    field.mesh.check_len(b.len())?;
    if let Some(s) = sponge {
        field.mesh.check_len(s.sigma.len())?;
    }
    if !(tau > T::zero()) {
        return Err(Error::Validation(format!("potential step needs tau > 0, got {tau}")));
    }
    let mut out = field.clone();
    apply_potential(&mut out.psi, b, sponge.map(|s| s.sigma.as_slice()), cfg.g, cfg.eps, tau);
    Ok(out)
}

enum Backend<T> {
    Direct(BandedLu<T>),
    Iterative { diag: Vec<Complex<T>>, tol: T },
}

/// Crank–Nicolson propagator `(M + i c K) psi' = (M - i c K) psi`, `c = eps dt / 4`.
pub struct DispersiveOperator<T> {
    mesh: Arc<Mesh1D<T>>,
    coeff: T,
    dt: T,
    backend: Backend<T>,
    rhs: Vec<Complex<T>>,
    work: Vec<Complex<T>>,
}

impl<T: Real> DispersiveOperator<T> {
    pub fn new(mesh: Arc<Mesh1D<T>>, eps: T, dt: T, solver: DispersiveSolverKind, tolerance: T) -> Result<Self> {
        let n = mesh.len();
        let coeff = eps * dt / T::lit(4.0);
        let backend = match solver {
            DispersiveSolverKind::DirectBanded => {
                let pos = match mesh.topology() {
                    Topology::Periodic => interleaved_order(n),
                    Topology::Neumann => (0..n).collect(),
                };
                let entries = mesh
                    .mass()
                    .iter()
                    .enumerate()
                    .map(|(i, &m)| (i, i, Complex::new(m, T::zero())))
                    .chain(
                        mesh.stiffness()
                            .iter()
                            .map(|(r, c, v)| (r, c, Complex::new(T::zero(), coeff * v))),
                    )
                    .collect::<Vec<_>>();
                Backend::Direct(BandedLu::factor(n, pos, entries)?)
            }
            DispersiveSolverKind::Iterative => Backend::Iterative {
                diag: (0..n)
                    .map(|i| Complex::new(mesh.mass()[i], coeff * mesh.stiffness().get(i, i)))
                    .collect(),
                tol: tolerance,
            },
        };
        Ok(DispersiveOperator {
            mesh,
            coeff,
            dt,
            backend,
            rhs: vec![Complex::new(T::zero(), T::zero()); n],
            work: Vec::with_capacity(n),
        })
    }

    pub fn from_config(mesh: Arc<Mesh1D<T>>, cfg: &SolverConfig<T>) -> Result<Self> {
        Self::new(mesh, cfg.eps, cfg.dt, cfg.solver, cfg.tolerance)
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    fn apply_system(mesh: &Mesh1D<T>, coeff: T, sign: T, v: &[Complex<T>], out: &mut [Complex<T>]) {
        mesh.stiffness().mul_complex(v, out);
        let ic = Complex::new(T::zero(), sign * coeff);
        for ((o, &m), x) in out.iter_mut().zip(mesh.mass()).zip(v) {
            *o = *x * m + *o * ic;
        }
    }

    /// Advances `psi` in place by one dispersive step.
    pub fn apply(&mut self, psi: &mut [Complex<T>]) -> Result<()> {
        self.mesh.check_len(psi.len())?;
        Self::apply_system(&self.mesh, self.coeff, -T::one(), psi, &mut self.rhs);
        match &self.backend {
            Backend::Direct(lu) => lu.solve(&self.rhs, psi, &mut self.work),
            Backend::Iterative { diag, tol } => {
                let (mesh, coeff) = (&self.mesh, self.coeff);
                cocg(
                    |v, out| Self::apply_system(mesh, coeff, T::one(), v, out),
                    diag,
                    &self.rhs,
                    psi,
                    *tol,
                    10 * psi.len().max(100),
                )?;
            }
        }
        Ok(())
    }
}

/// One Crank–Nicolson dispersive step of length `cfg.dt` (time stamp unchanged).
/// Factorizes the system on every call; use [`StrangStepper`] for repeated steps.
pub fn dispersive_step<T: Real>(field: &WaveField<T>, cfg: &SolverConfig<T>) -> Result<WaveField<T>> {
    cfg.validate()?;
    let mut op = DispersiveOperator::from_config(Arc::clone(&field.mesh), cfg)?;
    let mut out = field.clone();
    op.apply(&mut out.psi)?;
    Ok(out)
}

/// Full Strang step: potential(dt/2), dispersive(dt), potential(dt/2).
pub fn strang_step<T: Real>(
    field: &WaveField<T>,
    b: &[T],
    sponge: Option<&SpongeProfile<T>>,
    cfg: &SolverConfig<T>,
) -> Result<WaveField<T>> {
    let mut stepper = StrangStepper::new(Arc::clone(&field.mesh), *cfg, b.to_vec(), sponge.cloned())?;
    let mut out = field.clone();
    stepper.step(&mut out)?;
    Ok(out)
}

/// Reusable stepper holding the factorized dispersive system.
pub struct StrangStepper<T> {
    cfg: SolverConfig<T>,
    bathymetry: Vec<T>,
    sponge: Option<SpongeProfile<T>>,
    op: DispersiveOperator<T>,
    mesh: Arc<Mesh1D<T>>,
}

impl<T: Real> StrangStepper<T> {
    pub fn new(
        mesh: Arc<Mesh1D<T>>,
        cfg: SolverConfig<T>,
        bathymetry: Vec<T>,
        sponge: Option<SpongeProfile<T>>,
    ) -> Result<Self> {
        cfg.validate()?;
        mesh.check_len(bathymetry.len())?;
        if let Some(s) = &sponge {
            mesh.check_len(s.sigma.len())?;
        }
        let op = DispersiveOperator::from_config(Arc::clone(&mesh), &cfg)?;
        Ok(StrangStepper {
            cfg,
            bathymetry,
            sponge,
            op,
            mesh,
        })
    }

    pub fn config(&self) -> &SolverConfig<T> {
        &self.cfg
    }

    pub fn bathymetry(&self) -> &[T] {
        &self.bathymetry
    }

    pub fn sponge(&self) -> Option<&SpongeProfile<T>> {
        self.sponge.as_ref()
    }

    pub fn mesh(&self) -> &Arc<Mesh1D<T>> {
        &self.mesh
    }

    /// Advances by the configured `dt`.
    pub fn step(&mut self, field: &mut WaveField<T>) -> Result<()> {
        let dt = self.cfg.dt;
        self.substeps(field, dt, None)?;
        field.time = field.time + dt;
        Ok(())
    }

    /// Advances by `dt`, factorizing a one-off system when `dt` differs from
    /// the configured step.
    pub fn step_by(&mut self, field: &mut WaveField<T>, dt: T) -> Result<()> {
        if (dt - self.cfg.dt).abs() <= T::lit(1e-12) * self.cfg.dt {
            return self.step(field);
        }
        if !(dt > T::zero()) {
            return Err(Error::Validation(format!("step length must be positive, got {dt}")));
        }
        let mut op = DispersiveOperator::new(
            Arc::clone(&self.mesh),
            self.cfg.eps,
            dt,
            self.cfg.solver,
            self.cfg.tolerance,
        )?;
        self.substeps(field, dt, Some(&mut op))?;
        field.time = field.time + dt;
        Ok(())
    }

    fn substeps(&mut self, field: &mut WaveField<T>, dt: T, op: Option<&mut DispersiveOperator<T>>) -> Result<()> {
        self.mesh.check_len(field.psi.len())?;
        let half = dt / T::lit(2.0);
        let sigma = self.sponge.as_ref().map(|s| s.sigma.as_slice());
        let (g, eps) = (self.cfg.g, self.cfg.eps);
        apply_potential(&mut field.psi, &self.bathymetry, sigma, g, eps, half);
        match op {
            Some(op) => op.apply(&mut field.psi)?,
            None => self.op.apply(&mut field.psi)?,
        }
        apply_potential(&mut field.psi, &self.bathymetry, sigma, g, eps, half);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::madelung::init_plane_wave;
    use crate::mesh::build_mesh;
    use std::f64::consts::PI;

    fn field(mesh: &Arc<Mesh1D<f64>>, f: impl Fn(f64) -> Complex<f64>) -> WaveField<f64> {
        let psi = mesh.coords().iter().map(|&x| f(x)).collect();
        WaveField::new(Arc::clone(mesh), psi, 0.1, 0.0).unwrap()
    }

    fn bumpy(x: f64) -> Complex<f64> {
        Complex::from_polar(1.0 + 0.3 * (2.0 * x).sin(), 3.0 * x.cos() + 5.0 * x)
    }

    #[test]
    fn potential_step_constant_amplitude() {
        let m = Arc::new(build_mesh(-1.0, 1.0, 8, 1, Topology::Neumann).unwrap());
        let f = field(&m, |_| Complex::new(0.8, 0.0));
        let cfg = SolverConfig::new(1.0, 0.1, 0.01);
        let out = potential_half_step(&f, &vec![0.0; 9], None, &cfg, 0.005).unwrap();
        let expected = Complex::from_polar(0.8, -0.64 * 0.005 / 0.1);
        assert!(out.psi.iter().all(|z| (z - expected).norm() < 1e-15));
    }

    #[test]
    fn potential_step_preserves_modulus() {
        let m = Arc::new(build_mesh(-2.0, 2.0, 50, 2, Topology::Neumann).unwrap());
        let f = field(&m, bumpy);
        let b = m.sample(|x| x * x);
        let cfg = SolverConfig::new(1.0, 0.1, 0.05);
        let out = potential_half_step(&f, &b, None, &cfg, 0.025).unwrap();
        let amax = f.max_modulus();
        for (u, v) in f.psi.iter().zip(&out.psi) {
            assert!((u.norm() - v.norm()).abs() <= 1e-13 * amax);
        }
    }

    #[test]
    fn potential_step_damps_in_sponge() {
        let m = Arc::new(build_mesh(-1.0, 1.0, 4, 1, Topology::Neumann).unwrap());
        let f = field(&m, |_| Complex::new(0.5, 0.0));
        let sponge = SpongeProfile {
            sigma: vec![0.0, 0.5, 1.0, 2.0, 4.0],
            interior_half_width: 0.5,
            ell: 0.5,
            sigma_max: 4.0,
            design: None,
        };
        let cfg = SolverConfig::new(1.0, 0.1, 0.02);
        let out = potential_half_step(&f, &[0.0; 5], Some(&sponge), &cfg, 0.01).unwrap();
        for (z, s) in out.psi.iter().zip(&sponge.sigma) {
            assert!((z.norm() - 0.5 * (-s * 0.01 / 0.1).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn dispersive_step_leaves_constants() {
        for topo in [Topology::Neumann, Topology::Periodic] {
            let m = Arc::new(build_mesh(-1.0, 1.0, 16, 3, topo).unwrap());
            let f = field(&m, |_| Complex::new(0.3, -0.4));
            let cfg = SolverConfig::new(1.0, 0.1, 0.05);
            let out = dispersive_step(&f, &cfg).unwrap();
            assert!(out.psi.iter().all(|z| (z - Complex::new(0.3, -0.4)).norm() < 1e-14));
        }
    }

    #[test]
    fn dispersive_step_on_discrete_eigenvector() {
        // On a uniform periodic linear mesh, e^{i kappa x} with kappa on the
        // grid is an eigenvector of M^{-1} K with eigenvalue (4/h^2) sin^2(kappa h / 2).
        let n = 64;
        let len = 2.0 * PI;
        let m = Arc::new(build_mesh(0.0, len, n, 1, Topology::Periodic).unwrap());
        let h = len / n as f64;
        let kappa = 5.0;
        let lambda = 4.0 / (h * h) * (kappa * h / 2.0).sin().powi(2);
        let (eps, dt) = (0.1, 0.3);
        let beta = eps * lambda * dt / 4.0;
        let r = Complex::new(1.0, -beta) / Complex::new(1.0, beta);
        let f = field(&m, |x| Complex::from_polar(1.0, kappa * x));
        let cfg = SolverConfig::new(1.0, eps, dt);
        let out = dispersive_step(&f, &cfg).unwrap();
        for (u, v) in f.psi.iter().zip(&out.psi) {
            assert!((u * r - v).norm() < 1e-12);
        }
    }

    #[test]
    fn dispersive_step_conserves_norm() {
        for topo in [Topology::Neumann, Topology::Periodic] {
            for k in [1, 2, 4] {
                let m = Arc::new(build_mesh(-2.0, 2.0, 37, k, topo).unwrap());
                let f = field(&m, bumpy);
                let cfg = SolverConfig::new(1.0, 0.1, 0.01);
                let out = dispersive_step(&f, &cfg).unwrap();
                let (m0, m1) = (f.mass(), out.mass());
                assert!((m0 - m1).abs() <= 1e-12 * m0, "{topo:?} k={k}");
            }
        }
    }

    #[test]
    fn iterative_path_agrees_with_direct() {
        let m = Arc::new(build_mesh(-2.0, 2.0, 60, 2, Topology::Periodic).unwrap());
        let f = field(&m, bumpy);
        let direct = SolverConfig::new(1.0, 0.1, 0.02);
        let iterative = SolverConfig {
            solver: DispersiveSolverKind::Iterative,
            tolerance: 1e-13,
            ..direct
        };
        let a = dispersive_step(&f, &direct).unwrap();
        let b = dispersive_step(&f, &iterative).unwrap();
        for (u, v) in a.psi.iter().zip(&b.psi) {
            assert!((u - v).norm() < 1e-10);
        }
    }

    #[test]
    fn strang_step_on_constant_state() {
        let m = Arc::new(build_mesh(-1.0, 1.0, 20, 1, Topology::Periodic).unwrap());
        let a = 0.9;
        let f = field(&m, |_| Complex::new(a, 0.0));
        let cfg = SolverConfig::new(1.0, 0.1, 0.01);
        let out = strang_step(&f, &vec![0.0; 20], None, &cfg).unwrap();
        let exact = Complex::from_polar(a, -a * a * 0.01 / 0.1);
        assert!(out.psi.iter().all(|z| (z - exact).norm() < 1e-14));
        assert!((out.time - 0.01).abs() < 1e-16);
    }

    #[test]
    fn sponge_everywhere_decays_mass() {
        let m = Arc::new(build_mesh(-1.0, 1.0, 20, 1, Topology::Neumann).unwrap());
        let mut f = field(&m, |_| Complex::new(1.0, 0.0));
        let sponge = SpongeProfile {
            sigma: vec![0.2; 21],
            interior_half_width: 0.5,
            ell: 0.5,
            sigma_max: 0.2,
            design: None,
        };
        let cfg = SolverConfig::new(1.0, 0.1, 0.01);
        let mut stepper = StrangStepper::new(m, cfg, vec![0.0; 21], Some(sponge)).unwrap();
        let mut prev = f.mass();
        for _ in 0..20 {
            stepper.step(&mut f).unwrap();
            let now = f.mass();
            assert!(now < prev);
            prev = now;
        }
    }

    #[test]
    fn time_reversal_via_conjugation() {
        let m = Arc::new(build_mesh(-PI, PI, 128, 2, Topology::Periodic).unwrap());
        let f0 = field(&m, |x| Complex::from_polar(1.0 + 0.2 * x.sin(), 3.0 * x.cos()));
        let b = m.sample(|x| 0.1 * x.cos());
        let cfg = SolverConfig::new(1.0, 0.1, 0.01);
        let mut stepper = StrangStepper::new(Arc::clone(&m), cfg, b, None).unwrap();
        let mut f = f0.clone();
        for _ in 0..10 {
            stepper.step(&mut f).unwrap();
        }
        let mut back = f.conj();
        for _ in 0..10 {
            stepper.step(&mut back).unwrap();
        }
        let back = back.conj();
        let scale = f0.max_modulus();
        for (u, v) in f0.psi.iter().zip(&back.psi) {
            assert!((u - v).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn shortened_step_matches_configured_step() {
        let m = Arc::new(build_mesh(-PI, PI, 200, 1, Topology::Periodic).unwrap());
        let f0 = init_plane_wave(Arc::clone(&m), 1.0, 1.0, 0.1).unwrap();
        let cfg = SolverConfig::new(1.0, 0.1, 0.01);
        let mut s1 = StrangStepper::new(Arc::clone(&m), cfg, vec![0.0; 200], None).unwrap();
        let mut s2 = StrangStepper::new(m, SolverConfig { dt: 0.02, ..cfg }, vec![0.0; 200], None).unwrap();
        let (mut a, mut b) = (f0.clone(), f0);
        s1.step(&mut a).unwrap();
        s2.step_by(&mut b, 0.01).unwrap();
        for (u, v) in a.psi.iter().zip(&b.psi) {
            assert!((u - v).norm() < 1e-14);
        }
        assert_eq!(a.time, b.time);
    }

    #[test]
    fn config_validation() {
        let ok = SolverConfig::new(1.0, 0.1, 0.01);
        assert!(ok.validate().is_ok());
        assert!(SolverConfig { dt: 0.0, ..ok }.validate().is_err());
        assert!(SolverConfig { tolerance: 1e-3, ..ok }.validate().is_err());
        assert!(SolverConfig { eps: -1.0, ..ok }.validate().is_err());
    }
}
