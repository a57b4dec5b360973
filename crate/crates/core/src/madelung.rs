//! Wave-function construction from hydrodynamic data and the inverse map
//! back to water height and discharge.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::scalar::Real;

/// Complex nodal coefficients of the wave function on a mesh.
#[derive(Debug, Clone)]
pub struct WaveField<T> {
    pub mesh: Arc<Mesh1D<T>>,
    pub psi: Vec<Complex<T>>,
    pub eps: T,
    pub time: T,
}

/// Nodal water height and discharge.
#[derive(Debug, Clone)]
pub struct HydroState<T> {
    pub mesh: Arc<Mesh1D<T>>,
    pub h: Vec<T>,
    pub q: Vec<T>,
    pub time: T,
}

/// Initial-data recipe.
#[derive(Debug, Clone, PartialEq)]
pub enum InitParams<T> {
    /// tanh-smoothed Riemann step with a matching smooth phase.
    RiemannTanh {
        h_left: T,
        u_left: T,
        h_right: T,
        u_right: T,
        delta: T,
    },
    /// Constant-modulus plane wave `sqrt(h) exp(i u x / eps)`.
    PlaneWave { height: T, velocity: T },
}

impl<T: Real> WaveField<T> {
    pub fn new(mesh: Arc<Mesh1D<T>>, psi: Vec<Complex<T>>, eps: T, time: T) -> Result<Self> {
        mesh.check_len(psi.len())?;
        if !(eps > T::zero()) {
            return Err(Error::InvalidState(format!("eps must be positive, got {eps}")));
        }
        Ok(WaveField { mesh, psi, eps, time })
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Discrete mass `(psi, psi)_h`.
    pub fn mass(&self) -> T {
        self.mesh
            .mass()
            .iter()
            .zip(&self.psi)
            .fold(T::zero(), |acc, (&m, z)| acc + m * z.norm_sqr())
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.psi.iter_mut().for_each(|z| *z = z.conj());
        out
    }

    pub fn max_modulus(&self) -> T {
        self.psi.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }
}

impl<T: Real> HydroState<T> {
    /// Velocity `q / h`, reported only where `h > eps^2` (zero elsewhere).
    pub fn velocity(&self, eps: T) -> Vec<T> {
        let floor = eps * eps;
        self.h
            .iter()
            .zip(&self.q)
            .map(|(&h, &q)| if h > floor { q / h } else { T::zero() })
            .collect()
    }
}

/// Smoothed Riemann height profile.
pub fn riemann_height<T: Real>(h_left: T, h_right: T, delta: T, x: T) -> T {
    let two = T::lit(2.0);
    ((h_left + h_right) / two + (h_right - h_left) / two * (x / delta).tanh()).max(T::zero())
}

/// Smooth velocity potential whose derivative is the tanh-blended Riemann velocity.
pub fn riemann_phase<T: Real>(u_left: T, u_right: T, delta: T, x: T) -> T {
    let two = T::lit(2.0);
    let r = x.abs() / delta;
    (u_right + u_left) / two * x + (u_right - u_left) / two * delta * (r + (-two * r).exp().ln_1p())
}

pub fn riemann_velocity<T: Real>(u_left: T, u_right: T, delta: T, x: T) -> T {
    let two = T::lit(2.0);
    (u_right + u_left) / two + (u_right - u_left) / two * (x / delta).tanh()
}

/// Numerically stable `delta * log(1 + exp(z / delta))`.
pub fn softplus<T: Real>(z: T, delta: T) -> T {
    let s = z / delta;
    delta * (s.max(T::zero()) + (-s.abs()).exp().ln_1p())
}

pub fn init_riemann<T: Real>(mesh: Arc<Mesh1D<T>>, p: &InitParams<T>, eps: T) -> Result<WaveField<T>> {
    let InitParams::RiemannTanh {
        h_left,
        u_left,
        h_right,
        u_right,
        delta,
    } = *p
    else {
        return Err(Error::InvalidState("init_riemann requires the RiemannTanh recipe".into()));
    };
    if h_left < T::zero() || h_right < T::zero() {
        return Err(Error::InvalidState(format!(
            "negative Riemann height (h_left = {h_left}, h_right = {h_right})"
        )));
    }
    if !(delta > T::zero()) {
        return Err(Error::InvalidState(format!("smoothing width must be positive, got {delta}")));
    }
    let psi = mesh
        .coords()
        .iter()
        .map(|&x| {
            let amp = riemann_height(h_left, h_right, delta, x).sqrt();
            Complex::from_polar(amp, riemann_phase(u_left, u_right, delta, x) / eps)
        })
        .collect();
    checked(WaveField::new(mesh, psi, eps, T::zero())?)
}

/// Real wave function `sqrt(softplus(eta0 - b))`.
pub fn init_softplus_surface<T: Real>(
    mesh: Arc<Mesh1D<T>>,
    eta0: impl Fn(T) -> T,
    b: impl Fn(T) -> T,
    delta: T,
    eps: T,
) -> Result<WaveField<T>> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidState(format!("smoothing width must be positive, got {delta}")));
    }
    let psi = mesh
        .coords()
        .iter()
        .map(|&x| Complex::new(softplus(eta0(x) - b(x), delta).sqrt(), T::zero()))
        .collect();
    checked(WaveField::new(mesh, psi, eps, T::zero())?)
}

pub fn init_plane_wave<T: Real>(mesh: Arc<Mesh1D<T>>, height: T, velocity: T, eps: T) -> Result<WaveField<T>> {
    if height < T::zero() {
        return Err(Error::InvalidState(format!("negative plane-wave height {height}")));
    }
    let amp = height.sqrt();
    let psi = mesh
        .coords()
        .iter()
        .map(|&x| Complex::from_polar(amp, velocity * x / eps))
        .collect();
    checked(WaveField::new(mesh, psi, eps, T::zero())?)
}

fn checked<T: Real>(field: WaveField<T>) -> Result<WaveField<T>> {
    if !field.is_finite() {
        return Err(Error::InvalidState("initial wave function is not finite".into()));
    }
    Ok(field)
}

/// `h = |psi|^2`, `q = eps Im(conj(psi) psi_x)` with the element-wise
/// derivative averaged at shared element endpoints.
pub fn recover<T: Real>(field: &WaveField<T>) -> HydroState<T> {
    let dpsi = field.mesh.nodal_derivative(&field.psi);
    let h = field.psi.iter().map(|z| z.norm_sqr()).collect();
    let q = field
        .psi
        .iter()
        .zip(&dpsi)
        .map(|(z, dz)| field.eps * (z.conj() * dz).im)
        .collect();
    HydroState {
        mesh: Arc::clone(&field.mesh),
        h,
        q,
        time: field.time,
    }
}
