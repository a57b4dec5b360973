//! Complex absorbing layers at both ends of an extended domain.

use crate::error::{Error, Result};
use crate::mesh::Mesh1D;
use crate::scalar::Real;

/// Inputs that size a sponge layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpongeDesign<T> {
    /// Dominant outgoing wavenumber.
    pub omega: T,
    /// Layer width in outgoing wavelengths.
    pub wavelengths: usize,
    /// Target amplitude factor across the layer.
    pub reduction: T,
}

impl<T: Real> SpongeDesign<T> {
    pub fn new(omega: T) -> Self {
        SpongeDesign {
            omega,
            wavelengths: 16,
            reduction: T::lit(1e-6),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpongeProfile<T> {
    pub sigma: Vec<T>,
    pub interior_half_width: T,
    pub ell: T,
    pub sigma_max: T,
    pub design: Option<SpongeDesign<T>>,
}

/// Layer width and peak damping for a design at semiclassical parameter `eps`.
pub fn sponge_params<T: Real>(eps: T, design: &SpongeDesign<T>) -> Result<(T, T)> {
    if design.omega == T::zero() || !design.omega.is_finite() {
        return Err(Error::UndefinedWavenumber);
    }
    if !(eps > T::zero()) || design.wavelengths == 0 {
        return Err(Error::Validation("sponge needs eps > 0 and at least one wavelength".into()));
    }
    if !(design.reduction > T::zero() && design.reduction < T::one()) {
        return Err(Error::Validation(format!(
            "sponge reduction must lie in (0, 1), got {}",
            design.reduction
        )));
    }
    let w = design.omega.abs();
    let ell = T::from_count(design.wavelengths) * T::lit(2.0) * T::PI() * eps / w;
    let sigma_max = -(T::lit(2.0) * eps * w / ell) * design.reduction.ln();
    Ok((ell, sigma_max))
}

/// Quintic smoothstep `6s^5 - 15s^4 + 10s^3`, clamped to [0, 1].
pub fn smoothstep<T: Real>(s: T) -> T {
    let s = s.max(T::zero()).min(T::one());
    s * s * s * (s * (s * T::lit(6.0) - T::lit(15.0)) + T::lit(10.0))
}

pub fn sigma_at<T: Real>(x: T, half_width: T, ell: T, sigma_max: T) -> T {
    sigma_max * smoothstep((x.abs() - half_width) / ell)
}

/// Nodal damping on a mesh spanning `[-(L + ell), L + ell]`.
pub fn build_sponge<T: Real>(mesh: &Mesh1D<T>, half_width: T, ell: T, sigma_max: T) -> Result<SpongeProfile<T>> {
    if !(ell > T::zero()) || !(half_width > T::zero()) {
        return Err(Error::Geometry(format!(
            "layer width {ell} and interior half-width {half_width} must be positive"
        )));
    }
    let outer = half_width + ell;
    let (a, b) = mesh.bounds();
    let tol = T::lit(1e-9) * outer;
    if (a + outer).abs() > tol || (b - outer).abs() > tol {
        return Err(Error::Geometry(format!(
            "mesh spans [{a}, {b}] but the sponge needs [-{outer}, {outer}]"
        )));
    }
    Ok(SpongeProfile {
        sigma: mesh.sample(|x| sigma_at(x, half_width, ell, sigma_max)),
        interior_half_width: half_width,
        ell,
        sigma_max,
        design: None,
    })
}
