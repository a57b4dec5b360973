//! Conserved-quantity monitors, windowed error norms, and convergence-order fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::madelung::{HydroState, WaveField};
use crate::scalar::Real;

/// Energy split of a wave field. `total = kinetic + potential + fisher`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport<T> {
    pub kinetic: T,
    pub potential: T,
    pub fisher: T,
    pub total: T,
    pub mass: T,
}

/// Energy of the wave field:
/// `int (eps^2/2)|psi_x|^2 + (g/2)|psi|^4 + g b |psi|^2`, with the gradient
/// term split into the Fisher part `(eps^2/2) int |(|psi|)_x|^2` and the rest.
pub fn energy<T: Real>(field: &WaveField<T>, b: &[T], g: T) -> Result<EnergyReport<T>> {
    let mesh = &field.mesh;
    mesh.check_len(b.len())?;
    let half = T::lit(0.5);
    let disp = half * field.eps * field.eps;
    let gradient = disp * mesh.stiffness().hermitian_form(&field.psi);
    let modulus: Vec<T> = field.psi.iter().map(|z| z.norm()).collect();
    let fisher = (disp * mesh.stiffness().quadratic_form(&modulus)).max(T::zero());
    let (potential, mass) = mesh
        .mass()
        .iter()
        .zip(&field.psi)
        .zip(b)
        .fold((T::zero(), T::zero()), |(p, m), ((&w, z), &bj)| {
            let h = z.norm_sqr();
            (p + w * (half * g * h * h + g * bj * h), m + w * h)
        });
    let total = gradient + potential;
    Ok(EnergyReport {
        kinetic: total - potential - fisher,
        potential,
        fisher,
        total,
        mass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    L1,
    L2,
    Linf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HydroField {
    Height,
    Discharge,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Window<T> {
    pub fn new(lo: T, hi: T) -> Self {
        Window { lo, hi }
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport<T> {
    pub kind: NormKind,
    pub field: HydroField,
    pub window: Window<T>,
    /// Length of the union of elements whose midpoint lies in the window.
    pub measure: T,
    pub value: T,
    pub reference: String,
}

/// Quadrature-weighted error of one hydrodynamic field against `reference(x, t)`.
///
/// L1 and L2 integrate over the elements whose midpoints fall inside the
/// window using the Gauss–Lobatto weights; Linf is the maximum over the nodes
/// of those elements.
pub fn error_norm<T: Real>(
    num: &HydroState<T>,
    field: HydroField,
    bathymetry: &[T],
    reference: impl Fn(T, T) -> T,
    window: Window<T>,
    kind: NormKind,
) -> Result<ErrorReport<T>> {
    let mesh = &num.mesh;
    mesh.check_len(bathymetry.len())?;
    let (a, b) = mesh.bounds();
    let slack = T::lit(1e-9) * (b - a);
    if !(window.lo < window.hi) || window.lo < a - slack || window.hi > b + slack {
        return Err(Error::Validation(format!(
            "error window [{}, {}] must be nonempty and inside [{a}, {b}]",
            window.lo, window.hi
        )));
    }
    let errors: Vec<T> = (0..mesh.len())
        .map(|j| {
            let x = mesh.coords()[j];
            let value = match field {
                HydroField::Height => num.h[j],
                HydroField::Discharge => num.q[j],
                HydroField::Surface => num.h[j] + bathymetry[j],
            };
            (value - reference(x, num.time)).abs()
        })
        .collect();

    let k = mesh.degree();
    let half = mesh.element_length() / T::lit(2.0);
    let (mut l1, mut l2, mut linf, mut measure) = (T::zero(), T::zero(), T::zero(), T::zero());
    let mut selected = 0usize;
    for e in 0..mesh.elements() {
        let mid = (mesh.node_x(e, 0) + mesh.node_x(e, k)) / T::lit(2.0);
        if !window.contains(mid) {
            continue;
        }
        selected += 1;
        for q in 0..=k {
            let w = mesh.rule().weights()[q] * half;
            let err = errors[mesh.dof(e, q)];
            l1 = l1 + w * err;
            l2 = l2 + w * err * err;
            linf = linf.max(err);
            measure = measure + w;
        }
    }
    if selected == 0 {
        return Err(Error::Validation(format!(
            "error window [{}, {}] contains no element",
            window.lo, window.hi
        )));
    }
    let value = match kind {
        NormKind::L1 => l1,
        NormKind::L2 => l2.sqrt(),
        NormKind::Linf => linf,
    };
    Ok(ErrorReport {
        kind,
        field,
        window,
        measure,
        value,
        reference: String::new(),
    })
}

/// Least-squares slope of `log(error)` against `log(eps)`.
pub fn convergence_order<T: Real>(errors: &[(T, T)]) -> Result<T> {
    if errors.len() < 2 {
        return Err(Error::Validation("convergence fit needs at least two entries".into()));
    }
    if let Some((e, v)) = errors.iter().find(|(e, v)| !(*e > T::zero()) || !(*v > T::zero())) {
        return Err(Error::Validation(format!(
            "convergence fit needs positive eps and errors, got ({e}, {v})"
        )));
    }
    let n = T::from_count(errors.len());
    let xs: Vec<T> = errors.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<T> = errors.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let sxx = xs.iter().fold(T::zero(), |a, &x| a + (x - mx) * (x - mx));
    if sxx == T::zero() {
        return Err(Error::Validation("convergence fit needs distinct eps values".into()));
    }
    let sxy = xs.iter().zip(&ys).fold(T::zero(), |a, (&x, &y)| a + (x - mx) * (y - my));
    Ok(sxy / sxx)
}
