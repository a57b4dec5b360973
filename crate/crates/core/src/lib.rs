//! Shallow water flows computed through a dispersive (Schrödinger)
//! regularization.
//!
//! The height `h` and discharge `q` are encoded in a wave function
//! `psi = sqrt(h) exp(i phi / eps)`, which is advanced by the defocusing
//! cubic NLS with the bathymetry as an external potential. The numerical
//! core is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`, which is what the scenario driver and CLI use.

pub mod app;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod madelung;
pub mod mesh;
pub mod nls;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mesh = mesh::Mesh1D<f64>;
pub type Field = madelung::WaveField<f64>;
pub type Hydro = madelung::HydroState<f64>;
pub type Sponge = nls::SpongeProfile<f64>;
pub type Config = nls::SolverConfig<f64>;
pub type Stepper = nls::StrangStepper<f64>;
pub type Riemann = exact::RiemannData<f64>;
pub type Energy = diagnostics::EnergyReport<f64>;

pub type MeshF32 = mesh::Mesh1D<f32>;
pub type FieldF32 = madelung::WaveField<f32>;
