//! Compton polarimetry of entangled photon pairs: the Klein–Nishina process
//! as a two-operator Kraus channel, polarization cross sections for one to
//! three photons, and entanglement witnesses built on mutually unbiased
//! bases and SIC projector sets, evaluated analytically, by derivative-free
//! optimization, and from Monte Carlo event samples.
//!
//! Everything numeric is generic over the [`scalar::Real`] scalar (`f32` or
//! `f64`); the aliases below fix the common double-precision instantiation.

pub mod channel;
pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod montecarlo;
pub mod quantum;
pub mod optim;
pub mod scalar;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-precision aliases for the core types.
pub type Matrix64 = linalg::ComplexMatrix<f64>;
pub type Density64 = quantum::DensityMatrix<f64>;
pub type Pure64 = quantum::PureState<f64>;
pub type Unitary64 = quantum::Unitary<f64>;
pub type Direction64 = kinematics::Direction<f64>;
pub type Geometry64 = kinematics::ScatterGeometry<f64>;
pub type Setting64 = witness::ComptonSetting<f64>;
pub type RunConfig64 = montecarlo::RunConfig<f64>;
pub type Event64 = montecarlo::EventRecord<f64>;

/// Single-precision aliases.
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Density32 = quantum::DensityMatrix<f32>;
pub type Pure32 = quantum::PureState<f32>;
