//! Numerical solvers and verification tools for an electrostatic MEMS model
//! with a hinged elastic plate over a rigid ground plate.
//!
//! The device occupies the unit disc. The electrostatic potential is
//! harmonic in the deflection-dependent gap and is solved on a fixed
//! cylinder after a terrain-following change of coordinates ([`potential`]);
//! the plate deflection obeys a fourth-order equation with Steklov-type
//! hinged boundary conditions driven by the squared field strength on the
//! plate ([`plate`], [`stationary`]). The crate computes:
//!
//! - coupled stationary states by Picard or Newton iteration, with
//!   continuation in the voltage parameter `lambda` and fold (pull-in)
//!   bracketing ([`stationary`]);
//! - the vanishing-aspect-ratio limit `beta lap^2 u - tau lap u =
//!   -lambda/(1+u)^2` for comparison ([`smallgap`]);
//! - the principal eigenpair of the hinged plate operator, the spectrum of
//!   the linearization, and the eigenfunction-multiplier nonexistence
//!   certificate ([`spectrum`]);
//! - semi-implicit time integration with touchdown detection and decay-rate
//!   fits ([`evolution`]);
//! - energies with finite-difference first-variation checks ([`energy`])
//!   and an invariant suite for solution candidates ([`verify`]).
//!
//! Everything is generic over the scalar type through [`scalar::Scalar`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64`, which is what
//! the command-line tools and the stated tolerances assume.

pub mod config;
pub mod energy;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod linalg;
pub mod model;
pub mod plate;
pub mod potential;
pub mod report;
pub mod scalar;
pub mod smallgap;
pub mod special;
pub mod spectrum;
pub mod stationary;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Concrete `f64` aliases used by the binaries and the acceptance suite.
pub type Params64 = model::Params<f64>;
pub type DimensionalInputs64 = model::DimensionalInputs<f64>;
pub type RunConfig64 = config::RunConfig<f64>;
pub type RadialGrid64 = grid::RadialGrid<f64>;
pub type CylinderGrid64 = grid::CylinderGrid<f64>;
pub type PlateField64 = plate::PlateField<f64>;
pub type PlateOperator64 = plate::PlateOperator<f64>;
pub type PotentialField64 = potential::PotentialField<f64>;
pub type TraceForce64 = potential::TraceForce<f64>;
pub type EigenPair64 = spectrum::EigenPair<f64>;
pub type StabilityReport64 = spectrum::StabilityReport<f64>;
pub type SolveReport64 = stationary::SolveReport<f64>;
pub type ContinuationTrace64 = stationary::ContinuationTrace<f64>;
pub type EvolutionTrace64 = evolution::EvolutionTrace<f64>;
