//! Information entropies and entropic uncertainty sums for the ground state
//! (and overlap-tracked excited states) of the coupled quartic-oscillator
//! Hamiltonian
//!
//! ```text
//! H = p_x^2/2 + p_y^2/2 + k1^2 x^2/2 + k2^2 y^2/2 + alpha x^2 y^2
//! ```
//!
//! Exact results come from basis-set diagonalization in a truncated 2D
//! harmonic-oscillator product basis split into parity blocks; closed forms
//! come from the adiabatic (Born-Oppenheimer) treatment at small coupling and
//! a variational Gaussian at large coupling. The `sweep` and `fit` modules
//! drive coupling sweeps across methods and reproduce the scaling-law fits.
//!
//! All core math is generic over the floating-point scalar through
//! [`scalar::Real`]; concrete `f64` aliases are exported below.

pub mod adiabatic;
pub mod basis;
pub mod entropy;
pub mod error;
pub mod fit;
pub mod linalg;
pub mod scalar;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` aliases for the main library types.
pub type BasisSpec64 = basis::BasisSpec<f64>;
pub type QuadratureRule64 = basis::QuadratureRule<f64>;
pub type HamiltonianParams64 = spectral::HamiltonianParams<f64>;
pub type SymmetricBlock64 = spectral::SymmetricBlock<f64>;
pub type EigenPair64 = spectral::EigenPair<f64>;
pub type TrackedPath64 = spectral::TrackedPath<f64>;
pub type SmallAlphaState64 = adiabatic::SmallAlphaState<f64>;
pub type VariationalSolution64 = adiabatic::VariationalSolution<f64>;
pub type LargeAlphaState64 = adiabatic::LargeAlphaState<f64>;
pub type MomentumGrid64 = adiabatic::MomentumGrid<f64>;
pub type DensityGrid64 = entropy::DensityGrid<f64>;
pub type EntropyResult64 = entropy::EntropyResult<f64>;
pub type EntropyRecord64 = sweep::EntropyRecord<f64>;
pub type SweepConfig64 = sweep::SweepConfig<f64>;
pub type FitModel64 = fit::FitModel<f64>;
