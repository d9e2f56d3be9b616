//! Certified robustness intervals for quantum expectation values and eigenvalues.
//!
//! Given statistics measured on an approximate state `rho` and a lower bound
//! `1 - eps` on its fidelity to the target `sigma`, the [`robustness`] module
//! returns intervals guaranteed to contain `<A>_sigma` (or an eigenvalue of
//! `A`). [`fidelity`] derives `eps` from spectral information, [`oracle`]
//! checks the closed forms by brute force, and [`simulator`] produces noisy
//! approximate states to feed them.
//!
//! Everything is generic over [`scalar::Real`]; the aliases below fix it to `f64`.

// `!(x <= y)` is used on purpose so that NaN lands on the rejecting side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fidelity;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod random;
pub mod robustness;
pub mod scalar;
pub mod simulator;
pub mod verify;

pub use error::{Error, Result};
pub use robustness::{Applicability, FidelitySource, Method};
pub use simulator::SamplingConfig;

pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type SquareMatrix = linalg::SquareMatrix<f64>;
pub type SpectralDecomposition = linalg::SpectralDecomposition<f64>;
pub type DensityOperator = model::DensityOperator<f64>;
pub type PureState = model::PureState<f64>;
pub type Observable = model::Observable<f64>;
pub type PauliSum = model::PauliSum<f64>;
pub type PauliTerm = model::PauliTerm<f64>;
pub type MomentStats = model::MomentStats<f64>;
pub type RobustnessInterval = robustness::RobustnessInterval<f64>;
pub type FidelityBudget = robustness::FidelityBudget<f64>;
pub type SpectralInfo = fidelity::SpectralInfo<f64>;
pub type HelstromResult = oracle::HelstromResult<f64>;
pub type Circuit = simulator::Circuit<f64>;
pub type Gate = simulator::Gate<f64>;
pub type NoiseModel = simulator::NoiseModel<f64>;
