//! Frozen-Gaussian multiple-spawning propagation with quantum-energy-conserving center
//! equations of motion.

pub mod basis;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod observables;
pub mod potentials;
pub mod quadrature;
pub mod run;
pub mod sampling;

pub use basis::{AmplitudeVector, BasisSet, CenterRates, FrozenGaussian, WavefunctionState};
pub use error::{Error, Result};
pub use integrals::{GaussianPolynomialOperator, Hamiltonian, MatrixBundle, PolyTerm};
