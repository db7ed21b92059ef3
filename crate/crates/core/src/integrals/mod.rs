//! Matrix elements over frozen Gaussians.
//!
//! Every element is evaluated in closed form by completing the square of the Gaussian
//! product and summing polynomial moments. [`crate::quadrature`] provides an independent
//! pointwise route for checking.

mod bundle;
mod elements;
mod gaussian;
mod operator;

pub use bundle::{build_bundle, BundleContent, MatrixBundle};
pub use elements::{
    hamiltonian_element, hamiltonian_moment_10, hamiltonian_moment_10_fd, kinetic, moment,
    overlap, overlap_moment_10, potential_me, sdot_right,
};
pub use operator::{GaussianPolynomialOperator, Hamiltonian, PolyTerm};
