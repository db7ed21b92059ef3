//! Builds a Hamiltonian from Gaussian-enveloped polynomial terms (a harmonic well with a
//! Gaussian bump) and propagates two TBFs with the quantum EOM step by step.

use std::sync::Arc;

use num_complex::Complex64;
use qeom::dynamics::{EomMode, Propagator};
use qeom::integrals::{BundleContent, MatrixBundle};
use qeom::observables::quantum_energy;
use qeom::{AmplitudeVector, BasisSet, FrozenGaussian, GaussianPolynomialOperator, Hamiltonian, PolyTerm, WavefunctionState};

fn main() -> qeom::Result<()> {
    let mass = 1.0;
    let v = GaussianPolynomialOperator::new(
        1,
        vec![
            PolyTerm::monomial(0.5, vec![2], vec![0.0]),
            PolyTerm::enveloped(0.4, vec![0], vec![2.0], vec![0.0]),
        ],
    )?;
    let ham = Hamiltonian::new(vec![mass], 1)?.with_block(0, 0, Arc::new(v))?;
    let tbfs = vec![
        FrozenGaussian::new(0, vec![-1.5], vec![0.5], 0.0, vec![0.5])?,
        FrozenGaussian::new(0, vec![-1.0], vec![1.0], 0.0, vec![0.5])?,
    ];
    let basis = BasisSet::new(tbfs, vec![mass], 1)?;
    let mut state = WavefunctionState::new(
        basis,
        AmplitudeVector(vec![Complex64::new(0.7, 0.0), Complex64::new(0.4, 0.0)]),
        0.0,
    )?;
    let mut prop = Propagator::new(ham.clone(), EomMode::quantum(), 0.01)?;
    for k in 0..=1000 {
        if k % 200 == 0 {
            let b = MatrixBundle::assemble(&state.basis, &ham, BundleContent::Energy)?;
            let r: Vec<f64> = state.basis.tbfs().iter().map(|t| t.position[0]).collect();
            println!("t {:>5.2}  E_QM {:.12}  R {r:+.4?}", state.time, quantum_energy(&state, &b)?);
        }
        state = prop.step(&state)?.0;
    }
    Ok(())
}
