use nalgebra::DMatrix;
use num_complex::Complex64;

use super::elements::{hamiltonian_from_ctx, overlap_moment_10, sdot_from_overlap};
use super::gaussian::{MomentSpec, PairContext};
use super::operator::Hamiltonian;
use crate::basis::{BasisSet, CenterRates};
use crate::error::{Error, Result};

/// All matrices over the basis needed by the amplitude equation and the center equations.
///
/// `s` carries electronic orthogonality: blocks between different states are zero, and so
/// are the cross-state blocks of `s10`. `h10` is also filled between coupled states.
#[derive(Debug, Clone)]
pub struct MatrixBundle {
    pub s: DMatrix<Complex64>,
    pub sdot_right: DMatrix<Complex64>,
    pub h: DMatrix<Complex64>,
    /// One matrix per degree of freedom: `<chi_i|(x - R_i)|chi_j>`.
    pub s10: Vec<DMatrix<Complex64>>,
    /// One matrix per degree of freedom: `<chi_i|(x - R_i) H|chi_j>`.
    pub h10: Vec<DMatrix<Complex64>>,
}

/// Which parts of the bundle to fill.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BundleContent {
    /// `S` and `H` only (energies, weights).
    Energy,
    /// Everything except `sdot_right`, which depends on the center rates.
    Full,
}

impl MatrixBundle {
    pub fn assemble(basis: &BasisSet, ham: &Hamiltonian, content: BundleContent) -> Result<Self> {
        check_shapes(basis, ham)?;
        let n = basis.len();
        let ndof = basis.ndof();
        let tbfs = basis.tbfs();
        let zero = Complex64::new(0.0, 0.0);
        let mut s = DMatrix::from_element(n, n, zero);
        let mut h = DMatrix::from_element(n, n, zero);
        let full = content == BundleContent::Full;
        let mut s10 = vec![DMatrix::from_element(n, n, zero); if full { ndof } else { 0 }];
        let mut h10 = s10.clone();

        for i in 0..n {
            for j in i..n {
                let (bra, ket) = (&tbfs[i], &tbfs[j]);
                let same = bra.state == ket.state;
                let has_coupling = ham.block(bra.state, ket.state).is_some();
                if !same && !has_coupling {
                    continue;
                }
                let ctx = PairContext::new(bra, ket)?;
                let hij = hamiltonian_from_ctx(&ctx, bra, ket, ham, None);
                if i == j {
                    s[(i, i)] = Complex64::new(1.0, 0.0);
                    h[(i, i)] = Complex64::new(hij.re, 0.0);
                } else {
                    h[(i, j)] = hij;
                    h[(j, i)] = hij.conj();
                    if same {
                        let sij = ctx.overlap();
                        s[(i, j)] = sij;
                        s[(j, i)] = sij.conj();
                    }
                }
                if !full {
                    continue;
                }
                // S10 and H10 are not Hermitian: (j, i) needs its own bra-centered moment.
                let rev = if i == j { None } else { Some(PairContext::new(ket, bra)?) };
                for rho in 0..ndof {
                    let moment = Some(MomentSpec { dof: rho, m: 1, n: 0 });
                    h10[rho][(i, j)] = hamiltonian_from_ctx(&ctx, bra, ket, ham, moment);
                    if let Some(rev) = &rev {
                        h10[rho][(j, i)] = hamiltonian_from_ctx(rev, ket, bra, ham, moment);
                        if same {
                            let sij = s[(i, j)];
                            s10[rho][(i, j)] = overlap_moment_10(sij, bra, ket, rho);
                            s10[rho][(j, i)] = overlap_moment_10(sij.conj(), ket, bra, rho);
                        }
                    }
                }
            }
        }
        Ok(Self {
            s,
            sdot_right: DMatrix::from_element(n, n, zero),
            h,
            s10,
            h10,
        })
    }

    /// Fills `sdot_right` from per-TBF center and phase rates.
    pub fn set_sdot_right(&mut self, basis: &BasisSet, rates: &[CenterRates]) -> Result<()> {
        if rates.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                got: rates.len(),
            });
        }
        let tbfs = basis.tbfs();
        let n = basis.len();
        for i in 0..n {
            for j in 0..n {
                self.sdot_right[(i, j)] = if tbfs[i].state == tbfs[j].state {
                    sdot_from_overlap(self.s[(i, j)], &tbfs[i], &tbfs[j], &rates[j])
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
        }
        Ok(())
    }

    /// Condition number (largest over smallest eigenvalue) of each same-state overlap block.
    pub fn overlap_condition(&self, basis: &BasisSet) -> Vec<f64> {
        (0..basis.n_states())
            .map(|state| {
                let idx = basis.indices_on_state(state);
                if idx.is_empty() {
                    return 1.0;
                }
                let block = self.s.select_rows(&idx).select_columns(&idx);
                let eig = block.symmetric_eigen().eigenvalues;
                let max = eig.iter().cloned().fold(f64::MIN, f64::max);
                let min = eig.iter().cloned().fold(f64::MAX, f64::min);
                if min <= 0.0 {
                    f64::INFINITY
                } else {
                    max / min
                }
            })
            .collect()
    }
}

/// Builds every block, including `sdot_right` from the supplied rates.
pub fn build_bundle(
    basis: &BasisSet,
    ham: &Hamiltonian,
    rates: &[CenterRates],
) -> Result<MatrixBundle> {
    let mut bundle = MatrixBundle::assemble(basis, ham, BundleContent::Full)?;
    bundle.set_sdot_right(basis, rates)?;
    Ok(bundle)
}

fn check_shapes(basis: &BasisSet, ham: &Hamiltonian) -> Result<()> {
    if ham.ndof() != basis.ndof() {
        return Err(Error::DimensionMismatch {
            expected: basis.ndof(),
            got: ham.ndof(),
        });
    }
    if ham.masses() != basis.masses() {
        return Err(Error::config("masses", "basis and Hamiltonian masses differ"));
    }
    if ham.n_states() < basis.n_states() {
        return Err(Error::config(
            "n_states",
            format!(
                "basis uses {} states but the Hamiltonian has {}",
                basis.n_states(),
                ham.n_states()
            ),
        ));
    }
    Ok(())
}
