use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{LambdaPolicy, ZCoupling};
use crate::basis::{BasisSet, CenterRates, WavefunctionState};
use crate::error::{Error, Result};
use crate::integrals::{potential_me, Hamiltonian, MatrixBundle};
use crate::linalg::{regularized_inverse, DEFAULT_RCOND};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-TBF, per-DOF values `Z_i,rho`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZVector(pub Vec<Vec<Complex64>>);

impl ZVector {
    pub fn get(&self, i: usize, rho: usize) -> Complex64 {
        self.0[i][rho]
    }
}

/// Time derivative of the full propagated state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub rates: Vec<CenterRates>,
    pub amplitudes: Vec<Complex64>,
}

/// Regularized inverse of each same-state overlap block.
#[derive(Debug, Clone)]
pub struct OverlapInverse {
    blocks: Vec<(Vec<usize>, DMatrix<Complex64>)>,
    pub discarded: usize,
}

impl OverlapInverse {
    pub fn new(basis: &BasisSet, bundle: &MatrixBundle) -> Result<Self> {
        Self::with_rcond(basis, bundle, DEFAULT_RCOND)
    }

    pub fn with_rcond(basis: &BasisSet, bundle: &MatrixBundle, rcond: f64) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut discarded = 0;
        for state in 0..basis.n_states() {
            let idx = basis.indices_on_state(state);
            if idx.is_empty() {
                continue;
            }
            let block = bundle.s.select_rows(&idx).select_columns(&idx);
            let inv = regularized_inverse(&block, rcond, &idx)?;
            discarded += inv.discarded;
            blocks.push((idx, inv.inverse));
        }
        Ok(Self { blocks, discarded })
    }

    /// Applies the block inverse to a full-length vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (idx, inv) in &self.blocks {
            let sub = DVector::from_iterator(idx.len(), idx.iter().map(|&i| v[i]));
            let r = inv * sub;
            for (k, &i) in idx.iter().enumerate() {
                out[i] = r[k];
            }
        }
        out
    }

    pub(crate) fn blocks(&self) -> &[(Vec<usize>, DMatrix<Complex64>)] {
        &self.blocks
    }
}

/// `Z_i,rho = sum_j c_i^* (H10_rho - S10_rho S^-1 H)_ij c_j`, every index restricted to
/// TBF `i`'s electronic state.
pub fn compute_z(state: &WavefunctionState, bundle: &MatrixBundle, inv: &OverlapInverse) -> ZVector {
    compute_z_with(state, bundle, inv, ZCoupling::SameState)
}

/// [`compute_z`] with a choice of which `j` enter the sum. `S^-1` is always the same-state
/// block inverse.
pub fn compute_z_with(
    state: &WavefunctionState,
    bundle: &MatrixBundle,
    inv: &OverlapInverse,
    coupling: ZCoupling,
) -> ZVector {
    let n = state.len();
    let ndof = state.basis.ndof();
    let c = state.amplitudes.as_slice();
    let all: Vec<usize> = (0..n).collect();
    let mut z = vec![vec![Complex64::new(0.0, 0.0); ndof]; n];
    for (idx, sinv) in inv.blocks() {
        let cols = match coupling {
            ZCoupling::SameState => idx,
            ZCoupling::AllStates => &all,
        };
        let h = bundle.h.select_rows(idx).select_columns(cols);
        let cb = DVector::from_iterator(cols.len(), cols.iter().map(|&i| c[i]));
        let hc = &h * &cb;
        let shc = sinv * &hc;
        for rho in 0..ndof {
            let h10 = bundle.h10[rho].select_rows(idx).select_columns(cols);
            let s10 = bundle.s10[rho].select_rows(idx).select_columns(idx);
            let v = &h10 * &cb - &s10 * &shc;
            for (k, &i) in idx.iter().enumerate() {
                z[i][rho] = c[i].conj() * v[k];
            }
        }
    }
    ZVector(z)
}

fn phase_rate(state: &WavefunctionState, ham: &Hamiltonian, i: usize) -> Result<f64> {
    let tbf = &state.basis.tbfs()[i];
    let masses = state.basis.masses();
    let kinetic: f64 = (0..tbf.ndof())
        .map(|r| tbf.momentum[r] * tbf.momentum[r] / (2.0 * masses[r]))
        .sum();
    let v = match ham.block(tbf.state, tbf.state) {
        Some(op) => potential_me(tbf, tbf, op)?.re,
        None => 0.0,
    };
    Ok(kinetic - v)
}

/// Hamilton's equations at each center on its own surface.
pub fn classical_derivatives(state: &WavefunctionState, ham: &Hamiltonian) -> Result<Vec<CenterRates>> {
    let masses = state.basis.masses();
    let mut out = Vec::with_capacity(state.len());
    for (i, tbf) in state.basis.tbfs().iter().enumerate() {
        let force = ham.gradient(tbf.state, &tbf.position);
        out.push(CenterRates {
            position: (0..tbf.ndof()).map(|r| tbf.momentum[r] / masses[r]).collect(),
            momentum: force.iter().map(|g| -g).collect(),
            phase: phase_rate(state, ham, i)?,
        });
    }
    Ok(out)
}

/// `dR = 2 lambda Im Z`, `dP = -4 alpha lambda Re Z`.
pub fn quantum_derivatives(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    z: &ZVector,
    lambdas: &[f64],
) -> Result<Vec<CenterRates>> {
    if lambdas.len() != state.len() {
        return Err(Error::DimensionMismatch {
            expected: state.len(),
            got: lambdas.len(),
        });
    }
    let widths = state.basis.widths();
    let mut out = Vec::with_capacity(state.len());
    for (i, &lambda) in lambdas.iter().enumerate() {
        out.push(CenterRates {
            position: (0..widths.len()).map(|r| 2.0 * lambda * z.get(i, r).im).collect(),
            momentum: (0..widths.len())
                .map(|r| -4.0 * widths[r] * lambda * z.get(i, r).re)
                .collect(),
            phase: phase_rate(state, ham, i)?,
        });
    }
    Ok(out)
}

/// Per-TBF `sum_rho (4 alpha dR Re Z + 2 dP Im Z)`.
pub fn conservation_residuals(state: &WavefunctionState, z: &ZVector, rates: &[CenterRates]) -> Vec<f64> {
    let widths = state.basis.widths();
    rates
        .iter()
        .enumerate()
        .map(|(i, r)| {
            (0..widths.len())
                .map(|rho| {
                    let zi = z.get(i, rho);
                    4.0 * widths[rho] * r.position[rho] * zi.re + 2.0 * r.momentum[rho] * zi.im
                })
                .sum()
        })
        .collect()
}

/// Sum of the per-TBF residuals.
pub fn conservation_residual(state: &WavefunctionState, z: &ZVector, rates: &[CenterRates]) -> f64 {
    conservation_residuals(state, z, rates).iter().sum()
}

/// Lambda per TBF from the penalized one-step classical-energy error function.
pub fn select_lambda(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    z: &ZVector,
    dt: f64,
    policy: &LambdaPolicy,
) -> Vec<f64> {
    let n = state.len();
    let (scale, (lo, hi), shared) = match *policy {
        LambdaPolicy::FixedOne => return vec![1.0; n],
        LambdaPolicy::ErrorFunctionMinimized {
            penalty_scale,
            bounds,
            shared,
        } => (penalty_scale, bounds, shared),
    };
    let masses = state.basis.masses();
    let widths = state.basis.widths();
    // dE_i/dt per unit lambda
    let g: Vec<f64> = state
        .basis
        .tbfs()
        .iter()
        .enumerate()
        .map(|(i, tbf)| {
            let grad = ham.gradient(tbf.state, &tbf.position);
            (0..tbf.ndof())
                .map(|r| {
                    let zi = z.get(i, r);
                    grad[r] * 2.0 * zi.im + tbf.momentum[r] / masses[r] * (-4.0 * widths[r] * zi.re)
                })
                .sum()
        })
        .collect();
    let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(gmax > 0.0) || !gmax.is_finite() {
        return vec![1.0; n];
    }
    let w = scale * (dt * gmax).powi(2);
    if shared {
        let sum_sq: f64 = g.iter().map(|v| (dt * v).powi(2)).sum();
        let nw = w * n as f64;
        return vec![(nw / (nw + sum_sq)).clamp(lo, hi); n];
    }
    g.iter()
        .map(|gi| (w / (w + (dt * gi).powi(2))).clamp(lo, hi))
        .collect()
}

/// `dC^I/dt = -i (S^II)^-1 [(H^II - i Sdot^II) C^I + sum_J!=I H^IJ C^J]`.
///
/// `bundle.sdot_right` must already hold the current center rates.
pub fn amplitude_rhs(state: &WavefunctionState, bundle: &MatrixBundle, inv: &OverlapInverse) -> Vec<Complex64> {
    let c = DVector::from_column_slice(state.amplitudes.as_slice());
    let y = (&bundle.h - &bundle.sdot_right * I) * c;
    inv.apply(y.as_slice()).into_iter().map(|v| -I * v).collect()
}
