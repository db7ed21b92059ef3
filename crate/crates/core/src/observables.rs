//! Energies, weights and populations of a wavefunction snapshot.

use nalgebra::DVector;
use crate::basis::WavefunctionState;
use crate::dynamics::{
    classical_derivatives, compute_z_with, conservation_residual, quantum_derivatives,
    OverlapInverse, ZCoupling,
};
use crate::error::{Error, Result};
use crate::integrals::{BundleContent, Hamiltonian, MatrixBundle};

/// `C^dagger S C`.
pub fn norm(state: &WavefunctionState, bundle: &MatrixBundle) -> f64 {
    let c = DVector::from_column_slice(state.amplitudes.as_slice());
    (c.adjoint() * &bundle.s * &c)[(0, 0)].re
}

/// `Re(C^dagger H C) / Re(C^dagger S C)`.
pub fn quantum_energy(state: &WavefunctionState, bundle: &MatrixBundle) -> Result<f64> {
    let c = DVector::from_column_slice(state.amplitudes.as_slice());
    let n = norm(state, bundle);
    if !(n > 0.0) {
        return Err(Error::ZeroNorm);
    }
    Ok((c.adjoint() * &bundle.h * &c)[(0, 0)].re / n)
}

/// `sum_rho P_rho^2 / 2 m_rho + V_I(R)` for each TBF.
pub fn classical_energies(state: &WavefunctionState, ham: &Hamiltonian) -> Vec<f64> {
    let masses = state.basis.masses();
    state
        .basis
        .tbfs()
        .iter()
        .map(|t| {
            let kin: f64 = (0..t.ndof()).map(|r| t.momentum[r].powi(2) / (2.0 * masses[r])).sum();
            kin + ham.potential(t.state, t.state, &t.position)
        })
        .collect()
}

/// Classical energies averaged with Mulliken weights.
pub fn classical_energy_total(state: &WavefunctionState, ham: &Hamiltonian, bundle: &MatrixBundle) -> Result<f64> {
    let w = weights(state, bundle)?;
    Ok(classical_energies(state, ham)
        .iter()
        .zip(&w.mulliken)
        .map(|(e, w)| e * w)
        .sum())
}

/// TBF weights under two definitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    /// `|c_i|^2 / sum_j |c_j|^2`.
    pub raw: Vec<f64>,
    /// `Re(c_i^* (S C)_i) / C^dagger S C`; sums to one.
    pub mulliken: Vec<f64>,
}

pub fn weights(state: &WavefunctionState, bundle: &MatrixBundle) -> Result<Weights> {
    let c = state.amplitudes.as_slice();
    let total: f64 = c.iter().map(|v| v.norm_sqr()).sum();
    if !(total > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let sc = &bundle.s * DVector::from_column_slice(c);
    let n = norm(state, bundle);
    Ok(Weights {
        raw: c.iter().map(|v| v.norm_sqr() / total).collect(),
        mulliken: c.iter().zip(sc.iter()).map(|(ci, s)| (ci.conj() * s).re / n).collect(),
    })
}

/// Sum of Mulliken weights on each electronic state.
pub fn populations(state: &WavefunctionState, mulliken: &[f64]) -> Vec<f64> {
    let mut pops = vec![0.0; state.basis.n_states()];
    for (t, w) in state.basis.tbfs().iter().zip(mulliken) {
        pops[t.state] += w;
    }
    pops
}

/// `sum_t sum_i |w_i(t + 1) - w_i(t)|` over consecutive frames, Mulliken or raw weights.
pub fn weight_total_variation(frames: &[FrameRecord], mulliken: bool) -> f64 {
    let pick = |f: &FrameRecord| -> Vec<f64> {
        if mulliken {
            f.weights.mulliken.clone()
        } else {
            f.weights.raw.clone()
        }
    };
    frames
        .windows(2)
        .map(|w| {
            pick(&w[0])
                .iter()
                .zip(pick(&w[1]))
                .map(|(a, b)| (b - a).abs())
                .sum::<f64>()
        })
        .sum()
}

/// `max_t |E_QM(t) - E_QM(0)| / |E_QM(0)|`.
pub fn relative_energy_drift(frames: &[FrameRecord]) -> f64 {
    let Some(first) = frames.first() else { return 0.0 };
    let e0 = first.quantum_energy;
    frames
        .iter()
        .map(|f| (f.quantum_energy - e0).abs())
        .fold(0.0, f64::max)
        / e0.abs()
}

/// `max_t |C^dagger S C - 1|`.
pub fn max_norm_error(frames: &[FrameRecord]) -> f64 {
    frames.iter().map(|f| (f.norm - 1.0).abs()).fold(0.0, f64::max)
}

/// `sum_t sum_i (E_i^cl(t) - E_i^cl(0))^2` over the recorded frames.
pub fn classical_energy_fluctuation(frames: &[FrameRecord]) -> f64 {
    let Some(first) = frames.first() else { return 0.0 };
    frames
        .iter()
        .map(|f| {
            f.classical_energies
                .iter()
                .zip(&first.classical_energies)
                .map(|(e, e0)| (e - e0).powi(2))
                .sum::<f64>()
        })
        .sum()
}

/// `sum_t (E_cl_total(t) - E_cl_total(0))^2` over the recorded frames.
pub fn total_classical_fluctuation(frames: &[FrameRecord]) -> f64 {
    let Some(first) = frames.first() else { return 0.0 };
    frames
        .iter()
        .map(|f| (f.classical_energy_total - first.classical_energy_total).powi(2))
        .sum()
}

/// Everything written for one recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub time: f64,
    pub quantum_energy: f64,
    pub classical_energy_total: f64,
    pub norm: f64,
    /// Summed conservation residual of the center rates that produced this frame.
    pub residual: f64,
    pub used_quantum: bool,
    pub populations: Vec<f64>,
    pub classical_energies: Vec<f64>,
    pub weights: Weights,
    pub positions: Vec<Vec<f64>>,
    pub momenta: Vec<Vec<f64>>,
}

impl FrameRecord {
    /// Snapshot of `state`. The residual is evaluated for the center rates of the EOM
    /// that produced the frame, with lambda = 1 for the quantum EOM.
    pub fn capture(
        state: &WavefunctionState,
        ham: &Hamiltonian,
        coupling: ZCoupling,
        used_quantum: bool,
    ) -> Result<Self> {
        let bundle = MatrixBundle::assemble(&state.basis, ham, BundleContent::Full)?;
        let w = weights(state, &bundle)?;
        let e_cl = classical_energies(state, ham);
        let inv = OverlapInverse::new(&state.basis, &bundle)?;
        let z = compute_z_with(state, &bundle, &inv, coupling);
        let rates = if used_quantum {
            quantum_derivatives(state, ham, &z, &vec![1.0; state.len()])?
        } else {
            classical_derivatives(state, ham)?
        };
        let residual = conservation_residual(state, &z, &rates);
        Ok(Self {
            time: state.time,
            quantum_energy: quantum_energy(state, &bundle)?,
            classical_energy_total: e_cl.iter().zip(&w.mulliken).map(|(e, w)| e * w).sum(),
            norm: norm(state, &bundle),
            residual,
            used_quantum,
            populations: populations(state, &w.mulliken),
            classical_energies: e_cl,
            weights: w,
            positions: state.basis.tbfs().iter().map(|t| t.position.clone()).collect(),
            momenta: state.basis.tbfs().iter().map(|t| t.momentum.clone()).collect(),
        })
    }
}
