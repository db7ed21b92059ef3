//! Initial conditions: Wigner sampling of TBF centers and projection of the initial
//! wavepacket onto the sampled basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::basis::{AmplitudeVector, BasisSet, FrozenGaussian, WavefunctionState};
use crate::error::{Error, Result};
use crate::integrals::overlap;
use crate::linalg::{regularized_inverse, DEFAULT_RCOND};

/// Gaussian initial wavepacket on one electronic state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialWavepacket {
    pub state: usize,
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
    pub widths: Vec<f64>,
}

impl InitialWavepacket {
    /// The wavepacket as a TBF with zero phase.
    pub fn as_tbf(&self) -> Result<FrozenGaussian> {
        FrozenGaussian::new(
            self.state,
            self.position.clone(),
            self.momentum.clone(),
            0.0,
            self.widths.clone(),
        )
    }
}

/// Phase-space center of one sampled TBF.
#[derive(Debug, Clone, PartialEq)]
pub struct Center {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
}

/// `n` centers: the first exactly at the wavepacket center, the rest drawn from its Wigner
/// distribution, `sigma_R = 1 / (2 sqrt(alpha))` and `sigma_P = sqrt(alpha)` per DOF.
pub fn wigner_sample(wp: &InitialWavepacket, n: usize, seed: u64) -> Result<Vec<Center>> {
    wp.as_tbf()?;
    if n == 0 {
        return Err(Error::config("n_tbfs", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let std = Normal::new(0.0, 1.0).expect("unit normal");
    let mut out = vec![Center {
        position: wp.position.clone(),
        momentum: wp.momentum.clone(),
    }];
    for _ in 1..n {
        let mut position = Vec::with_capacity(wp.widths.len());
        let mut momentum = Vec::with_capacity(wp.widths.len());
        for (rho, &a) in wp.widths.iter().enumerate() {
            position.push(wp.position[rho] + std.sample(&mut rng) / (2.0 * a.sqrt()));
            momentum.push(wp.momentum[rho] + std.sample(&mut rng) * a.sqrt());
        }
        out.push(Center { position, momentum });
    }
    Ok(out)
}

/// TBFs at the given centers with the wavepacket's widths.
///
/// With `all_states`, every center also carries a TBF on each other electronic state,
/// so population can flow there without spawning. TBFs are ordered by state, then center.
pub fn build_basis(
    wp: &InitialWavepacket,
    centers: &[Center],
    masses: Vec<f64>,
    n_states: usize,
    all_states: bool,
) -> Result<BasisSet> {
    let states: Vec<usize> = if all_states {
        (0..n_states).collect()
    } else {
        vec![wp.state]
    };
    let mut tbfs = Vec::with_capacity(states.len() * centers.len());
    for &state in &states {
        for c in centers {
            tbfs.push(FrozenGaussian::new(
                state,
                c.position.clone(),
                c.momentum.clone(),
                0.0,
                wp.widths.clone(),
            )?);
        }
    }
    BasisSet::new(tbfs, masses, n_states)
}

/// Projected amplitudes and the norm captured before renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub amplitudes: AmplitudeVector,
    pub captured_norm: f64,
}

/// Solves `S C = b`, `b_i = <chi_i|psi_0>`, with the regularized same-state inverse and
/// rescales so that `C^dagger S C = 1`.
pub fn project_amplitudes(basis: &BasisSet, wp: &InitialWavepacket) -> Result<Projection> {
    let target = wp.as_tbf()?;
    let n = basis.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let idx = basis.indices_on_state(wp.state);
    let tbfs = basis.tbfs();
    let b = idx
        .iter()
        .map(|&i| overlap(&tbfs[i], &target))
        .collect::<Result<Vec<_>>>()?;
    if b.iter().all(|v| v.norm() == 0.0) {
        return Err(Error::EmptyProjection);
    }
    let mut s = DMatrix::from_element(idx.len(), idx.len(), Complex64::new(0.0, 0.0));
    for (a, &i) in idx.iter().enumerate() {
        s[(a, a)] = Complex64::new(1.0, 0.0);
        for (k, &j) in idx.iter().enumerate().skip(a + 1) {
            let v = overlap(&tbfs[i], &tbfs[j])?;
            s[(a, k)] = v;
            s[(k, a)] = v.conj();
        }
    }
    let inv = regularized_inverse(&s, DEFAULT_RCOND, &idx)?;
    let bv = DVector::from_vec(b);
    let mut cb = &inv.inverse * &bv;
    // one step of iterative refinement
    cb += &inv.inverse * (&bv - &s * &cb);
    let captured = (cb.adjoint() * &s * &cb)[(0, 0)].re;
    if !(captured > 0.0) {
        return Err(Error::EmptyProjection);
    }
    let scale = 1.0 / captured.sqrt();
    for (k, &i) in idx.iter().enumerate() {
        c[i] = cb[k] * scale;
    }
    Ok(Projection {
        amplitudes: AmplitudeVector(c),
        captured_norm: captured,
    })
}

/// Sampled, projected initial state at time zero.
pub fn initial_state(
    wp: &InitialWavepacket,
    n: usize,
    seed: u64,
    masses: Vec<f64>,
    n_states: usize,
    all_states: bool,
) -> Result<WavefunctionState> {
    let centers = wigner_sample(wp, n, seed)?;
    let basis = build_basis(wp, &centers, masses, n_states, all_states)?;
    let proj = project_amplitudes(&basis, wp)?;
    WavefunctionState::new(basis, proj.amplitudes, 0.0)
}
