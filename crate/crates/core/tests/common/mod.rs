#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use qeom::basis::{AmplitudeVector, BasisSet, FrozenGaussian, WavefunctionState};
use qeom::integrals::{GaussianPolynomialOperator, Hamiltonian, PolyTerm};
use qeom::potentials::{DoubleWellParams, FerrettiParams};
use qeom::integrals::{hamiltonian_element, hamiltonian_moment_10, kinetic, moment, overlap, potential_me};
use qeom::quadrature::{oracle_close, GaussHermite, Oracle};

pub const PROTON: f64 = 1836.152_673_43;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Two TBFs with common widths, the ket displaced from the bra by about one width.
pub fn random_pair(
    rng: &mut ChaCha8Rng,
    centre: &[(f64, f64)],
    widths: &[(f64, f64)],
    momentum: f64,
    states: (usize, usize),
) -> (FrozenGaussian, FrozenGaussian) {
    let ndof = centre.len();
    let alpha: Vec<f64> = widths.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect();
    let mut rb = vec![0.0; ndof];
    let mut rk = vec![0.0; ndof];
    let mut pb = vec![0.0; ndof];
    let mut pk = vec![0.0; ndof];
    for d in 0..ndof {
        let s = 1.0 / alpha[d].sqrt();
        rb[d] = rng.random_range(centre[d].0..centre[d].1);
        rk[d] = rb[d] + rng.random_range(-1.5..1.5) * s;
        pb[d] = rng.random_range(-momentum..momentum);
        pk[d] = pb[d] + rng.random_range(-1.5..1.5) * alpha[d].sqrt();
    }
    let gb = rng.random_range(-3.0..3.0);
    let gk = rng.random_range(-3.0..3.0);
    (
        FrozenGaussian::new(states.0, rb, pb, gb, alpha.clone()).unwrap(),
        FrozenGaussian::new(states.1, rk, pk, gk, alpha).unwrap(),
    )
}

pub fn double_well_pair(rng: &mut ChaCha8Rng) -> (FrozenGaussian, FrozenGaussian) {
    random_pair(rng, &[(-1.5, 1.5)], &[(1.0, 20.0)], 10.0, (0, 0))
}

pub fn ferretti_pair(rng: &mut ChaCha8Rng, states: (usize, usize)) -> (FrozenGaussian, FrozenGaussian) {
    random_pair(rng, &[(1.0, 5.0), (-0.6, 0.6)], &[(5.0, 40.0), (5.0, 40.0)], 20.0, states)
}

pub fn double_well_default() -> Hamiltonian {
    qeom::potentials::double_well(&DoubleWellParams::default()).unwrap()
}

pub fn ferretti_default() -> Hamiltonian {
    qeom::potentials::ferretti(&FerrettiParams::default()).unwrap()
}

pub fn harmonic(k: f64, m: f64) -> Hamiltonian {
    let op = GaussianPolynomialOperator::new(1, vec![PolyTerm::monomial(0.5 * k, vec![2], vec![0.0])]).unwrap();
    Hamiltonian::new(vec![m], 1).unwrap().with_block(0, 0, Arc::new(op)).unwrap()
}

pub fn single(tbf: FrozenGaussian, masses: Vec<f64>, n_states: usize) -> WavefunctionState {
    let basis = BasisSet::new(vec![tbf], masses, n_states).unwrap();
    WavefunctionState::new(basis, AmplitudeVector(vec![c(1.0, 0.0)]), 0.0).unwrap()
}

pub fn state(tbfs: Vec<FrozenGaussian>, amps: Vec<Complex64>, masses: Vec<f64>, n_states: usize) -> WavefunctionState {
    let basis = BasisSet::new(tbfs, masses, n_states).unwrap();
    WavefunctionState::new(basis, AmplitudeVector(amps), 0.0).unwrap()
}

pub fn dw_tbf(r: f64, p: f64, alpha: f64) -> FrozenGaussian {
    FrozenGaussian::new(0, vec![r], vec![p], 0.0, vec![alpha]).unwrap()
}

/// Gaussian average of the double-well force over `|chi|^2`.
pub fn averaged_force(p: &DoubleWellParams, r: f64, alpha: f64, gh: &GaussHermite) -> f64 {
    let s = (2.0 * alpha).sqrt();
    gh.nodes
        .iter()
        .zip(&gh.weights)
        .map(|(&t, &w)| {
            let u = r + t / s - p.r0;
            w * (4.0 * p.d * u.powi(3) - 2.0 * p.c * u)
        })
        .sum::<f64>()
        / std::f64::consts::PI.sqrt()
}

/// Element kind, pair index, closed form and quadrature for every pair that misses the
/// oracle tolerance.
pub fn oracle_mismatches(
    pairs: &[(FrozenGaussian, FrozenGaussian)],
    ham: &Hamiltonian,
) -> Vec<(String, usize, Complex64, Complex64)> {
    let q = Oracle::default();
    let mut bad = Vec::new();
    let mut check = |label: &str, k: usize, closed: Complex64, oracle: Complex64| {
        if !oracle_close(closed, oracle) {
            bad.push((label.to_string(), k, closed, oracle));
        }
    };
    for (k, (b, t)) in pairs.iter().enumerate() {
        check("overlap", k, overlap(b, t).unwrap(), q.overlap(b, t));
        check("kinetic", k, kinetic(b, t, ham.masses()).unwrap(), q.kinetic(b, t, ham.masses()));
        check("hamiltonian", k, hamiltonian_element(b, t, ham).unwrap(), q.hamiltonian(b, t, ham));
        for d in 0..ham.ndof() {
            check("moment 1,0", k, moment(b, t, None, 1, 0, d).unwrap(), q.moment(b, t, 1, 0, d));
            check("moment 0,1", k, moment(b, t, None, 0, 1, d).unwrap(), q.moment(b, t, 0, 1, d));
            check("h10", k, hamiltonian_moment_10(b, t, ham, d).unwrap(), q.hamiltonian_moment_10(b, t, ham, d));
        }
        for i in 0..ham.n_states() {
            for j in 0..ham.n_states() {
                if let Some(op) = ham.block(i, j) {
                    check(&format!("V{i}{j}"), k, potential_me(b, t, op).unwrap(), q.operator(b, t, op, None));
                }
            }
        }
    }
    bad
}
