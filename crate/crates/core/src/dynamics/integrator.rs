use num_complex::Complex64;

use super::eom::{
    amplitude_rhs, classical_derivatives, compute_z_with, conservation_residuals, quantum_derivatives,
    select_lambda, OverlapInverse, StateDerivative,
};
use super::{AutoMonitor, EomMode, LambdaPolicy, ZCoupling};
use crate::basis::{CenterRates, WavefunctionState};
use crate::error::{Error, Result};
use crate::integrals::{BundleContent, Hamiltonian, MatrixBundle};
use crate::observables;

/// What happened during one step.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    /// The accepted step used the quantum EOM.
    pub used_quantum: bool,
    /// Largest per-TBF conservation residual over the RK4 stages of a quantum step.
    pub max_residual: f64,
    /// Overlap eigenvalues filtered out, summed over stages.
    pub discarded: usize,
}

/// Fixed-step RK4 driver for one EOM mode.
#[derive(Debug, Clone)]
pub struct Propagator {
    ham: Hamiltonian,
    mode: EomMode,
    dt: f64,
    reference_energy: Option<f64>,
}

impl Propagator {
    pub fn new(ham: Hamiltonian, mode: EomMode, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::config("dt", "must be positive and finite"));
        }
        mode.validate()?;
        Ok(Self {
            ham,
            mode,
            dt,
            reference_energy: None,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mode(&self) -> &EomMode {
        &self.mode
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.ham
    }

    pub fn step(&mut self, state: &WavefunctionState) -> Result<(WavefunctionState, StepReport)> {
        if let EomMode::Auto { monitor, .. } = self.mode {
            if self.reference_energy.is_none() {
                self.reference_energy = match monitor {
                    AutoMonitor::QuantumEnergyDrift => Some(quantum_energy(state, &self.ham)?),
                    AutoMonitor::ClassicalEnergyDrift => Some(classical_total(state, &self.ham)?),
                    _ => None,
                };
            }
        }
        step_inner(state, self.dt, &self.mode, &self.ham, self.reference_energy)
    }
}

/// One RK4 step of `mode` from `state`.
///
/// In drift-monitored auto mode the reference energy is taken from `state`;
/// use [`Propagator`] to keep it fixed over a run.
pub fn step(
    state: &WavefunctionState,
    dt: f64,
    mode: &EomMode,
    ham: &Hamiltonian,
) -> Result<(WavefunctionState, StepReport)> {
    if !(dt > 0.0) {
        return Err(Error::config("dt", "must be positive"));
    }
    step_inner(state, dt, mode, ham, None)
}

fn step_inner(
    state: &WavefunctionState,
    dt: f64,
    mode: &EomMode,
    ham: &Hamiltonian,
    reference: Option<f64>,
) -> Result<(WavefunctionState, StepReport)> {
    match mode {
        EomMode::Classical => rk4(state, ham, None, dt),
        EomMode::Quantum { lambda, coupling } => rk4(state, ham, Some((lambda, *coupling)), dt),
        EomMode::Auto {
            delta,
            lambda,
            coupling,
            monitor,
        } => {
            let trial = rk4(state, ham, None, dt)?;
            let change = match monitor {
                AutoMonitor::ClassicalEnergyStep => {
                    classical_total(&trial.0, ham)? - classical_total(state, ham)?
                }
                AutoMonitor::QuantumEnergyStep => {
                    quantum_energy(&trial.0, ham)? - quantum_energy(state, ham)?
                }
                AutoMonitor::QuantumEnergyDrift => {
                    let r = match reference {
                        Some(r) => r,
                        None => quantum_energy(state, ham)?,
                    };
                    quantum_energy(&trial.0, ham)? - r
                }
                AutoMonitor::ClassicalEnergyDrift => {
                    let r = match reference {
                        Some(r) => r,
                        None => classical_total(state, ham)?,
                    };
                    classical_total(&trial.0, ham)? - r
                }
            };
            if change.abs() > *delta {
                rk4(state, ham, Some((lambda, *coupling)), dt)
            } else {
                Ok(trial)
            }
        }
    }
}

fn quantum_energy(state: &WavefunctionState, ham: &Hamiltonian) -> Result<f64> {
    let b = MatrixBundle::assemble(&state.basis, ham, BundleContent::Energy)?;
    observables::quantum_energy(state, &b)
}

fn classical_total(state: &WavefunctionState, ham: &Hamiltonian) -> Result<f64> {
    let b = MatrixBundle::assemble(&state.basis, ham, BundleContent::Energy)?;
    observables::classical_energy_total(state, ham, &b)
}

struct Stage {
    derivative: StateDerivative,
    max_residual: f64,
    discarded: usize,
}

fn evaluate(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    quantum: Option<(&LambdaPolicy, ZCoupling)>,
    dt: f64,
) -> Result<Stage> {
    let content = if quantum.is_some() {
        BundleContent::Full
    } else {
        BundleContent::Energy
    };
    let mut bundle = MatrixBundle::assemble(&state.basis, ham, content)?;
    let inv = OverlapInverse::new(&state.basis, &bundle)?;
    let (rates, max_residual) = match quantum {
        Some((policy, coupling)) => {
            let z = compute_z_with(state, &bundle, &inv, coupling);
            let lambdas = select_lambda(state, ham, &z, dt, policy);
            let rates = quantum_derivatives(state, ham, &z, &lambdas)?;
            let res = conservation_residuals(state, &z, &rates)
                .iter()
                .fold(0.0f64, |m, r| m.max(r.abs()));
            (rates, res)
        }
        None => (classical_derivatives(state, ham)?, 0.0),
    };
    bundle.set_sdot_right(&state.basis, &rates)?;
    let amplitudes = amplitude_rhs(state, &bundle, &inv);
    Ok(Stage {
        derivative: StateDerivative { rates, amplitudes },
        max_residual,
        discarded: inv.discarded,
    })
}

fn advance(state: &WavefunctionState, k: &StateDerivative, h: f64) -> WavefunctionState {
    let mut next = state.clone();
    for (tbf, r) in next.basis.tbfs_mut().iter_mut().zip(&k.rates) {
        for rho in 0..r.position.len() {
            tbf.position[rho] += h * r.position[rho];
            tbf.momentum[rho] += h * r.momentum[rho];
        }
        tbf.phase += h * r.phase;
    }
    for (c, d) in next.amplitudes.0.iter_mut().zip(&k.amplitudes) {
        *c += d * h;
    }
    next
}

fn combine(k: [&StateDerivative; 4]) -> StateDerivative {
    let w = [1.0, 2.0, 2.0, 1.0];
    let n = k[0].rates.len();
    let ndof = k[0].rates.first().map_or(0, |r| r.position.len());
    let mut rates = vec![CenterRates::zero(ndof); n];
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); k[0].amplitudes.len()];
    for (s, ks) in k.iter().enumerate() {
        for (acc, r) in rates.iter_mut().zip(&ks.rates) {
            for rho in 0..ndof {
                acc.position[rho] += w[s] * r.position[rho];
                acc.momentum[rho] += w[s] * r.momentum[rho];
            }
            acc.phase += w[s] * r.phase;
        }
        for (acc, d) in amplitudes.iter_mut().zip(&ks.amplitudes) {
            *acc += d * w[s];
        }
    }
    StateDerivative { rates, amplitudes }
}

fn rk4(
    state: &WavefunctionState,
    ham: &Hamiltonian,
    quantum: Option<(&LambdaPolicy, ZCoupling)>,
    dt: f64,
) -> Result<(WavefunctionState, StepReport)> {
    let k1 = evaluate(state, ham, quantum, dt)?;
    let k2 = evaluate(&advance(state, &k1.derivative, 0.5 * dt), ham, quantum, dt)?;
    let k3 = evaluate(&advance(state, &k2.derivative, 0.5 * dt), ham, quantum, dt)?;
    let k4 = evaluate(&advance(state, &k3.derivative, dt), ham, quantum, dt)?;
    let stages = [&k1, &k2, &k3, &k4];
    let sum = combine(stages.map(|s| &s.derivative));
    let mut next = advance(state, &sum, dt / 6.0);
    next.time = state.time + dt;
    if !next.is_finite() {
        return Err(Error::Propagation {
            time: state.time,
            reason: "state became non-finite".into(),
        });
    }
    let report = StepReport {
        used_quantum: quantum.is_some(),
        max_residual: stages.iter().fold(0.0f64, |m, s| m.max(s.max_residual)),
        discarded: stages.iter().map(|s| s.discarded).sum(),
    };
    Ok((next, report))
}
