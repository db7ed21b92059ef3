//! Center and amplitude equations of motion and their time integration.
//!
//! Two center EOMs are available. The classical one moves each TBF along Hamilton's
//! equations on its own diabatic surface. The quantum one sets
//!
//! ```text
//! dR_i/dt = 2 lambda_i Im Z_i        dP_i/dt = -4 alpha lambda_i Re Z_i
//! ```
//!
//! which makes the basis motion contribute nothing to the change of the single-surface
//! quantum energy. Amplitudes always follow the exact equation in the moving basis.

mod eom;
mod integrator;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use eom::{
    amplitude_rhs, classical_derivatives, compute_z, compute_z_with, conservation_residual,
    conservation_residuals, quantum_derivatives, select_lambda, OverlapInverse, StateDerivative,
    ZVector,
};
pub use integrator::{step, Propagator, StepReport};

/// How `lambda` is chosen for the quantum EOM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum LambdaPolicy {
    FixedOne,
    /// Minimizes the predicted one-step classical-energy change plus
    /// `w * sum_i (lambda_i - 1)^2`, with `w = penalty_scale * (dt * max_i |g_i|)^2`.
    ErrorFunctionMinimized {
        penalty_scale: f64,
        bounds: (f64, f64),
        /// One lambda for every TBF instead of one per TBF.
        shared: bool,
    },
}

impl Default for LambdaPolicy {
    fn default() -> Self {
        LambdaPolicy::ErrorFunctionMinimized {
            penalty_scale: 1e-2,
            bounds: (0.2, 5.0),
            shared: false,
        }
    }
}

/// Quantity watched by the automatic switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoMonitor {
    /// Change of the weighted total classical energy over the trial step.
    #[default]
    ClassicalEnergyStep,
    /// Change of the quantum energy over the trial step.
    QuantumEnergyStep,
    /// Deviation of the quantum energy from its value at the start of the run.
    QuantumEnergyDrift,
    /// Deviation of the weighted total classical energy from its value at the start of
    /// the run.
    ClassicalEnergyDrift,
}

/// Which amplitudes enter `Z_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZCoupling {
    /// Only TBFs on TBF `i`'s own electronic state; interstate couplings are ignored.
    #[default]
    SameState,
    /// Every TBF, through the interstate blocks of `H` and `H10`. This makes the
    /// residual an exact expression for the energy change on coupled surfaces too.
    AllStates,
}

/// Center equations of motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EomMode {
    Classical,
    Quantum {
        lambda: LambdaPolicy,
        coupling: ZCoupling,
    },
    /// Classical trial step, redone from the same time with the quantum EOM whenever the
    /// monitored change exceeds `delta`.
    Auto {
        delta: f64,
        lambda: LambdaPolicy,
        coupling: ZCoupling,
        monitor: AutoMonitor,
    },
}

impl EomMode {
    /// Quantum EOM with the default lambda policy and same-state `Z`.
    pub fn quantum() -> Self {
        EomMode::Quantum {
            lambda: LambdaPolicy::default(),
            coupling: ZCoupling::SameState,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EomMode::Classical => "classical",
            EomMode::Quantum { .. } => "quantum",
            EomMode::Auto { .. } => "auto",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            EomMode::Classical => Ok(()),
            EomMode::Quantum { lambda, .. } => lambda.validate(),
            EomMode::Auto { delta, lambda, .. } => {
                if !(*delta > 0.0) {
                    return Err(Error::config("delta", "must be positive"));
                }
                lambda.validate()
            }
        }
    }
}

impl LambdaPolicy {
    pub fn validate(&self) -> Result<()> {
        if let LambdaPolicy::ErrorFunctionMinimized {
            penalty_scale,
            bounds: (lo, hi),
            ..
        } = *self
        {
            if !(penalty_scale > 0.0) {
                return Err(Error::config("lambda.penalty_scale", "must be positive"));
            }
            if !(lo >= 0.0 && lo <= 1.0 && hi >= 1.0 && hi.is_finite()) {
                return Err(Error::config(
                    "lambda.bounds",
                    "must satisfy 0 <= lower <= 1 <= upper < inf",
                ));
            }
        }
        Ok(())
    }
}
