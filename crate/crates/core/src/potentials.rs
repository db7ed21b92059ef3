//! Model Hamiltonians: a one-dimensional quartic double well and the two-state,
//! two-mode Ferretti conical-intersection model in the diabatic representation.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::{GaussianPolynomialOperator, Hamiltonian, PolyTerm};

/// `V(R) = v0 + d (R - r0)^4 - c (R - r0)^2`.
///
/// The defaults are not tied to any particular molecule: they give a barrier of 0.01 a.u.
/// with the minima at zero energy, located at `r0 +- 0.8`, and a proton mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DoubleWellParams {
    pub v0: f64,
    pub d: f64,
    pub c: f64,
    pub r0: f64,
    pub mass: f64,
}

impl Default for DoubleWellParams {
    fn default() -> Self {
        // c^2 / 4d = 0.01 and c / 2d = 0.64
        let d = 0.01 / 0.4096;
        let c = 1.28 * d;
        Self {
            v0: c * c / (4.0 * d),
            d,
            c,
            r0: 0.0,
            mass: 1836.152_673_43,
        }
    }
}

impl DoubleWellParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.v0, self.d, self.c, self.r0, self.mass]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("double_well", "parameters must be finite"));
        }
        if self.d <= 0.0 {
            return Err(Error::config("double_well.d", "quartic coefficient must be positive"));
        }
        if self.c <= 0.0 {
            return Err(Error::config("double_well.c", "quadratic coefficient must be positive"));
        }
        if self.mass <= 0.0 {
            return Err(Error::config("double_well.mass", "mass must be positive"));
        }
        Ok(())
    }

    /// Direct evaluation of the potential formula.
    pub fn value(&self, r: f64) -> f64 {
        let u = r - self.r0;
        self.v0 + self.d * u.powi(4) - self.c * u * u
    }

    /// Positions of the two minima.
    pub fn minima(&self) -> (f64, f64) {
        let s = (self.c / (2.0 * self.d)).sqrt();
        (self.r0 - s, self.r0 + s)
    }

    pub fn barrier_height(&self) -> f64 {
        self.c * self.c / (4.0 * self.d)
    }

    /// Harmonic period at the bottom of either well.
    pub fn well_period(&self) -> f64 {
        2.0 * PI / (4.0 * self.c / self.mass).sqrt()
    }
}

/// Single-state Hamiltonian for the double well.
pub fn double_well(params: &DoubleWellParams) -> Result<Hamiltonian> {
    params.validate()?;
    let c = vec![params.r0];
    let op = GaussianPolynomialOperator::new(
        1,
        vec![
            PolyTerm::monomial(params.v0, vec![0], c.clone()),
            PolyTerm::monomial(params.d, vec![4], c.clone()),
            PolyTerm::monomial(-params.c, vec![2], c),
        ],
    )?;
    Hamiltonian::new(vec![params.mass], 1)?.with_block(0, 0, Arc::new(op))
}

/// Ferretti two-state model:
///
/// ```text
/// V11 = kx/2 (X - x1)^2 + ky/2 Y^2
/// V22 = kx/2 (X - x2)^2 + ky/2 Y^2 + delta
/// V12 = gamma_c Y exp(-alpha_c (X - x3)^2 - beta_c Y^2)
/// ```
///
/// Force constants, offset, coupling and `x3` default to the standard literature values.
/// `x1`, `x2` and the masses have no canonical values; the defaults place the state-1
/// minimum at 4 and the state-2 minimum at 3, and choose masses for which the harmonic
/// ground-state widths are 22.2 and 12.9 bohr^-2 along X and Y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FerrettiParams {
    pub kx: f64,
    pub ky: f64,
    pub delta: f64,
    pub alpha_c: f64,
    pub beta_c: f64,
    pub gamma_c: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub mx: f64,
    pub my: f64,
}

impl Default for FerrettiParams {
    fn default() -> Self {
        let (kx, ky) = (0.01, 0.1);
        Self {
            kx,
            ky,
            delta: 0.01,
            alpha_c: 3.0,
            beta_c: 1.5,
            gamma_c: 0.01,
            x1: 4.0,
            x2: 3.0,
            x3: 3.0,
            // harmonic width sqrt(k m) / 2
            mx: (2.0f64 * 22.2).powi(2) / kx,
            my: (2.0f64 * 12.9).powi(2) / ky,
        }
    }
}

impl FerrettiParams {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.kx, self.ky, self.delta, self.alpha_c, self.beta_c, self.gamma_c, self.x1,
            self.x2, self.x3, self.mx, self.my,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("ferretti", "parameters must be finite"));
        }
        for (key, v) in [
            ("ferretti.kx", self.kx),
            ("ferretti.ky", self.ky),
            ("ferretti.alpha_c", self.alpha_c),
            ("ferretti.beta_c", self.beta_c),
            ("ferretti.mx", self.mx),
            ("ferretti.my", self.my),
        ] {
            if v <= 0.0 {
                return Err(Error::config(key, "must be positive"));
            }
        }
        Ok(())
    }

    /// Direct evaluation of the diabatic matrix element `V_ij(X, Y)` (states 0 and 1).
    pub fn value(&self, i: usize, j: usize, x: f64, y: f64) -> f64 {
        match (i, j) {
            (0, 0) => 0.5 * self.kx * (x - self.x1).powi(2) + 0.5 * self.ky * y * y,
            (1, 1) => 0.5 * self.kx * (x - self.x2).powi(2) + 0.5 * self.ky * y * y + self.delta,
            _ => {
                self.gamma_c * y * (-self.alpha_c * (x - self.x3).powi(2) - self.beta_c * y * y).exp()
            }
        }
    }

    pub fn x_period(&self) -> f64 {
        2.0 * PI * (self.mx / self.kx).sqrt()
    }

    pub fn y_period(&self) -> f64 {
        2.0 * PI * (self.my / self.ky).sqrt()
    }
}

/// Two-state Hamiltonian for the Ferretti model; the coupling operator is shared by both
/// off-diagonal blocks.
pub fn ferretti(params: &FerrettiParams) -> Result<Hamiltonian> {
    params.validate()?;
    let harmonic = |x0: f64, offset: f64| -> Result<GaussianPolynomialOperator> {
        let mut terms = vec![
            PolyTerm::monomial(0.5 * params.kx, vec![2, 0], vec![x0, 0.0]),
            PolyTerm::monomial(0.5 * params.ky, vec![0, 2], vec![0.0, 0.0]),
        ];
        if offset != 0.0 {
            terms.push(PolyTerm::monomial(offset, vec![0, 0], vec![0.0, 0.0]));
        }
        GaussianPolynomialOperator::new(2, terms)
    };
    let coupling = GaussianPolynomialOperator::new(
        2,
        vec![PolyTerm::enveloped(
            params.gamma_c,
            vec![0, 1],
            vec![params.alpha_c, params.beta_c],
            vec![params.x3, 0.0],
        )],
    )?;
    Hamiltonian::new(vec![params.mx, params.my], 2)?
        .with_block(0, 0, Arc::new(harmonic(params.x1, 0.0)?))?
        .with_block(1, 1, Arc::new(harmonic(params.x2, params.delta)?))?
        .with_block(0, 1, Arc::new(coupling))
}
