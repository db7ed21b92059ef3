//! Frozen-Gaussian trajectory basis functions (TBFs) and the wavefunction they span.
//!
//! A TBF is a product over degrees of freedom of normalized one-dimensional Gaussians
//!
//! ```text
//! chi(x) = exp(i gamma) * prod_rho (2 a_rho / pi)^(1/4) exp(-a_rho (x_rho - R_rho)^2 + i P_rho (x_rho - R_rho))
//! ```
//!
//! Widths `a_rho` are fixed per degree of freedom and shared by every TBF in a [`BasisSet`].
//! Atomic units with hbar = 1 are used throughout.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One frozen-Gaussian trajectory basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenGaussian {
    /// Electronic state label.
    pub state: usize,
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
    /// Global phase gamma, radians.
    pub phase: f64,
    /// Per-DOF widths (inverse length squared).
    pub widths: Vec<f64>,
}

impl FrozenGaussian {
    pub fn new(
        state: usize,
        position: Vec<f64>,
        momentum: Vec<f64>,
        phase: f64,
        widths: Vec<f64>,
    ) -> Result<Self> {
        let ndof = widths.len();
        for v in [&position, &momentum] {
            if v.len() != ndof {
                return Err(Error::DimensionMismatch {
                    expected: ndof,
                    got: v.len(),
                });
            }
        }
        for (dof, &w) in widths.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidWidth { dof, value: w });
            }
        }
        Ok(Self {
            state,
            position,
            momentum,
            phase,
            widths,
        })
    }

    pub fn ndof(&self) -> usize {
        self.widths.len()
    }

    /// Checks that `other` can appear in a bra-ket with `self`.
    pub(crate) fn check_compatible(&self, other: &FrozenGaussian) -> Result<()> {
        if self.ndof() != other.ndof() {
            return Err(Error::DimensionMismatch {
                expected: self.ndof(),
                got: other.ndof(),
            });
        }
        for (dof, (a, b)) in self.widths.iter().zip(&other.widths).enumerate() {
            if a != b {
                return Err(Error::WidthMismatch { dof });
            }
        }
        Ok(())
    }
}

/// Time derivatives of one TBF's center and phase.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterRates {
    pub position: Vec<f64>,
    pub momentum: Vec<f64>,
    pub phase: f64,
}

impl CenterRates {
    pub fn zero(ndof: usize) -> Self {
        Self {
            position: vec![0.0; ndof],
            momentum: vec![0.0; ndof],
            phase: 0.0,
        }
    }
}

/// Value of a TBF at a nuclear configuration.
pub fn evaluate_tbf(tbf: &FrozenGaussian, point: &[f64]) -> Result<Complex64> {
    if point.len() != tbf.ndof() {
        return Err(Error::DimensionMismatch {
            expected: tbf.ndof(),
            got: point.len(),
        });
    }
    let mut norm = 1.0;
    let mut exponent = Complex64::new(0.0, tbf.phase);
    for rho in 0..tbf.ndof() {
        let a = tbf.widths[rho];
        let dx = point[rho] - tbf.position[rho];
        norm *= (2.0 * a / PI).powf(0.25);
        exponent += Complex64::new(-a * dx * dx, tbf.momentum[rho] * dx);
    }
    Ok(norm * exponent.exp())
}

/// Ordered collection of TBFs. The order defines matrix row/column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    tbfs: Vec<FrozenGaussian>,
    masses: Vec<f64>,
    widths: Vec<f64>,
    n_states: usize,
}

impl BasisSet {
    pub fn new(tbfs: Vec<FrozenGaussian>, masses: Vec<f64>, n_states: usize) -> Result<Self> {
        let ndof = masses.len();
        for (dof, &m) in masses.iter().enumerate() {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::config(
                    format!("masses[{dof}]"),
                    "masses must be positive and finite",
                ));
            }
        }
        let widths = match tbfs.first() {
            Some(t) => t.widths.clone(),
            None => return Err(Error::config("tbfs", "basis must contain at least one TBF")),
        };
        for (index, t) in tbfs.iter().enumerate() {
            if t.ndof() != ndof {
                return Err(Error::DimensionMismatch {
                    expected: ndof,
                    got: t.ndof(),
                });
            }
            for (dof, (a, b)) in t.widths.iter().zip(&widths).enumerate() {
                if a != b {
                    return Err(Error::WidthMismatch { dof });
                }
            }
            if t.state >= n_states {
                return Err(Error::StateOutOfRange {
                    index,
                    state: t.state,
                    n_states,
                });
            }
        }
        Ok(Self {
            tbfs,
            masses,
            widths,
            n_states,
        })
    }

    pub fn tbfs(&self) -> &[FrozenGaussian] {
        &self.tbfs
    }

    pub(crate) fn tbfs_mut(&mut self) -> &mut [FrozenGaussian] {
        &mut self.tbfs
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn ndof(&self) -> usize {
        self.masses.len()
    }

    pub fn len(&self) -> usize {
        self.tbfs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tbfs.is_empty()
    }

    /// Indices of the TBFs living on `state`, in basis order.
    pub fn indices_on_state(&self, state: usize) -> Vec<usize> {
        self.tbfs
            .iter()
            .enumerate()
            .filter(|(_, t)| t.state == state)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Complex amplitudes paired with a basis, in basis order.
///
/// The physical norm is `C^dagger S C`, not the sum of squared moduli.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeVector(pub Vec<Complex64>);

impl AmplitudeVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }
}

/// Full nuclear wavefunction at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionState {
    pub basis: BasisSet,
    pub amplitudes: AmplitudeVector,
    pub time: f64,
}

impl WavefunctionState {
    pub fn new(basis: BasisSet, amplitudes: AmplitudeVector, time: f64) -> Result<Self> {
        if basis.len() != amplitudes.len() {
            return Err(Error::AmplitudeLength {
                expected: basis.len(),
                got: amplitudes.len(),
            });
        }
        Ok(Self {
            basis,
            amplitudes,
            time,
        })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.basis.tbfs().iter().all(|t| {
            t.phase.is_finite()
                && t.position.iter().all(|x| x.is_finite())
                && t.momentum.iter().all(|x| x.is_finite())
        }) && self.amplitudes.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(r: f64, p: f64, phase: f64, a: f64) -> FrozenGaussian {
        FrozenGaussian::new(0, vec![r], vec![p], phase, vec![a]).unwrap()
    }

    #[test]
    fn center_value_matches_prefactor() {
        let v = evaluate_tbf(&g1(0.0, 0.0, 0.0, 1.0), &[0.0]).unwrap();
        assert!((v.re - (2.0 / PI).powf(0.25)).abs() < 1e-15);
        assert!((v.re - 0.8932).abs() < 1e-4);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn phase_rotates_center_value() {
        let v = evaluate_tbf(&g1(0.3, 1.2, 0.0, 0.7), &[0.3]).unwrap();
        assert!(v.re > 0.0 && v.im == 0.0);
        let v = evaluate_tbf(&g1(0.3, 1.2, PI / 2.0, 0.7), &[0.3]).unwrap();
        assert!(v.re.abs() < 1e-15 && v.im > 0.0);
    }

    #[test]
    fn normalized_by_quadrature() {
        // trapezoid over +-8 sigma; the integrand is smooth and decays to ~e^-128
        for &(a, r, p) in &[(1.0, 0.0, 0.0), (0.37, -1.3, 2.0), (22.2, 3.0, -5.0)] {
            let t = g1(r, p, 0.4, a);
            let sigma = 0.5 / a.sqrt();
            let n = 4000;
            let h = 16.0 * sigma / n as f64;
            let total: f64 = (0..=n)
                .map(|k| {
                    let x = r - 8.0 * sigma + k as f64 * h;
                    let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                    w * evaluate_tbf(&t, &[x]).unwrap().norm_sqr()
                })
                .sum::<f64>()
                * h;
            assert!((total - 1.0).abs() < 1e-10, "norm {total}");
        }
    }

    #[test]
    fn multidimensional_value_is_product() {
        let t = FrozenGaussian::new(0, vec![0.2, -0.4], vec![1.0, 0.5], 0.9, vec![0.8, 1.7]).unwrap();
        let x = [0.5, 0.1];
        let a = evaluate_tbf(&g1(0.2, 1.0, 0.0, 0.8), &[x[0]]).unwrap();
        let b = evaluate_tbf(&g1(-0.4, 0.5, 0.0, 1.7), &[x[1]]).unwrap();
        let v = evaluate_tbf(&t, &x).unwrap();
        let expected = a * b * Complex64::from_polar(1.0, 0.9);
        assert!((v - expected).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let t = g1(0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            evaluate_tbf(&t, &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(FrozenGaussian::new(0, vec![0.0], vec![0.0], 0.0, vec![-1.0]).is_err());
    }

    #[test]
    fn basis_rejects_mixed_widths_and_bad_states() {
        let a = g1(0.0, 0.0, 0.0, 1.0);
        let b = g1(1.0, 0.0, 0.0, 2.0);
        assert!(matches!(
            BasisSet::new(vec![a.clone(), b], vec![1.0], 1),
            Err(Error::WidthMismatch { .. })
        ));
        let mut c = a.clone();
        c.state = 2;
        assert!(matches!(
            BasisSet::new(vec![a, c], vec![1.0], 2),
            Err(Error::StateOutOfRange { index: 1, .. })
        ));
    }
}
