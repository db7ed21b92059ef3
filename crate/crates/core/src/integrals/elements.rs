//! Single bra-ket matrix elements between frozen Gaussians.
//!
//! Overlaps here are purely nuclear; electronic orthogonality (the `delta_IJ` between TBFs
//! on different states) is applied when matrices are assembled, except for
//! [`sdot_right`] which carries it explicitly.

use num_complex::Complex64;

use super::gaussian::{MomentSpec, PairContext};
use super::operator::{GaussianPolynomialOperator, Hamiltonian};
use crate::basis::{CenterRates, FrozenGaussian};
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Nuclear overlap `<bra|ket>`.
pub fn overlap(bra: &FrozenGaussian, ket: &FrozenGaussian) -> Result<Complex64> {
    Ok(PairContext::new(bra, ket)?.overlap())
}

/// `<bra| (x_dof - R_bra)^m  op  (x_dof - R_ket)^n |ket>`, with `op = None` meaning identity.
///
/// Only orders 0 and 1 on either side are accepted.
pub fn moment(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    op: Option<&GaussianPolynomialOperator>,
    m: u32,
    n: u32,
    dof: usize,
) -> Result<Complex64> {
    if m > 1 || n > 1 {
        return Err(Error::UnsupportedOrder { m, n });
    }
    if dof >= bra.ndof() {
        return Err(Error::DimensionMismatch {
            expected: bra.ndof(),
            got: dof + 1,
        });
    }
    let ctx = PairContext::new(bra, ket)?;
    let spec = MomentSpec { dof, m, n };
    Ok(match op {
        None => ctx.overlap_moment(spec),
        Some(op) => {
            check_op(op, bra)?;
            ctx.operator(op, Some(spec))
        }
    })
}

/// Closed form of the first overlap moment,
/// `S10 = S * (-(R_bra - R_ket)/2 - i (P_bra - P_ket) / (4 alpha))`.
pub fn overlap_moment_10(s: Complex64, bra: &FrozenGaussian, ket: &FrozenGaussian, dof: usize) -> Complex64 {
    let dr = bra.position[dof] - ket.position[dof];
    let dp = bra.momentum[dof] - ket.momentum[dof];
    s * Complex64::new(-0.5 * dr, -dp / (4.0 * bra.widths[dof]))
}

/// Nuclear kinetic energy element `<bra| sum_rho P_rho^2 / 2 m_rho |ket>`.
pub fn kinetic(bra: &FrozenGaussian, ket: &FrozenGaussian, masses: &[f64]) -> Result<Complex64> {
    check_masses(masses, bra)?;
    Ok(PairContext::new(bra, ket)?.kinetic(masses, None))
}

/// `<bra| V |ket>` for a multiplicative Gaussian-polynomial operator.
pub fn potential_me(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    op: &GaussianPolynomialOperator,
) -> Result<Complex64> {
    check_op(op, bra)?;
    Ok(PairContext::new(bra, ket)?.operator(op, None))
}

/// Full Hamiltonian element between two TBFs, including the electronic-state structure:
/// kinetic energy only within one state, plus the diabatic block `V_IJ`.
pub fn hamiltonian_element(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    ham: &Hamiltonian,
) -> Result<Complex64> {
    let ctx = PairContext::new(bra, ket)?;
    check_masses(ham.masses(), bra)?;
    Ok(hamiltonian_from_ctx(&ctx, bra, ket, ham, None))
}

pub(crate) fn hamiltonian_from_ctx(
    ctx: &PairContext,
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    ham: &Hamiltonian,
    moment: Option<MomentSpec>,
) -> Complex64 {
    let mut value = Complex64::new(0.0, 0.0);
    if bra.state == ket.state {
        value += ctx.kinetic(ham.masses(), moment);
    }
    if let Some(op) = ham.block(bra.state, ket.state) {
        value += ctx.operator(op, moment);
    }
    value
}

/// First Hamiltonian moment `H10 = <bra| (x_dof - R_bra) H |ket>` in closed form.
pub fn hamiltonian_moment_10(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    ham: &Hamiltonian,
    dof: usize,
) -> Result<Complex64> {
    let ctx = PairContext::new(bra, ket)?;
    check_masses(ham.masses(), bra)?;
    if dof >= bra.ndof() {
        return Err(Error::DimensionMismatch {
            expected: bra.ndof(),
            got: dof + 1,
        });
    }
    Ok(hamiltonian_from_ctx(
        &ctx,
        bra,
        ket,
        ham,
        Some(MomentSpec { dof, m: 1, n: 0 }),
    ))
}

/// Alternate route to `H10` through the bra-center derivative
/// `dH/dR_bra = 2 alpha H10 + i P_bra H`, with the derivative taken by central differences.
pub fn hamiltonian_moment_10_fd(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    ham: &Hamiltonian,
    dof: usize,
    step: f64,
) -> Result<Complex64> {
    let mut plus = bra.clone();
    let mut minus = bra.clone();
    plus.position[dof] += step;
    minus.position[dof] -= step;
    let dh = (hamiltonian_element(&plus, ket, ham)? - hamiltonian_element(&minus, ket, ham)?)
        / (2.0 * step);
    let h = hamiltonian_element(bra, ket, ham)?;
    Ok((dh - I * bra.momentum[dof] * h) / (2.0 * bra.widths[dof]))
}

/// Right-acting time derivative `<bra | d/dt ket>` given the ket's center and phase rates.
///
/// Zero between TBFs on different electronic states.
pub fn sdot_right(
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    ket_rates: &CenterRates,
) -> Result<Complex64> {
    if bra.state != ket.state {
        bra.check_compatible(ket)?;
        return Ok(Complex64::new(0.0, 0.0));
    }
    let s = overlap(bra, ket)?;
    Ok(sdot_from_overlap(s, bra, ket, ket_rates))
}

pub(crate) fn sdot_from_overlap(
    s: Complex64,
    bra: &FrozenGaussian,
    ket: &FrozenGaussian,
    rates: &CenterRates,
) -> Complex64 {
    let mut value = s * I * rates.phase;
    for rho in 0..ket.ndof() {
        let alpha = ket.widths[rho];
        // S01 = <bra|(x - R_ket)|ket> = S * ((R_bra - R_ket)/2 + i (P_ket - P_bra)/(4 alpha))
        let s01 = s * Complex64::new(
            0.5 * (bra.position[rho] - ket.position[rho]),
            (ket.momentum[rho] - bra.momentum[rho]) / (4.0 * alpha),
        );
        value += -I * s * rates.position[rho] * ket.momentum[rho]
            + s01 * Complex64::new(2.0 * alpha * rates.position[rho], rates.momentum[rho]);
    }
    value
}

fn check_op(op: &GaussianPolynomialOperator, tbf: &FrozenGaussian) -> Result<()> {
    if op.ndof() != tbf.ndof() {
        return Err(Error::DimensionMismatch {
            expected: tbf.ndof(),
            got: op.ndof(),
        });
    }
    Ok(())
}

fn check_masses(masses: &[f64], tbf: &FrozenGaussian) -> Result<()> {
    if masses.len() != tbf.ndof() {
        return Err(Error::DimensionMismatch {
            expected: tbf.ndof(),
            got: masses.len(),
        });
    }
    Ok(())
}
