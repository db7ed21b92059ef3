//! Tensor-product Gauss-Hermite quadrature over pairs of TBFs.
//!
//! This is an independent pointwise route to every matrix element, used to check the
//! closed forms. It evaluates the TBFs and operators on a grid centred on the real product
//! Gaussian of each integrand, so it is slow and meant for tests and diagnostics only.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::basis::{evaluate_tbf, FrozenGaussian};
use crate::error::Result;
use crate::integrals::{GaussianPolynomialOperator, Hamiltonian, PolyTerm};

/// Nodes and weights for `int exp(-t^2) f(t) dt`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence.
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let pim4 = PI.powf(-0.25);
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0f64;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                pp = (2.0 * nf).sqrt() * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        Self { nodes, weights }
    }
}

/// Quadrature oracle with a fixed rule order per degree of freedom.
#[derive(Debug, Clone)]
pub struct Oracle {
    rule: GaussHermite,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(64)
    }
}

impl Oracle {
    pub fn new(order: usize) -> Self {
        Self {
            rule: GaussHermite::new(order),
        }
    }

    /// Integrates `f` over a tensor grid centred on the product of `|bra| |ket|` and an
    /// optional extra Gaussian envelope. `f` must return the full integrand.
    pub fn integrate<F>(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        envelope: Option<(&[f64], &[f64])>,
        f: F,
    ) -> Complex64
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let ndof = bra.ndof();
        let mut width = vec![0.0; ndof];
        let mut center = vec![0.0; ndof];
        for rho in 0..ndof {
            let a = bra.widths[rho];
            let (ae, ce) = envelope.map_or((0.0, 0.0), |(w, c)| (w[rho], c[rho]));
            width[rho] = 2.0 * a + ae;
            center[rho] = (a * bra.position[rho] + a * ket.position[rho] + ae * ce) / width[rho];
        }
        let n = self.rule.nodes.len();
        let total = n.pow(ndof as u32);
        let mut x = vec![0.0; ndof];
        let mut sum = Complex64::new(0.0, 0.0);
        for flat in 0..total {
            let mut k = flat;
            let mut w = 1.0;
            for rho in 0..ndof {
                let idx = k % n;
                k /= n;
                let t = self.rule.nodes[idx];
                let s = width[rho].sqrt();
                x[rho] = center[rho] + t / s;
                w *= self.rule.weights[idx] * (t * t).exp() / s;
            }
            sum += f(&x) * w;
        }
        sum
    }

    pub fn overlap(&self, bra: &FrozenGaussian, ket: &FrozenGaussian) -> Complex64 {
        self.integrate(bra, ket, None, |x| pair(bra, ket, x))
    }

    /// `<bra|(x_dof - R_bra)^m (x_dof - R_ket)^n|ket>`.
    pub fn moment(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        m: u32,
        n: u32,
        dof: usize,
    ) -> Complex64 {
        self.integrate(bra, ket, None, |x| {
            let f = (x[dof] - bra.position[dof]).powi(m as i32)
                * (x[dof] - ket.position[dof]).powi(n as i32);
            pair(bra, ket, x) * f
        })
    }

    /// Kinetic element through `sum_rho <d chi_i|d chi_j> / 2 m_rho`.
    pub fn kinetic(&self, bra: &FrozenGaussian, ket: &FrozenGaussian, masses: &[f64]) -> Complex64 {
        self.integrate(bra, ket, None, |x| {
            let (vi, vj) = (value(bra, x), value(ket, x));
            (0..x.len())
                .map(|rho| (grad(bra, vi, x, rho)).conj() * grad(ket, vj, x, rho) / (2.0 * masses[rho]))
                .sum()
        })
    }

    /// `<bra|(x_dof - R_bra)^m V|ket>` for `m` in {0, 1}, summed term by term.
    pub fn operator(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        op: &GaussianPolynomialOperator,
        moment: Option<usize>,
    ) -> Complex64 {
        op.terms()
            .iter()
            .map(|term| self.term(bra, ket, term, moment))
            .sum()
    }

    fn term(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        term: &PolyTerm,
        moment: Option<usize>,
    ) -> Complex64 {
        let env = (&term.envelope_widths[..], &term.envelope_centers[..]);
        self.integrate(bra, ket, Some(env), |x| {
            let m = moment.map_or(1.0, |dof| x[dof] - bra.position[dof]);
            pair(bra, ket, x) * term.evaluate(x) * m
        })
    }

    /// Kinetic part of `<bra|(x_dof - R_bra) T|ket>` by parts.
    pub fn kinetic_moment_10(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        masses: &[f64],
        dof: usize,
    ) -> Complex64 {
        self.integrate(bra, ket, None, |x| {
            let (vi, vj) = (value(bra, x), value(ket, x));
            let shift = x[dof] - bra.position[dof];
            (0..x.len())
                .map(|rho| {
                    let mut left = grad(bra, vi, x, rho).conj() * shift;
                    if rho == dof {
                        left += vi.conj();
                    }
                    left * grad(ket, vj, x, rho) / (2.0 * masses[rho])
                })
                .sum()
        })
    }

    /// Full Hamiltonian element with the electronic-state structure applied.
    pub fn hamiltonian(&self, bra: &FrozenGaussian, ket: &FrozenGaussian, ham: &Hamiltonian) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        if bra.state == ket.state {
            v += self.kinetic(bra, ket, ham.masses());
        }
        if let Some(op) = ham.block(bra.state, ket.state) {
            v += self.operator(bra, ket, op, None);
        }
        v
    }

    /// `<bra|(x_dof - R_bra) H|ket>`.
    pub fn hamiltonian_moment_10(
        &self,
        bra: &FrozenGaussian,
        ket: &FrozenGaussian,
        ham: &Hamiltonian,
        dof: usize,
    ) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        if bra.state == ket.state {
            v += self.kinetic_moment_10(bra, ket, ham.masses(), dof);
        }
        if let Some(op) = ham.block(bra.state, ket.state) {
            v += self.operator(bra, ket, op, Some(dof));
        }
        v
    }
}

fn value(tbf: &FrozenGaussian, x: &[f64]) -> Complex64 {
    evaluate_tbf(tbf, x).expect("grid point has the TBF's dimension")
}

fn pair(bra: &FrozenGaussian, ket: &FrozenGaussian, x: &[f64]) -> Complex64 {
    value(bra, x).conj() * value(ket, x)
}

fn grad(tbf: &FrozenGaussian, v: Complex64, x: &[f64], rho: usize) -> Complex64 {
    v * Complex64::new(
        -2.0 * tbf.widths[rho] * (x[rho] - tbf.position[rho]),
        tbf.momentum[rho],
    )
}

/// `|a - b| <= 1e-10 |b|`, or `<= 1e-12` absolute when `|b| < 1e-2`.
pub fn oracle_close(a: Complex64, b: Complex64) -> bool {
    let err = (a - b).norm();
    if b.norm() < 1e-2 {
        err <= 1e-12
    } else {
        err <= 1e-10 * b.norm()
    }
}

/// Convenience: closed form vs oracle for a fallible closed-form value.
pub fn check(closed: Result<Complex64>, oracle: Complex64) -> bool {
    closed.map(|c| oracle_close(c, oracle)).unwrap_or(false)
}
