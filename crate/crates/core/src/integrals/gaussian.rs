//! Closed-form integrals of polynomials against the product of two frozen Gaussians.
//!
//! Per degree of freedom, everything is expressed in the ket-centered coordinate
//! `u = x - R_ket`. The bra, the ket and an optional real Gaussian envelope combine into
//! `exp(-A u^2 + B u + C)`; completing the square gives a Gaussian of mean `mu = B / 2A`
//! (complex) and variance `1 / 2A`, whose raw moments follow the usual recursion.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::operator::{GaussianPolynomialOperator, PolyTerm};
use crate::basis::FrozenGaussian;
use crate::error::Result;

const MAX_COEFFS: usize = 16;

/// Polynomial in `u` with complex coefficients, stored inline.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Poly {
    c: [Complex64; MAX_COEFFS],
    len: usize,
}

impl Poly {
    pub(crate) fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub(crate) fn constant(v: Complex64) -> Self {
        let mut c = [Complex64::new(0.0, 0.0); MAX_COEFFS];
        c[0] = v;
        Self { c, len: 1 }
    }

    pub(crate) fn from_coeffs(coeffs: &[Complex64]) -> Self {
        assert!(coeffs.len() <= MAX_COEFFS, "polynomial degree too high");
        let mut c = [Complex64::new(0.0, 0.0); MAX_COEFFS];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Self {
            c,
            len: coeffs.len().max(1),
        }
    }

    /// `(u + shift)^power`.
    pub(crate) fn shifted_power(shift: f64, power: u32) -> Self {
        let p = power as usize;
        assert!(p < MAX_COEFFS, "polynomial degree too high");
        let mut c = [Complex64::new(0.0, 0.0); MAX_COEFFS];
        let mut binom = 1.0;
        for (k, slot) in c.iter_mut().enumerate().take(p + 1) {
            *slot = Complex64::new(binom * shift.powi((p - k) as i32), 0.0);
            binom = binom * (p - k) as f64 / (k + 1) as f64;
        }
        Self { c, len: p + 1 }
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        let len = self.len + other.len - 1;
        assert!(len <= MAX_COEFFS, "polynomial degree too high");
        let mut c = [Complex64::new(0.0, 0.0); MAX_COEFFS];
        for i in 0..self.len {
            for j in 0..other.len {
                c[i + j] += self.c[i] * other.c[j];
            }
        }
        Poly { c, len }
    }

    fn is_one(&self) -> bool {
        self.len == 1 && self.c[0] == Complex64::new(1.0, 0.0)
    }
}

/// `scale * integral of poly(mu + y) exp(-A y^2) dy`, ready for any polynomial.
#[derive(Debug, Clone, Copy)]
struct GaussianProduct {
    a: f64,
    mu: Complex64,
    scale: Complex64,
}

impl GaussianProduct {
    fn integrate(&self, poly: &Poly) -> Complex64 {
        // raw moments of N(mu, 1/2A): M_n = mu M_{n-1} + (n-1)/(2A) M_{n-2}
        let var = 0.5 / self.a;
        let mut m_prev = Complex64::new(1.0, 0.0);
        let mut m_cur = self.mu;
        let mut acc = poly.c[0];
        if poly.len > 1 {
            acc += poly.c[1] * m_cur;
        }
        for n in 2..poly.len {
            let m_next = self.mu * m_cur + (n - 1) as f64 * var * m_prev;
            acc += poly.c[n] * m_next;
            m_prev = m_cur;
            m_cur = m_next;
        }
        self.scale * acc
    }
}

#[derive(Debug, Clone, Copy)]
struct DofPair {
    alpha: f64,
    /// R_bra - R_ket
    d: f64,
    p_bra: f64,
    p_ket: f64,
    r_ket: f64,
    base: GaussianProduct,
}

impl DofPair {
    fn new(alpha: f64, r_bra: f64, p_bra: f64, r_ket: f64, p_ket: f64) -> Self {
        let d = r_bra - r_ket;
        let mut pair = Self {
            alpha,
            d,
            p_bra,
            p_ket,
            r_ket,
            base: GaussianProduct {
                a: 0.0,
                mu: Complex64::new(0.0, 0.0),
                scale: Complex64::new(0.0, 0.0),
            },
        };
        pair.base = pair.product(0.0, 0.0);
        pair
    }

    /// Product Gaussian including an envelope `exp(-a (x - c)^2)`.
    fn product(&self, env_width: f64, env_center: f64) -> GaussianProduct {
        let alpha = self.alpha;
        let e = env_center - self.r_ket;
        let a = 2.0 * alpha + env_width;
        let b = Complex64::new(
            2.0 * alpha * self.d + 2.0 * env_width * e,
            self.p_ket - self.p_bra,
        );
        let c = Complex64::new(
            -alpha * self.d * self.d - env_width * e * e,
            self.p_bra * self.d,
        );
        let norm = (2.0 * alpha / PI).sqrt() * (PI / a).sqrt();
        GaussianProduct {
            a,
            mu: b / (2.0 * a),
            scale: norm * (b * b / (4.0 * a) + c).exp(),
        }
    }

    fn integrate(&self, poly: &Poly, env_width: f64, env_center: f64) -> Complex64 {
        if env_width == 0.0 {
            self.base.integrate(poly)
        } else {
            self.product(env_width, env_center).integrate(poly)
        }
    }

    /// `(x - R_bra)^m (x - R_ket)^n` in the ket-centered coordinate.
    fn moment_poly(&self, m: u32, n: u32) -> Poly {
        let left = Poly::shifted_power(-self.d, m);
        if n == 0 {
            left
        } else {
            left.mul(&Poly::shifted_power(0.0, n))
        }
    }

    /// Polynomial produced by `-(1/2m) d^2/dx^2` acting on the ket.
    fn kinetic_poly(&self, mass: f64) -> Poly {
        let a = self.alpha;
        let p = self.p_ket;
        Poly::from_coeffs(&[
            Complex64::new((p * p + 2.0 * a) / (2.0 * mass), 0.0),
            Complex64::new(0.0, 2.0 * a * p / mass),
            Complex64::new(-2.0 * a * a / mass, 0.0),
        ])
    }
}

/// Moment insertion `(x_dof - R_bra)^m ... (x_dof - R_ket)^n` on a single degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct MomentSpec {
    pub dof: usize,
    pub m: u32,
    pub n: u32,
}

/// Cached per-pair data for evaluating many matrix elements between one bra and one ket.
pub(crate) struct PairContext {
    dofs: Vec<DofPair>,
    overlaps: Vec<Complex64>,
    phase: Complex64,
}

impl PairContext {
    pub(crate) fn new(bra: &FrozenGaussian, ket: &FrozenGaussian) -> Result<Self> {
        bra.check_compatible(ket)?;
        let dofs: Vec<DofPair> = (0..bra.ndof())
            .map(|rho| {
                DofPair::new(
                    bra.widths[rho],
                    bra.position[rho],
                    bra.momentum[rho],
                    ket.position[rho],
                    ket.momentum[rho],
                )
            })
            .collect();
        let overlaps = dofs.iter().map(|d| d.base.integrate(&Poly::one())).collect();
        Ok(Self {
            dofs,
            overlaps,
            phase: Complex64::from_polar(1.0, ket.phase - bra.phase),
        })
    }

    fn ndof(&self) -> usize {
        self.dofs.len()
    }

    /// Product over DOFs; `factor(rho)` returns `None` for a plain overlap factor.
    fn separable<F>(&self, mut factor: F) -> Complex64
    where
        F: FnMut(usize, &DofPair) -> Option<Complex64>,
    {
        let mut acc = self.phase;
        for (rho, pair) in self.dofs.iter().enumerate() {
            acc *= factor(rho, pair).unwrap_or(self.overlaps[rho]);
        }
        acc
    }

    pub(crate) fn overlap(&self) -> Complex64 {
        self.separable(|_, _| None)
    }

    /// Overlap with a moment insertion (identity operator).
    pub(crate) fn overlap_moment(&self, moment: MomentSpec) -> Complex64 {
        self.separable(|rho, pair| {
            (rho == moment.dof).then(|| pair.integrate(&pair.moment_poly(moment.m, moment.n), 0.0, 0.0))
        })
    }

    pub(crate) fn term(&self, term: &PolyTerm, moment: Option<MomentSpec>) -> Complex64 {
        let value = self.separable(|rho, pair| {
            let mut poly = Poly::shifted_power(
                pair.r_ket - term.envelope_centers[rho],
                term.powers[rho],
            );
            if let Some(mo) = moment.filter(|mo| mo.dof == rho) {
                poly = poly.mul(&pair.moment_poly(mo.m, mo.n));
            }
            let width = term.envelope_widths[rho];
            if poly.is_one() && width == 0.0 {
                None
            } else {
                Some(pair.integrate(&poly, width, term.envelope_centers[rho]))
            }
        });
        term.coefficient * value
    }

    pub(crate) fn operator(
        &self,
        op: &GaussianPolynomialOperator,
        moment: Option<MomentSpec>,
    ) -> Complex64 {
        op.terms().iter().map(|t| self.term(t, moment)).sum()
    }

    /// Kinetic element, optionally with a moment insertion to the left of the kinetic operator
    /// (`n` must then be zero).
    pub(crate) fn kinetic(&self, masses: &[f64], moment: Option<MomentSpec>) -> Complex64 {
        debug_assert!(moment.is_none_or(|m| m.n == 0));
        (0..self.ndof())
            .map(|kappa| {
                self.separable(|rho, pair| {
                    let mo = moment.filter(|mo| mo.dof == rho);
                    match (rho == kappa, mo) {
                        (false, None) => None,
                        (false, Some(mo)) => {
                            Some(pair.integrate(&pair.moment_poly(mo.m, 0), 0.0, 0.0))
                        }
                        (true, mo) => {
                            let mut poly = pair.kinetic_poly(masses[rho]);
                            if let Some(mo) = mo {
                                poly = pair.moment_poly(mo.m, 0).mul(&poly);
                            }
                            Some(pair.integrate(&poly, 0.0, 0.0))
                        }
                    }
                })
            })
            .sum()
    }
}
