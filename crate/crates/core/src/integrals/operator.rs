use std::sync::Arc;

use crate::error::{Error, Result};

/// One term `coefficient * prod_rho (x_rho - c_rho)^p_rho * exp(-sum_rho a_rho (x_rho - c_rho)^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyTerm {
    pub coefficient: f64,
    pub powers: Vec<u32>,
    pub envelope_widths: Vec<f64>,
    pub envelope_centers: Vec<f64>,
}

impl PolyTerm {
    /// A pure polynomial term (zero envelope widths).
    pub fn monomial(coefficient: f64, powers: Vec<u32>, centers: Vec<f64>) -> Self {
        let n = powers.len();
        Self {
            coefficient,
            powers,
            envelope_widths: vec![0.0; n],
            envelope_centers: centers,
        }
    }

    pub fn enveloped(
        coefficient: f64,
        powers: Vec<u32>,
        widths: Vec<f64>,
        centers: Vec<f64>,
    ) -> Self {
        Self {
            coefficient,
            powers,
            envelope_widths: widths,
            envelope_centers: centers,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let mut poly = self.coefficient;
        let mut exponent = 0.0;
        for rho in 0..x.len() {
            let dx = x[rho] - self.envelope_centers[rho];
            poly *= dx.powi(self.powers[rho] as i32);
            exponent -= self.envelope_widths[rho] * dx * dx;
        }
        poly * exponent.exp()
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        let dx: Vec<f64> = (0..n).map(|r| x[r] - self.envelope_centers[r]).collect();
        let env = (-(0..n)
            .map(|r| self.envelope_widths[r] * dx[r] * dx[r])
            .sum::<f64>())
        .exp();
        for (rho, slot) in out.iter_mut().enumerate() {
            // d/dx [dx^p e^{-a dx^2}] = (p dx^{p-1} - 2 a dx^{p+1}) e^{-a dx^2}
            let p = self.powers[rho] as i32;
            let a = self.envelope_widths[rho];
            let own = if p > 0 {
                p as f64 * dx[rho].powi(p - 1)
            } else {
                0.0
            } - 2.0 * a * dx[rho].powi(p + 1);
            let others: f64 = (0..n)
                .filter(|&s| s != rho)
                .map(|s| dx[s].powi(self.powers[s] as i32))
                .product();
            *slot += self.coefficient * own * others * env;
        }
    }
}

/// Sum of Gaussian-enveloped multivariate polynomial terms.
///
/// Every model potential and coupling is stored in this form so its matrix elements over
/// frozen Gaussians have closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPolynomialOperator {
    ndof: usize,
    terms: Vec<PolyTerm>,
}

impl GaussianPolynomialOperator {
    pub fn new(ndof: usize, terms: Vec<PolyTerm>) -> Result<Self> {
        for (t, term) in terms.iter().enumerate() {
            if term.powers.len() != ndof
                || term.envelope_widths.len() != ndof
                || term.envelope_centers.len() != ndof
            {
                return Err(Error::config(
                    format!("terms[{t}]"),
                    format!("every term needs {ndof} powers, widths and centers"),
                ));
            }
            if term.envelope_widths.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
                return Err(Error::config(
                    format!("terms[{t}].envelope_widths"),
                    "envelope widths must be finite and nonnegative",
                ));
            }
            if !term.coefficient.is_finite() || term.envelope_centers.iter().any(|c| !c.is_finite())
            {
                return Err(Error::config(format!("terms[{t}]"), "non-finite parameter"));
            }
        }
        Ok(Self { ndof, terms })
    }

    pub fn ndof(&self) -> usize {
        self.ndof
    }

    pub fn terms(&self) -> &[PolyTerm] {
        &self.terms
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.evaluate(x)).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.ndof];
        for t in &self.terms {
            t.gradient_into(x, &mut g);
        }
        g
    }
}

/// Nuclear kinetic energy plus a symmetric matrix of diabatic potential blocks.
///
/// A missing block is identically zero. Block `(i, j)` and `(j, i)` share one operator.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    masses: Vec<f64>,
    n_states: usize,
    blocks: Vec<Option<Arc<GaussianPolynomialOperator>>>,
}

impl Hamiltonian {
    pub fn new(masses: Vec<f64>, n_states: usize) -> Result<Self> {
        if masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return Err(Error::config("masses", "masses must be positive and finite"));
        }
        if n_states == 0 {
            return Err(Error::config("n_states", "need at least one electronic state"));
        }
        Ok(Self {
            masses,
            n_states,
            blocks: vec![None; n_states * n_states],
        })
    }

    /// Sets block `(i, j)` and its mirror `(j, i)` to the same operator.
    pub fn with_block(
        mut self,
        i: usize,
        j: usize,
        op: Arc<GaussianPolynomialOperator>,
    ) -> Result<Self> {
        if i >= self.n_states || j >= self.n_states {
            return Err(Error::config(
                format!("block ({i}, {j})"),
                format!("state index out of range for {} states", self.n_states),
            ));
        }
        if op.ndof() != self.ndof() {
            return Err(Error::DimensionMismatch {
                expected: self.ndof(),
                got: op.ndof(),
            });
        }
        let n = self.n_states;
        self.blocks[i * n + j] = Some(op.clone());
        self.blocks[j * n + i] = Some(op);
        Ok(self)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn ndof(&self) -> usize {
        self.masses.len()
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn block(&self, i: usize, j: usize) -> Option<&GaussianPolynomialOperator> {
        self.blocks[i * self.n_states + j].as_deref()
    }

    pub fn block_arc(&self, i: usize, j: usize) -> Option<&Arc<GaussianPolynomialOperator>> {
        self.blocks[i * self.n_states + j].as_ref()
    }

    /// Diabatic potential matrix element `V_ij(x)`.
    pub fn potential(&self, i: usize, j: usize, x: &[f64]) -> f64 {
        self.block(i, j).map_or(0.0, |op| op.evaluate(x))
    }

    /// Gradient of the diagonal surface `V_ii` at `x`.
    pub fn gradient(&self, state: usize, x: &[f64]) -> Vec<f64> {
        self.block(state, state)
            .map_or_else(|| vec![0.0; self.ndof()], |op| op.gradient(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradient_matches_central_difference() {
        let op = GaussianPolynomialOperator::new(
            2,
            vec![
                PolyTerm::monomial(0.3, vec![3, 1], vec![0.5, -0.2]),
                PolyTerm::enveloped(0.7, vec![0, 1], vec![3.0, 1.5], vec![3.0, 0.0]),
                PolyTerm::monomial(-1.1, vec![0, 0], vec![0.0, 0.0]),
            ],
        )
        .unwrap();
        let x = [2.6, 0.3];
        let g = op.gradient(&x);
        let h = 1e-6;
        for rho in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[rho] += h;
            xm[rho] -= h;
            let fd = (op.evaluate(&xp) - op.evaluate(&xm)) / (2.0 * h);
            assert!((fd - g[rho]).abs() < 1e-8 * fd.abs().max(1.0), "{fd} vs {}", g[rho]);
        }
    }

    #[test]
    fn rejects_negative_envelope() {
        let t = PolyTerm::enveloped(1.0, vec![0], vec![-1.0], vec![0.0]);
        assert!(GaussianPolynomialOperator::new(1, vec![t]).is_err());
    }

    #[test]
    fn blocks_are_mirrored() {
        let op = Arc::new(
            GaussianPolynomialOperator::new(1, vec![PolyTerm::monomial(2.0, vec![1], vec![0.0])])
                .unwrap(),
        );
        let h = Hamiltonian::new(vec![1.0], 2).unwrap().with_block(0, 1, op).unwrap();
        assert_eq!(h.potential(1, 0, &[0.5]), h.potential(0, 1, &[0.5]));
        assert!(h.block(0, 0).is_none());
        assert!(std::ptr::eq(h.block(0, 1).unwrap(), h.block(1, 0).unwrap()));
    }
}
