use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are dropped from the inverse.
pub const DEFAULT_RCOND: f64 = 1e-8;

/// Below this fraction of the largest eigenvalue the block is treated as exactly singular.
pub const SINGULAR_FLOOR: f64 = 1e-13;

/// Spectrally filtered inverse of a Hermitian positive semidefinite block.
#[derive(Debug, Clone)]
pub struct RegularizedInverse {
    pub inverse: DMatrix<Complex64>,
    /// Number of eigenvalues filtered out.
    pub discarded: usize,
    /// Ratio of largest to smallest eigenvalue.
    pub condition: f64,
}

/// Pseudo-inverse of a same-state overlap block.
///
/// `global_indices` maps block rows to basis indices so a singular block can name the
/// offending pair.
pub fn regularized_inverse(
    block: &DMatrix<Complex64>,
    rcond: f64,
    global_indices: &[usize],
) -> Result<RegularizedInverse> {
    let n = block.nrows();
    if n == 0 {
        return Ok(RegularizedInverse {
            inverse: DMatrix::zeros(0, 0),
            discarded: 0,
            condition: 1.0,
        });
    }
    let eig = block.clone().symmetric_eigen();
    let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if !(max > 0.0) || min < SINGULAR_FLOOR * max {
        let (i, j) = most_overlapping_pair(block);
        return Err(Error::IllConditionedBasis {
            i: global_indices[i],
            j: global_indices[j],
        });
    }
    let mut inverse = DMatrix::zeros(n, n);
    let mut discarded = 0;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < rcond * max {
            discarded += 1;
            continue;
        }
        let v = eig.eigenvectors.column(k);
        inverse += (v * v.adjoint()) * Complex64::new(1.0 / lambda, 0.0);
    }
    Ok(RegularizedInverse {
        inverse,
        discarded,
        condition: max / min,
    })
}

fn most_overlapping_pair(block: &DMatrix<Complex64>) -> (usize, usize) {
    let n = block.nrows();
    let mut best = (0, n.saturating_sub(1).min(1));
    let mut best_val = f64::MIN;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = block[(i, j)].norm();
            if v > best_val {
                best_val = v;
                best = (i, j);
            }
        }
    }
    best
}
