//! Per-TBF lambda from the penalized classical-energy error function, for a few penalty
//! scales, on a three-TBF double-well state.

use num_complex::Complex64;
use qeom::dynamics::{compute_z, select_lambda, LambdaPolicy, OverlapInverse};
use qeom::integrals::{BundleContent, MatrixBundle};
use qeom::potentials::{double_well, DoubleWellParams};
use qeom::{AmplitudeVector, BasisSet, FrozenGaussian, WavefunctionState};

fn main() -> qeom::Result<()> {
    let p = DoubleWellParams::default();
    let ham = double_well(&p)?;
    let tbfs = [(-1.0, 0.0), (-0.8, 4.0), (-1.2, -3.0)]
        .iter()
        .map(|&(r, q)| FrozenGaussian::new(0, vec![r], vec![q], 0.0, vec![7.5]))
        .collect::<qeom::Result<Vec<_>>>()?;
    let basis = BasisSet::new(tbfs, vec![p.mass], 1)?;
    let amps = AmplitudeVector(vec![Complex64::new(0.8, 0.0), Complex64::new(0.3, 0.1), Complex64::new(0.1, -0.3)]);
    let state = WavefunctionState::new(basis, amps, 0.0)?;

    let bundle = MatrixBundle::assemble(&state.basis, &ham, BundleContent::Full)?;
    let inv = OverlapInverse::new(&state.basis, &bundle)?;
    let z = compute_z(&state, &bundle, &inv);
    let dt = p.well_period() / 1000.0;
    for shared in [false, true] {
        for scale in [1e-3, 1e-2, 1e-1, 1.0, 10.0] {
            let policy = LambdaPolicy::ErrorFunctionMinimized { penalty_scale: scale, bounds: (0.2, 5.0), shared };
            let l = select_lambda(&state, &ham, &z, dt, &policy);
            println!("shared {shared:<5} penalty {scale:>6}: {l:.4?}");
        }
    }
    Ok(())
}
