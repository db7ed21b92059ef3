mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

use qeom::basis::{CenterRates, WavefunctionState};
use qeom::dynamics::{
    amplitude_rhs, classical_derivatives, compute_z, compute_z_with, conservation_residuals,
    quantum_derivatives, select_lambda, step, AutoMonitor, EomMode, LambdaPolicy, OverlapInverse,
    Propagator, ZCoupling,
};
use qeom::integrals::{BundleContent, MatrixBundle};
use qeom::observables;
use qeom::potentials::DoubleWellParams;
use qeom::quadrature::GaussHermite;
use qeom::Hamiltonian;

fn fixed_one() -> EomMode {
    EomMode::Quantum {
        lambda: LambdaPolicy::FixedOne,
        coupling: ZCoupling::SameState,
    }
}

#[test]
fn single_tbf_follows_averaged_potential() {
    let p = DoubleWellParams::default();
    let ham = double_well_default();
    let alpha = 7.5;
    let dt = p.well_period() / 1000.0;
    let gh = GaussHermite::new(20);
    let mut s = single(dw_tbf(-1.0, 0.0, alpha), vec![p.mass], 1);
    let mut prop = Propagator::new(ham, fixed_one(), dt).unwrap();
    let (mut r, mut q) = (-1.0f64, 0.0f64);
    let f = |r: f64, q: f64| (q / p.mass, -averaged_force(&p, r, alpha, &gh));
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let k1 = f(r, q);
        let k2 = f(r + 0.5 * dt * k1.0, q + 0.5 * dt * k1.1);
        let k3 = f(r + 0.5 * dt * k2.0, q + 0.5 * dt * k2.1);
        let k4 = f(r + dt * k3.0, q + dt * k3.1);
        r += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        q += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        s = prop.step(&s).unwrap().0;
        let t = &s.basis.tbfs()[0];
        worst = worst.max((t.position[0] - r).abs()).max((t.momentum[0] - q).abs());
    }
    assert!(worst <= 1e-8, "max center difference {worst:e}");
}

#[test]
fn separated_tbfs_move_with_weighted_classical_rates() {
    let p = DoubleWellParams::default();
    let ham = double_well_default();
    let alpha: f64 = 7.5;
    let sigma = 1.0 / (2.0 * alpha.sqrt());
    let (r1, r2) = (-10.0 * sigma, 10.0 * sigma + 0.05);
    let (c1, c2) = (c(0.6, 0.3), c(-0.2, (1.0f64 - 0.45 - 0.04).sqrt()));
    let s = state(
        vec![dw_tbf(r1, 4.0, alpha), dw_tbf(r2, -2.5, alpha)],
        vec![c1, c2],
        vec![p.mass],
        1,
    );
    let bundle = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Full).unwrap();
    assert!(bundle.s[(0, 1)].norm() < 1e-12);
    let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
    let z = compute_z(&s, &bundle, &inv);
    let rates = quantum_derivatives(&s, &ham, &z, &[1.0, 1.0]).unwrap();
    let gh = GaussHermite::new(20);
    for (i, (tbf, w)) in s.basis.tbfs().iter().zip([c1.norm_sqr(), c2.norm_sqr()]).enumerate() {
        let v = w * tbf.momentum[0] / p.mass;
        let f = -w * averaged_force(&p, tbf.position[0], alpha, &gh);
        assert!((rates[i].position[0] - v).abs() <= 1e-8, "{} vs {v}", rates[i].position[0]);
        assert!((rates[i].momentum[0] - f).abs() <= 1e-8, "{} vs {f}", rates[i].momentum[0]);
    }
}

/// `d/dt C^dagger S C` with the overlap derivative taken by moving the centers.
fn norm_rate(s: &WavefunctionState, ham: &Hamiltonian, rates: &[CenterRates]) -> f64 {
    let bundle = MatrixBundle::assemble(&s.basis, ham, BundleContent::Full).unwrap();
    let mut b = bundle.clone();
    b.set_sdot_right(&s.basis, rates).unwrap();
    let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
    let cdot = amplitude_rhs(s, &b, &inv);
    let h = 1e-6;
    let shifted = |sign: f64| {
        let mut tbfs = s.basis.tbfs().to_vec();
        for (tbf, r) in tbfs.iter_mut().zip(rates) {
            for d in 0..r.position.len() {
                tbf.position[d] += sign * h * r.position[d];
                tbf.momentum[d] += sign * h * r.momentum[d];
            }
            tbf.phase += sign * h * r.phase;
        }
        let basis = qeom::BasisSet::new(tbfs, s.basis.masses().to_vec(), s.basis.n_states()).unwrap();
        MatrixBundle::assemble(&basis, ham, BundleContent::Energy).unwrap().s
    };
    let sdot = (shifted(1.0) - shifted(-1.0)) / Complex64::new(2.0 * h, 0.0);
    let cv = nalgebra::DVector::from_column_slice(s.amplitudes.as_slice());
    let dv = nalgebra::DVector::from_vec(cdot);
    let a = (dv.adjoint() * &bundle.s * &cv)[(0, 0)];
    let d = (cv.adjoint() * &sdot * &cv)[(0, 0)];
    2.0 * a.re + d.re
}

#[test]
fn amplitude_equation_preserves_norm() {
    let ham = ferretti_default();
    let mut r = rng(21);
    for _ in 0..10 {
        let mut tbfs = Vec::new();
        for k in 0..4 {
            let (mut t, _) = ferretti_pair(&mut r, (k / 2, 0));
            t.widths = vec![22.2, 12.9];
            t.position = vec![2.5 + 0.1 * k as f64, 0.05 * k as f64 - 0.1];
            tbfs.push(t);
        }
        let amps = vec![c(0.5, 0.1), c(-0.3, 0.2), c(0.1, 0.4), c(0.2, -0.1)];
        let s = state(tbfs, amps, ham.masses().to_vec(), 2);
        let bundle = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Full).unwrap();
        let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
        let n = observables::norm(&s, &bundle);
        for rates in [
            classical_derivatives(&s, &ham).unwrap(),
            quantum_derivatives(&s, &ham, &compute_z(&s, &bundle, &inv), &[1.0; 4]).unwrap(),
        ] {
            let rate = norm_rate(&s, &ham, &rates);
            assert!(rate.abs() <= 1e-8 * n, "dN/dt = {rate:e}");
        }
    }
}

#[test]
fn infinite_threshold_auto_equals_classical() {
    let cfg = qeom::config::RunConfig::preset("double_well").unwrap();
    let mut s = qeom::run::prepare(&cfg).unwrap();
    let ham = cfg.model.hamiltonian().unwrap();
    let dt = cfg.resolved_dt();
    let auto = EomMode::Auto {
        delta: f64::INFINITY,
        lambda: LambdaPolicy::default(),
        coupling: ZCoupling::SameState,
        monitor: AutoMonitor::ClassicalEnergyStep,
    };
    let mut a = Propagator::new(ham.clone(), auto, dt).unwrap();
    let mut b = Propagator::new(ham, EomMode::Classical, dt).unwrap();
    let mut t = s.clone();
    for _ in 0..200 {
        let (sa, ra) = a.step(&s).unwrap();
        let (sb, _) = b.step(&t).unwrap();
        assert!(!ra.used_quantum);
        assert_eq!(sa, sb);
        s = sa;
        t = sb;
    }
}

fn two_tbf_double_well() -> (WavefunctionState, Hamiltonian, f64) {
    let p = DoubleWellParams::default();
    let s = state(
        vec![dw_tbf(-1.0, 0.0, 7.5), dw_tbf(-0.7, 3.0, 7.5)],
        vec![c(0.8, 0.0), c(0.3, 0.2)],
        vec![p.mass],
        1,
    );
    (s, double_well_default(), p.well_period())
}

fn trajectory_end(s: &WavefunctionState, ham: &Hamiltonian, mode: EomMode, dt: f64, n: usize) -> Vec<f64> {
    let mut prop = Propagator::new(ham.clone(), mode, dt).unwrap();
    let mut s = s.clone();
    for _ in 0..n {
        s = prop.step(&s).unwrap().0;
    }
    let mut v = Vec::new();
    for t in s.basis.tbfs() {
        v.extend([t.position[0], t.momentum[0] / 10.0, t.phase]);
    }
    for a in s.amplitudes.as_slice() {
        v.extend([a.re, a.im]);
    }
    v
}

fn err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn rk4_is_fourth_order() {
    let (s, ham, period) = two_tbf_double_well();
    for mode in [EomMode::Classical, fixed_one()] {
        let n = 40;
        let dt = 0.5 * period / n as f64;
        let coarse = trajectory_end(&s, &ham, mode, dt, n);
        let half = trajectory_end(&s, &ham, mode, dt / 2.0, 2 * n);
        let reference = trajectory_end(&s, &ham, mode, dt / 8.0, 8 * n);
        let ratio = err(&coarse, &reference) / err(&half, &reference);
        assert!((12.0..=20.0).contains(&ratio), "{} ratio {ratio}", mode.name());
    }
}

#[test]
fn all_state_coupling_conserves_energy_across_surfaces() {
    let ham = ferretti_default();
    let tbfs = vec![
        qeom::FrozenGaussian::new(0, vec![3.0, 0.05], vec![-8.0, 3.0], 0.0, vec![22.2, 12.9]).unwrap(),
        qeom::FrozenGaussian::new(0, vec![3.1, -0.1], vec![-6.0, -2.0], 0.4, vec![22.2, 12.9]).unwrap(),
        qeom::FrozenGaussian::new(1, vec![2.9, 0.1], vec![-7.0, 1.0], 0.0, vec![22.2, 12.9]).unwrap(),
        qeom::FrozenGaussian::new(1, vec![3.05, -0.05], vec![-9.0, 0.0], -0.3, vec![22.2, 12.9]).unwrap(),
    ];
    let amps = vec![c(0.6, 0.0), c(0.3, 0.2), c(0.2, -0.3), c(0.1, 0.3)];
    let s = state(tbfs, amps, ham.masses().to_vec(), 2);
    let e0 = {
        let b = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Energy).unwrap();
        observables::quantum_energy(&s, &b).unwrap()
    };
    let change = |coupling, dt: f64| {
        let mode = EomMode::Quantum { lambda: LambdaPolicy::FixedOne, coupling };
        let next = step(&s, dt, &mode, &ham).unwrap().0;
        let b = MatrixBundle::assemble(&next.basis, &ham, BundleContent::Energy).unwrap();
        (observables::quantum_energy(&next, &b).unwrap() - e0).abs()
    };
    let dt = 10.0;
    let same = change(ZCoupling::SameState, dt);
    let all = change(ZCoupling::AllStates, dt);
    assert!(all < 1e-3 * same, "same-state {same:e}, all-states {all:e}");
    let ratio = all / change(ZCoupling::AllStates, dt / 2.0);
    assert!(ratio > 24.0, "all-states step error ratio {ratio}");
}

#[test]
fn lambda_matches_grid_scan_of_penalized_objective() {
    let (s, ham, period) = two_tbf_double_well();
    let dt = period / 1000.0;
    let bundle = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Full).unwrap();
    let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
    let z = compute_z(&s, &bundle, &inv);
    // g_i: classical-energy rate of TBF i per unit lambda, from the quantum rates at lambda = 1
    let rates = quantum_derivatives(&s, &ham, &z, &[1.0, 1.0]).unwrap();
    let p = DoubleWellParams::default();
    let g: Vec<f64> = s
        .basis
        .tbfs()
        .iter()
        .zip(&rates)
        .map(|(t, r)| {
            let u = t.position[0] - p.r0;
            let force = 4.0 * p.d * u.powi(3) - 2.0 * p.c * u;
            force * r.position[0] + t.momentum[0] / p.mass * r.momentum[0]
        })
        .collect();
    for scale in [1e-2, 0.3, 10.0] {
        let policy = LambdaPolicy::ErrorFunctionMinimized { penalty_scale: scale, bounds: (0.2, 5.0), shared: false };
        let lambdas = select_lambda(&s, &ham, &z, dt, &policy);
        let gmax = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let w = scale * (dt * gmax).powi(2);
        for (i, &gi) in g.iter().enumerate() {
            let obj = |l: f64| (dt * gi * l).powi(2) + w * (l - 1.0).powi(2);
            let best = (0..=48_000)
                .map(|k| 0.2 + k as f64 * 1e-4)
                .min_by(|a, b| obj(*a).total_cmp(&obj(*b)))
                .unwrap();
            assert!((lambdas[i] - best).abs() <= 1e-4, "scale {scale}: {} vs {best}", lambdas[i]);
        }
    }
    let shared = LambdaPolicy::ErrorFunctionMinimized { penalty_scale: 0.3, bounds: (0.2, 5.0), shared: true };
    let l = select_lambda(&s, &ham, &z, dt, &shared);
    assert_eq!(l[0], l[1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantum_rates_cancel_per_tbf(
        r in prop::collection::vec(-1.2..1.2f64, 3),
        p in prop::collection::vec(-6.0..6.0f64, 3),
        a in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
        lam in prop::collection::vec(0.2..5.0f64, 3),
    ) {
        let ham = double_well_default();
        let tbfs = (0..3).map(|i| dw_tbf(r[i], p[i], 7.5)).collect();
        let amps = a.iter().map(|&(x, y)| c(x, y)).collect();
        let s = state(tbfs, amps, vec![PROTON], 1);
        let bundle = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Full).unwrap();
        let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
        for coupling in [ZCoupling::SameState, ZCoupling::AllStates] {
            let z = compute_z_with(&s, &bundle, &inv, coupling);
            let rates = quantum_derivatives(&s, &ham, &z, &lam).unwrap();
            for v in conservation_residuals(&s, &z, &rates) {
                prop_assert!(v.abs() <= 1e-12, "{v:e}");
            }
        }
    }

    #[test]
    fn selected_lambda_within_bounds(
        r in prop::collection::vec(-1.2..1.2f64, 2),
        p in prop::collection::vec(-6.0..6.0f64, 2),
        lo in 0.0..1.0f64,
        hi in 1.0..10.0f64,
        scale in 1e-4..1e2f64,
    ) {
        let ham = double_well_default();
        let tbfs = (0..2).map(|i| dw_tbf(r[i], p[i], 7.5)).collect();
        let s = state(tbfs, vec![c(0.7, 0.0), c(0.2, 0.5)], vec![PROTON], 1);
        let bundle = MatrixBundle::assemble(&s.basis, &ham, BundleContent::Full).unwrap();
        let inv = OverlapInverse::new(&s.basis, &bundle).unwrap();
        let z = compute_z(&s, &bundle, &inv);
        let policy = LambdaPolicy::ErrorFunctionMinimized { penalty_scale: scale, bounds: (lo, hi), shared: false };
        for l in select_lambda(&s, &ham, &z, 1.0, &policy) {
            prop_assert!(l >= lo && l <= hi);
        }
    }
}
