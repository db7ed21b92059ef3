mod common;

use common::*;
use proptest::prelude::*;

use qeom::basis::FrozenGaussian;
use qeom::integrals::{
    hamiltonian_element, hamiltonian_moment_10, hamiltonian_moment_10_fd, moment, overlap,
    overlap_moment_10, BundleContent, MatrixBundle,
};

const PAIRS: usize = 1000;

#[test]
fn double_well_elements_match_quadrature() {
    let mut r = rng(11);
    let pairs: Vec<_> = (0..PAIRS).map(|_| double_well_pair(&mut r)).collect();
    let bad = oracle_mismatches(&pairs, &double_well_default());
    assert!(bad.is_empty(), "{} mismatches, first {:?}", bad.len(), bad.first());
}

#[test]
fn ferretti_elements_match_quadrature() {
    let mut r = rng(12);
    let pairs: Vec<_> = (0..PAIRS)
        .map(|k| ferretti_pair(&mut r, (k % 2, (k / 2) % 2)))
        .collect();
    let bad = oracle_mismatches(&pairs, &ferretti_default());
    assert!(bad.is_empty(), "{} mismatches, first {:?}", bad.len(), bad.first());
}

#[test]
fn first_moment_closed_form_matches_integral() {
    let mut r = rng(13);
    for k in 0..PAIRS {
        let (b, t) = if k % 2 == 0 { double_well_pair(&mut r) } else { ferretti_pair(&mut r, (0, 0)) };
        let s = overlap(&b, &t).unwrap();
        for d in 0..b.ndof() {
            let closed = overlap_moment_10(s, &b, &t, d);
            let direct = moment(&b, &t, None, 1, 0, d).unwrap();
            assert!((closed - direct).norm() <= 1e-12 * direct.norm().max(1.0), "{closed} vs {direct}");
        }
    }
}

#[test]
fn h10_finite_difference_route_agrees() {
    let mut r = rng(14);
    let ham = ferretti_default();
    for k in 0..50 {
        let (b, t) = ferretti_pair(&mut r, (k % 2, 1));
        for d in 0..2 {
            let fd = hamiltonian_moment_10_fd(&b, &t, &ham, d, 1e-5).unwrap();
            let closed = hamiltonian_moment_10(&b, &t, &ham, d).unwrap();
            assert!((fd - closed).norm() <= 1e-6 * closed.norm().max(1e-4), "{fd} vs {closed}");
        }
    }
}

#[test]
fn bundle_is_hermitian_and_block_structured() {
    let mut r = rng(15);
    let ham = ferretti_default();
    let mut tbfs = Vec::new();
    for k in 0..6 {
        let (a, _) = ferretti_pair(&mut r, (k % 2, 0));
        let mut a = a;
        a.widths = vec![22.2, 12.9];
        tbfs.push(a);
    }
    let n = tbfs.len();
    let st = state(tbfs, vec![c(1.0, 0.0); n], ham.masses().to_vec(), 2);
    let b = MatrixBundle::assemble(&st.basis, &ham, BundleContent::Full).unwrap();
    let t = st.basis.tbfs();
    for i in 0..n {
        for j in 0..n {
            assert!((b.s[(i, j)] - b.s[(j, i)].conj()).norm() < 1e-15);
            assert!((b.h[(i, j)] - b.h[(j, i)].conj()).norm() < 1e-15);
            if t[i].state != t[j].state {
                assert_eq!(b.s[(i, j)], c(0.0, 0.0));
                assert_eq!(b.s10[0][(i, j)], c(0.0, 0.0));
                assert!(b.h[(i, j)].norm() > 0.0 || b.s[(i, j)].norm() == 0.0);
            }
        }
    }
}

fn arb_tbf() -> impl Strategy<Value = (FrozenGaussian, FrozenGaussian)> {
    (-2.0..2.0f64, -2.0..2.0f64, -5.0..5.0f64, -5.0..5.0f64, 0.1..10.0f64, -3.0..3.0f64).prop_map(
        |(r1, r2, p1, p2, a, g)| {
            (
                FrozenGaussian::new(0, vec![r1], vec![p1], g, vec![a]).unwrap(),
                FrozenGaussian::new(0, vec![r2], vec![p2], -g, vec![a]).unwrap(),
            )
        },
    )
}

proptest! {
    #[test]
    fn overlap_hermitian_and_bounded((b, k) in arb_tbf()) {
        let s = overlap(&b, &k).unwrap();
        prop_assert!((s - overlap(&k, &b).unwrap().conj()).norm() < 1e-14);
        prop_assert!(s.norm() <= 1.0 + 1e-14);
        prop_assert!((overlap(&b, &b).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn hamiltonian_hermitian((b, k) in arb_tbf()) {
        let ham = double_well_default();
        let h = hamiltonian_element(&b, &k, &ham).unwrap();
        let hh = hamiltonian_element(&k, &b, &ham).unwrap();
        prop_assert!((h - hh.conj()).norm() <= 1e-12 * h.norm().max(1e-3));
    }

    #[test]
    fn overlap_moments_are_related((b, k) in arb_tbf()) {
        // (x - R_k) = (x - R_b) + (R_b - R_k)
        let m10 = moment(&b, &k, None, 1, 0, 0).unwrap();
        let m01 = moment(&b, &k, None, 0, 1, 0).unwrap();
        let s = overlap(&b, &k).unwrap();
        let shift = s * (b.position[0] - k.position[0]);
        prop_assert!((m01 - (m10 + shift)).norm() < 1e-12);
    }
}
