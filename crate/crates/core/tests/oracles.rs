mod common;

use common::*;
use num_complex::Complex64;
use pauli_duality_core::circuits::{self, conjugate};
use pauli_duality_core::gen_stabilizer::Lemma1Params;
use pauli_duality_core::models::{self, ModelSpec};
use pauli_duality_core::{Boundary, DenseBackend, DenseState, OperatorString, PauliOp, PauliString, PauliSum};
use proptest::prelude::*;
use rand::Rng;

fn random_string(r: &mut impl Rng, len: usize) -> PauliString {
    let ops: Vec<(usize, PauliOp)> = (0..len).map(|k| (k, PauliOp::ALL[r.random_range(0..4)])).collect();
    let p = PauliString::from_ops(len, &ops).unwrap();
    p.with_phase(pauli_duality_core::Phase::from_exponent(r.random_range(0..4)))
}

fn random_operator_string(r: &mut impl Rng, len: usize) -> OperatorString {
    let mut o = OperatorString::identity(len).unwrap();
    for k in 0..len {
        if r.random_bool(0.7) {
            o = o.with_site(k, random_local(r)).unwrap();
        }
    }
    o.with_scale(gaussian(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn string_product_matches_kronecker(seed in any::<u64>(), len in 1usize..6) {
        let mut r = rng(seed);
        let (a, b) = (random_string(&mut r, len), random_string(&mut r, len));
        let ab = a.mul(&b).unwrap();
        prop_assert!(max_diff(&string(&ab), &(string(&a) * string(&b))) < 1e-14);
    }

    #[test]
    fn commutation_matches_kronecker(seed in any::<u64>(), len in 1usize..6) {
        let mut r = rng(seed);
        let (a, b) = (random_string(&mut r, len), random_string(&mut r, len));
        let (ma, mb) = (string(&a), string(&b));
        let comm = &ma * &mb - &mb * &ma;
        prop_assert_eq!(a.commutes_with(&b), comm.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn group_laws(seed in any::<u64>(), len in 1usize..8) {
        let mut r = rng(seed);
        let (a, b, cc) = (random_string(&mut r, len), random_string(&mut r, len), random_string(&mut r, len));
        let left = a.mul(&b).unwrap().mul(&cc).unwrap();
        let right = a.mul(&b.mul(&cc).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let id = PauliString::identity(len).unwrap();
        prop_assert_eq!(a.mul(&id).unwrap(), a);
        prop_assert!(a.mul(&a.adjoint()).unwrap().is_identity());
        prop_assert_eq!(a.mul(&a.adjoint()).unwrap().phase(), pauli_duality_core::Phase::ONE);
    }

    #[test]
    fn sum_arithmetic_matches_kronecker(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let a = random_pauli_sum(&mut r, len, 6);
        let b = random_pauli_sum(&mut r, len, 6);
        prop_assert!(max_diff(&sum(&a.mul(&b).unwrap()), &(sum(&a) * sum(&b))) < 1e-12);
        prop_assert!(max_diff(&sum(&a.add(&b).unwrap()), &(sum(&a) + sum(&b))) < 1e-12);
        prop_assert!(max_diff(&sum(&a.adjoint()), &sum(&a).adjoint()) < 1e-12);
    }

    #[test]
    fn hermiticity_detection(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let h = random_hermitian_sum(&mut r, len, 5);
        prop_assert!(h.is_hermitian(1e-12));
        let g = random_pauli_sum(&mut r, len, 5);
        let m = sum(&g);
        let dense = max_diff(&m, &m.adjoint()) < 1e-12;
        prop_assert_eq!(g.is_hermitian(1e-12), dense);
    }

    #[test]
    fn expand_matches_kronecker(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let o = random_operator_string(&mut r, len);
        let scale = operator_string(&o).iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(&sum(&o.expand()), &operator_string(&o)) < 1e-12 * scale);
    }

    #[test]
    fn expand_is_a_homomorphism(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let (a, b) = (random_operator_string(&mut r, len), random_operator_string(&mut r, len));
        let lhs = a.mul(&b).unwrap().expand();
        let rhs = a.expand().mul(&b.expand()).unwrap();
        let scale = rhs.max_abs_coeff().max(1.0);
        prop_assert!(lhs.max_diff(&rhs) < 1e-12 * scale);
    }

    #[test]
    fn conjugation_matches_kronecker(seed in any::<u64>(), len in 1usize..6, with_local in any::<bool>()) {
        let mut r = rng(seed);
        let cir = random_circuit(&mut r, len, 8, with_local);
        let h = random_pauli_sum(&mut r, len, 4);
        let got = sum(&conjugate(&cir, &h).unwrap());
        let want = conjugate_oracle(&cir, &h);
        let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(&got, &want) < 1e-10 * scale);
    }

    #[test]
    fn conjugation_is_an_algebra_homomorphism(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let cir = random_circuit(&mut r, len, 6, true);
        let (a, b) = (random_pauli_sum(&mut r, len, 3), random_pauli_sum(&mut r, len, 3));
        let ca = conjugate(&cir, &a).unwrap();
        let cb = conjugate(&cir, &b).unwrap();
        let prod = conjugate(&cir, &a.mul(&b).unwrap()).unwrap();
        let expect = ca.mul(&cb).unwrap();
        prop_assert!(prod.max_diff(&expect) < 1e-9 * expect.max_abs_coeff().max(1.0));
        let lin = conjugate(&cir, &a.add(&b.scale(Complex64::new(0.5, -2.0))).unwrap()).unwrap();
        let lin_expect = ca.add(&cb.scale(Complex64::new(0.5, -2.0))).unwrap();
        prop_assert!(lin.max_diff(&lin_expect) < 1e-9 * lin_expect.max_abs_coeff().max(1.0));
    }

    #[test]
    fn inverse_round_trip(seed in any::<u64>(), len in 1usize..6) {
        let mut r = rng(seed);
        let cir = random_circuit(&mut r, len, 8, true);
        let h = random_pauli_sum(&mut r, len, 4);
        let back = conjugate(&cir.inverse(), &conjugate(&cir, &h).unwrap()).unwrap();
        prop_assert!(back.max_diff(&h) < 1e-9 * h.max_abs_coeff().max(1.0));
    }

    #[test]
    fn clifford_conjugation_preserves_spectrum(seed in any::<u64>(), len in 1usize..6) {
        let mut r = rng(seed);
        let cir = random_circuit(&mut r, len, 10, false);
        let h = random_hermitian_sum(&mut r, len, 5);
        let be = DenseBackend::default();
        let a = be.spectrum(&h).unwrap().eigenvalues;
        let b = be.spectrum(&conjugate(&cir, &h).unwrap()).unwrap().eigenvalues;
        prop_assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn backend_matrices_match_kronecker(seed in any::<u64>(), len in 1usize..5) {
        let mut r = rng(seed);
        let be = DenseBackend::default();
        let h = random_pauli_sum(&mut r, len, 5);
        prop_assert!(max_diff(be.pauli_sum(&h).unwrap().matrix(), &sum(&h)) < 1e-13);
        let cir = random_circuit(&mut r, len, 6, true);
        let want = circuit(&cir);
        let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(be.circuit(&cir).unwrap().matrix(), &want) < 1e-12 * scale);
        let o = random_operator_string(&mut r, len);
        let want = operator_string(&o);
        let scale = want.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(max_diff(be.operator_string(&o).unwrap().matrix(), &want) < 1e-12 * scale);
    }

    #[test]
    fn ground_energy_matches_real_embedding(seed in any::<u64>(), len in 1usize..6) {
        let mut r = rng(seed);
        let h = random_hermitian_sum(&mut r, len, 6);
        let be = DenseBackend::default();
        let (s, g) = be.ground(&h).unwrap();
        prop_assert!((s.ground_energy - lowest_eigenvalue(&sum(&h))).abs() < 1e-10);
        prop_assert!((g.expectation(&h, &be).unwrap().re - s.ground_energy).abs() < 1e-9);
    }

    #[test]
    fn unitary_circuits_preserve_norm(seed in any::<u64>(), len in 1usize..7) {
        let mut r = rng(seed);
        let cir = random_circuit(&mut r, len, 12, false);
        let s = DenseState::from_amplitudes(len, random_state(&mut r, len)).unwrap();
        let out = DenseBackend::default().apply(&cir, &s).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_bounds(seed in any::<u64>(), len in 2usize..7) {
        let mut r = rng(seed);
        let s = DenseState::from_amplitudes(len, random_state(&mut r, len)).unwrap();
        let be = DenseBackend::default();
        let k = r.random_range(1..len);
        let sites: Vec<usize> = (0..k).collect();
        let e = be.local_entropy(&s, &sites).unwrap();
        let bound = k.min(len - k) as f64;
        prop_assert!(e >= -1e-12 && e <= bound + 1e-12);
    }

    #[test]
    fn zxz_is_translation_invariant(n in 3usize..12, j in -3.0f64..3.0, b in -3.0f64..3.0, shift in 0usize..12) {
        let h = models::build(&ModelSpec::zxz(n, j, b)).unwrap();
        prop_assert_eq!(h.cyclic_shift(shift % n), h);
    }

    #[test]
    fn lambda_is_a_root(j in prop_oneof![-5.0f64..-0.01, 0.01f64..5.0], b in -5.0f64..5.0) {
        let p = Lemma1Params::new(4, j, b).unwrap();
        let l = p.lambda();
        let residual = l * l + 2.0 * (b / j) * l - 1.0;
        prop_assert!(residual.abs() < 1e-10 * (l * l).max(1.0));
        prop_assert_eq!(l.signum(), j.signum());
    }

    #[test]
    fn lanczos_matches_dense(seed in any::<u64>(), len in 4usize..9) {
        let mut r = rng(seed);
        let j: f64 = r.random_range(-2.0..2.0);
        let b: f64 = r.random_range(-2.0..2.0);
        let h = models::build(&ModelSpec::cluster(len, j, b).with_boundary(Boundary::Periodic)).unwrap();
        let be = DenseBackend::default();
        let (it, _) = be.ground_iterative(&h).unwrap();
        let exact = lowest_eigenvalue(&sum(&h));
        prop_assert!((it.ground_energy - exact).abs() < 1e-8 * exact.abs().max(1.0));
    }
}

fn conjugate_oracle(cir: &pauli_duality_core::Circuit, h: &PauliSum) -> M {
    common::conjugate(cir, h)
}

#[test]
fn staircase_images_match_kronecker() {
    for len in 2..=6 {
        let cir = circuits::fig2_staircase(len).unwrap();
        for k in 0..len {
            for op in [PauliOp::X, PauliOp::Z] {
                let h =
                    PauliSum::from_string(PauliString::single(len, k, op).unwrap(), Complex64::new(1.0, 0.0)).unwrap();
                assert!(max_diff(&sum(&conjugate(&cir, &h).unwrap()), &common::conjugate(&cir, &h)) < 1e-12);
            }
        }
    }
}

#[test]
fn remark1_rotation_diagonalizes_the_block() {
    for (j, b) in [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.5), (2.0, -3.0), (0.3, 0.3)] {
        let (u, _) = circuits::remark1_rotation(j, b).unwrap();
        let mu = local(&u);
        let a = two(c(b, 0.0), c(-j, 0.0), c(-j, 0.0), c(-b, 0.0));
        let d = mu.adjoint() * a * &mu;
        let rr = (b * b + j * j).sqrt();
        assert!(max_diff(&d, &two(c(rr, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-rr, 0.0))) < 1e-14, "j={j} b={b}");
    }
}
