//! Randomised structural invariants, driven by proptest-chosen seeds and dimensions.

use proptest::prelude::*;
use qfwalk::algebra::{
    build_inverse, build_symplectic, decompose_symplectic, doubling, make_amplitude, partial_conj, squeezing_matrix,
    ConjDims, Conjugation, SymplecticTriple,
};
use qfwalk::fock::FockSpace;
use qfwalk::linalg::{c, max_abs, r, CMat, CVec};
use qfwalk::sample;
use qfwalk::walk::gns_build;
use rand::Rng;

fn triple(seed: u64, d: usize, kernel: usize) -> SymplecticTriple {
    let mut rng = sample::seeded(seed);
    let u = sample::unitary(&mut rng, d);
    let phases = CVec::from_fn(d, |_, _| c(0.0, rng.gen_range(0.0..std::f64::consts::TAU)).exp());
    let ps = CVec::from_fn(d, |j, _| r(if j < kernel { 0.0 } else { rng.gen_range(0.1..1.5) }));
    let cm = &u * CMat::from_diagonal(&phases) * u.transpose();
    let p = &u * CMat::from_diagonal(&ps) * u.adjoint();
    let v = sample::unitary(&mut rng, d);
    SymplecticTriple::new(v, Conjugation::new(cm, 1e-12).unwrap(), p, 1e-10).unwrap()
}

fn dim_and_kernel() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5).prop_flat_map(|d| (Just(d), 0..=d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_rebuilds_the_same_map(seed in any::<u64>(), (d, kernel) in dim_and_kernel()) {
        let t = triple(seed, d, kernel);
        let b = build_symplectic(&t);
        prop_assert!(b.symplectic_residual() < 1e-10);
        let b2 = build_symplectic(&decompose_symplectic(&b, 1e-10).unwrap());
        prop_assert!(max_abs(&(&b.linear - &b2.linear)) < 1e-9);
        prop_assert!(max_abs(&(&b.conj_linear - &b2.conj_linear)) < 1e-9);
    }

    #[test]
    fn inverse_undoes_the_map(seed in any::<u64>(), (d, kernel) in dim_and_kernel()) {
        let t = triple(seed, d, kernel);
        let x = sample::complex_vector(&mut sample::seeded(seed ^ 1), d);
        let back = build_inverse(&t).apply(&build_symplectic(&t).apply(&x));
        prop_assert!((back - &x).norm() < 1e-10);
    }

    #[test]
    fn squeezing_matrix_intertwines_doubling(seed in any::<u64>(), (d, kernel) in dim_and_kernel()) {
        let b = build_symplectic(&triple(seed, d, kernel));
        let x = sample::complex_vector(&mut sample::seeded(seed ^ 2), d);
        let lhs = squeezing_matrix(&b) * doubling(&x);
        prop_assert!((lhs - doubling(&b.apply(&x))).norm() < 1e-10);
    }

    #[test]
    fn gauge_amplitude_dominates_the_norm(seed in any::<u64>(), d in 1usize..=5) {
        let mut rng = sample::seeded(seed);
        let a = sample::positive(&mut rng, d, 1.0);
        let x = sample::complex_vector(&mut rng, d);
        let sigma = make_amplitude(&a, None).unwrap();
        prop_assert!(sigma.covariance(&x) >= x.norm_squared() * (1.0 - 1e-12));
    }

    #[test]
    fn partial_conjugation_is_an_involution(seed in any::<u64>(), h in 1usize..=3, h1 in 1usize..=3, h2 in 1usize..=3) {
        let dims = ConjDims::new(h, h1, h2);
        let y = sample::complex_matrix(&mut sample::seeded(seed), h * h2, h1);
        let yc = partial_conj(&y, dims);
        prop_assert_eq!(yc.shape(), (h * h1, h2));
        prop_assert!(max_abs(&(partial_conj(&yc, dims.swapped()) - &y)) == 0.0);
    }

    #[test]
    fn gns_vectors_reproduce_the_state(seed in any::<u64>(), p in 1usize..=4) {
        let mut rng = sample::seeded(seed);
        let w = sample::positive(&mut rng, p, 1.0) + CMat::identity(p, p) * r(0.05);
        let tr = w.trace();
        let gns = gns_build(&(w / tr), 1e-12).unwrap();
        let x = sample::complex_matrix(&mut rng, p, p);
        let y = sample::complex_matrix(&mut rng, p, p);
        let lhs = gns.eta(&x).dotc(&gns.eta(&y));
        let rhs = (gns.density() * x.adjoint() * &y).trace();
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn exponential_vectors_have_exponential_overlaps(seed in any::<u64>(), d in 1usize..=2) {
        let mut rng = sample::seeded(seed);
        let x = sample::complex_vector(&mut rng, d) * r(0.3);
        let y = sample::complex_vector(&mut rng, d) * r(0.3);
        let fock = FockSpace::new(d, 30);
        let lhs = fock.exponential_vector(&x).dotc(&fock.exponential_vector(&y));
        prop_assert!((lhs - x.dotc(&y).exp()).norm() < 1e-10);
    }
}
