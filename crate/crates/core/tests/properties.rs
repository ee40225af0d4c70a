//! Randomized invariants across the library.

mod common;

use common::*;
use ovf_lab::dilation::{parsevalize, similarity_witness, Side};
use ovf_lab::duality::{canonical_dual, dual_from_parameters, is_dual};
use ovf_lab::group::{check_shift_conditions, generate_frame, left_regular, right_regular, FiniteGroup};
use ovf_lab::grouplike::GroupLikeSystem;
use ovf_lab::io::FrameFile;
use ovf_lab::numkernel::{random_op, random_unitary};
use ovf_lab::perturb::{perturbation_constants, sample_admissible_perturbation};
use ovf_lab::{Op, Tolerance, WeakOvf};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjoint_is_an_involution(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let x = random_op(rows, cols, seed);
        prop_assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn spectral_norm_is_submultiplicative(n in 1usize..6, seed in any::<u64>()) {
        let x = random_op(n, n, seed);
        let y = random_op(n, n, seed.wrapping_add(1));
        prop_assert!((&x * &y).spectral_norm() <= x.spectral_norm() * y.spectral_norm() * (1.0 + 1e-12));
        prop_assert!((x.spectral_norm() - norm2(&m(&x))).abs() <= 1e-12 * (1.0 + x.spectral_norm()));
    }

    #[test]
    fn inverse_is_two_sided(n in 1usize..7, seed in any::<u64>()) {
        let x = &random_op(n, n, seed) + &Op::identity(n).scale_real(3.0);
        let inv = x.try_invert(&tol()).unwrap();
        prop_assert!((&x * &inv).dist_identity() <= 1e-9);
        prop_assert!((&inv * &x).dist_identity() <= 1e-9);
    }

    #[test]
    fn kron_mixed_product(seed in any::<u64>()) {
        let (a, b) = (random_op(2, 3, seed), random_op(3, 2, seed ^ 1));
        let (c, d) = (random_op(3, 2, seed ^ 2), random_op(2, 2, seed ^ 3));
        let lhs = &a.kron(&b) * &c.kron(&d);
        let rhs = (&a * &c).kron(&(&b * &d));
        prop_assert!(lhs.dist(&rhs) <= 1e-12 * (1.0 + rhs.spectral_norm()));
    }

    #[test]
    fn frame_operator_factors(seed in 0u64..100_000) {
        let f = random_weak(seed);
        let s = frame_operator(f.a(), f.psi());
        prop_assert!(norm2(&(m(&f.frame_operator()) - &s)) <= 1e-10 * (1.0 + norm2(&s)));
        prop_assert!(f.classify().factorization_residual <= 1e-10 * (1.0 + norm2(&s)));
    }

    #[test]
    fn canonical_dual_is_dual_and_similar(seed in 0u64..100_000) {
        let f = random_weak(seed);
        let g = canonical_dual(&f).unwrap();
        prop_assert!(is_dual(&f, &g).is_ok());
        prop_assert!(similarity_witness(&f, &g).is_ok());
    }

    #[test]
    fn zero_parameters_give_canonical_dual(seed in 0u64..100_000) {
        let f = random_weak(seed);
        let rows = f.len() * f.d0();
        let g = dual_from_parameters(&f, &Op::zeros(rows, f.d()), &Op::zeros(f.d(), rows)).unwrap();
        let c = canonical_dual(&f).unwrap();
        for (x, y) in g.a().iter().zip(c.a()).chain(g.psi().iter().zip(c.psi())) {
            prop_assert!(x.max_abs_diff(y) <= 1e-12 * (1.0 + y.spectral_norm()));
        }
    }

    #[test]
    fn parsevalization_is_parseval(seed in 0u64..100_000, left in any::<bool>()) {
        let f = random_weak(seed);
        let side = if left { Side::Left } else { Side::Right };
        let p = parsevalize(&f, side).unwrap();
        prop_assert!(p.frame_operator().dist_identity() <= 1e-8);
    }

    #[test]
    fn similarity_preserves_the_idempotent(seed in 0u64..100_000) {
        let f = random_weak(seed);
        let d = f.d();
        let r = &random_op(d, d, seed ^ 7).scale_real(0.3) + &Op::identity(d);
        let t = &random_op(d, d, seed ^ 9).scale_real(0.3) + &Op::identity(d);
        let g = f.right_multiply(&r, &t).unwrap();
        let (p, q) = (f.idempotent().unwrap(), g.idempotent().unwrap());
        prop_assert!(p.dist(&q) <= 1e-8 * (1.0 + p.spectral_norm()));
    }

    #[test]
    fn translations_are_bijections(n in 1usize..5) {
        for sys in [GroupLikeSystem::weyl_heisenberg(n), GroupLikeSystem::from_group(&FiniteGroup::dihedral(n))] {
            for v in 0..sys.size() {
                let mut image: Vec<usize> = (0..sys.size()).map(|u| sys.sigma(v, u)).collect();
                image.sort_unstable();
                prop_assert_eq!(image, (0..sys.size()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn regular_representations_commute(n in 1usize..5) {
        let g = FiniteGroup::dihedral(n);
        let (l, r) = (left_regular(&g), right_regular(&g));
        for x in l.pi() {
            for y in r.pi() {
                prop_assert_eq!(x * y, y * x);
            }
        }
    }

    #[test]
    fn shift_conditions_survive_a_common_unitary(seed in any::<u64>()) {
        let g = FiniteGroup::cyclic(3);
        let rep = left_regular(&g).conjugate(&random_unitary(3, seed));
        let f = generate_frame(&rep, &random_op(1, 3, seed ^ 1), &random_op(1, 3, seed ^ 2), tol()).unwrap();
        let w = random_unitary(3, seed ^ 3);
        let moved = f.right_multiply(&w, &w).unwrap();
        prop_assert!(check_shift_conditions(&moved, &g).unwrap().passed);
    }

    #[test]
    fn mixed_sum_is_homogeneous(seed in 0u64..100_000, fraction in 0.05f64..0.95) {
        let f = random_weak(seed);
        let b = sample_admissible_perturbation(&f, fraction, seed).unwrap();
        let cert = perturbation_constants(&f, &b).unwrap();
        prop_assert!((cert.mixed_sum - fraction).abs() <= 1e-12);
        let half: Vec<Op> = f.a().iter().zip(&b).map(|(a, b)| a + &(b - a).scale_real(0.5)).collect();
        let halved = perturbation_constants(&f, &half).unwrap();
        prop_assert!((halved.mixed_sum - fraction / 2.0).abs() <= 1e-12);
        prop_assert!((halved.r - cert.r / 4.0).abs() <= 1e-12 * (1.0 + cert.r));
    }

    #[test]
    fn frame_files_round_trip(seed in 0u64..100_000) {
        let f = random_weak(seed);
        let file = FrameFile::from_frame(&f);
        let back = FrameFile::from_json(&file.to_json()).unwrap();
        prop_assert!(file.bit_identical(&back));
        let g: WeakOvf = back.to_frame(tol()).unwrap();
        prop_assert_eq!(g, f);
    }
}
