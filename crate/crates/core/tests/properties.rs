mod common;

use cfmm_core::fft::{circulant_convolve, dft_forward};
use cfmm_core::{count, Complex64, CompressionPlan, GradedOrdering, GridTensor, Kernel, MultiIndex, NdFft, PdeOperator};
use proptest::prelude::*;

fn ordering() -> impl Strategy<Value = GradedOrdering> {
    (1usize..=4).prop_flat_map(|d| (0..d).prop_map(move |k| GradedOrdering::new(d, k).unwrap()))
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn pde_and_order() -> impl Strategy<Value = (PdeOperator, usize)> {
    prop_oneof![
        Just(PdeOperator::laplace(2)),
        Just(PdeOperator::laplace(3)),
        Just(PdeOperator::biharmonic(2)),
        Just(PdeOperator::helmholtz(2, 1.7)),
        Just(PdeOperator::helmholtz(3, 0.6)),
        Just(PdeOperator::new(2, &[(MultiIndex::new(&[1, 1]).unwrap(), Complex64::new(1.0, 0.0))]).unwrap()),
    ]
    .prop_flat_map(|pde| {
        let c = pde.order();
        (Just(pde), c..c + 8)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_and_unrank_are_inverse(o in ordering(), i in 1usize..400) {
        let m = o.unrank(i).unwrap();
        prop_assert_eq!(o.rank(&m).unwrap(), i);
    }

    #[test]
    fn enumeration_is_graded_and_complete(o in ordering(), p in 0usize..7) {
        let e = o.enumerate(p);
        prop_assert_eq!(e.len(), count(p, o.dim()));
        for (k, m) in e.iter().enumerate() {
            prop_assert_eq!(o.rank(m).unwrap(), k + 1);
            if k > 0 {
                prop_assert!(e[k - 1].order() <= m.order());
            }
        }
    }

    #[test]
    fn ordering_is_translation_compatible(o in ordering(), a in 1usize..120, b in 1usize..120, s in 1usize..60) {
        prop_assume!(a < b);
        let (ma, mb, ms) = (o.unrank(a).unwrap(), o.unrank(b).unwrap(), o.unrank(s).unwrap());
        prop_assert!(o.rank(&(ma + ms)).unwrap() < o.rank(&(mb + ms)).unwrap());
    }

    #[test]
    fn decompress_transpose_is_the_adjoint((pde, p) in pde_and_order(), seed in any::<u64>()) {
        let plan = CompressionPlan::new(&pde, p).unwrap();
        let mut r = common::rng(seed);
        let theta = common::random_weights(&mut r, plan.stored_len());
        let alpha = common::random_weights(&mut r, plan.full_len());
        let lhs: Complex64 = plan.decompress(&theta).unwrap().iter().zip(&alpha).map(|(a, b)| a * b).sum();
        let rhs: Complex64 = theta.iter().zip(&plan.decompress_transpose(&alpha).unwrap()).map(|(a, b)| a * b).sum();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn decompressed_vectors_lie_in_the_null_space((pde, p) in pde_and_order(), seed in any::<u64>()) {
        let plan = CompressionPlan::new(&pde, p).unwrap();
        let mut r = common::rng(seed);
        let theta = common::random_weights(&mut r, plan.stored_len());
        let full = plan.decompress(&theta).unwrap();
        let scale = full.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for v in plan.rows().apply(&full) {
            prop_assert!(v.norm() <= 1e-10 * scale);
        }
        prop_assert_eq!(plan.restrict(&full).unwrap(), theta);
    }

    #[test]
    fn pivots_partition_the_index_set((pde, p) in pde_and_order()) {
        let plan = CompressionPlan::new(&pde, p).unwrap();
        prop_assert_eq!(plan.h().len(), count(p - pde.order(), pde.dim()));
        prop_assert_eq!(plan.j().len() + plan.jbar().len(), plan.full_len());
        for w in plan.h().windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        let mut seen = vec![false; plan.full_len()];
        for &k in plan.j().iter().chain(plan.jbar()) {
            prop_assert!(!seen[k]);
            seen[k] = true;
        }
        // every stored index is in exactly one slice
        for (slot, m) in plan.stored_indices().enumerate() {
            let s = plan.slices()[plan.slice_assignment()[slot] as usize];
            prop_assert_eq!(m.get(s.axis), s.level);
        }
    }

    #[test]
    fn reconstruction_recovers_kernel_derivatives(seed in any::<u64>(), which in 0usize..5, p in 4usize..10) {
        let kernel = common::all_kernels()[which];
        let plan = CompressionPlan::new(&kernel.pde(), p).unwrap();
        let mut r = common::rng(seed);
        let x = common::point_in_shell(&mut r, kernel.dim(), 0.5, 2.0);
        let idx = plan.ordering().enumerate(p);
        let radial = kernel.derivatives_radial(&x, &idx).unwrap();
        let rebuilt = plan.decompress(&plan.restrict(&radial).unwrap()).unwrap();
        prop_assert!(common::rel_err_on(&idx, &rebuilt, &radial) < 1e-10);
    }

    #[test]
    fn fft_convolution_matches_brute_force(n0 in 1usize..12, n1 in 1usize..8, seed in any::<u64>()) {
        let shape = vec![n0, n1];
        let len = n0 * n1;
        let mut r = common::rng(seed);
        let k = common::random_weights(&mut r, len);
        let x = common::random_weights(&mut r, len);
        let ks = dft_forward(&GridTensor::from_data(&shape, k.clone()).unwrap());
        let got = circulant_convolve(&ks, &GridTensor::from_data(&shape, x.clone()).unwrap()).unwrap();
        for a in 0..n0 {
            for b in 0..n1 {
                let mut acc = Complex64::new(0.0, 0.0);
                for u in 0..n0 {
                    for v in 0..n1 {
                        acc += k[((a + n0 - u) % n0) * n1 + (b + n1 - v) % n1] * x[u * n1 + v];
                    }
                }
                prop_assert!((acc - got.data[a * n1 + b]).norm() < 1e-12 * len as f64);
            }
        }
    }

    #[test]
    fn nd_fft_round_trips(shape in proptest::collection::vec(1usize..20, 1..4), seed in any::<u64>()) {
        let fft = NdFft::new(&shape);
        let mut r = common::rng(seed);
        let x = common::random_weights(&mut r, fft.len());
        let mut y = x.clone();
        fft.forward(&mut y);
        fft.inverse(&mut y);
        prop_assert!(common::rel_vec(&y, &x) < 1e-13);
    }

    #[test]
    fn potentials_are_linear_in_weights(w1 in complex_vec(5), w2 in complex_vec(5), a in -2.0f64..2.0) {
        let k = Kernel::Helmholtz2d { kappa: 1.0 };
        let src = [0.1, 0.1, 0.2, 0.5, 0.9, 0.3, 0.4, 0.4, 0.7, 0.8];
        let tgt = [0.5, 0.5, 0.05, 0.95];
        let combo: Vec<Complex64> = w1.iter().zip(&w2).map(|(x, y)| x * a + y).collect();
        let f = |w: &[Complex64]| cfmm_core::fmm::direct_reference(&k, &src, w, &tgt).unwrap();
        let (u, v, c) = (f(&w1), f(&w2), f(&combo));
        for i in 0..2 {
            prop_assert!((u[i] * a + v[i] - c[i]).norm() < 1e-12);
        }
    }
}
