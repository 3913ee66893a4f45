mod common;

use cfmm_core::expansions::*;
use cfmm_core::translations::{self, naive};
use cfmm_core::{Complex64, CompressionPlan, Kernel};
use common::*;
use rand::Rng;

fn plans() -> Vec<(Kernel, usize, CompressionPlan)> {
    let mut out = Vec::new();
    for kernel in all_kernels() {
        for p in [2usize, 4, 6, 8] {
            if p >= kernel.pde().order() {
                out.push((kernel, p, CompressionPlan::new(&kernel.pde(), p).unwrap()));
            }
        }
    }
    out
}

fn random_vec(r: &mut rand_chacha::ChaCha8Rng, d: usize, s: f64) -> Vec<f64> {
    (0..d).map(|_| r.gen_range(-s..s)).collect()
}

#[test]
fn fast_l2l_matches_naive() {
    let mut r = rng(21);
    for (kernel, _, plan) in plans() {
        let d = kernel.dim();
        for _ in 0..10 {
            let theta = random_weights(&mut r, plan.stored_len());
            let c1 = random_vec(&mut r, d, 1.0);
            let c2 = random_vec(&mut r, d, 1.0);
            let e = LocalExpansion { center: c1, radius: 1.0, order: plan.order(), theta };
            let fast = translations::l2l(&e, &c2, &plan).unwrap();
            let slow = naive::l2l(&e, &c2, &plan).unwrap();
            let err = rel_vec(&fast.theta, &slow.theta);
            assert!(err < 1e-12, "{} p={}: {err:e}", kernel.id(), plan.order());
        }
    }
}

#[test]
fn fast_m2m_matches_naive() {
    let mut r = rng(22);
    for (kernel, _, plan) in plans() {
        let d = kernel.dim();
        for _ in 0..10 {
            let beta = random_weights(&mut r, plan.stored_len());
            let c1 = random_vec(&mut r, d, 1.0);
            let c2 = random_vec(&mut r, d, 1.0);
            let e = MultipoleExpansion { center: c1, radius: 0.5, order: plan.order(), beta };
            let fast = translations::m2m(&e, &c2, &plan).unwrap();
            let slow = naive::m2m(&e, &c2, &plan).unwrap();
            let err = rel_vec(&fast.beta, &slow.beta);
            assert!(err < 1e-12, "{} p={}: {err:e}", kernel.id(), plan.order());
            assert!((fast.radius - slow.radius).abs() < 1e-15);
        }
    }
}

#[test]
fn fft_m2l_matches_direct() {
    let mut r = rng(23);
    for (kernel, p, plan) in plans() {
        let d = kernel.dim();
        let idx: Vec<_> = plan.stored_indices().collect();
        for _ in 0..5 {
            // well separated boxes of side 1: offset in [2, 3] along one axis
            let mut offset = random_vec(&mut r, d, 1.0);
            offset[0] = r.gen_range(2.0..3.0);
            let dist = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
            let derivs = kernel.derivatives_full(&offset, 2 * p, plan.ordering()).unwrap().values;
            let table = translations::m2l_precompute(&plan, &kernel, &offset, kernel.default_m2l_scale(p, dist)).unwrap();
            assert_eq!(table.fft_shape(), plan.fft_shape().as_slice());
            let src: Vec<f64> = (0..10 * d).map(|_| r.gen_range(-0.5..0.5)).collect();
            let w = random_weights(&mut r, 10);
            let e = p2m(&src, &w, &vec![0.0; d], 0.5 * (d as f64).sqrt(), &plan).unwrap();
            let direct = translations::m2l_direct(&e, &offset, 0.5, &plan, &derivs).unwrap();
            let fast = translations::m2l_apply(&table, &e, 0.5, &plan).unwrap();
            let err = rel_err_on(&idx, &fast.theta, &direct.theta);
            assert!(err < 1e-11, "{} p={p}: {err:e}", kernel.id());
            assert_eq!(fast.center, direct.center);
        }
    }
}

#[test]
fn m2l_of_a_delta_gives_the_derivatives() {
    let kernel = Kernel::Laplace3d;
    let plan = CompressionPlan::new(&kernel.pde(), 5).unwrap();
    let offset = [2.5, 0.5, -0.5];
    let derivs = kernel.derivatives_full(&offset, 10, plan.ordering()).unwrap().values;
    let mut e = MultipoleExpansion::<Complex64>::zero(&[0.0; 3], 0.5, &plan);
    e.beta[0] = Complex64::new(1.0, 0.0);
    let direct = translations::m2l_direct(&e, &offset, 0.5, &plan, &derivs).unwrap();
    let want = kernel.derivatives_compressed(&offset, &plan).unwrap().values;
    assert!(rel_vec(&direct.theta, &want) < 1e-14);
}

#[test]
fn compressed_multipole_is_a_lossless_pairing() {
    // ⟨D_j G, Mᵀα⟩ = ⟨M D_j G, α⟩ = ⟨D G, α⟩ for any α
    let mut r = rng(24);
    for (kernel, p, plan) in plans() {
        let d = kernel.dim();
        let src: Vec<f64> = (0..6 * d).map(|_| r.gen_range(-0.3..0.3)).collect();
        let w = random_weights(&mut r, 6);
        let full = p2m_uncompressed(&src, &w, &vec![0.0; d], 0.6, &plan).unwrap();
        let comp = compress_multipole(&full, &plan).unwrap();
        let x = point_in_shell(&mut r, d, 1.5, 2.5);
        let a = m2p(&comp, &x, &kernel, &plan).unwrap();
        let b = m2p_uncompressed(&full, &x, &kernel, &plan).unwrap();
        assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300), "{} p={p}", kernel.id());
    }
}

#[test]
fn compressed_m2m_agrees_with_uncompressed_translation() {
    let mut r = rng(25);
    for (kernel, p, plan) in plans().into_iter().filter(|(k, _, _)| k.kappa().is_none()) {
        let d = kernel.dim();
        let src: Vec<f64> = (0..8 * d).map(|_| r.gen_range(0.0..0.2)).collect();
        let w = random_weights(&mut r, 8);
        let c1 = vec![0.1; d];
        let c2 = vec![0.0; d];
        let full = p2m_uncompressed(&src, &w, &c1, 0.2, &plan).unwrap();
        let comp = compress_multipole(&full, &plan).unwrap();
        let shifted_full = translations::m2m_uncompressed(&full, &c2, &plan).unwrap();
        let shifted = translations::m2m(&comp, &c2, &plan).unwrap();
        let x = vec![1.0; d];
        let a = m2p(&shifted, &x, &kernel, &plan).unwrap();
        let b = m2p_uncompressed(&shifted_full, &x, &kernel, &plan).unwrap();
        assert!((a - b).norm() <= 1e-12 * b.norm(), "{} p={p}: {:e}", kernel.id(), (a - b).norm() / b.norm());
    }
}

#[test]
fn compressed_l2l_agrees_with_uncompressed_translation() {
    let mut r = rng(26);
    for (kernel, p, plan) in plans().into_iter().filter(|(k, _, _)| k.kappa().is_none()) {
        let d = kernel.dim();
        let src: Vec<f64> = (0..5 * d).map(|_| r.gen_range(3.0..4.0)).collect();
        let w = random_weights(&mut r, 5);
        let c1 = vec![0.0; d];
        let c2 = vec![0.2; d];
        let full = p2l_uncompressed(&src, &w, &c1, 0.5, &plan, &kernel).unwrap();
        let comp = compress_local(&full, &plan).unwrap();
        let a_exp = translations::l2l(&comp, &c2, &plan).unwrap();
        let b_exp = translations::l2l_uncompressed(&full, &c2, &plan).unwrap();
        let x = vec![0.25; d];
        let a = l2p(&a_exp, &x, &plan).unwrap();
        let b = l2p_uncompressed(&b_exp, &x, &plan).unwrap();
        assert!((a - b).norm() <= 1e-12 * b.norm(), "{} p={p}", kernel.id());
    }
}

#[test]
fn m2p_rejects_targets_inside_the_ball() {
    let plan = CompressionPlan::new(&Kernel::Laplace2d.pde(), 4).unwrap();
    let e = MultipoleExpansion::<Complex64>::zero(&[0.0, 0.0], 1.0, &plan);
    assert!(m2p(&e, &[0.5, 0.0], &Kernel::Laplace2d, &plan).is_err());
    assert!(m2p(&e, &[1.5, 0.0], &Kernel::Laplace2d, &plan).is_ok());
}

#[test]
fn zero_shift_is_the_identity() {
    let mut r = rng(27);
    for (kernel, _, plan) in plans() {
        let d = kernel.dim();
        let beta = random_weights(&mut r, plan.stored_len());
        let c = random_vec(&mut r, d, 1.0);
        let m = MultipoleExpansion { center: c.clone(), radius: 0.5, order: plan.order(), beta: beta.clone() };
        let l = LocalExpansion { center: c.clone(), radius: 0.5, order: plan.order(), theta: beta.clone() };
        assert!(rel_vec(&translations::m2m(&m, &c, &plan).unwrap().beta, &beta) < 1e-15);
        assert!(rel_vec(&translations::l2l(&l, &c, &plan).unwrap().theta, &beta) < 1e-15);
    }
}
