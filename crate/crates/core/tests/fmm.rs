mod common;

use cfmm_core::fmm::{build_tree, direct_reference, evaluate_fmm, offset_classes, M2lMode, RootBox};
use cfmm_core::{Complex64, CompressionPlan, Kernel};
use common::*;
use rand::Rng;

fn uniform_points(r: &mut rand_chacha::ChaCha8Rng, n: usize, d: usize) -> Vec<f64> {
    (0..n * d).map(|_| r.gen_range(0.0..1.0)).collect()
}

fn errors(got: &[Complex64], want: &[Complex64]) -> (f64, f64) {
    let scale = want.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let max = got.iter().zip(want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale;
    (max, rel_vec(got, want))
}

#[test]
fn offset_class_counts() {
    assert_eq!(offset_classes(2).len(), 40);
    assert_eq!(offset_classes(3).len(), 316);
}

#[test]
fn boundary_points_go_to_the_lower_child() {
    let tree = build_tree(&[0.5, 0.5], &[0.5, 0.5], 2, 2, &RootBox::unit(2)).unwrap();
    // leaf (1, 1) of the 4 × 4 grid
    assert_eq!(tree.source_bins().leaf(5), &[0]);
}

#[test]
fn binning_preserves_counts_and_keeps_duplicates_together() {
    let mut r = rng(31);
    let mut pts = uniform_points(&mut r, 500, 3);
    pts.extend_from_slice(&[0.3, 0.3, 0.3, 0.3, 0.3, 0.3]);
    let tree = build_tree(&pts, &pts, 3, 3, &RootBox::unit(3)).unwrap();
    let bins = tree.source_bins();
    let total: usize = (0..tree.boxes(3)).map(|b| bins.count(b)).sum();
    assert_eq!(total, 502);
    let leaf_of = |i: usize| (0..tree.boxes(3)).find(|&b| bins.leaf(b).contains(&i)).unwrap();
    assert_eq!(leaf_of(500), leaf_of(501));
}

#[test]
fn points_outside_the_root_are_rejected() {
    assert!(build_tree(&[1.5, 0.5], &[], 2, 2, &RootBox::unit(2)).is_err());
    assert!(build_tree(&[0.5, 0.5], &[], 2, 1, &RootBox::unit(2)).is_err());
}

#[test]
fn interaction_lists_have_the_classic_size() {
    let tree = build_tree(&[], &[], 2, 4, &RootBox::unit(2)).unwrap();
    let interior = 5 * 16 + 6;
    assert_eq!(tree.interaction_list(4, interior).len(), 27);
    let tree = build_tree(&[], &[], 3, 3, &RootBox::unit(3)).unwrap();
    let interior = (2 * 8 + 2) * 8 + 2;
    assert_eq!(tree.interaction_list(3, interior).len(), 189);
}

#[test]
fn laplace2d_fmm_matches_direct_summation() {
    let mut r = rng(32);
    let kernel = Kernel::Laplace2d;
    let pts = uniform_points(&mut r, 2000, 2);
    let w: Vec<Complex64> = (0..2000).map(|_| Complex64::new(r.gen_range(0.0..1.0), 0.0)).collect();
    let tree = build_tree(&pts, &pts, 2, 4, &RootBox::unit(2)).unwrap();
    let plan = CompressionPlan::new(&kernel.pde(), 10).unwrap();
    let want = direct_reference(&kernel, &pts, &w, &pts).unwrap();
    let fft = evaluate_fmm(&tree, &kernel, &plan, &w, M2lMode::Fft).unwrap();
    let direct = evaluate_fmm(&tree, &kernel, &plan, &w, M2lMode::Direct).unwrap();
    let (max, l2) = errors(&fft, &want);
    eprintln!("laplace2d N=2000 p=10: max {max:e} l2 {l2:e}, modes {:e}", rel_vec(&fft, &direct));
    assert!(max <= 1e-7);
    assert!(rel_vec(&fft, &direct) <= 1e-10);
}

#[test]
fn every_kernel_runs_through_the_fmm() {
    let mut r = rng(33);
    for kernel in all_kernels() {
        let d = kernel.dim();
        let n = 300;
        let src = uniform_points(&mut r, n, d);
        let tgt = uniform_points(&mut r, 100, d);
        let w = random_weights(&mut r, n);
        let tree = build_tree(&src, &tgt, d, 2 + (d == 2) as usize, &RootBox::unit(d)).unwrap();
        let plan = CompressionPlan::new(&kernel.pde(), 8).unwrap();
        let want = direct_reference(&kernel, &src, &w, &tgt).unwrap();
        let got = evaluate_fmm(&tree, &kernel, &plan, &w, M2lMode::Fft).unwrap();
        let (_, l2) = errors(&got, &want);
        assert!(l2 < 1e-4, "{}: {l2:e}", kernel.id());
    }
}

#[test]
fn zero_weights_give_zero_potentials() {
    let mut r = rng(34);
    let pts = uniform_points(&mut r, 200, 2);
    let w = vec![Complex64::new(0.0, 0.0); 200];
    let tree = build_tree(&pts, &pts, 2, 3, &RootBox::unit(2)).unwrap();
    let plan = CompressionPlan::new(&Kernel::Laplace2d.pde(), 6).unwrap();
    let got = evaluate_fmm(&tree, &Kernel::Laplace2d, &plan, &w, M2lMode::Fft).unwrap();
    assert!(got.iter().all(|v| v.norm() == 0.0));
}

#[test]
fn mismatched_plan_is_rejected() {
    let tree = build_tree(&[0.1, 0.1], &[0.9, 0.9], 2, 2, &RootBox::unit(2)).unwrap();
    let plan = CompressionPlan::new(&Kernel::Biharmonic2d.pde(), 6).unwrap();
    let w = [Complex64::new(1.0, 0.0)];
    assert!(evaluate_fmm(&tree, &Kernel::Laplace2d, &plan, &w, M2lMode::Fft).is_err());
}

#[test]
fn direct_reference_basics() {
    let k = Kernel::Laplace3d;
    let y = [0.1, 0.2, 0.3];
    let x = [0.7, -0.2, 0.4];
    let w = [Complex64::new(2.0, 0.0)];
    let v = direct_reference(&k, &y, &w, &x).unwrap()[0];
    assert!((v - k.eval(&[0.6, -0.4, 0.1]).unwrap() * 2.0).norm() < 1e-15);
    let v_rev = direct_reference(&k, &x, &w, &y).unwrap()[0];
    assert!((v - v_rev).norm() < 1e-15);
    // coincident pairs are skipped
    assert_eq!(direct_reference(&k, &y, &w, &y).unwrap()[0], Complex64::new(0.0, 0.0));
}
