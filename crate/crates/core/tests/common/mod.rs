#![allow(dead_code)]

use cfmm_core::{Complex64, GradedOrdering, Kernel, MultiIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn all_kernels() -> Vec<Kernel> {
    vec![
        Kernel::Laplace2d,
        Kernel::Laplace3d,
        Kernel::Biharmonic2d,
        Kernel::Helmholtz2d { kappa: 1.3 },
        Kernel::Helmholtz3d { kappa: 0.9 },
    ]
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction with radius uniform in `[r_lo, r_hi]`.
pub fn point_in_shell(rng: &mut ChaCha8Rng, d: usize, r_lo: f64, r_hi: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            let r = rng.gen_range(r_lo..r_hi);
            return v.iter().map(|x| x / n * r).collect();
        }
    }
}

pub fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Largest per-degree relative discrepancy: for each total degree the error is
/// measured against the largest reference entry of that degree.
pub fn rel_err_by_degree(ordering: GradedOrdering, order: usize, got: &[Complex64], want: &[Complex64]) -> f64 {
    let idx = ordering.enumerate(order);
    assert_eq!(idx.len(), got.len());
    assert_eq!(idx.len(), want.len());
    let mut worst: f64 = 0.0;
    for n in 0..=order {
        let (mut num, mut den): (f64, f64) = (0.0, 0.0);
        for (k, m) in idx.iter().enumerate() {
            if m.order() == n {
                num = num.max((got[k] - want[k]).norm());
                den = den.max(want[k].norm());
            }
        }
        if den > 0.0 {
            worst = worst.max(num / den);
        } else {
            worst = worst.max(num);
        }
    }
    worst
}

/// Same measure restricted to a list of multi-indices.
pub fn rel_err_on(indices: &[MultiIndex], got: &[Complex64], want: &[Complex64]) -> f64 {
    let max_n = indices.iter().map(|m| m.order()).max().unwrap_or(0);
    let mut worst: f64 = 0.0;
    for n in 0..=max_n {
        let (mut num, mut den): (f64, f64) = (0.0, 0.0);
        for (k, m) in indices.iter().enumerate() {
            if m.order() == n {
                num = num.max((got[k] - want[k]).norm());
                den = den.max(want[k].norm());
            }
        }
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    worst
}

pub fn rel_vec(got: &[Complex64], want: &[Complex64]) -> f64 {
    let num: f64 = got.iter().zip(want).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = want.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}
