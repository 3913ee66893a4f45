#![allow(dead_code)]

use cfmm_core::{Complex64, Kernel, MultiIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn all_kernels() -> Vec<Kernel> {
    vec![
        Kernel::Laplace2d,
        Kernel::Laplace3d,
        Kernel::Biharmonic2d,
        Kernel::Helmholtz2d { kappa: 1.0 },
        Kernel::Helmholtz3d { kappa: 1.0 },
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

pub fn random_box(rng: &mut ChaCha8Rng, n: usize, d: usize, half: f64) -> Vec<f64> {
    (0..n * d).map(|_| rng.gen_range(-half..half)).collect()
}

/// Largest per-degree relative discrepancy over the given multi-indices: each
/// error is measured against the largest reference entry of the same degree.
pub fn rel_err_by_degree(indices: &[MultiIndex], got: &[Complex64], want: &[Complex64]) -> f64 {
    assert_eq!(indices.len(), got.len());
    assert_eq!(indices.len(), want.len());
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
        worst = worst.max(if den > 0.0 { num / den } else { num });
    }
    worst
}

pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    linear_slope(&xs.iter().map(|v| v.ln()).collect::<Vec<_>>(), &ys.iter().map(|v| v.ln()).collect::<Vec<_>>())
}

/// Least-squares slope of `ys` against `xs`.
pub fn linear_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
