//! Experiment drivers. Every sweep point is computed independently and rows
//! come out in configuration order, so outputs do not depend on the thread count.

pub mod bench;
pub mod inspect;
pub mod m2m;
pub mod opcount;

use cfmm_core::{CompressionPlan, Complex64, Error, Kernel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;

/// Random generator behind every experiment: ChaCha8 seeded with `seed`.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` real strengths drawn uniformly from `[0, 1)`.
pub fn strengths(seed: u64, count: usize) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..count).map(|_| Complex64::new(r.gen::<f64>(), 0.0)).collect()
}

/// `n^d` points of the cube with the given center coordinate and side, the
/// last axis varying fastest.
pub fn grid_points(d: usize, n: usize, center: f64, side: f64) -> Vec<f64> {
    let coord = |i: usize| center - 0.5 * side + side * i as f64 / (n - 1) as f64;
    let total = n.pow(d as u32);
    let mut out = Vec::with_capacity(total * d);
    for k in 0..total {
        let mut rest = k;
        let mut point = [0.0; 3];
        for a in (0..d).rev() {
            point[a] = coord(rest % n);
            rest /= n;
        }
        out.extend_from_slice(&point[..d]);
    }
    out
}

/// Plan for `kernel` at order `p`, or `None` below the PDE order.
pub fn plan_for(kernel: &Kernel, p: usize) -> Result<Option<CompressionPlan>> {
    match CompressionPlan::new(&kernel.pde(), p) {
        Ok(plan) => Ok(Some(plan)),
        Err(Error::OrderBelowPde { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Direct summation split over targets.
pub fn direct_parallel(kernel: &Kernel, sources: &[f64], weights: &[Complex64], targets: &[f64]) -> Result<Vec<Complex64>> {
    let d = kernel.dim();
    let parts = targets
        .par_chunks(64 * d)
        .map(|chunk| cfmm_core::fmm::direct_reference(kernel, sources, weights, chunk))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(parts.concat())
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
