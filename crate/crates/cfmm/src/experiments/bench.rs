//! End-to-end FMM benchmark on uniformly random points in the unit box.
//!
//! Sources and targets coincide. Errors are measured against direct
//! summation on a prefix of the targets: `max_rel_err = max|u − v| / max|v|`
//! and `l2_rel_err = ‖u − v‖ / ‖v‖`.

use std::time::Instant;

use cfmm_core::fmm::{build_tree, evaluate_fmm, M2lMode, RootBox};
use cfmm_core::{CompressionPlan, Complex64, Counted, Kernel};
use rand::Rng;

use super::{direct_parallel, rng};
use crate::error::Result;
use crate::flops::measure;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub kernel: Kernel,
    pub order: usize,
    /// Tree depth; chosen from `N` when absent.
    pub depth: Option<usize>,
    pub sizes: Vec<usize>,
    pub seed: u64,
    pub modes: Vec<M2lMode>,
    /// Targets checked against direct summation.
    pub samples: usize,
    /// Timed runs per point; the fastest is reported.
    pub repeats: usize,
    pub count_flops: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub p: usize,
    pub depth: usize,
    pub mode: &'static str,
    pub max_rel_err: f64,
    pub l2_rel_err: f64,
    pub wall_ms: f64,
    pub flops: u64,
}

pub fn mode_name(mode: M2lMode) -> &'static str {
    match mode {
        M2lMode::Direct => "direct",
        M2lMode::Fft => "fft",
    }
}

/// About 40 points per leaf box, and at least two levels.
pub fn default_depth(n: usize, d: usize) -> usize {
    let leaves = (n as f64 / 40.0).max(1.0);
    let depth = (leaves.ln() / (d as f64 * 2f64.ln())).round() as usize;
    depth.max(2)
}

/// `n` points uniform in `[0, 1)^d` and strengths uniform in `[0, 1)`.
pub fn random_problem(n: usize, d: usize, seed: u64) -> (Vec<f64>, Vec<Complex64>) {
    let mut r = rng(seed);
    let points: Vec<f64> = (0..n * d).map(|_| r.gen::<f64>()).collect();
    let weights = (0..n).map(|_| Complex64::new(r.gen::<f64>(), 0.0)).collect();
    (points, weights)
}

pub fn run_fmm_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let d = cfg.kernel.dim();
    let plan = CompressionPlan::new(&cfg.kernel.pde(), cfg.order)?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let depth = cfg.depth.unwrap_or_else(|| default_depth(n, d));
        let (points, weights) = random_problem(n, d, cfg.seed);
        let m = cfg.samples.min(n);
        let reference = direct_parallel(&cfg.kernel, &points, &weights, &points[..m * d])?;
        for &mode in &cfg.modes {
            let mut best = f64::INFINITY;
            let mut out = Vec::new();
            for _ in 0..cfg.repeats.max(1) {
                let start = Instant::now();
                let tree = build_tree(&points, &points, d, depth, &RootBox::unit(d))?;
                out = evaluate_fmm(&tree, &cfg.kernel, &plan, &weights, mode)?;
                best = best.min(start.elapsed().as_secs_f64() * 1e3);
            }
            let flops = if cfg.count_flops {
                let tree = build_tree(&points, &points, d, depth, &RootBox::unit(d))?;
                let w: Vec<Counted> = weights.iter().map(|&v| Counted(v)).collect();
                let (res, tally) = measure(|| evaluate_fmm(&tree, &cfg.kernel, &plan, &w, mode));
                res?;
                tally.flops()
            } else {
                0
            };
            let (max_rel_err, l2_rel_err) = errors(&out[..m], &reference);
            rows.push(BenchRow { n, p: cfg.order, depth, mode: mode_name(mode), max_rel_err, l2_rel_err, wall_ms: best, flops });
        }
    }
    Ok(rows)
}

fn errors(got: &[Complex64], want: &[Complex64]) -> (f64, f64) {
    let (mut num, mut den, mut max_err, mut max_ref) = (0.0, 0.0, 0.0f64, 0.0f64);
    for (g, w) in got.iter().zip(want) {
        let e = (g - w).norm();
        num += e * e;
        den += w.norm_sqr();
        max_err = max_err.max(e);
        max_ref = max_ref.max(w.norm());
    }
    (max_err / max_ref, (num / den).sqrt())
}
