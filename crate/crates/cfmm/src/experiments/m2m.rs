//! Compressed versus uncompressed multipole-to-multipole translation.
//!
//! Sources fill a grid of side `2R` centered at `c₁ = (R,…,R)`; the multipole
//! expansion about `c₁` (radius `√d·R`) is shifted to `c₂ = 0` (radius
//! `2√d·R`) and evaluated on a grid of side 1 centered at `(1,…,1)`.

use cfmm_core::expansions::{p2m, p2m_uncompressed};
use cfmm_core::translations::{m2m, m2m_uncompressed};
use cfmm_core::{CompressionPlan, Complex64, Kernel};
use rayon::prelude::*;

use super::{direct_parallel, grid_points, plan_for, strengths};
use crate::config::ExperimentConfig;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct M2mRow {
    pub kernel: String,
    pub p: usize,
    pub radius: f64,
    pub eps_rel: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KappaRow {
    pub kernel: String,
    pub p: usize,
    pub kappa: f64,
    pub eps_rel: f64,
    pub eps_trunc: f64,
}

/// Translated expansions for one `R`.
struct Shifted {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
}

fn shifted(kernel: &Kernel, plan: &CompressionPlan, r: f64, n: usize, seed: u64) -> Result<Shifted> {
    let d = kernel.dim();
    let c1 = vec![r; d];
    let c2 = vec![0.0; d];
    let sources = grid_points(d, n, r, 2.0 * r);
    let weights = strengths(seed, n.pow(d as u32));
    let r1 = (d as f64).sqrt() * r;
    let full = p2m_uncompressed(&sources, &weights, &c1, r1, plan)?;
    let alpha = m2m_uncompressed(&full, &c2, plan)?.alpha;
    let comp = p2m(&sources, &weights, &c1, r1, plan)?;
    let beta = m2m(&comp, &c2, plan)?.beta;
    Ok(Shifted { alpha, beta })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn targets(d: usize, n: usize) -> Vec<f64> {
    grid_points(d, n, 1.0, 1.0)
}

/// `(uncompressed, compressed)` potentials of every shifted expansion at
/// every target, indexed `[target][expansion]`.
fn evaluate(kernel: &Kernel, plan: &CompressionPlan, shifts: &[Shifted], n: usize) -> Result<Vec<Vec<(Complex64, Complex64)>>> {
    let d = kernel.dim();
    targets(d, n)
        .par_chunks(d)
        .map(|x| {
            let full = kernel.derivatives_full_scalar::<Complex64>(x, plan)?;
            let comp = kernel.derivatives_compressed_scalar::<Complex64>(x, plan)?;
            Ok(shifts.iter().map(|s| (dot(&full, &s.alpha), dot(&comp, &s.beta))).collect())
        })
        .collect()
}

fn rel_l2(pairs: impl Iterator<Item = (Complex64, Complex64)>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (got, want) in pairs {
        num += (got - want).norm_sqr();
        den += want.norm_sqr();
    }
    (num / den).sqrt()
}

/// ε_rel for every `(p, R)` of the configuration. Orders below the PDE order
/// have nothing to compress and are skipped.
pub fn run_m2m_accuracy(cfg: &ExperimentConfig) -> Result<Vec<M2mRow>> {
    let kernel = cfg.kernel()?;
    let radii = cfg.radii()?;
    let mut rows = Vec::new();
    for &p in &cfg.orders {
        let Some(plan) = plan_for(&kernel, p)? else { continue };
        let shifts = radii
            .par_iter()
            .map(|&r| shifted(&kernel, &plan, r, cfg.grid, cfg.seed))
            .collect::<Result<Vec<_>>>()?;
        let values = evaluate(&kernel, &plan, &shifts, cfg.grid)?;
        for (k, &r) in radii.iter().enumerate() {
            let eps_rel = rel_l2(values.iter().map(|v| (v[k].1, v[k].0)));
            rows.push(M2mRow { kernel: kernel.id().into(), p, radius: r, eps_rel });
        }
    }
    Ok(rows)
}

/// ε_rel and ε_trunc at fixed `R = cfg.radius` over the wavenumber sweep.
pub fn run_m2m_kappa(cfg: &ExperimentConfig) -> Result<Vec<KappaRow>> {
    let kappas = cfg.kappas()?;
    let r = cfg.radius;
    let mut rows = Vec::new();
    for &kappa in &kappas {
        let kernel = cfg.kernel_with(Some(kappa))?;
        if kernel.kappa().is_none() {
            return Err(crate::HarnessError::Config(format!("`{}` has no wavenumber to sweep", cfg.kernel)));
        }
        let exact = direct_potentials(&kernel, r, cfg.grid, cfg.seed)?;
        for &p in &cfg.orders {
            let Some(plan) = plan_for(&kernel, p)? else { continue };
            let shift = shifted(&kernel, &plan, r, cfg.grid, cfg.seed)?;
            let values = evaluate(&kernel, &plan, std::slice::from_ref(&shift), cfg.grid)?;
            let eps_rel = rel_l2(values.iter().map(|v| (v[0].1, v[0].0)));
            let eps_trunc = rel_l2(values.iter().zip(&exact).map(|(v, &e)| (v[0].0, e)));
            rows.push(KappaRow { kernel: kernel.id().into(), p, kappa, eps_rel, eps_trunc });
        }
    }
    Ok(rows)
}

/// `Σ_y w_y G(x − y)` at every target.
fn direct_potentials(kernel: &Kernel, r: f64, n: usize, seed: u64) -> Result<Vec<Complex64>> {
    let d = kernel.dim();
    let sources = grid_points(d, n, r, 2.0 * r);
    let weights = strengths(seed, n.pow(d as u32));
    direct_parallel(kernel, &sources, &weights, &targets(d, n))
}
