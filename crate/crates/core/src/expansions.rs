//! Formation and evaluation of compressed multipole and local expansions,
//! with the uncompressed counterparts used as references.
//!
//! Multipole coefficients carry the factorials: `α_i = Σ w (c−y)^{ν(i)}/ν(i)!`
//! and `β = Mᵀα`. Local coefficients are plain derivatives:
//! `θ = Σ w D_j G(c−y)`, and `l2p` divides by `ν!` while evaluating.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::kernels::Kernel;
use crate::multiindex::IndexTable;
use crate::plan::CompressionPlan;
use crate::{Error, Result, Scalar};

/// Compressed multipole expansion `β = Mᵀα` about `center`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultipoleExpansion<S = Complex64> {
    pub center: Vec<f64>,
    pub radius: f64,
    pub order: usize,
    pub beta: Vec<S>,
}

/// Compressed local expansion: derivatives of the far field at `center` on `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalExpansion<S = Complex64> {
    pub center: Vec<f64>,
    pub radius: f64,
    pub order: usize,
    pub theta: Vec<S>,
}

/// Uncompressed multipole moments `α` (length `N(p)`).
#[derive(Clone, Debug, PartialEq)]
pub struct FullMultipole<S = Complex64> {
    pub center: Vec<f64>,
    pub radius: f64,
    pub order: usize,
    pub alpha: Vec<S>,
}

/// Uncompressed local expansion: all derivatives `|m| ≤ p` at `center`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullLocal<S = Complex64> {
    pub center: Vec<f64>,
    pub radius: f64,
    pub order: usize,
    pub derivs: Vec<S>,
}

impl<S: Scalar> MultipoleExpansion<S> {
    pub fn zero(center: &[f64], radius: f64, plan: &CompressionPlan) -> Self {
        MultipoleExpansion { center: center.to_vec(), radius, order: plan.order(), beta: vec![S::zero(); plan.stored_len()] }
    }
}

impl<S: Scalar> LocalExpansion<S> {
    pub fn zero(center: &[f64], radius: f64, plan: &CompressionPlan) -> Self {
        LocalExpansion { center: center.to_vec(), radius, order: plan.order(), theta: vec![S::zero(); plan.stored_len()] }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_sources<S>(d: usize, sources: &[f64], weights: &[S]) -> Result<()> {
    if sources.len() != weights.len() * d {
        return Err(Error::LengthMismatch { expected: weights.len() * d, found: sources.len() });
    }
    Ok(())
}

/// `v^{ν(i)} / ν(i)!` for every position of `table`, one multiplication by a
/// coordinate and one real scaling per entry.
pub fn scaled_monomials<S: Scalar>(table: &IndexTable, v: &[S], out: &mut [S]) {
    out[0] = S::one();
    for pos in 1..table.len() {
        let (parent, axis) = table.parent(pos);
        let k = table.index(pos).get(axis);
        let t = out[parent] * v[axis];
        out[pos] = if k == 1 { t } else { t.scale(1.0 / k as f64) };
    }
}

/// `v^{ν(i)}` for every position of `table`.
pub fn monomials<S: Scalar>(table: &IndexTable, v: &[S], out: &mut [S]) {
    out[0] = S::one();
    for pos in 1..table.len() {
        let (parent, axis) = table.parent(pos);
        out[pos] = out[parent] * v[axis];
    }
}

fn diff<S: Scalar>(a: &[f64], b: &[f64]) -> Vec<S> {
    a.iter().zip(b).map(|(x, y)| S::from_f64(x - y)).collect()
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let mut acc = S::zero();
    for (&x, &y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Uncompressed moments `α` of the given sources about `center`.
pub fn p2m_uncompressed<S: Scalar>(
    sources: &[f64],
    weights: &[S],
    center: &[f64],
    radius: f64,
    plan: &CompressionPlan,
) -> Result<FullMultipole<S>> {
    let d = plan.dim();
    check_dim(d, center.len())?;
    check_sources(d, sources, weights)?;
    let table = plan.table();
    let mut alpha = vec![S::zero(); table.len()];
    let mut mono = vec![S::zero(); table.len()];
    for (y, &w) in sources.chunks_exact(d).zip(weights) {
        let v: Vec<S> = diff(center, y);
        scaled_monomials(table, &v, &mut mono);
        for (a, &m) in alpha.iter_mut().zip(&mono) {
            *a += w * m;
        }
    }
    Ok(FullMultipole { center: center.to_vec(), radius, order: plan.order(), alpha })
}

/// Compressed multipole expansion: `β = Mᵀα`.
pub fn p2m<S: Scalar>(
    sources: &[f64],
    weights: &[S],
    center: &[f64],
    radius: f64,
    plan: &CompressionPlan,
) -> Result<MultipoleExpansion<S>> {
    let full = p2m_uncompressed(sources, weights, center, radius, plan)?;
    Ok(MultipoleExpansion {
        center: full.center,
        radius,
        order: full.order,
        beta: plan.decompress_transpose(&full.alpha)?,
    })
}

fn check_outside(center: &[f64], radius: f64, x: &[f64]) -> Result<()> {
    let dist2: f64 = center.iter().zip(x).map(|(c, v)| (v - c) * (v - c)).sum();
    if dist2 <= radius * radius {
        return Err(Error::Invalid("target inside the multipole expansion ball"));
    }
    Ok(())
}

/// `⟨D_j G(x − c), β⟩`.
pub fn m2p<S: Scalar>(expansion: &MultipoleExpansion<S>, x: &[f64], kernel: &Kernel, plan: &CompressionPlan) -> Result<S> {
    check_dim(plan.dim(), x.len())?;
    check_len(expansion.beta.len(), plan.stored_len())?;
    check_outside(&expansion.center, expansion.radius, x)?;
    let rel: Vec<f64> = x.iter().zip(&expansion.center).map(|(a, c)| a - c).collect();
    let d = kernel.derivatives_compressed_scalar::<S>(&rel, plan)?;
    Ok(dot(&d, &expansion.beta))
}

/// `⟨D G(x − c), α⟩` over all `|m| ≤ p`.
pub fn m2p_uncompressed<S: Scalar>(expansion: &FullMultipole<S>, x: &[f64], kernel: &Kernel, plan: &CompressionPlan) -> Result<S> {
    check_dim(plan.dim(), x.len())?;
    check_len(expansion.alpha.len(), plan.full_len())?;
    check_outside(&expansion.center, expansion.radius, x)?;
    let rel: Vec<f64> = x.iter().zip(&expansion.center).map(|(a, c)| a - c).collect();
    let d = kernel.derivatives_full_scalar::<S>(&rel, plan)?;
    Ok(dot(&d, &expansion.alpha))
}

pub(crate) fn check_len(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::LengthMismatch { expected, found });
    }
    Ok(())
}

/// `θ = Σ w D_j G(c − y)`.
pub fn p2l<S: Scalar>(
    sources: &[f64],
    weights: &[S],
    center: &[f64],
    radius: f64,
    plan: &CompressionPlan,
    kernel: &Kernel,
) -> Result<LocalExpansion<S>> {
    let d = plan.dim();
    check_dim(d, center.len())?;
    check_sources(d, sources, weights)?;
    let mut theta = vec![S::zero(); plan.stored_len()];
    for (y, &w) in sources.chunks_exact(d).zip(weights) {
        let rel: Vec<f64> = center.iter().zip(y).map(|(c, v)| c - v).collect();
        let dv = kernel.derivatives_compressed_scalar::<S>(&rel, plan)?;
        for (t, &v) in theta.iter_mut().zip(&dv) {
            *t += w * v;
        }
    }
    Ok(LocalExpansion { center: center.to_vec(), radius, order: plan.order(), theta })
}

/// All derivatives `Σ w D G(c − y)`, `|m| ≤ p`.
pub fn p2l_uncompressed<S: Scalar>(
    sources: &[f64],
    weights: &[S],
    center: &[f64],
    radius: f64,
    plan: &CompressionPlan,
    kernel: &Kernel,
) -> Result<FullLocal<S>> {
    let d = plan.dim();
    check_dim(d, center.len())?;
    check_sources(d, sources, weights)?;
    let mut derivs = vec![S::zero(); plan.full_len()];
    for (y, &w) in sources.chunks_exact(d).zip(weights) {
        let rel: Vec<f64> = center.iter().zip(y).map(|(c, v)| c - v).collect();
        let dv = kernel.derivatives_full_scalar::<S>(&rel, plan)?;
        for (t, &v) in derivs.iter_mut().zip(&dv) {
            *t += w * v;
        }
    }
    Ok(FullLocal { center: center.to_vec(), radius, order: plan.order(), derivs })
}

/// `Σ_i [Mθ]_i (x−c)^{ν(i)} / ν(i)!`.
pub fn l2p<S: Scalar>(expansion: &LocalExpansion<S>, x: &[f64], plan: &CompressionPlan) -> Result<S> {
    check_dim(plan.dim(), x.len())?;
    let full = plan.decompress(&expansion.theta)?;
    eval_full_local(&full, &expansion.center, x, plan)
}

pub fn l2p_uncompressed<S: Scalar>(expansion: &FullLocal<S>, x: &[f64], plan: &CompressionPlan) -> Result<S> {
    check_dim(plan.dim(), x.len())?;
    check_len(expansion.derivs.len(), plan.full_len())?;
    eval_full_local(&expansion.derivs, &expansion.center, x, plan)
}

fn eval_full_local<S: Scalar>(full: &[S], center: &[f64], x: &[f64], plan: &CompressionPlan) -> Result<S> {
    let v: Vec<S> = diff(x, center);
    let mut mono = vec![S::zero(); plan.full_len()];
    scaled_monomials(plan.table(), &v, &mut mono);
    Ok(dot(full, &mono))
}

/// Compressed local expansion from an uncompressed one (restriction to `j`).
pub fn compress_local<S: Scalar>(full: &FullLocal<S>, plan: &CompressionPlan) -> Result<LocalExpansion<S>> {
    Ok(LocalExpansion {
        center: full.center.clone(),
        radius: full.radius,
        order: full.order,
        theta: plan.restrict(&full.derivs)?,
    })
}

/// Compressed multipole expansion from moments: `β = Mᵀα`.
pub fn compress_multipole<S: Scalar>(full: &FullMultipole<S>, plan: &CompressionPlan) -> Result<MultipoleExpansion<S>> {
    Ok(MultipoleExpansion {
        center: full.center.clone(),
        radius: full.radius,
        order: full.order,
        beta: plan.decompress_transpose(&full.alpha)?,
    })
}
