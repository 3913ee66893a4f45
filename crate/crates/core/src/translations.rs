//! Translation operators on compressed expansions.
//!
//! * [`l2l`]: slice by slice with one-dimensional partial sums along each axis.
//! * [`m2m`]: translate the zero-padded stored moments `Eβ` slice by slice,
//!   then recompress with `Mᵀ`.
//! * [`m2l_direct`] and [`m2l_apply`]: the Toeplitz sum
//!   `θ_η = Σ_{ζ∈ν(j)} G^{(η+ζ)}(c₂−c₁) β_ζ`, directly or through a circulant
//!   embedding of shape `(2M_1+1, …, 2M_d+1)`.
//!
//! All local expansions use the derivative convention, so the L2L weights are
//! `h^ζ/ζ!` just like the M2M weights.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::expansions::{check_dim, check_len, FullLocal, FullMultipole, LocalExpansion, MultipoleExpansion};
use crate::fft::NdFft;
use crate::kernels::Kernel;
use crate::multiindex::IndexTable;
use crate::plan::CompressionPlan;
use crate::{Error, Result, Scalar};

/// `h_a^ζ / ζ!` for `ζ = 0..=p`, one row per axis.
fn shift_weights<S: Scalar>(h: &[f64], p: usize) -> Vec<Vec<S>> {
    h.iter()
        .map(|&ha| {
            let hs = S::from_f64(ha);
            let mut w = Vec::with_capacity(p + 1);
            w.push(S::one());
            for z in 1..=p {
                let prev: S = w[z - 1];
                w.push((prev * hs).scale(1.0 / z as f64));
            }
            w
        })
        .collect()
}

fn displacement(from: &[f64], to: &[f64]) -> Vec<f64> {
    to.iter().zip(from).map(|(a, b)| a - b).collect()
}

/// Upward pass along `axis` restricted to `members`:
/// `out[m] = Σ_{ζ ≥ 0} src[m + ζ e_axis] w[ζ]`.
fn pass_up<S: Scalar>(table: &IndexTable, members: &[u32], axis: usize, w: &[S], src: &[S], out: &mut [S]) {
    let p = table.order();
    for &pos in members {
        let pos = pos as usize;
        let m = table.index(pos);
        let base = m.get(axis);
        let mut acc = src[pos];
        for z in 1..=(p - m.order()) {
            acc += src[table.with_component(pos, axis, base + z)] * w[z];
        }
        out[pos] = acc;
    }
}

/// Downward pass along `axis` restricted to `members`:
/// `out[q] = Σ_{i ≤ q_axis} src[q with axis → i] w[q_axis − i]`.
fn pass_down<S: Scalar>(table: &IndexTable, members: &[u32], axis: usize, w: &[S], src: &[S], out: &mut [S]) {
    for &pos in members {
        let pos = pos as usize;
        let qa = table.index(pos).get(axis);
        let mut acc = src[pos];
        for i in 0..qa {
            acc += src[table.with_component(pos, axis, i)] * w[qa - i];
        }
        out[pos] = acc;
    }
}

/// Local-to-local translation to `new_center`, `O(p^d)`.
pub fn l2l<S: Scalar>(expansion: &LocalExpansion<S>, new_center: &[f64], plan: &CompressionPlan) -> Result<LocalExpansion<S>> {
    let d = plan.dim();
    check_dim(d, new_center.len())?;
    let full = plan.decompress(&expansion.theta)?;
    let h = displacement(&expansion.center, new_center);
    let table = plan.table();
    let w = shift_weights::<S>(&h, plan.order());
    let mut theta = vec![S::zero(); plan.stored_len()];
    let mut a_buf = vec![S::zero(); plan.full_len()];
    let mut b_buf = vec![S::zero(); plan.full_len()];
    for (s, slice) in plan.slices().iter().enumerate() {
        let members = plan.slice_members(s);
        pass_up(table, members, slice.axis, &w[slice.axis], &full, &mut a_buf);
        for axis in (0..d).filter(|&a| a != slice.axis) {
            if h[axis] == 0.0 {
                continue;
            }
            pass_up(table, members, axis, &w[axis], &a_buf, &mut b_buf);
            core::mem::swap(&mut a_buf, &mut b_buf);
        }
        for (slot, &pos) in plan.j().iter().enumerate() {
            if plan.slice_assignment()[slot] as usize == s {
                theta[slot] = a_buf[pos];
            }
        }
    }
    Ok(LocalExpansion { center: new_center.to_vec(), radius: expansion.radius, order: expansion.order, theta })
}

/// Multipole-to-multipole translation to `new_center`, `O(p^d)`. The new
/// radius is `R + ‖c₂ − c₁‖`.
pub fn m2m<S: Scalar>(expansion: &MultipoleExpansion<S>, new_center: &[f64], plan: &CompressionPlan) -> Result<MultipoleExpansion<S>> {
    let d = plan.dim();
    check_dim(d, new_center.len())?;
    check_len(expansion.beta.len(), plan.stored_len())?;
    let h = displacement(&expansion.center, new_center);
    let p = plan.order();
    let table = plan.table();
    let w = shift_weights::<S>(&h, p);
    let mut sigma = vec![S::zero(); plan.full_len()];
    let mut a_buf = vec![S::zero(); plan.full_len()];
    let mut b_buf = vec![S::zero(); plan.full_len()];
    for (s, slice) in plan.slices().iter().enumerate() {
        let members = plan.slice_members(s);
        for &pos in members {
            a_buf[pos as usize] = S::zero();
        }
        let mut any = false;
        for (slot, &pos) in plan.j().iter().enumerate() {
            if plan.slice_assignment()[slot] as usize == s {
                a_buf[pos] = expansion.beta[slot];
                any = true;
            }
        }
        if !any {
            continue;
        }
        for axis in (0..d).filter(|&a| a != slice.axis) {
            if h[axis] == 0.0 {
                continue;
            }
            pass_down(table, members, axis, &w[axis], &a_buf, &mut b_buf);
            core::mem::swap(&mut a_buf, &mut b_buf);
        }
        let wl = &w[slice.axis];
        let lead_zero = h[slice.axis] == 0.0;
        for &pos in members {
            let pos = pos as usize;
            let tau = a_buf[pos];
            sigma[pos] += tau;
            if lead_zero {
                continue;
            }
            let m = table.index(pos);
            for z in 1..=(p - m.order()) {
                let q = table.with_component(pos, slice.axis, slice.level + z);
                sigma[q] += tau * wl[z];
            }
        }
    }
    let dist = libm::sqrt(h.iter().map(|v| v * v).sum::<f64>());
    Ok(MultipoleExpansion {
        center: new_center.to_vec(),
        radius: expansion.radius + dist,
        order: expansion.order,
        beta: plan.decompress_transpose(&sigma)?,
    })
}

/// Moments about `new_center` by axis-wise partial sums, `O(p^{d+1})`.
pub fn m2m_uncompressed<S: Scalar>(expansion: &FullMultipole<S>, new_center: &[f64], plan: &CompressionPlan) -> Result<FullMultipole<S>> {
    check_dim(plan.dim(), new_center.len())?;
    check_len(expansion.alpha.len(), plan.full_len())?;
    let h = displacement(&expansion.center, new_center);
    let table = plan.table();
    let w = shift_weights::<S>(&h, plan.order());
    let all: Vec<u32> = (0..table.len() as u32).collect();
    let mut a = expansion.alpha.clone();
    let mut b = vec![S::zero(); a.len()];
    for axis in 0..plan.dim() {
        pass_down(table, &all, axis, &w[axis], &a, &mut b);
        core::mem::swap(&mut a, &mut b);
    }
    let dist = libm::sqrt(h.iter().map(|v| v * v).sum::<f64>());
    Ok(FullMultipole { center: new_center.to_vec(), radius: expansion.radius + dist, order: expansion.order, alpha: a })
}

/// Recentered full local expansion by axis-wise partial sums, `O(p^{d+1})`.
pub fn l2l_uncompressed<S: Scalar>(expansion: &FullLocal<S>, new_center: &[f64], plan: &CompressionPlan) -> Result<FullLocal<S>> {
    check_dim(plan.dim(), new_center.len())?;
    check_len(expansion.derivs.len(), plan.full_len())?;
    let h = displacement(&expansion.center, new_center);
    let table = plan.table();
    let w = shift_weights::<S>(&h, plan.order());
    let all: Vec<u32> = (0..table.len() as u32).collect();
    let mut a = expansion.derivs.clone();
    let mut b = vec![S::zero(); a.len()];
    for axis in 0..plan.dim() {
        pass_up(table, &all, axis, &w[axis], &a, &mut b);
        core::mem::swap(&mut a, &mut b);
    }
    Ok(FullLocal { center: new_center.to_vec(), radius: expansion.radius, order: expansion.order, derivs: a })
}

/// Positions in the order-`2p` enumeration of `ν(i) + ν(q)` for all stored
/// pairs `(i, q)`, row-major in `i`.
#[derive(Clone, Debug)]
pub struct M2lIndex {
    stored: usize,
    order: usize,
    pairs: Vec<u32>,
}

impl M2lIndex {
    pub fn new(plan: &CompressionPlan) -> Self {
        let big = IndexTable::new(plan.ordering(), 2 * plan.order());
        let stored: Vec<_> = plan.stored_indices().collect();
        let mut pairs = Vec::with_capacity(stored.len() * stored.len());
        for a in &stored {
            for b in &stored {
                pairs.push(big.position(&(*a + *b)).unwrap() as u32);
            }
        }
        M2lIndex { stored: stored.len(), order: plan.order(), pairs }
    }
}

/// `θ_i = Σ_{q∈j} G^{(ν(q)+ν(i))}(c₂−c₁) β_q`, `O(p^{2d−2})`.
///
/// `derivs2p` is the full table at `c₂ − c₁` of order at least `2p`, in the
/// plan's ordering.
pub fn m2l_direct<S: Scalar>(
    expansion: &MultipoleExpansion<S>,
    local_center: &[f64],
    local_radius: f64,
    plan: &CompressionPlan,
    derivs2p: &[S],
) -> Result<LocalExpansion<S>> {
    let need = crate::multiindex::count(2 * plan.order(), plan.dim());
    if derivs2p.len() < need {
        return Err(Error::TableOrder { required: 2 * plan.order(), found: derivs2p.len() });
    }
    m2l_direct_indexed(&M2lIndex::new(plan), expansion, local_center, local_radius, plan, derivs2p)
}

/// [`m2l_direct`] with a precomputed pair index.
pub fn m2l_direct_indexed<S: Scalar>(
    index: &M2lIndex,
    expansion: &MultipoleExpansion<S>,
    local_center: &[f64],
    local_radius: f64,
    plan: &CompressionPlan,
    derivs2p: &[S],
) -> Result<LocalExpansion<S>> {
    check_dim(plan.dim(), local_center.len())?;
    check_len(expansion.beta.len(), plan.stored_len())?;
    if index.order != plan.order() || index.stored != plan.stored_len() {
        return Err(Error::Invalid("M2L index built for another plan"));
    }
    let n = index.stored;
    let mut theta = vec![S::zero(); n];
    for (i, t) in theta.iter_mut().enumerate() {
        let row = &index.pairs[i * n..(i + 1) * n];
        let mut acc = S::zero();
        for (&pos, &b) in row.iter().zip(&expansion.beta) {
            acc += derivs2p[pos as usize] * b;
        }
        *t = acc;
    }
    Ok(LocalExpansion { center: local_center.to_vec(), radius: local_radius, order: plan.order(), theta })
}

/// Grid layout of the circulant M2L for one plan and one scale `t`.
#[derive(Clone, Debug)]
pub struct M2lLayout {
    order: usize,
    scale: f64,
    shape: Vec<usize>,
    fft: NdFft,
    in_pos: Vec<usize>,
    out_pos: Vec<usize>,
    stored_scale: Vec<f64>,
    kernel_pos: Vec<(usize, usize, usize)>,
}

impl M2lLayout {
    pub fn new(plan: &CompressionPlan, scale: f64) -> Self {
        let shape = plan.fft_shape();
        let d = plan.dim();
        let mut strides = vec![1usize; d];
        for a in (0..d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * shape[a + 1];
        }
        let mut in_pos = Vec::with_capacity(plan.stored_len());
        let mut out_pos = Vec::with_capacity(plan.stored_len());
        let mut stored_scale = Vec::with_capacity(plan.stored_len());
        for m in plan.stored_indices() {
            let mut pi = 0;
            let mut po = 0;
            for a in 0..d {
                let e = m.get(a);
                po += e * strides[a];
                pi += ((shape[a] - e) % shape[a]) * strides[a];
            }
            in_pos.push(pi);
            out_pos.push(po);
            stored_scale.push(libm::pow(scale, m.order() as f64));
        }
        // grid point v ↦ (grid offset, position in the order-2p enumeration, |v|)
        let big = IndexTable::new(plan.ordering(), 2 * plan.order());
        let mut kernel_pos = Vec::new();
        for pos in 0..big.len() {
            let v = big.index(pos);
            if (0..d).all(|a| v.get(a) < shape[a]) {
                let g: usize = (0..d).map(|a| v.get(a) * strides[a]).sum();
                kernel_pos.push((g, pos, v.order()));
            }
        }
        M2lLayout { order: plan.order(), scale, shape: shape.clone(), fft: NdFft::new(&shape), in_pos, out_pos, stored_scale, kernel_pos }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn grid_len(&self) -> usize {
        self.fft.len()
    }

    /// Spectrum of the scaled, reversed multipole coefficients.
    pub fn signal_spectrum<S: Scalar>(&self, beta: &[S]) -> Vec<S> {
        let mut grid = vec![S::zero(); self.grid_len()];
        for ((&pos, &b), &s) in self.in_pos.iter().zip(beta).zip(&self.stored_scale) {
            grid[pos] = b.scale(s);
        }
        self.fft.forward(&mut grid);
        grid
    }

    /// `acc += spectrum ⊙ signal`.
    pub fn accumulate<S: Scalar>(&self, spectrum: &[Complex64], signal: &[S], acc: &mut [S]) {
        for ((a, &k), &s) in acc.iter_mut().zip(spectrum).zip(signal) {
            *a += S::from_c64(k) * s;
        }
    }

    /// Inverse transform of an accumulated product and extraction of `θ`.
    pub fn finish<S: Scalar>(&self, mut acc: Vec<S>) -> Vec<S> {
        self.fft.inverse(&mut acc);
        self.out_pos.iter().zip(&self.stored_scale).map(|(&pos, &s)| acc[pos].scale(s)).collect()
    }

    /// Spectrum of the scaled derivative tensor `G^{(v)}/t^{|v|}`, `v ∈ [0, 2M]`.
    pub fn kernel_spectrum(&self, derivs2p: &[Complex64]) -> Vec<Complex64> {
        let mut grid = vec![Complex64::new(0.0, 0.0); self.grid_len()];
        for &(g, pos, deg) in &self.kernel_pos {
            grid[g] = derivs2p[pos] / libm::pow(self.scale, deg as f64);
        }
        self.fft.forward(&mut grid);
        grid
    }
}

/// Precomputed frequency-domain M2L operator for one displacement.
#[derive(Clone, Debug)]
pub struct M2LTable {
    pub offset: Vec<f64>,
    pub layout: Arc<M2lLayout>,
    pub spectrum: Vec<Complex64>,
}

impl M2LTable {
    pub fn scale(&self) -> f64 {
        self.layout.scale
    }

    pub fn fft_shape(&self) -> &[usize] {
        &self.layout.shape
    }

    pub fn plan_order(&self) -> usize {
        self.layout.order
    }
}

/// Builds the table for displacement `offset = c₂ − c₁` and scale `t`.
pub fn m2l_precompute(plan: &CompressionPlan, kernel: &Kernel, offset: &[f64], scale_t: f64) -> Result<M2LTable> {
    let layout = Arc::new(M2lLayout::new(plan, scale_t));
    let plan2p = CompressionPlan::with_ordering(plan.pde(), 2 * plan.order(), plan.ordering())?;
    m2l_table_with(&layout, &plan2p, kernel, offset)
}

/// Table construction reusing a layout and the order-`2p` plan.
pub fn m2l_table_with(layout: &Arc<M2lLayout>, plan2p: &CompressionPlan, kernel: &Kernel, offset: &[f64]) -> Result<M2LTable> {
    let derivs = kernel.derivatives_full_scalar::<Complex64>(offset, plan2p)?;
    Ok(M2LTable { offset: offset.to_vec(), layout: layout.clone(), spectrum: layout.kernel_spectrum(&derivs) })
}

/// FFT-accelerated M2L.
pub fn m2l_apply<S: Scalar>(
    table: &M2LTable,
    expansion: &MultipoleExpansion<S>,
    local_radius: f64,
    plan: &CompressionPlan,
) -> Result<LocalExpansion<S>> {
    if table.layout.shape != plan.fft_shape() || table.layout.order != plan.order() {
        return Err(Error::ShapeMismatch);
    }
    check_len(expansion.beta.len(), plan.stored_len())?;
    let layout = &table.layout;
    let signal = layout.signal_spectrum(&expansion.beta);
    let mut acc = vec![S::zero(); layout.grid_len()];
    layout.accumulate(&table.spectrum, &signal, &mut acc);
    let center: Vec<f64> = expansion.center.iter().zip(&table.offset).map(|(c, o)| c + o).collect();
    Ok(LocalExpansion { center, radius: local_radius, order: plan.order(), theta: layout.finish(acc) })
}

/// Literal reference implementations with quadratic cost, used as oracles.
pub mod naive {
    use super::*;
    use crate::multiindex::multi_binomial;

    /// `μ_i = Σ_{ν(q) ≥ ν(i)} γ_q C(ν(q), ν(i)) h^{ν(q)−ν(i)}` with
    /// `γ = Mθ/ν!`, returned as `θ'_i = ν(i)! μ_i` on `j`.
    pub fn l2l(expansion: &LocalExpansion, new_center: &[f64], plan: &CompressionPlan) -> Result<LocalExpansion> {
        let full = plan.decompress(&expansion.theta)?;
        let h = displacement(&expansion.center, new_center);
        let table = plan.table();
        let gamma: Vec<Complex64> = full.iter().enumerate().map(|(k, v)| v / table.index(k).factorial()).collect();
        let theta = plan
            .j()
            .iter()
            .map(|&ipos| {
                let mi = table.index(ipos);
                let mut acc = Complex64::new(0.0, 0.0);
                for qpos in 0..table.len() {
                    let mq = table.index(qpos);
                    if let Some(diff) = mq.checked_sub(&mi) {
                        let hp: f64 = diff.components().zip(&h).map(|(e, hv)| libm::pow(*hv, e as f64)).product();
                        acc += gamma[qpos] * (multi_binomial(&mq, &mi) as f64 * hp);
                    }
                }
                acc * mi.factorial()
            })
            .collect();
        Ok(LocalExpansion { center: new_center.to_vec(), radius: expansion.radius, order: expansion.order, theta })
    }

    /// Compress-translate-recompress with the direct double sum:
    /// `σ_q = Σ_{ν(i) ≤ ν(q)} h^{ν(q)−ν(i)}/(ν(q)−ν(i))! [Eβ]_i`, `ψ = Mᵀσ`.
    pub fn m2m(expansion: &MultipoleExpansion, new_center: &[f64], plan: &CompressionPlan) -> Result<MultipoleExpansion> {
        let h = displacement(&expansion.center, new_center);
        let table = plan.table();
        let mut sigma = vec![Complex64::new(0.0, 0.0); table.len()];
        for (qpos, s) in sigma.iter_mut().enumerate() {
            let mq = table.index(qpos);
            for (slot, &ipos) in plan.j().iter().enumerate() {
                if let Some(diff) = mq.checked_sub(&table.index(ipos)) {
                    let w: f64 = diff.components().zip(&h).map(|(e, hv)| libm::pow(*hv, e as f64)).product::<f64>()
                        / diff.factorial();
                    *s += expansion.beta[slot] * w;
                }
            }
        }
        let dist = libm::sqrt(h.iter().map(|v| v * v).sum::<f64>());
        Ok(MultipoleExpansion {
            center: new_center.to_vec(),
            radius: expansion.radius + dist,
            order: expansion.order,
            beta: plan.decompress_transpose(&sigma)?,
        })
    }
}
