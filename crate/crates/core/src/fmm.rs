//! Non-adaptive uniform-tree FMM on top of the compressed operators.
//!
//! Boxes at level `l` are addressed by integer coordinates in `[0, 2^l)^d`,
//! flattened row-major with axis 0 most significant. The near field of a leaf
//! is its `3^d` neighbourhood; the interaction list of a box is the set of
//! children of its parent's neighbours that are not adjacent to it, so every
//! M2L displacement is one of the `7^d − 3^d` offset classes in `[−3, 3]^d`
//! with some component of magnitude `≥ 2`.
//!
//! Passes are sequential; the summation order over boxes and lists is the
//! row-major box order, so results are reproducible bit for bit.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::expansions::{l2p, p2m, LocalExpansion, MultipoleExpansion};
use crate::kernels::{Kernel, SINGULAR_RADIUS};
use crate::plan::CompressionPlan;
use crate::translations::{l2l, m2l_direct_indexed, m2l_table_with, m2m, M2LTable, M2lIndex, M2lLayout};
use crate::{Error, Result, Scalar};

/// How M2L is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum M2lMode {
    /// `O(|j|²)` sums against the order-`2p` derivative table.
    Direct,
    /// Circulant embedding; one forward FFT per source box, products summed in
    /// the frequency domain, one inverse FFT per target box.
    Fft,
}

/// Axis-aligned cube `[origin, origin + side]^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBox {
    pub origin: Vec<f64>,
    pub side: f64,
}

impl RootBox {
    pub fn new(origin: &[f64], side: f64) -> Self {
        RootBox { origin: origin.to_vec(), side }
    }

    /// The unit cube `[0, 1]^d`.
    pub fn unit(dim: usize) -> Self {
        RootBox { origin: vec![0.0; dim], side: 1.0 }
    }
}

/// Points grouped by leaf: `order[start[b]..start[b+1]]` are the indices of
/// the points in leaf `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafBins {
    pub order: Vec<usize>,
    pub start: Vec<usize>,
}

impl LeafBins {
    pub fn leaf(&self, b: usize) -> &[usize] {
        &self.order[self.start[b]..self.start[b + 1]]
    }

    pub fn count(&self, b: usize) -> usize {
        self.start[b + 1] - self.start[b]
    }
}

#[derive(Clone, Debug)]
pub struct UniformTree {
    dim: usize,
    depth: usize,
    root: RootBox,
    sources: Vec<f64>,
    targets: Vec<f64>,
    src_bins: LeafBins,
    tgt_bins: LeafBins,
    /// Per level, whether the box contains at least one source / target.
    src_occupied: Vec<Vec<bool>>,
    tgt_occupied: Vec<Vec<bool>>,
}

/// Leaf coordinate along one axis; points on an internal boundary go to the
/// lower-index box.
fn bin_coord(x: f64, origin: f64, h: f64, n: usize) -> usize {
    let t = libm::ceil((x - origin) / h) - 1.0;
    if t < 0.0 {
        0
    } else {
        (t as usize).min(n - 1)
    }
}

fn flatten(coords: &[usize], n: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * n + c)
}

fn unflatten(mut idx: usize, n: usize, dim: usize) -> Vec<usize> {
    let mut c = vec![0; dim];
    for a in (0..dim).rev() {
        c[a] = idx % n;
        idx /= n;
    }
    c
}

/// Bins points into leaves of a depth-`depth` tree over `root`.
pub fn build_tree(sources: &[f64], targets: &[f64], dim: usize, depth: usize, root: &RootBox) -> Result<UniformTree> {
    if dim == 0 || dim > 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    if root.origin.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: root.origin.len() });
    }
    if depth < 2 || depth > 20 / dim + 1 {
        return Err(Error::Invalid("tree depth out of range"));
    }
    if !(root.side > 0.0 && root.side.is_finite()) {
        return Err(Error::Invalid("root box side must be positive"));
    }
    for pts in [sources, targets] {
        if pts.len() % dim != 0 {
            return Err(Error::LengthMismatch { expected: pts.len() / dim * dim, found: pts.len() });
        }
    }
    let n = 1usize << depth;
    let h = root.side / n as f64;
    let bin = |pts: &[f64]| -> Result<LeafBins> {
        let npts = pts.len() / dim;
        let mut leaf_of = Vec::with_capacity(npts);
        for (i, x) in pts.chunks_exact(dim).enumerate() {
            let mut coords = [0usize; 3];
            for a in 0..dim {
                let lo = root.origin[a];
                if !(x[a] >= lo && x[a] <= lo + root.side) {
                    return Err(Error::OutsideRoot { index: i });
                }
                coords[a] = bin_coord(x[a], lo, h, n);
            }
            leaf_of.push(flatten(&coords[..dim], n));
        }
        let nleaves = n.pow(dim as u32);
        let mut start = vec![0usize; nleaves + 1];
        for &b in &leaf_of {
            start[b + 1] += 1;
        }
        for b in 0..nleaves {
            start[b + 1] += start[b];
        }
        let mut fill = start.clone();
        let mut order = vec![0; npts];
        for (i, &b) in leaf_of.iter().enumerate() {
            order[fill[b]] = i;
            fill[b] += 1;
        }
        Ok(LeafBins { order, start })
    };
    let src_bins = bin(sources)?;
    let tgt_bins = bin(targets)?;
    let occupancy = |bins: &LeafBins| -> Vec<Vec<bool>> {
        let mut levels = vec![Vec::new(); depth + 1];
        levels[depth] = (0..n.pow(dim as u32)).map(|b| bins.count(b) > 0).collect();
        for l in (0..depth).rev() {
            let nl = 1usize << l;
            let mut occ = vec![false; nl.pow(dim as u32)];
            for (child, &o) in levels[l + 1].iter().enumerate() {
                if o {
                    let c = unflatten(child, 2 * nl, dim);
                    let pc: Vec<usize> = c.iter().map(|v| v / 2).collect();
                    occ[flatten(&pc, nl)] = true;
                }
            }
            levels[l] = occ;
        }
        levels
    };
    let src_occupied = occupancy(&src_bins);
    let tgt_occupied = occupancy(&tgt_bins);
    Ok(UniformTree {
        dim,
        depth,
        root: root.clone(),
        sources: sources.to_vec(),
        targets: targets.to_vec(),
        src_bins,
        tgt_bins,
        src_occupied,
        tgt_occupied,
    })
}

impl UniformTree {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> &RootBox {
        &self.root
    }

    pub fn n_sources(&self) -> usize {
        self.sources.len() / self.dim
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len() / self.dim
    }

    pub fn sources(&self) -> &[f64] {
        &self.sources
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn source_bins(&self) -> &LeafBins {
        &self.src_bins
    }

    pub fn target_bins(&self) -> &LeafBins {
        &self.tgt_bins
    }

    /// Number of boxes at `level`.
    pub fn boxes(&self, level: usize) -> usize {
        1usize << (level * self.dim)
    }

    pub fn box_side(&self, level: usize) -> f64 {
        self.root.side / (1usize << level) as f64
    }

    pub fn box_coords(&self, level: usize, b: usize) -> Vec<usize> {
        unflatten(b, 1 << level, self.dim)
    }

    pub fn box_center(&self, level: usize, b: usize) -> Vec<f64> {
        let h = self.box_side(level);
        self.box_coords(level, b)
            .iter()
            .zip(&self.root.origin)
            .map(|(&c, o)| o + (c as f64 + 0.5) * h)
            .collect()
    }

    pub fn parent(&self, level: usize, b: usize) -> usize {
        let pc: Vec<usize> = self.box_coords(level, b).iter().map(|c| c / 2).collect();
        flatten(&pc, 1 << (level - 1))
    }

    pub fn children(&self, level: usize, b: usize) -> Vec<usize> {
        let pc = self.box_coords(level, b);
        let n = 1 << (level + 1);
        (0..1usize << self.dim)
            .map(|k| {
                let c: Vec<usize> = (0..self.dim).map(|a| 2 * pc[a] + ((k >> (self.dim - 1 - a)) & 1)).collect();
                flatten(&c, n)
            })
            .collect()
    }

    /// Boxes at `level` whose coordinates differ from `b` by `delta`.
    fn shifted(&self, level: usize, coords: &[usize], delta: &[i64]) -> Option<usize> {
        let n = 1i64 << level;
        let mut c = [0usize; 3];
        for a in 0..self.dim {
            let v = coords[a] as i64 + delta[a];
            if v < 0 || v >= n {
                return None;
            }
            c[a] = v as usize;
        }
        Some(flatten(&c[..self.dim], n as usize))
    }

    /// `(source box, offset class)` pairs of the interaction list of `b`.
    pub fn interaction_list(&self, level: usize, b: usize) -> Vec<(usize, Vec<i64>)> {
        let coords = self.box_coords(level, b);
        let mut out = Vec::new();
        for delta in offset_classes(self.dim) {
            // same parent neighbourhood: parent coordinates differ by at most 1
            let ok = (0..self.dim).all(|a| {
                let s = coords[a] as i64 + delta[a];
                let pd = s.div_euclid(2) - (coords[a] as i64).div_euclid(2);
                pd.abs() <= 1
            });
            if !ok {
                continue;
            }
            if let Some(s) = self.shifted(level, &coords, &delta) {
                out.push((s, delta));
            }
        }
        out
    }

    /// Leaves in the `3^d` neighbourhood of leaf `b`, including `b`.
    pub fn near_list(&self, b: usize) -> Vec<usize> {
        let coords = self.box_coords(self.depth, b);
        let mut out = Vec::new();
        for k in 0..3usize.pow(self.dim as u32) {
            let delta: Vec<i64> = unflatten(k, 3, self.dim).iter().map(|&v| v as i64 - 1).collect();
            if let Some(s) = self.shifted(self.depth, &coords, &delta) {
                out.push(s);
            }
        }
        out
    }
}

/// All displacements `δ ∈ [−3, 3]^d` with `max |δ_a| ≥ 2`, in row-major order.
pub fn offset_classes(dim: usize) -> Vec<Vec<i64>> {
    (0..7usize.pow(dim as u32))
        .map(|k| unflatten(k, 7, dim).iter().map(|&v| v as i64 - 3).collect::<Vec<i64>>())
        .filter(|d| d.iter().any(|v| v.abs() >= 2))
        .collect()
}

/// `Σ_y w_y G(x − y)` for every target, skipping coincident pairs.
pub fn direct_reference<S: Scalar>(kernel: &Kernel, sources: &[f64], weights: &[S], targets: &[f64]) -> Result<Vec<S>> {
    let d = kernel.dim();
    if sources.len() != weights.len() * d {
        return Err(Error::LengthMismatch { expected: weights.len() * d, found: sources.len() });
    }
    if targets.len() % d != 0 {
        return Err(Error::DimensionMismatch { expected: d, found: targets.len() % d });
    }
    let idx: Vec<usize> = (0..weights.len()).collect();
    targets.chunks_exact(d).map(|x| near_sum(kernel, sources, weights, &idx, x)).collect()
}

fn near_sum<S: Scalar>(kernel: &Kernel, sources: &[f64], weights: &[S], which: &[usize], x: &[f64]) -> Result<S> {
    let d = x.len();
    let mut acc = S::zero();
    let mut rel = [0.0; 3];
    for &j in which {
        let y = &sources[j * d..(j + 1) * d];
        let mut r2 = 0.0;
        for a in 0..d {
            rel[a] = x[a] - y[a];
            r2 += rel[a] * rel[a];
        }
        if r2 < SINGULAR_RADIUS * SINGULAR_RADIUS {
            continue;
        }
        acc += weights[j] * kernel.eval_scalar::<S>(&rel[..d])?;
    }
    Ok(acc)
}

enum LevelOps {
    Direct { derivs: BTreeMap<Vec<i64>, Vec<Complex64>> },
    Fft { layout: Arc<M2lLayout>, tables: BTreeMap<Vec<i64>, M2LTable> },
}

fn level_ops(tree: &UniformTree, kernel: &Kernel, plan: &CompressionPlan, plan2p: &CompressionPlan, level: usize, mode: M2lMode) -> Result<LevelOps> {
    let h = tree.box_side(level);
    let classes = offset_classes(tree.dim);
    let offset = |delta: &[i64]| -> Vec<f64> { delta.iter().map(|&v| -(v as f64) * h).collect() };
    Ok(match mode {
        M2lMode::Direct => {
            let mut derivs = BTreeMap::new();
            for delta in classes {
                let v = kernel.derivatives_full_scalar::<Complex64>(&offset(&delta), plan2p)?;
                derivs.insert(delta, v);
            }
            LevelOps::Direct { derivs }
        }
        M2lMode::Fft => {
            let t = kernel.default_m2l_scale(plan.order(), 2.0 * h);
            let layout = Arc::new(M2lLayout::new(plan, t));
            let mut tables = BTreeMap::new();
            for delta in classes {
                let table = m2l_table_with(&layout, plan2p, kernel, &offset(&delta))?;
                tables.insert(delta, table);
            }
            LevelOps::Fft { layout, tables }
        }
    })
}

/// Potentials `Σ_y w_y G(x − y)` at the tree's targets.
pub fn evaluate_fmm<S: Scalar>(tree: &UniformTree, kernel: &Kernel, plan: &CompressionPlan, weights: &[S], mode: M2lMode) -> Result<Vec<S>> {
    let d = tree.dim;
    if kernel.dim() != d || plan.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: kernel.dim() });
    }
    if plan.pde() != &kernel.pde() {
        return Err(Error::PlanKernelMismatch);
    }
    if weights.len() != tree.n_sources() {
        return Err(Error::LengthMismatch { expected: tree.n_sources(), found: weights.len() });
    }
    let depth = tree.depth;
    let radius = |level: usize| 0.5 * libm::sqrt(d as f64) * tree.box_side(level);

    // upward pass
    let mut multipoles: Vec<Vec<Option<MultipoleExpansion<S>>>> = vec![Vec::new(); depth + 1];
    multipoles[depth] = (0..tree.boxes(depth))
        .map(|b| {
            let idx = tree.src_bins.leaf(b);
            if idx.is_empty() {
                return Ok(None);
            }
            let pts: Vec<f64> = idx.iter().flat_map(|&i| tree.sources[i * d..(i + 1) * d].iter().copied()).collect();
            let w: Vec<S> = idx.iter().map(|&i| weights[i]).collect();
            p2m(&pts, &w, &tree.box_center(depth, b), radius(depth), plan).map(Some)
        })
        .collect::<Result<_>>()?;
    for level in (2..depth).rev() {
        let mut level_m = Vec::with_capacity(tree.boxes(level));
        for b in 0..tree.boxes(level) {
            if !tree.src_occupied[level][b] {
                level_m.push(None);
                continue;
            }
            let center = tree.box_center(level, b);
            let mut acc = MultipoleExpansion::<S>::zero(&center, radius(level), plan);
            for c in tree.children(level, b) {
                if let Some(child) = &multipoles[level + 1][c] {
                    let shifted = m2m(child, &center, plan)?;
                    for (a, v) in acc.beta.iter_mut().zip(&shifted.beta) {
                        *a += *v;
                    }
                }
            }
            level_m.push(Some(acc));
        }
        multipoles[level] = level_m;
    }

    // interaction lists and downward pass
    let plan2p = CompressionPlan::with_ordering(plan.pde(), 2 * plan.order(), plan.ordering())?;
    let index = M2lIndex::new(plan);
    let mut locals: Vec<Option<LocalExpansion<S>>> = Vec::new();
    for level in 2..=depth {
        let ops = level_ops(tree, kernel, plan, &plan2p, level, mode)?;
        let spectra: Vec<Option<Vec<S>>> = match &ops {
            LevelOps::Fft { layout, .. } => multipoles[level]
                .iter()
                .map(|m| m.as_ref().map(|m| layout.signal_spectrum(&m.beta)))
                .collect(),
            LevelOps::Direct { .. } => Vec::new(),
        };
        let mut next = Vec::with_capacity(tree.boxes(level));
        for b in 0..tree.boxes(level) {
            if !tree.tgt_occupied[level][b] {
                next.push(None);
                continue;
            }
            let center = tree.box_center(level, b);
            let mut local = if level > 2 {
                match &locals[tree.parent(level, b)] {
                    Some(parent) => l2l(parent, &center, plan)?,
                    None => LocalExpansion::zero(&center, radius(level), plan),
                }
            } else {
                LocalExpansion::zero(&center, radius(level), plan)
            };
            local.radius = radius(level);
            let list: Vec<(usize, Vec<i64>)> = tree
                .interaction_list(level, b)
                .into_iter()
                .filter(|(s, _)| multipoles[level][*s].is_some())
                .collect();
            match &ops {
                LevelOps::Direct { derivs } => {
                    for (s, delta) in &list {
                        let m = multipoles[level][*s].as_ref().unwrap();
                        let dv: Vec<S> = derivs[delta].iter().map(|&v| S::from_c64(v)).collect();
                        let contrib = m2l_direct_indexed(&index, m, &center, local.radius, plan, &dv)?;
                        for (a, v) in local.theta.iter_mut().zip(&contrib.theta) {
                            *a += *v;
                        }
                    }
                }
                LevelOps::Fft { layout, tables } => {
                    if !list.is_empty() {
                        let mut acc = vec![S::zero(); layout.grid_len()];
                        for (s, delta) in &list {
                            layout.accumulate(&tables[delta].spectrum, spectra[*s].as_ref().unwrap(), &mut acc);
                        }
                        for (a, v) in local.theta.iter_mut().zip(layout.finish(acc)) {
                            *a += v;
                        }
                    }
                }
            }
            next.push(Some(local));
        }
        locals = next;
    }

    // leaf evaluation
    let mut out = vec![S::zero(); tree.n_targets()];
    for b in 0..tree.boxes(depth) {
        let tgt = tree.tgt_bins.leaf(b);
        if tgt.is_empty() {
            continue;
        }
        let near: Vec<usize> = tree.near_list(b).iter().flat_map(|&s| tree.src_bins.leaf(s).iter().copied()).collect();
        for &i in tgt {
            let x = &tree.targets[i * d..(i + 1) * d];
            let mut v = near_sum(kernel, &tree.sources, weights, &near, x)?;
            if let Some(local) = &locals[b] {
                v += l2p(local, x, plan)?;
            }
            out[i] = v;
        }
    }
    Ok(out)
}
