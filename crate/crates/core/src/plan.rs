//! Compression plans: from a constant-coefficient PDE and an order `p`, the
//! coefficient matrix `P`, pivots `h`, stored/eliminated index sets `j`/`j̄`,
//! the decompression operator `M`, the slice decomposition and FFT extents.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::multiindex::{count, GradedOrdering, IndexTable, MultiIndex, MAX_DIM};
use crate::{Error, Result, Scalar};

/// `𝓛 = Σ a_m ∂^m` with constant complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeOperator {
    dim: usize,
    order: usize,
    terms: Vec<(MultiIndex, Complex64)>,
}

impl PdeOperator {
    /// Zero coefficients are dropped and repeated multi-indices are summed.
    pub fn new(dim: usize, terms: &[(MultiIndex, Complex64)]) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        let mut merged: Vec<(MultiIndex, Complex64)> = Vec::new();
        for (m, a) in terms {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            match merged.iter_mut().find(|(q, _)| q == m) {
                Some(slot) => slot.1 += a,
                None => merged.push((*m, *a)),
            }
        }
        merged.retain(|(_, a)| *a != Complex64::new(0.0, 0.0));
        if merged.is_empty() {
            return Err(Error::DegeneratePde);
        }
        merged.sort_by(|x, y| x.0.to_vec().cmp(&y.0.to_vec()));
        let order = merged.iter().map(|(m, _)| m.order()).max().unwrap();
        Ok(PdeOperator { dim, order, terms: merged })
    }

    /// `Δ` in `d` dimensions.
    pub fn laplace(dim: usize) -> Self {
        let terms: Vec<_> = (0..dim)
            .map(|a| (MultiIndex::axis(dim, a, 2), Complex64::new(1.0, 0.0)))
            .collect();
        Self::new(dim, &terms).unwrap()
    }

    /// `Δ + κ²`.
    pub fn helmholtz(dim: usize, kappa: f64) -> Self {
        let mut terms: Vec<_> = (0..dim)
            .map(|a| (MultiIndex::axis(dim, a, 2), Complex64::new(1.0, 0.0)))
            .collect();
        terms.push((MultiIndex::zero(dim), Complex64::new(kappa * kappa, 0.0)));
        Self::new(dim, &terms).unwrap()
    }

    /// `Δ²`.
    pub fn biharmonic(dim: usize) -> Self {
        let mut terms = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                let m = MultiIndex::axis(dim, a, 2) + MultiIndex::axis(dim, b, 2);
                terms.push((m, Complex64::new(1.0, 0.0)));
            }
        }
        Self::new(dim, &terms).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest total degree `c` among the terms.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[(MultiIndex, Complex64)] {
        &self.terms
    }

    pub fn coefficient(&self, m: &MultiIndex) -> Complex64 {
        self.terms
            .iter()
            .find(|(q, _)| q == m)
            .map(|t| t.1)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Row-sparse matrix with sorted column positions (0-based).
#[derive(Clone, Debug)]
pub struct SparseRows {
    pub n_cols: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<Complex64>,
}

impl SparseRows {
    pub fn n_rows(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    /// `P·x`.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n_rows())
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&c, &v)| v * x[c]).sum()
            })
            .collect()
    }
}

/// Coefficient matrix `P`: row `i` holds `a_{ν(l)−ν(i)}` in column `l`.
pub fn build_p_matrix(pde: &PdeOperator, p: usize, ordering: GradedOrdering) -> Result<SparseRows> {
    build_p_matrix_with(pde, p, &IndexTable::new(ordering, p))
}

fn build_p_matrix_with(pde: &PdeOperator, p: usize, table: &IndexTable) -> Result<SparseRows> {
    let c = pde.order();
    if p < c {
        return Err(Error::OrderBelowPde { order: p, pde_order: c });
    }
    if table.dim() != pde.dim() {
        return Err(Error::DimensionMismatch { expected: pde.dim(), found: table.dim() });
    }
    let rows = count(p - c, pde.dim());
    let mut row_ptr = Vec::with_capacity(rows + 1);
    let mut cols = Vec::with_capacity(rows * pde.terms().len());
    let mut vals = Vec::with_capacity(rows * pde.terms().len());
    row_ptr.push(0);
    let mut entries: Vec<(usize, Complex64)> = Vec::with_capacity(pde.terms().len());
    for i in 0..rows {
        let n = table.index(i);
        entries.clear();
        for (xi, a) in pde.terms() {
            let col = table.position(&(n + *xi)).expect("shifted index within order");
            entries.push((col, *a));
        }
        entries.sort_by_key(|e| e.0);
        for &(col, a) in &entries {
            cols.push(col);
            vals.push(a);
        }
        row_ptr.push(cols.len());
    }
    Ok(SparseRows { n_cols: table.len(), row_ptr, cols, vals })
}

/// Pivot map and index sets: `h(i)` is the last nonzero column of row `i`,
/// `j̄` the image of `h`, `j` its complement in ascending order (all 0-based).
pub fn pivot_sets(rows: &SparseRows) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let h: Vec<usize> = (0..rows.n_rows()).map(|i| *rows.row(i).0.last().unwrap()).collect();
    let mut jbar = h.clone();
    jbar.sort_unstable();
    let mut eliminated = vec![false; rows.n_cols];
    for &c in &h {
        eliminated[c] = true;
    }
    let j = (0..rows.n_cols).filter(|&c| !eliminated[c]).collect();
    (h, jbar, j)
}

/// Slice `S_{axis,level}`: multi-indices whose component `axis` equals `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slice {
    pub axis: usize,
    pub level: usize,
}

/// Everything derived from `(PDE, p)`.
#[derive(Clone, Debug)]
pub struct CompressionPlan {
    pde: PdeOperator,
    order: usize,
    table: IndexTable,
    rows: SparseRows,
    h: Vec<usize>,
    jbar: Vec<usize>,
    j: Vec<usize>,
    stored_slot: Vec<u32>,
    t_lead: MultiIndex,
    slices: Vec<Slice>,
    slice_of_stored: Vec<u32>,
    slice_members: Vec<Vec<u32>>,
    fft_extent: [usize; MAX_DIM],
    has_property1: bool,
    elim_ratio: Vec<Complex64>,
}

const NOT_STORED: u32 = u32::MAX;

impl CompressionPlan {
    /// Builds the plan with the slowest axis chosen from the PDE: the largest
    /// axis `k` with `a_{c·e_k} ≠ 0`, or the last axis when no such axis exists.
    pub fn new(pde: &PdeOperator, p: usize) -> Result<Self> {
        let ordering = GradedOrdering::new(pde.dim(), Self::slowest_axis_for(pde))?;
        Self::with_ordering(pde, p, ordering)
    }

    /// Axis selected by [`CompressionPlan::new`].
    pub fn slowest_axis_for(pde: &PdeOperator) -> usize {
        let d = pde.dim();
        (0..d)
            .rev()
            .find(|&k| pde.coefficient(&MultiIndex::axis(d, k, pde.order())) != Complex64::new(0.0, 0.0))
            .unwrap_or(d - 1)
    }

    pub fn with_ordering(pde: &PdeOperator, p: usize, ordering: GradedOrdering) -> Result<Self> {
        let table = IndexTable::new(ordering, p);
        let rows = build_p_matrix_with(pde, p, &table)?;
        let (h, jbar, j) = pivot_sets(&rows);
        let d = pde.dim();
        let c = pde.order();
        let has_property1 =
            pde.coefficient(&MultiIndex::axis(d, ordering.slowest_axis(), c)) != Complex64::new(0.0, 0.0);

        let mut stored_slot = vec![NOT_STORED; table.len()];
        for (s, &pos) in j.iter().enumerate() {
            stored_slot[pos] = s as u32;
        }

        let t_lead = table.index(h[0]);
        let mut slices = Vec::new();
        for axis in (0..d).rev() {
            for level in 0..t_lead.get(axis) {
                slices.push(Slice { axis, level });
            }
        }
        let slice_of_stored = j
            .iter()
            .map(|&pos| {
                let m = table.index(pos);
                slices
                    .iter()
                    .position(|s| m.get(s.axis) == s.level)
                    .expect("stored index covered by a slice") as u32
            })
            .collect();
        let slice_members = slices
            .iter()
            .map(|s| {
                (0..table.len())
                    .filter(|&pos| table.index(pos).get(s.axis) == s.level)
                    .map(|pos| pos as u32)
                    .collect()
            })
            .collect();

        let mut fft_extent = [0; MAX_DIM];
        for &pos in &j {
            let m = table.index(pos);
            for (a, e) in fft_extent.iter_mut().enumerate().take(d) {
                *e = (*e).max(m.get(a));
            }
        }

        let pivot = *rows.row(0).1.last().unwrap();
        let pivot_inv = Complex64::new(1.0, 0.0) / pivot;
        let mut elim_ratio = Vec::with_capacity(rows.vals.len());
        for i in 0..rows.n_rows() {
            let (_, v) = rows.row(i);
            for &a in v {
                elim_ratio.push(-a * pivot_inv);
            }
        }

        Ok(CompressionPlan {
            pde: pde.clone(),
            order: p,
            table,
            rows,
            h,
            jbar,
            j,
            stored_slot,
            t_lead,
            slices,
            slice_of_stored,
            slice_members,
            fft_extent,
            has_property1,
            elim_ratio,
        })
    }

    pub fn pde(&self) -> &PdeOperator {
        &self.pde
    }

    pub fn dim(&self) -> usize {
        self.pde.dim()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn ordering(&self) -> GradedOrdering {
        self.table.ordering()
    }

    pub fn table(&self) -> &IndexTable {
        &self.table
    }

    /// `N(p)`.
    pub fn full_len(&self) -> usize {
        self.table.len()
    }

    /// `|j|`.
    pub fn stored_len(&self) -> usize {
        self.j.len()
    }

    pub fn rows(&self) -> &SparseRows {
        &self.rows
    }

    /// Pivot columns `h(i)` as 0-based positions.
    pub fn h(&self) -> &[usize] {
        &self.h
    }

    pub fn jbar(&self) -> &[usize] {
        &self.jbar
    }

    /// Stored positions `j` (0-based, ascending).
    pub fn j(&self) -> &[usize] {
        &self.j
    }

    pub fn stored_indices(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        self.j.iter().map(|&p| self.table.index(p))
    }

    /// Slot of a full position within the stored vector.
    pub fn stored_slot(&self, pos: usize) -> Option<usize> {
        let s = self.stored_slot[pos];
        (s != NOT_STORED).then_some(s as usize)
    }

    pub fn t_lead(&self) -> MultiIndex {
        self.t_lead
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    /// Index into [`CompressionPlan::slices`] assigned to each stored slot.
    pub fn slice_assignment(&self) -> &[u32] {
        &self.slice_of_stored
    }

    /// All positions of `M(p)` lying in slice `s`.
    pub(crate) fn slice_members(&self, s: usize) -> &[u32] {
        &self.slice_members[s]
    }

    /// `(M_1, …, M_d)`.
    pub fn fft_extent(&self) -> Vec<usize> {
        self.fft_extent[..self.dim()].to_vec()
    }

    /// Circulant shape `(2M_1+1, …, 2M_d+1)`.
    pub fn fft_shape(&self) -> Vec<usize> {
        self.fft_extent[..self.dim()].iter().map(|m| 2 * m + 1).collect()
    }

    pub fn has_property1(&self) -> bool {
        self.has_property1
    }

    /// Full vector restricted to `j`.
    pub fn restrict<S: Scalar>(&self, full: &[S]) -> Result<Vec<S>> {
        self.check_len(full.len(), self.full_len())?;
        Ok(self.j.iter().map(|&p| full[p]).collect())
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(Error::LengthMismatch { expected, found });
        }
        Ok(())
    }

    /// `M·s`: forward substitution over the rows of `P` in order, `O(p^d)`.
    pub fn decompress<S: Scalar>(&self, stored: &[S]) -> Result<Vec<S>> {
        self.check_len(stored.len(), self.stored_len())?;
        let mut full = vec![S::zero(); self.full_len()];
        for (&pos, &v) in self.j.iter().zip(stored) {
            full[pos] = v;
        }
        self.fill_eliminated(&mut full);
        Ok(full)
    }

    /// Overwrites the eliminated entries of a full vector from its stored ones.
    pub(crate) fn fill_eliminated<S: Scalar>(&self, full: &mut [S]) {
        for i in 0..self.h.len() {
            let r = self.rows.row_ptr[i]..self.rows.row_ptr[i + 1] - 1;
            let mut acc = S::zero();
            for k in r {
                acc += S::from_c64(self.elim_ratio[k]) * full[self.rows.cols[k]];
            }
            full[self.h[i]] = acc;
        }
    }

    /// `Mᵀ·f`: the adjoint of [`CompressionPlan::decompress`], processed backwards.
    pub fn decompress_transpose<S: Scalar>(&self, full: &[S]) -> Result<Vec<S>> {
        self.check_len(full.len(), self.full_len())?;
        let mut acc = full.to_vec();
        for i in (0..self.h.len()).rev() {
            let z = acc[self.h[i]];
            let r = self.rows.row_ptr[i]..self.rows.row_ptr[i + 1] - 1;
            for k in r {
                let c = self.rows.cols[k];
                acc[c] += S::from_c64(self.elim_ratio[k]) * z;
            }
        }
        Ok(self.j.iter().map(|&p| acc[p]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v).unwrap()
    }

    #[test]
    fn laplace_p2_matrix() {
        let o = GradedOrdering::new(2, 1).unwrap();
        let rows = build_p_matrix(&PdeOperator::laplace(2), 2, o).unwrap();
        assert_eq!(rows.n_rows(), 1);
        let (cols, vals) = rows.row(0);
        assert_eq!(cols, &[o.rank(&mi(&[2, 0])).unwrap() - 1, o.rank(&mi(&[0, 2])).unwrap() - 1]);
        assert_eq!(vals, &[c(1.0), c(1.0)]);
    }

    #[test]
    fn decompress_small_cases() {
        let plan = CompressionPlan::new(&PdeOperator::laplace(2), 2).unwrap();
        let s: Vec<Complex64> = [1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|&x| c(x)).collect();
        let f = plan.decompress(&s).unwrap();
        assert_eq!(f[5], c(-4.0));
        let plan = CompressionPlan::new(&PdeOperator::helmholtz(2, 1.0), 2).unwrap();
        let f = plan.decompress(&s).unwrap();
        assert_eq!(f[5], c(-1.0 - 4.0));
    }

    #[test]
    fn order_below_pde_is_rejected() {
        assert!(matches!(
            CompressionPlan::new(&PdeOperator::biharmonic(2), 3),
            Err(Error::OrderBelowPde { .. })
        ));
        assert_eq!(PdeOperator::new(2, &[(mi(&[1, 0]), c(0.0))]), Err(Error::DegeneratePde));
    }
}
