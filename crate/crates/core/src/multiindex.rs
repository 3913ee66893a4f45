//! Multi-indices and graded monomial orderings.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use crate::{Error, Result};

/// Largest supported spatial dimension.
pub const MAX_DIM: usize = 6;

/// Exponent tuple `(m_1, …, m_d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    dim: u8,
    e: [u16; MAX_DIM],
}

impl MultiIndex {
    pub fn new(exponents: &[usize]) -> Result<Self> {
        let d = exponents.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        let mut e = [0u16; MAX_DIM];
        for (slot, &x) in e.iter_mut().zip(exponents) {
            *slot = u16::try_from(x).map_err(|_| Error::Invalid("exponent too large"))?;
        }
        Ok(MultiIndex { dim: d as u8, e })
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        MultiIndex { dim: dim as u8, e: [0; MAX_DIM] }
    }

    /// `k·e_axis`.
    pub fn axis(dim: usize, axis: usize, k: usize) -> Self {
        let mut m = Self::zero(dim);
        m.e[axis] = k as u16;
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn get(&self, axis: usize) -> usize {
        self.e[axis] as usize
    }

    #[inline]
    pub fn set(&mut self, axis: usize, value: usize) {
        self.e[axis] = value as u16;
    }

    pub fn components(&self) -> impl Iterator<Item = usize> + '_ {
        self.e[..self.dim()].iter().map(|&x| x as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.components().collect()
    }

    /// Total degree `|m|`.
    #[inline]
    pub fn order(&self) -> usize {
        self.e[..self.dim()].iter().map(|&x| x as usize).sum()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim == other.dim && (0..self.dim()).all(|a| self.e[a] <= other.e[a])
    }

    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut out = *self;
        for a in 0..self.dim() {
            out.e[a] = self.e[a]
                .checked_add(other.e[a])
                .ok_or(Error::Invalid("exponent overflow"))?;
        }
        Ok(out)
    }

    /// `self − other` when `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !other.le(self) {
            return None;
        }
        let mut out = *self;
        for a in 0..self.dim() {
            out.e[a] -= other.e[a];
        }
        Some(out)
    }

    /// `m!` = Π m_i!.
    pub fn factorial(&self) -> f64 {
        self.components().map(factorial).product()
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, o: MultiIndex) -> MultiIndex {
        self.checked_add(&o).expect("multi-index addition")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.components().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `N(p) = C(p+d, d)`, the number of multi-indices of total degree at most `p`.
pub fn count(p: usize, d: usize) -> usize {
    binomial(p + d, d) as usize
}

/// Number of `parts`-tuples of non-negative integers summing to `n`.
fn compositions(n: usize, parts: usize) -> usize {
    if parts == 0 {
        usize::from(n == 0)
    } else {
        binomial(n + parts - 1, parts - 1) as usize
    }
}

/// Componentwise product of binomial coefficients, zero unless `q ≤ r`.
pub fn multi_binomial(r: &MultiIndex, q: &MultiIndex) -> u128 {
    if r.dim() != q.dim() {
        return 0;
    }
    r.components().zip(q.components()).map(|(a, b)| binomial(a, b)).product()
}

/// Graded ordering: multi-indices sorted by total degree, and within a degree
/// block lexicographically with `slowest_axis` most significant followed by
/// the remaining axes in decreasing axis order.
///
/// For `d = 3` and slowest axis `2` the degree-2 block reads
/// `(2,0,0) (1,1,0) (0,2,0) (1,0,1) (0,1,1) (0,0,2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradedOrdering {
    dim: usize,
    slowest_axis: usize,
    significance: [usize; MAX_DIM],
}

impl GradedOrdering {
    /// `slowest_axis` is 0-based.
    pub fn new(dim: usize, slowest_axis: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::UnsupportedDimension(dim));
        }
        if slowest_axis >= dim {
            return Err(Error::Invalid("slowest axis out of range"));
        }
        let mut significance = [0; MAX_DIM];
        significance[0] = slowest_axis;
        let mut n = 1;
        for a in (0..dim).rev() {
            if a != slowest_axis {
                significance[n] = a;
                n += 1;
            }
        }
        Ok(GradedOrdering { dim, slowest_axis, significance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn slowest_axis(&self) -> usize {
        self.slowest_axis
    }

    fn check(&self, m: &MultiIndex) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: m.dim() });
        }
        Ok(())
    }

    /// 1-based rank `ν⁻¹(m)`.
    pub fn rank(&self, m: &MultiIndex) -> Result<usize> {
        self.check(m)?;
        let n = m.order();
        let mut pos = if n == 0 { 0 } else { count(n - 1, self.dim) };
        let mut remaining = n;
        for (idx, &axis) in self.significance[..self.dim].iter().enumerate() {
            let free = self.dim - idx - 1;
            let v = m.get(axis);
            for u in 0..v {
                pos += compositions(remaining - u, free);
            }
            remaining -= v;
        }
        Ok(pos + 1)
    }

    /// `ν(i)` for a 1-based rank `i`.
    pub fn unrank(&self, i: usize) -> Result<MultiIndex> {
        if i == 0 {
            return Err(Error::Invalid("ranks start at 1"));
        }
        let mut n = 0;
        while count(n, self.dim) < i {
            n += 1;
        }
        let mut pos = i - 1 - if n == 0 { 0 } else { count(n - 1, self.dim) };
        let mut m = MultiIndex::zero(self.dim);
        let mut remaining = n;
        for (idx, &axis) in self.significance[..self.dim].iter().enumerate() {
            let free = self.dim - idx - 1;
            let mut u = 0;
            loop {
                let c = compositions(remaining - u, free);
                if pos < c {
                    break;
                }
                pos -= c;
                u += 1;
            }
            m.set(axis, u);
            remaining -= u;
        }
        Ok(m)
    }

    /// All multi-indices with `|m| ≤ p` in increasing rank.
    pub fn enumerate(&self, p: usize) -> Vec<MultiIndex> {
        let mut out = Vec::with_capacity(count(p, self.dim));
        for n in 0..=p {
            let mut m = MultiIndex::zero(self.dim);
            self.fill_block(0, n, &mut m, &mut out);
        }
        out
    }

    fn fill_block(&self, idx: usize, remaining: usize, m: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        let axis = self.significance[idx];
        if idx + 1 == self.dim {
            m.set(axis, remaining);
            out.push(*m);
            return;
        }
        for u in 0..=remaining {
            m.set(axis, u);
            self.fill_block(idx + 1, remaining - u, m, out);
        }
        m.set(axis, 0);
    }
}

const ABSENT: u32 = u32::MAX;

/// Dense lookup tables for one ordering and one order `p`: the enumeration,
/// a grid-to-position map and, for each index, the predecessor used by the
/// graded monomial recurrence.
#[derive(Clone, Debug)]
pub struct IndexTable {
    ordering: GradedOrdering,
    order: usize,
    indices: Vec<MultiIndex>,
    grid: Vec<u32>,
    strides: [usize; MAX_DIM],
    parents: Vec<(u32, u8)>,
}

impl IndexTable {
    pub fn new(ordering: GradedOrdering, order: usize) -> Self {
        let d = ordering.dim();
        let indices = ordering.enumerate(order);
        let mut strides = [0; MAX_DIM];
        let mut s = 1;
        for a in (0..d).rev() {
            strides[a] = s;
            s *= order + 1;
        }
        let mut grid = vec![ABSENT; s];
        for (pos, m) in indices.iter().enumerate() {
            grid[Self::grid_of(&strides, m)] = pos as u32;
        }
        let mut parents = Vec::with_capacity(indices.len());
        parents.push((0, 0));
        for m in &indices[1..] {
            let axis = (0..d).find(|&a| m.get(a) > 0).unwrap();
            let mut q = *m;
            q.set(axis, m.get(axis) - 1);
            parents.push((grid[Self::grid_of(&strides, &q)], axis as u8));
        }
        IndexTable { ordering, order, indices, grid, strides, parents }
    }

    #[inline]
    fn grid_of(strides: &[usize; MAX_DIM], m: &MultiIndex) -> usize {
        m.components().zip(strides).map(|(x, s)| x * s).sum()
    }

    pub fn ordering(&self) -> GradedOrdering {
        self.ordering
    }

    pub fn dim(&self) -> usize {
        self.ordering.dim()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    #[inline]
    pub fn index(&self, pos: usize) -> MultiIndex {
        self.indices[pos]
    }

    /// 0-based position of `m`, `None` when `|m| > order`.
    #[inline]
    pub fn position(&self, m: &MultiIndex) -> Option<usize> {
        if m.dim() != self.dim() || m.order() > self.order {
            return None;
        }
        let p = self.grid[Self::grid_of(&self.strides, m)];
        (p != ABSENT).then_some(p as usize)
    }

    /// `(position of m − e_axis, axis)` for position `pos > 0`.
    #[inline]
    pub fn parent(&self, pos: usize) -> (usize, usize) {
        let (p, a) = self.parents[pos];
        (p as usize, a as usize)
    }

    /// Position of the multi-index at `pos` with component `axis` replaced by `value`.
    #[inline]
    pub(crate) fn with_component(&self, pos: usize, axis: usize, value: usize) -> usize {
        let m = &self.indices[pos];
        let g = Self::grid_of(&self.strides, m) + value * self.strides[axis] - m.get(axis) * self.strides[axis];
        self.grid[g] as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(count(0, 3), 1);
        assert_eq!(count(2, 2), 6);
        assert_eq!(count(4, 2), 15);
    }

    #[test]
    fn ranks_follow_slowest_axis() {
        let o = GradedOrdering::new(2, 1).unwrap();
        assert_eq!(o.unrank(1).unwrap(), mi(&[0, 0]));
        assert_eq!(o.unrank(3).unwrap(), mi(&[0, 1]));
        assert_eq!(o.unrank(6).unwrap(), mi(&[0, 2]));
        assert_eq!(o.rank(&mi(&[0, 2])).unwrap(), 6);
        let o3 = GradedOrdering::new(3, 2).unwrap();
        assert_eq!(o3.rank(&mi(&[0, 0, 1])).unwrap(), 4);
        let block: Vec<_> = o3.enumerate(2)[4..].to_vec();
        let expect = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        assert_eq!(block, expect.iter().map(|v| mi(v)).collect::<Vec<_>>());
    }

    #[test]
    fn enumerations() {
        let o1 = GradedOrdering::new(1, 0).unwrap();
        assert_eq!(o1.enumerate(3), (0..4).map(|k| mi(&[k])).collect::<Vec<_>>());
        let o = GradedOrdering::new(2, 1).unwrap();
        assert_eq!(o.enumerate(1), vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1])]);
        let e2 = o.enumerate(2);
        assert_eq!(e2.len(), 6);
        assert_eq!(*e2.last().unwrap(), mi(&[0, 2]));
    }

    #[test]
    fn binomials() {
        assert_eq!(multi_binomial(&mi(&[2, 2]), &mi(&[1, 1])), 4);
        assert_eq!(multi_binomial(&mi(&[3, 0]), &mi(&[3, 0])), 1);
        assert_eq!(multi_binomial(&mi(&[2, 1]), &mi(&[0, 2])), 0);
    }

    #[test]
    fn dimension_mixing_is_an_error() {
        let o = GradedOrdering::new(2, 1).unwrap();
        assert!(o.rank(&mi(&[1, 0, 0])).is_err());
        assert!(mi(&[1, 0]).checked_add(&mi(&[1])).is_err());
    }

    #[test]
    fn table_parents_and_positions() {
        let o = GradedOrdering::new(3, 2).unwrap();
        let t = IndexTable::new(o, 5);
        for pos in 1..t.len() {
            let (par, axis) = t.parent(pos);
            let m = t.index(pos);
            assert_eq!(t.index(par) + MultiIndex::axis(3, axis, 1), m);
            assert_eq!(t.position(&m), Some(pos));
            assert_eq!(o.rank(&m).unwrap(), pos + 1);
        }
        assert_eq!(t.position(&mi(&[3, 3, 0])), None);
    }
}
