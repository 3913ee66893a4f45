//! Cartesian derivatives of radially symmetric kernels from the radial chain
//! `g_i = ((1/r) d/dr)^i G`.
//!
//! Writing `G = φ(|x|²/2)` gives `φ^{(i)} = g_i` and
//!
//! ```text
//! D^m G(x) = Σ_{ℓ ≤ m/2} Π_a [m_a! / ((m_a − 2ℓ_a)! ℓ_a! 2^{ℓ_a})] x_a^{m_a − 2ℓ_a} · g_{|m| − |ℓ|}.
//! ```
//!
//! The sum over the trailing axes is contracted once per distinct tail
//! `(m_2, …, m_d)`, after which every derivative costs `O(p)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::multiindex::MultiIndex;
use crate::Scalar;

/// Hermite-type coefficient table `E[n][ℓ]` for one coordinate.
struct AxisTable<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> AxisTable<S> {
    fn new(x: S, p: usize) -> Self {
        let mut pow = Vec::with_capacity(p + 1);
        pow.push(S::one());
        for k in 1..=p {
            let prev = pow[k - 1];
            pow.push(prev * x);
        }
        let rows = (0..=p)
            .map(|n| {
                let mut c = 1.0;
                (0..=n / 2)
                    .map(|l| {
                        let v = if c == 1.0 { pow[n - 2 * l] } else { pow[n - 2 * l].scale(c) };
                        let a = (n - 2 * l) as f64;
                        c *= a * (a - 1.0) / (2.0 * (l + 1) as f64);
                        v
                    })
                    .collect()
            })
            .collect();
        AxisTable { rows }
    }
}

/// Derivatives `D^m G(x)` for the given multi-indices, all of order `≤ p`,
/// from `g[0..=p]`.
pub(crate) fn derivatives<S: Scalar>(g: &[S], x: &[f64], indices: &[MultiIndex], p: usize) -> Vec<S> {
    let d = x.len();
    let tables: Vec<AxisTable<S>> = x.iter().map(|&xa| AxisTable::new(S::from_f64(xa), p)).collect();
    if d == 1 {
        return indices
            .iter()
            .map(|m| {
                let n = m.get(0);
                let mut acc = S::zero();
                for (l, e) in tables[0].rows[n].iter().enumerate() {
                    acc += *e * g[n - l];
                }
                acc
            })
            .collect();
    }
    let side = p + 1;
    let mut cache: Vec<Option<Vec<S>>> = vec![None; side.pow(d as u32 - 1)];
    let mut out = Vec::with_capacity(indices.len());
    for m in indices {
        let tail: Vec<usize> = m.components().skip(1).collect();
        let key = tail.iter().fold(0, |acc, &t| acc * side + t);
        if cache[key].is_none() {
            cache[key] = Some(tail_contraction(g, &tables[1..], &tail, p));
        }
        let k = cache[key].as_ref().unwrap();
        let n = m.get(0);
        let mut acc = S::zero();
        for (l, e) in tables[0].rows[n].iter().enumerate() {
            acc += *e * k[n - l];
        }
        out.push(acc);
    }
    out
}

/// `K(v) = Σ_{ℓ_tail} Π E_a[m_a][ℓ_a] · g_{v + |tail| − |ℓ_tail|}` for `v = 0..=p − |tail|`.
fn tail_contraction<S: Scalar>(g: &[S], tables: &[AxisTable<S>], tail: &[usize], p: usize) -> Vec<S> {
    // h[s] = Σ_{|ℓ| = s} Π E
    let mut h = vec![S::one()];
    for (t, &m) in tables.iter().zip(tail) {
        let row = &t.rows[m];
        let mut next = vec![S::zero(); h.len() + row.len() - 1];
        for (i, &a) in h.iter().enumerate() {
            for (l, &b) in row.iter().enumerate() {
                next[i + l] += a * b;
            }
        }
        h = next;
    }
    let total: usize = tail.iter().sum();
    (0..=p - total)
        .map(|v| {
            let mut acc = S::zero();
            for (s, &hs) in h.iter().enumerate() {
                acc += hs * g[v + total - s];
            }
            acc
        })
        .collect()
}
