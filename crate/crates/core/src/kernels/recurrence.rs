//! Constant-cost derivative recurrences on slabs `{m : m_k < c}`.
//!
//! Coordinates are given in a permuted frame in which the slab axis comes
//! last. The kernels involved are invariant under axis permutations, so the
//! caller only has to permute coordinates and indices.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::Scalar;

/// Dense slab buffer for `d = 2`: entry `(n, l)` at `n·levels + l`.
pub(crate) struct Slab2<S> {
    pub levels: usize,
    pub values: Vec<S>,
}

impl<S: Scalar> Slab2<S> {
    #[inline]
    pub fn get(&self, n: usize, l: usize) -> S {
        self.values[n * self.levels + l]
    }
}

fn i_pow(l: usize) -> Complex64 {
    [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][l % 4]
}

#[inline]
fn re<S: Scalar>(z: S) -> S {
    S::from_f64(z.to_c64().re)
}

/// `log r` and its derivatives `(n, l)` with `l ≤ 1`, `n + l ≤ p`.
///
/// Seeds for `n ≤ 2` use `∂_u^n ∂_v^l log r = Re(i^l (−1)^{k−1} (k−1)! z^{−k})`
/// with `z = u + iv` and `k = n + l ≥ 1`; higher `n` use
/// `r² D(n,l) = −2(n−1)u D(n−1,l) − (n−1)(n−2) D(n−2,l) − 2l v D(n,l−1)`.
pub(crate) fn laplace2d<S: Scalar>(u: f64, v: f64, p: usize) -> Slab2<S> {
    let levels = 2;
    let mut out = vec![S::zero(); (p + 1) * levels];
    let r2 = u * u + v * v;
    S::note_special(2);
    out[0] = S::from_f64(0.5 * libm::log(r2));
    let z = S::from_c64(Complex64::new(u, v));
    let zinv = S::one() / z;
    let mut zpow = S::one();
    let mut fact = 1.0;
    for k in 1..=p.min(3) {
        zpow *= zinv;
        if k > 1 {
            fact *= (k - 1) as f64;
        }
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let base = zpow.scale(sign * fact);
        for l in 0..levels.min(k + 1) {
            let n = k - l;
            if n <= 2 {
                out[n * levels + l] = re(base * S::from_c64(i_pow(l)));
            }
        }
    }
    let us = S::from_f64(u);
    let vs = S::from_f64(v);
    let inv_r2 = S::one() / (us * us + vs * vs);
    for n in 3..=p {
        let nf = n as f64;
        for l in 0..levels.min(p - n + 1) {
            let mut acc = (us * out[(n - 1) * levels + l]).scale(-2.0 * (nf - 1.0))
                - out[(n - 2) * levels + l].scale((nf - 1.0) * (nf - 2.0));
            if l >= 1 {
                acc -= (vs * out[n * levels + l - 1]).scale(2.0 * l as f64);
            }
            out[n * levels + l] = acc * inv_r2;
        }
    }
    Slab2 { levels, values: out }
}

/// `r² log r` and its derivatives `(n, l)` with `l ≤ 3`, `n + l ≤ p`.
///
/// With `F(z) = z log z` one has `∂_u^n ∂_v^l (r² log r) =
/// Re(i^l [z̄ F^{(k)}(z) + (n − l) F^{(k−1)}(z)])`, used as seed for `n ≤ 4`;
/// higher `n` follow
/// `r² D(n,l) = −2(n−2)u D(n−1,l) − (n−1)(n−4) D(n−2,l) − 2l v D(n,l−1) − l(l−1) D(n,l−2)`.
pub(crate) fn biharmonic2d<S: Scalar>(u: f64, v: f64, p: usize) -> Slab2<S> {
    let levels = 4;
    let mut out = vec![S::zero(); (p + 1) * levels];
    S::note_special(3);
    let r2 = u * u + v * v;
    let log_z = S::from_c64(Complex64::new(0.5 * libm::log(r2), libm::atan2(v, u)));
    let z = S::from_c64(Complex64::new(u, v));
    let zbar = z.conj();
    let zinv = S::one() / z;
    let kmax = p.min(7);
    // F^{(k)} for k = 0..=kmax
    let mut f = Vec::with_capacity(kmax + 1);
    f.push(z * log_z);
    if kmax >= 1 {
        f.push(log_z + S::one());
    }
    let mut zpow = S::one();
    let mut fact = 1.0;
    for k in 2..=kmax {
        if k > 2 {
            zpow *= zinv;
            fact *= (k - 2) as f64;
        } else {
            zpow = zinv;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        f.push(zpow.scale(sign * fact));
    }
    out[0] = re(zbar * f[0]);
    for k in 1..=kmax {
        for l in 0..levels.min(k + 1) {
            let n = k - l;
            if n > 4 {
                continue;
            }
            let mut t = zbar * f[k];
            let shift = n as f64 - l as f64;
            if shift != 0.0 {
                t += f[k - 1].scale(shift);
            }
            out[n * levels + l] = re(t * S::from_c64(i_pow(l)));
        }
    }
    let us = S::from_f64(u);
    let vs = S::from_f64(v);
    let inv_r2 = S::one() / (us * us + vs * vs);
    for n in 5..=p {
        let nf = n as f64;
        for l in 0..levels.min(p - n + 1) {
            let lf = l as f64;
            let mut acc = (us * out[(n - 1) * levels + l]).scale(-2.0 * (nf - 2.0))
                - out[(n - 2) * levels + l].scale((nf - 1.0) * (nf - 4.0));
            if l >= 1 {
                acc -= (vs * out[n * levels + l - 1]).scale(2.0 * lf);
            }
            if l >= 2 {
                acc -= out[n * levels + l - 2].scale(lf * (lf - 1.0));
            }
            out[n * levels + l] = acc * inv_r2;
        }
    }
    Slab2 { levels, values: out }
}

/// Dense slab buffer for `d = 3`: entry `(a, b, l)` at `(a·(p+1) + b)·levels + l`.
pub(crate) struct Slab3<S> {
    pub side: usize,
    pub levels: usize,
    pub values: Vec<S>,
}

impl<S: Scalar> Slab3<S> {
    #[inline]
    pub fn idx(&self, e: [usize; 3]) -> usize {
        (e[0] * self.side + e[1]) * self.levels + e[2]
    }

    #[inline]
    pub fn get(&self, e: [usize; 3]) -> S {
        self.values[self.idx(e)]
    }
}

/// `1/r` and its derivatives on `{e : e_2 ≤ 1, |e| ≤ p}`.
///
/// Each entry uses the one-axis identity
/// `r² ∂_a^n (1/r) = −(2n−1) w_a ∂_a^{n−1}(1/r) − (n−1)² ∂_a^{n−2}(1/r)`
/// along the first axis of `priority` with a nonzero exponent, with Leibniz
/// terms `−2 e_b w_b D(e−e_b) − e_b(e_b−1) D(e−2e_b)` for the other axes.
pub(crate) fn laplace3d<S: Scalar>(w: [f64; 3], p: usize, priority: [usize; 3]) -> Slab3<S> {
    let side = p + 1;
    let levels = 2;
    let mut slab = Slab3 { side, levels, values: vec![S::zero(); side * side * levels] };
    let ws = [S::from_f64(w[0]), S::from_f64(w[1]), S::from_f64(w[2])];
    let r2 = ws[0] * ws[0] + ws[1] * ws[1] + ws[2] * ws[2];
    S::note_special(1);
    let r = libm::sqrt(r2.to_c64().re);
    let inv_r = S::one() / S::from_f64(r);
    let inv_r2 = inv_r * inv_r;
    let i0 = slab.idx([0, 0, 0]);
    slab.values[i0] = inv_r;
    for t in 1..=p {
        for l in 0..levels.min(t + 1) {
            for a in 0..=(t - l) {
                let e = [a, t - l - a, l];
                let primary = *priority.iter().find(|&&ax| e[ax] > 0).unwrap();
                let n = e[primary] as f64;
                let mut em1 = e;
                em1[primary] -= 1;
                let mut acc = (ws[primary] * slab.get(em1)).scale(-(2.0 * n - 1.0));
                if e[primary] >= 2 {
                    let mut em2 = em1;
                    em2[primary] -= 1;
                    acc -= slab.get(em2).scale((n - 1.0) * (n - 1.0));
                }
                for b in 0..3 {
                    if b == primary || e[b] == 0 {
                        continue;
                    }
                    let mb = e[b] as f64;
                    let mut f1 = e;
                    f1[b] -= 1;
                    acc -= (ws[b] * slab.get(f1)).scale(2.0 * mb);
                    if e[b] >= 2 {
                        let mut f2 = f1;
                        f2[b] -= 1;
                        acc -= slab.get(f2).scale(mb * (mb - 1.0));
                    }
                }
                let i = slab.idx(e);
                slab.values[i] = acc * inv_r2;
            }
        }
    }
    slab
}
