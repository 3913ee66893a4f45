//! Independent derivative oracle for tests.
//!
//! `G(x + h)` is expanded as a truncated multivariate power series in `h`
//! using double-double arithmetic: `r(h) = r₀·sqrt(1 + w(h))` is composed
//! from the binomial series, and the radial profile `F(r)` from its univariate
//! Taylor coefficients at `r₀`. Derivatives are `m!` times the coefficients.
//! None of the recurrences of the production path are involved.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use super::{cylindrical_hankel, DerivativeTable, Kernel};
use crate::multiindex::{binomial, GradedOrdering};
use crate::Result;

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let s = Dd::new(libm::sqrt(self.hi));
        s + (self - s * s) / (s * Dd::new(2.0))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = libm::fma(self.hi, o.hi, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn real(x: Dd) -> Cdd {
        Cdd { re: x, im: Dd::ZERO }
    }

    pub fn from_c64(z: Complex64) -> Cdd {
        Cdd { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re * s, im: self.im * s }
    }

    fn is_zero(&self) -> bool {
        self.re.hi == 0.0 && self.im.hi == 0.0
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Truncated power series in `d` variables, dense on the `(q+1)^d` grid.
struct Series {
    q: usize,
    coef: Vec<Cdd>,
    /// (grid offset, degree) of every multi-index with degree ≤ q
    support: Vec<(usize, usize)>,
}

impl Series {
    fn zeros(d: usize, q: usize, support: &[(usize, usize)]) -> Series {
        Series { q, coef: vec![Cdd::ZERO; (q + 1).pow(d as u32)], support: support.to_vec() }
    }

    fn mul(&self, o: &Series) -> Series {
        let mut out = Series { q: self.q, coef: vec![Cdd::ZERO; self.coef.len()], support: self.support.clone() };
        for &(ga, da) in &self.support {
            let a = self.coef[ga];
            if a.is_zero() {
                continue;
            }
            for &(gb, db) in &o.support {
                if da + db > self.q {
                    continue;
                }
                let b = o.coef[gb];
                if b.is_zero() {
                    continue;
                }
                out.coef[ga + gb] = out.coef[ga + gb] + a * b;
            }
        }
        out
    }

    /// `Σ_k f_k s^k` for a series `s` without constant term.
    fn compose(f: &[Cdd], s: &Series) -> Series {
        let mut out = Series { q: s.q, coef: vec![Cdd::ZERO; s.coef.len()], support: s.support.clone() };
        out.coef[0] = f[s.q.min(f.len() - 1)];
        for k in (0..s.q.min(f.len() - 1)).rev() {
            out = out.mul(s);
            out.coef[0] = out.coef[0] + f[k];
        }
        out
    }
}

fn dd_pow(x: Dd, k: usize) -> Dd {
    (0..k).fold(Dd::new(1.0), |acc, _| acc * x)
}

fn dd_factorial(k: usize) -> Dd {
    (1..=k).fold(Dd::new(1.0), |acc, i| acc * Dd::new(i as f64))
}

/// Taylor coefficients `F^{(k)}(r₀)/k!`, `k = 0..=q`, of the radial profile.
fn radial_profile(kernel: &Kernel, r0: Dd, q: usize) -> Vec<Cdd> {
    let inv = |k: usize| -> Dd {
        let v = Dd::new(1.0) / dd_pow(r0, k + 1);
        if k % 2 == 0 { v } else { -v }
    };
    let log_series = |k: usize| -> Dd {
        if k == 0 {
            Dd::new(libm::log(r0.to_f64()))
        } else {
            let v = Dd::new(1.0) / (Dd::new(k as f64) * dd_pow(r0, k));
            if k % 2 == 1 { v } else { -v }
        }
    };
    match *kernel {
        Kernel::Laplace3d => (0..=q).map(|k| Cdd::real(inv(k))).collect(),
        Kernel::Laplace2d => (0..=q).map(|k| Cdd::real(log_series(k))).collect(),
        Kernel::Biharmonic2d => (0..=q)
            .map(|k| {
                let mut v = r0 * r0 * log_series(k);
                if k >= 1 {
                    v = v + Dd::new(2.0) * r0 * log_series(k - 1);
                }
                if k >= 2 {
                    v = v + log_series(k - 2);
                }
                Cdd::real(v)
            })
            .collect(),
        Kernel::Helmholtz3d { kappa } => {
            let phase = Complex64::new(0.0, kappa * r0.to_f64()).exp();
            let e: Vec<Cdd> = (0..=q)
                .map(|k| {
                    let ik = Complex64::new(0.0, 1.0).powu(k as u32) * libm::pow(kappa, k as f64);
                    (Cdd::from_c64(phase) * Cdd::from_c64(ik)).scale(Dd::new(1.0) / dd_factorial(k))
                })
                .collect();
            let norm = Dd::new(1.0) / (Dd::new(4.0) * Dd::new(PI));
            (0..=q)
                .map(|k| {
                    let mut acc = Cdd::ZERO;
                    for a in 0..=k {
                        acc = acc + e[a].scale(inv(k - a));
                    }
                    acc.scale(norm)
                })
                .collect()
        }
        Kernel::Helmholtz2d { kappa } => {
            let z = kappa * r0.to_f64();
            let h = cylindrical_hankel(q, z);
            let hank = |n: isize| -> Cdd {
                let v = Cdd::from_c64(h[n.unsigned_abs()]);
                if n < 0 && n % 2 != 0 { Cdd { re: -v.re, im: -v.im } } else { v }
            };
            (0..=q)
                .map(|k| {
                    // H₀^{(k)} = 2^{−k} Σ_j (−1)^j C(k,j) H_{2j−k}
                    let mut acc = Cdd::ZERO;
                    for jj in 0..=k {
                        let c = binomial(k, jj) as f64 * if jj % 2 == 0 { 1.0 } else { -1.0 };
                        acc = acc + hank(2 * jj as isize - k as isize).scale(Dd::new(c));
                    }
                    let s = Dd::new(libm::pow(kappa / 2.0, k as f64)) / dd_factorial(k);
                    acc.scale(s) * Cdd::from_c64(Complex64::new(0.0, 0.25))
                })
                .collect()
        }
    }
}

/// Full derivative table of `kernel` at `x` up to order `q_max`.
pub fn derivatives_reference(kernel: &Kernel, x: &[f64], q_max: usize, ordering: GradedOrdering) -> Result<DerivativeTable> {
    kernel.check_point(x)?;
    let d = x.len();
    let q = q_max;
    let side = q + 1;
    let mut strides = vec![0usize; d];
    let mut s = 1;
    for a in (0..d).rev() {
        strides[a] = s;
        s *= side;
    }
    let indices = ordering.enumerate(q);
    let support: Vec<(usize, usize)> = indices
        .iter()
        .map(|m| (m.components().zip(&strides).map(|(c, s)| c * s).sum(), m.order()))
        .collect();

    let xs: Vec<Dd> = x.iter().map(|&v| Dd::new(v)).collect();
    let r2 = xs.iter().fold(Dd::ZERO, |acc, &v| acc + v * v);
    let r0 = r2.sqrt();

    // w(h) = (2 x·h + |h|²) / r₀²
    let mut w = Series::zeros(d, q, &support);
    if q >= 1 {
        for a in 0..d {
            w.coef[strides[a]] = Cdd::real(Dd::new(2.0) * xs[a] / r2);
            if q >= 2 {
                w.coef[2 * strides[a]] = Cdd::real(Dd::new(1.0) / r2);
            }
        }
    }
    // sqrt(1 + w) − 1 = Σ_{k≥1} C(1/2, k) w^k
    let mut half = vec![Cdd::ZERO; q + 1];
    let mut c = Dd::new(1.0);
    for (k, slot) in half.iter_mut().enumerate().skip(1) {
        c = c * Dd::new(0.5 - (k - 1) as f64) / Dd::new(k as f64);
        *slot = Cdd::real(c);
    }
    let mut delta = Series::compose(&half, &w);
    for v in delta.coef.iter_mut() {
        *v = v.scale(r0);
    }
    let g = Series::compose(&radial_profile(kernel, r0, q), &delta);

    let values = indices
        .iter()
        .zip(&support)
        .map(|(m, &(grid, _))| g.coef[grid].scale(Dd::new(m.factorial())).to_c64())
        .collect();
    Ok(DerivativeTable { order: q, ordering, compressed: false, values })
}
