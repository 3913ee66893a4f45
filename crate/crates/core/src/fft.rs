//! Discrete Fourier transforms of arbitrary length and dimension.
//!
//! Lengths whose prime factors are all at most [`MAX_DIRECT_RADIX`] use a
//! recursive mixed-radix Cooley–Tukey transform; other lengths go through
//! Bluestein's chirp-z algorithm on a power-of-two grid. The forward
//! transform is unnormalized, the inverse divides by the length.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result, Scalar};

/// Largest prime handled by a direct butterfly inside the mixed-radix path.
pub const MAX_DIRECT_RADIX: usize = 13;

#[derive(Clone, Debug)]
enum Algorithm {
    MixedRadix { factors: Vec<usize> },
    Bluestein(Box<Bluestein>),
}

#[derive(Clone, Debug)]
struct Bluestein {
    inner: FftPlan,
    chirp: Vec<Complex64>,
    kernel_spectrum: Vec<Complex64>,
}

/// One-dimensional transform plan of a fixed length.
#[derive(Clone, Debug)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<Complex64>,
    algorithm: Algorithm,
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut f = Vec::new();
    while n % 4 == 0 {
        f.push(4);
        n /= 4;
    }
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            f.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        f.push(n);
    }
    f
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "transform length must be positive");
        let twiddles = (0..n)
            .map(|k| {
                let a = -2.0 * PI * (k as f64) / (n as f64);
                Complex64::new(libm::cos(a), libm::sin(a))
            })
            .collect();
        let factors = factorize(n);
        let algorithm = if factors.iter().all(|&r| r <= MAX_DIRECT_RADIX) {
            Algorithm::MixedRadix { factors }
        } else {
            Algorithm::Bluestein(Box::new(Bluestein::new(n)))
        };
        FftPlan { n, twiddles, algorithm }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn uses_bluestein(&self) -> bool {
        matches!(self.algorithm, Algorithm::Bluestein(_))
    }

    /// In-place `X_k = Σ_n x_n e^{−2πi nk/N}`.
    pub fn forward<S: Scalar>(&self, data: &mut [S]) {
        assert_eq!(data.len(), self.n);
        if self.n == 1 {
            return;
        }
        match &self.algorithm {
            Algorithm::MixedRadix { factors } => {
                let input = data.to_vec();
                let mut scratch = vec![S::zero(); MAX_DIRECT_RADIX.max(4)];
                self.mixed(&input, 0, 1, data, factors, self.n, &mut scratch);
            }
            Algorithm::Bluestein(b) => b.run(data),
        }
    }

    /// In-place inverse, including the `1/N` factor.
    pub fn inverse<S: Scalar>(&self, data: &mut [S]) {
        for v in data.iter_mut() {
            *v = v.conj();
        }
        self.forward(data);
        let s = 1.0 / self.n as f64;
        for v in data.iter_mut() {
            *v = v.conj().scale(s);
        }
    }

    #[inline]
    fn w(&self, k: usize) -> Complex64 {
        self.twiddles[k % self.n]
    }

    #[allow(clippy::too_many_arguments)]
    fn mixed<S: Scalar>(
        &self,
        input: &[S],
        offset: usize,
        stride: usize,
        out: &mut [S],
        factors: &[usize],
        n: usize,
        scratch: &mut [S],
    ) {
        if n == 1 {
            out[0] = input[offset];
            return;
        }
        let r = factors[0];
        let m = n / r;
        for s in 0..r {
            self.mixed(input, offset + s * stride, stride * r, &mut out[s * m..(s + 1) * m], &factors[1..], m, scratch);
        }
        let big = self.n / n;
        let rstep = self.n / r;
        for k in 0..m {
            let t = &mut scratch[..r];
            t[0] = out[k];
            for s in 1..r {
                let idx = s * k * big;
                t[s] = if idx == 0 { out[s * m + k] } else { out[s * m + k] * S::from_c64(self.w(idx)) };
            }
            match r {
                2 => {
                    out[k] = t[0] + t[1];
                    out[k + m] = t[0] - t[1];
                }
                4 => {
                    // multiplication by −i is a component swap
                    let a = t[0] + t[2];
                    let b = t[0] - t[2];
                    let c = t[1] + t[3];
                    let dd = t[1] - t[3];
                    let dmi = S::from_c64(Complex64::new(dd.to_c64().im, -dd.to_c64().re));
                    out[k] = a + c;
                    out[k + m] = b + dmi;
                    out[k + 2 * m] = a - c;
                    out[k + 3 * m] = b - dmi;
                }
                _ => {
                    for q in 0..r {
                        let mut acc = t[0];
                        for s in 1..r {
                            let idx = (s * q) % r;
                            acc += if idx == 0 { t[s] } else { t[s] * S::from_c64(self.w(idx * rstep)) };
                        }
                        out[k + q * m] = acc;
                    }
                }
            }
        }
    }
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let inner = FftPlan::new(m);
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                let k2 = (k * k) % (2 * n);
                let a = -PI * (k2 as f64) / (n as f64);
                Complex64::new(libm::cos(a), libm::sin(a))
            })
            .collect();
        let mut b = vec![Complex64::new(0.0, 0.0); m];
        b[0] = chirp[0].conj();
        for k in 1..n {
            b[k] = chirp[k].conj();
            b[m - k] = chirp[k].conj();
        }
        inner.forward(&mut b);
        Bluestein { inner, chirp, kernel_spectrum: b }
    }

    fn run<S: Scalar>(&self, data: &mut [S]) {
        let n = data.len();
        let m = self.inner.len();
        let mut a = vec![S::zero(); m];
        for k in 0..n {
            a[k] = data[k] * S::from_c64(self.chirp[k]);
        }
        self.inner.forward(&mut a);
        for (x, &b) in a.iter_mut().zip(&self.kernel_spectrum) {
            *x *= S::from_c64(b);
        }
        self.inner.inverse(&mut a);
        for k in 0..n {
            data[k] = a[k] * S::from_c64(self.chirp[k]);
        }
    }
}

/// Row-major complex tensor (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridTensor<S> {
    pub shape: Vec<usize>,
    pub data: Vec<S>,
}

impl<S: Scalar> GridTensor<S> {
    pub fn zeros(shape: &[usize]) -> Self {
        let n = shape.iter().product();
        GridTensor { shape: shape.to_vec(), data: vec![S::zero(); n] }
    }

    pub fn from_data(shape: &[usize], data: Vec<S>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if data.len() != n {
            return Err(Error::LengthMismatch { expected: n, found: data.len() });
        }
        Ok(GridTensor { shape: shape.to_vec(), data })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat offset of a multi-dimensional position.
    pub fn offset(&self, pos: &[usize]) -> usize {
        pos.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| acc * n + i)
    }
}

/// Separable d-dimensional transform built from one plan per axis.
#[derive(Clone, Debug)]
pub struct NdFft {
    shape: Vec<usize>,
    plans: Vec<FftPlan>,
}

impl NdFft {
    pub fn new(shape: &[usize]) -> Self {
        NdFft { shape: shape.to_vec(), plans: shape.iter().map(|&n| FftPlan::new(n)).collect() }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward<S: Scalar>(&self, data: &mut [S]) {
        self.run(data, false);
    }

    pub fn inverse<S: Scalar>(&self, data: &mut [S]) {
        self.run(data, true);
    }

    fn run<S: Scalar>(&self, data: &mut [S], inverse: bool) {
        assert_eq!(data.len(), self.len());
        let total = self.len();
        let mut line = Vec::new();
        let mut inner = total;
        for (axis, plan) in self.plans.iter().enumerate() {
            let n = self.shape[axis];
            inner /= n;
            if n == 1 {
                continue;
            }
            let outer = total / (n * inner);
            line.resize(n, S::zero());
            for o in 0..outer {
                for i in 0..inner {
                    let base = o * n * inner + i;
                    for k in 0..n {
                        line[k] = data[base + k * inner];
                    }
                    if inverse {
                        plan.inverse(&mut line);
                    } else {
                        plan.forward(&mut line);
                    }
                    for k in 0..n {
                        data[base + k * inner] = line[k];
                    }
                }
            }
        }
    }
}

/// Forward transform of a tensor (unnormalized).
pub fn dft_forward<S: Scalar>(tensor: &GridTensor<S>) -> GridTensor<S> {
    let mut out = tensor.clone();
    NdFft::new(&tensor.shape).forward(&mut out.data);
    out
}

/// Inverse transform of a spectrum (divides by the total size).
pub fn dft_inverse<S: Scalar>(spectrum: &GridTensor<S>) -> GridTensor<S> {
    let mut out = spectrum.clone();
    NdFft::new(&spectrum.shape).inverse(&mut out.data);
    out
}

/// Cyclic convolution of `signal` with the kernel whose forward transform is
/// `kernel_spectrum`.
pub fn circulant_convolve<S: Scalar>(kernel_spectrum: &GridTensor<S>, signal: &GridTensor<S>) -> Result<GridTensor<S>> {
    if kernel_spectrum.shape != signal.shape {
        return Err(Error::ShapeMismatch);
    }
    let fft = NdFft::new(&signal.shape);
    let mut data = signal.data.clone();
    fft.forward(&mut data);
    for (x, &k) in data.iter_mut().zip(&kernel_spectrum.data) {
        *x *= k;
    }
    fft.inverse(&mut data);
    Ok(GridTensor { shape: signal.shape.clone(), data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, &v)| {
                        let a = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                        v * Complex64::new(libm::cos(a), libm::sin(a))
                    })
                    .sum()
            })
            .collect()
    }

    fn signal(n: usize) -> Vec<Complex64> {
        (0..n).map(|k| Complex64::new(libm::sin(k as f64 * 1.3 + 0.2), libm::cos(k as f64 * 0.7))).collect()
    }

    #[test]
    fn matches_naive_dft_for_many_lengths() {
        for n in [1usize, 2, 3, 4, 5, 6, 7, 8, 9, 12, 15, 16, 17, 21, 23, 25, 31, 34, 49, 60, 61, 97, 128] {
            let x = signal(n);
            let mut y = x.clone();
            FftPlan::new(n).forward(&mut y);
            let r = naive(&x);
            let scale: f64 = r.iter().map(|v| v.norm()).fold(1.0, f64::max);
            for (a, b) in y.iter().zip(&r) {
                assert!((a - b).norm() <= 1e-12 * scale, "n={n}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        for n in [5usize, 19, 64, 81, 101] {
            let x = signal(n);
            let mut y = x.clone();
            let p = FftPlan::new(n);
            p.forward(&mut y);
            p.inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }
}
