//! Hankel function sequences of the first kind.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// `H_n^{(1)}(z) = J_n(z) + i·Y_n(z)` for `n = 0..=nmax`, `z > 0`.
pub fn cylindrical_hankel(nmax: usize, z: f64) -> Vec<Complex64> {
    let mut y = vec![0.0; nmax + 1];
    y[0] = libm::y0(z);
    if nmax >= 1 {
        y[1] = libm::y1(z);
    }
    for n in 1..nmax {
        y[n + 1] = 2.0 * n as f64 / z * y[n] - y[n - 1];
    }
    (0..=nmax).map(|n| Complex64::new(libm::jn(n as i32, z), y[n])).collect()
}

/// Spherical `h_n^{(1)}(z) = j_n(z) + i·y_n(z)` for `n = 0..=nmax`, `z > 0`.
///
/// `y_n` comes from the (stable) upward recurrence, `j_n` from Miller's
/// downward recurrence normalized against the closed forms of `j_0`/`j_1`.
pub fn spherical_hankel(nmax: usize, z: f64) -> Vec<Complex64> {
    let (s, c) = (libm::sin(z), libm::cos(z));
    let mut y = vec![0.0; nmax + 1];
    y[0] = -c / z;
    if nmax >= 1 {
        y[1] = -c / (z * z) - s / z;
    }
    for n in 1..nmax {
        y[n + 1] = (2 * n + 1) as f64 / z * y[n] - y[n - 1];
    }

    let start = nmax + 20 + z as usize + 1;
    let mut j = vec![0.0; start + 2];
    j[start] = 1e-250;
    for n in (1..=start).rev() {
        j[n - 1] = (2 * n + 1) as f64 / z * j[n] - j[n + 1];
        if j[n - 1].abs() > 1e250 {
            for v in j[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let j0 = s / z;
    let j1 = s / (z * z) - c / z;
    let norm = if j0.abs() >= j1.abs() { j0 / j[0] } else { j1 / j[1] };
    (0..=nmax).map(|n| Complex64::new(j[n] * norm, y[n])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_low_orders_match_closed_forms() {
        for &z in &[0.3, 1.0, 2.5, 17.0] {
            let h = spherical_hankel(3, z);
            let (s, c) = (libm::sin(z), libm::cos(z));
            let j2 = (3.0 / (z * z) - 1.0) * s / z - 3.0 * c / (z * z);
            assert!((h[0].re - s / z).abs() < 1e-14);
            assert!((h[2].re - j2).abs() < 1e-13 * (1.0 + j2.abs()));
        }
    }

    #[test]
    fn cylindrical_wronskian() {
        // J_{n+1} Y_n − J_n Y_{n+1} = 2/(π z)
        for &z in &[0.5, 3.0, 12.0] {
            let h = cylindrical_hankel(8, z);
            for n in 0..8 {
                let w = h[n + 1].re * h[n].im - h[n].re * h[n + 1].im;
                let expect = 2.0 / (core::f64::consts::PI * z);
                assert!((w - expect).abs() < 1e-12 * (1.0 + h[n + 1].im.abs()));
            }
        }
    }
}
