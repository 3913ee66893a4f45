use cfmm_core::fft::{circulant_convolve, dft_forward, dft_inverse};
use cfmm_core::{Complex64, FftPlan, GridTensor};

fn grid(shape: &[usize], f: impl Fn(usize) -> Complex64) -> GridTensor<Complex64> {
    let n: usize = shape.iter().product();
    GridTensor::from_data(shape, (0..n).map(f).collect()).unwrap()
}

fn pseudo(i: usize) -> Complex64 {
    Complex64::new(((i * 2654435761) % 1000) as f64 / 500.0 - 1.0, ((i * 40503) % 997) as f64 / 498.5 - 1.0)
}

fn brute(kernel: &GridTensor<Complex64>, x: &GridTensor<Complex64>) -> Vec<Complex64> {
    let shape = &x.shape;
    let d = shape.len();
    let n = x.data.len();
    let coords = |mut i: usize| {
        let mut c = vec![0; d];
        for a in (0..d).rev() {
            c[a] = i % shape[a];
            i /= shape[a];
        }
        c
    };
    (0..n)
        .map(|out| {
            let co = coords(out);
            (0..n)
                .map(|inp| {
                    let ci = coords(inp);
                    let diff: Vec<usize> = (0..d).map(|a| (co[a] + shape[a] - ci[a]) % shape[a]).collect();
                    kernel.data[x.offset(&diff)] * x.data[inp]
                })
                .sum()
        })
        .collect()
}

fn max_rel(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|v| v.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

#[test]
fn constant_and_delta_spectra() {
    let ones = grid(&[5, 7], |_| Complex64::new(1.0, 0.0));
    let s = dft_forward(&ones);
    assert!((s.data[0] - Complex64::new(35.0, 0.0)).norm() < 1e-12);
    assert!(s.data[1..].iter().all(|v| v.norm() < 1e-12));
    let delta = grid(&[5, 7], |i| Complex64::new((i == 0) as u8 as f64, 0.0));
    assert!(dft_forward(&delta).data.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-14));
}

#[test]
fn round_trip_and_parseval() {
    let x = grid(&[5, 7], pseudo);
    let back = dft_inverse(&dft_forward(&x));
    assert!(max_rel(&back.data, &x.data) < 1e-13);
    for shape in [vec![1000], vec![31, 37], vec![17, 19, 23]] {
        let x = grid(&shape, pseudo);
        let s = dft_forward(&x);
        let n = x.data.len() as f64;
        let e1: f64 = x.data.iter().map(|v| v.norm_sqr()).sum();
        let e2: f64 = s.data.iter().map(|v| v.norm_sqr()).sum::<f64>() / n;
        assert!((e1 - e2).abs() <= 1e-12 * e1);
    }
}

#[test]
fn circulant_products_match_cyclic_sums() {
    for shape in [vec![5], vec![5, 7], vec![5, 5, 3], vec![4, 9], vec![1, 6]] {
        let k = grid(&shape, |i| pseudo(i + 11));
        let x = grid(&shape, pseudo);
        let got = circulant_convolve(&dft_forward(&k), &x).unwrap();
        assert!(max_rel(&got.data, &brute(&k, &x)) < 1e-12, "{shape:?}");
    }
    let x = grid(&[5, 5, 3], pseudo);
    let delta = grid(&[5, 5, 3], |i| Complex64::new((i == 0) as u8 as f64, 0.0));
    let same = circulant_convolve(&dft_forward(&delta), &x).unwrap();
    assert!(max_rel(&same.data, &x.data) < 1e-14);
    assert!(circulant_convolve(&dft_forward(&delta), &grid(&[5, 5], pseudo)).is_err());
}

#[test]
fn prime_lengths_use_bluestein() {
    assert!(FftPlan::new(101).uses_bluestein());
    assert!(!FftPlan::new(21).uses_bluestein());
    let x = grid(&[101], pseudo);
    let k = grid(&[101], |i| pseudo(i + 3));
    let got = circulant_convolve(&dft_forward(&k), &x).unwrap();
    assert!(max_rel(&got.data, &brute(&k, &x)) < 1e-12);
}
