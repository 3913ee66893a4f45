//! Floating point operation counts of single-source, single-target operators.
//!
//! Derivative tables and kernel spectra needed by M2L are precomputed outside
//! the measured region. The FFT part of an FFT-based M2L (forward transform of
//! the source expansion, inverse transform and extraction of the result) is
//! divided by the largest interaction list size, 27 in 2D and 189 in 3D.

use cfmm_core::expansions::{
    l2p, l2p_uncompressed, m2p, m2p_uncompressed, p2l, p2l_uncompressed, p2m, p2m_uncompressed, FullLocal, FullMultipole,
    MultipoleExpansion,
};
use cfmm_core::translations::{l2l, l2l_uncompressed, m2l_direct_indexed, m2m, m2m_uncompressed, M2lIndex, M2lLayout};
use cfmm_core::{CompressionPlan, Complex64, Counted, FlopTally, IndexTable, Kernel, NdFft, Scalar};

use super::plan_for;
use crate::config::ExperimentConfig;
use crate::error::{HarnessError, Result};
use crate::flops::measure;

pub const OPS: [&str; 7] = ["P2M", "P2L", "M2M", "M2L", "L2L", "M2P", "L2P"];

#[derive(Clone, Debug, PartialEq)]
pub struct OpcountRow {
    pub kernel: String,
    pub op: &'static str,
    pub p: usize,
    pub representation: &'static str,
    pub flops: f64,
}

/// Largest interaction list of a uniform tree: `6^d − 3^d`.
pub fn list_size(d: usize) -> usize {
    6usize.pow(d as u32) - 3usize.pow(d as u32)
}

pub fn run_opcount(cfg: &ExperimentConfig) -> Result<Vec<OpcountRow>> {
    let kernel = cfg.kernel()?;
    let ops: Vec<&'static str> = match &cfg.ops {
        None => OPS.to_vec(),
        Some(list) => list
            .iter()
            .map(|o| {
                OPS.iter()
                    .find(|k| k.eq_ignore_ascii_case(o))
                    .copied()
                    .ok_or_else(|| HarnessError::Config(format!("unknown operator `{o}`")))
            })
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::new();
    for &p in &cfg.orders {
        let Some(plan) = plan_for(&kernel, p)? else { continue };
        let setup = Setup::new(&kernel, &plan);
        for &op in &ops {
            for (representation, flops) in setup.count(op)? {
                rows.push(OpcountRow { kernel: kernel.id().into(), op, p, representation, flops });
            }
        }
    }
    Ok(rows)
}

fn c(z: &[Complex64]) -> Vec<Counted> {
    z.iter().map(|&v| Counted(v)).collect()
}

/// Fixed geometry shared by all counts.
struct Setup<'a> {
    kernel: &'a Kernel,
    plan: &'a CompressionPlan,
    center: Vec<f64>,
    source: Vec<f64>,
    target: Vec<f64>,
    shift: Vec<f64>,
    offset: Vec<f64>,
}

impl<'a> Setup<'a> {
    fn new(kernel: &'a Kernel, plan: &'a CompressionPlan) -> Self {
        let d = plan.dim();
        let pick = |v: [f64; 3]| v[..d].to_vec();
        Setup {
            kernel,
            plan,
            center: vec![0.0; d],
            source: pick([0.21, -0.13, 0.17]),
            target: pick([3.1, 2.3, -2.7]),
            shift: pick([0.25, -0.25, 0.25]),
            offset: pick([3.0, 2.0, -2.0]),
        }
    }

    fn weight(&self) -> Vec<Counted> {
        vec![Counted(Complex64::new(1.0, 0.0))]
    }

    fn count(&self, op: &str) -> Result<Vec<(&'static str, f64)>> {
        let (plan, kernel) = (self.plan, self.kernel);
        let flops = |t: FlopTally| t.flops() as f64;
        let w = self.weight();
        let (src, ctr) = (&self.source[..], &self.center[..]);
        let full_m = p2m_uncompressed(src, &w, ctr, 0.5, plan)?;
        let comp_m = p2m(src, &w, ctr, 0.5, plan)?;
        let far: Vec<f64> = self.center.iter().zip(&self.offset).map(|(a, b)| a + b).collect();
        let full_l = p2l_uncompressed(src, &w, &far, 0.5, plan, kernel)?;
        let comp_l = p2l(src, &w, &far, 0.5, plan, kernel)?;
        Ok(match op {
            "P2M" => vec![
                ("full", flops(measure(|| p2m_uncompressed(src, &w, ctr, 0.5, plan)).1)),
                ("compressed", flops(measure(|| p2m(src, &w, ctr, 0.5, plan)).1)),
            ],
            "P2L" => vec![
                ("full", flops(measure(|| p2l_uncompressed(src, &w, &far, 0.5, plan, kernel)).1)),
                ("compressed", flops(measure(|| p2l(src, &w, &far, 0.5, plan, kernel)).1)),
            ],
            "M2M" => vec![
                ("full", flops(measure(|| m2m_uncompressed(&full_m, &self.shift, plan)).1)),
                ("compressed", flops(measure(|| m2m(&comp_m, &self.shift, plan)).1)),
            ],
            "L2L" => {
                let near: Vec<f64> = far.iter().zip(&self.shift).map(|(a, b)| a + b).collect();
                vec![
                    ("full", flops(measure(|| l2l_uncompressed(&full_l, &near, plan)).1)),
                    ("compressed", flops(measure(|| l2l(&comp_l, &near, plan)).1)),
                ]
            }
            "M2P" => vec![
                ("full", flops(measure(|| m2p_uncompressed(&full_m, &self.target, kernel, plan)).1)),
                ("compressed", flops(measure(|| m2p(&comp_m, &self.target, kernel, plan)).1)),
            ],
            "L2P" => {
                let x: Vec<f64> = far.iter().zip(src).map(|(a, b)| a + 0.5 * b).collect();
                vec![
                    ("full", flops(measure(|| l2p_uncompressed(&full_l, &x, plan)).1)),
                    ("compressed", flops(measure(|| l2p(&comp_l, &x, plan)).1)),
                ]
            }
            "M2L" => self.m2l(&full_m, &comp_m)?,
            _ => unreachable!(),
        })
    }

    fn m2l(&self, full_m: &FullMultipole<Counted>, comp_m: &MultipoleExpansion<Counted>) -> Result<Vec<(&'static str, f64)>> {
        let (plan, kernel) = (self.plan, self.kernel);
        let d = plan.dim();
        let amortize = list_size(d) as f64;
        let r = self.offset.iter().map(|v| v * v).sum::<f64>().sqrt();
        let t = kernel.default_m2l_scale(plan.order(), r);
        let big = kernel.derivatives_full(&self.offset, 2 * plan.order(), plan.ordering())?.values;
        let local_center: Vec<f64> = self.offset.clone();

        let full = FullM2l::new(plan, t, &big);
        let (sig, fwd) = measure(|| full.signal_spectrum(&full_m.alpha));
        let mut acc = vec![Counted(Complex64::new(0.0, 0.0)); full.fft.len()];
        let ((), mult) = measure(|| accumulate(&full.spectrum, &sig, &mut acc));
        let (_, inv) = measure(|| full.finish(acc));
        let full_flops = mult.flops() as f64 + (fwd.flops() + inv.flops()) as f64 / amortize;

        let index = M2lIndex::new(plan);
        let big_c = c(&big);
        let (_, direct) = measure(|| m2l_direct_indexed(&index, comp_m, &local_center, 0.5, plan, &big_c));

        let layout = M2lLayout::new(plan, t);
        let spectrum = layout.kernel_spectrum(&big);
        let (sig, fwd) = measure(|| layout.signal_spectrum(&comp_m.beta));
        let mut acc = vec![Counted(Complex64::new(0.0, 0.0)); layout.grid_len()];
        let ((), mult) = measure(|| layout.accumulate(&spectrum, &sig, &mut acc));
        let (_, inv) = measure(|| layout.finish(acc));
        let fft_flops = mult.flops() as f64 + (fwd.flops() + inv.flops()) as f64 / amortize;

        Ok(vec![("full", full_flops), ("compressed", direct.flops() as f64), ("compressed+fft", fft_flops)])
    }
}

fn accumulate<S: Scalar>(spectrum: &[Complex64], signal: &[S], acc: &mut [S]) {
    for ((a, &k), &s) in acc.iter_mut().zip(spectrum).zip(signal) {
        *a += S::from_c64(k) * s;
    }
}

/// FFT-accelerated M2L on uncompressed expansions: the convolution
/// `θ_m = Σ_q G^{(m+q)} α_q` embedded in a circulant of side `2p+1` per axis.
pub struct FullM2l {
    fft: NdFft,
    /// grid offset of `m` and of `−m mod (2p+1)`, and `t^{|m|}`, per position of `M(p)`
    out_pos: Vec<usize>,
    in_pos: Vec<usize>,
    scale: Vec<f64>,
    spectrum: Vec<Complex64>,
}

impl FullM2l {
    /// `big` is the full derivative table of order `2p` at the displacement.
    pub fn new(plan: &CompressionPlan, t: f64, big: &[Complex64]) -> Self {
        let d = plan.dim();
        let side = 2 * plan.order() + 1;
        let shape = vec![side; d];
        let mut strides = vec![1usize; d];
        for a in (0..d.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * side;
        }
        let offset = |m: &cfmm_core::MultiIndex, neg: bool| -> usize {
            (0..d).map(|a| if neg { (side - m.get(a)) % side } else { m.get(a) } * strides[a]).sum()
        };
        let table = plan.table();
        let mut out_pos = Vec::with_capacity(table.len());
        let mut in_pos = Vec::with_capacity(table.len());
        let mut scale = Vec::with_capacity(table.len());
        for m in table.indices() {
            out_pos.push(offset(m, false));
            in_pos.push(offset(m, true));
            scale.push(t.powi(m.order() as i32));
        }
        let fft = NdFft::new(&shape);
        let bigt = IndexTable::new(plan.ordering(), 2 * plan.order());
        let mut spectrum = vec![Complex64::new(0.0, 0.0); fft.len()];
        for (v, &g) in bigt.indices().iter().zip(big) {
            spectrum[offset(v, false)] = g / t.powi(v.order() as i32);
        }
        fft.forward(&mut spectrum);
        FullM2l { fft, out_pos, in_pos, scale, spectrum }
    }

    pub fn signal_spectrum<S: Scalar>(&self, alpha: &[S]) -> Vec<S> {
        let mut grid = vec![S::zero(); self.fft.len()];
        for ((&pos, &a), &s) in self.in_pos.iter().zip(alpha).zip(&self.scale) {
            grid[pos] = a.scale(s);
        }
        self.fft.forward(&mut grid);
        grid
    }

    pub fn finish<S: Scalar>(&self, mut acc: Vec<S>) -> Vec<S> {
        self.fft.inverse(&mut acc);
        self.out_pos.iter().zip(&self.scale).map(|(&pos, &s)| acc[pos].scale(s)).collect()
    }

    /// All derivatives of the far field at the local center.
    pub fn apply<S: Scalar>(&self, alpha: &[S]) -> Vec<S> {
        let sig = self.signal_spectrum(alpha);
        let mut acc = vec![S::zero(); self.fft.len()];
        accumulate(&self.spectrum, &sig, &mut acc);
        self.finish(acc)
    }
}

/// Full local expansion from `FullM2l`, for comparisons.
pub fn full_m2l(kernel: &Kernel, plan: &CompressionPlan, alpha: &FullMultipole, local_center: &[f64], t: f64) -> Result<FullLocal> {
    let disp: Vec<f64> = local_center.iter().zip(&alpha.center).map(|(a, b)| a - b).collect();
    let big = kernel.derivatives_full(&disp, 2 * plan.order(), plan.ordering())?.values;
    let op = FullM2l::new(plan, t, &big);
    Ok(FullLocal { center: local_center.to_vec(), radius: 0.0, order: plan.order(), derivs: op.apply(&alpha.alpha) })
}
