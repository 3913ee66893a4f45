//! Kernels and their Cartesian derivatives.
//!
//! | id             | `G(x)`                      | PDE        |
//! |----------------|-----------------------------|------------|
//! | `laplace2d`    | `log r`                     | `Δ`        |
//! | `laplace3d`    | `1/r`                       | `Δ`        |
//! | `biharmonic2d` | `r² log r`                  | `Δ²`       |
//! | `helmholtz2d`  | `(i/4) H₀⁽¹⁾(κr)`           | `Δ + κ²`   |
//! | `helmholtz3d`  | `e^{iκr} / (4πr)`           | `Δ + κ²`   |
//!
//! The Laplace normalizations omit the usual `−1/(2π)` and `1/(4π)` factors;
//! the Helmholtz kernels are the outgoing fundamental solutions.

mod bessel;
mod radial;
mod recurrence;
pub mod reference;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::multiindex::{GradedOrdering, MultiIndex};
use crate::plan::{CompressionPlan, PdeOperator};
use crate::{Error, Result, Scalar};

pub use bessel::{cylindrical_hankel, spherical_hankel};

/// Points closer to the origin than this are treated as singular.
pub const SINGULAR_RADIUS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    Laplace2d,
    Laplace3d,
    Biharmonic2d,
    Helmholtz2d { kappa: f64 },
    Helmholtz3d { kappa: f64 },
}

/// Derivative values `D^m G(x)` laid out in a graded ordering, either for all
/// `|m| ≤ order` or only for the stored indices of a plan.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTable<S = Complex64> {
    pub order: usize,
    pub ordering: GradedOrdering,
    pub compressed: bool,
    pub values: Vec<S>,
}

impl Kernel {
    pub fn from_id(id: &str, kappa: Option<f64>) -> Result<Kernel> {
        let need_kappa = || match kappa {
            Some(k) if k > 0.0 && k.is_finite() => Ok(k),
            _ => Err(Error::Invalid("Helmholtz kernels need a positive wavenumber")),
        };
        match id {
            "laplace2d" => Ok(Kernel::Laplace2d),
            "laplace3d" => Ok(Kernel::Laplace3d),
            "biharmonic2d" => Ok(Kernel::Biharmonic2d),
            "helmholtz2d" => Ok(Kernel::Helmholtz2d { kappa: need_kappa()? }),
            "helmholtz3d" => Ok(Kernel::Helmholtz3d { kappa: need_kappa()? }),
            _ => Err(Error::Invalid("unknown kernel id")),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Kernel::Laplace2d => "laplace2d",
            Kernel::Laplace3d => "laplace3d",
            Kernel::Biharmonic2d => "biharmonic2d",
            Kernel::Helmholtz2d { .. } => "helmholtz2d",
            Kernel::Helmholtz3d { .. } => "helmholtz3d",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Kernel::Laplace3d | Kernel::Helmholtz3d { .. } => 3,
            _ => 2,
        }
    }

    pub fn kappa(&self) -> Option<f64> {
        match *self {
            Kernel::Helmholtz2d { kappa } | Kernel::Helmholtz3d { kappa } => Some(kappa),
            _ => None,
        }
    }

    pub fn pde(&self) -> PdeOperator {
        match *self {
            Kernel::Laplace2d | Kernel::Laplace3d => PdeOperator::laplace(self.dim()),
            Kernel::Biharmonic2d => PdeOperator::biharmonic(2),
            Kernel::Helmholtz2d { kappa } | Kernel::Helmholtz3d { kappa } => PdeOperator::helmholtz(self.dim(), kappa),
        }
    }

    /// Exponent `p′` in the derivative bound `|D^q G(x)| ≤ M / ‖x‖^{|q|+p′}`.
    pub fn singularity_exponent(&self) -> f64 {
        match self {
            Kernel::Laplace2d | Kernel::Helmholtz2d { .. } => 0.0,
            Kernel::Laplace3d | Kernel::Helmholtz3d { .. } => 1.0,
            Kernel::Biharmonic2d => -2.0,
        }
    }

    /// Default M2L scaling for order `p` and inter-center distance `r`:
    /// `t = p/r`, and `t = p/(2r)` for the biharmonic kernel, whose derivatives
    /// grow two orders slower.
    pub fn default_m2l_scale(&self, p: usize, r: f64) -> f64 {
        let t = p.max(1) as f64 / r;
        match self {
            Kernel::Biharmonic2d => 0.5 * t,
            _ => t,
        }
    }

    /// The more aggressive biharmonic scaling `t = p/(4r)`, kept for comparison.
    pub fn biharmonic_alt_scale(p: usize, r: f64) -> f64 {
        p.max(1) as f64 / (4.0 * r)
    }

    fn check_point(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.len() });
        }
        let r = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
        if !(r >= SINGULAR_RADIUS) {
            return Err(Error::Singular);
        }
        Ok(r)
    }

    /// `G(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        self.eval_scalar(x)
    }

    /// `G(x)` with the arithmetic routed through `S`.
    pub fn eval_scalar<S: Scalar>(&self, x: &[f64]) -> Result<S> {
        let r = self.check_point(x)?;
        let mut r2 = S::zero();
        for &v in x {
            let s = S::from_f64(v);
            r2 += s * s;
        }
        Ok(match *self {
            Kernel::Laplace2d => {
                S::note_special(1);
                S::from_f64(0.5 * libm::log(r2.to_c64().re))
            }
            Kernel::Laplace3d => {
                S::note_special(1);
                S::one() / S::from_f64(r)
            }
            Kernel::Biharmonic2d => {
                S::note_special(1);
                r2 * S::from_f64(0.5 * libm::log(r2.to_c64().re))
            }
            Kernel::Helmholtz2d { kappa } => {
                S::note_special(3);
                let z = kappa * r;
                S::from_c64(Complex64::new(-libm::y0(z) / 4.0, libm::j0(z) / 4.0))
            }
            Kernel::Helmholtz3d { kappa } => {
                S::note_special(3);
                let e = Complex64::new(libm::cos(kappa * r), libm::sin(kappa * r));
                S::from_c64(e) / S::from_f64(4.0 * PI * r)
            }
        })
    }

    /// `((1/r) d/dr)^i G` for `i = 0..=i_max`.
    pub fn radial_chain(&self, r: f64, i_max: usize) -> Result<Vec<Complex64>> {
        self.radial_chain_scalar(r, i_max)
    }

    pub fn radial_chain_scalar<S: Scalar>(&self, r: f64, i_max: usize) -> Result<Vec<S>> {
        if !(r >= SINGULAR_RADIUS) {
            return Err(Error::Singular);
        }
        let mut g = Vec::with_capacity(i_max + 1);
        let rs = S::from_f64(r);
        let inv_r2 = S::one() / (rs * rs);
        match *self {
            Kernel::Laplace2d => {
                S::note_special(1);
                g.push(S::from_f64(libm::log(r)));
                if i_max >= 1 {
                    g.push(inv_r2);
                }
                for i in 2..=i_max {
                    let prev = g[i - 1];
                    g.push((prev * inv_r2).scale(-2.0 * (i - 1) as f64));
                }
            }
            Kernel::Laplace3d => {
                g.push(S::one() / rs);
                for i in 1..=i_max {
                    let prev = g[i - 1];
                    g.push((prev * inv_r2).scale(-(2.0 * i as f64 - 1.0)));
                }
            }
            Kernel::Biharmonic2d => {
                S::note_special(1);
                let lr = S::from_f64(libm::log(r));
                g.push(rs * rs * lr);
                if i_max >= 1 {
                    g.push(lr.scale(2.0) + S::one());
                }
                if i_max >= 2 {
                    g.push(inv_r2.scale(2.0));
                }
                for i in 3..=i_max {
                    let prev = g[i - 1];
                    g.push((prev * inv_r2).scale(-2.0 * (i - 2) as f64));
                }
            }
            Kernel::Helmholtz2d { kappa } => {
                S::note_special(2 * (i_max as u64 + 1));
                let h = cylindrical_hankel(i_max, kappa * r);
                let ratio = S::from_f64(-kappa / r);
                let mut f = S::from_c64(Complex64::new(0.0, 0.25));
                for hi in h {
                    g.push(f * S::from_c64(hi));
                    f *= ratio;
                }
            }
            Kernel::Helmholtz3d { kappa } => {
                S::note_special(3);
                let h = spherical_hankel(i_max, kappa * r);
                let ratio = S::from_f64(-kappa / r);
                let mut f = S::from_c64(Complex64::new(0.0, kappa / (4.0 * PI)));
                for hi in h {
                    g.push(f * S::from_c64(hi));
                    f *= ratio;
                }
            }
        }
        Ok(g)
    }

    fn check_plan(&self, plan: &CompressionPlan) -> Result<()> {
        if plan.pde() != &self.pde() {
            return Err(Error::PlanKernelMismatch);
        }
        Ok(())
    }

    /// `D^m G(x)` for the stored indices of `plan`, in stored order.
    pub fn derivatives_compressed(&self, x: &[f64], plan: &CompressionPlan) -> Result<DerivativeTable> {
        Ok(DerivativeTable {
            order: plan.order(),
            ordering: plan.ordering(),
            compressed: true,
            values: self.derivatives_compressed_scalar(x, plan)?,
        })
    }

    pub fn derivatives_compressed_scalar<S: Scalar>(&self, x: &[f64], plan: &CompressionPlan) -> Result<Vec<S>> {
        self.check_plan(plan)?;
        let r = self.check_point(x)?;
        let p = plan.order();
        let k = plan.ordering().slowest_axis();
        let c = plan.pde().order();
        let slab_layout = plan.has_property1() && plan.stored_indices().all(|m| m.get(k) < c);
        match self {
            Kernel::Laplace2d | Kernel::Biharmonic2d if slab_layout => {
                let free = 1 - k;
                let slab = if *self == Kernel::Laplace2d {
                    recurrence::laplace2d::<S>(x[free], x[k], p)
                } else {
                    recurrence::biharmonic2d::<S>(x[free], x[k], p)
                };
                Ok(plan.stored_indices().map(|m| slab.get(m.get(free), m.get(k))).collect())
            }
            Kernel::Laplace3d if slab_layout => {
                let free: Vec<usize> = (0..3).filter(|&a| a != k).collect();
                let slab = recurrence::laplace3d::<S>([x[free[0]], x[free[1]], x[k]], p, [0, 1, 2]);
                Ok(plan
                    .stored_indices()
                    .map(|m| slab.get([m.get(free[0]), m.get(free[1]), m.get(k)]))
                    .collect())
            }
            _ => {
                let g = self.radial_chain_scalar::<S>(r, p)?;
                let indices: Vec<MultiIndex> = plan.stored_indices().collect();
                Ok(radial::derivatives(&g, x, &indices, p))
            }
        }
    }

    /// All `D^m G(x)` with `|m| ≤ q_max`: compressed derivatives of the
    /// order-`q_max` plan followed by decompression.
    pub fn derivatives_full(&self, x: &[f64], q_max: usize, ordering: GradedOrdering) -> Result<DerivativeTable> {
        let pde = self.pde();
        let values = if q_max < pde.order() {
            let g = self.radial_chain_scalar::<Complex64>(self.check_point(x)?, q_max)?;
            radial::derivatives(&g, x, &ordering.enumerate(q_max), q_max)
        } else {
            let plan = CompressionPlan::with_ordering(&pde, q_max, ordering)?;
            self.derivatives_full_scalar(x, &plan)?
        };
        Ok(DerivativeTable { order: q_max, ordering, compressed: false, values })
    }

    /// Full table for the order and ordering of an existing plan.
    pub fn derivatives_full_scalar<S: Scalar>(&self, x: &[f64], plan: &CompressionPlan) -> Result<Vec<S>> {
        let stored = self.derivatives_compressed_scalar::<S>(x, plan)?;
        plan.decompress(&stored)
    }

    /// Derivatives through the generic radial-chain path for any index list.
    pub fn derivatives_radial<S: Scalar>(&self, x: &[f64], indices: &[MultiIndex]) -> Result<Vec<S>> {
        let r = self.check_point(x)?;
        let p = indices.iter().map(|m| m.order()).max().unwrap_or(0);
        let g = self.radial_chain_scalar::<S>(r, p)?;
        Ok(radial::derivatives(&g, x, indices, p))
    }

    /// Laplace 3D derivatives on the slab `{m_k ≤ 1}` with the recurrence
    /// applied along the free axes in the given priority (`[0, 1]` or `[1, 0]`).
    /// Values are returned in the enumeration order of `ordering` restricted
    /// to the slab, with `k = ordering.slowest_axis()`.
    pub fn laplace3d_slab_with_priority(x: &[f64], p: usize, ordering: GradedOrdering, free_priority: [usize; 2]) -> Result<Vec<Complex64>> {
        Kernel::Laplace3d.check_point(x)?;
        let k = ordering.slowest_axis();
        let free: Vec<usize> = (0..3).filter(|&a| a != k).collect();
        let slab = recurrence::laplace3d::<Complex64>([x[free[0]], x[free[1]], x[k]], p, [free_priority[0], free_priority[1], 2]);
        Ok(ordering
            .enumerate(p)
            .iter()
            .filter(|m| m.get(k) <= 1)
            .map(|m| slab.get([m.get(free[0]), m.get(free[1]), m.get(k)]))
            .collect())
    }
}
