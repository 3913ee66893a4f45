//! Numerical assertions behind `--check`.

use crate::error::{HarnessError, Result};
use crate::experiments::bench::BenchRow;
use crate::experiments::loglog_slope;
use crate::experiments::m2m::{KappaRow, M2mRow};
use crate::experiments::opcount::OpcountRow;

/// Bound on ε_rel for PDEs whose terms all have the same order.
pub const EQUAL_ORDER_TOL: f64 = 1e-13;
/// Allowed distance of the fitted ε_rel slope from `p + 1`.
pub const SLOPE_TOL: f64 = 1.0;
/// Radius window of the slope fit.
pub const SLOPE_WINDOW: (f64, f64) = (1.0 / 128.0, 0.25);
/// Largest order whose slope is fitted; higher orders reach round-off.
pub const SLOPE_MAX_ORDER: usize = 6;
/// ε_rel may exceed ε_trunc by at most this factor.
pub const TRACKING_FACTOR: f64 = 10.0;
/// Wavenumbers up to this value are checked for tracking.
pub const TRACKING_MAX_KAPPA: f64 = 10.0;

/// Equal-order kernels: every ε_rel below [`EQUAL_ORDER_TOL`]. Varying-order
/// kernels: slope of `log ε_rel` against `log R` within [`SLOPE_TOL`] of
/// `p + 1` for `p ≤ 6`, on the radii inside [`SLOPE_WINDOW`].
pub fn check_m2m(rows: &[M2mRow], varying_order: bool) -> Result<()> {
    if !varying_order {
        if let Some(r) = rows.iter().find(|r| !(r.eps_rel <= EQUAL_ORDER_TOL)) {
            return Err(HarnessError::Check(format!(
                "{} p={} R={:e}: eps_rel {:e} > {:e}",
                r.kernel, r.p, r.radius, r.eps_rel, EQUAL_ORDER_TOL
            )));
        }
        return Ok(());
    }
    let mut orders: Vec<usize> = rows.iter().map(|r| r.p).collect();
    orders.dedup();
    for p in orders.into_iter().filter(|&p| p <= SLOPE_MAX_ORDER) {
        let pts: Vec<&M2mRow> = rows
            .iter()
            .filter(|r| r.p == p && r.radius >= SLOPE_WINDOW.0 && r.radius <= SLOPE_WINDOW.1)
            .collect();
        if pts.len() < 3 {
            continue;
        }
        let xs: Vec<f64> = pts.iter().map(|r| r.radius).collect();
        let ys: Vec<f64> = pts.iter().map(|r| r.eps_rel).collect();
        let slope = loglog_slope(&xs, &ys);
        if !((slope - (p + 1) as f64).abs() <= SLOPE_TOL) {
            return Err(HarnessError::Check(format!("p={p}: eps_rel slope {slope:.3}, expected {} ± {SLOPE_TOL}", p + 1)));
        }
    }
    Ok(())
}

/// ε_rel ≤ [`TRACKING_FACTOR`]·ε_trunc for κ ≤ [`TRACKING_MAX_KAPPA`].
pub fn check_kappa(rows: &[KappaRow]) -> Result<()> {
    for r in rows.iter().filter(|r| r.kappa <= TRACKING_MAX_KAPPA) {
        if !(r.eps_rel <= TRACKING_FACTOR * r.eps_trunc) {
            return Err(HarnessError::Check(format!(
                "{} p={} kappa={:.3}: eps_rel {:e} > {TRACKING_FACTOR}·eps_trunc {:e}",
                r.kernel, r.p, r.kappa, r.eps_rel, r.eps_trunc
            )));
        }
    }
    Ok(())
}

/// Every count is positive and finite.
pub fn check_opcount(rows: &[OpcountRow]) -> Result<()> {
    match rows.iter().find(|r| !(r.flops.is_finite() && r.flops > 0.0)) {
        Some(r) => Err(HarnessError::Check(format!("{} {} p={}: no operations counted", r.op, r.representation, r.p))),
        None => Ok(()),
    }
}

/// Every run meets `tol` in the ℓ² relative error.
pub fn check_bench(rows: &[BenchRow], tol: f64) -> Result<()> {
    match rows.iter().find(|r| !(r.l2_rel_err <= tol)) {
        Some(r) => Err(HarnessError::Check(format!("N={} mode={}: l2_rel_err {:e} > {tol:e}", r.n, r.mode, r.l2_rel_err))),
        None => Ok(()),
    }
}
