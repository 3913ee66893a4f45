//! Text summary of a compression plan.

use std::fmt::Write;

use cfmm_core::{count, CompressionPlan, MultiIndex, PdeOperator};

use crate::error::Result;

pub fn run_plan_inspect(pde: &PdeOperator, p: usize) -> Result<String> {
    let plan = CompressionPlan::new(pde, p)?;
    Ok(plan_report(&plan))
}

pub fn plan_report(plan: &CompressionPlan) -> String {
    let d = plan.dim();
    let p = plan.order();
    let mut out = String::new();
    let _ = writeln!(out, "dimension      {d}");
    let _ = writeln!(out, "order          {p}");
    let _ = writeln!(out, "pde order      {}", plan.pde().order());
    let _ = writeln!(out, "slowest axis   {}", plan.ordering().slowest_axis());
    let _ = writeln!(out, "N(p)           {}", count(p, d));
    let _ = writeln!(out, "|j|            {}", plan.stored_len());
    let _ = writeln!(out, "t_lead         {:?}", plan.t_lead().to_vec());
    let slices: Vec<String> = plan.slices().iter().map(|s| format!("({}, {})", s.axis, s.level)).collect();
    let _ = writeln!(out, "slices         [{}]", slices.join(", "));
    let _ = writeln!(out, "fft_extent     {:?}", plan.fft_extent());
    let _ = writeln!(out, "fft_shape      {:?}", plan.fft_shape());
    let _ = writeln!(out, "property1      {}", plan.has_property1());
    if let Some(grid) = footprint(plan) {
        let _ = writeln!(out);
        out.push_str(&grid);
    }
    out
}

/// ASCII picture of the index space for `d = 2`: `#` stored, `x` eliminated,
/// `.` outside `|m| ≤ p`. Rows are `m_1` from `p` down to 0, columns `m_0`.
pub fn footprint(plan: &CompressionPlan) -> Option<String> {
    if plan.dim() != 2 {
        return None;
    }
    let p = plan.order();
    let table = plan.table();
    let mut out = String::new();
    for m1 in (0..=p).rev() {
        let _ = write!(out, "{m1:>3} ");
        for m0 in 0..=p {
            let c = match MultiIndex::new(&[m0, m1]).ok().and_then(|m| table.position(&m)) {
                Some(pos) if plan.stored_slot(pos).is_some() => '#',
                Some(_) => 'x',
                None => '.',
            };
            out.push(c);
        }
        out.push('\n');
    }
    let _ = writeln!(out, "    m_0 = 0..{p}");
    Some(out)
}
