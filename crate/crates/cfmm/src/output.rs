//! CSV output: header row, fixed columns, floats in `{:.16e}` (17 significant digits).

use std::io::Write;

use crate::error::Result;
use crate::experiments::bench::BenchRow;
use crate::experiments::m2m::{KappaRow, M2mRow};
use crate::experiments::opcount::OpcountRow;

pub trait CsvRow {
    const HEADER: &'static [&'static str];
    fn record(&self) -> Vec<String>;
}

pub fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<R: CsvRow>(out: impl Write, rows: &[R]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string<R: CsvRow>(rows: &[R]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

impl CsvRow for M2mRow {
    const HEADER: &'static [&'static str] = &["kernel", "p", "R", "eps_rel"];
    fn record(&self) -> Vec<String> {
        vec![self.kernel.clone(), self.p.to_string(), sci(self.radius), sci(self.eps_rel)]
    }
}

impl CsvRow for KappaRow {
    const HEADER: &'static [&'static str] = &["kernel", "p", "kappa", "eps_rel", "eps_trunc"];
    fn record(&self) -> Vec<String> {
        vec![self.kernel.clone(), self.p.to_string(), sci(self.kappa), sci(self.eps_rel), sci(self.eps_trunc)]
    }
}

impl CsvRow for OpcountRow {
    const HEADER: &'static [&'static str] = &["kernel", "op", "p", "representation", "flops"];
    fn record(&self) -> Vec<String> {
        vec![self.kernel.clone(), self.op.into(), self.p.to_string(), self.representation.into(), sci(self.flops)]
    }
}

impl CsvRow for BenchRow {
    const HEADER: &'static [&'static str] = &["N", "p", "depth", "mode", "max_rel_err", "l2_rel_err", "wall_ms", "flops"];
    fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.p.to_string(),
            self.depth.to_string(),
            self.mode.into(),
            sci(self.max_rel_err),
            sci(self.l2_rel_err),
            sci(self.wall_ms),
            self.flops.to_string(),
        ]
    }
}
