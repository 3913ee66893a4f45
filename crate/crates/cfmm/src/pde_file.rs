//! Plain-text PDE descriptions.
//!
//! ```text
//! # Helmholtz, kappa = 1.3
//! dimension = 2
//! [2, 0] = 1
//! [0, 2] = 1
//! [0, 0] = 1.69
//! ```
//!
//! Each entry is `[exponents..] = coefficient`; coefficients are `re`,
//! `re+im i`, `re-im i` or `im i`. Repeated entries are summed. `#` starts a
//! comment.

use std::path::Path;

use cfmm_core::{Complex64, MultiIndex, PdeOperator};

use crate::error::{HarnessError, Result};

pub fn read_pde_file(path: &Path) -> Result<PdeOperator> {
    let text = std::fs::read_to_string(path)?;
    parse_pde(&text, path)
}

pub fn parse_pde(text: &str, path: &Path) -> Result<PdeOperator> {
    let err = |line: usize, msg: String| HarnessError::Parse { path: path.to_path_buf(), line, msg };
    let mut dim: Option<(usize, usize)> = None;
    let mut entries: Vec<(usize, Vec<usize>, Complex64)> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let (lhs, rhs) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected `key = value`, found `{content}`")))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        if lhs == "dimension" || lhs == "dim" {
            if dim.is_some() {
                return Err(err(line, "dimension given twice".into()));
            }
            let d: usize = rhs.parse().map_err(|_| err(line, format!("invalid dimension `{rhs}`")))?;
            if !(1..=3).contains(&d) {
                return Err(err(line, format!("dimension must be 1, 2 or 3, got {d}")));
            }
            dim = Some((d, line));
        } else if let Some(inner) = lhs.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let exps = inner
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err(line, format!("invalid exponents `{lhs}`")))?;
            let c = parse_complex(rhs).ok_or_else(|| err(line, format!("invalid coefficient `{rhs}`")))?;
            entries.push((line, exps, c));
        } else {
            return Err(err(line, format!("unknown key `{lhs}`")));
        }
    }
    let (d, _) = dim.ok_or_else(|| err(last.max(1), "missing `dimension = d`".into()))?;
    if entries.is_empty() {
        return Err(err(last.max(1), "no PDE terms".into()));
    }
    let mut terms = Vec::with_capacity(entries.len());
    for (line, exps, c) in entries {
        if exps.len() != d {
            return Err(err(line, format!("expected {d} exponents, found {}", exps.len())));
        }
        terms.push((MultiIndex::new(&exps).map_err(|e| err(line, e.to_string()))?, c));
    }
    PdeOperator::new(d, &terms).map_err(|e| err(last.max(1), e.to_string()))
}

/// `re`, `re+im i`, `re-im i`, `im i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return real(&s).map(|re| Complex64::new(re, 0.0));
    };
    let split = body
        .char_indices()
        .filter(|&(k, c)| (c == '+' || c == '-') && k > 0 && !matches!(body.as_bytes()[k - 1], b'e' | b'E'))
        .map(|(k, _)| k)
        .last();
    let (re, im) = match split {
        Some(k) => (real(&body[..k])?, imag(&body[k..])?),
        None => (0.0, imag(body)?),
    };
    Some(Complex64::new(re, im))
}

fn real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => real(s),
    }
}
