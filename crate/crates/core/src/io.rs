//! Loss-file parsing and CSV grid output.
//!
//! Input files carry one numeric loss per line, optionally preceded by a
//! `loss` header. Files with a `contract_id,loss` column pair describe
//! several contracts at once; rows may arrive in any order and contracts
//! are keyed and emitted in sorted id order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Parsed loss file: either a single anonymous contract or several named
/// ones.
#[derive(Clone, Debug, PartialEq)]
pub enum LossTable {
    Single(Vec<f64>),
    Multi(BTreeMap<String, Vec<f64>>),
}

impl LossTable {
    /// Total number of data rows.
    pub fn rows(&self) -> usize {
        match self {
            LossTable::Single(v) => v.len(),
            LossTable::Multi(m) => m.values().map(Vec::len).sum(),
        }
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    let value: f64 = token.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a number, got {token:?}"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            message: format!("losses must be finite, got {token:?}"),
        });
    }
    Ok(value)
}

/// Parse loss rows from any reader. Blank lines are skipped; the first
/// line may be a header (`loss` or `contract_id,loss`).
pub fn parse_losses(reader: impl BufRead) -> Result<LossTable> {
    let mut single: Vec<f64> = Vec::new();
    let mut multi: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut mode: Option<bool> = None; // Some(true) once a comma row is seen
    let mut seen_data = false;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let row = line.trim();
        let lineno = idx + 1;
        if row.is_empty() {
            continue;
        }
        if let Some((id, value)) = row.split_once(',') {
            if !*mode.get_or_insert(true) {
                return Err(Error::Parse {
                    line: lineno,
                    message: "mixed single-column and contract_id,loss rows".into(),
                });
            }
            if !seen_data && value.trim().parse::<f64>().is_err() {
                // header row such as contract_id,loss
                continue;
            }
            let value = parse_number(value, lineno)?;
            multi.entry(id.trim().to_string()).or_default().push(value);
            seen_data = true;
        } else {
            if *mode.get_or_insert(false) {
                return Err(Error::Parse {
                    line: lineno,
                    message: "mixed single-column and contract_id,loss rows".into(),
                });
            }
            if !seen_data && row.eq_ignore_ascii_case("loss") {
                continue;
            }
            single.push(parse_number(row, lineno)?);
            seen_data = true;
        }
    }

    if !seen_data {
        return Err(Error::config("input contains no loss rows"));
    }
    Ok(if mode == Some(true) {
        LossTable::Multi(multi)
    } else {
        LossTable::Single(single)
    })
}

pub fn read_losses(path: &Path) -> Result<LossTable> {
    let file = File::open(path).map_err(|e| {
        Error::config(format!("cannot open {}: {e}", path.display()))
    })?;
    parse_losses(BufReader::new(file))
}

/// Write a two-column CSV of grid points, used for density and shift
/// plots.
pub fn write_grid_csv(path: &Path, header: (&str, &str), rows: &[(f64, f64)]) -> Result<()> {
    let mut out = File::create(path)?;
    writeln!(out, "{},{}", header.0, header.1)?;
    for (a, b) in rows {
        writeln!(out, "{a},{b}")?;
    }
    Ok(())
}
