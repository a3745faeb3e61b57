//! CSV emission: header row, comma delimiter, LF endings, every float with
//! 17 significant digits so that reading it back is exact.

use std::io::{self, BufRead, Write};

use crate::operators::Trajectory;
use crate::solver::ConvergenceReport;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Columns `t,y`, plus `exact,error` when the trajectory carries them.
pub fn write_trajectory(out: &mut (impl Write + ?Sized), tr: &Trajectory) -> io::Result<()> {
    match (&tr.exact, &tr.pointwise_error) {
        (Some(ex), Some(err)) => {
            writeln!(out, "t,y,exact,error")?;
            for (k, t) in tr.grid.nodes().enumerate() {
                writeln!(out, "{},{},{},{}", fmt_f64(t), fmt_f64(tr.values[k]), fmt_f64(ex[k]), fmt_f64(err[k]))?;
            }
        }
        _ => {
            writeln!(out, "t,y")?;
            for (k, t) in tr.grid.nodes().enumerate() {
                writeln!(out, "{},{}", fmt_f64(t), fmt_f64(tr.values[k]))?;
            }
        }
    }
    Ok(())
}

/// Columns `h,max_error,observed_order`; the first order cell is empty.
pub fn write_convergence(out: &mut (impl Write + ?Sized), report: &ConvergenceReport) -> io::Result<()> {
    writeln!(out, "h,max_error,observed_order")?;
    for row in &report.rows {
        let order = row.observed_order.map(fmt_f64).unwrap_or_default();
        writeln!(out, "{},{},{}", fmt_f64(row.h), fmt_f64(row.max_error), order)?;
    }
    Ok(())
}

/// A parsed CSV file: header names and numeric rows (`None` for empty cells).
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn read_table(input: impl BufRead) -> io::Result<Table> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = input.lines();
    let header: Vec<String> = match lines.next() {
        Some(line) => line?.split(',').map(str::to_string).collect(),
        None => return Err(bad("empty CSV".into())),
    };
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(bad(format!("row {}: expected {} cells, got {}", i + 1, header.len(), cells.len())));
        }
        let row = cells
            .iter()
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>().map(Some).map_err(|e| bad(format!("row {}: `{c}`: {e}", i + 1)))
                }
            })
            .collect::<io::Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}
