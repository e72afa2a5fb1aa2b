//! Bit-specified CSV output: fixed header, LF line endings, and floats
//! rendered with 17 significant digits so values round-trip exactly.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use varfrac_core::{Error, Result};

pub const HEADER: &str = "experiment,method,iteration,n,error,seed";

/// One measurement row of an experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub experiment: String,
    pub method: String,
    pub iteration: u64,
    pub n: u64,
    pub error: f64,
    pub seed: u64,
}

impl CsvRow {
    pub fn new(
        experiment: &str,
        method: &str,
        iteration: u64,
        n: u64,
        error: f64,
        seed: u64,
    ) -> CsvRow {
        CsvRow {
            experiment: experiment.to_string(),
            method: method.to_string(),
            iteration,
            n,
            error,
            seed,
        }
    }
}

fn check_field(text: &str) -> Result<()> {
    if text.contains(',') || text.contains('\n') || text.contains('\r') {
        return Err(Error::invalid(format!(
            "text field {text:?} may not contain separators"
        )));
    }
    Ok(())
}

/// Renders rows under the fixed header; rejects negative or non-finite
/// error values and separator characters inside text fields.
pub fn render_csv(rows: &[CsvRow]) -> Result<String> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for row in rows {
        check_field(&row.experiment)?;
        check_field(&row.method)?;
        if !(row.error >= 0.0 && row.error.is_finite()) {
            return Err(Error::invalid(format!(
                "error column must be finite and >= 0, got {}",
                row.error
            )));
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{:.16e},{}",
            row.experiment, row.method, row.iteration, row.n, row.error, row.seed
        );
    }
    Ok(out)
}

/// Writes rendered rows to `path`, surfacing the path on failure.
pub fn emit_csv(rows: &[CsvRow], path: &Path) -> io::Result<()> {
    let text = render_csv(rows)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    std::fs::write(path, text)
        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Parses text produced by [`render_csv`]; checks the header byte-for-byte.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == HEADER => {}
        other => {
            return Err(Error::invalid(format!(
                "bad header: expected {HEADER:?}, got {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 6 {
            return Err(Error::invalid(format!(
                "row {}: expected 6 fields, got {}",
                idx + 1,
                parts.len()
            )));
        }
        let field = |what: &str, text: &str| {
            Error::invalid(format!("row {}: bad {what} {text:?}", idx + 1))
        };
        rows.push(CsvRow {
            experiment: parts[0].to_string(),
            method: parts[1].to_string(),
            iteration: parts[2].parse().map_err(|_| field("iteration", parts[2]))?,
            n: parts[3].parse().map_err(|_| field("n", parts[3]))?,
            error: parts[4].parse().map_err(|_| field("error", parts[4]))?,
            seed: parts[5].parse().map_err(|_| field("seed", parts[5]))?,
        });
    }
    Ok(rows)
}
