//! CSV readers for audited returns and equally spaced series.

use std::path::Path;

use serde::Deserialize;
use uop_core::gpd_inference::{Label, TopKSample};

use crate::error::CliError;

#[derive(Deserialize)]
struct ReturnRow {
    #[serde(rename = "return")]
    value: f64,
    label: String,
}

#[derive(Deserialize)]
struct SeriesRow {
    s: f64,
    value: f64,
}

fn open(path: &Path) -> Result<csv::Reader<std::fs::File>, CliError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn line_of(e: &csv::Error) -> String {
    e.position().map_or_else(String::new, |p| format!(" (line {})", p.line()))
}

/// Reads `return,label` rows. Rows are kept in file order, which is the
/// tie-break order for equal returns.
pub fn read_returns(path: &Path) -> Result<Vec<(f64, Label)>, CliError> {
    let mut rdr = open(path)?;
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<ReturnRow>().enumerate() {
        let row = row.map_err(|e| CliError::Data(format!("{}{}: {e}", path.display(), line_of(&e))))?;
        // header is line 1
        let line = i + 2;
        if !row.value.is_finite() {
            return Err(CliError::Data(format!("{} (line {line}): return must be finite", path.display())));
        }
        let label =
            row.label.parse::<Label>().map_err(|e| CliError::Data(format!("{} (line {line}): {e}", path.display())))?;
        out.push((row.value, label));
    }
    Ok(out)
}

/// Builds the top-k sample: sort descending, keep `k`, threshold at the
/// `(k+1)`-th return.
pub fn parse_returns_csv(path: &Path, k: usize) -> Result<TopKSample, CliError> {
    let rows = read_returns(path)?;
    TopKSample::from_returns(&rows, k).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Reads `s,value` rows on an equally spaced, increasing grid and returns
/// the values and the spacing.
pub fn read_series(path: &Path) -> Result<(Vec<f64>, f64), CliError> {
    let mut rdr = open(path)?;
    let mut s = Vec::new();
    let mut v = Vec::new();
    for row in rdr.deserialize::<SeriesRow>() {
        let row = row.map_err(|e| CliError::Data(format!("{}{}: {e}", path.display(), line_of(&e))))?;
        s.push(row.s);
        v.push(row.value);
    }
    if s.len() < 2 {
        return Err(CliError::Data(format!("{}: need at least two rows", path.display())));
    }
    let delta = s[1] - s[0];
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CliError::Data(format!("{}: s must be strictly increasing", path.display())));
    }
    for (i, w) in s.windows(2).enumerate() {
        if ((w[1] - w[0]) - delta).abs() > 1e-6 * delta {
            return Err(CliError::Data(format!(
                "{} (line {}): s must be equally spaced with step {delta}",
                path.display(),
                i + 3
            )));
        }
    }
    Ok((v, delta))
}
