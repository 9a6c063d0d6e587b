use std::path::Path;

use crate::{Error, Result};

/// One CSV column. Floats are written with 17 significant digits.
#[derive(Debug, Clone, Copy)]
pub enum Column<'a> {
    Float(&'a [f64]),
    Index(&'a [usize]),
}

impl Column<'_> {
    fn len(&self) -> usize {
        match self {
            Column::Float(v) => v.len(),
            Column::Index(v) => v.len(),
        }
    }

    fn cell(&self, i: usize, out: &mut String) {
        match self {
            Column::Float(v) => out.push_str(&format_float(v[i])),
            Column::Index(v) => out.push_str(&v[i].to_string()),
        }
    }
}

/// `{:.16e}`: round-trips every finite double, independent of locale.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn render_csv(header: &[&str], columns: &[Column<'_>]) -> Result<String> {
    if header.len() != columns.len() {
        return Err(Error::Internal(format!(
            "{} header names for {} columns",
            header.len(),
            columns.len()
        )));
    }
    let rows = columns.first().map_or(0, Column::len);
    if columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Internal("CSV columns differ in length".into()));
    }
    let mut out = header.join(",");
    out.push('\n');
    for i in 0..rows {
        for (j, c) in columns.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            c.cell(i, &mut out);
        }
        out.push('\n');
    }
    Ok(out)
}

/// Header and columns of a numeric CSV file.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line: usize, msg: String| Error::Config {
        key: format!("{}:{line}", path.display()),
        message: msg,
    };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, head) = lines.next().ok_or_else(|| bad(1, "empty file".into()))?;
    let header: Vec<String> = head.split(',').map(|s| s.trim().to_string()).collect();
    let mut cols = vec![Vec::new(); header.len()];
    for (n, line) in lines {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(bad(
                n + 1,
                format!("expected {} fields, found {}", header.len(), cells.len()),
            ));
        }
        for (col, cell) in cols.iter_mut().zip(cells) {
            let v = cell
                .trim()
                .parse::<f64>()
                .map_err(|e| bad(n + 1, format!("`{}`: {e}", cell.trim())))?;
            col.push(v);
        }
    }
    Ok((header, cols))
}
