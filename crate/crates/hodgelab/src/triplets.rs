//! Sparse-triplet text exchange format for matrices: one `row col value` line
//! per structurally nonzero entry, values with 17 significant digits. Used for
//! debugging dumps and cross-tool comparison.

use std::fmt::Write as _;

use nalgebra::DMatrix;

/// Serialize a matrix. The first line carries the shape: `# rows cols`.
pub fn write_triplets(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                let _ = writeln!(out, "{i} {j} {v:.16e}");
            }
        }
    }
    out
}

/// Parse the format produced by [`write_triplets`].
pub fn read_triplets(s: &str) -> Result<DMatrix<f64>, String> {
    let mut lines = s.lines();
    let header = lines.next().ok_or("empty input")?;
    let mut it = header.trim_start_matches('#').split_whitespace();
    let rows: usize = it
        .next()
        .ok_or("missing row count")?
        .parse()
        .map_err(|e| format!("bad row count: {e}"))?;
    let cols: usize = it
        .next()
        .ok_or("missing col count")?
        .parse()
        .map_err(|e| format!("bad col count: {e}"))?;
    let mut m = DMatrix::zeros(rows, cols);
    for (ln, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let i: usize = parts
            .next()
            .ok_or_else(|| format!("line {}: missing row", ln + 2))?
            .parse()
            .map_err(|e| format!("line {}: {e}", ln + 2))?;
        let j: usize = parts
            .next()
            .ok_or_else(|| format!("line {}: missing col", ln + 2))?
            .parse()
            .map_err(|e| format!("line {}: {e}", ln + 2))?;
        let v: f64 = parts
            .next()
            .ok_or_else(|| format!("line {}: missing value", ln + 2))?
            .parse()
            .map_err(|e| format!("line {}: {e}", ln + 2))?;
        if i >= rows || j >= cols {
            return Err(format!("line {}: index ({i},{j}) out of bounds", ln + 2));
        }
        m[(i, j)] = v;
    }
    Ok(m)
}
