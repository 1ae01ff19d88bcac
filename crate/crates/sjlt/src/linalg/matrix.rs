//! Dense row-major matrix buffer with CSV and binary persistence.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixBuffer {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl MatrixBuffer {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be >= 1"));
        }
        rows.checked_mul(cols)
            .ok_or_else(|| Error::invalid("matrix size overflows"))?;
        Ok(MatrixBuffer {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::invalid("matrix needs at least one row and column"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("matrix rows have inconsistent lengths"));
        }
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for r in rows {
            data.extend_from_slice(&r);
        }
        Ok(MatrixBuffer {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// C = A' B, shapes (m x n)' (m x p) -> n x p.
    pub fn transpose_mul(&self, other: &MatrixBuffer) -> Result<MatrixBuffer> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "transpose product needs equal row counts, got {} and {}",
                self.rows, other.rows
            )));
        }
        let mut out = MatrixBuffer::zeros(self.cols, other.cols)?;
        for r in 0..self.rows {
            let left = self.row(r);
            let right = other.row(r);
            for (i, &li) in left.iter().enumerate() {
                if li == 0.0 {
                    continue;
                }
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (dj, &rj) in dst.iter_mut().zip(right) {
                    *dj += li * rj;
                }
            }
        }
        Ok(out)
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

/// Writes comma-separated rows; values use the shortest representation that
/// round-trips exactly. An optional leading comment becomes a '#' line.
pub fn save_matrix_csv(m: &MatrixBuffer, path: &Path, comment: Option<&str>) -> Result<()> {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push('#');
        out.push(' ');
        out.push_str(c);
        out.push('\n');
    }
    for r in 0..m.rows() {
        let line: Vec<String> = m.row(r).iter().map(|v| format!("{v}")).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads comma- or whitespace-separated numeric rows, skipping blank lines
/// and '#' comments.
pub fn load_matrix_csv(path: &Path) -> Result<MatrixBuffer> {
    let text = std::fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: f64 = tok.parse().map_err(|_| {
                Error::Format(format!("line {}: bad number '{tok}'", lineno + 1))
            })?;
            row.push(v);
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    MatrixBuffer::from_rows(rows).map_err(|e| Error::Format(format!("csv matrix: {e}")))
}

const MAGIC: &[u8; 4] = b"SJLM";
const VERSION: u32 = 1;

/// Binary layout: "SJLM" | version u32 | rows u64 | cols u64 | data f64 LE.
pub fn save_matrix_bin(m: &MatrixBuffer, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(24 + 8 * m.data.len());
    bytes.extend_from_slice(MAGIC);
    bytes.extend_from_slice(&VERSION.to_le_bytes());
    bytes.extend_from_slice(&(m.rows as u64).to_le_bytes());
    bytes.extend_from_slice(&(m.cols as u64).to_le_bytes());
    for v in &m.data {
        bytes.extend_from_slice(&v.to_bits().to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn load_matrix_bin(path: &Path) -> Result<MatrixBuffer> {
    let bytes = std::fs::read(path)?;
    if bytes.len() < 24 || &bytes[0..4] != MAGIC {
        return Err(Error::Format("not a binary matrix file".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported matrix format version {version}"
        )));
    }
    let rows = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let cols = u64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes")) as usize;
    let need = rows
        .checked_mul(cols)
        .and_then(|n| n.checked_mul(8))
        .and_then(|n| n.checked_add(24))
        .ok_or_else(|| Error::Format("matrix dimensions overflow".into()))?;
    if bytes.len() != need {
        return Err(Error::Format(format!(
            "matrix payload is {} bytes, expected {need}",
            bytes.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for chunk in bytes[24..].chunks_exact(8) {
        data.push(f64::from_bits(u64::from_le_bytes(
            chunk.try_into().expect("8 bytes"),
        )));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::Format("matrix dimensions must be nonzero".into()));
    }
    Ok(MatrixBuffer { rows, cols, data })
}
