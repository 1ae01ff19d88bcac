//! Sparse sketch matrices in compressed column form, plus application to
//! vectors and turnstile streams.

mod io;
mod sample;

pub use io::{load_sketch, read_sketch, save_sketch, write_sketch};
pub use sample::{
    sample_block, sample_dense, sample_dks, sample_graph, sample_sketch, sketch_from_code,
};

use crate::error::{Error, Result};

/// Which construction produced a sketch. The tag is stored and serialized so
/// downstream analysis can pick the right quadratic-form decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionTag {
    /// One uniformly hashed row inside each of s contiguous blocks.
    Block,
    /// s distinct rows per column, sampled without replacement.
    Graph,
    /// Each coordinate replicated s times and hashed with replacement; equal
    /// rows aggregate by signed count.
    Dks,
    /// Block layout with rows chosen by a q-ary code word instead of a hash.
    CodeBlock,
    /// Graph layout with rows given by the support of a constant-weight
    /// binary code word.
    CodeGraph,
    /// Fully dense random-sign matrix (baseline).
    Dense,
}

impl ConstructionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConstructionTag::Block => "block",
            ConstructionTag::Graph => "graph",
            ConstructionTag::Dks => "dks",
            ConstructionTag::CodeBlock => "code_block",
            ConstructionTag::CodeGraph => "code_graph",
            ConstructionTag::Dense => "dense",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "block" => ConstructionTag::Block,
            "graph" => ConstructionTag::Graph,
            "dks" => ConstructionTag::Dks,
            "code_block" => ConstructionTag::CodeBlock,
            "code_graph" => ConstructionTag::CodeGraph,
            "dense" => ConstructionTag::Dense,
            other => {
                return Err(Error::invalid(format!(
                    "unknown construction '{other}' (expected block, graph, dks, code_block, code_graph, or dense)"
                )))
            }
        })
    }

    pub(crate) fn to_byte(self) -> u8 {
        match self {
            ConstructionTag::Block => 0,
            ConstructionTag::Graph => 1,
            ConstructionTag::Dks => 2,
            ConstructionTag::CodeBlock => 3,
            ConstructionTag::CodeGraph => 4,
            ConstructionTag::Dense => 5,
        }
    }

    pub(crate) fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0 => ConstructionTag::Block,
            1 => ConstructionTag::Graph,
            2 => ConstructionTag::Dks,
            3 => ConstructionTag::CodeBlock,
            4 => ConstructionTag::CodeGraph,
            5 => ConstructionTag::Dense,
            other => return Err(Error::Format(format!("unknown construction tag byte {other}"))),
        })
    }
}

impl std::fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One turnstile stream element: add `value` to coordinate `index` of the
/// implicit input vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurnstileUpdate {
    pub index: usize,
    pub value: f64,
}

/// A k x d sparse sign matrix stored by column: for column i the entries sit
/// in `rows/values[offsets[i]..offsets[i+1]]` with strictly ascending rows.
#[derive(Debug, Clone)]
pub struct SparseSketch {
    k: usize,
    d: usize,
    s: usize,
    tag: ConstructionTag,
    seed: u64,
    /// Bits drawn from the seed stream while sampling; zero for sketches
    /// loaded from disk. Excluded from equality.
    seed_bits: u64,
    offsets: Vec<usize>,
    rows: Vec<u64>,
    values: Vec<f64>,
}

impl PartialEq for SparseSketch {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.d == other.d
            && self.s == other.s
            && self.tag == other.tag
            && self.seed == other.seed
            && self.offsets == other.offsets
            && self.rows == other.rows
            && self.values == other.values
    }
}

impl SparseSketch {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        k: usize,
        d: usize,
        s: usize,
        tag: ConstructionTag,
        seed: u64,
        seed_bits: u64,
        offsets: Vec<usize>,
        rows: Vec<u64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let sk = SparseSketch {
            k,
            d,
            s,
            tag,
            seed,
            seed_bits,
            offsets,
            rows,
            values,
        };
        sk.validate()?;
        Ok(sk)
    }

    fn validate(&self) -> Result<()> {
        if self.offsets.len() != self.d + 1 || self.offsets[0] != 0 {
            return Err(Error::Format("malformed column offsets".into()));
        }
        if *self.offsets.last().expect("nonempty offsets") != self.rows.len()
            || self.rows.len() != self.values.len()
        {
            return Err(Error::Format("entry array length mismatch".into()));
        }
        for i in 0..self.d {
            let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
            if lo > hi {
                return Err(Error::Format("column offsets not monotone".into()));
            }
            let col = &self.rows[lo..hi];
            for w in col.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::Format(format!(
                        "column {i} rows not strictly ascending"
                    )));
                }
            }
            if let Some(&last) = col.last() {
                if last >= self.k as u64 {
                    return Err(Error::Format(format!(
                        "column {i} references row {last} >= k={}",
                        self.k
                    )));
                }
            }
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Format("non-finite sketch value".into()));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Nominal per-column sparsity (the aggregated dks construction may
    /// store fewer entries in a column after collisions cancel).
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn tag(&self) -> ConstructionTag {
        self.tag
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn seed_bits(&self) -> u64 {
        self.seed_bits
    }

    pub fn nnz(&self) -> usize {
        self.rows.len()
    }

    /// The (row, value) entries of column i, rows strictly ascending.
    pub fn column(&self, i: usize) -> (&[u64], &[f64]) {
        let (lo, hi) = (self.offsets[i], self.offsets[i + 1]);
        (&self.rows[lo..hi], &self.values[lo..hi])
    }

    /// y = S x. Columns are scattered in ascending index order, so the
    /// result is a deterministic function of the sketch and x.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "input has length {} but sketch expects d={}",
                x.len(),
                self.d
            )));
        }
        let mut y = vec![0.0; self.k];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            let (rows, vals) = self.column(i);
            for (r, v) in rows.iter().zip(vals) {
                y[*r as usize] += v * xi;
            }
        }
        Ok(y)
    }

    /// Folds one turnstile update into a running image y (length k), touching
    /// exactly the stored entries of the addressed column. Feeding the
    /// updates of any decomposition of x in any per-coordinate grouping
    /// reproduces `apply(x)` bit for bit only when additions happen in the
    /// same order per row, which holds for coordinate-at-a-time replays.
    pub fn apply_update(&self, y: &mut [f64], update: &TurnstileUpdate) -> Result<()> {
        if y.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "image has length {} but sketch produces k={}",
                y.len(),
                self.k
            )));
        }
        if update.index >= self.d {
            return Err(Error::invalid(format!(
                "update index {} outside source dimension {}",
                update.index, self.d
            )));
        }
        if update.value == 0.0 {
            return Ok(());
        }
        let (rows, vals) = self.column(update.index);
        for (r, v) in rows.iter().zip(vals) {
            y[*r as usize] += v * update.value;
        }
        Ok(())
    }

    /// Dense k x d row-major copy; intended for tests and small examples.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.k * self.d];
        for i in 0..self.d {
            let (rows, vals) = self.column(i);
            for (r, v) in rows.iter().zip(vals) {
                m[(*r as usize) * self.d + i] = *v;
            }
        }
        m
    }
}
