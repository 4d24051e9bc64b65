//! Dense sensing matrices, index sets, instance generators and matrix files.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on column norms for a matrix flagged as column-normalized.
pub const UNIT_NORM_TOL: f64 = 1e-12;

/// Seeded generator used by every randomized routine in the crate.
///
/// ChaCha with 8 rounds keyed by `seed_from_u64`; Gaussian variates come from
/// `rand_distr::StandardNormal` (ziggurat). Streams are stable for a given
/// build of these crates, not across implementations.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    File { path: PathBuf },
    Generator { name: String, m: usize, n: usize, seed: u64 },
    Derived { description: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixFormat {
    Csv,
    Whitespace,
}

impl MatrixFormat {
    /// `.csv` files are comma separated, anything else whitespace separated.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Self::Csv,
            _ => Self::Whitespace,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
    /// `col_permutation[p]` is the original (0-based) column now stored at `p`.
    col_permutation: Option<Vec<usize>>,
    normalized: bool,
    provenance: Provenance,
}

impl SensingMatrix {
    pub fn from_row_major(
        rows: usize,
        cols: usize,
        entries: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(k) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "entry ({}, {})",
                k / cols + 1,
                k % cols + 1
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
            col_permutation: None,
            normalized: false,
            provenance,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::RaggedRows {
                line: i + 1,
                expected: n,
                found: r.len(),
            });
        }
        Self::from_row_major(
            m,
            n,
            rows.concat(),
            Provenance::Derived {
                description: "literal".into(),
            },
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn col_permutation(&self) -> Option<&[usize]> {
        self.col_permutation.as_deref()
    }

    /// Original column index of the column stored at `p`.
    pub fn original_column(&self, p: usize) -> usize {
        self.col_permutation.as_ref().map_or(p, |perm| perm[p])
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn column_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sq.iter_mut().zip(self.row(i)) {
                *s += v * v;
            }
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// Scale every column to unit Euclidean norm. Zero columns are an error.
    pub fn normalize_columns(mut self) -> Result<Self> {
        let norms = self.column_norms();
        if let Some(j) = norms.iter().position(|&v| v == 0.0) {
            return Err(Error::InvalidArgument(format!(
                "column {} is zero and cannot be normalized",
                j + 1
            )));
        }
        for i in 0..self.rows {
            let cols = self.cols;
            for (v, nrm) in self.entries[i * cols..(i + 1) * cols].iter_mut().zip(&norms) {
                *v /= nrm;
            }
        }
        self.normalized = true;
        Ok(self)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|v| *v *= c);
        out.normalized = false;
        out
    }

    /// Reorder columns so that `new[p] = old[order[p]]`.
    pub fn select_columns(&self, order: &[usize]) -> Result<Self> {
        if !is_permutation(order, self.cols) {
            return Err(Error::InvalidArgument(
                "column order is not a permutation".into(),
            ));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            let row = self.row(i);
            entries.extend(order.iter().map(|&j| row[j]));
        }
        let composed = order.iter().map(|&j| self.original_column(j)).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
            col_permutation: Some(composed),
            normalized: self.normalized,
            provenance: self.provenance.clone(),
        })
    }

    /// Undo any recorded column permutation.
    pub fn unpermuted(&self) -> Self {
        let Some(perm) = &self.col_permutation else {
            return self.clone();
        };
        let mut inverse = vec![0; self.cols];
        for (p, &orig) in perm.iter().enumerate() {
            inverse[orig] = p;
        }
        let mut out = self
            .select_columns(&inverse)
            .expect("inverse of a permutation is a permutation");
        out.col_permutation = None;
        out
    }

    /// Write as CSV, one row per line, 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let file = fs::File::create(path).map_err(io_err)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_csv(&mut w).map_err(io_err)?;
        w.flush().map_err(io_err)
    }
}

impl fmt::Display for SensingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:9.4}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &j in order {
        if j >= n || seen[j] {
            return false;
        }
        seen[j] = true;
    }
    true
}

/// Parse a numeric grid. Blank lines and lines starting with `#` are skipped.
pub fn parse_matrix(text: &str, format: MatrixFormat) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cells: Vec<&str> = match format {
            MatrixFormat::Csv => trimmed.split(',').map(str::trim).collect(),
            MatrixFormat::Whitespace => trimmed.split_whitespace().collect(),
        };
        let row = cells
            .iter()
            .map(|c| {
                c.parse::<f64>().map_err(|_| Error::BadCell {
                    line: lineno + 1,
                    cell: (*c).to_string(),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::RaggedRows {
                    line: lineno + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(rows)
}

pub fn load_matrix(path: &Path, format: MatrixFormat) -> Result<SensingMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows = parse_matrix(&text, format)?;
    Ok(SensingMatrix::from_rows(&rows)?.with_provenance(Provenance::File {
        path: path.to_path_buf(),
    }))
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("{m}x{n} matrix")));
    }
    Ok(())
}

/// i.i.d. N(0,1) entries, columns normalized to unit length.
pub fn gen_gaussian(m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    check_dims(m, n)?;
    let mut rng = seeded_rng(seed);
    let entries: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(&mut rng)).collect();
    SensingMatrix::from_row_major(
        m,
        n,
        entries,
        Provenance::Generator {
            name: "gaussian".into(),
            m,
            n,
            seed,
        },
    )?
    .normalize_columns()
}

/// Real partial Fourier matrix.
///
/// Frequencies `0..=n/2` are visited in a seeded random order; each
/// contributes its cosine row and, unless identically zero, its sine row,
/// until `m` rows are collected. Frequencies above `n/2` are skipped since
/// they only repeat (or negate) rows of lower ones. Columns are normalized.
pub fn gen_partial_fourier(m: usize, n: usize, seed: u64) -> Result<SensingMatrix> {
    check_dims(m, n)?;
    if m > n {
        return Err(Error::Dimension(format!(
            "a real Fourier basis of length {n} has only {n} independent rows, {m} requested"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut freqs: Vec<usize> = (0..=n / 2).collect();
    freqs.shuffle(&mut rng);

    let mut entries = Vec::with_capacity(m * n);
    let mut emitted = 0;
    let angle = |f: usize, j: usize| 2.0 * std::f64::consts::PI * ((f * j) % n) as f64 / n as f64;
    'outer: for f in freqs {
        let has_sine = f != 0 && 2 * f != n;
        for sine in [false, true] {
            if emitted == m {
                break 'outer;
            }
            if sine && !has_sine {
                continue;
            }
            entries.extend((0..n).map(|j| {
                let a = angle(f, j);
                if sine {
                    a.sin()
                } else {
                    a.cos()
                }
            }));
            emitted += 1;
        }
    }
    SensingMatrix::from_row_major(
        m,
        n,
        entries,
        Provenance::Generator {
            name: "partial_fourier".into(),
            m,
            n,
            seed,
        },
    )?
    .normalize_columns()
}

/// Sort columns by non-increasing score; equal scores keep their original order.
pub fn permute_columns_desc(a: &SensingMatrix, scores: &[f64]) -> Result<SensingMatrix> {
    if scores.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "{} scores for {} columns",
            scores.len(),
            a.cols()
        )));
    }
    let order = descending_order(scores);
    a.select_columns(&order)
}

/// Indices of `scores` in non-increasing order, ties by ascending index.
pub fn descending_order(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Strictly increasing set of 0-based column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate index".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(Self(indices))
    }

    /// Build from 1-based indices as users write them.
    pub fn from_one_based(indices: &[usize], n: usize) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, n });
        }
        Self::new(indices.iter().map(|i| i - 1).collect(), n)
    }

    /// Caller guarantees the slice is strictly increasing.
    pub(crate) fn from_sorted(indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self(indices)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// Append an index larger than every current member.
    pub fn extended(&self, q: usize) -> Self {
        debug_assert!(self.max_index().is_none_or(|m| q > m));
        let mut v = self.0.clone();
        v.push(q);
        Self(v)
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// Map indices of a column-permuted matrix back to original columns.
    pub fn to_original(&self, a: &SensingMatrix) -> Self {
        let mut v: Vec<usize> = self.0.iter().map(|&p| a.original_column(p)).collect();
        v.sort_unstable();
        Self(v)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for IndexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}
