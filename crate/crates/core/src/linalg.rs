//! Exact linear algebra over the rationals.
//!
//! Matrices are stored row-sparse. Gauss-Jordan elimination normalizes each
//! pivot row and clears the pivot column everywhere, so the output is the
//! (unique) reduced row-echelon form. When fill-in passes half of the matrix
//! the elimination continues on a dense copy; since the RREF is unique the
//! result does not depend on which representation finished the job.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector of length {found} where length {expected} was expected")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entry ({row}, {col}) lies outside a {n_rows}x{n_cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },
}

/// Sparse matrix over Q. Zero entries are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatQ {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl SparseMatQ {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        SparseMatQ {
            n_rows,
            n_cols,
            rows: vec![BTreeMap::new(); n_rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, Rational::one());
        }
        m
    }

    /// Builds a matrix from dense rows. All rows must have the same length.
    pub fn from_dense_rows(n_cols: usize, rows: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows.len(), n_cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(LinalgError::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[r].insert(c, v.clone());
                }
            }
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given dense vectors.
    pub fn from_dense_columns(n_rows: usize, cols: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(n_rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            if col.len() != n_rows {
                return Err(LinalgError::DimensionMismatch {
                    expected: n_rows,
                    found: col.len(),
                });
            }
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.rows[r].insert(c, v.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&Rational> {
        self.rows.get(row).and_then(|r| r.get(&col))
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) -> Result<(), LinalgError> {
        if row >= self.n_rows || col >= self.n_cols {
            return Err(LinalgError::OutOfBounds {
                row,
                col,
                n_rows: self.n_rows,
                n_cols: self.n_cols,
            });
        }
        if value.is_zero() {
            self.rows[row].remove(&col);
        } else {
            self.rows[row].insert(col, value);
        }
        Ok(())
    }

    /// Iterates the stored entries of one row in column order.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, &Rational)> {
        self.rows[row].iter().map(|(c, v)| (*c, v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n_cols, self.n_rows);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                t.rows[*c].insert(r, v.clone());
            }
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.n_cols];
                for (c, v) in row {
                    dense[*c] = v.clone();
                }
                dense
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.n_cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n_cols,
                found: v.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter(|(c, _)| !v[**c].is_zero())
                    .fold(Rational::zero(), |acc, (c, a)| acc + a * &v[*c])
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }
}

/// Elementary row operation recorded during elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOp {
    Swap(usize, usize),
    /// Multiply a row by a nonzero scalar.
    Scale(usize, Rational),
    /// `target += factor * source`.
    AddMultiple {
        target: usize,
        source: usize,
        factor: Rational,
    },
}

/// Result of an elimination that kept its row operations.
#[derive(Debug, Clone)]
pub struct RrefFactorization {
    pub rref: SparseMatQ,
    pub pivots: Vec<usize>,
    pub ops: Vec<RowOp>,
}

impl RrefFactorization {
    /// Undoes the recorded operations on the RREF, recovering the input.
    pub fn reconstruct(&self) -> SparseMatQ {
        let mut store = Store::Sparse(self.rref.rows.clone());
        for op in self.ops.iter().rev() {
            match op {
                RowOp::Swap(i, j) => store.swap(*i, *j),
                RowOp::Scale(r, c) => store.scale(*r, &(Rational::one() / c)),
                RowOp::AddMultiple {
                    target,
                    source,
                    factor,
                } => store.add_multiple(*target, *source, &-factor.clone()),
            }
        }
        SparseMatQ {
            n_rows: self.rref.n_rows,
            n_cols: self.rref.n_cols,
            rows: store.into_sparse(),
        }
    }
}

enum Store {
    Sparse(Vec<BTreeMap<usize, Rational>>),
    Dense(Vec<Vec<Rational>>),
}

impl Store {
    fn get(&self, r: usize, c: usize) -> Option<&Rational> {
        match self {
            Store::Sparse(rows) => rows[r].get(&c),
            Store::Dense(rows) => Some(&rows[r][c]).filter(|v| !v.is_zero()),
        }
    }

    fn swap(&mut self, i: usize, j: usize) {
        match self {
            Store::Sparse(rows) => rows.swap(i, j),
            Store::Dense(rows) => rows.swap(i, j),
        }
    }

    fn scale(&mut self, r: usize, by: &Rational) {
        match self {
            Store::Sparse(rows) => rows[r].values_mut().for_each(|v| *v *= by),
            Store::Dense(rows) => rows[r].iter_mut().for_each(|v| *v *= by),
        }
    }

    fn add_multiple(&mut self, target: usize, source: usize, factor: &Rational) {
        match self {
            Store::Sparse(rows) => {
                let src: Vec<(usize, Rational)> =
                    rows[source].iter().map(|(c, v)| (*c, v * factor)).collect();
                let row = &mut rows[target];
                for (c, delta) in src {
                    let entry = row.entry(c).or_insert_with(Rational::zero);
                    *entry += delta;
                    if entry.is_zero() {
                        row.remove(&c);
                    }
                }
            }
            Store::Dense(rows) => {
                let src: Vec<(usize, Rational)> = rows[source]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v * factor))
                    .collect();
                for (c, delta) in src {
                    rows[target][c] += delta;
                }
            }
        }
    }

    fn nnz(&self) -> usize {
        match self {
            Store::Sparse(rows) => rows.iter().map(BTreeMap::len).sum(),
            Store::Dense(rows) => rows.iter().flatten().filter(|v| !v.is_zero()).count(),
        }
    }

    fn densify(&mut self, n_cols: usize) {
        if let Store::Sparse(rows) = self {
            let dense = rows
                .iter()
                .map(|row| {
                    let mut d = vec![Rational::zero(); n_cols];
                    for (c, v) in row {
                        d[*c] = v.clone();
                    }
                    d
                })
                .collect();
            *self = Store::Dense(dense);
        }
    }

    fn into_sparse(self) -> Vec<BTreeMap<usize, Rational>> {
        match self {
            Store::Sparse(rows) => rows,
            Store::Dense(rows) => rows
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }
}

fn eliminate(m: &SparseMatQ, record: bool) -> RrefFactorization {
    let (n_rows, n_cols) = (m.n_rows, m.n_cols);
    let mut store = Store::Sparse(m.rows.clone());
    let mut ops = Vec::new();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    let dense_threshold = n_rows * n_cols;

    for col in 0..n_cols {
        if pivot_row == n_rows {
            break;
        }
        // smallest entry by bit length, ties to the lowest row
        let best = (pivot_row..n_rows)
            .filter_map(|r| store.get(r, col).map(|v| (v.bit_size(), r)))
            .min();
        let Some((_, r)) = best else { continue };
        if r != pivot_row {
            store.swap(r, pivot_row);
            if record {
                ops.push(RowOp::Swap(r, pivot_row));
            }
        }
        let pivot = store.get(pivot_row, col).cloned().expect("pivot present");
        if !pivot.is_one() {
            let inv = Rational::one() / pivot;
            store.scale(pivot_row, &inv);
            if record {
                ops.push(RowOp::Scale(pivot_row, inv));
            }
        }
        for other in 0..n_rows {
            if other == pivot_row {
                continue;
            }
            if let Some(v) = store.get(other, col) {
                let factor = -v.clone();
                store.add_multiple(other, pivot_row, &factor);
                if record {
                    ops.push(RowOp::AddMultiple {
                        target: other,
                        source: pivot_row,
                        factor,
                    });
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
        if matches!(store, Store::Sparse(_)) && 2 * store.nnz() > dense_threshold {
            store.densify(n_cols);
        }
    }

    RrefFactorization {
        rref: SparseMatQ {
            n_rows,
            n_cols,
            rows: store.into_sparse(),
        },
        pivots,
        ops,
    }
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &SparseMatQ) -> (SparseMatQ, Vec<usize>) {
    let f = eliminate(m, false);
    (f.rref, f.pivots)
}

/// Like [`rref`], also returning the row operations that produced it.
pub fn rref_factorization(m: &SparseMatQ) -> RrefFactorization {
    eliminate(m, true)
}

pub fn rank(m: &SparseMatQ) -> usize {
    eliminate(m, false).pivots.len()
}

/// Basis of the right null space, one vector per free column.
pub fn kernel_basis(m: &SparseMatQ) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.n_cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..m.n_cols)
        .filter(|c| !is_pivot[*c])
        .map(|free| {
            let mut v = vec![Rational::zero(); m.n_cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                if let Some(e) = r.get(i, free) {
                    v[p] = -e.clone();
                }
            }
            v
        })
        .collect()
}

fn common_length(vectors: &[&[Vec<Rational>]]) -> Result<Option<usize>, LinalgError> {
    let mut len = None;
    for v in vectors.iter().flat_map(|s| s.iter()) {
        match len {
            None => len = Some(v.len()),
            Some(n) if n != v.len() => {
                return Err(LinalgError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                })
            }
            _ => {}
        }
    }
    Ok(len)
}

/// Dimension of the span of a list of vectors of common length.
pub fn span_rank(vectors: &[Vec<Rational>]) -> Result<usize, LinalgError> {
    match common_length(&[vectors])? {
        None => Ok(0),
        Some(n) => Ok(rank(&SparseMatQ::from_dense_rows(n, vectors)?)),
    }
}

/// `span(a) ⊆ span(b)`, by comparing rank(b) with rank(b stacked on a).
pub fn subspace_leq(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<bool, LinalgError> {
    let Some(n) = common_length(&[a, b])? else {
        return Ok(true);
    };
    if a.is_empty() {
        return Ok(true);
    }
    let rank_b = rank(&SparseMatQ::from_dense_rows(n, b)?);
    let stacked: Vec<Vec<Rational>> = b.iter().chain(a.iter()).cloned().collect();
    let rank_ab = rank(&SparseMatQ::from_dense_rows(n, &stacked)?);
    Ok(rank_ab == rank_b)
}

pub fn subspace_eq(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<bool, LinalgError> {
    Ok(subspace_leq(a, b)? && subspace_leq(b, a)?)
}

/// First vector of `a` lying outside `span(b)`, if any.
pub fn first_outside(
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
) -> Result<Option<usize>, LinalgError> {
    let Some(n) = common_length(&[a, b])? else {
        return Ok(None);
    };
    let rank_b = if b.is_empty() {
        0
    } else {
        rank(&SparseMatQ::from_dense_rows(n, b)?)
    };
    for (i, v) in a.iter().enumerate() {
        let mut stacked = b.to_vec();
        stacked.push(v.clone());
        if rank(&SparseMatQ::from_dense_rows(n, &stacked)?) > rank_b {
            return Ok(Some(i));
        }
    }
    Ok(None)
}
