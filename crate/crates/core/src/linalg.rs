//! Exact sparse linear algebra over F_p: echelon forms, rank, kernels and
//! span membership.
//!
//! Every routine pivots on the lowest column index, processing rows in the
//! order given, so results are a deterministic function of the input.
//! Blocks narrower than a configurable threshold store their echelon rows
//! densely; wider blocks keep them sparse. Reduction itself always runs
//! through a dense accumulator, which is the fast path for the small graded
//! pieces this crate produces in bulk.

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Sparse vector: `(index, value)` pairs, strictly increasing indices,
/// no zero values.
pub type SparseVec = Vec<(usize, FieldElement)>;

/// Echelon rows below this many columns are stored densely.
pub const DEFAULT_DENSE_THRESHOLD: usize = 256;

const NO_PIVOT: usize = usize::MAX;

/// A matrix over F_p stored row-major with sparse rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triples.
    ///
    /// Values are reduced mod p and zeros dropped. Duplicate positions and
    /// out-of-range indices are rejected.
    pub fn new(
        field: PrimeField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Malformed(format!("entry ({r}, {c}) outside a {rows}x{cols} matrix")));
            }
            data[r].push((c, field.from_i64(v)));
        }
        for row in &mut data {
            row.sort_by_key(|&(c, _)| c);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Malformed("duplicate matrix entry".into()));
            }
            row.retain(|&(_, v)| v != 0);
        }
        Ok(Self { field, rows, cols, data })
    }

    /// Builds a matrix from dense integer rows of equal length.
    pub fn from_dense(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: rows.iter().map(Vec::len).find(|&l| l != cols).unwrap_or(0),
            });
        }
        let entries = rows.iter().enumerate().flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::new(field, rows.len(), cols, entries)
    }

    /// Wraps already-canonical sparse rows (sorted, nonzero, in range).
    pub(crate) fn from_rows(field: PrimeField, cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| is_canonical(r, cols)));
        Self { field, rows: data.len(), cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, FieldElement)] {
        &self.data[i]
    }

    /// All stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, FieldElement)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v));
        }
        Self { field: self.field, rows: self.cols, cols: self.rows, data }
    }
}

fn is_canonical(v: &[(usize, FieldElement)], dim: usize) -> bool {
    v.windows(2).all(|w| w[0].0 < w[1].0) && v.iter().all(|&(c, x)| x != 0 && c < dim)
}

#[derive(Debug, Clone)]
enum Row {
    Sparse(SparseVec),
    Dense(Vec<FieldElement>),
}

/// Result of reducing a vector against an [`Echelon`]:
/// `v = Σ coeff·row[r] + remainder`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Reduction {
    pub remainder: SparseVec,
    pub combination: Vec<(usize, FieldElement)>,
}

/// Incrementally built row-echelon basis of a subspace of F_p^dim.
///
/// Stored rows are normalized to leading coefficient 1. Row `r` has pivot
/// column `pivots()[r]`; a column hosts at most one pivot.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    dim: usize,
    dense: bool,
    rows: Vec<Row>,
    pivots: Vec<usize>,
    pivot_row: Vec<usize>,
}

impl Echelon {
    pub fn new(field: PrimeField, dim: usize) -> Self {
        Self::with_threshold(field, dim, DEFAULT_DENSE_THRESHOLD)
    }

    /// Uses dense row storage when `dim < dense_threshold`.
    pub fn with_threshold(field: PrimeField, dim: usize, dense_threshold: usize) -> Self {
        Self {
            field,
            dim,
            dense: dim < dense_threshold,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![NO_PIVOT; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col] != NO_PIVOT
    }

    /// Stored row `r` as a sparse vector.
    pub fn row(&self, r: usize) -> SparseVec {
        match &self.rows[r] {
            Row::Sparse(v) => v.clone(),
            Row::Dense(d) => dense_to_sparse(d),
        }
    }

    fn subtract_row(&self, acc: &mut [FieldElement], r: usize, coef: FieldElement) {
        let f = self.field;
        match &self.rows[r] {
            Row::Sparse(v) => {
                for &(c, x) in v {
                    acc[c] = f.sub(acc[c], f.mul(coef, x));
                }
            }
            Row::Dense(d) => {
                let start = self.pivots[r];
                for c in start..self.dim {
                    let x = d[c];
                    if x != 0 {
                        acc[c] = f.sub(acc[c], f.mul(coef, x));
                    }
                }
            }
        }
    }

    /// Reduces a dense accumulator in place, starting at column `from`.
    fn reduce_acc(&self, acc: &mut [FieldElement], from: usize, mut track: Option<&mut Vec<(usize, FieldElement)>>) {
        for c in from..self.dim {
            let coef = acc[c];
            if coef == 0 {
                continue;
            }
            let r = self.pivot_row[c];
            if r == NO_PIVOT {
                continue;
            }
            self.subtract_row(acc, r, coef);
            if let Some(t) = track.as_deref_mut() {
                t.push((r, coef));
            }
        }
    }

    fn load(&self, v: &[(usize, FieldElement)]) -> Result<Vec<FieldElement>> {
        let mut acc = vec![0; self.dim];
        for &(c, x) in v {
            if c >= self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: c + 1 });
            }
            acc[c] = self.field.add(acc[c], self.field.from_u64(x as u64));
        }
        Ok(acc)
    }

    /// Reduces `v` against the stored rows, recording the multipliers used.
    pub fn reduce(&self, v: &[(usize, FieldElement)]) -> Result<Reduction> {
        let mut acc = self.load(v)?;
        let from = v.iter().map(|&(c, _)| c).min().unwrap_or(self.dim);
        let mut combination = Vec::new();
        self.reduce_acc(&mut acc, from, Some(&mut combination));
        Ok(Reduction { remainder: dense_to_sparse(&acc), combination })
    }

    /// True if `v` lies in the row space.
    pub fn contains(&self, v: &[(usize, FieldElement)]) -> Result<bool> {
        let mut acc = self.load(v)?;
        let from = v.iter().map(|&(c, _)| c).min().unwrap_or(self.dim);
        self.reduce_acc(&mut acc, from, None);
        Ok(acc.iter().all(|&x| x == 0))
    }

    /// Appends a fully reduced nonzero vector as a new row, normalized to
    /// leading coefficient 1. Returns the row index and the scalar `s` with
    /// `stored_row = s · remainder`.
    pub fn push_reduced(&mut self, remainder: &[(usize, FieldElement)]) -> (usize, FieldElement) {
        let &(lead, lead_val) = remainder.first().expect("push_reduced on zero vector");
        debug_assert!(self.pivot_row[lead] == NO_PIVOT);
        let s = self.field.inv(lead_val);
        let scaled: SparseVec = remainder.iter().map(|&(c, x)| (c, self.field.mul(s, x))).collect();
        let row = if self.dense {
            let mut d = vec![0; self.dim];
            for (c, x) in scaled {
                d[c] = x;
            }
            Row::Dense(d)
        } else {
            Row::Sparse(scaled)
        };
        let r = self.rows.len();
        self.rows.push(row);
        self.pivots.push(lead);
        self.pivot_row[lead] = r;
        (r, s)
    }

    /// Inserts `v`; returns the new row index if `v` was independent.
    pub fn insert(&mut self, v: &[(usize, FieldElement)]) -> Result<Option<usize>> {
        let mut acc = self.load(v)?;
        let from = v.iter().map(|&(c, _)| c).min().unwrap_or(self.dim);
        self.reduce_acc(&mut acc, from, None);
        let rem = dense_to_sparse(&acc);
        if rem.is_empty() {
            return Ok(None);
        }
        Ok(Some(self.push_reduced(&rem).0))
    }

    /// Converts to reduced row echelon form: every pivot column is zero in
    /// all other rows. Row order and pivots are unchanged.
    pub fn into_rref(mut self) -> Self {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.pivots[r]));
        // Rows with larger pivots are finished first, so clearing a row only
        // ever subtracts already-reduced rows.
        for r in order {
            let pivot = self.pivots[r];
            let mut acc = vec![0; self.dim];
            for (c, x) in self.row(r) {
                acc[c] = x;
            }
            for c in pivot + 1..self.dim {
                let coef = acc[c];
                if coef == 0 {
                    continue;
                }
                let other = self.pivot_row[c];
                if other != NO_PIVOT {
                    self.subtract_row(&mut acc, other, coef);
                }
            }
            self.rows[r] = if self.dense { Row::Dense(acc) } else { Row::Sparse(dense_to_sparse(&acc)) };
        }
        self
    }

    /// Kernel of the linear map whose matrix has these rows (viewing the
    /// echelon as the row space of that matrix): one vector per non-pivot
    /// column `f`, with `x_f = 1` and `f` its largest nonzero index.
    /// Requires RREF form.
    fn kernel_from_rref(&self) -> Vec<SparseVec> {
        let mut by_free: Vec<SparseVec> = vec![Vec::new(); self.dim];
        for r in 0..self.rows.len() {
            let pivot = self.pivots[r];
            for (c, x) in self.row(r) {
                if c != pivot {
                    by_free[c].push((pivot, self.field.neg(x)));
                }
            }
        }
        let mut out = Vec::new();
        for (f, mut v) in by_free.into_iter().enumerate() {
            if self.is_pivot(f) {
                continue;
            }
            v.push((f, 1));
            v.sort_by_key(|&(c, _)| c);
            out.push(v);
        }
        out
    }
}

fn dense_to_sparse(d: &[FieldElement]) -> SparseVec {
    d.iter().enumerate().filter(|&(_, &x)| x != 0).map(|(c, &x)| (c, x)).collect()
}

/// Rank of a matrix over F_p.
pub fn rank(m: &SparseMatrix) -> usize {
    rank_with_threshold(m, DEFAULT_DENSE_THRESHOLD)
}

pub fn rank_with_threshold(m: &SparseMatrix, dense_threshold: usize) -> usize {
    let mut e = Echelon::with_threshold(m.field, m.cols, dense_threshold);
    for row in &m.data {
        e.insert(row).expect("rows are in range by construction");
    }
    e.rank()
}

/// Sparse null-space basis of the matrix with the given rows over
/// `ncols` columns, in RREF order (sorted by free column).
pub fn kernel_sparse(field: PrimeField, ncols: usize, rows: &[SparseVec], dense_threshold: usize) -> Vec<SparseVec> {
    let mut e = Echelon::with_threshold(field, ncols, dense_threshold);
    for row in rows {
        e.insert(row).expect("rows are in range by construction");
    }
    e.into_rref().kernel_from_rref()
}

/// Basis of `{x : m·x = 0}` as dense coordinate vectors of length
/// `cols(m)`, in reduced echelon form with free columns ascending.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<FieldElement>> {
    kernel_sparse(m.field, m.cols, &m.data, DEFAULT_DENSE_THRESHOLD)
        .into_iter()
        .map(|v| {
            let mut d = vec![0; m.cols];
            for (c, x) in v {
                d[c] = x;
            }
            d
        })
        .collect()
}

/// Coefficients `c` with `Σ c_i·targets[i] = v`, or `None` if `v` is not in
/// the span. Dependent targets receive coefficient zero.
pub fn solve_in_span(
    field: PrimeField,
    targets: &[Vec<FieldElement>],
    v: &[FieldElement],
) -> Result<Option<Vec<FieldElement>>> {
    let dim = v.len();
    if let Some(t) = targets.iter().find(|t| t.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: t.len() });
    }
    let mut e = Echelon::new(field, dim);
    // Expression of each echelon row in terms of the targets.
    let mut exprs: Vec<Vec<FieldElement>> = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        let sparse = dense_to_sparse(&t.iter().map(|&x| field.from_u64(x as u64)).collect::<Vec<_>>());
        let red = e.reduce(&sparse)?;
        if red.remainder.is_empty() {
            continue;
        }
        let mut expr = vec![0; targets.len()];
        expr[i] = 1;
        for &(r, c) in &red.combination {
            for (k, &x) in exprs[r].iter().enumerate() {
                expr[k] = field.sub(expr[k], field.mul(c, x));
            }
        }
        let (_, s) = e.push_reduced(&red.remainder);
        for x in &mut expr {
            *x = field.mul(*x, s);
        }
        exprs.push(expr);
    }
    let sparse = dense_to_sparse(&v.iter().map(|&x| field.from_u64(x as u64)).collect::<Vec<_>>());
    let red = e.reduce(&sparse)?;
    if !red.remainder.is_empty() {
        return Ok(None);
    }
    let mut out = vec![0; targets.len()];
    for (r, c) in red.combination {
        for (k, &x) in exprs[r].iter().enumerate() {
            out[k] = field.add(out[k], field.mul(c, x));
        }
    }
    Ok(Some(out))
}

/// Inverse of a square dense matrix, or `None` if it is singular.
pub fn invert_dense(field: PrimeField, m: &[Vec<FieldElement>]) -> Option<Vec<Vec<FieldElement>>> {
    let n = m.len();
    let mut a: Vec<Vec<FieldElement>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<FieldElement> = row.iter().map(|&x| field.from_u64(x as u64)).collect();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, pivot);
        let inv = field.inv(a[col][col]);
        for x in &mut a[col] {
            *x = field.mul(*x, inv);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let c = a[r][col];
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
