//! Row-major dense `f64` matrices and block layouts.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Relative symmetry tolerance used whenever an operation requires a symmetric input.
pub const SYMTOL: f64 = 1e-10;

/// Default relative numerical tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Dense row-major matrix of 64-bit floats.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// All-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Matrix with entry `(i, j) = f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Build from row-major storage; `data.len()` must equal `rows · cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}×{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from a list of equally long rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of different lengths".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    /// Diagonal matrix.
    pub fn diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    /// Outer product `u vᵀ`.
    pub fn outer(u: &[f64], v: &[f64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Mutable row-major entries.
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` copied into a vector.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Overwrite column `j`.
    pub fn set_column(&mut self, j: usize, v: &[f64]) {
        for (i, &x) in v.iter().enumerate() {
            self[(i, j)] = x;
        }
    }

    /// Diagonal entries.
    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · other` without forming the transpose.
    pub fn t_matmul(&self, other: &Self) -> Result<Self> {
        self.transpose().matmul(other)
    }

    /// Matrix–vector product.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), x)).collect())
    }

    /// Quadratic form `xᵀ A x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        Ok(dot(x, &self.matvec(x)?))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}×{} vs {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| c * x).collect() }
    }

    /// In-place `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("axpy shape mismatch".into()));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `⟨A, B⟩ = Σ A_ij B_ij`.
    pub fn frobenius_dot(&self, other: &Self) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("inner product shape mismatch".into()));
        }
        Ok(dot(&self.data, &other.data))
    }

    /// Largest entry of `|A − B|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `max |A − Aᵀ|`.
    pub fn max_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Error unless square and symmetric within [`SYMTOL`] relative to the largest entry.
    pub fn require_symmetric(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("{}×{} matrix is not square", self.rows, self.cols)));
        }
        let asym = self.max_asymmetry();
        if asym > SYMTOL * self.max_abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(())
    }

    /// `(A + Aᵀ)/2`.
    pub fn symmetrized(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| 0.5 * (self[(i, j)] + self[(j, i)]))
    }

    /// Copy of the `h × w` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Write `m` with its top-left corner at `(r0, c0)`.
    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &Self) {
        for i in 0..m.rows {
            for j in 0..m.cols {
                self[(r0 + i, c0 + j)] = m[(i, j)];
            }
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    /// `vec(A)`: concatenation of the columns.
    pub fn vec(&self) -> Vec<f64> {
        (0..self.cols).flat_map(|j| self.column(j)).collect()
    }

    /// Inverse of `vec`: reshape a column-stacked vector into `rows × cols`.
    pub fn unvec(v: &[f64], rows: usize, cols: usize) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::Dimension("unvec length mismatch".into()));
        }
        Ok(Self::from_fn(rows, cols, |i, j| v[j * rows + i]))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Euclidean inner product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Kronecker product of vectors, `z ⊗ y`: block `i` equals `z_i · y`.
pub fn kron_vec(z: &[f64], y: &[f64]) -> Vec<f64> {
    z.iter().flat_map(|&zi| y.iter().map(move |&yj| zi * yj)).collect()
}

/// Square block partition of an `rN × rN` matrix into `N²` blocks of size `r × r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BlockLayout {
    /// Number of blocks per side.
    #[serde(rename = "N")]
    pub n: usize,
    /// Block size.
    pub r: usize,
}

impl BlockLayout {
    pub fn new(n: usize, r: usize) -> Self {
        Self { n, r }
    }

    /// Total dimension `rN`.
    pub fn dim(&self) -> usize {
        self.n * self.r
    }

    /// Layout with block size `r` covering a matrix of dimension `dim`.
    pub fn for_dimension(dim: usize, r: usize) -> Result<Self> {
        if r == 0 || dim % r != 0 {
            return Err(Error::Dimension(format!("dimension {dim} is not divisible by block size {r}")));
        }
        Ok(Self { n: dim / r, r })
    }

    /// Copy of block `(i, j)` (0-based).
    pub fn block(&self, m: &DenseMatrix, i: usize, j: usize) -> DenseMatrix {
        m.submatrix(i * self.r, j * self.r, self.r, self.r)
    }

    /// Overwrite block `(i, j)`.
    pub fn set_block(&self, m: &mut DenseMatrix, i: usize, j: usize, b: &DenseMatrix) {
        m.set_submatrix(i * self.r, j * self.r, b);
    }

    /// Segment `i` of a stacked vector.
    pub fn segment<'a>(&self, v: &'a [f64], i: usize) -> &'a [f64] {
        &v[i * self.r..(i + 1) * self.r]
    }
}
