use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{BaseRing, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`BaseRing`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    pub(crate) ring: BaseRing,
    pub(crate) rows: usize,
    pub(crate) cols: usize,
    pub(crate) data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}x{} over {}](", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, ")")
    }
}

impl Matrix {
    pub fn zero(ring: BaseRing, rows: usize, cols: usize) -> Self {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: BaseRing, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn from_fn(
        ring: BaseRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                debug_assert!(ring.kind_matches(&v));
                data.push(v);
            }
        }
        Matrix { ring, rows, cols, data }
    }

    /// Row-major integer entries, reduced into the ring.
    pub fn from_i64(ring: BaseRing, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix { ring, rows, cols, data: entries.iter().map(|&v| ring.from_i64(v)).collect() }
    }

    /// Builds from integer rows; every row must have the same length.
    pub fn from_rows<R: AsRef<[i64]>>(ring: BaseRing, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&v| ring.from_i64(v)));
        }
        Matrix { ring, rows: rows.len(), cols, data }
    }

    pub fn from_scalars(ring: BaseRing, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim("entries", (rows, cols), (data.len(), 1)));
        }
        if let Some(bad) = data.iter().find(|s| !ring.kind_matches(s)) {
            return Err(Error::BadScalar { text: bad.to_string(), ring });
        }
        Ok(Matrix { ring, rows, cols, data })
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(self.ring.kind_matches(&v), "scalar kind does not match ring");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.ring.is_zero(v))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.ring, self.rows)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !self.ring.is_zero(v)).count()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        assert_eq!(self.ring, other.ring, "matrix product rings");
        let ring = self.ring;
        let mut out = Matrix::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !ring.is_zero(b) {
                        ring.add_mul_assign(o, a, b);
                    }
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!(self.dims(), other.dims(), "elementwise dimensions");
        assert_eq!(self.ring, other.ring, "elementwise rings");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.ring.sub(a, b))
    }

    pub fn neg(&self) -> Matrix {
        self.map(|v| self.ring.neg(v))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        self.map(|v| self.ring.mul(c, v))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { ring: self.ring, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        Matrix::from_fn(self.ring, rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_cols(&[j])
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn place(&mut self, r: usize, c: usize, block: &Matrix) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r + i) * self.cols + c + j] = block.get(i, j).clone();
            }
        }
    }

    /// Horizontal concatenation; `rows` fixes the height when `parts` is empty.
    pub fn hstack(ring: BaseRing, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zero(ring, rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack heights");
            out.place(0, c, p);
            c += p.cols;
        }
        out
    }

    pub fn vstack(ring: BaseRing, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Matrix::zero(ring, rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "vstack widths");
            out.place(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn block_diag(ring: BaseRing, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zero(ring, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.place(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    /// Kronecker product; index `(i·rows(b) + k, j·cols(b) + l)` holds `a_ij·b_kl`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let ring = self.ring;
        let mut out = Matrix::zero(ring, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !ring.is_zero(b) {
                            out.data[(i * other.rows + k) * out.cols + j * other.cols + l] = ring.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Entries reinterpreted in `ring`; fails when a fraction has no image.
    pub fn base_change(&self, ring: BaseRing) -> Option<Matrix> {
        let data = self.data.iter().map(|v| ring.convert(v)).collect::<Option<Vec<_>>>()?;
        Some(Matrix { ring, rows: self.rows, cols: self.cols, data })
    }

    /// Decimal string entries, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.to_string()).collect()).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`.
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(c) {
            return;
        }
        let cols = self.cols;
        for j in 0..cols {
            if ring.is_zero(&self.data[src * cols + j]) {
                continue;
            }
            let s = self.data[src * cols + j].clone();
            ring.add_mul_assign(&mut self.data[dst * cols + j], c, &s);
        }
    }

    /// `col[dst] += c · col[src]`.
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Scalar) {
        let ring = self.ring;
        if ring.is_zero(c) {
            return;
        }
        let cols = self.cols;
        for i in 0..self.rows {
            if ring.is_zero(&self.data[i * cols + src]) {
                continue;
            }
            let s = self.data[i * cols + src].clone();
            ring.add_mul_assign(&mut self.data[i * cols + dst], c, &s);
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Scalar) {
        let ring = self.ring;
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = ring.mul(c, v);
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, c: &Scalar) {
        let ring = self.ring;
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = ring.mul(c, v);
        }
    }

    /// Replaces rows `(a, b)` by `m · (row_a, row_b)` for a 2×2 `m = [[m0, m1], [m2, m3]]`.
    pub(crate) fn mix_rows(&mut self, a: usize, b: usize, m: &[Scalar; 4]) {
        let ring = self.ring;
        for j in 0..self.cols {
            let x = self.data[a * self.cols + j].clone();
            let y = self.data[b * self.cols + j].clone();
            if ring.is_zero(&x) && ring.is_zero(&y) {
                continue;
            }
            self.data[a * self.cols + j] = ring.add(&ring.mul(&m[0], &x), &ring.mul(&m[1], &y));
            self.data[b * self.cols + j] = ring.add(&ring.mul(&m[2], &x), &ring.mul(&m[3], &y));
        }
    }

    /// Replaces columns `(a, b)` by `(col_a, col_b) · m`.
    pub(crate) fn mix_cols(&mut self, a: usize, b: usize, m: &[Scalar; 4]) {
        let ring = self.ring;
        for i in 0..self.rows {
            let x = self.data[i * self.cols + a].clone();
            let y = self.data[i * self.cols + b].clone();
            if ring.is_zero(&x) && ring.is_zero(&y) {
                continue;
            }
            self.data[i * self.cols + a] = ring.add(&ring.mul(&x, &m[0]), &ring.mul(&y, &m[2]));
            self.data[i * self.cols + b] = ring.add(&ring.mul(&x, &m[1]), &ring.mul(&y, &m[3]));
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs)
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix::add(self, rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix::sub(self, rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::neg(self)
    }
}
