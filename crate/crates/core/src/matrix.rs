//! Dense matrices over a [`WittRing`], row-major.
//!
//! Matrices of sigma-linear maps use the column convention throughout the
//! crate: column j holds the coordinates of the image of e_j.

use crate::witt_ring::{WittElem, WittRing};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<WittElem>,
}

impl Matrix {
    pub fn zeros(ring: &WittRing, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &WittRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds from rows; `None` when the rows are ragged or empty.
    pub fn from_rows(rows: Vec<Vec<WittElem>>) -> Option<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first()?.len();
        if n_cols == 0 || rows.iter().any(|r| r.len() != n_cols) {
            return None;
        }
        Some(Self {
            rows: n_rows,
            cols: n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<WittElem>]) -> Option<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first()?.len();
        if columns.iter().any(|c| c.len() != n_rows) {
            return None;
        }
        let data = (0..n_rows)
            .flat_map(|i| columns.iter().map(move |c| c[i].clone()))
            .collect();
        Some(Self {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn diagonal(ring: &WittRing, entries: &[WittElem]) -> Self {
        let mut m = Self::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &WittElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: WittElem) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[WittElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<WittElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<WittElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &WittElem> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| self.get(i, j).clone()))
            .collect();
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn mul(&self, rhs: &Matrix, ring: &WittRing) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(&out.data[idx], &ring.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[WittElem], ring: &WittRing) -> Vec<WittElem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(ring.zero(), |acc, (a, b)| ring.add(&acc, &ring.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix, ring: &WittRing) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "dimension mismatch"
        );
        self.zip_map(rhs, |a, b| ring.add(a, b))
    }

    pub fn sub(&self, rhs: &Matrix, ring: &WittRing) -> Matrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "dimension mismatch"
        );
        self.zip_map(rhs, |a, b| ring.sub(a, b))
    }

    pub fn scale(&self, s: &WittElem, ring: &WittRing) -> Matrix {
        self.map(|a| ring.mul(a, s))
    }

    /// Entrywise sigma^power.
    pub fn frobenius(&self, power: i64, ring: &WittRing) -> Matrix {
        self.map(|a| ring.frobenius(a, power))
    }

    pub fn map(&self, f: impl Fn(&WittElem) -> WittElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn zip_map(&self, rhs: &Matrix, f: impl Fn(&WittElem, &WittElem) -> WittElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Block-diagonal sum.
    pub fn block_diag(ring: &WittRing, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(ring, n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(offset + i, offset + j, b.get(i, j).clone());
                }
            }
            offset += b.rows;
        }
        out
    }

    /// Minimum valuation over all entries of `self - rhs` (N when equal).
    pub fn congruence_level(&self, rhs: &Matrix, ring: &WittRing) -> u32 {
        self.sub(rhs, ring)
            .entries()
            .map(|e| ring.valuation_capped(e))
            .min()
            .unwrap_or(ring.precision())
    }
}
