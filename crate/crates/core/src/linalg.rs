//! Dense exact linear algebra over a [`FieldSpec`].

use std::fmt;

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} over F_{}", self.rows, self.cols, self.field.q())?;
        for r in 0..self.rows {
            let row: Vec<u32> = self.row(r).iter().map(|e| e.code()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Output of [`FMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: &FieldSpec, rows: usize, cols: usize) -> Self {
        FMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElem::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &FieldSpec, size: usize) -> Self {
        let mut m = Self::zeros(field, size, size);
        for i in 0..size {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Builds a matrix from rows of equal length `cols`.
    pub fn from_rows(field: &FieldSpec, cols: usize, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for &e in row {
                field.elem(e.code() as u64)?;
            }
            data.extend_from_slice(row);
        }
        Ok(FMatrix {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> FMatrix {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols, "vector length must match column count");
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(FieldElem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// `x M` for a row vector `x`.
    pub fn vec_mul(&self, x: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(x.len(), self.rows, "vector length must match row count");
        let f = &self.field;
        let mut out = vec![FieldElem::ZERO; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(r)) {
                *o = f.add(*o, f.mul(xr, a));
            }
        }
        out
    }

    /// Reduced row echelon form. Pivots are taken at the first nonzero entry
    /// scanning each column top to bottom.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r {
                    let factor = m.get(i, c);
                    if !factor.is_zero() {
                        m.add_row_multiple(i, r, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            reduced: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : M v = 0}`, one vector per free column.
    pub fn column_kernel(&self) -> Vec<Vec<FieldElem>> {
        let f = &self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![FieldElem::ZERO; self.cols];
            v[free] = FieldElem::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(reduced.get(r, free));
            }
            assert!(
                self.mul_vec(&v).iter().all(|e| e.is_zero()),
                "kernel vector failed verification"
            );
            basis.push(v);
        }
        basis
    }

    /// Finds `x` with `x M = w`, if `w` lies in the row space.
    pub fn express_in_rowspace(&self, w: &[FieldElem]) -> Option<Vec<FieldElem>> {
        if w.len() != self.cols {
            return None;
        }
        // Solve M^T x^T = w^T via the augmented system [M^T | w].
        let mut aug = FMatrix::zeros(&self.field, self.cols, self.rows + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(c, r, self.get(r, c));
            }
        }
        for (c, &wc) in w.iter().enumerate() {
            aug.set(c, self.rows, wc);
        }
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.rows) {
            return None;
        }
        let mut x = vec![FieldElem::ZERO; self.rows];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced.get(r, self.rows);
        }
        assert_eq!(self.vec_mul(&x), w, "row-space solution failed verification");
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: FieldElem) {
        let f = self.field.clone();
        for e in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *e = f.mul(*e, s);
        }
    }

    /// `row[dst] += s * row[src]`
    fn add_row_multiple(&mut self, dst: usize, src: usize, s: FieldElem) {
        let f = self.field.clone();
        for c in 0..self.cols {
            let v = f.add(self.get(dst, c), f.mul(s, self.get(src, c)));
            self.set(dst, c, v);
        }
    }
}
