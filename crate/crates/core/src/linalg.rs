//! Dense row-major matrices over a finite field, sized for the small
//! systems that show up when slicing affine subspaces (tens of rows, not
//! thousands).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone)]
pub struct FpMat {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Result of Gauss-Jordan elimination.
pub struct Rref {
    pub mat: FpMat,
    pub rank: usize,
    /// Pivot column of each pivot row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl FpMat {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> FpMat {
        FpMat {
            field,
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    /// Builds from rows of raw codes, validating range and shape.
    pub fn from_rows(field: Arc<Field>, rows: &[Vec<u64>]) -> Result<FpMat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::InvalidArgument("ragged matrix rows".into()));
            }
            for &code in row {
                data.push(field.elem(code)?);
            }
        }
        Ok(FpMat {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_elems(field: Arc<Field>, rows: usize, cols: usize, data: Vec<Elem>) -> FpMat {
        assert_eq!(data.len(), rows * cols);
        FpMat {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMat {
            field: Arc::clone(&self.field),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Appends one extra column.
    pub fn augment_col(&self, col: &[Elem]) -> FpMat {
        assert_eq!(col.len(), self.rows);
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.push(col[i]);
        }
        FpMat {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: self.cols + 1,
            data,
        }
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> FpMat {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.at(i, j));
            }
        }
        FpMat {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    pub fn transpose(&self) -> FpMat {
        let mut data = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j));
            }
        }
        FpMat {
            field: Arc::clone(&self.field),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn mat_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                let mut acc = Elem::ZERO;
                for j in 0..self.cols {
                    acc = f.add(acc, f.mul(self.at(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let f = Arc::clone(&m.field);
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv(m.at(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                m.set(row, j, f.mul(m.at(row, j), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.at(r, col);
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.at(r, j), f.mul(factor, m.at(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            mat: m,
            rank: row,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::InvalidArgument(
                "determinant requires a square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let f = Arc::clone(&m.field);
        let mut det = Elem::ONE;
        for col in 0..m.cols {
            let Some(pr) = (col..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                return Ok(Elem::ZERO);
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = f.neg(det);
            }
            let lead = m.at(col, col);
            det = f.mul(det, lead);
            let inv = f.inv(lead).expect("pivot is nonzero");
            for r in (col + 1)..m.rows {
                let factor = f.mul(m.at(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = f.sub(m.at(r, j), f.mul(factor, m.at(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Basis of the right kernel `{v : Mv = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        let Rref { mat, pivots, .. } = self.rref();
        let f = &self.field;
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Elem::ZERO; self.cols];
            v[free] = Elem::ONE;
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(mat.at(pr, free));
            }
            basis.push(v);
        }
        basis
    }
}

impl std::fmt::Debug for FpMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FpMat {}x{} over F_{}", self.rows, self.cols, self.field.order())?;
        for i in 0..self.rows {
            let row: Vec<u64> = self.row(i).iter().map(|e| e.code()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
