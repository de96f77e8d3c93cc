use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::field::{FieldElement, FieldSpec};

use super::LinalgError;

/// Dense row-major matrix over a single exact field.
///
/// Square matrices act on column vectors of `K^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn new(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.spec() != spec) {
            return Err(LinalgError::FieldMismatch(spec, bad.spec()));
        }
        Ok(Matrix {
            spec,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::ShapeMismatch("ragged rows".into()));
        }
        Matrix::new(spec, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from small integers mapped into `spec`.
    pub fn from_i64(spec: FieldSpec, rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Matrix::from_rows(
            spec,
            rows.iter()
                .map(|r| r.iter().map(|&v| spec.from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(
        spec: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.spec(), spec, "entry from a different field");
                data.push(x);
            }
        }
        Matrix {
            spec,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(spec: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            spec,
            rows,
            cols,
            data: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: FieldSpec, n: usize) -> Self {
        Self::scalar(spec, n, &spec.one())
    }

    pub fn scalar(spec: FieldSpec, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
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

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.spec, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        if self.spec != rhs.spec {
            return Err(LinalgError::FieldMismatch(self.spec, rhs.spec));
        }
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.spec, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Matrix,
        f: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> Result<Matrix, LinalgError> {
        if self.spec != rhs.spec {
            return Err(LinalgError::FieldMismatch(self.spec, rhs.spec));
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(LinalgError::ShapeMismatch("operand shapes differ".into()));
        }
        Ok(Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix {
            spec: self.spec,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// `self - c*I`.
    pub fn shift(&self, c: &FieldElement) -> Matrix {
        assert!(self.is_square(), "shift of a non-square matrix");
        let mut m = self.clone();
        for i in 0..self.rows {
            m[(i, i)] = &m[(i, i)] - c;
        }
        m
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols, "vector length does not match columns");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.spec.zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination on `[M | I]`; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| {
                    if i == j {
                        self.spec.one()
                    } else {
                        self.spec.zero()
                    }
                }));
                r
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let inv = aug[col][col].inv().ok()?;
            for x in aug[col].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x = &*x - &(&f * p);
                    }
                }
            }
        }
        Some(Matrix::from_fn(self.spec, n, n, |i, j| aug[i][n + j].clone()))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Matrix]) -> Result<Matrix, LinalgError> {
        let spec = blocks.first().ok_or_else(|| LinalgError::ShapeMismatch("no blocks".into()))?.spec;
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = Matrix::zeros(spec, n, n);
        let mut off = 0;
        for b in blocks {
            if b.spec != spec {
                return Err(LinalgError::FieldMismatch(spec, b.spec));
            }
            if !b.is_square() {
                return Err(LinalgError::NotSquare(b.rows, b.cols));
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.spec, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{}>[", self.spec)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let q = FieldSpec::rationals();
        let m = Matrix::from_i64(q, &[&[2, 1], &[7, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(q, 2));
        let f3 = FieldSpec::prime(3).unwrap();
        let s = Matrix::from_i64(f3, &[&[1, 2], &[2, 1]]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn shapes_checked() {
        let q = FieldSpec::rationals();
        let a = Matrix::zeros(q, 2, 3);
        assert!(a.checked_mul(&a).is_err());
        assert!(Matrix::from_i64(q, &[&[1, 2], &[3]]).is_err());
        let f5 = FieldSpec::prime(5).unwrap();
        assert!(matches!(
            a.checked_add(&Matrix::zeros(f5, 2, 3)),
            Err(LinalgError::FieldMismatch(..))
        ));
    }

    #[test]
    fn direct_sum_blocks() {
        let q = FieldSpec::rationals();
        let a = Matrix::from_i64(q, &[&[1]]).unwrap();
        let b = Matrix::from_i64(q, &[&[2, 3], &[4, 5]]).unwrap();
        let s = Matrix::direct_sum(&[a, b]).unwrap();
        assert_eq!(s, Matrix::from_i64(q, &[&[1, 0, 0], &[0, 2, 3], &[0, 4, 5]]).unwrap());
    }
}
