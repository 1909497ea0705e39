use std::fmt;

use super::Scalar;
use crate::error::{Error, Result};

/// A sparse exact matrix stored row by row.
///
/// Each row is a list of `(column, value)` pairs, sorted by column, with no
/// explicit zeros; equality is therefore exact matrix equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, S)>>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                write!(f, " ({i},{j})={x:?}")?;
            }
        }
        write!(f, " ]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, S::one())
    }

    pub fn scalar(n: usize, s: S) -> Self {
        if s.is_zero() {
            return Self::zero(n, n);
        }
        Matrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, s.clone())]).collect() }
    }

    /// Build from possibly unsorted, possibly repeated entries per row;
    /// repeated entries are summed and zeros dropped.
    pub fn from_row_entries(rows: usize, cols: usize, entries: Vec<Vec<(usize, S)>>) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let data = entries.into_iter().map(|r| normalize_row(r, cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn from_dense(rows: usize, cols: usize, dense: Vec<Vec<S>>) -> Result<Self> {
        if dense.len() != rows || dense.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch(format!("expected a {rows}x{cols} array")));
        }
        let data = dense
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        Ok(Matrix { rows, cols, data })
    }

    /// Convenience constructor from small integer rows.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let dense = rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect();
        Self::from_dense(rows.len(), cols, dense).expect("rectangular rows")
    }

    /// Like [`Matrix::from_i64`] but with an explicit shape, so empty
    /// matrices keep their dimensions.
    pub fn from_i64_shaped(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        let dense = (0..rows)
            .map(|i| (0..cols).map(|j| S::from_i64(values[i * cols + j])).collect())
            .collect();
        Self::from_dense(rows, cols, dense).expect("shape")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, S)] {
        &self.data[i]
    }

    pub fn row_data(&self) -> &[Vec<(usize, S)>] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self.data.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![S::zero(); self.cols];
                for (j, x) in r {
                    d[*j] = x.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j].push((i, x.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc: Vec<(usize, S)> = Vec::new();
                for (k, x) in r {
                    for (j, y) in &other.data[*k] {
                        acc.push((*j, x.clone() * y.clone()));
                    }
                }
                normalize_row(acc, other.cols)
            })
            .collect();
        Ok(Matrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_rows(a, b, |x, y| x + y))
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_rows(a, b, |x, y| x - y))
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, x)| (*j, x.clone() * s.clone())).collect())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut data = self.data.clone();
        for r in &other.data {
            data.push(r.iter().map(|(j, x)| (j + self.cols, x.clone())).collect());
        }
        Matrix { rows: self.rows + other.rows, cols: self.cols + other.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack with different row counts".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|(j, x)| (j + self.cols, x.clone()))).collect())
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols + other.cols, data })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack with different column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// The submatrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_new = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_new[c] = k;
        }
        let data = rows
            .iter()
            .map(|&i| {
                let mut r: Vec<(usize, S)> = self.data[i]
                    .iter()
                    .filter(|(j, _)| col_new[*j] != usize::MAX)
                    .map(|(j, x)| (col_new[*j], x.clone()))
                    .collect();
                r.sort_by_key(|(j, _)| *j);
                r
            })
            .collect();
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Columns `start..start+len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> Self {
        let cols: Vec<usize> = (start..start + len).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &cols)
    }

    /// Convert entries into another scalar ring.
    pub fn convert<T: Scalar>(&self) -> Result<Matrix<T>> {
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, x)| Ok((*j, T::from_rational(&x.to_rational())?))).collect())
            .collect::<Result<_>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// Entries as strings (integers or `p/q`), row-major dense.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.to_dense().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

fn normalize_row<S: Scalar>(mut r: Vec<(usize, S)>, cols: usize) -> Vec<(usize, S)> {
    debug_assert!(r.iter().all(|(j, _)| *j < cols));
    r.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, S)> = Vec::with_capacity(r.len());
    for (j, x) in r {
        match out.last_mut() {
            Some((k, y)) if *k == j => *y = y.clone() + x,
            _ => out.push((j, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

fn merge_rows<S: Scalar>(a: &[(usize, S)], b: &[(usize, S)], op: impl Fn(S, S) -> S) -> Vec<(usize, S)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let (j, v) = if k == b.len() || (i < a.len() && a[i].0 < b[k].0) {
            i += 1;
            (a[i - 1].0, op(a[i - 1].1.clone(), S::zero()))
        } else if i == a.len() || b[k].0 < a[i].0 {
            k += 1;
            (b[k - 1].0, op(S::zero(), b[k - 1].1.clone()))
        } else {
            i += 1;
            k += 1;
            (a[i - 1].0, op(a[i - 1].1.clone(), b[k - 1].1.clone()))
        };
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    out
}
