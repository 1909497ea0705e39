//! Rank, kernels, and explicit homology bases.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::snf::{invariant_factors_of_rows, smith_normal_form};
use super::{Matrix, Scalar, Q, Z};
use crate::error::{Error, Result};

/// Rank over the fraction field (equal to the rank over ℤ for integer input).
pub fn rank<S: Scalar>(m: &Matrix<S>) -> usize {
    let rows = m.row_data().iter().map(|r| S::integer_row(r)).collect();
    invariant_factors_of_rows(rows, m.cols()).len()
}

/// A basis of the kernel of `m`, as the columns of the returned matrix.
///
/// Over ℤ the columns form a ℤ-basis of the (saturated) kernel lattice;
/// over ℚ they form a ℚ-basis.
pub fn integer_kernel<S: Scalar>(m: &Matrix<S>) -> Matrix<S> {
    let rows = m.row_data().iter().map(|r| S::integer_row(r)).collect();
    let int: Matrix<Z> = Matrix::from_row_entries(m.rows(), m.cols(), rows);
    let smith = smith_normal_form(&int);
    let n = m.cols();
    smith
        .v
        .column_block(smith.rank, n - smith.rank)
        .convert()
        .expect("integer entries embed in every ring")
}

/// Explicit representatives and a projection for `ker(out) / im(in)` over ℚ.
///
/// `reps` is `dim × h` (columns are cycles representing a basis of the
/// homology) and `proj` is `h × dim` with `proj·reps = I` and `proj·in = 0`;
/// applied to a cycle it returns that cycle's homology coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct HomologyBasis {
    pub reps: Matrix<Q>,
    pub proj: Matrix<Q>,
}

impl HomologyBasis {
    /// `incoming: C_prev → C` and `outgoing: C → C_next`; either may be
    /// absent (zero map).
    pub fn new(dim: usize, incoming: Option<&Matrix<Q>>, outgoing: Option<&Matrix<Q>>) -> Result<HomologyBasis> {
        if incoming.is_some_and(|m| m.rows() != dim) || outgoing.is_some_and(|m| m.cols() != dim) {
            return Err(Error::DimensionMismatch("homology basis maps do not meet at the middle term".into()));
        }
        let cycles = match outgoing {
            Some(d) => integer_kernel(d),
            None => Matrix::identity(dim),
        };
        let mut ech = Echelon::new(dim);
        let mut chosen: Vec<Vec<Q>> = Vec::new();
        if let Some(b) = incoming {
            let dense = b.transpose().to_dense();
            for col in dense {
                if ech.insert(&col) {
                    chosen.push(col);
                }
            }
        }
        let boundary_rank = chosen.len();
        for col in cycles.transpose().to_dense() {
            if ech.insert(&col) {
                chosen.push(col);
            }
        }
        let h = chosen.len() - boundary_rank;
        let k = chosen.len();
        // M = [boundaries | representatives], dim × k, full column rank
        let m_cols = chosen;
        let reps_dense: Vec<Vec<Q>> = (0..dim).map(|i| m_cols[boundary_rank..].iter().map(|c| c[i].clone()).collect()).collect();
        let reps = Matrix::from_dense(dim, h, reps_dense)?;
        let left = left_inverse(dim, &m_cols)?;
        let proj_dense: Vec<Vec<Q>> = left[boundary_rank..k].to_vec();
        let proj = Matrix::from_dense(h, dim, proj_dense)?;
        Ok(HomologyBasis { reps, proj })
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    /// The matrix of the map on homology induced by the chain-level map
    /// `f` from the space of `self` into the space of `target`.
    pub fn transport(&self, f: &Matrix<Q>, target: &HomologyBasis) -> Result<Matrix<Q>> {
        target.proj.mul(&f.mul(&self.reps)?)
    }
}

/// Incremental row-echelon basis of a subspace of ℚⁿ.
struct Echelon {
    rows: Vec<(usize, Vec<Q>)>,
}

impl Echelon {
    fn new(_n: usize) -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Insert `v` if it is independent of the current basis.
    fn insert(&mut self, v: &[Q]) -> bool {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = v[p].recip();
                for x in v.iter_mut() {
                    *x *= &inv;
                }
                // keep earlier rows reduced at the new pivot
                for (_, r) in self.rows.iter_mut() {
                    if !r[p].is_zero() {
                        let f = r[p].clone();
                        for (x, y) in r.iter_mut().zip(&v) {
                            if !y.is_zero() {
                                *x -= &f * y;
                            }
                        }
                    }
                }
                self.rows.push((p, v));
                true
            }
        }
    }
}

/// A left inverse `L` (k × n) of the n × k matrix whose columns are `cols`,
/// which must be linearly independent.
fn left_inverse(n: usize, cols: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let k = cols.len();
    // choose k independent coordinates (rows of M)
    let mut ech = Echelon::new(k);
    let mut picked = Vec::new();
    for i in 0..n {
        let row: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
        if ech.insert(&row) {
            picked.push(i);
            if picked.len() == k {
                break;
            }
        }
    }
    if picked.len() != k {
        return Err(Error::Internal("left inverse of a rank-deficient matrix".into()));
    }
    // invert the square submatrix by Gauss-Jordan
    let mut a: Vec<Vec<Q>> = picked
        .iter()
        .map(|&i| {
            let mut r: Vec<Q> = cols.iter().map(|c| c[i].clone()).collect();
            r.extend((0..k).map(|j| if picked[j] == i { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k)
            .find(|&r| !a[r][c].is_zero())
            .ok_or_else(|| Error::Internal("singular pivot block".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..k {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
    // a = [I | B] with B·P = M_S^{-1} arranged so column j of B is picked[j]
    let mut left = vec![vec![BigRational::zero(); n]; k];
    for (r, row) in left.iter_mut().enumerate() {
        for (j, &i) in picked.iter().enumerate() {
            row[i] = a[r][k + j].clone();
        }
    }
    Ok(left)
}
