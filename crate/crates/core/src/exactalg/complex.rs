use serde::{Deserialize, Serialize};

use super::rational::{rank, HomologyBasis};
use super::snf::invariant_factors_of_rows;
use super::{HomologyGroup, Matrix, RingTag, Scalar, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    /// `diffs[k]` maps degree `k` to degree `k + 1`.
    Cochain,
    /// `diffs[k]` maps degree `k + 1` to degree `k`.
    Chain,
}

/// A bounded complex of free modules in degrees `0..=top`.
///
/// `diffs[k]` connects degrees `k` and `k + 1` in the direction given by the
/// orientation; `d∘d = 0` is verified on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntComplex<S> {
    orientation: Orientation,
    dims: Vec<usize>,
    diffs: Vec<Matrix<S>>,
}

/// A homology group together with the truncation flag: the top degree of a
/// complex lacks the map out of it (cochain) or into it (chain), so its
/// group may be wrong for the untruncated complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedHomology {
    pub group: HomologyGroup,
    pub upper_truncation_unsafe: bool,
}

impl<S: Scalar> IntComplex<S> {
    pub fn new(orientation: Orientation, dims: Vec<usize>, diffs: Vec<Matrix<S>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::DimensionMismatch("a complex needs at least degree 0".into()));
        }
        if diffs.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            let (r, c) = match orientation {
                Orientation::Cochain => (dims[k + 1], dims[k]),
                Orientation::Chain => (dims[k], dims[k + 1]),
            };
            if d.rows() != r || d.cols() != c {
                return Err(Error::DimensionMismatch(format!(
                    "differential {k} is {}x{}, expected {r}x{c}",
                    d.rows(),
                    d.cols()
                )));
            }
        }
        let complex = IntComplex { orientation, dims, diffs };
        complex.check_square_zero()?;
        Ok(complex)
    }

    fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            let dd = match self.orientation {
                Orientation::Cochain => self.diffs[k].mul(&self.diffs[k - 1])?,
                Orientation::Chain => self.diffs[k - 1].mul(&self.diffs[k])?,
            };
            if !dd.is_zero() {
                return Err(Error::Internal(format!("d∘d ≠ 0 around degree {k}")));
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> RingTag {
        S::RING
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn diffs(&self) -> &[Matrix<S>] {
        &self.diffs
    }

    pub fn diff(&self, k: usize) -> &Matrix<S> {
        &self.diffs[k]
    }

    /// The differential arriving at degree `n`, if present.
    pub fn incoming(&self, n: usize) -> Option<&Matrix<S>> {
        match self.orientation {
            Orientation::Cochain => n.checked_sub(1).map(|k| &self.diffs[k]),
            Orientation::Chain => self.diffs.get(n),
        }
    }

    /// The differential leaving degree `n`, if present.
    pub fn outgoing(&self, n: usize) -> Option<&Matrix<S>> {
        match self.orientation {
            Orientation::Cochain => self.diffs.get(n),
            Orientation::Chain => n.checked_sub(1).map(|k| &self.diffs[k]),
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.top() {
            return Err(Error::DegreeOutOfRange { degree: n, top: self.top() });
        }
        Ok(())
    }

    /// Homology at degree `n` via Smith normal form (ℤ) or rank (ℚ).
    pub fn homology(&self, n: usize) -> Result<TruncatedHomology> {
        self.check_degree(n)?;
        let dim = self.dims[n];
        let rank_out = self.outgoing(n).map_or(0, rank);
        let factors = match self.incoming(n) {
            Some(d) => {
                let rows = d.row_data().iter().map(|r| S::integer_row(r)).collect();
                invariant_factors_of_rows(rows, d.cols())
            }
            None => Vec::new(),
        };
        let free_rank = dim - rank_out - factors.len();
        let group = match S::RING {
            RingTag::Integers => HomologyGroup::from_factors(free_rank, &factors),
            RingTag::Rationals => HomologyGroup::free(free_rank),
        };
        Ok(TruncatedHomology { group, upper_truncation_unsafe: n == self.top() })
    }

    /// Explicit rational homology basis at degree `n`.
    pub fn homology_basis(&self, n: usize) -> Result<HomologyBasis> {
        self.check_degree(n)?;
        let incoming: Option<Matrix<Q>> = self.incoming(n).map(|m| m.convert()).transpose()?;
        let outgoing: Option<Matrix<Q>> = self.outgoing(n).map(|m| m.convert()).transpose()?;
        HomologyBasis::new(self.dims[n], incoming.as_ref(), outgoing.as_ref())
    }

    /// Change of rings (e.g. ℤ → ℚ).
    pub fn convert<T: Scalar>(&self) -> Result<IntComplex<T>> {
        Ok(IntComplex {
            orientation: self.orientation,
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(|d| d.convert()).collect::<Result<_>>()?,
        })
    }

    /// The complex restricted to degrees `0..=top`.
    pub fn truncate(&self, top: usize) -> Self {
        let top = top.min(self.top());
        IntComplex {
            orientation: self.orientation,
            dims: self.dims[..=top].to_vec(),
            diffs: self.diffs[..top].to_vec(),
        }
    }

    /// The dual complex (transpose every differential, swapping orientation).
    pub fn dual(&self) -> Self {
        IntComplex {
            orientation: match self.orientation {
                Orientation::Cochain => Orientation::Chain,
                Orientation::Chain => Orientation::Cochain,
            },
            dims: self.dims.clone(),
            diffs: self.diffs.iter().map(Matrix::transpose).collect(),
        }
    }
}

/// `H^n` (cochain) or `H_n` (chain) of a bounded complex.
pub fn complex_homology<S: Scalar>(k: &IntComplex<S>, n: usize) -> Result<TruncatedHomology> {
    k.homology(n)
}
