//! Exact linear algebra over ℤ and ℚ.
//!
//! Matrices follow one convention throughout the crate: **columns index the
//! source basis and rows index the target basis**, so a map `A: ℤⁿ → ℤᵐ` is
//! an `m × n` matrix and composition `B∘A` is the product `B·A`.

mod complex;
mod diagram;
mod matrix;
mod rational;
mod scalar;
mod snf;


pub use complex::{complex_homology, IntComplex, Orientation, TruncatedHomology};
pub use diagram::{finite_colimit, finite_limit, Colimit, Diagram, Limit};
pub use matrix::Matrix;
pub use rational::{integer_kernel, rank, HomologyBasis};
pub use scalar::{RingTag, Scalar, Z, Q};
pub use snf::{invariant_factors, smith_normal_form, Smith};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A finitely generated abelian group `ℤ^r ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/d_k` in
/// invariant-factor form (`d₁ | d₂ | …`, all `dᵢ > 1`), or a ℚ-vector
/// space of dimension `r` (torsion empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> HomologyGroup {
        HomologyGroup::default()
    }

    pub fn free(rank: usize) -> HomologyGroup {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn new(free_rank: usize, torsion: impl IntoIterator<Item = i64>) -> HomologyGroup {
        HomologyGroup { free_rank, torsion: torsion.into_iter().map(BigInt::from).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Assemble from the free rank and a list of invariant factors of a
    /// presentation matrix; units and zeros are dropped.
    pub(crate) fn from_factors(free_rank: usize, factors: &[BigInt]) -> HomologyGroup {
        let mut torsion: Vec<BigInt> = factors
            .iter()
            .map(num_traits::Signed::abs)
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect();
        torsion.sort();
        HomologyGroup { free_rank, torsion }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TorsionEntry {
    Small(u64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct HomologyRepr {
    free_rank: usize,
    torsion: Vec<TorsionEntry>,
}

impl Serialize for HomologyGroup {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let torsion = self
            .torsion
            .iter()
            .map(|d| match u64::try_from(d) {
                Ok(v) => TorsionEntry::Small(v),
                Err(_) => TorsionEntry::Big(d.to_string()),
            })
            .collect();
        HomologyRepr { free_rank: self.free_rank, torsion }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomologyGroup {
    fn deserialize<De: Deserializer<'de>>(d: De) -> Result<Self, De::Error> {
        let repr = HomologyRepr::deserialize(d)?;
        let torsion = repr
            .torsion
            .into_iter()
            .map(|t| match t {
                TorsionEntry::Small(v) => Ok(BigInt::from(v)),
                TorsionEntry::Big(s) => s.parse::<BigInt>().map_err(serde::de::Error::custom),
            })
            .collect::<Result<_, _>>()?;
        Ok(HomologyGroup { free_rank: repr.free_rank, torsion })
    }
}
