use std::sync::Arc;

use super::rational::integer_kernel;
use super::snf::invariant_factors_of_rows;
use super::{HomologyGroup, Matrix, RingTag, Scalar};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, MorId, ObjId};

/// A covariant functor from a finite category to free modules: a rank per
/// object and a matrix per morphism (columns = source basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram<S> {
    cat: Arc<FinCat>,
    ranks: Vec<usize>,
    maps: Vec<Matrix<S>>,
}

impl<S: Scalar> Diagram<S> {
    /// Validate shapes and functoriality.
    pub fn new(cat: Arc<FinCat>, ranks: Vec<usize>, maps: Vec<Matrix<S>>) -> Result<Self> {
        if ranks.len() != cat.num_objects() || maps.len() != cat.num_morphisms() {
            return Err(Error::DimensionMismatch("diagram must give one rank per object and one map per morphism".into()));
        }
        for m in cat.morphism_ids() {
            let a = &maps[m.0];
            let (s, d) = (ranks[cat.src(m).0], ranks[cat.dst(m).0]);
            if a.rows() != d || a.cols() != s {
                return Err(Error::DimensionMismatch(format!(
                    "map for `{}` is {}x{}, expected {d}x{s}",
                    cat.mor_name(m),
                    a.rows(),
                    a.cols()
                )));
            }
        }
        let diagram = Diagram { cat, ranks, maps };
        diagram.check_functorial()?;
        Ok(diagram)
    }

    fn check_functorial(&self) -> Result<()> {
        let c = &*self.cat;
        for x in c.object_ids() {
            if !self.maps[c.identity(x).0].is_identity() {
                return Err(Error::NonFunctorialDiagram(format!(
                    "identity of `{}` is not sent to the identity",
                    c.obj_name(x)
                )));
            }
        }
        for f in c.morphism_ids() {
            for &g in c.outgoing(c.dst(f)) {
                let gf = c.compose_unchecked(g, f);
                if self.maps[g.0].mul(&self.maps[f.0])? != self.maps[gf.0] {
                    return Err(Error::NonFunctorialDiagram(format!(
                        "F({}∘{}) ≠ F({})·F({})",
                        c.mor_name(g),
                        c.mor_name(f),
                        c.mor_name(g),
                        c.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The constant diagram with identity maps.
    pub fn constant(cat: Arc<FinCat>, rank: usize) -> Self {
        let ranks = vec![rank; cat.num_objects()];
        let maps = vec![Matrix::identity(rank); cat.num_morphisms()];
        Diagram { cat, ranks, maps }
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn rank(&self, x: ObjId) -> usize {
        self.ranks[x.0]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn map(&self, m: MorId) -> &Matrix<S> {
        &self.maps[m.0]
    }

    pub fn maps(&self) -> &[Matrix<S>] {
        &self.maps
    }

    /// `self ∘ f` for a functor `f` into this diagram's category.
    pub fn pullback(&self, f: &FinFunctor) -> Result<Self> {
        if **f.target() != *self.cat {
            return Err(Error::NotAFunctor("pullback along a functor with a different target".into()));
        }
        Ok(Diagram {
            cat: f.source().clone(),
            ranks: f.obj_map().iter().map(|&x| self.ranks[x.0]).collect(),
            maps: f.mor_map().iter().map(|&m| self.maps[m.0].clone()).collect(),
        })
    }

    /// The transposed diagram on the opposite category.
    pub fn dual(&self) -> Self {
        Diagram {
            cat: Arc::new(self.cat.opposite()),
            ranks: self.ranks.clone(),
            maps: self.maps.iter().map(Matrix::transpose).collect(),
        }
    }

    pub fn convert<T: Scalar>(&self) -> Result<Diagram<T>> {
        Ok(Diagram {
            cat: self.cat.clone(),
            ranks: self.ranks.clone(),
            maps: self.maps.iter().map(|m| m.convert()).collect::<Result<_>>()?,
        })
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.ranks.len() + 1);
        let mut acc = 0;
        for &r in &self.ranks {
            off.push(acc);
            acc += r;
        }
        off.push(acc);
        off
    }

    /// The map `∏_j F(j) → ∏_{m: j→j'} F(j')`, `x ↦ (F(m)x_j − x_{j'})_m`,
    /// over non-identity morphisms.
    fn limit_difference(&self) -> Matrix<S> {
        let c = &*self.cat;
        let off = self.offsets();
        let mut rows: Vec<Vec<(usize, S)>> = Vec::new();
        for m in c.morphism_ids().filter(|&m| !c.is_identity(m)) {
            let (s, d) = (c.src(m).0, c.dst(m).0);
            let a = &self.maps[m.0];
            for i in 0..self.ranks[d] {
                let mut row: Vec<(usize, S)> = a.row(i).iter().map(|(j, x)| (off[s] + j, x.clone())).collect();
                row.push((off[d] + i, -S::one()));
                rows.push(row);
            }
        }
        Matrix::from_row_entries(rows.len(), off[self.ranks.len()], rows)
    }

    /// The map `⊕_{m: j→j'} F(j) → ⊕_j F(j)`, `x_m ↦ F(m)x_m − x_m`.
    fn colimit_difference(&self) -> Matrix<S> {
        self.dual().limit_difference().transpose()
    }
}

/// A limit of free modules: a free module with a basis and its cone maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limit<S> {
    pub group: HomologyGroup,
    /// Columns: a basis of the limit inside `⊕_j F(j)`.
    pub basis: Matrix<S>,
    /// Projection `lim → F(j)` for every object `j`.
    pub projections: Vec<Matrix<S>>,
}

/// A colimit of free modules, given by its presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colimit<S> {
    pub group: HomologyGroup,
    /// The relation matrix whose cokernel is the colimit.
    pub relations: Matrix<S>,
}

/// The limit of `diagram` as the kernel of the difference map.
pub fn finite_limit<S: Scalar>(diagram: &Diagram<S>) -> Limit<S> {
    let diff = diagram.limit_difference();
    let basis = integer_kernel(&diff);
    let off = diagram.offsets();
    let all: Vec<usize> = (0..basis.cols()).collect();
    let projections = (0..diagram.ranks.len())
        .map(|j| basis.select(&(off[j]..off[j + 1]).collect::<Vec<_>>(), &all))
        .collect();
    Limit { group: HomologyGroup::free(basis.cols()), basis, projections }
}

/// The colimit of `diagram` as the cokernel of the difference map.
pub fn finite_colimit<S: Scalar>(diagram: &Diagram<S>) -> Colimit<S> {
    let rel = diagram.colimit_difference();
    let rows = rel.row_data().iter().map(|r| S::integer_row(r)).collect::<Vec<_>>();
    // row scaling over ℚ keeps the rank; over ℤ rows are unchanged
    let factors = invariant_factors_of_rows(rows, rel.cols());
    let free = rel.rows() - factors.len();
    let group = match S::RING {
        RingTag::Integers => HomologyGroup::from_factors(free, &factors),
        RingTag::Rationals => HomologyGroup::free(free),
    };
    Colimit { group, relations: rel }
}
