//! Coefficient systems on `Δ/C`.
//!
//! A covariant system `T: Δ/C → Mod` assigns a free module to every simplex
//! and a matrix `T(σ): T(g∘σ) → T(g)` to every simplex morphism; a
//! contravariant one assigns `T(σ)^*: T(g) → T(g∘σ)`. Two finite
//! representations are supported:
//!
//! - pulled back along the ladder `Δ/C → FC → C^op×C → C → G → 𝟙` from a
//!   diagram on one of those categories (fully coherent, any dimension);
//! - explicit tables up to a dimension `N` holding coface maps only.
//!
//! A contravariant pulled-back system stores a covariant diagram on the
//! opposite index category; indices are shared with the index category.

mod morphism;

#[cfg(test)]
mod tests;

pub use morphism::{CoeffMorphism, Tau};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Diagram, Matrix, Scalar};
use crate::fincat::{Factorization, FinCat, FinFunctor, MorId, ObjId};
use crate::simplex::{delta_u, nu_morphism, nu_object, Nerve, OrderMap, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Variance::Covariant => "covariant",
            Variance::Contravariant => "contravariant",
        }
    }
}

/// The five classical coefficient families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// Diagrams on the factorization category `FC`.
    BauesWirsching,
    /// Diagrams on `C^op × C`.
    Bimodule,
    /// Diagrams on `C` (evaluated at the top vertex `C₀`).
    Module,
    /// Diagrams on a groupoid `G` receiving `q: C → G`.
    Local,
    /// A single module with identity maps.
    Trivial,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::BauesWirsching => "baues_wirsching",
            Kind::Bimodule => "bimodule",
            Kind::Module => "module",
            Kind::Local => "local",
            Kind::Trivial => "trivial",
        };
        f.write_str(s)
    }
}

/// Which family to pull back from; `Local` carries its functor `q`.
#[derive(Clone, Debug)]
pub enum KindSpec {
    BauesWirsching,
    Bimodule,
    Module,
    Local(FinFunctor),
    Trivial,
}

impl KindSpec {
    pub fn kind(&self) -> Kind {
        match self {
            KindSpec::BauesWirsching => Kind::BauesWirsching,
            KindSpec::Bimodule => Kind::Bimodule,
            KindSpec::Module => Kind::Module,
            KindSpec::Local(_) => Kind::Local,
            KindSpec::Trivial => Kind::Trivial,
        }
    }
}

/// The ladder prefix used to evaluate a pulled-back system.
#[derive(Clone, Debug)]
enum Ladder {
    BauesWirsching(Arc<Factorization>),
    Bimodule,
    Module,
    Local(FinFunctor),
    Trivial,
}

impl Ladder {
    fn new(base: &Arc<FinCat>, kind: KindSpec) -> Result<(Ladder, Arc<FinCat>)> {
        Ok(match kind {
            KindSpec::BauesWirsching => {
                let fc = Arc::new(Factorization::new(base.clone())?);
                let cat = fc.category().clone();
                (Ladder::BauesWirsching(fc), cat)
            }
            KindSpec::Bimodule => (Ladder::Bimodule, Arc::new(base.opposite().product(base))),
            KindSpec::Module => (Ladder::Module, base.clone()),
            KindSpec::Local(q) => {
                if **q.source() != **base {
                    return Err(Error::BaseMismatch);
                }
                let g = q.target();
                if let Some(m) = base.morphism_ids().find(|&m| g.inverse(q.mor(m)).is_none()) {
                    return Err(Error::NotALocalization(base.mor_name(m).to_string()));
                }
                let cat = g.clone();
                (Ladder::Local(q), cat)
            }
            KindSpec::Trivial => (Ladder::Trivial, Arc::new(FinCat::terminal())),
        })
    }

    fn kind(&self) -> Kind {
        match self {
            Ladder::BauesWirsching(_) => Kind::BauesWirsching,
            Ladder::Bimodule => Kind::Bimodule,
            Ladder::Module => Kind::Module,
            Ladder::Local(_) => Kind::Local,
            Ladder::Trivial => Kind::Trivial,
        }
    }

    fn object(&self, c: &FinCat, s: &Simplex) -> ObjId {
        match self {
            Ladder::BauesWirsching(_) => ObjId(nu_object(c, s).0),
            Ladder::Bimodule => ObjId(s.bottom(c).0 * c.num_objects() + s.top().0),
            Ladder::Module => s.top(),
            Ladder::Local(q) => q.obj(s.top()),
            Ladder::Trivial => ObjId(0),
        }
    }

    fn morphism(&self, c: &FinCat, sigma: &OrderMap, g: &Simplex) -> MorId {
        let (alpha, beta) = nu_morphism(c, sigma, g);
        match self {
            Ladder::BauesWirsching(fc) => {
                let nu_f = g.segment(c, sigma.value(0), sigma.value(sigma.source_dim()));
                fc.morphism(nu_f, alpha, beta).expect("ν sends simplex morphisms to FC morphisms")
            }
            Ladder::Bimodule => MorId(alpha.0 * c.num_morphisms() + beta.0),
            Ladder::Module => beta,
            Ladder::Local(q) => q.mor(beta),
            Ladder::Trivial => MorId(0),
        }
    }
}

/// A system pulled back along the ladder from a diagram on its index category.
#[derive(Clone, Debug)]
pub struct PulledBack<S> {
    ladder: Ladder,
    data: Diagram<S>,
}

impl<S: Scalar> PulledBack<S> {
    pub fn kind(&self) -> Kind {
        self.ladder.kind()
    }

    /// The diagram (on the index category, or its opposite when contravariant).
    pub fn data(&self) -> &Diagram<S> {
        &self.data
    }

    /// The factorization category, for Baues–Wirsching systems.
    pub fn factorization(&self) -> Option<&Arc<Factorization>> {
        match &self.ladder {
            Ladder::BauesWirsching(fc) => Some(fc),
            _ => None,
        }
    }

    /// The localization functor, for local systems.
    pub fn localization(&self) -> Option<&FinFunctor> {
        match &self.ladder {
            Ladder::Local(q) => Some(q),
            _ => None,
        }
    }
}

/// Explicit coface tables for simplices of dimension `≤ max_dim`, indexed
/// in nerve order. `cofaces[n][k][i]` is the map for coface `δ^i` at the
/// `k`-th `n`-simplex `g`: `T(g∘δ^i) → T(g)` (covariant) or
/// `T(g) → T(g∘δ^i)` (contravariant).
#[derive(Clone, Debug)]
pub struct Truncated<S> {
    max_dim: usize,
    ranks: Vec<Vec<usize>>,
    cofaces: Vec<Vec<Vec<Matrix<S>>>>,
}

impl<S: Scalar> Truncated<S> {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn ranks(&self) -> &[Vec<usize>] {
        &self.ranks
    }

    pub fn cofaces(&self) -> &[Vec<Vec<Matrix<S>>>] {
        &self.cofaces
    }
}

#[derive(Clone, Debug)]
pub enum Representation<S> {
    PulledBack(PulledBack<S>),
    Truncated(Truncated<S>),
}

/// A coefficient system on `Δ/C` with free values.
#[derive(Clone, Debug)]
pub struct CoeffSystem<S> {
    base: Arc<FinCat>,
    nerve: Arc<Nerve>,
    variance: Variance,
    repr: Representation<S>,
}

/// Build a pulled-back system from ranks and matrices on the index category
/// of `kind` (its opposite when contravariant), indexed like that category.
pub fn pullback_system<S: Scalar>(
    base: Arc<FinCat>,
    kind: KindSpec,
    variance: Variance,
    ranks: Vec<usize>,
    maps: Vec<Matrix<S>>,
) -> Result<CoeffSystem<S>> {
    CoeffSystem::pullback(base, kind, variance, ranks, maps)
}

/// Build and validate a truncated system; see [`Truncated`] for the layout.
pub fn truncated_system<S: Scalar>(
    base: Arc<FinCat>,
    variance: Variance,
    max_dim: usize,
    ranks: Vec<Vec<usize>>,
    cofaces: Vec<Vec<Vec<Matrix<S>>>>,
) -> Result<CoeffSystem<S>> {
    CoeffSystem::truncated(base, variance, max_dim, ranks, cofaces)
}

impl<S: Scalar> CoeffSystem<S> {
    /// The category on which data for `kind` lives (before taking opposites).
    pub fn index_category(base: &Arc<FinCat>, kind: KindSpec) -> Result<Arc<FinCat>> {
        Ok(Ladder::new(base, kind)?.1)
    }

    pub fn pullback(
        base: Arc<FinCat>,
        kind: KindSpec,
        variance: Variance,
        ranks: Vec<usize>,
        maps: Vec<Matrix<S>>,
    ) -> Result<Self> {
        let (ladder, index) = Ladder::new(&base, kind)?;
        let index = match variance {
            Variance::Covariant => index,
            Variance::Contravariant => Arc::new(index.opposite()),
        };
        let data = Diagram::new(index, ranks, maps).map_err(|e| match e {
            Error::NonFunctorialDiagram(m) => Error::NonFunctorialData(m),
            e => e,
        })?;
        Ok(Self::from_parts(base, variance, Representation::PulledBack(PulledBack { ladder, data })))
    }

    /// Like [`CoeffSystem::pullback`] with a prebuilt diagram, whose category
    /// must be the index category (or its opposite when contravariant).
    pub fn from_diagram(base: Arc<FinCat>, kind: KindSpec, variance: Variance, data: Diagram<S>) -> Result<Self> {
        let (ladder, index) = Ladder::new(&base, kind)?;
        let expected = match variance {
            Variance::Covariant => (*index).clone(),
            Variance::Contravariant => index.opposite(),
        };
        if **data.category() != expected {
            return Err(Error::BaseMismatch);
        }
        Ok(Self::from_parts(base, variance, Representation::PulledBack(PulledBack { ladder, data })))
    }

    /// The constant system with value `S^rank` and identity maps.
    pub fn constant(base: Arc<FinCat>, rank: usize, variance: Variance) -> Self {
        let data = Diagram::constant(Arc::new(FinCat::terminal()), rank);
        Self::from_parts(base, variance, Representation::PulledBack(PulledBack { ladder: Ladder::Trivial, data }))
    }

    pub fn truncated(
        base: Arc<FinCat>,
        variance: Variance,
        max_dim: usize,
        ranks: Vec<Vec<usize>>,
        cofaces: Vec<Vec<Vec<Matrix<S>>>>,
    ) -> Result<Self> {
        let nerve = Arc::new(Nerve::new(base.clone()));
        validate_truncated(&base, &nerve, variance, max_dim, &ranks, &cofaces)?;
        Ok(CoeffSystem {
            base,
            nerve,
            variance,
            repr: Representation::Truncated(Truncated { max_dim, ranks, cofaces }),
        })
    }

    fn from_parts(base: Arc<FinCat>, variance: Variance, repr: Representation<S>) -> Self {
        let nerve = Arc::new(Nerve::new(base.clone()));
        CoeffSystem { base, nerve, variance, repr }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    /// The (memoized) nerve of the base category.
    pub fn nerve(&self) -> &Arc<Nerve> {
        &self.nerve
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn representation(&self) -> &Representation<S> {
        &self.repr
    }

    pub fn kind(&self) -> Option<Kind> {
        match &self.repr {
            Representation::PulledBack(p) => Some(p.kind()),
            Representation::Truncated(_) => None,
        }
    }

    pub fn pulled_back(&self) -> Option<&PulledBack<S>> {
        match &self.repr {
            Representation::PulledBack(p) => Some(p),
            Representation::Truncated(_) => None,
        }
    }

    /// Highest dimension with data (`None` when unbounded).
    pub fn max_dim(&self) -> Option<usize> {
        match &self.repr {
            Representation::PulledBack(_) => None,
            Representation::Truncated(t) => Some(t.max_dim),
        }
    }

    /// Truncated systems only define semi-cosimplicial data; results assume
    /// the tables extend to a full system on `Δ/C`.
    pub fn assumes_extension(&self) -> bool {
        matches!(self.repr, Representation::Truncated(_))
    }

    pub fn require_variance(&self, v: Variance) -> Result<()> {
        if self.variance != v {
            return Err(Error::VarianceMismatch { expected: v.name() });
        }
        Ok(())
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        match self.max_dim() {
            Some(max_dim) if dim > max_dim => Err(Error::BeyondTruncation { dim, max_dim }),
            _ => Ok(()),
        }
    }

    fn level_index(&self, s: &Simplex) -> usize {
        self.nerve.level(s.dim()).index_of(s).expect("simplex of the base category")
    }

    /// The rank of `T(s)`.
    pub fn evaluate(&self, s: &Simplex) -> Result<usize> {
        self.check_dim(s.dim())?;
        Ok(match &self.repr {
            Representation::PulledBack(p) => p.data.rank(p.ladder.object(&self.base, s)),
            Representation::Truncated(t) => t.ranks[s.dim()][self.level_index(s)],
        })
    }

    /// The structure map of `σ: g∘σ → g`: `T(g∘σ) → T(g)` when covariant,
    /// `T(g) → T(g∘σ)` when contravariant.
    pub fn induced_map(&self, sigma: &OrderMap, g: &Simplex) -> Result<Matrix<S>> {
        if sigma.target_dim() != g.dim() {
            return Err(Error::InvalidSimplexMorphism(format!("{sigma} applied to a {}-simplex", g.dim())));
        }
        self.check_dim(g.dim())?;
        match &self.repr {
            Representation::PulledBack(p) => Ok(p.data.map(p.ladder.morphism(&self.base, sigma, g)).clone()),
            Representation::Truncated(t) => self.truncated_map(t, sigma, g),
        }
    }

    /// The structure map of the coface `δ^i: g∘δ^i → g`.
    pub fn coface_map(&self, i: usize, g: &Simplex) -> Result<Matrix<S>> {
        if let Representation::Truncated(t) = &self.repr {
            self.check_dim(g.dim())?;
            return Ok(t.cofaces[g.dim()][self.level_index(g)][i].clone());
        }
        self.induced_map(&OrderMap::coface(i, g.dim() - 1), g)
    }

    fn truncated_map(&self, t: &Truncated<S>, sigma: &OrderMap, g: &Simplex) -> Result<Matrix<S>> {
        if !sigma.is_injective() {
            return Err(Error::MissingDegeneracyData(sigma.values().to_vec()));
        }
        let c = &*self.base;
        let n = g.dim();
        let Some(j) = (0..=n).rev().find(|v| !sigma.values().contains(v)) else {
            return Ok(Matrix::identity(self.evaluate(g)?));
        };
        // σ = δ^j ∘ σ' with σ' skipping nothing above j
        let rest = OrderMap::new(sigma.values().iter().map(|&v| if v > j { v - 1 } else { v }).collect(), n - 1)?;
        let face = g.face(c, j);
        let here = t.cofaces[n][self.level_index(g)][j].clone();
        let below = self.truncated_map(t, &rest, &face)?;
        match self.variance {
            Variance::Covariant => here.mul(&below),
            Variance::Contravariant => below.mul(&here),
        }
    }

    /// Sample the coface tables up to `max_dim`.
    pub fn sample_truncated(&self, max_dim: usize) -> Result<Self> {
        let mut ranks = Vec::with_capacity(max_dim + 1);
        let mut cofaces = Vec::with_capacity(max_dim + 1);
        for n in 0..=max_dim {
            let level = self.nerve.level(n);
            ranks.push(level.simplices().iter().map(|s| self.evaluate(s)).collect::<Result<Vec<_>>>()?);
            cofaces.push(
                level
                    .simplices()
                    .iter()
                    .map(|g| (0..=n).filter(|_| n > 0).map(|i| self.coface_map(i, g)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        Self::truncated(self.base.clone(), self.variance, max_dim, ranks, cofaces)
    }

    /// The system of opposite variance with transposed structure maps.
    pub fn dual(&self) -> Self {
        let repr = match &self.repr {
            Representation::PulledBack(p) => {
                Representation::PulledBack(PulledBack { ladder: p.ladder.clone(), data: p.data.dual() })
            }
            Representation::Truncated(t) => Representation::Truncated(Truncated {
                max_dim: t.max_dim,
                ranks: t.ranks.clone(),
                cofaces: t.cofaces.iter().map(|l| l.iter().map(|g| g.iter().map(Matrix::transpose).collect()).collect()).collect(),
            }),
        };
        CoeffSystem { base: self.base.clone(), nerve: self.nerve.clone(), variance: self.variance.flip(), repr }
    }

    /// Change of rings.
    pub fn convert<T: Scalar>(&self) -> Result<CoeffSystem<T>> {
        let repr = match &self.repr {
            Representation::PulledBack(p) => {
                Representation::PulledBack(PulledBack { ladder: p.ladder.clone(), data: p.data.convert()? })
            }
            Representation::Truncated(t) => Representation::Truncated(Truncated {
                max_dim: t.max_dim,
                ranks: t.ranks.clone(),
                cofaces: t
                    .cofaces
                    .iter()
                    .map(|l| l.iter().map(|g| g.iter().map(|m| m.convert()).collect()).collect::<Result<_>>())
                    .collect::<Result<_>>()?,
            }),
        };
        Ok(CoeffSystem { base: self.base.clone(), nerve: self.nerve.clone(), variance: self.variance, repr })
    }

    /// The restriction `T∘Δ/i` along `i: D → C`.
    pub fn restrict(&self, i: &FinFunctor) -> Result<Self> {
        if **i.target() != *self.base {
            return Err(Error::BaseMismatch);
        }
        let d = i.source().clone();
        let along = |f: FinFunctor| match self.variance {
            Variance::Covariant => f,
            Variance::Contravariant => f.opposite(),
        };
        match &self.repr {
            Representation::PulledBack(p) => {
                let (ladder, data) = match &p.ladder {
                    Ladder::Trivial => (Ladder::Trivial, p.data.clone()),
                    Ladder::Local(q) => (Ladder::Local(i.then(q)?), p.data.clone()),
                    Ladder::Module => (Ladder::Module, p.data.pullback(&along(i.clone()))?),
                    Ladder::Bimodule => (Ladder::Bimodule, p.data.pullback(&along(i.opposite().product(i)))?),
                    Ladder::BauesWirsching(fc) => {
                        let fd = Arc::new(Factorization::new(d.clone())?);
                        let fi = fd.induced(i, fc);
                        (Ladder::BauesWirsching(fd), p.data.pullback(&along(fi))?)
                    }
                };
                Ok(Self::from_parts(d, self.variance, Representation::PulledBack(PulledBack { ladder, data })))
            }
            Representation::Truncated(t) => {
                let nerve = Nerve::new(d.clone());
                let mut ranks = Vec::new();
                let mut cofaces = Vec::new();
                for n in 0..=t.max_dim {
                    let level = nerve.level(n);
                    let images: Vec<Simplex> = level.simplices().iter().map(|s| delta_u(i, s)).collect();
                    ranks.push(images.iter().map(|s| self.evaluate(s)).collect::<Result<Vec<_>>>()?);
                    cofaces.push(
                        images
                            .iter()
                            .map(|g| (0..=n).filter(|_| n > 0).map(|k| self.coface_map(k, g)).collect::<Result<Vec<_>>>())
                            .collect::<Result<Vec<_>>>()?,
                    );
                }
                Self::truncated(d, self.variance, t.max_dim, ranks, cofaces)
            }
        }
    }
}

fn validate_truncated<S: Scalar>(
    base: &FinCat,
    nerve: &Nerve,
    variance: Variance,
    max_dim: usize,
    ranks: &[Vec<usize>],
    cofaces: &[Vec<Vec<Matrix<S>>>],
) -> Result<()> {
    if ranks.len() != max_dim + 1 || cofaces.len() != max_dim + 1 {
        return Err(Error::IncompleteTables(format!("expected tables for dimensions 0..={max_dim}")));
    }
    for n in 0..=max_dim {
        let level = nerve.level(n);
        if ranks[n].len() != level.len() || cofaces[n].len() != level.len() {
            return Err(Error::IncompleteTables(format!(
                "dimension {n} has {} simplices but {} ranks and {} coface lists",
                level.len(),
                ranks[n].len(),
                cofaces[n].len()
            )));
        }
        for (k, g) in level.simplices().iter().enumerate() {
            let expected = if n == 0 { 0 } else { n + 1 };
            if cofaces[n][k].len() != expected {
                return Err(Error::IncompleteTables(format!(
                    "simplex {} needs {expected} coface maps, has {}",
                    g.key(base),
                    cofaces[n][k].len()
                )));
            }
            for (i, m) in cofaces[n][k].iter().enumerate() {
                let face = g.face(base, i);
                let r_face = ranks[n - 1][nerve.level(n - 1).index_of(&face).expect("face in nerve")];
                let (rows, cols) = match variance {
                    Variance::Covariant => (ranks[n][k], r_face),
                    Variance::Contravariant => (r_face, ranks[n][k]),
                };
                if m.rows() != rows || m.cols() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "coface {i} at simplex {} is {}x{}, expected {rows}x{cols}",
                        g.key(base),
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
    }
    // δ^j∘δ^i = δ^i∘δ^{j−1} for i < j
    let coface = |g: &Simplex, i: usize| -> &Matrix<S> {
        let n = g.dim();
        &cofaces[n][nerve.level(n).index_of(g).expect("simplex in nerve")][i]
    };
    for n in 2..=max_dim {
        for g in nerve.level(n).simplices() {
            for j in 1..=n {
                for i in 0..j {
                    let (gj, gi) = (g.face(base, j), g.face(base, i));
                    let (lhs, rhs) = match variance {
                        Variance::Covariant => {
                            (coface(g, j).mul(coface(&gj, i))?, coface(g, i).mul(coface(&gi, j - 1))?)
                        }
                        Variance::Contravariant => {
                            (coface(&gj, i).mul(coface(g, j))?, coface(&gi, j - 1).mul(coface(g, i))?)
                        }
                    };
                    if lhs != rhs {
                        return Err(Error::CofaceRelationViolation { simplex: g.key(base), i, j });
                    }
                }
            }
        }
    }
    Ok(())
}
