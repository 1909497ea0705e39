//! Derived Kan extensions along functors via comma categories, and the
//! Leray-type E₂ pages they feed.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffMorphism, CoeffSystem, Kind, KindSpec, Representation, Tau, Variance};
use crate::complexes::{assemble, homology_groups, induced_chain_map, induced_cochain_map, AssembledComplex};
use crate::error::{Error, Result};
use crate::exactalg::{Diagram, HomologyGroup, Matrix, RingTag, Scalar, Q};
use crate::fincat::{Comma, FinCat, FinFunctor, ObjId};

#[cfg(test)]
mod tests;

/// Which side of the spectral sequence is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Cohomology,
    Homology,
}

impl Side {
    fn variance(self) -> Variance {
        match self {
            Side::Cohomology => Variance::Covariant,
            Side::Homology => Variance::Contravariant,
        }
    }
}

/// The functor underlying a module-type system: a diagram on `E`
/// (covariant) or on `E^op` (contravariant).
pub fn module_diagram<S: Scalar>(t: &CoeffSystem<S>) -> Result<Diagram<S>> {
    let unsupported = |k: String| {
        Error::UnsupportedCoefficientKind(format!(
            "{k}: derived Kan extensions are computed for module, local and trivial coefficients only, \
             whose comma categories over the base are finite"
        ))
    };
    let Representation::PulledBack(p) = t.representation() else {
        return Err(unsupported("truncated".into()));
    };
    let base = t.base();
    match p.kind() {
        Kind::Module => Ok(p.data().clone()),
        Kind::Local => {
            let q = p.localization().expect("local systems carry their localization");
            match t.variance() {
                Variance::Covariant => p.data().pullback(q),
                Variance::Contravariant => p.data().pullback(&q.opposite()),
            }
        }
        Kind::Trivial => {
            let cat = match t.variance() {
                Variance::Covariant => base.clone(),
                Variance::Contravariant => Arc::new(base.opposite()),
            };
            let rank = p.data().rank(ObjId(0));
            Ok(Diagram::constant(cat, rank))
        }
        k => Err(unsupported(k.to_string())),
    }
}

pub(crate) fn require_rationals<S: Scalar>() -> Result<()> {
    match S::RING {
        RingTag::Rationals => Ok(()),
        RingTag::Integers => Err(Error::RingUnsupported(
            "transports on homology need field coefficients; convert the system to Q".into(),
        )),
    }
}

/// The restriction of a module-type system to a comma category.
pub(crate) struct CommaSystem {
    pub(crate) comma: Comma,
    pub(crate) system: CoeffSystem<Q>,
}

impl CommaSystem {
    // Cohomology: b/u with F∘Q^b. Homology: u/b = (b/u^op)^op with F∘Q_b.
    pub(crate) fn new(u: &FinFunctor, f: &Diagram<Q>, b: ObjId, side: Side) -> Result<CommaSystem> {
        match side {
            Side::Cohomology => {
                let comma = Comma::new(u, b)?;
                let data = f.pullback(comma.forget())?;
                let system =
                    CoeffSystem::from_diagram(comma.category().clone(), KindSpec::Module, Variance::Covariant, data)?;
                Ok(CommaSystem { comma, system })
            }
            Side::Homology => {
                let comma = Comma::new(&u.opposite(), b)?;
                let data = f.pullback(comma.forget())?;
                let base = Arc::new(comma.category().opposite());
                let system = CoeffSystem::from_diagram(base, KindSpec::Module, Variance::Contravariant, data)?;
                Ok(CommaSystem { comma, system })
            }
        }
    }
}

/// `b ↦ H^q(b/u, F∘Q^b)` (or `b ↦ H_q(u/b, F∘Q_b)`) with its transports
/// along the morphisms of the base, over ℚ.
#[derive(Clone, Debug)]
pub struct DerivedImage {
    pub side: Side,
    pub degree: usize,
    pub base: Arc<FinCat>,
    pub values: Vec<HomologyGroup>,
    /// One matrix per base morphism `β: b → b'`, mapping the value at `b`
    /// to the value at `b'` in the chosen homology bases.
    pub transports: Vec<Matrix<Q>>,
}

impl DerivedImage {
    /// The image as a diagram on the base; fails if the transports are not functorial.
    pub fn diagram(&self) -> Result<Diagram<Q>> {
        let ranks = self.values.iter().map(|g| g.free_rank).collect();
        Diagram::new(self.base.clone(), ranks, self.transports.clone())
            .map_err(|e| Error::Internal(format!("derived image transports: {e}")))
    }

    /// The image as a module coefficient system on the base: covariant for
    /// cohomology; for homology, a contravariant module on `B^op`, whose
    /// Thomason homology is `colim_*` over `B`.
    pub fn coefficient(&self) -> Result<CoeffSystem<Q>> {
        let d = self.diagram()?;
        match self.side {
            Side::Cohomology => CoeffSystem::from_diagram(self.base.clone(), KindSpec::Module, Variance::Covariant, d),
            Side::Homology => {
                let opposite = Arc::new(self.base.opposite());
                let d = Diagram::new(Arc::new(opposite.opposite()), d.ranks().to_vec(), d.maps().to_vec())?;
                CoeffSystem::from_diagram(opposite, KindSpec::Module, Variance::Contravariant, d)
            }
        }
    }
}

fn derived_image<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, q: usize, side: Side) -> Result<DerivedImage> {
    require_rationals::<S>()?;
    t.require_variance(side.variance())?;
    if **t.base() != **u.source() {
        return Err(Error::BaseMismatch);
    }
    let f: Diagram<Q> = module_diagram(t)?.convert()?;
    let b_cat = u.target().clone();
    let commas: Vec<CommaSystem> = b_cat
        .object_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&b| CommaSystem::new(u, &f, b, side))
        .collect::<Result<_>>()?;
    let values = commas
        .par_iter()
        .map(|c| assemble(&c.system, q, true)?.homology(q))
        .collect::<Result<Vec<_>>>()?;
    let transports = b_cat
        .morphism_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&beta| {
            let (b, b2) = (b_cat.src(beta), b_cat.dst(beta));
            let (from, to) = (&commas[b.0], &commas[b2.0]);
            let map = match side {
                Side::Cohomology => {
                    // b'/u → b/u induces H^q(b/u) → H^q(b'/u)
                    let phi = from.comma.precompose(&to.comma, beta)?;
                    induced_cochain_map(&CoeffMorphism::new(phi, Tau::Identity), &from.system, &to.system, q + 1)?
                }
                Side::Homology => {
                    // u/b → u/b', the opposite of b/u^op → b'/u^op
                    let phi = to.comma.precompose(&from.comma, beta)?.opposite();
                    induced_chain_map(&CoeffMorphism::new(phi, Tau::Identity), &from.system, &to.system, q + 1)?
                }
            };
            map.normalized()?.on_homology(q)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivedImage { side, degree: q, base: b_cat, values, transports })
}

/// `R^q Ran_u F`: the value at `b` is `H^q(b/u, F∘Q^b)`.
pub fn derived_right_kan<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, q: usize) -> Result<DerivedImage> {
    derived_image(u, t, q, Side::Cohomology)
}

/// `L_q Lan_u F` for a contravariant module: the value at `b` is `H_q(u/b, F∘Q_b)`.
pub fn derived_left_kan<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, q: usize) -> Result<DerivedImage> {
    derived_image(u, t, q, Side::Homology)
}

/// An E₂ page with `p ≤ pmax`, `q ≤ qmax` and the independently computed
/// abutment in total degrees `0..=pmax+qmax`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct E2Page {
    pub side: Side,
    pub ring: RingTag,
    pub pmax: usize,
    pub qmax: usize,
    /// `grid[p][q]`.
    pub grid: Vec<Vec<HomologyGroup>>,
    pub abutment: Vec<HomologyGroup>,
    /// The row `p = pmax+1`, the column `q = qmax+1` and the abutment in
    /// degree `pmax+qmax+1` all vanish.
    pub vanishes_beyond: bool,
    pub metadata: BTreeMap<String, String>,
}

/// Checks every convergent first-quadrant spectral sequence must pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// `(χ(E₂), χ(abutment))`, present when the page vanishes beyond its bounds.
    pub euler: Option<(i64, i64)>,
    pub euler_holds: Option<bool>,
    /// Total degrees where `dim Hⁿ ≤ Σ_{p+q=n} dim E₂^{p,q}` was checked.
    pub bound_degrees: Vec<usize>,
    pub bound_holds: bool,
    /// Degrees with `dim Hⁿ = Σ_{p+q=n} dim E₂^{p,q}`.
    pub equality_degrees: Vec<usize>,
    /// `Some(row)` when E₂ is concentrated in `q = 0` (`"row"`) or `p = 0`
    /// (`"column"`); then the abutment must equal that line exactly.
    pub collapse: Option<String>,
    pub collapse_holds: Option<bool>,
}

impl PropertyReport {
    pub fn all_hold(&self) -> bool {
        self.bound_holds && self.euler_holds.unwrap_or(true) && self.collapse_holds.unwrap_or(true)
    }
}

impl E2Page {
    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.grid.get(p).and_then(|r| r.get(q)).map_or(0, |g| g.free_rank)
    }

    fn diagonal(&self, n: usize) -> usize {
        (0..=n).map(|p| self.dim(p, n - p)).sum()
    }

    pub fn check(&self) -> PropertyReport {
        let top = self.pmax + self.qmax;
        let euler = self.vanishes_beyond.then(|| {
            let sign = |n: usize| if n.is_multiple_of(2) { 1 } else { -1 };
            let e2 = (0..=top).map(|n| sign(n) * self.diagonal(n) as i64).sum();
            let ab = self.abutment.iter().enumerate().map(|(n, g)| sign(n) * g.free_rank as i64).sum();
            (e2, ab)
        });
        // a diagonal is complete if it lies inside the grid or the page vanishes beyond it
        let bound_degrees: Vec<usize> =
            (0..=top).filter(|&n| self.vanishes_beyond || (n <= self.pmax && n <= self.qmax)).collect();
        let bound_holds = bound_degrees.iter().all(|&n| self.abutment[n].free_rank <= self.diagonal(n));
        let equality_degrees =
            bound_degrees.iter().copied().filter(|&n| self.abutment[n].free_rank == self.diagonal(n)).collect();
        let row = (0..=self.pmax).all(|p| (1..=self.qmax).all(|q| self.dim(p, q) == 0));
        let column = (1..=self.pmax).all(|p| (0..=self.qmax).all(|q| self.dim(p, q) == 0));
        let (collapse, collapse_holds) = if row {
            (Some("row".to_string()), Some((0..=self.pmax).all(|n| self.abutment[n].free_rank == self.dim(n, 0))))
        } else if column {
            (Some("column".to_string()), Some((0..=self.qmax).all(|n| self.abutment[n].free_rank == self.dim(0, n))))
        } else {
            (None, None)
        };
        PropertyReport {
            euler,
            euler_holds: euler.map(|(a, b)| a == b),
            bound_degrees,
            bound_holds,
            equality_degrees,
            collapse,
            collapse_holds,
        }
    }
}

/// Assemble an E₂ page from per-`q` coefficient systems on the base and the
/// system on the total category.
pub(crate) fn e2_from_rows(
    side: Side,
    rows: &[CoeffSystem<Q>],
    total: &CoeffSystem<Q>,
    pmax: usize,
    qmax: usize,
) -> Result<E2Page> {
    debug_assert_eq!(rows.len(), qmax + 2);
    let columns: Vec<Vec<HomologyGroup>> =
        rows.par_iter().map(|r| homology_groups(r, pmax + 1, true)).collect::<Result<_>>()?;
    let grid = (0..=pmax).map(|p| (0..=qmax).map(|q| columns[q][p].clone()).collect()).collect();
    let abutment_all = homology_groups(total, pmax + qmax + 1, true)?;
    let vanishes_beyond = (0..=qmax + 1).all(|q| columns[q][pmax + 1].is_zero())
        && columns[qmax + 1].iter().all(HomologyGroup::is_zero)
        && abutment_all[pmax + qmax + 1].is_zero();
    let mut metadata = BTreeMap::new();
    metadata.insert("indexing".into(), "E2[p][q] with p, q >= 0".into());
    if side == Side::Homology {
        metadata.insert(
            "quadrant".into(),
            "labelled third-quadrant in the literature; stored with homological degrees p, q >= 0".into(),
        );
    }
    Ok(E2Page {
        side,
        ring: RingTag::Rationals,
        pmax,
        qmax,
        grid,
        abutment: abutment_all[..=pmax + qmax].to_vec(),
        vanishes_beyond,
        metadata,
    })
}

fn kan_e2<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, pmax: usize, qmax: usize, side: Side) -> Result<E2Page> {
    require_rationals::<S>()?;
    let rows = (0..=qmax + 1)
        .map(|q| derived_image(u, t, q, side)?.coefficient())
        .collect::<Result<Vec<_>>>()?;
    e2_from_rows(side, &rows, &t.convert()?, pmax, qmax)
}

/// `E₂^{p,q} = H^p(B, R^q Ran_u F) ⇒ H^{p+q}(E, F)`.
pub fn leray_e2<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, pmax: usize, qmax: usize) -> Result<E2Page> {
    kan_e2(u, t, pmax, qmax, Side::Cohomology)
}

/// `E²_{p,q} = H_p(B, L_q Lan_u F) ⇒ H_{p+q}(E, F)`.
pub fn colim_e2<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, pmax: usize, qmax: usize) -> Result<E2Page> {
    kan_e2(u, t, pmax, qmax, Side::Homology)
}

/// The assembled comma complex behind a derived-image value (for diagnostics).
pub fn comma_complex(u: &FinFunctor, t: &CoeffSystem<Q>, b: ObjId, q: usize, side: Side) -> Result<AssembledComplex<Q>> {
    let f = module_diagram(t)?;
    assemble(&CommaSystem::new(u, &f, b, side)?.system, q, true)
}
