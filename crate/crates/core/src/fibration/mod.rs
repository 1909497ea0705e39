//! Split Grothendieck fibrations: the construction from a strict functor
//! `G: B^op → Cat`, fibration detection by cartesian lifts, fibers,
//! locality checks and the fibration E₂ pages.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coeff::{CoeffMorphism, CoeffSystem, Kind, KindSpec, Tau, Variance};
use crate::complexes::{assemble, induced_chain_map, induced_cochain_map};
use crate::error::{Error, Result};
use crate::exactalg::{rank, Diagram, HomologyGroup, Matrix, Scalar, Q};
use crate::fincat::{Comma, FinCat, FinFunctor, MorId, Morphism, ObjId};
use crate::kan::{e2_from_rows, module_diagram, require_rationals, CommaSystem, E2Page, Side};


/// A strict functor `G: B^op → Cat`: a fiber per object and, for every
/// `φ: b → b'`, a transport functor `G(φ): G(b') → G(b)`.
#[derive(Clone, Debug)]
pub struct StrictFunctor {
    base: Arc<FinCat>,
    fibers: Vec<Arc<FinCat>>,
    transports: Vec<FinFunctor>,
}

impl StrictFunctor {
    /// Validate endpoints, identities and `G(ψ∘φ) = G(φ)∘G(ψ)`.
    pub fn new(base: Arc<FinCat>, fibers: Vec<Arc<FinCat>>, transports: Vec<FinFunctor>) -> Result<StrictFunctor> {
        let bad = |m: String| Error::NonStrictFunctor(m);
        if fibers.len() != base.num_objects() || transports.len() != base.num_morphisms() {
            return Err(bad("one fiber per object and one transport per morphism required".into()));
        }
        for phi in base.morphism_ids() {
            let g = &transports[phi.0];
            let name = base.mor_name(phi);
            if **g.source() != *fibers[base.dst(phi).0] || **g.target() != *fibers[base.src(phi).0] {
                return Err(bad(format!("G({name}) must map the fiber over the target to the fiber over the source")));
            }
            if base.is_identity(phi) && !g.is_identity() {
                return Err(bad(format!("G({name}) is not the identity")));
            }
        }
        for phi in base.morphism_ids() {
            for &psi in base.outgoing(base.dst(phi)) {
                let composite = &transports[base.compose_unchecked(psi, phi).0];
                let (gp, gq) = (&transports[phi.0], &transports[psi.0]);
                let agrees = (0..composite.source().num_objects()).all(|x| composite.obj(ObjId(x)) == gp.obj(gq.obj(ObjId(x))))
                    && (0..composite.source().num_morphisms())
                        .all(|m| composite.mor(MorId(m)) == gp.mor(gq.mor(MorId(m))));
                if !agrees {
                    return Err(bad(format!(
                        "G({}∘{}) differs from G({})∘G({})",
                        base.mor_name(psi),
                        base.mor_name(phi),
                        base.mor_name(phi),
                        base.mor_name(psi)
                    )));
                }
            }
        }
        Ok(StrictFunctor { base, fibers, transports })
    }

    /// The constant functor at `fiber`, giving the product fibration.
    pub fn constant(base: Arc<FinCat>, fiber: Arc<FinCat>) -> StrictFunctor {
        let fibers = vec![fiber.clone(); base.num_objects()];
        let transports = vec![FinFunctor::identity(fiber); base.num_morphisms()];
        StrictFunctor { base, fibers, transports }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn fiber(&self, b: ObjId) -> &Arc<FinCat> {
        &self.fibers[b.0]
    }

    pub fn transport(&self, phi: MorId) -> &FinFunctor {
        &self.transports[phi.0]
    }
}

/// The Grothendieck construction `E = ∫G` with its projection and cleavage.
#[derive(Clone, Debug)]
pub struct SplitFibration {
    functor: StrictFunctor,
    total: Arc<FinCat>,
    projection: FinFunctor,
    objects: Vec<(ObjId, ObjId)>,
    object_index: HashMap<(ObjId, ObjId), ObjId>,
    // (φ, m, x') per morphism
    morphisms: Vec<(MorId, MorId, ObjId)>,
    morphism_index: HashMap<(MorId, MorId, ObjId), MorId>,
    inclusions: Vec<FinFunctor>,
}

/// Objects `(b, x)` with `x ∈ G(b)`; morphisms `(b, x) → (b', x')` are pairs
/// `(φ: b → b', m: x → G(φ)(x'))`, composed as `(φ', m')∘(φ, m) = (φ'φ, G(φ)(m')∘m)`.
pub fn grothendieck_construction(g: StrictFunctor) -> Result<SplitFibration> {
    let b_cat = g.base.clone();
    let mut objects = Vec::new();
    let mut object_index = HashMap::new();
    for b in b_cat.object_ids() {
        for x in g.fibers[b.0].object_ids() {
            object_index.insert((b, x), ObjId(objects.len()));
            objects.push((b, x));
        }
    }
    let mut morphisms = Vec::new();
    let mut morphism_index = HashMap::new();
    let mut raw = Vec::new();
    for &(b, x) in &objects {
        let fb = &g.fibers[b.0];
        for &phi in b_cat.outgoing(b) {
            let b2 = b_cat.dst(phi);
            let t = &g.transports[phi.0];
            for x2 in g.fibers[b2.0].object_ids() {
                for m in fb.hom(x, t.obj(x2)) {
                    let key = (phi, m, x2);
                    morphism_index.insert(key, MorId(morphisms.len()));
                    morphisms.push(key);
                    raw.push(Morphism {
                        name: format!("({},{})>{}", b_cat.mor_name(phi), fb.mor_name(m), g.fibers[b2.0].obj_name(x2)),
                        src: object_index[&(b, x)],
                        dst: object_index[&(b2, x2)],
                    });
                }
            }
        }
    }
    let names = objects
        .iter()
        .map(|&(b, x)| format!("({},{})", b_cat.obj_name(b), g.fibers[b.0].obj_name(x)))
        .collect();
    let identities = objects
        .iter()
        .map(|&(b, x)| morphism_index[&(b_cat.identity(b), g.fibers[b.0].identity(x), x)])
        .collect();
    let total = FinCat::from_parts(names, raw, identities, |h, f| {
        let (phi, m, _) = morphisms[f.0];
        let (psi, m2, x3) = morphisms[h.0];
        let fb = &g.fibers[b_cat.src(phi).0];
        let moved = g.transports[phi.0].mor(m2);
        morphism_index.get(&(b_cat.compose(psi, phi)?, fb.compose(moved, m)?, x3)).copied()
    })
    .map_err(|e| Error::NonStrictFunctor(format!("construction failed: {e}")))?;
    let total = Arc::new(total);
    let projection = FinFunctor::new(
        total.clone(),
        b_cat.clone(),
        objects.iter().map(|&(b, _)| b).collect(),
        morphisms.iter().map(|&(phi, _, _)| phi).collect(),
    )?;
    let inclusions = b_cat
        .object_ids()
        .map(|b| {
            let fb = &g.fibers[b.0];
            FinFunctor::new(
                fb.clone(),
                total.clone(),
                fb.object_ids().map(|x| object_index[&(b, x)]).collect(),
                fb.morphism_ids().map(|m| morphism_index[&(b_cat.identity(b), m, fb.dst(m))]).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SplitFibration { functor: g, total, projection, objects, object_index, morphisms, morphism_index, inclusions })
}

impl SplitFibration {
    pub fn functor(&self) -> &StrictFunctor {
        &self.functor
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.functor.base
    }

    pub fn total(&self) -> &Arc<FinCat> {
        &self.total
    }

    pub fn projection(&self) -> &FinFunctor {
        &self.projection
    }

    /// `(b, x)` for an object of the total category.
    pub fn pair(&self, e: ObjId) -> (ObjId, ObjId) {
        self.objects[e.0]
    }

    pub fn object(&self, b: ObjId, x: ObjId) -> Option<ObjId> {
        self.object_index.get(&(b, x)).copied()
    }

    /// The inclusion `G(b) → E`, `x ↦ (b, x)`.
    pub fn inclusion(&self, b: ObjId) -> &FinFunctor {
        &self.inclusions[b.0]
    }

    /// The chosen cartesian lift `(φ, id): (b, G(φ)x') → (b', x')` of
    /// `φ: b → u(e)` at `e = (b', x')`.
    pub fn cleavage(&self, e: ObjId, phi: MorId) -> Option<MorId> {
        let (b2, x2) = self.objects[e.0];
        let base = self.base();
        if base.dst(phi) != b2 {
            return None;
        }
        let b = base.src(phi);
        let y = self.functor.transports[phi.0].obj(x2);
        self.morphism_index.get(&(phi, self.functor.fibers[b.0].identity(y), x2)).copied()
    }

    /// `(φ, m, x')` for a morphism of the total category.
    pub fn triple(&self, m: MorId) -> (MorId, MorId, ObjId) {
        self.morphisms[m.0]
    }

    /// Pull a constant, module or local system on the base back to the total category.
    pub fn pull_back<S: Scalar>(&self, t: &CoeffSystem<S>) -> Result<CoeffSystem<S>> {
        if **t.base() != **self.base() {
            return Err(Error::BaseMismatch);
        }
        let u = &self.projection;
        match t.kind() {
            Some(Kind::Trivial) | Some(Kind::Module) | Some(Kind::Local) => {
                let d = module_diagram(t)?;
                let data = match t.variance() {
                    Variance::Covariant => d.pullback(u)?,
                    Variance::Contravariant => d.pullback(&u.opposite())?,
                };
                CoeffSystem::from_diagram(self.total.clone(), KindSpec::Module, t.variance(), data)
            }
            _ => Err(Error::UnsupportedCoefficientShape("only constant, module or local systems on the base pull back".into())),
        }
    }

    /// Locality of a module system at `b` in degree `q`, with the fiber taken as `G(b)`.
    pub fn locality<S: Scalar>(&self, t: &CoeffSystem<S>, b: ObjId, q: usize) -> Result<LocalityReport> {
        locality_with(&self.projection, &self.inclusions[b.0], t, b, q)
    }
}

/// The functor `E → E'` over `B` induced by a strict natural transformation
/// `η: G → G'` (`η_b: G(b) → G'(b)` with `η_b∘G(φ) = G'(φ)∘η_{b'}`).
pub fn induced_total_functor(e: &SplitFibration, e2: &SplitFibration, eta: &[FinFunctor]) -> Result<FinFunctor> {
    let base = e.base();
    if **base != **e2.base() || eta.len() != base.num_objects() {
        return Err(Error::BaseMismatch);
    }
    for phi in base.morphism_ids() {
        let (b, b2) = (base.src(phi), base.dst(phi));
        let lhs = e.functor.transports[phi.0].then(&eta[b.0])?;
        let rhs = eta[b2.0].then(&e2.functor.transports[phi.0])?;
        if lhs != rhs {
            return Err(Error::NonStrictFunctor(format!("η is not natural along {}", base.mor_name(phi))));
        }
    }
    let obj_map = e.objects.iter().map(|&(b, x)| e2.object_index[&(b, eta[b.0].obj(x))]).collect();
    let mor_map = e
        .morphisms
        .iter()
        .map(|&(phi, m, x2)| e2.morphism_index[&(phi, eta[base.src(phi).0].mor(m), eta[base.dst(phi).0].obj(x2))])
        .collect();
    FinFunctor::new(e.total.clone(), e2.total.clone(), obj_map, mor_map)
}

/// The outcome of the cartesian-lift test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum FibrationCheck {
    /// A cartesian lift `lift` of `morphism` at every `object`.
    Fibration { lifts: Vec<CartesianLift> },
    /// No cartesian lift of `morphism` (of the base) ending at `object`.
    NotAFibration { object: String, morphism: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartesianLift {
    pub object: String,
    pub morphism: String,
    pub lift: String,
}

impl FibrationCheck {
    pub fn is_fibration(&self) -> bool {
        matches!(self, FibrationCheck::Fibration { .. })
    }
}

/// Whether `λ: e₀ → e` is cartesian for `u`: every `μ: e₁ → e` with
/// `u(μ) = u(λ)∘ψ` factors uniquely as `λ∘ν` with `u(ν) = ψ`.
pub fn is_cartesian(u: &FinFunctor, lambda: MorId) -> bool {
    let (e_cat, b_cat) = (u.source(), u.target());
    let (e0, e) = (e_cat.src(lambda), e_cat.dst(lambda));
    let phi = u.mor(lambda);
    e_cat.incoming(e).iter().all(|&mu| {
        let e1 = e_cat.src(mu);
        b_cat.hom(u.obj(e1), u.obj(e0)).filter(|&psi| b_cat.compose(phi, psi) == Some(u.mor(mu))).all(|psi| {
            e_cat
                .hom(e1, e0)
                .filter(|&nu| u.mor(nu) == psi && e_cat.compose(lambda, nu) == Some(mu))
                .count()
                == 1
        })
    })
}

/// Exhaustive cartesian-lift test.
pub fn is_grothendieck_fibration(u: &FinFunctor) -> FibrationCheck {
    let (e_cat, b_cat) = (u.source(), u.target());
    let mut lifts = Vec::new();
    for e in e_cat.object_ids() {
        for &phi in b_cat.incoming(u.obj(e)) {
            let lift = e_cat.incoming(e).iter().copied().find(|&l| u.mor(l) == phi && is_cartesian(u, l));
            match lift {
                Some(l) => lifts.push(CartesianLift {
                    object: e_cat.obj_name(e).to_string(),
                    morphism: b_cat.mor_name(phi).to_string(),
                    lift: e_cat.mor_name(l).to_string(),
                }),
                None => {
                    return FibrationCheck::NotAFibration {
                        object: e_cat.obj_name(e).to_string(),
                        morphism: b_cat.mor_name(phi).to_string(),
                    }
                }
            }
        }
    }
    FibrationCheck::Fibration { lifts }
}

/// The fiber `u⁻¹(b)`: objects over `b` and morphisms over `id_b`, with its inclusion.
pub fn fiber_category(u: &FinFunctor, b: ObjId) -> Result<FinFunctor> {
    let idb = u.target().identity(b);
    u.source().subcategory(|x| u.obj(x) == b, |m| u.mor(m) == idb)
}

/// Comparison of `H^q(b/u, F∘Q^b)` with `H^q(E_b, F∘i_b)` along `j_b: E_b → b/u`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub object: String,
    pub degree: usize,
    pub comma: HomologyGroup,
    pub fiber: HomologyGroup,
    pub map_rank: usize,
    pub is_isomorphism: bool,
}

/// Locality check for any functor `u`, with the fiber computed as `u⁻¹(b)`.
pub fn locality_check<S: Scalar>(u: &FinFunctor, t: &CoeffSystem<S>, b: ObjId, q: usize) -> Result<LocalityReport> {
    locality_with(u, &fiber_category(u, b)?, t, b, q)
}

fn locality_with<S: Scalar>(
    u: &FinFunctor,
    fiber: &FinFunctor,
    t: &CoeffSystem<S>,
    b: ObjId,
    q: usize,
) -> Result<LocalityReport> {
    require_rationals::<S>()?;
    t.require_variance(Variance::Covariant)?;
    if **t.base() != **u.source() {
        return Err(Error::BaseMismatch);
    }
    let f: Diagram<Q> = module_diagram(t)?.convert()?;
    let comma = CommaSystem::new(u, &f, b, Side::Cohomology)?;
    let fiber_system =
        CoeffSystem::from_diagram(fiber.source().clone(), KindSpec::Module, Variance::Covariant, f.pullback(fiber)?)?;
    let j = Comma::fiber_inclusion(&comma.comma, fiber)?;
    // F∘Q^b∘j_b = F∘i_b, so τ is the identity
    let map = induced_cochain_map(&CoeffMorphism::new(j, Tau::Identity), &comma.system, &fiber_system, q + 1)?
        .normalized()?;
    let on_h = map.on_homology(q)?;
    let comma_group = map.source.homology(q)?;
    let fiber_group = map.target.homology(q)?;
    let map_rank = rank(&on_h);
    Ok(LocalityReport {
        object: u.target().obj_name(b).to_string(),
        degree: q,
        is_isomorphism: comma_group.free_rank == fiber_group.free_rank && map_rank == comma_group.free_rank,
        comma: comma_group,
        fiber: fiber_group,
        map_rank,
    })
}

/// A module on the total category that is pulled back from the base:
/// ranks and maps per base object and morphism.
struct BaseModule {
    maps: Vec<Matrix<Q>>,
}

fn base_module(fib: &SplitFibration, d: &Diagram<Q>, side: Side) -> Result<BaseModule> {
    let (base, u) = (fib.base(), &fib.projection);
    let e_cat = &fib.total;
    let shape = |m: String| Error::UnsupportedCoefficientShape(m);
    let mut ranks = vec![None; base.num_objects()];
    for e in e_cat.object_ids() {
        let b = u.obj(e);
        let r = d.rank(e);
        match ranks[b.0] {
            None => ranks[b.0] = Some(r),
            Some(r0) if r0 != r => {
                return Err(shape(format!("ranks differ within the fiber over `{}`", base.obj_name(b))));
            }
            _ => {}
        }
    }
    let ranks: Vec<usize> = ranks.into_iter().map(|r| r.unwrap_or(0)).collect();
    let mut maps: Vec<Option<Matrix<Q>>> = vec![None; base.num_morphisms()];
    for m in e_cat.morphism_ids() {
        let phi = u.mor(m);
        match &maps[phi.0] {
            None => maps[phi.0] = Some(d.map(m).clone()),
            Some(existing) if existing != d.map(m) => {
                return Err(shape(format!(
                    "`{}` and another morphism over `{}` act differently",
                    e_cat.mor_name(m),
                    base.mor_name(phi)
                )));
            }
            _ => {}
        }
    }
    let maps = maps
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.unwrap_or_else(|| {
                // nothing lies over φ only when a fiber at one end is empty
                let phi = MorId(i);
                let (s, t) = (ranks[base.src(phi).0], ranks[base.dst(phi).0]);
                match side {
                    Side::Cohomology => Matrix::zero(t, s),
                    Side::Homology => Matrix::zero(s, t),
                }
            })
        })
        .collect();
    Ok(BaseModule { maps })
}

/// The fiberwise system `b ↦ H^q(G(b), F|G(b))` (resp. `H_q`) as a module on the base.
fn fiberwise_row(fib: &SplitFibration, d: &Diagram<Q>, module: &BaseModule, q: usize, side: Side) -> Result<CoeffSystem<Q>> {
    let base = fib.base();
    let variance = side_variance(side);
    let systems = base
        .object_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&b| {
            let i = &fib.inclusions[b.0];
            let data = match side {
                Side::Cohomology => d.pullback(i)?,
                Side::Homology => d.pullback(&i.opposite())?,
            };
            CoeffSystem::from_diagram(i.source().clone(), KindSpec::Module, variance, data)
        })
        .collect::<Result<Vec<_>>>()?;
    let values = systems.par_iter().map(|s| assemble(s, q, true)?.homology(q)).collect::<Result<Vec<_>>>()?;
    let maps = base
        .morphism_ids()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&phi| {
            let (b, b2) = (base.src(phi), base.dst(phi));
            let m = CoeffMorphism::new(fib.functor.transports[phi.0].clone(), Tau::Constant(module.maps[phi.0].clone()));
            let map = match side {
                // G(φ): G(b') → G(b) induces H^q(G(b)) → H^q(G(b'))
                Side::Cohomology => induced_cochain_map(&m, &systems[b.0], &systems[b2.0], q + 1)?,
                // and H_q(G(b')) → H_q(G(b))
                Side::Homology => induced_chain_map(&m, &systems[b2.0], &systems[b.0], q + 1)?,
            };
            map.normalized()?.on_homology(q)
        })
        .collect::<Result<Vec<_>>>()?;
    let ranks = values.iter().map(|g| g.free_rank).collect();
    let cat = match side {
        Side::Cohomology => base.clone(),
        Side::Homology => Arc::new(base.opposite()),
    };
    let diagram = Diagram::new(cat, ranks, maps).map_err(|e| Error::Internal(format!("fiberwise transports: {e}")))?;
    CoeffSystem::from_diagram(base.clone(), KindSpec::Module, variance, diagram)
}

fn side_variance(side: Side) -> Variance {
    match side {
        Side::Cohomology => Variance::Covariant,
        Side::Homology => Variance::Contravariant,
    }
}

fn fibration_page<S: Scalar>(fib: &SplitFibration, t: &CoeffSystem<S>, pmax: usize, qmax: usize, side: Side) -> Result<E2Page> {
    require_rationals::<S>()?;
    t.require_variance(side_variance(side))?;
    if **t.base() != *fib.total {
        return Err(Error::BaseMismatch);
    }
    let d: Diagram<Q> = module_diagram(t)
        .map_err(|e| Error::UnsupportedCoefficientShape(e.to_string()))?
        .convert()?;
    let module = base_module(fib, &d, side)?;
    let rows = (0..=qmax + 1).map(|q| fiberwise_row(fib, &d, &module, q, side)).collect::<Result<Vec<_>>>()?;
    let mut page = e2_from_rows(side, &rows, &t.convert()?, pmax, qmax)?;
    page.metadata.insert(
        "fiberwise_variance".into(),
        match side {
            Side::Cohomology => "covariant on the base: b -> H^q(E_b) along G(phi)^*".into(),
            Side::Homology => "contravariant on the base: b' -> b along G(phi)_*".into(),
        },
    );
    Ok(page)
}

/// `E₂^{p,q} = H^p(B, b ↦ H^q(E_b, F|E_b)) ⇒ H^{p+q}(E, F)` for `F` constant
/// or pulled back from the base.
pub fn fibration_e2<S: Scalar>(fib: &SplitFibration, t: &CoeffSystem<S>, pmax: usize, qmax: usize) -> Result<E2Page> {
    fibration_page(fib, t, pmax, qmax, Side::Cohomology)
}

/// The homology page `E²_{p,q} = H_p(B, b ↦ H_q(E_b, F|E_b)) ⇒ H_{p+q}(E, F)`.
pub fn fibration_e2_homology<S: Scalar>(
    fib: &SplitFibration,
    t: &CoeffSystem<S>,
    pmax: usize,
    qmax: usize,
) -> Result<E2Page> {
    fibration_page(fib, t, pmax, qmax, Side::Homology)
}

/// Whether `j` has a right adjoint, by searching each object `c` of the target
/// for a universal arrow `j(x) → c`.
pub fn has_right_adjoint(j: &FinFunctor) -> bool {
    let (s, t) = (j.source(), j.target());
    t.object_ids().all(|c| {
        s.object_ids().any(|x| {
            t.hom(j.obj(x), c).any(|eps| {
                s.object_ids().all(|y| {
                    t.hom(j.obj(y), c).all(|g| {
                        s.hom(y, x).filter(|&m| t.compose(eps, j.mor(m)) == Some(g)).count() == 1
                    })
                })
            })
        })
    })
}

/// Whether `j_b: u⁻¹(b) → b/u` is coreflective; for a fibration this holds at every `b`.
pub fn fiber_is_coreflective(u: &FinFunctor, b: ObjId) -> Result<bool> {
    let fiber = fiber_category(u, b)?;
    let comma = Comma::new(u, b)?;
    Ok(has_right_adjoint(&comma.fiber_inclusion(&fiber)?))
}
