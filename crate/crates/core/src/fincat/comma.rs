use std::collections::HashMap;
use std::sync::Arc;

use super::{FinCat, FinFunctor, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

/// The comma category `b/u` of a functor `u: E → B` under an object `b`.
///
/// Objects are pairs `(e, φ: b → u(e))`; a morphism `(e, φ) → (e', φ')` is a
/// morphism `m: e → e'` of `E` with `u(m)∘φ = φ'`.
#[derive(Clone, Debug)]
pub struct Comma {
    functor: FinFunctor,
    base_object: ObjId,
    cat: Arc<FinCat>,
    pairs: Vec<(ObjId, MorId)>,
    lookup: HashMap<(ObjId, MorId), ObjId>,
    forget: FinFunctor,
}

impl Comma {
    pub fn new(u: &FinFunctor, b: ObjId) -> Result<Comma> {
        let (e_cat, b_cat) = (u.source(), u.target());
        if b.0 >= b_cat.num_objects() {
            return Err(Error::ObjectNotInTarget(format!("{b}")));
        }
        let mut pairs = Vec::new();
        let mut lookup = HashMap::new();
        for e in e_cat.object_ids() {
            for phi in b_cat.hom(b, u.obj(e)) {
                lookup.insert((e, phi), ObjId(pairs.len()));
                pairs.push((e, phi));
            }
        }
        let objects = pairs
            .iter()
            .map(|&(e, phi)| format!("({},{})", e_cat.obj_name(e), b_cat.mor_name(phi)))
            .collect();
        let mut morphisms = Vec::new();
        let mut underlying = Vec::new();
        let mut mor_lookup = HashMap::new();
        for (i, &(e, phi)) in pairs.iter().enumerate() {
            for &m in e_cat.outgoing(e) {
                let phi2 = b_cat.compose_unchecked(u.mor(m), phi);
                let j = lookup[&(e_cat.dst(m), phi2)];
                mor_lookup.insert((i, m), MorId(morphisms.len()));
                underlying.push(m);
                morphisms.push(Morphism {
                    name: format!("{}:{}", e_cat.mor_name(m), i),
                    src: ObjId(i),
                    dst: j,
                });
            }
        }
        let identities = pairs
            .iter()
            .enumerate()
            .map(|(i, &(e, _))| mor_lookup[&(i, e_cat.identity(e))])
            .collect();
        let srcs: Vec<usize> = morphisms.iter().map(|m| m.src.0).collect();
        let cat = Arc::new(FinCat::from_parts(objects, morphisms, identities, |g, f| {
            let gf = e_cat.compose(underlying[g.0], underlying[f.0])?;
            mor_lookup.get(&(srcs[f.0], gf)).copied()
        })?);
        let forget = FinFunctor::from_parts_unchecked(
            cat.clone(),
            e_cat.clone(),
            pairs.iter().map(|&(e, _)| e).collect(),
            underlying,
        );
        Ok(Comma { functor: u.clone(), base_object: b, cat, pairs, lookup, forget })
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn functor(&self) -> &FinFunctor {
        &self.functor
    }

    pub fn base_object(&self) -> ObjId {
        self.base_object
    }

    /// The `(e, φ)` pair behind a comma object.
    pub fn pair(&self, x: ObjId) -> (ObjId, MorId) {
        self.pairs[x.0]
    }

    pub fn object(&self, e: ObjId, phi: MorId) -> Option<ObjId> {
        self.lookup.get(&(e, phi)).copied()
    }

    /// The forgetful functor `Q^b: b/u → E`.
    pub fn forget(&self) -> &FinFunctor {
        &self.forget
    }

    /// For `β: b → b'`, the functor `b'/u → b/u`, `(e, φ') ↦ (e, φ'∘β)`.
    /// `self` must be `b/u` and `other` must be `b'/u`.
    pub fn precompose(&self, other: &Comma, beta: MorId) -> Result<FinFunctor> {
        let b_cat = self.functor.target();
        if b_cat.src(beta) != self.base_object || b_cat.dst(beta) != other.base_object {
            return Err(Error::NotAFunctor("β must go from b to b'".into()));
        }
        let obj_map: Vec<ObjId> = other
            .pairs
            .iter()
            .map(|&(e, phi)| self.lookup[&(e, b_cat.compose_unchecked(phi, beta))])
            .collect();
        let src_cat = &other.cat;
        let mor_map = src_cat
            .morphism_ids()
            .map(|m| {
                let x = obj_map[src_cat.src(m).0];
                let under = other.forget.mor(m);
                self.cat
                    .outgoing(x)
                    .iter()
                    .copied()
                    .find(|&n| self.forget.mor(n) == under)
                    .expect("precomposition preserves comma morphisms")
            })
            .collect();
        FinFunctor::new(other.cat.clone(), self.cat.clone(), obj_map, mor_map)
    }

    /// The inclusion `j_b: E_b → b/u`, `e ↦ (e, id_b)`, where `fiber` is the
    /// inclusion of the fiber category into `E`.
    pub fn fiber_inclusion(&self, fiber: &FinFunctor) -> Result<FinFunctor> {
        let b_cat = self.functor.target();
        let idb = b_cat.identity(self.base_object);
        let fcat = fiber.source();
        let obj_map: Vec<ObjId> = fcat
            .object_ids()
            .map(|x| {
                self.object(fiber.obj(x), idb)
                    .ok_or_else(|| Error::NotAFunctor("fiber object outside the comma category".into()))
            })
            .collect::<Result<_>>()?;
        let mor_map = fcat
            .morphism_ids()
            .map(|m| {
                let x = obj_map[fcat.src(m).0];
                let under = fiber.mor(m);
                self.cat
                    .outgoing(x)
                    .iter()
                    .copied()
                    .find(|&n| self.forget.mor(n) == under)
                    .ok_or_else(|| Error::NotAFunctor("fiber morphism outside the comma category".into()))
            })
            .collect::<Result<_>>()?;
        FinFunctor::new(fcat.clone(), self.cat.clone(), obj_map, mor_map)
    }
}
