use std::collections::HashMap;
use std::sync::Arc;

use super::{FinCat, FinFunctor, MorId, Morphism, ObjId};
use crate::error::Result;

/// The factorization category `FC` of a finite category `C`.
///
/// Objects of `FC` are the morphisms of `C` (object `k` is morphism `k`).
/// A morphism `f → f'` is a pair `(α, β)` with `f' = β∘f∘α`; composition is
/// `(α', β')∘(α, β) = (α∘α', β'∘β)`.
#[derive(Clone, Debug)]
pub struct Factorization {
    base: Arc<FinCat>,
    cat: Arc<FinCat>,
    // (f, α, β) for every FC morphism
    triples: Vec<(MorId, MorId, MorId)>,
    lookup: HashMap<(MorId, MorId, MorId), MorId>,
}

impl Factorization {
    pub fn new(base: Arc<FinCat>) -> Result<Factorization> {
        let c = &*base;
        let objects: Vec<String> = c.morphisms().iter().map(|m| m.name.clone()).collect();
        let mut triples = Vec::new();
        let mut lookup = HashMap::new();
        let mut morphisms = Vec::new();
        for f in c.morphism_ids() {
            for &alpha in c.incoming(c.src(f)) {
                let fa = c.compose_unchecked(f, alpha);
                for &beta in c.outgoing(c.dst(f)) {
                    let target = c.compose_unchecked(beta, fa);
                    let id = MorId(triples.len());
                    lookup.insert((f, alpha, beta), id);
                    triples.push((f, alpha, beta));
                    morphisms.push(Morphism {
                        name: format!("({},{})@{}", c.mor_name(alpha), c.mor_name(beta), c.mor_name(f)),
                        src: ObjId(f.0),
                        dst: ObjId(target.0),
                    });
                }
            }
        }
        let identities = c
            .morphism_ids()
            .map(|f| lookup[&(f, c.identity(c.src(f)), c.identity(c.dst(f)))])
            .collect();
        let cat = FinCat::from_parts(objects, morphisms, identities, |g, h| {
            // g ∘ h with h = (α, β): f → f', g = (α', β'): f' → f''
            let (f, alpha, beta) = triples[h.0];
            let (_, alpha2, beta2) = triples[g.0];
            lookup
                .get(&(f, c.compose(alpha, alpha2)?, c.compose(beta2, beta)?))
                .copied()
        })?;
        Ok(Factorization { base, cat: Arc::new(cat), triples, lookup })
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    /// The `(f, α, β)` description of an FC morphism.
    pub fn triple(&self, m: MorId) -> (MorId, MorId, MorId) {
        self.triples[m.0]
    }

    /// The FC morphism `(α, β)` out of object `f`, if `(α, β)` is composable with `f`.
    pub fn morphism(&self, f: MorId, alpha: MorId, beta: MorId) -> Option<MorId> {
        self.lookup.get(&(f, alpha, beta)).copied()
    }

    /// The forgetful functor `π: FC → C^op × C`, `f ↦ (src f, dst f)`.
    pub fn projection(&self) -> FinFunctor {
        let c = &*self.base;
        let prod = Arc::new(c.opposite().product(c));
        let (n, m) = (c.num_objects(), c.num_morphisms());
        let obj_map = c.morphism_ids().map(|f| ObjId(c.src(f).0 * n + c.dst(f).0)).collect();
        let mor_map = self.triples.iter().map(|&(_, a, b)| MorId(a.0 * m + b.0)).collect();
        FinFunctor::from_parts_unchecked(self.cat.clone(), prod, obj_map, mor_map)
    }

    /// The induced functor `Fφ: FD → FC` for `φ: D → C`, where `self` is `FD`
    /// and `target` is `FC`.
    pub fn induced(&self, phi: &FinFunctor, target: &Factorization) -> FinFunctor {
        let obj_map = (0..self.cat.num_objects()).map(|f| ObjId(phi.mor(MorId(f)).0)).collect();
        let mor_map = self
            .triples
            .iter()
            .map(|&(f, a, b)| {
                target
                    .morphism(phi.mor(f), phi.mor(a), phi.mor(b))
                    .expect("functor image of a factorization morphism")
            })
            .collect();
        FinFunctor::from_parts_unchecked(self.cat.clone(), target.cat.clone(), obj_map, mor_map)
    }
}
