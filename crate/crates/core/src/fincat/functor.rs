use std::sync::Arc;

use super::{FinCat, MorId, ObjId};
use crate::error::{Error, Result};

/// A functor between finite categories, validated exhaustively.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    obj_map: Vec<ObjId>,
    mor_map: Vec<MorId>,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.obj_map == other.obj_map
            && self.mor_map == other.mor_map
    }
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> Result<FinFunctor> {
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            return Err(Error::NotAFunctor("maps must cover the whole source".into()));
        }
        if let Some(x) = obj_map.iter().find(|x| x.0 >= target.num_objects()) {
            return Err(Error::ObjectNotInTarget(format!("{x}")));
        }
        if mor_map.iter().any(|m| m.0 >= target.num_morphisms()) {
            return Err(Error::NotAFunctor("morphism image out of range".into()));
        }
        let f = FinFunctor { source, target, obj_map, mor_map };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        for m in s.morphism_ids() {
            let fm = self.mor_map[m.0];
            if t.src(fm) != self.obj_map[s.src(m).0] || t.dst(fm) != self.obj_map[s.dst(m).0] {
                return Err(Error::NotAFunctor(format!(
                    "`{}` ↦ `{}` does not respect endpoints",
                    s.mor_name(m),
                    t.mor_name(fm)
                )));
            }
        }
        for x in s.object_ids() {
            if self.mor_map[s.identity(x).0] != t.identity(self.obj_map[x.0]) {
                return Err(Error::NotAFunctor(format!("identity of `{}` not preserved", s.obj_name(x))));
            }
        }
        for f in s.morphism_ids() {
            for &g in s.outgoing(s.dst(f)) {
                let lhs = self.mor_map[s.compose_unchecked(g, f).0];
                let rhs = t.compose_unchecked(self.mor_map[g.0], self.mor_map[f.0]);
                if lhs != rhs {
                    return Err(Error::NotAFunctor(format!(
                        "composite `{}`∘`{}` not preserved",
                        s.mor_name(g),
                        s.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(cat: Arc<FinCat>) -> FinFunctor {
        let obj_map = cat.object_ids().collect();
        let mor_map = cat.morphism_ids().collect();
        FinFunctor { source: cat.clone(), target: cat, obj_map, mor_map }
    }

    /// Constant functor at `obj`.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, obj: ObjId) -> FinFunctor {
        let id = target.identity(obj);
        let obj_map = vec![obj; source.num_objects()];
        let mor_map = vec![id; source.num_morphisms()];
        FinFunctor { source, target, obj_map, mor_map }
    }

    /// The unique functor to 𝟙.
    pub fn to_terminal(source: Arc<FinCat>) -> FinFunctor {
        FinFunctor::constant(source, Arc::new(FinCat::terminal()), ObjId(0))
    }

    /// The functor 𝟙 → `target` picking `obj`.
    pub fn point(target: Arc<FinCat>, obj: ObjId) -> FinFunctor {
        let id = target.identity(obj);
        FinFunctor {
            source: Arc::new(FinCat::terminal()),
            target,
            obj_map: vec![obj],
            mor_map: vec![id],
        }
    }

    /// Build from name-level maps. Identities may be omitted from `morphisms`.
    pub fn from_names(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: &[(String, String)],
        morphisms: &[(String, String)],
    ) -> Result<FinFunctor> {
        let mut obj_map = vec![None; source.num_objects()];
        for (a, b) in objects {
            let x = source.object_by_name(a).ok_or_else(|| Error::UnknownName(a.clone()))?;
            let y = target.object_by_name(b).ok_or_else(|| Error::ObjectNotInTarget(b.clone()))?;
            obj_map[x.0] = Some(y);
        }
        let obj_map = obj_map
            .into_iter()
            .enumerate()
            .map(|(i, y)| {
                y.ok_or_else(|| Error::NotAFunctor(format!("object `{}` unmapped", source.obj_name(ObjId(i)))))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut mor_map = vec![None; source.num_morphisms()];
        for (a, b) in morphisms {
            let m = source.morphism_by_name(a).ok_or_else(|| Error::UnknownName(a.clone()))?;
            let n = target.morphism_by_name(b).ok_or_else(|| Error::UnknownName(b.clone()))?;
            mor_map[m.0] = Some(n);
        }
        for x in source.object_ids() {
            let id = source.identity(x);
            if mor_map[id.0].is_none() {
                mor_map[id.0] = Some(target.identity(obj_map[x.0]));
            }
        }
        let mor_map = mor_map
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                n.ok_or_else(|| Error::NotAFunctor(format!("morphism `{}` unmapped", source.mor_name(MorId(i)))))
            })
            .collect::<Result<Vec<_>>>()?;
        FinFunctor::new(source, target, obj_map, mor_map)
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.obj_map[x.0]
    }

    pub fn mor(&self, m: MorId) -> MorId {
        self.mor_map[m.0]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn mor_map(&self) -> &[MorId] {
        &self.mor_map
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if *self.target != *other.source {
            return Err(Error::NotAFunctor("composite of non-matching functors".into()));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&x| other.obj(x)).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor(m)).collect(),
        })
    }

    /// The same maps viewed as a functor between opposite categories.
    pub fn opposite(&self) -> FinFunctor {
        FinFunctor {
            source: Arc::new(self.source.opposite()),
            target: Arc::new(self.target.opposite()),
            obj_map: self.obj_map.clone(),
            mor_map: self.mor_map.clone(),
        }
    }

    /// `self × other` between product categories.
    pub fn product(&self, other: &FinFunctor) -> FinFunctor {
        let (s, t) = (self.source.product(&other.source), self.target.product(&other.target));
        let (sn, sm) = (other.source.num_objects(), other.source.num_morphisms());
        let (tn, tm) = (other.target.num_objects(), other.target.num_morphisms());
        let obj_map = (0..s.num_objects())
            .map(|i| ObjId(self.obj(ObjId(i / sn)).0 * tn + other.obj(ObjId(i % sn)).0))
            .collect();
        let mor_map = (0..s.num_morphisms())
            .map(|i| MorId(self.mor(MorId(i / sm)).0 * tm + other.mor(MorId(i % sm)).0))
            .collect();
        FinFunctor { source: Arc::new(s), target: Arc::new(t), obj_map, mor_map }
    }

    /// Projection `C × D → C` (first = true) or `C × D → D`.
    pub fn projection(left: &Arc<FinCat>, right: &Arc<FinCat>, first: bool) -> FinFunctor {
        let prod = Arc::new(left.product(right));
        let (rn, rm) = (right.num_objects(), right.num_morphisms());
        let (target, obj_map, mor_map) = if first {
            (
                left.clone(),
                (0..prod.num_objects()).map(|i| ObjId(i / rn)).collect(),
                (0..prod.num_morphisms()).map(|i| MorId(i / rm)).collect(),
            )
        } else {
            (
                right.clone(),
                (0..prod.num_objects()).map(|i| ObjId(i % rn)).collect(),
                (0..prod.num_morphisms()).map(|i| MorId(i % rm)).collect(),
            )
        };
        FinFunctor { source: prod, target, obj_map, mor_map }
    }

    /// Re-check functoriality; used by tests and property checks.
    pub fn validate(&self) -> Result<()> {
        self.check()
    }

    /// True when both categories and all maps are identities.
    pub fn is_identity(&self) -> bool {
        self.source == self.target
            && self.obj_map.iter().enumerate().all(|(i, x)| x.0 == i)
            && self.mor_map.iter().enumerate().all(|(i, m)| m.0 == i)
    }

    pub(crate) fn from_parts_unchecked(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        mor_map: Vec<MorId>,
    ) -> FinFunctor {
        FinFunctor { source, target, obj_map, mor_map }
    }
}
