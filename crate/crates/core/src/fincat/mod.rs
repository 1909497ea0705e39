//! Finite categories given by total enumeration.
//!
//! A [`FinCat`] stores its objects, morphisms and a dense-per-row composition
//! table. Every constructor runs the same exhaustive validation (identity
//! laws, associativity over all composable triples), so a value of this type
//! is always a genuine category.

mod comma;
mod factorization;
mod functor;
mod standard;

pub use comma::Comma;
pub use factorization::Factorization;
pub use functor::FinFunctor;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorId(pub usize);

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

/// A finite category.
///
/// `compose(g, f)` is `g ∘ f` and is defined exactly when `dst(f) = src(g)`.
#[derive(Clone, Debug)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    incoming: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    in_pos: Vec<usize>,
    // table[g][in_pos[f]] = g ∘ f for every f with dst f = src g
    table: Vec<Vec<MorId>>,
    object_index: HashMap<String, ObjId>,
    morphism_index: HashMap<String, MorId>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
    }
}

impl Eq for FinCat {}

/// Name-level description of a category, as read from JSON.
///
/// Identities may be omitted: for each object the builder uses, in order,
/// an explicit `identities` entry, a morphism called `id_<obj>`, an
/// endomorphism that the given table already treats as an identity, or a
/// freshly added `id_<obj>`. Composites with identities are filled in when
/// absent but never overridden.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub compose: Vec<(String, String, String)>,
    pub identities: Option<Vec<(String, String)>>,
}

impl FinCat {
    /// Build a category from index-level data and a composition function,
    /// verifying every category axiom.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: impl Fn(MorId, MorId) -> Option<MorId>,
    ) -> Result<FinCat> {
        let n_obj = objects.len();
        let mut object_index = HashMap::with_capacity(n_obj);
        for (i, name) in objects.iter().enumerate() {
            if object_index.insert(name.clone(), ObjId(i)).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let mut morphism_index = HashMap::with_capacity(morphisms.len());
        for (i, m) in morphisms.iter().enumerate() {
            if m.src.0 >= n_obj || m.dst.0 >= n_obj {
                return Err(Error::Parse(format!("morphism `{}` has an out-of-range endpoint", m.name)));
            }
            if morphism_index.insert(m.name.clone(), MorId(i)).is_some() {
                return Err(Error::DuplicateName(m.name.clone()));
            }
        }
        if identities.len() != n_obj {
            return Err(Error::Parse("one identity per object required".into()));
        }

        let mut incoming = vec![Vec::new(); n_obj];
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut in_pos = vec![0; morphisms.len()];
        for (i, m) in morphisms.iter().enumerate() {
            in_pos[i] = incoming[m.dst.0].len();
            incoming[m.dst.0].push(MorId(i));
            outgoing[m.src.0].push(MorId(i));
        }

        let mut table = Vec::with_capacity(morphisms.len());
        for (gi, g) in morphisms.iter().enumerate() {
            let mut row = Vec::with_capacity(incoming[g.src.0].len());
            for &f in &incoming[g.src.0] {
                let fm = &morphisms[f.0];
                let gf = compose(MorId(gi), f).ok_or_else(|| Error::MissingComposite {
                    g: g.name.clone(),
                    f: fm.name.clone(),
                })?;
                let r = morphisms.get(gf.0).ok_or_else(|| {
                    Error::Parse(format!("composite index {} out of range", gf.0))
                })?;
                if r.src != fm.src || r.dst != g.dst {
                    return Err(Error::CompositionDomainMismatch {
                        g: g.name.clone(),
                        f: fm.name.clone(),
                        composite: r.name.clone(),
                    });
                }
                row.push(gf);
            }
            table.push(row);
        }

        let cat = FinCat {
            objects,
            morphisms,
            identities,
            incoming,
            outgoing,
            in_pos,
            table,
            object_index,
            morphism_index,
        };
        cat.check_axioms()?;
        Ok(cat)
    }

    fn check_axioms(&self) -> Result<()> {
        for (x, &id) in self.identities.iter().enumerate() {
            let idm = self.morphism(id);
            if idm.src.0 != x || idm.dst.0 != x {
                return Err(Error::MissingIdentity {
                    object: self.objects[x].clone(),
                    candidate: idm.name.clone(),
                    witness: idm.name.clone(),
                });
            }
            for &f in &self.incoming[x] {
                if self.compose(id, f) != Some(f) {
                    return Err(self.identity_failure(x, id, f));
                }
            }
            for &g in &self.outgoing[x] {
                if self.compose(g, id) != Some(g) {
                    return Err(self.identity_failure(x, id, g));
                }
            }
        }
        for f in self.morphism_ids() {
            for &g in &self.outgoing[self.dst(f).0] {
                let gf = self.compose_unchecked(g, f);
                for &h in &self.outgoing[self.dst(g).0] {
                    let lhs = self.compose_unchecked(h, gf);
                    let rhs = self.compose_unchecked(self.compose_unchecked(h, g), f);
                    if lhs != rhs {
                        return Err(Error::NonAssociative {
                            h: self.mor_name(h).to_string(),
                            g: self.mor_name(g).to_string(),
                            f: self.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn identity_failure(&self, x: usize, id: MorId, witness: MorId) -> Error {
        Error::MissingIdentity {
            object: self.objects[x].clone(),
            candidate: self.mor_name(id).to_string(),
            witness: self.mor_name(witness).to_string(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphism_ids(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.0]
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn mor_name(&self, m: MorId) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphism_index.get(name).copied()
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].src
    }

    pub fn dst(&self, m: MorId) -> ObjId {
        self.morphisms[m.0].dst
    }

    pub fn identity(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identities[self.src(m).0] == m
    }

    /// Morphisms with the given target, in ascending index order.
    pub fn incoming(&self, x: ObjId) -> &[MorId] {
        &self.incoming[x.0]
    }

    /// Morphisms with the given source, in ascending index order.
    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.outgoing[x.0]
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> impl Iterator<Item = MorId> + '_ {
        self.outgoing[x.0].iter().copied().filter(move |&m| self.dst(m) == y)
    }

    /// `g ∘ f`, or `None` when `dst f ≠ src g`.
    pub fn compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.dst(f) != self.src(g) {
            return None;
        }
        Some(self.table[g.0][self.in_pos[f.0]])
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn compose_unchecked(&self, g: MorId, f: MorId) -> MorId {
        debug_assert_eq!(self.dst(f), self.src(g));
        self.table[g.0][self.in_pos[f.0]]
    }

    /// Inverse of `m`, if it is an isomorphism.
    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        let (a, b) = (self.src(m), self.dst(m));
        self.hom(b, a).find(|&n| {
            self.compose_unchecked(n, m) == self.identity(a)
                && self.compose_unchecked(m, n) == self.identity(b)
        })
    }

    pub fn is_groupoid(&self) -> bool {
        self.morphism_ids().all(|m| self.inverse(m).is_some())
    }

    /// Validate a name-level description.
    pub fn from_raw(raw: &RawCategory) -> Result<FinCat> {
        let mut objects = raw.objects.clone();
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), ObjId(i)).is_some() {
                return Err(Error::DuplicateName(o.clone()));
            }
        }
        let lookup_obj = |name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownName(name.to_string()))
        };
        let mut morphisms = Vec::new();
        let mut morphism_index: HashMap<String, MorId> = HashMap::new();
        for (name, s, d) in &raw.morphisms {
            let m = Morphism { name: name.clone(), src: lookup_obj(s)?, dst: lookup_obj(d)? };
            if morphism_index.insert(name.clone(), MorId(morphisms.len())).is_some() {
                return Err(Error::DuplicateName(name.clone()));
            }
            morphisms.push(m);
        }
        let lookup_mor = |idx: &HashMap<String, MorId>, name: &str| {
            idx.get(name).copied().ok_or_else(|| Error::UnknownName(name.to_string()))
        };

        let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
        for (g, f, gf) in &raw.compose {
            let (gi, fi, ri) = (
                lookup_mor(&morphism_index, g)?,
                lookup_mor(&morphism_index, f)?,
                lookup_mor(&morphism_index, gf)?,
            );
            let (gm, fm, rm) = (&morphisms[gi.0], &morphisms[fi.0], &morphisms[ri.0]);
            if fm.dst != gm.src || rm.src != fm.src || rm.dst != gm.dst {
                return Err(Error::CompositionDomainMismatch {
                    g: g.clone(),
                    f: f.clone(),
                    composite: gf.clone(),
                });
            }
            if let Some(prev) = table.insert((gi, fi), ri) {
                if prev != ri {
                    return Err(Error::ConflictingComposite { g: g.clone(), f: f.clone() });
                }
            }
        }

        let explicit: HashMap<String, String> = raw
            .identities
            .as_ref()
            .map(|v| v.iter().cloned().collect())
            .unwrap_or_default();
        for o in explicit.keys() {
            lookup_obj(o)?;
        }
        let mut identities = Vec::with_capacity(objects.len());
        for x in 0..objects.len() {
            let oname = objects[x].clone();
            let chosen = if let Some(mname) = explicit.get(&oname) {
                Some(lookup_mor(&morphism_index, mname)?)
            } else if let Some(&m) = morphism_index.get(&format!("id_{oname}")) {
                Some(m)
            } else {
                detect_identity(x, &morphisms, &table)
            };
            let id = match chosen {
                Some(m) => m,
                None => {
                    let name = format!("id_{oname}");
                    let m = MorId(morphisms.len());
                    if morphism_index.insert(name.clone(), m).is_some() {
                        return Err(Error::DuplicateName(name));
                    }
                    morphisms.push(Morphism { name, src: ObjId(x), dst: ObjId(x) });
                    m
                }
            };
            identities.push(id);
        }
        // fill identity composites that were left implicit
        for (x, &id) in identities.iter().enumerate() {
            for (i, m) in morphisms.iter().enumerate() {
                if m.dst.0 == x {
                    table.entry((id, MorId(i))).or_insert(MorId(i));
                }
                if m.src.0 == x {
                    table.entry((MorId(i), id)).or_insert(MorId(i));
                }
            }
        }
        objects.shrink_to_fit();
        FinCat::from_parts(objects, morphisms, identities, |g, f| table.get(&(g, f)).copied())
    }

    /// Name-level description of this category (inverse of [`FinCat::from_raw`]).
    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        for f in self.morphism_ids() {
            for &g in self.outgoing(self.dst(f)) {
                compose.push((
                    self.mor_name(g).to_string(),
                    self.mor_name(f).to_string(),
                    self.mor_name(self.compose_unchecked(g, f)).to_string(),
                ));
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| (m.name.clone(), self.objects[m.src.0].clone(), self.objects[m.dst.0].clone()))
                .collect(),
            compose,
            identities: Some(
                self.object_ids()
                    .map(|x| (self.obj_name(x).to_string(), self.mor_name(self.identity(x)).to_string()))
                    .collect(),
            ),
        }
    }

    /// Subcategory on the given objects and morphisms, with its inclusion.
    ///
    /// The morphism predicate must select a set closed under composition and
    /// containing the identities of the selected objects.
    pub fn subcategory(
        self: &std::sync::Arc<Self>,
        keep_obj: impl Fn(ObjId) -> bool,
        keep_mor: impl Fn(MorId) -> bool,
    ) -> Result<FinFunctor> {
        let objs: Vec<ObjId> = self.object_ids().filter(|&x| keep_obj(x)).collect();
        let mut obj_new = vec![None; self.num_objects()];
        for (i, &x) in objs.iter().enumerate() {
            obj_new[x.0] = Some(ObjId(i));
        }
        let mors: Vec<MorId> = self
            .morphism_ids()
            .filter(|&m| keep_mor(m) && obj_new[self.src(m).0].is_some() && obj_new[self.dst(m).0].is_some())
            .collect();
        let mut mor_new = vec![None; self.num_morphisms()];
        for (i, &m) in mors.iter().enumerate() {
            mor_new[m.0] = Some(MorId(i));
        }
        let morphisms = mors
            .iter()
            .map(|&m| Morphism {
                name: self.mor_name(m).to_string(),
                src: obj_new[self.src(m).0].unwrap(),
                dst: obj_new[self.dst(m).0].unwrap(),
            })
            .collect();
        let identities = objs
            .iter()
            .map(|&x| {
                mor_new[self.identity(x).0]
                    .ok_or_else(|| Error::NotAFunctor(format!("identity of `{}` not kept", self.obj_name(x))))
            })
            .collect::<Result<Vec<_>>>()?;
        let sub = FinCat::from_parts(
            objs.iter().map(|&x| self.obj_name(x).to_string()).collect(),
            morphisms,
            identities,
            |g, f| mor_new[self.compose(mors[g.0], mors[f.0])?.0],
        )?;
        FinFunctor::new(
            std::sync::Arc::new(sub),
            self.clone(),
            objs,
            mors,
        )
    }
}

fn detect_identity(
    x: usize,
    morphisms: &[Morphism],
    table: &HashMap<(MorId, MorId), MorId>,
) -> Option<MorId> {
    morphisms.iter().enumerate().find_map(|(e, em)| {
        if em.src.0 != x || em.dst.0 != x {
            return None;
        }
        let e = MorId(e);
        let ok = morphisms.iter().enumerate().all(|(i, m)| {
            let i = MorId(i);
            (m.dst.0 != x || table.get(&(e, i)) == Some(&i))
                && (m.src.0 != x || table.get(&(i, e)) == Some(&i))
        });
        ok.then_some(e)
    })
}

#[cfg(test)]
pub(crate) mod tests;
