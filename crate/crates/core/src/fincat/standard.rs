//! Standard finite categories: terminal, intervals, posets, monoids,
//! opposites, products and disjoint unions.

use std::collections::HashMap;

use super::{FinCat, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

impl FinCat {
    /// The terminal category 𝟙.
    pub fn terminal() -> FinCat {
        FinCat::from_parts(
            vec!["*".into()],
            vec![Morphism { name: "id_*".into(), src: ObjId(0), dst: ObjId(0) }],
            vec![MorId(0)],
            |_, _| Some(MorId(0)),
        )
        .expect("terminal category")
    }

    /// The empty category.
    pub fn empty() -> FinCat {
        FinCat::from_parts(vec![], vec![], vec![], |_, _| None).expect("empty category")
    }

    /// The ordinal `[n] = {0 < 1 < ... < n}`.
    pub fn interval(n: usize) -> FinCat {
        let objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
        let relations = (0..n).map(|i| (i.to_string(), (i + 1).to_string())).collect::<Vec<_>>();
        FinCat::poset(&objects, &relations).expect("interval is a poset")
    }

    /// Poset generated by `relations` (pairs `a ≤ b`) under reflexive-transitive
    /// closure. Strict morphisms are named `a<b`, identities `id_a`.
    pub fn poset(objects: &[String], relations: &[(String, String)]) -> Result<FinCat> {
        let n = objects.len();
        let mut index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.as_str(), i).is_some() {
                return Err(Error::DuplicateName(o.clone()));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in relations {
            let ai = *index.get(a.as_str()).ok_or_else(|| Error::UnknownName(a.clone()))?;
            let bi = *index.get(b.as_str()).ok_or_else(|| Error::UnknownName(b.clone()))?;
            leq[ai][bi] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` and `{}` are distinct but related both ways",
                        objects[i], objects[j]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut pair_index = HashMap::new();
        let mut identities = vec![MorId(0); n];
        for i in 0..n {
            for j in 0..n {
                if leq[i][j] {
                    let name = if i == j {
                        identities[i] = MorId(morphisms.len());
                        format!("id_{}", objects[i])
                    } else {
                        format!("{}<{}", objects[i], objects[j])
                    };
                    pair_index.insert((i, j), MorId(morphisms.len()));
                    morphisms.push(Morphism { name, src: ObjId(i), dst: ObjId(j) });
                }
            }
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.src.0, m.dst.0)).collect();
        FinCat::from_parts(objects.to_vec(), morphisms, identities, |g, f| {
            pair_index.get(&(ends[f.0].0, ends[g.0].1)).copied()
        })
    }

    /// One-object category of a monoid; `table[g][f]` is the index of `g·f`.
    /// The unit is detected from the table.
    pub fn monoid(elements: &[String], table: &[Vec<usize>]) -> Result<FinCat> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::NotAMonoid("no elements".into()));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::NotAMonoid("table must be square over the elements".into()));
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAMonoid("no two-sided unit".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::NotAMonoid(format!(
                            "({} {} {}) is not associative",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let morphisms = elements
            .iter()
            .map(|e| Morphism { name: e.clone(), src: ObjId(0), dst: ObjId(0) })
            .collect();
        FinCat::from_parts(vec!["*".into()], morphisms, vec![MorId(unit)], |g, f| {
            Some(MorId(table[g.0][f.0]))
        })
        .map_err(|e| match e {
            Error::NonAssociative { h, g, f } => Error::NotAMonoid(format!("({h} {g} {f}) is not associative")),
            other => other,
        })
    }

    /// The cyclic group ℤ/n as a one-object category; element `k` is named
    /// `1` for k = 0, `t` for k = 1 and `t^k` otherwise.
    pub fn cyclic_group(n: usize) -> FinCat {
        assert!(n > 0);
        let names: Vec<String> = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            })
            .collect();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FinCat::monoid(&names, &table).expect("cyclic group")
    }

    /// The opposite category. Object and morphism indices and names are kept.
    pub fn opposite(&self) -> FinCat {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism { name: m.name.clone(), src: m.dst, dst: m.src })
            .collect();
        FinCat::from_parts(self.objects.clone(), morphisms, self.identities.clone(), |g, f| {
            self.compose(f, g)
        })
        .expect("opposite of a valid category")
    }

    /// Product category. Object `(x, y)` has index `x·|Ob D| + y` and
    /// morphism `(f, g)` has index `f·|Mor D| + g`.
    pub fn product(&self, other: &FinCat) -> FinCat {
        let (no, mo) = (other.num_objects(), other.num_morphisms());
        let mut objects = Vec::with_capacity(self.num_objects() * no);
        for x in &self.objects {
            for y in &other.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut morphisms = Vec::with_capacity(self.num_morphisms() * mo);
        for f in &self.morphisms {
            for g in &other.morphisms {
                morphisms.push(Morphism {
                    name: format!("({},{})", f.name, g.name),
                    src: ObjId(f.src.0 * no + g.src.0),
                    dst: ObjId(f.dst.0 * no + g.dst.0),
                });
            }
        }
        let identities = self
            .object_ids()
            .flat_map(|x| other.object_ids().map(move |y| (x, y)))
            .map(|(x, y)| MorId(self.identity(x).0 * mo + other.identity(y).0))
            .collect();
        FinCat::from_parts(objects, morphisms, identities, |g, f| {
            let (g1, g2) = (MorId(g.0 / mo), MorId(g.0 % mo));
            let (f1, f2) = (MorId(f.0 / mo), MorId(f.0 % mo));
            Some(MorId(self.compose(g1, f1)?.0 * mo + other.compose(g2, f2)?.0))
        })
        .expect("product of valid categories")
    }

    /// Disjoint union; names are prefixed with `0.` and `1.`.
    pub fn coproduct(&self, other: &FinCat) -> FinCat {
        let (n1, m1) = (self.num_objects(), self.num_morphisms());
        let objects = self
            .objects
            .iter()
            .map(|o| format!("0.{o}"))
            .chain(other.objects.iter().map(|o| format!("1.{o}")))
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism { name: format!("0.{}", m.name), src: m.src, dst: m.dst })
            .chain(other.morphisms.iter().map(|m| Morphism {
                name: format!("1.{}", m.name),
                src: ObjId(m.src.0 + n1),
                dst: ObjId(m.dst.0 + n1),
            }))
            .collect();
        let identities = self
            .identities
            .iter()
            .copied()
            .chain(other.identities.iter().map(|i| MorId(i.0 + m1)))
            .collect();
        FinCat::from_parts(objects, morphisms, identities, |g, f| match (g.0 < m1, f.0 < m1) {
            (true, true) => self.compose(g, f),
            (false, false) => other.compose(MorId(g.0 - m1), MorId(f.0 - m1)).map(|r| MorId(r.0 + m1)),
            _ => None,
        })
        .expect("coproduct of valid categories")
    }
}
