//! Simplices of the nerve as composable chains, simplicial operators, the
//! induced functor `Δ/u`, and the comparison functor `ν: Δ/C → FC`.
//!
//! An `n`-simplex is a chain `C₀ ←f₁− C₁ ←f₂− ⋯ ←f_n− C_n`; its vertices are
//! `C₀ = dst f₁` and `C_i = src f_i`. Order-preserving maps are value lists.

mod nerve;

#[cfg(test)]
mod tests;

pub use nerve::{nerve_level, nondegenerate_level, Nerve, NerveLevel};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, MorId, ObjId};

/// An `n`-simplex: the top vertex `C₀` and the arrows `f₁, …, f_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    top: ObjId,
    arrows: Vec<MorId>,
}

impl Simplex {
    /// The 0-simplex at `x`.
    pub fn object(x: ObjId) -> Simplex {
        Simplex { top: x, arrows: Vec::new() }
    }

    /// A chain of at least one arrow, checked for composability.
    pub fn chain(cat: &FinCat, arrows: Vec<MorId>) -> Result<Simplex> {
        let first = *arrows.first().ok_or_else(|| Error::NotAChain("empty chain; use a 0-simplex".into()))?;
        if let Some(m) = arrows.iter().find(|m| m.0 >= cat.num_morphisms()) {
            return Err(Error::NotAChain(format!("unknown morphism {m}")));
        }
        for w in arrows.windows(2) {
            if cat.src(w[0]) != cat.dst(w[1]) {
                return Err(Error::NotAChain(format!(
                    "`{}` and `{}` are not composable",
                    cat.mor_name(w[0]),
                    cat.mor_name(w[1])
                )));
            }
        }
        Ok(Simplex { top: cat.dst(first), arrows })
    }

    pub(crate) fn from_parts(top: ObjId, arrows: Vec<MorId>) -> Simplex {
        Simplex { top, arrows }
    }

    pub fn dim(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[MorId] {
        &self.arrows
    }

    /// `C₀`.
    pub fn top(&self) -> ObjId {
        self.top
    }

    /// `C_i`.
    pub fn vertex(&self, cat: &FinCat, i: usize) -> ObjId {
        if i == 0 {
            self.top
        } else {
            cat.src(self.arrows[i - 1])
        }
    }

    /// `C_n`.
    pub fn bottom(&self, cat: &FinCat) -> ObjId {
        self.vertex(cat, self.dim())
    }

    pub fn vertices(&self, cat: &FinCat) -> Vec<ObjId> {
        (0..=self.dim()).map(|i| self.vertex(cat, i)).collect()
    }

    /// The composite `f_{i+1}∘⋯∘f_j: C_j → C_i` for `i ≤ j` (an identity when `i = j`).
    pub fn segment(&self, cat: &FinCat, i: usize, j: usize) -> MorId {
        debug_assert!(i <= j && j <= self.dim());
        if i == j {
            return cat.identity(self.vertex(cat, i));
        }
        let mut acc = self.arrows[j - 1];
        for k in (i..j - 1).rev() {
            acc = cat.compose_unchecked(self.arrows[k], acc);
        }
        acc
    }

    /// True iff some arrow is an identity.
    pub fn is_degenerate(&self, cat: &FinCat) -> bool {
        self.arrows.iter().any(|&m| cat.is_identity(m))
    }

    /// The `i`-th face `s∘δ^i`, computed directly.
    pub fn face(&self, cat: &FinCat, i: usize) -> Simplex {
        let n = self.dim();
        assert!(n > 0 && i <= n, "face {i} of a {n}-simplex");
        let mut arrows = Vec::with_capacity(n - 1);
        if i == 0 {
            arrows.extend_from_slice(&self.arrows[1..]);
            return Simplex { top: cat.src(self.arrows[0]), arrows };
        }
        arrows.extend_from_slice(&self.arrows[..i - 1]);
        if i == n {
            // drop the last arrow
        } else {
            arrows.push(cat.compose_unchecked(self.arrows[i - 1], self.arrows[i]));
            arrows.extend_from_slice(&self.arrows[i + 1..]);
        }
        Simplex { top: self.top, arrows }
    }

    /// The `j`-th degeneracy `s∘σ^j`, repeating vertex `j`.
    pub fn degeneracy(&self, cat: &FinCat, j: usize) -> Simplex {
        assert!(j <= self.dim());
        let mut arrows = self.arrows.clone();
        arrows.insert(j, cat.identity(self.vertex(cat, j)));
        Simplex { top: self.top, arrows }
    }

    /// Canonical key: `f1.f2.….fn` by morphism names, or the object name.
    pub fn key(&self, cat: &FinCat) -> String {
        if self.arrows.is_empty() {
            cat.obj_name(self.top).to_string()
        } else {
            self.arrows.iter().map(|&m| cat.mor_name(m)).collect::<Vec<_>>().join(".")
        }
    }

    /// Parse a canonical key.
    pub fn from_key(cat: &FinCat, key: &str) -> Result<Simplex> {
        if let Some(x) = cat.object_by_name(key) {
            return Ok(Simplex::object(x));
        }
        let arrows = key
            .split('.')
            .map(|n| cat.morphism_by_name(n).ok_or_else(|| Error::UnknownName(n.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Simplex::chain(cat, arrows)
    }
}

/// An order-preserving map `σ: [n] → [m]`, stored as the values `σ(0..=n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderMap {
    values: Vec<usize>,
    target: usize,
}

impl fmt::Display for OrderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}→[{}]", self.values, self.target)
    }
}

impl OrderMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<OrderMap> {
        if values.is_empty()
            || values.windows(2).any(|w| w[0] > w[1])
            || values.iter().any(|&v| v > target)
        {
            return Err(Error::NotOrderPreserving(values));
        }
        Ok(OrderMap { values, target })
    }

    pub fn identity(n: usize) -> OrderMap {
        OrderMap { values: (0..=n).collect(), target: n }
    }

    /// `δ^i: [n] → [n+1]`, skipping `i`.
    pub fn coface(i: usize, n: usize) -> OrderMap {
        assert!(i <= n + 1);
        OrderMap { values: (0..=n).map(|k| if k < i { k } else { k + 1 }).collect(), target: n + 1 }
    }

    /// `σ^j: [n+1] → [n]`, repeating `j`.
    pub fn codegeneracy(j: usize, n: usize) -> OrderMap {
        assert!(j <= n);
        OrderMap { values: (0..=n + 1).map(|k| if k <= j { k } else { k - 1 }).collect(), target: n }
    }

    /// Every order-preserving map `[n] → [m]`.
    pub fn all(n: usize, m: usize) -> Vec<OrderMap> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        fn rec(n: usize, m: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<OrderMap>) {
            if cur.len() == n + 1 {
                out.push(OrderMap { values: cur.clone(), target: m });
                return;
            }
            for v in lo..=m {
                cur.push(v);
                rec(n, m, v, cur, out);
                cur.pop();
            }
        }
        rec(n, m, 0, &mut cur, &mut out);
        out
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn value(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target_dim(&self) -> usize {
        self.target
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &OrderMap) -> Result<OrderMap> {
        if other.target != self.source_dim() {
            return Err(Error::InvalidSimplexMorphism(format!("cannot compose {self} after {other}")));
        }
        Ok(OrderMap { values: other.values.iter().map(|&v| self.values[v]).collect(), target: self.target })
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.target == self.source_dim() && self.is_injective()
    }
}

/// The chain of `g∘σ`: entry `i` is `g_{σ(i−1)+1}∘⋯∘g_{σ(i)}`, or an identity
/// when `σ(i−1) = σ(i)`.
pub fn apply_simplex_map(cat: &FinCat, sigma: &OrderMap, g: &Simplex) -> Result<Simplex> {
    if sigma.target_dim() != g.dim() {
        return Err(Error::InvalidSimplexMorphism(format!(
            "{sigma} applied to a {}-simplex",
            g.dim()
        )));
    }
    let v = sigma.values();
    let arrows = (1..v.len()).map(|i| g.segment(cat, v[i - 1], v[i])).collect();
    Ok(Simplex { top: g.vertex(cat, v[0]), arrows })
}

/// A morphism `σ: f → g` of `Δ/C` with `f = g∘σ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplexMorphism {
    pub source: Simplex,
    pub target: Simplex,
    pub map: OrderMap,
}

impl SimplexMorphism {
    pub fn new(cat: &FinCat, source: Simplex, target: Simplex, map: OrderMap) -> Result<SimplexMorphism> {
        if apply_simplex_map(cat, &map, &target)? != source {
            return Err(Error::InvalidSimplexMorphism(format!(
                "{} is not {} ∘ {map}",
                source.key(cat),
                target.key(cat)
            )));
        }
        Ok(SimplexMorphism { source, target, map })
    }

    /// The morphism `σ: g∘σ → g`.
    pub fn along(cat: &FinCat, map: OrderMap, target: Simplex) -> Result<SimplexMorphism> {
        let source = apply_simplex_map(cat, &map, &target)?;
        Ok(SimplexMorphism { source, target, map })
    }

    /// `self ∘ other` (other: e → f, self: f → g).
    pub fn compose(&self, other: &SimplexMorphism) -> Result<SimplexMorphism> {
        if other.target != self.source {
            return Err(Error::InvalidSimplexMorphism("non-composable simplex morphisms".into()));
        }
        Ok(SimplexMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&other.map)?,
        })
    }
}

/// `ν` on objects: the composite `f₁∘⋯∘f_n: C_n → C₀`.
pub fn nu_object(cat: &FinCat, s: &Simplex) -> MorId {
    s.segment(cat, 0, s.dim())
}

/// `ν` on morphisms: for `σ: f → g` (f of dim m, g of dim n) the pair
/// `(α, β)` with `α = g_{σ(m)+1}∘⋯∘g_n` and `β = g₁∘⋯∘g_{σ(0)}`, so that
/// `ν(g) = β∘ν(f)∘α`.
pub fn nu_morphism(cat: &FinCat, sigma: &OrderMap, g: &Simplex) -> (MorId, MorId) {
    let n = g.dim();
    let m = sigma.source_dim();
    (g.segment(cat, sigma.value(m), n), g.segment(cat, 0, sigma.value(0)))
}

/// `ν` on a validated simplex morphism.
pub fn nu_simplex_morphism(cat: &FinCat, s: &SimplexMorphism) -> (MorId, MorId) {
    nu_morphism(cat, &s.map, &s.target)
}

/// `Δ/u`: apply `u` entrywise.
pub fn delta_u(u: &FinFunctor, s: &Simplex) -> Simplex {
    Simplex { top: u.obj(s.top), arrows: s.arrows.iter().map(|&m| u.mor(m)).collect() }
}
