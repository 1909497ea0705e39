use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::Simplex;
use crate::fincat::FinCat;

/// All `n`-simplices of a category in lexicographic order of their arrow
/// indices (objects in index order for `n = 0`), with a reverse index.
#[derive(Debug)]
pub struct NerveLevel {
    dim: usize,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
}

impl NerveLevel {
    fn new(dim: usize, simplices: Vec<Simplex>) -> NerveLevel {
        let index = simplices.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        NerveLevel { dim, simplices, index }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn get(&self, i: usize) -> &Simplex {
        &self.simplices[i]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }
}

/// The nerve of a finite category, generated lazily one level at a time.
/// Levels are computed once and shared.
#[derive(Debug)]
pub struct Nerve {
    cat: Arc<FinCat>,
    levels: RwLock<Vec<Arc<NerveLevel>>>,
}

impl Nerve {
    pub fn new(cat: Arc<FinCat>) -> Nerve {
        Nerve { cat, levels: RwLock::new(Vec::new()) }
    }

    pub fn category(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn level(&self, n: usize) -> Arc<NerveLevel> {
        if let Some(l) = self.levels.read().expect("nerve lock").get(n) {
            return l.clone();
        }
        let mut levels = self.levels.write().expect("nerve lock");
        while levels.len() <= n {
            let next = match levels.last() {
                None => NerveLevel::new(0, self.cat.object_ids().map(Simplex::object).collect()),
                Some(prev) => extend(&self.cat, prev),
            };
            levels.push(Arc::new(next));
        }
        levels[n].clone()
    }

    /// Indices of the nondegenerate simplices of level `n`.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        let level = self.level(n);
        (0..level.len()).filter(|&i| !level.get(i).is_degenerate(&self.cat)).collect()
    }
}

fn extend(cat: &FinCat, prev: &NerveLevel) -> NerveLevel {
    let mut out = Vec::new();
    if prev.dim == 0 {
        for m in cat.morphism_ids() {
            out.push(Simplex::from_parts(cat.dst(m), vec![m]));
        }
    } else {
        for s in &prev.simplices {
            let last = *s.arrows().last().unwrap();
            for &m in cat.incoming(cat.src(last)) {
                let mut arrows = s.arrows().to_vec();
                arrows.push(m);
                out.push(Simplex::from_parts(s.top(), arrows));
            }
        }
    }
    NerveLevel::new(prev.dim + 1, out)
}

/// All `n`-simplices of `cat`.
pub fn nerve_level(cat: &Arc<FinCat>, n: usize) -> Vec<Simplex> {
    Nerve::new(cat.clone()).level(n).simplices().to_vec()
}

/// The nondegenerate `n`-simplices of `cat`.
pub fn nondegenerate_level(cat: &Arc<FinCat>, n: usize) -> Vec<Simplex> {
    nerve_level(cat, n).into_iter().filter(|s| !s.is_degenerate(cat)).collect()
}
