//! Seeded desk-scale corpus: categories, coefficient systems, functors and
//! split fibrations used by the acceptance suite.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{pullback_system, CoeffSystem, KindSpec, Variance};
use crate::error::Result;
use crate::exactalg::{Diagram, Matrix, Z};
use crate::fibration::{grothendieck_construction, SplitFibration, StrictFunctor};
use crate::fincat::{Factorization, FinCat, FinFunctor, MorId, ObjId};
use crate::simplex::{nerve_level, Simplex};

/// A labelled corpus entry.
#[derive(Clone, Debug)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

fn named<T>(name: impl Into<String>, value: T) -> Named<T> {
    Named { name: name.into(), value }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// The four-point model of the circle: `a, b < c, d`.
pub fn circle() -> FinCat {
    let rel = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")].map(|(x, y)| (x.to_string(), y.to_string()));
    FinCat::poset(&names(&["a", "b", "c", "d"]), &rel).expect("circle poset")
}

/// `{e, s}` with `s·s = s`.
pub fn idempotent_monoid() -> FinCat {
    FinCat::monoid(&names(&["e", "s"]), &[vec![0, 1], vec![1, 1]]).expect("idempotent monoid")
}

/// A random poset on at most `max_objects` points.
pub fn random_poset(rng: &mut impl Rng, max_objects: usize) -> FinCat {
    let n = rng.gen_range(1..=max_objects);
    let objs: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.5) {
                rel.push((objs[i].clone(), objs[j].clone()));
            }
        }
    }
    FinCat::poset(&objs, &rel).expect("upper-triangular relations are antisymmetric")
}

/// A random poset with a top element adjoined.
pub fn random_poset_with_top(rng: &mut impl Rng, max_objects: usize) -> FinCat {
    let p = random_poset(rng, max_objects);
    let mut objs = p.objects().to_vec();
    let mut rel: Vec<(String, String)> = p
        .morphism_ids()
        .filter(|&m| !p.is_identity(m))
        .map(|m| (p.obj_name(p.src(m)).to_string(), p.obj_name(p.dst(m)).to_string()))
        .collect();
    rel.extend(objs.iter().map(|o| (o.clone(), "top".to_string())));
    objs.push("top".into());
    FinCat::poset(&objs, &rel).expect("adjoining a top keeps a partial order")
}

/// No composite of non-identity arrows is an identity.
pub fn reflects_identities(c: &FinCat) -> bool {
    c.morphism_ids().filter(|&f| !c.is_identity(f)).all(|f| {
        c.outgoing(c.dst(f)).iter().all(|&g| c.is_identity(g) || !c.is_identity(c.compose_unchecked(g, f)))
    })
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix<Z> {
    let v: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-2..=2)).collect();
    Matrix::from_i64_shaped(rows, cols, &v)
}

/// A random unimodular matrix and its inverse, as a product of elementary matrices.
fn random_unimodular(rng: &mut impl Rng, r: usize) -> (Matrix<Z>, Matrix<Z>) {
    let (mut a, mut inv) = (Matrix::identity(r), Matrix::identity(r));
    if r < 2 {
        return (a, inv);
    }
    for _ in 0..3 {
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let c = rng.gen_range(-2i64..=2);
        let mut e = vec![0i64; r * r];
        let mut e_inv = vec![0i64; r * r];
        for k in 0..r {
            e[k * r + k] = 1;
            e_inv[k * r + k] = 1;
        }
        e[i * r + j] = c;
        e_inv[i * r + j] = -c;
        a = Matrix::from_i64_shaped(r, r, &e).mul(&a).expect("square");
        inv = inv.mul(&Matrix::from_i64_shaped(r, r, &e_inv)).expect("square");
    }
    (a, inv)
}

/// A random functor on a category that reflects identities: every value
/// retracts onto a common `Z^k` and non-identity arrows act through it,
/// then each value is twisted by a random unimodular change of basis.
pub fn retract_diagram(rng: &mut impl Rng, cat: &Arc<FinCat>, max_rank: usize) -> Diagram<Z> {
    let k = rng.gen_range(0..=max_rank.min(1));
    let ranks: Vec<usize> = cat.object_ids().map(|_| k + rng.gen_range(0..=max_rank - k)).collect();
    let (mut p, mut q, mut twist) = (Vec::new(), Vec::new(), Vec::new());
    for &r in &ranks {
        let e = r - k;
        let (rr, s) = (random_matrix(rng, e, k), random_matrix(rng, k, e));
        p.push(Matrix::identity(k).vstack(&rr).expect("columns agree"));
        let left = Matrix::identity(k).sub(&s.mul(&rr).expect("shapes")).expect("shapes");
        q.push(left.hstack(&s).expect("rows agree"));
        twist.push(random_unimodular(rng, r));
    }
    let maps = cat
        .morphism_ids()
        .map(|m| {
            let (x, y) = (cat.src(m).0, cat.dst(m).0);
            if cat.is_identity(m) {
                return Matrix::identity(ranks[x]);
            }
            let core = p[y].mul(&q[x]).expect("shapes");
            twist[y].0.mul(&core).and_then(|c| c.mul(&twist[x].1)).expect("shapes")
        })
        .collect();
    Diagram::new(cat.clone(), ranks, maps).expect("retractions give functors")
}

/// The regular representation `F(g) e_h = e_{g∘h}` of a one-object category.
pub fn regular_representation(cat: &Arc<FinCat>) -> Diagram<Z> {
    let n = cat.num_morphisms();
    let maps = cat
        .morphism_ids()
        .map(|g| {
            let entries = (0..n)
                .map(|row| {
                    (0..n)
                        .filter(|&h| cat.compose_unchecked(g, MorId(h)).0 == row)
                        .map(|h| (h, Z::from(1)))
                        .collect()
                })
                .collect();
            Matrix::from_row_entries(n, n, entries)
        })
        .collect();
    Diagram::new(cat.clone(), vec![n], maps).expect("left multiplication is functorial")
}

/// Exponents `k` with `m = t^k` in the cyclic group on generator `t`.
fn cyclic_exponents(cat: &FinCat) -> Option<Vec<usize>> {
    let t = cat.morphism_by_name("t")?;
    let mut exp = vec![usize::MAX; cat.num_morphisms()];
    let mut m = cat.identity(ObjId(0));
    for k in 0..cat.num_morphisms() {
        exp[m.0] = k;
        m = cat.compose_unchecked(t, m);
    }
    exp.iter().all(|&e| e != usize::MAX).then_some(exp)
}

/// The sign character `t^k ↦ (-1)^k` of an even cyclic group, in rank 1.
pub fn sign_representation(cat: &Arc<FinCat>) -> Option<Diagram<Z>> {
    let exp = cyclic_exponents(cat)?;
    if !cat.num_morphisms().is_multiple_of(2) {
        return None;
    }
    let maps = exp.iter().map(|&k| Matrix::scalar(1, Z::from(if k % 2 == 0 { 1 } else { -1 }))).collect();
    Some(Diagram::new(cat.clone(), vec![1], maps).expect("sign character"))
}

fn sign(exp: &Option<Vec<usize>>, m: MorId) -> i64 {
    match exp {
        Some(e) if e.len() % 2 == 0 && e[m.0] % 2 == 1 => -1,
        _ => 1,
    }
}

/// A random Baues–Wirsching diagram of rank ≤ `max_rank` on `FC`.
pub fn random_bw_diagram(rng: &mut impl Rng, fc: &Factorization, max_rank: usize) -> Diagram<Z> {
    let cat = fc.category();
    if reflects_identities(cat) {
        return retract_diagram(rng, cat, max_rank);
    }
    // groups: characters on both sides, twisted by a unimodular potential
    let base = fc.base();
    let exp = cyclic_exponents(base);
    let (left, right) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
    let r = rng.gen_range(1..=max_rank);
    let potentials: Vec<(Matrix<Z>, Matrix<Z>)> = cat.object_ids().map(|_| random_unimodular(rng, r)).collect();
    let maps = cat
        .morphism_ids()
        .map(|m| {
            let (_, alpha, beta) = fc.triple(m);
            let s = (if left { sign(&exp, alpha) } else { 1 }) * (if right { sign(&exp, beta) } else { 1 });
            let (x, y) = (cat.src(m).0, cat.dst(m).0);
            potentials[y].0.mul(&potentials[x].1).expect("square").scale(&Z::from(s))
        })
        .collect();
    Diagram::new(cat.clone(), vec![r; cat.num_objects()], maps).expect("characters give functors")
}

/// The functor `[n] → C`, `i ↦ C_{n-i}`, traced out by a simplex.
pub fn simplex_functor(cat: &Arc<FinCat>, s: &Simplex) -> FinFunctor {
    let n = s.dim();
    let interval = Arc::new(FinCat::interval(n));
    let objects = (0..=n).map(|i| s.vertex(cat, n - i)).collect();
    let morphisms = interval
        .morphism_ids()
        .map(|m| {
            let (i, j) = (interval.src(m).0, interval.dst(m).0);
            if i == j {
                cat.identity(s.vertex(cat, n - i))
            } else {
                s.segment(cat, n - j, n - i)
            }
        })
        .collect();
    FinFunctor::new(interval, cat.clone(), objects, morphisms).expect("a chain is a functor from an ordinal")
}

/// Pulled-back or truncated coefficient systems on one category.
fn systems_on(rng: &mut impl Rng, label: &str, c: &Arc<FinCat>) -> Result<Vec<Named<CoeffSystem<Z>>>> {
    let mut out = Vec::new();
    for v in [Variance::Covariant, Variance::Contravariant] {
        let tag = match v {
            Variance::Covariant => "cov",
            Variance::Contravariant => "contra",
        };
        out.push(named(format!("{label}/constant/{tag}"), CoeffSystem::constant(c.clone(), 1, v)));
        let on = match v {
            Variance::Covariant => c.clone(),
            Variance::Contravariant => Arc::new(c.opposite()),
        };
        if reflects_identities(c) {
            let d = retract_diagram(rng, &on, 2);
            out.push(named(format!("{label}/module/{tag}"), CoeffSystem::from_diagram(c.clone(), KindSpec::Module, v, d)?));
            let index = CoeffSystem::<Z>::index_category(c, KindSpec::Bimodule)?;
            let index = match v {
                Variance::Covariant => index,
                Variance::Contravariant => Arc::new(index.opposite()),
            };
            let d = retract_diagram(rng, &index, 1);
            out.push(named(format!("{label}/bimodule/{tag}"), CoeffSystem::from_diagram(c.clone(), KindSpec::Bimodule, v, d)?));
        } else if c.num_objects() == 1 {
            let d = regular_representation(&on);
            out.push(named(format!("{label}/regular/{tag}"), CoeffSystem::from_diagram(c.clone(), KindSpec::Module, v, d)?));
            if let Some(d) = sign_representation(&on) {
                out.push(named(format!("{label}/sign/{tag}"), CoeffSystem::from_diagram(c.clone(), KindSpec::Module, v, d)?));
            }
        }
        if v == Variance::Covariant {
            let fc = Factorization::new(c.clone())?;
            let d = random_bw_diagram(rng, &fc, 2);
            out.push(named(format!("{label}/bw/{tag}"), CoeffSystem::from_diagram(c.clone(), KindSpec::BauesWirsching, v, d)?));
        }
    }
    Ok(out)
}

/// The twisted circle: the local system with monodromy −1 around `P`.
pub fn twisted_circle() -> CoeffSystem<Z> {
    let p = Arc::new(circle());
    let z2 = Arc::new(FinCat::cyclic_group(2));
    let pairs = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>();
    let q = FinFunctor::from_names(
        p.clone(),
        z2.clone(),
        &pairs(&[("a", "*"), ("b", "*"), ("c", "*"), ("d", "*")]),
        &pairs(&[("a<c", "t"), ("a<d", "1"), ("b<c", "1"), ("b<d", "1")]),
    )
    .expect("any assignment on P is a functor");
    let maps = z2.morphism_ids().map(|m| Matrix::scalar(1, Z::from(if z2.is_identity(m) { 1 } else { -1 }))).collect();
    pullback_system(p, KindSpec::Local(q), Variance::Covariant, vec![1], maps).expect("−1 is invertible")
}

/// A random split fibration over a small poset: each transport is constant
/// at a chosen object of the fiber over its source, which is strict.
pub fn random_fibration(rng: &mut impl Rng) -> SplitFibration {
    let base = Arc::new(random_poset(rng, 3));
    let fibers: Vec<Arc<FinCat>> = base.object_ids().map(|_| Arc::new(random_poset(rng, 3))).collect();
    let picks: Vec<ObjId> = fibers.iter().map(|f| ObjId(rng.gen_range(0..f.num_objects()))).collect();
    let transports = base
        .morphism_ids()
        .map(|m| {
            let (s, d) = (base.src(m), base.dst(m));
            if base.is_identity(m) {
                FinFunctor::identity(fibers[s.0].clone())
            } else {
                FinFunctor::constant(fibers[d.0].clone(), fibers[s.0].clone(), picks[s.0])
            }
        })
        .collect();
    let g = StrictFunctor::new(base, fibers, transports).expect("constant transports at source picks are strict");
    grothendieck_construction(g).expect("strict functors always integrate")
}

/// Over `[1]`: `G(0) = [1]`, `G(1) = 𝟙`, transport picking `0`.
pub fn vertex_fibration() -> SplitFibration {
    let (b, g0) = (Arc::new(FinCat::interval(1)), Arc::new(FinCat::interval(1)));
    let fibers = vec![g0.clone(), Arc::new(FinCat::terminal())];
    let transports = b
        .morphism_ids()
        .map(|m| if b.is_identity(m) { FinFunctor::identity(fibers[b.src(m).0].clone()) } else { FinFunctor::point(g0.clone(), ObjId(0)) })
        .collect();
    grothendieck_construction(StrictFunctor::new(b, fibers, transports).expect("strict")).expect("construction")
}

/// The desk-scale corpus.
#[derive(Clone, Debug)]
pub struct Corpus {
    pub categories: Vec<Named<Arc<FinCat>>>,
    pub systems: Vec<Named<CoeffSystem<Z>>>,
    pub fibrations: Vec<Named<SplitFibration>>,
}

impl Corpus {
    pub fn generate(seed: u64) -> Result<Corpus> {
        let mut rng = rng(seed);
        let mut categories = vec![
            named("point", Arc::new(FinCat::terminal())),
            named("[1]", Arc::new(FinCat::interval(1))),
            named("[2]", Arc::new(FinCat::interval(2))),
            named("circle", Arc::new(circle())),
            named("Z/2", Arc::new(FinCat::cyclic_group(2))),
            named("Z/3", Arc::new(FinCat::cyclic_group(3))),
            named("idempotent", Arc::new(idempotent_monoid())),
        ];
        for i in 0..4 {
            categories.push(named(format!("poset#{i}"), Arc::new(random_poset(&mut rng, 4))));
        }
        let mut systems = Vec::new();
        for c in &categories {
            systems.extend(systems_on(&mut rng, &c.name, &c.value)?);
        }
        systems.push(named("circle/twisted", twisted_circle()));
        // explicit tables sampled from pulled-back systems
        for label in ["[2]/module/cov", "Z/2/sign/contra", "circle/bw/cov"] {
            let t = systems.iter().find(|s| s.name == label).expect("corpus label").value.sample_truncated(4)?;
            systems.push(named(format!("{label}/truncated"), t));
        }
        let p = Arc::new(circle());
        let point = Arc::new(FinCat::terminal());
        let mut fibrations = vec![
            named("torus", grothendieck_construction(StrictFunctor::constant(p.clone(), p.clone()))?),
            named("point-fibers", grothendieck_construction(StrictFunctor::constant(p.clone(), point.clone()))?),
            named("point-base", grothendieck_construction(StrictFunctor::constant(point, p.clone()))?),
            named("vertex", vertex_fibration()),
        ];
        for i in 0..4 {
            fibrations.push(named(format!("random#{i}"), random_fibration(&mut rng)));
        }
        Ok(Corpus { categories, systems, fibrations })
    }

    /// Pairs `(system, functor into its base)` for chain-map checks: the
    /// identity, and the chains traced out by a few random simplices.
    pub fn functor_samples(&self, seed: u64, per_system: usize) -> Vec<(usize, FinFunctor)> {
        let mut rng = rng(seed ^ 0x5eed);
        let mut out = Vec::new();
        for (i, t) in self.systems.iter().enumerate() {
            let c = t.value.base();
            out.push((i, FinFunctor::identity(c.clone())));
            for _ in 1..per_system {
                let n = rng.gen_range(0..=2);
                let level = nerve_level(c, n);
                if let Some(s) = level.choose(&mut rng) {
                    out.push((i, simplex_functor(c, s)));
                }
            }
        }
        out
    }
}
