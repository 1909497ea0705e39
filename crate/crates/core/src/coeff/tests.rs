use std::sync::Arc;

use super::*;
use crate::exactalg::{rank, Q, Z};
use crate::simplex::{apply_simplex_map, nerve_level};

fn interval(n: usize) -> Arc<FinCat> {
    Arc::new(FinCat::interval(n))
}

fn circle() -> Arc<FinCat> {
    let objs: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let rel = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect::<Vec<_>>();
    Arc::new(FinCat::poset(&objs, &rel).unwrap())
}

fn z2() -> Arc<FinCat> {
    Arc::new(FinCat::cyclic_group(2))
}

fn scalar(v: i64) -> Matrix<Z> {
    Matrix::from_i64(&[&[v]])
}

/// `F(x) = ℤ`, non-identity morphisms act by `v`. Functorial on [1].
fn module_on_interval(v: i64) -> CoeffSystem<Z> {
    let c = interval(1);
    let maps = c.morphism_ids().map(|m| if c.is_identity(m) { scalar(1) } else { scalar(v) }).collect();
    pullback_system(c, KindSpec::Module, Variance::Covariant, vec![1, 1], maps).unwrap()
}

/// A sign on each morphism that is multiplicative: `χ(m) = s(src)·s(dst)`,
/// or the sign character on `Bℤ/2`.
fn character(c: &FinCat, signs: &[i64]) -> Vec<i64> {
    c.morphism_ids()
        .map(|m| {
            if c.num_objects() == 1 && c.num_morphisms() == 2 {
                if c.is_identity(m) {
                    1
                } else {
                    signs[0]
                }
            } else {
                signs[c.src(m).0] * signs[c.dst(m).0]
            }
        })
        .collect()
}

/// Rank-one BW data `D(α, β) = χ(α)·χ'(β)`.
fn bw_characters(c: Arc<FinCat>, s1: &[i64], s2: &[i64]) -> CoeffSystem<Z> {
    let fc = Factorization::new(c.clone()).unwrap();
    let (chi, chi2) = (character(&c, s1), character(&c, s2));
    let maps = fc
        .category()
        .morphism_ids()
        .map(|m| {
            let (_, a, b) = fc.triple(m);
            scalar(chi[a.0] * chi2[b.0])
        })
        .collect();
    pullback_system(c, KindSpec::BauesWirsching, Variance::Covariant, vec![1; fc.category().num_objects()], maps)
        .unwrap()
}

fn sample_systems() -> Vec<CoeffSystem<Z>> {
    let mut out = vec![
        CoeffSystem::constant(circle(), 2, Variance::Covariant),
        module_on_interval(3),
        bw_characters(interval(2), &[1, -1, 1], &[-1, -1, 1]),
        bw_characters(z2(), &[-1], &[1]),
        bw_characters(circle(), &[1, -1, -1, 1], &[1, 1, -1, 1]),
    ];
    out.extend(out.clone().iter().map(|s| s.dual()).collect::<Vec<_>>());
    out
}

#[test]
fn constant_system_has_identity_maps() {
    let t = CoeffSystem::<Z>::constant(circle(), 1, Variance::Covariant);
    for n in 0..=3 {
        for g in nerve_level(t.base(), n) {
            assert_eq!(t.evaluate(&g).unwrap(), 1);
            for m in 0..=2 {
                for s in OrderMap::all(m, n) {
                    assert!(t.induced_map(&s, &g).unwrap().is_identity());
                }
            }
        }
    }
    assert_eq!(t.kind(), Some(Kind::Trivial));
}

#[test]
fn module_cofaces_on_an_edge() {
    let t = module_on_interval(3);
    let c = t.base().clone();
    let edge = Simplex::chain(&c, vec![c.morphism_by_name("0<1").unwrap()]).unwrap();
    assert_eq!(t.evaluate(&edge).unwrap(), 1);
    assert_eq!(edge.top(), c.object_by_name("1").unwrap());
    // δ⁰ keeps the source vertex 0 and transports along the edge;
    // δ¹ keeps the target vertex 1 itself
    assert_eq!(t.induced_map(&OrderMap::coface(0, 0), &edge).unwrap(), scalar(3));
    assert!(t.induced_map(&OrderMap::coface(1, 0), &edge).unwrap().is_identity());
}

#[test]
fn bw_evaluates_at_the_composite() {
    let c = interval(2);
    let fc = Factorization::new(c.clone()).unwrap();
    let ranks: Vec<usize> = (0..fc.category().num_objects()).map(|k| k % 3).collect();
    let maps = fc
        .category()
        .morphism_ids()
        .map(|m| {
            let cat = fc.category();
            let (s, d) = (ranks[cat.src(m).0], ranks[cat.dst(m).0]);
            if cat.is_identity(m) {
                Matrix::<Z>::identity(s)
            } else {
                Matrix::zero(d, s)
            }
        })
        .collect();
    let t = pullback_system(c.clone(), KindSpec::BauesWirsching, Variance::Covariant, ranks.clone(), maps).unwrap();
    for n in 0..=3 {
        for s in nerve_level(&c, n) {
            assert_eq!(t.evaluate(&s).unwrap(), ranks[nu_object(&c, &s).0]);
        }
    }
}

#[test]
fn bw_first_coface_of_a_two_simplex() {
    let t = bw_characters(interval(2), &[1, -1, 1], &[-1, -1, 1]);
    let c = t.base().clone();
    let g1 = c.morphism_by_name("1<2").unwrap();
    let g2 = c.morphism_by_name("0<1").unwrap();
    let g = Simplex::chain(&c, vec![g1, g2]).unwrap();
    let fc = t.pulled_back().unwrap().factorization().unwrap().clone();
    let f = g.face(&c, 0);
    let expected = fc.morphism(nu_object(&c, &f), c.identity(c.src(g2)), g1).unwrap();
    assert_eq!(t.induced_map(&OrderMap::coface(0, 1), &g).unwrap(), *t.pulled_back().unwrap().data().map(expected));
    // χ'(1<2) = s(1)s(2) = -1
    assert_eq!(t.induced_map(&OrderMap::coface(0, 1), &g).unwrap(), scalar(-1));
}

#[test]
fn induced_maps_are_functorial() {
    for t in sample_systems() {
        let c = t.base().clone();
        for b in 0..=3 {
            for g in nerve_level(&c, b) {
                for a in 0..=3 {
                    for s in OrderMap::all(a, b) {
                        let f = apply_simplex_map(&c, &s, &g).unwrap();
                        let ts = t.induced_map(&s, &g).unwrap();
                        for cd in 0..=2 {
                            for u in OrderMap::all(cd, a) {
                                let tu = t.induced_map(&u, &f).unwrap();
                                let both = t.induced_map(&s.compose(&u).unwrap(), &g).unwrap();
                                let expected = match t.variance() {
                                    Variance::Covariant => ts.mul(&tu).unwrap(),
                                    Variance::Contravariant => tu.mul(&ts).unwrap(),
                                };
                                assert_eq!(both, expected);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn duals_transpose_structure_maps() {
    for t in sample_systems() {
        let d = t.dual();
        assert_eq!(d.variance(), t.variance().flip());
        for n in 0..=2 {
            for g in nerve_level(t.base(), n) {
                for m in 0..=2 {
                    for s in OrderMap::all(m, n) {
                        assert_eq!(d.induced_map(&s, &g).unwrap(), t.induced_map(&s, &g).unwrap().transpose());
                    }
                }
            }
        }
    }
}

#[test]
fn non_functorial_data_is_rejected() {
    let c = z2();
    let maps = c.morphism_ids().map(|m| if c.is_identity(m) { scalar(1) } else { scalar(2) }).collect();
    let err = pullback_system::<Z>(c, KindSpec::Module, Variance::Covariant, vec![1], maps).unwrap_err();
    assert!(matches!(err, Error::NonFunctorialData(_)), "{err:?}");
}

#[test]
fn local_systems_need_a_localization() {
    let c = interval(1);
    let g = z2();
    let q = FinFunctor::from_names(
        c.clone(),
        g.clone(),
        &[("0".into(), "*".into()), ("1".into(), "*".into())],
        &[("0<1".into(), "t".into())],
    )
    .unwrap();
    let maps = g.morphism_ids().map(|m| if g.is_identity(m) { scalar(1) } else { scalar(-1) }).collect();
    let t = pullback_system::<Z>(c.clone(), KindSpec::Local(q.clone()), Variance::Covariant, vec![1], maps).unwrap();
    let edge = Simplex::chain(&c, vec![c.morphism_by_name("0<1").unwrap()]).unwrap();
    assert_eq!(t.induced_map(&OrderMap::coface(0, 0), &edge).unwrap(), scalar(-1));

    let not_local = FinFunctor::identity(c.clone());
    let err = pullback_system::<Z>(c, KindSpec::Local(not_local), Variance::Covariant, vec![1, 1], vec![]).unwrap_err();
    assert!(matches!(err, Error::NotALocalization(ref m) if m == "0<1"), "{err:?}");
}

#[test]
fn local_and_trivial_maps_are_invertible() {
    let c = circle();
    let g = z2();
    let objects: Vec<(String, String)> = c.objects().iter().map(|o| (o.clone(), "*".to_string())).collect();
    let morphisms: Vec<(String, String)> = c
        .morphism_ids()
        .filter(|&m| !c.is_identity(m))
        .map(|m| (c.mor_name(m).to_string(), if c.mor_name(m).starts_with('a') { "t" } else { "1" }.to_string()))
        .collect();
    let q = FinFunctor::from_names(c.clone(), g.clone(), &objects, &morphisms).unwrap();
    let maps = g.morphism_ids().map(|m| if g.is_identity(m) { scalar(1) } else { scalar(-1) }).collect();
    let local = pullback_system::<Z>(c.clone(), KindSpec::Local(q), Variance::Covariant, vec![1], maps).unwrap();
    let trivial = CoeffSystem::<Z>::constant(c.clone(), 2, Variance::Contravariant);
    for t in [local, trivial] {
        for n in 0..=3 {
            for g in nerve_level(&c, n) {
                for m in 0..=3 {
                    for s in OrderMap::all(m, n) {
                        let a = t.induced_map(&s, &g).unwrap();
                        assert!(a.is_square());
                        assert_eq!(rank(&a.convert::<Q>().unwrap()), a.rows());
                        let f = crate::exactalg::invariant_factors(&a);
                        assert!(f.iter().all(num_traits::One::is_one));
                    }
                }
            }
        }
    }
}

#[test]
fn ladder_coherence() {
    // F on C, pulled back to C^op × C, then to FC: all three systems agree
    let c = interval(2);
    let maps: Vec<Matrix<Z>> = c
        .morphism_ids()
        .map(|m| {
            if c.is_identity(m) {
                Matrix::identity(2)
            } else {
                let k = (c.dst(m).0 - c.src(m).0) as i64;
                Matrix::from_i64(&[&[1, k], &[0, 1]])
            }
        })
        .collect();
    let module = pullback_system(c.clone(), KindSpec::Module, Variance::Covariant, vec![2; 3], maps).unwrap();
    let f = module.pulled_back().unwrap().data().clone();
    let op = Arc::new(c.opposite());
    let p = FinFunctor::projection(&op, &c, false);
    let bimodule_data = f.pullback(&p).unwrap();
    let bimodule = CoeffSystem::from_diagram(c.clone(), KindSpec::Bimodule, Variance::Covariant, bimodule_data.clone()).unwrap();
    let fc = Factorization::new(c.clone()).unwrap();
    let bw_data = bimodule_data.pullback(&fc.projection()).unwrap();
    let bw = CoeffSystem::from_diagram(c.clone(), KindSpec::BauesWirsching, Variance::Covariant, bw_data).unwrap();
    // p∘π bracketed the other way
    let p_pi = fc.projection().then(&p).unwrap();
    let bw2 = CoeffSystem::from_diagram(c.clone(), KindSpec::BauesWirsching, Variance::Covariant, f.pullback(&p_pi).unwrap()).unwrap();
    for n in 0..=3 {
        for g in nerve_level(&c, n) {
            for m in 0..=3 {
                for s in OrderMap::all(m, n) {
                    let a = module.induced_map(&s, &g).unwrap();
                    assert_eq!(a, bimodule.induced_map(&s, &g).unwrap());
                    assert_eq!(a, bw.induced_map(&s, &g).unwrap());
                    assert_eq!(a, bw2.induced_map(&s, &g).unwrap());
                }
            }
        }
    }
}

#[test]
fn restriction_is_precomposition() {
    let c = interval(2);
    let d = interval(1);
    let i = FinFunctor::from_names(
        d.clone(),
        c.clone(),
        &[("0".into(), "0".into()), ("1".into(), "2".into())],
        &[("0<1".into(), "0<2".into())],
    )
    .unwrap();
    let maps: Vec<Matrix<Z>> =
        c.morphism_ids().map(|m| if c.is_identity(m) { scalar(1) } else { scalar(if c.src(m).0 == 0 { 2 } else { 1 }) }).collect();
    let module = pullback_system(c.clone(), KindSpec::Module, Variance::Covariant, vec![1; 3], maps).unwrap();
    let systems = vec![
        module.clone(),
        module.dual(),
        bw_characters(c.clone(), &[1, -1, 1], &[-1, 1, 1]),
        bw_characters(c.clone(), &[1, -1, 1], &[-1, 1, 1]).dual(),
        CoeffSystem::constant(c.clone(), 1, Variance::Covariant),
        module.sample_truncated(3).unwrap(),
    ];
    for t in systems {
        let r = t.restrict(&i).unwrap();
        assert_eq!(r.variance(), t.variance());
        for n in 0..=3 {
            for s in nerve_level(&d, n) {
                let image = delta_u(&i, &s);
                assert_eq!(r.evaluate(&s).unwrap(), t.evaluate(&image).unwrap());
                for m in 0..n.max(1) {
                    for sigma in OrderMap::all(m, n).into_iter().filter(|x| x.is_injective() || t.max_dim().is_none()) {
                        assert_eq!(r.induced_map(&sigma, &s).unwrap(), t.induced_map(&sigma, &image).unwrap());
                    }
                }
            }
        }
    }
    let id = FinFunctor::identity(c.clone());
    let same = module.restrict(&id).unwrap();
    assert_eq!(same.pulled_back().unwrap().data(), module.pulled_back().unwrap().data());
    assert!(matches!(module.restrict(&i.opposite()), Err(Error::BaseMismatch)));
}

#[test]
fn sampled_tables_round_trip() {
    for t in sample_systems() {
        let s = t.sample_truncated(3).unwrap();
        assert!(s.assumes_extension());
        for n in 0..=3 {
            for g in nerve_level(t.base(), n) {
                assert_eq!(s.evaluate(&g).unwrap(), t.evaluate(&g).unwrap());
                for m in 0..=n {
                    for sigma in OrderMap::all(m, n).into_iter().filter(OrderMap::is_injective) {
                        assert_eq!(s.induced_map(&sigma, &g).unwrap(), t.induced_map(&sigma, &g).unwrap());
                    }
                }
            }
        }
        let g = nerve_level(t.base(), 4).remove(0);
        assert!(matches!(s.evaluate(&g), Err(Error::BeyondTruncation { dim: 4, max_dim: 3 })));
        let edge = nerve_level(t.base(), 1).remove(0);
        assert!(matches!(
            s.induced_map(&OrderMap::codegeneracy(0, 1), &edge),
            Err(Error::MissingDegeneracyData(_))
        ));
    }
}

/// Constant rank-one tables for [2] up to dimension 2.
fn constant_tables(c: &Arc<FinCat>) -> (Vec<Vec<usize>>, Vec<Vec<Vec<Matrix<Z>>>>) {
    let mut ranks = Vec::new();
    let mut cofaces = Vec::new();
    for n in 0..=2 {
        let level = nerve_level(c, n);
        ranks.push(vec![1; level.len()]);
        cofaces.push(level.iter().map(|_| if n == 0 { vec![] } else { vec![scalar(1); n + 1] }).collect());
    }
    (ranks, cofaces)
}

#[test]
fn constant_tables_match_the_trivial_system() {
    let c = interval(2);
    let (ranks, cofaces) = constant_tables(&c);
    let t = truncated_system(c.clone(), Variance::Covariant, 2, ranks, cofaces).unwrap();
    let k = CoeffSystem::<Z>::constant(c.clone(), 1, Variance::Covariant);
    for n in 0..=2 {
        for g in nerve_level(&c, n) {
            for i in 0..n {
                assert_eq!(t.coface_map(i, &g).unwrap(), k.coface_map(i, &g).unwrap());
            }
        }
    }
}

#[test]
fn broken_coface_relation_is_reported() {
    let c = interval(2);
    let (ranks, mut cofaces) = constant_tables(&c);
    let level = nerve_level(&c, 2);
    let k = level.iter().position(|g| !g.is_degenerate(&c)).unwrap();
    cofaces[2][k][2] = scalar(2);
    let err = truncated_system(c.clone(), Variance::Covariant, 2, ranks, cofaces).unwrap_err();
    match err {
        Error::CofaceRelationViolation { simplex, i, j } => {
            assert_eq!(simplex, level[k].key(&c));
            assert_eq!((i, j), (0, 2));
        }
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn incomplete_tables_are_reported() {
    let c = interval(2);
    let (mut ranks, cofaces) = constant_tables(&c);
    ranks[1].pop();
    let err = truncated_system(c.clone(), Variance::Covariant, 2, ranks, cofaces).unwrap_err();
    assert!(matches!(err, Error::IncompleteTables(_)));
    let (ranks, mut cofaces) = constant_tables(&c);
    cofaces[1][0].pop();
    let err = truncated_system(c, Variance::Covariant, 2, ranks, cofaces).unwrap_err();
    assert!(matches!(err, Error::IncompleteTables(_)));
}

#[test]
fn identity_morphism_is_natural_and_broken_ones_are_not() {
    for t in sample_systems() {
        CoeffMorphism::identity(t.base().clone()).check_naturality(&t, &t, 3).unwrap();
    }
    let t = module_on_interval(3);
    let doubling = CoeffMorphism::new(FinFunctor::identity(t.base().clone()), Tau::Constant(scalar(2)));
    doubling.check_naturality(&t, &t, 3).unwrap();
    let c = t.base().clone();
    let top = c.object_by_name("1").unwrap();
    let broken = CoeffMorphism::new(
        FinFunctor::identity(c.clone()),
        Tau::PerSimplex(Arc::new(move |s: &Simplex| if s.dim() == 0 && s.top() == top { scalar(2) } else { scalar(1) })),
    );
    assert!(matches!(broken.check_naturality(&t, &t, 2), Err(Error::NaturalityViolation(_))));
}

#[test]
fn kind_and_variance_serialize_in_snake_case() {
    assert_eq!(serde_json::to_string(&Kind::BauesWirsching).unwrap(), "\"baues_wirsching\"");
    assert_eq!(serde_json::to_string(&Variance::Contravariant).unwrap(), "\"contravariant\"");
}
