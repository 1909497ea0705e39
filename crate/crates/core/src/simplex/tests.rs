use std::collections::HashSet;
use std::sync::Arc;

use super::*;
use crate::fincat::{Factorization, FinCat, FinFunctor};

fn circle() -> Arc<FinCat> {
    let objs: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let rel = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect::<Vec<_>>();
    Arc::new(FinCat::poset(&objs, &rel).unwrap())
}

fn test_categories() -> Vec<Arc<FinCat>> {
    vec![
        circle(),
        Arc::new(FinCat::cyclic_group(2)),
        Arc::new(FinCat::cyclic_group(3)),
        Arc::new(FinCat::interval(2)),
    ]
}

/// Brute-force enumeration of composable chains over all tuples of morphisms.
fn brute_force_level(cat: &FinCat, n: usize) -> HashSet<Simplex> {
    if n == 0 {
        return cat.object_ids().map(Simplex::object).collect();
    }
    let mut out = HashSet::new();
    let m = cat.num_morphisms();
    for code in 0..m.pow(n as u32) {
        let arrows: Vec<MorId> = (0..n).map(|k| MorId(code / m.pow(k as u32) % m)).collect();
        if let Ok(s) = Simplex::chain(cat, arrows) {
            out.insert(s);
        }
    }
    out
}

#[test]
fn cyclic_group_levels_have_two_to_the_n_simplices() {
    let c = Arc::new(FinCat::cyclic_group(2));
    let nerve = Nerve::new(c);
    for n in 0..6 {
        assert_eq!(nerve.level(n).len(), 1 << n);
    }
}

#[test]
fn circle_poset_level_two() {
    let p = circle();
    let level = nerve_level(&p, 2);
    assert_eq!(level.len(), 12);
    let degenerate_both = level.iter().filter(|s| s.arrows().iter().all(|&m| p.is_identity(m))).count();
    assert_eq!(degenerate_both, 4);
    assert!(nondegenerate_level(&p, 2).is_empty());
    assert_eq!(nondegenerate_level(&p, 1).len(), 4);
}

#[test]
fn terminal_has_one_simplex_per_level() {
    let t = Arc::new(FinCat::terminal());
    assert_eq!(nerve_level(&t, 5).len(), 1);
}

#[test]
fn levels_match_brute_force_and_are_sorted() {
    for c in test_categories() {
        let nerve = Nerve::new(c.clone());
        for n in 0..=3 {
            let level = nerve.level(n);
            let set: HashSet<Simplex> = level.simplices().iter().cloned().collect();
            assert_eq!(set.len(), level.len(), "duplicates");
            assert_eq!(set, brute_force_level(&c, n));
            if n > 0 {
                assert!(level.simplices().windows(2).all(|w| w[0].arrows() < w[1].arrows()));
            }
            for (i, s) in level.simplices().iter().enumerate() {
                assert_eq!(level.index_of(s), Some(i));
                assert_eq!(Simplex::from_key(&c, &s.key(&c)).unwrap(), *s);
            }
        }
    }
}

#[test]
fn zero_simplices_are_nondegenerate() {
    let p = circle();
    assert!(nerve_level(&p, 0).iter().all(|s| !s.is_degenerate(&p)));
    let x = p.object_by_name("c").unwrap();
    let f = p.morphism_by_name("a<c").unwrap();
    assert!(Simplex::chain(&p, vec![p.identity(x), f]).unwrap().is_degenerate(&p));
}

#[test]
fn chain_rejects_non_composable_arrows() {
    let p = circle();
    let f = p.morphism_by_name("a<c").unwrap();
    let g = p.morphism_by_name("b<d").unwrap();
    assert!(matches!(Simplex::chain(&p, vec![f, g]), Err(Error::NotAChain(_))));
    assert!(matches!(Simplex::chain(&p, vec![]), Err(Error::NotAChain(_))));
}

#[test]
fn order_maps_are_validated() {
    assert!(matches!(OrderMap::new(vec![1, 0], 2), Err(Error::NotOrderPreserving(_))));
    assert!(matches!(OrderMap::new(vec![0, 3], 2), Err(Error::NotOrderPreserving(_))));
    assert_eq!(OrderMap::coface(1, 1).values(), &[0, 2]);
    assert_eq!(OrderMap::codegeneracy(0, 1).values(), &[0, 0, 1]);
    assert_eq!(OrderMap::all(1, 2).len(), 6);
}

#[test]
fn coface_composes_and_codegeneracy_inserts_identity() {
    let c = Arc::new(FinCat::interval(2));
    let f1 = c.morphism_by_name("1<2").unwrap();
    let f2 = c.morphism_by_name("0<1").unwrap();
    let g = Simplex::chain(&c, vec![f1, f2]).unwrap();
    assert_eq!(apply_simplex_map(&c, &OrderMap::identity(2), &g).unwrap(), g);
    let d1 = apply_simplex_map(&c, &OrderMap::coface(1, 1), &g).unwrap();
    assert_eq!(d1.arrows(), &[c.morphism_by_name("0<2").unwrap()]);
    assert_eq!(d1, g.face(&c, 1));

    let h = Simplex::chain(&c, vec![f1]).unwrap();
    let s0 = apply_simplex_map(&c, &OrderMap::codegeneracy(0, 1), &h).unwrap();
    let id0 = c.identity(c.object_by_name("2").unwrap());
    assert_eq!(s0.arrows(), &[id0, f1]);
    assert_eq!(s0, h.degeneracy(&c, 0));
}

#[test]
fn nu_on_cofaces_of_a_two_simplex() {
    let c = Arc::new(FinCat::interval(2));
    let g1 = c.morphism_by_name("1<2").unwrap();
    let g2 = c.morphism_by_name("0<1").unwrap();
    let g = Simplex::chain(&c, vec![g1, g2]).unwrap();
    assert_eq!(nu_object(&c, &g), c.morphism_by_name("0<2").unwrap());
    let (a, b) = nu_morphism(&c, &OrderMap::coface(1, 1), &g);
    assert!(c.is_identity(a) && c.is_identity(b));
    let (a, b) = nu_morphism(&c, &OrderMap::coface(0, 1), &g);
    assert!(c.is_identity(a));
    assert_eq!(b, g1);
    let (a, b) = nu_morphism(&c, &OrderMap::coface(2, 1), &g);
    assert_eq!(a, g2);
    assert!(c.is_identity(b));
    assert_eq!(nu_object(&c, &Simplex::object(ObjId(1))), c.identity(ObjId(1)));
}

#[test]
fn simplex_morphisms_are_validated() {
    let c = Arc::new(FinCat::interval(2));
    let g = Simplex::chain(&c, vec![c.morphism_by_name("1<2").unwrap(), c.morphism_by_name("0<1").unwrap()])
        .unwrap();
    let wrong = Simplex::chain(&c, vec![c.morphism_by_name("0<1").unwrap()]).unwrap();
    let err = SimplexMorphism::new(&c, wrong, g.clone(), OrderMap::coface(1, 1)).unwrap_err();
    assert!(matches!(err, Error::InvalidSimplexMorphism(_)));
    let ok = SimplexMorphism::along(&c, OrderMap::coface(2, 1), g).unwrap();
    assert_eq!(ok.source.arrows(), &[c.morphism_by_name("1<2").unwrap()]);
}

#[test]
fn simplicial_identities_hold_exhaustively() {
    for c in test_categories() {
        for b in 0..=3 {
            let level = nerve_level(&c, b);
            for a in 0..=3 {
                for s in OrderMap::all(a, b) {
                    for cdim in 0..=3 {
                        for t in OrderMap::all(cdim, a) {
                            let st = s.compose(&t).unwrap();
                            for g in &level {
                                let lhs = apply_simplex_map(&c, &st, g).unwrap();
                                let rhs = apply_simplex_map(&c, &t, &apply_simplex_map(&c, &s, g).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn nu_is_functorial_exhaustively() {
    for c in test_categories() {
        for b in 0..=3 {
            for g in nerve_level(&c, b) {
                for a in 0..=3 {
                    for s in OrderMap::all(a, b) {
                        let f = apply_simplex_map(&c, &s, &g).unwrap();
                        let (alpha_s, beta_s) = nu_morphism(&c, &s, &g);
                        // ν(g) = β∘ν(f)∘α
                        let rebuilt = c.compose_unchecked(beta_s, c.compose_unchecked(nu_object(&c, &f), alpha_s));
                        assert_eq!(rebuilt, nu_object(&c, &g));
                        for cdim in 0..=2 {
                            for t in OrderMap::all(cdim, a) {
                                let (alpha_t, beta_t) = nu_morphism(&c, &t, &f);
                                let (alpha, beta) = nu_morphism(&c, &s.compose(&t).unwrap(), &g);
                                assert_eq!(alpha, c.compose_unchecked(alpha_t, alpha_s));
                                assert_eq!(beta, c.compose_unchecked(beta_s, beta_t));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identity_clauses_of_nu() {
    let c = circle();
    for g in nerve_level(&c, 2) {
        for s in OrderMap::all(1, 2) {
            let (a, b) = nu_morphism(&c, &s, &g);
            if s.value(1) == 2 {
                assert_eq!(a, c.identity(g.bottom(&c)));
            }
            if s.value(0) == 0 {
                assert_eq!(b, c.identity(g.top()));
            }
        }
    }
}

#[test]
fn ladder_square_commutes() {
    let p = circle();
    let z2 = Arc::new(FinCat::cyclic_group(2));
    let prod = Arc::new(p.product(&z2));
    let u = FinFunctor::projection(&p, &z2, true);
    let fe = Factorization::new(prod.clone()).unwrap();
    let fb = Factorization::new(p.clone()).unwrap();
    let fu = fe.induced(&u, &fb);
    fu.validate().unwrap();
    for n in 0..=3 {
        for g in nerve_level(&prod, n) {
            let ug = delta_u(&u, &g);
            assert_eq!(nu_object(&p, &ug), u.mor(nu_object(&prod, &g)));
            for m in 0..=n.min(2) {
                for s in OrderMap::all(m, n) {
                    assert_eq!(delta_u(&u, &apply_simplex_map(&prod, &s, &g).unwrap()), apply_simplex_map(&p, &s, &ug).unwrap());
                    let f = apply_simplex_map(&prod, &s, &g).unwrap();
                    let (a, b) = nu_morphism(&prod, &s, &g);
                    let upstairs = fe.morphism(nu_object(&prod, &f), a, b).unwrap();
                    let (ua, ub) = nu_morphism(&p, &s, &ug);
                    let downstairs = fb.morphism(nu_object(&p, &delta_u(&u, &f)), ua, ub).unwrap();
                    assert_eq!(fu.mor(upstairs), downstairs);
                }
            }
        }
    }
}

#[test]
fn delta_of_identity_and_terminal_functors() {
    let p = circle();
    let id = FinFunctor::identity(p.clone());
    let bang = FinFunctor::to_terminal(p.clone());
    for g in nerve_level(&p, 3) {
        assert_eq!(delta_u(&id, &g), g);
        let t = delta_u(&bang, &g);
        assert_eq!(t.dim(), 3);
        assert_eq!(nerve_level(bang.target(), 3), vec![t]);
    }
}

#[test]
fn product_cardinality_law() {
    let cats = test_categories();
    for c in &cats[..2] {
        for d in &cats[1..] {
            let prod = Arc::new(c.product(d));
            for n in 0..=3 {
                assert_eq!(nerve_level(&prod, n).len(), nerve_level(c, n).len() * nerve_level(d, n).len());
            }
        }
    }
}

#[test]
fn degenerate_iff_image_of_a_non_injective_map() {
    for c in test_categories() {
        for n in 0..=3 {
            let mut images = HashSet::new();
            for m in 0..=3 {
                for s in OrderMap::all(n, m).into_iter().filter(|s| !s.is_injective()) {
                    for g in nerve_level(&c, m) {
                        images.insert(apply_simplex_map(&c, &s, &g).unwrap());
                    }
                }
            }
            for s in nerve_level(&c, n) {
                assert_eq!(s.is_degenerate(&c), images.contains(&s), "{}", s.key(&c));
            }
        }
    }
}

#[test]
fn memoized_levels_are_shared() {
    let nerve = Nerve::new(circle());
    let a = nerve.level(3);
    let b = nerve.level(3);
    assert!(Arc::ptr_eq(&a, &b));
    assert_eq!(nerve.nondegenerate(1).len(), 4);
}

mod props {
    use super::*;
    use crate::fincat::tests::props::poset_strategy;
    use proptest::prelude::*;

    fn order_map(n: usize, m: usize) -> impl Strategy<Value = OrderMap> {
        proptest::collection::vec(0..=m, n + 1).prop_map(move |mut v| {
            v.sort();
            OrderMap::new(v, m).unwrap()
        })
    }

    proptest! {
        #[test]
        fn delta_u_commutes_with_simplex_maps(
            c in poset_strategy(),
            (n, m) in (0usize..=3, 0usize..=3),
            seed in any::<usize>(),
            sigma_bits in proptest::collection::vec(0usize..=3, 4),
        ) {
            let c = Arc::new(c);
            let bang = FinFunctor::to_terminal(c.clone());
            let level = nerve_level(&c, m);
            let g = &level[seed % level.len()];
            let mut v: Vec<usize> = sigma_bits[..=n].iter().map(|x| x % (m + 1)).collect();
            v.sort();
            let s = OrderMap::new(v, m).unwrap();
            let lhs = delta_u(&bang, &apply_simplex_map(&c, &s, g).unwrap());
            let rhs = apply_simplex_map(bang.target(), &s, &delta_u(&bang, g)).unwrap();
            prop_assert_eq!(lhs, rhs);
            let id = FinFunctor::identity(c.clone());
            prop_assert_eq!(delta_u(&id, g), g.clone());
        }

        #[test]
        fn order_map_composition_is_associative(
            a in order_map(2, 3), b in order_map(3, 2), c in order_map(1, 3),
        ) {
            let left = a.compose(&b).unwrap().compose(&c).unwrap();
            let right = a.compose(&b.compose(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
