use std::sync::Arc;

use super::*;

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn circle() -> FinCat {
    let rel = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect::<Vec<_>>();
    FinCat::poset(&names(&["a", "b", "c", "d"]), &rel).unwrap()
}

fn z2_raw(tt: &str) -> RawCategory {
    RawCategory {
        objects: names(&["x"]),
        morphisms: vec![
            ("1".into(), "x".into(), "x".into()),
            ("t".into(), "x".into(), "x".into()),
        ],
        compose: vec![
            ("1".into(), "1".into(), "1".into()),
            ("1".into(), "t".into(), "t".into()),
            ("t".into(), "1".into(), "t".into()),
            ("t".into(), "t".into(), tt.into()),
        ],
        identities: None,
    }
}

#[test]
fn terminal_has_one_morphism() {
    let c = FinCat::terminal();
    assert_eq!((c.num_objects(), c.num_morphisms()), (1, 1));
    assert!(c.is_identity(MorId(0)));
}

#[test]
fn raw_cyclic_group_of_order_two() {
    let c = FinCat::from_raw(&z2_raw("1")).unwrap();
    assert_eq!(c.num_morphisms(), 2);
    let t = c.morphism_by_name("t").unwrap();
    assert_eq!(c.identity(ObjId(0)), c.morphism_by_name("1").unwrap());
    assert_eq!(c.compose(t, t), Some(c.identity(ObjId(0))));
    assert!(c.is_groupoid());
}

#[test]
fn broken_identity_row_is_rejected() {
    // t·t = t and the row of `1` says 1·t = 1: no morphism acts as identity
    let mut raw = z2_raw("t");
    raw.compose[1] = ("1".into(), "t".into(), "1".into());
    raw.identities = Some(vec![("x".into(), "1".into())]);
    let err = FinCat::from_raw(&raw).unwrap_err();
    assert!(matches!(err, Error::MissingIdentity { .. }), "{err:?}");
}

#[test]
fn non_associative_table_names_the_triple() {
    // a three-element table with a unit that is not associative
    let elements = names(&["e", "a", "b"]);
    let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 0]];
    let err = FinCat::monoid(&elements, &table).unwrap_err();
    assert!(matches!(err, Error::NotAMonoid(_)), "{err:?}");

    let raw = RawCategory {
        objects: names(&["x"]),
        morphisms: vec![
            ("a".into(), "x".into(), "x".into()),
            ("b".into(), "x".into(), "x".into()),
        ],
        compose: vec![
            ("a".into(), "a".into(), "b".into()),
            ("a".into(), "b".into(), "b".into()),
            ("b".into(), "a".into(), "a".into()),
            ("b".into(), "b".into(), "a".into()),
        ],
        identities: None,
    };
    let err = FinCat::from_raw(&raw).unwrap_err();
    assert!(matches!(err, Error::NonAssociative { .. }), "{err:?}");
}

#[test]
fn composition_endpoint_mismatch() {
    let raw = RawCategory {
        objects: names(&["x", "y"]),
        morphisms: vec![("f".into(), "x".into(), "y".into())],
        compose: vec![("f".into(), "f".into(), "f".into())],
        identities: None,
    };
    let err = FinCat::from_raw(&raw).unwrap_err();
    assert!(matches!(err, Error::CompositionDomainMismatch { .. }), "{err:?}");
}

#[test]
fn interval_counts() {
    for n in 0..6 {
        let c = FinCat::interval(n);
        assert_eq!(c.num_objects(), n + 1);
        assert_eq!(c.num_morphisms(), (n + 1) * (n + 2) / 2);
    }
}

#[test]
fn circle_poset_and_its_square() {
    let p = circle();
    assert_eq!(p.num_morphisms(), 8);
    let pp = p.product(&p);
    assert_eq!((pp.num_objects(), pp.num_morphisms()), (16, 64));
}

#[test]
fn cyclic_relation_is_not_a_partial_order() {
    let rel = vec![("a".to_string(), "b".to_string()), ("b".to_string(), "a".to_string())];
    let err = FinCat::poset(&names(&["a", "b"]), &rel).unwrap_err();
    assert!(matches!(err, Error::NotAPartialOrder(_)));
}

#[test]
fn opposite_is_an_involution() {
    for c in [circle(), FinCat::cyclic_group(3), FinCat::interval(2)] {
        assert_eq!(c.opposite().opposite(), c);
    }
}

#[test]
fn raw_round_trip() {
    for c in [circle(), FinCat::cyclic_group(4), FinCat::interval(3).product(&FinCat::cyclic_group(2))] {
        assert_eq!(FinCat::from_raw(&c.to_raw()).unwrap(), c);
    }
}

fn fc_hom(fc: &Factorization, f: MorId, g: MorId) -> Vec<(String, String)> {
    let c = fc.base();
    fc.category()
        .hom(ObjId(f.0), ObjId(g.0))
        .map(|m| {
            let (_, a, b) = fc.triple(m);
            (c.mor_name(a).to_string(), c.mor_name(b).to_string())
        })
        .collect()
}

#[test]
fn factorization_of_terminal() {
    let fc = Factorization::new(Arc::new(FinCat::terminal())).unwrap();
    assert_eq!((fc.category().num_objects(), fc.category().num_morphisms()), (1, 1));
}

#[test]
fn factorization_of_interval() {
    let c = Arc::new(FinCat::interval(1));
    let fc = Factorization::new(c.clone()).unwrap();
    assert_eq!(fc.category().num_objects(), 3);
    assert_eq!(fc.category().num_morphisms(), 5);
    let id0 = c.morphism_by_name("id_0").unwrap();
    let id1 = c.morphism_by_name("id_1").unwrap();
    let u = c.morphism_by_name("0<1").unwrap();
    let s = |a: &str, b: &str| vec![(a.to_string(), b.to_string())];
    assert_eq!(fc_hom(&fc, id0, u), s("id_0", "0<1"));
    assert_eq!(fc_hom(&fc, id1, u), s("0<1", "id_1"));
    assert_eq!(fc_hom(&fc, u, u), s("id_0", "id_1"));
    assert!(fc_hom(&fc, u, id0).is_empty());
}

#[test]
fn factorization_of_z2() {
    let c = Arc::new(FinCat::cyclic_group(2));
    let fc = Factorization::new(c.clone()).unwrap();
    let (one, t) = (MorId(0), MorId(1));
    let mut h11 = fc_hom(&fc, one, one);
    h11.sort();
    assert_eq!(h11, vec![("1".into(), "1".into()), ("t".into(), "t".into())]);
    let mut h1t = fc_hom(&fc, one, t);
    h1t.sort();
    assert_eq!(h1t, vec![("1".into(), "t".into()), ("t".into(), "1".into())]);
}

#[test]
fn factorization_projection_is_a_functor() {
    let c = Arc::new(circle().product(&FinCat::interval(1)));
    let fc = Factorization::new(c).unwrap();
    fc.projection().validate().unwrap();
}

#[test]
fn comma_of_identity_under_minimum() {
    let c = Arc::new(FinCat::interval(1));
    let comma = Comma::new(&FinFunctor::identity(c), ObjId(0)).unwrap();
    let cat = comma.category();
    assert_eq!((cat.num_objects(), cat.num_morphisms()), (2, 3));
    comma.forget().validate().unwrap();
}

#[test]
fn comma_of_point_in_z2() {
    let b = Arc::new(FinCat::cyclic_group(2));
    let u = FinFunctor::point(b, ObjId(0));
    let comma = Comma::new(&u, ObjId(0)).unwrap();
    let cat = comma.category();
    assert_eq!((cat.num_objects(), cat.num_morphisms()), (2, 2));
}

#[test]
fn comma_over_terminal_is_the_source() {
    let p = Arc::new(circle());
    let u = FinFunctor::to_terminal(p.clone());
    let comma = Comma::new(&u, ObjId(0)).unwrap();
    let cat = comma.category();
    assert_eq!((cat.num_objects(), cat.num_morphisms()), (p.num_objects(), p.num_morphisms()));
    assert_eq!(comma.forget().obj_map(), p.object_ids().collect::<Vec<_>>().as_slice());
}

#[test]
fn comma_object_out_of_range() {
    let c = Arc::new(FinCat::interval(1));
    let err = Comma::new(&FinFunctor::identity(c), ObjId(5)).unwrap_err();
    assert!(matches!(err, Error::ObjectNotInTarget(_)));
}

#[test]
fn comma_precomposition_is_a_functor() {
    let c = Arc::new(FinCat::interval(2));
    let u = FinFunctor::identity(c.clone());
    for beta in c.morphism_ids() {
        let from = Comma::new(&u, c.src(beta)).unwrap();
        let to = Comma::new(&u, c.dst(beta)).unwrap();
        let pre = from.precompose(&to, beta).unwrap();
        pre.then(from.forget()).unwrap();
        assert_eq!(pre.then(from.forget()).unwrap().obj_map(), to.forget().obj_map());
    }
}

#[test]
fn subcategory_inclusion() {
    let p = Arc::new(circle());
    let a = p.object_by_name("a").unwrap();
    let c = p.object_by_name("c").unwrap();
    let inc = p.subcategory(|x| x == a || x == c, |_| true).unwrap();
    assert_eq!(inc.source().num_morphisms(), 3);
}

#[test]
fn product_and_projection_functors() {
    let p = Arc::new(circle());
    let i = Arc::new(FinCat::interval(1));
    let pr = FinFunctor::projection(&p, &i, true);
    pr.validate().unwrap();
    let pr2 = FinFunctor::projection(&p, &i, false);
    pr2.validate().unwrap();
    let sq = FinFunctor::identity(p.clone()).product(&FinFunctor::identity(i));
    assert!(sq.is_identity());
}

#[test]
fn from_names_fills_identities() {
    let p = Arc::new(circle());
    let t = Arc::new(FinCat::interval(1));
    let objects: Vec<(String, String)> =
        [("a", "0"), ("b", "0"), ("c", "1"), ("d", "1")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
    let morphisms: Vec<(String, String)> = [("a<c", "0<1"), ("a<d", "0<1"), ("b<c", "0<1"), ("b<d", "0<1")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
    FinFunctor::from_names(p, t, &objects, &morphisms).unwrap();
}

pub(crate) mod props {
    use super::*;
    use proptest::prelude::*;

    /// Random partial orders on up to five points, generated from a random
    /// upper-triangular relation (so the closure stays antisymmetric).
    pub fn poset_strategy() -> impl Strategy<Value = FinCat> {
        (1usize..=5)
            .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
            .prop_map(|(n, bits)| {
                let objs: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
                let mut rel = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if bits[k] {
                            rel.push((objs[i].clone(), objs[j].clone()));
                        }
                        k += 1;
                    }
                }
                FinCat::poset(&objs, &rel).unwrap()
            })
    }

    proptest! {
        #[test]
        fn factorization_revalidates(c in poset_strategy()) {
            let fc = Factorization::new(Arc::new(c.clone())).unwrap();
            prop_assert_eq!(fc.category().num_objects(), c.num_morphisms());
            let again = FinCat::from_raw(&fc.category().to_raw()).unwrap();
            prop_assert_eq!(&again, &**fc.category());
        }

        #[test]
        fn comma_forget_is_a_functor(c in poset_strategy(), b in 0usize..5) {
            let c = Arc::new(c);
            let b = ObjId(b % c.num_objects());
            let comma = Comma::new(&FinFunctor::identity(c.clone()), b).unwrap();
            comma.forget().validate().unwrap();
            // b/id ≅ coslice: objects are the morphisms out of b
            prop_assert_eq!(comma.category().num_objects(), c.outgoing(b).len());
        }

        #[test]
        fn opposite_involution(c in poset_strategy()) {
            prop_assert_eq!(c.opposite().opposite(), c);
        }
    }
}
