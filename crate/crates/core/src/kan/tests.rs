use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::pullback_system;
use crate::complexes::cohomology;
use crate::exactalg::{rank, Z};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn circle() -> Arc<FinCat> {
    let rel = [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect::<Vec<_>>();
    Arc::new(FinCat::poset(&names(&["a", "b", "c", "d"]), &rel).unwrap())
}

fn point() -> Arc<FinCat> {
    Arc::new(FinCat::terminal())
}

fn interval(n: usize) -> Arc<FinCat> {
    Arc::new(FinCat::interval(n))
}

fn constant_q(c: Arc<FinCat>, v: Variance) -> CoeffSystem<Q> {
    CoeffSystem::constant(c, 1, v)
}

fn ranks(v: &[HomologyGroup]) -> Vec<usize> {
    v.iter().map(|g| g.free_rank).collect()
}

fn grid(page: &E2Page) -> Vec<Vec<usize>> {
    page.grid.iter().map(|r| ranks(r)).collect()
}

/// Module on [1] with ranks (1, 2) and map (1, 2)ᵀ.
fn wide_module(v: Variance) -> CoeffSystem<Q> {
    let c = interval(1);
    let maps: Vec<Matrix<Q>> = c
        .morphism_ids()
        .map(|m| match (c.is_identity(m), c.src(m).0) {
            (true, 0) => Matrix::identity(1),
            (true, _) => Matrix::identity(2),
            (false, _) => {
                let up = Matrix::<Z>::from_i64(&[&[1], &[2]]).convert().unwrap();
                match v {
                    Variance::Covariant => up,
                    Variance::Contravariant => up.transpose(),
                }
            }
        })
        .collect();
    // contravariant: F(1) → F(0) is the transposed map
    pullback_system(c, KindSpec::Module, v, vec![1, 2], maps).unwrap()
}

fn pick(c: &Arc<FinCat>, name: &str) -> FinFunctor {
    FinFunctor::point(c.clone(), c.object_by_name(name).unwrap())
}

#[test]
fn identity_functor_returns_the_module() {
    let t = wide_module(Variance::Covariant);
    let u = FinFunctor::identity(t.base().clone());
    let r0 = derived_right_kan(&u, &t, 0).unwrap();
    assert_eq!(ranks(&r0.values), vec![1, 2]);
    let d = r0.diagram().unwrap();
    let c = t.base();
    for m in c.morphism_ids() {
        let expected = if c.is_identity(m) { d.rank(c.src(m)) } else { 1 };
        assert_eq!(rank(d.map(m)), expected);
    }
    for q in 1..=2 {
        assert!(derived_right_kan(&u, &t, q).unwrap().values.iter().all(HomologyGroup::is_zero));
    }
}

#[test]
fn projection_to_a_point_gives_cohomology_of_the_source() {
    let p = circle();
    let u = FinFunctor::to_terminal(p.clone());
    let t = constant_q(p, Variance::Covariant);
    let vals: Vec<usize> = (0..3).map(|q| derived_right_kan(&u, &t, q).unwrap().values[0].free_rank).collect();
    assert_eq!(vals, vec![1, 1, 0]);
    let vals: Vec<usize> =
        (0..3).map(|q| derived_left_kan(&u, &t.dual(), q).unwrap().values[0].free_rank).collect();
    assert_eq!(vals, vec![1, 1, 0]);
}

#[test]
fn empty_commas_give_zero() {
    let i = interval(1);
    let t = constant_q(point(), Variance::Covariant);
    // 1/u is empty for u picking 0
    let r = derived_right_kan(&pick(&i, "0"), &t, 0).unwrap();
    assert_eq!(ranks(&r.values), vec![1, 0]);
    // u/0 is empty for u picking 1
    let l = derived_left_kan(&pick(&i, "1"), &t.dual(), 0).unwrap();
    assert_eq!(ranks(&l.values), vec![0, 1]);
    assert!(r.diagram().is_ok() && l.diagram().is_ok());
}

#[test]
fn identity_page_collapses_to_a_row() {
    for t in [wide_module(Variance::Covariant), constant_q(circle(), Variance::Covariant)] {
        let u = FinFunctor::identity(t.base().clone());
        let page = leray_e2(&u, &t, 2, 1).unwrap();
        let report = page.check();
        assert_eq!(report.collapse.as_deref(), Some("row"));
        assert_eq!(report.collapse_holds, Some(true));
        assert!(report.all_hold());
        for p in 0..=2 {
            assert_eq!(page.dim(p, 0), page.abutment[p].free_rank);
        }
    }
    let t = wide_module(Variance::Contravariant);
    let page = colim_e2(&FinFunctor::identity(t.base().clone()), &t, 2, 1).unwrap();
    assert_eq!(page.check().collapse_holds, Some(true));
    assert!(page.metadata["quadrant"].contains("third"));
}

#[test]
fn torus_projection_page() {
    let p = circle();
    let u = FinFunctor::projection(&p, &p, true);
    let t = constant_q(u.source().clone(), Variance::Covariant);
    let page = leray_e2(&u, &t, 1, 1).unwrap();
    assert_eq!(grid(&page), vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(ranks(&page.abutment), vec![1, 2, 1]);
    assert!(page.vanishes_beyond);
    let report = page.check();
    assert_eq!(report.euler, Some((0, 0)));
    assert_eq!(report.equality_degrees, vec![0, 1, 2]);
    assert!(report.all_hold());

    let page = colim_e2(&u, &t.dual(), 1, 1).unwrap();
    assert_eq!(grid(&page), vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(ranks(&page.abutment), vec![1, 2, 1]);
    assert_eq!(page.check().euler, Some((0, 0)));
}

#[test]
fn vertex_inclusion_page() {
    let i = interval(1);
    let u = pick(&i, "0");
    let t = constant_q(point(), Variance::Covariant);
    let page = leray_e2(&u, &t, 2, 1).unwrap();
    assert_eq!(page.dim(0, 0), 1);
    assert_eq!(ranks(&page.abutment), vec![1, 0, 0, 0]);
    let report = page.check();
    assert!(report.bound_holds);
    assert!(report.equality_degrees.contains(&0));
    assert!(report.all_hold());
}

#[test]
fn local_coefficients_are_supported() {
    let i = interval(1);
    let z2 = Arc::new(FinCat::cyclic_group(2));
    let q = FinFunctor::from_names(
        i.clone(),
        z2.clone(),
        &[("0".into(), "*".into()), ("1".into(), "*".into())],
        &[("0<1".into(), "t".into())],
    )
    .unwrap();
    let maps: Vec<Matrix<Q>> = z2
        .morphism_ids()
        .map(|m| Matrix::<Z>::from_i64(&[&[if z2.is_identity(m) { 1 } else { -1 }]]).convert().unwrap())
        .collect();
    let t = pullback_system(i.clone(), KindSpec::Local(q), Variance::Covariant, vec![1], maps).unwrap();
    let r = derived_right_kan(&FinFunctor::to_terminal(i), &t, 0).unwrap();
    assert_eq!(ranks(&r.values), vec![1]);
}

#[test]
fn kan_errors() {
    let p = circle();
    let u = FinFunctor::to_terminal(p.clone());
    let z = CoeffSystem::<Z>::constant(p.clone(), 1, Variance::Covariant);
    assert!(matches!(derived_right_kan(&u, &z, 0), Err(Error::RingUnsupported(_))));
    assert!(matches!(leray_e2(&u, &z, 1, 1), Err(Error::RingUnsupported(_))));
    let fc = crate::fincat::Factorization::new(p.clone()).unwrap();
    let bw = CoeffSystem::<Q>::from_diagram(
        p.clone(),
        KindSpec::BauesWirsching,
        Variance::Covariant,
        Diagram::constant(fc.category().clone(), 1),
    )
    .unwrap();
    match derived_right_kan(&u, &bw, 0) {
        Err(Error::UnsupportedCoefficientKind(m)) => assert!(m.contains("finite")),
        other => panic!("{other:?}"),
    }
    let trunc = constant_q(p.clone(), Variance::Covariant).sample_truncated(2).unwrap();
    assert!(matches!(derived_right_kan(&u, &trunc, 0), Err(Error::UnsupportedCoefficientKind(_))));
    assert!(matches!(derived_right_kan(&u, &constant_q(p, Variance::Contravariant), 0), Err(Error::VarianceMismatch { .. })));
    let other = constant_q(interval(2), Variance::Covariant);
    assert_eq!(derived_right_kan(&u, &other, 0).unwrap_err(), Error::BaseMismatch);
}

#[test]
fn transports_compose_for_a_collapse_map() {
    // u: [2] → [1], 0 ↦ 0, 1, 2 ↦ 1, with a rank-(1,2) module pulled back
    let (c, b) = (interval(2), interval(1));
    let u = FinFunctor::from_names(
        c.clone(),
        b.clone(),
        &[("0".into(), "0".into()), ("1".into(), "1".into()), ("2".into(), "1".into())],
        &[("0<1".into(), "0<1".into()), ("0<2".into(), "0<1".into()), ("1<2".into(), "id_1".into())],
    )
    .unwrap();
    let f = module_diagram(&wide_module(Variance::Covariant)).unwrap().pullback(&u).unwrap();
    let t = CoeffSystem::from_diagram(c, KindSpec::Module, Variance::Covariant, f).unwrap();
    for q in 0..=2 {
        let r = derived_right_kan(&u, &t, q).unwrap();
        assert!(r.diagram().is_ok());
        if q == 0 {
            assert_eq!(ranks(&r.values), vec![1, 2]);
        }
    }
    let page = leray_e2(&u, &t, 1, 1).unwrap();
    assert!(page.check().all_hold());
    assert_eq!(page.abutment[0], cohomology(&t, 0).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pages_over_a_point_collapse_to_a_column(c in crate::fincat::tests::props::poset_strategy()) {
        let c = Arc::new(c);
        let t = constant_q(c.clone(), Variance::Covariant);
        let page = leray_e2(&FinFunctor::to_terminal(c), &t, 1, 2).unwrap();
        let report = page.check();
        // concentrated in p = 0 (a contractible poset is also concentrated in q = 0)
        prop_assert!(report.collapse.is_some());
        prop_assert!(report.all_hold());
        for n in 0..=2 {
            prop_assert_eq!(page.dim(0, n), page.abutment[n].free_rank);
            prop_assert_eq!(page.dim(1, n), 0);
        }
    }
}
