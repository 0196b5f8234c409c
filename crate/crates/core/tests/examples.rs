//! The worked examples: subgroup spaces, group-ring and fixed-point sheaves, disc-products.

use std::sync::Arc;

use eqsheaf::diagram::{colim_sheaf, example_fix, example_group_ring, sheafify};
use eqsheaf::group::DEFAULT_ORDER_CAP;
use eqsheaf::io::{parse_group_spec, subgroup_tower};
use eqsheaf::rep::disc_filtration;
use eqsheaf::sheaf::{constant_sheaf, godement_resolution};
use eqsheaf::weyl::{is_weyl, weyl_functor, weyl_violation};
use eqsheaf::{FiniteGSpace, FiniteGroup, GroupRep, GroupTower};

#[test]
fn cyclic_eight_tower_levels() {
    let g = parse_group_spec("cyclic:8", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&g, Some(3), DEFAULT_ORDER_CAP).unwrap();
    let sizes: Vec<usize> = t.levels().iter().map(|x| x.n_points()).collect();
    assert_eq!(sizes, vec![1, 2, 3, 4]);
    assert!(t.to_dot().contains("l3_0"));
}

#[test]
fn small_subgroup_spaces() {
    let c6 = parse_group_spec("cyclic:6", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&c6, Some(1), DEFAULT_ORDER_CAP).unwrap();
    assert_eq!(t.top().n_points(), 4);
    let s3 = parse_group_spec("sym:3", DEFAULT_ORDER_CAP).unwrap();
    let space = FiniteGSpace::subgroup_space(s3.clone(), DEFAULT_ORDER_CAP).unwrap();
    assert_eq!((space.n_points(), space.orbits().len()), (6, 4));
}

#[test]
fn weyl_groups() {
    let s3 = parse_group_spec("sym:3", DEFAULT_ORDER_CAP).unwrap();
    let a3 = s3.all_subgroups(DEFAULT_ORDER_CAP).unwrap().into_iter().find(|h| h.order() == 3).unwrap();
    assert_eq!(s3.weyl_group(&a3).weyl.order(), 2);
    assert_eq!(s3.weyl_group(&s3.whole()).weyl.order(), 1);
}

#[test]
fn group_ring_on_cyclic_four() {
    let g = parse_group_spec("cyclic:4", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&g, None, DEFAULT_ORDER_CAP).unwrap();
    let f = example_group_ring(&t).unwrap();
    let thread =
        t.point_threads().into_iter().find(|th| t.top().subgroup_points().unwrap()[th.top()].is_trivial()).unwrap();
    let dims: Vec<usize> = (0..=2).map(|k| f.level(k).dim(thread.coords[k])).collect();
    assert_eq!(dims, vec![1, 2, 4]);
    let report = colim_sheaf(&sheafify(&f).unwrap().diagram).unwrap().report;
    let r = report.iter().find(|r| r.thread == thread.coords).unwrap();
    assert_eq!(r.stabilized_from, None);
    // the whole group's thread is constant 1-dimensional
    let whole = report.iter().find(|r| r.dims == vec![1, 1, 1]).unwrap();
    assert_eq!(whole.stabilized_from, Some(0));
}

#[test]
fn group_ring_over_s3_under_weyl() {
    let g = parse_group_spec("sym:3", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&g, Some(0), DEFAULT_ORDER_CAP).unwrap();
    let e = sheafify(&example_group_ring(&t).unwrap()).unwrap().sheaf;
    assert!(weyl_violation(&e).unwrap().is_some());
    let w = weyl_functor(&e).unwrap();
    let mut pairs: Vec<(usize, usize, usize)> = t
        .top()
        .subgroup_points()
        .unwrap()
        .iter()
        .enumerate()
        .map(|(x, h)| (h.order(), e.dim(x), w.sheaf.dim(x)))
        .collect();
    pairs.sort();
    assert_eq!(pairs, vec![(1, 6, 6), (2, 3, 2), (2, 3, 2), (2, 3, 2), (3, 2, 2), (6, 1, 1)]);
}

#[test]
fn fixed_points_of_the_regular_rep() {
    let g = parse_group_spec("cyclic:8", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&g, None, DEFAULT_ORDER_CAP).unwrap();
    let colim = colim_sheaf(&example_fix(&GroupRep::regular(&g), &t).unwrap()).unwrap();
    for (x, h) in t.top().subgroup_points().unwrap().iter().enumerate() {
        assert_eq!(colim.sheaf.dim(x), 8 / h.order());
    }
}

#[test]
fn disc_filtration_of_the_group_ring() {
    let g = Arc::new(FiniteGroup::cyclic(8).unwrap());
    let tower = GroupTower::normal_series(&g, None, DEFAULT_ORDER_CAP).unwrap();
    let dims: Vec<usize> = disc_filtration(&GroupRep::regular(&g), &tower).unwrap().iter().map(|s| s.dim()).collect();
    assert_eq!(dims, vec![1, 2, 4, 8]);
}

#[test]
fn constant_sheaves_are_weyl_and_injective() {
    let g = parse_group_spec("dihedral:4", DEFAULT_ORDER_CAP).unwrap();
    let t = subgroup_tower(&g, Some(1), DEFAULT_ORDER_CAP).unwrap();
    let c = constant_sheaf(t.top(), &GroupRep::trivial(&g, 2)).unwrap();
    assert!(is_weyl(&c).unwrap());
    let res = godement_resolution(&c, 3).unwrap();
    assert_eq!(res.terms.len(), 1);
    assert!(res.maps[0].is_iso());
}
