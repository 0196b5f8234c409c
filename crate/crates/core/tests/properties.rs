use std::sync::Arc;

use proptest::prelude::*;

use eqsheaf::check::cocycle_witness;
use eqsheaf::diagram::{adjunction_check_cg, counit_check, pullback_cg, pushforward_cg};
use eqsheaf::group::DEFAULT_ORDER_CAP;
use eqsheaf::io::{parse_group_spec, subgroup_tower};
use eqsheaf::linalg::{q, Matrix, Subspace};
use eqsheaf::random::{invertible, random_map, random_rep, random_sheaf, rng};
use eqsheaf::rep::{hom_space, permutation_rep};
use eqsheaf::sheaf::{biproduct, orbit_decompose, sheaf_factorization};
use eqsheaf::weyl::{is_weyl, weyl_functor};
use eqsheaf::{FiniteGSpace, FiniteGroup, SpaceTower};

fn tower(spec: &str) -> Arc<SpaceTower> {
    let g = parse_group_spec(spec, DEFAULT_ORDER_CAP).unwrap();
    subgroup_tower(&g, None, DEFAULT_ORDER_CAP).unwrap()
}

fn spec() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["cyclic:4", "cyclic:6", "sym:3", "product:2,2"])
}

fn small_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| prop::collection::vec(-3i64..=3, r * c).prop_map(move |v| Matrix::from_i64(r, c, &v)))
}

fn divisors(n: usize) -> usize {
    (1..=n).filter(|d| n.is_multiple_of(*d)).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rank_nullity(m in small_matrix()) {
        let kernel = Subspace::kernel_of(&m);
        prop_assert_eq!(m.rank() + kernel.dim(), m.cols());
        prop_assert!(m.mul(kernel.basis()).is_zero());
        let (r, _) = m.rref();
        prop_assert_eq!(r.rref().0, r);
    }

    #[test]
    fn invertible_matrices_invert(seed in any::<u64>(), n in 0usize..5) {
        let p = invertible(&mut rng(seed), n);
        let inv = p.inverse().unwrap();
        prop_assert!(p.mul(&inv).is_identity());
        prop_assert!(inv.mul(&p).is_identity());
    }

    #[test]
    fn cyclic_subgroups_are_divisors(n in 1usize..40) {
        let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let s = FiniteGSpace::subgroup_space(g, DEFAULT_ORDER_CAP).unwrap();
        prop_assert_eq!(s.n_points(), divisors(n));
        prop_assert_eq!(s.orbits().len(), divisors(n));
    }

    #[test]
    fn permutation_character_counts_fixed_cosets(spec in spec()) {
        let g = parse_group_spec(spec, DEFAULT_ORDER_CAP).unwrap();
        for h in g.all_subgroups(DEFAULT_ORDER_CAP).unwrap() {
            let rep = permutation_rep(&g, &h);
            let cosets = g.left_cosets(&h);
            for x in 0..g.order() {
                let fixed = cosets.reps.iter().filter(|&&r| h.contains(g.mul(g.inverse(r), g.mul(x, r)))).count();
                prop_assert_eq!(rep.character(x), q(fixed as i64));
            }
        }
    }

    #[test]
    fn random_reps_have_trivial_endomorphisms_at_least(seed in any::<u64>(), spec in spec()) {
        let g = parse_group_spec(spec, DEFAULT_ORDER_CAP).unwrap();
        let m = random_rep(&mut rng(seed), &g, 2);
        // every permutation rep contains the trivial rep, so Hom(M, M) has dimension >= 1
        prop_assert!(!hom_space(&m, &m).unwrap().is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_sheaves_satisfy_the_cocycle_condition(seed in any::<u64>(), spec in spec()) {
        let t = tower(spec);
        let e = random_sheaf(&mut rng(seed), t.top(), 3);
        prop_assert_eq!(cocycle_witness(&e), None);
        let d = orbit_decompose(&e).unwrap();
        prop_assert!(d.iso.is_iso());
    }

    #[test]
    fn abelian_structure(seed in any::<u64>(), spec in spec()) {
        let t = tower(spec);
        let mut r = rng(seed);
        let e = random_sheaf(&mut r, t.top(), 2);
        let f = random_sheaf(&mut r, t.top(), 2);
        prop_assert!(biproduct(&e, &f).unwrap().equations_hold());
        let m = random_map(&mut r, &e, &f);
        let fact = sheaf_factorization(&m).unwrap();
        prop_assert!(fact.verify(&m));
        for x in 0..e.n_points() {
            prop_assert_eq!(fact.image_sheaf().dim(x), m.at(x).rank());
        }
    }

    #[test]
    fn weyl_is_idempotent_with_mono_counit(seed in any::<u64>(), spec in spec()) {
        let t = tower(spec);
        let e = random_sheaf(&mut rng(seed), t.top(), 3);
        let w = weyl_functor(&e).unwrap();
        prop_assert!(w.inclusion.is_mono());
        prop_assert!(is_weyl(&w.sheaf).unwrap());
        let ww = weyl_functor(&w.sheaf).unwrap();
        prop_assert!(ww.inclusion.is_iso());
    }

    #[test]
    fn change_of_group_adjunction(seed in any::<u64>(), spec in spec()) {
        let t = tower(spec);
        let mut r = rng(seed);
        for k in 0..t.depth() {
            let d = random_sheaf(&mut r, t.level(k), 2);
            let e = random_sheaf(&mut r, t.level(k + 1), 2);
            let rep = adjunction_check_cg(&d, &e, t.step(k)).unwrap();
            prop_assert!(rep.holds(), "{:?}", rep);
            // pullback keeps stalks, pushforward of a pullback contains the original
            let pd = pullback_cg(&d, t.step(k)).unwrap();
            let back = pushforward_cg(&pd, t.step(k)).unwrap();
            for y in 0..d.n_points() {
                prop_assert!(back.dim(y) >= d.dim(y));
            }
        }
    }

    #[test]
    fn counit_is_iso(seed in any::<u64>(), spec in spec()) {
        let t = tower(spec);
        let e = random_sheaf(&mut rng(seed), t.top(), 3);
        prop_assert!(counit_check(&e, &t).unwrap().holds());
    }
}
