//! Seeded random instances for property checks.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{example_group_ring, presheaf_sum, EqPresheaf};
use crate::error::Result;
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::linalg::{q, Matrix};
use crate::rep::{permutation_rep, GroupRep};
use crate::sheaf::{direct_sum, sheaf_hom_space, skyscraper, FiniteEqSheaf, SheafMap};
use crate::tower::{FiniteGSpace, SpaceTower};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `L·U` with unit lower `L` and upper `U` with `±1` diagonal; always invertible.
pub fn invertible(rng: &mut impl Rng, n: usize) -> Matrix {
    let l = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => q(1),
        std::cmp::Ordering::Greater => q(rng.random_range(-2..=2)),
        std::cmp::Ordering::Less => q(0),
    });
    let u = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => q(if rng.random_bool(0.5) { 1 } else { -1 }),
        std::cmp::Ordering::Less => q(rng.random_range(-2..=2)),
        std::cmp::Ordering::Greater => q(0),
    });
    l.mul(&u)
}

/// A sum of up to `max_summands` permutation reps, in a random basis.
pub fn random_rep(rng: &mut impl Rng, group: &Arc<FiniteGroup>, max_summands: usize) -> GroupRep {
    let subs = group.all_subgroups(DEFAULT_ORDER_CAP).expect("small group");
    // favour small index so dimensions stay modest
    let small: Vec<_> = subs.iter().filter(|h| group.order() / h.order() <= 4).collect();
    let count = rng.random_range(1..=max_summands.max(1));
    let parts: Vec<GroupRep> =
        (0..count).map(|_| permutation_rep(group, small.choose(rng).expect("G itself"))).collect();
    let sum = GroupRep::direct_sum(&parts.iter().collect::<Vec<_>>()).expect("same group");
    let p = invertible(rng, sum.dim());
    sum.conjugate_by(&p).expect("invertible")
}

/// Conjugates every stalk by an invertible matrix.
pub fn change_basis(e: &FiniteEqSheaf, p: &[Matrix]) -> Result<FiniteEqSheaf> {
    let base = e.base();
    let inv: Vec<Matrix> = p.iter().map(|m| m.inverse().expect("invertible")).collect();
    let translations = base
        .group()
        .generator_indices()
        .iter()
        .map(|&s| (0..base.n_points()).map(|x| p[base.act(s, x)].mul(e.translation(s, x)).mul(&inv[x])).collect())
        .collect();
    FiniteEqSheaf::new(Arc::clone(base), e.stalk_modules().to_vec(), translations)
}

/// A sum of skyscrapers on random orbits, then a random change of basis at every point.
pub fn random_sheaf(rng: &mut impl Rng, base: &Arc<FiniteGSpace>, max_orbits: usize) -> FiniteEqSheaf {
    let orbits = base.orbits();
    let count = rng.random_range(1..=max_orbits.max(1));
    let parts: Vec<FiniteEqSheaf> = (0..count)
        .map(|_| {
            let x = *orbits.choose(rng).expect("nonempty base").choose(rng).expect("nonempty orbit");
            let stab = base.group().subgroup_group(&base.stabilizer(x));
            skyscraper(base, x, &random_rep(rng, &stab, 2)).expect("stabilizer rep")
        })
        .collect();
    let (sum, _, _) = direct_sum(base, &parts).expect("common base");
    let p: Vec<Matrix> = (0..base.n_points()).map(|x| invertible(rng, sum.dim(x))).collect();
    change_basis(&sum, &p).expect("conjugate of a sheaf")
}

/// A random integer combination of a hom-space basis.
pub fn random_map(rng: &mut impl Rng, e: &FiniteEqSheaf, f: &FiniteEqSheaf) -> SheafMap {
    let basis = sheaf_hom_space(e, f).expect("same base");
    let mut acc = SheafMap::zero(e, f).expect("same base");
    for b in &basis {
        acc = acc.add(&b.scale(&q(rng.random_range(-3..=3)))).expect("same shape");
    }
    acc
}

/// Sections of a random sheaf, plus a constant presheaf at a random top rep,
/// plus the group-ring presheaf on subgroup towers; then a random basis change.
pub fn random_presheaf(rng: &mut impl Rng, tower: &Arc<SpaceTower>) -> EqPresheaf {
    let top = tower.groups().top();
    let mut parts = vec![EqPresheaf::of_sheaf(&random_sheaf(rng, tower.top(), 2), tower).expect("top sheaf")];
    if rng.random_bool(0.5) {
        parts.push(EqPresheaf::constant(tower, &random_rep(rng, top, 1)).expect("constant"));
    }
    if tower.is_subgroup_tower() && rng.random_bool(0.5) {
        parts.push(example_group_ring(tower).expect("subgroup tower"));
    }
    let sum = presheaf_sum(&parts).expect("common tower");
    let depth = tower.depth();
    let p: Vec<Vec<Matrix>> = (0..=depth)
        .map(|k| (0..tower.level(k).n_points()).map(|x| invertible(rng, sum.level(k).dim(x))).collect())
        .collect();
    let levels = (0..=depth).map(|k| change_basis(sum.level(k), &p[k]).expect("conjugate")).collect();
    let restrictions = (0..depth)
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| {
                    let x = tower.step(k).map_point(xp);
                    p[k + 1][xp].mul(sum.restriction(k).at(xp)).mul(&p[k][x].inverse().expect("invertible"))
                })
                .collect()
        })
        .collect();
    EqPresheaf::new(Arc::clone(tower), levels, restrictions).expect("conjugate of a presheaf")
}
