//! Weyl sheaves over subgroup spaces: sheaves whose stalk at `K` is fixed by `K`.

use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{counit_check, pullback_cg, pushforward_diagram};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{format_q, q, Matrix, Subspace, Q};
use crate::rep::{fixed_subspace_of, GroupRep, QModule};
use crate::sheaf::{
    are_isomorphic, direct_sum, sheaf_factorization, sheaf_hom_space, skyscraper, AdjunctionReport, FiniteEqSheaf,
    SheafMap,
};
use crate::tower::{FiniteGSpace, Projection, SpaceTower};

fn subgroups(base: &FiniteGSpace) -> Result<&[Subgroup]> {
    base.subgroup_points().ok_or(Error::WrongBase)
}

/// A point and a stalk vector moved by the point's own subgroup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylWitness {
    pub point: usize,
    pub element: usize,
    /// Exact entries as `p/q` strings.
    pub vector: Vec<String>,
}

/// `Ok(None)` when every stalk `E_K` is `K`-fixed.
pub fn weyl_violation(e: &FiniteEqSheaf) -> Result<Option<WeylWitness>> {
    let base = e.base();
    let subs = subgroups(base)?;
    let group = base.group();
    for (x, k) in subs.iter().enumerate() {
        for g in group.subgroup_generators(k) {
            let t = e.translation(g, x);
            if let Some(j) = (0..t.cols()).find(|&j| (0..t.rows()).any(|i| *t.get(i, j) != q((i == j) as i64))) {
                let vector = (0..t.cols()).map(|i| format_q(&q((i == j) as i64))).collect();
                return Ok(Some(WeylWitness { point: x, element: g, vector }));
            }
        }
    }
    Ok(None)
}

pub fn is_weyl(e: &FiniteEqSheaf) -> Result<bool> {
    Ok(weyl_violation(e)?.is_none())
}

/// `Weyl(E)` with the inclusion `Weyl(E) -> E`.
#[derive(Clone, Debug)]
pub struct WeylPart {
    pub sheaf: FiniteEqSheaf,
    pub inclusion: SheafMap,
    fixed: Vec<Subspace>,
}

pub fn weyl_functor(e: &FiniteEqSheaf) -> Result<WeylPart> {
    let base = e.base();
    let subs = subgroups(base)?;
    let group = base.group();
    let fixed: Vec<Subspace> = subs
        .iter()
        .enumerate()
        .map(|(x, k)| {
            fixed_subspace_of(e.dim(x), group.subgroup_generators(k).into_iter().map(|g| e.translation(g, x)))
        })
        .collect();
    let translations = group
        .generator_indices()
        .iter()
        .map(|&s| {
            (0..base.n_points())
                .map(|x| {
                    fixed[base.act(s, x)]
                        .coords_matrix(&e.translation(s, x).mul(fixed[x].basis()))
                        .ok_or(Error::NotKFixed { point: x })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let sheaf =
        FiniteEqSheaf::new(Arc::clone(base), fixed.iter().map(|f| QModule::new(f.dim())).collect(), translations)?;
    let inclusion = SheafMap::new(sheaf.clone(), e.clone(), fixed.iter().map(|f| f.basis().clone()).collect())?;
    Ok(WeylPart { sheaf, inclusion, fixed })
}

impl WeylPart {
    /// Factors a map `W -> E` out of a Weyl sheaf through the inclusion.
    pub fn factor(&self, f: &SheafMap) -> Result<SheafMap> {
        let maps = self
            .fixed
            .iter()
            .enumerate()
            .map(|(x, sub)| sub.coords_matrix(f.at(x)).ok_or(Error::NotKFixed { point: x }))
            .collect::<Result<Vec<_>>>()?;
        SheafMap::new(f.source().clone(), self.sheaf.clone(), maps)
    }
}

/// `Weyl(f)`, the restriction of `f` to the Weyl parts.
pub fn weyl_map(f: &SheafMap) -> Result<SheafMap> {
    let src = weyl_functor(f.source())?;
    let tgt = weyl_functor(f.target())?;
    tgt.factor(&f.compose(&src.inclusion)?)
}

/// `Hom(inc W, E) ≅ Hom(W, Weyl E)` for a Weyl sheaf `W`.
pub fn weyl_adjunction_check(w: &FiniteEqSheaf, e: &FiniteEqSheaf) -> Result<AdjunctionReport> {
    if let Some(bad) = weyl_violation(w)? {
        return Err(Error::NotKFixed { point: bad.point });
    }
    let we = weyl_functor(e)?;
    let ww = weyl_functor(w)?;
    let left = sheaf_hom_space(w, e)?;
    let right = sheaf_hom_space(w, &we.sheaf)?;
    let mut bijection = true;
    for f in &left {
        bijection &= we.inclusion.compose(&we.factor(f)?)?.maps() == f.maps();
    }
    for g in &right {
        bijection &= we.factor(&we.inclusion.compose(g)?)?.maps() == g.maps();
    }
    // unit W -> Weyl(inc W), counit inc Weyl(E) -> E
    let unit = ww.factor(&SheafMap::identity(w))?;
    let tri1 = ww.inclusion.compose(&unit)?.is_identity();
    let wwe = weyl_functor(&we.sheaf)?;
    let tri2 = weyl_map(&we.inclusion)?.compose(&wwe.factor(&SheafMap::identity(&we.sheaf))?)?.is_identity();
    Ok(AdjunctionReport {
        left_dim: left.len(),
        right_dim: right.len(),
        triangles: tri1 && tri2,
        bijection,
        unit_iso: unit.is_iso(),
        counit_mono: we.inclusion.is_mono(),
    })
}

/// The stalk at `x` as a rep of `W_G K = N_G K / K`, checked on every element.
pub fn stalk_weyl_rep(e: &FiniteEqSheaf, x: usize) -> Result<GroupRep> {
    let base = e.base();
    let k = subgroups(base)?.get(x).ok_or(Error::IndexOutOfRange { index: x, bound: base.n_points() })?;
    let wg = base.group().weyl_group(k);
    let lifts = wg.projection.least_lifts();
    let of = |n: usize| e.translation(wg.normalizer.members()[n], x);
    if (0..wg.normalizer.order()).any(|n| of(n) != of(lifts[wg.projection.apply(n)])) {
        return Err(Error::NotKFixed { point: x });
    }
    let mats = lifts.iter().map(|&n| of(n).clone()).collect();
    GroupRep::from_element_matrices(Arc::clone(&wg.weyl), e.stalk_module(x).clone(), mats)
        .map_err(|_| Error::NotKFixed { point: x })
}

/// Skyscraper on the orbit of `x` from a rep of the stabilizer `N_G K`, required to be `K`-fixed.
pub fn weyl_skyscraper(base: &Arc<FiniteGSpace>, x: usize, m: &GroupRep) -> Result<FiniteEqSheaf> {
    let k = subgroups(base)?.get(x).ok_or(Error::IndexOutOfRange { index: x, bound: base.n_points() })?;
    let stab = base.stabilizer(x);
    if m.group().order() != stab.order() {
        return Err(Error::WrongStabilizer { point: x });
    }
    for &g in k.members() {
        let pos = stab.position(g).ok_or(Error::WrongStabilizer { point: x })?;
        if !m.matrix(pos).is_identity() {
            return Err(Error::NotKFixed { point: x });
        }
    }
    skyscraper(base, x, m)
}

/// Skyscraper from a rep of the Weyl group, inflated to the normalizer.
pub fn weyl_skyscraper_from_quotient(base: &Arc<FiniteGSpace>, x: usize, a: &GroupRep) -> Result<FiniteEqSheaf> {
    let k = subgroups(base)?.get(x).ok_or(Error::IndexOutOfRange { index: x, bound: base.n_points() })?;
    let wg = base.group().weyl_group(k);
    weyl_skyscraper(base, x, &a.pullback(&wg.projection)?)
}

#[derive(Clone, Debug)]
pub struct WeylProduct {
    pub sheaf: FiniteEqSheaf,
    pub projections: Vec<SheafMap>,
}

/// `Weyl(∏ inc E_i)` with its projections.
pub fn weyl_product(base: &Arc<FiniteGSpace>, family: &[FiniteEqSheaf]) -> Result<WeylProduct> {
    let (sum, _, projections) = direct_sum(base, family)?;
    let part = weyl_functor(&sum)?;
    let projections = projections.iter().map(|p| p.compose(&part.inclusion)).collect::<Result<Vec<_>>>()?;
    Ok(WeylProduct { sheaf: part.sheaf, projections })
}

/// Every cone from a Weyl test sheaf factors uniquely through the product.
pub fn weyl_product_universal(p: &WeylProduct, family: &[FiniteEqSheaf], test: &FiniteEqSheaf) -> Result<bool> {
    let into = sheaf_hom_space(test, &p.sheaf)?;
    let legs: Vec<Vec<SheafMap>> = family.iter().map(|f| sheaf_hom_space(test, f)).collect::<Result<Vec<_>>>()?;
    if into.len() != legs.iter().map(Vec::len).sum::<usize>() {
        return Ok(false);
    }
    // projections applied to the hom basis must be jointly injective
    let rows: Vec<Vec<Q>> = into
        .iter()
        .map(|f| {
            p.projections
                .iter()
                .flat_map(|pr| {
                    pr.compose(f)
                        .expect("composable")
                        .maps()
                        .iter()
                        .flat_map(|m| m.entries().to_vec())
                        .collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    Ok(Matrix::from_rows(rows.len(), width, rows).expect("equal row lengths").rank() == into.len())
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylLimitReport {
    /// `Weyl(E ⊕ F) ≅ Weyl E ⊕ Weyl F`.
    pub products: bool,
    /// `Weyl(eq(f, g)) ≅ eq(Weyl f, Weyl g)`.
    pub equalizers: bool,
}

impl WeylLimitReport {
    pub fn holds(&self) -> bool {
        self.products && self.equalizers
    }
}

/// Compares `Weyl` of a binary product and of the equalizer of `f, g: E -> F` with the limits of the Weyl parts.
pub fn weyl_limit_check(f: &SheafMap, g: &SheafMap) -> Result<WeylLimitReport> {
    let (e, t) = (f.source(), f.target());
    let base = e.base();
    let (sum, _, _) = direct_sum(base, &[e.clone(), t.clone()])?;
    let lhs = weyl_functor(&sum)?.sheaf;
    let (rhs, _, _) = direct_sum(base, &[weyl_functor(e)?.sheaf, weyl_functor(t)?.sheaf])?;
    let products = are_isomorphic(&lhs, &rhs);

    let eq = sheaf_factorization(&f.sub(g)?)?;
    let weyl_eq = weyl_functor(eq.kernel_sheaf())?.sheaf;
    let eq_weyl = sheaf_factorization(&weyl_map(f)?.sub(&weyl_map(g)?)?)?;
    let equalizers = are_isomorphic(&weyl_eq, eq_weyl.kernel_sheaf());
    Ok(WeylLimitReport { products, equalizers })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylPullbackReport {
    pub source_weyl: bool,
    pub pullback_weyl: bool,
}

/// Pulls a Weyl sheaf back along a subgroup-space step.
pub fn weyl_pullback_check(w: &FiniteEqSheaf, step: &Projection) -> Result<WeylPullbackReport> {
    let source_weyl = is_weyl(w)?;
    let pulled = pullback_cg(w, step)?;
    Ok(WeylPullbackReport { source_weyl, pullback_weyl: is_weyl(&pulled)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylDiagramReport {
    pub levels_weyl: Vec<bool>,
    pub counit_iso: bool,
    pub adjoint_maps_iso: bool,
}

impl WeylDiagramReport {
    pub fn holds(&self) -> bool {
        self.levels_weyl.iter().all(|&b| b) && self.counit_iso && self.adjoint_maps_iso
    }
}

/// Pushes a Weyl sheaf over the top level down the tower and back.
pub fn weyl_diagram_round_trip(e: &FiniteEqSheaf, tower: &Arc<SpaceTower>) -> Result<WeylDiagramReport> {
    let d = pushforward_diagram(e, tower)?;
    let levels_weyl = d.levels().iter().map(is_weyl).collect::<Result<Vec<_>>>()?;
    let c = counit_check(e, tower)?;
    Ok(WeylDiagramReport { levels_weyl, counit_iso: c.counit_iso, adjoint_maps_iso: c.adjoint_maps_iso })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{example_group_ring, sheafify};
    use crate::group::{FiniteGroup, GroupHom, DEFAULT_ORDER_CAP};
    use crate::sheaf::constant_sheaf;
    use crate::tower::GroupTower;

    fn s3_space() -> Arc<FiniteGSpace> {
        let g = Arc::new(FiniteGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap());
        Arc::new(FiniteGSpace::subgroup_space(g, DEFAULT_ORDER_CAP).unwrap())
    }

    fn s3_tower() -> Arc<SpaceTower> {
        let g = Arc::new(FiniteGroup::symmetric(3, DEFAULT_ORDER_CAP).unwrap());
        let tower = GroupTower::from_normal_chain(&g, &[g.trivial_subgroup()]).unwrap();
        Arc::new(SpaceTower::subgroup_space_tower(tower, DEFAULT_ORDER_CAP).unwrap())
    }

    fn point(base: &FiniteGSpace, pred: impl Fn(&Subgroup) -> bool) -> usize {
        base.subgroup_points().unwrap().iter().position(pred).unwrap()
    }

    fn transposition(base: &FiniteGSpace) -> usize {
        let g = base.group();
        point(base, |h| h.order() == 2 && h.members().iter().any(|&m| g.element(m).images() == [1, 0, 2]))
    }

    #[test]
    fn constant_and_zero_are_weyl() {
        let base = s3_space();
        let c = constant_sheaf(&base, &GroupRep::trivial(base.group(), 2)).unwrap();
        assert!(is_weyl(&c).unwrap());
        assert!(is_weyl(&FiniteEqSheaf::zero(&base)).unwrap());
        let w = weyl_functor(&c).unwrap();
        assert_eq!(w.sheaf, c);
        assert!(w.inclusion.is_iso());
    }

    #[test]
    fn non_subgroup_base_rejected() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let base = Arc::new(FiniteGSpace::new(g.clone(), 1, &[vec![0]], None).unwrap());
        assert_eq!(is_weyl(&FiniteEqSheaf::zero(&base)), Err(Error::WrongBase));
    }

    #[test]
    fn group_ring_on_s3() {
        let t = s3_tower();
        let e = sheafify(&example_group_ring(&t).unwrap()).unwrap().sheaf;
        let base = t.top();
        let bad = weyl_violation(&e).unwrap().expect("not Weyl");
        assert!(base.subgroup_points().unwrap()[bad.point].order() > 1);
        let w = weyl_functor(&e).unwrap();
        let x = transposition(base);
        assert_eq!((e.dim(x), w.sheaf.dim(x)), (3, 2));
        let a3 = point(base, |h| h.order() == 3);
        assert_eq!((e.dim(a3), w.sheaf.dim(a3)), (2, 2));
        let triv = point(base, |h| h.order() == 1);
        assert_eq!((e.dim(triv), w.sheaf.dim(triv)), (6, 6));
        let whole = point(base, |h| h.order() == 6);
        assert_eq!((e.dim(whole), w.sheaf.dim(whole)), (1, 1));
        assert!(is_weyl(&w.sheaf).unwrap());
        assert!(w.inclusion.is_mono());

        let c = constant_sheaf(base, &GroupRep::trivial(base.group(), 1)).unwrap();
        let r = weyl_adjunction_check(&c, &e).unwrap();
        assert!(r.holds() && r.unit_iso && r.counit_mono, "{r:?}");
        let r = weyl_adjunction_check(&FiniteEqSheaf::zero(base), &FiniteEqSheaf::zero(base)).unwrap();
        assert_eq!((r.left_dim, r.right_dim), (0, 0));
        assert!(matches!(weyl_adjunction_check(&e, &c), Err(Error::NotKFixed { .. })));
    }

    #[test]
    fn constant_at_regular_rep_has_fixed_stalks() {
        let base = s3_space();
        let v = GroupRep::regular(base.group());
        let w = weyl_functor(&constant_sheaf(&base, &v).unwrap()).unwrap();
        for (x, k) in base.subgroup_points().unwrap().iter().enumerate() {
            assert_eq!(w.sheaf.dim(x), v.fixed_subspace(k).dim());
            assert_eq!(w.sheaf.dim(x), 6 / k.order());
            assert!(stalk_weyl_rep(&w.sheaf, x).is_ok());
        }
        assert!(stalk_weyl_rep(&constant_sheaf(&base, &v).unwrap(), transposition(&base)).is_err());
    }

    #[test]
    fn skyscrapers() {
        let base = s3_space();
        let x = transposition(&base);
        let wg = base.group().weyl_group(&base.subgroup_points().unwrap()[x]);
        assert_eq!(wg.weyl.order(), 1);
        let sky = weyl_skyscraper_from_quotient(&base, x, &GroupRep::trivial(&wg.weyl, 1)).unwrap();
        assert!(is_weyl(&sky).unwrap());
        assert_eq!(sky.dims().iter().filter(|&&d| d == 1).count(), 3);
        assert_eq!(sky.total_dim(), 3);
        let stab = base.group().subgroup_group(&base.stabilizer(x));
        assert!(matches!(weyl_skyscraper(&base, x, &GroupRep::regular(&stab)), Err(Error::NotKFixed { .. })));
        let z = weyl_skyscraper_from_quotient(&base, x, &GroupRep::zero(&wg.weyl)).unwrap();
        assert!(z.is_zero());
        let whole = point(&base, |h| h.order() == 6);
        let wg = base.group().weyl_group(&base.subgroup_points().unwrap()[whole]);
        let sky = weyl_skyscraper_from_quotient(&base, whole, &GroupRep::trivial(&wg.weyl, 2)).unwrap();
        assert_eq!(sky.total_dim(), 2);
        assert_eq!(sky.dim(whole), 2);
        let a3 = point(&base, |h| h.order() == 3);
        let wg = base.group().weyl_group(&base.subgroup_points().unwrap()[a3]);
        assert_eq!(wg.weyl.order(), 2);
        let sky = weyl_skyscraper_from_quotient(&base, a3, &GroupRep::regular(&wg.weyl)).unwrap();
        assert!(is_weyl(&sky).unwrap());
        assert_eq!(stalk_weyl_rep(&sky, a3).unwrap().dim(), 2);
    }

    #[test]
    fn products() {
        let base = s3_space();
        let x = transposition(&base);
        let a3 = point(&base, |h| h.order() == 3);
        let wx = base.group().weyl_group(&base.subgroup_points().unwrap()[x]).weyl;
        let wa = base.group().weyl_group(&base.subgroup_points().unwrap()[a3]).weyl;
        let s1 = weyl_skyscraper_from_quotient(&base, x, &GroupRep::trivial(&wx, 1)).unwrap();
        let s2 = weyl_skyscraper_from_quotient(&base, a3, &GroupRep::regular(&wa)).unwrap();
        let family = vec![s1.clone(), s2.clone()];
        let p = weyl_product(&base, &family).unwrap();
        let expected: Vec<usize> = s1.dims().iter().zip(s2.dims()).map(|(a, b)| a + b).collect();
        assert_eq!(p.sheaf.dims(), expected);
        let test = constant_sheaf(&base, &GroupRep::trivial(base.group(), 1)).unwrap();
        assert!(weyl_product_universal(&p, &family, &test).unwrap());
        assert!(weyl_product_universal(&p, &family, &s2).unwrap());
        let one = weyl_product(&base, &family[..1]).unwrap();
        assert_eq!(one.sheaf.dims(), s1.dims());
        let with_zero = weyl_product(&base, &[s1.clone(), FiniteEqSheaf::zero(&base)]).unwrap();
        assert_eq!(with_zero.sheaf.dims(), s1.dims());
    }

    #[test]
    fn limits() {
        let base = s3_space();
        let e = constant_sheaf(&base, &GroupRep::regular(base.group())).unwrap();
        let homs = sheaf_hom_space(&e, &e).unwrap();
        let r = weyl_limit_check(&homs[0], &homs[1]).unwrap();
        assert!(r.holds());
        let r = weyl_limit_check(&SheafMap::identity(&e), &SheafMap::identity(&e)).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn pullback_preserves_weyl() {
        let c4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let one = Arc::new(FiniteGroup::trivial());
        let steps = vec![
            GroupHom::new(c2.clone(), one.clone(), vec![0, 0]).unwrap(),
            GroupHom::from_generator_images(c4.clone(), c2.clone(), &[c2.generator_indices()[0]]).unwrap(),
        ];
        let groups = GroupTower::new(vec![one, c2.clone(), c4], steps).unwrap();
        let t = SpaceTower::subgroup_space_tower(groups, DEFAULT_ORDER_CAP).unwrap();
        let level = t.level(1);
        for x in 0..level.n_points() {
            let wg = c2.weyl_group(&level.subgroup_points().unwrap()[x]);
            let sky = weyl_skyscraper_from_quotient(level, x, &GroupRep::regular(&wg.weyl)).unwrap();
            let r = weyl_pullback_check(&sky, t.step(1)).unwrap();
            assert!(r.source_weyl && r.pullback_weyl);
        }
        let c = constant_sheaf(level, &GroupRep::trivial(&c2, 1)).unwrap();
        assert!(weyl_pullback_check(&c, t.step(1)).unwrap().pullback_weyl);
        assert!(weyl_pullback_check(&FiniteEqSheaf::zero(level), t.step(1)).unwrap().pullback_weyl);
        let top = t.top();
        let w = weyl_functor(&constant_sheaf(top, &GroupRep::regular(t.groups().top())).unwrap()).unwrap();
        let r = weyl_diagram_round_trip(&w.sheaf, &Arc::new(t)).unwrap();
        assert!(r.holds(), "{r:?}");
    }
}
