//! Equivariant sheaves of rational vector spaces over a finite discrete G-space.
//!
//! A sheaf is a stalk per point together with translation isomorphisms
//! `g: E_x -> E_{g·x}`. Only the generator translations are input; the full
//! table is derived at construction, which doubles as the cocycle check.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{BlockSystem, Matrix, Quotient, Subspace};
use crate::rep::{hom_space, EquivariantMap, GroupRep, QModule};
use crate::tower::FiniteGSpace;

#[derive(Clone)]
pub struct FiniteEqSheaf {
    inner: Arc<SheafData>,
}

struct SheafData {
    base: Arc<FiniteGSpace>,
    stalks: Vec<QModule>,
    /// `full[g][x]: E_x -> E_{g·x}`.
    full: Vec<Vec<Matrix>>,
}

impl std::fmt::Debug for FiniteEqSheaf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteEqSheaf").field("dims", &self.dims()).finish()
    }
}

impl PartialEq for FiniteEqSheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base.same_as(&other.inner.base)
                && self.dims() == other.dims()
                && self.inner.full == other.inner.full)
    }
}

impl FiniteEqSheaf {
    /// Validates stalks and generator translations (`translations[i][x]` for generator `i`).
    pub fn new(base: Arc<FiniteGSpace>, stalks: Vec<QModule>, translations: Vec<Vec<Matrix>>) -> Result<FiniteEqSheaf> {
        let group = Arc::clone(base.group());
        let gens = group.generator_indices().to_vec();
        let n = base.n_points();
        if stalks.len() != n {
            return Err(Error::Shape(format!("{} stalks for {n} points", stalks.len())));
        }
        if translations.len() != gens.len() || translations.iter().any(|t| t.len() != n) {
            return Err(Error::Shape("one translation per generator and point required".into()));
        }
        for (i, &s) in gens.iter().enumerate() {
            for x in 0..n {
                let m = &translations[i][x];
                let (d_in, d_out) = (stalks[x].dim(), stalks[base.act(s, x)].dim());
                if m.shape() != (d_out, d_in) {
                    return Err(Error::Shape(format!("translation by {s} at {x} has shape {:?}", m.shape())));
                }
                if d_in != d_out || !m.is_invertible() {
                    return Err(Error::NonInvertibleTranslation { generator: s, point: x });
                }
            }
        }
        let mut full: Vec<Option<Vec<Matrix>>> = vec![None; group.order()];
        full[0] = Some(stalks.iter().map(|m| Matrix::identity(m.dim())).collect());
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            let tg = full[g].clone().expect("visited");
            for (i, &s) in gens.iter().enumerate() {
                let sg = group.mul(s, g);
                let composed: Vec<Matrix> = (0..n).map(|x| translations[i][base.act(g, x)].mul(&tg[x])).collect();
                match &full[sg] {
                    None => {
                        full[sg] = Some(composed);
                        queue.push_back(sg);
                    }
                    Some(existing) => {
                        if let Some(x) = (0..n).find(|&x| existing[x] != composed[x]) {
                            return Err(Error::CocycleViolation { g_outer: s, g_inner: g, point: x });
                        }
                    }
                }
            }
        }
        let full = full.into_iter().map(|t| t.expect("group is generated")).collect();
        Ok(FiniteEqSheaf { inner: Arc::new(SheafData { base, stalks, full }) })
    }

    pub fn zero(base: &Arc<FiniteGSpace>) -> FiniteEqSheaf {
        let n = base.n_points();
        let full = vec![vec![Matrix::zeros(0, 0); n]; base.group().order()];
        FiniteEqSheaf { inner: Arc::new(SheafData { base: Arc::clone(base), stalks: vec![QModule::new(0); n], full }) }
    }

    pub fn base(&self) -> &Arc<FiniteGSpace> {
        &self.inner.base
    }

    pub fn n_points(&self) -> usize {
        self.inner.stalks.len()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.inner.stalks[x].dim()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.inner.stalks.iter().map(QModule::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn stalk_module(&self, x: usize) -> &QModule {
        &self.inner.stalks[x]
    }

    pub fn stalk_modules(&self) -> &[QModule] {
        &self.inner.stalks
    }

    /// `g: E_x -> E_{g·x}`.
    pub fn translation(&self, g: usize, x: usize) -> &Matrix {
        &self.inner.full[g][x]
    }

    /// `translations[i][x]` for the `i`-th generator.
    pub fn generator_translations(&self) -> Vec<Vec<Matrix>> {
        self.base().group().generator_indices().iter().map(|&s| self.inner.full[s].clone()).collect()
    }

    /// The stalk at `x` as a rep of its stabilizer.
    pub fn stalk_at(&self, x: usize) -> GroupRep {
        let stab = self.base().stabilizer(x);
        let sub = self.base().group().subgroup_group(&stab);
        let gens: Vec<Matrix> =
            sub.generator_indices().iter().map(|&i| self.inner.full[stab.members()[i]][x].clone()).collect();
        GroupRep::new(sub, self.inner.stalks[x].clone(), &gens).expect("stalk action of a valid sheaf")
    }

    /// `Γ(U, E) = ∏_{x∈U} E_x` as a rep of the setwise stabilizer of `U`, returned alongside it.
    ///
    /// Factors are ordered by point index.
    pub fn sections(&self, points: &[usize]) -> Result<(GroupRep, Subgroup)> {
        let mut pts = points.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if let Some(&bad) = pts.iter().find(|&&x| x >= self.n_points()) {
            return Err(Error::IndexOutOfRange { index: bad, bound: self.n_points() });
        }
        let base = self.base();
        let stab = base.setwise_stabilizer(&pts);
        let sub = base.group().subgroup_group(&stab);
        let mut offset = vec![usize::MAX; self.n_points()];
        let mut total = 0;
        for &x in &pts {
            offset[x] = total;
            total += self.dim(x);
        }
        let mut labels = Vec::with_capacity(total);
        for &x in &pts {
            labels.extend(self.inner.stalks[x].labels().iter().map(|l| format!("{x}:{l}")));
        }
        let gens: Vec<Matrix> = sub
            .generator_indices()
            .iter()
            .map(|&i| {
                let g = stab.members()[i];
                let mut m = Matrix::zeros(total, total);
                for &x in &pts {
                    m.set_block(offset[base.act(g, x)], offset[x], &self.inner.full[g][x]);
                }
                m
            })
            .collect();
        Ok((GroupRep::new(sub, QModule::with_labels(labels), &gens)?, stab))
    }

    /// The same data with the given modules relabelled; dimensions must match.
    pub fn relabel(&self, stalks: Vec<QModule>) -> Result<FiniteEqSheaf> {
        if stalks.iter().map(QModule::dim).ne(self.dims()) {
            return Err(Error::Shape("relabelling changes stalk dimensions".into()));
        }
        Ok(FiniteEqSheaf {
            inner: Arc::new(SheafData { base: Arc::clone(self.base()), stalks, full: self.inner.full.clone() }),
        })
    }
}

/// Every stalk `M`, every translation `ρ_M(g)`.
pub fn constant_sheaf(base: &Arc<FiniteGSpace>, m: &GroupRep) -> Result<FiniteEqSheaf> {
    if **m.group() != **base.group() {
        return Err(Error::Shape("constant sheaf module is not a rep of the base group".into()));
    }
    let n = base.n_points();
    let translations = m.generator_matrices().into_iter().map(|a| vec![a; n]).collect();
    FiniteEqSheaf::new(Arc::clone(base), vec![m.module().clone(); n], translations)
}

pub(crate) fn is_rep_of_stabilizer(base: &FiniteGSpace, x: usize, m: &GroupRep) -> Option<Subgroup> {
    let stab = base.stabilizer(x);
    let g = base.group();
    let ok = m.group().order() == stab.order()
        && stab.members().iter().enumerate().all(|(i, &s)| m.group().element(i) == g.element(s));
    ok.then_some(stab)
}

/// `G ×_{stab(x)} M` over the orbit of `x`, zero elsewhere.
pub fn skyscraper(base: &Arc<FiniteGSpace>, x: usize, m: &GroupRep) -> Result<FiniteEqSheaf> {
    if x >= base.n_points() {
        return Err(Error::IndexOutOfRange { index: x, bound: base.n_points() });
    }
    let stab = is_rep_of_stabilizer(base, x, m).ok_or(Error::WrongStabilizer { point: x })?;
    let group = base.group();
    let t = base.transversal(x);
    let n = base.n_points();
    let stalks = (0..n).map(|y| if t[y].is_some() { m.module().clone() } else { QModule::new(0) }).collect();
    let translations = group
        .generator_indices()
        .iter()
        .map(|&s| {
            (0..n)
                .map(|y| match t[y] {
                    None => Matrix::zeros(0, 0),
                    Some(ty) => {
                        let sy = base.act(s, y);
                        let t_sy = t[sy].expect("orbits are invariant");
                        let h = group.mul(group.inverse(t_sy), group.mul(s, ty));
                        m.matrix(stab.position(h).expect("returns to the stabilizer")).clone()
                    }
                })
                .collect()
        })
        .collect();
    FiniteEqSheaf::new(Arc::clone(base), stalks, translations)
}

/// A family of matrices `f_x: E_x -> F_x` commuting with translations.
#[derive(Clone, Debug, PartialEq)]
pub struct SheafMap {
    source: FiniteEqSheaf,
    target: FiniteEqSheaf,
    maps: Vec<Matrix>,
}

impl SheafMap {
    pub fn new(source: FiniteEqSheaf, target: FiniteEqSheaf, maps: Vec<Matrix>) -> Result<SheafMap> {
        if !source.base().same_as(target.base()) {
            return Err(Error::Shape("sheaf map between sheaves over different bases".into()));
        }
        if maps.len() != source.n_points() {
            return Err(Error::Shape("one matrix per point required".into()));
        }
        for (x, m) in maps.iter().enumerate() {
            if m.shape() != (target.dim(x), source.dim(x)) {
                return Err(Error::Shape(format!("map at point {x} has shape {:?}", m.shape())));
            }
        }
        let base = source.base();
        for &s in base.group().generator_indices() {
            for x in 0..source.n_points() {
                let sx = base.act(s, x);
                if maps[sx].mul(source.translation(s, x)) != target.translation(s, x).mul(&maps[x]) {
                    return Err(Error::NotEquivariant { element: s, point: x });
                }
            }
        }
        Ok(SheafMap { source, target, maps })
    }

    pub fn identity(e: &FiniteEqSheaf) -> SheafMap {
        let maps = e.dims().into_iter().map(Matrix::identity).collect();
        SheafMap { source: e.clone(), target: e.clone(), maps }
    }

    pub fn zero(source: &FiniteEqSheaf, target: &FiniteEqSheaf) -> Result<SheafMap> {
        let maps = (0..source.n_points()).map(|x| Matrix::zeros(target.dim(x), source.dim(x))).collect();
        SheafMap::new(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &FiniteEqSheaf {
        &self.source
    }

    pub fn target(&self) -> &FiniteEqSheaf {
        &self.target
    }

    pub fn at(&self, x: usize) -> &Matrix {
        &self.maps[x]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    fn parallel(&self, other: &SheafMap) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Shape("maps are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &SheafMap) -> Result<SheafMap> {
        self.parallel(other)?;
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect();
        SheafMap::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn neg(&self) -> SheafMap {
        SheafMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(Matrix::neg).collect(),
        }
    }

    pub fn sub(&self, other: &SheafMap) -> Result<SheafMap> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &crate::linalg::Q) -> SheafMap {
        SheafMap {
            source: self.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().map(|m| m.scale(c)).collect(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SheafMap) -> Result<SheafMap> {
        if inner.target != self.source {
            return Err(Error::Shape("composed sheaf maps do not match".into()));
        }
        let maps = self.maps.iter().zip(&inner.maps).map(|(a, b)| a.mul(b)).collect();
        Ok(SheafMap { source: inner.source.clone(), target: self.target.clone(), maps })
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(Matrix::is_identity)
    }

    pub fn is_mono(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|m| m.is_square() && m.is_invertible())
    }

    pub fn inverse(&self) -> Option<SheafMap> {
        let maps = self.maps.iter().map(Matrix::inverse).collect::<Option<Vec<_>>>()?;
        Some(SheafMap { source: self.target.clone(), target: self.source.clone(), maps })
    }
}

/// Isomorphism test via stalk characters at orbit representatives, exact over `Q`.
pub fn are_isomorphic(e: &FiniteEqSheaf, f: &FiniteEqSheaf) -> bool {
    if !e.base().same_as(f.base()) || e.dims() != f.dims() {
        return false;
    }
    e.base().orbits().iter().all(|orbit| {
        let x = orbit[0];
        let stab = e.base().stabilizer(x);
        stab.members().iter().all(|&g| e.translation(g, x).trace() == f.translation(g, x).trace())
    })
}

/// A basis of `Hom(E, F)`.
pub fn sheaf_hom_space(e: &FiniteEqSheaf, f: &FiniteEqSheaf) -> Result<Vec<SheafMap>> {
    if !e.base().same_as(f.base()) {
        return Err(Error::Shape("hom space between sheaves over different bases".into()));
    }
    let base = e.base();
    let mut sys = BlockSystem::new();
    let blocks: Vec<usize> = (0..e.n_points()).map(|x| sys.add_block(f.dim(x), e.dim(x))).collect();
    for &s in base.group().generator_indices() {
        for x in 0..e.n_points() {
            let sx = base.act(s, x);
            sys.add_commutation(f.translation(s, x).clone(), blocks[x], blocks[sx], e.translation(s, x).clone());
        }
    }
    Ok(sys.solve().into_iter().map(|maps| SheafMap { source: e.clone(), target: f.clone(), maps }).collect())
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    /// Least point of each orbit with its stalk rep.
    pub parts: Vec<(usize, GroupRep)>,
    /// The sum of skyscrapers built from `parts`.
    pub reconstruction: FiniteEqSheaf,
    /// Isomorphism `reconstruction -> E`.
    pub iso: SheafMap,
}

pub fn orbit_decompose(e: &FiniteEqSheaf) -> Result<OrbitDecomposition> {
    let base = e.base();
    let parts: Vec<(usize, GroupRep)> = base.orbits().iter().map(|o| (o[0], e.stalk_at(o[0]))).collect();
    let mut reconstruction = FiniteEqSheaf::zero(base);
    for (x, m) in &parts {
        reconstruction = biproduct(&reconstruction, &skyscraper(base, *x, m)?)?.sum;
    }
    let mut maps = vec![Matrix::zeros(0, 0); base.n_points()];
    for (x, _) in &parts {
        let t = base.transversal(*x);
        for (y, ty) in t.iter().enumerate() {
            if let Some(ty) = ty {
                maps[y] = e.translation(*ty, *x).clone();
            }
        }
    }
    let iso = SheafMap::new(reconstruction.clone(), e.clone(), maps)?;
    Ok(OrbitDecomposition { parts, reconstruction, iso })
}

#[derive(Clone, Debug)]
pub struct Biproduct {
    pub sum: FiniteEqSheaf,
    pub inclusions: [SheafMap; 2],
    pub projections: [SheafMap; 2],
}

impl Biproduct {
    /// `p_i ι_j = δ_ij` and `ι_1 p_1 + ι_2 p_2 = id`.
    pub fn equations_hold(&self) -> bool {
        let check = || -> Result<bool> {
            for i in 0..2 {
                for j in 0..2 {
                    let c = self.projections[i].compose(&self.inclusions[j])?;
                    let ok = if i == j { c.is_identity() } else { c.is_zero() };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
            let a = self.inclusions[0].compose(&self.projections[0])?;
            let b = self.inclusions[1].compose(&self.projections[1])?;
            Ok(a.add(&b)?.is_identity())
        };
        check().unwrap_or(false)
    }
}

/// Stalkwise direct sum.
pub fn biproduct(e: &FiniteEqSheaf, f: &FiniteEqSheaf) -> Result<Biproduct> {
    if !e.base().same_as(f.base()) {
        return Err(Error::Shape("biproduct of sheaves over different bases".into()));
    }
    let base = e.base();
    let n = base.n_points();
    let stalks = (0..n).map(|x| QModule::direct_sum(&[e.stalk_module(x), f.stalk_module(x)])).collect();
    let translations = base
        .group()
        .generator_indices()
        .iter()
        .map(|&s| (0..n).map(|x| Matrix::block_diag(&[e.translation(s, x), f.translation(s, x)])).collect())
        .collect();
    let sum = FiniteEqSheaf::new(Arc::clone(base), stalks, translations)?;
    let inc = |which: usize| -> Vec<Matrix> {
        (0..n)
            .map(|x| {
                let (a, b) = (e.dim(x), f.dim(x));
                let mut m = Matrix::zeros(a + b, if which == 0 { a } else { b });
                if which == 0 {
                    m.set_block(0, 0, &Matrix::identity(a));
                } else {
                    m.set_block(a, 0, &Matrix::identity(b));
                }
                m
            })
            .collect()
    };
    let (i0, i1) = (inc(0), inc(1));
    let inclusions =
        [SheafMap::new(e.clone(), sum.clone(), i0.clone())?, SheafMap::new(f.clone(), sum.clone(), i1.clone())?];
    let projections = [
        SheafMap::new(sum.clone(), e.clone(), i0.iter().map(Matrix::transpose).collect())?,
        SheafMap::new(sum.clone(), f.clone(), i1.iter().map(Matrix::transpose).collect())?,
    ];
    Ok(Biproduct { sum, inclusions, projections })
}

/// Direct sum of a list of sheaves over a common base, with inclusions and projections.
pub fn direct_sum(
    base: &Arc<FiniteGSpace>,
    parts: &[FiniteEqSheaf],
) -> Result<(FiniteEqSheaf, Vec<SheafMap>, Vec<SheafMap>)> {
    let n = base.n_points();
    for p in parts {
        if !p.base().same_as(base) {
            return Err(Error::Shape("summand over a different base".into()));
        }
    }
    let stalks =
        (0..n).map(|x| QModule::direct_sum(&parts.iter().map(|p| p.stalk_module(x)).collect::<Vec<_>>())).collect();
    let translations = base
        .group()
        .generator_indices()
        .iter()
        .map(|&s| {
            (0..n).map(|x| Matrix::block_diag(&parts.iter().map(|p| p.translation(s, x)).collect::<Vec<_>>())).collect()
        })
        .collect();
    let sum = FiniteEqSheaf::new(Arc::clone(base), stalks, translations)?;
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    let mut offsets = vec![0usize; n];
    for p in parts {
        let maps: Vec<Matrix> = (0..n)
            .map(|x| {
                let mut m = Matrix::zeros(sum.dim(x), p.dim(x));
                m.set_block(offsets[x], 0, &Matrix::identity(p.dim(x)));
                m
            })
            .collect();
        for (x, off) in offsets.iter_mut().enumerate() {
            *off += p.dim(x);
        }
        projections.push(SheafMap::new(sum.clone(), p.clone(), maps.iter().map(Matrix::transpose).collect())?);
        inclusions.push(SheafMap::new(p.clone(), sum.clone(), maps)?);
    }
    Ok((sum, inclusions, projections))
}

/// Kernel, image, cokernel and coimage sheaves of a map, with canonical maps.
#[derive(Clone, Debug)]
pub struct SheafFactorization {
    pub kernel: SheafMap,
    pub image: SheafMap,
    pub cokernel: SheafMap,
    pub coimage: SheafMap,
    /// The induced map coimage -> image.
    pub comparison: SheafMap,
}

impl SheafFactorization {
    pub fn kernel_sheaf(&self) -> &FiniteEqSheaf {
        self.kernel.source()
    }

    pub fn image_sheaf(&self) -> &FiniteEqSheaf {
        self.image.source()
    }

    pub fn cokernel_sheaf(&self) -> &FiniteEqSheaf {
        self.cokernel.target()
    }

    pub fn coimage_sheaf(&self) -> &FiniteEqSheaf {
        self.coimage.target()
    }

    /// Stalkwise exactness of `0 -> ker -> E -> F -> coker -> 0`, the zero composites,
    /// the factorization `f = im ∘ comparison ∘ coim` and invertibility of the comparison.
    pub fn verify(&self, f: &SheafMap) -> bool {
        let n = f.source().n_points();
        let exact = (0..n).all(|x| {
            self.kernel_sheaf().dim(x) + f.target().dim(x) == f.source().dim(x) + self.cokernel_sheaf().dim(x)
        });
        let rest = || -> Result<bool> {
            let zero1 = f.compose(&self.kernel)?.is_zero();
            let zero2 = self.cokernel.compose(f)?.is_zero();
            let rebuilt = self.image.compose(&self.comparison)?.compose(&self.coimage)?;
            Ok(zero1
                && zero2
                && rebuilt.maps == f.maps
                && self.comparison.is_iso()
                && self.kernel.is_mono()
                && self.image.is_mono()
                && self.cokernel.is_epi()
                && self.coimage.is_epi())
        };
        exact && rest().unwrap_or(false)
    }
}

pub fn sheaf_factorization(f: &SheafMap) -> Result<SheafFactorization> {
    let e = f.source();
    let t = f.target();
    let base = e.base();
    let n = base.n_points();
    let gens = base.group().generator_indices();
    let kers: Vec<Subspace> = f.maps.iter().map(Subspace::kernel_of).collect();
    let ims: Vec<Subspace> = f.maps.iter().map(Subspace::image_of).collect();
    let cokers: Vec<Quotient> = ims.iter().cloned().map(Quotient::new).collect();
    let coims: Vec<Quotient> = kers.iter().cloned().map(Quotient::new).collect();

    let restricted = |sheaf: &FiniteEqSheaf, subs: &[Subspace]| -> Result<FiniteEqSheaf> {
        let translations = gens
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|x| {
                        let image = sheaf.translation(s, x).mul(subs[x].basis());
                        subs[base.act(s, x)].coords_matrix(&image).ok_or(Error::NotInvariant)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteEqSheaf::new(Arc::clone(base), subs.iter().map(|s| QModule::new(s.dim())).collect(), translations)
    };
    let quotiented = |sheaf: &FiniteEqSheaf, qs: &[Quotient]| -> Result<FiniteEqSheaf> {
        let translations = gens
            .iter()
            .map(|&s| {
                (0..n)
                    .map(|x| qs[base.act(s, x)].projection().mul(&sheaf.translation(s, x).mul(&qs[x].section())))
                    .collect()
            })
            .collect();
        FiniteEqSheaf::new(Arc::clone(base), qs.iter().map(|q| QModule::new(q.dim())).collect(), translations)
    };

    let ker_sheaf = restricted(e, &kers)?;
    let im_sheaf = restricted(t, &ims)?;
    let coker_sheaf = quotiented(t, &cokers)?;
    let coim_sheaf = quotiented(e, &coims)?;
    let kernel = SheafMap::new(ker_sheaf, e.clone(), kers.iter().map(|k| k.basis().clone()).collect())?;
    let image = SheafMap::new(im_sheaf.clone(), t.clone(), ims.iter().map(|k| k.basis().clone()).collect())?;
    let cokernel = SheafMap::new(t.clone(), coker_sheaf, cokers.iter().map(|q| q.projection().clone()).collect())?;
    let coimage = SheafMap::new(e.clone(), coim_sheaf.clone(), coims.iter().map(|q| q.projection().clone()).collect())?;
    let comparison_maps = (0..n)
        .map(|x| {
            ims[x]
                .coords_matrix(&f.maps[x].mul(&coims[x].section()))
                .ok_or_else(|| Error::Shape("image misses the map".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let comparison = SheafMap::new(coim_sheaf, im_sheaf, comparison_maps)?;
    Ok(SheafFactorization { kernel, image, cokernel, coimage, comparison })
}

/// Restriction of `E` to an invariant subset, with the chosen points (sorted).
pub fn restrict_to(e: &FiniteEqSheaf, points: &[usize]) -> Result<(FiniteEqSheaf, Vec<usize>)> {
    let (sub, pts) = e.base().subspace(points)?;
    let sub = Arc::new(sub);
    let translations = e
        .base()
        .group()
        .generator_indices()
        .iter()
        .map(|&s| pts.iter().map(|&x| e.translation(s, x).clone()).collect::<Vec<_>>())
        .collect();
    let stalks = pts.iter().map(|&x| e.stalk_module(x).clone()).collect();
    Ok((FiniteEqSheaf::new(sub, stalks, translations)?, pts))
}

/// Extension by zero of a sheaf over the invariant subset `points` of `base`.
pub fn extend_by_zero(e: &FiniteEqSheaf, base: &Arc<FiniteGSpace>, points: &[usize]) -> Result<FiniteEqSheaf> {
    let (sub, pts) = base.subspace(points)?;
    if !sub.same_as(e.base()) {
        return Err(Error::Shape("sheaf does not live on the given subset".into()));
    }
    let n = base.n_points();
    let mut index = vec![None; n];
    for (i, &x) in pts.iter().enumerate() {
        index[x] = Some(i);
    }
    let stalks = (0..n).map(|x| index[x].map_or_else(|| QModule::new(0), |i| e.stalk_module(i).clone())).collect();
    let translations = base
        .group()
        .generator_indices()
        .iter()
        .map(|&s| {
            (0..n).map(|x| index[x].map_or_else(|| Matrix::zeros(0, 0), |i| e.translation(s, i).clone())).collect()
        })
        .collect();
    FiniteEqSheaf::new(Arc::clone(base), stalks, translations)
}

/// `E -> I⁰`, the product of skyscrapers of the stalks at orbit representatives.
#[derive(Clone, Debug)]
pub struct SkyscraperEmbedding {
    pub hull: FiniteEqSheaf,
    pub delta: SheafMap,
}

pub fn embed_into_skyscrapers(e: &FiniteEqSheaf) -> Result<SkyscraperEmbedding> {
    let d = orbit_decompose(e)?;
    let delta = d.iso.inverse().expect("orbit reconstruction is an isomorphism");
    let delta = SheafMap::new(e.clone(), d.reconstruction.clone(), delta.maps)?;
    Ok(SkyscraperEmbedding { hull: d.reconstruction, delta })
}

/// `0 -> E -> I⁰ -> I¹ -> ...`, stopping at the first zero cokernel.
#[derive(Clone, Debug)]
pub struct GodementResolution {
    pub terms: Vec<FiniteEqSheaf>,
    /// `maps[0]: E -> I⁰`, `maps[i]: I^{i-1} -> I^i`.
    pub maps: Vec<SheafMap>,
    /// Stalk dimensions of each successive cokernel; the last is all zero.
    pub cokernel_dims: Vec<Vec<usize>>,
}

pub fn godement_resolution(e: &FiniteEqSheaf, max_len: usize) -> Result<GodementResolution> {
    let mut terms = Vec::new();
    let mut maps: Vec<SheafMap> = Vec::new();
    let mut cokernel_dims = Vec::new();
    let mut current = e.clone();
    // map from the previous term onto `current`, the cokernel being resolved
    let mut onto: Option<SheafMap> = None;
    while !current.is_zero() {
        if terms.len() >= max_len {
            return Err(Error::MaxLenExceeded(max_len));
        }
        let emb = embed_into_skyscrapers(&current)?;
        let step = match &onto {
            None => emb.delta.clone(),
            Some(p) => emb.delta.compose(p)?,
        };
        let fact = sheaf_factorization(&emb.delta)?;
        cokernel_dims.push(fact.cokernel_sheaf().dims());
        terms.push(emb.hull.clone());
        maps.push(step);
        onto = Some(fact.cokernel.clone());
        current = fact.cokernel_sheaf().clone();
    }
    Ok(GodementResolution { terms, maps, cokernel_dims })
}

/// Outcome of checking an adjunction on concrete objects.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct AdjunctionReport {
    /// Dimension of the hom space out of the left adjoint.
    pub left_dim: usize,
    /// Dimension of the hom space into the right adjoint.
    pub right_dim: usize,
    pub triangles: bool,
    /// The transposition maps are mutually inverse on bases.
    pub bijection: bool,
    /// Whether the unit at the tested object is an isomorphism.
    pub unit_iso: bool,
    /// Whether the counit at the tested object is a monomorphism.
    pub counit_mono: bool,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.left_dim == self.right_dim && self.triangles && self.bijection
    }
}

/// `E -> sky(x, E_x)`.
pub fn skyscraper_unit(e: &FiniteEqSheaf, x: usize) -> Result<SheafMap> {
    let base = e.base();
    let group = base.group();
    let sky = skyscraper(base, x, &e.stalk_at(x))?;
    let t = base.transversal(x);
    let maps = (0..e.n_points())
        .map(|y| match t[y] {
            Some(ty) => e.translation(group.inverse(ty), y).clone(),
            None => Matrix::zeros(0, e.dim(y)),
        })
        .collect();
    SheafMap::new(e.clone(), sky, maps)
}

/// `sky(x, -)` on a stabilizer-equivariant map.
pub fn skyscraper_map(base: &Arc<FiniteGSpace>, x: usize, f: &EquivariantMap) -> Result<SheafMap> {
    let src = skyscraper(base, x, f.source())?;
    let tgt = skyscraper(base, x, f.target())?;
    let t = base.transversal(x);
    let maps =
        (0..base.n_points()).map(|y| if t[y].is_some() { f.matrix().clone() } else { Matrix::zeros(0, 0) }).collect();
    SheafMap::new(src, tgt, maps)
}

/// `Hom(E, sky(x, M)) ≅ Hom_{stab(x)}(E_x, M)`.
pub fn skyscraper_adjunction_check(e: &FiniteEqSheaf, x: usize, m: &GroupRep) -> Result<AdjunctionReport> {
    let base = e.base();
    let sky = skyscraper(base, x, m)?;
    let ex = e.stalk_at(x);
    let m = m.clone();
    let left = sheaf_hom_space(e, &sky)?;
    let right = hom_space(&ex, &m)?;
    let unit = skyscraper_unit(e, x)?;
    // counit (sky M)_x -> M is the identity because the representative of x's own coset is 1
    let forward = |f: &SheafMap| f.at(x).clone();
    let backward = |g: &Matrix| -> Result<SheafMap> {
        let eq = EquivariantMap::new(ex.clone(), m.clone(), g.clone())?;
        skyscraper_map(base, x, &eq)?.compose(&unit)
    };
    let mut bijection = true;
    for f in &left {
        bijection &= backward(&forward(f))?.maps == f.maps;
    }
    for g in &right {
        bijection &= forward(&backward(g)?) == *g;
    }
    let tri1 = unit.at(x).is_identity();
    let sky_unit = skyscraper_unit(&sky, x)?;
    let tri2 = sky_unit.is_identity();
    Ok(AdjunctionReport {
        left_dim: left.len(),
        right_dim: right.len(),
        triangles: tri1 && tri2,
        bijection,
        unit_iso: unit.is_iso(),
        counit_mono: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FiniteGroup, Permutation};
    use crate::linalg::q;
    use crate::rep::permutation_rep;

    fn s3_space() -> Arc<FiniteGSpace> {
        let g = Arc::new(FiniteGroup::symmetric(3, 10).unwrap());
        Arc::new(FiniteGSpace::subgroup_space(g, 100).unwrap())
    }

    fn c2_free() -> Arc<FiniteGSpace> {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        Arc::new(FiniteGSpace::new(g, 2, &[vec![1, 0]], None).unwrap())
    }

    #[test]
    fn constant_and_free_examples() {
        let base = c2_free();
        let g = base.group().clone();
        let e = FiniteEqSheaf::new(base.clone(), vec![QModule::new(1); 2], vec![vec![Matrix::identity(1); 2]]).unwrap();
        assert_eq!(e.stalk_at(0).group().order(), 1);
        let reg = GroupRep::regular(&g);
        let c = constant_sheaf(&base, &reg).unwrap();
        assert_eq!(c.dims(), vec![2, 2]);
        assert_eq!(c.translation(1, 0), reg.matrix(1));
        let point = Arc::new(FiniteGSpace::new(g.clone(), 1, &[vec![0]], None).unwrap());
        assert_eq!(constant_sheaf(&point, &reg).unwrap().stalk_at(0).matrices(), reg.matrices());
    }

    #[test]
    fn cocycle_violation_detected() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let point = Arc::new(FiniteGSpace::new(g, 1, &[vec![0]], None).unwrap());
        // the generator squares to 1 but acts by 2
        let bad = FiniteEqSheaf::new(point, vec![QModule::new(1)], vec![vec![Matrix::from_i64(1, 1, &[2])]]);
        assert!(matches!(bad, Err(Error::CocycleViolation { point: 0, .. })));
        let base = c2_free();
        let bad = FiniteEqSheaf::new(base, vec![QModule::new(1); 2], vec![vec![Matrix::zeros(1, 1); 2]]);
        assert!(matches!(bad, Err(Error::NonInvertibleTranslation { .. })));
    }

    #[test]
    fn s3_skyscraper_and_sections() {
        let base = s3_space();
        let g = base.group().clone();
        let h = g.generated(&[g.index_of(&Permutation::cycle(3, &[0, 1]).unwrap()).unwrap()]);
        let x = base.subgroup_points().unwrap().iter().position(|p| *p == h).unwrap();
        let stab = base.stabilizer(x);
        assert_eq!(stab.order(), 2);
        let m = GroupRep::trivial(&g.subgroup_group(&stab), 1);
        let sky = skyscraper(&base, x, &m).unwrap();
        assert_eq!(sky.dims(), vec![0, 1, 1, 1, 0, 0]);
        assert_eq!(sky.stalk_at(x).matrices(), m.matrices());
        let orbit = base.orbit_of(x);
        let (sec, st) = sky.sections(&orbit).unwrap();
        assert_eq!(st.order(), 6);
        assert_eq!(sec.dim(), 3);
        assert_eq!(sec.fixed_subspace(&sec.group().whole()).dim(), 1);
        let wrong = GroupRep::trivial(&g, 1);
        assert!(matches!(skyscraper(&base, x, &wrong), Err(Error::WrongStabilizer { .. })));
        let zero = skyscraper(&base, x, &GroupRep::zero(&g.subgroup_group(&stab))).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn orbit_decomposition_round_trip() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &GroupRep::regular(&g)).unwrap();
        let d = orbit_decompose(&e).unwrap();
        assert_eq!(d.parts.len(), 4);
        assert!(d.iso.is_iso());
    }

    #[test]
    fn factorization_of_skyscraper_inclusion() {
        let base = s3_space();
        let g = base.group().clone();
        let triv = GroupRep::trivial(&g, 1);
        let c = constant_sheaf(&base, &triv).unwrap();
        let x = 1;
        let sky = skyscraper(&base, x, &triv.restrict(&base.stabilizer(x))).unwrap();
        // the unit of the skyscraper adjunction restricted to the orbit is a surjection c -> sky
        let u = skyscraper_unit(&c, x).unwrap();
        assert_eq!(u.target(), &sky);
        let f = sheaf_factorization(&u).unwrap();
        assert!(f.verify(&u));
        assert_eq!(f.kernel_sheaf().dims(), vec![1, 0, 0, 0, 1, 1]);
        assert!(f.cokernel_sheaf().is_zero());
        let z = SheafMap::zero(&c, &c).unwrap();
        let fz = sheaf_factorization(&z).unwrap();
        assert_eq!(fz.kernel_sheaf().dims(), c.dims());
        assert_eq!(fz.cokernel_sheaf().dims(), c.dims());
        let fi = sheaf_factorization(&SheafMap::identity(&c)).unwrap();
        assert!(fi.kernel_sheaf().is_zero() && fi.cokernel_sheaf().is_zero());
    }

    #[test]
    fn hom_abelian_ops() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &permutation_rep(&g, &g.generated(&[1]))).unwrap();
        let homs = sheaf_hom_space(&e, &e).unwrap();
        let f = &homs[homs.len() - 1];
        let z = SheafMap::zero(&e, &e).unwrap();
        assert_eq!(f.add(&z).unwrap(), *f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
        assert_eq!(f.add(f).unwrap(), f.scale(&q(2)));
    }

    #[test]
    fn biproduct_equations() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &GroupRep::regular(&g)).unwrap();
        let z = FiniteEqSheaf::zero(&base);
        let b = biproduct(&e, &z).unwrap();
        assert!(b.equations_hold());
        assert_eq!(b.sum.dims(), e.dims());
        let b = biproduct(&e, &e).unwrap();
        assert!(b.equations_hold());
        assert_eq!(b.sum.dims(), vec![12; 6]);
    }

    #[test]
    fn extension_by_zero() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &GroupRep::trivial(&g, 2)).unwrap();
        let orbit = base.orbit_of(1);
        let (r, pts) = restrict_to(&e, &orbit).unwrap();
        assert_eq!(pts, orbit);
        let ext = extend_by_zero(&r, &base, &orbit).unwrap();
        assert_eq!(ext.dims(), vec![0, 2, 2, 2, 0, 0]);
        let (again, _) = restrict_to(&ext, &orbit).unwrap();
        assert_eq!(again, r);
        let all: Vec<usize> = (0..6).collect();
        let (whole, _) = restrict_to(&e, &all).unwrap();
        assert_eq!(whole.dims(), e.dims());
        assert!(matches!(restrict_to(&e, &[1]), Err(Error::NotInvariant)));
    }

    #[test]
    fn godement_terminates_immediately() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &GroupRep::regular(&g)).unwrap();
        let r = godement_resolution(&e, 4).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert!(r.maps[0].is_mono());
        assert!(r.cokernel_dims[0].iter().all(|&d| d == 0));
        assert!(godement_resolution(&FiniteEqSheaf::zero(&base), 4).unwrap().terms.is_empty());
    }

    #[test]
    fn skyscraper_adjunction() {
        let base = s3_space();
        let g = base.group().clone();
        let e = constant_sheaf(&base, &GroupRep::regular(&g)).unwrap();
        for x in 0..base.n_points() {
            let stab = base.stabilizer(x);
            let m = GroupRep::regular(&g.subgroup_group(&stab));
            let r = skyscraper_adjunction_check(&e, x, &m).unwrap();
            assert!(r.holds(), "{r:?}");
            let zero = GroupRep::zero(&g.subgroup_group(&stab));
            let r = skyscraper_adjunction_check(&e, x, &zero).unwrap();
            assert_eq!((r.left_dim, r.right_dim), (0, 0));
        }
    }
}
