//! Sheaves over towers: change of group, diagram sheaves and their colimits,
//! equivariant presheaves on the tower basis, sheafification and disc-products.
//!
//! Level `k` of a presheaf is stored as a `G_K`-sheaf over `X_k` (the group
//! acting through `G_K -> G_k`), whose stalk at `x` is the value on the basic
//! open `p_k^-1{x}`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{BlockSystem, Matrix, Subspace};
use crate::rep::{fixed_subspace_of, permutation_rep, transfer, GroupRep, QModule};
use crate::sheaf::{sheaf_hom_space, AdjunctionReport, FiniteEqSheaf, SheafMap};
use crate::tower::{Projection, SpaceTower};

fn check_base(e: &FiniteEqSheaf, space: &crate::tower::FiniteGSpace, what: &str) -> Result<()> {
    if e.base().same_as(space) {
        Ok(())
    } else {
        Err(Error::Shape(format!("sheaf does not live on the {what} space")))
    }
}

/// Stalk at `x'` is the stalk at its image; translations act through the group map.
pub fn pullback_cg(d: &FiniteEqSheaf, proj: &Projection) -> Result<FiniteEqSheaf> {
    check_base(d, proj.coarse(), "coarse")?;
    let fine = proj.fine();
    let n = fine.n_points();
    let stalks = (0..n).map(|x| d.stalk_module(proj.map_point(x)).clone()).collect();
    let translations = fine
        .group()
        .generator_indices()
        .iter()
        .map(|&s| {
            let h = proj.group_map().apply(s);
            (0..n).map(|x| d.translation(h, proj.map_point(x)).clone()).collect()
        })
        .collect();
    FiniteEqSheaf::new(Arc::clone(fine), stalks, translations)
}

pub fn pullback_map(f: &SheafMap, proj: &Projection) -> Result<SheafMap> {
    let src = pullback_cg(f.source(), proj)?;
    let tgt = pullback_cg(f.target(), proj)?;
    let maps = (0..proj.fine().n_points()).map(|x| f.at(proj.map_point(x)).clone()).collect();
    SheafMap::new(src, tgt, maps)
}

/// Kernel-fixed vectors of the sum over each fiber.
struct PushData {
    /// Offset of each fiber member inside the fiber sum, indexed by fine point.
    offset: Vec<usize>,
    totals: Vec<usize>,
    fixed: Vec<Subspace>,
}

impl PushData {
    fn new(e: &FiniteEqSheaf, proj: &Projection) -> PushData {
        let n_fine = proj.fine().n_points();
        let n_coarse = proj.coarse().n_points();
        let mut offset = vec![0; n_fine];
        let mut totals = vec![0; n_coarse];
        for (y, total) in totals.iter_mut().enumerate() {
            for &x in proj.fiber(y) {
                offset[x] = *total;
                *total += e.dim(x);
            }
        }
        let mut data = PushData { offset, totals, fixed: Vec::new() };
        data.fixed = (0..n_coarse)
            .map(|y| {
                let mats: Vec<Matrix> =
                    proj.kernel_generators().iter().map(|&g| data.fiber_action(e, proj, g, y)).collect();
                fixed_subspace_of(data.totals[y], mats.iter())
            })
            .collect();
        data
    }

    /// Action of the fine element `g` from the fiber sum over `y` to the one over `g·y`.
    fn fiber_action(&self, e: &FiniteEqSheaf, proj: &Projection, g: usize, y: usize) -> Matrix {
        let fine = proj.fine();
        let gy = proj.coarse().act(proj.group_map().apply(g), y);
        let mut m = Matrix::zeros(self.totals[gy], self.totals[y]);
        for &x in proj.fiber(y) {
            m.set_block(self.offset[fine.act(g, x)], self.offset[x], e.translation(g, x));
        }
        m
    }
}

/// Stalk at `y` is `(⊕_{x ↦ y} E_x)^{ker}`; translations use least lifts.
pub fn pushforward_cg(e: &FiniteEqSheaf, proj: &Projection) -> Result<FiniteEqSheaf> {
    let data = PushData::new(e, proj);
    pushforward_with(e, proj, &data)
}

fn pushforward_with(e: &FiniteEqSheaf, proj: &Projection, data: &PushData) -> Result<FiniteEqSheaf> {
    check_base(e, proj.fine(), "fine")?;
    let coarse = proj.coarse();
    let n = coarse.n_points();
    let stalks = data.fixed.iter().map(|f| QModule::new(f.dim())).collect();
    let translations = coarse
        .group()
        .generator_indices()
        .iter()
        .map(|&h| {
            let g = proj.lift(h);
            (0..n)
                .map(|y| {
                    let hy = coarse.act(h, y);
                    let full = data.fiber_action(e, proj, g, y).mul(data.fixed[y].basis());
                    data.fixed[hy]
                        .coords_matrix(&full)
                        .ok_or_else(|| Error::Shape("translation leaves the kernel-fixed part".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteEqSheaf::new(Arc::clone(coarse), stalks, translations)
}

pub fn pushforward_map(f: &SheafMap, proj: &Projection) -> Result<SheafMap> {
    let sd = PushData::new(f.source(), proj);
    let td = PushData::new(f.target(), proj);
    let src = pushforward_with(f.source(), proj, &sd)?;
    let tgt = pushforward_with(f.target(), proj, &td)?;
    let maps = (0..proj.coarse().n_points())
        .map(|y| {
            let mut full = Matrix::zeros(td.totals[y], sd.totals[y]);
            for &x in proj.fiber(y) {
                full.set_block(td.offset[x], sd.offset[x], f.at(x));
            }
            td.fixed[y]
                .coords_matrix(&full.mul(sd.fixed[y].basis()))
                .ok_or_else(|| Error::Shape("pushed map leaves the fixed part".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    SheafMap::new(src, tgt, maps)
}

/// `D -> p_* p^* D`, the diagonal into each fiber.
pub fn unit_cg(d: &FiniteEqSheaf, proj: &Projection) -> Result<SheafMap> {
    let pulled = pullback_cg(d, proj)?;
    let data = PushData::new(&pulled, proj);
    let pushed = pushforward_with(&pulled, proj, &data)?;
    let maps = (0..proj.coarse().n_points())
        .map(|y| {
            let dim = d.dim(y);
            let mut diag = Matrix::zeros(data.totals[y], dim);
            for &x in proj.fiber(y) {
                diag.set_block(data.offset[x], 0, &Matrix::identity(dim));
            }
            data.fixed[y].coords_matrix(&diag).ok_or_else(|| Error::Shape("diagonal is not kernel-fixed".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    SheafMap::new(d.clone(), pushed, maps)
}

/// `p^* p_* E -> E`, projection to the component at each point.
pub fn counit_cg(e: &FiniteEqSheaf, proj: &Projection) -> Result<SheafMap> {
    let data = PushData::new(e, proj);
    let pushed = pushforward_with(e, proj, &data)?;
    let pulled = pullback_cg(&pushed, proj)?;
    let maps = (0..proj.fine().n_points())
        .map(|x| {
            let basis = data.fixed[proj.map_point(x)].basis();
            basis.block(data.offset[x], 0, e.dim(x), basis.cols())
        })
        .collect();
    SheafMap::new(pulled, e.clone(), maps)
}

/// `Hom(p^* D, E) ≅ Hom(D, p_* E)`.
pub fn adjunction_check_cg(d: &FiniteEqSheaf, e: &FiniteEqSheaf, proj: &Projection) -> Result<AdjunctionReport> {
    let pd = pullback_cg(d, proj)?;
    let pe = pushforward_cg(e, proj)?;
    let left = sheaf_hom_space(&pd, e)?;
    let right = sheaf_hom_space(d, &pe)?;
    let unit_d = unit_cg(d, proj)?;
    let counit_e = counit_cg(e, proj)?;
    let forward = |f: &SheafMap| -> Result<SheafMap> { pushforward_map(f, proj)?.compose(&unit_d) };
    let backward = |g: &SheafMap| -> Result<SheafMap> { counit_e.compose(&pullback_map(g, proj)?) };
    let mut bijection = true;
    for f in &left {
        bijection &= backward(&forward(f)?)?.maps() == f.maps();
    }
    for g in &right {
        bijection &= forward(&backward(g)?)?.maps() == g.maps();
    }
    let tri1 = counit_cg(&pd, proj)?.compose(&pullback_map(&unit_d, proj)?)?.is_identity();
    let tri2 = pushforward_map(&counit_e, proj)?.compose(&unit_cg(&pe, proj)?)?.is_identity();
    Ok(AdjunctionReport {
        left_dim: left.len(),
        right_dim: right.len(),
        triangles: tri1 && tri2,
        bijection,
        unit_iso: unit_d.is_iso(),
        counit_mono: counit_e.is_mono(),
    })
}

/// A sheaf `D_k` over each level with maps `α_k: step_k^* D_k -> D_{k+1}`.
#[derive(Clone, Debug)]
pub struct DiagramSheaf {
    tower: Arc<SpaceTower>,
    levels: Vec<FiniteEqSheaf>,
    structure: Vec<SheafMap>,
}

impl DiagramSheaf {
    /// Validates raw structure matrices, `structure[k][x']` for `x'` in level `k + 1`.
    pub fn new(
        tower: Arc<SpaceTower>,
        levels: Vec<FiniteEqSheaf>,
        structure: Vec<Vec<Matrix>>,
    ) -> Result<DiagramSheaf> {
        if levels.len() != tower.depth() + 1 || structure.len() != tower.depth() {
            return Err(Error::Shape("diagram shape does not match the tower".into()));
        }
        for (k, d) in levels.iter().enumerate() {
            check_base(d, tower.level(k), "level")?;
        }
        let mut maps = Vec::with_capacity(structure.len());
        for (k, mats) in structure.into_iter().enumerate() {
            let src = pullback_cg(&levels[k], tower.step(k))?;
            let map = SheafMap::new(src, levels[k + 1].clone(), mats).map_err(|e| match e {
                Error::NotEquivariant { element, point } => Error::InvalidStructureMap {
                    level: k,
                    point,
                    reason: format!("does not commute with generator {element}"),
                },
                Error::Shape(reason) => Error::InvalidStructureMap { level: k, point: 0, reason },
                other => other,
            })?;
            maps.push(map);
        }
        Ok(DiagramSheaf { tower, levels, structure: maps })
    }

    pub fn tower(&self) -> &Arc<SpaceTower> {
        &self.tower
    }

    pub fn levels(&self) -> &[FiniteEqSheaf] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &FiniteEqSheaf {
        &self.levels[k]
    }

    pub fn structure(&self, k: usize) -> &SheafMap {
        &self.structure[k]
    }

    pub fn structure_maps(&self) -> &[SheafMap] {
        &self.structure
    }
}

/// Every level constant at the same trivial-action module, with identity structure maps.
pub fn constant_diagram(tower: &Arc<SpaceTower>, dim: usize) -> Result<DiagramSheaf> {
    let levels = (0..=tower.depth())
        .map(|k| crate::sheaf::constant_sheaf(tower.level(k), &GroupRep::trivial(tower.groups().level(k), dim)))
        .collect::<Result<Vec<_>>>()?;
    let structure = (0..tower.depth()).map(|k| vec![Matrix::identity(dim); tower.level(k + 1).n_points()]).collect();
    DiagramSheaf::new(Arc::clone(tower), levels, structure)
}

/// `ᾱ_k: D_k -> step_* D_{k+1}` with a flag for stalkwise invertibility.
pub fn adjoint_structure_maps(d: &DiagramSheaf) -> Result<Vec<(SheafMap, bool)>> {
    (0..d.tower.depth())
        .map(|k| {
            let proj = d.tower.step(k);
            let adj = pushforward_map(&d.structure[k], proj)?.compose(&unit_cg(&d.levels[k], proj)?)?;
            let iso = adj.is_iso();
            Ok((adj, iso))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreadReport {
    /// Point index at each level.
    pub thread: Vec<usize>,
    /// Stalk dimension at each level along the thread.
    pub dims: Vec<usize>,
    /// Least level from which every transition is an isomorphism; `None` if the last one is not.
    pub stabilized_from: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Colimit {
    /// The truncated colimit, a sheaf over the top level.
    pub sheaf: FiniteEqSheaf,
    /// `cocone[k]: (p_k)^* D_k -> colimit`.
    pub cocone: Vec<SheafMap>,
    pub report: Vec<ThreadReport>,
}

/// The sequential colimit evaluated at the top level, with the cocone and a stabilization report.
pub fn colim_sheaf(d: &DiagramSheaf) -> Result<Colimit> {
    let tower = &d.tower;
    let depth = tower.depth();
    let top = d.levels[depth].clone();
    let threads = tower.point_threads();
    let mut cocone = Vec::with_capacity(depth + 1);
    for k in 0..=depth {
        let maps = threads
            .iter()
            .map(|t| {
                let mut m = Matrix::identity(d.levels[k].dim(t.coords[k]));
                for j in k..depth {
                    m = d.structure[j].at(t.coords[j + 1]).mul(&m);
                }
                m
            })
            .collect();
        cocone.push(SheafMap::new(pullback_cg(&d.levels[k], tower.projection(k))?, top.clone(), maps)?);
    }
    let report = threads
        .iter()
        .map(|t| {
            let dims = (0..=depth).map(|k| d.levels[k].dim(t.coords[k])).collect();
            let mut stabilized_from = Some(depth);
            for j in (0..depth).rev() {
                let m = d.structure[j].at(t.coords[j + 1]);
                if m.is_square() && m.is_invertible() {
                    if stabilized_from == Some(j + 1) {
                        stabilized_from = Some(j);
                    }
                } else if j + 1 == depth {
                    stabilized_from = None;
                    break;
                } else {
                    break;
                }
            }
            ThreadReport { thread: t.coords.clone(), dims, stabilized_from }
        })
        .collect();
    Ok(Colimit { sheaf: top, cocone, report })
}

/// Maps at `x'` in `inner.coarse()` from the fiber sum over `step[x']` to the fiber sum over `x'`,
/// selecting the sub-fiber and reading coordinates in the respective fixed parts.
fn fiber_restrictions(
    e: &FiniteEqSheaf,
    outer_data: &PushData,
    inner: &Projection,
    inner_data: &PushData,
    step: &[usize],
) -> Result<Vec<Matrix>> {
    (0..inner.coarse().n_points())
        .map(|xp| {
            let y = step[xp];
            let basis = outer_data.fixed[y].basis();
            let mut selected = Matrix::zeros(inner_data.totals[xp], basis.cols());
            for &x in inner.fiber(xp) {
                let rows = basis.block(outer_data.offset[x], 0, e.dim(x), basis.cols());
                selected.set_block(inner_data.offset[x], 0, &rows);
            }
            inner_data.fixed[xp]
                .coords_matrix(&selected)
                .ok_or_else(|| Error::Shape("restriction leaves the fixed part".into()))
        })
        .collect()
}

/// `p̄_• E`: level `k` is `(p̄_k)_* E`, structure maps restrict to sub-fibers.
pub fn pushforward_diagram(e: &FiniteEqSheaf, tower: &Arc<SpaceTower>) -> Result<DiagramSheaf> {
    check_base(e, tower.top(), "top")?;
    let depth = tower.depth();
    let data: Vec<PushData> = (0..=depth).map(|k| PushData::new(e, tower.projection(k))).collect();
    let levels = (0..=depth).map(|k| pushforward_with(e, tower.projection(k), &data[k])).collect::<Result<Vec<_>>>()?;
    let structure = (0..depth)
        .map(|k| fiber_restrictions(e, &data[k], tower.projection(k + 1), &data[k + 1], tower.step(k).point_map()))
        .collect::<Result<Vec<_>>>()?;
    DiagramSheaf::new(Arc::clone(tower), levels, structure)
}

#[derive(Clone, Debug, Serialize)]
pub struct CounitReport {
    /// The canonical map `colim p̄_• E -> E` is a stalkwise isomorphism.
    pub counit_iso: bool,
    /// Each cocone leg composed with the counit equals the level's adjunction counit.
    pub cocone_consistent: bool,
    /// Every adjoint structure map of `p̄_• E` is an isomorphism.
    pub adjoint_maps_iso: bool,
    pub level_dims: Vec<Vec<usize>>,
}

impl CounitReport {
    pub fn holds(&self) -> bool {
        self.counit_iso && self.cocone_consistent && self.adjoint_maps_iso
    }
}

pub fn counit_check(e: &FiniteEqSheaf, tower: &Arc<SpaceTower>) -> Result<CounitReport> {
    let diagram = pushforward_diagram(e, tower)?;
    let colim = colim_sheaf(&diagram)?;
    let depth = tower.depth();
    let counit = counit_cg(e, tower.projection(depth))?;
    // the top level pushes forward along the identity, so the colimit is that pullback's source
    let counit = SheafMap::new(colim.sheaf.clone(), e.clone(), counit.maps().to_vec())?;
    let mut cocone_consistent = true;
    for k in 0..=depth {
        let leg = counit.compose(&colim.cocone[k])?;
        let expected = counit_cg(e, tower.projection(k))?;
        cocone_consistent &= leg.maps() == expected.maps();
    }
    let adjoint_maps_iso = adjoint_structure_maps(&diagram)?.iter().all(|(_, iso)| *iso);
    Ok(CounitReport {
        counit_iso: counit.is_iso(),
        cocone_consistent,
        adjoint_maps_iso,
        level_dims: diagram.levels.iter().map(FiniteEqSheaf::dims).collect(),
    })
}

/// Comparison maps `D_k -> (p̄_k)_* colim D`; isomorphisms exactly when `D` lies in the image of `p̄_•`.
pub fn reconstruction_maps(d: &DiagramSheaf) -> Result<Vec<SheafMap>> {
    let colim = colim_sheaf(d)?;
    (0..=d.tower.depth())
        .map(|k| {
            let proj = d.tower.projection(k);
            pushforward_map(&colim.cocone[k], proj)?.compose(&unit_cg(&d.levels[k], proj)?)
        })
        .collect()
}

/// A presheaf on the tower basis: level `k` is a `G_K`-sheaf over `X_k` and
/// `restrictions[k]: inflated_step_k^* F_k -> F_{k+1}`.
#[derive(Clone, Debug)]
pub struct EqPresheaf {
    tower: Arc<SpaceTower>,
    levels: Vec<FiniteEqSheaf>,
    restrictions: Vec<SheafMap>,
}

impl EqPresheaf {
    pub fn new(
        tower: Arc<SpaceTower>,
        levels: Vec<FiniteEqSheaf>,
        restrictions: Vec<Vec<Matrix>>,
    ) -> Result<EqPresheaf> {
        if levels.len() != tower.depth() + 1 || restrictions.len() != tower.depth() {
            return Err(Error::Shape("presheaf shape does not match the tower".into()));
        }
        for (k, f) in levels.iter().enumerate() {
            check_base(f, tower.inflated(k), "inflated level")?;
        }
        let mut maps = Vec::with_capacity(restrictions.len());
        for (k, mats) in restrictions.into_iter().enumerate() {
            let src = pullback_cg(&levels[k], tower.inflated_step(k))?;
            let map = SheafMap::new(src, levels[k + 1].clone(), mats).map_err(|e| match e {
                Error::NotEquivariant { element, point } => Error::InvalidStructureMap {
                    level: k,
                    point,
                    reason: format!("restriction does not commute with generator {element}"),
                },
                Error::Shape(reason) => Error::InvalidStructureMap { level: k, point: 0, reason },
                other => other,
            })?;
            maps.push(map);
        }
        Ok(EqPresheaf { tower, levels, restrictions: maps })
    }

    /// The presheaf of sections of a sheaf over the top level.
    pub fn of_sheaf(e: &FiniteEqSheaf, tower: &Arc<SpaceTower>) -> Result<EqPresheaf> {
        check_base(e, tower.top(), "top")?;
        let depth = tower.depth();
        let data: Vec<PushData> = (0..=depth).map(|k| PushData::new(e, tower.expansion(k))).collect();
        let levels =
            (0..=depth).map(|k| pushforward_with(e, tower.expansion(k), &data[k])).collect::<Result<Vec<_>>>()?;
        let restrictions = (0..depth)
            .map(|k| fiber_restrictions(e, &data[k], tower.expansion(k + 1), &data[k + 1], tower.step(k).point_map()))
            .collect::<Result<Vec<_>>>()?;
        EqPresheaf::new(Arc::clone(tower), levels, restrictions)
    }

    /// Every level constant at a rep of the top group, identity restrictions.
    pub fn constant(tower: &Arc<SpaceTower>, m: &GroupRep) -> Result<EqPresheaf> {
        let levels = (0..=tower.depth())
            .map(|k| crate::sheaf::constant_sheaf(tower.inflated(k), m))
            .collect::<Result<Vec<_>>>()?;
        let restrictions =
            (0..tower.depth()).map(|k| vec![Matrix::identity(m.dim()); tower.level(k + 1).n_points()]).collect();
        EqPresheaf::new(Arc::clone(tower), levels, restrictions)
    }

    pub fn tower(&self) -> &Arc<SpaceTower> {
        &self.tower
    }

    pub fn levels(&self) -> &[FiniteEqSheaf] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &FiniteEqSheaf {
        &self.levels[k]
    }

    pub fn restriction(&self, k: usize) -> &SheafMap {
        &self.restrictions[k]
    }

    pub fn restrictions(&self) -> &[SheafMap] {
        &self.restrictions
    }

    /// Stalk dimensions per level.
    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.levels.iter().map(FiniteEqSheaf::dims).collect()
    }

    /// Whether `N_k` acts trivially on every value at level `k`.
    pub fn is_level_discrete(&self) -> bool {
        let groups = self.tower.groups();
        (0..=self.tower.depth()).all(|k| {
            let gens = groups.top().subgroup_generators(groups.kernel(k));
            let f = &self.levels[k];
            (0..f.n_points()).all(|x| gens.iter().all(|&n| f.translation(n, x).is_identity()))
        })
    }

    /// Composite restriction from level `k` at `thread[k]` to the top at `thread[K]`.
    pub fn restriction_to_top(&self, k: usize, thread: &[usize]) -> Matrix {
        let mut m = Matrix::identity(self.levels[k].dim(thread[k]));
        for j in k..self.tower.depth() {
            m = self.restrictions[j].at(thread[j + 1]).mul(&m);
        }
        m
    }
}

/// Levelwise direct sum of presheaves on a common tower.
pub fn presheaf_sum(parts: &[EqPresheaf]) -> Result<EqPresheaf> {
    let first = parts.first().ok_or_else(|| Error::Shape("empty family".into()))?;
    let tower = Arc::clone(&first.tower);
    if parts.iter().any(|f| !Arc::ptr_eq(&f.tower, &tower)) {
        return Err(Error::Shape("summands live on different towers".into()));
    }
    let levels = (0..=tower.depth())
        .map(|k| {
            let ls: Vec<FiniteEqSheaf> = parts.iter().map(|f| f.levels[k].clone()).collect();
            crate::sheaf::direct_sum(tower.inflated(k), &ls).map(|(sum, _, _)| sum)
        })
        .collect::<Result<Vec<_>>>()?;
    let restrictions = (0..tower.depth())
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| Matrix::block_diag(&parts.iter().map(|f| f.restrictions[k].at(xp)).collect::<Vec<_>>()))
                .collect()
        })
        .collect();
    EqPresheaf::new(tower, levels, restrictions)
}

/// A map of presheaves: one sheaf map per level commuting with restrictions.
#[derive(Clone, Debug)]
pub struct PresheafMap {
    pub source: EqPresheaf,
    pub target: EqPresheaf,
    pub levels: Vec<SheafMap>,
}

impl PresheafMap {
    pub fn new(source: EqPresheaf, target: EqPresheaf, levels: Vec<SheafMap>) -> Result<PresheafMap> {
        let tower = Arc::clone(&source.tower);
        if levels.len() != tower.depth() + 1 {
            return Err(Error::Shape("one sheaf map per level required".into()));
        }
        for k in 0..tower.depth() {
            for xp in 0..tower.level(k + 1).n_points() {
                let x = tower.step(k).map_point(xp);
                let lhs = target.restrictions[k].at(xp).mul(levels[k].at(x));
                let rhs = levels[k + 1].at(xp).mul(source.restrictions[k].at(xp));
                if lhs != rhs {
                    return Err(Error::InvalidStructureMap {
                        level: k,
                        point: xp,
                        reason: "does not commute with restriction".into(),
                    });
                }
            }
        }
        Ok(PresheafMap { source, target, levels })
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PresheafMap) -> Result<PresheafMap> {
        let levels = self.levels.iter().zip(&inner.levels).map(|(a, b)| a.compose(b)).collect::<Result<Vec<_>>>()?;
        Ok(PresheafMap { source: inner.source.clone(), target: self.target.clone(), levels })
    }

    pub fn same_matrices(&self, other: &PresheafMap) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| a.maps() == b.maps())
    }
}

/// A basis of presheaf maps `F -> G`.
pub fn presheaf_hom_space(f: &EqPresheaf, g: &EqPresheaf) -> Result<Vec<PresheafMap>> {
    let tower = &f.tower;
    let depth = tower.depth();
    let mut sys = BlockSystem::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for k in 0..=depth {
        blocks
            .push((0..f.levels[k].n_points()).map(|x| sys.add_block(g.levels[k].dim(x), f.levels[k].dim(x))).collect());
    }
    let top = tower.groups().top();
    for (k, block) in blocks.iter().enumerate() {
        let space = tower.inflated(k);
        for &s in top.generator_indices() {
            for x in 0..space.n_points() {
                sys.add_commutation(
                    g.levels[k].translation(s, x).clone(),
                    block[x],
                    block[space.act(s, x)],
                    f.levels[k].translation(s, x).clone(),
                );
            }
        }
    }
    for k in 0..depth {
        for xp in 0..tower.level(k + 1).n_points() {
            let x = tower.step(k).map_point(xp);
            sys.add_commutation(
                g.restrictions[k].at(xp).clone(),
                blocks[k][x],
                blocks[k + 1][xp],
                f.restrictions[k].at(xp).clone(),
            );
        }
    }
    sys.solve()
        .into_iter()
        .map(|sol| {
            let levels = (0..=depth)
                .map(|k| {
                    let maps = blocks[k].iter().map(|&b| sol[b].clone()).collect();
                    SheafMap::new(f.levels[k].clone(), g.levels[k].clone(), maps)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PresheafMap { source: f.clone(), target: g.clone(), levels })
        })
        .collect()
}

/// `i(h)` for a map of sheaves over the top level.
pub fn presheaf_of_map(h: &SheafMap, tower: &Arc<SpaceTower>) -> Result<PresheafMap> {
    let source = EqPresheaf::of_sheaf(h.source(), tower)?;
    let target = EqPresheaf::of_sheaf(h.target(), tower)?;
    let levels = (0..=tower.depth())
        .map(|k| {
            let m = pushforward_map(h, tower.expansion(k))?;
            SheafMap::new(source.levels[k].clone(), target.levels[k].clone(), m.maps().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    PresheafMap::new(source, target, levels)
}

#[derive(Clone, Debug)]
pub struct Sheafification {
    /// `ℓF` over the top level.
    pub sheaf: FiniteEqSheaf,
    /// Level `k` holds the `N_k`-fixed values, a `G_k`-sheaf over `X_k`.
    pub diagram: DiagramSheaf,
    /// `F -> i(ℓF)`.
    pub unit: PresheafMap,
}

pub fn sheafify(f: &EqPresheaf) -> Result<Sheafification> {
    let tower = &f.tower;
    let depth = tower.depth();
    let sheaf = f.levels[depth].clone();

    let data: Vec<PushData> = (0..=depth).map(|k| PushData::new(&f.levels[k], tower.deflation(k))).collect();
    let levels = (0..=depth)
        .map(|k| pushforward_with(&f.levels[k], tower.deflation(k), &data[k]))
        .collect::<Result<Vec<_>>>()?;
    let structure = (0..depth)
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| {
                    let x = tower.step(k).map_point(xp);
                    let image = f.restrictions[k].at(xp).mul(data[k].fixed[x].basis());
                    data[k + 1].fixed[xp]
                        .coords_matrix(&image)
                        .ok_or_else(|| Error::Shape("restriction leaves the fixed part".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let diagram = DiagramSheaf::new(Arc::clone(tower), levels, structure)?;

    let target = EqPresheaf::of_sheaf(&sheaf, tower)?;
    let threads = tower.point_threads();
    let unit_levels = (0..=depth)
        .map(|k| {
            let proj = tower.expansion(k);
            let maps = (0..tower.level(k).n_points())
                .map(|x| {
                    let parts: Vec<Matrix> =
                        proj.fiber(x).iter().map(|&top| f.restriction_to_top(k, &threads[top].coords)).collect();
                    Matrix::vstack(f.levels[k].dim(x), &parts.iter().collect::<Vec<_>>())
                })
                .collect();
            SheafMap::new(f.levels[k].clone(), target.levels[k].clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    let unit = PresheafMap::new(f.clone(), target, unit_levels)?;
    Ok(Sheafification { sheaf, diagram, unit })
}

#[derive(Clone, Debug, Serialize)]
pub struct SheafifyReport {
    /// `ℓ(iℓF) -> ℓF` is an isomorphism.
    pub idempotent: bool,
    /// `dim Hom(F, iE) = dim Hom(ℓF, E)`.
    pub hom_dims: (usize, usize),
    /// Every basis map `F -> iE` equals `i(h) ∘ unit` for the induced `h`.
    pub factorization: bool,
}

impl SheafifyReport {
    pub fn holds(&self) -> bool {
        self.idempotent && self.hom_dims.0 == self.hom_dims.1 && self.factorization
    }
}

/// Idempotence of `ℓ` and the factorization of presheaf maps into `E` through the unit.
pub fn sheafify_check(f: &EqPresheaf, e: &FiniteEqSheaf) -> Result<SheafifyReport> {
    let tower = &f.tower;
    let depth = tower.depth();
    let l = sheafify(f)?;
    let again = sheafify(&EqPresheaf::of_sheaf(&l.sheaf, tower)?)?;
    let idempotent = SheafMap::new(
        again.sheaf.clone(),
        l.sheaf.clone(),
        again.sheaf.dims().into_iter().map(Matrix::identity).collect(),
    )
    .map(|m| m.is_iso())
    .unwrap_or(false);
    let ie = EqPresheaf::of_sheaf(e, tower)?;
    let pre = presheaf_hom_space(f, &ie)?;
    let sheaf = sheaf_hom_space(&l.sheaf, e)?;
    let mut factorization = true;
    for g in &pre {
        let h = SheafMap::new(l.sheaf.clone(), e.clone(), g.levels[depth].maps().to_vec())?;
        let through = presheaf_of_map(&h, tower)?;
        let through = PresheafMap { source: l.unit.target.clone(), target: ie.clone(), levels: through.levels };
        factorization &= through.compose(&l.unit)?.same_matrices(g);
    }
    Ok(SheafifyReport { idempotent, hom_dims: (pre.len(), sheaf.len()), factorization })
}

#[derive(Clone, Debug)]
pub struct DiscProduct {
    pub product: EqPresheaf,
    pub projections: Vec<PresheafMap>,
    /// Level-`k` value at each point as a subspace of the plain product.
    pub fixed: Vec<Vec<Subspace>>,
}

/// The presheaf whose value at level `k` is the `N_k`-fixed part of the product of values.
pub fn product_disc(family: &[EqPresheaf]) -> Result<DiscProduct> {
    let first = family.first().ok_or_else(|| Error::Shape("empty family".into()))?;
    let tower = Arc::clone(&first.tower);
    if family.iter().any(|f| !Arc::ptr_eq(&f.tower, &tower)) {
        return Err(Error::Shape("family members live on different towers".into()));
    }
    let depth = tower.depth();
    let top = tower.groups().top();
    let mut sums = Vec::new();
    let mut fixed = Vec::new();
    let mut levels = Vec::new();
    for k in 0..=depth {
        let parts: Vec<FiniteEqSheaf> = family.iter().map(|f| f.levels[k].clone()).collect();
        let (sum, _, _) = crate::sheaf::direct_sum(tower.inflated(k), &parts)?;
        let kernel_gens = top.subgroup_generators(tower.groups().kernel(k));
        let subs: Vec<Subspace> = (0..sum.n_points())
            .map(|x| fixed_subspace_of(sum.dim(x), kernel_gens.iter().map(|&n| sum.translation(n, x))))
            .collect();
        let space = tower.inflated(k);
        let translations = top
            .generator_indices()
            .iter()
            .map(|&s| {
                (0..sum.n_points())
                    .map(|x| {
                        subs[space.act(s, x)]
                            .coords_matrix(&sum.translation(s, x).mul(subs[x].basis()))
                            .ok_or(Error::NotInvariant)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let stalks = subs.iter().map(|s| QModule::new(s.dim())).collect();
        levels.push(FiniteEqSheaf::new(Arc::clone(space), stalks, translations)?);
        sums.push(sum);
        fixed.push(subs);
    }
    let restrictions = (0..depth)
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| {
                    let blocks: Vec<&Matrix> = family.iter().map(|f| f.restrictions[k].at(xp)).collect();
                    let full = Matrix::block_diag(&blocks);
                    let x = tower.step(k).map_point(xp);
                    fixed[k + 1][xp]
                        .coords_matrix(&full.mul(fixed[k][x].basis()))
                        .ok_or_else(|| Error::Shape("restriction leaves the fixed part".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let product = EqPresheaf::new(Arc::clone(&tower), levels, restrictions)?;
    let mut projections = Vec::new();
    for (i, member) in family.iter().enumerate() {
        let levels = (0..=depth)
            .map(|k| {
                let maps = (0..tower.level(k).n_points())
                    .map(|x| {
                        let offset: usize = family[..i].iter().map(|f| f.levels[k].dim(x)).sum();
                        let basis = fixed[k][x].basis();
                        basis.block(offset, 0, member.levels[k].dim(x), basis.cols())
                    })
                    .collect();
                SheafMap::new(product.levels[k].clone(), member.levels[k].clone(), maps)
            })
            .collect::<Result<Vec<_>>>()?;
        projections.push(PresheafMap::new(product.clone(), member.clone(), levels)?);
    }
    Ok(DiscProduct { product, projections, fixed })
}

/// Hom-dimension equality `Hom(C, ∏) = ∏ Hom(C, F_i)` and unique factorization of each basis cone,
/// for a level-discrete test presheaf `C`.
pub fn product_universal_check(p: &DiscProduct, family: &[EqPresheaf], test: &EqPresheaf) -> Result<bool> {
    let into_product = presheaf_hom_space(test, &p.product)?;
    let cones: Vec<Vec<PresheafMap>> =
        family.iter().map(|f| presheaf_hom_space(test, f)).collect::<Result<Vec<_>>>()?;
    let total: usize = cones.iter().map(Vec::len).sum();
    if into_product.len() != total {
        return Ok(false);
    }
    let tower = &p.product.tower;
    for (i, legs) in cones.iter().enumerate() {
        for leg in legs {
            // the cone with `leg` in slot i and zero elsewhere
            let levels = (0..=tower.depth())
                .map(|k| {
                    let maps = (0..tower.level(k).n_points())
                        .map(|x| {
                            let parts: Vec<Matrix> = family
                                .iter()
                                .enumerate()
                                .map(|(j, f)| {
                                    if j == i {
                                        leg.levels[k].at(x).clone()
                                    } else {
                                        Matrix::zeros(f.levels[k].dim(x), test.levels[k].dim(x))
                                    }
                                })
                                .collect();
                            let full = Matrix::vstack(test.levels[k].dim(x), &parts.iter().collect::<Vec<_>>());
                            p.fixed[k][x].coords_matrix(&full).ok_or(Error::NotInvariant)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    SheafMap::new(test.levels[k].clone(), p.product.levels[k].clone(), maps)
                })
                .collect::<Result<Vec<_>>>()?;
            let induced = PresheafMap::new(test.clone(), p.product.clone(), levels)?;
            for (j, proj) in p.projections.iter().enumerate() {
                let back = proj.compose(&induced)?;
                let ok = if j == i { back.same_matrices(leg) } else { back.levels.iter().all(SheafMap::is_zero) };
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Preimage in the top group of the subgroup at a point of level `k`.
pub fn lifted_subgroup(tower: &SpaceTower, k: usize, x: usize) -> Result<Subgroup> {
    let subs = tower.level(k).subgroup_points().ok_or(Error::WrongBase)?;
    Ok(tower.groups().projection(k).preimage(&subs[x]))
}

/// `F(p_k^-1{H}) = Q[G_K / H̃]` with transfers as restrictions and conjugation as translations.
pub fn example_group_ring(tower: &Arc<SpaceTower>) -> Result<EqPresheaf> {
    if !tower.is_subgroup_tower() {
        return Err(Error::WrongBase);
    }
    let top = Arc::clone(tower.groups().top());
    let depth = tower.depth();
    let mut levels = Vec::new();
    for k in 0..=depth {
        let space = tower.inflated(k);
        let lifted: Vec<Subgroup> =
            (0..space.n_points()).map(|x| lifted_subgroup(tower, k, x)).collect::<Result<Vec<_>>>()?;
        let cosets: Vec<_> = lifted.iter().map(|h| top.left_cosets(h)).collect();
        let stalks = lifted.iter().map(|h| permutation_rep(&top, h).module().clone()).collect();
        let translations = top
            .generator_indices()
            .iter()
            .map(|&g| {
                (0..space.n_points())
                    .map(|x| {
                        let gx = space.act(g, x);
                        let (src, dst) = (&cosets[x], &cosets[gx]);
                        let mut m = Matrix::zeros(dst.len(), src.len());
                        for (c, &r) in src.reps.iter().enumerate() {
                            m.set(dst.coset_of[top.conjugate(g, r)], c, crate::linalg::q(1));
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        levels.push(FiniteEqSheaf::new(Arc::clone(space), stalks, translations)?);
    }
    let restrictions = (0..depth)
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| {
                    let x = tower.step(k).map_point(xp);
                    let t = transfer(&top, &lifted_subgroup(tower, k, x)?, &lifted_subgroup(tower, k + 1, xp)?)?;
                    Ok(t.matrix().clone())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    EqPresheaf::new(Arc::clone(tower), levels, restrictions)
}

/// Level `k` has stalk `V^{H̃}` at `H`, structure maps the inclusions of fixed spaces.
pub fn example_fix(v: &GroupRep, tower: &Arc<SpaceTower>) -> Result<DiagramSheaf> {
    if !tower.is_subgroup_tower() {
        return Err(Error::WrongBase);
    }
    if **v.group() != **tower.groups().top() {
        return Err(Error::Shape("module is not a rep of the tower's top group".into()));
    }
    let depth = tower.depth();
    let mut fixed: Vec<Vec<Subspace>> = Vec::new();
    let mut levels = Vec::new();
    for k in 0..=depth {
        let space = tower.level(k);
        let subs: Vec<Subspace> = (0..space.n_points())
            .map(|x| lifted_subgroup(tower, k, x).map(|h| v.fixed_subspace(&h)))
            .collect::<Result<Vec<_>>>()?;
        let lifts = tower.groups().projection(k).least_lifts();
        let translations = space
            .group()
            .generator_indices()
            .iter()
            .map(|&h| {
                let g = lifts[h];
                (0..space.n_points())
                    .map(|x| {
                        subs[space.act(h, x)]
                            .coords_matrix(&v.matrix(g).mul(subs[x].basis()))
                            .ok_or(Error::NotInvariant)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let stalks = subs.iter().map(|s| QModule::new(s.dim())).collect();
        levels.push(FiniteEqSheaf::new(Arc::clone(space), stalks, translations)?);
        fixed.push(subs);
    }
    let structure = (0..depth)
        .map(|k| {
            (0..tower.level(k + 1).n_points())
                .map(|xp| {
                    let x = tower.step(k).map_point(xp);
                    fixed[k + 1][xp].coords_matrix(fixed[k][x].basis()).ok_or(Error::NotInvariant)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DiagramSheaf::new(Arc::clone(tower), levels, structure)
}

/// The colimit stalk of `example_fix` at a top point, identified with `V^K` inside `V`.
pub fn fix_stalk_inclusion(v: &GroupRep, tower: &Arc<SpaceTower>, x: usize) -> Result<Matrix> {
    let depth = tower.depth();
    let k = lifted_subgroup(tower, depth, x)?;
    Ok(v.fixed_subspace(&k).basis().clone())
}
