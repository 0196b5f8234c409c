//! Finite-dimensional rational representations of finite groups.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::linalg::{BlockSystem, Matrix, Quotient, Subspace};
use crate::tower::GroupTower;

/// A rational vector space with named basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QModule {
    labels: Vec<String>,
}

impl QModule {
    /// `Q^dim` with basis `e0, e1, ...`.
    pub fn new(dim: usize) -> QModule {
        QModule { labels: (0..dim).map(|i| format!("e{i}")).collect() }
    }

    pub fn with_labels(labels: Vec<String>) -> QModule {
        QModule { labels }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn direct_sum(parts: &[&QModule]) -> QModule {
        let mut labels = Vec::new();
        for (i, m) in parts.iter().enumerate() {
            labels.extend(m.labels.iter().map(|l| format!("{i}:{l}")));
        }
        QModule { labels }
    }
}

/// A group acting on a rational module by invertible matrices.
#[derive(Clone)]
pub struct GroupRep {
    group: Arc<FiniteGroup>,
    module: QModule,
    /// One matrix per group element.
    action: Arc<Vec<Matrix>>,
}

impl std::fmt::Debug for GroupRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupRep").field("group_order", &self.group.order()).field("dim", &self.dim()).finish()
    }
}

impl PartialEq for GroupRep {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group && self.module == other.module && self.action == other.action
    }
}

impl GroupRep {
    /// Extends generator matrices to every element, failing if a relation is violated.
    pub fn new(group: Arc<FiniteGroup>, module: QModule, generators: &[Matrix]) -> Result<GroupRep> {
        let gens = group.generator_indices().to_vec();
        if generators.len() != gens.len() {
            return Err(Error::Shape(format!("{} matrices for {} generators", generators.len(), gens.len())));
        }
        let n = module.dim();
        for m in generators {
            if m.shape() != (n, n) {
                return Err(Error::Shape(format!("action matrix is {:?}, module has dim {n}", m.shape())));
            }
        }
        let mut action: Vec<Option<Matrix>> = vec![None; group.order()];
        action[0] = Some(Matrix::identity(n));
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            let ag = action[g].clone().expect("visited");
            for (i, &s) in gens.iter().enumerate() {
                let sg = group.mul(s, g);
                let m = generators[i].mul(&ag);
                match &action[sg] {
                    None => {
                        action[sg] = Some(m);
                        queue.push_back(sg);
                    }
                    Some(existing) if *existing != m => return Err(Error::NotHomomorphism(s, g)),
                    Some(_) => {}
                }
            }
        }
        let action = action.into_iter().map(|m| m.expect("group is generated")).collect();
        Ok(GroupRep { group, module, action: Arc::new(action) })
    }

    /// Builds from a matrix for every element, checking multiplicativity on generators.
    pub fn from_element_matrices(group: Arc<FiniteGroup>, module: QModule, action: Vec<Matrix>) -> Result<GroupRep> {
        if action.len() != group.order() {
            return Err(Error::Shape("one matrix per group element required".into()));
        }
        let gens: Vec<Matrix> = group.generator_indices().iter().map(|&s| action[s].clone()).collect();
        let rep = GroupRep::new(group, module, &gens)?;
        if *rep.action != action {
            return Err(Error::NotHomomorphism(0, 0));
        }
        Ok(rep)
    }

    pub fn trivial(group: &Arc<FiniteGroup>, dim: usize) -> GroupRep {
        GroupRep {
            group: Arc::clone(group),
            module: QModule::new(dim),
            action: Arc::new(vec![Matrix::identity(dim); group.order()]),
        }
    }

    pub fn zero(group: &Arc<FiniteGroup>) -> GroupRep {
        GroupRep::trivial(group, 0)
    }

    /// Left translation on `Q[G]`.
    pub fn regular(group: &Arc<FiniteGroup>) -> GroupRep {
        permutation_rep(group, &group.trivial_subgroup())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn module(&self) -> &QModule {
        &self.module
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.action
    }

    pub fn generator_matrices(&self) -> Vec<Matrix> {
        self.group.generator_indices().iter().map(|&s| self.action[s].clone()).collect()
    }

    pub fn with_labels(mut self, module: QModule) -> Result<GroupRep> {
        if module.dim() != self.dim() {
            return Err(Error::Shape("relabelling changes the dimension".into()));
        }
        self.module = module;
        Ok(self)
    }

    pub fn character(&self, g: usize) -> crate::linalg::Q {
        self.action[g].trace()
    }

    pub fn is_trivial_on(&self, h: &Subgroup) -> bool {
        let gens = self.group.subgroup_generators(h);
        gens.iter().all(|&g| self.action[g].is_identity())
    }

    /// Restriction to `H`, as a rep of `group.subgroup_group(H)`.
    pub fn restrict(&self, h: &Subgroup) -> GroupRep {
        let sub = self.group.subgroup_group(h);
        let action = h.members().iter().map(|&g| self.action[g].clone()).collect();
        GroupRep { group: sub, module: self.module.clone(), action: Arc::new(action) }
    }

    /// The rep of `hom.source()` acting through `hom`.
    pub fn pullback(&self, hom: &GroupHom) -> Result<GroupRep> {
        if **hom.target() != *self.group {
            return Err(Error::Shape("pullback along a hom into a different group".into()));
        }
        let action = (0..hom.source().order()).map(|g| self.action[hom.apply(g)].clone()).collect();
        Ok(GroupRep { group: Arc::clone(hom.source()), module: self.module.clone(), action: Arc::new(action) })
    }

    /// Vectors fixed by every element of `H`.
    pub fn fixed_subspace(&self, h: &Subgroup) -> Subspace {
        fixed_subspace_of(self.dim(), self.group.subgroup_generators(h).iter().map(|&g| &self.action[g]))
    }

    /// The fixed vectors of `H` as a module, with the inclusion into this module.
    pub fn fixed_points(&self, h: &Subgroup) -> FixedPoints {
        let subspace = self.fixed_subspace(h);
        let labels = (0..subspace.dim()).map(|i| format!("f{i}")).collect();
        FixedPoints { module: QModule::with_labels(labels), inclusion: subspace.basis().clone(), subspace }
    }

    /// The subrep on an invariant subspace, with basis its echelon basis.
    pub fn subrep(&self, sub: &Subspace) -> Result<GroupRep> {
        if sub.ambient() != self.dim() {
            return Err(Error::Shape("subspace lives in a different module".into()));
        }
        let mut action = Vec::with_capacity(self.group.order());
        for m in self.action.iter() {
            action.push(sub.coords_matrix(&m.mul(sub.basis())).ok_or(Error::NotInvariant)?);
        }
        Ok(GroupRep { group: Arc::clone(&self.group), module: QModule::new(sub.dim()), action: Arc::new(action) })
    }

    /// The quotient rep by an invariant subspace.
    pub fn quotient_rep(&self, sub: &Subspace) -> Result<(GroupRep, Quotient)> {
        let q = Quotient::new(sub.clone());
        let mut action = Vec::with_capacity(self.group.order());
        for m in self.action.iter() {
            if sub.coords_matrix(&m.mul(sub.basis())).is_none() {
                return Err(Error::NotInvariant);
            }
            action.push(q.induced(m));
        }
        let rep = GroupRep { group: Arc::clone(&self.group), module: QModule::new(q.dim()), action: Arc::new(action) };
        Ok((rep, q))
    }

    /// Transports the action along an invertible change of basis `p` (new = p * old * p^-1).
    pub fn conjugate_by(&self, p: &Matrix) -> Result<GroupRep> {
        let inv = p.inverse().ok_or_else(|| Error::Shape("change of basis is not invertible".into()))?;
        let action = self.action.iter().map(|m| p.mul(&m.mul(&inv))).collect();
        Ok(GroupRep { group: Arc::clone(&self.group), module: QModule::new(self.dim()), action: Arc::new(action) })
    }

    pub fn direct_sum(parts: &[&GroupRep]) -> Result<GroupRep> {
        let group = parts.first().map(|p| Arc::clone(&p.group)).ok_or_else(|| Error::Shape("empty sum".into()))?;
        if parts.iter().any(|p| *p.group != *group) {
            return Err(Error::Shape("summands over different groups".into()));
        }
        let action = (0..group.order())
            .map(|g| Matrix::block_diag(&parts.iter().map(|p| &p.action[g]).collect::<Vec<_>>()))
            .collect();
        let module = QModule::direct_sum(&parts.iter().map(|p| &p.module).collect::<Vec<_>>());
        Ok(GroupRep { group, module, action: Arc::new(action) })
    }

    pub fn same_group(&self, other: &GroupRep) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }
}

pub(crate) fn fixed_subspace_of<'a>(dim: usize, mats: impl Iterator<Item = &'a Matrix>) -> Subspace {
    let parts: Vec<Matrix> = mats.map(|m| m.sub(&Matrix::identity(dim))).collect();
    if parts.is_empty() {
        return Subspace::whole(dim);
    }
    let stacked = Matrix::vstack(dim, &parts.iter().collect::<Vec<_>>());
    Subspace::kernel_of(&stacked)
}

#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub module: QModule,
    pub inclusion: Matrix,
    pub subspace: Subspace,
}

/// Basis of all `H`-equivariant maps `source -> target` (both over the same group).
pub fn hom_space(source: &GroupRep, target: &GroupRep) -> Result<Vec<Matrix>> {
    if !source.same_group(target) {
        return Err(Error::Shape("hom space between reps of different groups".into()));
    }
    let mut sys = BlockSystem::new();
    let x = sys.add_block(target.dim(), source.dim());
    for &s in source.group.generator_indices() {
        sys.add_commutation(target.action[s].clone(), x, x, source.action[s].clone());
    }
    Ok(sys.solve().into_iter().map(|mut sol| sol.swap_remove(x)).collect())
}

/// A matrix commuting with two actions of the same group.
#[derive(Clone, Debug)]
pub struct EquivariantMap {
    source: GroupRep,
    target: GroupRep,
    matrix: Matrix,
}

impl EquivariantMap {
    pub fn new(source: GroupRep, target: GroupRep, matrix: Matrix) -> Result<EquivariantMap> {
        if !source.same_group(&target) {
            return Err(Error::Shape("equivariant map between reps of different groups".into()));
        }
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::Shape(format!(
                "map is {:?}, expected {:?}",
                matrix.shape(),
                (target.dim(), source.dim())
            )));
        }
        for &s in source.group.generator_indices() {
            if matrix.mul(&source.action[s]) != target.action[s].mul(&matrix) {
                return Err(Error::NotEquivariant { element: s, point: 0 });
            }
        }
        Ok(EquivariantMap { source, target, matrix })
    }

    pub fn identity(rep: &GroupRep) -> EquivariantMap {
        EquivariantMap { source: rep.clone(), target: rep.clone(), matrix: Matrix::identity(rep.dim()) }
    }

    pub fn zero(source: &GroupRep, target: &GroupRep) -> Result<EquivariantMap> {
        EquivariantMap::new(source.clone(), target.clone(), Matrix::zeros(target.dim(), source.dim()))
    }

    pub fn source(&self) -> &GroupRep {
        &self.source
    }

    pub fn target(&self) -> &GroupRep {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &EquivariantMap) -> Result<EquivariantMap> {
        if inner.target.dim() != self.source.dim() || !inner.target.same_group(&self.source) {
            return Err(Error::Shape("composed maps do not match".into()));
        }
        Ok(EquivariantMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }
}

/// `Q[G/H]` with basis the left cosets, ordered by least element.
pub fn permutation_rep(group: &Arc<FiniteGroup>, h: &Subgroup) -> GroupRep {
    let cosets = group.left_cosets(h);
    let m = cosets.len();
    let action = (0..group.order())
        .map(|g| {
            let mut mat = Matrix::zeros(m, m);
            for (c, &rep) in cosets.reps.iter().enumerate() {
                mat.set(cosets.coset_of[group.mul(g, rep)], c, crate::linalg::q(1));
            }
            mat
        })
        .collect();
    let labels = cosets.reps.iter().map(|&r| format!("{}H", group.element(r))).collect();
    GroupRep { group: Arc::clone(group), module: QModule::with_labels(labels), action: Arc::new(action) }
}

/// `Ind_H^G M` for a rep `M` of `group.subgroup_group(H)`.
///
/// Basis: pairs (coset, basis vector of `M`), coset-major, with the least element of each
/// coset as its representative.
pub fn induced_rep(group: &Arc<FiniteGroup>, h: &Subgroup, m: &GroupRep) -> Result<GroupRep> {
    if m.group.order() != h.order()
        || h.members().iter().enumerate().any(|(i, &g)| m.group.element(i) != group.element(g))
    {
        return Err(Error::Shape("inducing module is not a rep of the given subgroup".into()));
    }
    let cosets = group.left_cosets(h);
    let d = m.dim();
    let n = cosets.len() * d;
    let action = (0..group.order())
        .map(|g| {
            let mut mat = Matrix::zeros(n, n);
            for (c, &t) in cosets.reps.iter().enumerate() {
                let gt = group.mul(g, t);
                let c2 = cosets.coset_of[gt];
                let inner = group.mul(group.inverse(cosets.reps[c2]), gt);
                let pos = h.position(inner).expect("coset representative arithmetic");
                mat.set_block(c2 * d, c * d, &m.action[pos]);
            }
            mat
        })
        .collect();
    let mut labels = Vec::with_capacity(n);
    for &t in &cosets.reps {
        for l in m.module.labels() {
            labels.push(format!("{}⊗{l}", group.element(t)));
        }
    }
    Ok(GroupRep { group: Arc::clone(group), module: QModule::with_labels(labels), action: Arc::new(action) })
}

/// The transfer `Q[G/A] -> Q[G/B]` for `B <= A`, sending a coset to the sum of the cosets above it.
pub fn transfer(group: &Arc<FiniteGroup>, a: &Subgroup, b: &Subgroup) -> Result<EquivariantMap> {
    if !b.is_subset_of(a) {
        return Err(Error::NotSubgroup);
    }
    let source = permutation_rep(group, a);
    let target = permutation_rep(group, b);
    let ca = group.left_cosets(a);
    let cb = group.left_cosets(b);
    let mut mat = Matrix::zeros(cb.len(), ca.len());
    for (j, &r) in cb.reps.iter().enumerate() {
        mat.set(j, ca.coset_of[r], crate::linalg::q(1));
    }
    EquivariantMap::new(source, target, mat)
}

/// Kernel, image, cokernel and coimage of an equivariant map, with the canonical maps.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub kernel: GroupRep,
    /// `source x kernel`.
    pub kernel_inclusion: Matrix,
    pub image: GroupRep,
    /// `target x image`.
    pub image_inclusion: Matrix,
    pub cokernel: GroupRep,
    /// `cokernel x target`.
    pub cokernel_projection: Matrix,
    pub coimage: GroupRep,
    /// `coimage x source`.
    pub coimage_projection: Matrix,
    /// The induced isomorphism `coimage -> image`.
    pub comparison: Matrix,
}

pub fn map_factorization(f: &EquivariantMap) -> Result<Factorization> {
    let ker = Subspace::kernel_of(&f.matrix);
    let im = Subspace::image_of(&f.matrix);
    let kernel = f.source.subrep(&ker)?;
    let image = f.target.subrep(&im)?;
    let (cokernel, coker_q) = f.target.quotient_rep(&im)?;
    let (coimage, coim_q) = f.source.quotient_rep(&ker)?;
    let comparison = im
        .coords_matrix(&f.matrix.mul(&coim_q.section()))
        .ok_or_else(|| Error::Shape("image does not contain the map's columns".into()))?;
    Ok(Factorization {
        kernel,
        kernel_inclusion: ker.basis().clone(),
        image,
        image_inclusion: im.basis().clone(),
        cokernel,
        cokernel_projection: coker_q.projection().clone(),
        coimage,
        coimage_projection: coim_q.projection().clone(),
        comparison,
    })
}

/// `M^{N_0} ⊆ M^{N_1} ⊆ ... ⊆ M^{N_K} = M` for a rep `M` of the top group of the tower.
pub fn disc_filtration(m: &GroupRep, tower: &GroupTower) -> Result<Vec<Subspace>> {
    if **tower.top() != *m.group {
        return Err(Error::Shape("module is not a rep of the tower's top group".into()));
    }
    Ok((0..=tower.depth()).map(|k| m.fixed_subspace(tower.kernel(k))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Permutation;
    use crate::linalg::q;
    use num_traits::{ToPrimitive, Zero};

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3, 100).unwrap())
    }

    fn sub_of(g: &FiniteGroup, gens: &[Permutation]) -> Subgroup {
        let idx: Vec<usize> = gens.iter().map(|p| g.index_of(p).unwrap()).collect();
        g.generated(&idx)
    }

    fn trace_oracle(m: &GroupRep, h: &Subgroup) -> usize {
        let mut sum = crate::linalg::Q::zero();
        for &g in h.members() {
            sum += m.character(g);
        }
        (sum / q(h.order() as i64)).to_integer().to_usize().unwrap()
    }

    #[test]
    fn permutation_reps() {
        let c4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        assert_eq!(permutation_rep(&c4, &c4.whole()).dim(), 1);
        assert!(permutation_rep(&c4, &c4.whole()).matrix(1).is_identity());
        assert_eq!(GroupRep::regular(&c4).dim(), 4);
        let g = s3();
        let h = sub_of(&g, &[Permutation::cycle(3, &[0, 1]).unwrap()]);
        let m = permutation_rep(&g, &h);
        assert_eq!(m.dim(), 3);
        // character of a permutation module counts fixed cosets
        let cosets = g.left_cosets(&h);
        for x in 0..g.order() {
            let fixed = cosets.reps.iter().filter(|&&r| {
                let xr = g.mul(x, r);
                h.contains(g.mul(g.inverse(r), xr))
            });
            assert_eq!(m.character(x), q(fixed.count() as i64));
        }
    }

    #[test]
    fn fixed_point_examples() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let reg = GroupRep::regular(&c2);
        assert_eq!(reg.fixed_points(&c2.whole()).module.dim(), 1);
        assert_eq!(reg.fixed_points(&c2.trivial_subgroup()).module.dim(), 2);
        let g = s3();
        let h = sub_of(&g, &[Permutation::cycle(3, &[0, 1]).unwrap()]);
        let a3 = sub_of(&g, &[Permutation::cycle(3, &[0, 1, 2]).unwrap()]);
        let m = permutation_rep(&g, &h);
        let fp = m.fixed_points(&a3);
        assert_eq!(fp.module.dim(), 1);
        assert_eq!(fp.inclusion.column(0), vec![q(1), q(1), q(1)]);
    }

    #[test]
    fn fixed_points_match_trace_oracle() {
        let g = s3();
        for h in g.all_subgroups(100).unwrap() {
            for k in g.all_subgroups(100).unwrap() {
                let m = permutation_rep(&g, &h);
                assert_eq!(m.fixed_subspace(&k).dim(), trace_oracle(&m, &k));
            }
        }
    }

    #[test]
    fn induced_examples() {
        let g = s3();
        let a3 = sub_of(&g, &[Permutation::cycle(3, &[0, 1, 2]).unwrap()]);
        let triv = GroupRep::trivial(&g.subgroup_group(&a3), 1);
        let ind = induced_rep(&g, &a3, &triv).unwrap();
        assert_eq!(ind.dim(), 2);
        // induced from the trivial rep is the permutation module
        let perm = permutation_rep(&g, &a3);
        assert_eq!(ind.matrices(), perm.matrices());
        let whole = g.whole();
        let m = permutation_rep(&g, &a3).restrict(&whole);
        let again = induced_rep(&g, &whole, &m).unwrap();
        assert_eq!(again.matrices(), perm.matrices());
        let zero = GroupRep::zero(&g.subgroup_group(&a3));
        assert_eq!(induced_rep(&g, &a3, &zero).unwrap().dim(), 0);
    }

    #[test]
    fn transfer_examples() {
        let c4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let two = c4.mul(c4.generator_indices()[0], c4.generator_indices()[0]);
        let b = c4.generated(&[two]);
        let t = transfer(&c4, &c4.whole(), &b).unwrap();
        assert_eq!(t.matrix(), &Matrix::from_i64(2, 1, &[1, 1]));
        let id = transfer(&c4, &b, &b).unwrap();
        assert!(id.matrix().is_identity());
        assert!(matches!(transfer(&c4, &b, &c4.whole()), Err(Error::NotSubgroup)));
        let f = map_factorization(&t).unwrap();
        assert_eq!((f.kernel.dim(), f.cokernel.dim()), (0, 1));
        assert!(f.comparison.is_invertible());

        let g = s3();
        let a3 = sub_of(&g, &[Permutation::cycle(3, &[0, 1, 2]).unwrap()]);
        assert_eq!(transfer(&g, &g.whole(), &a3).unwrap().matrix(), &Matrix::from_i64(2, 1, &[1, 1]));
    }

    #[test]
    fn transfers_compose() {
        let g = s3();
        let subs = g.all_subgroups(100).unwrap();
        for a in &subs {
            for mid in subs.iter().filter(|m| m.is_subset_of(a)) {
                for b in subs.iter().filter(|b| b.is_subset_of(mid)) {
                    let direct = transfer(&g, a, b).unwrap();
                    let lower = transfer(&g, mid, b).unwrap();
                    let two = lower.compose(&transfer(&g, a, mid).unwrap()).unwrap();
                    assert_eq!(direct.matrix(), two.matrix());
                    assert_eq!(direct.matrix().rank(), direct.source().dim());
                }
            }
        }
    }

    #[test]
    fn factorization_extremes() {
        let g = s3();
        let m = GroupRep::regular(&g);
        let zero = EquivariantMap::zero(&m, &m).unwrap();
        let f = map_factorization(&zero).unwrap();
        assert_eq!((f.kernel.dim(), f.image.dim(), f.cokernel.dim()), (6, 0, 6));
        let f = map_factorization(&EquivariantMap::identity(&m)).unwrap();
        assert_eq!((f.kernel.dim(), f.cokernel.dim()), (0, 0));
    }

    #[test]
    fn non_equivariant_rejected() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let reg = GroupRep::regular(&c2);
        let triv = GroupRep::trivial(&c2, 2);
        let e = EquivariantMap::new(reg, triv, Matrix::identity(2));
        assert!(matches!(e, Err(Error::NotEquivariant { .. })));
    }

    #[test]
    fn bad_generator_matrix_rejected() {
        let c2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        // an element of order 2 cannot act by a 3-cycle
        let m = Matrix::from_i64(3, 3, &[0, 0, 1, 1, 0, 0, 0, 1, 0]);
        assert!(matches!(GroupRep::new(c2, QModule::new(3), &[m]), Err(Error::NotHomomorphism(..))));
    }

    #[test]
    fn disc_filtration_of_regular_z8() {
        let levels: Vec<Arc<FiniteGroup>> =
            [1usize, 2, 4, 8].iter().map(|&n| Arc::new(FiniteGroup::cyclic(n).unwrap())).collect();
        let steps = (0..3)
            .map(|k| {
                let t = &levels[k];
                let img = if t.generator_indices().is_empty() { vec![0] } else { vec![t.generator_indices()[0]] };
                GroupHom::from_generator_images(levels[k + 1].clone(), t.clone(), &img).unwrap()
            })
            .collect();
        let tower = GroupTower::new(levels.clone(), steps).unwrap();
        let reg = GroupRep::regular(&levels[3]);
        let dims: Vec<usize> = disc_filtration(&reg, &tower).unwrap().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![1, 2, 4, 8]);

        // product of Q[Z/2^n], n = 0..3, acting through the projections
        let parts: Vec<GroupRep> =
            (0..=3).map(|n| GroupRep::regular(&levels[n]).pullback(tower.projection(n)).unwrap()).collect();
        let prod = GroupRep::direct_sum(&parts.iter().collect::<Vec<_>>()).unwrap();
        let filt = disc_filtration(&prod, &tower).unwrap();
        let dims: Vec<usize> = filt.iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![4, 7, 11, 15]);
        let mut diagonal = vec![q(0); 15];
        let mut off = 0;
        for n in 0..=3 {
            diagonal[off] = q(1);
            off += 1 << n;
        }
        let first = filt.iter().position(|s| s.contains(&diagonal));
        assert_eq!(first, Some(3));
        for w in filt.windows(2) {
            assert!(w[1].contains_subspace(&w[0]));
        }
    }

    #[test]
    fn frobenius_reciprocity() {
        let g = s3();
        let subs = g.all_subgroups(100).unwrap();
        for h in &subs {
            let hg = g.subgroup_group(h);
            for k in &subs {
                let n = permutation_rep(&g, k);
                let m = GroupRep::regular(&hg);
                let ind = induced_rep(&g, h, &m).unwrap();
                let left = hom_space(&ind, &n).unwrap().len();
                let right = hom_space(&m, &n.restrict(h)).unwrap().len();
                assert_eq!(left, right);
            }
        }
    }
}
