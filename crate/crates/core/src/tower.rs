//! Finite G-spaces and linearly ordered towers of finite groups and spaces.
//!
//! A tower `G_0 <- G_1 <- ... <- G_K` of surjections stands in for a profinite
//! group; `G_K` plays the role of the group itself and `N_k = ker(G_K -> G_k)`
//! the open normal subgroups. A space tower `X_0 <- ... <- X_K` over it is the
//! finite model of a profinite `G`-space, whose points are the threads through
//! the levels and whose basic opens are the fibers `p_k^-1{x}`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{quotient, FiniteGroup, GroupHom, Subgroup};

/// A finite set with an action of a finite group.
#[derive(Clone)]
pub struct FiniteGSpace {
    group: Arc<FiniteGroup>,
    n_points: usize,
    /// `action[g][x] = g·x` for every group element.
    action: Vec<Vec<usize>>,
    labels: Vec<String>,
    subgroups: Option<Vec<Subgroup>>,
}

impl std::fmt::Debug for FiniteGSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGSpace")
            .field("group_order", &self.group.order())
            .field("points", &self.n_points)
            .finish()
    }
}

impl FiniteGSpace {
    /// Builds a space from the action of each group generator, extending it to the whole group.
    pub fn new(
        group: Arc<FiniteGroup>,
        n_points: usize,
        generator_action: &[Vec<usize>],
        labels: Option<Vec<String>>,
    ) -> Result<FiniteGSpace> {
        let gens = group.generator_indices().to_vec();
        if generator_action.len() != gens.len() {
            return Err(Error::Shape(format!(
                "{} generator actions for {} generators",
                generator_action.len(),
                gens.len()
            )));
        }
        for a in generator_action {
            if a.len() != n_points {
                return Err(Error::Shape("generator action has the wrong number of points".into()));
            }
            let mut seen = vec![false; n_points];
            for &y in a {
                if y >= n_points || seen[y] {
                    return Err(Error::InvalidPermutation(a.clone()));
                }
                seen[y] = true;
            }
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        action[0] = Some((0..n_points).collect());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            let ag = action[g].clone().expect("visited");
            for (i, &s) in gens.iter().enumerate() {
                let sg = group.mul(s, g);
                let composed: Vec<usize> = ag.iter().map(|&x| generator_action[i][x]).collect();
                match &action[sg] {
                    None => {
                        action[sg] = Some(composed);
                        queue.push_back(sg);
                    }
                    Some(existing) if *existing != composed => {
                        return Err(Error::NotHomomorphism(s, g));
                    }
                    Some(_) => {}
                }
            }
        }
        let action: Vec<Vec<usize>> = action.into_iter().map(|a| a.expect("group is generated")).collect();
        let labels = labels.unwrap_or_else(|| (0..n_points).map(|x| x.to_string()).collect());
        if labels.len() != n_points {
            return Err(Error::Shape("one label per point required".into()));
        }
        Ok(FiniteGSpace { group, n_points, action, labels, subgroups: None })
    }

    /// Validates a full action table, one row per group element.
    pub fn from_element_action(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<FiniteGSpace> {
        if action.len() != group.order() {
            return Err(Error::Shape("one action row per group element required".into()));
        }
        let n_points = action.first().map_or(0, Vec::len);
        let gen_action: Vec<Vec<usize>> = group.generator_indices().iter().map(|&s| action[s].clone()).collect();
        let space = FiniteGSpace::new(group, n_points, &gen_action, None)?;
        if space.action != action {
            return Err(Error::NotHomomorphism(0, 0));
        }
        Ok(space)
    }

    /// All subgroups of `group` under conjugation.
    pub fn subgroup_space(group: Arc<FiniteGroup>, cap: usize) -> Result<FiniteGSpace> {
        let subgroups = group.all_subgroups(cap)?;
        let index: HashMap<&Subgroup, usize> = subgroups.iter().enumerate().map(|(i, h)| (h, i)).collect();
        let action: Vec<Vec<usize>> = (0..group.order())
            .map(|g| subgroups.iter().map(|h| index[&group.conjugate_subgroup(g, h)]).collect())
            .collect();
        let labels = subgroups.iter().map(|h| format!("|H|={} {:?}", h.order(), h.members())).collect();
        Ok(FiniteGSpace { n_points: subgroups.len(), group, action, labels, subgroups: Some(subgroups) })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action_of(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    pub fn generator_action(&self) -> Vec<Vec<usize>> {
        self.group.generator_indices().iter().map(|&s| self.action[s].clone()).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The subgroup each point stands for, when this is a space of subgroups.
    pub fn subgroup_points(&self) -> Option<&[Subgroup]> {
        self.subgroups.as_deref()
    }

    pub fn same_as(&self, other: &FiniteGSpace) -> bool {
        std::ptr::eq(self, other)
            || (self.n_points == other.n_points && *self.group == *other.group && self.action == other.action)
    }

    /// Orbits sorted by least point; each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_points];
        let mut orbits = Vec::new();
        for x in 0..self.n_points {
            if seen[x] {
                continue;
            }
            let orbit = self.orbit_of(x);
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self.action.iter().map(|a| a[x]).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// Least point in the orbit of `x`.
    pub fn orbit_representative(&self, x: usize) -> usize {
        self.action.iter().map(|a| a[x]).min().unwrap_or(x)
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let members = (0..self.group.order()).filter(|&g| self.action[g][x] == x).collect();
        self.group.subgroup(members).expect("stabilizers are subgroups")
    }

    /// Elements mapping the set `points` onto itself.
    pub fn setwise_stabilizer(&self, points: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.n_points];
        for &x in points {
            inside[x] = true;
        }
        let members = (0..self.group.order()).filter(|&g| points.iter().all(|&x| inside[self.action[g][x]])).collect();
        self.group.subgroup(members).expect("setwise stabilizers are subgroups")
    }

    /// For each point `y` in the orbit of `x`, the least element `t` with `t·x = y`.
    pub fn transversal(&self, x: usize) -> Vec<Option<usize>> {
        let mut t = vec![None; self.n_points];
        for g in 0..self.group.order() {
            let y = self.action[g][x];
            if t[y].is_none() {
                t[y] = Some(g);
            }
        }
        t
    }

    pub fn is_invariant(&self, points: &[usize]) -> bool {
        let mut inside = vec![false; self.n_points];
        for &x in points {
            inside[x] = true;
        }
        self.group.generator_indices().iter().all(|&s| points.iter().all(|&x| inside[self.action[s][x]]))
    }

    /// The invariant subset `points` as a space in its own right, with the inclusion.
    pub fn subspace(&self, points: &[usize]) -> Result<(FiniteGSpace, Vec<usize>)> {
        let mut points = points.to_vec();
        points.sort_unstable();
        points.dedup();
        if let Some(&bad) = points.iter().find(|&&x| x >= self.n_points) {
            return Err(Error::IndexOutOfRange { index: bad, bound: self.n_points });
        }
        if !self.is_invariant(&points) {
            return Err(Error::NotInvariant);
        }
        let pos: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let action = self.action.iter().map(|a| points.iter().map(|&x| pos[&a[x]]).collect()).collect();
        let labels = points.iter().map(|&x| self.labels[x].clone()).collect();
        let subgroups = self.subgroups.as_ref().map(|s| points.iter().map(|&x| s[x].clone()).collect());
        Ok((FiniteGSpace { group: Arc::clone(&self.group), n_points: points.len(), action, labels, subgroups }, points))
    }

    /// The same points, acted on by `hom.source()` through `hom`.
    pub fn inflate(&self, hom: &GroupHom) -> Result<FiniteGSpace> {
        if **hom.target() != *self.group {
            return Err(Error::Shape("inflation along a hom into a different group".into()));
        }
        let action = (0..hom.source().order()).map(|g| self.action[hom.apply(g)].clone()).collect();
        Ok(FiniteGSpace {
            group: Arc::clone(hom.source()),
            n_points: self.n_points,
            action,
            labels: self.labels.clone(),
            subgroups: None,
        })
    }
}

/// An equivariant surjection `X -> Y` over a surjective group hom `G -> H`.
///
/// This is the data of one change-of-group step, for pull back and push forward.
#[derive(Clone, Debug)]
pub struct Projection {
    fine: Arc<FiniteGSpace>,
    coarse: Arc<FiniteGSpace>,
    point_map: Vec<usize>,
    group_map: GroupHom,
    kernel: Subgroup,
    kernel_generators: Vec<usize>,
    fibers: Vec<Vec<usize>>,
    lifts: Vec<usize>,
}

impl Projection {
    pub fn new(
        fine: Arc<FiniteGSpace>,
        coarse: Arc<FiniteGSpace>,
        point_map: Vec<usize>,
        group_map: GroupHom,
    ) -> Result<Projection> {
        if **group_map.source() != **fine.group() || **group_map.target() != **coarse.group() {
            return Err(Error::Shape("group map does not match the spaces".into()));
        }
        if point_map.len() != fine.n_points() {
            return Err(Error::Shape("point map has the wrong length".into()));
        }
        if let Some(&bad) = point_map.iter().find(|&&y| y >= coarse.n_points()) {
            return Err(Error::IndexOutOfRange { index: bad, bound: coarse.n_points() });
        }
        if !group_map.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let mut fibers = vec![Vec::new(); coarse.n_points()];
        for (x, &y) in point_map.iter().enumerate() {
            fibers[y].push(x);
        }
        if fibers.iter().any(Vec::is_empty) {
            return Err(Error::NotSurjective);
        }
        for &s in fine.group().generator_indices() {
            for x in 0..fine.n_points() {
                if point_map[fine.act(s, x)] != coarse.act(group_map.apply(s), point_map[x]) {
                    return Err(Error::NotEquivariant { element: s, point: x });
                }
            }
        }
        let kernel = group_map.kernel();
        let kernel_generators = fine.group().subgroup_generators(&kernel);
        let lifts = group_map.least_lifts();
        Ok(Projection { fine, coarse, point_map, group_map, kernel, kernel_generators, fibers, lifts })
    }

    pub fn identity(space: &Arc<FiniteGSpace>) -> Projection {
        Projection::new(
            Arc::clone(space),
            Arc::clone(space),
            (0..space.n_points()).collect(),
            GroupHom::identity(space.group()),
        )
        .expect("identity projection")
    }

    pub fn fine(&self) -> &Arc<FiniteGSpace> {
        &self.fine
    }

    pub fn coarse(&self) -> &Arc<FiniteGSpace> {
        &self.coarse
    }

    pub fn map_point(&self, x: usize) -> usize {
        self.point_map[x]
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    pub fn group_map(&self) -> &GroupHom {
        &self.group_map
    }

    /// Kernel of the group map, a subgroup of the fine group.
    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn kernel_generators(&self) -> &[usize] {
        &self.kernel_generators
    }

    /// Sorted preimage of a coarse point.
    pub fn fiber(&self, y: usize) -> &[usize] {
        &self.fibers[y]
    }

    /// Least fine element mapping to the coarse element `h`.
    pub fn lift(&self, h: usize) -> usize {
        self.lifts[h]
    }
}

/// A tower of finite groups joined by surjections `G_{k+1} -> G_k`.
#[derive(Clone, Debug)]
pub struct GroupTower {
    levels: Vec<Arc<FiniteGroup>>,
    steps: Vec<GroupHom>,
    projections: Vec<GroupHom>,
    kernels: Vec<Subgroup>,
}

impl GroupTower {
    /// `steps[k]` maps level `k + 1` onto level `k`.
    pub fn new(levels: Vec<Arc<FiniteGroup>>, steps: Vec<GroupHom>) -> Result<GroupTower> {
        if levels.is_empty() || steps.len() + 1 != levels.len() {
            return Err(Error::Shape("a tower of n levels needs n - 1 steps".into()));
        }
        for (k, step) in steps.iter().enumerate() {
            if **step.source() != *levels[k + 1] || **step.target() != *levels[k] {
                return Err(Error::Shape(format!("step {k} does not join levels {} and {k}", k + 1)));
            }
            if !step.is_surjective() {
                return Err(Error::NotSurjective);
            }
            let src = step.source();
            let tgt = step.target();
            for &s in src.generator_indices() {
                for a in 0..src.order() {
                    if step.apply(src.mul(s, a)) != tgt.mul(step.apply(s), step.apply(a)) {
                        return Err(Error::NotHomomorphism(s, a));
                    }
                }
            }
        }
        let top = levels.len() - 1;
        let mut projections = vec![GroupHom::identity(&levels[top])];
        for k in (0..top).rev() {
            let next = steps[k].compose(projections.last().expect("nonempty"))?;
            projections.push(next);
        }
        projections.reverse();
        let kernels = projections.iter().map(GroupHom::kernel).collect();
        Ok(GroupTower { levels, steps, projections, kernels })
    }

    /// The tower `G/N_0 <- G/N_1 <- ... <- G/N_K` for a decreasing chain of normal subgroups ending in 1.
    pub fn from_normal_chain(group: &Arc<FiniteGroup>, chain: &[Subgroup]) -> Result<GroupTower> {
        if chain.is_empty() || !chain.last().expect("nonempty").is_trivial() {
            return Err(Error::Shape("normal chain must end in the trivial subgroup".into()));
        }
        for w in chain.windows(2) {
            if !w[1].is_subset_of(&w[0]) {
                return Err(Error::Shape("normal chain must decrease".into()));
            }
        }
        let top = chain.len() - 1;
        let mut levels = Vec::new();
        let mut projs = Vec::new();
        for n in &chain[..top] {
            let (q, hom) = quotient(group, n)?;
            levels.push(q);
            projs.push(hom);
        }
        levels.push(Arc::clone(group));
        projs.push(GroupHom::identity(group));
        let mut steps = Vec::new();
        for k in 0..top {
            let lifts = projs[k + 1].least_lifts();
            let images = lifts.iter().map(|&g| projs[k].apply(g)).collect();
            steps.push(GroupHom::new(Arc::clone(&levels[k + 1]), Arc::clone(&levels[k]), images)?);
        }
        GroupTower::new(levels, steps)
    }

    /// A tower through a longest chain of normal subgroups, shortened to `depth` steps
    /// by keeping the subgroups closest to the top.
    pub fn normal_series(group: &Arc<FiniteGroup>, depth: Option<usize>, cap: usize) -> Result<GroupTower> {
        let normals: Vec<Subgroup> = group.all_subgroups(cap)?.into_iter().filter(|h| group.is_normal(h)).collect();
        // longest chain from G down to 1, by dynamic programming over containment
        let n = normals.len();
        let mut best: Vec<(usize, Option<usize>)> = vec![(0, None); n];
        for i in 0..n {
            for j in 0..i {
                if normals[j].order() < normals[i].order()
                    && normals[j].is_subset_of(&normals[i])
                    && best[j].0 + 1 > best[i].0
                {
                    best[i] = (best[j].0 + 1, Some(j));
                }
            }
        }
        let whole = normals.iter().position(|h| h.order() == group.order()).expect("G is normal");
        let mut chain = vec![normals[whole].clone()];
        let mut cur = whole;
        while let Some(prev) = best[cur].1 {
            chain.push(normals[prev].clone());
            cur = prev;
        }
        let length = chain.len() - 1;
        let depth = depth.unwrap_or(length);
        if depth > length {
            return Err(Error::Shape(format!("group admits normal series of length at most {length}")));
        }
        let mut picked = vec![chain[0].clone()];
        picked.extend(chain[length + 1 - depth..].iter().cloned());
        if depth == 0 {
            picked = vec![group.trivial_subgroup()];
        }
        GroupTower::from_normal_chain(group, &picked)
    }

    /// `K`, the index of the top level.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Arc<FiniteGroup>] {
        &self.levels
    }

    pub fn level(&self, k: usize) -> &Arc<FiniteGroup> {
        &self.levels[k]
    }

    pub fn top(&self) -> &Arc<FiniteGroup> {
        &self.levels[self.depth()]
    }

    /// `G_{k+1} -> G_k`.
    pub fn step(&self, k: usize) -> &GroupHom {
        &self.steps[k]
    }

    pub fn steps(&self) -> &[GroupHom] {
        &self.steps
    }

    /// `p_k: G_K -> G_k`.
    pub fn projection(&self, k: usize) -> &GroupHom {
        &self.projections[k]
    }

    /// `N_k = ker p_k`, a normal subgroup of the top level.
    pub fn kernel(&self, k: usize) -> &Subgroup {
        &self.kernels[k]
    }
}

/// A compatible choice of one point per level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointThread {
    pub coords: Vec<usize>,
}

impl PointThread {
    pub fn top(&self) -> usize {
        *self.coords.last().expect("threads are nonempty")
    }
}

/// The basic open `p_k^-1{x}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicOpen {
    pub level: usize,
    pub point: usize,
    /// Top-level points inside the open.
    pub members: Vec<usize>,
}

impl BasicOpen {
    pub fn contains(&self, thread: &PointThread) -> bool {
        thread.coords[self.level] == self.point
    }
}

#[derive(Clone, Debug)]
pub struct SpaceTower {
    groups: GroupTower,
    levels: Vec<Arc<FiniteGSpace>>,
    steps: Vec<Projection>,
    projections: Vec<Projection>,
    inflated: Vec<Arc<FiniteGSpace>>,
    inflated_steps: Vec<Projection>,
    deflations: Vec<Projection>,
    expansions: Vec<Projection>,
}

impl SpaceTower {
    /// `steps[k]` maps the points of level `k + 1` onto level `k`.
    pub fn new(groups: GroupTower, levels: Vec<Arc<FiniteGSpace>>, steps: Vec<Vec<usize>>) -> Result<SpaceTower> {
        let depth = groups.depth();
        if levels.len() != depth + 1 || steps.len() != depth {
            return Err(Error::Shape("space tower shape does not match the group tower".into()));
        }
        for (k, x) in levels.iter().enumerate() {
            if **x.group() != **groups.level(k) {
                return Err(Error::Shape(format!("space at level {k} has the wrong group")));
            }
        }
        let step_projs: Vec<Projection> = steps
            .into_iter()
            .enumerate()
            .map(|(k, map)| {
                Projection::new(Arc::clone(&levels[k + 1]), Arc::clone(&levels[k]), map, groups.step(k).clone())
            })
            .collect::<Result<_>>()?;
        let top = &levels[depth];
        let mut point_maps: Vec<Vec<usize>> = vec![(0..top.n_points()).collect()];
        for k in (0..depth).rev() {
            let prev = point_maps.last().expect("nonempty");
            point_maps.push(prev.iter().map(|&x| step_projs[k].map_point(x)).collect());
        }
        point_maps.reverse();
        let projections: Vec<Projection> = point_maps
            .iter()
            .enumerate()
            .map(|(k, map)| {
                Projection::new(Arc::clone(top), Arc::clone(&levels[k]), map.clone(), groups.projection(k).clone())
            })
            .collect::<Result<_>>()?;
        let mut inflated: Vec<Arc<FiniteGSpace>> =
            (0..depth).map(|k| levels[k].inflate(groups.projection(k)).map(Arc::new)).collect::<Result<_>>()?;
        inflated.push(Arc::clone(top));
        let top_id = GroupHom::identity(groups.top());
        let inflated_steps = (0..depth)
            .map(|k| {
                Projection::new(
                    Arc::clone(&inflated[k + 1]),
                    Arc::clone(&inflated[k]),
                    step_projs[k].point_map().to_vec(),
                    top_id.clone(),
                )
            })
            .collect::<Result<_>>()?;
        let deflations = (0..=depth)
            .map(|k| {
                Projection::new(
                    Arc::clone(&inflated[k]),
                    Arc::clone(&levels[k]),
                    (0..levels[k].n_points()).collect(),
                    groups.projection(k).clone(),
                )
            })
            .collect::<Result<_>>()?;
        let expansions = (0..=depth)
            .map(|k| Projection::new(Arc::clone(top), Arc::clone(&inflated[k]), point_maps[k].clone(), top_id.clone()))
            .collect::<Result<_>>()?;
        Ok(SpaceTower {
            groups,
            levels,
            steps: step_projs,
            projections,
            inflated,
            inflated_steps,
            deflations,
            expansions,
        })
    }

    /// Level `k` is the space of subgroups of `G_k`; steps send `H` to its image.
    pub fn subgroup_space_tower(groups: GroupTower, cap: usize) -> Result<SpaceTower> {
        let levels: Vec<Arc<FiniteGSpace>> = groups
            .levels()
            .iter()
            .map(|g| FiniteGSpace::subgroup_space(Arc::clone(g), cap).map(Arc::new))
            .collect::<Result<_>>()?;
        let steps = (0..groups.depth())
            .map(|k| {
                let fine = levels[k + 1].subgroup_points().expect("subgroup space");
                let coarse = levels[k].subgroup_points().expect("subgroup space");
                let index: HashMap<&Subgroup, usize> = coarse.iter().enumerate().map(|(i, h)| (h, i)).collect();
                fine.iter().map(|h| index[&groups.step(k).image_of(h)]).collect()
            })
            .collect();
        SpaceTower::new(groups, levels, steps)
    }

    pub fn groups(&self) -> &GroupTower {
        &self.groups
    }

    pub fn depth(&self) -> usize {
        self.groups.depth()
    }

    pub fn level(&self, k: usize) -> &Arc<FiniteGSpace> {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Arc<FiniteGSpace>] {
        &self.levels
    }

    pub fn top(&self) -> &Arc<FiniteGSpace> {
        &self.levels[self.depth()]
    }

    /// `X_{k+1} -> X_k` over `G_{k+1} -> G_k`.
    pub fn step(&self, k: usize) -> &Projection {
        &self.steps[k]
    }

    /// `X_K -> X_k` over `G_K -> G_k`.
    pub fn projection(&self, k: usize) -> &Projection {
        &self.projections[k]
    }

    /// `X_k` with `G_K` acting through `p_k`.
    pub fn inflated(&self, k: usize) -> &Arc<FiniteGSpace> {
        &self.inflated[k]
    }

    /// `X_{k+1} -> X_k`, both with `G_K` acting.
    pub fn inflated_step(&self, k: usize) -> &Projection {
        &self.inflated_steps[k]
    }

    /// Identity on the points of `X_k`, `p_k` on groups.
    pub fn deflation(&self, k: usize) -> &Projection {
        &self.deflations[k]
    }

    /// `p_k` on points, identity on `G_K`.
    pub fn expansion(&self, k: usize) -> &Projection {
        &self.expansions[k]
    }

    pub fn is_subgroup_tower(&self) -> bool {
        self.levels.iter().all(|x| x.subgroup_points().is_some())
    }

    pub fn point_threads(&self) -> Vec<PointThread> {
        (0..self.top().n_points())
            .map(|x| PointThread { coords: (0..=self.depth()).map(|k| self.projections[k].map_point(x)).collect() })
            .collect()
    }

    pub fn basic_open(&self, level: usize, point: usize) -> Result<BasicOpen> {
        if level > self.depth() {
            return Err(Error::IndexOutOfRange { index: level, bound: self.depth() + 1 });
        }
        if point >= self.levels[level].n_points() {
            return Err(Error::IndexOutOfRange { index: point, bound: self.levels[level].n_points() });
        }
        Ok(BasicOpen { level, point, members: self.projections[level].fiber(point).to_vec() })
    }

    /// `stab(p_k^-1{H}) = p_k^-1(N_{G_k} H)`, for subgroup-space towers.
    pub fn open_stabilizer(&self, open: &BasicOpen) -> Result<Subgroup> {
        let subgroups = self.levels[open.level].subgroup_points().ok_or(Error::WrongBase)?;
        let g_k = self.groups.level(open.level);
        let normalizer = g_k.normalizer(&subgroups[open.point]);
        Ok(self.groups.projection(open.level).preimage(&normalizer))
    }

    /// Graphviz rendering: one cluster per level, step maps as edges.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tower {\n  rankdir=BT;\n");
        for (k, x) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label=\"level {k} (|G|={})\";", x.group().order());
            for p in 0..x.n_points() {
                let _ = writeln!(out, "    l{k}_{p} [label=\"{}\"];", x.labels()[p].replace('"', "'"));
            }
            out.push_str("  }\n");
        }
        for (k, step) in self.steps.iter().enumerate() {
            for p in 0..step.fine().n_points() {
                let _ = writeln!(out, "  l{}_{p} -> l{k}_{};", k + 1, step.map_point(p));
            }
        }
        out.push_str("}\n");
        out
    }
}
