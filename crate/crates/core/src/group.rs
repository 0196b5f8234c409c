//! Finite permutation groups stored by exhaustive enumeration.
//!
//! Elements are sorted lexicographically by their image arrays, so element
//! indices are canonical for a given element set and index 0 is always the
//! identity. Subgroups are sorted sets of element indices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Above this order products are computed on demand instead of tabulated.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[x] = true;
        }
        if n == 0 {
            return Err(Error::InvalidPermutation(images));
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    /// The cycle `(c0 c1 ... ck)` on `degree` points.
    pub fn cycle(degree: usize, cycle: &[usize]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for (i, &c) in cycle.iter().enumerate() {
            if c >= degree {
                return Err(Error::InvalidPermutation(cycle.to_vec()));
            }
            images[c] = cycle[(i + 1) % cycle.len()];
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut any = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.images[x];
            }
            let parts: Vec<String> = cyc.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A subgroup as a sorted set of element indices of its parent group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// Position of `g` among the members, which is also its index in [`FiniteGroup::subgroup_group`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup { members: self.members.iter().copied().filter(|&g| other.contains(g)).collect() }
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

/// Left cosets `gH` ordered by their least element.
#[derive(Clone, Debug)]
pub struct Cosets {
    /// Least element of each coset.
    pub reps: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// Coset index of every group element.
    pub coset_of: Vec<usize>,
}

impl Cosets {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    generator_indices: Vec<usize>,
    elements: Vec<Permutation>,
    base: Vec<usize>,
    lookup: HashMap<Vec<usize>, usize>,
    table: Option<Vec<u32>>,
    inverses: Vec<usize>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("degree", &self.degree)
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Closes `gens` under composition, failing once more than `cap` elements appear.
    pub fn generate(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<FiniteGroup> {
        if cap == 0 {
            return Err(Error::CapExceeded { cap });
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        if degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let id = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for s in &gens {
                let p = s.compose(&e);
                if !seen.contains(&p) {
                    seen.insert(p.clone());
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    queue.push_back(p);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted_elements(degree, gens, elements))
    }

    fn from_sorted_elements(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> FiniteGroup {
        let base = find_base(degree, &elements);
        let lookup: HashMap<Vec<usize>, usize> =
            elements.iter().enumerate().map(|(i, e)| (base.iter().map(|&b| e.apply(b)).collect(), i)).collect();
        let mut group = FiniteGroup {
            degree,
            generators,
            generator_indices: Vec::new(),
            elements,
            base,
            lookup,
            table: None,
            inverses: Vec::new(),
        };
        group.generator_indices = group.generators.iter().map(|g| group.index_of(g).expect("generator")).collect();
        let n = group.elements.len();
        if n <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(n * n);
            for a in 0..n {
                for b in 0..n {
                    table.push(group.mul_uncached(a, b) as u32);
                }
            }
            group.table = Some(table);
        }
        group.inverses = (0..n).map(|a| group.index_of(&group.elements[a].inverse()).expect("inverse")).collect();
        group
    }

    pub fn trivial() -> FiniteGroup {
        Self::generate(1, Vec::new(), 1).expect("trivial group")
    }

    /// `Z/n` acting regularly on `n` points.
    pub fn cyclic(n: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Parse("cyclic group of order 0".into()));
        }
        let gens = if n == 1 { Vec::new() } else { vec![Permutation::cycle(n, &(0..n).collect::<Vec<_>>())?] };
        Self::generate(n, gens, n)
    }

    pub fn symmetric(n: usize, cap: usize) -> Result<FiniteGroup> {
        if n == 0 {
            return Err(Error::Parse("symmetric group on 0 letters".into()));
        }
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::cycle(n, &[0, 1])?);
        }
        if n >= 3 {
            gens.push(Permutation::cycle(n, &(0..n).collect::<Vec<_>>())?);
        }
        Self::generate(n, gens, cap)
    }

    /// The symmetries of a regular `n`-gon, order `2n`, for `n >= 3`.
    pub fn dihedral(n: usize) -> Result<FiniteGroup> {
        if n < 3 {
            return Err(Error::Parse(format!("dihedral group needs n >= 3, got {n}")));
        }
        let rot = Permutation::new((0..n).map(|i| (i + 1) % n).collect())?;
        let refl = Permutation::new((0..n).map(|i| (n - i) % n).collect())?;
        Self::generate(n, vec![rot, refl], 2 * n)
    }

    /// `A x B` acting on the disjoint union of the two point sets.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, cap: usize) -> Result<FiniteGroup> {
        let degree = a.degree + b.degree;
        let mut gens = Vec::new();
        for g in &a.generators {
            let mut im: Vec<usize> = g.images().to_vec();
            im.extend(a.degree..degree);
            gens.push(Permutation::new(im)?);
        }
        for g in &b.generators {
            let mut im: Vec<usize> = (0..a.degree).collect();
            im.extend(g.images().iter().map(|&x| x + a.degree));
            gens.push(Permutation::new(im)?);
        }
        Self::generate(degree, gens, cap)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Element indices of the generators, in generator order.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        if p.degree() != self.degree {
            return None;
        }
        let key: Vec<usize> = self.base.iter().map(|&b| p.apply(b)).collect();
        let i = *self.lookup.get(&key)?;
        (self.elements[i] == *p).then_some(i)
    }

    fn mul_uncached(&self, a: usize, b: usize) -> usize {
        let (pa, pb) = (&self.elements[a], &self.elements[b]);
        let key: Vec<usize> = self.base.iter().map(|&x| pa.apply(pb.apply(x))).collect();
        self.lookup[&key]
    }

    /// Index of `a ∘ b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.elements.len() + b] as usize,
            None => self.mul_uncached(a, b),
        }
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `g h g^-1`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generator_indices;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { members: (0..self.order()).collect() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { members: vec![0] }
    }

    /// Validates that `members` is closed under products and returns it as a subgroup.
    pub fn subgroup(&self, members: Vec<usize>) -> Result<Subgroup> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) || members.iter().any(|&m| m >= self.order()) {
            return Err(Error::NotSubgroup);
        }
        let sub = Subgroup { members };
        for &a in sub.members() {
            for &b in sub.members() {
                if !sub.contains(self.mul(a, b)) {
                    return Err(Error::NotSubgroup);
                }
            }
        }
        Ok(sub)
    }

    /// The subgroup generated by the given elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut members = vec![0usize];
        while let Some(e) = queue.pop_front() {
            for &s in gens {
                let p = self.mul(s, e);
                if !inside[p] {
                    inside[p] = true;
                    members.push(p);
                    queue.push_back(p);
                }
            }
        }
        members.sort_unstable();
        Subgroup { members }
    }

    /// A generating set chosen greedily in increasing index order.
    pub fn subgroup_generators(&self, h: &Subgroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for &m in h.members() {
            if !current.contains(m) {
                gens.push(m);
                current = self.generated(&gens);
                if current.order() == h.order() {
                    break;
                }
            }
        }
        gens
    }

    /// `H` as a group in its own right. Its element `i` is member `i` of `H`.
    pub fn subgroup_group(&self, h: &Subgroup) -> Arc<FiniteGroup> {
        let gens: Vec<Permutation> = self.subgroup_generators(h).iter().map(|&g| self.elements[g].clone()).collect();
        let elements: Vec<Permutation> = h.members().iter().map(|&g| self.elements[g].clone()).collect();
        Arc::new(Self::from_sorted_elements(self.degree, gens, elements))
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members().iter().map(|&x| self.conjugate(g, x)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.generator_indices.iter().all(|&g| h.members().iter().all(|&x| h.contains(self.conjugate(g, x))))
    }

    /// `{g : g H g^-1 = H}`.
    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let members =
            (0..self.order()).filter(|&g| h.members().iter().all(|&x| h.contains(self.conjugate(g, x)))).collect();
        Subgroup { members }
    }

    /// The largest normal subgroup inside `H`: the intersection of its conjugates.
    pub fn core(&self, h: &Subgroup) -> Subgroup {
        let mut core = h.clone();
        for g in 0..self.order() {
            core = core.intersection(&self.conjugate_subgroup(g, h));
        }
        core
    }

    pub fn left_cosets(&self, h: &Subgroup) -> Cosets {
        let n = self.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut members = Vec::new();
        for g in 0..n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let c = reps.len();
            let mut coset: Vec<usize> = h.members().iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                coset_of[x] = c;
            }
            reps.push(g);
            members.push(coset);
        }
        Cosets { reps, members, coset_of }
    }

    /// Every subgroup, sorted by order and then by member list.
    pub fn all_subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        if self.order() > cap {
            return Err(Error::CapExceeded { cap });
        }
        let trivial = self.trivial_subgroup();
        let mut found: HashSet<Subgroup> = HashSet::from([trivial.clone()]);
        let mut queue: VecDeque<(Subgroup, Vec<usize>)> = VecDeque::from([(trivial, Vec::new())]);
        while let Some((h, gens)) = queue.pop_front() {
            let mut inside = vec![false; self.order()];
            for &m in h.members() {
                inside[m] = true;
            }
            for (g, &skip) in inside.iter().enumerate() {
                if skip {
                    continue;
                }
                let mut more = gens.clone();
                more.push(g);
                let k = self.generated(&more);
                if !found.contains(&k) {
                    found.insert(k.clone());
                    queue.push_back((k, more));
                }
            }
        }
        let mut all: Vec<Subgroup> = found.into_iter().collect();
        all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
        Ok(all)
    }

    /// The Weyl group `N_G(K)/K` together with the normalizer it comes from.
    pub fn weyl_group(&self, k: &Subgroup) -> WeylGroup {
        let normalizer = self.normalizer(k);
        let normalizer_group = self.subgroup_group(&normalizer);
        let k_inside =
            Subgroup { members: k.members().iter().map(|&g| normalizer.position(g).expect("K <= N_G(K)")).collect() };
        let (weyl, projection) = quotient(&normalizer_group, &k_inside).expect("K normal in N_G(K)");
        WeylGroup { normalizer, normalizer_group, weyl, projection }
    }
}

fn find_base(degree: usize, elements: &[Permutation]) -> Vec<usize> {
    let n = elements.len();
    let mut base = Vec::new();
    let mut distinct = 1;
    for point in 0..degree {
        if distinct == n {
            break;
        }
        let mut trial = base.clone();
        trial.push(point);
        let keys: HashSet<Vec<usize>> = elements.iter().map(|e| trial.iter().map(|&b| e.apply(b)).collect()).collect();
        if keys.len() > distinct {
            distinct = keys.len();
            base = trial;
        }
    }
    base
}

/// `G/N` realized on the left cosets of `N`, with the projection.
pub fn quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    let cosets = g.left_cosets(n);
    let m = cosets.len();
    let action = |x: usize| -> Permutation {
        Permutation { images: (0..m).map(|c| cosets.coset_of[g.mul(x, cosets.reps[c])]).collect() }
    };
    let gens: Vec<Permutation> = g.generator_indices().iter().map(|&s| action(s)).collect();
    let q = Arc::new(FiniteGroup::generate(m, gens, m.max(1))?);
    let images: Vec<usize> =
        (0..g.order()).map(|x| q.index_of(&action(x)).expect("coset action lies in quotient")).collect();
    let hom = GroupHom { source: Arc::clone(g), target: Arc::clone(&q), images };
    Ok((q, hom))
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    /// `N_G(K)` as a subgroup of `G`.
    pub normalizer: Subgroup,
    pub normalizer_group: Arc<FiniteGroup>,
    pub weyl: Arc<FiniteGroup>,
    /// `N_G(K) -> W_G(K)`.
    pub projection: GroupHom,
}

/// A homomorphism recorded by the image of every source element.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom{:?}", self.images)
    }
}

impl GroupHom {
    /// Validates multiplicativity against every generator.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::Shape(format!(
                "hom has {} images for a group of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&x| x >= target.order()) {
            return Err(Error::IndexOutOfRange { index: bad, bound: target.order() });
        }
        if images[0] != 0 {
            return Err(Error::NotHomomorphism(0, 0));
        }
        for &s in source.generator_indices() {
            for a in 0..source.order() {
                if images[source.mul(s, a)] != target.mul(images[s], images[a]) {
                    return Err(Error::NotHomomorphism(s, a));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    /// Extends an assignment on the generators of `source`.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gen_images: &[usize],
    ) -> Result<Self> {
        let gens = source.generator_indices().to_vec();
        if gen_images.len() != gens.len() {
            return Err(Error::Shape("one image per generator required".into()));
        }
        if let Some(&bad) = gen_images.iter().find(|&&x| x >= target.order()) {
            return Err(Error::IndexOutOfRange { index: bad, bound: target.order() });
        }
        let mut images = vec![usize::MAX; source.order()];
        images[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (i, &s) in gens.iter().enumerate() {
                let sa = source.mul(s, a);
                let img = target.mul(gen_images[i], images[a]);
                if images[sa] == usize::MAX {
                    images[sa] = img;
                    queue.push_back(sa);
                } else if images[sa] != img {
                    return Err(Error::NotHomomorphism(s, a));
                }
            }
        }
        Ok(GroupHom { source, target, images })
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> GroupHom {
        GroupHom { source: Arc::clone(g), target: Arc::clone(g), images: (0..g.order()).collect() }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, g: usize) -> usize {
        self.images[g]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &x in &self.images {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup { members: (0..self.source.order()).filter(|&g| self.images[g] == 0).collect() }
    }

    pub fn image_of(&self, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members().iter().map(|&g| self.images[g]).collect();
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn preimage(&self, h: &Subgroup) -> Subgroup {
        Subgroup { members: (0..self.source.order()).filter(|&g| h.contains(self.images[g])).collect() }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom> {
        if *inner.target != *self.source {
            return Err(Error::Shape("composed homomorphisms do not match".into()));
        }
        Ok(GroupHom {
            source: Arc::clone(&inner.source),
            target: Arc::clone(&self.target),
            images: inner.images.iter().map(|&g| self.images[g]).collect(),
        })
    }

    /// Least element of each fiber, indexed by target element.
    pub fn least_lifts(&self) -> Vec<usize> {
        let mut lifts = vec![usize::MAX; self.target.order()];
        for (g, &img) in self.images.iter().enumerate() {
            if lifts[img] == usize::MAX {
                lifts[img] = g;
            }
        }
        lifts
    }

    /// Checks `f(ab) = f(a) f(b)` over all pairs.
    pub fn verify_exhaustive(&self) -> bool {
        let n = self.source.order();
        (0..n).all(|a| {
            (0..n).all(|b| self.images[self.source.mul(a, b)] == self.target.mul(self.images[a], self.images[b]))
        })
    }
}
