use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on the order of a constructed group.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// A set of element indices of some group, stored as a bitset. Ordered
/// lexicographically on the ascending member list, so sorting subgroups by
/// (order, member set) is the canonical element order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    blocks: Vec<u64>,
    len: usize,
}

impl Ord for ElemSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElemSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            blocks: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = ElemSet::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let (block, bit) = (i / 64, i % 64);
        let mask = 1u64 << bit;
        if self.blocks[block] & mask == 0 {
            self.blocks[block] |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_subset_of(&self, other: &ElemSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let blocks: Vec<u64> = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        let len = blocks.iter().map(|b| b.count_ones() as usize).sum();
        ElemSet { blocks, len }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            (0..64)
                .filter(move |bit| block & (1u64 << bit) != 0)
                .map(move |bit| bi * 64 + bit)
        })
    }
}

impl std::fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A conjugacy class: its members (ascending element indices) and a fixed
/// representative, the least member.
#[derive(Debug, Clone)]
pub struct ConjClass {
    pub rep: usize,
    pub members: Vec<usize>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A finite permutation group with its full element list, conjugacy classes
/// and exponent. Elements are kept in lexicographic order of their image
/// lists, so element index 0 is always the identity.
pub struct Group {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    inverse: Vec<usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
    exponent: usize,
    element_orders: Vec<usize>,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Group")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("classes", &self.classes.len())
            .finish()
    }
}

impl Group {
    /// Generates the closure of `generators` under composition.
    pub fn closure(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Arc<Group>> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::InvalidPermutation(format!(
                    "generator degree {} does not match stated degree {}",
                    g.degree(),
                    degree
                )));
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        queue.push_back(identity);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::OrderCapExceeded {
                            reached: seen.len() + 1,
                            cap,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Permutation> = seen.into_iter().collect();
        Ok(Arc::new(Group::from_sorted_elements(
            degree, generators, elements, "group",
        )))
    }

    /// Builds a group from a set of permutations already closed under
    /// composition. Used to re-close subgroups as standalone groups.
    pub fn from_closed_set(degree: usize, mut elements: Vec<Permutation>, name: &str) -> Arc<Group> {
        elements.sort();
        elements.dedup();
        let generators = minimal_generators(&elements);
        Arc::new(Group::from_sorted_elements(degree, generators, elements, name))
    }

    fn from_sorted_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
        name: &str,
    ) -> Group {
        let order = elements.len();
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let inverse: Vec<usize> = elements.iter().map(|p| index[&p.inverse()]).collect();
        let element_orders: Vec<usize> = elements.iter().map(|p| p.order()).collect();
        let exponent = element_orders.iter().fold(1usize, |acc, &o| lcm(acc, o));

        // Conjugacy classes as orbits under conjugation by the generators.
        let conjugators: Vec<&Permutation> = if generators.is_empty() {
            Vec::new()
        } else {
            generators.iter().collect()
        };
        let mut class_of = vec![usize::MAX; order];
        let mut classes: Vec<ConjClass> = Vec::new();
        for start in 0..order {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cls = classes.len();
            let mut members = vec![start];
            class_of[start] = cls;
            let mut frontier = vec![start];
            while let Some(x) = frontier.pop() {
                for g in &conjugators {
                    let conj = g.compose(&elements[x]).compose(&g.inverse());
                    let y = index[&conj];
                    if class_of[y] == usize::MAX {
                        class_of[y] = cls;
                        members.push(y);
                        frontier.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjClass { rep: members[0], members });
        }
        // Canonical class order: ascending size, then least representative.
        let mut perm: Vec<usize> = (0..classes.len()).collect();
        perm.sort_by_key(|&c| (classes[c].size(), classes[c].rep));
        let classes: Vec<ConjClass> = perm.iter().map(|&c| classes[c].clone()).collect();
        let mut class_of = vec![usize::MAX; order];
        for (c, cls) in classes.iter().enumerate() {
            for &m in &cls.members {
                class_of[m] = c;
            }
        }

        Group {
            name: name.to_string(),
            degree,
            generators,
            elements,
            index,
            inverse,
            classes,
            class_of,
            exponent,
            element_orders,
        }
    }

    pub fn with_name(self: &Arc<Self>, name: &str) -> Arc<Group> {
        Arc::new(Group::from_sorted_elements(
            self.degree,
            self.generators.clone(),
            self.elements.clone(),
            name,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn inverse_of(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.element_orders[i]
    }

    /// Product of elements by index: `mul(a, b) = a ∘ b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    /// Commutator `[a, b] = a⁻¹ b⁻¹ a b` by index.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ai = self.inverse[a];
        let bi = self.inverse[b];
        let p = self.elements[ai]
            .compose(&self.elements[bi])
            .compose(&self.elements[a])
            .compose(&self.elements[b]);
        self.index[&p]
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, elem: usize) -> usize {
        self.class_of[elem]
    }

    /// Class containing the inverses of the members of class `c`.
    pub fn inverse_class(&self, c: usize) -> usize {
        self.class_of[self.inverse[self.classes[c].rep]]
    }

    /// The subgroup generated by the given element indices.
    pub fn generated_subgroup(self: &Arc<Self>, generators: &[usize]) -> Subgroup {
        let mut members = ElemSet::empty(self.order());
        members.insert(0);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.mul(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup::from_closed_members(self, members)
    }

    /// All subgroup members as a `Subgroup` value.
    pub fn whole_subgroup(self: &Arc<Self>) -> Subgroup {
        let members = ElemSet::from_indices(self.order(), 0..self.order());
        Subgroup::from_closed_members(self, members)
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        let members = ElemSet::from_indices(self.order(), [0usize]);
        Subgroup::from_closed_members(self, members)
    }

    /// All normal subgroups, obtained by closing the set of normal closures
    /// of single conjugacy classes under pairwise join. Sorted by order,
    /// then by member set.
    pub fn normal_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let mut found: BTreeSet<ElemSet> = BTreeSet::new();
        for cls in &self.classes {
            let sub = self.generated_subgroup(&cls.members);
            found.insert(sub.members().clone());
        }
        loop {
            let snapshot: Vec<ElemSet> = found.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in snapshot.iter().enumerate() {
                for b in snapshot.iter().skip(i + 1) {
                    if a.is_subset_of(b) || b.is_subset_of(a) {
                        continue;
                    }
                    let gens: Vec<usize> = a.iter().chain(b.iter()).collect();
                    let join = self.generated_subgroup(&gens);
                    if !found.contains(join.members()) {
                        found.insert(join.members().clone());
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut subs: Vec<Subgroup> = found
            .into_iter()
            .map(|members| Subgroup::from_closed_members(self, members))
            .collect();
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.members().cmp(b.members()))
        });
        debug_assert!(subs.iter().all(|s| s.is_normal()));
        subs
    }

    /// Solvability, supersolvability and a chief series.
    pub fn classify(self: &Arc<Self>) -> Classification {
        // Solvable: the derived series reaches the trivial subgroup.
        let mut solvable = false;
        let mut current = self.whole_subgroup();
        loop {
            if current.order() == 1 {
                solvable = true;
                break;
            }
            let next = current.commutator_subgroup();
            if next.order() == current.order() {
                break;
            }
            current = next;
        }

        // Chief series: greedily extend by an inclusion-minimal normal
        // subgroup of the current quotient, scanning normal closures of
        // single classes. Ties: smallest order, then member set.
        let mut series = vec![self.trivial_subgroup()];
        while series.last().unwrap().order() < self.order() {
            let top = series.last().unwrap();
            let mut candidates: Vec<Subgroup> = Vec::new();
            for cls in &self.classes {
                if top.contains(cls.rep) {
                    continue;
                }
                let gens: Vec<usize> =
                    top.members().iter().chain(cls.members.iter().copied()).collect();
                let sub = self.generated_subgroup(&gens);
                candidates.push(sub);
            }
            let minimal: Vec<&Subgroup> = candidates
                .iter()
                .filter(|s| {
                    !candidates
                        .iter()
                        .any(|t| t.order() < s.order() && t.members().is_subset_of(s.members()))
                })
                .collect();
            let next = minimal
                .into_iter()
                .min_by(|a, b| {
                    a.order()
                        .cmp(&b.order())
                        .then_with(|| a.members().cmp(b.members()))
                })
                .expect("a proper extension exists below the whole group")
                .clone();
            series.push(next);
        }

        let supersolvable = series.windows(2).all(|w| {
            let factor = w[1].order() / w[0].order();
            is_prime(factor as u64)
        });

        Classification {
            solvable,
            supersolvable,
            chief_series: series,
        }
    }
}

/// Outcome of `Group::classify`.
#[derive(Debug, Clone)]
pub struct Classification {
    pub solvable: bool,
    pub supersolvable: bool,
    /// Ascending maximal chain of normal subgroups from 1 to G.
    pub chief_series: Vec<Subgroup>,
}

/// A subgroup of a parent group, as a set of element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<Group>,
    members: ElemSet,
    normal: bool,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Subgroup")
            .field("order", &self.order())
            .field("normal", &self.normal)
            .finish()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Wraps a member set known to be closed; computes the normality flag.
    pub(crate) fn from_closed_members(parent: &Arc<Group>, members: ElemSet) -> Subgroup {
        let normal = Self::members_normal(parent, &members);
        Subgroup {
            parent: parent.clone(),
            members,
            normal,
        }
    }

    /// Builds a subgroup from explicit member indices, verifying closure.
    pub fn from_members(parent: &Arc<Group>, indices: &[usize]) -> Result<Subgroup> {
        let members = ElemSet::from_indices(parent.order(), indices.iter().copied());
        if !members.contains(0) {
            return Err(Error::InvalidInput("member set lacks the identity".into()));
        }
        for a in members.iter() {
            if !members.contains(parent.inverse_of(a)) {
                return Err(Error::InvalidInput("member set not closed under inversion".into()));
            }
            for b in members.iter() {
                if !members.contains(parent.mul(a, b)) {
                    return Err(Error::InvalidInput(
                        "member set not closed under composition".into(),
                    ));
                }
            }
        }
        Ok(Subgroup::from_closed_members(parent, members))
    }

    fn members_normal(parent: &Arc<Group>, members: &ElemSet) -> bool {
        parent.generators().iter().all(|g| {
            let ginv = g.inverse();
            members.iter().all(|m| {
                let conj = g.compose(parent.element(m)).compose(&ginv);
                members.contains(parent.index_of(&conj).expect("closed group"))
            })
        })
    }

    pub fn parent(&self) -> &Arc<Group> {
        &self.parent
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, elem: usize) -> bool {
        self.members.contains(elem)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset_of(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        debug_assert!(Arc::ptr_eq(&self.parent, &other.parent));
        Subgroup::from_closed_members(&self.parent, self.members.intersection(&other.members))
    }

    /// The subgroup generated by all commutators `[a, b]` with a, b members.
    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut gens: BTreeSet<usize> = BTreeSet::new();
        let members: Vec<usize> = self.members.iter().collect();
        for &a in &members {
            for &b in &members {
                gens.insert(self.parent.commutator(a, b));
            }
        }
        let gens: Vec<usize> = gens.into_iter().collect();
        self.parent.generated_subgroup(&gens)
    }

    /// Re-closes this subgroup as a standalone group on the same points.
    pub fn as_group(&self, name: &str) -> Arc<Group> {
        let elements: Vec<Permutation> = self
            .members
            .iter()
            .map(|i| self.parent.element(i).clone())
            .collect();
        Group::from_closed_set(self.parent.degree(), elements, name)
    }
}

/// Least i ≥ 0 with the i-th derived subgroup of `k` contained in `n`;
/// the derived length of the quotient k/n.
pub fn derived_length_of_quotient(k: &Subgroup, n: &Subgroup) -> Result<usize> {
    if !Arc::ptr_eq(k.parent(), n.parent()) {
        return Err(Error::MismatchedGroups);
    }
    if !n.members().is_subset_of(k.members()) {
        return Err(Error::Containment(
            "denominator is not contained in the numerator".into(),
        ));
    }
    if !k.is_normal() || !n.is_normal() {
        return Err(Error::Precondition(
            "derived length of a quotient needs both subgroups normal in the parent".into(),
        ));
    }
    let mut current = k.clone();
    let mut i = 0usize;
    while !current.members().is_subset_of(n.members()) {
        let next = current.commutator_subgroup();
        if next.order() == current.order() {
            return Err(Error::NotSolvable(format!("subgroup of order {}", k.order())));
        }
        current = next;
        i += 1;
    }
    Ok(i)
}

/// The full derived series of `k` down to (and including) the perfect core.
pub fn derived_series(k: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![k.clone()];
    loop {
        let next = series.last().unwrap().commutator_subgroup();
        if next.order() == series.last().unwrap().order() {
            break;
        }
        series.push(next);
    }
    series
}

/// Greedy small generating set of a closed element list, for conjugacy
/// orbit computations on re-closed subgroups.
fn minimal_generators(elements: &[Permutation]) -> Vec<Permutation> {
    if elements.len() <= 1 {
        return Vec::new();
    }
    let degree = elements[0].degree();
    let all: BTreeSet<&Permutation> = elements.iter().collect();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closed: BTreeSet<Permutation> = BTreeSet::new();
    closed.insert(Permutation::identity(degree));
    for e in elements {
        if closed.contains(e) {
            continue;
        }
        gens.push(e.clone());
        // re-close
        let mut queue: Vec<Permutation> = closed.iter().cloned().collect();
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = x.compose(g);
                debug_assert!(all.contains(&y));
                if closed.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        if closed.len() == elements.len() {
            break;
        }
    }
    gens
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
