//! Finite permutation groups given by generators.

mod chain;
mod named;

use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};
use num_bigint::BigUint;

pub use chain::{ChainElements, StabChain};

use crate::{Error, Perm, Result};

/// Upper bound on the number of group elements any routine may materialize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_elements: usize,
}

impl Budget {
    pub const DEFAULT_MAX_ELEMENTS: usize = 10_000_000;

    pub fn new(max_elements: usize) -> Budget {
        Budget { max_elements }
    }

    fn check(&self, count: &BigUint) -> Result<usize> {
        match usize::try_from(count) {
            Ok(n) if n <= self.max_elements => Ok(n),
            _ => Err(Error::BudgetExceeded { budget: self.max_elements }),
        }
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::new(Budget::DEFAULT_MAX_ELEMENTS)
    }
}

/// A permutation group on `{0, .., degree-1}` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
}

impl PermGroup {
    /// Identity generators are dropped and duplicates removed.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<PermGroup> {
        if degree == 0 {
            return Err(Error::Precondition("domain must have at least one point".into()));
        }
        let mut kept: Vec<Perm> = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
            if !g.is_identity() && !kept.contains(&g) {
                kept.push(g);
            }
        }
        Ok(PermGroup { degree, gens: kept })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup { degree, gens: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn stab_chain(&self) -> StabChain {
        StabChain::new(self.degree, &self.gens, &[])
    }

    /// Exact order via Schreier–Sims.
    pub fn order(&self) -> BigUint {
        self.stab_chain().order()
    }

    /// Order as a machine integer, when it fits.
    pub fn order_u128(&self) -> Option<u128> {
        u128::try_from(&self.order()).ok()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.stab_chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let chain = other.stab_chain();
        self.gens.iter().all(|g| chain.contains(g))
    }

    /// Same degree and same set of elements.
    pub fn same_group(&self, other: &PermGroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// The subgroup generated by both generator sets.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// All elements by breadth-first closure over the generators, sorted.
    pub fn elements(&self, budget: Budget) -> Result<Vec<Perm>> {
        budget.check(&self.order())?;
        let mut seen: HashSet<Perm> = HashSet::new();
        let id = self.identity();
        seen.insert(id.clone());
        let mut frontier = alloc::vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &self.gens {
                    let h = s.compose(g);
                    if !seen.contains(&h) {
                        if seen.len() >= budget.max_elements {
                            return Err(Error::BudgetExceeded { budget: budget.max_elements });
                        }
                        seen.insert(h.clone());
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Perm> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut seen = alloc::vec![false; self.degree];
        seen[x] = true;
        let mut orbit = alloc::vec![x];
        let mut i = 0;
        while i < orbit.len() {
            let y = orbit[i];
            for g in &self.gens {
                let z = g.apply(y);
                if !seen[z] {
                    seen[z] = true;
                    orbit.push(z);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbit partition, each orbit sorted, orbits ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = alloc::vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !assigned[x] {
                let orbit = self.orbit(x);
                for &y in &orbit {
                    assigned[y] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    /// Transitivity on ordered `k`-tuples of distinct points, checked on the
    /// induced action on those tuples.
    pub fn is_k_transitive(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if k > self.degree {
            return false;
        }
        let tuples = distinct_tuples(self.degree, k);
        let index: HashMap<&[usize], usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
        let mut seen = alloc::vec![false; tuples.len()];
        seen[0] = true;
        let mut queue = alloc::vec![0usize];
        let mut reached = 1;
        let mut image = alloc::vec![0usize; k];
        while let Some(t) = queue.pop() {
            for g in &self.gens {
                for (slot, &x) in image.iter_mut().zip(&tuples[t]) {
                    *slot = g.apply(x);
                }
                let j = index[image.as_slice()];
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    queue.push(j);
                }
            }
        }
        reached == tuples.len()
    }

    /// `Stab_G(x)`, generated by the Schreier generators kept by the
    /// stabilizer chain with `x` as first base point.
    pub fn point_stabilizer(&self, x: usize) -> PermGroup {
        self.pointwise_stabilizer(&[x])
    }

    pub fn pointwise_stabilizer(&self, points: &[usize]) -> PermGroup {
        let chain = StabChain::new(self.degree, &self.gens, points);
        let gens = chain.stabilizer_generators(points.len()).to_vec();
        PermGroup::new(self.degree, gens).expect("stabilizer generators share the degree")
    }

    pub fn is_generated_by_point_stabilizers(&self) -> bool {
        let mut gens = Vec::new();
        for x in 0..self.degree {
            gens.extend(self.point_stabilizer(x).gens);
        }
        let sub = PermGroup::new(self.degree, gens).unwrap();
        sub.order() == self.order()
    }

    /// Smallest subgroup containing `seeds` that is normalized by `self`.
    pub fn normal_closure(&self, seeds: &[Perm]) -> PermGroup {
        let mut gens: Vec<Perm> = Vec::new();
        let mut chain = StabChain::new(self.degree, &[], &[]);
        for s in seeds {
            if chain.add_generator(s) {
                gens.push(s.clone());
            }
        }
        let mut i = 0;
        while i < gens.len() {
            for g in &self.gens {
                let c = gens[i].conjugate_by(g);
                if chain.add_generator(&c) {
                    gens.push(c);
                }
            }
            i += 1;
        }
        PermGroup::new(self.degree, gens).unwrap()
    }

    /// `D(G)`: normal closure of the commutators of the generators.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut seeds = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            for h in &self.gens[i + 1..] {
                seeds.push(g.commutator(h));
            }
        }
        self.normal_closure(&seeds)
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup().order() == self.order()
    }

    pub fn commutator_width(&self, budget: Budget) -> Result<usize> {
        Ok(self.commutator_layers(budget)?.len() - 1)
    }

    /// Sizes of `[G,G]^{*k}` for `k = 0, 1, ..` up to the first `k` where the
    /// set equals `D(G)`. The commutator width is the last index.
    ///
    /// Every `[G,G]^{*k}` is a union of conjugacy classes, so the search keeps
    /// class-indexed bitmaps and multiplies only class representatives.
    pub fn commutator_layers(&self, budget: Budget) -> Result<Vec<usize>> {
        let derived_order = self.derived_subgroup().order();
        let classes = ConjugacyClasses::new(self, budget)?;
        let n = classes.elements.len();
        let mut sizes = alloc::vec![1usize];
        if derived_order == BigUint::from(1u32) {
            return Ok(sizes);
        }
        let target = usize::try_from(&derived_order).expect("derived subgroup fits the budget");

        // commutator set: [r, h] for class representatives r, closed under conjugation
        let mut in_commutators = alloc::vec![false; classes.reps.len()];
        for &r in &classes.reps {
            let g = &classes.elements[r];
            for h in &classes.elements {
                let c = classes.index[&g.commutator(h)];
                in_commutators[classes.class_of[c]] = true;
            }
        }
        let commutators: Vec<usize> =
            (0..n).filter(|&e| in_commutators[classes.class_of[e]]).collect();

        let mut layer = in_commutators.clone();
        loop {
            let size = classes.size_of(&layer);
            sizes.push(size);
            if size == target {
                return Ok(sizes);
            }
            let mut next = layer.clone();
            for (ci, &present) in layer.iter().enumerate() {
                if !present {
                    continue;
                }
                let r = &classes.elements[classes.reps[ci]];
                for &c in &commutators {
                    let p = classes.index[&r.compose(&classes.elements[c])];
                    next[classes.class_of[p]] = true;
                }
            }
            if next == layer {
                unreachable!("commutator products stopped growing before reaching D(G)");
            }
            layer = next;
        }
    }

    /// A fixed-point-free element, if the group has one. Elements are scanned in
    /// the stabilizer chain's deterministic order.
    pub fn find_derangement(&self) -> Option<Perm> {
        if self.degree == 1 {
            return None;
        }
        self.stab_chain().elements().find(|g| g.is_derangement())
    }

    pub fn symmetric(n: usize) -> PermGroup {
        named::symmetric(n)
    }

    pub fn alternating(n: usize) -> PermGroup {
        named::alternating(n)
    }

    pub fn cyclic(n: usize) -> PermGroup {
        named::cyclic(n)
    }

    /// Resolves `"Sym(d)"`, `"Alt(d)"`, `"Cyclic(d)"`.
    pub fn from_name(name: &str) -> Result<PermGroup> {
        named::from_name(name)
    }
}

/// Every element of a group, indexed, with its conjugacy class.
struct ConjugacyClasses {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
    sizes: Vec<usize>,
}

impl ConjugacyClasses {
    fn new(group: &PermGroup, budget: Budget) -> Result<ConjugacyClasses> {
        let elements = group.elements(budget)?;
        let index: HashMap<Perm, usize> =
            elements.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let mut class_of = alloc::vec![usize::MAX; elements.len()];
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        let inverses: Vec<Perm> = group.gens.iter().map(Perm::inverse).collect();
        for start in 0..elements.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let cid = reps.len();
            reps.push(start);
            class_of[start] = cid;
            let mut stack = alloc::vec![start];
            let mut size = 1;
            while let Some(e) = stack.pop() {
                for (g, gi) in group.gens.iter().zip(&inverses) {
                    let c = index[&g.compose(&elements[e]).compose(gi)];
                    if class_of[c] == usize::MAX {
                        class_of[c] = cid;
                        size += 1;
                        stack.push(c);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(ConjugacyClasses { elements, index, class_of, reps, sizes })
    }

    fn size_of(&self, mask: &[bool]) -> usize {
        mask.iter().zip(&self.sizes).filter(|(m, _)| **m).map(|(_, s)| s).sum()
    }
}

fn distinct_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = alloc::vec![false; n];
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(n, k, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, k, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests;
