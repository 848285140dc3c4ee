//! Subgroups of a truncated `Aut(T_α)`, given by portrait generators.
//!
//! The leaf action is faithful on a truncation, so group computations run on
//! the induced permutation group of the deepest level. Stabilizers of
//! vertices that are not leaves use the action on `V_n ⊔ V_depth`.

use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::permgroup::StabChain;
use crate::tree::{DegreeSequence, Vertex};
use crate::{Budget, Error, Perm, PermGroup, Portrait, Result};

#[derive(Clone, Debug)]
pub struct TreeGroup {
    seq: DegreeSequence,
    gens: Vec<Portrait>,
    leaf: PermGroup,
}

impl TreeGroup {
    pub fn new(seq: &DegreeSequence, gens: Vec<Portrait>) -> Result<TreeGroup> {
        if gens.iter().any(|g| g.seq() != seq) {
            return Err(Error::TreeMismatch);
        }
        let n_leaves = seq.level_size(seq.depth());
        let leaf = PermGroup::new(n_leaves, gens.iter().map(Portrait::leaf_permutation).collect())?;
        let gens = leaf
            .generators()
            .iter()
            .map(|p| Portrait::from_leaf_permutation(seq, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeGroup { seq: seq.clone(), gens, leaf })
    }

    /// Wraps a group of leaf permutations; every generator must respect the tree.
    pub fn from_leaf_group(seq: &DegreeSequence, leaf: PermGroup) -> Result<TreeGroup> {
        let gens = leaf
            .generators()
            .iter()
            .map(|p| Portrait::from_leaf_permutation(seq, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(TreeGroup { seq: seq.clone(), gens, leaf })
    }

    /// The full automorphism group of the truncated tree.
    pub fn full(seq: &DegreeSequence) -> TreeGroup {
        let mut gens = Vec::new();
        for l in 0..seq.depth() {
            let d = seq.degree(l);
            for s in PermGroup::symmetric(d).generators() {
                for v in seq.level_vertices(l).unwrap() {
                    let local = Portrait::from_sections(s, &alloc::vec![Portrait::identity(&seq.tail(l + 1)); d])
                        .expect("sections share a tree");
                    gens.push(Portrait::graft(seq, &v, &local).unwrap());
                }
            }
        }
        TreeGroup::new(seq, gens).unwrap()
    }

    pub fn seq(&self) -> &DegreeSequence {
        &self.seq
    }

    pub fn depth(&self) -> usize {
        self.seq.depth()
    }

    pub fn generators(&self) -> &[Portrait] {
        &self.gens
    }

    /// The induced permutation group on the leaves.
    pub fn leaf_group(&self) -> &PermGroup {
        &self.leaf
    }

    pub fn order(&self) -> BigUint {
        self.leaf.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, p: &Portrait) -> bool {
        p.seq() == &self.seq && self.leaf.contains(&p.leaf_permutation())
    }

    pub fn identity(&self) -> Portrait {
        Portrait::identity(&self.seq)
    }

    pub fn same_group(&self, other: &TreeGroup) -> bool {
        self.seq == other.seq && self.leaf.same_group(&other.leaf)
    }

    pub fn is_subgroup_of(&self, other: &TreeGroup) -> bool {
        self.seq == other.seq && self.leaf.is_subgroup_of(&other.leaf)
    }

    pub fn join(&self, other: &TreeGroup) -> Result<TreeGroup> {
        if self.seq != other.seq {
            return Err(Error::TreeMismatch);
        }
        let leaf = self.leaf.join(&other.leaf)?;
        TreeGroup::from_leaf_group(&self.seq, leaf)
    }

    /// All elements, sorted by leaf permutation.
    pub fn elements(&self, budget: Budget) -> Result<Vec<Portrait>> {
        self.leaf
            .elements(budget)?
            .iter()
            .map(|p| Portrait::from_leaf_permutation(&self.seq, p))
            .collect()
    }

    /// The action on `V_n`.
    pub fn level_group(&self, n: usize) -> Result<PermGroup> {
        self.seq.check_level(n)?;
        let gens = self.gens.iter().map(|g| g.level_permutation(n)).collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.seq.level_size(n), gens)
    }

    pub fn is_spherically_transitive(&self) -> bool {
        (0..=self.depth()).all(|n| self.level_group(n).unwrap().is_transitive())
    }

    /// The image in the truncation to the first `m` levels.
    pub fn quotient(&self, m: usize) -> Result<TreeGroup> {
        let seq = self.seq.truncate(m)?;
        if m == 0 {
            return TreeGroup::new(&seq, Vec::new());
        }
        let gens = self.gens.iter().map(|g| g.truncate(m)).collect::<Result<Vec<_>>>()?;
        TreeGroup::new(&seq, gens)
    }

    /// The action on `V_n ⊔ V_depth`, level-`n` vertices first.
    fn combined(&self, p: &Portrait, n: usize) -> Perm {
        let images = p.level_images();
        let offset = self.seq.level_size(n);
        let mut out: Vec<usize> = images[n].clone();
        out.extend(images[self.depth()].iter().map(|&x| x + offset));
        Perm::from_images(out).expect("portrait images are bijections")
    }

    fn project_to_leaves(&self, n: usize, p: &Perm) -> Portrait {
        let offset = self.seq.level_size(n);
        let leaves: Vec<usize> = p.images().skip(offset).map(|x| x - offset).collect();
        Portrait::from_leaf_permutation(&self.seq, &Perm::from_images(leaves).unwrap()).unwrap()
    }

    /// Stabilizer of every vertex in `fixed` (all on level `n`).
    fn vertex_stabilizer(&self, n: usize, fixed: &[Vertex]) -> TreeGroup {
        let degree = self.seq.level_size(n) + self.seq.level_size(self.depth());
        let gens: Vec<Perm> = self.gens.iter().map(|g| self.combined(g, n)).collect();
        let base: Vec<usize> = fixed.iter().map(|v| self.seq.rank(v)).collect();
        let chain = StabChain::new(degree, &gens, &base);
        let gens = chain
            .stabilizer_generators(base.len())
            .iter()
            .map(|p| self.project_to_leaves(n, p))
            .collect();
        TreeGroup::new(&self.seq, gens).unwrap()
    }

    /// `st_G(v)`.
    pub fn vertex_stabilizer_of(&self, v: &Vertex) -> Result<TreeGroup> {
        self.seq.check_vertex(v)?;
        Ok(self.vertex_stabilizer(v.level(), core::slice::from_ref(v)))
    }

    /// `st_G(n)`, the pointwise stabilizer of `V_n`.
    pub fn level_stabilizer(&self, n: usize) -> Result<TreeGroup> {
        self.seq.check_level(n)?;
        Ok(self.vertex_stabilizer(n, &self.seq.level_vertices(n)?))
    }

    /// `rist_G(v)`: the pointwise stabilizer of every leaf outside `T^v`.
    pub fn rigid_stabilizer(&self, v: &Vertex) -> Result<TreeGroup> {
        self.seq.check_vertex(v)?;
        let depth = self.depth();
        let inside = self.seq.descendants_at(v, depth);
        let outside: Vec<usize> = (0..self.seq.level_size(depth)).filter(|x| !inside.contains(x)).collect();
        let leaf = self.leaf.pointwise_stabilizer(&outside);
        TreeGroup::from_leaf_group(&self.seq, leaf)
    }

    /// `rist_G(n) = ⟨rist_G(v) : v ∈ V_n⟩`.
    pub fn rigid_level_stabilizer(&self, n: usize) -> Result<TreeGroup> {
        let mut gens = Vec::new();
        for v in self.seq.level_vertices(n)? {
            gens.extend(self.rigid_stabilizer(&v)?.gens);
        }
        TreeGroup::new(&self.seq, gens)
    }

    /// Some `g ∈ G` with `g(v) = w`, if one exists.
    pub fn transporter(&self, v: &Vertex, w: &Vertex) -> Result<Option<Portrait>> {
        self.seq.check_vertex(v)?;
        self.seq.check_vertex(w)?;
        if v.level() != w.level() {
            return Ok(None);
        }
        let n = v.level();
        let degree = self.seq.level_size(n) + self.seq.level_size(self.depth());
        let gens: Vec<Perm> = self.gens.iter().map(|g| self.combined(g, n)).collect();
        let chain = StabChain::new(degree, &gens, &[self.seq.rank(v)]);
        Ok(chain.representative(0, self.seq.rank(w)).map(|u| self.project_to_leaves(n, u)))
    }

    /// Sections at `v` of the elements of `st_G(v)`, as a group on `T^v`.
    pub fn sections_at(&self, v: &Vertex) -> Result<TreeGroup> {
        let stab = self.vertex_stabilizer_of(v)?;
        let gens = stab.gens.iter().map(|g| g.section(v)).collect::<Result<Vec<_>>>()?;
        let seq = self.seq.tail(v.level());
        if seq.depth() == 0 {
            return Err(Error::LeafVertex);
        }
        TreeGroup::new(&seq, gens)
    }

    pub fn derived_subgroup(&self) -> TreeGroup {
        TreeGroup::from_leaf_group(&self.seq, self.leaf.derived_subgroup()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn aut(degrees: &[usize]) -> TreeGroup {
        TreeGroup::full(&DegreeSequence::new(degrees.to_vec()).unwrap())
    }

    /// Brute force: filter all elements of `g` by a predicate on portraits.
    fn filtered(g: &TreeGroup, keep: impl Fn(&Portrait) -> bool) -> usize {
        g.elements(Budget::default()).unwrap().iter().filter(|p| keep(p)).count()
    }

    #[test]
    fn full_group_orders() {
        assert_eq!(aut(&[2, 2]).order(), BigUint::from(8u32));
        assert_eq!(aut(&[2, 2, 2]).order(), BigUint::from(128u32));
        assert_eq!(aut(&[3, 2]).order(), BigUint::from(6u32 * 8));
        assert!(aut(&[2, 3, 2]).is_spherically_transitive());
    }

    #[test]
    fn stabilizers_agree_with_filtering() {
        let g = aut(&[2, 3, 2]);
        for n in 0..=3 {
            let st = g.level_stabilizer(n).unwrap();
            let level = g.seq().level_vertices(n).unwrap();
            let count = filtered(&g, |p| level.iter().all(|u| p.fixes(u).unwrap()));
            assert_eq!(st.order(), BigUint::from(count), "st({n})");
        }
        for v in g.seq().subtree_vertices(&Vertex::root()) {
            let rist = g.rigid_stabilizer(&v).unwrap();
            let count = filtered(&g, |p| {
                g.seq().level_vertices(3).unwrap().iter().all(|u| v.is_below(u) || p.fixes(u).unwrap())
            });
            assert_eq!(rist.order(), BigUint::from(count), "rist({v:?})");
        }
    }

    #[test]
    fn transporter_moves_vertices() {
        let g = aut(&[2, 3]);
        let t = g.transporter(&Vertex::from(vec![0, 2]), &Vertex::from(vec![1, 0])).unwrap().unwrap();
        assert_eq!(t.act(&Vertex::from(vec![0, 2])).unwrap(), Vertex::from(vec![1, 0]));
        assert!(g.contains(&t));
    }

    #[test]
    fn sections_of_full_group_are_full() {
        let g = aut(&[2, 2, 2]);
        let s = g.sections_at(&Vertex::from(vec![1])).unwrap();
        assert!(s.same_group(&aut(&[2, 2])));
    }

    #[test]
    fn quotient_truncates() {
        let g = aut(&[2, 2, 2]);
        assert!(g.quotient(2).unwrap().same_group(&aut(&[2, 2])));
        assert!(g.quotient(0).unwrap().is_trivial());
    }
}
