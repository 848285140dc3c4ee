//! Depth-`n` tree automorphisms stored as portraits.
//!
//! A portrait assigns to every internal vertex `u` a permutation `π_u` of its
//! children, and acts by `g(u·c) = g(u)·π_u(c)`. The permutation at `u` is the
//! root permutation of the section `g_u`.

use alloc::vec::Vec;

use crate::tree::{DegreeSequence, Vertex};
use crate::{Error, Perm, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Portrait {
    seq: DegreeSequence,
    /// `levels[l]` concatenates the child permutations of the level-`l`
    /// vertices in rank order, `degree(l)` entries each.
    levels: Vec<Vec<u32>>,
}

impl Portrait {
    pub fn identity(seq: &DegreeSequence) -> Portrait {
        let levels = (0..seq.depth())
            .map(|l| {
                let d = seq.degree(l);
                (0..seq.level_size(l)).flat_map(|_| 0..d as u32).collect()
            })
            .collect();
        Portrait { seq: seq.clone(), levels }
    }

    /// Builds a portrait from a rule giving the child permutation at each
    /// internal vertex.
    pub fn from_vertex_fn(
        seq: &DegreeSequence,
        mut rule: impl FnMut(&Vertex) -> Perm,
    ) -> Result<Portrait> {
        let mut p = Portrait::identity(seq);
        for l in 0..seq.depth() {
            for r in 0..seq.level_size(l) {
                let perm = rule(&seq.unrank(l, r));
                p.set_local(l, r, &perm)?;
            }
        }
        Ok(p)
    }

    /// Wreath recursion: the portrait with root permutation `root` and the
    /// given sections at the children, which must all live on the same tree.
    pub fn from_sections(root: &Perm, sections: &[Portrait]) -> Result<Portrait> {
        let d = root.degree();
        if sections.len() != d {
            return Err(Error::DegreeMismatch { expected: d, found: sections.len() });
        }
        let sub = &sections[0].seq;
        if sections.iter().any(|s| &s.seq != sub) {
            return Err(Error::TreeMismatch);
        }
        let mut degrees = alloc::vec![d];
        degrees.extend_from_slice(sub.degrees());
        let seq = DegreeSequence::tail_of(degrees)?;
        let mut levels = alloc::vec![root.raw().to_vec()];
        for l in 0..sub.depth() {
            levels.push(sections.iter().flat_map(|s| s.levels[l].iter().copied()).collect());
        }
        Ok(Portrait { seq, levels })
    }

    /// The element acting as `sub` on the subtree below `v` and trivially
    /// elsewhere.
    pub fn graft(seq: &DegreeSequence, v: &Vertex, sub: &Portrait) -> Result<Portrait> {
        seq.check_vertex(v)?;
        if sub.seq != seq.tail(v.level()) {
            return Err(Error::TreeMismatch);
        }
        let mut p = Portrait::identity(seq);
        let base = v.level();
        for m in 0..sub.depth() {
            let l = base + m;
            let d = seq.degree(l);
            let start = seq.descendants_at(v, l).start * d;
            p.levels[l][start..start + sub.levels[m].len()].copy_from_slice(&sub.levels[m]);
        }
        Ok(p)
    }

    pub fn seq(&self) -> &DegreeSequence {
        &self.seq
    }

    pub fn depth(&self) -> usize {
        self.seq.depth()
    }

    fn local(&self, level: usize, rank: usize) -> &[u32] {
        let d = self.seq.degree(level);
        &self.levels[level][rank * d..(rank + 1) * d]
    }

    fn set_local(&mut self, level: usize, rank: usize, perm: &Perm) -> Result<()> {
        let d = self.seq.degree(level);
        if perm.degree() != d {
            return Err(Error::DegreeMismatch { expected: d, found: perm.degree() });
        }
        self.levels[level][rank * d..(rank + 1) * d].copy_from_slice(perm.raw());
        Ok(())
    }

    /// The child permutation `π_v` at an internal vertex.
    pub fn perm_at(&self, v: &Vertex) -> Result<Perm> {
        self.seq.check_vertex(v)?;
        if v.level() == self.depth() {
            return Err(Error::LeafVertex);
        }
        Ok(Perm::from_raw(self.local(v.level(), self.seq.rank(v)).to_vec()))
    }

    pub fn is_identity(&self) -> bool {
        self.levels.iter().enumerate().all(|(l, perms)| {
            let d = self.seq.degree(l) as u32;
            perms.iter().enumerate().all(|(i, &x)| x == i as u32 % d)
        })
    }

    /// Image ranks of every level: `out[n][r]` is the rank of `g(u)` for the
    /// level-`n` vertex `u` of rank `r`.
    pub fn level_images(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.depth() + 1);
        out.push(alloc::vec![0usize]);
        for l in 0..self.depth() {
            let d = self.seq.degree(l);
            let prev = &out[l];
            let mut next = alloc::vec![0usize; prev.len() * d];
            for (r, &img) in prev.iter().enumerate() {
                let local = self.local(l, r);
                for c in 0..d {
                    next[r * d + c] = img * d + local[c] as usize;
                }
            }
            out.push(next);
        }
        out
    }

    fn images_at(&self, n: usize) -> Vec<usize> {
        self.truncate(n).expect("level checked by caller").level_images().pop().unwrap()
    }

    /// The rooted action on a vertex.
    pub fn act(&self, v: &Vertex) -> Result<Vertex> {
        self.seq.check_vertex(v)?;
        let mut word = Vec::with_capacity(v.level());
        let mut rank = 0;
        let mut image_rank = 0;
        for (l, &c) in v.word().iter().enumerate() {
            let d = self.seq.degree(l);
            let ic = self.local(l, rank)[c] as usize;
            word.push(ic);
            rank = rank * d + c;
            image_rank = image_rank * d + ic;
        }
        let _ = image_rank;
        Ok(Vertex::new(word))
    }

    pub fn fixes(&self, v: &Vertex) -> Result<bool> {
        Ok(&self.act(v)? == v)
    }

    /// `self ∘ other`: act by `other`, then by `self`.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        if self.seq != other.seq {
            return Err(Error::TreeMismatch);
        }
        let images = other.level_images();
        let mut levels = Vec::with_capacity(self.depth());
        for l in 0..self.depth() {
            let d = self.seq.degree(l);
            let mut perms = alloc::vec![0u32; self.levels[l].len()];
            for (r, &img) in images[l].iter().enumerate() {
                let q = other.local(l, r);
                let p = self.local(l, img);
                for c in 0..d {
                    perms[r * d + c] = p[q[c] as usize];
                }
            }
            levels.push(perms);
        }
        Ok(Portrait { seq: self.seq.clone(), levels })
    }

    pub fn invert(&self) -> Portrait {
        let images = self.level_images();
        let mut levels = Vec::with_capacity(self.depth());
        for l in 0..self.depth() {
            let d = self.seq.degree(l);
            let mut perms = alloc::vec![0u32; self.levels[l].len()];
            // (g⁻¹)_{g(u)} = (g_u)⁻¹
            for (r, &img) in images[l].iter().enumerate() {
                let local = self.local(l, r);
                for c in 0..d {
                    perms[img * d + local[c] as usize] = c as u32;
                }
            }
            levels.push(perms);
        }
        Portrait { seq: self.seq.clone(), levels }
    }

    pub fn commutator(&self, other: &Portrait) -> Result<Portrait> {
        self.compose(other)?.compose(&self.invert())?.compose(&other.invert())
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Portrait) -> Result<Portrait> {
        g.compose(self)?.compose(&g.invert())
    }

    /// The section `g_v` re-rooted at `v`; `v` must be fixed.
    pub fn section(&self, v: &Vertex) -> Result<Portrait> {
        if !self.fixes(v)? {
            return Err(Error::VertexNotFixed(v.word().to_vec()));
        }
        Ok(self.restriction_below(v))
    }

    /// The map induced on `T^v` (to `T^{g(v)}`), re-rooted, without checking
    /// that `v` is fixed.
    pub(crate) fn restriction_below(&self, v: &Vertex) -> Portrait {
        let seq = self.seq.tail(v.level());
        let mut levels = Vec::with_capacity(seq.depth());
        for l in v.level()..self.depth() {
            let d = self.seq.degree(l);
            let block = self.seq.descendants_at(v, l);
            levels.push(self.levels[l][block.start * d..block.end * d].to_vec());
        }
        Portrait { seq, levels }
    }

    /// Restriction to the first `m` levels.
    pub fn truncate(&self, m: usize) -> Result<Portrait> {
        let seq = self.seq.truncate(m)?;
        Ok(Portrait { seq, levels: self.levels[..m].to_vec() })
    }

    /// `{u ∈ V_n : g(u) ≠ u}`.
    pub fn support_level(&self, n: usize) -> Result<Vec<Vertex>> {
        self.seq.check_level(n)?;
        let images = self.images_at(n);
        Ok(images
            .iter()
            .enumerate()
            .filter(|&(r, &i)| r != i)
            .map(|(r, _)| self.seq.unrank(n, r))
            .collect())
    }

    /// Level-`n` vertices whose subtree is not fixed pointwise (down to the
    /// truncation depth). Elements whose subtree supports on some level are
    /// disjoint commute.
    pub fn subtree_support(&self, n: usize) -> Result<Vec<Vertex>> {
        self.seq.check_level(n)?;
        let leaves = self.level_images().pop().unwrap();
        let width = self.seq.subtree_level_size(n, self.depth());
        let mut out = Vec::new();
        for r in 0..self.seq.level_size(n) {
            let block = r * width..(r + 1) * width;
            if block.clone().any(|x| leaves[x] != x) {
                out.push(self.seq.unrank(n, r));
            }
        }
        Ok(out)
    }

    pub fn is_derangement_of_level(&self, n: usize) -> Result<bool> {
        self.seq.check_level(n)?;
        Ok(self.images_at(n).iter().enumerate().all(|(r, &i)| r != i))
    }

    /// The induced permutation of `V_n` (vertices numbered by rank).
    pub fn level_permutation(&self, n: usize) -> Result<Perm> {
        self.seq.check_level(n)?;
        Ok(Perm::from_raw(self.images_at(n).into_iter().map(|x| x as u32).collect()))
    }

    /// The induced permutation of the deepest level; this action is faithful.
    pub fn leaf_permutation(&self) -> Perm {
        let leaves = self.level_images().pop().unwrap();
        Perm::from_raw(leaves.into_iter().map(|x| x as u32).collect())
    }

    /// Inverse of [`Portrait::leaf_permutation`]. Fails when the permutation
    /// does not preserve the tree structure.
    pub fn from_leaf_permutation(seq: &DegreeSequence, perm: &Perm) -> Result<Portrait> {
        let depth = seq.depth();
        if perm.degree() != seq.level_size(depth) {
            return Err(Error::DegreeMismatch { expected: seq.level_size(depth), found: perm.degree() });
        }
        let mut p = Portrait::identity(seq);
        for l in 0..depth {
            let d = seq.degree(l);
            let child_width = seq.subtree_level_size(l + 1, depth);
            for r in 0..seq.level_size(l) {
                for c in 0..d {
                    let first_leaf = (r * d + c) * child_width;
                    let image_child = perm.apply(first_leaf) / child_width;
                    p.levels[l][r * d + c] = (image_child % d) as u32;
                }
            }
        }
        for l in 0..depth {
            let d = seq.degree(l);
            for r in 0..seq.level_size(l) {
                let local = p.local(l, r);
                let mut seen = alloc::vec![false; d];
                for &x in local {
                    if core::mem::replace(&mut seen[x as usize], true) {
                        return Err(Error::NotTreeAutomorphism);
                    }
                }
            }
        }
        if &p.leaf_permutation() != perm {
            return Err(Error::NotTreeAutomorphism);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsimilar::{RecursionTable, Word};
    use alloc::vec;
    use proptest::prelude::*;

    fn v(w: &[usize]) -> Vertex {
        Vertex::from(w)
    }

    fn grig(word: &str, depth: usize) -> Portrait {
        RecursionTable::grigorchuk().evaluate(&Word::parse(word).unwrap(), depth).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let s = DegreeSequence::new(vec![2, 3, 2]).unwrap();
        let id = Portrait::identity(&s);
        for u in s.subtree_vertices(&Vertex::root()) {
            assert_eq!(id.act(&u).unwrap(), u);
            assert_eq!(id.section(&u).unwrap(), Portrait::identity(&s.tail(u.level())));
        }
        assert!(id.support_level(2).unwrap().is_empty());
        assert!(!id.is_derangement_of_level(1).unwrap());
    }

    #[test]
    fn grigorchuk_generators_on_vertices() {
        assert_eq!(grig("a", 2).act(&v(&[0, 1])).unwrap(), v(&[1, 1]));
        assert_eq!(grig("b", 2).act(&v(&[0, 1])).unwrap(), v(&[0, 0]));
        assert!(grig("a", 2).act(&v(&[0, 1, 0])).is_err());
    }

    #[test]
    fn grigorchuk_sections_and_supports() {
        for depth in 2..=5 {
            let b = grig("b", depth);
            assert_eq!(b.section(&v(&[0])).unwrap(), grig("a", depth - 1));
            assert_eq!(b.section(&v(&[1])).unwrap(), grig("c", depth - 1));
            assert!(grig("d", depth).section(&v(&[0])).unwrap().is_identity());
        }
        assert_eq!(grig("a", 2).section(&v(&[0])), Err(Error::VertexNotFixed(vec![0])));
        assert_eq!(grig("a", 3).support_level(1).unwrap(), vec![v(&[0]), v(&[1])]);
        assert!(grig("d", 2).support_level(2).unwrap().is_empty());
        assert!(grig("a", 3).is_derangement_of_level(1).unwrap());
        assert!(grig("a", 2).compose(&grig("a", 2)).unwrap().is_identity());
        assert!(grig("b", 5).truncate(1).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_mismatched_trees() {
        let a = Portrait::identity(&DegreeSequence::new(vec![2, 2]).unwrap());
        let b = Portrait::identity(&DegreeSequence::new(vec![2, 3]).unwrap());
        assert_eq!(a.compose(&b), Err(Error::TreeMismatch));
    }

    #[test]
    fn leaf_permutation_roundtrip_rejects_non_tree_maps() {
        let s = DegreeSequence::new(vec![2, 2]).unwrap();
        // swapping leaves 0 and 2 alone breaks the block structure
        let bad = Perm::from_cycles(4, &[&[0, 2]]).unwrap();
        assert_eq!(Portrait::from_leaf_permutation(&s, &bad), Err(Error::NotTreeAutomorphism));
    }

    #[test]
    fn graft_places_section_below_vertex() {
        let s = DegreeSequence::constant(2, 3).unwrap();
        let sub = grig("a", 2);
        let g = Portrait::graft(&s, &v(&[1]), &sub).unwrap();
        assert_eq!(g.section(&v(&[1])).unwrap(), sub);
        assert_eq!(g.subtree_support(1).unwrap(), vec![v(&[1])]);
        assert!(g.section(&v(&[0])).unwrap().is_identity());
    }

    pub(crate) fn arb_portrait_on(seq: DegreeSequence) -> impl Strategy<Value = Portrait> {
        let n_vertices: usize = (0..seq.depth()).map(|l| seq.level_size(l)).sum();
        let max_deg = *seq.degrees().iter().max().unwrap();
        proptest::collection::vec(any::<u64>(), n_vertices * max_deg).prop_map(move |noise| {
            let mut k = 0;
            Portrait::from_vertex_fn(&seq, |u| {
                let d = seq.degree(u.level());
                let mut images: Vec<usize> = (0..d).collect();
                for i in (1..d).rev() {
                    let j = (noise[k] % (i as u64 + 1)) as usize;
                    k += 1;
                    images.swap(i, j);
                }
                Perm::from_images(images).unwrap()
            })
            .unwrap()
        })
    }

    fn arb_seq() -> impl Strategy<Value = DegreeSequence> {
        proptest::collection::vec(2usize..=3, 1..=5).prop_map(|d| DegreeSequence::new(d).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (Portrait, Portrait, Portrait)> {
        arb_seq().prop_flat_map(|s| {
            (arb_portrait_on(s.clone()), arb_portrait_on(s.clone()), arb_portrait_on(s))
        })
    }

    proptest! {
        #[test]
        fn group_axioms((p, q, r) in arb_triple()) {
            let id = Portrait::identity(p.seq());
            prop_assert_eq!(p.compose(&id).unwrap(), p.clone());
            prop_assert_eq!(id.compose(&p).unwrap(), p.clone());
            prop_assert!(p.compose(&p.invert()).unwrap().is_identity());
            prop_assert!(p.invert().compose(&p).unwrap().is_identity());
            prop_assert_eq!(p.invert().invert(), p.clone());
            prop_assert_eq!(
                p.compose(&q).unwrap().compose(&r).unwrap(),
                p.compose(&q.compose(&r).unwrap()).unwrap()
            );
        }

        #[test]
        fn action_is_homomorphic((p, q, _r) in arb_triple()) {
            let pq = p.compose(&q).unwrap();
            for u in p.seq().subtree_vertices(&Vertex::root()) {
                prop_assert_eq!(pq.act(&u).unwrap(), p.act(&q.act(&u).unwrap()).unwrap());
            }
            for n in 0..=p.depth() {
                let images: Vec<Vertex> = p.seq().level_vertices(n).unwrap()
                    .iter().map(|u| p.act(u).unwrap()).collect();
                let mut sorted = images.clone();
                sorted.sort();
                prop_assert_eq!(sorted, p.seq().level_vertices(n).unwrap());
            }
        }

        #[test]
        fn truncation_is_a_homomorphism((p, q, _r) in arb_triple(), m in 0usize..6) {
            let m = m.min(p.depth());
            prop_assert_eq!(
                p.compose(&q).unwrap().truncate(m).unwrap(),
                p.truncate(m).unwrap().compose(&q.truncate(m).unwrap()).unwrap()
            );
            prop_assert_eq!(p.truncate(p.depth()).unwrap(), p.clone());
        }

        #[test]
        fn leaf_permutation_is_faithful((p, q, _r) in arb_triple()) {
            prop_assert_eq!(Portrait::from_leaf_permutation(p.seq(), &p.leaf_permutation()).unwrap(), p.clone());
            prop_assert_eq!(
                p.compose(&q).unwrap().leaf_permutation(),
                p.leaf_permutation().compose(&q.leaf_permutation())
            );
        }

        #[test]
        fn section_cocycle((p, _q, _r) in arb_triple(), pick in 0usize..10_000) {
            let s = p.seq().clone();
            let vertices = s.subtree_vertices(&Vertex::root());
            let fixed: Vec<&Vertex> = vertices.iter().filter(|u| p.fixes(u).unwrap()).collect();
            let v0 = fixed[pick % fixed.len()];
            let sec = p.section(v0).unwrap();
            for w in s.subtree_vertices(v0) {
                if p.fixes(&w).unwrap() {
                    let rel = v0.relative(&w).unwrap();
                    prop_assert_eq!(sec.section(&rel).unwrap(), p.section(&w).unwrap());
                }
            }
        }

        #[test]
        fn conjugation_moves_support((p, g, _r) in arb_triple()) {
            let conj = p.conjugate_by(&g).unwrap();
            for n in 0..=p.depth() {
                let mut moved: Vec<Vertex> = p.support_level(n).unwrap()
                    .iter().map(|u| g.act(u).unwrap()).collect();
                moved.sort();
                prop_assert_eq!(moved, conj.support_level(n).unwrap());
            }
        }
    }
}
