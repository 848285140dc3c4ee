//! Deterministic Schreier–Sims: base and strong generating set.

use alloc::vec::Vec;
use hashbrown::HashSet;
use num_bigint::BigUint;

use crate::Perm;

/// One level of a stabilizer chain: the group `G^(i)` fixing the earlier base
/// points, with the orbit of `base` and coset representatives for it.
#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Perm>,
    orbit: Vec<usize>,
    /// `transversal[β] = (u, u⁻¹)` with `u(base) = β`.
    transversal: Vec<Option<(Perm, Perm)>>,
    /// (orbit point, generator index) pairs whose Schreier generator is known to sift.
    tested: HashSet<(u32, u32)>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Level {
        let mut transversal = alloc::vec![None; degree];
        let id = Perm::identity(degree);
        transversal[base] = Some((id.clone(), id));
        Level { base, gens: Vec::new(), orbit: alloc::vec![base], transversal, tested: HashSet::new() }
    }

    fn extend_orbit(&mut self) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let beta = self.orbit[idx];
            for s in &self.gens {
                let gamma = s.apply(beta);
                if self.transversal[gamma].is_none() {
                    let u = s.compose(&self.transversal[beta].as_ref().unwrap().0);
                    let inv = u.inverse();
                    self.transversal[gamma] = Some((u, inv));
                    self.orbit.push(gamma);
                }
            }
            idx += 1;
        }
    }
}

/// A base and strong generating set for a permutation group.
///
/// Built with a caller-chosen base prefix: every prefix point becomes a level
/// (possibly with a trivial orbit), so the group stored at level `k` is the
/// pointwise stabilizer of the first `k` prefix points.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm], base_prefix: &[usize]) -> StabChain {
        let mut chain = StabChain { degree, levels: Vec::new() };
        for &b in base_prefix {
            assert!(b < degree, "base point out of range");
            chain.levels.push(Level::new(degree, b));
        }
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            chain.insert_generator(g.clone());
        }
        for level in &mut chain.levels {
            level.extend_orbit();
        }
        chain.complete();
        chain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Basic orbit lengths, one per level.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Coset representative `u` at `level` with `u(base) = point`.
    pub fn representative(&self, level: usize, point: usize) -> Option<&Perm> {
        self.levels[level].transversal[point].as_ref().map(|(u, _)| u)
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Strong generators of the stabilizer of the first `level` base points.
    pub fn stabilizer_generators(&self, level: usize) -> &[Perm] {
        if level < self.levels.len() {
            &self.levels[level].gens
        } else {
            &[]
        }
    }

    /// All strong generators (level 0 holds every one of them).
    pub fn strong_generators(&self) -> &[Perm] {
        self.stabilizer_generators(0)
    }

    /// Strips `g` through the chain starting at `from`; returns the residue and
    /// the level at which stripping stopped (`len()` if it went all the way).
    pub fn sift_from(&self, g: &Perm, from: usize) -> (Perm, usize) {
        let mut h = g.clone();
        for (k, level) in self.levels.iter().enumerate().skip(from) {
            let beta = h.apply(level.base);
            match &level.transversal[beta] {
                Some((_, inv)) => h = inv.compose(&h),
                None => return (h, k),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (h, k) = self.sift_from(g, 0);
        k == self.levels.len() && h.is_identity()
    }

    /// Adds `g` to the group, keeping the chain complete. Returns `false` when
    /// `g` was already a member.
    pub fn add_generator(&mut self, g: &Perm) -> bool {
        if self.contains(g) {
            return false;
        }
        let top = self.insert_generator(g.clone());
        for level in &mut self.levels[..=top] {
            level.extend_orbit();
        }
        self.complete();
        true
    }

    /// Puts `g` into the generator lists of every level whose earlier base
    /// points it fixes, appending a new base point if it fixes all of them.
    /// Returns the deepest level touched.
    fn insert_generator(&mut self, g: Perm) -> usize {
        if g.is_identity() {
            return 0;
        }
        let mut j = 0;
        while j < self.levels.len() && g.apply(self.levels[j].base) == self.levels[j].base {
            j += 1;
        }
        if j == self.levels.len() {
            let moved = (0..self.degree).find(|&x| g.apply(x) != x).unwrap();
            self.levels.push(Level::new(self.degree, moved));
        }
        for level in &mut self.levels[..=j] {
            level.gens.push(g.clone());
        }
        j
    }

    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let lvl = i - 1;
            match self.failing_schreier_generator(lvl) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let moved = (0..self.degree).find(|&x| residue.apply(x) != x).unwrap();
                        self.levels.push(Level::new(self.degree, moved));
                    }
                    for level in &mut self.levels[lvl + 1..=j] {
                        level.gens.push(residue.clone());
                        level.extend_orbit();
                    }
                    i = j + 1;
                }
            }
        }
    }

    fn failing_schreier_generator(&mut self, lvl: usize) -> Option<(Perm, usize)> {
        let n_orbit = self.levels[lvl].orbit.len();
        let n_gens = self.levels[lvl].gens.len();
        for oi in 0..n_orbit {
            let beta = self.levels[lvl].orbit[oi];
            for si in 0..n_gens {
                if self.levels[lvl].tested.contains(&(beta as u32, si as u32)) {
                    continue;
                }
                let level = &self.levels[lvl];
                let s = &level.gens[si];
                let gamma = s.apply(beta);
                let u_beta = &level.transversal[beta].as_ref().unwrap().0;
                let u_gamma_inv = &level.transversal[gamma].as_ref().unwrap().1;
                let schreier = u_gamma_inv.compose(&s.compose(u_beta));
                let (residue, j) = self.sift_from(&schreier, lvl + 1);
                if j < self.levels.len() || !residue.is_identity() {
                    return Some((residue, j));
                }
                self.levels[lvl].tested.insert((beta as u32, si as u32));
            }
        }
        None
    }

    /// Iterates over all group elements, each exactly once, in a deterministic
    /// order (products of coset representatives, top level leftmost).
    pub fn elements(&self) -> ChainElements<'_> {
        ChainElements { chain: self, counters: alloc::vec![0; self.levels.len()], done: false }
    }
}

pub struct ChainElements<'a> {
    chain: &'a StabChain,
    counters: Vec<usize>,
    done: bool,
}

impl Iterator for ChainElements<'_> {
    type Item = Perm;

    fn next(&mut self) -> Option<Perm> {
        if self.done {
            return None;
        }
        let levels = &self.chain.levels;
        let mut g = Perm::identity(self.chain.degree);
        for (k, level) in levels.iter().enumerate().rev() {
            let point = level.orbit[self.counters[k]];
            g = level.transversal[point].as_ref().unwrap().0.compose(&g);
        }
        // odometer, deepest level fastest
        let mut k = levels.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.counters[k] += 1;
            if self.counters[k] < levels[k].orbit.len() {
                break;
            }
            self.counters[k] = 0;
        }
        Some(g)
    }
}
