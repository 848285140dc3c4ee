//! Seeded random inputs for the verification suites.

use branchlab_core::wreathtower::{wreath_product, TowerSpec};
use branchlab_core::{Budget, DegreeSequence, Perm, PermGroup, Portrait, TreeGroup, Vertex};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x6272_616e_6368;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("shuffle of 0..n")
}

pub fn random_portrait(rng: &mut impl Rng, seq: &DegreeSequence) -> Portrait {
    Portrait::from_vertex_fn(seq, |v| random_perm(rng, seq.degree(v.level()))).expect("degrees match")
}

/// `g` relabelled through a random bijection.
fn random_conjugate(rng: &mut impl Rng, g: &PermGroup) -> PermGroup {
    let c = random_perm(rng, g.degree());
    let gens = g.generators().iter().map(|x| x.conjugate_by(&c)).collect();
    PermGroup::new(g.degree(), gens).expect("same degree")
}

/// A transitive group of degree in `2..=max_degree`: random generators,
/// conjugated cyclic groups, or imprimitive wreath products.
pub fn random_transitive_group(rng: &mut impl Rng, max_degree: usize) -> PermGroup {
    loop {
        let n = rng.random_range(2..=max_degree);
        let g = match rng.random_range(0..3) {
            0 => {
                let k = rng.random_range(1..=3);
                PermGroup::new(n, (0..k).map(|_| random_perm(rng, n)).collect()).unwrap()
            }
            1 => random_conjugate(rng, &PermGroup::cyclic(n)),
            _ => {
                let divisors: Vec<usize> = (2..n).filter(|a| n % a == 0 && n / a >= 2).collect();
                let Some(&a) = divisors.choose(rng) else { continue };
                let top = random_transitive_group(rng, a.min(max_degree));
                let bottom = random_transitive_group(rng, (n / a).min(max_degree));
                if top.degree() * bottom.degree() > max_degree {
                    continue;
                }
                random_conjugate(rng, &wreath_product(&top, &bottom))
            }
        };
        if g.is_transitive() {
            return g;
        }
    }
}

/// A tower of transitive factors with predicted order at most `max_order`.
pub fn random_tower_spec(rng: &mut impl Rng, max_order: u64) -> TowerSpec {
    loop {
        let depth = rng.random_range(1..=4);
        let factors = (0..depth).map(|_| random_transitive_group(rng, 5)).collect();
        let spec = TowerSpec::new(factors).expect("degrees at least 2");
        if spec.predicted_order() <= max_order.into() {
            return spec;
        }
    }
}

/// A product of random elements grafted below the given vertices.
pub fn random_supported_on(rng: &mut impl Rng, seq: &DegreeSequence, at: &[Vertex]) -> Portrait {
    let mut p = Portrait::identity(seq);
    for v in at {
        let sub = random_portrait(rng, &seq.tail(v.level()));
        p = p.compose(&Portrait::graft(seq, v, &sub).unwrap()).unwrap();
    }
    p
}

#[derive(Clone, Debug)]
pub struct TrickInstance {
    pub level: usize,
    pub tau: Portrait,
    pub s1: Portrait,
    pub s2: Portrait,
}

/// `τ, σ₁, σ₂` on the binary tree of the given depth with
/// `τ(supp σ₁) ∩ (supp σ₁ ∪ supp σ₂) = ∅` at a random level.
pub fn random_trick_instance(rng: &mut impl Rng, depth: usize) -> TrickInstance {
    let seq = DegreeSequence::constant(2, depth).unwrap();
    let level = rng.random_range(1..=depth);
    let tau = random_portrait(rng, &seq);
    let t = tau.level_permutation(level).unwrap();
    let n = seq.level_size(level);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut in1 = vec![false; n];
    let mut blocked = vec![false; n];
    for &u in &order {
        let tu = t.apply(u);
        if tu != u && !in1[tu] && !blocked[u] && rng.random_bool(0.6) {
            in1[u] = true;
            blocked[tu] = true;
        }
    }
    let s1_at: Vec<Vertex> = (0..n).filter(|&u| in1[u]).map(|u| seq.unrank(level, u)).collect();
    let s2_at: Vec<Vertex> = (0..n)
        .filter(|&u| !blocked[u] && rng.random_bool(0.5))
        .map(|u| seq.unrank(level, u))
        .collect();
    TrickInstance {
        level,
        s1: random_supported_on(rng, &seq, &s1_at),
        s2: random_supported_on(rng, &seq, &s2_at),
        tau,
    }
}

/// A random partition of the elements of `ambient` into `parts` sets.
pub fn random_cover(rng: &mut impl Rng, ambient: &TreeGroup, parts: usize, budget: Budget) -> Vec<Vec<Portrait>> {
    let mut family = vec![Vec::new(); parts];
    for g in ambient.elements(budget).expect("ambient within budget") {
        family[rng.random_range(0..parts)].push(g);
    }
    family
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible() {
        let a = random_portrait(&mut rng(7), &DegreeSequence::constant(2, 4).unwrap());
        let b = random_portrait(&mut rng(7), &DegreeSequence::constant(2, 4).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn transitive_groups_are_transitive() {
        let mut r = rng(1);
        for _ in 0..50 {
            let g = random_transitive_group(&mut r, 10);
            assert!(g.is_transitive() && g.degree() <= 10);
        }
    }

    #[test]
    fn trick_instances_satisfy_the_hypothesis() {
        let mut r = rng(2);
        for _ in 0..50 {
            let inst = random_trick_instance(&mut r, 4);
            let t = inst.tau.level_permutation(inst.level).unwrap();
            let seq = inst.tau.seq().clone();
            let s1 = inst.s1.subtree_support(inst.level).unwrap();
            let s2 = inst.s2.subtree_support(inst.level).unwrap();
            for u in &s1 {
                let tu = seq.unrank(inst.level, t.apply(seq.rank(u)));
                assert!(!s1.contains(&tu) && !s2.contains(&tu));
            }
        }
    }
}
