//! Legal colorings and local actions on balls of the `d`-regular tree.
//!
//! Ball vertices are non-backtracking paths from the center `o`: the center
//! has `d` neighbours, every other vertex `d - 1` further ones. Vertices are
//! numbered level by level in lexicographic order, center first. Each edge
//! is identified with its endpoint farther from `o`.

use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::permgroup::StabChain;
use crate::tree::{DegreeSequence, Vertex};
use crate::wreathtower::{build_tower, TowerSpec};
use crate::{Budget, Error, Perm, PermGroup, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredBall {
    d: usize,
    radius: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    level: Vec<usize>,
    /// Color of the edge to the parent; unused at the center.
    color: Vec<usize>,
}

impl ColoredBall {
    /// `rule(parent_color, i)` colors the edge to the `i`-th child;
    /// `parent_color` is `None` at the center.
    fn build(d: usize, radius: usize, rule: impl Fn(Option<usize>, usize) -> usize) -> Result<ColoredBall> {
        if d < 3 || radius < 1 {
            return Err(Error::Precondition("need d >= 3 and radius >= 1".into()));
        }
        let mut ball = ColoredBall {
            d,
            radius,
            parent: alloc::vec![None],
            children: alloc::vec![Vec::new()],
            level: alloc::vec![0],
            color: alloc::vec![usize::MAX],
        };
        let mut frontier = alloc::vec![0usize];
        for l in 0..radius {
            let mut next = Vec::new();
            for &v in &frontier {
                let pc = (l > 0).then(|| ball.color[v]);
                let n_children = if l == 0 { d } else { d - 1 };
                for i in 0..n_children {
                    let u = ball.parent.len();
                    ball.parent.push(Some(v));
                    ball.children.push(Vec::new());
                    ball.level.push(l + 1);
                    ball.color.push(rule(pc, i));
                    ball.children[v].push(u);
                    next.push(u);
                }
            }
            frontier = next;
        }
        if !ball.is_legal_coloring() {
            return Err(Error::Precondition("coloring is not legal".into()));
        }
        Ok(ball)
    }

    /// Center edges get colors `0..d` in order; any other vertex gives its
    /// children the colors other than its parent edge's, in increasing order.
    pub fn canonical(d: usize, radius: usize) -> Result<ColoredBall> {
        ColoredBall::build(d, radius, |pc, i| match pc {
            None => i,
            Some(p) if i < p => i,
            Some(_) => i + 1,
        })
    }

    /// A second legal coloring: reversed at the center, cyclic after the
    /// parent color elsewhere.
    pub fn alternative(d: usize, radius: usize) -> Result<ColoredBall> {
        ColoredBall::build(d, radius, move |pc, i| match pc {
            None => d - 1 - i,
            Some(p) => (p + 1 + i) % d,
        })
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    /// The same ball seen as a rooted tree with degrees `[d, d-1, ..]`.
    pub fn rooted_tree(&self) -> DegreeSequence {
        let mut degrees = alloc::vec![self.d];
        degrees.extend(core::iter::repeat(self.d - 1).take(self.radius - 1));
        DegreeSequence::new(degrees).unwrap()
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Path address of a vertex.
    pub fn address(&self, mut v: usize) -> Vertex {
        let mut word = Vec::new();
        while let Some(p) = self.parent[v] {
            word.push(self.children[p].iter().position(|&c| c == v).unwrap());
            v = p;
        }
        word.reverse();
        Vertex::new(word)
    }

    /// Edge color between a non-center vertex and its parent.
    pub fn edge_color(&self, v: usize) -> usize {
        self.color[v]
    }

    /// Distance from the center below the radius: all `d` edges present.
    pub fn is_internal(&self, v: usize) -> bool {
        self.level[v] < self.radius
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| self.is_internal(v))
    }

    /// Neighbours of `v` with the color of the connecting edge.
    pub fn colored_neighbors(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.children[v].iter().map(|&c| (c, self.color[c])).collect();
        if let Some(p) = self.parent[v] {
            out.push((p, self.color[v]));
        }
        out
    }

    fn neighbor_with_color(&self, v: usize, k: usize) -> Option<usize> {
        self.colored_neighbors(v).into_iter().find(|&(_, c)| c == k).map(|(u, _)| u)
    }

    pub fn is_legal_coloring(&self) -> bool {
        self.internal_vertices().all(|v| {
            let mut seen = alloc::vec![false; self.d];
            self.colored_neighbors(v).iter().all(|&(_, c)| c < self.d && !core::mem::replace(&mut seen[c], true))
        })
    }

    /// Whether `g` is a graph automorphism of the ball fixing the center.
    pub fn is_automorphism(&self, g: &Perm) -> bool {
        g.degree() == self.vertex_count()
            && g.apply(0) == 0
            && (1..self.vertex_count()).all(|u| self.parent[g.apply(u)] == self.parent[u].map(|p| g.apply(p)))
    }

    /// `c_{g.v} ∘ g_v ∘ c_v⁻¹` as a permutation of the colors.
    pub fn local_action(&self, g: &Perm, v: usize) -> Result<Perm> {
        let gv = g.apply(v);
        if !self.is_internal(v) || !self.is_internal(gv) {
            return Err(Error::LocalActionUndefined(v));
        }
        let mut images = alloc::vec![0; self.d];
        for (u, k) in self.colored_neighbors(v) {
            let gu = g.apply(u);
            let edge = if self.parent[gu] == Some(gv) { gu } else if self.parent[gv] == Some(gu) { gv } else {
                return Err(Error::NotBallAutomorphism(alloc::format!("edge at {v} not preserved")));
            };
            images[k] = self.color[edge];
        }
        Perm::from_images(images).map_err(|_| Error::NotBallAutomorphism(alloc::format!("colors at {gv}")))
    }

    /// Every internal local action lies in `F`.
    pub fn is_legal(&self, g: &Perm, f: &PermGroup) -> bool {
        let chain = f.stab_chain();
        self.is_automorphism(g)
            && self.internal_vertices().all(|v| self.local_action(g, v).map(|s| chain.contains(&s)).unwrap_or(false))
    }

    /// Internal vertices other than the center.
    pub fn inner_count(&self) -> usize {
        self.internal_vertices().count() - 1
    }

    /// `|F| · |H|^{N_r}`, `H` the stabilizer of color 0.
    pub fn stabilizer_order_formula(&self, f: &PermGroup) -> BigUint {
        f.order() * f.point_stabilizer(0).order().pow(self.inner_count() as u32)
    }

    /// Extends local actions outward from the center: `choose(v, p, p')` gives
    /// the local action at a non-center vertex whose parent edge color `p`
    /// must go to `p'`.
    fn extend(&self, at_center: &Perm, mut choose: impl FnMut(usize, usize, usize) -> Perm) -> Perm {
        let mut img = alloc::vec![usize::MAX; self.vertex_count()];
        img[0] = 0;
        for v in 0..self.vertex_count() {
            if !self.is_internal(v) {
                continue;
            }
            let gv = img[v];
            let sigma = if v == 0 {
                at_center.clone()
            } else {
                choose(v, self.color[v], self.color[gv])
            };
            for &u in &self.children[v] {
                img[u] = self.neighbor_with_color(gv, sigma.apply(self.color[u])).unwrap();
            }
        }
        Perm::from_images(img).unwrap()
    }

    /// All legal automorphisms fixing the center, by exhaustive backtracking.
    pub fn enumerate_stabilizer(&self, f: &PermGroup, budget: Budget) -> Result<Vec<Perm>> {
        if f.degree() != self.d {
            return Err(Error::DegreeMismatch { expected: self.d, found: f.degree() });
        }
        let largest_coset = (0..self.d).map(|p| f.point_stabilizer(p).order()).max().unwrap();
        let bound = f.order() * largest_coset.pow(self.inner_count() as u32);
        if usize::try_from(&bound).map_or(true, |b| b > budget.max_elements) {
            return Err(Error::BudgetExceeded { budget: budget.max_elements });
        }
        let elems = f.elements(budget)?;
        // cosets[p][p'] = {σ ∈ F : σ(p) = p'}
        let mut cosets = alloc::vec![alloc::vec![Vec::new(); self.d]; self.d];
        for s in &elems {
            for p in 0..self.d {
                cosets[p][s.apply(p)].push(s.clone());
            }
        }
        let internal: Vec<usize> = self.internal_vertices().collect();
        let mut out = Vec::new();
        let mut img = alloc::vec![usize::MAX; self.vertex_count()];
        img[0] = 0;
        self.backtrack(&internal, 0, &elems, &cosets, &mut img, &mut out);
        out.sort();
        Ok(out)
    }

    fn backtrack(
        &self,
        internal: &[usize],
        i: usize,
        elems: &[Perm],
        cosets: &[Vec<Vec<Perm>>],
        img: &mut Vec<usize>,
        out: &mut Vec<Perm>,
    ) {
        let Some(&v) = internal.get(i) else {
            out.push(Perm::from_images(img.clone()).unwrap());
            return;
        };
        let gv = img[v];
        let choices = if v == 0 { elems } else { &cosets[self.color[v]][self.color[gv]][..] };
        for sigma in choices {
            for &u in &self.children[v] {
                img[u] = self.neighbor_with_color(gv, sigma.apply(self.color[u])).unwrap();
            }
            self.backtrack(internal, i + 1, elems, cosets, img, out);
        }
    }

    /// The legal stabilizer of the center from generators: lifts of the
    /// generators of `F` at the center, and of `Stab_F(p)` at every other
    /// internal vertex, completed with fixed coset representatives.
    pub fn stabilizer_group(&self, f: &PermGroup) -> Result<PermGroup> {
        if f.degree() != self.d {
            return Err(Error::DegreeMismatch { expected: self.d, found: f.degree() });
        }
        let chains: Vec<StabChain> = (0..self.d).map(|p| StabChain::new(self.d, f.generators(), &[p])).collect();
        let transversal = |p: usize, q: usize| chains[p].representative(0, q).expect("colors in one orbit").clone();
        let mut gens = Vec::new();
        for s in f.generators() {
            gens.push(self.extend(s, |_, p, q| transversal(p, q)));
        }
        let id = Perm::identity(self.d);
        for v in self.internal_vertices().skip(1) {
            for h in f.point_stabilizer(self.color[v]).generators() {
                gens.push(self.extend(&id, |u, p, q| if u == v { h.clone() } else { transversal(p, q) }));
            }
        }
        PermGroup::new(self.vertex_count(), gens)
    }

    /// The automorphism `φ` with `other.c_{φ(v)} ∘ φ_v ∘ self.c_v⁻¹ = 1`
    /// everywhere; it conjugates `self`-legal groups onto `other`-legal ones.
    pub fn recoloring(&self, other: &ColoredBall) -> Result<Perm> {
        if (self.d, self.radius) != (other.d, other.radius) {
            return Err(Error::TreeMismatch);
        }
        let mut img = alloc::vec![usize::MAX; self.vertex_count()];
        img[0] = 0;
        for v in 0..self.vertex_count() {
            if !self.is_internal(v) {
                continue;
            }
            for &u in &self.children[v] {
                img[u] = other.neighbor_with_color(img[v], self.color[u]).unwrap();
            }
        }
        Ok(Perm::from_images(img).unwrap())
    }

    /// Orbit lengths of `g` on each sphere, sorted.
    pub fn sphere_orbit_lengths(&self, g: &PermGroup) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.radius + 1];
        for orbit in g.orbits() {
            out[self.level[orbit[0]]].push(orbit.len());
        }
        for l in &mut out {
            l.sort();
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub degree: usize,
    pub perfect: bool,
    pub two_transitive: bool,
    pub generated_by_point_stabilizers: bool,
    pub point_stabilizer_perfect: bool,
    pub degree_at_least_six: bool,
}

impl HypothesisReport {
    /// The four group-theoretic conditions.
    pub fn hypotheses_hold(&self) -> bool {
        self.perfect && self.two_transitive && self.generated_by_point_stabilizers && self.point_stabilizer_perfect
    }

    pub fn all_true(&self) -> bool {
        self.hypotheses_hold() && self.degree_at_least_six
    }
}

pub fn check_theorem_hypotheses(f: &PermGroup) -> HypothesisReport {
    HypothesisReport {
        degree: f.degree(),
        perfect: f.is_perfect(),
        two_transitive: f.degree() >= 2 && f.is_k_transitive(2),
        generated_by_point_stabilizers: f.is_generated_by_point_stabilizers(),
        point_stabilizer_perfect: f.point_stabilizer(0).is_perfect(),
        degree_at_least_six: f.degree() >= 6,
    }
}

/// `Stab_F(0)` acting on `{1, .., d-1}`, relabelled onto `d - 1` points.
pub fn relabeled_point_stabilizer(f: &PermGroup) -> PermGroup {
    let d = f.degree();
    let gens = f
        .point_stabilizer(0)
        .generators()
        .iter()
        .map(|h| Perm::from_images((1..d).map(|x| h.apply(x) - 1).collect()).unwrap())
        .collect();
    PermGroup::new(d - 1, gens).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerMatch {
    pub stabilizer_order: BigUint,
    pub tower_order: BigUint,
    pub formula: BigUint,
    pub ball_orbits: Vec<Vec<usize>>,
    pub tower_orbits: Vec<Vec<usize>>,
}

impl TowerMatch {
    pub fn matches(&self) -> bool {
        self.stabilizer_order == self.tower_order && self.ball_orbits == self.tower_orbits
    }
}

/// Compares the legal stabilizer on the radius-`depth` ball with the tower
/// `[F, H, H, ..]`.
pub fn tower_match(f: &PermGroup, depth: usize) -> Result<TowerMatch> {
    let ball = ColoredBall::canonical(f.degree(), depth)?;
    let stab = ball.stabilizer_group(f)?;
    let h = relabeled_point_stabilizer(f);
    let mut factors = alloc::vec![f.clone()];
    factors.extend(core::iter::repeat(h).take(depth - 1));
    let tower = build_tower(&TowerSpec::new(factors)?);
    let tower_orbits = (0..=depth)
        .map(|n| {
            let mut lens: Vec<usize> = tower.group().level_group(n).unwrap().orbits().iter().map(Vec::len).collect();
            lens.sort();
            lens
        })
        .collect();
    Ok(TowerMatch {
        stabilizer_order: stab.order(),
        tower_order: tower.order(),
        formula: ball.stabilizer_order_formula(f),
        ball_orbits: ball.sphere_orbit_lengths(&stab),
        tower_orbits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    /// All center-fixing automorphisms of the ball, i.e. legal for `Sym(d)`.
    fn all_automorphisms(ball: &ColoredBall) -> Vec<Perm> {
        ball.enumerate_stabilizer(&PermGroup::symmetric(ball.degree()), Budget::default()).unwrap()
    }

    #[test]
    fn canonical_colorings() {
        let star = ColoredBall::canonical(3, 1).unwrap();
        assert_eq!(star.vertex_count(), 4);
        let colors: Vec<usize> = star.colored_neighbors(0).iter().map(|&(_, c)| c).collect();
        assert_eq!(colors, vec![0, 1, 2]);
        for (d, r) in [(3, 1), (3, 3), (4, 2), (6, 2)] {
            assert!(ColoredBall::canonical(d, r).unwrap().is_legal_coloring());
            assert!(ColoredBall::alternative(d, r).unwrap().is_legal_coloring());
        }
        assert!(ColoredBall::canonical(2, 1).is_err());
        let b = ColoredBall::canonical(3, 2).unwrap();
        assert_eq!(b.address(5), Vertex::from(vec![0, 1]));
        assert_eq!(b.address(6), Vertex::from(vec![1, 0]));
        assert_eq!(b.rooted_tree().degrees(), &[3, 2]);
    }

    #[test]
    fn local_action_examples() {
        let ball = ColoredBall::canonical(3, 2).unwrap();
        let id = Perm::identity(ball.vertex_count());
        for v in ball.internal_vertices() {
            assert!(ball.local_action(&id, v).unwrap().is_identity());
        }
        assert_eq!(ball.local_action(&id, 4), Err(Error::LocalActionUndefined(4)));
        // the only color-preserving automorphism fixing the center is trivial
        let preserving: Vec<Perm> = all_automorphisms(&ball)
            .into_iter()
            .filter(|g| ball.internal_vertices().all(|v| ball.local_action(g, v).unwrap().is_identity()))
            .collect();
        assert_eq!(preserving, vec![id]);
    }

    #[test]
    fn legality_examples() {
        let ball = ColoredBall::canonical(3, 2).unwrap();
        let autos = all_automorphisms(&ball);
        assert_eq!(autos.len(), 48);
        let trivial = PermGroup::trivial(3);
        assert!(autos.iter().all(|g| ball.is_legal(g, &PermGroup::symmetric(3))));
        assert_eq!(autos.iter().filter(|g| ball.is_legal(g, &trivial)).count(), 1);
        for f in [PermGroup::trivial(3), PermGroup::cyclic(3), PermGroup::symmetric(3)] {
            assert!(ball.is_legal(&Perm::identity(ball.vertex_count()), &f));
        }
    }

    #[test]
    fn stabilizer_counts() {
        let ball = ColoredBall::canonical(3, 2).unwrap();
        let s3 = ball.enumerate_stabilizer(&PermGroup::symmetric(3), Budget::default()).unwrap();
        assert_eq!(s3.len(), 48);
        assert_eq!(ball.stabilizer_order_formula(&PermGroup::symmetric(3)), big(48));
        assert_eq!(ball.enumerate_stabilizer(&PermGroup::trivial(3), Budget::default()).unwrap().len(), 1);
        for (d, r) in [(3, 1), (3, 2), (4, 2)] {
            let ball = ColoredBall::canonical(d, r).unwrap();
            for f in [PermGroup::symmetric(d), PermGroup::alternating(d), PermGroup::cyclic(d)] {
                let elems = ball.enumerate_stabilizer(&f, Budget::default()).unwrap();
                assert_eq!(big(elems.len() as u128), ball.stabilizer_order_formula(&f));
                assert!(elems.iter().all(|g| ball.is_legal(g, &f)));
                let group = ball.stabilizer_group(&f).unwrap();
                let from_gens: BTreeSet<Perm> = group.elements(Budget::default()).unwrap().into_iter().collect();
                assert_eq!(from_gens, elems.into_iter().collect::<BTreeSet<_>>());
            }
        }
        let big_ball = ColoredBall::canonical(6, 2).unwrap();
        let a6 = PermGroup::alternating(6);
        assert_eq!(big_ball.stabilizer_group(&a6).unwrap().order(), big(360) * big(60).pow(6));
        assert!(matches!(
            big_ball.enumerate_stabilizer(&a6, Budget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn legality_is_a_group_property() {
        let ball = ColoredBall::canonical(3, 2).unwrap();
        let c3 = PermGroup::cyclic(3);
        let legal: Vec<Perm> = all_automorphisms(&ball).into_iter().filter(|g| ball.is_legal(g, &c3)).collect();
        for g in &legal {
            assert!(ball.is_legal(&g.inverse(), &c3));
            for h in &legal {
                assert!(ball.is_legal(&g.compose(h), &c3));
            }
        }
        // monotone in F
        for g in &legal {
            assert!(ball.is_legal(g, &PermGroup::alternating(3)));
        }
    }

    #[test]
    fn colorings_give_conjugate_groups() {
        let c = ColoredBall::canonical(3, 2).unwrap();
        let c2 = ColoredBall::alternative(3, 2).unwrap();
        assert_ne!(c, c2);
        let phi = c.recoloring(&c2).unwrap();
        assert!(c.is_automorphism(&phi));
        for f in [PermGroup::cyclic(3), PermGroup::symmetric(3), PermGroup::trivial(3)] {
            let u: BTreeSet<Perm> = c
                .enumerate_stabilizer(&f, Budget::default())
                .unwrap()
                .iter()
                .map(|g| g.conjugate_by(&phi))
                .collect();
            let u2: BTreeSet<Perm> = c2.enumerate_stabilizer(&f, Budget::default()).unwrap().into_iter().collect();
            assert_eq!(u, u2);
        }
    }

    #[test]
    fn hypothesis_reports() {
        let a6 = check_theorem_hypotheses(&PermGroup::alternating(6));
        assert!(a6.all_true());
        let a5 = check_theorem_hypotheses(&PermGroup::alternating(5));
        assert!(a5.perfect && a5.two_transitive && a5.generated_by_point_stabilizers);
        assert!(!a5.point_stabilizer_perfect && !a5.degree_at_least_six);
        assert!(!check_theorem_hypotheses(&PermGroup::symmetric(3)).perfect);
        assert!(!check_theorem_hypotheses(&PermGroup::cyclic(3)).generated_by_point_stabilizers);
    }

    #[test]
    fn tower_matches() {
        let m = tower_match(&PermGroup::symmetric(3), 2).unwrap();
        assert!(m.matches());
        assert_eq!(m.stabilizer_order, big(48));
        let m = tower_match(&PermGroup::symmetric(4), 1).unwrap();
        assert!(m.matches());
        assert_eq!(m.stabilizer_order, big(24));
        let m = tower_match(&PermGroup::alternating(6), 2).unwrap();
        assert!(m.matches());
        assert_eq!(m.tower_order, big(360) * big(60).pow(6));
        assert_eq!(m.formula, m.tower_order);
        assert!(tower_match(&PermGroup::symmetric(3), 3).unwrap().matches());
    }
}
