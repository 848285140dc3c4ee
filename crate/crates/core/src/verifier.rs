//! Checkable replays of constructive arguments: the commutator trick,
//! fullness above a vertex, the diagonal search, commutator containment and
//! derangements in the Grigorchuk group.

use alloc::vec::Vec;
use hashbrown::{HashMap, HashSet};

use crate::selfsimilar::{element_x, RecursionTable};
use crate::tree::Vertex;
use crate::treegroup::TreeGroup;
use crate::{Budget, Error, Perm, Portrait, Result};

/// The group operations the witnesses need.
pub trait GroupElement: Clone + PartialEq + core::fmt::Debug {
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn one(&self) -> Self;
}

impl GroupElement for Perm {
    fn mul(&self, other: &Perm) -> Perm {
        self.compose(other)
    }
    fn inv(&self) -> Perm {
        self.inverse()
    }
    fn one(&self) -> Perm {
        Perm::identity(self.degree())
    }
}

/// Portraits multiplied here always share a tree; callers check first.
impl GroupElement for Portrait {
    fn mul(&self, other: &Portrait) -> Portrait {
        self.compose(other).expect("portraits on the same tree")
    }
    fn inv(&self) -> Portrait {
        self.invert()
    }
    fn one(&self) -> Portrait {
        Portrait::identity(self.seq())
    }
}

fn commutator<E: GroupElement>(g: &E, h: &E) -> E {
    g.mul(h).mul(&g.inv()).mul(&h.inv())
}

/// `[σ₁, σ₂] = ∏ gᵢ τ^{eᵢ} gᵢ⁻¹`.
#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorWitness<E> {
    pub tau: E,
    pub conjugators: Vec<(E, i8)>,
    pub target: E,
}

impl<E: GroupElement> CommutatorWitness<E> {
    pub fn product(&self) -> E {
        let tau_inv = self.tau.inv();
        self.conjugators.iter().fold(self.tau.one(), |acc, (g, e)| {
            let t = if *e > 0 { &self.tau } else { &tau_inv };
            acc.mul(&g.mul(t).mul(&g.inv()))
        })
    }

    pub fn verify(&self) -> bool {
        self.conjugators.len() == 4 && self.product() == self.target
    }
}

fn build_witness<E: GroupElement>(tau: &E, s1: &E, s2: &E) -> Result<CommutatorWitness<E>> {
    let one = tau.one();
    let witness = CommutatorWitness {
        tau: tau.clone(),
        conjugators: alloc::vec![(s1.clone(), 1), (one, -1), (s2.clone(), 1), (s2.mul(s1), -1)],
        target: commutator(s1, s2),
    };
    if !witness.verify() {
        return Err(Error::Precondition("witness product differs from the commutator".into()));
    }
    Ok(witness)
}

/// Commutator trick on the subtree supports of level `level`: requires
/// `τ(supp σ₁) ∩ (supp σ₁ ∪ supp σ₂) = ∅`, where `supp` is the set of
/// level vertices below which the element moves something.
pub fn commutator_trick(
    tau: &Portrait,
    s1: &Portrait,
    s2: &Portrait,
    level: usize,
) -> Result<CommutatorWitness<Portrait>> {
    if tau.seq() != s1.seq() || tau.seq() != s2.seq() {
        return Err(Error::TreeMismatch);
    }
    let seq = tau.seq();
    let rank = |v: &Vertex| seq.rank(v);
    let supp1: Vec<usize> = s1.subtree_support(level)?.iter().map(rank).collect();
    let mut blocked: HashSet<usize> = supp1.iter().copied().collect();
    blocked.extend(s2.subtree_support(level)?.iter().map(rank));
    let t = tau.level_permutation(level)?;
    if let Some(&u) = supp1.iter().find(|&&u| blocked.contains(&t.apply(u))) {
        return Err(Error::DisjointnessViolated(t.apply(u)));
    }
    build_witness(tau, s1, s2)
}

/// Commutator trick on a plain permutation domain.
pub fn commutator_trick_perm(tau: &Perm, s1: &Perm, s2: &Perm) -> Result<CommutatorWitness<Perm>> {
    let n = tau.degree();
    if s1.degree() != n || s2.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, found: s1.degree().max(s2.degree()) });
    }
    let supp1 = s1.support();
    let mut blocked: HashSet<usize> = supp1.iter().copied().collect();
    blocked.extend(s2.support());
    if let Some(&u) = supp1.iter().find(|&&u| blocked.contains(&tau.apply(u))) {
        return Err(Error::DisjointnessViolated(tau.apply(u)));
    }
    build_witness(tau, s1, s2)
}

/// For each `r ∈ rist(v)`, an element of the tested set agreeing with `r` on `T^v`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullnessCertificate {
    pub vertex: Vertex,
    pub pairs: Vec<(Portrait, Portrait)>,
}

impl FullnessCertificate {
    pub fn verify(&self, set: &[Portrait], ambient: &TreeGroup) -> bool {
        let Ok(rist) = ambient.rigid_stabilizer(&self.vertex) else { return false };
        let Ok(order) = usize::try_from(&rist.order()) else { return false };
        let distinct: HashSet<&Portrait> = self.pairs.iter().map(|(r, _)| r).collect();
        distinct.len() == order
            && self.pairs.iter().all(|(r, a)| {
                rist.contains(r)
                    && set.contains(a)
                    && a.fixes(&self.vertex).unwrap_or(false)
                    && a.section(&self.vertex).ok() == r.section(&self.vertex).ok()
            })
    }

    /// The tested-set element standing in for `r`.
    pub fn lift(&self, r: &Portrait) -> Option<&Portrait> {
        self.pairs.iter().find(|(x, _)| x == r).map(|(_, a)| a)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fullness {
    Full(FullnessCertificate),
    /// An element of `rist(v)` whose section at `v` no element of the set has.
    Refuted(Portrait),
}

impl Fullness {
    pub fn is_full(&self) -> bool {
        matches!(self, Fullness::Full(_))
    }
}

/// Whether `set` is full above `v` inside `ambient`.
pub fn is_full_above(set: &[Portrait], v: &Vertex, ambient: &TreeGroup, budget: Budget) -> Result<Fullness> {
    let rist = ambient.rigid_stabilizer(v)?;
    let mut by_section: HashMap<Portrait, &Portrait> = HashMap::new();
    for a in set {
        if a.seq() != ambient.seq() {
            return Err(Error::TreeMismatch);
        }
        if a.fixes(v)? {
            by_section.entry(a.section(v)?).or_insert(a);
        }
    }
    let mut pairs = Vec::new();
    for r in rist.elements(budget)? {
        match by_section.get(&r.section(v)?) {
            Some(a) => pairs.push((r, (*a).clone())),
            None => return Ok(Fullness::Refuted(r)),
        }
    }
    Ok(Fullness::Full(FullnessCertificate { vertex: v.clone(), pairs }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalHit {
    pub index: usize,
    pub vertex: Vertex,
    /// Found on the rightmost-branch walk rather than by the fallback scan.
    pub on_branch: bool,
    pub certificate: FullnessCertificate,
}

/// Finds `n` and `v ≥ w` with `family[n]` full above `v`.
///
/// Walks the rightmost branch `w = w_0, w_1, ..` of `T^w` and tests `family[n]`
/// above `v_n`, the first child of `w_n` (never `w_{n+1}`, the last child).
/// At finite depth the walk can run out, so every pair `(n, v ≥ w)` is then
/// scanned in order.
pub fn diagonalization_search(
    family: &[Vec<Portrait>],
    w: &Vertex,
    ambient: &TreeGroup,
    budget: Budget,
) -> Result<DiagonalHit> {
    ambient.seq().check_vertex(w)?;
    let mut union: HashSet<&Portrait> = HashSet::new();
    for part in family {
        union.extend(part.iter());
    }
    let elements = ambient.elements(budget)?;
    let missing = elements.iter().filter(|g| !union.contains(g)).count();
    if missing > 0 {
        return Err(Error::NotACover { missing });
    }
    let seq = ambient.seq();
    let mut wn = w.clone();
    for (n, part) in family.iter().enumerate() {
        if wn.level() >= seq.depth() {
            break;
        }
        let vn = wn.child(0);
        if let Fullness::Full(certificate) = is_full_above(part, &vn, ambient, budget)? {
            return Ok(DiagonalHit { index: n, vertex: vn, on_branch: true, certificate });
        }
        wn = wn.child(seq.degree(wn.level()) - 1);
    }
    for (n, part) in family.iter().enumerate() {
        for v in seq.subtree_vertices(w) {
            if let Fullness::Full(certificate) = is_full_above(part, &v, ambient, budget)? {
                return Ok(DiagonalHit { index: n, vertex: v, on_branch: false, certificate });
            }
        }
    }
    Err(Error::SearchExhausted)
}

/// All products `a·b` with `a, b ∈ set`, deduplicated.
pub fn product_set(left: &[Portrait], right: &[Portrait]) -> Result<Vec<Portrait>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in left {
        for b in right {
            let p = a.compose(b)?;
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// `set ∪ set⁻¹`, first occurrences kept in order.
pub fn symmetrize(set: &[Portrait]) -> Vec<Portrait> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in set.iter().cloned().chain(set.iter().map(Portrait::invert)) {
        if seen.insert(a.clone()) {
            out.push(a);
        }
    }
    out
}

/// Finite syndetic check: if the translates `g_n A` cover the
/// ambient group, then for some `v ≥ w` the set `A²` (with `A` symmetrized)
/// is full above `v`.
pub fn syndetic_square_full(
    set: &[Portrait],
    translates: &[Portrait],
    w: &Vertex,
    ambient: &TreeGroup,
    budget: Budget,
) -> Result<FullnessCertificate> {
    let family = translates
        .iter()
        .map(|g| set.iter().map(|a| g.compose(a)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let hit = diagonalization_search(&family, w, ambient, budget)?;
    let sym = symmetrize(set);
    let square = product_set(&sym, &sym)?;
    match is_full_above(&square, &hit.vertex, ambient, budget)? {
        Fullness::Full(cert) => Ok(cert),
        Fullness::Refuted(_) => Err(Error::SearchExhausted),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContainmentReport {
    pub x: Portrait,
    pub w: Vertex,
    /// Letters from `A ∪ A⁻¹` used for one commutator of `rist(w)`.
    pub letters: usize,
    /// `cw(rist(w))`.
    pub k: usize,
    pub bound: usize,
    /// Pairs `(g, h)` of `rist(w)` for which `[g,h] = [g̃,[h̃,x]]` was checked.
    pub identities_checked: usize,
    /// `D(rist(w)) ⊆ (A ∪ A⁻¹)^{bound}` by membership.
    pub verified: bool,
}

/// Replays the containment `D(rist(w)) ⊆ A^{10k}` for `A` full above `v`.
///
/// `A` is treated as symmetric. `x` is the first non-trivial element of `A`
/// in `rist(v)`, and `w` the lexicographically least vertex `≥ v` that `x` moves.
pub fn comm_width_containment(
    set: &[Portrait],
    v: &Vertex,
    ambient: &TreeGroup,
    budget: Budget,
) -> Result<ContainmentReport> {
    let cert = match is_full_above(set, v, ambient, budget)? {
        Fullness::Full(c) => c,
        Fullness::Refuted(_) => return Err(Error::Precondition("set is not full above v".into())),
    };
    let rist_v = ambient.rigid_stabilizer(v)?;
    let x = set
        .iter()
        .find(|a| !a.is_identity() && rist_v.contains(a))
        .cloned()
        .ok_or_else(|| Error::Precondition("set meets rist(v) only in the identity".into()))?;
    let seq = ambient.seq();
    let w = seq
        .subtree_vertices(v)
        .into_iter()
        .filter(|u| x.act(u).map(|xu| &xu != u).unwrap_or(false))
        .min()
        .expect("a non-trivial element of rist(v) moves a vertex below v");

    let sym = symmetrize(set);
    let sym_set: HashSet<&Portrait> = sym.iter().collect();
    let rist_w = ambient.rigid_stabilizer(&w)?;
    let rist_w_elems = rist_w.elements(budget)?;
    let x_inv = x.invert();
    let mut identities_checked = 0;
    for g in &rist_w_elems {
        let gt = cert.lift(g).expect("certificate covers rist(v)");
        for h in &rist_w_elems {
            let ht = cert.lift(h).expect("certificate covers rist(v)");
            let word = [gt.clone(), ht.clone(), x.clone(), ht.invert(), x_inv.clone(), gt.invert(), x.clone(), ht.clone(), x_inv.clone(), ht.invert()];
            if !word.iter().all(|l| sym_set.contains(l)) {
                return Err(Error::Precondition("a letter lies outside A ∪ A⁻¹".into()));
            }
            let product = word.iter().skip(1).try_fold(word[0].clone(), |acc, l| acc.compose(l))?;
            if product != g.commutator(h)? {
                return Ok(ContainmentReport {
                    x,
                    w,
                    letters: word.len(),
                    k: 0,
                    bound: 0,
                    identities_checked,
                    verified: false,
                });
            }
            identities_checked += 1;
        }
    }

    let k = rist_w.leaf_group().commutator_width(budget)?;
    let bound = 10 * k;
    let derived = rist_w.derived_subgroup().elements(budget)?;
    let power = power_set(&sym, bound, ambient, budget)?;
    let verified = derived.iter().all(|d| power.contains(d));
    Ok(ContainmentReport { x, w, letters: 10, k, bound, identities_checked, verified })
}

/// `set^m`: products of exactly `m` elements.
fn power_set(set: &[Portrait], m: usize, ambient: &TreeGroup, budget: Budget) -> Result<HashSet<Portrait>> {
    let mut current: HashSet<Portrait> = HashSet::new();
    current.insert(ambient.identity());
    for _ in 0..m {
        let mut next = HashSet::new();
        for p in &current {
            for a in set {
                next.insert(p.compose(a)?);
            }
        }
        if next.len() > budget.max_elements {
            return Err(Error::BudgetExceeded { budget: budget.max_elements });
        }
        current = next;
    }
    Ok(current)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrigorchukDerangement {
    pub n: usize,
    pub depth: usize,
    pub z: Portrait,
    /// Each factor `x_v` lies in `rist(v)` of the depth quotient.
    pub factors_in_rist: bool,
    pub derangement: bool,
}

impl GrigorchukDerangement {
    pub fn holds(&self) -> bool {
        self.factors_in_rist && self.derangement
    }
}

/// `z = ∏_{v ∈ V_n} x_v` with `x_v` the copy of `x = (ca, ac)` below `v`.
pub fn grigorchuk_derangement(n: usize, depth: usize) -> Result<GrigorchukDerangement> {
    if depth < n + 2 {
        return Err(Error::Precondition("need depth >= n + 2".into()));
    }
    let group = RecursionTable::grigorchuk().quotient_group(depth)?;
    let seq = group.seq().clone();
    let x = element_x(depth - n)?;
    let mut z = Portrait::identity(&seq);
    let mut factors_in_rist = true;
    for v in seq.level_vertices(n)? {
        let xv = Portrait::graft(&seq, &v, &x)?;
        factors_in_rist &= group.rigid_stabilizer(&v)?.contains(&xv);
        z = z.compose(&xv)?;
    }
    let derangement = z.is_derangement_of_level(n + 2)?;
    Ok(GrigorchukDerangement { n, depth, z, factors_in_rist, derangement })
}
