//! Truncated iterated wreath products `W((A_i, X_i))`.
//!
//! Factor `A_0` acts at the root, so the tree has `α(i) = |X_i|`.

use alloc::vec::Vec;
use num_bigint::BigUint;

use crate::tree::{DegreeSequence, Vertex};
use crate::treegroup::TreeGroup;
use crate::{Budget, Error, Perm, PermGroup, Portrait, Result};

/// `(f, a).(x, y) = (a.x, f(a.x).y)`.
pub fn wreath_act(f: &[Perm], a: &Perm, point: (usize, usize)) -> Result<(usize, usize)> {
    let (x, y) = point;
    if f.len() != a.degree() {
        return Err(Error::DegreeMismatch { expected: a.degree(), found: f.len() });
    }
    if x >= a.degree() {
        return Err(Error::Precondition(alloc::format!("point {x} outside the top domain")));
    }
    let ax = a.apply(x);
    let b = &f[ax];
    if y >= b.degree() {
        return Err(Error::Precondition(alloc::format!("point {y} outside the bottom domain")));
    }
    Ok((ax, b.apply(y)))
}

/// `(B, Y) ≀ (A, X)` on `X × Y`, with `(x, y)` flattened to `x·|Y| + y`.
pub fn wreath_product(top: &PermGroup, bottom: &PermGroup) -> PermGroup {
    let (nx, ny) = (top.degree(), bottom.degree());
    let id_y = Perm::identity(ny);
    let flatten = |f: &[Perm], a: &Perm| {
        let images = (0..nx * ny)
            .map(|p| {
                let (x, y) = wreath_act(f, a, (p / ny, p % ny)).unwrap();
                x * ny + y
            })
            .collect();
        Perm::from_images(images).unwrap()
    };
    let mut gens = Vec::new();
    let trivial_f = alloc::vec![id_y.clone(); nx];
    for a in top.generators() {
        gens.push(flatten(&trivial_f, a));
    }
    for b in bottom.generators() {
        for x in 0..nx {
            let mut f = trivial_f.clone();
            f[x] = b.clone();
            gens.push(flatten(&f, &Perm::identity(nx)));
        }
    }
    PermGroup::new(nx * ny, gens).unwrap()
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    factors: Vec<PermGroup>,
}

impl TowerSpec {
    pub fn new(factors: Vec<PermGroup>) -> Result<TowerSpec> {
        if factors.is_empty() || factors.iter().any(|f| f.degree() < 2) {
            return Err(Error::InvalidDegrees);
        }
        Ok(TowerSpec { factors })
    }

    pub fn factors(&self) -> &[PermGroup] {
        &self.factors
    }

    pub fn depth(&self) -> usize {
        self.factors.len()
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.factors.iter().map(PermGroup::degree).collect()).unwrap()
    }

    pub fn all_transitive(&self) -> bool {
        self.factors.iter().all(PermGroup::is_transitive)
    }

    /// `∏_i |A_i|^{|V_i|}`.
    pub fn predicted_order(&self) -> BigUint {
        let seq = self.degree_sequence();
        self.factors
            .iter()
            .enumerate()
            .fold(BigUint::from(1u32), |acc, (i, f)| acc * f.order().pow(seq.level_size(i) as u32))
    }

    /// The factors from level `n` on.
    pub fn tail(&self, n: usize) -> Option<TowerSpec> {
        (n < self.depth()).then(|| TowerSpec { factors: self.factors[n..].to_vec() })
    }
}

/// A factor generator acting on the children of one vertex.
#[derive(Clone, Debug)]
struct Placed {
    vertex: Vertex,
    element: Portrait,
}

#[derive(Clone, Debug)]
pub struct TowerGroup {
    spec: TowerSpec,
    group: TreeGroup,
    placed: Vec<Placed>,
}

/// Places every generator of `A_i` at every vertex of `V_i`.
pub fn build_tower(spec: &TowerSpec) -> TowerGroup {
    let seq = spec.degree_sequence();
    let mut placed = Vec::new();
    for (i, factor) in spec.factors.iter().enumerate() {
        let below = alloc::vec![Portrait::identity(&seq.tail(i + 1)); factor.degree()];
        for a in factor.generators() {
            let local = Portrait::from_sections(a, &below).unwrap();
            for v in seq.level_vertices(i).unwrap() {
                let element = Portrait::graft(&seq, &v, &local).unwrap();
                placed.push(Placed { vertex: v, element });
            }
        }
    }
    let group = TreeGroup::new(&seq, placed.iter().map(|p| p.element.clone()).collect()).unwrap();
    TowerGroup { spec: spec.clone(), group, placed }
}

impl TowerGroup {
    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn group(&self) -> &TreeGroup {
        &self.group
    }

    pub fn seq(&self) -> &DegreeSequence {
        self.group.seq()
    }

    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    fn placed_where(&self, keep: impl Fn(&Vertex) -> bool) -> TreeGroup {
        let gens = self.placed.iter().filter(|p| keep(&p.vertex)).map(|p| p.element.clone()).collect();
        TreeGroup::new(self.seq(), gens).unwrap()
    }

    /// `st(n)`: the factors placed at levels `≥ n`.
    pub fn level_stabilizer(&self, n: usize) -> Result<TreeGroup> {
        self.seq().check_level(n)?;
        Ok(self.placed_where(|u| u.level() >= n))
    }

    /// `rist(v)`: the factors placed at vertices `u ≥ v`.
    pub fn rigid_stabilizer(&self, v: &Vertex) -> Result<TreeGroup> {
        self.seq().check_vertex(v)?;
        Ok(self.placed_where(|u| v.is_below(u)))
    }

    /// `rist(n)`; for towers this equals `st(n)`.
    pub fn rigid_level_stabilizer(&self, n: usize) -> Result<TreeGroup> {
        self.seq().check_level(n)?;
        let mut gens = Vec::new();
        for v in self.seq().level_vertices(n)? {
            gens.extend(self.rigid_stabilizer(&v)?.generators().iter().cloned());
        }
        TreeGroup::new(self.seq(), gens)
    }

    /// `(n + 1, ∏_{v ∈ V_n} x_v)` with `x_v` a derangement of the children of `v`.
    pub fn locally_has_derangements_witness(&self, n: usize) -> Result<(usize, Portrait)> {
        if n >= self.spec.depth() {
            return Err(Error::LevelOutOfRange { level: n, depth: self.spec.depth() - 1 });
        }
        let factor = &self.spec.factors[n];
        if !factor.is_transitive() {
            return Err(Error::IntransitiveFactor(n));
        }
        let x = factor.find_derangement().expect("transitive groups on two or more points have one");
        let seq = self.seq();
        let local = Portrait::from_sections(&x, &alloc::vec![Portrait::identity(&seq.tail(n + 1)); x.degree()])?;
        let mut z = Portrait::identity(seq);
        for v in seq.level_vertices(n)? {
            z = z.compose(&Portrait::graft(seq, &v, &local)?)?;
        }
        Ok((n + 1, z))
    }

    /// Whether `D(rist(n)) = rist(n)` on this truncation.
    pub fn check_sji_criterion(&self, n: usize) -> Result<bool> {
        let rist = self.rigid_level_stabilizer(n)?;
        Ok(rist.derived_subgroup().order() == rist.order())
    }

    /// Commutator widths of the whole truncation and of `rist(v)` along the
    /// leftmost branch, skipping groups beyond the budget.
    pub fn commutator_widths(&self, budget: Budget) -> Vec<(Option<Vertex>, Result<usize>)> {
        let mut out = alloc::vec![(None, self.group.leaf_group().commutator_width(budget))];
        let mut v = Vertex::root();
        for _ in 0..self.seq().depth() {
            v = v.child(0);
            let rist = self.rigid_stabilizer(&v).unwrap();
            out.push((Some(v.clone()), rist.leaf_group().commutator_width(budget)));
        }
        out
    }
}
