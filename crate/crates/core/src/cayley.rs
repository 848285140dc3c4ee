//! Cayley-graph diameters of finite groups.

use alloc::vec::Vec;
use hashbrown::HashSet;
use num_bigint::BigUint;

use crate::{Budget, Error, Perm, PermGroup, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diameter {
    /// `U^n = G` first for `n = diameter`; `spheres[k]` counts the elements at
    /// distance exactly `k`.
    Generates { diameter: usize, order: usize, spheres: Vec<usize> },
    /// `⟨U⟩` is a proper subgroup of the given index.
    Proper { index: BigUint },
}

/// Diameter of the Cayley graph of `group` for the symmetric set
/// `U ∪ U⁻¹ ∪ {1}`.
pub fn cayley_diameter(group: &PermGroup, gens: &[Perm], budget: Budget) -> Result<Diameter> {
    for g in gens {
        if g.degree() != group.degree() {
            return Err(Error::DegreeMismatch { expected: group.degree(), found: g.degree() });
        }
        if !group.contains(g) {
            return Err(Error::Precondition("generator outside the group".into()));
        }
    }
    let sub = PermGroup::new(group.degree(), gens.to_vec())?;
    let (order, sub_order) = (group.order(), sub.order());
    if sub_order != order {
        return Ok(Diameter::Proper { index: order / sub_order });
    }
    let n = usize::try_from(&order).ok().filter(|&n| n <= budget.max_elements);
    let n = n.ok_or(Error::BudgetExceeded { budget: budget.max_elements })?;
    let mut steps: Vec<Perm> = Vec::new();
    for g in gens {
        for s in [g.clone(), g.inverse()] {
            if !s.is_identity() && !steps.contains(&s) {
                steps.push(s);
            }
        }
    }
    let id = group.identity();
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut frontier = alloc::vec![id];
    let mut spheres = alloc::vec![1];
    while seen.len() < n {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &steps {
                let y = s.compose(x);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        spheres.push(next.len());
        frontier = next;
    }
    Ok(Diameter::Generates { diameter: spheres.len() - 1, order: n, spheres })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn s3_with_transpositions() {
        let t = |a, b| Perm::from_cycles(3, &[&[a, b]]).unwrap();
        let d = cayley_diameter(&PermGroup::symmetric(3), &[t(0, 1), t(1, 2), t(0, 2)], Budget::default());
        assert_eq!(d.unwrap(), Diameter::Generates { diameter: 2, order: 6, spheres: vec![1, 3, 2] });
    }

    #[test]
    fn identity_does_not_generate() {
        let g = PermGroup::symmetric(4);
        let d = cayley_diameter(&g, &[Perm::identity(4)], Budget::default()).unwrap();
        assert_eq!(d, Diameter::Proper { index: BigUint::from(24u32) });
    }

    #[test]
    fn cyclic_diameter() {
        let g = PermGroup::cyclic(7);
        let d = cayley_diameter(&g, g.generators(), Budget::default()).unwrap();
        assert!(matches!(d, Diameter::Generates { diameter: 3, .. }));
    }
}
