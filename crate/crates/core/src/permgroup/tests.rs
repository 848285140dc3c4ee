use super::*;
use alloc::vec;
use proptest::prelude::*;

fn p(n: usize, cycles: &[&[usize]]) -> Perm {
    Perm::from_cycles(n, cycles).unwrap()
}

fn group(n: usize, gens: Vec<Perm>) -> PermGroup {
    PermGroup::new(n, gens).unwrap()
}

fn big(n: u128) -> BigUint {
    BigUint::from(n)
}

/// Oracle: closure of the full commutator set, by brute force over all pairs.
fn brute_derived(g: &PermGroup) -> BTreeSetOf {
    let elems = g.elements(Budget::default()).unwrap();
    let mut gens = Vec::new();
    for a in &elems {
        for b in &elems {
            gens.push(a.commutator(b));
        }
    }
    let closure = PermGroup::new(g.degree(), gens).unwrap();
    closure.elements(Budget::default()).unwrap().into_iter().collect()
}

type BTreeSetOf = alloc::collections::BTreeSet<Perm>;

/// Oracle: least N with products of N commutators covering D(G), over raw sets.
fn brute_commutator_width(g: &PermGroup) -> usize {
    let elems = g.elements(Budget::default()).unwrap();
    let derived = brute_derived(g);
    if derived.len() == 1 {
        return 0;
    }
    let mut comms = BTreeSetOf::new();
    for a in &elems {
        for b in &elems {
            comms.insert(a.commutator(b));
        }
    }
    let mut layer = comms.clone();
    let mut k = 1;
    while layer.len() < derived.len() {
        let mut next = BTreeSetOf::new();
        for x in &layer {
            for c in &comms {
                next.insert(x.compose(c));
            }
        }
        layer = next;
        k += 1;
    }
    k
}

#[test]
fn trivial_group_has_identity_only() {
    let g = PermGroup::trivial(3);
    assert_eq!(g.elements(Budget::default()).unwrap(), vec![Perm::identity(3)]);
    assert_eq!(g.order(), big(1));
    assert_eq!(g.orbits(), vec![vec![0], vec![1], vec![2]]);
    assert!(g.is_perfect());
    assert_eq!(g.commutator_width(Budget::default()).unwrap(), 0);
    assert!(g.point_stabilizer(0).is_trivial());
}

#[test]
fn s3_from_transposition_and_three_cycle() {
    let g = group(3, vec![p(3, &[&[0, 1]]), p(3, &[&[0, 1, 2]])]);
    assert_eq!(g.elements(Budget::default()).unwrap().len(), 6);
    assert_eq!(g.order(), big(6));
}

#[test]
fn named_groups() {
    for d in 1..=7u128 {
        let fact: u128 = (1..=d).product();
        assert_eq!(PermGroup::symmetric(d as usize).order(), big(fact));
        let alt = if d >= 2 { fact / 2 } else { 1 };
        assert_eq!(PermGroup::alternating(d as usize).order(), big(alt));
        assert_eq!(PermGroup::cyclic(d as usize).order(), big(d));
    }
    assert_eq!(PermGroup::from_name("Alt(6)").unwrap().order(), big(360));
    assert_eq!(PermGroup::from_name(" Sym(4) ").unwrap().order(), big(24));
    assert!(PermGroup::from_name("Foo(3)").is_err());
    assert!(PermGroup::from_name("Alt(x)").is_err());
}

#[test]
fn a6_closure_has_360_elements() {
    let a6 = PermGroup::alternating(6);
    assert_eq!(a6.elements(Budget::default()).unwrap().len(), 360);
}

#[test]
fn element_budget_is_enforced() {
    let s6 = PermGroup::symmetric(6);
    assert_eq!(s6.elements(Budget::new(100)), Err(Error::BudgetExceeded { budget: 100 }));
    assert_eq!(s6.commutator_width(Budget::new(100)), Err(Error::BudgetExceeded { budget: 100 }));
}

#[test]
fn orbits_examples() {
    assert_eq!(group(3, vec![p(3, &[&[0, 1, 2]])]).orbits(), vec![vec![0, 1, 2]]);
    assert_eq!(group(3, vec![p(3, &[&[0, 1]])]).orbits(), vec![vec![0, 1], vec![2]]);
}

#[test]
fn k_transitivity() {
    let a6 = PermGroup::alternating(6);
    assert!(a6.is_k_transitive(1));
    assert!(a6.is_k_transitive(2));
    assert!(a6.is_k_transitive(4));
    assert!(!a6.is_k_transitive(5));
    let c3 = PermGroup::cyclic(3);
    assert!(c3.is_k_transitive(1));
    assert!(!c3.is_k_transitive(2));
    assert!(PermGroup::symmetric(5).is_k_transitive(5));
}

#[test]
fn point_stabilizers() {
    let s3 = PermGroup::symmetric(3);
    assert_eq!(s3.point_stabilizer(0).order(), big(2));
    let a6 = PermGroup::alternating(6);
    for x in 0..6 {
        let st = a6.point_stabilizer(x);
        assert_eq!(st.order(), big(60));
        assert!(st.generators().iter().all(|g| g.apply(x) == x));
    }
}

#[test]
fn generated_by_point_stabilizers() {
    assert!(PermGroup::alternating(6).is_generated_by_point_stabilizers());
    assert!(PermGroup::alternating(5).is_generated_by_point_stabilizers());
    assert!(!PermGroup::cyclic(3).is_generated_by_point_stabilizers());
    assert!(!PermGroup::symmetric(2).is_generated_by_point_stabilizers());
}

#[test]
fn derived_subgroups_match_brute_force() {
    let cases = vec![
        PermGroup::cyclic(5),
        PermGroup::symmetric(3),
        PermGroup::symmetric(4),
        PermGroup::symmetric(5),
        PermGroup::alternating(4),
        PermGroup::alternating(5),
        // dihedral group of the square
        group(4, vec![p(4, &[&[0, 1, 2, 3]]), p(4, &[&[0, 2]])]),
    ];
    for g in cases {
        let fast: BTreeSetOf =
            g.derived_subgroup().elements(Budget::default()).unwrap().into_iter().collect();
        assert_eq!(fast, brute_derived(&g), "degree {}", g.degree());
    }
}

#[test]
fn derived_subgroup_of_symmetric_is_alternating() {
    for d in 2..=6 {
        let d_sym = PermGroup::symmetric(d).derived_subgroup();
        assert!(d_sym.same_group(&PermGroup::alternating(d)), "d={d}");
    }
    let a6 = PermGroup::alternating(6);
    assert!(a6.derived_subgroup().same_group(&a6));
}

#[test]
fn perfection() {
    assert!(PermGroup::alternating(5).is_perfect());
    assert!(!PermGroup::symmetric(5).is_perfect());
    assert!(!PermGroup::alternating(4).is_perfect());
}

#[test]
fn commutator_width_against_brute_force() {
    let cases = vec![
        PermGroup::cyclic(4),
        PermGroup::symmetric(3),
        PermGroup::symmetric(4),
        PermGroup::alternating(4),
        PermGroup::alternating(5),
        group(4, vec![p(4, &[&[0, 1, 2, 3]]), p(4, &[&[0, 2]])]),
    ];
    for g in cases {
        let w = g.commutator_width(Budget::default()).unwrap();
        assert_eq!(w, brute_commutator_width(&g), "degree {}", g.degree());
    }
    assert_eq!(PermGroup::cyclic(6).commutator_width(Budget::default()).unwrap(), 0);
    assert_eq!(PermGroup::alternating(5).commutator_width(Budget::default()).unwrap(), 1);
    assert_eq!(PermGroup::alternating(6).commutator_width(Budget::default()).unwrap(), 1);
}

#[test]
fn commutator_layers_are_strict_until_width() {
    let g = PermGroup::symmetric(4);
    let layers = g.commutator_layers(Budget::default()).unwrap();
    let derived = usize::try_from(&g.derived_subgroup().order()).unwrap();
    assert_eq!(*layers.last().unwrap(), derived);
    assert!(layers[layers.len() - 2] < derived);
}

#[test]
fn derangement_examples() {
    let c3 = PermGroup::cyclic(3);
    let d = c3.find_derangement().unwrap();
    assert!(d.is_derangement());
    assert_eq!(d.order(), 3);
    assert_eq!(PermGroup::trivial(2).find_derangement(), None);
    assert_eq!(PermGroup::trivial(1).find_derangement(), None);
    assert!(PermGroup::alternating(6).find_derangement().unwrap().is_derangement());
}

#[test]
fn derived_subgroup_is_normal() {
    let g = PermGroup::symmetric(5);
    let d = g.derived_subgroup();
    let chain = d.stab_chain();
    for n in d.generators() {
        for s in g.generators() {
            assert!(chain.contains(&n.conjugate_by(s)));
        }
    }
}

fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Perm::from_images(images).unwrap())
}

fn arb_group() -> impl Strategy<Value = PermGroup> {
    (2usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(arb_perm(n), 0..=3)
            .prop_map(move |gens| PermGroup::new(n, gens).unwrap())
    })
}

proptest! {
    #[test]
    fn orbit_stabilizer(g in arb_group()) {
        let order = g.order();
        for x in 0..g.degree() {
            let orbit = g.orbit(x).len();
            prop_assert_eq!(order.clone(), g.point_stabilizer(x).order() * BigUint::from(orbit));
        }
    }

    #[test]
    fn schreier_sims_agrees_with_closure(g in arb_group()) {
        let elems = g.elements(Budget::default()).unwrap();
        prop_assert_eq!(BigUint::from(elems.len()), g.order());
        let chain = g.stab_chain();
        let iterated: BTreeSetOf = chain.elements().collect();
        prop_assert_eq!(iterated, elems.iter().cloned().collect::<BTreeSetOf>());
    }

    #[test]
    fn jordan_on_transitive_groups(g in arb_group()) {
        if g.is_transitive() {
            let d = g.find_derangement();
            prop_assert!(d.is_some());
            let d = d.unwrap();
            prop_assert!(d.is_derangement() && g.contains(&d));
            prop_assert!(d.cycles().iter().all(|c| c.len() >= 2));
        }
    }
}
