//! Acceptance gate: one PASS/FAIL line per criterion.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use branchlab::sample::{self, random_portrait, random_tower_spec, random_transitive_group};
use branchlab::suites;
use branchlab_core::burgermozes::{check_theorem_hypotheses, tower_match, ColoredBall};
use branchlab_core::selfsimilar::element_x;
use branchlab_core::wreathtower::{build_tower, TowerSpec};
use branchlab_core::{BigUint, Budget, DegreeSequence, Error, Perm, PermGroup, Portrait, TreeGroup, Vertex};
use rand::Rng;

const SEED: u64 = 20260101;

struct Outcome {
    ok: bool,
    note: String,
}

fn check(ok: bool, note: impl Into<String>) -> Outcome {
    Outcome { ok, note: note.into() }
}

fn grig_indices() -> Outcome {
    let r = suites::grig_indices(8).unwrap();
    let d = &r.details;
    let (kk, gk) = (&d["k_over_k1"], &d["g_over_k"]);
    let ok = r.ok && kk["value"] == 4 && gk["value"] == 16;
    check(ok, format!("|K/K1| = {} at depths {}, |G/K| = {} at depths {}", kk["value"], kk["depths"], gk["value"], gk["depths"]))
}

fn grig_derangements() -> Outcome {
    let r = suites::grig_derangement(&[0, 1, 2]).unwrap();
    let z0 = &r.details["levels"][0]["z"];
    let x = branchlab::formats::PortraitJson::from_portrait(&element_x(2).unwrap());
    let z0_is_x = *z0 == serde_json::to_value(&x).unwrap();
    check(r.ok && z0_is_x, format!("{}/3 levels, z = x for n = 0: {z0_is_x}", r.passed))
}

fn commutator_trick() -> Outcome {
    let r = suites::comm_trick(1000, 4, SEED).unwrap();
    check(r.ok && r.checks == 1000, format!("{}/{} witnesses with 4 conjugates", r.passed, r.checks))
}

fn ore() -> Outcome {
    let widths: Vec<usize> =
        (5..=7).map(|n| PermGroup::alternating(n).commutator_width(Budget::default()).unwrap()).collect();
    check(widths == [1, 1, 1], format!("cw(A5, A6, A7) = {widths:?}"))
}

fn jordan() -> Outcome {
    let r = suites::jordan(100, 10, SEED).unwrap();
    check(r.ok, format!("{}/{} transitive groups have a derangement", r.passed, r.checks))
}

/// Closure of the generators by breadth-first search.
fn bfs_order(g: &PermGroup) -> usize {
    let mut seen: HashSet<Perm> = HashSet::from([g.identity()]);
    let mut frontier = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for s in g.generators() {
            let y = s.compose(&x);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

fn wreath_structure() -> Outcome {
    let mut rng = sample::rng(SEED);
    let mut bad = Vec::new();
    for i in 0..20 {
        let spec = random_tower_spec(&mut rng, 100_000);
        let seq = spec.degree_sequence();
        let product: BigUint = spec
            .factors()
            .iter()
            .enumerate()
            .map(|(l, a)| a.order().pow(seq.level_size(l) as u32))
            .product();
        let t = build_tower(&spec);
        let bfs = bfs_order(t.group().leaf_group());
        let transitive = (1..=spec.depth()).all(|n| t.group().level_group(n).unwrap().is_transitive());
        if t.order() != product || BigUint::from(bfs) != product || !transitive {
            bad.push(i);
        }
    }
    check(bad.is_empty(), format!("20 random towers, mismatches: {bad:?}"))
}

fn burger_mozes() -> Outcome {
    let s3 = PermGroup::symmetric(3);
    let ball = ColoredBall::canonical(3, 2).unwrap();
    let n = ball.enumerate_stabilizer(&s3, Budget::default()).unwrap().len();
    let h = s3.point_stabilizer(0).order();
    let formula = s3.order() * h.pow(3);
    let matched = tower_match(&s3, 2).unwrap().matches();
    let a6 = check_theorem_hypotheses(&PermGroup::alternating(6)).all_true();
    check(
        BigUint::from(n) == formula && n == 48 && matched && a6,
        format!("|U_o| = {n}, tower match {matched}, A6 hypotheses {a6}"),
    )
}

fn nikolov() -> Outcome {
    let budget = Budget::default();
    let (mut computed, mut skipped, mut bad) = (0, Vec::new(), Vec::new());
    for depth in 1..=3 {
        let spec = TowerSpec::new(vec![PermGroup::alternating(5); depth]).unwrap();
        let t = build_tower(&spec);
        let mut groups: Vec<(String, PermGroup)> = Vec::new();
        for m in 1..=depth {
            let trunc = build_tower(&TowerSpec::new(spec.factors()[..m].to_vec()).unwrap());
            groups.push((format!("W_{m} in depth {depth}"), trunc.group().leaf_group().clone()));
        }
        let mut v = Vertex::root();
        for _ in 0..depth {
            v = v.child(0);
            let rist = t.rigid_stabilizer(&v).unwrap();
            if !rist.is_trivial() {
                groups.push((format!("rist({:?}) in depth {depth}", v.word()), rist.leaf_group().clone()));
            }
        }
        for (name, g) in groups {
            match g.commutator_width(budget) {
                Ok(1) => computed += 1,
                Ok(k) => bad.push(format!("{name}: {k}")),
                Err(Error::BudgetExceeded { .. }) => skipped.push(name),
                Err(e) => bad.push(format!("{name}: {e}")),
            }
        }
    }
    check(
        bad.is_empty() && computed > 0,
        format!("{computed} widths equal 1, {} over budget ({}) {bad:?}", skipped.len(), skipped.join("; ")),
    )
}

fn property_suites() -> Outcome {
    let mut rng = sample::rng(SEED);
    let mut failures = Vec::new();
    for _ in 0..200 {
        let depth = rng.random_range(1..=4);
        let seq = DegreeSequence::new((0..depth).map(|_| rng.random_range(2..=3)).collect()).unwrap();
        let (p, q, r) = (random_portrait(&mut rng, &seq), random_portrait(&mut rng, &seq), random_portrait(&mut rng, &seq));
        let id = Portrait::identity(&seq);
        let pq = p.compose(&q).unwrap();
        if pq.compose(&r).unwrap() != p.compose(&q.compose(&r).unwrap()).unwrap()
            || p.compose(&id).unwrap() != p
            || id.compose(&p).unwrap() != p
            || !p.compose(&p.invert()).unwrap().is_identity()
        {
            failures.push("group axioms");
        }
        let m = rng.random_range(0..=depth);
        if pq.truncate(m).unwrap() != p.truncate(m).unwrap().compose(&q.truncate(m).unwrap()).unwrap() {
            failures.push("truncation naturality");
        }
    }
    for _ in 0..50 {
        let g = random_transitive_group(&mut rng, 8);
        let x = rng.random_range(0..g.degree());
        if g.point_stabilizer(x).order() * g.orbit(x).len() != g.order() {
            failures.push("orbit-stabilizer (points)");
        }
    }
    for _ in 0..20 {
        let spec = random_tower_spec(&mut rng, 100_000);
        let t = build_tower(&spec);
        let seq = spec.degree_sequence();
        let tree: &TreeGroup = t.group();
        let n = rng.random_range(0..=seq.depth());
        let level = seq.level_vertices(n).unwrap();
        let v = &level[rng.random_range(0..level.len())];
        let orbit = tree.level_group(n).unwrap().orbit(seq.rank(v)).len();
        if tree.vertex_stabilizer_of(v).unwrap().order() * orbit != tree.order() {
            failures.push("orbit-stabilizer (vertices)");
        }
        let rist_n = t.rigid_level_stabilizer(n).unwrap();
        let product: BigUint = level.iter().map(|u| t.rigid_stabilizer(u).unwrap().order()).product();
        let generic = tree.rigid_level_stabilizer(n).unwrap();
        if rist_n.order() != product || !rist_n.same_group(&generic) {
            failures.push("rist product decomposition");
        }
    }
    failures.dedup();
    check(failures.is_empty(), format!("seed {SEED}, failures: {failures:?}"))
}

fn diagonalization() -> Outcome {
    let r = suites::diagonal(50, 3, SEED, Budget::default()).unwrap();
    check(r.ok && r.checks == 50, format!("{}/{} covers re-verified", r.passed, r.checks))
}

fn main() {
    let criteria: [(usize, &str, u64, fn() -> Outcome); 10] = [
        (1, "Grigorchuk indices", 60, grig_indices),
        (2, "Grigorchuk derangements", 30, grig_derangements),
        (3, "commutator trick", 60, commutator_trick),
        (4, "Ore at small scale", 120, ore),
        (5, "Jordan derangements", 30, jordan),
        (6, "wreath structure", 120, wreath_structure),
        (7, "Burger-Mozes local structure", 60, burger_mozes),
        (8, "Nikolov bound shadow", 300, nikolov),
        (9, "group-axiom and oracle suites", 120, property_suites),
        (10, "diagonalization", 60, diagonalization),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Outcome { ok: false, note: "panicked".into() });
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed <= Duration::from_secs(limit);
        failed += !ok as usize;
        println!(
            "criterion {n:>2} {}  {name}: {}  [{:.2}s, limit {limit}s]",
            if ok { "PASS" } else { "FAIL" },
            outcome.note,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
