//! The verification suites behind `branchlab verify`.

use branchlab_core::selfsimilar::k_subgroup_indices;
use branchlab_core::verifier::{
    commutator_trick, diagonalization_search, grigorchuk_derangement, is_full_above, Fullness,
};
use branchlab_core::{BigUint, Budget, DegreeSequence, Portrait, TreeGroup, Vertex};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::{vertex_key, CertificateJson, PortraitJson, WitnessJson};
use crate::sample::{self, DEFAULT_SEED};
use crate::CliError;

pub const SUITES: [&str; 6] = ["comm-trick", "fullness", "diagonal", "grig-derangement", "grig-indices", "jordan"];

#[derive(Clone, Debug, Default)]
pub struct SuiteParams {
    pub depth: Option<usize>,
    pub samples: Option<usize>,
    pub degree: Option<usize>,
    pub seed: Option<u64>,
    pub levels: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: usize,
    pub passed: usize,
    pub ok: bool,
    pub details: Value,
}

impl SuiteReport {
    fn new(suite: &str, seed: Option<u64>, checks: usize, passed: usize, details: Value) -> SuiteReport {
        SuiteReport { suite: suite.into(), seed, checks, passed, ok: checks == passed, details }
    }
}

/// Orders as JSON numbers when they fit, decimal strings otherwise.
pub fn big_json(n: &BigUint) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::String(n.to_string()))
}

pub fn run(name: &str, params: &SuiteParams, budget: Budget) -> Result<SuiteReport, CliError> {
    let seed = params.seed.unwrap_or(DEFAULT_SEED);
    match name {
        "grig-indices" => grig_indices(params.depth.unwrap_or(7)),
        "grig-derangement" => grig_derangement(params.levels.as_deref().unwrap_or(&[0, 1, 2])),
        "comm-trick" => comm_trick(params.samples.unwrap_or(1000), params.depth.unwrap_or(4), seed),
        "fullness" => fullness(params.samples.unwrap_or(100), params.depth.unwrap_or(3), seed, budget),
        "diagonal" => diagonal(params.samples.unwrap_or(50), params.depth.unwrap_or(3), seed, budget),
        "jordan" => jordan(params.samples.unwrap_or(100), params.degree.unwrap_or(10), seed),
        _ => Err(CliError::Usage(format!("unknown suite {name:?}; expected one of {}", SUITES.join(", ")))),
    }
}

pub fn grig_indices(max_depth: usize) -> Result<SuiteReport, CliError> {
    let ix = k_subgroup_indices(max_depth)?;
    let rows: Vec<Value> = ix
        .rows
        .iter()
        .map(|r| {
            json!({
                "depth": r.depth,
                "order_g": big_json(&r.order_g),
                "order_k": big_json(&r.order_k),
                "order_k1": big_json(&r.order_k1),
                "k_over_k1": big_json(&r.index_k_over_k1),
                "g_over_k": big_json(&r.index_g_over_k),
                "y_generates": r.y_generates,
            })
        })
        .collect();
    let stab = |s: &Option<branchlab_core::selfsimilar::Stabilized>| {
        s.as_ref().map(|s| json!({ "value": big_json(&s.value), "depths": [s.depths.0, s.depths.1] }))
    };
    let is = |s: &Option<branchlab_core::selfsimilar::Stabilized>, v: u32| {
        s.as_ref().is_some_and(|s| s.value == BigUint::from(v) && s.depths.1 <= 8)
    };
    let checks = [
        is(&ix.k_over_k1, 4),
        is(&ix.g_over_k, 16),
        ix.k_normal,
        ix.rows.iter().all(|r| r.y_generates != Some(false)),
    ];
    let details = json!({
        "rows": rows,
        "k_over_k1": stab(&ix.k_over_k1),
        "g_over_k": stab(&ix.g_over_k),
        "k_normal": ix.k_normal,
    });
    Ok(SuiteReport::new("grig-indices", None, checks.len(), checks.iter().filter(|&&c| c).count(), details))
}

pub fn grig_derangement(levels: &[usize]) -> Result<SuiteReport, CliError> {
    let mut rows = Vec::new();
    let mut passed = 0;
    for &n in levels {
        let w = grigorchuk_derangement(n, n + 2)?;
        let group = branchlab_core::selfsimilar::RecursionTable::grigorchuk().quotient_group(n + 2)?;
        let in_rist = group.rigid_level_stabilizer(n)?.contains(&w.z);
        // the same element one level deeper, truncated back
        let deeper = grigorchuk_derangement(n, n + 3)?;
        let truncated = deeper.z.truncate(n + 2)?;
        let truncation_ok = deeper.holds() && truncated.is_derangement_of_level(n + 2)? && truncated == w.z;
        let ok = w.holds() && in_rist && truncation_ok;
        passed += ok as usize;
        rows.push(json!({
            "n": n,
            "depth": n + 2,
            "derangement_of_level": n + 2,
            "derangement": w.derangement,
            "factors_in_rist": w.factors_in_rist,
            "in_rist_level": in_rist,
            "truncation_commutes": truncation_ok,
            "z": PortraitJson::from_portrait(&w.z),
        }));
    }
    Ok(SuiteReport::new("grig-derangement", None, levels.len(), passed, json!({ "levels": rows })))
}

/// `∏ gᵢ τ^{eᵢ} gᵢ⁻¹` recomputed from scratch.
fn replay(w: &branchlab_core::verifier::CommutatorWitness<Portrait>) -> Result<Portrait, CliError> {
    let mut acc = Portrait::identity(w.tau.seq());
    for (g, e) in &w.conjugators {
        let t = if *e > 0 { w.tau.clone() } else { w.tau.invert() };
        acc = acc.compose(&g.compose(&t)?.compose(&g.invert())?)?;
    }
    Ok(acc)
}

pub fn comm_trick(samples: usize, max_depth: usize, seed: u64) -> Result<SuiteReport, CliError> {
    let mut rng = sample::rng(seed);
    let mut passed = 0;
    let mut first_failure = None;
    for i in 0..samples {
        let depth = rng.random_range(1..=max_depth.max(1));
        let inst = sample::random_trick_instance(&mut rng, depth);
        let w = commutator_trick(&inst.tau, &inst.s1, &inst.s2, inst.level)?;
        let ok = w.conjugators.len() == 4
            && w.verify()
            && w.target == inst.s1.commutator(&inst.s2)?
            && replay(&w)? == w.target;
        if ok {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(json!({ "instance": i, "witness": WitnessJson::from_witness(&w) }));
        }
    }
    let details = json!({ "max_depth": max_depth, "conjugators": 4, "first_failure": first_failure });
    Ok(SuiteReport::new("comm-trick", Some(seed), samples, passed, details))
}

fn binary_ambient(depth: usize) -> Result<TreeGroup, CliError> {
    Ok(TreeGroup::full(&DegreeSequence::constant(2, depth)?))
}

pub fn fullness(samples: usize, depth: usize, seed: u64, budget: Budget) -> Result<SuiteReport, CliError> {
    let ambient = binary_ambient(depth)?;
    let elements = ambient.elements(budget)?;
    let vertices: Vec<Vertex> =
        ambient.seq().subtree_vertices(&Vertex::root()).into_iter().filter(|v| v.level() < depth).collect();
    let mut rng = sample::rng(seed);
    let (mut full, mut refuted, mut passed) = (0, 0, 0);
    for _ in 0..samples {
        let v = vertices.choose(&mut rng).unwrap().clone();
        let p = [0.1, 0.3, 0.6, 0.9, 1.0][rng.random_range(0..5)];
        let set: Vec<Portrait> = elements.iter().filter(|_| rng.random_bool(p)).cloned().collect();
        let ok = match is_full_above(&set, &v, &ambient, budget)? {
            Fullness::Full(cert) => {
                full += 1;
                cert.verify(&set, &ambient)
            }
            Fullness::Refuted(r) => {
                refuted += 1;
                let target = r.section(&v)?;
                ambient.rigid_stabilizer(&v)?.contains(&r)
                    && !set.iter().any(|a| a.fixes(&v).unwrap_or(false) && a.section(&v).ok().as_ref() == Some(&target))
            }
        };
        passed += ok as usize;
    }
    let details = json!({ "depth": depth, "full": full, "refuted": refuted });
    Ok(SuiteReport::new("fullness", Some(seed), samples, passed, details))
}

pub fn diagonal(covers: usize, depth: usize, seed: u64, budget: Budget) -> Result<SuiteReport, CliError> {
    let ambient = binary_ambient(depth)?;
    let mut rng = sample::rng(seed);
    let mut passed = 0;
    let mut hits = Vec::new();
    for _ in 0..covers {
        let family = sample::random_cover(&mut rng, &ambient, 3, budget);
        let hit = diagonalization_search(&family, &Vertex::root(), &ambient, budget)?;
        let part = &family[hit.index];
        let ok = hit.certificate.verify(part, &ambient)
            && is_full_above(part, &hit.vertex, &ambient, budget)?.is_full();
        passed += ok as usize;
        if hits.len() < 5 {
            hits.push(json!({ "index": hit.index, "vertex": vertex_key(&hit.vertex), "on_branch": hit.on_branch }));
        }
    }
    let details = json!({ "depth": depth, "parts": 3, "first_hits": hits });
    Ok(SuiteReport::new("diagonal", Some(seed), covers, passed, details))
}

pub fn jordan(samples: usize, max_degree: usize, seed: u64) -> Result<SuiteReport, CliError> {
    if max_degree < 2 {
        return Err(CliError::Usage("jordan needs --degree >= 2".into()));
    }
    let mut rng = sample::rng(seed);
    let mut passed = 0;
    let mut degrees = vec![0usize; max_degree + 1];
    for _ in 0..samples {
        let g = sample::random_transitive_group(&mut rng, max_degree);
        degrees[g.degree()] += 1;
        if g.find_derangement().is_some_and(|x| x.is_derangement() && g.contains(&x)) {
            passed += 1;
        }
    }
    let details = json!({ "max_degree": max_degree, "found": passed, "degree_counts": degrees });
    Ok(SuiteReport::new("jordan", Some(seed), samples, passed, details))
}

/// Replays a saved witness or certificate file.
pub fn replay_file(path: &str) -> Result<SuiteReport, CliError> {
    let value: Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if value.get("conjugators").is_some() {
        let w: WitnessJson = serde_json::from_value(value)?;
        let w = w.to_witness()?;
        let ok = w.verify() && replay(&w)? == w.target;
        return Ok(SuiteReport::new("replay-witness", None, 1, ok as usize, json!({ "file": path })));
    }
    #[derive(serde::Deserialize)]
    struct CertFile {
        certificate: CertificateJson,
        set: Vec<PortraitJson>,
    }
    let f: CertFile = serde_json::from_value(value)?;
    let cert = f.certificate.to_certificate()?;
    let set = f.set.iter().map(PortraitJson::to_portrait).collect::<Result<Vec<_>, _>>()?;
    let seq = set.first().map(|p| p.seq().clone()).ok_or_else(|| CliError::Usage("empty set".into()))?;
    let ambient = TreeGroup::full(&seq);
    let ok = cert.verify(&set, &ambient);
    Ok(SuiteReport::new("replay-certificate", None, 1, ok as usize, json!({ "file": path })))
}
