//! JSON formats for permutations, groups, portraits, tables, towers, balls
//! and witnesses.

use std::collections::BTreeMap;

use branchlab_core::burgermozes::ColoredBall;
use branchlab_core::selfsimilar::{RecursionTable, Rule, Word};
use branchlab_core::verifier::{CommutatorWitness, FullnessCertificate};
use branchlab_core::wreathtower::TowerSpec;
use branchlab_core::{DegreeSequence, Perm, PermGroup, Portrait, Vertex};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub fn perm_to_json(p: &Perm) -> Vec<usize> {
    p.images().collect()
}

pub fn perm_from_json(images: &[usize]) -> Result<Perm, CliError> {
    Ok(Perm::from_images(images.to_vec())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub n: usize,
    pub gens: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn from_group(g: &PermGroup) -> GroupJson {
        GroupJson { n: g.degree(), gens: g.generators().iter().map(perm_to_json).collect() }
    }

    pub fn to_group(&self) -> Result<PermGroup, CliError> {
        let gens = self.gens.iter().map(|g| perm_from_json(g)).collect::<Result<_, _>>()?;
        Ok(PermGroup::new(self.n, gens)?)
    }
}

/// A group given by name (`"Alt(5)"`) or by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    Named(String),
    Explicit(GroupJson),
}

impl GroupSource {
    pub fn resolve(&self) -> Result<PermGroup, CliError> {
        match self {
            GroupSource::Named(name) => Ok(PermGroup::from_name(name)?),
            GroupSource::Explicit(g) => g.to_group(),
        }
    }

    /// A name, inline JSON, or a path to a JSON file.
    pub fn parse_arg(s: &str) -> Result<GroupSource, CliError> {
        let t = s.trim();
        if t.starts_with('{') {
            return Ok(GroupSource::Explicit(serde_json::from_str(t)?));
        }
        if std::path::Path::new(t).is_file() {
            return Ok(serde_json::from_str(&std::fs::read_to_string(t)?)?);
        }
        Ok(GroupSource::Named(t.to_string()))
    }
}

pub fn vertex_key(v: &Vertex) -> String {
    v.word().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn parse_vertex(s: &str) -> Result<Vertex, CliError> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    if t.is_empty() {
        return Ok(Vertex::root());
    }
    let word = t
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad vertex {s:?}"))))
        .collect::<Result<_, _>>()?;
    Ok(Vertex::new(word))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortraitJson {
    pub degrees: Vec<usize>,
    pub perms: BTreeMap<String, Vec<usize>>,
}

impl PortraitJson {
    pub fn from_portrait(p: &Portrait) -> PortraitJson {
        let seq = p.seq();
        let mut perms = BTreeMap::new();
        for l in 0..seq.depth() {
            for v in seq.level_vertices(l).expect("level in range") {
                let local = p.perm_at(&v).expect("internal vertex");
                if !local.is_identity() {
                    perms.insert(vertex_key(&v), perm_to_json(&local));
                }
            }
        }
        PortraitJson { degrees: seq.degrees().to_vec(), perms }
    }

    pub fn to_portrait(&self) -> Result<Portrait, CliError> {
        let seq = DegreeSequence::new(self.degrees.clone())?;
        let mut locals = BTreeMap::new();
        for (key, images) in &self.perms {
            let v = parse_vertex(key)?;
            seq.check_vertex(&v)?;
            if v.level() >= seq.depth() {
                return Err(CliError::Usage(format!("leaf vertex {key:?} carries a permutation")));
            }
            locals.insert(v, perm_from_json(images)?);
        }
        Ok(Portrait::from_vertex_fn(&seq, |v| {
            locals.get(v).cloned().unwrap_or_else(|| Perm::identity(seq.degree(v.level())))
        })?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleJson {
    pub root: Vec<usize>,
    pub sections: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    pub degree: usize,
    pub rules: BTreeMap<String, RuleJson>,
}

impl TableJson {
    pub fn from_table(t: &RecursionTable) -> TableJson {
        let rules = t
            .rules()
            .iter()
            .map(|(name, r)| {
                let rule = RuleJson {
                    root: perm_to_json(&r.root),
                    sections: r.sections.iter().map(Word::to_string).collect(),
                };
                (name.clone(), rule)
            })
            .collect();
        TableJson { degree: t.degree(), rules }
    }

    pub fn to_table(&self) -> Result<RecursionTable, CliError> {
        let mut rules = BTreeMap::new();
        for (name, r) in &self.rules {
            let sections = r.sections.iter().map(|s| Word::parse(s)).collect::<Result<_, _>>()?;
            rules.insert(name.clone(), Rule { root: perm_from_json(&r.root)?, sections });
        }
        Ok(RecursionTable::new(self.degree, rules)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerJson {
    pub factors: Vec<GroupSource>,
}

impl TowerJson {
    pub fn to_spec(&self) -> Result<TowerSpec, CliError> {
        let factors = self.factors.iter().map(GroupSource::resolve).collect::<Result<_, _>>()?;
        Ok(TowerSpec::new(factors)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallVertexJson {
    pub id: usize,
    pub address: Vec<usize>,
    pub neighbors: Vec<usize>,
}

/// Adjacency and edge colors; each edge is `[parent, child, color]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallJson {
    pub d: usize,
    pub radius: usize,
    pub vertices: Vec<BallVertexJson>,
    pub edges: Vec<[usize; 3]>,
}

impl BallJson {
    pub fn from_ball(b: &ColoredBall) -> BallJson {
        let vertices = (0..b.vertex_count())
            .map(|v| BallVertexJson {
                id: v,
                address: b.address(v).word().to_vec(),
                neighbors: b.colored_neighbors(v).iter().map(|&(u, _)| u).collect(),
            })
            .collect();
        let edges = (1..b.vertex_count()).map(|v| [b.parent(v).unwrap(), v, b.edge_color(v)]).collect();
        BallJson { d: b.degree(), radius: b.radius(), vertices, edges }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugatorJson {
    pub element: PortraitJson,
    pub exponent: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub tau: PortraitJson,
    pub conjugators: Vec<ConjugatorJson>,
    pub target: PortraitJson,
}

impl WitnessJson {
    pub fn from_witness(w: &CommutatorWitness<Portrait>) -> WitnessJson {
        WitnessJson {
            tau: PortraitJson::from_portrait(&w.tau),
            conjugators: w
                .conjugators
                .iter()
                .map(|(e, k)| ConjugatorJson { element: PortraitJson::from_portrait(e), exponent: *k })
                .collect(),
            target: PortraitJson::from_portrait(&w.target),
        }
    }

    pub fn to_witness(&self) -> Result<CommutatorWitness<Portrait>, CliError> {
        Ok(CommutatorWitness {
            tau: self.tau.to_portrait()?,
            conjugators: self
                .conjugators
                .iter()
                .map(|c| Ok((c.element.to_portrait()?, c.exponent)))
                .collect::<Result<_, CliError>>()?,
            target: self.target.to_portrait()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub vertex: Vec<usize>,
    /// `[r, a]`: `a` from the tested set has the same section at the vertex as `r`.
    pub pairs: Vec<[PortraitJson; 2]>,
}

impl CertificateJson {
    pub fn from_certificate(c: &FullnessCertificate) -> CertificateJson {
        CertificateJson {
            vertex: c.vertex.word().to_vec(),
            pairs: c
                .pairs
                .iter()
                .map(|(r, a)| [PortraitJson::from_portrait(r), PortraitJson::from_portrait(a)])
                .collect(),
        }
    }

    pub fn to_certificate(&self) -> Result<FullnessCertificate, CliError> {
        Ok(FullnessCertificate {
            vertex: Vertex::new(self.vertex.clone()),
            pairs: self
                .pairs
                .iter()
                .map(|[r, a]| Ok((r.to_portrait()?, a.to_portrait()?)))
                .collect::<Result<_, CliError>>()?,
        })
    }
}
