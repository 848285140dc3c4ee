//! Subcommands. Each one returns JSON records plus a human rendering.

use std::fmt::Write as _;

use branchlab_core::burgermozes::{check_theorem_hypotheses, tower_match, ColoredBall};
use branchlab_core::cayley::{cayley_diameter, Diameter};
use branchlab_core::selfsimilar::{element_order, RecursionTable, Word};
use branchlab_core::wreathtower::{build_tower, TowerSpec};
use branchlab_core::{Budget, Error, Perm, PermGroup, Vertex};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::formats::{parse_vertex, perm_from_json, vertex_key, BallJson, GroupSource, PortraitJson, TableJson, TowerJson};
use crate::suites::{self, big_json, SuiteParams};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "branchlab", version, about = "Finite computations with rooted-tree automorphism groups")]
pub struct Cli {
    /// Emit JSON lines instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a word in a self-similar group at finite depth.
    Eval(EvalArgs),
    /// Orbit and stabilizer of a point or vertex.
    Orbit(OrbitArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Build an iterated wreath product and report its structure.
    Tower(TowerArgs),
    /// Local structure of a Burger-Mozes group on a ball.
    Bm(BmArgs),
    /// Cayley-graph diameters of finite groups and quotients.
    CayleyDiameter(CayleyArgs),
}

#[derive(Debug, Args)]
pub struct TableSource {
    /// Built-in recursion table (only `grigorchuk`).
    #[arg(long, conflicts_with = "table")]
    pub builtin: Option<String>,
    /// Recursion table as a JSON file.
    #[arg(long)]
    pub table: Option<String>,
}

impl TableSource {
    fn load(&self) -> Result<Option<RecursionTable>, CliError> {
        match (&self.builtin, &self.table) {
            (Some(name), _) if name == "grigorchuk" => Ok(Some(RecursionTable::grigorchuk())),
            (Some(name), _) => Err(CliError::Usage(format!("unknown built-in table {name:?}"))),
            (None, Some(path)) => {
                let t: TableJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
                Ok(Some(t.to_table()?))
            }
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<RecursionTable, CliError> {
        self.load()?.ok_or_else(|| CliError::Usage("need --builtin or --table".into()))
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: TableSource,
    /// Word such as `"ab"` or `"a b^-1 c"`.
    #[arg(allow_hyphen_values = true)]
    pub word: String,
    #[arg(long, default_value_t = 5)]
    pub depth: usize,
    /// Also print the order of the element in the depth quotient.
    #[arg(long)]
    pub order: bool,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Permutation group: name, inline JSON or file.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub point: Option<usize>,
    #[command(flatten)]
    pub source: TableSource,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Vertex as a comma list, e.g. `0,1`.
    #[arg(long)]
    pub vertex: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of comm-trick, fullness, diagonal, grig-derangement, grig-indices,
    /// jordan, or `replay` with `--file`.
    pub suite: String,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, alias = "random")]
    pub samples: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Levels for grig-derangement, e.g. `0,1,2`.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<usize>>,
    /// Witness or certificate file for `replay`.
    #[arg(long)]
    pub file: Option<String>,
}

#[derive(Debug, Args)]
pub struct TowerArgs {
    /// Tower spec as JSON (inline or file).
    #[arg(long, conflicts_with = "factors")]
    pub spec: Option<String>,
    /// Comma-separated group names, root factor first.
    #[arg(long)]
    pub factors: Option<String>,
    /// Also compute commutator widths where the budget allows.
    #[arg(long)]
    pub widths: bool,
}

#[derive(Debug, Args)]
pub struct BmArgs {
    /// Local group F: name, inline JSON or file.
    #[arg(long = "F", alias = "f")]
    pub f: String,
    /// Tree degree; must equal the degree of F.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub radius: usize,
    #[arg(long)]
    pub tower_match: bool,
    /// Include the colored ball.
    #[arg(long)]
    pub ball: bool,
}

#[derive(Debug, Args)]
pub struct CayleyArgs {
    #[command(flatten)]
    pub source: TableSource,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Depth range `a..b` (inclusive).
    #[arg(long)]
    pub sweep_depth: Option<String>,
    /// Generating words for a table, comma-separated; all generators by default.
    #[arg(long)]
    pub words: Option<String>,
    /// Permutation group: name, inline JSON or file.
    #[arg(long)]
    pub group: Option<String>,
    /// Generating set as a JSON list of image arrays; the group's generators by default.
    #[arg(long)]
    pub gens: Option<String>,
}

pub struct Output {
    pub records: Vec<Value>,
    pub human: String,
    pub code: u8,
}

impl Output {
    fn ok(records: Vec<Value>, human: String) -> Output {
        Output { records, human, code: 0 }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.records.iter().map(|r| format!("{r}\n")).collect()
        } else {
            self.human.clone()
        }
    }
}

pub fn run(cli: &Cli, budget: Budget) -> Result<Output, CliError> {
    match &cli.command {
        Command::Eval(a) => eval(a),
        Command::Orbit(a) => orbit(a),
        Command::Verify(a) => verify(a, budget),
        Command::Tower(a) => tower(a, budget),
        Command::Bm(a) => bm(a, budget),
        Command::CayleyDiameter(a) => cayley(a, budget),
    }
}

fn eval(a: &EvalArgs) -> Result<Output, CliError> {
    let table = a.source.require()?;
    let word = Word::parse(&a.word)?;
    let p = table.evaluate(&word, a.depth)?;
    let portrait = PortraitJson::from_portrait(&p);
    let mut rec = json!({ "word": word.to_string(), "depth": a.depth, "identity": p.is_identity(), "portrait": portrait });
    let mut human = format!("word      {}\ndepth     {}\nportrait  {}\n", word, a.depth, serde_json::to_string(&portrait)?);
    if a.order {
        let order = element_order(&p);
        rec["order"] = json!(order);
        writeln!(human, "order     {order}").unwrap();
    }
    Ok(Output::ok(vec![rec], human))
}

fn orbit(a: &OrbitArgs) -> Result<Output, CliError> {
    if let Some(g) = &a.group {
        let g = GroupSource::parse_arg(g)?.resolve()?;
        let x = a.point.ok_or_else(|| CliError::Usage("--group needs --point".into()))?;
        if x >= g.degree() {
            return Err(CliError::Usage(format!("point {x} outside 0..{}", g.degree())));
        }
        let orbit = g.orbit(x);
        let stab = g.point_stabilizer(x).order();
        let holds = stab.clone() * orbit.len() == g.order();
        let rec = json!({
            "point": x, "orbit": orbit, "orbit_length": orbit.len(),
            "stabilizer_order": big_json(&stab), "group_order": big_json(&g.order()), "orbit_stabilizer": holds,
        });
        let human = format!(
            "orbit of {x}: {:?}\n|orbit| = {}  |stab| = {}  |G| = {}  orbit-stabilizer {}\n",
            orbit,
            orbit.len(),
            stab,
            g.order(),
            if holds { "holds" } else { "FAILS" }
        );
        return Ok(Output { records: vec![rec], human, code: if holds { 0 } else { 1 } });
    }
    let table = a.source.require()?;
    let v = parse_vertex(a.vertex.as_deref().unwrap_or(""))?;
    let g = table.quotient_group(a.depth)?;
    g.seq().check_vertex(&v)?;
    let level = v.level();
    let seq = g.seq().clone();
    let orbit: Vec<Vertex> = g.level_group(level)?.orbit(seq.rank(&v)).into_iter().map(|r| seq.unrank(level, r)).collect();
    let stab = g.vertex_stabilizer_of(&v)?.order();
    let holds = stab.clone() * orbit.len() == g.order();
    let keys: Vec<String> = orbit.iter().map(vertex_key).collect();
    let rec = json!({
        "vertex": vertex_key(&v), "depth": a.depth, "orbit": keys, "orbit_length": orbit.len(),
        "stabilizer_order": big_json(&stab), "group_order": big_json(&g.order()), "orbit_stabilizer": holds,
    });
    let human = format!(
        "orbit of [{}] at depth {}: {} vertices\n|stab| = {}  |G| = {}  orbit-stabilizer {}\n",
        vertex_key(&v),
        a.depth,
        orbit.len(),
        stab,
        g.order(),
        if holds { "holds" } else { "FAILS" }
    );
    Ok(Output { records: vec![rec], human, code: if holds { 0 } else { 1 } })
}

fn verify(a: &VerifyArgs, budget: Budget) -> Result<Output, CliError> {
    let report = if a.suite == "replay" {
        suites::replay_file(a.file.as_deref().ok_or_else(|| CliError::Usage("replay needs --file".into()))?)?
    } else {
        let params = SuiteParams {
            depth: a.depth,
            samples: a.samples,
            degree: a.degree,
            seed: a.seed,
            levels: a.levels.clone(),
        };
        suites::run(&a.suite, &params, budget)?
    };
    let mut human = format!(
        "suite   {}\nresult  {}  ({}/{} checks)\n",
        report.suite,
        if report.ok { "PASS" } else { "FAIL" },
        report.passed,
        report.checks
    );
    if let Some(seed) = report.seed {
        writeln!(human, "seed    {seed}").unwrap();
    }
    writeln!(human, "{}", serde_json::to_string_pretty(&report.details)?).unwrap();
    let code = if report.ok { 0 } else { 1 };
    Ok(Output { records: vec![serde_json::to_value(&report)?], human, code })
}

fn tower_spec(a: &TowerArgs) -> Result<TowerSpec, CliError> {
    if let Some(s) = &a.spec {
        let text = if s.trim_start().starts_with('{') { s.clone() } else { std::fs::read_to_string(s)? };
        let t: TowerJson = serde_json::from_str(&text)?;
        return t.to_spec();
    }
    let names = a.factors.as_deref().ok_or_else(|| CliError::Usage("need --spec or --factors".into()))?;
    let factors = names.split(',').map(|n| PermGroup::from_name(n.trim())).collect::<Result<_, _>>()?;
    Ok(TowerSpec::new(factors)?)
}

fn tower(a: &TowerArgs, budget: Budget) -> Result<Output, CliError> {
    let spec = tower_spec(a)?;
    let t = build_tower(&spec);
    let order = t.order();
    let predicted = spec.predicted_order();
    let transitive = spec.all_transitive();
    let mut records = Vec::new();
    let mut human = String::new();
    let summary = json!({
        "degrees": spec.degree_sequence().degrees(),
        "order": big_json(&order),
        "predicted_order": big_json(&predicted),
        "order_matches": order == predicted,
        "spherically_transitive": t.group().is_spherically_transitive(),
    });
    writeln!(human, "degrees   {:?}", spec.degree_sequence().degrees()).unwrap();
    writeln!(human, "order     {order}  (predicted {predicted})").unwrap();
    writeln!(human, "spherically transitive  {}", t.group().is_spherically_transitive()).unwrap();
    records.push(summary);
    writeln!(human, "{:>5} {:>24} {:>24} {:>6} {:>10}", "level", "|st(n)|", "|rist(n)|", "sji", "derange").unwrap();
    for n in 0..=spec.depth() {
        let st = t.level_stabilizer(n)?.order();
        let rist = t.rigid_level_stabilizer(n)?.order();
        let sji = if n < spec.depth() { Some(t.check_sji_criterion(n)?) } else { None };
        let der = match t.locally_has_derangements_witness(n) {
            Ok((m, _)) => Some(m),
            Err(Error::IntransitiveFactor(_)) | Err(Error::LevelOutOfRange { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        writeln!(
            human,
            "{:>5} {:>24} {:>24} {:>6} {:>10}",
            n,
            st,
            rist,
            sji.map_or("-".into(), |b| b.to_string()),
            der.map_or("-".into(), |m| format!("V_{m}"))
        )
        .unwrap();
        records.push(json!({
            "level": n, "level_stabilizer_order": big_json(&st), "rist_order": big_json(&rist),
            "sji_criterion": sji, "derangement_level": der,
        }));
    }
    if !transitive {
        writeln!(human, "some factor is intransitive; no derangement witnesses").unwrap();
    }
    if a.widths {
        for (v, w) in t.commutator_widths(budget) {
            let name = v.as_ref().map_or("G".to_string(), |v| format!("rist([{}])", vertex_key(v)));
            let (value, text) = match w {
                Ok(k) => (json!(k), k.to_string()),
                Err(Error::BudgetExceeded { .. }) => (Value::Null, "over budget".into()),
                Err(e) => return Err(e.into()),
            };
            writeln!(human, "cw({name}) = {text}").unwrap();
            records.push(json!({ "subgroup": name, "commutator_width": value }));
        }
    }
    Ok(Output::ok(records, human))
}

fn bm(a: &BmArgs, budget: Budget) -> Result<Output, CliError> {
    let f = GroupSource::parse_arg(&a.f)?.resolve()?;
    if let Some(d) = a.degree {
        if d != f.degree() {
            return Err(CliError::Usage(format!("F has degree {}, not {d}", f.degree())));
        }
    }
    let ball = ColoredBall::canonical(f.degree(), a.radius)?;
    let report = check_theorem_hypotheses(&f);
    let formula = ball.stabilizer_order_formula(&f);
    let (count, method) = match ball.enumerate_stabilizer(&f, budget) {
        Ok(elems) => (branchlab_core::BigUint::from(elems.len()), "exhaustive"),
        Err(Error::BudgetExceeded { .. }) => (ball.stabilizer_group(&f)?.order(), "generators"),
        Err(e) => return Err(e.into()),
    };
    let mut human = String::new();
    writeln!(human, "d = {}  radius = {}  |F| = {}", f.degree(), a.radius, f.order()).unwrap();
    for (name, value) in [
        ("perfect", report.perfect),
        ("two-transitive", report.two_transitive),
        ("generated by point stabilizers", report.generated_by_point_stabilizers),
        ("point stabilizer perfect", report.point_stabilizer_perfect),
        ("d >= 6", report.degree_at_least_six),
    ] {
        writeln!(human, "  {name:<32} {value}").unwrap();
    }
    writeln!(human, "stabilizer of the center: {count} ({method})").unwrap();
    writeln!(human, "|F|·|H|^N                 {formula}").unwrap();
    let mut rec = json!({
        "degree": f.degree(), "radius": a.radius, "order_f": big_json(&f.order()),
        "hypotheses": {
            "perfect": report.perfect,
            "two_transitive": report.two_transitive,
            "generated_by_point_stabilizers": report.generated_by_point_stabilizers,
            "point_stabilizer_perfect": report.point_stabilizer_perfect,
            "degree_at_least_six": report.degree_at_least_six,
            "all_true": report.all_true(),
        },
        "stabilizer_order": big_json(&count), "method": method, "formula": big_json(&formula),
    });
    let mut code = 0;
    if a.tower_match {
        let m = tower_match(&f, a.radius)?;
        writeln!(human, "tower match               {} (tower order {})", m.matches(), m.tower_order).unwrap();
        rec["tower_match"] = json!({ "matches": m.matches(), "tower_order": big_json(&m.tower_order), "ball_orbits": m.ball_orbits, "tower_orbits": m.tower_orbits });
        if !m.matches() {
            code = 1;
        }
    }
    if a.ball {
        rec["ball"] = serde_json::to_value(BallJson::from_ball(&ball))?;
        writeln!(human, "{}", serde_json::to_string(&rec["ball"])?).unwrap();
    }
    Ok(Output { records: vec![rec], human, code })
}

fn parse_range(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("bad range {s:?}; expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn diameter_record(label: &str, d: &Diameter) -> (Value, String) {
    match d {
        Diameter::Generates { diameter, order, spheres } => (
            json!({ "group": label, "generates": true, "order": order, "diameter": diameter, "spheres": spheres }),
            format!("{label:<12} {order:>12} {diameter:>9}   {spheres:?}"),
        ),
        Diameter::Proper { index } => (
            json!({ "group": label, "generates": false, "index": big_json(index) }),
            format!("{label:<12} does not generate, index = {index}"),
        ),
    }
}

fn cayley(a: &CayleyArgs, budget: Budget) -> Result<Output, CliError> {
    let mut records = Vec::new();
    let mut human = format!("{:<12} {:>12} {:>9}   spheres\n", "group", "order", "diameter");
    if let Some(g) = &a.group {
        let group = GroupSource::parse_arg(g)?.resolve()?;
        let gens: Vec<Perm> = match &a.gens {
            Some(s) => {
                let raw: Vec<Vec<usize>> = serde_json::from_str(s)?;
                raw.iter().map(|p| perm_from_json(p)).collect::<Result<_, _>>()?
            }
            None => group.generators().to_vec(),
        };
        let d = cayley_diameter(&group, &gens, budget)?;
        let (rec, line) = diameter_record(g, &d);
        records.push(rec);
        writeln!(human, "{line}").unwrap();
        return Ok(Output::ok(records, human));
    }
    let table = a.source.require()?;
    let (lo, hi) = match (&a.sweep_depth, a.depth) {
        (Some(r), _) => parse_range(r)?,
        (None, Some(d)) => (d, d),
        (None, None) => return Err(CliError::Usage("need --depth or --sweep-depth".into())),
    };
    let words: Vec<Word> = match &a.words {
        Some(w) => w.split(',').map(Word::parse).collect::<Result<_, _>>()?,
        None => table.names().map(Word::parse).collect::<Result<_, _>>()?,
    };
    for depth in lo..=hi {
        let group = table.quotient_group(depth)?;
        let gens: Vec<Perm> = words
            .iter()
            .map(|w| Ok(table.evaluate(w, depth)?.leaf_permutation()))
            .collect::<Result<_, CliError>>()?;
        let d = cayley_diameter(group.leaf_group(), &gens, budget)?;
        let (mut rec, line) = diameter_record(&format!("depth {depth}"), &d);
        rec["depth"] = json!(depth);
        records.push(rec);
        writeln!(human, "{line}").unwrap();
    }
    Ok(Output::ok(records, human))
}
