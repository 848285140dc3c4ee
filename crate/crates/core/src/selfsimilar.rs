//! Self-similar groups given by wreath recursion, with the first Grigorchuk
//! group built in.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigUint;

use crate::tree::{DegreeSequence, Vertex};
use crate::treegroup::TreeGroup;
use crate::{Error, Perm, Portrait, Result};

/// A group word: generator names with integer exponents.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Word {
    letters: Vec<(String, i64)>,
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn from_letters(letters: Vec<(String, i64)>) -> Word {
        Word { letters }
    }

    pub fn letters(&self) -> &[(String, i64)] {
        &self.letters
    }

    /// Parses `"a b^-1 c"` (whitespace separated names) or compact `"ab^-1c"`
    /// (single-letter names). `""` and `"1"` are the identity.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        if s.contains(char::is_whitespace) {
            for tok in s.split_whitespace() {
                let (name, exp) = match tok.split_once('^') {
                    Some((n, e)) => (n, parse_exponent(e)?),
                    None => (tok, 1),
                };
                if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(Error::WordParse(tok.to_string()));
                }
                if name != "1" {
                    letters.push((name.to_string(), exp));
                }
            }
        } else {
            let chars: Vec<char> = s.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                if !c.is_alphabetic() {
                    return Err(Error::WordParse(s.to_string()));
                }
                i += 1;
                let mut exp = 1;
                if i < chars.len() && chars[i] == '^' {
                    let start = i + 1;
                    let mut end = start;
                    if end < chars.len() && (chars[end] == '-' || chars[end] == '+') {
                        end += 1;
                    }
                    while end < chars.len() && chars[end].is_ascii_digit() {
                        end += 1;
                    }
                    exp = parse_exponent(&chars[start..end].iter().collect::<String>())?;
                    i = end;
                }
                letters.push((c.to_string(), exp));
            }
        }
        Ok(Word { letters })
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|(n, e)| (n.clone(), -e)).collect() }
    }
}

fn parse_exponent(e: &str) -> Result<i64> {
    e.parse::<i64>().map_err(|_| Error::WordParse(alloc::format!("bad exponent `{e}`")))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, (name, exp)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *exp == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{exp}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub root: Perm,
    pub sections: Vec<Word>,
}

/// `name ↦ (root permutation; section words)` for a self-similar group acting
/// on the `degree`-regular rooted tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RecursionTable {
    degree: usize,
    rules: BTreeMap<String, Rule>,
}

impl RecursionTable {
    pub fn new(degree: usize, rules: BTreeMap<String, Rule>) -> Result<RecursionTable> {
        if degree < 2 {
            return Err(Error::InvalidDegrees);
        }
        for rule in rules.values() {
            if rule.root.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: rule.root.degree() });
            }
            if rule.sections.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: rule.sections.len() });
            }
            for w in &rule.sections {
                for (name, _) in w.letters() {
                    if !rules.contains_key(name) {
                        return Err(Error::UnknownGenerator(name.clone()));
                    }
                }
            }
        }
        Ok(RecursionTable { degree, rules })
    }

    pub fn grigorchuk() -> RecursionTable {
        let swap = Perm::from_images(alloc::vec![1, 0]).unwrap();
        let id = Perm::identity(2);
        let rule = |root: &Perm, s0: &str, s1: &str| Rule {
            root: root.clone(),
            sections: alloc::vec![Word::parse(s0).unwrap(), Word::parse(s1).unwrap()],
        };
        let mut rules = BTreeMap::new();
        rules.insert("a".to_string(), rule(&swap, "", ""));
        rules.insert("b".to_string(), rule(&id, "a", "c"));
        rules.insert("c".to_string(), rule(&id, "a", "d"));
        rules.insert("d".to_string(), rule(&id, "", "b"));
        RecursionTable::new(2, rules).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.rules.keys().map(String::as_str)
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.get(name)
    }

    pub fn rules(&self) -> &BTreeMap<String, Rule> {
        &self.rules
    }

    fn tree(&self, depth: usize) -> DegreeSequence {
        DegreeSequence::tail_of(alloc::vec![self.degree; depth]).unwrap()
    }

    /// Depth-`depth` portraits of every generator, built bottom-up.
    pub fn generator_portraits(&self, depth: usize) -> BTreeMap<String, Portrait> {
        let mut current: BTreeMap<String, Portrait> =
            self.rules.keys().map(|n| (n.clone(), Portrait::identity(&self.tree(0)))).collect();
        for k in 1..=depth {
            let below = self.tree(k - 1);
            let next = self
                .rules
                .iter()
                .map(|(name, rule)| {
                    let sections: Vec<Portrait> =
                        rule.sections.iter().map(|w| product(&current, w, &below).unwrap()).collect();
                    (name.clone(), Portrait::from_sections(&rule.root, &sections).unwrap())
                })
                .collect();
            current = next;
        }
        current
    }

    /// The portrait of `w` on the first `depth` levels.
    pub fn evaluate(&self, w: &Word, depth: usize) -> Result<Portrait> {
        for (name, _) in w.letters() {
            if !self.rules.contains_key(name) {
                return Err(Error::UnknownGenerator(name.clone()));
            }
        }
        product(&self.generator_portraits(depth), w, &self.tree(depth))
    }

    /// The congruence quotient acting on `V_depth`.
    pub fn quotient_group(&self, depth: usize) -> Result<TreeGroup> {
        let seq = DegreeSequence::constant(self.degree, depth)?;
        TreeGroup::new(&seq, self.generator_portraits(depth).into_values().collect())
    }
}

fn product(gens: &BTreeMap<String, Portrait>, w: &Word, seq: &DegreeSequence) -> Result<Portrait> {
    let mut acc = Portrait::identity(seq);
    for (name, exp) in w.letters() {
        let g = gens.get(name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        let g = if *exp < 0 { g.invert() } else { g.clone() };
        for _ in 0..exp.unsigned_abs() {
            acc = acc.compose(&g)?;
        }
    }
    Ok(acc)
}

/// Order of a portrait in its truncation.
pub fn element_order(p: &Portrait) -> u64 {
    p.leaf_permutation().order()
}

fn grig(w: &str, depth: usize) -> Portrait {
    RecursionTable::grigorchuk().evaluate(&Word::parse(w).unwrap(), depth).unwrap()
}

/// `x = (ca, ac)` in the Grigorchuk group.
pub fn element_x(depth: usize) -> Result<Portrait> {
    if depth < 2 {
        return Err(Error::Precondition("element x needs depth at least 2".into()));
    }
    Portrait::from_sections(&Perm::identity(2), &[grig("ca", depth - 1), grig("ac", depth - 1)])
}

/// `(p, 1)` or `(1, p)` on the binary tree one level deeper.
fn embed(p: &Portrait, child: usize) -> Portrait {
    let id = Portrait::identity(p.seq());
    let mut sections = alloc::vec![id.clone(), id];
    sections[child] = p.clone();
    Portrait::from_sections(&Perm::identity(2), &sections).unwrap()
}

/// Generators `x, (x,1), (1,x)` of `K` at the given depth (at least 2).
pub fn k_generators(depth: usize) -> Result<Vec<Portrait>> {
    let x = element_x(depth)?;
    if depth == 2 {
        let id = Portrait::identity(&DegreeSequence::tail_of(alloc::vec![2]).unwrap());
        let x1 = embed(&id, 0);
        return Ok(alloc::vec![x, x1.clone(), x1]);
    }
    let below = element_x(depth - 1)?;
    Ok(alloc::vec![x, embed(&below, 0), embed(&below, 1)])
}

/// The image of `K` in the depth quotient.
pub fn k_subgroup(depth: usize) -> Result<TreeGroup> {
    let seq = DegreeSequence::constant(2, depth)?;
    TreeGroup::new(&seq, k_generators(depth)?)
}

/// The image of `K₁ = K × K` in the depth quotient.
pub fn k1_subgroup(depth: usize) -> Result<TreeGroup> {
    let seq = DegreeSequence::constant(2, depth)?;
    if depth < 3 {
        return TreeGroup::new(&seq, Vec::new());
    }
    let below = k_generators(depth - 1)?;
    let gens = below.iter().flat_map(|k| [embed(k, 0), embed(k, 1)]).collect();
    TreeGroup::new(&seq, gens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KIndexRow {
    pub depth: usize,
    pub order_g: BigUint,
    pub order_k: BigUint,
    pub order_k1: BigUint,
    pub index_k_over_k1: BigUint,
    pub index_g_over_k: BigUint,
    /// `K/K₁` is cyclic of order 4 generated by the image of `y = (ab)²`;
    /// `None` at depths where the index is not 4.
    pub y_generates: Option<bool>,
}

/// A value that held on every depth from `depths.0` to the last computed one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilized {
    pub value: BigUint,
    pub depths: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KIndices {
    pub rows: Vec<KIndexRow>,
    pub k_over_k1: Option<Stabilized>,
    pub g_over_k: Option<Stabilized>,
    pub k_normal: bool,
}

fn stabilized(values: &[(usize, BigUint)]) -> Option<Stabilized> {
    let (last_depth, last) = values.last()?;
    let mut first = *last_depth;
    for (d, v) in values.iter().rev() {
        if v != last {
            break;
        }
        first = *d;
    }
    (first < *last_depth).then(|| Stabilized { value: last.clone(), depths: (first, first + 1) })
}

/// `|K : K₁|` and `|G : K|` in the Grigorchuk quotients of depth
/// `2..=max_depth`. A value counts as stabilized once it holds on two
/// consecutive depths and on every later computed depth.
pub fn k_subgroup_indices(max_depth: usize) -> Result<KIndices> {
    let table = RecursionTable::grigorchuk();
    let mut rows = Vec::new();
    let mut k_normal = true;
    for depth in 2..=max_depth {
        let g = table.quotient_group(depth)?;
        let k = k_subgroup(depth)?;
        let k1 = k1_subgroup(depth)?;
        if !k.is_subgroup_of(&g) || !k1.is_subgroup_of(&k) {
            return Err(Error::Precondition(alloc::format!("subgroup chain fails at depth {depth}")));
        }
        k_normal &= g
            .generators()
            .iter()
            .all(|s| k.generators().iter().all(|x| k.contains(&x.conjugate_by(s).unwrap())));
        let (og, ok, ok1) = (g.order(), k.order(), k1.order());
        let index_k_over_k1 = &ok / &ok1;
        let y_generates = (index_k_over_k1 == BigUint::from(4u32)).then(|| {
            let y = table.evaluate(&Word::parse("abab").unwrap(), depth).unwrap();
            let pow = |i| (0..i).fold(Portrait::identity(y.seq()), |acc, _| acc.compose(&y).unwrap());
            k.contains(&y)
                && (1..4).all(|i| !k1.contains(&pow(i)))
                && k1.contains(&pow(4))
                && k1.join(&TreeGroup::new(y.seq(), alloc::vec![y.clone()]).unwrap()).unwrap().order() == ok
        });
        rows.push(KIndexRow {
            depth,
            index_g_over_k: &og / &ok,
            index_k_over_k1,
            order_g: og,
            order_k: ok,
            order_k1: ok1,
            y_generates,
        });
    }
    let k_over_k1 = stabilized(&rows.iter().map(|r| (r.depth, r.index_k_over_k1.clone())).collect::<Vec<_>>());
    let g_over_k = stabilized(&rows.iter().map(|r| (r.depth, r.index_g_over_k.clone())).collect::<Vec<_>>());
    Ok(KIndices { rows, k_over_k1, g_over_k, k_normal })
}

/// Whether every generator of `K` (at the depth below `v`) is the section at
/// `v` of an element of `K` supported below `v`, in the depth-`depth` quotient.
pub fn check_self_replicating(depth: usize, v: &Vertex) -> Result<bool> {
    if v.level() + 2 > depth {
        return Err(Error::Precondition("need v.level + 2 <= depth".into()));
    }
    let k = k_subgroup(depth)?;
    let rist = k.rigid_stabilizer(v)?;
    let sections: Vec<Portrait> = rist.generators().iter().map(|g| g.section(v)).collect::<Result<_>>()?;
    let below = DegreeSequence::constant(2, depth - v.level())?;
    let sections = TreeGroup::new(&below, sections)?;
    Ok(k_generators(depth - v.level())?.iter().all(|g| sections.contains(g)))
}
