//! Truncated spherically homogeneous rooted trees.
//!
//! A vertex is the word of child indices leading to it from the root. Each
//! level is ordered lexicographically, which makes the orders on consecutive
//! levels cohere, and a vertex's position in that order is its *rank*.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::{Error, Result};

/// Per-level child counts of a finite truncation of `T_α`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
    /// `level_sizes[n] = |V_n|` for `n = 0..=depth`.
    level_sizes: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<DegreeSequence> {
        if degrees.is_empty() {
            return Err(Error::InvalidDegrees);
        }
        DegreeSequence::tail_of(degrees)
    }

    /// The constant sequence `T_d` truncated at `depth`.
    pub fn constant(d: usize, depth: usize) -> Result<DegreeSequence> {
        DegreeSequence::new(alloc::vec![d; depth])
    }

    /// Like `new`, but an empty sequence (the one-vertex tree) is allowed.
    /// Sections at leaves live on such trees.
    pub(crate) fn tail_of(degrees: Vec<usize>) -> Result<DegreeSequence> {
        if degrees.iter().any(|&d| d < 2) {
            return Err(Error::InvalidDegrees);
        }
        let mut level_sizes = alloc::vec![1usize];
        for &d in &degrees {
            let last = *level_sizes.last().unwrap();
            level_sizes.push(last.checked_mul(d).ok_or(Error::InvalidDegrees)?);
        }
        Ok(DegreeSequence { degrees, level_sizes })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn depth(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, level: usize) -> usize {
        self.degrees[level]
    }

    /// `|V_n|`.
    pub fn level_size(&self, n: usize) -> usize {
        self.level_sizes[n]
    }

    /// Number of level-`n` vertices below one vertex of level `from`.
    pub fn subtree_level_size(&self, from: usize, n: usize) -> usize {
        self.level_sizes[n] / self.level_sizes[from]
    }

    /// Total number of vertices, root included.
    pub fn vertex_count(&self) -> usize {
        self.level_sizes.iter().sum()
    }

    /// The degrees below level `from`, i.e. the tree `T^v` for `v ∈ V_from`.
    pub fn tail(&self, from: usize) -> DegreeSequence {
        DegreeSequence::tail_of(self.degrees[from..].to_vec()).unwrap()
    }

    /// The first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<DegreeSequence> {
        self.check_level(depth)?;
        DegreeSequence::tail_of(self.degrees[..depth].to_vec())
    }

    /// Appends further levels, as produced by some rule for extending `α`.
    pub fn extend_with(&self, extra: impl IntoIterator<Item = usize>) -> Result<DegreeSequence> {
        let mut degrees = self.degrees.clone();
        degrees.extend(extra);
        DegreeSequence::tail_of(degrees)
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n > self.depth() {
            Err(Error::LevelOutOfRange { level: n, depth: self.depth() })
        } else {
            Ok(())
        }
    }

    pub fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if v.level() > self.depth() || v.0.iter().zip(&self.degrees).any(|(&c, &d)| c >= d) {
            Err(Error::InvalidVertex(v.0.clone()))
        } else {
            Ok(())
        }
    }

    /// Position of `v` in the lexicographic order of its level.
    pub fn rank(&self, v: &Vertex) -> usize {
        v.0.iter().zip(&self.degrees).fold(0, |r, (&c, &d)| r * d + c)
    }

    pub fn unrank(&self, level: usize, mut rank: usize) -> Vertex {
        let mut word = alloc::vec![0; level];
        for i in (0..level).rev() {
            word[i] = rank % self.degrees[i];
            rank /= self.degrees[i];
        }
        Vertex(word)
    }

    /// Ranks of the level-`n` vertices below `v` (a contiguous block).
    pub fn descendants_at(&self, v: &Vertex, n: usize) -> Range<usize> {
        let width = self.subtree_level_size(v.level(), n);
        let start = self.rank(v) * width;
        start..start + width
    }

    /// The children of `v`, in increasing index order.
    pub fn children(&self, v: &Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        if v.level() == self.depth() {
            return Err(Error::LeafVertex);
        }
        Ok((0..self.degrees[v.level()]).map(|c| v.child(c)).collect())
    }

    /// `V_n` in lexicographic order.
    pub fn level_vertices(&self, n: usize) -> Result<Vec<Vertex>> {
        self.check_level(n)?;
        Ok((0..self.level_sizes[n]).map(|r| self.unrank(n, r)).collect())
    }

    /// The lexicographically maximal vertex of every level, root first.
    pub fn rightmost_branch(&self) -> Vec<Vertex> {
        let mut branch = alloc::vec![Vertex::root()];
        for &d in &self.degrees {
            let next = branch.last().unwrap().child(d - 1);
            branch.push(next);
        }
        branch
    }

    /// All vertices `w ≥ v`, in lexicographic (depth-first preorder) order.
    pub fn subtree_vertices(&self, v: &Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![v.clone()];
        while let Some(u) = stack.pop() {
            if u.level() < self.depth() {
                for c in (0..self.degrees[u.level()]).rev() {
                    stack.push(u.child(c));
                }
            }
            out.push(u);
        }
        out
    }
}

/// A vertex of a rooted tree, as the word of child indices from the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex(Vec<usize>);

impl Vertex {
    pub fn root() -> Vertex {
        Vertex(Vec::new())
    }

    pub fn new(word: Vec<usize>) -> Vertex {
        Vertex(word)
    }

    pub fn word(&self) -> &[usize] {
        &self.0
    }

    pub fn level(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, c: usize) -> Vertex {
        let mut word = self.0.clone();
        word.push(c);
        Vertex(word)
    }

    pub fn parent(&self) -> Option<Vertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// `self ≤ other`: `self` is a prefix of `other`.
    pub fn is_below(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `other` with this vertex's word stripped from the front, if `self ≤ other`.
    pub fn relative(&self, other: &Vertex) -> Option<Vertex> {
        other.0.strip_prefix(self.0.as_slice()).map(|w| Vertex(w.to_vec()))
    }

    /// Concatenation: the vertex reached from `self` by following `rel`.
    pub fn join(&self, rel: &Vertex) -> Vertex {
        let mut word = self.0.clone();
        word.extend_from_slice(&rel.0);
        Vertex(word)
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<usize>> for Vertex {
    fn from(word: Vec<usize>) -> Vertex {
        Vertex(word)
    }
}

impl From<&[usize]> for Vertex {
    fn from(word: &[usize]) -> Vertex {
        Vertex(word.to_vec())
    }
}
