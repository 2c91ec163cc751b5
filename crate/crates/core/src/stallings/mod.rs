//! Stallings graphs of finitely generated subgroups.
//!
//! A Stallings graph is stored as a dense transition table: `2r` slots per
//! vertex, one for each letter, holding the target vertex or `NONE`. An
//! `a`-edge `u -> v` is stored both as `u --a--> v` and `v --A--> u`.

mod fiber;
mod io;

use std::collections::{HashSet, VecDeque};

pub use fiber::{
    brute_force_malnormal, fiber_product, is_malnormal, is_malnormal_with_cap, FiberProduct,
    ProductComponent, ProductEdge, DEFAULT_PAIR_CAP,
};

use crate::error::{Error, Result};
use crate::tuples::WordTuple;
use crate::union_find::UnionFind;
use crate::words::{Alphabet, Letter, ReducedWord};

pub(crate) const NONE: u32 = u32::MAX;

/// A folded, pointed, connected labeled graph with base vertex 0.
///
/// Vertices are numbered in breadth-first order from the base, visiting
/// letters in index order, so equal subgroups give identical graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    alphabet: Alphabet,
    vertices: usize,
    edges: usize,
    table: Vec<u32>,
}

/// A positively labeled edge `source --letter--> target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub letter: Letter,
    pub target: usize,
}

struct Folder {
    width: usize,
    uf: UnionFind,
    table: Vec<u32>,
    pending: Vec<(u32, u32)>,
}

impl Folder {
    fn new(width: usize) -> Self {
        let mut f = Folder {
            width,
            uf: UnionFind::new(0),
            table: Vec::new(),
            pending: Vec::new(),
        };
        f.add_vertex();
        f
    }

    fn add_vertex(&mut self) -> u32 {
        let id = self.uf.push() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.width));
        id
    }

    fn slot(&self, v: usize, x: Letter) -> usize {
        v * self.width + x.index()
    }

    fn add_edge(&mut self, u: u32, x: Letter, v: u32) {
        let u = self.uf.find(u as usize);
        let v = self.uf.find(v as usize);
        let forward = self.table[self.slot(u, x)];
        if forward != NONE {
            self.pending.push((forward, v as u32));
            return;
        }
        let backward = self.table[self.slot(v, x.inverse())];
        if backward != NONE {
            self.pending.push((backward, u as u32));
            return;
        }
        let s = self.slot(u, x);
        self.table[s] = v as u32;
        let s = self.slot(v, x.inverse());
        self.table[s] = u as u32;
    }

    fn fold(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            let Some((root, gone)) = self.uf.union(a as usize, b as usize) else {
                continue;
            };
            for x in 0..self.width {
                let t = self.table[gone * self.width + x];
                if t == NONE {
                    continue;
                }
                let r = self.table[root * self.width + x];
                if r == NONE {
                    self.table[root * self.width + x] = t;
                } else {
                    self.pending.push((r, t));
                }
            }
        }
    }

    fn finish(mut self, alphabet: Alphabet) -> StallingsGraph {
        self.fold();
        let width = self.width;
        let base = self.uf.find(0);
        let mut order = vec![NONE; self.uf.len()];
        let mut queue = VecDeque::new();
        let mut visited = Vec::new();
        order[base] = 0;
        queue.push_back(base);
        while let Some(v) = queue.pop_front() {
            visited.push(v);
            for x in 0..width {
                let t = self.table[v * width + x];
                if t == NONE {
                    continue;
                }
                let t = self.uf.find(t as usize);
                if order[t] == NONE {
                    order[t] = (visited.len() + queue.len()) as u32;
                    queue.push_back(t);
                }
            }
        }
        let mut table = vec![NONE; visited.len() * width];
        let mut edges = 0;
        for (new, &old) in visited.iter().enumerate() {
            for x in 0..width {
                let t = self.table[old * width + x];
                if t != NONE {
                    let t = self.uf.find(t as usize);
                    table[new * width + x] = order[t];
                    if x % 2 == 0 {
                        edges += 1;
                    }
                }
            }
        }
        let g = StallingsGraph {
            alphabet,
            vertices: visited.len(),
            edges,
            table,
        };
        debug_assert!(g.check_involutive().is_ok());
        g
    }
}

/// Folds the bouquet of loops labeled by the words of `h`.
pub fn stallings_graph(h: &WordTuple) -> StallingsGraph {
    let alphabet = h.alphabet();
    let mut folder = Folder::new(alphabet.size());
    for word in h.words() {
        let letters = word.letters();
        let mut current = 0u32;
        for (i, &x) in letters.iter().enumerate() {
            let next = if i + 1 == letters.len() {
                0
            } else {
                folder.add_vertex()
            };
            folder.add_edge(current, x, next);
            current = next;
        }
        folder.fold();
    }
    folder.finish(alphabet)
}

impl StallingsGraph {
    /// Builds a graph from explicit positive edges, folding if necessary and
    /// keeping only the component of the base vertex 0.
    pub fn from_edges(alphabet: Alphabet, vertices: usize, edges: &[Edge]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut folder = Folder::new(alphabet.size());
        for _ in 1..vertices {
            folder.add_vertex();
        }
        for e in edges {
            if e.source >= vertices || e.target >= vertices {
                return Err(Error::InvalidGraph(format!(
                    "edge {} --{}--> {} refers to a missing vertex",
                    e.source, e.letter, e.target
                )));
            }
            if !alphabet.contains(e.letter) {
                return Err(Error::LetterOutOfRange {
                    index: e.letter.index(),
                    rank: alphabet.rank(),
                });
            }
            folder.add_edge(e.source as u32, e.letter, e.target as u32);
        }
        Ok(folder.finish(alphabet))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn base(&self) -> usize {
        0
    }

    /// Target of the `x`-edge leaving `v`, following inverse letters backwards.
    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        let t = self.table[v * self.alphabet.size() + x.index()];
        (t != NONE).then_some(t as usize)
    }

    pub(crate) fn raw_step(&self, v: usize, x: usize) -> u32 {
        self.table[v * self.alphabet.size() + x]
    }

    /// Positive edges sorted by `(source, letter, target)`.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::with_capacity(self.edges);
        for v in 0..self.vertices {
            for x in self.alphabet.letters().filter(|x| x.is_positive()) {
                if let Some(t) = self.step(v, x) {
                    out.push(Edge {
                        source: v,
                        letter: x,
                        target: t,
                    });
                }
            }
        }
        out
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.alphabet
            .letters()
            .filter(|&x| self.step(v, x).is_some())
            .count()
    }

    /// Follows `word` from `start`; `None` if some edge is missing.
    pub fn read(&self, start: usize, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(start, |v, &x| self.step(v, x))
    }

    /// Whether the reduced word `u` labels a loop at the base.
    pub fn contains(&self, u: &ReducedWord) -> bool {
        u.alphabet() == self.alphabet && self.read(0, u.letters()) == Some(0)
    }

    /// `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edges + 1 - self.vertices
    }

    /// Free basis from a breadth-first spanning tree: one generator
    /// `x_u a x_v^-1` per edge outside the tree.
    pub fn basis(&self) -> Vec<ReducedWord> {
        let mut path: Vec<Option<Vec<Letter>>> = vec![None; self.vertices];
        let mut tree: HashSet<(usize, Letter, usize)> = HashSet::new();
        path[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for x in self.alphabet.letters() {
                let Some(t) = self.step(v, x) else { continue };
                if path[t].is_none() {
                    let mut p = path[v].clone().unwrap();
                    p.push(x);
                    path[t] = Some(p);
                    if x.is_positive() {
                        tree.insert((v, x, t));
                    } else {
                        tree.insert((t, x.inverse(), v));
                    }
                    queue.push_back(t);
                }
            }
        }
        self.edges()
            .into_iter()
            .filter(|e| !tree.contains(&(e.source, e.letter, e.target)))
            .map(|e| {
                let mut letters = path[e.source].clone().unwrap();
                letters.push(e.letter);
                let back = path[e.target].as_ref().unwrap();
                letters.extend(back.iter().rev().map(|x| x.inverse()));
                ReducedWord::reduce_letters(self.alphabet, letters)
            })
            .collect()
    }

    /// Isomorphism of pointed labeled graphs, by synchronized traversal.
    pub fn is_isomorphic(&self, other: &StallingsGraph) -> bool {
        if self.alphabet != other.alphabet
            || self.vertices != other.vertices
            || self.edges != other.edges
        {
            return false;
        }
        let width = self.alphabet.size();
        let mut map = vec![NONE; self.vertices];
        let mut used = vec![false; other.vertices];
        map[0] = 0;
        used[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let w = map[v] as usize;
            for x in 0..width {
                let a = self.raw_step(v, x);
                let b = other.raw_step(w, x);
                match (a == NONE, b == NONE) {
                    (true, true) => continue,
                    (false, false) => {}
                    _ => return false,
                }
                let (a, b) = (a as usize, b as usize);
                if map[a] == NONE {
                    if used[b] {
                        return false;
                    }
                    map[a] = b as u32;
                    used[b] = true;
                    queue.push_back(a);
                } else if map[a] as usize != b {
                    return false;
                }
            }
        }
        true
    }

    /// Every vertex but the base has degree at least 2 and the graph is
    /// connected.
    pub fn is_admissible(&self) -> bool {
        (1..self.vertices).all(|v| self.degree(v) >= 2) && self.is_connected()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertices];
        seen[0] = true;
        let mut stack = vec![0usize];
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for x in self.alphabet.letters() {
                if let Some(t) = self.step(v, x) {
                    if !seen[t] {
                        seen[t] = true;
                        count += 1;
                        stack.push(t);
                    }
                }
            }
        }
        count == self.vertices
    }

    fn check_involutive(&self) -> Result<()> {
        for v in 0..self.vertices {
            for x in self.alphabet.letters() {
                if let Some(t) = self.step(v, x) {
                    if self.step(t, x.inverse()) != Some(v) {
                        return Err(Error::InvalidGraph(format!(
                            "edge {v} --{x}--> {t} has no reverse"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}
