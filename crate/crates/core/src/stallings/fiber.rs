//! Fiber products of Stallings graphs and malnormality.

use super::{StallingsGraph, NONE};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;
use crate::words::Letter;

/// Default cap on the number of vertex pairs of a fiber product.
pub const DEFAULT_PAIR_CAP: u128 = 100_000_000;

const UNSEEN: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductEdge {
    pub source: (usize, usize),
    pub letter: Letter,
    pub target: (usize, usize),
}

/// A connected component of the fiber product restricted to vertices that
/// carry at least one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductComponent {
    pub vertices: usize,
    pub edges: usize,
    /// Some vertex `(u, u)` lies in the component.
    pub diagonal: bool,
    /// Some vertex `(u, v)` with `u != v` lies in the component.
    pub off_diagonal: bool,
}

impl ProductComponent {
    pub fn is_tree(&self) -> bool {
        self.edges + 1 == self.vertices
    }
}

/// The fiber product `G1 x G2`: vertex pairs, with an `a`-edge whenever both
/// factors have one.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub left_vertices: usize,
    pub right_vertices: usize,
    pub edges: Vec<ProductEdge>,
    /// Components with at least one edge.
    pub components: Vec<ProductComponent>,
    /// Vertex pairs with no incident edge.
    pub isolated: u128,
}

impl FiberProduct {
    pub fn vertex_count(&self) -> u128 {
        self.left_vertices as u128 * self.right_vertices as u128
    }

    pub fn component_count(&self) -> u128 {
        self.components.len() as u128 + self.isolated
    }
}

struct Components {
    components: Vec<ProductComponent>,
    touched: usize,
    edges: Vec<ProductEdge>,
}

fn positive_edges(g: &StallingsGraph) -> Vec<Vec<(u32, u32)>> {
    let r = g.alphabet().rank();
    let mut by_letter = vec![Vec::new(); r];
    for v in 0..g.vertex_count() {
        for j in 0..r {
            let t = g.raw_step(v, 2 * j);
            if t != NONE {
                by_letter[j].push((v as u32, t));
            }
        }
    }
    by_letter
}

fn components(
    g1: &StallingsGraph,
    g2: &StallingsGraph,
    cap: u128,
    keep_edges: bool,
) -> Result<Components> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: g1.alphabet().rank(),
            right: g2.alphabet().rank(),
        });
    }
    let pairs = g1.vertex_count() as u128 * g2.vertex_count() as u128;
    if pairs > cap {
        return Err(Error::CapExceeded {
            what: "fiber product vertex pairs",
            requested: pairs,
            cap,
        });
    }
    let e1 = positive_edges(g1);
    let e2 = positive_edges(g2);
    let product_edges: u128 = e1
        .iter()
        .zip(&e2)
        .map(|(a, b)| a.len() as u128 * b.len() as u128)
        .sum();
    if product_edges > cap {
        return Err(Error::CapExceeded {
            what: "fiber product edges",
            requested: product_edges,
            cap,
        });
    }
    let width = g2.vertex_count() as u64;
    // Compact ids of touched pairs, indexed densely by `u1 * width + u2`.
    let mut ids: Vec<u32> = vec![UNSEEN; pairs as usize];
    let mut keys: Vec<u64> = Vec::new();
    let mut uf = UnionFind::new(0);
    let mut out_degree: Vec<u8> = Vec::new();
    let mut edges = Vec::new();
    let mut id_of = |key: u64, uf: &mut UnionFind, keys: &mut Vec<u64>, out_degree: &mut Vec<u8>| -> u32 {
        let slot = &mut ids[key as usize];
        if *slot == UNSEEN {
            *slot = keys.len() as u32;
            keys.push(key);
            out_degree.push(0);
            uf.push();
        }
        *slot
    };
    for (j, (a, b)) in e1.iter().zip(&e2).enumerate() {
        for &(u1, v1) in a {
            for &(u2, v2) in b {
                let s = u1 as u64 * width + u2 as u64;
                let t = v1 as u64 * width + v2 as u64;
                let si = id_of(s, &mut uf, &mut keys, &mut out_degree);
                let ti = id_of(t, &mut uf, &mut keys, &mut out_degree);
                uf.union(si as usize, ti as usize);
                out_degree[si as usize] += 1;
                if keep_edges {
                    edges.push(ProductEdge {
                        source: (u1 as usize, u2 as usize),
                        letter: Letter::generator(j as u8),
                        target: (v1 as usize, v2 as usize),
                    });
                }
            }
        }
    }
    drop(ids);
    let mut slot: Vec<u32> = vec![UNSEEN; keys.len()];
    let mut out: Vec<ProductComponent> = Vec::new();
    for (i, &key) in keys.iter().enumerate() {
        let root = uf.find(i);
        if slot[root] == UNSEEN {
            slot[root] = out.len() as u32;
            out.push(ProductComponent {
                vertices: 0,
                edges: 0,
                diagonal: false,
                off_diagonal: false,
            });
        }
        let c = &mut out[slot[root] as usize];
        c.vertices += 1;
        c.edges += out_degree[i] as usize;
        if key / width == key % width {
            c.diagonal = true;
        } else {
            c.off_diagonal = true;
        }
    }
    Ok(Components {
        components: out,
        touched: keys.len(),
        edges,
    })
}

/// Builds `G1 x G2`; errors if the number of vertex pairs exceeds `cap`.
pub fn fiber_product(g1: &StallingsGraph, g2: &StallingsGraph, cap: u128) -> Result<FiberProduct> {
    let c = components(g1, g2, cap, true)?;
    let pairs = g1.vertex_count() as u128 * g2.vertex_count() as u128;
    Ok(FiberProduct {
        left_vertices: g1.vertex_count(),
        right_vertices: g2.vertex_count(),
        edges: c.edges,
        components: c.components,
        isolated: pairs - c.touched as u128,
    })
}

/// Malnormality of the subgroup of `g`: every component of `G x G` away
/// from the diagonal is a tree.
pub fn is_malnormal(g: &StallingsGraph) -> Result<bool> {
    is_malnormal_with_cap(g, DEFAULT_PAIR_CAP)
}

pub fn is_malnormal_with_cap(g: &StallingsGraph, cap: u128) -> Result<bool> {
    let c = components(g, g, cap, false)?;
    // Determinism and codeterminism keep the diagonal in its own components.
    debug_assert!(c.components.iter().all(|p| !(p.diagonal && p.off_diagonal)));
    Ok(c
        .components
        .iter()
        .filter(|p| p.off_diagonal)
        .all(ProductComponent::is_tree))
}

/// Searches for a nontrivial reduced word `w` of length at most `max_len`
/// labeling loops at two distinct vertices of `g`. Returns `true` when none
/// exists. `budget` bounds the number of search nodes.
pub fn brute_force_malnormal(g: &StallingsGraph, max_len: usize, budget: u64) -> Result<bool> {
    let alive: Vec<(u32, u32)> = (0..g.vertex_count() as u32).map(|v| (v, v)).collect();
    let mut nodes = 0u64;
    let found = search(g, &alive, None, 0, max_len, budget, &mut nodes)?;
    Ok(!found)
}

fn search(
    g: &StallingsGraph,
    alive: &[(u32, u32)],
    last: Option<Letter>,
    depth: usize,
    max_len: usize,
    budget: u64,
    nodes: &mut u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::CapExceeded {
            what: "malnormality search nodes",
            requested: *nodes as u128,
            cap: budget as u128,
        });
    }
    if depth > 0 && alive.iter().filter(|(s, c)| s == c).count() >= 2 {
        return Ok(true);
    }
    if depth == max_len {
        return Ok(false);
    }
    let mut next = Vec::with_capacity(alive.len());
    for x in g.alphabet().letters() {
        if last == Some(x.inverse()) {
            continue;
        }
        next.clear();
        for &(s, c) in alive {
            let t = g.raw_step(c as usize, x.index());
            if t != NONE {
                next.push((s, t));
            }
        }
        if next.len() >= 2 && search(g, &next, Some(x), depth + 1, max_len, budget, nodes)? {
            return Ok(true);
        }
    }
    Ok(false)
}
