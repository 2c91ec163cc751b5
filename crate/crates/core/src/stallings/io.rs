//! JSON and DOT forms of Stallings graphs.
//!
//! JSON: `{"vertices": 3, "base": 0, "rank": 2, "edges": [[0, "a", 1], ...]}`.
//! `rank` is the alphabet rank; when absent it is inferred from the labels.
//! Edge labels may be uppercase, meaning an edge in the opposite direction.

use std::fmt::Write;

use serde_json::{json, Value};

use super::{Edge, StallingsGraph};
use crate::error::{Error, Result};
use crate::words::Alphabet;

impl StallingsGraph {
    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .edges()
            .iter()
            .map(|e| json!([e.source, e.letter.to_string(), e.target]))
            .collect();
        json!({
            "vertices": self.vertex_count(),
            "base": 0,
            "rank": self.alphabet().rank(),
            "edges": edges,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::parse("$", "expected an object"))?;
        let vertices = obj
            .get("vertices")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::parse("$.vertices", "expected a nonnegative integer"))?
            as usize;
        if let Some(base) = obj.get("base") {
            if base.as_u64() != Some(0) {
                return Err(Error::parse("$.base", "base vertex must be 0"));
            }
        }
        let raw = obj
            .get("edges")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("$.edges", "expected an array"))?;
        let mut parsed = Vec::with_capacity(raw.len());
        for (i, e) in raw.iter().enumerate() {
            let path = format!("$.edges[{i}]");
            let triple = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| Error::parse(&path, "expected [source, label, target]"))?;
            let source = triple[0]
                .as_u64()
                .ok_or_else(|| Error::parse(format!("{path}[0]"), "expected a vertex index"))?;
            let label = triple[1]
                .as_str()
                .filter(|s| s.chars().count() == 1)
                .and_then(|s| s.chars().next())
                .ok_or_else(|| Error::parse(format!("{path}[1]"), "expected a one-letter label"))?;
            let target = triple[2]
                .as_u64()
                .ok_or_else(|| Error::parse(format!("{path}[2]"), "expected a vertex index"))?;
            parsed.push((source as usize, label, target as usize));
        }
        let alphabet = match obj.get("rank") {
            Some(r) => {
                let r = r
                    .as_u64()
                    .ok_or_else(|| Error::parse("$.rank", "expected an integer"))?;
                Alphabet::new(r as usize).map_err(|e| Error::parse("$.rank", e.to_string()))?
            }
            None => {
                let labels: String = parsed.iter().map(|p| p.1).collect();
                Alphabet::infer(&labels).map_err(|e| Error::parse("$.edges", e.to_string()))?
            }
        };
        let mut edges = Vec::with_capacity(parsed.len());
        for (i, &(source, label, target)) in parsed.iter().enumerate() {
            let x = alphabet
                .parse_letter(label, 0)
                .map_err(|e| Error::parse(format!("$.edges[{i}][1]"), e.to_string()))?;
            let (source, target, x) = if x.is_positive() {
                (source, target, x)
            } else {
                (target, source, x.inverse())
            };
            edges.push(Edge {
                source,
                letter: x,
                target,
            });
        }
        let g = StallingsGraph::from_edges(alphabet, vertices, &edges)?;
        if g.vertex_count() != vertices || g.edge_count() != edges.len() {
            return Err(Error::InvalidGraph(format!(
                "graph is not folded and connected: {} vertices and {} edges after folding, {} and {} given",
                g.vertex_count(),
                g.edge_count(),
                vertices,
                edges.len()
            )));
        }
        Ok(g)
    }

    /// Graphviz rendering; the base vertex is drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stallings {\n  rankdir=LR;\n");
        for v in 0..self.vertex_count() {
            let shape = if v == 0 { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  {v} [shape={shape}];");
        }
        for e in self.edges() {
            let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", e.source, e.target, e.letter);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::stallings_graph;
    use super::*;
    use crate::tuples::WordTuple;

    #[test]
    fn json_roundtrip() {
        let ab = Alphabet::new(3).unwrap();
        let t = WordTuple::parse_words(ab, "bAcbbaaB aaccAAcbc CBabACCbAcc").unwrap();
        let g = stallings_graph(&t);
        let back = StallingsGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn json_errors_have_paths() {
        let v = json!({"vertices": 2, "base": 0, "edges": [[0, "a", 1], [1, 7, 0]]});
        let err = StallingsGraph::from_json(&v).unwrap_err().to_string();
        assert!(err.contains("$.edges[1][1]"), "{err}");
        let v = json!({"vertices": 2, "base": 0, "edges": [[0, "a", 1], [0, "a", 0]]});
        assert!(matches!(
            StallingsGraph::from_json(&v),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn uppercase_labels_reverse_edges() {
        let v = json!({"vertices": 2, "edges": [[0, "a", 1], [0, "B", 1]]});
        let g = StallingsGraph::from_json(&v).unwrap();
        assert_eq!(g.rank(), 1);
        let ab = g.alphabet();
        assert!(g.contains(&ab.parse("ab").unwrap()));
    }

    #[test]
    fn dot_marks_base() {
        let ab = Alphabet::new(2).unwrap();
        let g = stallings_graph(&WordTuple::parse_words(ab, "ab").unwrap());
        let dot = g.to_dot();
        assert!(dot.contains("0 [shape=doublecircle]"));
        assert!(dot.contains("0 -> 1 [label=\"a\"]"));
    }
}
