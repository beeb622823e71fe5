//! Incidence multigraph of a structure and the metrics read off it.
//!
//! The incidence graph is bipartite: element vertices on one side,
//! one block vertex per (relation, tuple) pair on the other, and one
//! edge per tuple position holding the element. Distances between
//! elements and cycle lengths are halved, which is exact because the
//! graph is bipartite; the implementation asserts evenness instead of
//! rounding.

use std::fmt;

use crate::relational::RelStructure;

/// Natural number extended with a maximal infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedNat {
    Fin(u64),
    Infinity,
}

impl ExtendedNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtendedNat::Fin(v) => Some(v),
            ExtendedNat::Infinity => None,
        }
    }
}

impl fmt::Display for ExtendedNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedNat::Fin(v) => write!(f, "{v}"),
            ExtendedNat::Infinity => write!(f, "inf"),
        }
    }
}

/// Bipartite multigraph with element vertices and block vertices.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    n_elements: usize,
    /// Blocks as (relation index, tuple).
    blocks: Vec<(usize, Vec<usize>)>,
    /// Edges as (element, block, 1-based position).
    edges: Vec<(usize, usize, usize)>,
    elem_adj: Vec<Vec<usize>>,
    block_adj: Vec<Vec<usize>>,
    relation_names: Vec<String>,
}

pub fn incidence(structure: &RelStructure) -> IncidenceGraph {
    let mut blocks = Vec::new();
    let mut edges = Vec::new();
    let mut elem_adj = vec![Vec::new(); structure.size()];
    let mut block_adj = Vec::new();
    for (rel, table) in structure.tables().iter().enumerate() {
        for tuple in table {
            let b = blocks.len();
            blocks.push((rel, tuple.clone()));
            block_adj.push(Vec::new());
            for (k, &a) in tuple.iter().enumerate() {
                let e = edges.len();
                edges.push((a, b, k + 1));
                elem_adj[a].push(e);
                block_adj[b].push(e);
            }
        }
    }
    IncidenceGraph {
        n_elements: structure.size(),
        blocks,
        edges,
        elem_adj,
        block_adj,
        relation_names: structure
            .signature()
            .relations()
            .iter()
            .map(|(n, _)| n.clone())
            .collect(),
    }
}

// Vertices are numbered elements first, then blocks.
impl IncidenceGraph {
    pub fn element_count(&self) -> usize {
        self.n_elements
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn vertex_count(&self) -> usize {
        self.n_elements + self.blocks.len()
    }

    fn edge_ends(&self, e: usize) -> (usize, usize) {
        let (a, b, _) = self.edges[e];
        (a, self.n_elements + b)
    }

    // Edge lengths from `start` to every vertex, skipping the edge
    // `banned` if given.
    fn bfs(&self, start: usize, banned: Option<usize>) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            let adjacent = if v < self.n_elements {
                &self.elem_adj[v]
            } else {
                &self.block_adj[v - self.n_elements]
            };
            for &e in adjacent {
                if banned == Some(e) {
                    continue;
                }
                let (x, y) = self.edge_ends(e);
                let w = if x == v { y } else { x };
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Half the edge count of a shortest incidence path between two
    /// elements.
    pub fn dist(&self, u: usize, v: usize) -> ExtendedNat {
        assert!(u < self.n_elements && v < self.n_elements);
        match self.bfs(u, None)[v] {
            Some(d) => {
                assert!(d % 2 == 0, "odd element-to-element path length {d}");
                ExtendedNat::Fin(d / 2)
            }
            None => ExtendedNat::Infinity,
        }
    }

    /// Half the minimum cycle length; infinity when acyclic. Parallel
    /// edges count as 2-cycles.
    pub fn girth(&self) -> ExtendedNat {
        let mut best: Option<u64> = None;
        for e in 0..self.edges.len() {
            let (x, y) = self.edge_ends(e);
            if let Some(d) = self.bfs(x, Some(e))[y] {
                let cycle = d + 1;
                if best.map_or(true, |b| cycle < b) {
                    best = Some(cycle);
                }
            }
        }
        match best {
            Some(c) => {
                assert!(c % 2 == 0, "odd cycle length {c} in bipartite graph");
                ExtendedNat::Fin(c / 2)
            }
            None => ExtendedNat::Infinity,
        }
    }

    /// Max of dist over all ordered element pairs; infinity when some
    /// pair is unreachable. The empty and one-point structures get 0.
    pub fn diameter(&self) -> ExtendedNat {
        let mut best = 0u64;
        for u in 0..self.n_elements {
            let dist = self.bfs(u, None);
            for v in 0..self.n_elements {
                match dist[v] {
                    Some(d) => {
                        assert!(d % 2 == 0);
                        best = best.max(d / 2);
                    }
                    None => return ExtendedNat::Infinity,
                }
            }
        }
        ExtendedNat::Fin(best)
    }

    /// Graphviz rendering: circles for elements, boxes for blocks,
    /// edges labeled with their tuple position.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph incidence {\n");
        for v in 0..self.n_elements {
            out.push_str(&format!("  e{v} [shape=circle, label=\"{v}\"];\n"));
        }
        for (b, (rel, tuple)) in self.blocks.iter().enumerate() {
            let entries: Vec<String> = tuple.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!(
                "  b{b} [shape=box, label=\"{}({})\"];\n",
                self.relation_names[*rel],
                entries.join(",")
            ));
        }
        for (a, b, k) in &self.edges {
            out.push_str(&format!("  e{a} -- b{b} [label=\"{k}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub fn dist(structure: &RelStructure, u: usize, v: usize) -> ExtendedNat {
    incidence(structure).dist(u, v)
}

pub fn girth(structure: &RelStructure) -> ExtendedNat {
    incidence(structure).girth()
}

pub fn diameter(structure: &RelStructure) -> ExtendedNat {
    incidence(structure).diameter()
}

/// Distances from `u` to every element, in one BFS pass.
pub fn distances_from(structure: &RelStructure, u: usize) -> Vec<ExtendedNat> {
    let g = incidence(structure);
    let dist = g.bfs(u, None);
    (0..structure.size())
        .map(|v| match dist[v] {
            Some(d) => {
                assert!(d % 2 == 0);
                ExtendedNat::Fin(d / 2)
            }
            None => ExtendedNat::Infinity,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use ExtendedNat::{Fin, Infinity};

    #[test]
    fn extended_nat_order() {
        assert!(Fin(3) < Fin(4));
        assert!(Fin(u64::MAX) < Infinity);
        assert_eq!(Infinity, Infinity);
    }

    #[test]
    fn incidence_shapes() {
        let lp = incidence(&catalog::loop_point());
        assert_eq!(
            (lp.element_count(), lp.block_count(), lp.edge_count()),
            (1, 1, 2)
        );
        let k2 = incidence(&catalog::k(2));
        assert_eq!(
            (k2.element_count(), k2.block_count(), k2.edge_count()),
            (2, 2, 4)
        );
        let pt = incidence(&catalog::point());
        assert_eq!(
            (pt.element_count(), pt.block_count(), pt.edge_count()),
            (1, 0, 0)
        );
    }

    #[test]
    fn c3_metrics() {
        let c3 = catalog::directed_cycle(3);
        assert_eq!(dist(&c3, 0, 2), Fin(1));
        assert_eq!(diameter(&c3), Fin(1));
        assert_eq!(girth(&c3), Fin(3));
    }

    #[test]
    fn loop_and_k2_girth() {
        assert_eq!(girth(&catalog::loop_point()), Fin(1));
        assert_eq!(girth(&catalog::k(2)), Fin(2));
    }

    #[test]
    fn acyclic_and_disconnected_are_infinite() {
        let pt = catalog::point();
        assert_eq!(girth(&pt), Infinity);
        assert_eq!(diameter(&pt), Fin(0));
        let two = crate::RelStructure::empty(catalog::graph_signature(), 2);
        assert_eq!(diameter(&two), Infinity);
        assert_eq!(dist(&two, 0, 1), Infinity);
        let empty = crate::RelStructure::empty(catalog::graph_signature(), 0);
        assert_eq!(diameter(&empty), Fin(0));
    }

    #[test]
    fn symmetric_cycle_distances() {
        let c9 = catalog::symmetric_cycle(9);
        assert_eq!(dist(&c9, 0, 4), Fin(4));
        assert_eq!(dist(&c9, 0, 5), Fin(4));
        assert_eq!(diameter(&c9), Fin(4));
        // Both tuple orientations between adjacent vertices make a
        // 4-edge incidence cycle.
        assert_eq!(girth(&c9), Fin(2));
    }

    #[test]
    fn dist_symmetry_and_triangle() {
        let c5 = catalog::symmetric_cycle(5);
        for u in 0..5 {
            for v in 0..5 {
                assert_eq!(dist(&c5, u, v), dist(&c5, v, u));
                for w in 0..5 {
                    let (a, b, c) = (dist(&c5, u, w), dist(&c5, u, v), dist(&c5, v, w));
                    if let (Fin(a), Fin(b), Fin(c)) = (a, b, c) {
                        assert!(a <= b + c);
                    }
                }
            }
        }
    }

    #[test]
    fn dot_export_mentions_every_vertex() {
        let dot = incidence(&catalog::k(2)).to_dot();
        assert!(dot.contains("e0 [shape=circle"));
        assert!(dot.contains("b1 [shape=box"));
        assert!(dot.contains("label=\"E(0,1)\""));
    }
}
