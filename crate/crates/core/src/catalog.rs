//! Stock structures used throughout the tests and the CLI.
//!
//! Graphs live over the signature `graph` with one binary relation
//! `E`. The two-flag structures live over `flags` with unary `P` and
//! `Q`.

use std::sync::Arc;

use crate::relational::{RelStructure, Signature};

/// `{ E/2 }`.
pub fn graph_signature() -> Arc<Signature> {
    Arc::new(Signature::new("graph", vec![("E".into(), 2)]).unwrap())
}

/// `{ P/1, Q/1 }`.
pub fn flags_signature() -> Arc<Signature> {
    Arc::new(Signature::new("flags", vec![("P".into(), 1), ("Q".into(), 1)]).unwrap())
}

/// Complete loopless graph on `n` vertices, both orientations of
/// every edge. `k(2)` is the single symmetric edge.
pub fn k(n: usize) -> RelStructure {
    let mut s = RelStructure::empty(graph_signature(), n);
    for u in 0..n {
        for v in 0..n {
            if u != v {
                s.insert("E", &[u, v]).unwrap();
            }
        }
    }
    s
}

/// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn directed_cycle(n: usize) -> RelStructure {
    assert!(n >= 1);
    let mut s = RelStructure::empty(graph_signature(), n);
    for u in 0..n {
        s.insert("E", &[u, (u + 1) % n]).unwrap();
    }
    s
}

/// Cycle with both orientations of every edge.
pub fn symmetric_cycle(n: usize) -> RelStructure {
    assert!(n >= 3);
    let mut s = RelStructure::empty(graph_signature(), n);
    for u in 0..n {
        s.insert("E", &[u, (u + 1) % n]).unwrap();
        s.insert("E", &[(u + 1) % n, u]).unwrap();
    }
    s
}

/// One vertex carrying a loop.
pub fn loop_point() -> RelStructure {
    let mut s = RelStructure::empty(graph_signature(), 1);
    s.insert("E", &[0, 0]).unwrap();
    s
}

/// One vertex, no tuples.
pub fn point() -> RelStructure {
    RelStructure::empty(graph_signature(), 1)
}

/// One point flagged `P` only.
pub fn p_point() -> RelStructure {
    let mut s = RelStructure::empty(flags_signature(), 1);
    s.insert("P", &[0]).unwrap();
    s
}

/// One point flagged `Q` only.
pub fn q_point() -> RelStructure {
    let mut s = RelStructure::empty(flags_signature(), 1);
    s.insert("Q", &[0]).unwrap();
    s
}

/// Looks up a structure by its catalog name. Understood names:
/// `k<N>`, `cyc<N>` (directed cycle), `scyc<N>` (symmetric cycle),
/// plus `k2`, `k3`, `c3` (alias of `cyc3`), `loop`, `pt`, `ppoint`,
/// `qpoint`.
pub fn by_name(name: &str) -> Option<RelStructure> {
    match name {
        "loop" => return Some(loop_point()),
        "pt" => return Some(point()),
        "ppoint" => return Some(p_point()),
        "qpoint" => return Some(q_point()),
        "c3" => return Some(directed_cycle(3)),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("scyc") {
        if let Ok(n) = rest.parse::<usize>() {
            if (3..=1000).contains(&n) {
                return Some(symmetric_cycle(n));
            }
        }
        return None;
    }
    if let Some(rest) = name.strip_prefix("cyc") {
        if let Ok(n) = rest.parse::<usize>() {
            if (1..=1000).contains(&n) {
                return Some(directed_cycle(n));
            }
        }
        return None;
    }
    if let Some(rest) = name.strip_prefix('k') {
        if let Ok(n) = rest.parse::<usize>() {
            if (1..=1000).contains(&n) {
                return Some(k(n));
            }
        }
    }
    None
}

/// Names resolvable by [`by_name`], for help output.
pub const NAME_SUMMARY: &str = "k<N>, cyc<N>, scyc<N>, c3, loop, pt, ppoint, qpoint";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_shapes() {
        assert_eq!(k(2).tuple_count(), 2);
        assert_eq!(k(3).tuple_count(), 6);
        assert_eq!(directed_cycle(3).tuple_count(), 3);
        assert_eq!(symmetric_cycle(5).tuple_count(), 10);
        assert_eq!(loop_point().tuple_count(), 1);
        assert_eq!(point().tuple_count(), 0);
        assert!(by_name("k2").is_some());
        assert!(by_name("scyc9").is_some());
        assert!(by_name("bogus").is_none());
    }
}
