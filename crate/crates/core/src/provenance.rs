//! Topological-minor provenance: which path of the original graph each
//! current edge stands for.

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::vset::VertexSet;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorProvenance {
    /// The graph the reduction started from.
    pub source: Graph,
    /// The graph after the reduction.
    pub current: Graph,
    pub branch_vertices: VertexSet,
    /// For each current edge `(u, v)` with `u < v`, the path from `u` to `v`
    /// in the source graph.
    pub edge_paths: BTreeMap<Edge, Vec<usize>>,
}

impl MinorProvenance {
    pub fn identity(g: &Graph) -> Self {
        MinorProvenance {
            source: g.clone(),
            current: g.clone(),
            branch_vertices: g.vertices(),
            edge_paths: g.edges().into_iter().map(|(a, b)| ((a, b), vec![a, b])).collect(),
        }
    }

    /// The source path behind the current edge `ab`, read from `a` to `b`.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let p = self.edge_paths.get(&edge(a, b))?;
        if a < b {
            Some(p.clone())
        } else {
            Some(p.iter().rev().copied().collect())
        }
    }

    pub fn after_delete_edge(&self, e: Edge) -> Result<Self> {
        let mut out = self.clone();
        out.current = self.current.delete_edge(e)?;
        out.edge_paths.remove(&edge(e.0, e.1));
        Ok(out)
    }

    pub fn after_suppress(&self, v: usize) -> Result<Self> {
        let (u, w) = self.current.suppression_neighbours(v)?;
        let mut out = self.clone();
        out.current = self.current.suppress_vertex(v)?;
        out.branch_vertices = out.branch_vertices.without(v);
        let left = self.path(u, v).expect("edge uv has a path");
        let right = self.path(v, w).expect("edge vw has a path");
        out.edge_paths.remove(&edge(u, v));
        out.edge_paths.remove(&edge(v, w));
        if !self.current.has_edge(u, w) {
            let mut joined = left;
            joined.extend_from_slice(&right[1..]);
            out.edge_paths.insert((u, w), joined);
        }
        Ok(out)
    }

    /// Restricts to the induced subgraph on `keep`.
    pub fn after_restrict(&self, keep: VertexSet) -> Self {
        let mut out = self.clone();
        out.current = self.current.induced(keep);
        out.branch_vertices = self.branch_vertices & keep;
        out.edge_paths.retain(|&(a, b), _| keep.contains(a) && keep.contains(b));
        out
    }

    /// Internal disjointness and endpoint checks.
    pub fn check(&self) -> Result<()> {
        if self.branch_vertices != self.current.vertices() {
            return Err(Error::Invariant("branch vertices differ from current vertices".into()));
        }
        let keys: Vec<Edge> = self.edge_paths.keys().copied().collect();
        if keys != self.current.edges() {
            return Err(Error::Invariant("edge paths do not match current edges".into()));
        }
        let mut used = VertexSet::EMPTY;
        for (&(a, b), p) in &self.edge_paths {
            if p.first() != Some(&a) || p.last() != Some(&b) || p.len() < 2 {
                return Err(Error::Invariant(format!("bad endpoints for path of {a}-{b}")));
            }
            for w in p.windows(2) {
                if !self.source.has_edge(w[0], w[1]) {
                    return Err(Error::Invariant(format!("path step {}-{} not in source", w[0], w[1])));
                }
            }
            for &x in &p[1..p.len() - 1] {
                if used.contains(x) || self.branch_vertices.contains(x) {
                    return Err(Error::Invariant(format!("paths share internal vertex {x}")));
                }
                used = used.with(x);
            }
        }
        Ok(())
    }
}

/// Provenance of the reduction `outer` followed by `inner`.
pub fn compose_provenance(outer: &MinorProvenance, inner: &MinorProvenance) -> Result<MinorProvenance> {
    if inner.source != outer.current {
        return Err(Error::Mismatch("inner source is not the outer result".into()));
    }
    let mut edge_paths = BTreeMap::new();
    for (&(a, b), p) in &inner.edge_paths {
        let mut full = vec![a];
        for w in p.windows(2) {
            let seg = outer
                .path(w[0], w[1])
                .ok_or_else(|| Error::Mismatch(format!("edge {}-{} unknown to outer", w[0], w[1])))?;
            full.extend_from_slice(&seg[1..]);
        }
        edge_paths.insert((a, b), full);
    }
    Ok(MinorProvenance {
        source: outer.source.clone(),
        current: inner.current.clone(),
        branch_vertices: inner.branch_vertices,
        edge_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn identity_composes_to_identity() {
        let g = complete(4);
        let id = MinorProvenance::identity(&g);
        assert_eq!(compose_provenance(&id, &id).unwrap(), id);
    }

    #[test]
    fn suppression_expands_paths() {
        let p3 = path(3);
        let s = MinorProvenance::identity(&p3).after_suppress(1).unwrap();
        let id = MinorProvenance::identity(&s.current);
        let c = compose_provenance(&s, &id).unwrap();
        assert_eq!(c.edge_paths[&(0, 2)], vec![0, 1, 2]);

        let p4 = path(4);
        let first = MinorProvenance::identity(&p4).after_suppress(1).unwrap();
        let second = MinorProvenance::identity(&first.current).after_suppress(2).unwrap();
        let c = compose_provenance(&first, &second).unwrap();
        assert_eq!(c.edge_paths[&(0, 3)], vec![0, 1, 2, 3]);
        c.check().unwrap();
        let chained = first.after_suppress(2).unwrap();
        assert_eq!(chained, c);
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = MinorProvenance::identity(&path(3));
        let b = MinorProvenance::identity(&complete(3));
        assert!(matches!(compose_provenance(&a, &b), Err(Error::Mismatch(_))));
    }
}
