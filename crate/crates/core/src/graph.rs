//! Simple undirected graphs with stable vertex labels.

use crate::error::{Error, Result};
use crate::vset::{VertexSet, MAX_VERTICES};
use std::fmt;

/// An edge `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

/// Normalizes an unordered pair into an [`Edge`].
pub fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite simple graph. Vertex labels are integers below 128 and never
/// change under the reduction operations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: VertexSet,
    adj: Vec<VertexSet>,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            vertices: VertexSet::EMPTY,
            adj: vec![VertexSet::EMPTY; MAX_VERTICES],
        }
    }

    /// A graph on `vertices` with the given edges. Endpoints are added to the
    /// vertex set when missing.
    pub fn from_edges(vertices: impl IntoIterator<Item = usize>, edges: &[Edge]) -> Result<Self> {
        let mut g = Graph::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Graph on `0..n` with the given edges.
    pub fn with_order(n: usize, edges: &[Edge]) -> Result<Self> {
        Graph::from_edges(0..n, edges)
    }

    pub fn add_vertex(&mut self, v: usize) -> Result<()> {
        if v >= MAX_VERTICES {
            return Err(Error::LabelTooLarge(v));
        }
        self.vertices = self.vertices.with(v);
        Ok(())
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::Loop(a));
        }
        self.add_vertex(a)?;
        self.add_vertex(b)?;
        self.adj[a] = self.adj[a].with(b);
        self.adj[b] = self.adj[b].with(a);
        Ok(())
    }

    pub fn vertices(&self) -> VertexSet {
        self.vertices
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn size(&self) -> usize {
        self.vertices.iter().map(|v| self.adj[v].len()).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> VertexSet {
        if v < MAX_VERTICES {
            self.adj[v]
        } else {
            VertexSet::EMPTY
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.vertices.iter().map(|v| self.degree(v)).min()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.neighbours(a).contains(b)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in self.vertices {
            for v in self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges with both ends in `set`, lexicographic.
    pub fn edges_within(&self, set: VertexSet) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in set & self.vertices {
            for v in self.adj[u] & set {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The induced subgraph `G[set]`.
    pub fn induced(&self, set: VertexSet) -> Graph {
        let set = set & self.vertices;
        let mut adj = vec![VertexSet::EMPTY; MAX_VERTICES];
        for v in set {
            adj[v] = self.adj[v] & set;
        }
        Graph { vertices: set, adj }
    }

    /// Whether `other` is a subgraph of `self`.
    pub fn contains_subgraph(&self, other: &Graph) -> bool {
        other.vertices.is_subset(self.vertices)
            && other.vertices.iter().all(|v| other.adj[v].is_subset(self.adj[v]))
    }

    /// The vertex set of the component of `G[within]` containing `start`.
    pub fn component_of(&self, start: usize, within: VertexSet) -> VertexSet {
        if !within.contains(start) {
            return VertexSet::EMPTY;
        }
        let mut comp = VertexSet::singleton(start);
        let mut frontier = comp;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next |= self.adj[v];
            }
            next = (next & within) - comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    /// Vertex sets of the components of `G[within]`, ordered by smallest label.
    pub fn components_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut rest = within & self.vertices;
        let mut out = Vec::new();
        while let Some(v) = rest.min() {
            let c = self.component_of(v, rest);
            rest = rest - c;
            out.push(c);
        }
        out
    }

    pub fn component_sets(&self) -> Vec<VertexSet> {
        self.components_within(self.vertices)
    }

    /// Components as induced subgraphs, ordered by smallest label.
    pub fn components(&self) -> Vec<Graph> {
        self.component_sets().into_iter().map(|c| self.induced(c)).collect()
    }

    /// The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        self.component_sets().len() == 1
    }

    pub fn is_connected_within(&self, set: VertexSet) -> bool {
        self.components_within(set).len() == 1
    }

    pub fn delete_edge(&self, e: Edge) -> Result<Graph> {
        let (a, b) = edge(e.0, e.1);
        if !self.has_edge(a, b) {
            return Err(Error::NoSuchEdge(a, b));
        }
        let mut g = self.clone();
        g.adj[a] = g.adj[a].without(b);
        g.adj[b] = g.adj[b].without(a);
        Ok(g)
    }

    pub fn delete_vertex(&self, v: usize) -> Graph {
        self.induced(self.vertices.without(v))
    }

    /// `G - v + uw` for a degree-2 vertex `v` with neighbours `u`, `w`. When
    /// `uw` is already an edge the result is `G - v`.
    pub fn suppress_vertex(&self, v: usize) -> Result<Graph> {
        if !self.vertices.contains(v) {
            return Err(Error::NoSuchVertex(v));
        }
        let n = self.neighbours(v);
        if n.len() != 2 {
            return Err(Error::NotSuppressible(v, n.len()));
        }
        let mut it = n.iter();
        let (u, w) = (it.next().unwrap(), it.next().unwrap());
        let mut g = self.delete_vertex(v);
        g.add_edge(u, w)?;
        Ok(g)
    }

    /// The two neighbours of a degree-2 vertex.
    pub fn suppression_neighbours(&self, v: usize) -> Result<(usize, usize)> {
        let n = self.neighbours(v);
        if !self.vertices.contains(v) || n.len() != 2 {
            return Err(Error::NotSuppressible(v, n.len()));
        }
        Ok((n.min().unwrap(), n.max().unwrap()))
    }

    /// Vertex sets of the blocks: maximal connected subgraphs without a cut
    /// vertex that contain an edge. Sorted lexicographically.
    pub fn blocks(&self) -> Vec<VertexSet> {
        let mut st = BlockSearch {
            g: self,
            disc: vec![usize::MAX; MAX_VERTICES],
            low: vec![0; MAX_VERTICES],
            time: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
        };
        for v in self.vertices {
            if st.disc[v] == usize::MAX {
                st.visit(v, usize::MAX);
            }
        }
        st.blocks.sort();
        st.blocks
    }
}

struct BlockSearch<'a> {
    g: &'a Graph,
    disc: Vec<usize>,
    low: Vec<usize>,
    time: usize,
    stack: Vec<Edge>,
    blocks: Vec<VertexSet>,
}

impl BlockSearch<'_> {
    fn visit(&mut self, u: usize, parent: usize) {
        self.disc[u] = self.time;
        self.low[u] = self.time;
        self.time += 1;
        for w in self.g.neighbours(u) {
            if self.disc[w] == usize::MAX {
                self.stack.push((u, w));
                self.visit(w, u);
                self.low[u] = self.low[u].min(self.low[w]);
                if self.low[w] >= self.disc[u] {
                    let mut block = VertexSet::EMPTY;
                    while let Some((a, b)) = self.stack.pop() {
                        block = block.with(a).with(b);
                        if (a, b) == (u, w) {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if w != parent && self.disc[w] < self.disc[u] {
                self.stack.push((u, w));
                self.low[u] = self.low[u].min(self.disc[w]);
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph {{ V: {}, E: {:?} }}", self.vertices, self.edges())
    }
}

/// Small named graphs used throughout the tests and examples.
pub mod named {
    use super::*;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<Edge> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::with_order(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        let mut edges: Vec<Edge> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((0, n - 1));
        }
        Graph::with_order(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Graph::with_order(n, &edges).unwrap()
    }

    /// Vertices `0..n` form one row, `n..2n` the other.
    pub fn ladder(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((i, n + i));
            if i + 1 < n {
                edges.push((i, i + 1));
                edges.push((n + i, n + i + 1));
            }
        }
        Graph::with_order(2 * n, &edges).unwrap()
    }

    /// K4 on `0..4` with the edge `{0,1}` replaced by a path through `len`
    /// new vertices `4..4+len`.
    pub fn subdivided_k4(len: usize) -> Graph {
        let mut edges = vec![(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        if len == 0 {
            edges.push((0, 1));
        } else {
            let mut prev = 0;
            for i in 0..len {
                edges.push(edge(prev, 4 + i));
                prev = 4 + i;
            }
            edges.push(edge(prev, 1));
        }
        Graph::with_order(4 + len, &edges).unwrap()
    }

    /// K4 with every edge subdivided once; branch vertices `0..4`.
    pub fn fully_subdivided_k4() -> Graph {
        let mut edges = Vec::new();
        let mut next = 4;
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((a, next));
                edges.push((b, next));
                next += 1;
            }
        }
        Graph::with_order(next, &edges).unwrap()
    }

    /// Two triangles `{0,1,2}` and `{3,4,5}`.
    pub fn two_triangles() -> Graph {
        Graph::with_order(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn delete_edge_examples() {
        let k4 = complete(4);
        assert_eq!(k4.delete_edge((0, 1)).unwrap().size(), 5);
        let p3 = path(3).delete_edge((0, 1)).unwrap();
        assert_eq!(p3.edges(), vec![(1, 2)]);
        assert_eq!(p3.order(), 3);
        let t = complete(3).delete_edge((1, 0)).unwrap();
        assert_eq!(t.edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(path(3).delete_edge((0, 2)), Err(Error::NoSuchEdge(0, 2)));
    }

    #[test]
    fn suppress_examples() {
        let p = path(3).suppress_vertex(1).unwrap();
        assert_eq!(p.edges(), vec![(0, 2)]);
        let c = cycle(4).suppress_vertex(1).unwrap();
        assert_eq!(c.edges(), vec![(0, 2), (0, 3), (2, 3)]);
        let t = complete(3).suppress_vertex(0).unwrap();
        assert_eq!(t.edges(), vec![(1, 2)]);
        assert_eq!(t.vertices(), VertexSet::from_iter([1, 2]));
        assert!(matches!(complete(4).suppress_vertex(0), Err(Error::NotSuppressible(0, 3))));
    }

    #[test]
    fn components_examples() {
        assert_eq!(two_triangles().components().len(), 2);
        assert_eq!(complete(4).components().len(), 1);
        assert!(Graph::new().components().is_empty());
        assert!(!Graph::new().is_connected());
        let comps = two_triangles().component_sets();
        assert_eq!(comps[0], VertexSet::from_iter([0, 1, 2]));
    }

    fn brute_blocks(g: &Graph) -> Vec<VertexSet> {
        let n = g.vertices().max().map_or(0, |m| m + 1);
        let mut cands = Vec::new();
        for mask in 1u128..(1u128 << n) {
            let x = VertexSet(mask) & g.vertices();
            if x.bits() != mask || x.len() < 2 || !g.is_connected_within(x) {
                continue;
            }
            if x.iter().all(|v| g.is_connected_within(x.without(v))) || x.len() == 2 {
                cands.push(x);
            }
        }
        let mut out: Vec<VertexSet> = cands
            .iter()
            .copied()
            .filter(|&x| !cands.iter().any(|&y| y != x && x.is_subset(y)))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn blocks_match_brute_force() {
        let graphs = vec![
            path(4),
            cycle(5),
            complete(4),
            two_triangles(),
            Graph::with_order(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (6, 6 - 1)]).unwrap(),
            Graph::with_order(3, &[]).unwrap(),
            subdivided_k4(2),
        ];
        for g in graphs {
            assert_eq!(g.blocks(), brute_blocks(&g), "{g:?}");
        }
    }
}
