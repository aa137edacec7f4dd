//! Vertex-disjoint paths and minimum vertex separators via unit-capacity
//! max-flow on the vertex-split digraph.

use crate::graph::Graph;
use crate::vset::VertexSet;
use std::collections::VecDeque;

/// Residual network on `2n + 2` nodes: `2v` is the entry of vertex `v`,
/// `2v + 1` its exit, then source and sink.
struct Network {
    cap: Vec<Vec<i32>>,
    adj: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network { cap: vec![vec![0; nodes]; nodes], adj: vec![Vec::new(); nodes], source: nodes - 2, sink: nodes - 1 }
    }

    fn arc(&mut self, a: usize, b: usize, cap: i32) {
        if self.cap[a][b] == 0 && self.cap[b][a] == 0 {
            self.adj[a].push(b);
            self.adj[b].push(a);
        }
        self.cap[a][b] = cap;
    }

    fn reachable(&self) -> Vec<Option<usize>> {
        let mut prev = vec![None; self.cap.len()];
        prev[self.source] = Some(self.source);
        let mut queue = VecDeque::from([self.source]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if prev[y].is_none() && self.cap[x][y] > 0 {
                    prev[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        prev
    }

    fn augment(&mut self) -> bool {
        let prev = self.reachable();
        if prev[self.sink].is_none() {
            return false;
        }
        let mut y = self.sink;
        while y != self.source {
            let x = prev[y].unwrap();
            self.cap[x][y] -= 1;
            self.cap[y][x] += 1;
            y = x;
        }
        true
    }
}

struct Flow {
    net: Network,
    within: VertexSet,
    value: usize,
}

fn max_flow(g: &Graph, within: VertexSet, a: VertexSet, b: VertexSet) -> Flow {
    let within = within & g.vertices();
    let n = within.max().map_or(0, |m| m + 1);
    let mut net = Network::new(2 * n + 2);
    // Only the vertex arcs have unit capacity, so minimum cuts are vertex
    // sets.
    let wide = i32::MAX / 2;
    for v in within {
        net.arc(2 * v, 2 * v + 1, 1);
        for w in g.neighbours(v) & within {
            net.arc(2 * v + 1, 2 * w, wide);
        }
    }
    let (s, t) = (net.source, net.sink);
    for v in a & within {
        net.arc(s, 2 * v, wide);
    }
    for v in b & within {
        net.arc(2 * v + 1, t, wide);
    }
    let mut value = 0;
    while net.augment() {
        value += 1;
    }
    Flow { net, within, value }
}

/// The number of disjoint `A`–`B` paths in `g[within]`.
pub fn connectivity(g: &Graph, within: VertexSet, a: VertexSet, b: VertexSet) -> usize {
    max_flow(g, within, a, b).value
}

/// A maximum set of disjoint `A`–`B` paths in `g[within]`. Each path meets
/// `A` only in its first vertex and `B` only in its last; a vertex of
/// `A ∩ B` is a trivial path. Paths are sorted by first vertex.
pub fn max_disjoint_paths(g: &Graph, within: VertexSet, a: VertexSet, b: VertexSet) -> Vec<Vec<usize>> {
    let flow = max_flow(g, within, a, b);
    let net = &flow.net;
    // No arc has an original reverse, so the reverse residual is the flow.
    let used = |x: usize, y: usize| net.cap[y][x] > 0;
    let mut paths = Vec::new();
    for start in a & flow.within {
        if !used(net.source, 2 * start) {
            continue;
        }
        let mut path = vec![start];
        let mut v = start;
        loop {
            if used(2 * v + 1, net.sink) {
                break;
            }
            let next = (g.neighbours(v) & flow.within)
                .iter()
                .find(|&w| used(2 * v + 1, 2 * w))
                .expect("flow is conserved");
            path.push(next);
            v = next;
        }
        paths.push(trim(path, a, b));
    }
    debug_assert_eq!(paths.len(), flow.value);
    paths.sort();
    paths
}

/// Shortens a walk from `A` to `B` to its last `A` vertex and the first `B`
/// vertex after that.
fn trim(path: Vec<usize>, a: VertexSet, b: VertexSet) -> Vec<usize> {
    let from = path.iter().rposition(|&v| a.contains(v)).unwrap_or(0);
    let to = from + path[from..].iter().position(|&v| b.contains(v)).unwrap_or(path.len() - 1 - from);
    path[from..=to].to_vec()
}

/// A minimum set of vertices of `g[within]` meeting every `A`–`B` path.
pub fn min_vertex_separator(g: &Graph, within: VertexSet, a: VertexSet, b: VertexSet) -> VertexSet {
    let flow = max_flow(g, within, a, b);
    let reach = flow.net.reachable();
    let sep: VertexSet = flow.within.iter().filter(|&v| reach[2 * v].is_some() && reach[2 * v + 1].is_none()).collect();
    debug_assert_eq!(sep.len(), flow.value);
    sep
}
