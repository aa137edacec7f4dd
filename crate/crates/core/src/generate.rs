//! Exhaustive generation of graphs up to isomorphism, and synthetic
//! test-instance families.

use crate::graph::Graph;
use std::collections::BTreeSet;

/// Canonical code of a graph on `0..n` (n ≤ 11): the smallest upper-triangle
/// adjacency word over all relabelings that respect a refined degree
/// partition.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.order();
    assert!(n <= 11, "canonical_code is meant for tiny graphs");
    let colors = refine_colors(g, n);
    // Vertices grouped by color, groups in color order.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let max_color = colors.iter().copied().max().map_or(0, |c| c + 1);
    for c in 0..max_color {
        classes.push((0..n).filter(|&v| colors[v] == c).collect());
    }
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    search_orders(g, &classes, 0, &mut order, &mut best);
    best
}

fn refine_colors(g: &Graph, n: usize) -> Vec<usize> {
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = g.neighbours(v).iter().map(|w| colors[w]).collect();
                ns.sort_unstable();
                (colors[v], ns)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = sigs.iter().collect();
        let index: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = sigs.iter().map(|s| index.binary_search(&s).unwrap()).collect();
        let stable = count_distinct(&next) == count_distinct(&colors);
        colors = next;
        if stable {
            return colors;
        }
    }
}

fn count_distinct(v: &[usize]) -> usize {
    v.iter().collect::<BTreeSet<_>>().len()
}

fn search_orders(g: &Graph, classes: &[Vec<usize>], ci: usize, order: &mut Vec<usize>, best: &mut u64) {
    if ci == classes.len() {
        let code = code_for(g, order);
        if code < *best {
            *best = code;
        }
        return;
    }
    let mut class = classes[ci].clone();
    permute(&mut class, 0, &mut |perm| {
        let len = order.len();
        order.extend_from_slice(perm);
        search_orders(g, classes, ci + 1, order, best);
        order.truncate(len);
    });
}

fn permute(items: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if start == items.len() {
        f(items);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permute(items, start + 1, f);
        items.swap(start, i);
    }
}

/// `order[p]` is the old vertex placed at position `p`.
fn code_for(g: &Graph, order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for j in 1..n {
        for i in 0..j {
            code = (code << 1) | g.has_edge(order[i], order[j]) as u64;
        }
    }
    code
}

/// All graphs on `0..n` up to isomorphism, in a deterministic order.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::new()];
    for m in 1..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for base in &level {
            for mask in 0u32..(1u32 << (m - 1)) {
                let mut g = base.clone();
                g.add_vertex(m - 1).unwrap();
                for u in 0..m - 1 {
                    if mask >> u & 1 == 1 {
                        g.add_edge(u, m - 1).unwrap();
                    }
                }
                let code = canonical_code(&g);
                if seen.insert(code) {
                    next.push((code, g));
                }
            }
        }
        next.sort_by_key(|(c, _)| *c);
        level = next.into_iter().map(|(_, g)| g).collect();
    }
    level
}

/// Connected graphs on `0..n` up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(|g| g.is_connected()).collect()
}

/// Connected graphs with `1..=max_n` vertices.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

/// All graphs with `0..=max_n` vertices.
pub fn all_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (0..=max_n).flat_map(all_graphs).collect()
}
