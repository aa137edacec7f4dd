//! Linear decompositions, the chain refinement that produces them, their
//! validators, and the size bounds that guarantee long ones exist.

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::io::{join_ints, parse_ints};
use crate::paths::max_disjoint_paths;
use crate::separations::{enumerate_separations, Separation};
use crate::vset::VertexSet;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Bags `W_0..W_M`; consecutive bags meet in the adhesion sets `U_1..U_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDecomposition {
    pub bags: Vec<VertexSet>,
}

/// Disjoint paths, each a vertex sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Linkage {
    pub paths: Vec<Vec<usize>>,
}

impl Linkage {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.paths.iter().flatten().copied().collect()
    }

    pub fn path_sets(&self) -> Vec<VertexSet> {
        self.paths.iter().map(|p| p.iter().copied().collect()).collect()
    }

    /// Whether the paths are pairwise disjoint paths of `g`, each meeting
    /// `a` exactly in its first vertex and `b` exactly in its last.
    pub fn is_linkage_between(&self, g: &Graph, a: VertexSet, b: VertexSet) -> bool {
        let sets = self.path_sets();
        let total: usize = sets.iter().map(|s| s.len()).sum();
        if total != self.vertices().len() || self.paths.iter().zip(&sets).any(|(p, s)| p.len() != s.len()) {
            return false;
        }
        self.paths.iter().zip(&sets).all(|(p, s)| {
            let (first, last) = match (p.first(), p.last()) {
                (Some(f), Some(l)) => (*f, *l),
                _ => return false,
            };
            p.windows(2).all(|w| g.has_edge(w[0], w[1]))
                && (*s & a) == VertexSet::singleton(first)
                && (*s & b) == VertexSet::singleton(last)
        })
    }

    /// Edges used by the paths, normalised.
    pub fn edges(&self) -> Vec<crate::graph::Edge> {
        let mut out: Vec<_> = self.paths.iter().flat_map(|p| p.windows(2).map(|w| crate::graph::edge(w[0], w[1]))).collect();
        out.sort_unstable();
        out
    }
}

impl LinearDecomposition {
    pub fn new(bags: Vec<VertexSet>) -> Self {
        LinearDecomposition { bags }
    }

    /// `M`, the number of bags minus one.
    pub fn length(&self) -> usize {
        self.bags.len().saturating_sub(1)
    }

    /// `U_i = W_{i-1} ∩ W_i`; index 0 of the result is `U_1`.
    pub fn adhesion_sets(&self) -> Vec<VertexSet> {
        self.bags.windows(2).map(|w| w[0] & w[1]).collect()
    }

    /// `U_i` for `i ∈ 1..=M`.
    pub fn adhesion_set(&self, i: usize) -> VertexSet {
        self.bags[i - 1] & self.bags[i]
    }

    /// The common adhesion size, if all adhesion sets have the same size.
    pub fn adhesion(&self) -> Option<usize> {
        let sizes: Vec<usize> = self.adhesion_sets().iter().map(|u| u.len()).collect();
        match sizes.first() {
            Some(&s) if sizes.iter().all(|&t| t == s) => Some(s),
            Some(_) => None,
            None => Some(0),
        }
    }

    pub fn vertices(&self) -> VertexSet {
        self.bags.iter().fold(VertexSet::EMPTY, |acc, b| acc | *b)
    }

    /// One bag per line, then an optional `LINKAGE` section with one path per
    /// line.
    pub fn to_text(&self, linkage: Option<&Linkage>) -> String {
        let mut out = String::new();
        for b in &self.bags {
            out.push_str(&join_ints(b.iter()));
            out.push('\n');
        }
        if let Some(l) = linkage {
            out.push_str("LINKAGE\n");
            for p in &l.paths {
                out.push_str(&join_ints(p.iter().copied()));
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<(LinearDecomposition, Option<Linkage>)> {
        let mut bags = Vec::new();
        let mut linkage: Option<Linkage> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "LINKAGE" {
                if linkage.is_some() {
                    return Err(parse_err(i + 1, "duplicate LINKAGE section"));
                }
                linkage = Some(Linkage::default());
                continue;
            }
            let nums = parse_ints(line, i + 1)?;
            if let Some(v) = nums.iter().find(|&&v| v >= crate::vset::MAX_VERTICES) {
                return Err(Error::LabelTooLarge(*v));
            }
            match linkage.as_mut() {
                Some(l) => l.paths.push(nums),
                None => bags.push(nums.into_iter().collect()),
            }
        }
        if bags.is_empty() {
            return Err(parse_err(1, "no bags"));
        }
        Ok((LinearDecomposition { bags }, linkage))
    }
}

/// Finds positions `i_1 < … < i_n` holding the same value `ℓ` such that every
/// entry between `i_1` and `i_n` is at least `ℓ`. Positions are 0-based.
/// Always succeeds when `a.len() ≥ n^m` and all entries are below `m`; for
/// shorter inputs it finds an answer whenever one exists.
pub fn monotone_window_subsequence(a: &[usize], n: usize, m: usize) -> Option<(Vec<usize>, usize)> {
    if n == 0 || a.iter().any(|&x| x >= m) {
        return None;
    }
    window_at_level(a, 0, a.len(), 0, n)
}

/// All entries of `a[lo..hi]` are at least `level`.
fn window_at_level(a: &[usize], lo: usize, hi: usize, level: usize, n: usize) -> Option<(Vec<usize>, usize)> {
    if hi - lo < n {
        return None;
    }
    let hits: Vec<usize> = (lo..hi).filter(|&j| a[j] == level).collect();
    if hits.len() >= n {
        return Some((hits[..n].to_vec(), level));
    }
    let mut start = lo;
    for end in hits.iter().copied().chain(std::iter::once(hi)) {
        if let Some(found) = window_at_level(a, start, end, level + 1, n) {
            return Some(found);
        }
        start = end + 1;
    }
    None
}

pub fn is_strictly_increasing(chain: &[Separation]) -> bool {
    chain.windows(2).all(|w| w[0].lt(&w[1]))
}

/// Number of chain members of each order `0..m`.
fn order_counts(chain: &[Separation], m: usize) -> Vec<usize> {
    let mut counts = vec![0; m];
    for s in chain {
        counts[s.order()] += 1;
    }
    counts
}

/// Output of [`refine_chain`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedChain {
    /// The selected window: `n` members of order `order`, nothing of smaller
    /// order strictly between consecutive ones.
    pub chain: Vec<Separation>,
    pub order: usize,
    /// The improved working sequence the window was taken from.
    pub working: Vec<Separation>,
    pub iterations: usize,
    /// Order counts of the working sequence before each improvement and
    /// after the last one.
    pub measures: Vec<Vec<usize>>,
}

/// A separation of order below the window's order lying strictly between
/// two consecutive window members, of least order and then least canonical
/// form. Returns the separation and the window slot `j`.
pub fn find_violator(g: &Graph, window: &[Separation], order: usize) -> Option<(Separation, usize)> {
    let mut candidates = enumerate_separations(g, order).oriented();
    candidates.sort_by_key(|s| s.sort_key());
    for s in candidates {
        if let Some(j) = (0..window.len().saturating_sub(1)).find(|&j| window[j].lt(&s) && s.lt(&window[j + 1])) {
            return Some((s, j));
        }
    }
    None
}

/// Extracts a strictly increasing chain of length `n` and constant order
/// `ℓ` with no separation of order `< ℓ` strictly between consecutive
/// members, improving the input by corner splices until no violator is
/// left.
pub fn refine_chain(g: &Graph, chain: &[Separation], n: usize) -> Result<RefinedChain> {
    if !is_strictly_increasing(chain) {
        return Err(Error::Precondition("chain is not strictly increasing".into()));
    }
    if let Some(s) = chain.iter().find(|s| !s.is_separation_of(g)) {
        return Err(Error::Precondition(format!("{s} is not a separation of the graph")));
    }
    let m = chain.iter().map(|s| s.order()).max().map_or(1, |o| o + 1);
    let mut working = chain.to_vec();
    let mut measures = vec![order_counts(&working, m)];
    let mut iterations = 0;
    loop {
        let orders: Vec<usize> = working.iter().map(|s| s.order()).collect();
        let (idx, order) = monotone_window_subsequence(&orders, n, m).ok_or_else(|| {
            Error::ChainTooShort(format!("no window of {n} equal orders in a chain of length {}", working.len()))
        })?;
        let window: Vec<Separation> = idx.iter().map(|&i| working[i]).collect();
        let Some((s, j)) = find_violator(g, &window, order) else {
            return Ok(RefinedChain { chain: window, order, working, iterations, measures });
        };
        let (from, to) = (idx[j], idx[j + 1]);
        let segment = &working[from..=to];
        let mut spliced: Vec<Separation> = segment.iter().map(|r| r.infimum(&s)).collect();
        spliced.push(s);
        spliced.extend(segment.iter().map(|r| r.supremum(&s)));
        spliced.dedup();
        if spliced.len() < segment.len() + 1 {
            return Err(Error::Invariant("corner splice did not lengthen the chain".into()));
        }
        let mut next = working[..from].to_vec();
        next.extend(spliced);
        next.extend_from_slice(&working[to + 1..]);
        if !is_strictly_increasing(&next) || next.iter().any(|t| t.order() >= m) {
            return Err(Error::Invariant("corner splice broke the chain".into()));
        }
        let measure = order_counts(&next, m);
        if measure <= *measures.last().unwrap() {
            return Err(Error::Invariant("order counts did not increase".into()));
        }
        measures.push(measure);
        working = next;
        iterations += 1;
    }
}

/// Bags `W_0 = A_1`, `W_i = B_i ∩ A_{i+1}`, `W_M = B_M`, dropping an end bag
/// contained in its neighbour.
pub fn chain_to_linear_decomposition(g: &Graph, chain: &[Separation]) -> Result<LinearDecomposition> {
    let Some(first) = chain.first() else {
        return Err(Error::ChainTooShort("empty chain".into()));
    };
    if chain.iter().any(|s| s.order() != first.order()) {
        return Err(Error::Precondition("chain orders are not constant".into()));
    }
    if !is_strictly_increasing(chain) {
        return Err(Error::Precondition("chain is not strictly increasing".into()));
    }
    let mut bags = vec![first.small];
    for w in chain.windows(2) {
        bags.push(w[0].big & w[1].small);
    }
    bags.push(chain.last().unwrap().big);
    if bags.len() >= 2 && bags[0].is_subset(bags[1]) {
        bags.remove(0);
    }
    let n = bags.len();
    if n >= 2 && bags[n - 1].is_subset(bags[n - 2]) {
        bags.pop();
    }
    if bags.len() < 2 {
        return Err(Error::ChainTooShort("fewer than two bags after trimming".into()));
    }
    let d = LinearDecomposition { bags };
    let report = validate_linear(g, &d, None);
    if !(report.l1 && report.l2 && report.l3 && report.l4) {
        return Err(Error::Invariant(format!("decomposition from chain fails {report:?}")));
    }
    Ok(d)
}

/// A longest strictly increasing chain of oriented separations of order
/// `< k`.
pub fn longest_strict_chain(g: &Graph, k: usize) -> Vec<Separation> {
    let mut seps = enumerate_separations(g, k).oriented();
    // A strict predecessor has a smaller small side or a bigger big side.
    seps.sort_by_key(|s| (s.small.len(), std::cmp::Reverse(s.big.len()), s.sort_key()));
    let n = seps.len();
    let mut best = vec![1usize; n];
    let mut prev = vec![None; n];
    for j in 0..n {
        for i in 0..j {
            if seps[i].lt(&seps[j]) && best[i] + 1 > best[j] {
                best[j] = best[i] + 1;
                prev[j] = Some(i);
            }
        }
    }
    let Some(end) = (0..n).max_by_key(|&j| (best[j], std::cmp::Reverse(j))) else {
        return Vec::new();
    };
    let mut chain = vec![seps[end]];
    let mut at = end;
    while let Some(p) = prev[at] {
        chain.push(seps[p]);
        at = p;
    }
    chain.reverse();
    chain
}

/// Per-property verdicts of [`validate_linear`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LinearReport {
    pub l1: bool,
    pub l2: bool,
    pub l3: bool,
    pub l4: bool,
    pub r1: bool,
    pub r2: bool,
    pub r3: bool,
    pub fl1: bool,
    pub fl2: bool,
}

impl LinearReport {
    pub fn is_linear(&self) -> bool {
        self.l1 && self.l2 && self.l3 && self.l4
    }

    pub fn is_rainbow(&self) -> bool {
        self.is_linear() && self.r1 && self.r2 && self.r3
    }
}

/// A `U_i`–`U_{i+1}` linkage inside `G[W_i]` for each `i ∈ 1..M`, chained
/// into `U_1`–`U_M` paths. `None` if some linkage is too small.
pub fn foundational_linkage(g: &Graph, d: &LinearDecomposition) -> Option<Linkage> {
    let m = d.length();
    if m == 0 {
        return Some(Linkage::default());
    }
    let ell = d.adhesion()?;
    let mut paths: Vec<Vec<usize>> = d.adhesion_set(1).iter().map(|u| vec![u]).collect();
    for i in 1..m {
        let piece = max_disjoint_paths(g, d.bags[i], d.adhesion_set(i), d.adhesion_set(i + 1));
        if piece.len() != ell {
            return None;
        }
        for p in &mut paths {
            let last = *p.last().unwrap();
            let cont = piece.iter().find(|q| q[0] == last)?;
            p.extend_from_slice(&cont[1..]);
        }
    }
    Some(Linkage { paths })
}

/// Checks L1–L4 and R1–R3 on `g`, and FL1–FL2 against `linkage` or, if
/// none is given, the linkage chained from the R1 linkages.
pub fn validate_linear(g: &Graph, d: &LinearDecomposition, linkage: Option<&Linkage>) -> LinearReport {
    let bags = &d.bags;
    let m = d.length();
    let all = d.vertices();
    let l1 = all == g.vertices() && g.edges().iter().all(|&(a, b)| bags.iter().any(|w| w.contains(a) && w.contains(b)));
    let mut l2 = true;
    for i in 0..bags.len() {
        for k in i + 1..bags.len() {
            let both = bags[i] & bags[k];
            if !both.is_empty() && (i + 1..k).any(|j| !both.is_subset(bags[j])) {
                l2 = false;
            }
        }
    }
    let u = d.adhesion_sets();
    let l3 = d.adhesion().is_some();
    let l4 = (1..=m).all(|i| bags[i - 1] != u[i - 1] && u[i - 1] != bags[i]);
    let ell = d.adhesion().unwrap_or(0);
    let r1 = l3 && (1..m).all(|i| max_disjoint_paths(g, bags[i], u[i - 1], u[i]).len() == ell);
    let r2 = bags.iter().all(|&w| !w.is_empty() && g.is_connected_within(w));
    let r3 = (1..m).all(|i| !u[i - 1].intersects(u[i]));
    let computed;
    let linkage = match linkage {
        Some(l) => Some(l),
        None if r1 => {
            computed = foundational_linkage(g, d);
            computed.as_ref()
        }
        None => None,
    };
    let (fl1, fl2) = match linkage {
        Some(l) => (check_fl1(d, l), check_fl2(g, d, l)),
        None => (false, false),
    };
    LinearReport { l1, l2, l3, l4, r1, r2, r3, fl1, fl2 }
}

/// A path that is trivial in one inner bag is trivial in every inner bag.
fn check_fl1(d: &LinearDecomposition, l: &Linkage) -> bool {
    let m = d.length();
    l.path_sets().iter().all(|p| {
        let trivial: Vec<bool> = (1..m).map(|i| (*p & d.bags[i]).len() == 1).collect();
        trivial.iter().all(|&t| t) || trivial.iter().all(|&t| !t)
    })
}

/// Whether two linkage paths are joined inside `G[W]` by a path whose inner
/// vertices avoid the linkage.
pub fn joined_in_bag(g: &Graph, bag: VertexSet, linkage_vertices: VertexSet, p: VertexSet, q: VertexSet) -> bool {
    let (p, q) = (p & bag, q & bag);
    if p.iter().any(|v| g.neighbours(v).intersects(q)) {
        return true;
    }
    let nbhd = |set: VertexSet| set.iter().fold(VertexSet::EMPTY, |acc, v| acc | g.neighbours(v));
    g.components_within(bag - linkage_vertices).iter().any(|&c| nbhd(c).intersects(p) && nbhd(c).intersects(q))
}

/// Whether two linkage paths are joined in one inner bag iff in all.
fn check_fl2(g: &Graph, d: &LinearDecomposition, l: &Linkage) -> bool {
    let m = d.length();
    let sets = l.path_sets();
    let lv = l.vertices();
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            let joined: Vec<bool> = (1..m).map(|i| joined_in_bag(g, d.bags[i], lv, sets[a], sets[b])).collect();
            if !(joined.iter().all(|&t| t) || joined.iter().all(|&t| !t)) {
                return false;
            }
        }
    }
    true
}

/// `coeff · 3^exponent`, kept symbolic because the exponent is usually far
/// too large to expand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerOfThree {
    pub coeff: BigUint,
    pub exponent: BigUint,
}

impl PowerOfThree {
    /// The exact value if the exponent is at most `max_exponent`.
    pub fn value(&self, max_exponent: u32) -> Option<BigUint> {
        let e = self.exponent.to_u32().filter(|&e| e <= max_exponent)?;
        Some(&self.coeff * BigUint::from(3u32).pow(e))
    }
}

impl fmt::Display for PowerOfThree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*3^{}", self.coeff, self.exponent)
    }
}

/// `N_1(k, M) = 3k · 3^{(M+2)^{k+1}}`: enough vertices to force a long
/// linear decomposition with R1 when there is no `(k+1)`-tangle.
pub fn n1(k: u32, m: &BigUint) -> PowerOfThree {
    PowerOfThree { coeff: BigUint::from(3 * k), exponent: (m + 2u32).pow(k + 1) }
}

/// `M_1(ℓ, M) = (M·C(ℓ,2) + 1) · (ℓ!)^{ℓ+1} · ℓ!`.
pub fn m1(ell: u32, m: &BigUint) -> BigUint {
    let pairs = BigUint::from(ell) * BigUint::from(ell.saturating_sub(1)) / 2u32;
    let fact = (1..=ell).fold(BigUint::one(), |acc, i| acc * i);
    (m * pairs + 1u32) * fact.pow(ell + 1) * fact
}

/// `N(k, M) = N_1(k, M_1(k, M + 2))`.
pub fn n_bound(k: u32, m: &BigUint) -> PowerOfThree {
    n1(k, &m1(k, &(m + 2u32)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundLedger {
    pub k: u32,
    pub m: u32,
    pub n1: PowerOfThree,
    /// `M_1(k, M)`.
    pub m1: BigUint,
    pub n: PowerOfThree,
    /// `M(k) = N(k, 18k)`, the edge bound for the reduction.
    pub m_of_k: PowerOfThree,
}

pub fn compute_bounds(k: u32, m: u32) -> Result<BoundLedger> {
    if k == 0 || m == 0 {
        return Err(Error::Precondition("bounds need k, M ≥ 1".into()));
    }
    let big_m = BigUint::from(m);
    Ok(BoundLedger {
        k,
        m,
        n1: n1(k, &big_m),
        m1: m1(k, &big_m),
        n: n_bound(k, &big_m),
        m_of_k: n_bound(k, &BigUint::from(18 * k)),
    })
}

impl fmt::Display for BoundLedger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.k)?;
        writeln!(f, "M {}", self.m)?;
        writeln!(f, "N1 {}", self.n1)?;
        writeln!(f, "M1 {}", self.m1)?;
        writeln!(f, "N {}", self.n)?;
        write!(f, "M(k) {}", self.m_of_k)
    }
}

/// A tree-decomposition: bags indexed by node, and tree edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Lines `bag <node>: <vertices>` and `edge <node> <node>`.
    pub fn parse(text: &str) -> Result<TreeDecomposition> {
        let mut bags: Vec<Option<VertexSet>> = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("bag ") {
                let (node, verts) = rest.split_once(':').ok_or_else(|| parse_err(i + 1, "expected `bag <node>: ...`"))?;
                let node: usize = node.trim().parse().map_err(|_| parse_err(i + 1, "bad node"))?;
                let verts = parse_ints(verts, i + 1)?;
                if let Some(v) = verts.iter().find(|&&v| v >= crate::vset::MAX_VERTICES) {
                    return Err(Error::LabelTooLarge(*v));
                }
                if bags.len() <= node {
                    bags.resize(node + 1, None);
                }
                bags[node] = Some(verts.into_iter().collect());
            } else if let Some(rest) = line.strip_prefix("edge ") {
                match parse_ints(rest, i + 1)?.as_slice() {
                    [a, b] => edges.push((*a, *b)),
                    _ => return Err(parse_err(i + 1, "expected `edge <node> <node>`")),
                }
            } else {
                return Err(parse_err(i + 1, format!("unexpected line {line:?}")));
            }
        }
        let bags: Vec<VertexSet> = bags
            .into_iter()
            .enumerate()
            .map(|(i, b)| b.ok_or_else(|| parse_err(0, format!("node {i} has no bag"))))
            .collect::<Result<_>>()?;
        let td = TreeDecomposition { bags, edges };
        if !td.is_tree() {
            return Err(parse_err(0, "tree edges do not form a tree"));
        }
        Ok(td)
    }

    fn neighbours(&self, t: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.edges.iter().filter_map(|&(a, b)| if a == t { Some(b) } else if b == t { Some(a) } else { None }).collect();
        out.sort_unstable();
        out
    }

    fn is_tree(&self) -> bool {
        let n = self.bags.len();
        if n == 0 || self.edges.len() != n - 1 || self.edges.iter().any(|&(a, b)| a >= n || b >= n || a == b) {
            return false;
        }
        self.distances(0).iter().all(|d| d.is_some())
    }

    fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.bags.len()];
        dist[from] = Some(0);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(t) = queue.pop_front() {
            for s in self.neighbours(t) {
                if dist[s].is_none() {
                    dist[s] = Some(dist[t].unwrap() + 1);
                    queue.push_back(s);
                }
            }
        }
        dist
    }

    /// Whether the bags cover `g` and every vertex's bags form a subtree.
    pub fn is_decomposition_of(&self, g: &Graph) -> bool {
        let covered = self.bags.iter().fold(VertexSet::EMPTY, |acc, b| acc | *b);
        if covered != g.vertices() {
            return false;
        }
        if !g.edges().iter().all(|&(a, b)| self.bags.iter().any(|w| w.contains(a) && w.contains(b))) {
            return false;
        }
        g.vertices().iter().all(|v| {
            let nodes: Vec<usize> = (0..self.bags.len()).filter(|&t| self.bags[t].contains(v)).collect();
            let inside = self.edges.iter().filter(|&&(a, b)| self.bags[a].contains(v) && self.bags[b].contains(v)).count();
            inside + 1 == nodes.len()
        })
    }

    /// A longest path of the tree, as a node sequence.
    pub fn longest_path(&self) -> Vec<usize> {
        let far = |from: usize| {
            let d = self.distances(from);
            (0..d.len()).max_by_key(|&t| (d[t], std::cmp::Reverse(t))).unwrap()
        };
        let a = far(0);
        let b = far(a);
        let d = self.distances(b);
        let mut path = vec![a];
        let mut at = a;
        while at != b {
            at = self.neighbours(at).into_iter().find(|&s| d[s] == Some(d[at].unwrap() - 1)).unwrap();
            path.push(at);
        }
        path
    }

    /// The separation induced by the tree edge `(s, t)`: union of bags on the
    /// `s` side, union on the `t` side.
    pub fn induced_separation(&self, s: usize, t: usize) -> Separation {
        let side = |root: usize, cut: usize| {
            let mut seen = vec![false; self.bags.len()];
            seen[root] = true;
            seen[cut] = true;
            let mut stack = vec![root];
            let mut union = VertexSet::EMPTY;
            while let Some(x) = stack.pop() {
                union |= self.bags[x];
                for y in self.neighbours(x) {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            union
        };
        Separation::new(side(s, t), side(t, s))
    }
}

/// A source of long strictly increasing chains to feed the refinement.
pub trait ChainSource: Send + Sync {
    fn name(&self) -> &'static str;
    fn chain(&self, g: &Graph, k: usize) -> Result<Vec<Separation>>;
}

/// Exhaustive longest chain in `S_k`.
pub struct LongestChain;

impl ChainSource for LongestChain {
    fn name(&self) -> &'static str {
        "longest"
    }

    fn chain(&self, g: &Graph, k: usize) -> Result<Vec<Separation>> {
        Ok(longest_strict_chain(g, k))
    }
}

/// Separations induced along a longest path of a given tree-decomposition,
/// keeping those of order `< k` that extend the chain strictly.
pub struct TreeDecompositionChain {
    pub td: TreeDecomposition,
}

impl ChainSource for TreeDecompositionChain {
    fn name(&self) -> &'static str {
        "tree-decomposition"
    }

    fn chain(&self, g: &Graph, k: usize) -> Result<Vec<Separation>> {
        if !self.td.is_decomposition_of(g) {
            return Err(Error::Precondition("not a tree-decomposition of the graph".into()));
        }
        let path = self.td.longest_path();
        let mut chain: Vec<Separation> = Vec::new();
        for w in path.windows(2) {
            let s = self.td.induced_separation(w[0], w[1]);
            if s.order() < k && chain.last().is_none_or(|last| last.lt(&s)) {
                chain.push(s);
            }
        }
        Ok(chain)
    }
}

pub const CHAIN_SOURCES: &[&str] = &["longest", "tree-decomposition"];

/// Chain sources by name; the tree-decomposition source needs a
/// decomposition.
pub fn chain_source(name: &str, td: Option<TreeDecomposition>) -> Result<Box<dyn ChainSource>> {
    match (name, td) {
        ("longest", _) => Ok(Box::new(LongestChain)),
        ("tree-decomposition", Some(td)) => Ok(Box::new(TreeDecompositionChain { td })),
        ("tree-decomposition", None) => Err(Error::Precondition("tree-decomposition source needs a decomposition".into())),
        (other, _) => Err(Error::Precondition(format!("unknown chain source {other:?}"))),
    }
}

/// `N_1` exact value for tiny inputs; zero exponent edge cases included.
pub fn n1_value(k: u32, m: u32) -> Option<BigUint> {
    let b = n1(k, &BigUint::from(m));
    if b.coeff.is_zero() {
        return Some(BigUint::zero());
    }
    b.value(1 << 20)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_iter(v.iter().copied())
    }

    fn sep(a: &[usize], b: &[usize]) -> Separation {
        Separation::new(vs(a), vs(b))
    }

    #[test]
    fn window_examples() {
        assert_eq!(monotone_window_subsequence(&[0, 0], 2, 1), Some((vec![0, 1], 0)));
        assert_eq!(monotone_window_subsequence(&[2, 1, 1, 2], 2, 3), Some((vec![1, 2], 1)));
        assert_eq!(monotone_window_subsequence(&[1, 0, 1], 2, 2), None);
        assert_eq!(monotone_window_subsequence(&[3], 1, 2), None);
    }

    /// Prefix separations `({0..=i}, {i..})` of a path.
    fn prefix_chain(n: usize) -> Vec<Separation> {
        (0..n - 1).map(|i| Separation::new(VertexSet::from_iter(0..=i), VertexSet::from_iter(i..n))).collect()
    }

    #[test]
    fn refine_keeps_good_chains() {
        let g = path(9);
        let chain = prefix_chain(9);
        let r = refine_chain(&g, &chain, 2).unwrap();
        assert_eq!(r.iterations, 0);
        assert_eq!(r.order, 1);
        assert_eq!(r.chain, chain[..2].to_vec());
    }

    /// Triangles `{2j, 2j+1, 2j+2}` glued at even vertices.
    fn triangle_strip(count: usize) -> Graph {
        let mut edges = Vec::new();
        for j in 0..count {
            edges.extend([(2 * j, 2 * j + 1), (2 * j + 1, 2 * j + 2), (2 * j, 2 * j + 2)]);
        }
        Graph::with_order(2 * count + 1, &edges).unwrap()
    }

    #[test]
    fn refine_splices_lower_order_separations() {
        // Order-2 separations straddling the cut vertices, with the order-1
        // cuts strictly between them.
        let count = 6;
        let g = triangle_strip(count);
        let last = 2 * count;
        let cut = |lo: usize, hi: usize| Separation::new(VertexSet::from_iter(0..=hi), VertexSet::from_iter(lo..=last));
        let mut chain = vec![cut(1, 2)];
        for j in 1..count {
            chain.push(cut(2 * j, 2 * j + 1));
            chain.push(cut(2 * j + 1, 2 * j + 2));
        }
        assert!(is_strictly_increasing(&chain) && chain.iter().all(|s| s.is_separation_of(&g)));
        let r = refine_chain(&g, &chain, 2).unwrap();
        assert!(r.iterations >= 1);
        assert!(r.measures.windows(2).all(|w| w[0] < w[1]));
        assert!(r.chain.iter().all(|s| s.order() == r.order));
        assert!(find_violator(&g, &r.chain, r.order).is_none());
    }

    #[test]
    fn refine_rejects_bad_input() {
        let g = path(4);
        let c = prefix_chain(4);
        let rev: Vec<Separation> = c.iter().rev().copied().collect();
        assert!(refine_chain(&g, &rev, 2).is_err());
        assert!(matches!(refine_chain(&g, &c[..1], 2), Err(Error::ChainTooShort(_))));
    }

    #[test]
    fn path_chain_gives_edge_bags() {
        let g = path(6);
        let d = chain_to_linear_decomposition(&g, &prefix_chain(6)).unwrap();
        assert_eq!(d.bags, vec![vs(&[0, 1]), vs(&[1, 2]), vs(&[2, 3]), vs(&[3, 4]), vs(&[4, 5])]);
        let rep = validate_linear(&g, &d, None);
        assert!(rep.is_rainbow() && rep.fl1 && rep.fl2);
        assert_eq!(d.adhesion(), Some(1));
    }

    #[test]
    fn ladder_chain_gives_adhesion_two() {
        let g = ladder(6);
        let chain: Vec<Separation> = (0..5)
            .map(|i| {
                let left: VertexSet = (0..=i).flat_map(|c| [c, 6 + c]).collect();
                let right: VertexSet = (i + 1..6).flat_map(|c| [c, 6 + c]).collect();
                Separation::new(left, right | vs(&[i, 6 + i]))
            })
            .collect();
        let d = chain_to_linear_decomposition(&g, &chain).unwrap();
        assert_eq!(d.adhesion(), Some(2));
        let rep = validate_linear(&g, &d, None);
        assert!(rep.is_rainbow(), "{rep:?}");
        let l = foundational_linkage(&g, &d).unwrap();
        assert_eq!(l.paths, vec![vec![1, 2, 3, 4], vec![7, 8, 9, 10]]);
    }

    #[test]
    fn single_separation_chain() {
        let g = path(3);
        let d = chain_to_linear_decomposition(&g, &[sep(&[0, 1], &[1, 2])]).unwrap();
        assert_eq!(d.bags.len(), 2);
        // ({0}, V) has W_0 ⊆ W_1: trimming leaves one bag.
        assert!(chain_to_linear_decomposition(&g, &[sep(&[0], &[0, 1, 2])]).is_err());
    }

    #[test]
    fn overlapping_adhesions_fail_r3() {
        let g = complete(4);
        let d = LinearDecomposition::new(vec![vs(&[0, 1, 2]), vs(&[1, 2, 3]), vs(&[0, 2, 3])]);
        let rep = validate_linear(&g, &d, None);
        assert!(!rep.r3);
        assert!(!rep.l2);
    }

    #[test]
    fn longest_chain_lengths() {
        for n in 2..7 {
            assert_eq!(longest_strict_chain(&path(n), 2).len(), n + 2, "P_{n}");
        }
        let c = longest_strict_chain(&complete(4), 3);
        assert!(is_strictly_increasing(&c));
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn text_round_trip() {
        let d = LinearDecomposition::new(vec![vs(&[0, 1]), vs(&[1, 2])]);
        let l = Linkage { paths: vec![vec![1]] };
        let (d2, l2) = LinearDecomposition::from_text(&d.to_text(Some(&l))).unwrap();
        assert_eq!((d2, l2), (d, Some(l)));
        assert!(LinearDecomposition::from_text("0 x\n").is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(n1_value(1, 1), Some(BigUint::from(3u32 * 19683)));
        assert_eq!(m1(0, &BigUint::from(5u32)), BigUint::one());
        assert_eq!(m1(1, &BigUint::from(2u32)), BigUint::one());
        // (3·3 + 1)·6^4·6
        assert_eq!(m1(3, &BigUint::from(3u32)), BigUint::from(10u32 * 1296 * 6));
        let b = compute_bounds(2, 3).unwrap();
        assert_eq!(b.n.exponent, (m1(2, &BigUint::from(5u32)) + 2u32).pow(3));
        assert!(compute_bounds(0, 1).is_err());
    }

    #[test]
    fn tree_decomposition_source() {
        let g = path(5);
        let td = TreeDecomposition::parse("bag 0: 0 1\nbag 1: 1 2\nbag 2: 2 3\nbag 3: 3 4\nedge 0 1\nedge 1 2\nedge 2 3\n").unwrap();
        let src = chain_source("tree-decomposition", Some(td)).unwrap();
        let chain = src.chain(&g, 2).unwrap();
        assert_eq!(chain.len(), 3);
        assert!(is_strictly_increasing(&chain));
        assert!(TreeDecomposition::parse("bag 0: 0\nbag 1: 1\n").is_err());
        assert!(chain_source("nope", None).is_err());
    }
}
