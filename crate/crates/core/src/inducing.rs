//! Vertex sets and weight functions inducing a tangle: `X` induces `τ` when
//! `|X ∩ A| < |X ∩ B|` for every `(A, B) ∈ τ`, and a weight function `w`
//! when `w(A) < w(B)`. Includes exact minimum searches, the transfer of a
//! weight function back along a reduction trace, and a batch verifier.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::decode_graph6;
use crate::pipeline::{ReductionTrace, StepKind};
use crate::separations::Separation;
use crate::tangles::{enumerate_tangles, Tangle};
use crate::vset::VertexSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

/// Nonnegative integer weights on the vertices of a graph. Vertices without
/// an entry have weight zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightFunction {
    pub weights: BTreeMap<usize, u64>,
}

impl WeightFunction {
    pub fn zero_on(vertices: VertexSet) -> Self {
        WeightFunction { weights: vertices.iter().map(|v| (v, 0)).collect() }
    }

    /// `𝟙_X` on `vertices`.
    pub fn indicator(vertices: VertexSet, x: VertexSet) -> Self {
        WeightFunction { weights: vertices.iter().map(|v| (v, u64::from(x.contains(v)))).collect() }
    }

    pub fn get(&self, v: usize) -> u64 {
        self.weights.get(&v).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn weight_of(&self, set: VertexSet) -> u64 {
        set.iter().map(|v| self.get(v)).sum()
    }

    pub fn support(&self) -> VertexSet {
        self.weights.iter().filter(|(_, &w)| w > 0).map(|(&v, _)| v).collect()
    }

    /// The same weights with explicit zeros on the rest of `vertices`.
    pub fn extend_by_zero(&self, vertices: VertexSet) -> Self {
        let mut out = self.clone();
        for v in vertices {
            out.weights.entry(v).or_insert(0);
        }
        out
    }

    /// One `vertex weight` pair per line.
    pub fn to_text(&self) -> String {
        self.weights.iter().map(|(v, w)| format!("{v} {w}\n")).collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut weights = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums = crate::io::parse_ints(line, i + 1)?;
            match nums.as_slice() {
                [v, w] => {
                    weights.insert(*v, *w as u64);
                }
                _ => return Err(crate::error::parse_err(i + 1, "expected `vertex weight`")),
            }
        }
        Ok(WeightFunction { weights })
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|(v, w)| format!("{v}:{w}")).collect();
        write!(f, "{{{}}} total {}", parts.join(" "), self.total())
    }
}

/// `w(A) < w(B)` for every member. Checking the maximal members suffices:
/// `(A, B) ≤ (C, D)` gives `w(A) ≤ w(C) < w(D) ≤ w(B)`.
pub fn induces_weight(t: &Tangle, w: &WeightFunction) -> bool {
    t.maximal_members().iter().all(|s| w.weight_of(s.small) < w.weight_of(s.big))
}

pub fn induces_set(t: &Tangle, x: VertexSet) -> bool {
    t.maximal_members().iter().all(|s| (x & s.small).len() < (x & s.big).len())
}

fn set_induces(maximal: &[Separation], x: VertexSet) -> bool {
    maximal.iter().all(|s| (x & s.small).len() < (x & s.big).len())
}

/// The least inducing set of size at most `max_size`, in size-then-
/// lexicographic order. Candidates must meet `B \ A` for every maximal
/// member, so vertices in none of those sets are never tried.
pub fn find_inducing_set(g: &Graph, t: &Tangle, max_size: usize) -> Option<VertexSet> {
    let maximal = t.maximal_members();
    let useful: Vec<usize> = g.vertices().iter().filter(|&v| maximal.iter().any(|s| s.strict_big().contains(v))).collect();
    let needs_all: Vec<VertexSet> = maximal.iter().map(|s| s.strict_big()).collect();
    // Dropping a useless vertex from an inducing set keeps it inducing, so
    // every minimum inducing set avoids them.
    for size in 0..=max_size.min(useful.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let x: VertexSet = idx.iter().map(|&i| useful[i]).collect();
            if needs_all.iter().all(|b| b.intersects(x)) && set_induces(&maximal, x) {
                return Some(x);
            }
            if !next_combination(&mut idx, useful.len()) {
                break;
            }
        }
    }
    None
}

/// Advances `idx` to the next `idx.len()`-subset of `0..n` in lexicographic
/// order; false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let size = idx.len();
    for i in (0..size).rev() {
        if idx[i] < n - size + i {
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// One linear constraint `Σ coeff·w ≥ 1` over the vertices of `B \ A`
/// (coefficient +1) and `A \ B` (coefficient −1).
struct Constraint {
    plus: VertexSet,
    minus: VertexSet,
}

struct WeightSearch<'a> {
    order: &'a [usize],
    constraints: &'a [Constraint],
    weights: Vec<u64>,
}

impl WeightSearch<'_> {
    /// Whether every constraint can still reach 1 when at most `remaining`
    /// further weight goes to the unassigned vertices `order[pos..]`.
    fn feasible(&self, pos: usize, remaining: u64) -> bool {
        let unassigned: VertexSet = self.order[pos..].iter().copied().collect();
        self.constraints.iter().all(|c| {
            let mut value: i64 = 0;
            for (i, &v) in self.order[..pos].iter().enumerate() {
                if c.plus.contains(v) {
                    value += self.weights[i] as i64;
                } else if c.minus.contains(v) {
                    value -= self.weights[i] as i64;
                }
            }
            let reach = if c.plus.intersects(unassigned) { remaining as i64 } else { 0 };
            value + reach >= 1
        })
    }

    fn search(&mut self, pos: usize, remaining: u64) -> bool {
        if !self.feasible(pos, remaining) {
            return false;
        }
        if pos == self.order.len() {
            return true;
        }
        for w in 0..=remaining {
            self.weights[pos] = w;
            if self.search(pos + 1, remaining - w) {
                return true;
            }
        }
        self.weights[pos] = 0;
        false
    }
}

/// A weight function of minimum total weight, at most `budget`, inducing
/// `t`. Exact: branch and bound over integer weights for each total in
/// turn, pruning with per-constraint residual bounds.
pub fn find_inducing_weights(g: &Graph, t: &Tangle, budget: u64) -> Option<WeightFunction> {
    let maximal = t.maximal_members();
    let constraints: Vec<Constraint> =
        maximal.iter().map(|s| Constraint { plus: s.strict_big(), minus: s.strict_small() }).collect();
    let order: Vec<usize> = g.vertices().iter().collect();
    for total in 0..=budget {
        let mut search = WeightSearch { order: &order, constraints: &constraints, weights: vec![0; order.len()] };
        if search.search(0, total) {
            let w = WeightFunction { weights: order.iter().copied().zip(search.weights).collect() };
            debug_assert!(induces_weight(t, &w));
            return Some(w);
        }
    }
    None
}

/// Carries a weight function inducing the terminal tangle of `trace` back to
/// the root graph, extending by zero at every suppression and component
/// step, and checks at each step that it induces that step's tangle.
pub fn transfer_by_zero(trace: &ReductionTrace, w_final: &WeightFunction) -> Result<WeightFunction> {
    if !w_final.support().is_subset(trace.terminal_graph().vertices()) {
        return Err(Error::Precondition("weight function has support outside the terminal graph".into()));
    }
    if !induces_weight(trace.terminal_tangle(), w_final) {
        return Err(Error::Precondition("weight function does not induce the terminal tangle".into()));
    }
    let mut w = w_final.extend_by_zero(trace.terminal_graph().vertices());
    for i in (0..trace.steps.len()).rev() {
        let (g_prev, t_prev) = trace.before(i);
        match &trace.steps[i].kind {
            StepKind::DeleteEdge(_) => {}
            StepKind::SuppressVertex(_) | StepKind::TakeComponent(_) => w = w.extend_by_zero(g_prev.vertices()),
        }
        if !induces_weight(t_prev, &w) {
            return Err(Error::Invariant(format!("extension by zero fails to induce the tangle before step {}", i + 1)));
        }
    }
    Ok(w)
}

/// Per-graph result of the batch verifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P11Entry {
    pub id: String,
    pub tangles: usize,
    /// Largest over the tangles of the least inducing set size.
    pub max_min_set: usize,
    /// Largest over the tangles of the least inducing total weight.
    pub max_min_weight: u64,
    /// Tangles (text form) with no inducing set within the size limit.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct P11Report {
    pub k: usize,
    pub entries: Vec<P11Entry>,
    /// Stream entries that could not be read, with the reason.
    pub malformed: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct P11Summary {
    pub k: usize,
    pub graphs: usize,
    pub tangles: usize,
    pub induced: usize,
    pub failures: usize,
    pub malformed: usize,
    pub max_min_set: usize,
    pub max_min_weight: u64,
}

impl P11Report {
    /// Entries in a deterministic order. Merging reports is concatenation
    /// followed by this sort, so it is associative and order-insensitive.
    pub fn normalise(&mut self) {
        self.entries.sort_by(|a, b| a.id.cmp(&b.id));
        self.entries.dedup_by(|a, b| a.id == b.id);
        self.malformed.sort();
    }

    pub fn merge(mut self, other: P11Report) -> P11Report {
        self.entries.extend(other.entries);
        self.malformed.extend(other.malformed);
        self.normalise();
        self
    }

    pub fn summary(&self) -> P11Summary {
        let tangles = self.entries.iter().map(|e| e.tangles).sum();
        let failures = self.entries.iter().map(|e| e.failures.len()).sum::<usize>();
        P11Summary {
            k: self.k,
            graphs: self.entries.len(),
            tangles,
            induced: tangles - failures,
            failures,
            malformed: self.malformed.len(),
            max_min_set: self.entries.iter().map(|e| e.max_min_set).max().unwrap_or(0),
            max_min_weight: self.entries.iter().map(|e| e.max_min_weight).max().unwrap_or(0),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.entries.iter().all(|e| e.failures.is_empty())
    }

    /// Table with one row per graph.
    pub fn to_table(&self) -> String {
        let mut out = format!("{:<20} {:>8} {:>8} {:>8} {:>8}\n", "graph", "tangles", "min-set", "min-wt", "failed");
        for e in &self.entries {
            out.push_str(&format!(
                "{:<20} {:>8} {:>8} {:>8} {:>8}\n",
                e.id,
                e.tangles,
                e.max_min_set,
                e.max_min_weight,
                e.failures.len()
            ));
        }
        for (id, why) in &self.malformed {
            out.push_str(&format!("{id:<20} malformed: {why}\n"));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P11Options {
    pub k: usize,
    pub max_set_size: usize,
    /// Budget for the minimum weight search; 0 skips it.
    pub weight_budget: u64,
    /// JSON-lines file of finished entries; existing entries are reused.
    pub checkpoint: Option<std::path::PathBuf>,
    /// Graphs processed between checkpoint writes.
    pub batch: usize,
}

impl P11Options {
    pub fn new(k: usize, max_set_size: usize) -> Self {
        P11Options { k, max_set_size, weight_budget: 12, checkpoint: None, batch: 64 }
    }
}

pub fn verify_graph(id: &str, g: &Graph, opts: &P11Options) -> P11Entry {
    let tangles = enumerate_tangles(g, opts.k);
    let mut entry = P11Entry { id: id.to_string(), tangles: tangles.len(), max_min_set: 0, max_min_weight: 0, failures: Vec::new() };
    for t in &tangles {
        match find_inducing_set(g, t, opts.max_set_size) {
            Some(x) => entry.max_min_set = entry.max_min_set.max(x.len()),
            None => entry.failures.push(t.to_text()),
        }
        if opts.weight_budget > 0 {
            if let Some(w) = find_inducing_weights(g, t, opts.weight_budget) {
                entry.max_min_weight = entry.max_min_weight.max(w.total());
            }
        }
    }
    entry
}

fn load_checkpoint(path: &Path) -> Result<Vec<P11Entry>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in file.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // A torn last line from an interrupted run is dropped.
        match serde_json::from_str(&line) {
            Ok(e) => out.push(e),
            Err(e) => eprintln!("checkpoint line {}: {e}; ignored", i + 1),
        }
    }
    Ok(out)
}

/// Checks every `k`-tangle of every graph in the stream for an inducing set
/// of size at most `max_set_size`. Graphs run in parallel in batches; with a
/// checkpoint file each finished batch is appended and already finished ids
/// are skipped.
pub fn verify_p11_batch(stream: Vec<(String, Result<Graph>)>, opts: &P11Options) -> Result<P11Report> {
    let mut report = P11Report { k: opts.k, ..Default::default() };
    let mut done = BTreeSet::new();
    if let Some(path) = &opts.checkpoint {
        for e in load_checkpoint(path)? {
            done.insert(e.id.clone());
            report.entries.push(e);
        }
    }
    let mut todo = Vec::new();
    for (id, g) in stream {
        match g {
            Err(e) => report.malformed.push((id, e.to_string())),
            Ok(_) if done.contains(&id) => {}
            Ok(g) => todo.push((id, g)),
        }
    }
    for chunk in todo.chunks(opts.batch.max(1)) {
        let entries: Vec<P11Entry> = chunk.par_iter().map(|(id, g)| verify_graph(id, g, opts)).collect();
        if let Some(path) = &opts.checkpoint {
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
            for e in &entries {
                writeln!(f, "{}", serde_json::to_string(e).expect("serialisable"))?;
            }
        }
        report.entries.extend(entries);
    }
    report.normalise();
    Ok(report)
}

/// Reads graph6 lines; each gets the id `g<line>`. Blank lines and lines
/// starting with `>` or `#` are skipped.
pub fn read_graph6_stream(text: &str) -> Vec<(String, Result<Graph>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('>') && !l.starts_with('#'))
        .map(|(i, l)| (format!("g{:06}", i + 1), decode_graph6(l)))
        .collect()
}
