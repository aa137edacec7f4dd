//! Tangles: verification, enumeration, axioms and lifts.

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::separations::{enumerate_separations, Separation, SeparationSystem};
use crate::vset::{subsets_of_size, VertexSet, MAX_VERTICES};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// An orientation of `S_k(G)`, stored as a map from the canonical form of
/// each unoriented separation to whether the canonical orientation is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tangle {
    pub k: usize,
    map: BTreeMap<Separation, bool>,
}

impl Tangle {
    /// Builds the orientation holding exactly the given oriented separations.
    /// Fails if two of them orient the same separation.
    pub fn from_oriented(k: usize, seps: impl IntoIterator<Item = Separation>) -> Result<Tangle> {
        let mut map = BTreeMap::new();
        for s in seps {
            let c = s.canonical();
            if map.insert(c, c == s).is_some() {
                return Err(Error::NotAnOrientation(format!("{s} oriented twice")));
            }
        }
        Ok(Tangle { k, map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn contains(&self, s: &Separation) -> bool {
        let c = s.canonical();
        match self.map.get(&c) {
            Some(&chosen) => chosen == (c == *s) || c.inverse() == c,
            None => false,
        }
    }

    /// The chosen orientation of the separation `{s.small, s.big}`.
    pub fn orientation_of(&self, s: &Separation) -> Option<Separation> {
        let c = s.canonical();
        self.map.get(&c).map(|&chosen| if chosen { c } else { c.inverse() })
    }

    /// Whether the separation is oriented at all.
    pub fn orients(&self, s: &Separation) -> bool {
        self.map.contains_key(&s.canonical())
    }

    /// Chosen orientations, sorted by order and then canonical form.
    pub fn members(&self) -> Vec<Separation> {
        let mut keys: Vec<&Separation> = self.map.keys().collect();
        keys.sort_by_key(|s| s.sort_key());
        keys.into_iter()
            .map(|c| if self.map[c] { *c } else { c.inverse() })
            .collect()
    }

    /// The ≤-maximal members.
    pub fn maximal_members(&self) -> Vec<Separation> {
        maximal_elements(&self.members())
    }

    /// Restriction to separations of order `< k2`.
    pub fn truncate(&self, k2: usize) -> Tangle {
        let map = self.map.iter().filter(|(s, _)| s.order() < k2).map(|(s, b)| (*s, *b)).collect();
        Tangle { k: k2.min(self.k), map }
    }

    /// Text form: a `k` line followed by one member per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("k {}\n", self.k);
        for s in self.members() {
            let _ = writeln!(out, "{s}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Tangle> {
        let mut k = None;
        let mut seps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("k ") {
                k = Some(rest.trim().parse().map_err(|_| parse_err(i + 1, "bad k"))?);
            } else {
                seps.push(Separation::parse(line, i + 1)?);
            }
        }
        let k = k.ok_or_else(|| parse_err(1, "missing k line"))?;
        Tangle::from_oriented(k, seps)
    }

    pub fn to_json(&self) -> TangleJson {
        TangleJson {
            k: self.k,
            separations: self.members().iter().map(|s| [s.small.to_vec(), s.big.to_vec()]).collect(),
        }
    }

    pub fn from_json(j: &TangleJson) -> Result<Tangle> {
        let seps = j.separations.iter().map(|[a, b]| {
            Separation::new(VertexSet::from_iter(a.iter().copied()), VertexSet::from_iter(b.iter().copied()))
        });
        if j.separations.iter().flatten().flatten().any(|&v| v >= MAX_VERTICES) {
            return Err(Error::LabelTooLarge(MAX_VERTICES));
        }
        Tangle::from_oriented(j.k, seps)
    }

    /// Reads either the text form or the JSON form.
    pub fn parse_any(text: &str) -> Result<Tangle> {
        if text.trim_start().starts_with('{') {
            let j: TangleJson = serde_json::from_str(text).map_err(|e| parse_err(1, e.to_string()))?;
            Tangle::from_json(&j)
        } else {
            Tangle::from_text(text)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TangleJson {
    pub k: usize,
    pub separations: Vec<[Vec<usize>; 2]>,
}

/// The ≤-maximal elements of a list.
pub fn maximal_elements(seps: &[Separation]) -> Vec<Separation> {
    let mut sorted: Vec<Separation> = seps.to_vec();
    // Anything strictly above s has a strictly larger small side or a
    // strictly smaller big side, so it sorts later under this key.
    sorted.sort_by_key(|s| (s.small.len(), usize::MAX - s.big.len()));
    sorted.dedup();
    let mut out: Vec<Separation> = Vec::new();
    for i in (0..sorted.len()).rev() {
        let s = sorted[i];
        if !out.iter().any(|m| s.leq(m)) {
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.sort_key());
    out
}

/// Edge coverage bookkeeping for the forbidden-triple test.
#[derive(Clone, Debug)]
pub struct Cover {
    vertices: VertexSet,
    words: usize,
    incident: Vec<Vec<u64>>,
    full: Vec<u64>,
}

impl Cover {
    pub fn new(g: &Graph) -> Cover {
        let edges = g.edges();
        let words = edges.len().div_ceil(64).max(1);
        let mut incident = vec![vec![0u64; words]; MAX_VERTICES];
        let mut full = vec![0u64; words];
        for (i, &(a, b)) in edges.iter().enumerate() {
            incident[a][i / 64] |= 1 << (i % 64);
            incident[b][i / 64] |= 1 << (i % 64);
            full[i / 64] |= 1 << (i % 64);
        }
        Cover { vertices: g.vertices(), words, incident, full }
    }

    /// Edges with both ends in `a`.
    pub fn edges_inside(&self, a: VertexSet) -> Vec<u64> {
        let mut m = self.full.clone();
        for v in self.vertices - a {
            for (w, inc) in m.iter_mut().zip(&self.incident[v]) {
                *w &= !inc;
            }
        }
        m
    }

    pub fn covers(&self, parts: &[(VertexSet, &[u64])]) -> bool {
        let vu = parts.iter().fold(VertexSet::EMPTY, |acc, p| acc | p.0);
        if !self.vertices.is_subset(vu) {
            return false;
        }
        (0..self.words).all(|w| parts.iter().fold(0u64, |acc, p| acc | p.1[w]) == self.full[w])
    }
}

/// Whether `G[A1] ∪ G[A2] ∪ G[A3] = G`.
pub fn is_forbidden_triple(g: &Graph, s1: &Separation, s2: &Separation, s3: &Separation) -> bool {
    let parts = [s1.small, s2.small, s3.small];
    let union = parts.iter().fold(VertexSet::EMPTY, |a, &b| a | b);
    g.vertices().is_subset(union)
        && g.edges().iter().all(|&(u, v)| parts.iter().any(|p| p.contains(u) && p.contains(v)))
}

/// Checks that `orientation` orients each member of `S_k(g)` exactly once and
/// nothing else.
pub fn as_orientation(g: &Graph, k: usize, orientation: &[Separation]) -> Result<Tangle> {
    let system = enumerate_separations(g, k);
    let t = Tangle::from_oriented(k, orientation.iter().copied())?;
    if t.len() != system.len() || !system.members.iter().all(|s| t.orients(s)) {
        return Err(Error::NotAnOrientation(format!(
            "{} separations oriented, {} expected",
            t.len(),
            system.len()
        )));
    }
    Ok(t)
}

/// A strategy for deciding whether an orientation has a forbidden triple.
pub trait TangleChecker: Send + Sync {
    fn name(&self) -> &'static str;
    fn has_no_forbidden_triple(&self, g: &Graph, t: &Tangle) -> bool;
}

/// Scans every triple of members.
pub struct NaiveChecker;

impl TangleChecker for NaiveChecker {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn has_no_forbidden_triple(&self, g: &Graph, t: &Tangle) -> bool {
        let m = t.members();
        for i in 0..m.len() {
            for j in i..m.len() {
                for l in j..m.len() {
                    if is_forbidden_triple(g, &m[i], &m[j], &m[l]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Scans triples of ≤-maximal members only.
pub struct MaximalChecker;

impl TangleChecker for MaximalChecker {
    fn name(&self) -> &'static str {
        "maximal"
    }

    fn has_no_forbidden_triple(&self, g: &Graph, t: &Tangle) -> bool {
        let cover = Cover::new(g);
        let mut m = t.maximal_members();
        // Largest small sides first, so each loop can stop once the sides
        // left are too small to reach |V| together.
        m.sort_by_key(|s| std::cmp::Reverse(s.small.len()));
        let n = g.order();
        let masks: Vec<Vec<u64>> = m.iter().map(|s| cover.edges_inside(s.small)).collect();
        for i in 0..m.len() {
            let ai = m[i].small;
            if 3 * ai.len() < n {
                break;
            }
            for j in i..m.len() {
                let aj = m[j].small;
                if ai.len() + 2 * aj.len() < n {
                    break;
                }
                let missing = g.vertices() - (ai | aj);
                for l in j..m.len() {
                    let al = m[l].small;
                    if al.len() < missing.len() {
                        break;
                    }
                    if missing.is_subset(al) && cover.covers(&[(ai, &masks[i]), (aj, &masks[j]), (al, &masks[l])]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Checkers by name.
pub fn checker(name: &str) -> Option<Box<dyn TangleChecker>> {
    match name {
        "naive" => Some(Box::new(NaiveChecker)),
        "maximal" => Some(Box::new(MaximalChecker)),
        _ => None,
    }
}

pub const CHECKERS: &[&str] = &["maximal", "naive"];

/// Whether `orientation` is a `k`-tangle of `g`.
pub fn is_tangle(g: &Graph, k: usize, orientation: &[Separation]) -> Result<bool> {
    let t = as_orientation(g, k, orientation)?;
    Ok(MaximalChecker.has_no_forbidden_triple(g, &t))
}

/// Whether `t` is a tangle of `g` of order `t.k`.
pub fn is_tangle_of(g: &Graph, t: &Tangle) -> Result<bool> {
    is_tangle(g, t.k, &t.members())
}

/// Returns an error unless `t` is a tangle of `g`.
pub fn require_tangle(g: &Graph, t: &Tangle) -> Result<()> {
    if is_tangle_of(g, t)? {
        Ok(())
    } else {
        Err(Error::NotATangle(format!("orientation of order {} has a forbidden triple", t.k)))
    }
}

/// Backtracking over the separations of order `< k`, optionally with some
/// orientations fixed in advance. Forbidden triples are checked against the
/// ≤-maximal frontier of the partial orientation.
pub(crate) struct Search<'a> {
    system: &'a SeparationSystem,
    cover: Cover,
    /// Oriented separation `2i` is member `i` canonical, `2i+1` its inverse.
    small: Vec<VertexSet>,
    big: Vec<VertexSet>,
    masks: Vec<Vec<u64>>,
}

struct Undo {
    added: Option<usize>,
    removed: Vec<usize>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(g: &Graph, system: &'a SeparationSystem) -> Search<'a> {
        let cover = Cover::new(g);
        let mut small = Vec::new();
        let mut big = Vec::new();
        let mut masks = Vec::new();
        for s in &system.members {
            for o in [*s, s.inverse()] {
                small.push(o.small);
                big.push(o.big);
                masks.push(cover.edges_inside(o.small));
            }
        }
        Search { system, cover, small, big, masks }
    }

    fn leq(&self, a: usize, b: usize) -> bool {
        self.small[a].is_subset(self.small[b]) && self.big[b].is_subset(self.big[a])
    }

    fn covers(&self, a: usize, b: usize, c: usize) -> bool {
        self.cover.covers(&[
            (self.small[a], &self.masks[a]),
            (self.small[b], &self.masks[b]),
            (self.small[c], &self.masks[c]),
        ])
    }

    fn try_add(&self, id: usize, frontier: &mut Vec<usize>) -> Option<Undo> {
        if frontier.iter().any(|&f| self.leq(id, f)) {
            return Some(Undo { added: None, removed: Vec::new() });
        }
        if self.covers(id, id, id) {
            return None;
        }
        for (x, &f) in frontier.iter().enumerate() {
            if self.covers(id, id, f) {
                return None;
            }
            for &h in &frontier[x..] {
                if self.covers(id, f, h) {
                    return None;
                }
            }
        }
        let mut removed = Vec::new();
        frontier.retain(|&f| {
            if self.leq(f, id) {
                removed.push(f);
                false
            } else {
                true
            }
        });
        frontier.push(id);
        Some(Undo { added: Some(id), removed })
    }

    fn undo(frontier: &mut Vec<usize>, u: Undo) {
        if let Some(id) = u.added {
            let at = frontier.iter().rposition(|&f| f == id).expect("added id is on the frontier");
            frontier.swap_remove(at);
        }
        frontier.extend(u.removed);
    }

    /// Runs the search. `fixed[i]` pins member `i` to the canonical
    /// orientation (`true`) or its inverse. Fixed members are placed first.
    /// Returns up to `limit` solutions as per-member choices.
    pub(crate) fn run(&self, fixed: &[Option<bool>], limit: usize) -> Vec<Vec<bool>> {
        let n = self.system.members.len();
        let mut order: Vec<usize> = (0..n).filter(|&i| fixed[i].is_some()).collect();
        order.extend((0..n).filter(|&i| fixed[i].is_none()));
        let options: Vec<Vec<bool>> = (0..n)
            .map(|i| match fixed[i] {
                Some(b) => vec![b],
                None if self.system.members[i].inverse() == self.system.members[i] => vec![true],
                None => vec![true, false],
            })
            .collect();
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let mut frontier: Vec<usize> = Vec::new();
        let mut next_opt = vec![0usize; n + 1];
        let mut undos: Vec<Undo> = Vec::with_capacity(n);
        let mut assign = vec![true; n];
        let mut pos = 0usize;
        loop {
            if pos == n {
                out.push(assign.clone());
                if out.len() >= limit || n == 0 {
                    return out;
                }
                pos -= 1;
                Self::undo(&mut frontier, undos.pop().unwrap());
                continue;
            }
            let idx = order[pos];
            if next_opt[pos] >= options[idx].len() {
                next_opt[pos] = 0;
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                Self::undo(&mut frontier, undos.pop().unwrap());
                continue;
            }
            let o = options[idx][next_opt[pos]];
            next_opt[pos] += 1;
            let id = 2 * idx + usize::from(!o);
            if let Some(u) = self.try_add(id, &mut frontier) {
                undos.push(u);
                assign[idx] = o;
                pos += 1;
            }
        }
    }

    pub(crate) fn to_tangle(&self, choice: &[bool]) -> Tangle {
        let map = self.system.members.iter().zip(choice).map(|(s, &b)| (*s, b)).collect();
        Tangle { k: self.system.k, map }
    }
}

/// All `k`-tangles of `g`, in the order the backtracking finds them.
pub fn enumerate_tangles(g: &Graph, k: usize) -> Vec<Tangle> {
    let system = enumerate_separations(g, k);
    let search = Search::new(g, &system);
    let fixed = vec![None; system.len()];
    search.run(&fixed, usize::MAX).iter().map(|c| search.to_tangle(c)).collect()
}

/// The first tangle of `g` of order `k` that orients the given separations as
/// prescribed, if any.
pub fn complete_orientation(g: &Graph, k: usize, prescribed: &[Separation]) -> Option<Tangle> {
    let system = enumerate_separations(g, k);
    let mut fixed = vec![None; system.len()];
    for s in prescribed {
        let i = system.position(s)?;
        let want = system.members[i] == *s;
        match fixed[i] {
            Some(b) if b != want => return None,
            _ => fixed[i] = Some(want),
        }
    }
    let search = Search::new(g, &system);
    search.run(&fixed, 1).first().map(|c| search.to_tangle(c))
}

/// Orients every member of `system` by `choose`, which is handed the
/// canonical orientation and returns the orientation to keep.
pub fn orient_system(
    system: &SeparationSystem,
    mut choose: impl FnMut(&Separation) -> Result<Separation>,
) -> Result<Tangle> {
    let mut map = BTreeMap::new();
    for s in &system.members {
        let o = choose(s)?;
        if o != *s && o != s.inverse() {
            return Err(Error::Invariant(format!("{o} is not an orientation of {s}")));
        }
        map.insert(*s, o == *s);
    }
    Ok(Tangle { k: system.k, map })
}

/// Orients every member of `system` by a membership predicate, which must
/// accept exactly one of the two orientations.
pub fn orient_by_membership(system: &SeparationSystem, mut includes: impl FnMut(&Separation) -> bool) -> Result<Tangle> {
    orient_system(system, |s| {
        let inv = s.inverse();
        match (includes(s), inv != *s && includes(&inv)) {
            (true, false) => Ok(*s),
            (false, true) => Ok(inv),
            (true, true) => Err(Error::NotAnOrientation(format!("both orientations of {s} included"))),
            (false, false) if inv == *s => Err(Error::NotAnOrientation(format!("{s} not included"))),
            (false, false) => Err(Error::NotAnOrientation(format!("neither orientation of {s} included"))),
        }
    })
}

/// `X_τ`, the intersection of all big sides.
pub fn tangle_core(t: &Tangle, g: &Graph) -> VertexSet {
    t.members().iter().fold(g.vertices(), |acc, s| acc & s.big)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub consistent: bool,
    pub regular: bool,
    pub profile: bool,
}

pub fn check_axioms(t: &Tangle, g: &Graph) -> AxiomReport {
    let m = t.members();
    let consistent = m.iter().all(|a| m.iter().all(|c| !c.inverse().leq(a)));
    let v = g.vertices();
    let regular = (0..t.k.min(v.len() + 1))
        .flat_map(|size| subsets_of_size(v, size))
        .all(|x| t.contains(&Separation::new(x, v)));
    let profile = m.iter().all(|a| {
        m.iter().all(|c| {
            let s = a.supremum(c);
            s.order() >= t.k || t.contains(&s)
        })
    });
    AxiomReport { consistent, regular, profile }
}

/// `τ ⊆ τ'`.
pub fn extends(t: &Tangle, t2: &Tangle) -> bool {
    t.members().iter().all(|s| t2.contains(s))
}

/// The lift of a tangle of the subgraph `sub` to `g`.
pub fn lift_subgraph(t2: &Tangle, sub: &Graph, g: &Graph) -> Result<Tangle> {
    if !g.contains_subgraph(sub) {
        return Err(Error::Precondition("not a subgraph".into()));
    }
    let vs = sub.vertices();
    let system = enumerate_separations(g, t2.k);
    let mut chosen = Vec::with_capacity(system.len());
    for s in &system.members {
        let pick = [*s, s.inverse()]
            .into_iter()
            .find(|o| t2.contains(&Separation::new(o.small & vs, o.big & vs)));
        match pick {
            Some(o) => chosen.push(o),
            None => return Err(Error::Invariant(format!("restriction of {s} not oriented"))),
        }
    }
    Tangle::from_oriented(t2.k, chosen)
}

/// The lift of a tangle of the graph obtained by suppressing `v` in `g`.
pub fn lift_suppression(t2: &Tangle, g: &Graph, v: usize) -> Result<Tangle> {
    if t2.k < 3 {
        return Err(Error::Precondition("lift undefined below order 3".into()));
    }
    let (u1, u2) = g.suppression_neighbours(v)?;
    let system = enumerate_separations(g, t2.k);
    let mut chosen = Vec::with_capacity(system.len());
    for s in &system.members {
        let mut picked = None;
        for o in [*s, s.inverse()] {
            let a1 = o.small.without(v);
            let b1 = o.big.without(v);
            let include = if (o.small.contains(u1) && o.small.contains(u2)) || (o.big.contains(u1) && o.big.contains(u2)) {
                t2.contains(&Separation::new(a1, b1))
            } else {
                let (ui, uj) = if o.small.contains(u1) { (u1, u2) } else { (u2, u1) };
                t2.contains(&Separation::new(a1, b1.with(ui))) || t2.contains(&Separation::new(a1.with(uj), b1))
            };
            if include {
                if picked.is_some() {
                    return Err(Error::Invariant(format!("both orientations of {s} lifted")));
                }
                picked = Some(o);
            }
            if o == o.inverse() {
                break;
            }
        }
        chosen.push(picked.ok_or_else(|| Error::Invariant(format!("no orientation of {s} lifted")))?);
    }
    Tangle::from_oriented(t2.k, chosen)
}
