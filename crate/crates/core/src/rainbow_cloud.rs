//! Rainbow-cloud decompositions: a long rainbow-decomposition of part of the
//! graph (the rainbow), a sun adjacent to every bag, and the rest of the
//! graph (the cloud). Separations of small order interact with the rainbow
//! in a few controlled ways, which is what lets a tangle survive deleting an
//! edge deep inside it.

use crate::decomposition::{foundational_linkage, joined_in_bag, validate_linear, LinearDecomposition, LinearReport, Linkage};
use crate::error::{parse_err, Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::io::{join_ints, parse_ints};
use crate::paths::connectivity;
use crate::separations::{enumerate_separations, Separation};
use crate::survival::forced_by;
use crate::tangles::{extends, is_tangle_of, orient_by_membership, orient_system, Tangle};
use crate::vset::VertexSet;
use rayon::prelude::*;

/// Bags `W_0..W_M` of the rainbow, the sun `Z` and the vertex set of the
/// cloud `C`. The rainbow and the cloud are the subgraphs these sets induce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RCDecomposition {
    pub bags: Vec<VertexSet>,
    pub sun: VertexSet,
    pub cloud: VertexSet,
    /// An optional foundational linkage of the rainbow, kept for I/O.
    pub linkage: Option<Linkage>,
}

impl RCDecomposition {
    pub fn length(&self) -> usize {
        self.bags.len().saturating_sub(1)
    }

    pub fn rainbow(&self) -> VertexSet {
        self.bags.iter().fold(VertexSet::EMPTY, |acc, b| acc | *b)
    }

    pub fn decomposition(&self) -> LinearDecomposition {
        LinearDecomposition::new(self.bags.clone())
    }

    /// `U_0 .. U_{M+1}`: the two end adhesion sets meet the cloud.
    pub fn adhesion_set(&self, i: usize) -> VertexSet {
        let m = self.length();
        if i == 0 {
            self.cloud & self.bags[0]
        } else if i == m + 1 {
            self.cloud & self.bags[m]
        } else {
            self.bags[i - 1] & self.bags[i]
        }
    }

    /// `ℓ = |U_0|`.
    pub fn adhesion(&self) -> usize {
        self.adhesion_set(0).len()
    }

    /// `V(R_{i,j})`, the bags `i..=j`.
    pub fn rainbow_part(&self, i: usize, j: usize) -> VertexSet {
        self.bags[i..=j].iter().fold(VertexSet::EMPTY, |acc, b| acc | *b)
    }

    /// `V(C_{i,j})`: the cloud with the bags outside `i..=j`.
    pub fn cloud_part(&self, i: usize, j: usize) -> VertexSet {
        let outside = self.bags[..i].iter().chain(&self.bags[j + 1..]);
        outside.fold(self.cloud, |acc, b| acc | *b)
    }

    /// Sections `RAINBOW-BAGS` (one bag per line), `SUN`, `CLOUD-VERTICES`
    /// and an optional `LINKAGE` (one path per line).
    pub fn to_text(&self) -> String {
        let mut out = String::from("RAINBOW-BAGS\n");
        for b in &self.bags {
            out.push_str(&join_ints(b.iter()));
            out.push('\n');
        }
        out.push_str("SUN\n");
        if !self.sun.is_empty() {
            out.push_str(&join_ints(self.sun.iter()));
            out.push('\n');
        }
        out.push_str("CLOUD-VERTICES\n");
        if !self.cloud.is_empty() {
            out.push_str(&join_ints(self.cloud.iter()));
            out.push('\n');
        }
        if let Some(l) = &self.linkage {
            out.push_str("LINKAGE\n");
            for p in &l.paths {
                out.push_str(&join_ints(p.iter().copied()));
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<RCDecomposition> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Bags,
            Sun,
            Cloud,
            Linkage,
        }
        let mut section = Section::None;
        let mut rc = RCDecomposition { bags: Vec::new(), sun: VertexSet::EMPTY, cloud: VertexSet::EMPTY, linkage: None };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            match line {
                "" => continue,
                "RAINBOW-BAGS" => section = Section::Bags,
                "SUN" => section = Section::Sun,
                "CLOUD-VERTICES" => section = Section::Cloud,
                "LINKAGE" => {
                    section = Section::Linkage;
                    rc.linkage = Some(Linkage::default());
                }
                _ => {
                    let nums = parse_ints(line, i + 1)?;
                    if let Some(v) = nums.iter().find(|&&v| v >= crate::vset::MAX_VERTICES) {
                        return Err(Error::LabelTooLarge(*v));
                    }
                    let set: VertexSet = nums.iter().copied().collect();
                    match section {
                        Section::None => return Err(parse_err(i + 1, "data before the first section")),
                        Section::Bags => rc.bags.push(set),
                        Section::Sun => rc.sun |= set,
                        Section::Cloud => rc.cloud |= set,
                        Section::Linkage => rc.linkage.as_mut().unwrap().paths.push(nums),
                    }
                }
            }
        }
        if rc.bags.is_empty() {
            return Err(parse_err(1, "no rainbow bags"));
        }
        Ok(rc)
    }
}

/// Clause-by-clause verdicts of [`validate_rc`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RcReport {
    /// `G[V(R) ∪ Z] ∪ C = G`, with `Z ⊆ V(C)` disjoint from `V(R)`.
    pub cover: bool,
    pub rc1: bool,
    pub rc2: bool,
    pub rc3: bool,
    pub rc4: bool,
    /// The given linkage, if any, is a `U_1`–`U_M` linkage of the rainbow.
    pub linkage: bool,
    pub rainbow: LinearReport,
}

impl RcReport {
    pub fn is_valid(&self) -> bool {
        self.cover && self.rc1 && self.rc2 && self.rc3 && self.rc4 && self.linkage && self.rainbow.is_rainbow()
    }
}

pub fn validate_rc(g: &Graph, rc: &RCDecomposition) -> RcReport {
    let m = rc.length();
    let rv = rc.rainbow();
    let (z, c) = (rc.sun, rc.cloud);
    let cover = z.is_subset(c)
        && !z.intersects(rv)
        && (rv | c) == g.vertices()
        && g.edges().iter().all(|&(a, b)| {
            let both = VertexSet::singleton(a).with(b);
            both.is_subset(rv | z) || both.is_subset(c)
        });
    let r = g.induced(rv);
    let ell = rc.adhesion();
    let (u0, u_end) = (rc.adhesion_set(0), rc.adhesion_set(m + 1));
    let rc1 = (rv & c) == (u0 | u_end);
    let rc2 = u_end.len() == ell
        && (m == 0 || (rc.adhesion_set(1).len() == ell && !u0.intersects(rc.adhesion_set(1)) && !rc.adhesion_set(m).intersects(u_end)));
    let rc3 = m == 0
        || (connectivity(g, rc.bags[0], u0, rc.adhesion_set(1)) == ell
            && connectivity(g, rc.bags[m], rc.adhesion_set(m), u_end) == ell);
    let rc4 = z.iter().all(|v| rc.bags.iter().all(|w| g.neighbours(v).intersects(*w)));
    let linkage = match &rc.linkage {
        None => true,
        Some(l) => m == 0 || (l.len() == ell && l.is_linkage_between(&r, rc.adhesion_set(1), rc.adhesion_set(m))),
    };
    let rainbow = validate_linear(&r, &rc.decomposition(), None);
    RcReport { cover, rc1, rc2, rc3, rc4, linkage, rainbow }
}

/// `(R, W, Z, C)_{i,j}`: keeps bags `i..=j` and moves the others into the
/// cloud.
pub fn slice_rc(rc: &RCDecomposition, i: usize, j: usize) -> Result<RCDecomposition> {
    if i > j || j > rc.length() {
        return Err(Error::Precondition(format!("slice {i}..={j} out of range 0..={}", rc.length())));
    }
    Ok(RCDecomposition { bags: rc.bags[i..=j].to_vec(), sun: rc.sun, cloud: rc.cloud_part(i, j), linkage: None })
}

/// `(V(R_{i,j}) ∪ Z, V(C_{i,j}))`, with separator `U_i ∪ U_{j+1} ∪ Z`.
pub fn rainbow_separation(rc: &RCDecomposition, i: usize, j: usize) -> Result<Separation> {
    if i > j || j > rc.length() {
        return Err(Error::Precondition(format!("slice {i}..={j} out of range 0..={}", rc.length())));
    }
    Ok(Separation::new(rc.rainbow_part(i, j) | rc.sun, rc.cloud_part(i, j)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Clockwise,
    Counterclockwise,
    None,
}

/// How an oriented separation crosses the rainbow. For a counterclockwise
/// separation the indices are those of its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingInfo {
    pub direction: Direction,
    pub i_min: usize,
    pub j_max: usize,
}

fn clockwise_indices(rc: &RCDecomposition, s: &Separation, k: usize) -> Option<(usize, usize)> {
    let m = rc.length();
    let (a_only, b_only) = (s.strict_small(), s.strict_big());
    let i = (0..=(2 * k).min(m)).find(|&i| rc.bags[i].is_subset(a_only))?;
    let j = (m.saturating_sub(2 * k)..=m).rev().find(|&j| rc.bags[j].is_subset(b_only))?;
    Some((i, j))
}

/// Crossing classification with the windows `0..=2k` and `M−2k..=M`.
pub fn classify_crossing(rc: &RCDecomposition, s: &Separation, k: usize) -> CrossingInfo {
    if let Some((i, j)) = clockwise_indices(rc, s, k) {
        debug_assert!(rc.sun.is_subset(s.separator()));
        return CrossingInfo { direction: Direction::Clockwise, i_min: i, j_max: j };
    }
    if let Some((i, j)) = clockwise_indices(rc, &s.inverse(), k) {
        return CrossingInfo { direction: Direction::Counterclockwise, i_min: i, j_max: j };
    }
    CrossingInfo { direction: Direction::None, i_min: 0, j_max: 0 }
}

/// `(A^h, B^h)` for a separation crossing the rainbow clockwise at its own
/// order; a counterclockwise one is split through its inverse.
pub fn split_crossing(rc: &RCDecomposition, s: &Separation, h: usize) -> Result<Separation> {
    let info = classify_crossing(rc, s, s.order());
    let s = match info.direction {
        Direction::Clockwise => *s,
        Direction::Counterclockwise => s.inverse(),
        Direction::None => return Err(Error::Precondition(format!("{s} does not cross the rainbow"))),
    };
    let (i, j) = (info.i_min, info.j_max);
    if h <= i || h > j {
        return Err(Error::Precondition(format!("split index {h} outside {}..={j}", i + 1)));
    }
    let c = rc.cloud_part(i, j);
    Ok(Separation::new((s.small & c) | rc.rainbow_part(i, h - 1), rc.rainbow_part(h, j) | (s.big & c)))
}

/// The clockwise orientation of a crossing separation together with its
/// splits `(h, (A^h, B^h))`.
pub fn split_family(rc: &RCDecomposition, s: &Separation) -> Option<(Separation, Vec<(usize, Separation)>)> {
    let info = classify_crossing(rc, s, s.order());
    let cw = match info.direction {
        Direction::Clockwise => *s,
        Direction::Counterclockwise => s.inverse(),
        Direction::None => return None,
    };
    let splits = (info.i_min + 1..=info.j_max).map(|h| (h, split_crossing(rc, &cw, h).unwrap())).collect();
    Some((cw, splits))
}

/// Some bags `W_i`, `W_j` with `i ≤ 2k`, `j ≥ M−2k` lie on one strict side
/// and a bag `W_h` with `i < h < j` on the other.
pub fn slices_rainbow(rc: &RCDecomposition, s: &Separation, k: usize) -> bool {
    slices_with_outer_side(rc, s, k) || slices_with_outer_side(rc, &s.inverse(), k)
}

fn slices_with_outer_side(rc: &RCDecomposition, s: &Separation, k: usize) -> bool {
    let m = rc.length();
    let (outer, inner) = (s.strict_small(), s.strict_big());
    let Some(i) = (0..=(2 * k).min(m)).find(|&i| rc.bags[i].is_subset(outer)) else {
        return false;
    };
    let Some(j) = (m.saturating_sub(2 * k)..=m).rev().find(|&j| rc.bags[j].is_subset(outer)) else {
        return false;
    };
    (i + 1..j).any(|h| rc.bags[h].is_subset(inner))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossOrSlice {
    Crossing,
    Slicing,
    Neither,
}

/// Crossing takes precedence when both apply.
pub fn classify_cross_or_slice(rc: &RCDecomposition, s: &Separation) -> CrossOrSlice {
    let k = s.order();
    if classify_crossing(rc, s, k).direction != Direction::None {
        CrossOrSlice::Crossing
    } else if slices_rainbow(rc, s, k) {
        CrossOrSlice::Slicing
    } else {
        CrossOrSlice::Neither
    }
}

/// Checks the structural bounds every separation must satisfy relative to
/// an RC-decomposition of `g`, returning the names of those that fail.
pub fn separation_property_violations(g: &Graph, rc: &RCDecomposition, s: &Separation) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let k = s.order();
    let m = rc.length();
    let ell = rc.adhesion();
    let sep = s.separator();
    let rv = rc.rainbow();
    let (a_only, b_only) = (s.strict_small(), s.strict_big());

    if rc.bags.iter().filter(|w| w.intersects(sep)).count() > 2 * k {
        bad.push("separator meets more than 2k bags");
    }
    if rc.bags.iter().filter(|w| !w.is_subset(a_only) && !w.is_subset(b_only)).count() > 2 * k {
        bad.push("more than 2k bags in neither strict side");
    }

    for d in g.components_within(g.vertices() - sep) {
        if !d.intersects(rc.cloud) {
            continue;
        }
        for i in (0..=m).filter(|&i| d.intersects(rc.bags[i])) {
            let flank_ok = |range: std::ops::RangeInclusive<usize>| {
                let missing = range.clone().filter(|&t| !rc.bags[t].is_subset(d)).count();
                missing <= 2 * k && (d.intersects(rc.sun) || range.clone().all(|t| d.intersects(rc.bags[t])))
            };
            if !flank_ok(0..=i) && !flank_ok(i..=m) {
                bad.push("component meeting cloud and rainbow misses a flank");
            }
        }
    }

    for o in [*s, s.inverse()] {
        let (outer, inner) = (o.small, o.strict_big());
        let contains_u = |t: usize| rc.adhesion_set(t).is_subset(outer);
        for h in (0..=m).filter(|&h| rc.bags[h].is_subset(inner)) {
            if (0..h).any(contains_u) && (h + 1..=m + 1).any(contains_u) {
                if (sep & rv).len() < 2 * ell {
                    bad.push("enclosed bag with small rainbow separator");
                }
                if rc.sun.is_subset(outer) && k < 2 * ell + rc.sun.len() {
                    bad.push("enclosed bag with small separator");
                }
            }
        }
    }

    if slices_rainbow(rc, s, k) && ((sep & rv).len() < 2 * ell || k < 2 * ell + rc.sun.len()) {
        bad.push("slicing separation of small order");
    }

    let two_sided =
        rc.bags.iter().any(|w| w.is_subset(a_only)) && rc.bags.iter().any(|w| w.is_subset(b_only));
    let kind = classify_cross_or_slice(rc, s);
    if two_sided && kind == CrossOrSlice::Neither {
        bad.push("separates two bags but neither crosses nor slices");
    }

    if let Some((cw, splits)) = split_family(rc, s) {
        if !rc.sun.is_subset(sep) {
            bad.push("crossing separation misses the sun");
        }
        let info = classify_crossing(rc, &cw, k);
        for (h, sh) in &splits {
            if !sh.is_separation_of(g) {
                bad.push("split is not a separation");
            }
            if sh.order() > k {
                bad.push("split has larger order");
            }
            // The extreme splits share an adhesion set with W_i or W_j, so
            // only the inner ones keep those bags strictly on their sides.
            let inner = *h > info.i_min + 1 && *h < info.j_max;
            if inner && classify_crossing(rc, sh, k).direction != Direction::Clockwise {
                bad.push("split does not cross clockwise");
            }
        }
        if !splits.windows(2).all(|w| w[0].1.lt(&w[1].1)) {
            bad.push("splits are not strictly increasing");
        }
        if let (Some(first), Some(last)) = (splits.first(), splits.last()) {
            if !first.1.leq(&cw) || !cw.leq(&last.1) {
                bad.push("separation not between its extreme splits");
            }
        }
    }
    bad
}

/// Why a tangle lives in the rainbow, if it does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Living {
    No,
    /// `(X, Y) ∈ τ` with `Y \ X` inside the rainbow away from the cloud,
    /// meeting exactly the bags `first..=last`.
    Lr1 { witness: Separation, first: usize, last: usize },
    /// A crossing separation (clockwise orientation) that τ orients
    /// non-monotonically, and the common turning point.
    Lr2 { separation: Separation, turning_point: usize },
}

impl Living {
    pub fn lives(&self) -> bool {
        !matches!(self, Living::No)
    }
}

fn bag_span(rc: &RCDecomposition, set: VertexSet) -> Option<(usize, usize)> {
    let met: Vec<usize> = (0..rc.bags.len()).filter(|&i| rc.bags[i].intersects(set)).collect();
    Some((*met.first()?, *met.last()?))
}

/// All LR1 members of `t`.
pub fn lr1_members(rc: &RCDecomposition, t: &Tangle) -> Vec<Separation> {
    let inner = rc.rainbow() - rc.cloud;
    t.members().into_iter().filter(|s| s.strict_big().is_subset(inner)).collect()
}

/// The turning point of a crossing separation under `t`, if `t` orients its
/// splits non-monotonically.
pub fn turning_point(rc: &RCDecomposition, t: &Tangle, s: &Separation) -> Option<usize> {
    let (_, splits) = split_family(rc, s)?;
    let up: Vec<bool> = splits.iter().map(|(_, sh)| t.contains(sh)).collect();
    if up.iter().all(|&b| b) || up.iter().all(|&b| !b) {
        return None;
    }
    let at = up.windows(2).position(|w| w[0] && !w[1])?;
    Some(splits[at].0)
}

/// Decides whether `t` lives in the rainbow. LR1 is reported with the
/// witness used for shortening: for `2ℓ + |Z| < k` a single-bag slice,
/// otherwise a ≤-maximal LR1 member of least bag span. LR2 checks that all
/// non-monotone crossing separations share the turning point.
pub fn lives_in_rainbow(g: &Graph, rc: &RCDecomposition, t: &Tangle) -> Result<Living> {
    let k = t.k;
    let lr1 = lr1_members(rc, t);
    if !lr1.is_empty() {
        if 2 * rc.adhesion() + rc.sun.len() < k {
            for h in 0..=rc.length() {
                let slice = rainbow_separation(rc, h, h)?.inverse();
                if t.contains(&slice) {
                    let (first, last) = bag_span(rc, slice.strict_big()).unwrap_or((h, h));
                    return Ok(Living::Lr1 { witness: slice, first, last });
                }
            }
            return Err(Error::Invariant("LR1 holds but no single-bag slice points into the rainbow".into()));
        }
        let maximal = crate::tangles::maximal_elements(&lr1);
        let best = maximal
            .iter()
            .filter_map(|s| bag_span(rc, s.strict_big()).map(|span| (span.1 - span.0, span, *s)))
            .min_by_key(|(width, span, s)| (*width, *span, s.sort_key()))
            .ok_or_else(|| Error::Invariant("LR1 witness meets no bag".into()))?;
        return Ok(Living::Lr1 { witness: best.2, first: best.1 .0, last: best.1 .1 });
    }
    let mut found: Option<(Separation, usize)> = None;
    for s in enumerate_separations(g, k).members {
        let Some(h) = turning_point(rc, t, &s) else { continue };
        match found {
            None => {
                let (cw, _) = split_family(rc, &s).unwrap();
                found = Some((cw, h));
            }
            Some((_, h0)) if h0 != h => {
                return Err(Error::Invariant(format!("turning points {h0} and {h} differ")));
            }
            _ => {}
        }
    }
    Ok(match found {
        Some((separation, turning_point)) => Living::Lr2 { separation, turning_point },
        None => Living::No,
    })
}

/// A sub-decomposition `(R, W, Z, C)_{i,j}` in whose rainbow `t` does not
/// live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shortened {
    pub rc: RCDecomposition,
    pub i: usize,
    pub j: usize,
    pub before: Living,
}

/// Cuts the rainbow so that `t` no longer lives in it, keeping at least
/// `M/2 − k` of its length. Needs `M ≥ 6k`.
pub fn shorten_to_not_living(g: &Graph, rc: &RCDecomposition, t: &Tangle) -> Result<Shortened> {
    let m = rc.length();
    let k = t.k;
    if m < 6 * k {
        return Err(Error::Precondition(format!("length {m} is below 6k = {}", 6 * k)));
    }
    let before = lives_in_rainbow(g, rc, t)?;
    let (i, j) = match &before {
        Living::No => (0, m),
        // r > M/2 − k, in integers.
        Living::Lr1 { first, last, .. } => {
            if 2 * first + 2 * k > m {
                (0, first - 1)
            } else {
                (last + 1, m)
            }
        }
        Living::Lr2 { turning_point: h, .. } => {
            if 2 * h >= m {
                (0, h - 1)
            } else {
                (h + 1, m)
            }
        }
    };
    if i > j || 2 * (j - i) + 2 * k < m {
        return Err(Error::Invariant(format!("shortened to {i}..={j}, too short for length {m}")));
    }
    let out = slice_rc(rc, i, j)?;
    if lives_in_rainbow(g, &out, t)?.lives() {
        return Err(Error::Invariant(format!("tangle still lives in the rainbow after slicing to {i}..={j}")));
    }
    Ok(Shortened { rc: out, i, j, before })
}

/// The deleted edge and the decomposition it was chosen from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChoice {
    pub edge: Edge,
    /// Valid for `g` and for `g − edge`; its middle bag is three merged bags.
    pub rc: RCDecomposition,
    /// Length of the decomposition handed to [`choose_edge`].
    pub original_length: usize,
    /// Slice of the input the shortening kept.
    pub window: (usize, usize),
}

/// Shortens, evens out and merges the three middle bags, then picks an edge
/// at the middle bag: the least sun edge if there is a sun, otherwise the
/// least edge of the middle part off the foundational linkage whose removal
/// keeps that part connected.
pub fn choose_edge(g: &Graph, rc: &RCDecomposition, t: &Tangle) -> Result<EdgeChoice> {
    let short = shorten_to_not_living(g, rc, t)?;
    let mut cur = short.rc;
    let mut window = (short.i, short.j);
    if cur.length() % 2 == 1 {
        cur = slice_rc(&cur, 0, cur.length() - 1)?;
        window.1 -= 1;
    }
    let m2 = cur.length();
    if m2 < 2 {
        return Err(Error::Precondition("rainbow too short to merge the middle bags".into()));
    }
    let r = g.induced(cur.rainbow());
    let linkage = foundational_linkage(&r, &cur.decomposition())
        .ok_or_else(|| Error::Precondition("rainbow has no foundational linkage".into()))?;
    let mid = m2 / 2;
    let merged = cur.bags[mid - 1] | cur.bags[mid] | cur.bags[mid + 1];
    let mut bags = cur.bags[..mid - 1].to_vec();
    bags.push(merged);
    bags.extend_from_slice(&cur.bags[mid + 2..]);
    let out = RCDecomposition { bags, sun: cur.sun, cloud: cur.cloud, linkage: None };

    let edge = if let Some(z) = cur.sun.min() {
        let candidates: Vec<Edge> =
            cur.sun.iter().flat_map(|z| (g.neighbours(z) & merged).iter().map(move |w| edge(z, w))).collect();
        candidates.into_iter().min().ok_or_else(|| Error::Invariant(format!("sun vertex {z} misses the middle bag")))?
    } else {
        if g.min_degree().unwrap_or(0) < 3 {
            return Err(Error::Precondition("minimum degree below 3 and no sun".into()));
        }
        let on_linkage = linkage.edges();
        g.edges_within(merged)
            .into_iter()
            .filter(|e| on_linkage.binary_search(e).is_err())
            .find(|&e| g.delete_edge(e).map(|h| h.is_connected_within(merged)).unwrap_or(false))
            .ok_or_else(|| Error::Invariant("no edge off the linkage keeps the middle part connected".into()))?
    };
    Ok(EdgeChoice { edge, rc: out, original_length: rc.length(), window })
}

/// The orientation of a separation of `g − e` forced by `t`, if any.
pub fn forced_orientation(t: &Tangle, s: &Separation) -> Option<Separation> {
    forced_by(&t.maximal_members(), s)
}

/// Orients `S_k(g − e)`: forced separations as forced, the others toward the
/// side whose component at `e` avoids the cloud. Requires the original
/// length to be at least `18k` and minimum degree 3 unless `relaxed`.
pub fn extend_after_deletion(g: &Graph, t: &Tangle, choice: &EdgeChoice, relaxed: bool) -> Result<Tangle> {
    let k = t.k;
    if !relaxed {
        if choice.original_length < 18 * k {
            return Err(Error::Precondition(format!("length {} is below 18k = {}", choice.original_length, 18 * k)));
        }
        if g.min_degree().unwrap_or(0) < 3 {
            return Err(Error::Precondition("minimum degree below 3".into()));
        }
    }
    let e = choice.edge;
    let g2 = g.delete_edge(e)?;
    let system = enumerate_separations(&g2, k);
    let maximal = t.maximal_members();
    let cloud = choice.rc.cloud;
    let picks: Vec<Result<Separation>> = system
        .members
        .par_iter()
        .map(|s| {
            if let Some(o) = forced_by(&maximal, s) {
                return Ok(o);
            }
            if s.is_separation_of(g) {
                return Err(Error::Invariant(format!("{s} is a separation of G but not forced")));
            }
            let (a_end, b_end) = if s.strict_small().contains(e.0) { (e.0, e.1) } else { (e.1, e.0) };
            let rest = g2.vertices() - s.separator();
            let c_a = g2.component_of(a_end, rest).intersects(cloud);
            let c_b = g2.component_of(b_end, rest).intersects(cloud);
            match (c_a, c_b) {
                (false, true) => Ok(*s),
                (true, false) => Ok(s.inverse()),
                _ => Err(Error::Invariant(format!("both or neither side of {s} at the edge meet the cloud"))),
            }
        })
        .collect();
    let picks: Vec<Separation> = picks.into_iter().collect::<Result<_>>()?;
    let mut it = picks.into_iter();
    let t2 = orient_system(&system, |_| Ok(it.next().unwrap()))?;
    if !extends(t, &t2) {
        return Err(Error::Invariant("extension does not contain the tangle".into()));
    }
    if !is_tangle_of(&g2, &t2)? {
        return Err(Error::Invariant("extension has a forbidden triple".into()));
    }
    Ok(t2)
}

/// Builds an RC-decomposition from a linear decomposition with a
/// foundational linkage satisfying FL1 and FL2: vertices on every adhesion
/// set become the candidate sun, the inner bags shrink to the component
/// holding one class of linked paths, and everything else joins the cloud.
pub fn extract_rc(g: &Graph, d: &LinearDecomposition, linkage: &Linkage) -> Result<RCDecomposition> {
    let report = validate_linear(g, d, Some(linkage));
    if !(report.is_linear() && report.r1 && report.fl1 && report.fl2) {
        return Err(Error::Precondition(format!("decomposition needs L1–L4, R1, FL1, FL2: {report:?}")));
    }
    let m = d.length();
    if m < 2 {
        return Err(Error::Precondition("need length at least 2".into()));
    }
    let z0 = d.adhesion_sets().into_iter().fold(g.vertices(), |acc, u| acc & u);
    let inner: Vec<VertexSet> = d.bags.iter().map(|w| *w - z0).collect();
    let paths: Vec<VertexSet> = linkage.path_sets().into_iter().filter(|p| !p.is_subset(z0)).collect();
    let path_vertices = paths.iter().fold(VertexSet::EMPTY, |acc, p| acc | *p);

    let mut bags = Vec::with_capacity(m - 1);
    let sun = if paths.is_empty() {
        // No linked paths: take, per inner bag, the first component seeing
        // the whole candidate sun.
        for w in &inner[1..m] {
            let comp = g
                .components_within(*w)
                .into_iter()
                .find(|c| z0.iter().all(|z| g.neighbours(z).intersects(*c)))
                .ok_or_else(|| Error::Precondition("no component of a bag sees the whole sun".into()))?;
            bags.push(comp);
        }
        z0
    } else {
        // Component of the first path in the graph of paths joined inside a
        // bag.
        let mut class = vec![0usize];
        let mut q = 0;
        while q < class.len() {
            let p = class[q];
            for o in 0..paths.len() {
                if !class.contains(&o) && joined_in_bag(g, inner[1], path_vertices, paths[p], paths[o]) {
                    class.push(o);
                }
            }
            q += 1;
        }
        let class_vertices = class.iter().fold(VertexSet::EMPTY, |acc, &p| acc | paths[p]);
        for w in &inner[1..m] {
            let hits = class_vertices & *w;
            let start = hits.min().ok_or_else(|| Error::Invariant("linked paths miss an inner bag".into()))?;
            let comp = g.component_of(start, *w);
            if !hits.is_subset(comp) {
                return Err(Error::Invariant("linked paths split across components of a bag".into()));
            }
            bags.push(comp);
        }
        z0.iter().filter(|&z| bags.iter().any(|b| g.neighbours(z).intersects(*b))).collect()
    };
    let mut cloud = z0 | inner[0] | inner[m];
    for (w, b) in inner[1..m].iter().zip(&bags) {
        cloud |= *w - *b;
    }
    let rc = RCDecomposition { bags, sun, cloud, linkage: None };
    let rep = validate_rc(g, &rc);
    if !rep.is_valid() {
        return Err(Error::Invariant(format!("extracted decomposition fails validation: {rep:?}")));
    }
    Ok(rc)
}

/// Parameters of the synthetic RC family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthParams {
    /// Number of strands, the adhesion `ℓ`.
    pub ell: usize,
    /// Size of the sun.
    pub sun: usize,
    /// Length `M`.
    pub length: usize,
    /// Size of the cloud clique.
    pub cloud: usize,
    /// Split the cloud clique into two halves, one at each end of the
    /// rainbow, so that low-order separations can cross the rainbow.
    pub split_cloud: bool,
    /// A clique of the given size inside bag `h`, joined to the whole bag.
    pub bag_clique: Option<(usize, usize)>,
}

impl SynthParams {
    pub fn new(ell: usize, sun: usize, length: usize, cloud: usize) -> Self {
        SynthParams { ell, sun, length, cloud, split_cloud: false, bag_clique: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthRC {
    pub graph: Graph,
    pub rc: RCDecomposition,
    pub cloud_clique: VertexSet,
    pub bag_clique: VertexSet,
}

/// `ℓ` strands `x_{p,0} .. x_{p,M+1}`; bag `W_i` holds `x_{p,i}, x_{p,i+1}`
/// and two spine vertices `y_i, y'_i` adjacent to each other and to the
/// bag's strand vertices. Every sun vertex is adjacent to each `y_i`. The
/// cloud is a clique joined to `U_0 ∪ U_{M+1} ∪ Z`.
pub fn synth_rc(p: &SynthParams) -> Result<SynthRC> {
    let m = p.length;
    let x = |s: usize, i: usize| s * (m + 2) + i;
    let spine = p.ell * (m + 2);
    let y = |i: usize| spine + 2 * i;
    let sun_base = spine + 2 * (m + 1);
    let cloud_base = sun_base + p.sun;
    let clique_base = cloud_base + p.cloud;
    let clique_size = p.bag_clique.map_or(0, |(_, s)| s);
    let n = clique_base + clique_size;
    if n > crate::vset::MAX_VERTICES {
        return Err(Error::Precondition(format!("synthetic instance needs {n} vertices")));
    }
    if let Some((h, _)) = p.bag_clique {
        if h > m {
            return Err(Error::Precondition(format!("bag {h} out of range")));
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut bags = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let mut bag = VertexSet::singleton(y(i)).with(y(i) + 1);
        edges.push((y(i), y(i) + 1));
        for s in 0..p.ell {
            edges.push((x(s, i), x(s, i + 1)));
            for v in [x(s, i), x(s, i + 1)] {
                bag = bag.with(v);
                edges.push((y(i), v));
                edges.push((y(i) + 1, v));
            }
        }
        for z in sun_base..cloud_base {
            edges.push((z, y(i)));
        }
        bags.push(bag);
    }
    let sun: VertexSet = (sun_base..cloud_base).collect();
    let u0: VertexSet = (0..p.ell).map(|s| x(s, 0)).collect();
    let u_end: VertexSet = (0..p.ell).map(|s| x(s, m + 1)).collect();
    let cloud_clique: VertexSet = (cloud_base..clique_base).collect();
    let half = cloud_base + p.cloud / 2;
    for a in cloud_base..clique_base {
        for b in a + 1..clique_base {
            if !p.split_cloud || (a < half) == (b < half) {
                edges.push((a, b));
            }
        }
        let near = if !p.split_cloud {
            u0 | u_end
        } else if a < half {
            u0
        } else {
            u_end
        };
        for v in near | sun {
            edges.push((a, v));
        }
    }
    let mut bag_clique = VertexSet::EMPTY;
    if let Some((h, size)) = p.bag_clique {
        bag_clique = (clique_base..clique_base + size).collect();
        for a in bag_clique {
            for b in bags[h] | bag_clique {
                if a != b {
                    edges.push(edge(a, b));
                }
            }
        }
        bags[h] |= bag_clique;
    }
    let graph = Graph::with_order(n, &edges)?;
    let cloud = cloud_clique | sun | u0 | u_end;
    let linkage = if m >= 1 {
        Some(Linkage { paths: (0..p.ell).map(|s| (1..=m).map(|i| x(s, i)).collect()).collect() })
    } else {
        None
    };
    Ok(SynthRC { graph, rc: RCDecomposition { bags, sun, cloud, linkage }, cloud_clique, bag_clique })
}

/// The `k`-tangle orienting every separation of order `< k` away from a
/// clique. A tangle when the clique has at least `3k − 2` vertices.
pub fn clique_tangle(g: &Graph, k: usize, clique: VertexSet) -> Result<Tangle> {
    orient_by_membership(&enumerate_separations(g, k), |s| clique.is_subset(s.big))
}

/// The synthetic instances used by the checks: `ℓ ∈ {1,2}`, `z ∈ {0,1,2}`,
/// `M ∈ 8..=20`, plus `ℓ = 0` with `z ∈ {0,1,2}` and `M ∈ {8,9}`.
pub fn synth_family(cloud: usize) -> Vec<SynthParams> {
    let mut out = Vec::new();
    for ell in 1..=2 {
        for sun in 0..=2 {
            for length in 8..=20 {
                out.push(SynthParams::new(ell, sun, length, cloud));
            }
        }
    }
    for sun in 0..=2 {
        for length in 8..=9 {
            out.push(SynthParams::new(0, sun, length, cloud));
        }
    }
    out
}
