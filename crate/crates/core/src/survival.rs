//! Making a tangle survive in a smaller graph: edge deletion, restriction to
//! a component, removal of pendant edges and suppression of degree-2
//! vertices, with and without a tangle of higher order to lean on.

use crate::error::{Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::separations::{enumerate_separations, Separation};
use crate::tangles::{
    complete_orientation, enumerate_tangles, extends, is_tangle_of, lift_subgraph, maximal_elements,
    orient_by_membership, orient_system, tangle_core, Tangle,
};
use crate::vset::VertexSet;

/// Both endpoints of `e` added to `a`.
fn with_edge(a: VertexSet, e: Edge) -> VertexSet {
    a.with(e.0).with(e.1)
}

fn require_order(t: &Tangle, min: usize, what: &str) -> Result<()> {
    if t.k < min {
        return Err(Error::Precondition(format!("{what} needs order at least {min}, got {}", t.k)));
    }
    Ok(())
}

fn require_edge(g: &Graph, e: Edge) -> Result<()> {
    if g.has_edge(e.0, e.1) {
        Ok(())
    } else {
        Err(Error::NoSuchEdge(e.0, e.1))
    }
}

/// Checks that `t2` is a tangle of `g2` containing `t`. Runs only with debug
/// assertions; release builds trust the constructions.
fn post_verify(g2: &Graph, t: &Tangle, t2: &Tangle) -> Result<()> {
    if cfg!(debug_assertions) {
        if !is_tangle_of(g2, t2)? {
            return Err(Error::Invariant("constructed orientation has a forbidden triple".into()));
        }
        if !extends(t, t2) {
            return Err(Error::Invariant("constructed tangle does not extend the input".into()));
        }
    }
    Ok(())
}

/// The 1-tangle of `g` whose core is the component `x`.
pub fn tangle_at_component(g: &Graph, x: VertexSet) -> Result<Tangle> {
    let system = enumerate_separations(g, 1);
    orient_system(&system, |s| Ok(if x.is_subset(s.big) { *s } else { s.inverse() }))
}

/// The 2-tangle of `g` at the block containing the edge `f`.
pub fn tangle_at_edge(g: &Graph, f: Edge) -> Result<Tangle> {
    let system = enumerate_separations(g, 2);
    orient_system(&system, |s| Ok(if s.big.contains(f.0) && s.big.contains(f.1) { *s } else { s.inverse() }))
}

/// Extends a 1-tangle to `g - e`. When the deletion splits the core, the
/// part containing the smallest label is kept.
pub fn survive_delete_k1(g: &Graph, t: &Tangle, e: Edge) -> Result<Tangle> {
    if t.k != 1 {
        return Err(Error::Precondition(format!("expected a 1-tangle, got order {}", t.k)));
    }
    require_edge(g, e)?;
    let core = tangle_core(t, g);
    let g2 = g.delete_edge(e)?;
    let start = core.min().ok_or_else(|| Error::Invariant("empty core".into()))?;
    let x = g2.component_of(start, g2.vertices());
    let t2 = tangle_at_component(&g2, x)?;
    post_verify(&g2, t, &t2)?;
    Ok(t2)
}

/// Extends a 2-tangle to `g - e` for a chosen edge `e`: `f` is the least edge
/// of the core block, `e` the least other edge of `g`.
pub fn survive_delete_k2(g: &Graph, t: &Tangle) -> Result<(Edge, Tangle)> {
    if t.k != 2 {
        return Err(Error::Precondition(format!("expected a 2-tangle, got order {}", t.k)));
    }
    let edges = g.edges();
    if edges.len() < 2 {
        return Err(Error::Precondition("need at least 2 edges".into()));
    }
    let core = tangle_core(t, g);
    let f = *g
        .edges_within(core)
        .first()
        .ok_or_else(|| Error::Invariant("core block has no edge".into()))?;
    let e = *edges.iter().find(|&&x| x != f).expect("two edges");
    let g2 = g.delete_edge(e)?;
    let t2 = tangle_at_edge(&g2, f)?;
    post_verify(&g2, t, &t2)?;
    Ok((e, t2))
}

/// The component a tangle lives in, with the tangle it induces there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTangle {
    pub vertices: VertexSet,
    pub graph: Graph,
    pub tangle: Tangle,
}

/// Restricts `t` to the component `G[X]` where `X` is the core of its
/// 1-tangle: `{A', B'}` is oriented like `{A' ∪ (V \ X), B'}`.
pub fn induce_component(g: &Graph, t: &Tangle) -> Result<ComponentTangle> {
    let x = tangle_core(&t.truncate(1), g);
    if !g.is_connected_within(x) {
        return Err(Error::Invariant("order-1 core is not a component".into()));
    }
    let sub = g.induced(x);
    let outside = g.vertices() - x;
    let system = enumerate_separations(&sub, t.k);
    let t2 = orient_system(&system, |s| {
        let lifted = Separation::new(s.small | outside, s.big);
        match t.orientation_of(&lifted) {
            Some(o) if o == lifted => Ok(*s),
            Some(_) => Ok(s.inverse()),
            None => Err(Error::Invariant(format!("{lifted} is not oriented by the input"))),
        }
    })?;
    if cfg!(debug_assertions) {
        if !is_tangle_of(&sub, &t2)? {
            return Err(Error::Invariant("induced orientation is not a tangle".into()));
        }
        if lift_subgraph(&t2, &sub, g)? != *t {
            return Err(Error::Invariant("input is not the lift of the induced tangle".into()));
        }
    }
    Ok(ComponentTangle { vertices: x, graph: sub, tangle: t2 })
}

/// Deletes the edge at a degree-1 vertex `v` and returns the tangle `t`
/// induces in `g - e`.
pub fn delete_pendant(g: &Graph, t: &Tangle, v: usize) -> Result<Tangle> {
    require_order(t, 3, "deleting a pendant edge")?;
    if g.degree(v) != 1 {
        return Err(Error::Precondition(format!("vertex {v} has degree {}, expected 1", g.degree(v))));
    }
    let u = g.neighbours(v).min().expect("degree 1");
    let g2 = g.delete_edge(edge(u, v))?;
    let system = enumerate_separations(&g2, t.k);
    let t2 = orient_by_membership(&system, |s| {
        t.contains(s)
            || t.contains(&Separation::new(s.small.without(v), s.big.with(v)))
            || t.contains(&Separation::new(s.small.with(v), s.big.without(v)))
    })?;
    post_verify(&g2, t, &t2)?;
    Ok(t2)
}

/// Suppresses the degree-2 vertex `v` and returns the tangle `t` induces:
/// `(A, B)` is kept iff `(A ∪ {v}, B)` or `(A, B ∪ {v})` lies in `t`.
pub fn suppress_deg2(g: &Graph, t: &Tangle, v: usize) -> Result<Tangle> {
    require_order(t, 3, "suppression")?;
    let g2 = g.suppress_vertex(v)?;
    let system = enumerate_separations(&g2, t.k);
    let t2 = orient_by_membership(&system, |s| {
        t.contains(&Separation::new(s.small.with(v), s.big)) || t.contains(&Separation::new(s.small, s.big.with(v)))
    })?;
    if cfg!(debug_assertions) && !is_tangle_of(&g2, &t2)? {
        return Err(Error::Invariant("suppressed orientation is not a tangle".into()));
    }
    Ok(t2)
}

/// For a separation `{A, B}` of `g - e` with `e` between its strict sides
/// and order below `k - 1`: whether `(A ∪ e, B) ∈ t ⇔ (A, B ∪ e) ∈ t`.
pub fn edge_side_equivalence(g: &Graph, t: &Tangle, e: Edge, s: &Separation) -> Result<bool> {
    require_order(t, 3, "the edge-side equivalence")?;
    require_edge(g, e)?;
    let g2 = g.delete_edge(e)?;
    if !s.is_separation_of(&g2) {
        return Err(Error::Precondition(format!("{s} is not a separation of g - e")));
    }
    let (a, b) = (s.strict_small(), s.strict_big());
    if !((a.contains(e.0) && b.contains(e.1)) || (a.contains(e.1) && b.contains(e.0))) {
        return Err(Error::Precondition("e does not join the strict sides".into()));
    }
    if s.order() + 1 >= t.k {
        return Err(Error::Precondition(format!("order {} is not below k - 1", s.order())));
    }
    let left = t.contains(&Separation::new(with_edge(s.small, e), s.big));
    let right = t.contains(&Separation::new(s.small, with_edge(s.big, e)));
    Ok(left == right)
}

/// Orients a separation of `g - e` that is not a separation of `g` the way
/// `hi` orients it with `e` added to a side.
fn orient_by_higher(hi: &Tangle, s: &Separation, e: Edge) -> Result<Separation> {
    let up = Separation::new(with_edge(s.small, e), s.big);
    match hi.orientation_of(&up) {
        Some(o) if o == up => Ok(*s),
        Some(_) => Ok(s.inverse()),
        None => Err(Error::Invariant(format!("{up} is not oriented by the higher tangle"))),
    }
}

/// Extends `t` to `g - e` using a tangle `t_sup` of higher order that
/// contains `t`. Works for every edge.
pub fn extend_with_supertangle(g: &Graph, t: &Tangle, t_sup: &Tangle, e: Edge) -> Result<Tangle> {
    if t_sup.k <= t.k || t.k < 2 {
        return Err(Error::Precondition("need 2 ≤ k < order of the supertangle".into()));
    }
    if !extends(t, t_sup) {
        return Err(Error::Precondition("the supertangle does not contain t".into()));
    }
    require_edge(g, e)?;
    let g2 = g.delete_edge(e)?;
    let system = enumerate_separations(&g2, t.k);
    let t2 = orient_system(&system, |s| match t.orientation_of(s) {
        Some(o) => Ok(o),
        None => orient_by_higher(t_sup, s, e),
    })?;
    post_verify(&g2, t, &t2)?;
    Ok(t2)
}

/// The orientation of `s` forced by a tangle whose ≤-maximal members are
/// `maximal`: the orientation lying below one of them, if any.
pub fn forced_by(maximal: &[Separation], s: &Separation) -> Option<Separation> {
    let inv = s.inverse();
    if maximal.iter().any(|m| s.leq(m)) {
        Some(*s)
    } else if maximal.iter().any(|m| inv.leq(m)) {
        Some(inv)
    } else {
        None
    }
}

/// Result of extending a tangle with help from a higher-order tangle that
/// disagrees with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergentExtension {
    pub edge: Edge,
    /// `(B, A)` in the higher tangle, ≤-maximal among the separations on
    /// which the two tangles disagree.
    pub pivot: Separation,
    pub tangle: Tangle,
}

/// The ≤-maximal separations of `t_div` of order below `k` whose inverse
/// lies in `t`, sorted by order and canonical form.
pub fn distinguishing_maximal(t: &Tangle, t_div: &Tangle) -> Vec<Separation> {
    let dist: Vec<Separation> = t_div
        .members()
        .into_iter()
        .filter(|s| s.order() < t.k && t.contains(&s.inverse()))
        .collect();
    maximal_elements(&dist)
}

/// Extends `t` to `g - e` for an edge `e` chosen on the `t`-small side of
/// a separation where `t` and the higher-order `t_div` disagree.
pub fn extend_with_divergent_supertangle(g: &Graph, t: &Tangle, t_div: &Tangle) -> Result<DivergentExtension> {
    if t_div.k <= t.k || t.k < 2 {
        return Err(Error::Precondition("need 2 ≤ k < order of the higher tangle".into()));
    }
    let pivot = *distinguishing_maximal(t, t_div)
        .first()
        .ok_or_else(|| Error::Precondition("the tangles do not disagree".into()))?;
    // pivot = (B, A); the edge goes into G[A \ B].
    let a_only = pivot.strict_big();
    let e = *g
        .edges_within(a_only)
        .first()
        .ok_or_else(|| Error::Invariant(format!("no edge on the small side of {pivot}")))?;
    let g2 = g.delete_edge(e)?;
    let maximal = t.maximal_members();
    let system = enumerate_separations(&g2, t.k);
    let t2 = orient_system(&system, |s| match forced_by(&maximal, s) {
        Some(o) => Ok(o),
        None => orient_by_higher(t_div, s, e),
    })?;
    post_verify(&g2, t, &t2)?;
    Ok(DivergentExtension { edge: e, pivot, tangle: t2 })
}

/// Checks the two crossing properties of a divergent extension on the
/// ≤-maximal members of the output that cross the pivot: old separations
/// lie in `t_div`, and for new ones `(B ∩ C, A ∪ D)` lies in `t`.
pub fn check_divergent_crossings(g: &Graph, t: &Tangle, t_div: &Tangle, ext: &DivergentExtension) -> Result<()> {
    let (b, a) = (ext.pivot.small, ext.pivot.big);
    let ab = Separation::new(a, b);
    for m in ext.tangle.maximal_members() {
        if crate::separations::is_nested(&m, &ab) {
            continue;
        }
        if m.is_separation_of(g) {
            if !t_div.contains(&m) {
                return Err(Error::Invariant(format!("maximal old crossing {m} not in the higher tangle")));
            }
        } else {
            let corner = Separation::new(b & m.small, a | m.big);
            if !t.contains(&corner) {
                return Err(Error::Invariant(format!("corner {corner} of new crossing {m} not in t")));
            }
        }
    }
    Ok(())
}

/// Some tangle of `g - e` of the same order containing `t`, found by search.
pub fn brute_force_extension(g: &Graph, t: &Tangle, e: Edge) -> Result<Option<Tangle>> {
    require_edge(g, e)?;
    let g2 = g.delete_edge(e)?;
    Ok(complete_orientation(&g2, t.k, &t.members()))
}

/// How a higher-order tangle made `t` survive an edge deletion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HigherOrderRoute {
    /// A `(k+1)`-tangle contains `t`; every edge works and the least is used.
    Contained { edge: Edge, tangle: Tangle },
    Divergent(DivergentExtension),
}

impl HigherOrderRoute {
    pub fn edge(&self) -> Edge {
        match self {
            HigherOrderRoute::Contained { edge, .. } => *edge,
            HigherOrderRoute::Divergent(d) => d.edge,
        }
    }

    pub fn tangle(&self) -> &Tangle {
        match self {
            HigherOrderRoute::Contained { tangle, .. } => tangle,
            HigherOrderRoute::Divergent(d) => &d.tangle,
        }
    }
}

/// If `g` has a `(k+1)`-tangle, an edge whose deletion `t` survives.
/// Prefers a `(k+1)`-tangle containing `t`; otherwise uses the first one.
pub fn extend_via_higher_order(g: &Graph, t: &Tangle) -> Result<Option<HigherOrderRoute>> {
    require_order(t, 2, "extension via a higher-order tangle")?;
    let higher = enumerate_tangles(g, t.k + 1);
    if let Some(sup) = higher.iter().find(|h| extends(t, h)) {
        let e = *g.edges().first().ok_or_else(|| Error::Invariant("tangle in an edgeless graph".into()))?;
        let tangle = extend_with_supertangle(g, t, sup, e)?;
        return Ok(Some(HigherOrderRoute::Contained { edge: e, tangle }));
    }
    match higher.first() {
        Some(div) => Ok(Some(HigherOrderRoute::Divergent(extend_with_divergent_supertangle(g, t, div)?))),
        None => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_iter(v.iter().copied())
    }

    fn k4_plus_pendant() -> Graph {
        let mut g = complete(4);
        g.add_edge(3, 4).unwrap();
        g
    }

    #[test]
    fn k1_deletions() {
        let tt = two_triangles();
        let ts = enumerate_tangles(&tt, 1);
        let at_012 = ts.iter().find(|t| tangle_core(t, &tt) == vs(&[0, 1, 2])).unwrap();
        let t2 = survive_delete_k1(&tt, at_012, (3, 4)).unwrap();
        assert_eq!(tangle_core(&t2, &tt.delete_edge((3, 4)).unwrap()), vs(&[0, 1, 2]));

        let p3 = path(3);
        let t = enumerate_tangles(&p3, 1).remove(0);
        let t2 = survive_delete_k1(&p3, &t, (0, 1)).unwrap();
        assert_eq!(tangle_core(&t2, &p3.delete_edge((0, 1)).unwrap()), vs(&[0]));

        let k2 = complete(2);
        let t = enumerate_tangles(&k2, 1).remove(0);
        let t2 = survive_delete_k1(&k2, &t, (0, 1)).unwrap();
        assert_eq!(tangle_core(&t2, &Graph::with_order(2, &[]).unwrap()), vs(&[0]));
    }

    #[test]
    fn k2_deletions() {
        let c4 = cycle(4);
        let t = enumerate_tangles(&c4, 2).remove(0);
        let (e, t2) = survive_delete_k2(&c4, &t).unwrap();
        assert_eq!(e, (0, 3));
        let g2 = c4.delete_edge(e).unwrap();
        assert_eq!(tangle_core(&t2, &g2), vs(&[0, 1]));

        let p3 = path(3);
        let at_01 = enumerate_tangles(&p3, 2).into_iter().find(|t| tangle_core(t, &p3) == vs(&[0, 1])).unwrap();
        let (e, t2) = survive_delete_k2(&p3, &at_01).unwrap();
        assert_eq!(e, (1, 2));
        assert_eq!(tangle_core(&t2, &p3.delete_edge(e).unwrap()), vs(&[0, 1]));
        assert!(survive_delete_k2(&complete(2), &enumerate_tangles(&complete(2), 2)[0]).is_err());
    }

    #[test]
    fn component_restriction() {
        let k4 = complete(4);
        let t = enumerate_tangles(&k4, 3).remove(0);
        let c = induce_component(&k4, &t).unwrap();
        assert_eq!(c.tangle, t);

        let tt = two_triangles();
        for t in enumerate_tangles(&tt, 2) {
            let c = induce_component(&tt, &t).unwrap();
            assert_eq!(c.vertices, tangle_core(&t, &tt));
            assert_eq!(c.graph.order(), 3);
        }
        let mut tri = complete(3);
        tri.add_vertex(3).unwrap();
        let t = enumerate_tangles(&tri, 2).remove(0);
        assert_eq!(induce_component(&tri, &t).unwrap().vertices, vs(&[0, 1, 2]));
    }

    #[test]
    fn pendant_deletion() {
        let g = k4_plus_pendant();
        let t = enumerate_tangles(&g, 3).remove(0);
        let t2 = delete_pendant(&g, &t, 4).unwrap();
        assert!(extends(&t, &t2));
        assert!(delete_pendant(&g, &t.truncate(2), 4).is_err());
        assert!(delete_pendant(&g, &t, 0).is_err());

        let mut two = k4_plus_pendant();
        two.add_edge(2, 5).unwrap();
        let t = enumerate_tangles(&two, 3).remove(0);
        let a = delete_pendant(&two, &t, 4).unwrap();
        let a = delete_pendant(&two.delete_edge((3, 4)).unwrap(), &a, 5).unwrap();
        let b = delete_pendant(&two, &t, 5).unwrap();
        let b = delete_pendant(&two.delete_edge((2, 5)).unwrap(), &b, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn suppression_round_trip() {
        let sub = subdivided_k4(1);
        let t = enumerate_tangles(&sub, 3).remove(0);
        let down = suppress_deg2(&sub, &t, 4).unwrap();
        assert_eq!(down, enumerate_tangles(&complete(4), 3).remove(0));
        assert_eq!(crate::tangles::lift_suppression(&down, &sub, 4).unwrap(), t);

        let long = subdivided_k4(4);
        let mut g = long.clone();
        let mut t = enumerate_tangles(&g, 3).remove(0);
        for v in 4..8 {
            t = suppress_deg2(&g, &t, v).unwrap();
            g = g.suppress_vertex(v).unwrap();
        }
        assert_eq!(g, complete(4));
        assert_eq!(t, enumerate_tangles(&g, 3).remove(0));
        assert!(suppress_deg2(&sub, &t.truncate(2), 4).is_err());
    }

    #[test]
    fn edge_side_equivalence_examples() {
        let mut g = k4_plus_pendant();
        g.add_edge(4, 5).unwrap();
        let t = enumerate_tangles(&g, 3).remove(0);
        let e = (3, 4);
        let g2 = g.delete_edge(e).unwrap();
        let mut checked = 0;
        for s in enumerate_separations(&g2, 2).oriented() {
            let a = s.strict_small();
            let b = s.strict_big();
            if (a.contains(3) && b.contains(4)) || (a.contains(4) && b.contains(3)) {
                assert!(edge_side_equivalence(&g, &t, e, &s).unwrap());
                checked += 1;
            }
        }
        assert!(checked > 0);
        let order2 = enumerate_separations(&g2, 3)
            .oriented()
            .into_iter()
            .find(|s| s.order() == 2 && s.strict_small().contains(3) && s.strict_big().contains(4))
            .unwrap();
        assert!(edge_side_equivalence(&g, &t, e, &order2).is_err());
    }

    #[test]
    fn supertangle_extension_on_k5() {
        let k5 = complete(5);
        let t3 = enumerate_tangles(&k5, 3).remove(0);
        let t4 = enumerate_tangles(&k5, 4).remove(0);
        for e in k5.edges() {
            let t2 = extend_with_supertangle(&k5, &t3, &t4, e).unwrap();
            assert!(brute_force_extension(&k5, &t3, e).unwrap().is_some());
            assert!(extends(&t3, &t2));
        }
    }

    #[test]
    fn divergent_extension_on_two_k5s() {
        // Two K5 blocks sharing vertex 4.
        let mut g = complete(5);
        for a in 4..9 {
            for b in a + 1..9 {
                g.add_edge(a, b).unwrap();
            }
        }
        let t3s = enumerate_tangles(&g, 3);
        let t4s = enumerate_tangles(&g, 4);
        assert_eq!((t3s.len(), t4s.len()), (2, 2));
        let t = t3s.iter().find(|t| !extends(t, &t4s[1])).unwrap();
        let div = &t4s[1];
        let ext = extend_with_divergent_supertangle(&g, t, div).unwrap();
        assert!(extends(t, &ext.tangle));
        check_divergent_crossings(&g, t, div, &ext).unwrap();
        assert!(brute_force_extension(&g, t, ext.edge).unwrap().is_some());
        assert!(extend_with_divergent_supertangle(&g, &t4s[1].truncate(3), div).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let k4 = complete(4);
        let t = enumerate_tangles(&k4, 3).remove(0);
        for e in k4.edges() {
            assert_eq!(brute_force_extension(&k4, &t, e).unwrap(), None);
        }
        let c4 = cycle(4);
        let t = enumerate_tangles(&c4, 2).remove(0);
        for e in c4.edges() {
            assert!(brute_force_extension(&c4, &t, e).unwrap().is_some());
        }
    }
}
