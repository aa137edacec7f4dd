//! The reduction driver: shrinks a graph one step at a time (edge deletion,
//! vertex suppression, passing to a component) while a tangle survives,
//! records the steps as a replayable trace, and uses traces to transfer
//! inducing weight functions and to extract small witnessing subgraphs.

use crate::error::{parse_err, Error, Result};
use crate::graph::{edge, Edge, Graph};
use crate::inducing::{transfer_by_zero, WeightFunction};
use crate::io::{join_ints, parse_edge_list, parse_ints, write_edge_list};
use crate::provenance::MinorProvenance;
use crate::survival::{
    brute_force_extension, delete_pendant, extend_via_higher_order, induce_component, suppress_deg2,
    survive_delete_k1, survive_delete_k2,
};
use crate::tangles::{extends, is_tangle_of, lift_subgraph, lift_suppression, require_tangle, Tangle};
use crate::vset::VertexSet;
use rayon::prelude::*;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    DeleteEdge(Edge),
    SuppressVertex(usize),
    /// Pass to the component on these vertices.
    TakeComponent(VertexSet),
}

impl StepKind {
    /// The graph this step produces from `g`.
    pub fn apply(&self, g: &Graph) -> Result<Graph> {
        match self {
            StepKind::DeleteEdge(e) => g.delete_edge(*e),
            StepKind::SuppressVertex(v) => g.suppress_vertex(*v),
            &StepKind::TakeComponent(x) => {
                if !x.is_subset(g.vertices()) || g.component_of(x.min().unwrap_or(0), g.vertices()) != x {
                    return Err(Error::Precondition(format!("{x:?} is not a component")));
                }
                Ok(g.induced(x))
            }
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::DeleteEdge((a, b)) => write!(f, "delete-edge {a} {b}"),
            StepKind::SuppressVertex(v) => write!(f, "suppress {v}"),
            StepKind::TakeComponent(x) => write!(f, "component {}", join_ints(x.iter())),
        }
    }
}

impl StepKind {
    fn parse(s: &str, line: usize) -> Result<StepKind> {
        let (head, rest) = s.split_once(' ').unwrap_or((s, ""));
        let nums = parse_ints(rest, line)?;
        match (head, nums.as_slice()) {
            ("delete-edge", [a, b]) => Ok(StepKind::DeleteEdge(edge(*a, *b))),
            ("suppress", [v]) => Ok(StepKind::SuppressVertex(*v)),
            ("component", vs) if !vs.is_empty() => Ok(StepKind::TakeComponent(vs.iter().copied().collect())),
            _ => Err(parse_err(line, format!("bad step {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub kind: StepKind,
    /// Name of the rule that produced the step.
    pub rule: String,
    pub graph: Graph,
    pub tangle: Tangle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub graph: Graph,
    pub tangle: Tangle,
    pub steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn terminal_graph(&self) -> &Graph {
        self.steps.last().map_or(&self.graph, |s| &s.graph)
    }

    pub fn terminal_tangle(&self) -> &Tangle {
        self.steps.last().map_or(&self.tangle, |s| &s.tangle)
    }

    /// Graph and tangle before step `i` (0-based).
    pub fn before(&self, i: usize) -> (&Graph, &Tangle) {
        if i == 0 {
            (&self.graph, &self.tangle)
        } else {
            (&self.steps[i - 1].graph, &self.steps[i - 1].tangle)
        }
    }

    pub fn terminal_connected(&self) -> bool {
        self.terminal_graph().is_connected()
    }

    /// `STEP n`, `RULE <name> <kind>`, `GRAPH` (edge list) and `TANGLE`
    /// (tangle text) blocks; step 0 holds the input with rule `root`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut block = |n: usize, rule: &str, kind: Option<&StepKind>, g: &Graph, t: &Tangle| {
            out.push_str(&format!("STEP {n}\n"));
            match kind {
                Some(k) => out.push_str(&format!("RULE {rule} {k}\n")),
                None => out.push_str(&format!("RULE {rule}\n")),
            }
            out.push_str("GRAPH\n");
            out.push_str(&write_edge_list(g));
            out.push_str("TANGLE\n");
            out.push_str(&t.to_text());
        };
        block(0, "root", None, &self.graph, &self.tangle);
        for (i, s) in self.steps.iter().enumerate() {
            block(i + 1, &s.rule, Some(&s.kind), &s.graph, &s.tangle);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<ReductionTrace> {
        struct Block {
            line: usize,
            rule: Option<(String, Option<StepKind>)>,
            graph: String,
            tangle: String,
            section: u8,
        }
        let mut blocks: Vec<Block> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = i + 1;
            if let Some(n) = line.strip_prefix("STEP ") {
                let n: usize = n.trim().parse().map_err(|_| parse_err(lineno, "bad step number"))?;
                if n != blocks.len() {
                    return Err(parse_err(lineno, format!("expected STEP {}", blocks.len())));
                }
                blocks.push(Block { line: lineno, rule: None, graph: String::new(), tangle: String::new(), section: 0 });
                continue;
            }
            let Some(b) = blocks.last_mut() else {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                return Err(parse_err(lineno, "data before STEP 0"));
            };
            if let Some(rest) = line.strip_prefix("RULE ") {
                let (name, kind) = rest.split_once(' ').map_or((rest, None), |(n, k)| (n, Some(k)));
                let kind = kind.map(|k| StepKind::parse(k, lineno)).transpose()?;
                b.rule = Some((name.to_string(), kind));
            } else if line == "GRAPH" {
                b.section = 1;
            } else if line == "TANGLE" {
                b.section = 2;
            } else {
                let target = match b.section {
                    1 => &mut b.graph,
                    2 => &mut b.tangle,
                    _ if line.is_empty() => continue,
                    _ => return Err(parse_err(lineno, "data outside GRAPH or TANGLE")),
                };
                target.push_str(line);
                target.push('\n');
            }
        }
        let mut it = blocks.into_iter();
        let root = it.next().ok_or_else(|| parse_err(1, "empty trace"))?;
        let graph = parse_edge_list(&root.graph)?;
        let tangle = Tangle::from_text(&root.tangle)?;
        let mut steps = Vec::new();
        for b in it {
            let Some((rule, Some(kind))) = b.rule else {
                return Err(parse_err(b.line, "step without RULE and kind"));
            };
            steps.push(ReductionStep { kind, rule, graph: parse_edge_list(&b.graph)?, tangle: Tangle::from_text(&b.tangle)? });
        }
        Ok(ReductionTrace { graph, tangle, steps })
    }

    /// Re-derives every step from its predecessor with the named rule and
    /// checks that graph and tangle come out identical and survive.
    pub fn replay(&self) -> Result<()> {
        require_tangle(&self.graph, &self.tangle)?;
        for (i, step) in self.steps.iter().enumerate() {
            let (g, t) = self.before(i);
            let r = rule(&step.rule).ok_or_else(|| Error::Mismatch(format!("unknown rule {:?}", step.rule)))?;
            let again = r
                .apply(g, t)?
                .ok_or_else(|| Error::Mismatch(format!("rule {} does not apply at step {}", step.rule, i + 1)))?;
            if again != *step {
                return Err(Error::Mismatch(format!("step {} does not reproduce", i + 1)));
            }
            verify_step(g, t, step)?;
        }
        Ok(())
    }

    /// Verifies every step's survival relation without re-running the rules.
    pub fn verify(&self) -> Result<()> {
        require_tangle(&self.graph, &self.tangle)?;
        for (i, step) in self.steps.iter().enumerate() {
            let (g, t) = self.before(i);
            verify_step(g, t, step)?;
        }
        Ok(())
    }

    /// Provenance of the terminal graph as a topological minor of the root.
    pub fn provenance(&self) -> Result<MinorProvenance> {
        let mut p = MinorProvenance::identity(&self.graph);
        for step in &self.steps {
            p = match &step.kind {
                StepKind::DeleteEdge(e) => p.after_delete_edge(*e)?,
                StepKind::SuppressVertex(v) => p.after_suppress(*v)?,
                StepKind::TakeComponent(x) => p.after_restrict(*x),
            };
        }
        Ok(p)
    }
}

/// Checks that `step` is obtained from `(g, t)` and that `t` survives as
/// the step's tangle: extension for deletions, and for suppressions and
/// components the step's tangle lifts back to `t`.
pub fn verify_step(g: &Graph, t: &Tangle, step: &ReductionStep) -> Result<()> {
    if step.kind.apply(g)? != step.graph {
        return Err(Error::Mismatch(format!("graph after {} differs", step.kind)));
    }
    if step.tangle.k != t.k || !is_tangle_of(&step.graph, &step.tangle)? {
        return Err(Error::Invariant(format!("tangle after {} is not a {}-tangle", step.kind, t.k)));
    }
    let ok = match &step.kind {
        StepKind::DeleteEdge(_) => extends(t, &step.tangle),
        StepKind::SuppressVertex(v) => lift_suppression(&step.tangle, g, *v)? == *t,
        StepKind::TakeComponent(_) => lift_subgraph(&step.tangle, &step.graph, g)? == *t,
    };
    if !ok {
        return Err(Error::Invariant(format!("tangle does not survive {}", step.kind)));
    }
    Ok(())
}

/// One way to shrink the graph while the tangle survives. Returns `None`
/// when the rule does not apply.
pub trait ReductionRule: Send + Sync {
    fn name(&self) -> &'static str;
    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>>;
}

fn step(rule: &dyn ReductionRule, kind: StepKind, graph: Graph, tangle: Tangle) -> Option<ReductionStep> {
    Some(ReductionStep { kind, rule: rule.name().to_string(), graph, tangle })
}

/// A disconnected graph passes to the component the tangle lives in.
pub struct ComponentRule;

impl ReductionRule for ComponentRule {
    fn name(&self) -> &'static str {
        "component"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        if g.is_connected() {
            return Ok(None);
        }
        let c = induce_component(g, t)?;
        Ok(step(self, StepKind::TakeComponent(c.vertices), c.graph, c.tangle))
    }
}

/// Orders 1 and 2: delete the least edge, or for order 2 the least edge off
/// the core block.
pub struct LowOrderRule;

impl ReductionRule for LowOrderRule {
    fn name(&self) -> &'static str {
        "low-order"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        match t.k {
            1 => {
                let Some(&e) = g.edges().first() else { return Ok(None) };
                let t2 = survive_delete_k1(g, t, e)?;
                Ok(step(self, StepKind::DeleteEdge(e), g.delete_edge(e)?, t2))
            }
            2 if g.size() >= 2 => {
                let (e, t2) = survive_delete_k2(g, t)?;
                Ok(step(self, StepKind::DeleteEdge(e), g.delete_edge(e)?, t2))
            }
            _ => Ok(None),
        }
    }
}

/// Order at least 3: delete the edge at the least degree-1 vertex.
pub struct PendantRule;

impl ReductionRule for PendantRule {
    fn name(&self) -> &'static str {
        "pendant"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        if t.k < 3 {
            return Ok(None);
        }
        let Some(v) = g.vertices().iter().find(|&v| g.degree(v) == 1) else { return Ok(None) };
        let u = g.neighbours(v).min().expect("degree 1");
        let t2 = delete_pendant(g, t, v)?;
        let e = edge(u, v);
        Ok(step(self, StepKind::DeleteEdge(e), g.delete_edge(e)?, t2))
    }
}

/// Order at least 3: suppress the least degree-2 vertex.
pub struct SuppressRule;

impl ReductionRule for SuppressRule {
    fn name(&self) -> &'static str {
        "suppress"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        if t.k < 3 {
            return Ok(None);
        }
        let Some(v) = g.vertices().iter().find(|&v| g.degree(v) == 2) else { return Ok(None) };
        let t2 = suppress_deg2(g, t, v)?;
        Ok(step(self, StepKind::SuppressVertex(v), g.suppress_vertex(v)?, t2))
    }
}

/// Delete an edge using a tangle of the next order, if the graph has one.
pub struct HigherOrderRule;

impl ReductionRule for HigherOrderRule {
    fn name(&self) -> &'static str {
        "higher-order"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        if t.k < 2 || g.size() == 0 {
            return Ok(None);
        }
        let Some(route) = extend_via_higher_order(g, t)? else { return Ok(None) };
        let e = route.edge();
        Ok(step(self, StepKind::DeleteEdge(e), g.delete_edge(e)?, route.tangle().clone()))
    }
}

/// Tries every edge in label order and deletes the first whose deletion the
/// tangle survives, found by exhaustive search.
pub struct BruteForceRule;

impl ReductionRule for BruteForceRule {
    fn name(&self) -> &'static str {
        "brute-force"
    }

    fn apply(&self, g: &Graph, t: &Tangle) -> Result<Option<ReductionStep>> {
        let edges = g.edges();
        let found: Vec<Option<Tangle>> =
            edges.par_iter().map(|&e| brute_force_extension(g, t, e)).collect::<Result<_>>()?;
        for (e, t2) in edges.into_iter().zip(found) {
            if let Some(t2) = t2 {
                return Ok(step(self, StepKind::DeleteEdge(e), g.delete_edge(e)?, t2));
            }
        }
        Ok(None)
    }
}

/// Rule names in driver order.
pub const RULES: &[&str] = &["component", "low-order", "pendant", "suppress", "higher-order", "brute-force"];

pub fn rule(name: &str) -> Option<Box<dyn ReductionRule>> {
    Some(match name {
        "component" => Box::new(ComponentRule),
        "low-order" => Box::new(LowOrderRule),
        "pendant" => Box::new(PendantRule),
        "suppress" => Box::new(SuppressRule),
        "higher-order" => Box::new(HigherOrderRule),
        "brute-force" => Box::new(BruteForceRule),
        _ => return None,
    })
}

pub fn rules_by_name(names: &[&str]) -> Result<Vec<Box<dyn ReductionRule>>> {
    names.iter().map(|n| rule(n).ok_or_else(|| Error::Precondition(format!("unknown rule {n:?}")))).collect()
}

pub struct ReduceConfig {
    pub rules: Vec<Box<dyn ReductionRule>>,
    pub max_steps: Option<usize>,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig { rules: rules_by_name(RULES).expect("known rules"), max_steps: None }
    }
}

/// Applies the first applicable rule, in configured order, until none
/// applies. Every step is verified before it is recorded.
pub fn reduce(g: &Graph, t: &Tangle, config: &ReduceConfig) -> Result<ReductionTrace> {
    require_tangle(g, t)?;
    let mut trace = ReductionTrace { graph: g.clone(), tangle: t.clone(), steps: Vec::new() };
    'outer: while config.max_steps.is_none_or(|m| trace.steps.len() < m) {
        let (cg, ct) = (trace.terminal_graph().clone(), trace.terminal_tangle().clone());
        for r in &config.rules {
            if let Some(s) = r.apply(&cg, &ct)? {
                verify_step(&cg, &ct, &s)?;
                trace.steps.push(s);
                continue 'outer;
            }
        }
        break;
    }
    Ok(trace)
}

/// Carries a weight function inducing the terminal tangle back to the root.
pub fn transfer_theorem1(trace: &ReductionTrace, w_terminal: &WeightFunction) -> Result<WeightFunction> {
    let w = transfer_by_zero(trace, w_terminal)?;
    debug_assert!(crate::inducing::induces_weight(&trace.tangle, &w));
    Ok(w)
}

/// Whether no three (not necessarily distinct) members `(A_i, B_i)` of `t`
/// have `h ⊆ G[A_1] ∪ G[A_2] ∪ G[A_3]`. Checking maximal members suffices.
pub fn witnesses(t: &Tangle, h: &Graph) -> bool {
    let max = t.maximal_members();
    let hv = h.vertices();
    let he = h.edges();
    let covered = |parts: [VertexSet; 3]| {
        hv.iter().all(|v| parts.iter().any(|a| a.contains(v)))
            && he.iter().all(|&(a, b)| parts.iter().any(|p| p.contains(a) && p.contains(b)))
    };
    for i in 0..max.len() {
        for j in i..max.len() {
            for l in j..max.len() {
                if covered([max[i].small, max[j].small, max[l].small]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Branch vertices of the terminal graph plus, for each terminal edge, the
/// first edge of the root path it stands for. Verified to witness the root
/// tangle.
pub fn witness_subgraph(trace: &ReductionTrace) -> Result<Graph> {
    if !trace.terminal_connected() {
        return Err(Error::Precondition("terminal graph is disconnected".into()));
    }
    let p = trace.provenance()?;
    let mut h = Graph::from_edges(p.branch_vertices.iter(), &[])?;
    for path in p.edge_paths.values() {
        h.add_edge(path[0], path[1])?;
    }
    if !witnesses(&trace.tangle, &h) {
        return Err(Error::Invariant("subgraph does not witness the root tangle".into()));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::inducing::{find_inducing_weights, induces_weight};
    use crate::tangles::enumerate_tangles;

    fn only_tangle(g: &Graph, k: usize) -> Tangle {
        let mut ts = enumerate_tangles(g, k);
        assert_eq!(ts.len(), 1);
        ts.remove(0)
    }

    #[test]
    fn subdivided_k4_suppresses_to_k4() {
        let g = subdivided_k4(1);
        let t = only_tangle(&g, 3);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        assert!(trace.steps.iter().all(|s| matches!(s.kind, StepKind::SuppressVertex(_))));
        assert_eq!(trace.terminal_graph().size(), 6);
        assert_eq!(trace.terminal_graph().order(), 4);
        trace.replay().unwrap();
        let back = ReductionTrace::from_text(&trace.to_text()).unwrap();
        assert_eq!(back, trace);

        let k4 = trace.terminal_graph().vertices();
        let w = WeightFunction::indicator(k4, k4);
        let lifted = transfer_theorem1(&trace, &w).unwrap();
        assert_eq!(lifted.support(), k4);
        assert_eq!(lifted.weights.len(), g.order());

        let h = witness_subgraph(&trace).unwrap();
        assert_eq!(h.size(), 6);
        assert!(h.order() <= 10);
    }

    #[test]
    fn k4_is_terminal() {
        let g = complete(4);
        let t = only_tangle(&g, 3);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        assert!(trace.steps.is_empty());
        let h = witness_subgraph(&trace).unwrap();
        assert_eq!(h.size(), 6);
        let w = find_inducing_weights(&g, &t, 6).unwrap();
        assert_eq!(transfer_theorem1(&trace, &w).unwrap(), w);
    }

    #[test]
    fn two_triangles_take_a_component() {
        let g = two_triangles();
        for t in enumerate_tangles(&g, 2) {
            let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
            trace.replay().unwrap();
            assert!(trace.terminal_connected());
            assert_eq!(trace.terminal_graph().size(), 1);
        }
        let mut g = complete(3);
        for (a, b) in [(3, 4), (4, 5), (3, 5)] {
            g.add_edge(a, b).unwrap();
        }
        let t = enumerate_tangles(&g, 2).remove(0);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        assert!(matches!(trace.steps[0].kind, StepKind::TakeComponent(_)));
    }

    #[test]
    fn one_tangles_end_at_a_vertex() {
        let g = cycle(5);
        let t = only_tangle(&g, 1);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        assert_eq!(trace.terminal_graph().order(), 1);
        trace.replay().unwrap();
        let v = trace.terminal_graph().vertices();
        let w = transfer_theorem1(&trace, &WeightFunction::indicator(v, v)).unwrap();
        assert!(induces_weight(&t, &w));
    }

    #[test]
    fn pendant_and_rule_selection() {
        let mut g = complete(4);
        g.add_edge(3, 4).unwrap();
        let t = only_tangle(&g, 3);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        assert_eq!(trace.steps[0].rule, "pendant");
        assert_eq!(trace.steps[1].rule, "component");
        assert_eq!(trace.terminal_graph(), &complete(4));
        let only_component = ReduceConfig { rules: rules_by_name(&["component"]).unwrap(), max_steps: None };
        assert!(reduce(&g, &t, &only_component).unwrap().steps.is_empty());
        assert!(rules_by_name(&["nope"]).is_err());
    }

    #[test]
    fn tampered_traces_fail_replay() {
        let g = subdivided_k4(2);
        let t = only_tangle(&g, 3);
        let trace = reduce(&g, &t, &ReduceConfig::default()).unwrap();
        let mut bad = trace.clone();
        bad.steps[0].rule = "pendant".into();
        assert!(bad.replay().is_err());
        let mut bad = trace.clone();
        bad.steps.swap(0, 1);
        assert!(bad.verify().is_err());
        assert!(ReductionTrace::from_text("STEP 1\n").is_err());
        let w = WeightFunction::zero_on(trace.terminal_graph().vertices());
        assert!(transfer_theorem1(&trace, &w).is_err());
    }
}
