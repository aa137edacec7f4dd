mod common;

use proptest::prelude::*;
use std::collections::BTreeSet;
use tanglekit::decomposition::monotone_window_subsequence;
use tanglekit::inducing::{find_inducing_weights, induces_set, induces_weight, WeightFunction};
use tanglekit::pipeline::{reduce, transfer_theorem1, ReduceConfig, ReductionTrace};
use tanglekit::separations::enumerate_separations;
use tanglekit::tangles::{as_orientation, enumerate_tangles, MaximalChecker, NaiveChecker, TangleChecker};
use tanglekit::{Graph, Separation, Tangle, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u32>()).prop_map(|(n, bits)| {
        let mut edges = Vec::new();
        let mut i = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits >> i & 1 == 1 {
                    edges.push((a, b));
                }
                i += 1;
            }
        }
        Graph::with_order(n, &edges).unwrap()
    })
}

fn connected(max_n: usize) -> impl Strategy<Value = Graph> {
    graph(max_n).prop_filter("connected", |g| g.is_connected())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn separations_match_brute_force(g in graph(6), k in 1usize..4) {
        let lib: BTreeSet<_> = enumerate_separations(&g, k).members.iter().map(common::as_unordered).collect();
        prop_assert_eq!(lib, common::unordered_separations(&g, k));
    }

    #[test]
    fn checkers_agree_on_perturbed_orientations(g in graph(6), k in 1usize..4, flips in prop::collection::vec(any::<prop::sample::Index>(), 0..4), v in any::<prop::sample::Index>()) {
        let system = enumerate_separations(&g, k);
        let base: Vec<Separation> = match enumerate_tangles(&g, k).first() {
            Some(t) => system.members.iter().map(|s| t.orientation_of(s).unwrap()).collect(),
            None => {
                let v = v.index(g.order());
                system.members.iter().map(|s| if s.strict_small().contains(v) { s.inverse() } else { *s }).collect()
            }
        };
        let mut o = base;
        if !o.is_empty() {
            for f in flips {
                let i = f.index(o.len());
                o[i] = o[i].inverse();
            }
        }
        let t = as_orientation(&g, k, &o).unwrap();
        let maximal = MaximalChecker.has_no_forbidden_triple(&g, &t);
        prop_assert_eq!(maximal, NaiveChecker.has_no_forbidden_triple(&g, &t));
        if g.order() <= 4 {
            prop_assert_eq!(maximal, common::is_tangle(&g, k, &o));
        }
    }

    #[test]
    fn corners_are_separations_with_submodular_orders(g in graph(6), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let seps = common::oriented_separations(&g, usize::MAX);
        let (s, t) = (seps[i.index(seps.len())], seps[j.index(seps.len())]);
        let (inf, sup) = (s.infimum(&t), s.supremum(&t));
        prop_assert!(inf.is_separation_of(&g) && sup.is_separation_of(&g));
        prop_assert_eq!(inf.order() + sup.order(), s.order() + t.order());
        prop_assert_eq!(inf, common::infimum(&s, &t));
        prop_assert_eq!(sup, common::supremum(&s, &t));
    }

    #[test]
    fn set_induction_is_indicator_induction(g in connected(6), k in 1usize..4, bits in any::<u8>(), pick in any::<prop::sample::Index>()) {
        let ts = enumerate_tangles(&g, k);
        prop_assume!(!ts.is_empty());
        let t = &ts[pick.index(ts.len())];
        let x = VertexSet(bits as u128) & g.vertices();
        let by_set = induces_set(t, x);
        prop_assert_eq!(by_set, induces_weight(t, &WeightFunction::indicator(g.vertices(), x)));
        prop_assert_eq!(by_set, t.members().iter().all(|s| (x & s.small).len() < (x & s.big).len()));
    }

    #[test]
    fn window_found_whenever_one_exists(n in 1usize..5, m in 1usize..4, extra in 0usize..4, seed in prop::collection::vec(0usize..3, 70)) {
        let len = n.pow(m as u32) + extra;
        let a: Vec<usize> = seed.iter().cycle().take(len).map(|x| x % m).collect();
        let got = monotone_window_subsequence(&a, n, m);
        prop_assert!(got.is_some());
        let (idx, level) = got.unwrap();
        prop_assert!(common::is_window(&a, n, &idx, level));
        let short = &a[..len / 2];
        prop_assert_eq!(monotone_window_subsequence(short, n, m).is_some(), common::window_exists(short, n));
    }

    #[test]
    fn tangle_text_and_json_round_trip(g in connected(6), k in 1usize..4) {
        for t in enumerate_tangles(&g, k) {
            prop_assert_eq!(Tangle::from_text(&t.to_text()).unwrap(), t.clone());
            prop_assert_eq!(Tangle::parse_any(&serde_json::to_string(&t.to_json()).unwrap()).unwrap(), t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_replay_and_round_trip(g in connected(7), pick in any::<prop::sample::Index>()) {
        let ts = enumerate_tangles(&g, 3);
        prop_assume!(!ts.is_empty());
        let t = &ts[pick.index(ts.len())];
        let trace = reduce(&g, t, &ReduceConfig::default()).unwrap();
        trace.replay().unwrap();
        let back = ReductionTrace::from_text(&trace.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), trace.to_text());
        back.verify().unwrap();
    }

    #[test]
    fn transfer_is_sound(g in connected(7), pick in any::<prop::sample::Index>(), bump in 0u64..3) {
        let ts = enumerate_tangles(&g, 3);
        prop_assume!(!ts.is_empty());
        let t = &ts[pick.index(ts.len())];
        let trace = reduce(&g, t, &ReduceConfig::default()).unwrap();
        let h = trace.terminal_graph();
        let mut w = find_inducing_weights(h, trace.terminal_tangle(), 12).unwrap();
        // Scaling keeps induction; any inducing function must transfer.
        for x in w.weights.values_mut() {
            *x *= bump + 1;
        }
        let root = transfer_theorem1(&trace, &w).unwrap();
        let weight = |s: VertexSet| s.iter().map(|v| root.get(v)).sum::<u64>();
        prop_assert!(t.members().iter().all(|s| weight(s.small) < weight(s.big)));
        prop_assert!(root.support().is_subset(h.vertices()));
    }
}
