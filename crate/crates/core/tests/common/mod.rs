//! Reference implementations for the integration tests. They are written
//! from the definitions and share no code with the library beyond the
//! graph and separation types.
#![allow(dead_code)]

use num_bigint::BigUint;
use std::collections::BTreeSet;
use tanglekit::{Graph, Separation, VertexSet};

/// Unordered separation `{A, B}` as an ordered pair of sides.
pub type Unordered = (VertexSet, VertexSet);

fn unordered(a: VertexSet, b: VertexSet) -> Unordered {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Every oriented separation of `g` of order `< k`, by running through all
/// `3^n` ways to put each vertex in `A \ B`, `B \ A` or `A ∩ B`.
pub fn oriented_separations(g: &Graph, k: usize) -> Vec<Separation> {
    let vs: Vec<usize> = g.vertices().iter().collect();
    let n = vs.len();
    let edges = g.edges();
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let (mut a_only, mut b_only, mut both) = (VertexSet::EMPTY, VertexSet::EMPTY, VertexSet::EMPTY);
        let mut c = code;
        for &v in &vs {
            match c % 3 {
                0 => a_only = a_only.with(v),
                1 => b_only = b_only.with(v),
                _ => both = both.with(v),
            }
            c /= 3;
        }
        if both.len() >= k {
            continue;
        }
        let crossing = edges
            .iter()
            .any(|&(x, y)| (a_only.contains(x) && b_only.contains(y)) || (a_only.contains(y) && b_only.contains(x)));
        if !crossing {
            out.push(Separation::new(a_only | both, b_only | both));
        }
    }
    out
}

pub fn unordered_separations(g: &Graph, k: usize) -> BTreeSet<Unordered> {
    oriented_separations(g, k).into_iter().map(|s| unordered(s.small, s.big)).collect()
}

pub fn as_unordered(s: &Separation) -> Unordered {
    unordered(s.small, s.big)
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Connected components counted with union-find.
pub fn component_count(g: &Graph) -> usize {
    let n = g.vertices().max().map_or(0, |m| m + 1);
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in g.edges() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    g.vertices().iter().filter(|&v| find(&mut parent, v) == v).count()
}

fn connected_in(g: &Graph, allowed: VertexSet, from: usize, to: usize) -> bool {
    let mut seen = VertexSet::singleton(from);
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        if v == to {
            return true;
        }
        for w in g.neighbours(v).iter() {
            if allowed.contains(w) && !seen.contains(w) {
                seen = seen.with(w);
                stack.push(w);
            }
        }
    }
    false
}

/// Two edges lie in a common block iff no single vertex separates them:
/// for every `v`, the endpoints other than `v` stay connected in `G − v`.
pub fn block_count(g: &Graph) -> usize {
    let edges = g.edges();
    let m = edges.len();
    let mut parent: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in i + 1..m {
            let together = g.vertices().iter().all(|v| {
                let allowed = g.vertices().without(v);
                let ends: Vec<usize> =
                    [edges[i].0, edges[i].1, edges[j].0, edges[j].1].into_iter().filter(|&x| x != v).collect();
                ends.iter().all(|&x| connected_in(g, allowed, ends[0], x))
            });
            if together {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..m).filter(|&i| find(&mut parent, i) == i).count()
}

/// Whether `G[A_1] ∪ G[A_2] ∪ G[A_3] = G`.
pub fn small_sides_cover(g: &Graph, a: [VertexSet; 3]) -> bool {
    g.vertices().iter().all(|v| a.iter().any(|s| s.contains(v)))
        && g.edges().iter().all(|&(x, y)| a.iter().any(|s| s.contains(x) && s.contains(y)))
}

/// Whether `orientation` picks exactly one side of every separation of
/// order `< k` and no three picks have small sides covering `g`.
pub fn is_tangle(g: &Graph, k: usize, orientation: &[Separation]) -> bool {
    let all = unordered_separations(g, k);
    let picked: BTreeSet<Unordered> = orientation.iter().map(as_unordered).collect();
    if picked != all || orientation.len() != all.len() {
        return false;
    }
    for x in orientation {
        for y in orientation {
            for z in orientation {
                if small_sides_cover(g, [x.small, y.small, z.small]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn infimum(s: &Separation, t: &Separation) -> Separation {
    Separation::new(s.small & t.small, s.big | t.big)
}

pub fn supremum(s: &Separation, t: &Separation) -> Separation {
    Separation::new(s.small | t.small, s.big & t.big)
}

pub fn order(s: &Separation) -> usize {
    (s.small & s.big).len()
}

pub fn leq(s: &Separation, t: &Separation) -> bool {
    s.small.0 & !t.small.0 == 0 && t.big.0 & !s.big.0 == 0
}

/// Whether some `n` equal values `ℓ` sit in an interval where every entry
/// is at least `ℓ`, by scanning every interval.
pub fn window_exists(a: &[usize], n: usize) -> bool {
    if n == 0 {
        return false;
    }
    for p in 0..a.len() {
        let mut lo = usize::MAX;
        let mut count = 0;
        for &x in &a[p..] {
            if x < lo {
                lo = x;
                count = 0;
            }
            if x == lo {
                count += 1;
            }
            if count >= n {
                return true;
            }
        }
    }
    false
}

/// Whether `(idx, level)` is a window of `a` of size `n`.
pub fn is_window(a: &[usize], n: usize, idx: &[usize], level: usize) -> bool {
    idx.len() == n
        && idx.windows(2).all(|w| w[0] < w[1])
        && idx.iter().all(|&i| a[i] == level)
        && idx.first().is_none_or(|&f| a[f..=idx[n - 1]].iter().all(|&x| x >= level))
}

/// Consecutive members with some separation of smaller order strictly
/// between them, found by scanning all separations.
pub fn between_violations(g: &Graph, chain: &[Separation], level: usize) -> Vec<(usize, Separation)> {
    let lower = oriented_separations(g, level);
    let mut out = Vec::new();
    for (j, w) in chain.windows(2).enumerate() {
        for r in &lower {
            if leq(&w[0], r) && *r != w[0] && leq(r, &w[1]) && *r != w[1] {
                out.push((j, *r));
            }
        }
    }
    out
}

/// Length of a longest strictly increasing chain of oriented separations
/// of order `< k`, by dynamic programming over all `3^n` of them.
pub fn longest_chain_length(g: &Graph, k: usize) -> usize {
    let mut seps = oriented_separations(g, k);
    seps.sort_by_key(|s| (s.small.len(), std::cmp::Reverse(s.big.len())));
    let mut best = vec![1usize; seps.len()];
    for j in 0..seps.len() {
        for i in 0..j {
            if seps[i] != seps[j] && leq(&seps[i], &seps[j]) {
                best[j] = best[j].max(best[i] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

fn big_pow(base: &BigUint, exp: &BigUint) -> BigUint {
    let mut out = BigUint::from(1u32);
    let mut i = BigUint::from(0u32);
    while &i < exp {
        out *= base;
        i += 1u32;
    }
    out
}

/// `3k · 3^{(m+2)^{k+1}}` by repeated multiplication.
pub fn n1(k: u32, m: u32) -> BigUint {
    let mut exponent = BigUint::from(1u32);
    for _ in 0..=k {
        exponent *= m + 2;
    }
    BigUint::from(3 * k) * big_pow(&BigUint::from(3u32), &exponent)
}

/// The exponent of `3` in `N_1(k, m)`.
pub fn n1_exponent(k: u32, m: &BigUint) -> BigUint {
    let base = m + 2u32;
    let mut out = BigUint::from(1u32);
    for _ in 0..=k {
        out *= &base;
    }
    out
}

/// `(m · ℓ(ℓ−1)/2 + 1) · (ℓ!)^{ℓ+1} · ℓ!`.
pub fn m1(ell: u32, m: u32) -> BigUint {
    let mut fact = BigUint::from(1u32);
    for i in 2..=ell {
        fact *= i;
    }
    let pairs = if ell >= 2 { ell * (ell - 1) / 2 } else { 0 };
    let mut out = BigUint::from(m) * pairs + 1u32;
    for _ in 0..ell + 2 {
        out *= &fact;
    }
    out
}
