//! Text formats: edge lists, graph6, bracketed vertex lists.

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::vset::VertexSet;

/// Parses an edge list: one `u v` pair per line. A line holding a single
/// integer declares an isolated vertex. `#` starts a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| parse_err(i + 1, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        match nums.as_slice() {
            [v] => g.add_vertex(*v)?,
            [a, b] => g.add_edge(*a, *b).map_err(|e| parse_err(i + 1, e.to_string()))?,
            _ => return Err(parse_err(i + 1, "expected one or two integers")),
        }
    }
    Ok(g)
}

/// Writes an edge list, declaring isolated vertices on their own line.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        if g.degree(v) == 0 {
            out.push_str(&format!("{v}\n"));
        }
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

/// Decodes one graph6 line into a graph on `0..n`.
pub fn decode_graph6(line: &str) -> Result<Graph> {
    let line = line.trim();
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(1, "empty graph6 string"));
    }
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(parse_err(1, "graph6 byte out of range"));
    }
    let (n, rest) = if bytes[0] != 126 {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 4 && bytes[1] != 126 {
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, &bytes[4..])
    } else {
        return Err(parse_err(1, "graph6 order too large"));
    };
    if n > crate::vset::MAX_VERTICES {
        return Err(Error::LabelTooLarge(n - 1));
    }
    let needed = n * n.saturating_sub(1) / 2;
    if rest.len() != needed.div_ceil(6) {
        return Err(parse_err(1, format!("graph6 body has {} bytes, expected {}", rest.len(), needed.div_ceil(6))));
    }
    let bit = |k: usize| (rest[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v)?;
    }
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Encodes a graph whose vertex set is `0..n`.
pub fn encode_graph6(g: &Graph) -> Result<String> {
    let n = g.order();
    if g.vertices() != VertexSet::from_iter(0..n) {
        return Err(Error::Precondition("graph6 needs vertices 0..n".into()));
    }
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut count = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            count += 1;
            if count == 6 {
                out.push(acc + 63);
                acc = 0;
                count = 0;
            }
        }
    }
    if count > 0 {
        out.push((acc << (6 - count)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Parses `[1, 2, 3]` (spaces optional).
pub fn parse_bracketed(s: &str, line: usize) -> Result<VertexSet> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| parse_err(line, format!("expected bracketed list, got {s:?}")))?;
    let mut set = VertexSet::EMPTY;
    for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok.parse().map_err(|_| parse_err(line, format!("bad integer {tok:?}")))?;
        if v >= crate::vset::MAX_VERTICES {
            return Err(Error::LabelTooLarge(v));
        }
        set = set.with(v);
    }
    Ok(set)
}

/// Splits a line holding two bracketed lists.
pub fn parse_two_bracketed(s: &str, line: usize) -> Result<(VertexSet, VertexSet)> {
    let s = s.trim();
    let close = s.find(']').ok_or_else(|| parse_err(line, "missing ]"))?;
    let a = parse_bracketed(&s[..=close], line)?;
    let b = parse_bracketed(&s[close + 1..], line)?;
    Ok((a, b))
}

/// Parses whitespace-separated integers.
pub fn parse_ints(s: &str, line: usize) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(line, format!("bad integer {t:?}"))))
        .collect()
}

pub fn join_ints(it: impl IntoIterator<Item = usize>) -> String {
    it.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}
