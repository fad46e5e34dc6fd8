//! Graph-input resolution: named fixtures, inline graph6, or @file
//! references (graph6 or 1-based edge lists).

use gsx_core::graph::{complete, cycle, parse_edge_list, parse_graph6, path, star, Graph};

pub fn resolve_graph(spec: &str) -> Result<Graph, String> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {path}: {e}"))?;
        return parse_graph_file(&text);
    }
    if let Some(g) = parse_fixture(spec) {
        return g;
    }
    parse_graph6(spec).map_err(|e| format!("not a fixture name or graph6 string: {e}"))
}

fn parse_fixture(spec: &str) -> Option<Result<Graph, String>> {
    let (family, n) = spec.rsplit_once('_')?;
    let n: usize = n.parse().ok()?;
    let build: fn(usize) -> Graph = match family {
        "star" => star,
        "path" => path,
        "cycle" => cycle,
        "complete" => complete,
        _ => return None,
    };
    if n == 0 || n > 32 || (family == "cycle" && n < 3) {
        return Some(Err(format!("fixture {spec}: size out of range")));
    }
    Some(Ok(build(n)))
}

fn parse_graph_file(text: &str) -> Result<Graph, String> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or("file contains no graph")?;
    // an edge-list line is two 1-based integers; anything else is graph6
    let looks_like_edges = {
        let mut it = first.split_whitespace();
        matches!(
            (it.next().map(|t| t.parse::<usize>()), it.next().map(|t| t.parse::<usize>()), it.next()),
            (Some(Ok(_)), Some(Ok(_)), None)
        )
    };
    if looks_like_edges {
        parse_edge_list(text, None).map_err(|e| e.to_string())
    } else {
        parse_graph6(first).map_err(|e| e.to_string())
    }
}

/// `--set 1,3,4` (1-based) → NodeSet.
pub fn parse_set(spec: &str, n: usize) -> Result<gsx_core::NodeSet, String> {
    let mut set = gsx_core::NodeSet::EMPTY;
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let v: usize = tok.parse().map_err(|_| format!("bad node index {tok:?}"))?;
        if v == 0 || v > n {
            return Err(format!("node {v} out of range 1..={n}"));
        }
        set.insert(v - 1);
    }
    if set.is_empty() {
        return Err("node set must not be empty".into());
    }
    Ok(set)
}
