//! Plain-text graph and pair files.
//!
//! Graph file: first line `n m`, then `m` lines `u v`. Pair file: one `s t`
//! per line. In both, `#` starts a comment and blank lines are skipped.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{DiGraph, Pair};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn two_numbers(line_no: usize, line: &str) -> Result<(usize, usize)> {
    let parse_err = |msg: String| Error::Parse { line: line_no, msg };
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| parse_err("expected two integers".into()))?;
        tok.parse().map_err(|_| parse_err(format!("not a non-negative integer: {tok:?}")))
    };
    let a = next()?;
    let b = next()?;
    if let Some(extra) = it.next() {
        return Err(parse_err(format!("unexpected token {extra:?}")));
    }
    Ok((a, b))
}

pub fn parse_graph(text: &str) -> Result<DiGraph> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing `n m` header".into() })?;
    let (n, m) = two_numbers(line_no, header)?;
    let mut g_edges = Vec::with_capacity(m);
    let mut last_line = line_no;
    for (line_no, line) in lines {
        if g_edges.len() == m {
            return Err(Error::Parse { line: line_no, msg: format!("more than the declared {m} edges") });
        }
        g_edges.push((line_no, two_numbers(line_no, line)?));
        last_line = line_no;
    }
    if g_edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            msg: format!("declared {m} edges, found {}", g_edges.len()),
        });
    }
    let mut g = DiGraph::empty(n);
    for (line_no, e) in g_edges {
        g.push_edge(e).map_err(|err| Error::Parse { line: line_no, msg: err.to_string() })?;
    }
    Ok(g)
}

pub fn write_graph(g: &DiGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_pairs(text: &str) -> Result<Vec<Pair>> {
    content_lines(text).map(|(no, line)| two_numbers(no, line)).collect()
}

pub fn write_pairs(pairs: &[Pair]) -> String {
    let mut out = String::new();
    for &(s, t) in pairs {
        writeln!(out, "{s} {t}").unwrap();
    }
    out
}

/// Every pair endpoint must be a vertex of `g`.
pub fn check_pairs(g: &DiGraph, pairs: &[Pair]) -> Result<()> {
    for &(s, t) in pairs {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
    }
    Ok(())
}
