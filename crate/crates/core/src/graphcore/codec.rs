//! Text encoding: `<P> v<V> e<E> | <t><d><h> ...`, vertices numbered from 1.
//!
//! `<P>` is `E` or `O`; the separator `<d>` is `-` for even and `>` for odd
//! solid edges. Dotted edges follow the solid ones as `a-b:d`, and the `e`
//! count includes them.

use std::fmt::Write;

use super::graph::{canonicalize, CanonicalGraph, LabeledGraph, Parity};
use crate::error::{Error, Result};

pub fn encode(g: &CanonicalGraph) -> String {
    let mut s = String::with_capacity(8 + 5 * (g.num_edges() + g.num_dotted()));
    let sep = match g.parity() {
        Parity::Even => '-',
        Parity::Odd => '>',
    };
    write!(s, "{} v{} e{} |", g.parity().letter(), g.num_vertices(), g.num_edges() + g.num_dotted()).unwrap();
    for &(a, b) in g.edges() {
        write!(s, " {}{}{}", a + 1, sep, b + 1).unwrap();
    }
    for &(a, b) in g.dotted() {
        write!(s, " {}-{}:d", a + 1, b + 1).unwrap();
    }
    s
}

/// Encode a labeled graph in the same format, keeping its labels and edge order.
pub fn encode_labeled(g: &LabeledGraph) -> String {
    let sep = match g.parity {
        Parity::Even => '-',
        Parity::Odd => '>',
    };
    let mut s = format!("{} v{} e{} |", g.parity.letter(), g.num_vertices, g.edges.len() + g.dotted.len());
    for &(a, b) in &g.edges {
        write!(s, " {}{}{}", a + 1, sep, b + 1).unwrap();
    }
    for &(a, b) in &g.dotted {
        write!(s, " {}-{}:d", a + 1, b + 1).unwrap();
    }
    s
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Tokens with their byte offsets.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_count(pos: usize, tok: &str, prefix: char) -> Result<usize> {
    tok.strip_prefix(prefix)
        .and_then(|r| r.parse::<usize>().ok())
        .ok_or_else(|| err(pos, format!("expected `{prefix}<count>`, found `{tok}`")))
}

/// Parse the text form into a labeled graph without canonicalizing.
pub fn parse_labeled(text: &str) -> Result<LabeledGraph> {
    let toks = tokens(text);
    if toks.len() < 4 {
        return Err(err(text.len(), "expected header `<P> v<V> e<E> |`"));
    }
    let parity = match toks[0].1 {
        "E" => Parity::Even,
        "O" => Parity::Odd,
        other => return Err(err(toks[0].0, format!("unknown parity `{other}`"))),
    };
    let n = parse_count(toks[1].0, toks[1].1, 'v')?;
    let e = parse_count(toks[2].0, toks[2].1, 'e')?;
    if toks[3].1 != "|" {
        return Err(err(toks[3].0, "expected `|`"));
    }
    if n == 0 {
        return Err(err(toks[1].0, "graph must have at least one vertex"));
    }
    let mut edges = Vec::new();
    let mut dotted = Vec::new();
    for &(pos, tok) in &toks[4..] {
        let (body, is_dotted) = match tok.strip_suffix(":d") {
            Some(b) => (b, true),
            None => (tok, false),
        };
        let want = if is_dotted {
            '-'
        } else {
            match parity {
                Parity::Even => '-',
                Parity::Odd => '>',
            }
        };
        let cut = body.find(want).ok_or_else(|| err(pos, format!("expected edge `a{want}b`, found `{tok}`")))?;
        let parse_v = |s: &str, off: usize| -> Result<usize> {
            let x: usize = s.parse().map_err(|_| err(pos + off, format!("bad vertex `{s}`")))?;
            if x == 0 || x > n {
                return Err(err(pos + off, format!("vertex {x} out of range 1..={n}")));
            }
            Ok(x - 1)
        };
        let a = parse_v(&body[..cut], 0)?;
        let b = parse_v(&body[cut + 1..], cut + 1)?;
        if is_dotted {
            dotted.push((a, b));
        } else {
            if !dotted.is_empty() {
                return Err(err(pos, "solid edges must precede dotted edges"));
            }
            edges.push((a, b));
        }
    }
    if edges.len() + dotted.len() != e {
        return Err(err(toks[2].0, format!("header announces {e} edges, found {}", edges.len() + dotted.len())));
    }
    let g = LabeledGraph::with_dotted(parity, n, edges, dotted);
    g.validate()?;
    Ok(g)
}

/// Parse and canonicalize. The orientation sign is dropped; zero classes are an error.
pub fn decode(text: &str) -> Result<CanonicalGraph> {
    let g = parse_labeled(text)?;
    match canonicalize(&g)? {
        Some((c, _)) => Ok(c),
        None => Err(Error::Precondition(format!("`{}` is a zero class", text.trim()))),
    }
}

/// Parse and canonicalize, keeping the sign.
pub fn decode_signed(text: &str) -> Result<Option<(CanonicalGraph, i32)>> {
    canonicalize(&parse_labeled(text)?)
}
