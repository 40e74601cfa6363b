//! Text formats.
//!
//! Graphs use the `.gr` format: `c` comment lines, a `p pw <n> <m>` header,
//! then one `<u> <v>` line per edge with 1-based vertices. Decompositions use
//! the `.pd` format: `c` comment lines, an `s pd <2n> <n> <width>` header,
//! then one `<+|-> <v>` line per event in sequence order. Widths in `.pd`
//! files are recomputed on reading; the header value is only reported back.

use std::fmt::Write as _;

use pathwidth_core::{Event, Graph, GraphError, PathDecomposition, Tag};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is the file as a whole.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("malformed header {0:?}")]
    BadHeader(String),
    #[error("second header")]
    DuplicateHeader,
    #[error("malformed line {0:?}")]
    BadLine(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("header announces {announced} {what}, found {found}")]
    CountMismatch { what: &'static str, announced: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !(l.starts_with('c') && (l.len() == 1 || l[1..].starts_with(char::is_whitespace))))
}

fn numbers<const N: usize>(fields: &[&str]) -> Option<[i64; N]> {
    if fields.len() != N {
        return None;
    }
    let mut out = [0; N];
    for (o, f) in out.iter_mut().zip(fields) {
        *o = f.parse().ok()?;
    }
    Some(out)
}

/// Reads a `.gr` graph. Repeated edges, in either orientation, collapse; the
/// edge count in the header must match the number of edge lines.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (n, m) = match (fields.first(), fields.get(1), numbers::<2>(fields.get(2..).unwrap_or(&[]))) {
        (Some(&"p"), Some(_), Some([n, m])) if n >= 0 && m >= 0 => (n as usize, m as usize),
        _ => return Err(err(hline, ParseErrorKind::BadHeader(header.to_string()))),
    };
    let mut g = Graph::new(n);
    let mut found = 0;
    for (line, l) in lines {
        if l.starts_with('p') {
            return Err(err(line, ParseErrorKind::DuplicateHeader));
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = numbers::<2>(&fields).ok_or_else(|| err(line, ParseErrorKind::BadLine(l.to_string())))?;
        for x in [u, v] {
            if x < 1 || x as usize > n {
                return Err(err(line, ParseErrorKind::OutOfRange { vertex: x.max(0) as usize, n }));
            }
        }
        g.try_add_edge(u as usize - 1, v as usize - 1).map_err(|e| match e {
            GraphError::SelfLoop { vertex } => err(line, ParseErrorKind::SelfLoop(vertex + 1)),
            other => err(line, ParseErrorKind::BadLine(other.to_string())),
        })?;
        found += 1;
    }
    if found != m {
        return Err(err(0, ParseErrorKind::CountMismatch { what: "edges", announced: m, found }));
    }
    Ok(g)
}

/// Writes `g` as `.gr`, edges `u < v` in lexicographic order.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p pw {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).expect("writing to a string");
    }
    out
}

/// A `.pd` file as read: the sequence with recomputed widths, and what the
/// header claimed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdFile {
    pub decomposition: PathDecomposition,
    pub vertex_count: usize,
    pub declared_width: i64,
}

/// Reads a `.pd` decomposition. Only the syntax is checked here: a sequence
/// that repeats or misorders vertices is returned as is, with running widths,
/// for `validate` to report.
pub fn parse_decomposition(text: &str) -> Result<PdFile, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(err(0, ParseErrorKind::MissingHeader))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (len, n, declared_width) = match (fields.first(), fields.get(1), numbers::<3>(fields.get(2..).unwrap_or(&[]))) {
        (Some(&"s"), Some(&"pd"), Some([len, n, w])) if len >= 0 && n >= 0 && len == 2 * n => (len as usize, n as usize, w),
        _ => return Err(err(hline, ParseErrorKind::BadHeader(header.to_string()))),
    };
    let mut events = Vec::with_capacity(len);
    let mut width = -1;
    for (line, l) in lines {
        if l.starts_with('s') {
            return Err(err(line, ParseErrorKind::DuplicateHeader));
        }
        let bad = || err(line, ParseErrorKind::BadLine(l.to_string()));
        let mut fields = l.split_whitespace();
        let tag = match fields.next() {
            Some("+") => Tag::Introduce,
            Some("-") => Tag::Forget,
            _ => return Err(bad()),
        };
        let v: i64 = fields.next().and_then(|f| f.parse().ok()).ok_or_else(bad)?;
        if fields.next().is_some() {
            return Err(bad());
        }
        if v < 1 || v as usize > n {
            return Err(err(line, ParseErrorKind::OutOfRange { vertex: v.max(0) as usize, n }));
        }
        width += tag.sign();
        events.push(Event { vertex: v as usize - 1, tag, width });
    }
    if events.len() != len {
        return Err(err(0, ParseErrorKind::CountMismatch { what: "events", announced: len, found: events.len() }));
    }
    Ok(PdFile { decomposition: PathDecomposition::from_events_unchecked(events), vertex_count: n, declared_width })
}

/// Writes `p` as `.pd` for a graph on `n` vertices.
pub fn write_decomposition(p: &PathDecomposition, n: usize) -> String {
    let mut out = format!("s pd {} {} {}\n", p.len(), n, p.width());
    for e in p.events() {
        let sign = if e.tag == Tag::Introduce { '+' } else { '-' };
        writeln!(out, "{sign} {}", e.vertex + 1).expect("writing to a string");
    }
    out
}
