//! Graph files: the line format and its JSON mirror.
//!
//! ```text
//! # comment
//! vertex a -2
//! vertex b -3
//! edge a b
//! ```

use std::fmt::Write as _;

use plumbroot_core::{GraphError, PlumbingGraph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}: duplicate vertex '{name}'")]
    DuplicateVertex { line: usize, name: String },
    #[error("line {line}: edge mentions unknown vertex '{name}'")]
    UnknownVertex { line: usize, name: String },
    #[error("invalid JSON graph at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl ParseError {
    /// Line of the offending input, if there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::DuplicateVertex { line, .. }
            | ParseError::UnknownVertex { line, .. }
            | ParseError::Json { line, .. } => Some(*line),
            ParseError::Graph(_) => None,
        }
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// Whitespace separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

/// Reads either format; JSON is recognised by a leading `{`.
pub fn parse_graph(text: &str) -> Result<PlumbingGraph, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn parse_text(text: &str) -> Result<PlumbingGraph, ParseError> {
    let mut vertices: Vec<(String, i64)> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokens(raw);
        let Some(&(col, keyword)) = toks.first() else { continue };
        if keyword.starts_with('#') {
            continue;
        }
        let syntax = |column: usize, message: String| ParseError::Syntax { line, column, message };
        let name_at = |k: usize, what: &str| -> Result<&str, ParseError> {
            let Some(&(c, t)) = toks.get(k) else {
                let end = raw.chars().count() + 1;
                return Err(syntax(end, format!("missing {what}")));
            };
            if !valid_name(t) {
                return Err(syntax(c, format!("invalid {what} '{t}', names use [A-Za-z0-9_]")));
            }
            Ok(t)
        };
        let arity = match keyword {
            "vertex" => {
                let name = name_at(1, "vertex name")?;
                let Some(&(c, w)) = toks.get(2) else {
                    return Err(syntax(raw.chars().count() + 1, "missing weight".into()));
                };
                let weight: i64 = w.parse().map_err(|_| syntax(c, format!("weight '{w}' is not an integer")))?;
                if vertices.iter().any(|(n, _)| n == name) {
                    return Err(ParseError::DuplicateVertex { line, name: name.into() });
                }
                vertices.push((name.into(), weight));
                3
            }
            "edge" => {
                let a = name_at(1, "vertex name")?;
                let b = name_at(2, "vertex name")?;
                let find = |n: &str| {
                    vertices
                        .iter()
                        .position(|(v, _)| v == n)
                        .ok_or_else(|| ParseError::UnknownVertex { line, name: n.into() })
                };
                edges.push((find(a)?, find(b)?));
                3
            }
            other => return Err(syntax(col, format!("expected 'vertex' or 'edge', found '{other}'"))),
        };
        if let Some(&(c, t)) = toks.get(arity) {
            let hint = if keyword == "vertex" { " (vertices carry no genus or other decorations)" } else { "" };
            return Err(syntax(c, format!("unexpected token '{t}'{hint}")));
        }
    }
    let vs = vertices.into_iter().map(|(name, weight)| plumbroot_core::Vertex { name, weight }).collect();
    Ok(PlumbingGraph::from_indices(vs, &edges)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonVertex {
    pub name: String,
    pub weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonGraph {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<(String, String)>,
}

impl JsonGraph {
    pub fn from_graph(g: &PlumbingGraph) -> Self {
        JsonGraph {
            vertices: g.vertices().iter().map(|v| JsonVertex { name: v.name.clone(), weight: v.weight }).collect(),
            edges: g.edges().iter().map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<PlumbingGraph, ParseError> {
        let vs: Vec<(&str, i64)> = self.vertices.iter().map(|v| (v.name.as_str(), v.weight)).collect();
        for (i, (n, _)) in vs.iter().enumerate() {
            if !valid_name(n) {
                return Err(ParseError::Json { line: 0, column: 0, message: format!("invalid vertex name '{n}'") });
            }
            if vs[..i].iter().any(|(m, _)| m == n) {
                return Err(GraphError::DuplicateVertex(n.to_string()).into());
            }
        }
        let es: Vec<(&str, &str)> = self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Ok(PlumbingGraph::new(&vs, &es)?)
    }
}

pub fn parse_json(text: &str) -> Result<PlumbingGraph, ParseError> {
    let j: JsonGraph = serde_json::from_str(text).map_err(|e| ParseError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    j.to_graph()
}

/// Canonical text form: vertices in basis order, then edges as sorted index
/// pairs.
pub fn to_text(g: &PlumbingGraph) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        writeln!(out, "vertex {} {}", v.name, v.weight).unwrap();
    }
    for &(a, b) in g.edges() {
        writeln!(out, "edge {} {}", g.name(a), g.name(b)).unwrap();
    }
    out
}

pub fn to_json(g: &PlumbingGraph) -> String {
    serde_json::to_string_pretty(&JsonGraph::from_graph(g)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syntax_at(text: &str) -> (usize, usize) {
        match parse_text(text) {
            Err(ParseError::Syntax { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_graphs() {
        let g = parse_graph("vertex a -1").unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.weight(0), -1);
        let g = parse_graph("# chain\nvertex a -2\nvertex b -2\n\nedge a b\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn positions() {
        assert_eq!(syntax_at("vertex a -2\n  vertx b -2"), (2, 3));
        assert_eq!(syntax_at("vertex a x"), (1, 10));
        assert_eq!(syntax_at("vertex a -2 0"), (1, 13));
        assert_eq!(syntax_at("vertex a-b -2"), (1, 8));
        assert_eq!(syntax_at("vertex a"), (1, 9));
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_text("vertex a -2\nvertex a -3"), Err(ParseError::DuplicateVertex { line: 2, .. })));
        assert!(matches!(parse_text("vertex a -2\nedge a b"), Err(ParseError::UnknownVertex { line: 2, .. })));
        assert!(matches!(parse_text("vertex a -2\nvertex b -2"), Err(ParseError::Graph(GraphError::Disconnected(..)))));
        let tri = "vertex a -2\nvertex b -2\nvertex c -2\nedge a b\nedge b c\nedge c a";
        assert!(matches!(parse_text(tri), Err(ParseError::Graph(GraphError::Cycle(..)))));
    }

    #[test]
    fn json_mirror() {
        let g = parse_graph(r#"{"vertices":[{"name":"a","weight":-2},{"name":"b","weight":-3}],"edges":[["b","a"]]}"#).unwrap();
        assert_eq!(g, parse_text("vertex a -2\nvertex b -3\nedge a b").unwrap());
        let genus = r#"{"vertices":[{"name":"a","weight":-2,"genus":0}],"edges":[]}"#;
        assert!(matches!(parse_graph(genus), Err(ParseError::Json { .. })));
        assert_eq!(parse_json(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn canonical_text() {
        let g = parse_text("vertex c -2\nvertex a -2\nvertex b -2\nedge b c\nedge a c").unwrap();
        let t = to_text(&g);
        assert_eq!(t, "vertex c -2\nvertex a -2\nvertex b -2\nedge c a\nedge c b\n");
        assert_eq!(parse_text(&t).unwrap(), g);
    }
}
