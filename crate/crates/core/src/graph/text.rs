//! Edge-list text format.
//!
//! ```text
//! # comment
//! v 4
//! mode multi            # simple (default) | multi | digraph
//! roles a b c d         # optional role names
//! part 0 0 1            # optional: class index, then its vertices
//! part 1 2 3
//! e 0 1
//! e 0 1                 # repeated lines add multiplicity in multi mode
//! ```
//!
//! Writers emit a canonical, line-sorted document so that
//! parse -> write -> parse is the identity.

use std::collections::BTreeMap;

use thiserror::Error;

use super::host::{GraphKind, HostBuilder, HostGraph};
use super::pattern::{default_role_name, PatternGraph};
use super::GraphError;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("missing `v <count>` before `{0}`")]
    MissingVertexCount(String),
    #[error("`v` given twice")]
    RepeatedVertexCount,
    #[error("expected {0}")]
    Malformed(&'static str),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown mode `{0}`")]
    UnknownMode(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1} in simple mode")]
    DuplicateEdge(usize, usize),
    #[error("partition classes must be numbered 0..k-1")]
    PartNumbering,
    #[error("{0}")]
    Graph(GraphError),
    #[error("document has no `v <count>` line")]
    Empty,
    #[error("pattern documents cannot carry a partition")]
    PartitionOnPattern,
}

/// A parsed edge-list document, before committing to pattern or host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDoc {
    pub vertex_count: usize,
    pub kind: GraphKind,
    pub roles: Option<Vec<String>>,
    pub parts: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    /// Line number of each entry in `edges`, for error reporting.
    edge_lines: Vec<usize>,
    part_line: usize,
}

impl GraphDoc {
    pub fn has_partition(&self) -> bool {
        !self.parts.is_empty()
    }

    pub fn to_pattern(&self) -> Result<PatternGraph, ParseError> {
        if self.has_partition() {
            return Err(ParseError {
                line: self.part_line,
                kind: ParseErrorKind::PartitionOnPattern,
            });
        }
        let mut g = if self.kind == GraphKind::Digraph {
            PatternGraph::new_directed(self.vertex_count)
        } else {
            PatternGraph::new(self.vertex_count)
        };
        if let Some(roles) = &self.roles {
            g = g.with_roles(roles.clone()).map_err(|e| ParseError {
                line: 0,
                kind: ParseErrorKind::Graph(e),
            })?;
        }
        for (&(u, v), &line) in self.edges.iter().zip(&self.edge_lines) {
            g.add_edge(u, v).map_err(|e| ParseError {
                line,
                kind: ParseErrorKind::Graph(e),
            })?;
        }
        Ok(g)
    }

    pub fn to_host(&self) -> Result<HostGraph, ParseError> {
        let mut b = HostBuilder::new(self.vertex_count, self.kind);
        for (&(u, v), &line) in self.edges.iter().zip(&self.edge_lines) {
            b.add_edge(u, v).map_err(|e| ParseError {
                line,
                kind: ParseErrorKind::Graph(e),
            })?;
        }
        if self.has_partition() {
            b.partition(self.parts.clone());
        }
        b.build().map_err(|e| ParseError {
            line: self.part_line,
            kind: ParseErrorKind::Graph(e),
        })
    }
}

fn malformed(line: usize, what: &'static str) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Malformed(what),
    }
}

/// Parses an edge-list document.
pub fn parse_graph(text: &str) -> Result<GraphDoc, ParseError> {
    let mut vertex_count: Option<usize> = None;
    let mut kind = GraphKind::Simple;
    let mut roles: Option<Vec<String>> = None;
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut part_line = 0;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let directive = tokens.next().unwrap_or_default();
        let rest: Vec<&str> = tokens.collect();

        if directive != "v" && directive != "mode" && vertex_count.is_none()
            && matches!(directive, "e" | "part" | "roles") {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::MissingVertexCount(directive.to_string()),
                });
            }
        match directive {
            "v" => {
                if vertex_count.is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::RepeatedVertexCount,
                    });
                }
                let [count] = rest.as_slice() else {
                    return Err(malformed(line, "`v <count>`"));
                };
                vertex_count = Some(
                    count
                        .parse()
                        .map_err(|_| malformed(line, "an integer vertex count"))?,
                );
            }
            "mode" => {
                let [mode] = rest.as_slice() else {
                    return Err(malformed(line, "`mode simple|multi|digraph`"));
                };
                kind = match *mode {
                    "simple" => GraphKind::Simple,
                    "multi" => GraphKind::Multi,
                    "digraph" => GraphKind::Digraph,
                    other => {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::UnknownMode(other.to_string()),
                        })
                    }
                };
            }
            "roles" => {
                let n = vertex_count.unwrap_or_default();
                if rest.len() != n {
                    return Err(malformed(line, "one role name per vertex"));
                }
                if let Some(dup) = rest.iter().enumerate().find(|(i, r)| rest[..*i].contains(r)) {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::Graph(GraphError::DuplicateRole(dup.1.to_string())),
                    });
                }
                roles = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "part" => {
                let n = vertex_count.unwrap_or_default();
                let Some((class, members)) = rest.split_first() else {
                    return Err(malformed(line, "`part <i> <vertex>...`"));
                };
                let class: usize = class
                    .parse()
                    .map_err(|_| malformed(line, "an integer class index"))?;
                let members = members
                    .iter()
                    .map(|tok| resolve_vertex(tok, n, roles.as_deref(), line))
                    .collect::<Result<Vec<_>, _>>()?;
                parts.entry(class).or_default().extend(members);
                part_line = line;
            }
            "e" => {
                let n = vertex_count.unwrap_or_default();
                let [a, b] = rest.as_slice() else {
                    return Err(malformed(line, "`e <u> <v>`"));
                };
                let u = resolve_vertex(a, n, roles.as_deref(), line)?;
                let v = resolve_vertex(b, n, roles.as_deref(), line)?;
                if u == v {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::SelfLoop(u),
                    });
                }
                let key = if kind == GraphKind::Digraph {
                    (u, v)
                } else {
                    (u.min(v), u.max(v))
                };
                if kind != GraphKind::Multi && seen.contains_key(&key) {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateEdge(key.0, key.1),
                    });
                }
                *seen.entry(key).or_insert(0) += 1;
                edges.push((u, v));
                edge_lines.push(line);
            }
            other => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownDirective(other.to_string()),
                })
            }
        }
    }

    let vertex_count = vertex_count.ok_or(ParseError {
        line: 0,
        kind: ParseErrorKind::Empty,
    })?;
    if !parts.is_empty() && parts.keys().copied().ne(0..parts.len()) {
        return Err(ParseError {
            line: part_line,
            kind: ParseErrorKind::PartNumbering,
        });
    }
    let doc = GraphDoc {
        vertex_count,
        kind,
        roles,
        parts: parts.into_values().collect(),
        edges,
        edge_lines,
        part_line,
    };
    if doc.has_partition() {
        // surfaces unequal / overlapping classes at parse time
        doc.to_host()?;
    }
    Ok(doc)
}

fn resolve_vertex(
    token: &str,
    n: usize,
    roles: Option<&[String]>,
    line: usize,
) -> Result<usize, ParseError> {
    if let Some(roles) = roles {
        if let Some(i) = roles.iter().position(|r| r == token) {
            return Ok(i);
        }
    }
    match token.parse::<usize>() {
        Ok(v) if v < n => Ok(v),
        _ => Err(ParseError {
            line,
            kind: ParseErrorKind::UnknownVertex(token.to_string()),
        }),
    }
}

pub fn parse_pattern(text: &str) -> Result<PatternGraph, ParseError> {
    parse_graph(text)?.to_pattern()
}

pub fn parse_host(text: &str) -> Result<HostGraph, ParseError> {
    parse_graph(text)?.to_host()
}

fn write_edges(
    out: &mut String,
    edges: impl Iterator<Item = ((usize, usize), u32)>,
) {
    for ((a, b), m) in edges {
        for _ in 0..m {
            out.push_str(&format!("e {a} {b}\n"));
        }
    }
}

/// Canonical text of a pattern.
pub fn write_pattern(g: &PatternGraph) -> String {
    let mut out = format!("v {}\n", g.vertex_count());
    let mode = if g.is_directed() {
        "digraph"
    } else if g.is_simple() {
        "simple"
    } else {
        "multi"
    };
    out.push_str(&format!("mode {mode}\n"));
    let default_names = g
        .roles()
        .iter()
        .enumerate()
        .all(|(i, r)| *r == default_role_name(i));
    if !default_names {
        out.push_str(&format!("roles {}\n", g.roles().join(" ")));
    }
    write_edges(&mut out, g.edges());
    out
}

/// Canonical text of a host.
pub fn write_host(g: &HostGraph) -> String {
    let mut out = format!("v {}\nmode {}\n", g.vertex_count(), g.kind().as_str());
    if let Some(p) = g.partition() {
        for (i, class) in p.classes().iter().enumerate() {
            let members: Vec<String> = class.iter().map(ToString::to_string).collect();
            out.push_str(&format!("part {i} {}\n", members.join(" ")));
        }
    }
    write_edges(&mut out, g.edges());
    out
}
