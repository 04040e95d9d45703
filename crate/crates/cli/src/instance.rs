//! Instance files: a JSON document and a line-oriented edge-list format.
//!
//! JSON:
//!
//! ```json
//! {"directed": false, "vertices": ["v0","v1"], "edges": [["v0","v1"]], "gamble": {"v0": 0.5, "v1": 0.5}}
//! ```
//!
//! Edge list (one directive per line, `#` starts a comment):
//!
//! ```text
//! undirected
//! e v0 v1
//! p v0 0.5
//! p v1 0.5
//! ```
//!
//! In the edge-list format vertices are created by the first `e` line that
//! mentions them (or by an explicit `v <label>` line) and default to
//! probability 0.

use cop_gambler_core::{Gamble, GambleMode, Graph, GraphError, VertexId};
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Graph,
    pub gamble: Gamble,
}

impl Instance {
    pub fn label(&self, v: VertexId) -> String {
        self.graph
            .label(v)
            .map(str::to_owned)
            .unwrap_or_else(|| v.to_string())
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        match self.graph.labels() {
            Some(labels) => labels.iter().position(|l| l == label),
            None => label
                .parse::<VertexId>()
                .ok()
                .filter(|&v| v < self.graph.vertex_count()),
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}unknown vertex label '{label}'", at(*.line))]
    UnknownLabel { label: String, line: Option<usize> },
    #[error("{}duplicate vertex label '{label}'", at(*.line))]
    DuplicateVertex { label: String, line: Option<usize> },
    #[error("{}duplicate gamble entry for '{label}'", at(*.line))]
    DuplicateGamble { label: String, line: Option<usize> },
    #[error("gamble has no entry for '{label}'")]
    MissingGamble { label: String },
    #[error("{}probability {value} for '{label}' is outside [0, 1]", at(*.line))]
    BadProbability {
        label: String,
        value: f64,
        line: Option<usize>,
    },
    #[error("line {line}: {message}")]
    Directive { line: usize, message: String },
    #[error("missing 'directed' or 'undirected' header line")]
    MissingHeader,
    #[error(transparent)]
    Invalid(#[from] GraphError),
}

fn at(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
}

pub fn read_instance(path: &Path, mode: GambleMode) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text, mode).map_err(|source| InstanceError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Parses either format; documents whose first non-blank character is `{` are JSON.
pub fn parse_instance(text: &str, mode: GambleMode) -> Result<Instance, ParseError> {
    if text.trim_start().starts_with('{') {
        parse_json(text, mode)
    } else {
        parse_edge_list(text, mode)
    }
}

/// Gamble object entries in document order, duplicates kept.
struct GambleEntries(Vec<(String, f64)>);

impl<'de> Deserialize<'de> for GambleEntries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = GambleEntries;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping vertex labels to probabilities")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<GambleEntries, A::Error> {
                let mut entries = Vec::new();
                while let Some(entry) = map.next_entry::<String, f64>()? {
                    entries.push(entry);
                }
                Ok(GambleEntries(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonInstance {
    directed: bool,
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    gamble: GambleEntries,
}

fn check_probability(label: &str, value: f64, line: Option<usize>) -> Result<(), ParseError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ParseError::BadProbability {
            label: label.to_owned(),
            value,
            line,
        })
    }
}

pub fn parse_json(text: &str, mode: GambleMode) -> Result<Instance, ParseError> {
    let doc: JsonInstance = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.vertices.is_empty() {
        return Err(GraphError::EmptyInstance.into());
    }
    let mut ids: HashMap<&str, VertexId> = HashMap::with_capacity(doc.vertices.len());
    for (i, label) in doc.vertices.iter().enumerate() {
        if ids.insert(label, i).is_some() {
            return Err(ParseError::DuplicateVertex {
                label: label.clone(),
                line: None,
            });
        }
    }
    let lookup = |label: &str| {
        ids.get(label).copied().ok_or_else(|| ParseError::UnknownLabel {
            label: label.to_owned(),
            line: None,
        })
    };
    let edges = doc
        .edges
        .iter()
        .map(|(u, v)| Ok((lookup(u)?, lookup(v)?)))
        .collect::<Result<Vec<_>, ParseError>>()?;
    let mut p: Vec<Option<f64>> = vec![None; doc.vertices.len()];
    for (label, value) in &doc.gamble.0 {
        let v = lookup(label)?;
        check_probability(label, *value, None)?;
        if p[v].replace(*value).is_some() {
            return Err(ParseError::DuplicateGamble {
                label: label.clone(),
                line: None,
            });
        }
    }
    let p = p
        .iter()
        .enumerate()
        .map(|(v, x)| match (x, mode) {
            (Some(x), _) => Ok(*x),
            (None, GambleMode::Permissive) => Ok(0.0),
            (None, GambleMode::Strict) => Err(ParseError::MissingGamble {
                label: doc.vertices[v].clone(),
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = doc.vertices.len();
    let graph = Graph::build(doc.directed, n, &edges)?.with_labels(doc.vertices)?;
    let gamble = Gamble::new(n, p, mode)?;
    Ok(Instance { graph, gamble })
}

#[derive(Default)]
struct LabelTable {
    labels: Vec<String>,
    ids: HashMap<String, VertexId>,
}

impl LabelTable {
    fn intern(&mut self, label: &str) -> VertexId {
        if let Some(&v) = self.ids.get(label) {
            return v;
        }
        let v = self.labels.len();
        self.labels.push(label.to_owned());
        self.ids.insert(label.to_owned(), v);
        v
    }
}

pub fn parse_edge_list(text: &str, mode: GambleMode) -> Result<Instance, ParseError> {
    let mut directed: Option<bool> = None;
    let mut table = LabelTable::default();
    let mut edges = Vec::new();
    let mut gamble_lines: Vec<(usize, String, f64)> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let directive_error = |message: String| ParseError::Directive { line, message };
        match tokens.as_slice() {
            [] => {}
            [kw @ ("directed" | "undirected")] => {
                if directed.is_some() {
                    return Err(directive_error("orientation declared twice".into()));
                }
                if !table.labels.is_empty() || !gamble_lines.is_empty() {
                    return Err(directive_error("orientation must precede all other directives".into()));
                }
                directed = Some(*kw == "directed");
            }
            [kind, ..] if directed.is_none() && matches!(*kind, "e" | "p" | "v") => {
                return Err(ParseError::MissingHeader);
            }
            ["v", label] => {
                table.intern(label);
            }
            ["e", u, v] => {
                let u = table.intern(u);
                let v = table.intern(v);
                edges.push((u, v));
            }
            ["p", label, value] => {
                let value: f64 = value
                    .parse()
                    .map_err(|_| directive_error(format!("'{value}' is not a number")))?;
                gamble_lines.push((line, (*label).to_owned(), value));
            }
            [kw, ..] if matches!(*kw, "v" | "e" | "p") => {
                return Err(directive_error(format!("wrong number of fields for '{kw}'")));
            }
            [kw, ..] => return Err(directive_error(format!("unknown directive '{kw}'"))),
        }
    }
    let directed = directed.ok_or(ParseError::MissingHeader)?;
    let n = table.labels.len();
    if n == 0 {
        return Err(GraphError::EmptyInstance.into());
    }
    let mut p: Vec<Option<f64>> = vec![None; n];
    for (line, label, value) in gamble_lines {
        let Some(&v) = table.ids.get(&label) else {
            return Err(ParseError::UnknownLabel {
                label,
                line: Some(line),
            });
        };
        check_probability(&label, value, Some(line))?;
        if p[v].replace(value).is_some() {
            return Err(ParseError::DuplicateGamble {
                label,
                line: Some(line),
            });
        }
    }
    let p = p.into_iter().map(|x| x.unwrap_or(0.0)).collect();
    let graph = Graph::build(directed, n, &edges)?.with_labels(table.labels)?;
    let gamble = Gamble::new(n, p, mode)?;
    Ok(Instance { graph, gamble })
}

fn labels_of(inst: &Instance) -> Vec<String> {
    (0..inst.graph.vertex_count()).map(|v| inst.label(v)).collect()
}

pub fn to_json(inst: &Instance) -> String {
    let labels = labels_of(inst);
    let edges: Vec<[&str; 2]> = inst
        .graph
        .edges()
        .into_iter()
        .map(|(u, v)| [labels[u].as_str(), labels[v].as_str()])
        .collect();
    let gamble: serde_json::Map<String, serde_json::Value> = labels
        .iter()
        .zip(inst.gamble.as_slice())
        .map(|(l, &p)| (l.clone(), serde_json::Value::from(p)))
        .collect();
    serde_json::json!({
        "directed": inst.graph.is_directed(),
        "vertices": labels,
        "edges": edges,
        "gamble": gamble,
    })
    .to_string()
}

/// Edge-list rendering. Labels must be free of whitespace and `#`.
pub fn to_edge_list(inst: &Instance) -> String {
    let labels = labels_of(inst);
    let mut out = String::new();
    out.push_str(if inst.graph.is_directed() {
        "directed\n"
    } else {
        "undirected\n"
    });
    for l in &labels {
        out.push_str(&format!("v {l}\n"));
    }
    for (u, v) in inst.graph.edges() {
        out.push_str(&format!("e {} {}\n", labels[u], labels[v]));
    }
    for (l, p) in labels.iter().zip(inst.gamble.as_slice()) {
        out.push_str(&format!("p {l} {p}\n"));
    }
    out
}
