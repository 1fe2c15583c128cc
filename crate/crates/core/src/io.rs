//! JSON documents for graphs, rules, morphisms and scenarios, plus DOT export.
//!
//! Every document is an envelope
//!
//! ```json
//! { "format_version": "1", "kind": "graph", "payload": { "nodes": [...], "edges": [...] } }
//! ```
//!
//! Morphisms are written as explicit id maps `{ "nodes": {..}, "edges": {..} }`.
//! Serialization is canonical: ids are sorted and the layout is fixed, so equal
//! values always produce the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::graph::{validate_graph, Graph, GraphRef, Morphism, RawGraph};
use crate::rewriting::{find_matches, validate_rule, WeakSpan};
use crate::Error;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Graph(Graph),
    Rule(WeakSpan),
    Morphism(Morphism),
    Scenario(Scenario),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::Rule(_) => "rule",
            Document::Morphism(_) => "morphism",
            Document::Scenario(_) => "scenario",
        }
    }
}

/// A host graph, some rules and one chosen match per rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub host: GraphRef,
    pub rules: Vec<WeakSpan>,
    pub matches: Vec<MatchChoice>,
    pub injective_matches: bool,
}

/// Either a position in the enumeration of [`find_matches`] or an explicit map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchChoice {
    Index(usize),
    Explicit {
        nodes: BTreeMap<String, String>,
        edges: BTreeMap<String, String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DocumentError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("validation error in {location}: `{element}`: {message}")]
    Validation {
        location: String,
        element: String,
        message: String,
    },
}

fn invalid(location: &str, element: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Validation {
        location: location.to_string(),
        element: element.into(),
        message: message.into(),
    }
}

/// Pulls the first backticked id out of a library error message.
fn element_of(message: &str) -> String {
    let mut parts = message.split('`');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(_), Some(id), Some(_)) => id.to_string(),
        _ => String::new(),
    }
}

impl Scenario {
    /// The match of rule `a` into `host`. Usually `host` is the scenario host;
    /// for a sequential pair the second match lives in the first result.
    pub fn resolve_match(&self, a: usize, host: &GraphRef) -> Result<Morphism, DocumentError> {
        let location = format!("matches[{a}]");
        let rule = self
            .rules
            .get(a)
            .ok_or_else(|| invalid(&location, a.to_string(), format!("scenario has only {} rules", self.rules.len())))?;
        match &self.matches[a] {
            MatchChoice::Index(i) => {
                let all = find_matches(rule, host, self.injective_matches);
                all.get(*i).cloned().ok_or_else(|| {
                    invalid(
                        &location,
                        i.to_string(),
                        format!("rule `{}` has only {} matches", rule.name, all.len()),
                    )
                })
            }
            MatchChoice::Explicit { nodes, edges } => {
                let m = build_morphism(&location, rule.lhs(), host, nodes, edges)?;
                if self.injective_matches && !m.is_injective() {
                    return Err(invalid(&location, rule.name.clone(), "match is not injective"));
                }
                Ok(m)
            }
        }
    }

    /// Every match resolved against the scenario host.
    pub fn resolve_all(&self) -> Result<Vec<Morphism>, DocumentError> {
        (0..self.rules.len()).map(|a| self.resolve_match(a, &self.host)).collect()
    }
}

// ----- wire format -----

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct WireMap {
    #[serde(default)]
    nodes: BTreeMap<String, String>,
    #[serde(default)]
    edges: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireRule {
    name: String,
    lhs: RawGraph,
    context: RawGraph,
    interface: RawGraph,
    rhs: RawGraph,
    l: WireMap,
    i: WireMap,
    r: WireMap,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireMorphism {
    dom: RawGraph,
    cod: RawGraph,
    #[serde(default)]
    nodes: BTreeMap<String, String>,
    #[serde(default)]
    edges: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WireMatch {
    Index(usize),
    Map(WireMap),
}

fn yes() -> bool {
    true
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireScenario {
    host: RawGraph,
    rules: Vec<WireRule>,
    matches: Vec<WireMatch>,
    #[serde(default = "yes")]
    injective_matches: bool,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Graph,
    Rule,
    Morphism,
    Scenario,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<'a> {
    format_version: String,
    kind: Kind,
    #[serde(borrow)]
    payload: &'a RawValue,
}

#[derive(Serialize)]
#[serde(untagged)]
enum WirePayload {
    Graph(RawGraph),
    Rule(WireRule),
    Morphism(WireMorphism),
    Scenario(WireScenario),
}

#[derive(Serialize)]
struct WireDocument {
    format_version: &'static str,
    kind: &'static str,
    payload: WirePayload,
}

fn map_of(m: &Morphism) -> WireMap {
    WireMap {
        nodes: m.node_map().clone(),
        edges: m.edge_map().clone(),
    }
}

fn wire_rule(r: &WeakSpan) -> WireRule {
    WireRule {
        name: r.name.clone(),
        lhs: r.lhs().to_raw(),
        context: r.context().to_raw(),
        interface: r.interface().to_raw(),
        rhs: r.rhs().to_raw(),
        l: map_of(&r.l),
        i: map_of(&r.i),
        r: map_of(&r.r),
    }
}

fn wire(doc: &Document) -> WireDocument {
    let payload = match doc {
        Document::Graph(g) => WirePayload::Graph(g.to_raw()),
        Document::Rule(r) => WirePayload::Rule(wire_rule(r)),
        Document::Morphism(m) => WirePayload::Morphism(WireMorphism {
            dom: m.dom().to_raw(),
            cod: m.cod().to_raw(),
            nodes: m.node_map().clone(),
            edges: m.edge_map().clone(),
        }),
        Document::Scenario(s) => WirePayload::Scenario(WireScenario {
            host: s.host.to_raw(),
            rules: s.rules.iter().map(wire_rule).collect(),
            matches: s
                .matches
                .iter()
                .map(|c| match c {
                    MatchChoice::Index(i) => WireMatch::Index(*i),
                    MatchChoice::Explicit { nodes, edges } => WireMatch::Map(WireMap {
                        nodes: nodes.clone(),
                        edges: edges.clone(),
                    }),
                })
                .collect(),
            injective_matches: s.injective_matches,
        }),
    };
    WireDocument {
        format_version: FORMAT_VERSION,
        kind: doc.kind(),
        payload,
    }
}

/// Canonical text of one document, ending in a newline.
pub fn serialize(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&wire(doc)).expect("documents serialize");
    s.push('\n');
    s
}

/// Several documents as one JSON array.
pub fn serialize_all(docs: &[Document]) -> String {
    let wires: Vec<WireDocument> = docs.iter().map(wire).collect();
    let mut s = serde_json::to_string_pretty(&wires).expect("documents serialize");
    s.push('\n');
    s
}

// ----- parsing -----

/// Line and column (both 1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Converts a serde error inside `sub` (a slice of `text`) to a position in `text`.
fn parse_error(text: &str, sub: &str, e: serde_json::Error) -> DocumentError {
    let mut message = e.to_string();
    if let Some(i) = message.rfind(" at line ") {
        message.truncate(i);
    }
    let base = sub.as_ptr() as usize - text.as_ptr() as usize;
    let (base_line, base_col) = position(text, base);
    let (line, column) = if e.line() <= 1 {
        (base_line, base_col + e.column().saturating_sub(1))
    } else {
        (base_line + e.line() - 1, e.column())
    };
    DocumentError::Parse { line, column, message }
}

fn build_graph(location: &str, raw: &RawGraph) -> Result<GraphRef, DocumentError> {
    validate_graph(raw).map_err(|v| invalid(location, v.element, v.reason))?;
    Ok(Arc::new(Graph::from_raw(raw).expect("validated graph")))
}

fn build_morphism(
    location: &str,
    dom: &GraphRef,
    cod: &GraphRef,
    nodes: &BTreeMap<String, String>,
    edges: &BTreeMap<String, String>,
) -> Result<Morphism, DocumentError> {
    for (x, y) in nodes {
        if !dom.has_node(x) {
            return Err(invalid(location, x.clone(), "mapped node is not in the domain"));
        }
        if !cod.has_node(y) {
            return Err(invalid(location, y.clone(), "image node is not in the codomain"));
        }
    }
    for (x, y) in edges {
        if !dom.has_edge(x) {
            return Err(invalid(location, x.clone(), "mapped edge is not in the domain"));
        }
        if !cod.has_edge(y) {
            return Err(invalid(location, y.clone(), "image edge is not in the codomain"));
        }
    }
    Morphism::new(dom.clone(), cod.clone(), nodes.clone(), edges.clone()).map_err(|e| {
        let message = e.to_string();
        invalid(location, element_of(&message), message)
    })
}

fn build_rule(location: &str, w: &WireRule) -> Result<WeakSpan, DocumentError> {
    let at = |part: &str| format!("{location}.{part}");
    let lhs = build_graph(&at("lhs"), &w.lhs)?;
    let context = build_graph(&at("context"), &w.context)?;
    let interface = build_graph(&at("interface"), &w.interface)?;
    let rhs = build_graph(&at("rhs"), &w.rhs)?;
    let l = build_morphism(&at("l"), &context, &lhs, &w.l.nodes, &w.l.edges)?;
    let i = build_morphism(&at("i"), &interface, &context, &w.i.nodes, &w.i.edges)?;
    let r = build_morphism(&at("r"), &interface, &rhs, &w.r.nodes, &w.r.edges)?;
    let rule = WeakSpan::new(w.name.clone(), l, i, r).map_err(|e| invalid(location, w.name.clone(), e.to_string()))?;
    validate_rule(&rule).map_err(|e| match e {
        Error::InvalidRule { rule, reason } => invalid(location, rule, reason),
        other => invalid(location, w.name.clone(), other.to_string()),
    })?;
    Ok(rule)
}

fn build_scenario(w: &WireScenario) -> Result<Scenario, DocumentError> {
    let host = build_graph("host", &w.host)?;
    let rules = w
        .rules
        .iter()
        .enumerate()
        .map(|(a, r)| build_rule(&format!("rules[{a}]"), r))
        .collect::<Result<Vec<_>, _>>()?;
    if w.matches.len() != rules.len() {
        return Err(invalid(
            "matches",
            w.matches.len().to_string(),
            format!("expected one match per rule ({})", rules.len()),
        ));
    }
    let mut matches = Vec::new();
    for (a, (m, rule)) in w.matches.iter().zip(&rules).enumerate() {
        matches.push(match m {
            WireMatch::Index(i) => MatchChoice::Index(*i),
            WireMatch::Map(map) => {
                let location = format!("matches[{a}]");
                for x in map.nodes.keys() {
                    if !rule.lhs().has_node(x) {
                        return Err(invalid(&location, x.clone(), "mapped node is not in the left-hand side"));
                    }
                }
                for x in map.edges.keys() {
                    if !rule.lhs().has_edge(x) {
                        return Err(invalid(&location, x.clone(), "mapped edge is not in the left-hand side"));
                    }
                }
                MatchChoice::Explicit {
                    nodes: map.nodes.clone(),
                    edges: map.edges.clone(),
                }
            }
        });
    }
    Ok(Scenario {
        host,
        rules,
        matches,
        injective_matches: w.injective_matches,
    })
}

fn payload<'a, T: Deserialize<'a>>(text: &str, raw: &'a RawValue) -> Result<T, DocumentError> {
    serde_json::from_str(raw.get()).map_err(|e| parse_error(text, raw.get(), e))
}

/// Parses and validates one document.
pub fn parse_document(text: &str) -> Result<Document, DocumentError> {
    let env: Envelope = serde_json::from_str(text).map_err(|e| parse_error(text, text, e))?;
    if env.format_version != FORMAT_VERSION {
        return Err(invalid(
            "format_version",
            env.format_version,
            format!("unsupported version, expected \"{FORMAT_VERSION}\""),
        ));
    }
    Ok(match env.kind {
        Kind::Graph => Document::Graph(build_graph("payload", &payload(text, env.payload)?)?.as_ref().clone()),
        Kind::Rule => Document::Rule(build_rule("payload", &payload(text, env.payload)?)?),
        Kind::Morphism => {
            let w: WireMorphism = payload(text, env.payload)?;
            let dom = build_graph("payload.dom", &w.dom)?;
            let cod = build_graph("payload.cod", &w.cod)?;
            Document::Morphism(build_morphism("payload", &dom, &cod, &w.nodes, &w.edges)?)
        }
        Kind::Scenario => Document::Scenario(build_scenario(&payload(text, env.payload)?)?),
    })
}

/// `serialize(parse_document(text))`.
pub fn canonical(text: &str) -> Result<String, DocumentError> {
    parse_document(text).map(|d| serialize(&d))
}

// ----- DOT -----

fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

/// A DOT digraph with one statement per node and edge, in id order. Labels
/// read `id:label`.
pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("digraph G {\n");
    for (id, label) in g.nodes() {
        let _ = writeln!(out, "  \"{}\" [label=\"{}\"];", dot_escape(id), dot_escape(&format!("{id}:{label}")));
    }
    for (id, e) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\"];",
            dot_escape(&e.src),
            dot_escape(&e.tgt),
            dot_escape(&format!("{id}:{}", e.label))
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::rewriting::library;

    #[test]
    fn minimal_graph_document() {
        let text = r#"{"format_version":"1","kind":"graph","payload":{"nodes":[{"id":"a","label":"A"}]}}"#;
        assert_eq!(parse_document(text).unwrap(), Document::Graph(fixtures::n1()));
    }

    #[test]
    fn dangling_reference_in_rule_is_reported_by_id() {
        let mut w = wire_rule(&library::delete_loop());
        w.l.nodes.insert("a".into(), "ghost".into());
        let doc = WireDocument {
            format_version: "1",
            kind: "rule",
            payload: WirePayload::Rule(w),
        };
        let text = serde_json::to_string(&doc).unwrap();
        match parse_document(&text) {
            Err(DocumentError::Validation { location, element, .. }) => {
                assert_eq!(location, "payload.l");
                assert_eq!(element, "ghost");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn edge_with_missing_endpoint() {
        let text = r#"{"format_version":"1","kind":"graph","payload":{"nodes":[],"edges":[{"id":"e","src":"u","tgt":"u","label":"x"}]}}"#;
        assert!(matches!(
            parse_document(text),
            Err(DocumentError::Validation { element, .. }) if element == "e"
        ));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\n  \"format_version\": \"1\",\n  \"kind\": \"graph\",\n  \"payload\": {\n    \"nodes\": [{\"id\": 3, \"label\": \"A\"}]\n  }\n}";
        match parse_document(text) {
            Err(DocumentError::Parse { line, column, .. }) => {
                assert_eq!(line, 5);
                assert!(column > 10, "{column}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_document("{"), Err(DocumentError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_document(r#"{"format_version":"1","kind":"poem","payload":{}}"#),
            Err(DocumentError::Parse { .. })
        ));
    }

    #[test]
    fn version_is_checked() {
        let text = r#"{"format_version":"2","kind":"graph","payload":{}}"#;
        assert!(matches!(
            parse_document(text),
            Err(DocumentError::Validation { location, .. }) if location == "format_version"
        ));
    }

    #[test]
    fn round_trips() {
        let lp = Arc::new(fixtures::lp());
        let docs = vec![
            Document::Graph(fixtures::e2()),
            Document::Graph(fixtures::empty()),
            Document::Rule(library::add_loop("α")),
            Document::Rule(library::delete_node()),
            Document::Morphism(Morphism::identity(&lp)),
            Document::Scenario(Scenario {
                host: Arc::new(fixtures::n1()),
                rules: vec![library::add_loop("α"), library::add_loop("β")],
                matches: vec![
                    MatchChoice::Index(0),
                    MatchChoice::Explicit {
                        nodes: [("a".to_string(), "a".to_string())].into(),
                        edges: BTreeMap::new(),
                    },
                ],
                injective_matches: true,
            }),
        ];
        for d in docs {
            let text = serialize(&d);
            assert_eq!(parse_document(&text).unwrap(), d);
            assert_eq!(canonical(&text).unwrap(), text);
        }
    }

    #[test]
    fn scenario_matches_resolve() {
        let s = Scenario {
            host: Arc::new(fixtures::d2()),
            rules: vec![library::delete_node()],
            matches: vec![MatchChoice::Index(1)],
            injective_matches: true,
        };
        assert_eq!(s.resolve_all().unwrap()[0].node("a"), "v");
        let bad = Scenario {
            matches: vec![MatchChoice::Index(2)],
            ..s
        };
        assert!(bad.resolve_all().is_err());
    }

    #[test]
    fn dot_output() {
        assert_eq!(export_dot(&fixtures::empty()), "digraph G {\n}\n");
        assert_eq!(
            export_dot(&fixtures::lp()),
            "digraph G {\n  \"u\" [label=\"u:A\"];\n  \"u\" -> \"u\" [label=\"l:x\"];\n}\n"
        );
        let g = Graph::new().with_node("q\"", "a\\b");
        assert_eq!(export_dot(&g), "digraph G {\n  \"q\\\"\" [label=\"q\\\":a\\\\b\"];\n}\n");
    }
}
