//! Finite labeled directed multigraphs and structure-preserving maps between them.
//!
//! Node and edge ids are opaque strings kept in lexicographic order, which makes
//! every traversal (and therefore every construction built on top of it)
//! reproducible.

mod morphism;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use morphism::{compose, identity, is_monomorphism, Morphism};
pub use search::{enumerate_morphisms, find_isomorphism, for_each_morphism, MatchMode};

/// Shared handle to an immutable graph. Morphisms keep their endpoints behind one.
pub type GraphRef = Arc<Graph>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: String,
    pub tgt: String,
    pub label: String,
}

/// A well-formed graph: ids are unique and every edge endpoint exists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    nodes: BTreeMap<String, String>,
    edges: BTreeMap<String, Edge>,
}

/// Node declaration as it appears in documents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDecl {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDecl {
    pub id: String,
    pub src: String,
    pub tgt: String,
    pub label: String,
}

/// Unchecked node and edge lists, e.g. straight out of a parser.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    #[serde(default)]
    pub nodes: Vec<NodeDecl>,
    #[serde(default)]
    pub edges: Vec<EdgeDecl>,
}

/// First invariant violation found in a [`RawGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub element: String,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}", self.element, self.reason)
    }
}

/// Checks id uniqueness and edge endpoints, reporting the first offender in
/// declaration order.
pub fn validate_graph(raw: &RawGraph) -> std::result::Result<(), Violation> {
    let mut seen = BTreeMap::new();
    for n in &raw.nodes {
        if seen.insert(n.id.as_str(), ()).is_some() {
            return Err(Violation {
                element: n.id.clone(),
                reason: "duplicate node id".into(),
            });
        }
    }
    let mut seen_edges = BTreeMap::new();
    for e in &raw.edges {
        if seen_edges.insert(e.id.as_str(), ()).is_some() {
            return Err(Violation {
                element: e.id.clone(),
                reason: "duplicate edge id".into(),
            });
        }
        if !seen.contains_key(e.src.as_str()) {
            return Err(Violation {
                element: e.id.clone(),
                reason: format!("source node `{}` does not exist", e.src),
            });
        }
        if !seen.contains_key(e.tgt.as_str()) {
            return Err(Violation {
                element: e.id.clone(),
                reason: format!("target node `{}` does not exist", e.tgt),
            });
        }
    }
    Ok(())
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_raw(raw: &RawGraph) -> Result<Self> {
        validate_graph(raw).map_err(|v| Error::InvalidGraph(v.to_string()))?;
        let nodes = raw
            .nodes
            .iter()
            .map(|n| (n.id.clone(), n.label.clone()))
            .collect();
        let edges = raw
            .edges
            .iter()
            .map(|e| {
                (
                    e.id.clone(),
                    Edge {
                        src: e.src.clone(),
                        tgt: e.tgt.clone(),
                        label: e.label.clone(),
                    },
                )
            })
            .collect();
        Ok(Graph { nodes, edges })
    }

    /// Canonical (id-sorted) declaration lists.
    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            nodes: self
                .nodes
                .iter()
                .map(|(id, label)| NodeDecl {
                    id: id.clone(),
                    label: label.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(id, e)| EdgeDecl {
                    id: id.clone(),
                    src: e.src.clone(),
                    tgt: e.tgt.clone(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn add_node(&mut self, id: impl Into<String>, label: impl Into<String>) -> Result<()> {
        let id = id.into();
        if self.nodes.contains_key(&id) {
            return Err(Error::InvalidGraph(format!("`{id}`: duplicate node id")));
        }
        self.nodes.insert(id, label.into());
        Ok(())
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        src: impl Into<String>,
        tgt: impl Into<String>,
        label: impl Into<String>,
    ) -> Result<()> {
        let id = id.into();
        let (src, tgt) = (src.into(), tgt.into());
        if self.edges.contains_key(&id) {
            return Err(Error::InvalidGraph(format!("`{id}`: duplicate edge id")));
        }
        for end in [&src, &tgt] {
            if !self.nodes.contains_key(end) {
                return Err(Error::InvalidGraph(format!(
                    "`{id}`: endpoint `{end}` does not exist"
                )));
            }
        }
        self.edges.insert(
            id,
            Edge {
                src,
                tgt,
                label: label.into(),
            },
        );
        Ok(())
    }

    /// Builder-style [`Graph::add_node`]; panics on a duplicate id.
    pub fn with_node(mut self, id: &str, label: &str) -> Self {
        self.add_node(id, label).expect("with_node");
        self
    }

    /// Builder-style [`Graph::add_edge`]; panics on invalid input.
    pub fn with_edge(mut self, id: &str, src: &str, tgt: &str, label: &str) -> Self {
        self.add_edge(id, src, tgt, label).expect("with_edge");
        self
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.nodes.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &Edge)> + '_ {
        self.edges.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn node_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.nodes.keys().map(String::as_str)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.edges.keys().map(String::as_str)
    }

    pub fn node_label(&self, id: &str) -> Option<&str> {
        self.nodes.get(id).map(String::as_str)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.get(id)
    }

    pub fn has_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn has_edge(&self, id: &str) -> bool {
        self.edges.contains_key(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    /// Edges with `node` as source or target, in id order.
    pub fn incident_edges<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.edges
            .iter()
            .filter(move |(_, e)| e.src == node || e.tgt == node)
            .map(|(id, _)| id.as_str())
    }

    pub fn into_ref(self) -> GraphRef {
        Arc::new(self)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (id, label) in self.nodes() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{id}:{label}")?;
        }
        for (id, e) in self.edges() {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{id}:{}->{}:{}", e.src, e.tgt, e.label)?;
        }
        f.write_str("}")
    }
}

/// Small named graphs shared by the examples and tests.
pub mod fixtures {
    use super::Graph;

    /// ∅
    pub fn empty() -> Graph {
        Graph::new()
    }

    /// One node `a`.
    pub fn n1() -> Graph {
        Graph::new().with_node("a", "A")
    }

    /// Two nodes `u`, `v`, no edges.
    pub fn d2() -> Graph {
        Graph::new().with_node("u", "A").with_node("v", "A")
    }

    /// `e: u → v`.
    pub fn e2() -> Graph {
        d2().with_edge("e", "u", "v", "x")
    }

    /// Node `u` with loop `l`.
    pub fn lp() -> Graph {
        Graph::new().with_node("u", "A").with_edge("l", "u", "u", "x")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(nodes: &[&str], edges: &[(&str, &str, &str)]) -> RawGraph {
        RawGraph {
            nodes: nodes
                .iter()
                .map(|n| NodeDecl {
                    id: n.to_string(),
                    label: "A".into(),
                })
                .collect(),
            edges: edges
                .iter()
                .map(|(id, s, t)| EdgeDecl {
                    id: id.to_string(),
                    src: s.to_string(),
                    tgt: t.to_string(),
                    label: "x".into(),
                })
                .collect(),
        }
    }

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate_graph(&RawGraph::default()).is_ok());
    }

    #[test]
    fn missing_source_names_the_edge() {
        let v = validate_graph(&raw(&["v"], &[("e", "u", "v")])).unwrap_err();
        assert_eq!(v.element, "e");
        assert!(v.reason.contains("source"));
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert_eq!(validate_graph(&raw(&["u", "u"], &[])).unwrap_err().element, "u");
        let v = validate_graph(&raw(&["u"], &[("e", "u", "u"), ("e", "u", "u")])).unwrap_err();
        assert_eq!(v.element, "e");
    }

    #[test]
    fn fixture_e2_round_trips_through_raw() {
        let g = fixtures::e2();
        assert!(validate_graph(&g.to_raw()).is_ok());
        assert_eq!(Graph::from_raw(&g.to_raw()).unwrap(), g);
    }

    #[test]
    fn add_edge_checks_endpoints() {
        let mut g = fixtures::n1();
        assert!(g.add_edge("e", "a", "zz", "x").is_err());
        assert!(g.add_edge("e", "a", "a", "x").is_ok());
        assert_eq!(g.incident_edges("a").collect::<Vec<_>>(), vec!["e"]);
    }
}
