use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::{Graph, GraphRef};
use crate::error::{Error, Result};

/// A graph homomorphism: total on the domain, preserving sources, targets and labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: GraphRef,
    cod: GraphRef,
    nodes: BTreeMap<String, String>,
    edges: BTreeMap<String, String>,
}

impl Morphism {
    pub fn new(
        dom: GraphRef,
        cod: GraphRef,
        nodes: BTreeMap<String, String>,
        edges: BTreeMap<String, String>,
    ) -> Result<Self> {
        let m = Morphism {
            dom,
            cod,
            nodes,
            edges,
        };
        m.check()?;
        Ok(m)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidMorphism(msg));
        if self.nodes.len() != self.dom.node_count() || self.edges.len() != self.dom.edge_count() {
            for id in self.dom.node_ids() {
                if !self.nodes.contains_key(id) {
                    return bad(format!("node `{id}` has no image"));
                }
            }
            for id in self.dom.edge_ids() {
                if !self.edges.contains_key(id) {
                    return bad(format!("edge `{id}` has no image"));
                }
            }
            return bad("map mentions items outside the domain".into());
        }
        for (x, y) in &self.nodes {
            let Some(lx) = self.dom.node_label(x) else {
                return bad(format!("node `{x}` is not in the domain"));
            };
            match self.cod.node_label(y) {
                None => return bad(format!("image `{y}` of node `{x}` is not in the codomain")),
                Some(ly) if ly != lx => {
                    return bad(format!("node `{x}` ({lx}) mapped to `{y}` ({ly})"))
                }
                _ => {}
            }
        }
        for (x, y) in &self.edges {
            let Some(ex) = self.dom.edge(x) else {
                return bad(format!("edge `{x}` is not in the domain"));
            };
            let Some(ey) = self.cod.edge(y) else {
                return bad(format!("image `{y}` of edge `{x}` is not in the codomain"));
            };
            if ex.label != ey.label {
                return bad(format!("edge `{x}` ({}) mapped to `{y}` ({})", ex.label, ey.label));
            }
            if self.nodes[&ex.src] != ey.src || self.nodes[&ex.tgt] != ey.tgt {
                return bad(format!("edge `{x}` mapped to `{y}` breaks incidence"));
            }
        }
        Ok(())
    }

    /// Identity on `g`.
    pub fn identity(g: &GraphRef) -> Self {
        Morphism {
            dom: g.clone(),
            cod: g.clone(),
            nodes: g.node_ids().map(|n| (n.to_string(), n.to_string())).collect(),
            edges: g.edge_ids().map(|e| (e.to_string(), e.to_string())).collect(),
        }
    }

    /// Inclusion of a graph whose ids all occur, with the same incidence, in `sup`.
    pub fn inclusion(sub: &GraphRef, sup: &GraphRef) -> Result<Self> {
        Morphism::new(
            sub.clone(),
            sup.clone(),
            sub.node_ids().map(|n| (n.to_string(), n.to_string())).collect(),
            sub.edge_ids().map(|e| (e.to_string(), e.to_string())).collect(),
        )
    }

    /// `self ∘ g`, i.e. first `g` then `self`.
    pub fn after(&self, g: &Morphism) -> Result<Morphism> {
        if g.cod != self.dom {
            return Err(Error::DomainMismatch(
                "codomain of the inner morphism differs from the domain of the outer one".into(),
            ));
        }
        Ok(Morphism {
            dom: g.dom.clone(),
            cod: self.cod.clone(),
            nodes: g
                .nodes
                .iter()
                .map(|(x, y)| (x.clone(), self.nodes[y].clone()))
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|(x, y)| (x.clone(), self.edges[y].clone()))
                .collect(),
        })
    }

    pub fn dom(&self) -> &Graph {
        &self.dom
    }

    pub fn cod(&self) -> &Graph {
        &self.cod
    }

    pub fn dom_ref(&self) -> &GraphRef {
        &self.dom
    }

    pub fn cod_ref(&self) -> &GraphRef {
        &self.cod
    }

    pub fn node_map(&self) -> &BTreeMap<String, String> {
        &self.nodes
    }

    pub fn edge_map(&self) -> &BTreeMap<String, String> {
        &self.edges
    }

    /// Image of a domain node. Panics if `x` is not in the domain.
    pub fn node(&self, x: &str) -> &str {
        &self.nodes[x]
    }

    /// Image of a domain edge. Panics if `x` is not in the domain.
    pub fn edge(&self, x: &str) -> &str {
        &self.edges[x]
    }

    pub fn is_injective(&self) -> bool {
        let n: BTreeSet<_> = self.nodes.values().collect();
        let e: BTreeSet<_> = self.edges.values().collect();
        n.len() == self.nodes.len() && e.len() == self.edges.len()
    }

    pub fn is_surjective(&self) -> bool {
        let n: BTreeSet<_> = self.nodes.values().collect();
        let e: BTreeSet<_> = self.edges.values().collect();
        n.len() == self.cod.node_count() && e.len() == self.cod.edge_count()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijective morphism.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_isomorphism() {
            return None;
        }
        Some(Morphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            nodes: self.nodes.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            edges: self.edges.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        })
    }

    /// Preimage of a codomain node, when unique among domain nodes.
    pub fn node_preimage(&self, y: &str) -> Option<&str> {
        let mut it = self.nodes.iter().filter(|(_, v)| *v == y).map(|(k, _)| k.as_str());
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn edge_preimage(&self, y: &str) -> Option<&str> {
        let mut it = self.edges.iter().filter(|(_, v)| *v == y).map(|(k, _)| k.as_str());
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    /// Same maps, reinterpreted with a structurally equal codomain.
    pub(crate) fn with_cod(&self, cod: GraphRef) -> Morphism {
        debug_assert_eq!(*self.cod, *cod);
        Morphism {
            dom: self.dom.clone(),
            cod,
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
        }
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for (x, y) in self.nodes.iter().chain(self.edges.iter()) {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{x}↦{y}")?;
        }
        f.write_str("]")
    }
}

/// `f ∘ g`: apply `g` first. Fails unless `cod(g) = dom(f)`.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    f.after(g)
}

pub fn identity(g: &Graph) -> Morphism {
    Morphism::identity(&Arc::new(g.clone()))
}

/// Monomorphisms in this category are exactly the componentwise injective maps.
pub fn is_monomorphism(f: &Morphism) -> bool {
    f.is_injective()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn identity_of_empty_is_empty() {
        let id = identity(&empty());
        assert!(id.node_map().is_empty() && id.edge_map().is_empty());
    }

    #[test]
    fn identity_of_n1_fixes_a() {
        assert_eq!(identity(&n1()).node("a"), "a");
        assert!(is_monomorphism(&identity(&e2())));
    }

    #[test]
    fn identity_laws() {
        let n1 = n1().into_ref();
        let d2 = d2().into_ref();
        let f = Morphism::new(n1.clone(), d2.clone(), map(&[("a", "v")]), map(&[])).unwrap();
        assert_eq!(compose(&Morphism::identity(&d2), &f).unwrap(), f);
        assert_eq!(compose(&f, &Morphism::identity(&n1)).unwrap(), f);
    }

    #[test]
    fn compose_checks_endpoints() {
        let f = identity(&n1());
        let g = identity(&d2());
        assert!(matches!(compose(&f, &g), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn constant_map_is_not_mono() {
        let n1 = Graph::new().with_node("a", "A").into_ref();
        let c = Morphism::new(d2().into_ref(), n1, map(&[("u", "a"), ("v", "a")]), map(&[])).unwrap();
        assert!(!is_monomorphism(&c));
        let inc = Morphism::new(
            Graph::new().with_node("u", "A").into_ref(),
            d2().into_ref(),
            map(&[("u", "u")]),
            map(&[]),
        )
        .unwrap();
        assert!(is_monomorphism(&inc));
    }

    #[test]
    fn rejects_label_and_incidence_violations() {
        let b = Graph::new().with_node("b", "B").into_ref();
        assert!(Morphism::new(n1().into_ref(), b, map(&[("a", "b")]), map(&[])).is_err());
        let e2 = e2().into_ref();
        let flipped = Morphism::new(
            e2.clone(),
            e2,
            map(&[("u", "v"), ("v", "u")]),
            map(&[("e", "e")]),
        );
        assert!(flipped.is_err());
    }

    #[test]
    fn partial_map_rejected() {
        let err = Morphism::new(d2().into_ref(), d2().into_ref(), map(&[("u", "u")]), map(&[]))
            .unwrap_err();
        assert!(err.to_string().contains("`v` has no image"));
    }
}
