use std::collections::{BTreeMap, HashMap};
use std::ops::ControlFlow;
use std::sync::Arc;

use super::{Graph, GraphRef, Morphism};

/// Which homomorphisms a search should produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    Any,
    Injective,
    Bijective,
}

struct Indexed<'g> {
    nodes: Vec<&'g str>,
    labels: Vec<&'g str>,
    edges: Vec<(&'g str, usize, usize, &'g str)>,
    /// (src, tgt) -> edge indices, in id order
    between: HashMap<(usize, usize), Vec<usize>>,
    /// (src, tgt, label) -> multiplicity
    multiplicity: HashMap<(usize, usize, &'g str), usize>,
    /// (out-degree, in-degree) per node, used to prune bijective search
    signature: Vec<(usize, usize)>,
}

impl<'g> Indexed<'g> {
    fn new(g: &'g Graph) -> Self {
        let nodes: Vec<&str> = g.node_ids().collect();
        let labels = g.nodes().map(|(_, l)| l).collect();
        let pos: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut signature = vec![(0, 0); nodes.len()];
        let mut between: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut multiplicity = HashMap::new();
        let edges: Vec<_> = g
            .edges()
            .map(|(id, e)| (id, pos[e.src.as_str()], pos[e.tgt.as_str()], e.label.as_str()))
            .collect();
        for (i, &(_, s, t, l)) in edges.iter().enumerate() {
            between.entry((s, t)).or_default().push(i);
            *multiplicity.entry((s, t, l)).or_insert(0) += 1;
            signature[s].0 += 1;
            signature[t].1 += 1;
        }
        Indexed {
            nodes,
            labels,
            edges,
            between,
            multiplicity,
            signature,
        }
    }
}

type Visitor<'v, 'a> = dyn FnMut(&Indexed<'a>, &Indexed<'a>, &[usize], &[usize]) -> ControlFlow<()> + 'v;

struct Search<'a> {
    a: Indexed<'a>,
    b: Indexed<'a>,
    mode: MatchMode,
    /// For each domain node index i: edge groups (src, tgt, label, count) whose
    /// endpoints are both ≤ i with max endpoint = i.
    checks: Vec<Vec<(usize, usize, &'a str, usize)>>,
    node_img: Vec<usize>,
    node_used: Vec<bool>,
    edge_img: Vec<usize>,
    edge_used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Graph, b: &'a Graph, mode: MatchMode) -> Self {
        let a = Indexed::new(a);
        let b = Indexed::new(b);
        let mut checks = vec![Vec::new(); a.nodes.len()];
        let mut groups: Vec<_> = a.multiplicity.iter().map(|(&(s, t, l), &c)| (s, t, l, c)).collect();
        groups.sort();
        for g in groups {
            checks[g.0.max(g.1)].push(g);
        }
        let (na, nb, ea, eb) = (a.nodes.len(), b.nodes.len(), a.edges.len(), b.edges.len());
        Search {
            a,
            b,
            mode,
            checks,
            node_img: vec![usize::MAX; na],
            node_used: vec![false; nb],
            edge_img: vec![usize::MAX; ea],
            edge_used: vec![false; eb],
        }
    }

    fn injective(&self) -> bool {
        self.mode != MatchMode::Any
    }

    fn run(&mut self, visit: &mut Visitor<'_, 'a>) -> ControlFlow<()> {
        if self.mode == MatchMode::Bijective
            && (self.a.nodes.len() != self.b.nodes.len() || self.a.edges.len() != self.b.edges.len())
        {
            return ControlFlow::Continue(());
        }
        if self.injective()
            && (self.a.nodes.len() > self.b.nodes.len() || self.a.edges.len() > self.b.edges.len())
        {
            return ControlFlow::Continue(());
        }
        self.assign_node(0, visit)
    }

    fn node_ok(&self, i: usize, y: usize) -> bool {
        if self.a.labels[i] != self.b.labels[y] {
            return false;
        }
        if self.injective() && self.node_used[y] {
            return false;
        }
        if self.mode == MatchMode::Bijective && self.a.signature[i] != self.b.signature[y] {
            return false;
        }
        self.checks[i].iter().all(|&(s, t, l, count)| {
            let (sy, ty) = (self.node_img[s], self.node_img[t]);
            let (sy, ty) = (if s == i { y } else { sy }, if t == i { y } else { ty });
            let have = self.b.multiplicity.get(&(sy, ty, l)).copied().unwrap_or(0);
            match self.mode {
                MatchMode::Any => have > 0,
                MatchMode::Injective => have >= count,
                MatchMode::Bijective => have == count,
            }
        })
    }

    fn assign_node(
        &mut self,
        i: usize,
        visit: &mut Visitor<'_, 'a>,
    ) -> ControlFlow<()> {
        if i == self.a.nodes.len() {
            return self.assign_edge(0, visit);
        }
        for y in 0..self.b.nodes.len() {
            if !self.node_ok(i, y) {
                continue;
            }
            self.node_img[i] = y;
            self.node_used[y] = true;
            let flow = self.assign_node(i + 1, visit);
            self.node_used[y] = false;
            flow?;
        }
        self.node_img[i] = usize::MAX;
        ControlFlow::Continue(())
    }

    fn assign_edge(
        &mut self,
        j: usize,
        visit: &mut Visitor<'_, 'a>,
    ) -> ControlFlow<()> {
        if j == self.a.edges.len() {
            return visit(&self.a, &self.b, &self.node_img, &self.edge_img);
        }
        let (_, s, t, label) = self.a.edges[j];
        let key = (self.node_img[s], self.node_img[t]);
        let candidates = match self.b.between.get(&key) {
            Some(c) => c.clone(),
            None => return ControlFlow::Continue(()),
        };
        for y in candidates {
            if self.b.edges[y].3 != label || (self.injective() && self.edge_used[y]) {
                continue;
            }
            self.edge_img[j] = y;
            self.edge_used[y] = true;
            let flow = self.assign_edge(j + 1, visit);
            self.edge_used[y] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn build(
    a: &GraphRef,
    b: &GraphRef,
    ia: &Indexed<'_>,
    ib: &Indexed<'_>,
    nodes: &[usize],
    edges: &[usize],
) -> Morphism {
    let node_map: BTreeMap<String, String> = ia
        .nodes
        .iter()
        .zip(nodes)
        .map(|(x, &y)| (x.to_string(), ib.nodes[y].to_string()))
        .collect();
    let edge_map: BTreeMap<String, String> = ia
        .edges
        .iter()
        .zip(edges)
        .map(|(x, &y)| (x.0.to_string(), ib.edges[y].0.to_string()))
        .collect();
    Morphism::new(a.clone(), b.clone(), node_map, edge_map).expect("search yields homomorphisms")
}

/// Visits every morphism `a → b` admitted by `mode`, in canonical order: node
/// images are chosen in domain-id order, each ranging over codomain ids in
/// order, then edge images likewise. Stops early on `ControlFlow::Break`.
pub fn for_each_morphism(
    a: &GraphRef,
    b: &GraphRef,
    mode: MatchMode,
    mut visit: impl FnMut(Morphism) -> ControlFlow<()>,
) {
    let mut search = Search::new(a, b, mode);
    let _ = search.run(&mut |ia, ib, n, e| visit(build(a, b, ia, ib, n, e)));
}

/// All morphisms `a → b` (injective ones only if `mono_only`), canonically ordered.
pub fn enumerate_morphisms(a: &Graph, b: &Graph, mono_only: bool) -> Vec<Morphism> {
    let (a, b) = (Arc::new(a.clone()), Arc::new(b.clone()));
    let mode = if mono_only {
        MatchMode::Injective
    } else {
        MatchMode::Any
    };
    let mut out = Vec::new();
    for_each_morphism(&a, &b, mode, |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// The first label-preserving bijection `a → b` in canonical order, if any.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<Morphism> {
    find_isomorphism_ref(&Arc::new(a.clone()), &Arc::new(b.clone()))
}

pub(crate) fn find_isomorphism_ref(a: &GraphRef, b: &GraphRef) -> Option<Morphism> {
    let mut found = None;
    for_each_morphism(a, b, MatchMode::Bijective, |m| {
        found = Some(m);
        ControlFlow::Break(())
    });
    found
}
