//! Seeded random instances: graphs, morphisms, rules, hosts and transformations.

use std::collections::BTreeMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::GenParams;
use crate::category::DanglingPolicy;
use crate::graph::{for_each_morphism, Graph, GraphRef, MatchMode, Morphism};
use crate::parallelism::{check_parallel_independence, check_sequential_independence, ParallelIndependenceWitness, SequentialIndependenceWitness};
use crate::rewriting::{coherence_witness, derive_with, CoherenceWitness, DirectTransformation, WeakSpan};

pub type Rng8 = ChaCha8Rng;

/// How many candidates rejection sampling looks at before giving up on an instance.
pub const ATTEMPTS: usize = 200;

fn label(p: &GenParams, rng: &mut Rng8) -> String {
    p.label_alphabet.choose(rng).cloned().unwrap_or_else(|| "a".into())
}

/// Random graph with at most `max_nodes` nodes and `max_edges` edges.
pub fn gen_graph(p: &GenParams, rng: &mut Rng8) -> Graph {
    gen_graph_bounded(p, p.max_nodes, p.max_edges, rng)
}

fn gen_graph_bounded(p: &GenParams, max_nodes: usize, max_edges: usize, rng: &mut Rng8) -> Graph {
    let mut g = Graph::new();
    let n = rng.gen_range(0..=max_nodes);
    for i in 0..n {
        g.add_node(format!("n{i}"), label(p, rng)).unwrap();
    }
    if n > 0 {
        let m = rng.gen_range(0..=max_edges);
        for i in 0..m {
            let s = rng.gen_range(0..n);
            let t = rng.gen_range(0..n);
            g.add_edge(format!("e{i}"), format!("n{s}"), format!("n{t}"), label(p, rng)).unwrap();
        }
    }
    g
}

/// A random morphism into `target` from a freshly generated graph. With
/// `mono`, distinct items get distinct images.
pub fn gen_morphism_into(target: &GraphRef, mono: bool, p: &GenParams, rng: &mut Rng8) -> Morphism {
    let mut free_nodes: Vec<&str> = target.node_ids().collect();
    let mut free_edges: Vec<&str> = target.edge_ids().collect();
    free_nodes.shuffle(rng);
    free_edges.shuffle(rng);
    let mut dom = Graph::new();
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    let n = rng.gen_range(0..=p.max_nodes.min(target.node_count() * 2));
    for i in 0..n {
        let image = if mono {
            match free_nodes.pop() {
                Some(y) => y,
                None => break,
            }
        } else {
            match free_nodes.choose(rng) {
                Some(y) => *y,
                None => break,
            }
        };
        let id = format!("n{i}");
        dom.add_node(&id, target.node_label(image).unwrap()).unwrap();
        nodes.insert(id, image.to_string());
    }
    let m = rng.gen_range(0..=p.max_edges);
    for i in 0..m {
        let image = if mono {
            match free_edges.pop() {
                Some(y) => y,
                None => break,
            }
        } else {
            match free_edges.choose(rng) {
                Some(y) => *y,
                None => break,
            }
        };
        let e = target.edge(image).unwrap();
        let over = |end: &str| -> Vec<String> { nodes.iter().filter(|(_, y)| y.as_str() == end).map(|(x, _)| x.clone()).collect() };
        let (srcs, tgts) = (over(&e.src), over(&e.tgt));
        let (Some(s), Some(t)) = (srcs.choose(rng), tgts.choose(rng)) else {
            continue;
        };
        let id = format!("e{i}");
        dom.add_edge(&id, s.clone(), t.clone(), e.label.clone()).unwrap();
        edges.insert(id, image.to_string());
    }
    Morphism::new(Arc::new(dom), target.clone(), nodes, edges).expect("generated morphism")
}

/// A random morphism out of `source` into a freshly generated graph. Without
/// `mono`, items may be folded together.
pub fn gen_morphism_from(source: &GraphRef, mono: bool, p: &GenParams, rng: &mut Rng8) -> Morphism {
    let mut cod = Graph::new();
    let mut nodes = BTreeMap::new();
    let mut fresh = 0;
    for (x, lx) in source.nodes() {
        let same_label: Vec<String> = cod.nodes().filter(|(_, l)| *l == lx).map(|(y, _)| y.to_string()).collect();
        let image = match same_label.choose(rng) {
            Some(y) if !mono && rng.gen_bool(0.3) => y.clone(),
            _ => {
                let id = format!("m{fresh}");
                fresh += 1;
                cod.add_node(&id, lx).unwrap();
                id
            }
        };
        nodes.insert(x.to_string(), image);
    }
    let mut edges = BTreeMap::new();
    let mut fresh_edges = 0;
    for (x, e) in source.edges() {
        let (s, t) = (&nodes[&e.src], &nodes[&e.tgt]);
        let parallel: Vec<String> = cod
            .edges()
            .filter(|(_, f)| &f.src == s && &f.tgt == t && f.label == e.label)
            .map(|(y, _)| y.to_string())
            .collect();
        let image = match parallel.choose(rng) {
            Some(y) if !mono && rng.gen_bool(0.5) => y.clone(),
            _ => {
                let id = format!("f{fresh_edges}");
                fresh_edges += 1;
                cod.add_edge(&id, s.clone(), t.clone(), e.label.clone()).unwrap();
                id
            }
        };
        edges.insert(x.to_string(), image);
    }
    add_extras(&mut cod, p, rng);
    Morphism::new(source.clone(), Arc::new(cod), nodes, edges).expect("generated morphism")
}

/// Adds random nodes `h*` and edges `k*` while staying within the bounds.
fn add_extras(g: &mut Graph, p: &GenParams, rng: &mut Rng8) {
    let fresh = |taken: &dyn Fn(&str) -> bool, prefix: char, next: &mut usize| loop {
        let id = format!("{prefix}{next}");
        *next += 1;
        if !taken(&id) {
            return id;
        }
    };
    let mut next = 0;
    let room = p.max_nodes.saturating_sub(g.node_count());
    for _ in 0..rng.gen_range(0..=room) {
        let id = fresh(&|x| g.has_node(x), 'h', &mut next);
        g.add_node(id, label(p, rng)).unwrap();
    }
    let ids: Vec<String> = g.node_ids().map(str::to_string).collect();
    if ids.is_empty() {
        return;
    }
    let mut next = 0;
    let room = p.max_edges.saturating_sub(g.edge_count());
    for _ in 0..rng.gen_range(0..=room) {
        let s = ids.choose(rng).unwrap().clone();
        let t = ids.choose(rng).unwrap().clone();
        let id = fresh(&|x| g.has_edge(x), 'k', &mut next);
        g.add_edge(id, s, t, label(p, rng)).unwrap();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Deleted,
    Weak,
    Preserved,
    Added,
}

const CLASSES: [Class; 4] = [Class::Deleted, Class::Weak, Class::Preserved, Class::Added];

impl Class {
    fn in_lhs(self) -> bool {
        self != Class::Added
    }
    fn in_context(self) -> bool {
        matches!(self, Class::Weak | Class::Preserved)
    }
    fn in_interface(self) -> bool {
        self == Class::Preserved
    }
    fn in_rhs(self) -> bool {
        matches!(self, Class::Preserved | Class::Added)
    }
    /// Which node classes may carry an edge of this class.
    fn endpoint_ok(self, node: Class) -> bool {
        match self {
            Class::Deleted => node.in_lhs(),
            Class::Weak => node.in_context(),
            Class::Preserved => node.in_interface(),
            Class::Added => node.in_rhs(),
        }
    }
}

/// A random rule whose legs are inclusions `K ⊆ L`, `I ⊆ K`, `I ⊆ R`. Each
/// item is deleted (in `L` only), weakly kept (in `K` but not `I`), kept (in
/// `I`) or added (in `R` only), with odds given by `p.rule_shape`.
pub fn gen_rule(p: &GenParams, rng: &mut Rng8) -> WeakSpan {
    gen_rule_bounded(p, p.rule_nodes(), p.rule_edges(), "rule", rng)
}

pub(crate) fn gen_rule_bounded(p: &GenParams, max_nodes: usize, max_edges: usize, name: &str, rng: &mut Rng8) -> WeakSpan {
    let weights = p.rule_shape.weights();
    let dist = WeightedIndex::new(weights).expect("rule shape has a positive weight");
    let node_count = rng.gen_range(0..=max_nodes);
    let node_classes: Vec<(String, Class, String)> = (0..node_count)
        .map(|i| (format!("v{i}"), CLASSES[dist.sample(rng)], label(p, rng)))
        .collect();
    let mut edge_classes = Vec::new();
    for i in 0..rng.gen_range(0..=max_edges) {
        let class = CLASSES[dist.sample(rng)];
        let ends: Vec<&(String, Class, String)> = node_classes.iter().filter(|(_, c, _)| class.endpoint_ok(*c)).collect();
        if ends.is_empty() {
            continue;
        }
        let s = ends.choose(rng).unwrap().0.clone();
        let t = ends.choose(rng).unwrap().0.clone();
        edge_classes.push((format!("e{i}"), class, s, t, label(p, rng)));
    }
    let part = |keep: fn(Class) -> bool| -> GraphRef {
        let mut g = Graph::new();
        for (id, c, l) in &node_classes {
            if keep(*c) {
                g.add_node(id, l).unwrap();
            }
        }
        for (id, c, s, t, l) in &edge_classes {
            if keep(*c) {
                g.add_edge(id, s, t, l).unwrap();
            }
        }
        Arc::new(g)
    };
    let (lhs, context, interface, rhs) = (part(Class::in_lhs), part(Class::in_context), part(Class::in_interface), part(Class::in_rhs));
    WeakSpan::new(
        name,
        Morphism::inclusion(&context, &lhs).unwrap(),
        Morphism::inclusion(&interface, &context).unwrap(),
        Morphism::inclusion(&interface, &rhs).unwrap(),
    )
    .expect("generated rule")
}

/// Per class, whether a rule has at least one item (node or edge) of it, in
/// the order deleted, weakly kept, kept, added.
pub fn rule_class_presence(rule: &WeakSpan) -> [bool; 4] {
    let l = rule.lhs();
    let k = rule.context();
    let i = rule.interface();
    let r = rule.rhs();
    let deleted = l.node_count() > k.node_count() || l.edge_count() > k.edge_count();
    let weak = k.node_count() > i.node_count() || k.edge_count() > i.edge_count();
    let kept = !i.is_empty();
    let added = r.node_count() > i.node_count() || r.edge_count() > i.edge_count();
    [deleted, weak, kept, added]
}

/// Disjoint union of the given graphs, with the ids of part `a` prefixed by `a.`.
pub fn disjoint_union(parts: &[&Graph]) -> Graph {
    let mut g = Graph::new();
    for (a, part) in parts.iter().enumerate() {
        for (id, l) in part.nodes() {
            g.add_node(format!("{a}.{id}"), l).unwrap();
        }
        for (id, e) in part.edges() {
            g.add_edge(format!("{a}.{id}"), format!("{a}.{}", e.src), format!("{a}.{}", e.tgt), e.label.clone())
                .unwrap();
        }
    }
    g
}

/// A host containing a copy of each given left-hand side plus random extras.
pub fn gen_host(lhss: &[&Graph], p: &GenParams, rng: &mut Rng8) -> GraphRef {
    let mut g = disjoint_union(lhss);
    add_extras(&mut g, p, rng);
    Arc::new(g)
}

/// A uniformly chosen match among (at most 256 of) the canonically first ones.
pub fn random_match(rule: &WeakSpan, host: &GraphRef, p: &GenParams, rng: &mut Rng8) -> Option<Morphism> {
    let mode = if p.injective_matches { MatchMode::Injective } else { MatchMode::Any };
    let mut found = Vec::new();
    for_each_morphism(rule.lhs(), host, mode, |m| {
        found.push(m);
        if found.len() == 256 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found.choose(rng).cloned()
}

/// `derive`, honouring the mutant switch of the parameters.
pub fn derive_for(p: &GenParams, rule: &WeakSpan, m: &Morphism) -> crate::Result<DirectTransformation> {
    let policy = if p.mutant { DanglingPolicy::DropEdges } else { DanglingPolicy::Reject };
    derive_with(rule, m, policy)
}

/// A random weak DPO step.
pub fn gen_derivation(p: &GenParams, rng: &mut Rng8) -> Option<DirectTransformation> {
    for _ in 0..ATTEMPTS {
        let rule = gen_rule(p, rng);
        let host = gen_host(&[rule.lhs()], p, rng);
        let Some(m) = random_match(&rule, &host, p, rng) else { continue };
        if let Ok(t) = derive_for(p, &rule, &m) {
            return Some(t);
        }
    }
    None
}

/// Two steps on one host that pass the parallel independence check.
pub fn gen_parallel_pair(
    p: &GenParams,
    rng: &mut Rng8,
) -> Option<(DirectTransformation, DirectTransformation, ParallelIndependenceWitness)> {
    let half = (p.rule_nodes(), p.rule_edges());
    for _ in 0..ATTEMPTS {
        let r1 = gen_rule_bounded(p, half.0, half.1, "first", rng);
        let r2 = gen_rule_bounded(p, half.0, half.1, "second", rng);
        let host = gen_host(&[r1.lhs(), r2.lhs()], p, rng);
        let (Some(m1), Some(m2)) = (random_match(&r1, &host, p, rng), random_match(&r2, &host, p, rng)) else {
            continue;
        };
        let (Ok(t1), Ok(t2)) = (derive_for(p, &r1, &m1), derive_for(p, &r2, &m2)) else {
            continue;
        };
        if let Ok(w) = check_parallel_independence(&t1, &t2) {
            return Some((t1, t2, w));
        }
    }
    None
}

/// A step followed by a step on its result, passing the sequential independence check.
pub fn gen_sequential_pair(
    p: &GenParams,
    rng: &mut Rng8,
) -> Option<(DirectTransformation, DirectTransformation, SequentialIndependenceWitness)> {
    let half = (p.rule_nodes(), p.rule_edges());
    for _ in 0..ATTEMPTS {
        let r1 = gen_rule_bounded(p, half.0, half.1, "first", rng);
        let r2 = gen_rule_bounded(p, half.0, half.1, "second", rng);
        let host = gen_host(&[r1.lhs(), r2.lhs()], p, rng);
        let Some(m1) = random_match(&r1, &host, p, rng) else { continue };
        let Ok(t1) = derive_for(p, &r1, &m1) else { continue };
        let Some(m2) = random_match(&r2, t1.result(), p, rng) else { continue };
        let Ok(t2) = derive_for(p, &r2, &m2) else { continue };
        if let Ok(w) = check_sequential_independence(&t1, &t2) {
            return Some((t1, t2, w));
        }
    }
    None
}

/// `count` parallel coherent steps on one host.
pub fn gen_coherent_family(count: usize, p: &GenParams, rng: &mut Rng8) -> Option<CoherenceWitness> {
    let nodes = (p.max_nodes / count.max(1)).clamp(1, 3);
    let edges = (p.max_edges / count.max(1)).clamp(1, 3);
    'attempt: for _ in 0..ATTEMPTS {
        let rules: Vec<WeakSpan> = (0..count).map(|a| gen_rule_bounded(p, nodes, edges, &format!("rule{a}"), rng)).collect();
        let lhss: Vec<&Graph> = rules.iter().map(|r| r.lhs().as_ref()).collect();
        let host = gen_host(&lhss, p, rng);
        let mut gammas = Vec::with_capacity(count);
        for rule in &rules {
            let Some(m) = random_match(rule, &host, p, rng) else { continue 'attempt };
            let Ok(t) = derive_for(p, rule, &m) else { continue 'attempt };
            gammas.push(t);
        }
        if let Ok(w) = coherence_witness(&gammas) {
            return Some(w);
        }
    }
    None
}

/// A host other than `g` into which `rule` applies: `g` with random extras,
/// or failing that `g` next to a disjoint random graph.
pub fn gen_other_application(
    rule: &WeakSpan,
    g: &GraphRef,
    p: &GenParams,
    rng: &mut Rng8,
) -> Option<DirectTransformation> {
    let wide = GenParams {
        max_nodes: g.node_count() + 2,
        max_edges: g.edge_count() + 3,
        ..p.clone()
    };
    for _ in 0..ATTEMPTS / 10 {
        let mut bigger = (**g).clone();
        add_extras(&mut bigger, &wide, rng);
        if bigger == **g {
            continue;
        }
        let bigger = Arc::new(bigger);
        let Some(m) = random_match(rule, &bigger, p, rng) else { continue };
        if let Ok(t) = derive_for(p, rule, &m) {
            return Some(t);
        }
    }
    let mut extra = gen_graph(p, rng);
    if extra.is_empty() {
        extra.add_node("n0", label(p, rng)).unwrap();
    }
    let host = Arc::new(disjoint_union(&[g, &extra]));
    let nodes = g.node_ids().map(|x| (x.to_string(), format!("0.{x}"))).collect();
    let edges = g.edge_ids().map(|x| (x.to_string(), format!("0.{x}"))).collect();
    let m = Morphism::new(rule.lhs().clone(), host, nodes, edges).ok()?;
    derive_for(p, rule, &m).ok()
}
