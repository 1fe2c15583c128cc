//! Limits and colimits of graph diagrams: pushouts, pullbacks, pushout
//! complements, wide pullbacks of sinks, wide pushouts of sources, and the
//! mediating morphisms out of (into) them.
//!
//! Colimits are computed as a union-find quotient of the disjoint union of the
//! cocone objects. Each class keeps the id of its least member, members being
//! ordered by (position in the diagram, id); when two classes would end up with
//! the same id, the later one is suffixed with `~<position>`.
//!
//! Limits are computed as agreeing tuples; a tuple `(d1, …, dp)` is named
//! `(d1|…|dp)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, GluingFailure, ItemKind, Result};
use crate::graph::{Graph, GraphRef, Morphism};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutResult {
    pub apex: GraphRef,
    /// B → apex
    pub left_inj: Morphism,
    /// C → apex
    pub right_inj: Morphism,
    /// The span A → B, A → C this is a pushout of.
    pub span: (Morphism, Morphism),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackResult {
    pub apex: GraphRef,
    pub proj_left: Morphism,
    pub proj_right: Morphism,
    /// The cospan B → D ← C this is a pullback of.
    pub cospan: (Morphism, Morphism),
}

/// Limit `(C, e_1, …, e_p)` of a sink `(f_1, …, f_p, G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideLimit {
    pub apex: GraphRef,
    pub projections: Vec<Morphism>,
    pub sink: Vec<Morphism>,
}

/// One step of the inductive construction: `partial_apex` is a limit of the
/// sink with its first morphism dropped, and the full limit is the pullback of
/// `f_1` against `f_2 ∘ g_2`, whose second leg is `connector`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedLimitStep {
    pub partial_apex: GraphRef,
    pub partial_projections: Vec<Morphism>,
    pub connector: Morphism,
}

/// Colimit `(h_1, …, h_p, H)` of a source `(C, s_1, …, s_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideColimit {
    pub apex: GraphRef,
    pub injections: Vec<Morphism>,
    pub source: Vec<Morphism>,
}

/// Context `D` with `k: K → D` and the inclusion `f: D → G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushoutComplement {
    pub k: Morphism,
    pub f: Morphism,
}

impl PushoutComplement {
    pub fn context(&self) -> &GraphRef {
        self.f.dom_ref()
    }
}

fn fresh_name(taken: &mut BTreeSet<String>, id: &str, side: usize) -> String {
    let mut name = id.to_string();
    let mut extra = 0;
    while taken.contains(&name) {
        name = format!("{id}~{side}{}", "~".repeat(extra));
        extra += 1;
    }
    taken.insert(name.clone());
    name
}

/// Quotient of the disjoint union of `parts` by the given node and edge
/// identifications; returns the apex and the quotient maps.
fn glue(
    parts: &[GraphRef],
    node_eqs: &[((usize, &str), (usize, &str))],
    edge_eqs: &[((usize, &str), (usize, &str))],
) -> (GraphRef, Vec<Morphism>) {
    let mut node_index: HashMap<(usize, &str), usize> = HashMap::new();
    let mut node_items = Vec::new();
    let mut edge_index: HashMap<(usize, &str), usize> = HashMap::new();
    let mut edge_items = Vec::new();
    for (side, g) in parts.iter().enumerate() {
        for n in g.node_ids() {
            node_index.insert((side, n), node_items.len());
            node_items.push((side, n));
        }
        for e in g.edge_ids() {
            edge_index.insert((side, e), edge_items.len());
            edge_items.push((side, e));
        }
    }

    let mut nodes_uf = UnionFind::new(node_items.len());
    for (x, y) in node_eqs {
        nodes_uf.union(node_index[x], node_index[y]);
    }
    let mut edges_uf = UnionFind::new(edge_items.len());
    for (x, y) in edge_eqs {
        edges_uf.union(edge_index[x], edge_index[y]);
    }

    let (node_class, node_classes) = nodes_uf.classes();
    let mut taken = BTreeSet::new();
    let mut node_names: Vec<Option<String>> = vec![None; node_classes];
    let mut apex = Graph::new();
    for (i, &(side, id)) in node_items.iter().enumerate() {
        let c = node_class[i];
        if node_names[c].is_none() {
            let name = fresh_name(&mut taken, id, side);
            let label = parts[side].node_label(id).unwrap();
            apex.add_node(name.clone(), label).unwrap();
            node_names[c] = Some(name);
        }
    }

    let (edge_class, edge_classes) = edges_uf.classes();
    let mut taken = BTreeSet::new();
    let mut edge_names: Vec<Option<String>> = vec![None; edge_classes];
    for (i, &(side, id)) in edge_items.iter().enumerate() {
        let c = edge_class[i];
        if edge_names[c].is_none() {
            let name = fresh_name(&mut taken, id, side);
            let e = parts[side].edge(id).unwrap();
            let src = node_names[node_class[node_index[&(side, e.src.as_str())]]].clone().unwrap();
            let tgt = node_names[node_class[node_index[&(side, e.tgt.as_str())]]].clone().unwrap();
            apex.add_edge(name.clone(), src, tgt, e.label.clone()).unwrap();
            edge_names[c] = Some(name);
        }
    }

    let apex = Arc::new(apex);
    let injections = parts
        .iter()
        .enumerate()
        .map(|(side, g)| {
            let nodes = g
                .node_ids()
                .map(|n| {
                    let name = node_names[node_class[node_index[&(side, n)]]].clone().unwrap();
                    (n.to_string(), name)
                })
                .collect();
            let edges = g
                .edge_ids()
                .map(|e| {
                    let name = edge_names[edge_class[edge_index[&(side, e)]]].clone().unwrap();
                    (e.to_string(), name)
                })
                .collect();
            Morphism::new(g.clone(), apex.clone(), nodes, edges).expect("quotient map")
        })
        .collect();
    (apex, injections)
}

fn escape(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for ch in id.chars() {
        if matches!(ch, '|' | '(' | ')' | '\\') {
            out.push('\\');
        }
        out.push(ch);
    }
    out
}

pub(crate) fn tuple_id(parts: &[&str]) -> String {
    let inner: Vec<String> = parts.iter().map(|p| escape(p)).collect();
    format!("({})", inner.join("|"))
}

/// Agreeing tuples over a sink whose codomains are already known to agree.
fn tuples(sink: &[Morphism]) -> (GraphRef, Vec<Morphism>) {
    let g = sink[0].cod();
    // Preimages of every node / edge of G, per sink leg.
    let mut node_fibres: BTreeMap<&str, Vec<Vec<&str>>> = g.node_ids().map(|n| (n, vec![Vec::new(); sink.len()])).collect();
    let mut edge_fibres: BTreeMap<&str, Vec<Vec<&str>>> = g.edge_ids().map(|e| (e, vec![Vec::new(); sink.len()])).collect();
    for (a, f) in sink.iter().enumerate() {
        for (x, y) in f.node_map() {
            node_fibres.get_mut(y.as_str()).unwrap()[a].push(x);
        }
        for (x, y) in f.edge_map() {
            edge_fibres.get_mut(y.as_str()).unwrap()[a].push(x);
        }
    }

    fn product<'s>(fibre: &[Vec<&'s str>]) -> Vec<Vec<&'s str>> {
        let mut acc: Vec<Vec<&str>> = vec![Vec::new()];
        for options in fibre {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |o| {
                        let mut t = prefix.clone();
                        t.push(*o);
                        t
                    })
                })
                .collect();
        }
        acc
    }

    let mut apex = Graph::new();
    let mut proj_nodes: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); sink.len()];
    let mut proj_edges: Vec<BTreeMap<String, String>> = vec![BTreeMap::new(); sink.len()];
    for fibre in node_fibres.values() {
        for t in product(fibre) {
            let id = tuple_id(&t);
            let label = sink[0].dom().node_label(t[0]).unwrap();
            apex.add_node(id.clone(), label).unwrap();
            for (a, x) in t.iter().enumerate() {
                proj_nodes[a].insert(id.clone(), x.to_string());
            }
        }
    }
    for fibre in edge_fibres.values() {
        for t in product(fibre) {
            let id = tuple_id(&t);
            let srcs: Vec<&str> = t.iter().enumerate().map(|(a, e)| sink[a].dom().edge(e).unwrap().src.as_str()).collect();
            let tgts: Vec<&str> = t.iter().enumerate().map(|(a, e)| sink[a].dom().edge(e).unwrap().tgt.as_str()).collect();
            let label = &sink[0].dom().edge(t[0]).unwrap().label;
            apex.add_edge(id.clone(), tuple_id(&srcs), tuple_id(&tgts), label.clone()).unwrap();
            for (a, x) in t.iter().enumerate() {
                proj_edges[a].insert(id.clone(), x.to_string());
            }
        }
    }
    let apex = Arc::new(apex);
    let projections = sink
        .iter()
        .zip(proj_nodes.into_iter().zip(proj_edges))
        .map(|(f, (n, e))| Morphism::new(apex.clone(), f.dom_ref().clone(), n, e).expect("tuple projection"))
        .collect();
    (apex, projections)
}

fn check_sink(sink: &[Morphism]) -> Result<()> {
    let first = sink.first().ok_or(Error::EmptyDiagram("sink"))?;
    if sink.iter().any(|f| f.cod() != first.cod()) {
        return Err(Error::CodomainMismatch("sink legs have different codomains".into()));
    }
    Ok(())
}

fn check_source(source: &[Morphism]) -> Result<()> {
    let first = source.first().ok_or(Error::EmptyDiagram("source"))?;
    if source.iter().any(|s| s.dom() != first.dom()) {
        return Err(Error::DomainMismatch("source legs have different domains".into()));
    }
    Ok(())
}

/// Pushout of the span `B ←f− A −g→ C`.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<PushoutResult> {
    if f.dom() != g.dom() {
        return Err(Error::DomainMismatch("pushout span legs have different domains".into()));
    }
    let colim = wide_colimit(&[f.clone(), g.clone()])?;
    let mut inj = colim.injections.into_iter();
    Ok(PushoutResult {
        apex: colim.apex,
        left_inj: inj.next().unwrap(),
        right_inj: inj.next().unwrap(),
        span: (f.clone(), g.clone()),
    })
}

/// Pullback of the cospan `B −f→ D ←g− C`.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<PullbackResult> {
    if f.cod() != g.cod() {
        return Err(Error::CodomainMismatch("pullback cospan legs have different codomains".into()));
    }
    let (apex, proj) = tuples(&[f.clone(), g.clone()]);
    let mut proj = proj.into_iter();
    Ok(PullbackResult {
        apex,
        proj_left: proj.next().unwrap(),
        proj_right: proj.next().unwrap(),
        cospan: (f.clone(), g.clone()),
    })
}

/// Wide pullback of a sink, built directly from agreeing tuples.
pub fn wide_limit(sink: &[Morphism]) -> Result<WideLimit> {
    check_sink(sink)?;
    let (apex, projections) = tuples(sink);
    Ok(WideLimit {
        apex,
        projections,
        sink: sink.to_vec(),
    })
}

/// Wide pullback of a sink, built by induction on its length: a single leg
/// gives `(D_1, id)`, and each further leg is added by one binary pullback.
/// Returns the limit together with the steps taken (outermost step last).
pub fn wide_limit_iterated(sink: &[Morphism]) -> Result<(WideLimit, Vec<IteratedLimitStep>)> {
    check_sink(sink)?;
    if sink.len() == 1 {
        let lim = WideLimit {
            apex: sink[0].dom_ref().clone(),
            projections: vec![Morphism::identity(sink[0].dom_ref())],
            sink: sink.to_vec(),
        };
        return Ok((lim, Vec::new()));
    }
    let (rest, mut steps) = wide_limit_iterated(&sink[1..])?;
    let f2_g2 = sink[1].after(&rest.projections[0])?;
    let pb = pullback(&sink[0], &f2_g2)?;
    let mut projections = vec![pb.proj_left.clone()];
    for g in &rest.projections {
        projections.push(g.after(&pb.proj_right)?);
    }
    steps.push(IteratedLimitStep {
        partial_apex: rest.apex.clone(),
        partial_projections: rest.projections.clone(),
        connector: pb.proj_right.clone(),
    });
    Ok((
        WideLimit {
            apex: pb.apex,
            projections,
            sink: sink.to_vec(),
        },
        steps,
    ))
}

/// Wide pushout of a source `(C, s_1, …, s_p)`.
pub fn wide_colimit(source: &[Morphism]) -> Result<WideColimit> {
    check_source(source)?;
    let parts: Vec<GraphRef> = source.iter().map(|s| s.cod_ref().clone()).collect();
    let c = source[0].dom();
    let mut node_eqs = Vec::new();
    let mut edge_eqs = Vec::new();
    for (a, s) in source.iter().enumerate().skip(1) {
        for x in c.node_ids() {
            node_eqs.push(((0, source[0].node(x)), (a, s.node(x))));
        }
        for x in c.edge_ids() {
            edge_eqs.push(((0, source[0].edge(x)), (a, s.edge(x))));
        }
    }
    let (apex, injections) = glue(&parts, &node_eqs, &edge_eqs);
    Ok(WideColimit {
        apex,
        injections,
        source: source.to_vec(),
    })
}

fn all_equal(ms: &[Morphism]) -> bool {
    ms.windows(2).all(|w| w[0] == w[1])
}

/// Mediating morphism from the apex of a cone into the limit.
///
/// Returns `None` when the cone does not commute over the sink (or, for a
/// hand-assembled `lim` that is not actually a limit, when no mediator exists).
pub fn factor_through_limit(lim: &WideLimit, cone: &[Morphism]) -> Result<Option<Morphism>> {
    if cone.len() != lim.projections.len() {
        return Err(Error::ArityMismatch {
            expected: lim.projections.len(),
            got: cone.len(),
        });
    }
    for (c, e) in cone.iter().zip(&lim.projections) {
        if c.cod() != e.cod() {
            return Err(Error::CodomainMismatch("cone leg does not land in the sink object".into()));
        }
        if c.dom() != cone[0].dom() {
            return Err(Error::DomainMismatch("cone legs have different domains".into()));
        }
    }
    let through: Vec<Morphism> = lim.sink.iter().zip(cone).map(|(f, c)| f.after(c)).collect::<Result<_>>()?;
    if !all_equal(&through) {
        return Ok(None);
    }
    let mut node_key: HashMap<Vec<&str>, &str> = HashMap::new();
    for y in lim.apex.node_ids() {
        node_key.insert(lim.projections.iter().map(|e| e.node(y)).collect(), y);
    }
    let mut edge_key: HashMap<Vec<&str>, &str> = HashMap::new();
    for y in lim.apex.edge_ids() {
        edge_key.insert(lim.projections.iter().map(|e| e.edge(y)).collect(), y);
    }
    let x = cone[0].dom();
    let mut nodes = BTreeMap::new();
    for n in x.node_ids() {
        let key: Vec<&str> = cone.iter().map(|c| c.node(n)).collect();
        match node_key.get(&key) {
            Some(y) => nodes.insert(n.to_string(), y.to_string()),
            None => return Ok(None),
        };
    }
    let mut edges = BTreeMap::new();
    for e in x.edge_ids() {
        let key: Vec<&str> = cone.iter().map(|c| c.edge(e)).collect();
        match edge_key.get(&key) {
            Some(y) => edges.insert(e.to_string(), y.to_string()),
            None => return Ok(None),
        };
    }
    Ok(Morphism::new(cone[0].dom_ref().clone(), lim.apex.clone(), nodes, edges).ok())
}

/// Mediating morphism from the colimit into the tip of a cocone.
pub fn factor_through_colimit(colim: &WideColimit, cocone: &[Morphism]) -> Result<Option<Morphism>> {
    if cocone.len() != colim.injections.len() {
        return Err(Error::ArityMismatch {
            expected: colim.injections.len(),
            got: cocone.len(),
        });
    }
    for (z, h) in cocone.iter().zip(&colim.injections) {
        if z.dom() != h.dom() {
            return Err(Error::DomainMismatch("cocone leg does not start at the source object".into()));
        }
        if z.cod() != cocone[0].cod() {
            return Err(Error::CodomainMismatch("cocone legs have different codomains".into()));
        }
    }
    let through: Vec<Morphism> = cocone.iter().zip(&colim.source).map(|(z, s)| z.after(s)).collect::<Result<_>>()?;
    if !all_equal(&through) {
        return Ok(None);
    }
    let mut nodes: BTreeMap<String, String> = BTreeMap::new();
    let mut edges: BTreeMap<String, String> = BTreeMap::new();
    for (z, h) in cocone.iter().zip(&colim.injections) {
        for (w, y) in h.node_map() {
            let target = z.node(w);
            match nodes.get(y) {
                Some(t) if t != target => return Ok(None),
                _ => {
                    nodes.insert(y.clone(), target.to_string());
                }
            }
        }
        for (w, y) in h.edge_map() {
            let target = z.edge(w);
            match edges.get(y) {
                Some(t) if t != target => return Ok(None),
                _ => {
                    edges.insert(y.clone(), target.to_string());
                }
            }
        }
    }
    Ok(Morphism::new(colim.apex.clone(), cocone[0].cod_ref().clone(), nodes, edges).ok())
}

impl PushoutResult {
    pub fn as_colimit(&self) -> WideColimit {
        WideColimit {
            apex: self.apex.clone(),
            injections: vec![self.left_inj.clone(), self.right_inj.clone()],
            source: vec![self.span.0.clone(), self.span.1.clone()],
        }
    }

    /// The unique `u: apex → X` with `u ∘ left_inj = to_left` and `u ∘ right_inj = to_right`.
    pub fn factor(&self, to_left: &Morphism, to_right: &Morphism) -> Result<Option<Morphism>> {
        factor_through_colimit(&self.as_colimit(), &[to_left.clone(), to_right.clone()])
    }
}

impl PullbackResult {
    pub fn as_limit(&self) -> WideLimit {
        WideLimit {
            apex: self.apex.clone(),
            projections: vec![self.proj_left.clone(), self.proj_right.clone()],
            sink: vec![self.cospan.0.clone(), self.cospan.1.clone()],
        }
    }

    pub fn factor(&self, to_left: &Morphism, to_right: &Morphism) -> Result<Option<Morphism>> {
        factor_through_limit(&self.as_limit(), &[to_left.clone(), to_right.clone()])
    }
}

/// Whether `(projections)` is a limit of `sink`: it must commute and its
/// mediator into the constructed limit must be an isomorphism.
pub fn is_limit(sink: &[Morphism], projections: &[Morphism]) -> bool {
    if sink.len() != projections.len() || check_sink(sink).is_err() {
        return false;
    }
    let Ok(canonical) = wide_limit(sink) else {
        return false;
    };
    matches!(factor_through_limit(&canonical, projections), Ok(Some(u)) if u.is_isomorphism())
}

/// Whether `(injections)` is a colimit of `source`.
pub fn is_colimit(source: &[Morphism], injections: &[Morphism]) -> bool {
    if source.len() != injections.len() || check_source(source).is_err() {
        return false;
    }
    let Ok(canonical) = wide_colimit(source) else {
        return false;
    };
    matches!(factor_through_colimit(&canonical, injections), Ok(Some(u)) if u.is_isomorphism())
}

/// Whether the square `p ∘ f = q ∘ g` (with `f: A → B`, `g: A → C`) is a pushout.
pub fn is_pushout_square(f: &Morphism, g: &Morphism, p: &Morphism, q: &Morphism) -> bool {
    is_colimit(&[f.clone(), g.clone()], &[p.clone(), q.clone()])
}

/// Whether the square `f ∘ p = g ∘ q` (with `p: X → B`, `q: X → C`) is a pullback.
pub fn is_pullback_square(p: &Morphism, q: &Morphism, f: &Morphism, g: &Morphism) -> bool {
    is_limit(&[f.clone(), g.clone()], &[p.clone(), q.clone()])
}

/// The unique `y: A → D` with `f ∘ y = x`, for injective `f: D → G` and
/// `x: A → G`. On failure returns the first item of `A` (nodes before edges)
/// whose image lies outside `f`.
pub fn lift_through_mono(x: &Morphism, f: &Morphism) -> std::result::Result<Morphism, String> {
    debug_assert!(f.is_injective());
    if x.cod() != f.cod() {
        return Err("the two morphisms have different codomains".into());
    }
    let back_nodes: HashMap<&str, &str> = f.node_map().iter().map(|(a, b)| (b.as_str(), a.as_str())).collect();
    let back_edges: HashMap<&str, &str> = f.edge_map().iter().map(|(a, b)| (b.as_str(), a.as_str())).collect();
    let mut nodes = BTreeMap::new();
    for (a, g) in x.node_map() {
        match back_nodes.get(g.as_str()) {
            Some(d) => nodes.insert(a.clone(), d.to_string()),
            None => return Err(format!("node `{a}` (image `{g}`)")),
        };
    }
    let mut edges = BTreeMap::new();
    for (a, g) in x.edge_map() {
        match back_edges.get(g.as_str()) {
            Some(d) => edges.insert(a.clone(), d.to_string()),
            None => return Err(format!("edge `{a}` (image `{g}`)")),
        };
    }
    Morphism::new(x.dom_ref().clone(), f.dom_ref().clone(), nodes, edges).map_err(|e| e.to_string())
}

/// Behaviour of the dangling check; the lenient variant exists only so the
/// property suite can demonstrate that it notices a broken implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum DanglingPolicy {
    Reject,
    DropEdges,
}

/// Context `D` completing `K −l→ L −m→ G` to a pushout square, i.e. `G` with
/// everything matched by `L ∖ l(K)` removed.
pub fn pushout_complement(l: &Morphism, m: &Morphism) -> Result<PushoutComplement> {
    pushout_complement_with(l, m, DanglingPolicy::Reject)
}

pub(crate) fn pushout_complement_with(
    l: &Morphism,
    m: &Morphism,
    dangling: DanglingPolicy,
) -> Result<PushoutComplement> {
    if l.cod() != m.dom() {
        return Err(Error::DomainMismatch("match does not start at the rule's left-hand side".into()));
    }
    if !l.is_injective() {
        return Err(Error::Precondition("left leg of the rule must be injective".into()));
    }
    let lhs = m.dom();
    let g = m.cod();
    let kept_nodes: BTreeSet<&str> = l.node_map().values().map(String::as_str).collect();
    let kept_edges: BTreeSet<&str> = l.edge_map().values().map(String::as_str).collect();

    let mut by_node_image: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (x, y) in m.node_map() {
        by_node_image.entry(y).or_default().push(x);
    }
    for (image, xs) in &by_node_image {
        if xs.len() > 1 {
            if let Some(del) = xs.iter().find(|x| !kept_nodes.contains(**x)) {
                let other = xs.iter().find(|x| *x != del).unwrap();
                return Err(GluingFailure::Identification {
                    kind: ItemKind::Node,
                    item: del.to_string(),
                    other: other.to_string(),
                    image: image.to_string(),
                }
                .into());
            }
        }
    }
    let mut by_edge_image: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (x, y) in m.edge_map() {
        by_edge_image.entry(y).or_default().push(x);
    }
    for (image, xs) in &by_edge_image {
        if xs.len() > 1 {
            if let Some(del) = xs.iter().find(|x| !kept_edges.contains(**x)) {
                let other = xs.iter().find(|x| *x != del).unwrap();
                return Err(GluingFailure::Identification {
                    kind: ItemKind::Edge,
                    item: del.to_string(),
                    other: other.to_string(),
                    image: image.to_string(),
                }
                .into());
            }
        }
    }

    let deleted_nodes: BTreeSet<&str> = lhs
        .node_ids()
        .filter(|x| !kept_nodes.contains(x))
        .map(|x| m.node(x))
        .collect();
    let mut deleted_edges: BTreeSet<&str> = lhs
        .edge_ids()
        .filter(|x| !kept_edges.contains(x))
        .map(|x| m.edge(x))
        .collect();
    for n in &deleted_nodes {
        for e in g.incident_edges(n) {
            if !deleted_edges.contains(e) {
                match dangling {
                    DanglingPolicy::Reject => {
                        return Err(GluingFailure::Dangling {
                            node: n.to_string(),
                            edge: e.to_string(),
                        }
                        .into())
                    }
                    DanglingPolicy::DropEdges => {
                        deleted_edges.insert(e);
                    }
                }
            }
        }
    }

    let mut d = Graph::new();
    for (n, label) in g.nodes() {
        if !deleted_nodes.contains(n) {
            d.add_node(n, label)?;
        }
    }
    for (id, e) in g.edges() {
        if !deleted_edges.contains(id) {
            d.add_edge(id, e.src.clone(), e.tgt.clone(), e.label.clone())?;
        }
    }
    let d = Arc::new(d);
    let f = Morphism::inclusion(&d, m.cod_ref())?;
    let ml = m.after(l)?;
    let k = Morphism::new(
        l.dom_ref().clone(),
        d,
        ml.node_map().clone(),
        ml.edge_map().clone(),
    )?;
    Ok(PushoutComplement { k, f })
}
