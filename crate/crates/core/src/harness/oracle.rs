//! Brute-force reference constructions, written without the union-find and
//! tuple-index machinery of [`crate::category`], plus comparisons between
//! a construction and its reference.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::category::{PullbackResult, PushoutResult, WideColimit, WideLimit};
use crate::graph::{find_isomorphism, Graph, Morphism};

/// Equivalence classes of `items` under the closure of `pairs`, by repeated
/// relabelling until nothing changes.
fn naive_classes(count: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut class: Vec<usize> = (0..count).collect();
    loop {
        let mut changed = false;
        for &(x, y) in pairs {
            let (cx, cy) = (class[x], class[y]);
            if cx != cy {
                let (lo, hi) = (cx.min(cy), cx.max(cy));
                for c in class.iter_mut() {
                    if *c == hi {
                        *c = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            return class;
        }
    }
}

pub fn oracle_wide_colimit(source: &[Morphism]) -> WideColimit {
    let parts: Vec<&Graph> = source.iter().map(|s| s.cod()).collect();
    let node_items: Vec<(usize, String)> = parts
        .iter()
        .enumerate()
        .flat_map(|(a, g)| g.node_ids().map(move |x| (a, x.to_string())))
        .collect();
    let edge_items: Vec<(usize, String)> = parts
        .iter()
        .enumerate()
        .flat_map(|(a, g)| g.edge_ids().map(move |x| (a, x.to_string())))
        .collect();
    let pos = |items: &[(usize, String)], a: usize, x: &str| items.iter().position(|(b, y)| *b == a && y == x).unwrap();

    let mut node_pairs = Vec::new();
    let mut edge_pairs = Vec::new();
    let c = source[0].dom();
    for a in 1..source.len() {
        for x in c.node_ids() {
            node_pairs.push((pos(&node_items, 0, source[0].node(x)), pos(&node_items, a, source[a].node(x))));
        }
        for x in c.edge_ids() {
            edge_pairs.push((pos(&edge_items, 0, source[0].edge(x)), pos(&edge_items, a, source[a].edge(x))));
        }
    }
    let node_class = naive_classes(node_items.len(), &node_pairs);
    let edge_class = naive_classes(edge_items.len(), &edge_pairs);

    let mut apex = Graph::new();
    for (i, (a, x)) in node_items.iter().enumerate() {
        let id = format!("c{}", node_class[i]);
        if !apex.has_node(&id) {
            apex.add_node(id, parts[*a].node_label(x).unwrap()).unwrap();
        }
    }
    for (i, (a, x)) in edge_items.iter().enumerate() {
        let id = format!("c{}", edge_class[i]);
        if !apex.has_edge(&id) {
            let e = parts[*a].edge(x).unwrap();
            let s = format!("c{}", node_class[pos(&node_items, *a, &e.src)]);
            let t = format!("c{}", node_class[pos(&node_items, *a, &e.tgt)]);
            apex.add_edge(id, s, t, e.label.clone()).unwrap();
        }
    }
    let apex = Arc::new(apex);
    let injections = (0..parts.len())
        .map(|a| {
            let nodes = node_items
                .iter()
                .enumerate()
                .filter(|(_, (b, _))| *b == a)
                .map(|(i, (_, x))| (x.clone(), format!("c{}", node_class[i])))
                .collect();
            let edges = edge_items
                .iter()
                .enumerate()
                .filter(|(_, (b, _))| *b == a)
                .map(|(i, (_, x))| (x.clone(), format!("c{}", edge_class[i])))
                .collect();
            Morphism::new(source[a].cod_ref().clone(), apex.clone(), nodes, edges).expect("oracle injection")
        })
        .collect();
    WideColimit {
        apex,
        injections,
        source: source.to_vec(),
    }
}

pub fn oracle_pushout(f: &Morphism, g: &Morphism) -> PushoutResult {
    let colim = oracle_wide_colimit(&[f.clone(), g.clone()]);
    PushoutResult {
        apex: colim.apex,
        left_inj: colim.injections[0].clone(),
        right_inj: colim.injections[1].clone(),
        span: (f.clone(), g.clone()),
    }
}

/// All ways of picking one element from each list.
fn cartesian(lists: &[Vec<String>]) -> Vec<Vec<String>> {
    match lists.split_first() {
        None => vec![Vec::new()],
        Some((head, tail)) => {
            let rest = cartesian(tail);
            let mut out = Vec::new();
            for h in head {
                for r in &rest {
                    let mut t = vec![h.clone()];
                    t.extend(r.iter().cloned());
                    out.push(t);
                }
            }
            out
        }
    }
}

/// Limit as the subset of the full product of the `D_a` on which all legs agree.
pub fn oracle_wide_limit(sink: &[Morphism]) -> WideLimit {
    let node_lists: Vec<Vec<String>> = sink.iter().map(|f| f.dom().node_ids().map(str::to_string).collect()).collect();
    let edge_lists: Vec<Vec<String>> = sink.iter().map(|f| f.dom().edge_ids().map(str::to_string).collect()).collect();
    let agree = |t: &[String], img: &dyn Fn(&Morphism, &str) -> String| {
        let first = img(&sink[0], &t[0]);
        sink.iter().zip(t).all(|(f, x)| img(f, x) == first)
    };
    let node_tuples: Vec<Vec<String>> = cartesian(&node_lists)
        .into_iter()
        .filter(|t| agree(t, &|f, x| f.node(x).to_string()))
        .collect();
    let edge_tuples: Vec<Vec<String>> = cartesian(&edge_lists)
        .into_iter()
        .filter(|t| agree(t, &|f, x| f.edge(x).to_string()))
        .collect();

    let mut apex = Graph::new();
    let mut node_name: BTreeMap<Vec<String>, String> = BTreeMap::new();
    for (i, t) in node_tuples.iter().enumerate() {
        let id = format!("t{i}");
        apex.add_node(&id, sink[0].dom().node_label(&t[0]).unwrap()).unwrap();
        node_name.insert(t.clone(), id);
    }
    for (i, t) in edge_tuples.iter().enumerate() {
        let src: Vec<String> = sink.iter().zip(t).map(|(f, e)| f.dom().edge(e).unwrap().src.clone()).collect();
        let tgt: Vec<String> = sink.iter().zip(t).map(|(f, e)| f.dom().edge(e).unwrap().tgt.clone()).collect();
        apex.add_edge(format!("u{i}"), node_name[&src].clone(), node_name[&tgt].clone(), sink[0].dom().edge(&t[0]).unwrap().label.clone())
            .unwrap();
    }
    let apex = Arc::new(apex);
    let projections = sink
        .iter()
        .enumerate()
        .map(|(a, f)| {
            let nodes = node_tuples.iter().enumerate().map(|(i, t)| (format!("t{i}"), t[a].clone())).collect();
            let edges = edge_tuples.iter().enumerate().map(|(i, t)| (format!("u{i}"), t[a].clone())).collect();
            Morphism::new(apex.clone(), f.dom_ref().clone(), nodes, edges).expect("oracle projection")
        })
        .collect();
    WideLimit {
        apex,
        projections,
        sink: sink.to_vec(),
    }
}

pub fn oracle_pullback(f: &Morphism, g: &Morphism) -> PullbackResult {
    let lim = oracle_wide_limit(&[f.clone(), g.clone()]);
    PullbackResult {
        apex: lim.apex,
        proj_left: lim.projections[0].clone(),
        proj_right: lim.projections[1].clone(),
        cospan: (f.clone(), g.clone()),
    }
}

/// Whether two cocones over the same diagram identify exactly the same items
/// and both cover their apex, which makes the item correspondence an
/// isomorphism compatible with the injections. Also requires
/// [`find_isomorphism`] to find some isomorphism of the apexes.
pub fn colimits_agree(x: &[Morphism], y: &[Morphism]) -> Result<(), String> {
    if x.len() != y.len() {
        return Err("different numbers of injections".into());
    }
    let (Some(x0), Some(y0)) = (x.first(), y.first()) else {
        return Ok(());
    };
    let mut fwd: BTreeMap<(bool, &str), &str> = BTreeMap::new();
    let mut back: BTreeMap<(bool, &str), &str> = BTreeMap::new();
    for (hx, hy) in x.iter().zip(y) {
        let items = hx
            .node_map()
            .iter()
            .map(|(k, v)| (false, k, v))
            .chain(hx.edge_map().iter().map(|(k, v)| (true, k, v)));
        for (is_edge, item, ix) in items {
            let iy = if is_edge { hy.edge(item) } else { hy.node(item) };
            if *fwd.entry((is_edge, ix.as_str())).or_insert(iy) != iy {
                return Err(format!("`{ix}` is one class here but splits in the reference"));
            }
            if *back.entry((is_edge, iy)).or_insert(ix.as_str()) != ix.as_str() {
                return Err(format!("`{iy}` is one class in the reference but splits here"));
            }
        }
    }
    let (ax, ay) = (x0.cod(), y0.cod());
    if fwd.len() != ax.node_count() + ax.edge_count() || back.len() != ay.node_count() + ay.edge_count() {
        return Err("injections do not cover the apex".into());
    }
    if find_isomorphism(ax, ay).is_none() {
        return Err("apexes are not isomorphic".into());
    }
    Ok(())
}

/// Whether two cones over the same sink have the same set of projection
/// tuples, each realised by exactly one apex item.
pub fn limits_agree(x: &[Morphism], y: &[Morphism]) -> Result<(), String> {
    fn tuples(ps: &[Morphism]) -> Result<BTreeSet<(bool, Vec<String>)>, String> {
        let Some(p0) = ps.first() else {
            return Ok(BTreeSet::new());
        };
        let apex = p0.dom();
        let mut out = BTreeSet::new();
        for n in apex.node_ids() {
            if !out.insert((false, ps.iter().map(|p| p.node(n).to_string()).collect())) {
                return Err(format!("two apex nodes project like `{n}`"));
            }
        }
        for e in apex.edge_ids() {
            if !out.insert((true, ps.iter().map(|p| p.edge(e).to_string()).collect())) {
                return Err(format!("two apex edges project like `{e}`"));
            }
        }
        Ok(out)
    }
    if tuples(x)? != tuples(y)? {
        return Err("projection tuples differ".into());
    }
    if let (Some(a), Some(b)) = (x.first(), y.first()) {
        if find_isomorphism(a.dom(), b.dom()).is_none() {
            return Err("apexes are not isomorphic".into());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn span_over_empty_is_disjoint_union() {
        let e = empty().into_ref();
        let b = e2().into_ref();
        let c = lp().into_ref();
        let po = oracle_pushout(&Morphism::inclusion(&e, &b).unwrap(), &Morphism::inclusion(&e, &c).unwrap());
        assert_eq!((po.apex.node_count(), po.apex.edge_count()), (3, 2));
    }

    #[test]
    fn identity_span_gives_iso_apex() {
        let g = e2().into_ref();
        let id = Morphism::identity(&g);
        let po = oracle_pushout(&id, &id);
        assert!(find_isomorphism(&po.apex, &g).is_some());
        let real = crate::category::pushout(&id, &id).unwrap();
        colimits_agree(&[po.left_inj, po.right_inj], &[real.left_inj, real.right_inj]).unwrap();
    }

    #[test]
    fn limit_cases() {
        let g = e2().into_ref();
        let id = Morphism::identity(&g);
        let one = oracle_wide_limit(std::slice::from_ref(&id));
        assert!(find_isomorphism(&one.apex, &g).is_some());
        let diag = oracle_wide_limit(&[id.clone(), id.clone()]);
        assert!(find_isomorphism(&diag.apex, &g).is_some());
        let real = crate::category::wide_limit(&[id.clone(), id]).unwrap();
        limits_agree(&diag.projections, &real.projections).unwrap();
    }

    #[test]
    fn disagreement_is_reported() {
        let g = d2().into_ref();
        let id = Morphism::identity(&g);
        let n1 = n1().into_ref();
        let fold = Morphism::new(
            g.clone(),
            n1,
            [("u", "a"), ("v", "a")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(colimits_agree(&[id], &[fold]).is_err());
    }
}
