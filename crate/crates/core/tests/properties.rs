//! Algebraic laws and format invariants as proptest properties. Graphs are
//! either drawn directly by proptest or produced by the seeded generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;

use pctgraph::category::{
    is_colimit, is_limit, is_pushout_square, lift_through_mono, pullback, pushout, pushout_complement, wide_colimit,
    wide_limit, wide_limit_iterated,
};
use pctgraph::graph::{find_isomorphism, Graph, GraphRef, Morphism};
use pctgraph::harness::gen::{gen_derivation, gen_morphism_from, gen_morphism_into};
use pctgraph::harness::oracle::{colimits_agree, limits_agree};
use pctgraph::harness::{gen_graph, gen_rule, instance_rng, oracle_pushout, GenParams};
use pctgraph::io::{export_dot, parse_document, serialize, Document};
use pctgraph::rewriting::{build_pct, coherence_witness, derive, validate_rule, verify_pct};

fn params() -> GenParams {
    GenParams::default()
}

fn id_strategy() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z][a-z0-9]{0,3}",
        // Ids that need escaping in JSON, DOT and tuple names.
        "[a-z|()\\\\\" ]{1,4}",
    ]
}

/// A graph drawn by proptest: unique node ids, edges between existing nodes.
fn graph_strategy() -> impl Strategy<Value = Graph> {
    (
        prop::collection::btree_map(id_strategy(), "[AB]", 0..6),
        prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), "[xy]"), 0..8),
    )
        .prop_map(|(nodes, edges)| {
            let mut g = Graph::new();
            for (id, label) in &nodes {
                g.add_node(id.clone(), label.clone()).unwrap();
            }
            let ids: Vec<&String> = nodes.keys().collect();
            if !ids.is_empty() {
                for (i, (s, t, label)) in edges.into_iter().enumerate() {
                    g.add_edge(format!("e{i}"), s.get(&ids).as_str(), t.get(&ids).as_str(), label).unwrap();
                }
            }
            g
        })
}

/// Renames every node and edge of `g`.
fn renamed(g: &Graph) -> Graph {
    let node = |x: &str| format!("r.{x}");
    let mut h = Graph::new();
    for (id, label) in g.nodes() {
        h.add_node(node(id), label).unwrap();
    }
    for (id, e) in g.edges() {
        h.add_edge(format!("r.{id}"), node(&e.src), node(&e.tgt), e.label.clone()).unwrap();
    }
    h
}

/// `f: A → B` and `g: A → C` with a common, freshly generated domain.
fn span(seed: u64, mono: bool) -> (Morphism, Morphism) {
    let p = params();
    let mut rng = instance_rng(seed, "proptest-span", 0);
    let a = Arc::new(gen_graph(&p, &mut rng));
    (gen_morphism_from(&a, mono, &p, &mut rng), gen_morphism_from(&a, false, &p, &mut rng))
}

/// `f: A → C` and `g: B → C` into a freshly generated codomain.
fn cospan(seed: u64) -> (Morphism, Morphism) {
    let p = params();
    let mut rng = instance_rng(seed, "proptest-cospan", 0);
    let c = Arc::new(gen_graph(&p, &mut rng));
    (gen_morphism_into(&c, true, &p, &mut rng), gen_morphism_into(&c, false, &p, &mut rng))
}

fn iso(a: &GraphRef, b: &GraphRef) -> bool {
    find_isomorphism(a, b).is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_documents_round_trip(g in graph_strategy()) {
        let doc = Document::Graph(g);
        let text = serialize(&doc);
        prop_assert_eq!(parse_document(&text).unwrap(), doc.clone());
        prop_assert_eq!(serialize(&parse_document(&text).unwrap()), text);
    }

    #[test]
    fn rule_and_morphism_documents_round_trip(seed in any::<u64>()) {
        let p = params();
        let rule = gen_rule(&p, &mut instance_rng(seed, "proptest-rule", 0));
        let doc = Document::Rule(rule.clone());
        prop_assert_eq!(parse_document(&serialize(&doc)).unwrap(), doc);
        let doc = Document::Morphism(rule.l.clone());
        prop_assert_eq!(parse_document(&serialize(&doc)).unwrap(), doc);
    }

    #[test]
    fn dot_has_one_statement_per_item(g in graph_strategy()) {
        let dot = export_dot(&g);
        prop_assert_eq!(dot.lines().count(), g.node_count() + g.edge_count() + 2);
        prop_assert_eq!(export_dot(&g), dot);
    }

    #[test]
    fn graphs_are_isomorphic_to_renamed_copies(g in graph_strategy()) {
        let h = renamed(&g);
        let phi = find_isomorphism(&g, &h);
        prop_assert!(phi.as_ref().is_some_and(|m| m.is_isomorphism()));
        let back = phi.unwrap().inverse().unwrap();
        prop_assert_eq!(back.after(&find_isomorphism(&g, &h).unwrap()).unwrap(), Morphism::identity(&Arc::new(g)));
    }

    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>()) {
        let p = params();
        let mut rng = instance_rng(seed, "proptest-chain", 0);
        let a = Arc::new(gen_graph(&p, &mut rng));
        let f = gen_morphism_from(&a, false, &p, &mut rng);
        let g = gen_morphism_from(f.cod_ref(), false, &p, &mut rng);
        let h = gen_morphism_from(g.cod_ref(), false, &p, &mut rng);
        prop_assert_eq!(h.after(&g).unwrap().after(&f).unwrap(), h.after(&g.after(&f).unwrap()).unwrap());
        prop_assert_eq!(Morphism::identity(f.cod_ref()).after(&f).unwrap(), f.clone());
        prop_assert_eq!(f.after(&Morphism::identity(&a)).unwrap(), f);
    }

    #[test]
    fn pushouts_commute_and_match_the_oracle(seed in any::<u64>(), mono in any::<bool>()) {
        let (f, g) = span(seed, mono);
        let po = pushout(&f, &g).unwrap();
        prop_assert_eq!(po.left_inj.after(&f).unwrap(), po.right_inj.after(&g).unwrap());
        prop_assert!(is_pushout_square(&f, &g, &po.left_inj, &po.right_inj));
        let oracle = oracle_pushout(&f, &g);
        prop_assert!(colimits_agree(&[po.left_inj.clone(), po.right_inj.clone()], &[oracle.left_inj, oracle.right_inj]).is_ok());
        // Pushouts along monos have monic opposite legs.
        if f.is_injective() {
            prop_assert!(po.right_inj.is_injective());
        }
    }

    #[test]
    fn pullbacks_commute_and_are_limits(seed in any::<u64>()) {
        let (f, g) = cospan(seed);
        let pb = pullback(&f, &g).unwrap();
        prop_assert_eq!(f.after(&pb.proj_left).unwrap(), g.after(&pb.proj_right).unwrap());
        prop_assert!(is_limit(&[f.clone(), g.clone()], &[pb.proj_left.clone(), pb.proj_right.clone()]));
        let wide = wide_limit(&[f, g]).unwrap();
        prop_assert!(limits_agree(&[pb.proj_left, pb.proj_right], &wide.projections).is_ok());
    }

    #[test]
    fn iterated_and_direct_wide_limits_agree(seed in any::<u64>(), arity in 1usize..4) {
        let p = params();
        let mut rng = instance_rng(seed, "proptest-sink", 0);
        let c = Arc::new(gen_graph(&p, &mut rng));
        let sink: Vec<Morphism> = (0..arity).map(|_| gen_morphism_into(&c, true, &p, &mut rng)).collect();
        let direct = wide_limit(&sink).unwrap();
        let (iterated, steps) = wide_limit_iterated(&sink).unwrap();
        prop_assert_eq!(steps.len(), arity - 1);
        prop_assert!(limits_agree(&direct.projections, &iterated.projections).is_ok());
        prop_assert!(is_limit(&sink, &direct.projections));
    }

    #[test]
    fn wide_colimits_are_colimits(seed in any::<u64>(), arity in 1usize..4) {
        let p = params();
        let mut rng = instance_rng(seed, "proptest-source", 0);
        let a = Arc::new(gen_graph(&p, &mut rng));
        let source: Vec<Morphism> = (0..arity).map(|_| gen_morphism_from(&a, false, &p, &mut rng)).collect();
        let colim = wide_colimit(&source).unwrap();
        let first = colim.injections[0].after(&source[0]).unwrap();
        for (inj, s) in colim.injections.iter().zip(&source) {
            prop_assert_eq!(inj.after(s).unwrap(), first.clone());
        }
        prop_assert!(is_colimit(&source, &colim.injections));
    }

    #[test]
    fn lifting_through_a_mono_inverts_composition(seed in any::<u64>()) {
        let p = params();
        let mut rng = instance_rng(seed, "proptest-lift", 0);
        let c = Arc::new(gen_graph(&p, &mut rng));
        let f = gen_morphism_into(&c, true, &p, &mut rng);
        let y = gen_morphism_into(f.dom_ref(), false, &p, &mut rng);
        let x = f.after(&y).unwrap();
        prop_assert_eq!(lift_through_mono(&x, &f).unwrap(), y);
    }

    #[test]
    fn derivations_are_weak_dpos_with_valid_rules(seed in any::<u64>()) {
        let p = params();
        if let Some(t) = gen_derivation(&p, &mut instance_rng(seed, "proptest-derivation", 0)) {
            prop_assert!(validate_rule(&t.rule).is_ok());
            prop_assert_eq!(t.f.after(&t.k).unwrap(), t.m.after(&t.rule.l).unwrap());
            prop_assert!(t.verify().is_ok());
            prop_assert!(t.is_weak_dpo);
            // The pushout complement is what the derivation used as context.
            let pc = pushout_complement(&t.rule.l, &t.m).unwrap();
            prop_assert!(iso(pc.context(), t.context()));
            // A single step is a PCT of arity one.
            let pct = build_pct(&coherence_witness(std::slice::from_ref(&t)).unwrap()).unwrap();
            prop_assert!(verify_pct(&pct).is_ok());
            prop_assert!(iso(&pct.result, t.result()));
            // Deriving twice gives the same result.
            let again = derive(&t.rule, &t.m).unwrap();
            prop_assert_eq!(again.result(), t.result());
        }
    }

    #[test]
    fn explicit_maps_survive_serialization(seed in any::<u64>()) {
        let (f, _) = span(seed, false);
        let text = serialize(&Document::Morphism(f.clone()));
        let Document::Morphism(back) = parse_document(&text).unwrap() else {
            return Err(TestCaseError::fail("not a morphism"));
        };
        let nodes: BTreeMap<String, String> = back.node_map().clone();
        prop_assert_eq!(&nodes, f.node_map());
        prop_assert_eq!(back, f);
    }
}
