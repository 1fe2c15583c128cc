//! The user-facing operations behind the command line and the web demo. Each
//! takes parsed documents and returns the documents to print.

use std::sync::Arc;

use crate::graph::{find_isomorphism, Graph, GraphRef, Morphism};
use crate::harness::{run_property_suite, GenParams};
use crate::io::{Document, DocumentError, Scenario};
use crate::parallelism::{
    analyze as analyze_pair, check_parallel_independence, check_sequential_independence, derived_rule,
    pair_pct, synthesize as synthesize_pair, verify_derived_application,
};
use crate::rewriting::{build_pct, coherence_witness, derive, find_matches, DirectTransformation, PctDiagram, WeakSpan};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommandError {
    /// Bad input: unreadable, malformed, or asking for something that is not there.
    #[error("{0}")]
    Input(String),
    /// The operation itself failed, e.g. a gluing failure or a dependent pair.
    #[error("{0}")]
    Domain(#[from] Error),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Input(_) => 2,
            CommandError::Domain(_) => 1,
        }
    }
}

impl From<DocumentError> for CommandError {
    fn from(e: DocumentError) -> Self {
        CommandError::Input(e.to_string())
    }
}

pub type CommandResult<T> = Result<T, CommandError>;

pub fn expect_graph(doc: Document) -> CommandResult<Graph> {
    match doc {
        Document::Graph(g) => Ok(g),
        other => Err(wrong_kind("graph", &other)),
    }
}

pub fn expect_rule(doc: Document) -> CommandResult<WeakSpan> {
    match doc {
        Document::Rule(r) => Ok(r),
        other => Err(wrong_kind("rule", &other)),
    }
}

pub fn expect_scenario(doc: Document) -> CommandResult<Scenario> {
    match doc {
        Document::Scenario(s) => Ok(s),
        other => Err(wrong_kind("scenario", &other)),
    }
}

fn wrong_kind(expected: &str, got: &Document) -> CommandError {
    CommandError::Input(format!("expected a {expected} document, got a {}", got.kind()))
}

/// An isomorphism `a → b` as a document, or a domain failure naming `what`.
fn iso_witness(a: &GraphRef, b: &GraphRef, what: &str) -> CommandResult<Document> {
    find_isomorphism(a, b)
        .map(Document::Morphism)
        .ok_or_else(|| Error::Reconstruction(format!("{what} are not isomorphic")).into())
}

/// All matches of the rule, in enumeration order.
pub fn list_matches(rule: &WeakSpan, g: &Graph, injective: bool) -> Vec<Document> {
    find_matches(rule, &Arc::new(g.clone()), injective)
        .into_iter()
        .map(Document::Morphism)
        .collect()
}

fn pick_match(rule: &WeakSpan, g: &GraphRef, index: usize, injective: bool) -> CommandResult<Morphism> {
    let all = find_matches(rule, g, injective);
    let n = all.len();
    all.into_iter()
        .nth(index)
        .ok_or_else(|| CommandError::Input(format!("match {index} requested, rule `{}` has {n} matches", rule.name)))
}

/// One weak DPO step; returns the transformation.
pub fn apply_step(rule: &WeakSpan, g: &Graph, index: usize, injective: bool) -> CommandResult<DirectTransformation> {
    let m = pick_match(rule, &Arc::new(g.clone()), index, injective)?;
    Ok(derive(rule, &m)?)
}

/// One weak DPO step; returns the result graph.
pub fn apply(rule: &WeakSpan, g: &Graph, index: usize, injective: bool) -> CommandResult<Document> {
    Ok(Document::Graph(apply_step(rule, g, index, injective)?.result().as_ref().clone()))
}

fn derivations(s: &Scenario) -> CommandResult<Vec<DirectTransformation>> {
    if s.rules.is_empty() {
        return Err(CommandError::Input("scenario has no rules".into()));
    }
    let ms = s.resolve_all()?;
    Ok(s.rules.iter().zip(&ms).map(|(r, m)| derive(r, m)).collect::<Result<_, _>>()?)
}

pub fn scenario_pct(s: &Scenario) -> CommandResult<PctDiagram> {
    let gammas = derivations(s)?;
    Ok(build_pct(&coherence_witness(&gammas)?)?)
}

/// The PCT of all scenario steps; returns the result graph.
pub fn pct(s: &Scenario) -> CommandResult<Document> {
    Ok(Document::Graph(scenario_pct(s)?.result.as_ref().clone()))
}

fn require_pair(s: &Scenario) -> CommandResult<()> {
    if s.rules.len() != 2 {
        return Err(CommandError::Input(format!("expected a scenario with 2 rules, got {}", s.rules.len())));
    }
    Ok(())
}

fn parallel_pair(s: &Scenario) -> CommandResult<(DirectTransformation, DirectTransformation)> {
    require_pair(s)?;
    let mut gammas = derivations(s)?;
    let g2 = gammas.pop().expect("two steps");
    Ok((gammas.pop().expect("two steps"), g2))
}

/// The second step acts on the result of the first.
fn sequential_pair(s: &Scenario) -> CommandResult<(DirectTransformation, DirectTransformation)> {
    require_pair(s)?;
    let m1 = s.resolve_match(0, &s.host)?;
    let g1 = derive(&s.rules[0], &m1)?;
    let m2 = s.resolve_match(1, g1.result())?;
    let g2 = derive(&s.rules[1], &m2)?;
    Ok((g1, g2))
}

/// The independence witness `[j_1, j_2]` of the pair.
pub fn indep(s: &Scenario, sequential: bool) -> CommandResult<Vec<Document>> {
    if sequential {
        let (g1, g2) = sequential_pair(s)?;
        let w = check_sequential_independence(&g1, &g2)?;
        Ok(vec![Document::Morphism(w.j1p), Document::Morphism(w.j2p)])
    } else {
        let (g1, g2) = parallel_pair(s)?;
        let w = check_parallel_independence(&g1, &g2)?;
        Ok(vec![Document::Morphism(w.j1), Document::Morphism(w.j2)])
    }
}

/// For a parallel independent pair: `[H_1, m′_2, H, witness H_pct → H]`.
pub fn analyze(s: &Scenario) -> CommandResult<Vec<Document>> {
    let (g1, g2) = parallel_pair(s)?;
    let w = check_parallel_independence(&g1, &g2)?;
    let pp = pair_pct(&g1, &g2, &w)?;
    let (g2p, _, _) = analyze_pair(&pp)?;
    let witness = iso_witness(&pp.pct.result, g2p.result(), "PCT result and sequential result")?;
    Ok(vec![
        Document::Graph(g1.result().as_ref().clone()),
        Document::Morphism(g2p.m.clone()),
        Document::Graph(g2p.result().as_ref().clone()),
        witness,
    ])
}

/// For a sequential independent pair: `[m_2, H_pct, witness H_pct → H]`.
pub fn synthesize(s: &Scenario) -> CommandResult<Vec<Document>> {
    let (g1, g2p) = sequential_pair(s)?;
    let sw = check_sequential_independence(&g1, &g2p)?;
    let (g2, _) = synthesize_pair(&g1, &g2p, &sw)?;
    let fresh = build_pct(&coherence_witness(&[g1, g2.clone()])?)?;
    let witness = iso_witness(&fresh.result, g2p.result(), "PCT result and sequential result")?;
    Ok(vec![
        Document::Morphism(g2.m.clone()),
        Document::Graph(fresh.result.as_ref().clone()),
        witness,
    ])
}

pub fn derive_rule(s: &Scenario) -> CommandResult<Document> {
    Ok(Document::Rule(derived_rule(&scenario_pct(s)?)?.span))
}

/// Applies the scenario's derived rule to `host` and checks the transported
/// PCT: `[H′, witness H_fresh → H′]`, where `H_fresh` combines the transported
/// steps from scratch.
pub fn verify_derived(s: &Scenario, host: &Graph, index: usize, injective: bool) -> CommandResult<Vec<Document>> {
    let dr = derived_rule(&scenario_pct(s)?)?;
    let applied = apply_step(&dr.span, host, index, injective)?;
    let tp = verify_derived_application(&dr, &applied)?;
    let fresh = build_pct(&coherence_witness(&tp.pct.witness.gammas)?)?;
    let witness = iso_witness(&fresh.result, tp.result(), "fresh and transported results")?;
    Ok(vec![Document::Graph(applied.result().as_ref().clone()), witness])
}

/// Runs the property suite; returns whether everything passed and the report.
pub fn selfcheck(params: &GenParams, timings: bool) -> CommandResult<(bool, String)> {
    params.validate().map_err(CommandError::Input)?;
    let report = run_property_suite(params);
    Ok((report.all_passed(), report.render(timings)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;
    use crate::io::MatchChoice;
    use crate::rewriting::library;

    fn loops() -> Scenario {
        Scenario {
            host: Arc::new(fixtures::n1()),
            rules: vec![library::add_loop("α"), library::add_loop("β")],
            matches: vec![MatchChoice::Index(0), MatchChoice::Index(0)],
            injective_matches: true,
        }
    }

    #[test]
    fn apply_delete_node() {
        let doc = apply(&library::delete_node(), &fixtures::d2(), 0, true).unwrap();
        assert_eq!(doc, Document::Graph(Graph::new().with_node("v", "A")));
        assert_eq!(apply(&library::delete_node(), &fixtures::d2(), 2, true).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn dangling_apply_is_a_domain_failure() {
        let e = apply(&library::delete_node(), &fixtures::lp().with_node("w", "B"), 0, true).unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }

    #[test]
    fn loop_pair_everywhere() {
        let s = loops();
        let Document::Graph(h) = pct(&s).unwrap() else { panic!() };
        assert_eq!((h.node_count(), h.edge_count()), (1, 2));
        assert_eq!(indep(&s, false).unwrap().len(), 2);
        let a = analyze(&s).unwrap();
        assert_eq!(a.len(), 4);
        let seq = Scenario {
            matches: vec![MatchChoice::Index(0), MatchChoice::Index(0)],
            ..loops()
        };
        assert_eq!(indep(&seq, true).unwrap().len(), 2);
        assert_eq!(synthesize(&seq).unwrap().len(), 3);
        let Document::Rule(r) = derive_rule(&s).unwrap() else { panic!() };
        assert_eq!(r.rhs().edge_count(), 2);
        let out = verify_derived(&s, &fixtures::d2(), 1, true).unwrap();
        let Document::Graph(h2) = &out[0] else { panic!() };
        assert_eq!((h2.node_count(), h2.edge_count()), (2, 2));
    }

    #[test]
    fn dependent_pair_fails_indep() {
        let s = Scenario {
            host: Arc::new(fixtures::lp()),
            rules: vec![library::delete_loop(), library::delete_loop()],
            matches: vec![MatchChoice::Index(0), MatchChoice::Index(0)],
            injective_matches: true,
        };
        assert_eq!(indep(&s, false).unwrap_err().exit_code(), 1);
        let Document::Graph(h) = pct(&s).unwrap() else { panic!() };
        assert_eq!((h.node_count(), h.edge_count()), (1, 0));
    }
}
