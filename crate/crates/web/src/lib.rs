//! Browser demo: apply a rule, combine a scenario into one parallel coherent
//! transformation, and check independence of a pair. The functions here take
//! and return JSON text so they can be tested natively; the `wasm32` build
//! exports them through `wasm-bindgen`.

mod svg;

use std::sync::Arc;

use pctgraph::commands::{self, expect_graph, expect_rule, expect_scenario};
use pctgraph::graph::fixtures;
use pctgraph::io::{parse_document, serialize, Document, MatchChoice, Scenario};
use pctgraph::parallelism::{analyze, check_parallel_independence, pair_pct};
use pctgraph::rewriting::{build_pct, coherence_witness, derive, library};
use pctgraph::Graph;
use serde_json::{json, Value};

pub use svg::render;

fn document(text: &str) -> Result<Document, String> {
    parse_document(text).map_err(|e| e.to_string())
}

fn graph_view(g: &Graph) -> Value {
    json!({
        "document": serialize(&Document::Graph(g.clone())),
        "svg": render(g),
        "summary": g.to_string(),
    })
}

/// Built-in example documents: `d2`, `lp`, `n1`, `delete-node`, `two-loops`,
/// `same-loop` and `delete-both`.
pub fn example(name: &str) -> Result<String, String> {
    let scenario = |host: Graph, rules, matches| {
        Document::Scenario(Scenario {
            host: Arc::new(host),
            rules,
            matches,
            injective_matches: true,
        })
    };
    let doc = match name {
        "d2" => Document::Graph(fixtures::d2()),
        "lp" => Document::Graph(fixtures::lp()),
        "n1" => Document::Graph(fixtures::n1()),
        "delete-node" => Document::Rule(library::delete_node()),
        "two-loops" => scenario(
            fixtures::n1(),
            vec![library::add_loop("α"), library::add_loop("β")],
            vec![MatchChoice::Index(0), MatchChoice::Index(0)],
        ),
        "same-loop" => scenario(
            fixtures::lp(),
            vec![library::delete_loop(), library::delete_loop()],
            vec![MatchChoice::Index(0), MatchChoice::Index(0)],
        ),
        "delete-both" => scenario(
            fixtures::d2(),
            vec![library::delete_node(), library::delete_node()],
            vec![MatchChoice::Index(0), MatchChoice::Index(1)],
        ),
        other => return Err(format!("no example named `{other}`")),
    };
    Ok(serialize(&doc))
}

/// SVG picture of a graph document.
pub fn render_graph(graph: &str) -> Result<String, String> {
    Ok(render(&expect_graph(document(graph)?).map_err(|e| e.to_string())?))
}

/// One step of `rule` at match `index`; returns `{host, result, matches}`.
pub fn apply_rule(rule: &str, graph: &str, index: usize) -> Result<String, String> {
    let rule = expect_rule(document(rule)?).map_err(|e| e.to_string())?;
    let g = expect_graph(document(graph)?).map_err(|e| e.to_string())?;
    let matches = commands::list_matches(&rule, &g, true).len();
    let step = commands::apply_step(&rule, &g, index, true).map_err(|e| e.to_string())?;
    Ok(json!({
        "host": graph_view(&g),
        "result": graph_view(step.result()),
        "matches": matches,
    })
    .to_string())
}

/// The PCT of every step in the scenario; returns `{host, limit, result}`.
pub fn pct(scenario: &str) -> Result<String, String> {
    let s = expect_scenario(document(scenario)?).map_err(|e| e.to_string())?;
    let pct = commands::scenario_pct(&s).map_err(|e| e.to_string())?;
    Ok(json!({
        "host": graph_view(&s.host),
        "limit": graph_view(&pct.c),
        "result": graph_view(&pct.result),
    })
    .to_string())
}

/// Coherence and parallel independence of a two-rule scenario. For an
/// independent pair the analysis (second step after the first) is included.
pub fn independence(scenario: &str) -> Result<String, String> {
    let s = expect_scenario(document(scenario)?).map_err(|e| e.to_string())?;
    if s.rules.len() != 2 {
        return Err(format!("expected 2 rules, got {}", s.rules.len()));
    }
    let ms = s.resolve_all().map_err(|e| e.to_string())?;
    let g1 = derive(&s.rules[0], &ms[0]).map_err(|e| e.to_string())?;
    let g2 = derive(&s.rules[1], &ms[1]).map_err(|e| e.to_string())?;
    let coherent = coherence_witness(&[g1.clone(), g2.clone()]);
    let pct_result = match &coherent {
        Ok(w) => Some(build_pct(w).map_err(|e| e.to_string())?.result),
        Err(_) => None,
    };
    let mut report = json!({
        "coherent": coherent.is_ok(),
        "coherence_error": coherent.as_ref().err().map(|e| e.to_string()),
        "pct_result": pct_result.as_deref().map(graph_view),
    });
    match check_parallel_independence(&g1, &g2) {
        Ok(w) => {
            let pp = pair_pct(&g1, &g2, &w).map_err(|e| e.to_string())?;
            let (g2p, _, _) = analyze(&pp).map_err(|e| e.to_string())?;
            report["independent"] = json!(true);
            report["first_result"] = graph_view(g1.result());
            report["sequential_result"] = graph_view(g2p.result());
        }
        Err(e) => {
            report["independent"] = json!(false);
            report["independence_error"] = json!(e.to_string());
        }
    }
    Ok(report.to_string())
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    fn js(r: Result<String, String>) -> Result<String, JsValue> {
        r.map_err(|e| JsValue::from_str(&e))
    }

    #[wasm_bindgen]
    pub fn example(name: &str) -> Result<String, JsValue> {
        js(super::example(name))
    }

    #[wasm_bindgen]
    pub fn render_graph(graph: &str) -> Result<String, JsValue> {
        js(super::render_graph(graph))
    }

    #[wasm_bindgen]
    pub fn apply_rule(rule: &str, graph: &str, index: usize) -> Result<String, JsValue> {
        js(super::apply_rule(rule, graph, index))
    }

    #[wasm_bindgen]
    pub fn pct(scenario: &str) -> Result<String, JsValue> {
        js(super::pct(scenario))
    }

    #[wasm_bindgen]
    pub fn independence(scenario: &str) -> Result<String, JsValue> {
        js(super::independence(scenario))
    }
}
