use std::sync::Arc;

use rand::Rng;

use super::gen::*;
use super::oracle::*;
use super::{GenParams, RuleShape};
use crate::category::{
    is_pushout_square, pullback, pushout, wide_colimit, wide_limit, wide_limit_iterated,
};
use crate::error::{Error, GluingFailure};
use crate::graph::{enumerate_morphisms, find_isomorphism, validate_graph, GraphRef, Morphism};
use crate::parallelism::{
    analyze, check_parallel_independence, check_sequential_independence, derived_rule, pair_pct, roundtrip_check,
    synthesize, verify_derived_application, RoundTrip,
};
use crate::rewriting::{
    assoc_to_weak, associated_span, build_pct, coherence_witness, derive, hat_gamma, validate_rule, verify_pct,
    DirectTransformation,
};

/// Why an instance did not pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Fail(String),
    /// The generator found no suitable instance; counted separately.
    Skip(String),
}

impl From<Error> for Verdict {
    fn from(e: Error) -> Self {
        Verdict::Fail(e.to_string())
    }
}

impl From<String> for Verdict {
    fn from(e: String) -> Self {
        Verdict::Fail(e)
    }
}

type Check = Result<(), Verdict>;

pub struct Property {
    pub name: &'static str,
    /// Properties of the same family see the same instances.
    pub family: &'static str,
    pub check: fn(&GenParams, u64, &mut Rng8) -> Check,
}

impl Property {
    /// Checks a single instance with its own generator.
    pub fn run_instance(&self, params: &GenParams, instance: u64) -> Result<(), Verdict> {
        (self.check)(params, instance, &mut super::instance_rng(params.seed, self.family, instance))
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Verdict::Fail(format!($($msg)+)));
        }
    };
}

fn found<T>(x: Option<T>, what: &str) -> Result<T, Verdict> {
    x.ok_or_else(|| Verdict::Skip(format!("no {what} found")))
}

fn iso(a: &GraphRef, b: &GraphRef) -> bool {
    find_isomorphism(a, b).is_some()
}

pub const PROPERTIES: &[Property] = &[
    Property {
        name: "graph.generator_valid",
        family: "graph",
        check: graph_generator_valid,
    },
    Property {
        name: "graph.category_laws",
        family: "morphisms",
        check: graph_category_laws,
    },
    Property {
        name: "category.pushout_oracle",
        family: "span",
        check: pushout_oracle,
    },
    Property {
        name: "category.pullback_oracle",
        family: "cospan",
        check: pullback_oracle,
    },
    Property {
        name: "category.wide_limit_oracle",
        family: "sink",
        check: wide_limit_oracle,
    },
    Property {
        name: "category.wide_colimit_oracle",
        family: "source",
        check: wide_colimit_oracle,
    },
    Property {
        name: "category.pushout_complement_reglues",
        family: "derivation",
        check: pushout_complement_reglues,
    },
    Property {
        name: "rewriting.rule_generator_valid",
        family: "rule",
        check: rule_generator_valid,
    },
    Property {
        name: "rewriting.derive_squares",
        family: "derivation",
        check: derive_squares,
    },
    Property {
        name: "rewriting.dangling_rejected",
        family: "dangling",
        check: dangling_rejected,
    },
    Property {
        name: "rewriting.associated_span_round_trip",
        family: "derivation",
        check: associated_span_round_trip,
    },
    Property {
        name: "rewriting.coherence_tracing_complete",
        family: "common-host",
        check: coherence_tracing_complete,
    },
    Property {
        name: "rewriting.degenerate_pct",
        family: "derivation",
        check: degenerate_pct,
    },
    Property {
        name: "rewriting.pct_invariants",
        family: "coherent-family",
        check: pct_invariants,
    },
    Property {
        name: "parallelism.analysis",
        family: "parallel-pair",
        check: analysis,
    },
    Property {
        name: "parallelism.independence_implies_coherence",
        family: "parallel-pair",
        check: independence_implies_coherence,
    },
    Property {
        name: "parallelism.witness_uniqueness",
        family: "parallel-pair",
        check: witness_uniqueness,
    },
    Property {
        name: "parallelism.roundtrip_from_parallel",
        family: "parallel-pair",
        check: roundtrip_from_parallel,
    },
    Property {
        name: "parallelism.synthesis",
        family: "sequential-pair",
        check: synthesis,
    },
    Property {
        name: "parallelism.roundtrip_from_sequential",
        family: "sequential-pair",
        check: roundtrip_from_sequential,
    },
    Property {
        name: "parallelism.derived_rule",
        family: "derived",
        check: derived_rule_sound,
    },
];

fn graph_generator_valid(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let g = gen_graph(p, rng);
    validate_graph(&g.to_raw()).map_err(|v| Verdict::Fail(v.to_string()))?;
    ensure!(g.node_count() <= p.max_nodes && g.edge_count() <= p.max_edges, "bounds exceeded");
    Ok(())
}

fn graph_category_laws(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let c = Arc::new(gen_graph(p, rng));
    let g = gen_morphism_into(&c, rng.gen_bool(0.5), p, rng);
    let f = gen_morphism_into(g.dom_ref(), rng.gen_bool(0.5), p, rng);
    let h = gen_morphism_from(&c, rng.gen_bool(0.5), p, rng);
    ensure!(h.after(&g)?.after(&f)? == h.after(&g.after(&f)?)?, "composition is not associative");
    ensure!(Morphism::identity(g.cod_ref()).after(&g)? == g, "left identity fails");
    ensure!(g.after(&Morphism::identity(g.dom_ref()))? == g, "right identity fails");
    Ok(())
}

fn pushout_oracle(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let a = Arc::new(gen_graph(p, rng));
    let f = gen_morphism_from(&a, rng.gen_bool(0.5), p, rng);
    let g = gen_morphism_from(&a, rng.gen_bool(0.5), p, rng);
    let po = pushout(&f, &g)?;
    let reference = oracle_pushout(&f, &g);
    colimits_agree(&[po.left_inj.clone(), po.right_inj.clone()], &[reference.left_inj, reference.right_inj])?;
    ensure!(is_pushout_square(&f, &g, &po.left_inj, &po.right_inj), "pushout fails its own check");
    Ok(())
}

fn pullback_oracle(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let d = Arc::new(gen_graph(p, rng));
    let f = gen_morphism_into(&d, rng.gen_bool(0.5), p, rng);
    let g = gen_morphism_into(&d, rng.gen_bool(0.5), p, rng);
    let pb = pullback(&f, &g)?;
    let reference = oracle_pullback(&f, &g);
    limits_agree(&[pb.proj_left, pb.proj_right], &[reference.proj_left, reference.proj_right])?;
    Ok(())
}

fn wide_limit_oracle(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let g = Arc::new(gen_graph(p, rng));
    let arity = rng.gen_range(1..=3);
    let mono = rng.gen_bool(0.5);
    let sink: Vec<Morphism> = (0..arity).map(|_| gen_morphism_into(&g, mono, p, rng)).collect();
    let reference = oracle_wide_limit(&sink);
    let direct = wide_limit(&sink)?;
    limits_agree(&direct.projections, &reference.projections)?;
    let (iterated, _) = wide_limit_iterated(&sink)?;
    limits_agree(&iterated.projections, &reference.projections).map_err(|e| format!("iterated: {e}"))?;
    Ok(())
}

fn wide_colimit_oracle(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let c = Arc::new(gen_graph(p, rng));
    let arity = rng.gen_range(1..=3);
    let mono = rng.gen_bool(0.5);
    let source: Vec<Morphism> = (0..arity).map(|_| gen_morphism_from(&c, mono, p, rng)).collect();
    let colim = wide_colimit(&source)?;
    let reference = oracle_wide_colimit(&source);
    colimits_agree(&colim.injections, &reference.injections)?;
    Ok(())
}

fn derivation(p: &GenParams, rng: &mut Rng8) -> Result<DirectTransformation, Verdict> {
    found(gen_derivation(p, rng), "derivation")
}

fn pushout_complement_reglues(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let t = derivation(p, rng)?;
    let left = pushout(&t.rule.l, &t.k)?;
    colimits_agree(&[left.left_inj, left.right_inj], &[t.m.clone(), t.f.clone()]).map_err(|e| format!("left square: {e}"))?;
    let right = pushout(&t.ki(), &t.rule.r)?;
    colimits_agree(&[right.left_inj, right.right_inj], &[t.g.clone(), t.n.clone()]).map_err(|e| format!("right square: {e}"))?;
    Ok(())
}

fn rule_generator_valid(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    validate_rule(&gen_rule(p, rng))?;
    Ok(())
}

fn derive_squares(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let t = derivation(p, rng)?;
    ensure!(t.f.after(&t.k)? == t.m.after(&t.rule.l)?, "left square does not commute");
    t.verify()?;
    ensure!(t.is_weak_dpo, "derived step is not a weak DPO");
    Ok(())
}

/// Adds an edge at the image of a deleted node; the step must then be refused.
fn dangling_rejected(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let params = GenParams {
        rule_shape: RuleShape {
            deleted: 3,
            ..p.rule_shape
        },
        ..p.clone()
    };
    let rule = gen_rule(&params, rng);
    let deleted: Vec<&str> = rule.lhs().node_ids().filter(|x| !rule.context().has_node(x)).collect();
    let Some(&victim) = deleted.first() else {
        return Err(Verdict::Skip("rule deletes no node".into()));
    };
    let host = gen_host(&[rule.lhs()], p, rng);
    let m = found(random_match(&rule, &host, p, rng), "match")?;
    let mut with_edge = (*host).clone();
    let at = m.node(victim);
    with_edge.add_edge("dangling", at, at, p.label_alphabet[0].clone())?;
    let with_edge = Arc::new(with_edge);
    let m = Morphism::new(m.dom_ref().clone(), with_edge, m.node_map().clone(), m.edge_map().clone())?;
    match derive_for(p, &rule, &m) {
        Err(Error::Gluing(GluingFailure::Dangling { .. })) => Ok(()),
        Err(e) => Err(Verdict::Fail(format!("expected a dangling failure, got: {e}"))),
        Ok(_) => Err(Verdict::Fail("step with a dangling edge was accepted".into())),
    }
}

fn associated_span_round_trip(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let t = derivation(p, rng)?;
    let hat = hat_gamma(&t)?;
    ensure!(hat.is_weak_dpo, "hat transformation is not a weak DPO");
    let back = assoc_to_weak(&hat, &t.rule)?;
    ensure!(iso(back.result(), t.result()), "round trip changed the result");
    ensure!(back == t, "round trip changed the transformation");
    // The other direction: any step of the associated span comes from one of the rule.
    let assoc = associated_span(&t.rule)?;
    let delta = derive(&assoc.span, &t.m)?;
    let gamma = assoc_to_weak(&delta, &t.rule)?;
    ensure!(iso(gamma.result(), delta.result()), "associated step has a different result");
    Ok(())
}

fn coherence_tracing_complete(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let mut pair = None;
    for _ in 0..ATTEMPTS {
        let r1 = gen_rule(p, rng);
        let r2 = gen_rule(p, rng);
        let host = gen_host(&[r1.lhs(), r2.lhs()], p, rng);
        let (Some(m1), Some(m2)) = (random_match(&r1, &host, p, rng), random_match(&r2, &host, p, rng)) else {
            continue;
        };
        if let (Ok(t1), Ok(t2)) = (derive_for(p, &r1, &m1), derive_for(p, &r2, &m2)) {
            pair = Some([t1, t2]);
            break;
        }
    }
    let gammas = found(pair, "pair of steps")?;
    let traced = coherence_witness(&gammas);
    let mut all_exist = true;
    for a in 0..2 {
        let b = 1 - a;
        let target = gammas[a].f.after(&gammas[a].ki())?;
        let brute: Vec<Morphism> = enumerate_morphisms(gammas[a].rule.interface(), gammas[b].context(), false)
            .into_iter()
            .filter(|j| gammas[b].f.after(j).map(|x| x == target).unwrap_or(false))
            .collect();
        ensure!(brute.len() <= 1, "commuting morphism I_{a} → D_{b} is not unique");
        match (&traced, brute.first()) {
            (Ok(w), Some(j)) => ensure!(w.j[a][b] == *j, "tracing and enumeration disagree"),
            (_, None) => all_exist = false,
            _ => {}
        }
    }
    ensure!(traced.is_ok() == all_exist, "tracing and enumeration disagree on coherence");
    Ok(())
}

fn degenerate_pct(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let t = derivation(p, rng)?;
    let pct = build_pct(&coherence_witness(std::slice::from_ref(&t))?)?;
    verify_pct(&pct)?;
    ensure!(iso(&pct.result, t.result()), "single PCT differs from its step");
    Ok(())
}

fn pct_invariants(p: &GenParams, instance: u64, rng: &mut Rng8) -> Check {
    let arity = 1 + (instance % 3) as usize;
    let w = found(gen_coherent_family(arity, p, rng), "coherent family")?;
    let pct = build_pct(&w)?;
    verify_pct(&pct)?;
    let first = pct.h[0].after(&pct.s[0])?;
    for (h, s) in pct.h.iter().zip(&pct.s) {
        ensure!(h.after(s)? == first, "colimit legs disagree on C");
    }
    Ok(())
}

fn analysis(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2, w) = found(gen_parallel_pair(p, rng), "parallel independent pair")?;
    let pp = pair_pct(&t1, &t2, &w)?;
    verify_pct(&pp.pct)?;
    let (t2p, sw, _) = analyze(&pp)?;
    t2p.verify()?;
    ensure!(t2p.is_weak_dpo, "analysed step is not a weak DPO");
    ensure!(t2p.host() == t1.result(), "analysed step does not act on H_1");
    ensure!(iso(t2p.result(), &pp.pct.result), "analysed result differs from the PCT result");
    let checked = check_sequential_independence(&t1, &t2p)?;
    ensure!(checked == sw, "sequential witness differs from the analysed one");
    Ok(())
}

fn independence_implies_coherence(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2, w) = found(gen_parallel_pair(p, rng), "parallel independent pair")?;
    let pp = pair_pct(&t1, &t2, &w)?;
    let traced = coherence_witness(&[t1, t2])?;
    ensure!(traced.j == pp.pct.witness.j, "induced coherence differs from the traced one");
    Ok(())
}

fn witness_uniqueness(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2, w) = found(gen_parallel_pair(p, rng), "parallel independent pair")?;
    for (t, other, j) in [(&t1, &t2, &w.j1), (&t2, &t1, &w.j2)] {
        let brute: Vec<Morphism> = enumerate_morphisms(t.rule.lhs(), other.context(), false)
            .into_iter()
            .filter(|x| other.f.after(x).map(|y| y == t.m).unwrap_or(false))
            .collect();
        ensure!(brute.len() == 1, "{} commuting morphisms instead of one", brute.len());
        ensure!(brute[0] == *j, "witness differs from the enumerated one");
    }
    Ok(())
}

fn roundtrip_from_parallel(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2, _) = found(gen_parallel_pair(p, rng), "parallel independent pair")?;
    ensure!(roundtrip_check(&t1, &t2, RoundTrip::FromParallel), "analysis then synthesis changed the step");
    Ok(())
}

fn synthesis(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2p, sw) = found(gen_sequential_pair(p, rng), "sequential independent pair")?;
    let (t2, pp) = synthesize(&t1, &t2p, &sw)?;
    t2.verify()?;
    ensure!(t2.is_weak_dpo && t2.host() == t1.host(), "synthesised step is not a weak DPO on G");
    let w = check_parallel_independence(&t1, &t2)?;
    ensure!(w == pp.witness, "parallel witness differs from the synthesised one");
    verify_pct(&pp.pct)?;
    ensure!(iso(&pp.pct.result, t2p.result()), "PCT result differs from the sequential result");
    let fresh = pair_pct(&t1, &t2, &w)?;
    ensure!(iso(&fresh.pct.result, t2p.result()), "fresh PCT result differs from the sequential result");
    Ok(())
}

fn roundtrip_from_sequential(p: &GenParams, _: u64, rng: &mut Rng8) -> Check {
    let (t1, t2p, _) = found(gen_sequential_pair(p, rng), "sequential independent pair")?;
    ensure!(roundtrip_check(&t1, &t2p, RoundTrip::FromSequential), "synthesis then analysis changed the step");
    Ok(())
}

fn derived_rule_sound(p: &GenParams, instance: u64, rng: &mut Rng8) -> Check {
    let arity = 1 + (instance % 3) as usize;
    let w = found(gen_coherent_family(arity, p, rng), "coherent family")?;
    let pct = build_pct(&w)?;
    let dr = derived_rule(&pct)?;
    ensure!(dr.span.l.is_injective() && dr.span.r.is_injective(), "derived legs are not injective");

    let own = derive_for(p, &dr.span, &Morphism::identity(dr.span.lhs()))?;
    ensure!(iso(own.result(), &pct.result), "derived rule on its own host misses H");
    verify_derived_application(&dr, &own)?;

    let other = found(gen_other_application(&dr.span, pct.host(), p, rng), "other host")?;
    ensure!(other.host() != pct.host(), "other host equals the original");
    let tp = verify_derived_application(&dr, &other)?;
    ensure!(iso(tp.result(), other.result()), "transported result differs from H′");
    Ok(())
}
