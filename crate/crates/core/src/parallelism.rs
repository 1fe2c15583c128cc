//! Parallel and sequential independence of two transformations, the
//! correspondence between them, and rules derived from parallel coherent
//! transformations.

use crate::category::{
    factor_through_limit, is_colimit, is_limit, is_pullback_square, is_pushout_square, lift_through_mono, pullback,
    pushout, PushoutResult, WideLimit,
};
use crate::error::{Error, Result};
use crate::graph::{find_isomorphism, GraphRef, Morphism};
use crate::rewriting::{
    assemble_direct_transformation, associated_span, build_pct, coherence_witness, hat_gamma, verify_pct,
    CoherenceWitness, DirectTransformation, PctDiagram, WeakSpan,
};

/// `j1 : L_1 → D_2` and `j2 : L_2 → D_1` with `f_2 ∘ j1 = m_1`, `f_1 ∘ j2 = m_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelIndependenceWitness {
    pub j1: Morphism,
    pub j2: Morphism,
}

/// `j1p : R′_1 → D′_2` and `j2p : L_2 → D_1` with `f′_2 ∘ j1p = n′_1`, `g_1 ∘ j2p = m′_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialIndependenceWitness {
    pub j1p: Morphism,
    pub j2p: Morphism,
}

/// The PCT of two parallel independent transformations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairPct {
    pub witness: ParallelIndependenceWitness,
    pub pct: PctDiagram,
}

impl PairPct {
    pub fn gamma1(&self) -> &DirectTransformation {
        &self.pct.witness.gammas[0]
    }

    pub fn gamma2(&self) -> &DirectTransformation {
        &self.pct.witness.gammas[1]
    }
}

/// Morphisms computed on the way from a parallel pair to a sequential one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisIntermediates {
    /// `K_1 → C`
    pub dp1: Morphism,
    /// `K_2 → C`
    pub dp2: Morphism,
    /// `R′_1 → F_1`
    pub jp1: Morphism,
    /// `F_1 → H_1`
    pub fp2: Morphism,
    pub mp2: Morphism,
    pub kp2: Morphism,
    pub np2: Morphism,
}

fn require_weak_dpo(gamma: &DirectTransformation) -> Result<()> {
    if !gamma.is_weak_dpo {
        return Err(Error::Precondition(format!("`{}` step is not a weak DPO", gamma.rule.name)));
    }
    Ok(())
}

fn reconstruction(what: &str) -> Error {
    Error::Reconstruction(what.to_string())
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(reconstruction(what))
    }
}

pub fn check_parallel_independence(
    g1: &DirectTransformation,
    g2: &DirectTransformation,
) -> Result<ParallelIndependenceWitness> {
    require_weak_dpo(g1)?;
    require_weak_dpo(g2)?;
    if g1.host() != g2.host() {
        return Err(Error::Precondition("transformations act on different hosts".into()));
    }
    let j1 = lift_through_mono(&g1.m, &g2.f)
        .map_err(|item| Error::NotIndependent(format!("{item} of the first left-hand side is not in the second context")))?;
    let j2 = lift_through_mono(&g2.m, &g1.f)
        .map_err(|item| Error::NotIndependent(format!("{item} of the second left-hand side is not in the first context")))?;
    Ok(ParallelIndependenceWitness { j1, j2 })
}

/// `g2p` must act on the result of `g1`.
pub fn check_sequential_independence(
    g1: &DirectTransformation,
    g2p: &DirectTransformation,
) -> Result<SequentialIndependenceWitness> {
    require_weak_dpo(g1)?;
    require_weak_dpo(g2p)?;
    if g2p.host() != g1.result() {
        return Err(Error::Precondition("second step does not act on the result of the first".into()));
    }
    let hat = hat_gamma(g1)?;
    let j1p = lift_through_mono(&hat.n, &g2p.f)
        .map_err(|item| Error::NotIndependent(format!("{item} of the first result is not in the second context")))?;
    let j2p = lift_through_mono(&g2p.m, &g1.g)
        .map_err(|item| Error::NotIndependent(format!("{item} of the second left-hand side is not in the first context")))?;
    Ok(SequentialIndependenceWitness { j1p, j2p })
}

fn induced_coherence(
    g1: &DirectTransformation,
    g2: &DirectTransformation,
    w: &ParallelIndependenceWitness,
) -> Result<CoherenceWitness> {
    let j12 = w.j1.after(&g1.rule.l)?.after(&g1.rule.i)?;
    let j21 = w.j2.after(&g2.rule.l)?.after(&g2.rule.i)?;
    CoherenceWitness::from_matrix(vec![g1.clone(), g2.clone()], vec![vec![g1.ki(), j12], vec![j21, g2.ki()]])
}

pub fn pair_pct(
    g1: &DirectTransformation,
    g2: &DirectTransformation,
    w: &ParallelIndependenceWitness,
) -> Result<PairPct> {
    if g2.f.after(&w.j1)? != g1.m || g1.f.after(&w.j2)? != g2.m {
        return Err(Error::Precondition("independence witness does not commute".into()));
    }
    let coherence = induced_coherence(g1, g2, w)?;
    Ok(PairPct {
        witness: w.clone(),
        pct: build_pct(&coherence)?,
    })
}

/// From a parallel pair to the second step applied after the first.
pub fn analyze(
    pp: &PairPct,
) -> Result<(DirectTransformation, SequentialIndependenceWitness, AnalysisIntermediates)> {
    let pct = &pp.pct;
    if pct.arity() != 2 {
        return Err(Error::Precondition("pair PCT must have exactly two transformations".into()));
    }
    let (g1, g2) = (pp.gamma1(), pp.gamma2());
    let (r1, r2) = (&g1.rule, &g2.rule);
    let (j1, j2) = (&pp.witness.j1, &pp.witness.j2);
    let lim = WideLimit {
        apex: pct.c.clone(),
        projections: pct.e.clone(),
        sink: vec![g1.f.clone(), g2.f.clone()],
    };

    let dp1 = factor_through_limit(&lim, &[g1.k.clone(), j1.after(&r1.l)?])?
        .ok_or_else(|| reconstruction("K_1 does not factor through C"))?;
    let dp2 = factor_through_limit(&lim, &[j2.after(&r2.l)?, g2.k.clone()])?
        .ok_or_else(|| reconstruction("K_2 does not factor through C"))?;
    check(dp1.after(&r1.i)? == pct.d[0], "d_1 ≠ d′_1 ∘ i_1")?;
    check(dp2.after(&r2.i)? == pct.d[1], "d_2 ≠ d′_2 ∘ i_2")?;

    let assoc = pushout(&r1.i, &r1.r)?;
    let jp1 = assoc
        .factor(&pct.s[0].after(&dp1)?, &pct.o[0])?
        .ok_or_else(|| reconstruction("no mediator R′_1 → F_1"))?;
    let f1_stored = PushoutResult {
        apex: pct.partial_result(0).clone(),
        left_inj: pct.s[0].clone(),
        right_inj: pct.o[0].clone(),
        span: (pct.d[0].clone(), r1.r.clone()),
    };
    let fp2 = f1_stored
        .factor(&g1.g.after(&pct.e[0])?, &g1.n)?
        .ok_or_else(|| reconstruction("no mediator F_1 → H_1"))?;

    let mp2 = g1.g.after(j2)?;
    let kp2 = pct.s[0].after(&dp2)?;
    let np2 = pct.h[1].after(&pct.o[1])?;
    let g2p = DirectTransformation::from_parts(
        r2.clone(),
        mp2.clone(),
        kp2.clone(),
        fp2.clone(),
        pct.h[0].clone(),
        np2.clone(),
    )?;
    check(g2p.is_weak_dpo, "analysed step is not a weak DPO")?;

    // jp1 lands in F_1, which is the context of the analysed step.
    let hat = hat_gamma(g1)?;
    let jp1 = Morphism::new(hat.rule.rhs().clone(), g2p.context().clone(), jp1.node_map().clone(), jp1.edge_map().clone())?;
    check(fp2.after(&jp1)? == hat.n, "f′_2 ∘ j′_1 ≠ n′_1")?;
    let sw = SequentialIndependenceWitness {
        j1p: jp1.clone(),
        j2p: j2.clone(),
    };
    Ok((
        g2p,
        sw,
        AnalysisIntermediates {
            dp1,
            dp2,
            jp1,
            fp2,
            mp2,
            kp2,
            np2,
        },
    ))
}

/// From a sequential pair to the second step applied directly to `G`, with the
/// PCT assembled from the intermediate objects of the construction.
pub fn synthesize(
    g1: &DirectTransformation,
    g2p: &DirectTransformation,
    sw: &SequentialIndependenceWitness,
) -> Result<(DirectTransformation, PairPct)> {
    require_weak_dpo(g1)?;
    require_weak_dpo(g2p)?;
    let hat = hat_gamma(g1)?;
    if g2p.f.after(&sw.j1p)? != hat.n || g1.g.after(&sw.j2p)? != g2p.m {
        return Err(Error::Precondition("sequential independence witness does not commute".into()));
    }
    let (r1, r2) = (&g1.rule, &g2p.rule);
    let assoc = associated_span(r1)?;

    let pb = pullback(&g1.g, &g2p.f)?;
    let (e1, s1) = (pb.proj_left.clone(), pb.proj_right.clone());
    let rp1 = Morphism::new(r1.context().clone(), hat.rule.rhs().clone(), assoc.rp.node_map().clone(), assoc.rp.edge_map().clone())?;
    let dp1 = pb
        .factor(&g1.k, &sw.j1p.after(&rp1)?)?
        .ok_or_else(|| reconstruction("K_1 does not factor through C"))?;
    let dp2 = pb
        .factor(&sw.j2p.after(&r2.l)?, &g2p.k)?
        .ok_or_else(|| reconstruction("K_2 does not factor through C"))?;

    let seven = pushout(&dp1, &r1.l)?;
    let (e2, j1) = (seven.left_inj.clone(), seven.right_inj.clone());
    let f2 = seven
        .factor(&g1.f.after(&e1)?, &g1.m)?
        .ok_or_else(|| reconstruction("no mediator D_2 → G"))?;
    let k2 = e2.after(&dp2)?;
    let m2 = g1.f.after(&sw.j2p)?;
    let g2 = assemble_direct_transformation(r2, &m2, &k2, &f2)?;
    check(g2.is_weak_dpo, "synthesised step is not a weak DPO")?;

    let witness = ParallelIndependenceWitness { j1, j2: sw.j2p.clone() };
    let coherence = induced_coherence(g1, &g2, &witness)?;

    let d1 = dp1.after(&r1.i)?;
    let d2 = dp2.after(&r2.i)?;
    let o1 = sw.j1p.after(&assoc.ip.with_cod(hat.rule.rhs().clone()))?;
    let f2_po = pushout(&d2, &r2.r)?;
    let h1 = g2p.g.clone();
    let h2 = f2_po
        .factor(&h1.after(&s1)?, &g2p.n)?
        .ok_or_else(|| reconstruction("no mediator F_2 → H"))?;
    let pct = PctDiagram {
        witness: coherence,
        c: pb.apex.clone(),
        e: vec![e1, e2],
        d: vec![d1, d2],
        s: vec![s1, f2_po.left_inj.clone()],
        o: vec![o1, f2_po.right_inj.clone()],
        h: vec![h1, h2],
        result: g2p.result().clone(),
    };
    verify_pct(&pct)?;
    Ok((g2, PairPct { witness, pct }))
}

/// Which way [`roundtrip_check`] goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoundTrip {
    /// `second` acts on `G`: analyse, then synthesise back.
    FromParallel,
    /// `second` acts on `H_1`: synthesise, then analyse back.
    FromSequential,
}

/// The isomorphism of transformations of one rule on one host that is the
/// identity on the host: `φ` on contexts is forced by `f_b ∘ φ = f_a`, `ψ` on
/// results is the mediator out of the pushout of `a`. Returns `(φ, ψ)`.
fn transformation_iso(a: &DirectTransformation, b: &DirectTransformation) -> Option<(Morphism, Morphism)> {
    if a.m != b.m {
        return None;
    }
    let phi = lift_through_mono(&a.f, &b.f).ok()?;
    if !phi.is_isomorphism() || phi.after(&a.k).ok()? != b.k {
        return None;
    }
    let right = pushout(&a.ki(), &a.rule.r).ok()?;
    let to_b = b.g.after(&phi).ok()?;
    let psi_canon = right.factor(&to_b, &b.n).ok()??;
    // Move from the canonical pushout to `a`'s own result.
    let back = right.factor(&a.g, &a.n).ok()??.inverse()?;
    let psi = psi_canon.after(&back).ok()?;
    (psi.is_isomorphism() && psi.after(&a.g).ok()? == to_b && psi.after(&a.n).ok()? == b.n).then_some((phi, psi))
}

/// Whether going to the other side of the correspondence and back returns the
/// input up to an isomorphism that fixes `G`, `H_1`, `H` and the rules.
pub fn roundtrip_check(g1: &DirectTransformation, second: &DirectTransformation, direction: RoundTrip) -> bool {
    let attempt = || -> Result<bool> {
        match direction {
            RoundTrip::FromParallel => {
                let w = check_parallel_independence(g1, second)?;
                let pp = pair_pct(g1, second, &w)?;
                let (g2p, sw, _) = analyze(&pp)?;
                let (g2b, ppb) = synthesize(g1, &g2p, &sw)?;
                Ok(transformation_iso(second, &g2b).is_some()
                    && find_isomorphism(&pp.pct.result, &ppb.pct.result).is_some())
            }
            RoundTrip::FromSequential => {
                let sw = check_sequential_independence(g1, second)?;
                let (_, pp) = synthesize(g1, second, &sw)?;
                let (g2pb, swb, _) = analyze(&pp)?;
                let Some((phi, psi)) = transformation_iso(second, &g2pb) else {
                    return Ok(false);
                };
                Ok(psi == Morphism::identity(second.result())
                    && swb.j2p == sw.j2p
                    && swb.j1p == phi.after(&sw.j1p)?)
            }
        }
    };
    attempt().unwrap_or(false)
}

/// The span `G ← C → H` read off a PCT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedRule {
    pub span: WeakSpan,
    pub source: PctDiagram,
}

pub fn derived_rule(pct: &PctDiagram) -> Result<DerivedRule> {
    let gamma1 = &pct.witness.gammas[0];
    let l = gamma1.f.after(&pct.e[0])?;
    let r = pct.h[0].after(&pct.s[0])?;
    Ok(DerivedRule {
        span: WeakSpan::plain("derived", l, r)?,
        source: pct.clone(),
    })
}

/// The PCT of the transported transformations on `G′`, with every
/// intermediate morphism of the transport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportedPct {
    /// `G → G′`
    pub g: Morphism,
    /// `C → C′`
    pub c: Morphism,
    /// `D_a → D′_a`
    pub t: Vec<Morphism>,
    /// `F_a → F′_a`
    pub tp: Vec<Morphism>,
    pub fp: Vec<Morphism>,
    pub ep: Vec<Morphism>,
    pub sp: Vec<Morphism>,
    pub hp: Vec<Morphism>,
    pub np: Vec<Morphism>,
    pub gp: Vec<Morphism>,
    pub pct: PctDiagram,
}

impl TransportedPct {
    pub fn result(&self) -> &GraphRef {
        &self.pct.result
    }
}

/// Rebuilds the transformations of the derived rule's source PCT on the host
/// of `applied` and checks that they form a PCT with result `H′`.
pub fn verify_derived_application(dr: &DerivedRule, applied: &DirectTransformation) -> Result<TransportedPct> {
    if applied.rule != dr.span {
        return Err(Error::Precondition("transformation is not an application of the derived rule".into()));
    }
    if !applied.is_weak_dpo {
        return Err(Error::Precondition("application is not a weak DPO".into()));
    }
    let src = &dr.source;
    let p = src.arity();
    let g = applied.m.clone();
    let c = applied.k.clone();
    let gammas = &src.witness.gammas;

    let mut out = TransportedPct {
        g: g.clone(),
        c: c.clone(),
        t: Vec::new(),
        tp: Vec::new(),
        fp: Vec::new(),
        ep: Vec::new(),
        sp: Vec::new(),
        hp: Vec::new(),
        np: Vec::new(),
        gp: Vec::new(),
        pct: src.clone(),
    };
    let mut new_gammas = Vec::with_capacity(p);
    for a in 0..p {
        let ga = &gammas[a];
        let two = pushout(&c, &src.e[a])?;
        let (ep_a, t_a) = (two.left_inj.clone(), two.right_inj.clone());
        let fp_a = two
            .factor(&applied.f, &g.after(&ga.f)?)?
            .ok_or_else(|| reconstruction("no mediator D′_a → G′"))?;
        check(is_pushout_square(&ga.f, &t_a, &g, &fp_a), "transported context square is not a pushout")?;

        let three = pushout(&c, &src.s[a])?;
        let (sp_a, tp_a) = (three.left_inj.clone(), three.right_inj.clone());
        let hp_a = three
            .factor(&applied.g, &applied.n.after(&src.h[a])?)?
            .ok_or_else(|| reconstruction("no mediator F′_a → H′"))?;
        check(is_pushout_square(&src.h[a], &tp_a, &applied.n, &hp_a), "transported result square is not a pushout")?;

        let m_a = g.after(&ga.m)?;
        let k_a = t_a.after(&ga.k)?;
        let gamma = assemble_direct_transformation(&ga.rule, &m_a, &k_a, &fp_a)?;
        check(gamma.is_weak_dpo, "transported step is not a weak DPO")?;
        out.np.push(gamma.n.clone());
        out.gp.push(gamma.g.clone());
        new_gammas.push(gamma);
        out.t.push(t_a);
        out.tp.push(tp_a);
        out.fp.push(fp_a);
        out.ep.push(ep_a);
        out.sp.push(sp_a);
        out.hp.push(hp_a);
    }

    let mut j = Vec::with_capacity(p);
    for row in &src.witness.j {
        let mut new_row = Vec::with_capacity(p);
        for (b, jab) in row.iter().enumerate() {
            new_row.push(out.t[b].after(jab)?);
        }
        j.push(new_row);
    }
    let witness = CoherenceWitness::from_matrix(new_gammas, j)?;
    let sink: Vec<Morphism> = out.fp.clone();
    check(is_limit(&sink, &out.ep), "C′ is not a limit of the transported contexts")?;
    check(is_colimit(&out.sp, &out.hp), "H′ is not a colimit of the transported pushouts")?;

    let d: Vec<Morphism> = src.d.iter().map(|d| c.after(d)).collect::<Result<_>>()?;
    let o: Vec<Morphism> = src.o.iter().zip(&out.tp).map(|(o, t)| t.after(o)).collect::<Result<_>>()?;
    let pct = PctDiagram {
        witness,
        c: c.cod_ref().clone(),
        e: out.ep.clone(),
        d,
        s: out.sp.clone(),
        o,
        h: out.hp.clone(),
        result: applied.result().clone(),
    };
    verify_pct(&pct).map_err(|e| Error::Reconstruction(format!("transported diagram: {e}")))?;
    // The transported transformations, combined from scratch, give the same result.
    let fresh = build_pct(&coherence_witness(&pct.witness.gammas)?)?;
    check(find_isomorphism(&fresh.result, &pct.result).is_some(), "fresh PCT result differs from H′")?;
    out.pct = pct;
    Ok(out)
}

/// Whether `(e_1, e_2)` over `(f_1, f_2)` is a pullback; used by tests.
pub fn is_context_pullback(pct: &PctDiagram) -> bool {
    pct.arity() == 2
        && is_pullback_square(&pct.e[0], &pct.e[1], &pct.witness.gammas[0].f, &pct.witness.gammas[1].f)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;
    use crate::rewriting::library::*;
    use crate::rewriting::{derive, find_matches};

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn at(rule: &WeakSpan, g: &GraphRef, node: &str) -> DirectTransformation {
        let m = Morphism::new(rule.lhs().clone(), g.clone(), map(&[("a", node)]), map(&[])).unwrap();
        derive(rule, &m).unwrap()
    }

    fn iso(a: &GraphRef, b: &Graph) -> bool {
        find_isomorphism(a, b).is_some()
    }

    fn identity_pair() -> (DirectTransformation, DirectTransformation) {
        let g = n1().into_ref();
        let rule = identity_rule(&n1());
        let m = find_matches(&rule, &g, true).remove(0);
        let t = derive(&rule, &m).unwrap();
        (t.clone(), t)
    }

    fn delete_pair() -> (DirectTransformation, DirectTransformation) {
        let g = d2().into_ref();
        let rule = delete_node();
        (at(&rule, &g, "u"), at(&rule, &g, "v"))
    }

    fn loop_pair() -> (DirectTransformation, DirectTransformation) {
        let g = n1().into_ref();
        (at(&add_loop("α"), &g, "a"), at(&add_loop("β"), &g, "a"))
    }

    fn two_loops() -> Graph {
        n1().with_edge("α", "a", "a", "α").with_edge("β", "a", "a", "β")
    }

    #[test]
    fn parallel_independence_cases() {
        let (a, b) = identity_pair();
        assert!(check_parallel_independence(&a, &b).is_ok());
        let (a, b) = delete_pair();
        let w = check_parallel_independence(&a, &b).unwrap();
        assert_eq!(w.j1.node("a"), "u");
        assert_eq!(w.j2.node("a"), "v");

        let g = lp().into_ref();
        let rule = delete_loop();
        let m = find_matches(&rule, &g, true).remove(0);
        let t = derive(&rule, &m).unwrap();
        assert!(matches!(check_parallel_independence(&t, &t), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn pair_pct_cases() {
        let (a, b) = identity_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        assert!(iso(&pp.pct.result, &n1()));
        assert!(is_context_pullback(&pp.pct));

        let (a, b) = delete_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        assert!(pp.pct.result.is_empty());

        let (a, b) = loop_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        assert!(iso(&pp.pct.result, &two_loops()));
    }

    #[test]
    fn analysis_cases() {
        for (a, b) in [identity_pair(), delete_pair(), loop_pair()] {
            let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
            let (g2p, sw, _) = analyze(&pp).unwrap();
            assert_eq!(g2p.host(), a.result());
            assert!(find_isomorphism(g2p.result(), &pp.pct.result).is_some());
            assert_eq!(check_sequential_independence(&a, &g2p).unwrap(), sw);
            // The analysed step agrees with deriving the second rule on H_1 directly.
            let direct = derive(&b.rule, &g2p.m).unwrap();
            assert!(find_isomorphism(direct.result(), g2p.result()).is_some());
        }
        let (a, b) = delete_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let (g2p, _, _) = analyze(&pp).unwrap();
        assert_eq!(g2p.host().node_ids().collect::<Vec<_>>(), vec!["v"]);
        assert!(g2p.result().is_empty());
    }

    #[test]
    fn sequential_independence_cases() {
        let g = n1().into_ref();
        let t1 = at(&add_loop("x"), &g, "a");
        let t2 = at(&identity_rule(&n1()), t1.result(), "a");
        let idt = at(&identity_rule(&n1()), &g, "a");
        let after_id = at(&add_loop("x"), idt.result(), "a");
        assert!(check_sequential_independence(&idt, &after_id).is_ok());
        assert!(check_sequential_independence(&t1, &t2).is_ok());

        // Deleting the node that just received a loop: the loop dangles, so
        // use a rule that deletes both loop and node.
        let l = lp().into_ref();
        let e = empty().into_ref();
        let del_both = WeakSpan::new(
            "delete-looped-node",
            Morphism::inclusion(&e, &l).unwrap(),
            Morphism::identity(&e),
            Morphism::identity(&e),
        )
        .unwrap();
        let m = find_matches(&del_both, t1.result(), true).remove(0);
        let t3 = derive(&del_both, &m).unwrap();
        assert!(matches!(check_sequential_independence(&t1, &t3), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn synthesis_cases() {
        // delete-u then delete-v
        let g = d2().into_ref();
        let t1 = at(&delete_node(), &g, "u");
        let t2p = at(&delete_node(), t1.result(), "v");
        let sw = check_sequential_independence(&t1, &t2p).unwrap();
        let (t2, pp) = synthesize(&t1, &t2p, &sw).unwrap();
        assert_eq!(t2.m.node("a"), "v");
        assert!(pp.pct.result.is_empty());
        assert!(is_context_pullback(&pp.pct));

        let g = n1().into_ref();
        let t1 = at(&add_loop("α"), &g, "a");
        let t2p = at(&add_loop("β"), t1.result(), "a");
        let sw = check_sequential_independence(&t1, &t2p).unwrap();
        let (t2, pp) = synthesize(&t1, &t2p, &sw).unwrap();
        assert!(iso(t2.result(), &n1().with_edge("β", "a", "a", "β")));
        assert!(iso(&pp.pct.result, &two_loops()));
        // Independent pair, and the PCT rebuilt from scratch agrees.
        let w = check_parallel_independence(&t1, &t2).unwrap();
        assert_eq!(w, pp.witness);
        let fresh = pair_pct(&t1, &t2, &w).unwrap();
        assert!(find_isomorphism(&fresh.pct.result, &pp.pct.result).is_some());
    }

    #[test]
    fn round_trips() {
        for (a, b) in [identity_pair(), delete_pair(), loop_pair()] {
            assert!(roundtrip_check(&a, &b, RoundTrip::FromParallel));
            let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
            let (g2p, _, _) = analyze(&pp).unwrap();
            assert!(roundtrip_check(&a, &g2p, RoundTrip::FromSequential));
        }
    }

    #[test]
    fn roundtrip_rejects_a_different_step() {
        let (a, b) = delete_pair();
        let (_, c) = identity_pair();
        assert!(!roundtrip_check(&a, &c, RoundTrip::FromParallel));
        assert!(!roundtrip_check(&a, &b, RoundTrip::FromSequential));
    }

    #[test]
    fn derived_rules() {
        let (a, _) = identity_pair();
        let pct = build_pct(&coherence_witness(&[a]).unwrap()).unwrap();
        let dr = derived_rule(&pct).unwrap();
        assert!(dr.span.l.is_isomorphism() && dr.span.r.is_isomorphism());

        let (a, b) = loop_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let dr = derived_rule(&pp.pct).unwrap();
        assert!(iso(dr.span.lhs(), &n1()));
        assert!(iso(dr.span.context(), &n1()));
        assert!(iso(dr.span.rhs(), &two_loops()));

        let (a, b) = delete_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let dr = derived_rule(&pp.pct).unwrap();
        assert!(iso(dr.span.lhs(), &d2()));
        assert!(dr.span.context().is_empty() && dr.span.rhs().is_empty());
    }

    #[test]
    fn derived_rule_on_its_own_host() {
        let (a, b) = loop_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let dr = derived_rule(&pp.pct).unwrap();
        let id = Morphism::identity(dr.span.lhs());
        let applied = derive(&dr.span, &id).unwrap();
        assert!(find_isomorphism(applied.result(), &pp.pct.result).is_some());
        let tp = verify_derived_application(&dr, &applied).unwrap();
        assert!(tp.c.is_isomorphism() && tp.g.is_isomorphism());
    }

    #[test]
    fn derived_loops_transported_to_d2() {
        let (a, b) = loop_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let dr = derived_rule(&pp.pct).unwrap();
        let host = d2().into_ref();
        let m = Morphism::new(dr.span.lhs().clone(), host, map(&[("a", "u")]), map(&[])).unwrap();
        let applied = derive(&dr.span, &m).unwrap();
        let expected = d2().with_edge("α", "u", "u", "α").with_edge("β", "u", "u", "β");
        assert!(iso(applied.result(), &expected));
        let tp = verify_derived_application(&dr, &applied).unwrap();
        assert!(iso(tp.result(), &expected));
    }

    #[test]
    fn derived_deletion_transported_to_three_nodes() {
        let (a, b) = delete_pair();
        let pp = pair_pct(&a, &b, &check_parallel_independence(&a, &b).unwrap()).unwrap();
        let dr = derived_rule(&pp.pct).unwrap();
        let host = d2().with_node("w", "A").into_ref();
        let m = Morphism::new(dr.span.lhs().clone(), host, map(&[("u", "u"), ("v", "v")]), map(&[])).unwrap();
        let applied = derive(&dr.span, &m).unwrap();
        assert_eq!(applied.result().node_ids().collect::<Vec<_>>(), vec!["w"]);
        verify_derived_application(&dr, &applied).unwrap();
    }
}
