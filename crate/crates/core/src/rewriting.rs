//! Weak spans, direct transformations and parallel coherent transformations.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::category::{
    factor_through_limit, is_colimit, is_limit, is_pushout_square, lift_through_mono, pushout,
    pushout_complement_with, wide_colimit, wide_limit, DanglingPolicy,
};
use crate::error::{Error, Result};
use crate::graph::{for_each_morphism, GraphRef, MatchMode, Morphism};

/// A rule `L ←l− K ←i− I −r→ R`.
///
/// `K` is the context the rule keeps in place on the left; `I` is the part of
/// it that is glued into the right-hand side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakSpan {
    pub name: String,
    pub l: Morphism,
    pub i: Morphism,
    pub r: Morphism,
}

impl WeakSpan {
    /// Checks that the legs fit together; injectivity is checked by [`validate_rule`].
    pub fn new(name: impl Into<String>, l: Morphism, i: Morphism, r: Morphism) -> Result<Self> {
        let name = name.into();
        if i.cod() != l.dom() {
            return Err(Error::InvalidRule {
                rule: name,
                reason: "i does not land in the domain of l".into(),
            });
        }
        if r.dom() != i.dom() {
            return Err(Error::InvalidRule {
                rule: name,
                reason: "r and i start at different interfaces".into(),
            });
        }
        // Share one handle per object so compositions see identical endpoints.
        let i = i.with_cod(l.dom_ref().clone());
        let r = Morphism::new(i.dom_ref().clone(), r.cod_ref().clone(), r.node_map().clone(), r.edge_map().clone())?;
        Ok(WeakSpan { name, l, i, r })
    }

    /// A plain span `L ← K → R`, i.e. `I = K` and `i` the identity.
    pub fn plain(name: impl Into<String>, l: Morphism, r: Morphism) -> Result<Self> {
        let i = Morphism::identity(l.dom_ref());
        WeakSpan::new(name, l, i, r)
    }

    pub fn lhs(&self) -> &GraphRef {
        self.l.cod_ref()
    }

    pub fn context(&self) -> &GraphRef {
        self.l.dom_ref()
    }

    pub fn interface(&self) -> &GraphRef {
        self.i.dom_ref()
    }

    pub fn rhs(&self) -> &GraphRef {
        self.r.cod_ref()
    }
}

/// Ok iff all three legs are injective.
pub fn validate_rule(rule: &WeakSpan) -> Result<()> {
    for (leg, m) in [("l", &rule.l), ("i", &rule.i), ("r", &rule.r)] {
        if !m.is_injective() {
            return Err(Error::InvalidRule {
                rule: rule.name.clone(),
                reason: format!("{leg} is not injective"),
            });
        }
    }
    Ok(())
}

/// Matches `L → G`, canonically ordered.
pub fn find_matches(rule: &WeakSpan, g: &GraphRef, mono_only: bool) -> Vec<Morphism> {
    let mode = if mono_only { MatchMode::Injective } else { MatchMode::Any };
    let mut out = Vec::new();
    for_each_morphism(rule.lhs(), g, mode, |m| {
        out.push(m);
        ControlFlow::Continue(())
    });
    out
}

/// ```text
///   L ←l── K ←i── I ──r──→ R
///   m│     │k            │n
///   G ←f── D ─────g─────→ H
/// ```
/// with a commuting left square and a pushout on the right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectTransformation {
    pub rule: WeakSpan,
    pub m: Morphism,
    pub k: Morphism,
    pub f: Morphism,
    pub g: Morphism,
    pub n: Morphism,
    pub is_weak_dpo: bool,
}

impl DirectTransformation {
    pub fn host(&self) -> &GraphRef {
        self.m.cod_ref()
    }

    pub fn context(&self) -> &GraphRef {
        self.f.dom_ref()
    }

    pub fn result(&self) -> &GraphRef {
        self.g.cod_ref()
    }

    /// `k ∘ i : I → D`
    pub fn ki(&self) -> Morphism {
        self.k.after(&self.rule.i).expect("k and i compose")
    }

    /// Assembles a transformation from all six morphisms, checking both squares.
    pub fn from_parts(
        rule: WeakSpan,
        m: Morphism,
        k: Morphism,
        f: Morphism,
        g: Morphism,
        n: Morphism,
    ) -> Result<Self> {
        if f.after(&k)? != m.after(&rule.l)? {
            return Err(Error::SquareMismatch);
        }
        let ki = k.after(&rule.i)?;
        if !is_pushout_square(&ki, &rule.r, &g, &n) {
            return Err(Error::Reconstruction(format!(
                "right square of `{}` is not a pushout",
                rule.name
            )));
        }
        let is_weak_dpo = is_pushout_square(&rule.l, &k, &m, &f);
        Ok(DirectTransformation {
            rule,
            m,
            k,
            f,
            g,
            n,
            is_weak_dpo,
        })
    }

    /// Re-checks every invariant from scratch.
    pub fn verify(&self) -> Result<()> {
        let again = DirectTransformation::from_parts(
            self.rule.clone(),
            self.m.clone(),
            self.k.clone(),
            self.f.clone(),
            self.g.clone(),
            self.n.clone(),
        )?;
        if again.is_weak_dpo != self.is_weak_dpo {
            return Err(Error::Reconstruction("weak DPO flag is stale".into()));
        }
        Ok(())
    }
}

/// Applies `rule` at `m`: pushout complement on the left, pushout on the right.
pub fn derive(rule: &WeakSpan, m: &Morphism) -> Result<DirectTransformation> {
    derive_with(rule, m, DanglingPolicy::Reject)
}

pub(crate) fn derive_with(rule: &WeakSpan, m: &Morphism, dangling: DanglingPolicy) -> Result<DirectTransformation> {
    validate_rule(rule)?;
    let pc = pushout_complement_with(&rule.l, m, dangling)?;
    let ki = pc.k.after(&rule.i)?;
    let po = pushout(&ki, &rule.r)?;
    Ok(DirectTransformation {
        rule: rule.clone(),
        m: m.clone(),
        k: pc.k,
        f: pc.f,
        g: po.left_inj,
        n: po.right_inj,
        is_weak_dpo: true,
    })
}

/// A direct transformation whose left square merely commutes (`f ∘ k = m ∘ l`).
pub fn assemble_direct_transformation(
    rule: &WeakSpan,
    m: &Morphism,
    k: &Morphism,
    f: &Morphism,
) -> Result<DirectTransformation> {
    if f.after(k)? != m.after(&rule.l)? {
        return Err(Error::SquareMismatch);
    }
    let ki = k.after(&rule.i)?;
    let po = pushout(&ki, &rule.r)?;
    Ok(DirectTransformation {
        rule: rule.clone(),
        m: m.clone(),
        k: k.clone(),
        f: f.clone(),
        g: po.left_inj,
        n: po.right_inj,
        is_weak_dpo: is_pushout_square(&rule.l, k, m, f),
    })
}

/// The plain span `L ←l− K −r′→ R′`, where `(i′, r′, R′)` is the pushout of `(i, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedSpan {
    pub l: Morphism,
    /// `K → R′`
    pub rp: Morphism,
    /// `R → R′`
    pub ip: Morphism,
    /// The span as a rule with `I = K`.
    pub span: WeakSpan,
}

pub fn associated_span(rule: &WeakSpan) -> Result<AssociatedSpan> {
    validate_rule(rule)?;
    let po = pushout(&rule.i, &rule.r)?;
    let span = WeakSpan::plain(format!("{}#assoc", rule.name), rule.l.clone(), po.left_inj.clone())?;
    Ok(AssociatedSpan {
        l: rule.l.clone(),
        rp: span.r.clone(),
        ip: po.right_inj,
        span,
    })
}

/// The same transformation seen as a weak DPO of the associated span: `n′` is
/// the mediator out of `R′` with `n′ ∘ i′ = n` and `n′ ∘ r′ = g ∘ k`.
pub fn hat_gamma(gamma: &DirectTransformation) -> Result<DirectTransformation> {
    if !gamma.is_weak_dpo {
        return Err(Error::Precondition("transformation is not a weak DPO".into()));
    }
    let assoc = associated_span(&gamma.rule)?;
    let po = pushout(&gamma.rule.i, &gamma.rule.r)?;
    let gk = gamma.g.after(&gamma.k)?;
    let np = po
        .factor(&gk, &gamma.n)?
        .ok_or_else(|| Error::Reconstruction("no mediator out of R′".into()))?;
    let np = Morphism::new(
        assoc.span.rhs().clone(),
        gamma.result().clone(),
        np.node_map().clone(),
        np.edge_map().clone(),
    )?;
    DirectTransformation::from_parts(
        assoc.span,
        gamma.m.clone(),
        gamma.k.clone(),
        gamma.f.clone(),
        gamma.g.clone(),
        np,
    )
}

/// Turns a weak DPO of the associated span back into one of `rule`, with `n = n′ ∘ i′`.
pub fn assoc_to_weak(delta: &DirectTransformation, rule: &WeakSpan) -> Result<DirectTransformation> {
    if !delta.is_weak_dpo {
        return Err(Error::Precondition("transformation is not a weak DPO".into()));
    }
    let assoc = associated_span(rule)?;
    if delta.rule.l != assoc.l || delta.rule.r != assoc.rp {
        return Err(Error::Precondition(format!(
            "transformation is not over the associated span of `{}`",
            rule.name
        )));
    }
    let n = delta.n.after(&assoc.ip)?;
    let out = DirectTransformation::from_parts(
        rule.clone(),
        delta.m.clone(),
        delta.k.clone(),
        delta.f.clone(),
        delta.g.clone(),
        n,
    )?;
    if !out.is_weak_dpo {
        return Err(Error::Reconstruction("left square stopped being a pushout".into()));
    }
    Ok(out)
}

/// Transformations of one host together with `j[a][b] : I_a → D_b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub gammas: Vec<DirectTransformation>,
    pub j: Vec<Vec<Morphism>>,
}

impl CoherenceWitness {
    /// Checks `f_b ∘ j[a][b] = f_a ∘ k_a ∘ i_a` and `j[a][a] = k_a ∘ i_a`.
    pub fn from_matrix(gammas: Vec<DirectTransformation>, j: Vec<Vec<Morphism>>) -> Result<Self> {
        check_family(&gammas)?;
        if j.len() != gammas.len() || j.iter().any(|row| row.len() != gammas.len()) {
            return Err(Error::ArityMismatch {
                expected: gammas.len(),
                got: j.len(),
            });
        }
        for (a, ga) in gammas.iter().enumerate() {
            let ki = ga.ki();
            let target = ga.f.after(&ki)?;
            for (b, gb) in gammas.iter().enumerate() {
                let jab = &j[a][b];
                if (a == b && *jab != ki) || gb.f.after(jab).ok().as_ref() != Some(&target) {
                    return Err(Error::Incoherent {
                        a,
                        b,
                        item: "the given j".into(),
                    });
                }
            }
        }
        Ok(CoherenceWitness { gammas, j })
    }
}

fn check_family(gammas: &[DirectTransformation]) -> Result<()> {
    let first = gammas.first().ok_or(Error::EmptyDiagram("transformation family"))?;
    for g in gammas {
        if g.host() != first.host() {
            return Err(Error::Precondition("transformations act on different hosts".into()));
        }
        if !g.f.is_injective() {
            return Err(Error::Precondition(format!(
                "context embedding of `{}` is not injective",
                g.rule.name
            )));
        }
    }
    Ok(())
}

/// Finds the (unique) witness of parallel coherence by tracing each `I_a`
/// through `G` back into every `D_b`. Indices in errors are 0-based.
pub fn coherence_witness(gammas: &[DirectTransformation]) -> Result<CoherenceWitness> {
    check_family(gammas)?;
    let mut j = Vec::with_capacity(gammas.len());
    for (a, ga) in gammas.iter().enumerate() {
        let ki = ga.ki();
        let into_g = ga.f.after(&ki)?;
        let mut row = Vec::with_capacity(gammas.len());
        for (b, gb) in gammas.iter().enumerate() {
            if a == b {
                row.push(ki.clone());
                continue;
            }
            let jab = lift_through_mono(&into_g, &gb.f).map_err(|item| Error::Incoherent { a, b, item })?;
            row.push(jab);
        }
        j.push(row);
    }
    Ok(CoherenceWitness {
        gammas: gammas.to_vec(),
        j,
    })
}

/// The diagram of a parallel coherent transformation: `C` with projections
/// `e_a : C → D_a` is the wide pullback of the `f_a`, `d_a : I_a → C` the
/// mediators, `(s_a, o_a, F_a)` the pushout of `(d_a, r_a)`, and `(h_a, H)`
/// the wide pushout of the `s_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PctDiagram {
    pub witness: CoherenceWitness,
    pub c: GraphRef,
    pub e: Vec<Morphism>,
    pub d: Vec<Morphism>,
    pub s: Vec<Morphism>,
    pub o: Vec<Morphism>,
    pub h: Vec<Morphism>,
    pub result: GraphRef,
}

impl PctDiagram {
    pub fn arity(&self) -> usize {
        self.e.len()
    }

    pub fn host(&self) -> &GraphRef {
        self.witness.gammas[0].host()
    }

    /// `F_a`
    pub fn partial_result(&self, a: usize) -> &GraphRef {
        self.s[a].cod_ref()
    }
}

pub fn build_pct(w: &CoherenceWitness) -> Result<PctDiagram> {
    let sink: Vec<Morphism> = w.gammas.iter().map(|g| g.f.clone()).collect();
    let lim = wide_limit(&sink)?;
    let mut d = Vec::with_capacity(sink.len());
    for row in &w.j {
        let dc = factor_through_limit(&lim, row)?
            .ok_or_else(|| Error::Reconstruction("coherence morphisms do not factor through C".into()))?;
        d.push(dc);
    }
    let mut s = Vec::new();
    let mut o = Vec::new();
    for (gamma, da) in w.gammas.iter().zip(&d) {
        let po = pushout(da, &gamma.rule.r)?;
        s.push(po.left_inj);
        o.push(po.right_inj);
    }
    let colim = wide_colimit(&s)?;
    Ok(PctDiagram {
        witness: w.clone(),
        c: lim.apex,
        e: lim.projections,
        d,
        s,
        o,
        h: colim.injections,
        result: colim.apex,
    })
}

/// Re-checks the four defining properties of a PCT diagram.
pub fn verify_pct(pct: &PctDiagram) -> Result<()> {
    let gammas = &pct.witness.gammas;
    let p = gammas.len();
    if [pct.e.len(), pct.d.len(), pct.s.len(), pct.o.len(), pct.h.len()].iter().any(|&n| n != p) {
        return Err(Error::Reconstruction("diagram has inconsistent arity".into()));
    }
    let sink: Vec<Morphism> = gammas.iter().map(|g| g.f.clone()).collect();
    if !is_limit(&sink, &pct.e) {
        return Err(Error::Reconstruction("C is not a limit of the contexts".into()));
    }
    for c in 0..p {
        for a in 0..p {
            if pct.e[a].after(&pct.d[c])? != pct.witness.j[c][a] {
                return Err(Error::Reconstruction(format!("e_{a} ∘ d_{c} differs from j")));
            }
        }
    }
    for a in 0..p {
        if !is_pushout_square(&pct.d[a], &gammas[a].rule.r, &pct.s[a], &pct.o[a]) {
            return Err(Error::Reconstruction(format!("F_{a} is not a pushout")));
        }
    }
    if !is_colimit(&pct.s, &pct.h) {
        return Err(Error::Reconstruction("H is not a colimit of the F_a".into()));
    }
    Ok(())
}

/// Small rules used throughout the examples and tests.
pub mod library {
    use super::*;
    use crate::graph::Graph;

    fn inc(a: &GraphRef, b: &GraphRef) -> Morphism {
        Morphism::inclusion(a, b).expect("library inclusion")
    }

    /// `L = K = I = R = g`, all legs identities.
    pub fn identity_rule(g: &Graph) -> WeakSpan {
        let g = Arc::new(g.clone());
        let id = Morphism::identity(&g);
        WeakSpan::new("identity", id.clone(), id.clone(), id).unwrap()
    }

    /// Deletes a single `A`-node `a`.
    pub fn delete_node() -> WeakSpan {
        let l = Graph::new().with_node("a", "A").into_ref();
        let e = Graph::new().into_ref();
        WeakSpan::new("delete-node", inc(&e, &l), Morphism::identity(&e), Morphism::identity(&e)).unwrap()
    }

    /// Adds a loop labelled `label` (with the same edge id) on an `A`-node.
    pub fn add_loop(label: &str) -> WeakSpan {
        let n = Graph::new().with_node("a", "A").into_ref();
        let r = Graph::new().with_node("a", "A").with_edge(label, "a", "a", label).into_ref();
        let id = Morphism::identity(&n);
        WeakSpan::new(format!("add-loop-{label}"), id.clone(), id, inc(&n, &r)).unwrap()
    }

    /// Deletes an `x`-loop, keeping its node.
    pub fn delete_loop() -> WeakSpan {
        let l = Graph::new().with_node("a", "A").with_edge("l", "a", "a", "x").into_ref();
        let n = Graph::new().with_node("a", "A").into_ref();
        let id = Morphism::identity(&n);
        WeakSpan::new("delete-loop", inc(&n, &l), id.clone(), id).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::library::*;
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{enumerate_morphisms, find_isomorphism, Graph};

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn node_match(rule: &WeakSpan, g: &GraphRef, to: &str) -> Morphism {
        Morphism::new(rule.lhs().clone(), g.clone(), map(&[("a", to)]), map(&[])).unwrap()
    }

    fn iso(a: &GraphRef, b: &Graph) -> bool {
        find_isomorphism(a, b).is_some()
    }

    #[test]
    fn validate_rule_cases() {
        assert!(validate_rule(&identity_rule(&n1())).is_ok());
        assert!(validate_rule(&delete_node()).is_ok());
        let d2 = d2().into_ref();
        let n1 = n1().into_ref();
        let collapse = Morphism::new(d2.clone(), n1, map(&[("u", "a"), ("v", "a")]), map(&[])).unwrap();
        let id = Morphism::identity(&d2);
        let bad = WeakSpan::new("collapse", collapse, id.clone(), id).unwrap();
        assert!(matches!(validate_rule(&bad), Err(Error::InvalidRule { .. })));
    }

    #[test]
    fn find_matches_cases() {
        let g = lp().into_ref();
        let empty_rule = identity_rule(&empty());
        assert_eq!(find_matches(&empty_rule, &g, true).len(), 1);
        assert_eq!(find_matches(&delete_node(), &d2().into_ref(), true).len(), 2);
        assert!(find_matches(&identity_rule(&e2()), &d2().into_ref(), false).is_empty());
    }

    #[test]
    fn identity_rule_changes_nothing() {
        let g = e2().into_ref();
        let rule = identity_rule(&e2());
        let m = find_matches(&rule, &g, true).remove(0);
        let t = derive(&rule, &m).unwrap();
        assert!(iso(t.result(), &g));
        assert!(t.is_weak_dpo);
        t.verify().unwrap();
    }

    #[test]
    fn delete_node_on_d2() {
        let g = d2().into_ref();
        let rule = delete_node();
        let t = derive(&rule, &node_match(&rule, &g, "u")).unwrap();
        assert_eq!(t.result().node_ids().collect::<Vec<_>>(), vec!["v"]);
        // The left square reglues to G.
        let left = crate::category::pushout(&rule.l, &t.k).unwrap();
        assert!(iso(&left.apex, &g));
    }

    #[test]
    fn add_loop_on_n1() {
        let g = n1().into_ref();
        let rule = add_loop("x");
        let t = derive(&rule, &node_match(&rule, &g, "a")).unwrap();
        assert!(iso(t.result(), &lp()));
    }

    #[test]
    fn assemble_round_trip_and_weak_square() {
        let g = n1().into_ref();
        let rule = identity_rule(&n1());
        let t = derive(&rule, &node_match(&rule, &g, "a")).unwrap();
        let again = assemble_direct_transformation(&rule, &t.m, &t.k, &t.f).unwrap();
        assert_eq!(again, t);

        // D = G plus an isolated node: the left square commutes but is no pushout.
        let big = n1().with_node("z", "A").into_ref();
        let k = Morphism::new(rule.context().clone(), big.clone(), map(&[("a", "a")]), map(&[])).unwrap();
        let f = Morphism::new(big, g.clone(), map(&[("a", "a"), ("z", "a")]), map(&[])).unwrap();
        let weak = assemble_direct_transformation(&rule, &t.m, &k, &f).unwrap();
        assert!(!weak.is_weak_dpo);
        weak.verify().unwrap();

        let d2 = d2().into_ref();
        let m = node_match(&rule, &d2, "u");
        let k = Morphism::new(rule.context().clone(), d2.clone(), map(&[("a", "v")]), map(&[])).unwrap();
        assert_eq!(
            assemble_direct_transformation(&rule, &m, &k, &Morphism::identity(&d2)).unwrap_err(),
            Error::SquareMismatch
        );
    }

    #[test]
    fn associated_span_cases() {
        let plain = add_loop("x");
        let a = associated_span(&plain).unwrap();
        assert!(iso(a.span.rhs(), plain.rhs()));

        // I = ∅, K = N1, R = another single node: R′ is their disjoint union.
        let e = empty().into_ref();
        let k = n1().into_ref();
        let r = Graph::new().with_node("b", "A").into_ref();
        let rule = WeakSpan::new(
            "weak",
            Morphism::identity(&k),
            Morphism::inclusion(&e, &k).unwrap(),
            Morphism::inclusion(&e, &r).unwrap(),
        )
        .unwrap();
        let a = associated_span(&rule).unwrap();
        assert_eq!(a.span.rhs().node_count(), 2);
        assert!(a.rp.is_injective() && a.ip.is_injective());
    }

    #[test]
    fn hat_gamma_and_back() {
        let g = n1().into_ref();
        let rule = add_loop("x");
        let t = derive(&rule, &node_match(&rule, &g, "a")).unwrap();
        let hat = hat_gamma(&t).unwrap();
        assert!(hat.is_weak_dpo);
        assert_eq!(hat.result(), t.result());
        assert_eq!(hat.n.edge("x"), t.n.edge("x"));
        let back = assoc_to_weak(&hat, &rule).unwrap();
        assert_eq!(back, t);

        // A weakly kept node: K = N1 but I = ∅, so the node is not glued to R.
        let e = empty().into_ref();
        let k = n1().into_ref();
        let r = Graph::new().with_node("b", "A").into_ref();
        let weak = WeakSpan::new(
            "weak",
            Morphism::identity(&k),
            Morphism::inclusion(&e, &k).unwrap(),
            Morphism::inclusion(&e, &r).unwrap(),
        )
        .unwrap();
        let t = derive(&weak, &node_match(&weak, &g, "a")).unwrap();
        let hat = hat_gamma(&t).unwrap();
        let back = assoc_to_weak(&hat, &weak).unwrap();
        assert!(find_isomorphism(back.result(), t.result()).is_some());

        let not_dpo = DirectTransformation {
            is_weak_dpo: false,
            ..t
        };
        assert!(matches!(hat_gamma(&not_dpo), Err(Error::Precondition(_))));
    }

    #[test]
    fn coherence_cases() {
        let g = n1().into_ref();
        let ra = add_loop("α");
        let rb = add_loop("β");
        let ta = derive(&ra, &node_match(&ra, &g, "a")).unwrap();
        let tb = derive(&rb, &node_match(&rb, &g, "a")).unwrap();
        let w = coherence_witness(std::slice::from_ref(&ta)).unwrap();
        assert_eq!(w.j[0][0], ta.ki());
        let w = coherence_witness(&[ta.clone(), tb.clone()]).unwrap();
        let pct = build_pct(&w).unwrap();
        verify_pct(&pct).unwrap();
        let two = n1().with_edge("α", "a", "a", "α").with_edge("β", "a", "a", "β");
        assert!(iso(&pct.result, &two));

        let d2 = d2().into_ref();
        let del = delete_node();
        let loop_rule = add_loop("x");
        let t1 = derive(&del, &node_match(&del, &d2, "u")).unwrap();
        let t2 = derive(&loop_rule, &node_match(&loop_rule, &d2, "u")).unwrap();
        assert!(matches!(
            coherence_witness(&[t1, t2]),
            Err(Error::Incoherent { a: 1, b: 0, .. })
        ));
    }

    #[test]
    fn coherence_tracing_agrees_with_enumeration() {
        let g = lp().into_ref();
        let rule = delete_loop();
        let m = find_matches(&rule, &g, true).remove(0);
        let t = derive(&rule, &m).unwrap();
        let w = coherence_witness(&[t.clone(), t.clone()]).unwrap();
        let target = t.f.after(&t.ki()).unwrap();
        let commuting: Vec<_> = enumerate_morphisms(t.rule.interface(), t.context(), false)
            .into_iter()
            .filter(|j| {
                let j = Morphism::new(t.rule.interface().clone(), t.context().clone(), j.node_map().clone(), j.edge_map().clone()).unwrap();
                t.f.after(&j).unwrap() == target
            })
            .collect();
        assert_eq!(commuting.len(), 1);
        assert_eq!(commuting[0].node_map(), w.j[0][1].node_map());
    }

    #[test]
    fn loop_deleted_once() {
        let g = lp().into_ref();
        let rule = delete_loop();
        let m = find_matches(&rule, &g, true).remove(0);
        let t = derive(&rule, &m).unwrap();
        let pct = build_pct(&coherence_witness(&[t.clone(), t]).unwrap()).unwrap();
        verify_pct(&pct).unwrap();
        assert!(iso(&pct.result, &n1()));
    }

    #[test]
    fn single_pct_matches_its_transformation() {
        let g = e2().into_ref();
        let rule = add_loop("y");
        let t = derive(&rule, &node_match(&rule, &g, "v")).unwrap();
        let pct = build_pct(&coherence_witness(std::slice::from_ref(&t)).unwrap()).unwrap();
        assert!(find_isomorphism(&pct.result, t.result()).is_some());
        // C is the context itself.
        assert!(find_isomorphism(&pct.c, t.context()).is_some());
    }
}
