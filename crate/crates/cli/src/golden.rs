//! The golden-example battery behind `exchnet golden-examples`.

use std::collections::{BTreeMap, HashMap};

use exchnet::consistency::extendable_check;
use exchnet::dependence::{
    classify_skeleton, global_markov_check, incidence_cliques, incidence_graph, kneser_graph, skeleton, CliqueShape,
    SkeletonClass,
};
use exchnet::estimation::dissociated::{dissociated_mle, DissociatedOptions};
use exchnet::estimation::ergm::{ergm_stats, ErgmFamily, ErgmSpec};
use exchnet::estimation::exch::exch_mle;
use exchnet::estimation::summarized::degree_collision_classes;
use exchnet::estimation::FitStatus;
use exchnet::genmodels::{
    er_characterization_diagnostic, er_mobius, graphon_low_moments, graphon_z, marginal_beta_joint_odds, Graphon,
    MomentMethod,
};
use exchnet::graph::paw_network;
use exchnet::mobius::bidirected_joint;
use exchnet::scalar::rat;
use exchnet::{DependenceGraph, EdgeKind, LabeledNetwork, Rational, UnlabeledClass};

/// One battery item.
#[derive(Clone, Debug)]
pub struct GoldenItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl GoldenItem {
    pub fn line(&self) -> String {
        if self.passed {
            format!("PASS {}", self.name)
        } else {
            format!("FAIL {}: {}", self.name, self.detail)
        }
    }
}

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: exchnet::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn paw_mle_values() -> Vec<(UnlabeledClass, Rational)> {
    vec![
        (UnlabeledClass::edge(), rat(2, 3)),
        (UnlabeledClass::star(2), rat(5, 12)),
        (UnlabeledClass::two_edges(), rat(1, 3)),
        (UnlabeledClass::triangle(), rat(1, 4)),
        (UnlabeledClass::star(3), rat(1, 4)),
        (UnlabeledClass::path(4), rat(1, 6)),
        (UnlabeledClass::paw(), rat(1, 12)),
    ]
}

fn exchangeable_paw_mle() -> Check {
    let z = core(exch_mle(&paw_network()))?;
    let expected: BTreeMap<_, _> = paw_mle_values().into_iter().collect();
    for (c, v) in z.iter().filter(|(c, _)| !c.is_empty()) {
        let want = expected.get(c).cloned().unwrap_or_else(|| rat(0, 1));
        ensure(*v == want, || format!("z[{}] = {v}, expected {want}", c.key()))?;
    }
    Ok(())
}

fn family_statistics() -> Check {
    let x = paw_network();
    let fs = core(ergm_stats(&core(ErgmSpec::new(ErgmFamily::FrankStrauss, 4))?, &x))?;
    ensure(fs == [4, 5, 1, 1], || format!("Frank-Strauss statistics {fs:?}"))?;
    let kn = core(ergm_stats(&core(ErgmSpec::new(ErgmFamily::Kneser, 4))?, &x))?;
    ensure(kn == [4, 1], || format!("Kneser statistics {kn:?}"))
}

fn dissociated_paw() -> Check {
    let r = core(dissociated_mle(&paw_network(), &DissociatedOptions::default()))?;
    ensure(r.status == FitStatus::Optimal, || format!("status {}", r.status.as_str()))?;
    ensure((r.likelihood() - 1.0 / 16.0).abs() < 1e-6, || format!("likelihood {}", r.likelihood()))?;
    ensure(r.constraint_residual < 1e-8, || format!("residual {}", r.constraint_residual))?;
    let z = r.z.as_ref().ok_or("no estimate")?;
    let expected = [1.0 / 2.0, 5.0 / 16.0, 1.0 / 4.0, 3.0 / 16.0, 3.0 / 16.0, 1.0 / 8.0, 1.0 / 16.0];
    for ((c, _), want) in paw_mle_values().iter().zip(expected) {
        let got = *z.get(c).ok_or("missing class")?;
        ensure((got - want).abs() < 1e-4, || format!("z[{}] = {got}, expected {want}", c.key()))?;
    }
    Ok(())
}

fn dissociated_path() -> Check {
    let r = core(dissociated_mle(&LabeledNetwork::path(4), &DissociatedOptions::default()))?;
    ensure((r.likelihood() - 1.0 / 16.0).abs() < 1e-6, || format!("likelihood {}", r.likelihood()))?;
    ensure(r.status == FitStatus::NonUnique, || format!("status {}", r.status.as_str()))?;
    ensure(r.endpoints.len() >= 2, || format!("{} endpoints", r.endpoints.len()))
}

fn collisions() -> Check {
    let g4 = core(degree_collision_classes(4))?;
    ensure(g4.is_empty(), || format!("{} groups at n = 4", g4.len()))?;
    let g5 = core(degree_collision_classes(5))?;
    ensure(g5.len() == 3 && g5.iter().all(|g| g.classes.len() == 2), || format!("{} groups at n = 5", g5.len()))?;
    let mut seqs: Vec<Vec<usize>> = g5.iter().map(|g| g.degrees.degree_multiset()).collect();
    seqs.sort();
    let want = vec![vec![2, 2, 2, 1, 1], vec![3, 2, 2, 2, 1], vec![3, 3, 2, 2, 2]];
    ensure(seqs == want, || format!("degree multisets {seqs:?}"))
}

fn petersen() -> Check {
    let k = kneser_graph(5, EdgeKind::Undirected);
    ensure(k.num_vertices() == 10 && k.edge_count() == 15, || {
        format!("{} vertices, {} edges", k.num_vertices(), k.edge_count())
    })?;
    ensure((0..10).all(|v| k.degree(v) == 3), || "not 3-regular".into())
}

fn incidence_cliques_l5() -> Check {
    let cl = core(incidence_cliques(5))?;
    ensure(!cl.is_empty(), || "no cliques".into())?;
    ensure(cl.iter().all(|(_, s)| !matches!(s, CliqueShape::Other)), || "a clique is neither a triangle nor a star".into())
}

fn bidirected_closed_form() -> Check {
    let dep = kneser_graph(4, EdgeKind::Bidirected);
    let sets = core(dep.connected_sets())?;
    for i in 0..5 {
        for j in 0..5 {
            let ze = 0.2 + 0.15 * i as f64;
            let zu = ze * (0.1 + 0.2 * j as f64);
            let z: HashMap<u64, f64> = sets.iter().map(|&s| (s, if s.count_ones() == 1 { ze } else { zu })).collect();
            let p = core(bidirected_joint(&dep, &z, paw_network().mask(), 1e-12))?;
            let closed = ze * ze * zu - 2.0 * ze * zu * zu + zu * zu * zu;
            ensure((p - closed).abs() <= 1e-12, || format!("{p} vs {closed} at ({ze}, {zu})"))?;
        }
    }
    Ok(())
}

fn three_chain() -> Check {
    let dep = core(DependenceGraph::from_edges(3, EdgeKind::Bidirected, &[(0, 1), (1, 2)]))?;
    let (z1, z2, z3, z12, z23, z123) = (rat(1, 2), rat(2, 5), rat(1, 3), rat(1, 4), rat(1, 6), rat(1, 10));
    let z: HashMap<u64, Rational> = [
        (0b001, z1.clone()),
        (0b010, z2),
        (0b100, z3.clone()),
        (0b011, z12.clone()),
        (0b110, z23),
        (0b111, z123.clone()),
    ]
    .into_iter()
    .collect();
    let p = |h: u64| core(bidirected_joint(&dep, &z, h, 0.0));
    let both = p(0b101)? + p(0b111)?;
    ensure(both == z1.clone() * z3.clone(), || format!("P(X1 = 1, X3 = 1) = {both}"))?;
    let only = p(0b001)?;
    ensure(only == z1.clone() - z12 - z1 * z3 + z123, || format!("P(X1 = 1, X2 = 0, X3 = 0) = {only}"))
}

fn marginal_beta_markov() -> Check {
    let mb = core(marginal_beta_joint_odds(4, &rat(3, 1), &rat(1, 4), &rat(1, 2)))?;
    let l4 = incidence_graph(4, EdgeKind::Bidirected);
    ensure(core(global_markov_check(&mb, &l4, 0.0))?.is_none(), || "fails against the incidence graph".into())?;
    let empty = DependenceGraph::empty(4, EdgeKind::Undirected);
    ensure(core(global_markov_check(&mb, &empty, 0.0))?.is_some(), || "passes against the empty graph".into())?;
    let class = classify_skeleton(&core(skeleton(&mb, 0.0))?);
    ensure(class == SkeletonClass::Incidence, || format!("skeleton {}", class.as_str()))
}

fn extendability() -> Check {
    let er = core(er_mobius(4, &rat(1, 3)))?;
    for m in 4..=7 {
        ensure(core(extendable_check(&er, m))?.feasible, || format!("ER infeasible at m = {m}"))?;
    }
    let z = core(exch_mle(&paw_network()))?;
    let r = core(extendable_check(&z, 5))?;
    ensure(!r.feasible, || "paw estimate extends to 5 nodes".into())
}

fn product_graphon() -> Check {
    let uv = Graphon::function(|u, v| u * v);
    let q = MomentMethod::default();
    for (c, want) in [(UnlabeledClass::edge(), 0.25), (UnlabeledClass::star(2), 1.0 / 12.0)] {
        let m = core(graphon_z(&uv, &c, &q))?;
        ensure((m.value - want).abs() <= m.error.max(1e-12), || {
            format!("z[{}] = {} ± {}, expected {want}", c.key(), m.value, m.error)
        })?;
    }
    let (z, err) = core(graphon_low_moments(&uv, &q))?;
    let d = core(er_characterization_diagnostic(&z, None))?;
    ensure(!d.consistent_with_er(10.0 * err.max(1e-9)), || "uv graphon looks Erdős–Rényi".into())?;
    let (z, _) = core(graphon_low_moments(&core(Graphon::constant(0.3))?, &q))?;
    let d = core(er_characterization_diagnostic(&z, None))?;
    ensure(d.consistent_with_er(1e-12), || format!("constant graphon deviates by {}", d.max_deviation))
}

/// Runs every item in a fixed order.
pub fn battery() -> Vec<GoldenItem> {
    let items: [(&'static str, fn() -> Check); 13] = [
        ("exchangeable MLE on the paw", exchangeable_paw_mle),
        ("Frank-Strauss and Kneser statistics on the paw", family_statistics),
        ("dissociated MLE on the paw", dissociated_paw),
        ("dissociated MLE on the 4-path is non-unique", dissociated_path),
        ("degree collisions at n = 4 and n = 5", collisions),
        ("Kneser graph on 5 nodes is the Petersen graph", petersen),
        ("cliques of the incidence graph on 5 nodes", incidence_cliques_l5),
        ("bidirected Kneser closed form on the paw", bidirected_closed_form),
        ("three-dyad chain identities", three_chain),
        ("two-point marginal beta Markov battery", marginal_beta_markov),
        ("extendability of ER and of the paw estimate", extendability),
        ("product graphon moments and ER diagnostic", product_graphon),
        ("dissociated MLE bounds on the paw", dissociated_bounds),
    ];
    items
        .iter()
        .map(|(name, f)| {
            let r = f();
            GoldenItem { name, passed: r.is_ok(), detail: r.err().unwrap_or_default() }
        })
        .collect()
}

/// The dissociated optimum sits between the best ER fit and the
/// unrestricted optimum.
fn dissociated_bounds() -> Check {
    let x = paw_network();
    let r = core(dissociated_mle(&x, &DissociatedOptions { restarts: 8, ..DissociatedOptions::default() }))?;
    let p: f64 = 4.0 / 6.0;
    let er = p.powi(4) * (1.0 - p).powi(2);
    let upper = 1.0 / 12.0;
    ensure(r.likelihood() >= er - 1e-9 && r.likelihood() <= upper + 1e-9, || {
        format!("{} outside [{er}, {upper}]", r.likelihood())
    })
}
