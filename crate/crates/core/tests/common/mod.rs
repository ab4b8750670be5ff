#![allow(dead_code)]

use exchnet::estimation::ergm::{ergm_distribution, ErgmFamily, ErgmSpec};
use exchnet::genmodels::{er_joint, graphon_mobius, marginal_beta_joint_odds, Graphon, MomentMethod};
use exchnet::graph::{num_dyads, paw_network};
use exchnet::scalar::rat;
use exchnet::{ClassDistribution, JointTable, LabeledNetwork, Rational, UnlabeledClass};

/// All injective maps `V(F) → V(G)` checked one by one.
pub fn brute_inj(f: &LabeledNetwork, g: &LabeledNetwork) -> u64 {
    let fe: Vec<(usize, usize)> = f.edges().collect();
    let k = f.n();
    let mut count = 0;
    let mut img = vec![usize::MAX; k];
    let mut used = vec![false; g.n()];
    fn go(
        i: usize,
        img: &mut Vec<usize>,
        used: &mut Vec<bool>,
        fe: &[(usize, usize)],
        g: &LabeledNetwork,
        count: &mut u64,
    ) {
        if i == img.len() {
            if fe.iter().all(|&(a, b)| g.has_edge(img[a], img[b])) {
                *count += 1;
            }
            return;
        }
        for v in 0..g.n() {
            if !used[v] {
                used[v] = true;
                img[i] = v;
                go(i + 1, img, used, fe, g, count);
                used[v] = false;
            }
        }
    }
    go(0, &mut img, &mut used, &fe, g, &mut count);
    count
}

/// Whether two labeled networks on the same node count are isomorphic, by
/// trying every permutation.
pub fn brute_isomorphic(a: &LabeledNetwork, b: &LabeledNetwork) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut found = false;
    exchnet::graph::for_each_permutation(a.n(), |p| {
        if !found && a.permute(p) == *b {
            found = true;
        }
    });
    found
}

/// Isomorphism classes of all labeled graphs on `n` nodes, grouped by
/// pairwise brute-force testing.
pub fn brute_class_count(n: usize) -> usize {
    let mut reps: Vec<LabeledNetwork> = Vec::new();
    for m in 0..1u64 << num_dyads(n) {
        let g = LabeledNetwork::from_mask(n, m);
        if !reps.iter().any(|r| brute_isomorphic(r, &g)) {
            reps.push(g);
        }
    }
    reps.len()
}

pub fn all_networks(n: usize) -> impl Iterator<Item = LabeledNetwork> {
    (0..1u64 << num_dyads(n)).map(move |m| LabeledNetwork::from_mask(n, m))
}

/// A named exchangeable law on four nodes.
pub enum SuiteJoint {
    Exact(&'static str, JointTable<Rational>),
    Float(&'static str, JointTable<f64>),
}

impl SuiteJoint {
    pub fn name(&self) -> &'static str {
        match self {
            SuiteJoint::Exact(n, _) | SuiteJoint::Float(n, _) => n,
        }
    }
}

fn class_joint(pairs: &[(UnlabeledClass, Rational)]) -> JointTable<Rational> {
    ClassDistribution::from_pairs(4, pairs, 0.0).unwrap().to_joint().unwrap()
}

/// The exchangeable test suite at `n = 4`.
pub fn suite() -> Vec<SuiteJoint> {
    let mut out = vec![
        SuiteJoint::Exact("er-1/3", er_joint(4, &rat(1, 3)).unwrap()),
        SuiteJoint::Exact("er-1/2", er_joint(4, &rat(1, 2)).unwrap()),
        SuiteJoint::Exact(
            "marginal-beta-two-point",
            marginal_beta_joint_odds(4, &rat(3, 1), &rat(1, 4), &rat(1, 2)).unwrap(),
        ),
        SuiteJoint::Exact(
            "marginal-beta-skewed",
            marginal_beta_joint_odds(4, &rat(5, 1), &rat(1, 2), &rat(1, 5)).unwrap(),
        ),
        SuiteJoint::Exact("uniform-paw", class_joint(&[(UnlabeledClass::paw(), rat(1, 1))])),
        SuiteJoint::Exact(
            "paw-empty-mixture",
            class_joint(&[(UnlabeledClass::paw(), rat(3, 4)), (UnlabeledClass::empty(), rat(1, 4))]),
        ),
        SuiteJoint::Exact("point-empty", class_joint(&[(UnlabeledClass::empty(), rat(1, 1))])),
        SuiteJoint::Exact("point-complete", class_joint(&[(UnlabeledClass::complete(4), rat(1, 1))])),
    ];
    // mixture of two Erdős–Rényi laws
    let (a, b) = (er_joint(4, &rat(1, 5)).unwrap(), er_joint(4, &rat(7, 10)).unwrap());
    let mix: Vec<Rational> = a.probs().iter().zip(b.probs()).map(|(x, y)| (x + y) / rat(2, 1)).collect();
    out.push(SuiteJoint::Exact("er-mixture", JointTable::new(4, mix, 0.0).unwrap()));
    for (name, family, nu) in [
        ("frank-strauss", ErgmFamily::FrankStrauss, vec![-0.4, 0.3, -0.2, 0.5]),
        ("kneser-ergm", ErgmFamily::Kneser, vec![-0.2, 0.6]),
        ("se-star", ErgmFamily::SeStar, vec![0.1, -0.3, 0.2, 0.4]),
    ] {
        let spec = ErgmSpec::new(family, 4).unwrap();
        let jt = ergm_distribution(&spec, &nu).unwrap().to_joint().unwrap();
        out.push(SuiteJoint::Float(name, jt));
    }
    let uv = Graphon::function(|u, v| u * v);
    let z = graphon_mobius(&uv, 4, &MomentMethod::default()).unwrap();
    out.push(SuiteJoint::Float("graphon-uv", z.to_class_distribution(1e-9).unwrap().to_joint().unwrap()));
    out
}

pub fn paw() -> LabeledNetwork {
    paw_network()
}

/// The path 1-2-3-4.
pub fn path4() -> LabeledNetwork {
    LabeledNetwork::path(4)
}
