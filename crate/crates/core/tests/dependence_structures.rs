mod common;

use common::{suite, SuiteJoint};
use exchnet::consistency::marginalize_joint;
use exchnet::dependence::{
    ci_test, classify_skeleton, dissociated_check, global_markov_check, incidence_cliques, incidence_graph,
    kneser_graph, skeleton, CliqueShape, SkeletonClass,
};
use exchnet::genmodels::{beta_joint_odds, er_joint, marginal_beta_joint_odds};
use exchnet::graph::{dyad_index, parse_dyad_label};
use exchnet::mobius::labeled_mobius_from_joint;
use exchnet::scalar::rat;
use exchnet::{DependenceGraph, EdgeKind, JointTable, LabeledNetwork, Rational, Scalar};

const TOL: f64 = 1e-10;

fn d(label: &str) -> u64 {
    1 << parse_dyad_label(label).unwrap()
}

fn two_point() -> JointTable<Rational> {
    marginal_beta_joint_odds(4, &rat(3, 1), &rat(1, 4), &rat(1, 2)).unwrap()
}

#[test]
fn reference_graphs() {
    let l4 = incidence_graph(4, EdgeKind::Undirected);
    assert_eq!((l4.num_vertices(), l4.edge_count()), (6, 12));
    let l3 = incidence_graph(3, EdgeKind::Undirected);
    assert_eq!(l3.edge_count(), 3);
    let l5 = incidence_graph(5, EdgeKind::Undirected);
    assert!((0..10).all(|v| l5.degree(v) == 6));
    let petersen = kneser_graph(5, EdgeKind::Undirected);
    assert_eq!((petersen.num_vertices(), petersen.edge_count()), (10, 15));
    assert!((0..10).all(|v| petersen.degree(v) == 3));
    let k4 = kneser_graph(4, EdgeKind::Undirected);
    let mut pairs: Vec<(usize, usize)> = k4.edges();
    pairs.sort();
    let mut expected = vec![
        (dyad_index(0, 1), dyad_index(2, 3)),
        (dyad_index(0, 2), dyad_index(1, 3)),
        (dyad_index(0, 3), dyad_index(1, 2)),
    ];
    for p in expected.iter_mut() {
        *p = (p.0.min(p.1), p.0.max(p.1));
    }
    expected.sort();
    assert_eq!(pairs, expected);
    for n in 3..=6 {
        assert_eq!(kneser_graph(n, EdgeKind::Undirected), incidence_graph(n, EdgeKind::Undirected).complement());
    }
}

#[test]
fn incidence_cliques_are_triangles_or_stars() {
    let c4 = incidence_cliques(4).unwrap();
    let find = |mask: u64| c4.iter().find(|(m, _)| *m == mask).map(|(_, s)| *s);
    assert_eq!(find(d("1-2") | d("1-3") | d("2-3")), Some(CliqueShape::Triangle));
    assert_eq!(find(d("1-2") | d("1-3") | d("1-4")), Some(CliqueShape::Star { hub: 0 }));
    for n in 3..=5 {
        let cliques = incidence_cliques(n).unwrap();
        assert!(cliques.iter().all(|(_, s)| *s != CliqueShape::Other), "n = {n}");
        let g = incidence_graph(n, EdgeKind::Undirected);
        for (m, _) in &cliques {
            let members: Vec<usize> = (0..64).filter(|i| m >> i & 1 == 1).collect();
            for &u in &members {
                for &v in &members {
                    assert!(u == v || g.adjacent(u, v));
                }
            }
        }
    }
}

#[test]
fn connected_set_counts() {
    let complete = DependenceGraph::complete(4, EdgeKind::Bidirected);
    assert_eq!(complete.connected_sets().unwrap().len(), 63);
    // connected dyad sets of the incidence graph are connected subnetworks
    let l4 = incidence_graph(4, EdgeKind::Bidirected);
    let sets = l4.connected_sets().unwrap();
    let connected = common::all_networks(4)
        .filter(|x| x.edge_count() > 0 && exchnet::UnlabeledClass::of(x).is_connected())
        .count();
    assert_eq!(sets.len(), connected);
    assert!(DependenceGraph::complete(7, EdgeKind::Bidirected).connected_sets().is_err());
}

#[test]
fn independence_examples() {
    let er = er_joint(4, &rat(1, 3)).unwrap();
    for (a, b, s) in [(d("1-2"), d("3-4"), 0), (d("1-2"), d("1-3"), d("2-3")), (d("1-4"), d("2-4") | d("3-4"), d("1-2"))] {
        assert!(ci_test(&er, a, b, s, TOL).unwrap());
    }
    let mb = two_point();
    assert!(ci_test(&mb, d("1-2"), d("3-4"), 0, TOL).unwrap());
    assert!(!ci_test(&mb, d("1-2"), d("1-3"), 0, TOL).unwrap());
    let x = LabeledNetwork::path(4);
    let point = JointTable::from_fn(4, |y| if y == x { rat(1, 1) } else { rat(0, 1) }).unwrap();
    assert!(ci_test(&point, d("1-2"), d("1-3"), 0, TOL).unwrap());
    assert!(ci_test(&point, d("1-2"), d("3-4"), d("2-3"), TOL).unwrap());
    assert_eq!(classify_skeleton(&skeleton(&point, TOL).unwrap()), SkeletonClass::Empty);
}

#[test]
fn markov_battery() {
    let er = er_joint(4, &rat(2, 5)).unwrap();
    assert_eq!(global_markov_check(&er, &DependenceGraph::empty(4, EdgeKind::Undirected), TOL).unwrap(), None);
    assert_eq!(classify_skeleton(&skeleton(&er, TOL).unwrap()), SkeletonClass::Empty);

    let mb = two_point();
    assert_eq!(global_markov_check(&mb, &incidence_graph(4, EdgeKind::Bidirected), TOL).unwrap(), None);
    let fail = global_markov_check(&mb, &DependenceGraph::empty(4, EdgeKind::Undirected), TOL).unwrap().unwrap();
    assert_eq!((fail.a, fail.b, fail.s), (d("1-2"), d("1-3"), 0));
    let sk = skeleton(&mb, TOL).unwrap();
    assert_eq!(classify_skeleton(&sk), SkeletonClass::Incidence);
    assert_eq!(sk, incidence_graph(4, EdgeKind::Undirected));
    // the float version agrees
    assert_eq!(classify_skeleton(&skeleton(&mb.to_f64(), TOL).unwrap()), SkeletonClass::Incidence);
}

#[test]
fn skeleton_classification() {
    assert_eq!(classify_skeleton(&incidence_graph(4, EdgeKind::Undirected)), SkeletonClass::Incidence);
    assert_eq!(classify_skeleton(&kneser_graph(5, EdgeKind::Undirected)), SkeletonClass::Kneser);
    let mut edges = DependenceGraph::complete(4, EdgeKind::Undirected).edges();
    edges.pop();
    let almost = DependenceGraph::from_edges(4, EdgeKind::Undirected, &edges).unwrap();
    assert_eq!(classify_skeleton(&almost), SkeletonClass::Other);
}

fn check_suite<T: Scalar>(name: &str, jt: &JointTable<T>, tol: f64) {
    assert!(jt.is_exchangeable(tol), "{name}");
    let class = classify_skeleton(&skeleton(jt, tol).unwrap());
    assert!(
        matches!(class, SkeletonClass::Empty | SkeletonClass::Incidence | SkeletonClass::Kneser | SkeletonClass::Complete),
        "{name}: {}",
        class.as_str()
    );
    let l4 = incidence_graph(4, EdgeKind::Bidirected);
    let markov = global_markov_check(jt, &l4, tol).unwrap().is_none();
    let dissociated = dissociated_check(&labeled_mobius_from_joint(jt), tol.max(1e-9)).is_none();
    assert_eq!(markov, dissociated, "{name}");
    if markov {
        // the induced three-node law is Markov on the induced structure
        for keep in [[0, 1, 2], [1, 2, 3], [3, 0, 2]] {
            let sub = marginalize_joint(jt, &keep).unwrap();
            assert_eq!(global_markov_check(&sub, &l4.restrict_nodes(&keep), tol).unwrap(), None, "{name}");
        }
    }
}

#[test]
fn suite_skeletons_and_markov_equivalence() {
    for sj in suite() {
        match &sj {
            SuiteJoint::Exact(name, jt) => check_suite(name, jt, 0.0),
            SuiteJoint::Float(name, jt) => check_suite(name, jt, TOL),
        }
    }
}

#[test]
fn dissociation_examples() {
    let er = labeled_mobius_from_joint(&er_joint(4, &rat(1, 3)).unwrap());
    assert_eq!(dissociated_check(&er, 0.0), None);
    let beta = labeled_mobius_from_joint(&beta_joint_odds(&[rat(1, 1), rat(2, 1), rat(1, 3), rat(3, 1)]).unwrap());
    assert_eq!(dissociated_check(&beta, 0.0), None);
    for sj in suite() {
        if let SuiteJoint::Exact(name, jt) = sj {
            let lm = labeled_mobius_from_joint(&jt);
            match name {
                "uniform-paw" | "er-mixture" => assert!(dissociated_check(&lm, 0.0).is_some(), "{name}"),
                "paw-empty-mixture" | "marginal-beta-two-point" => assert_eq!(dissociated_check(&lm, 0.0), None, "{name}"),
                _ => {}
            }
        }
    }
}
