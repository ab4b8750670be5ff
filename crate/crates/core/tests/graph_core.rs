mod common;

use common::{all_networks, brute_class_count, brute_isomorphic};
use exchnet::graph::{
    aut_count, canonical_form, connected_components, enumerate_classes, factorial, for_each_permutation,
};
use exchnet::{DegreeDistribution, LabeledNetwork, UnlabeledClass};
use proptest::prelude::*;

#[test]
fn triangles_on_different_nodes_share_a_class() {
    let a = LabeledNetwork::new(4, &[(1, 2), (2, 3), (1, 3)]).unwrap();
    let b = LabeledNetwork::new(4, &[(2, 3), (3, 4), (2, 4)]).unwrap();
    assert_eq!(canonical_form(&a), canonical_form(&b));
    assert_eq!(UnlabeledClass::of(&a), UnlabeledClass::of(&b));
    let path = LabeledNetwork::new(3, &[(1, 2), (2, 3)]).unwrap();
    let star = LabeledNetwork::new(3, &[(2, 1), (2, 3)]).unwrap();
    assert_eq!(canonical_form(&path), canonical_form(&star));
}

#[test]
fn canonical_forms_match_brute_force_grouping() {
    for n in 1..=5 {
        let mut forms: Vec<_> = all_networks(n).map(|g| canonical_form(&g)).collect();
        forms.sort_by_key(|f| (f.n_vertices, f.bits));
        forms.dedup();
        assert_eq!(forms.len(), brute_class_count(n), "n = {n}");
    }
    assert_eq!(enumerate_classes(4, true).unwrap().len(), 11);
    assert_eq!(enumerate_classes(2, true).unwrap().len(), 2);
}

/// Adjacency string of `g` read as a number, first dyad most significant.
fn string_value(g: &LabeledNetwork) -> u64 {
    let m = exchnet::graph::num_dyads(g.n());
    (0..m).fold(0, |acc, t| acc << 1 | (g.mask() >> t & 1))
}

fn brute_canonical_bits(g: &LabeledNetwork) -> u64 {
    let mut best = u64::MAX;
    for_each_permutation(g.n(), |p| best = best.min(string_value(&g.permute(p))));
    best
}

#[test]
fn canonical_form_is_the_brute_force_minimum() {
    for n in 1..=5 {
        for g in all_networks(n) {
            let c = canonical_form(&g);
            assert_eq!(c.bits, brute_canonical_bits(&g), "{}", g.edge_key());
            assert_eq!(c.n_vertices, n);
        }
    }
}

#[test]
fn enumerated_classes_agree_with_labeled_graphs() {
    // every labeled graph on n nodes falls in exactly one enumerated class,
    // and the class sizes add up to 2^(n choose 2)
    for n in 2..=5 {
        let classes = enumerate_classes(n, true).unwrap();
        let total: u64 = classes.iter().map(|c| c.class_size(n)).sum();
        assert_eq!(total, 1 << exchnet::graph::num_dyads(n));
        for g in all_networks(n) {
            let c = UnlabeledClass::of(&g);
            assert_eq!(classes.iter().filter(|k| **k == c).count(), 1);
        }
    }
}

#[test]
fn class_counts_grow() {
    let counts: Vec<usize> = (1..=7).map(|n| enumerate_classes(n, true).unwrap().len()).collect();
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
    // graphs without isolated vertices on at most n vertices, plus the empty graph
    assert_eq!(counts, vec![1, 2, 4, 11, 34, 156, 1044]);
}

#[test]
fn automorphisms() {
    assert_eq!(aut_count(&LabeledNetwork::complete(3)), 6);
    assert_eq!(aut_count(&LabeledNetwork::new(2, &[(1, 2)]).unwrap()), 2);
    assert_eq!(aut_count(&common::paw()), 2);
    for n in 1..=5 {
        for g in all_networks(n) {
            let mut fixing = 0;
            for_each_permutation(n, |p| {
                if g.permute(p) == g {
                    fixing += 1;
                }
            });
            assert_eq!(aut_count(&g), fixing);
            assert_eq!(factorial(n) % fixing, 0);
        }
    }
}

#[test]
fn degree_distributions() {
    assert_eq!(common::paw().degree_distribution().counts, vec![0, 1, 2, 1]);
    assert_eq!(LabeledNetwork::empty(5).degree_distribution().counts, vec![5, 0, 0, 0, 0]);
    assert_eq!(LabeledNetwork::complete(4).degree_distribution().counts, vec![0, 0, 0, 4]);
    for g in all_networks(5) {
        let dd = DegreeDistribution::of(&g);
        assert_eq!(dd.node_count(), 5);
        assert_eq!(dd.edge_count(), g.edge_count());
    }
}

#[test]
fn components() {
    assert_eq!(connected_components(&LabeledNetwork::matching(2)).len(), 2);
    assert_eq!(connected_components(&common::paw()).len(), 1);
    let g = LabeledNetwork::new(5, &[(1, 2), (3, 4), (4, 5)]).unwrap();
    assert_eq!(connected_components(&g), vec![vec![0, 1], vec![2, 3, 4]]);
}

#[test]
fn edge_list_format() {
    let g = LabeledNetwork::parse_edge_list("# paw\nn 4\n1 4\n\n2 3 # inner\n2 4\n3 4\n").unwrap();
    assert_eq!(g, common::paw());
    assert_eq!(LabeledNetwork::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    assert!(LabeledNetwork::parse_edge_list("n 3\n1 1\n").is_err());
    assert!(LabeledNetwork::parse_edge_list("n 3\n1 4\n").is_err());
    assert!(LabeledNetwork::parse_edge_list("3\n1 2\n").is_err());
}

fn network(max_n: usize) -> impl Strategy<Value = LabeledNetwork> {
    (1..=max_n).prop_flat_map(|n| {
        let m = exchnet::graph::num_dyads(n);
        (Just(n), 0..1u64 << m).prop_map(|(n, mask)| LabeledNetwork::from_mask(n, mask))
    })
}

proptest! {
    #[test]
    fn canonical_form_ignores_labels(g in network(6), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.permute(&perm);
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        prop_assert_eq!(UnlabeledClass::of(&g), UnlabeledClass::of(&h));
        prop_assert_eq!(g.degree_distribution(), h.degree_distribution());
        prop_assert_eq!(aut_count(&g), aut_count(&h));
    }

    #[test]
    fn canonical_form_minimal_on_larger_graphs(g in network(7)) {
        prop_assert_eq!(canonical_form(&g).bits, brute_canonical_bits(&g));
    }

    #[test]
    fn class_keys_round_trip(g in network(6)) {
        let c = UnlabeledClass::of(&g);
        prop_assert_eq!(UnlabeledClass::parse_key(&c.key()).unwrap(), c);
        prop_assert!(brute_isomorphic(&c.padded(g.n()), &g));
    }
}
