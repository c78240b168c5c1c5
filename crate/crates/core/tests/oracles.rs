//! Cross-checks against brute-force oracles that share no code with the
//! library's enumeration or elimination routines.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use psnum_core::{
    enumerate_circuits, group_by_induced_permutation, induced_permutation, ps_via_circuits,
    ps_via_determinant, signed_family_count, verify_class_products, vertex_disjoint_families, Caps,
    Multigraph, Permutation, SignedCount,
};

/// Every edge subset whose edges give each touched vertex exactly one
/// outgoing and one incoming edge and whose touched vertices are connected.
fn brute_force_circuits(g: &Multigraph) -> BTreeSet<Vec<usize>> {
    let m = g.edge_count();
    assert!(m <= 16);
    let n = g.vertex_count();
    let mut found = BTreeSet::new();
    for mask in 1u32..(1 << m) {
        let ids: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let mut outs = vec![0; n];
        let mut ins = vec![0; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                x = parent[x];
            }
            x
        }
        for &i in &ids {
            let e = g.edge(i);
            outs[e.source] += 1;
            ins[e.target] += 1;
            let (a, b) = (root(&mut parent, e.source), root(&mut parent, e.target));
            parent[a] = b;
        }
        let touched: Vec<usize> = (0..n).filter(|&v| outs[v] + ins[v] > 0).collect();
        let balanced = touched.iter().all(|&v| outs[v] == 1 && ins[v] == 1);
        let roots: BTreeSet<usize> = touched.iter().map(|&v| root(&mut parent, v)).collect();
        if balanced && roots.len() == 1 {
            found.insert(ids);
        }
    }
    found
}

/// Every subset of `sets` whose members are pairwise disjoint.
fn brute_force_families(sets: &[BTreeSet<usize>]) -> SignedCount {
    let mut count = SignedCount::default();
    for mask in 0u64..(1 << sets.len()) {
        let chosen: Vec<&BTreeSet<usize>> = (0..sets.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| &sets[i])
            .collect();
        let disjoint = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen[i + 1..].iter().all(|b| a.is_disjoint(b)));
        if disjoint {
            count.record(chosen.len());
        }
    }
    count
}

fn graph_strategy(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Multigraph> {
    (1..=max_vertices).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n), 0..=max_edges)
            .prop_map(move |pairs| Multigraph::from_edges(n, pairs).unwrap())
    })
}

#[test]
fn circuits_match_subset_search() {
    for seed in 0..400 {
        let g = Multigraph::random(5, 8, seed);
        let circuits = enumerate_circuits(&g, 10_000).unwrap();
        let listed: Vec<Vec<usize>> = circuits.iter().map(|c| c.edge_ids().to_vec()).collect();
        let unique: BTreeSet<Vec<usize>> = listed.iter().cloned().collect();
        assert_eq!(unique.len(), listed.len(), "duplicate circuit, seed {seed}");
        assert_eq!(unique, brute_force_circuits(&g), "seed {seed}");
        assert!(circuits.windows(2).all(|w| w[0] < w[1]));

        for c in &circuits {
            let order = c.cycle_order();
            let sources: BTreeSet<usize> = order.iter().map(|&e| g.edge(e).source).collect();
            assert_eq!(sources.len(), order.len());
            for (i, &e) in order.iter().enumerate() {
                let next = order[(i + 1) % order.len()];
                assert_eq!(g.edge(e).target, g.edge(next).source);
            }
            assert_eq!(c.vertices()[0], *sources.iter().next().unwrap());
        }
    }
}

#[test]
fn family_counts_match_subset_search() {
    for seed in 0..300 {
        let g = Multigraph::random(5, 8, seed);
        let circuits = enumerate_circuits(&g, 10_000).unwrap();
        if circuits.len() > 16 {
            continue;
        }
        let sets: Vec<BTreeSet<usize>> = circuits
            .iter()
            .map(|c| c.vertices().iter().copied().collect())
            .collect();
        let oracle = brute_force_families(&sets);
        let walked = signed_family_count(&g, &circuits, 1 << 24).unwrap();
        assert_eq!(walked, oracle, "seed {seed}");

        let families = vertex_disjoint_families(&g, &circuits, 1 << 24).unwrap();
        assert_eq!(families.len() as u64, walked.total());
        let even = families.iter().filter(|f| f.is_even()).count() as u64;
        assert_eq!(even, walked.even);
    }
}

#[test]
fn acyclic_graphs_have_value_one() {
    for seed in 0..200 {
        let g = Multigraph::random(7, 14, seed);
        // keep only forward edges, which cannot close a cycle
        let forward = g
            .edges()
            .iter()
            .filter(|e| e.source < e.target)
            .map(|e| (e.source, e.target));
        let dag = Multigraph::from_edges(g.vertex_count(), forward).unwrap();
        assert_eq!(ps_via_determinant(&dag), BigInt::from(1));
        assert_eq!(
            ps_via_circuits(&dag, &Caps::default()).unwrap(),
            BigInt::from(1)
        );
    }
}

#[test]
fn complete_graph_with_loops() {
    // K_n with every loop: A = J, det(I - J) = 1 - n
    for n in 1..=6 {
        let pairs = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
        let g = Multigraph::from_edges(n, pairs).unwrap();
        let expected = BigInt::from(1 - n as i64);
        assert_eq!(ps_via_determinant(&g), expected);
        assert_eq!(ps_via_circuits(&g, &Caps::default()).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn circuits_equal_determinant(g in graph_strategy(7, 12)) {
        prop_assert_eq!(ps_via_circuits(&g, &Caps::default()).unwrap(), ps_via_determinant(&g));
    }

    #[test]
    fn class_values_sum_to_total(g in graph_strategy(6, 10)) {
        let circuits = enumerate_circuits(&g, 100_000).unwrap();
        let classes = group_by_induced_permutation(&g, &circuits, 1 << 24).unwrap();
        let sum: BigInt = classes.values().map(SignedCount::value).sum();
        prop_assert_eq!(sum, signed_family_count(&g, &circuits, 1 << 24).unwrap().value());
    }

    #[test]
    fn class_products_agree(g in graph_strategy(5, 10)) {
        let rows = verify_class_products(&g, &Caps::default()).unwrap();
        prop_assert!(rows.iter().all(|r| r.agrees()));
    }

    #[test]
    fn families_have_well_defined_permutations(g in graph_strategy(5, 9)) {
        let circuits = enumerate_circuits(&g, 100_000).unwrap();
        for family in vertex_disjoint_families(&g, &circuits, 1 << 20).unwrap() {
            let recomputed = induced_permutation(&g, family.circuits()).unwrap();
            prop_assert_eq!(&recomputed, family.induced());
        }
    }

    #[test]
    fn vertex_relabeling_keeps_value(
        (g, p) in graph_strategy(6, 10).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let p = Permutation::new(p).unwrap();
        let relabeled = Multigraph::from_edges(
            g.vertex_count(),
            g.edges().iter().map(|e| (p.apply(e.source), p.apply(e.target))),
        ).unwrap();
        prop_assert_eq!(ps_via_determinant(&relabeled), ps_via_determinant(&g));
        prop_assert_eq!(
            enumerate_circuits(&relabeled, 100_000).unwrap().len(),
            enumerate_circuits(&g, 100_000).unwrap().len()
        );
    }
}
