//! Property tests over randomly built connected graphs: serialization
//! round-trips, distance-matrix ground truths, and the structural
//! invariants of class partitions.

mod common;

use mars_core::graph::{DistanceMatrix, Graph};
use mars_core::multiset::{is_k_mars, k_value, partition, vector_k};
use proptest::prelude::*;

/// A connected graph on 2..=10 vertices: a random spanning tree (vertex i
/// attaches to a parent below it) plus a handful of extra edges.
fn arb_connected() -> impl Strategy<Value = Graph> {
    (2usize..=10).prop_flat_map(|n| {
        let parents = proptest::collection::vec(0usize..10_000, n - 1);
        let extras = proptest::collection::vec((0usize..10, 0usize..10), 0..=6);
        (Just(n), parents, extras).prop_map(|(n, parents, extras)| {
            let mut edges: Vec<(usize, usize)> = Vec::new();
            for i in 1..n {
                edges.push((parents[i - 1] % i, i));
            }
            for (a, b) in extras {
                let (a, b) = (a % n, b % n);
                if a != b {
                    edges.push((a.min(b), a.max(b)));
                }
            }
            Graph::from_edges(n, &edges).expect("spanning tree keeps it connected")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trips(g in arb_connected()) {
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn distance_matrix_ground_truths(g in arb_connected()) {
        let dm = DistanceMatrix::from_graph(&g);
        let n = g.n();
        for u in 0..n {
            prop_assert_eq!(dm.dist(u, u), 0);
            for v in 0..n {
                prop_assert_eq!(dm.dist(u, v), dm.dist(v, u));
                prop_assert_eq!(dm.dist(u, v) == 1, g.has_edge(u, v));
                for w in 0..n {
                    prop_assert!(dm.dist(u, w) <= dm.dist(u, v) + dm.dist(v, w));
                }
            }
            prop_assert_eq!(
                dm.eccentricity(u),
                (0..n).map(|v| dm.dist(u, v)).max().unwrap()
            );
        }
        prop_assert_eq!(dm.diameter(), (0..n).map(|u| dm.eccentricity(u)).max().unwrap());
        prop_assert_eq!(dm.radius(), (0..n).map(|u| dm.eccentricity(u)).min().unwrap());
    }

    #[test]
    fn partition_invariants(g in arb_connected(), raw in 1u32..u32::MAX) {
        let dm = DistanceMatrix::from_graph(&g);
        let n = g.n();
        let mask = 1 + raw % ((1u32 << n) - 2);
        let s = common::mask_set(mask);
        let part = partition(&dm, &s).unwrap();

        // The classes cover exactly the vertices outside the probe set,
        // with no overlaps, and come out sorted.
        let mut covered: Vec<usize> = Vec::new();
        for class in &part.classes {
            prop_assert!(!class.members.is_empty());
            prop_assert!(class.members.windows(2).all(|w| w[0] < w[1]));
            covered.extend_from_slice(&class.members);
            // Every outside vertex records one distance per probe vertex.
            let total: u32 = class.key.counts().iter().sum();
            prop_assert_eq!(total as usize, s.len());
        }
        covered.sort_unstable();
        let outside: Vec<usize> = (0..n).filter(|v| !s.contains(v)).collect();
        prop_assert_eq!(covered, outside);
        prop_assert!(part
            .classes
            .windows(2)
            .all(|w| w[0].key.counts() < w[1].key.counts()));

        // The reported guarantee is the smallest class size, the vector
        // guarantee can only be finer, and the exact-match predicate
        // accepts the true value alone.
        let min_size = part.classes.iter().map(|c| c.members.len()).min().unwrap();
        prop_assert_eq!(part.k_value, min_size);
        prop_assert_eq!(k_value(&dm, &s).unwrap(), min_size);
        prop_assert!(vector_k(&dm, &s).unwrap() <= min_size);
        prop_assert!(is_k_mars(&dm, &s, min_size).unwrap());
        prop_assert!(!is_k_mars(&dm, &s, min_size + 1).unwrap());
    }
}
