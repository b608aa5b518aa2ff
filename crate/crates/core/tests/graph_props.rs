mod common;

use coarse_graph::io::{parse_edge_list, write_edge_list};
use coarse_graph::{Distance, Graph, Vertex, VertexSet};
use common::*;
use proptest::prelude::*;

fn seeded(seed: u64, n: usize, p: f64) -> Graph {
    random_graph(&mut rng(seed), n, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_match_independent_bfs(seed in any::<u64>(), n in 1usize..25, p in 0.05f64..0.6) {
        let g = seeded(seed, n, p);
        let adj = Adj::new(&g);
        let d = adj.all_pairs();
        for (i, u) in adj.names.iter().enumerate() {
            for (j, v) in adj.names.iter().enumerate() {
                let want = d[i][j].map_or(Distance::Infinite, Distance::Finite);
                prop_assert_eq!(g.distance(u, v).unwrap(), want);
            }
        }
    }

    #[test]
    fn set_distance_is_the_minimum_pair(seed in any::<u64>(), n in 2usize..20, p in 0.05f64..0.5) {
        let g = seeded(seed, n, p);
        let adj = Adj::new(&g);
        let d = adj.all_pairs();
        let x: VertexSet = (0..n).step_by(3).map(|i| Vertex::from(i as i64)).collect();
        let y: VertexSet = (1..n).step_by(4).map(|i| Vertex::from(i as i64)).collect();
        let want = x
            .iter()
            .flat_map(|a| y.iter().filter_map(|b| d[adj.index[a]][adj.index[b]]))
            .min()
            .map_or(Distance::Infinite, Distance::Finite);
        prop_assert_eq!(g.set_distance(&x, &y).unwrap(), want);
    }

    #[test]
    fn components_partition_the_vertices(seed in any::<u64>(), n in 1usize..30, p in 0.0f64..0.3) {
        let g = seeded(seed, n, p);
        let comps = g.components();
        let total: usize = comps.iter().map(|c| c.len()).sum();
        prop_assert_eq!(total, n);
        let removed = vec![false; n];
        prop_assert_eq!(comps.len(), Adj::new(&g).components_without(&removed).len());
        prop_assert_eq!(g.is_connected(), comps.len() <= 1);
    }

    #[test]
    fn edge_list_round_trip(seed in any::<u64>(), n in 1usize..30, p in 0.0f64..0.5) {
        let g = seeded(seed, n, p).relabel(|v| match v {
            Vertex::Int(i) if i % 3 == 0 => Vertex::name(format!("v{i}")),
            other => other.clone(),
        });
        let text = write_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g.clone());
        prop_assert_eq!(write_edge_list(&parse_edge_list(&text).unwrap()), text);
    }

    #[test]
    fn induced_subgraph_keeps_exactly_inner_edges(seed in any::<u64>(), n in 1usize..20, p in 0.1f64..0.7) {
        let g = seeded(seed, n, p);
        let keep: VertexSet = g.vertices().iter().filter(|v| matches!(v, Vertex::Int(i) if i % 2 == 0)).cloned().collect();
        let h = g.induced_subgraph(&keep).unwrap();
        let want = g.edges().filter(|(a, b)| keep.contains(*a) && keep.contains(*b)).count();
        prop_assert_eq!(h.edge_count(), want);
        prop_assert_eq!(h.vertex_set(), keep);
    }
}
