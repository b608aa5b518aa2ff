mod common;

use std::collections::{BTreeMap, BTreeSet};

use coarse_graph::planarity::lr_planar;
use coarse_graph::planarize::{
    build_h, refine_planar_torso, verify_output, InstanceBundle, Origin, PlanarizeConfig, TorsoKind,
};
use coarse_graph::symmetry::find_isomorphism;
use coarse_graph::treedecomp::{torso, TreeDecomposition};
use coarse_graph::{vset, Graph, Vertex, VertexSet};
use common::*;
use proptest::prelude::*;

fn adhesion_vertex(out: &coarse_graph::planarize::ConstructionOutput, s: &VertexSet) -> Vertex {
    out.provenance
        .iter()
        .find(|(_, o)| matches!(o, Origin::AdhesionSet { set } if set == s))
        .map(|(v, _)| v.clone())
        .expect("x_S present")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn construction_is_planar_total_and_deterministic(seed in any::<u64>()) {
        let entry = random_bundle(seed);
        let cfg = PlanarizeConfig::default();
        let out = build_h(&entry.bundle, &cfg).unwrap();
        prop_assert!(lr_planar(&out.h));
        prop_assert_eq!(out.h.is_connected(), entry.bundle.host.is_connected());
        for v in entry.bundle.host.vertices() {
            prop_assert!(out.h.contains(&out.phi[v]));
        }
        prop_assert_eq!(out.phi.len(), entry.bundle.host.vertex_count());
        prop_assert_eq!(out.provenance.len(), out.h.vertex_count());
        let b = &out.bounds;
        prop_assert_eq!(b.b, b.b1.max(b.b3 * b.b4).max(b.b5));
        prop_assert_eq!(&build_h(&entry.bundle, &cfg).unwrap(), &out);
        // With one tree edge per adhesion set, every x_S is a cut vertex.
        let td = &entry.bundle.td;
        if td.distinct_adhesion_sets().len() == td.tree_edges().len() {
            let report = verify_output(&entry.bundle, &out, &cfg).unwrap();
            prop_assert!(report.non_separating_x_s.is_empty());
        }
    }

    #[test]
    fn every_adhesion_set_gets_one_vertex(seed in any::<u64>()) {
        let entry = random_bundle(seed);
        let out = build_h(&entry.bundle, &PlanarizeConfig::default()).unwrap();
        let sets: BTreeSet<VertexSet> = entry.bundle.td.distinct_adhesion_sets().into_iter().filter(|s| !s.is_empty()).collect();
        let got: BTreeSet<VertexSet> = out
            .provenance
            .values()
            .filter_map(|o| match o {
                Origin::AdhesionSet { set } => Some(set.clone()),
                _ => None,
            })
            .collect();
        prop_assert_eq!(got, sets);
    }
}

/// 4x4 grid glued to a K4 over the boundary path {0, 1, 2}.
fn grid_with_k4() -> InstanceBundle {
    let mut e: Vec<(Vertex, Vertex)> = grid(4, 4).edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    e.extend([(0, 2), (0, 100), (1, 100), (2, 100)].map(|(a, b): (i64, i64)| (a.into(), b.into())));
    let host = Graph::from_edges(e).unwrap();
    let td = TreeDecomposition::from_parts(
        vec![("g", "f")],
        [("g", (0i64..16).collect::<Vec<_>>()), ("f", vec![0, 1, 2, 100])],
    )
    .unwrap();
    let mut b = InstanceBundle::new(host, td, 3);
    b.classification.insert(Vertex::name("g"), TorsoKind::Planar);
    b
}

#[test]
fn grid_glued_to_k4() {
    let b = grid_with_k4();
    let out = build_h(&b, &PlanarizeConfig::default()).unwrap();
    let s = vset([0, 1, 2]);
    let xs = adhesion_vertex(&out, &s);
    let xt = out
        .provenance
        .iter()
        .find(|(_, o)| matches!(o, Origin::FiniteTorso { .. }))
        .map(|(v, _)| v.clone())
        .unwrap();
    assert_eq!(out.h.vertex_count(), 18);
    assert!(out.pruned.is_empty());
    let xs_nbrs: BTreeSet<Vertex> = out.h.neighbors(&xs).unwrap().cloned().collect();
    let mut want: BTreeSet<Vertex> = [0, 1, 2].iter().map(|&i| out.phi[&Vertex::Int(i)].clone()).collect();
    want.insert(xt.clone());
    assert_eq!(xs_nbrs, want);
    assert_eq!(out.h.degree(&xt).unwrap(), 1);
    assert_eq!(out.phi[&Vertex::Int(100)], xt);
    // What remains is the grid torso itself.
    let rest = out.h.without(&[xs, xt].into_iter().collect());
    let grid_torso = torso(&b.host, &b.td, &Vertex::name("g")).unwrap().graph;
    assert!(find_isomorphism(&rest, &grid_torso).is_some());
    let report = verify_output(&b, &out, &PlanarizeConfig::default()).unwrap();
    assert!(report.planar && report.connectivity_matches);
}

/// Prism over a path of `n` triangles `{3i, 3i+1, 3i+2}`.
fn triangle_ladder(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        let t = 3 * i;
        e.extend([(t, t + 1), (t + 1, t + 2), (t, t + 2)]);
        if i + 1 < n {
            e.extend([(t, t + 3), (t + 1, t + 4), (t + 2, t + 5)]);
        }
    }
    edges_to_graph(3 * n, &e)
}

#[test]
fn ladder_splits_at_the_outer_triangle() {
    let n = 7;
    let g = triangle_ladder(n);
    let tri = |i: usize| -> VertexSet { (3 * i..3 * i + 3).map(Vertex::from).collect() };
    let sub = TreeDecomposition::from_parts(
        (0..n - 2).map(|i| (i as i64, i as i64 + 1)).collect(),
        (0..n - 1).map(|i| (i as i64, tri(i).union(&tri(i + 1)).cloned().collect::<Vec<_>>())),
    )
    .unwrap();
    let outer = BTreeSet::from([tri(3)]);
    let markers: VertexSet = tri(0).union(&tri(n - 1)).cloned().collect();
    let r = refine_planar_torso(&Vertex::name("L"), &g, Some(&sub), &outer, &markers).unwrap();
    assert_eq!(r.pieces.len(), 2);
    assert!(r.pieces.iter().all(|p| p.deleted.is_empty()));
    assert_eq!(r.max_deleted, 0);
    let bases: BTreeSet<VertexSet> = r.pieces.iter().map(|p| p.base.clone()).collect();
    let low: VertexSet = (0..4).flat_map(tri).collect();
    let high: VertexSet = (3..n).flat_map(tri).collect();
    assert_eq!(bases, BTreeSet::from([low, high]));
}

#[test]
fn two_vertex_side_is_pruned() {
    // Torso: triangle S = {0,1,2}, a 6-cycle side 10..15 with a marker, and
    // the finite side {20, 21}. Node "x" glues S to the extra vertex 99.
    let mut e: Vec<(i64, i64)> = vec![(0, 1), (1, 2), (0, 2)];
    e.extend((0..6).map(|i| (10 + i, 10 + (i + 1) % 6)));
    e.extend([(0, 10), (1, 12), (2, 14)]);
    e.extend([(20, 21), (20, 0), (20, 1), (21, 1), (21, 2)]);
    e.extend([(99, 0), (99, 1), (99, 2)]);
    let host = Graph::from_edges(e).unwrap();
    let mut p: Vec<i64> = vec![0, 1, 2, 20, 21];
    p.extend(10..16);
    let td = TreeDecomposition::from_parts(vec![("p", "x")], [("p", p), ("x", vec![0, 1, 2, 99])]).unwrap();
    let mut b = InstanceBundle::new(host, td, 3).with_markers(vset([13]));
    b.classification.insert(Vertex::name("p"), TorsoKind::Planar);
    let out = build_h(&b, &PlanarizeConfig::default()).unwrap();
    assert_eq!(out.pruned.len(), 1);
    assert_eq!(out.pruned[0].vertices, vset([20, 21]));
    assert_eq!(out.pruned[0].separator, vset([0, 1, 2]));
    assert_eq!(out.bounds.b5, 3);
    let xs = adhesion_vertex(&out, &vset([0, 1, 2]));
    assert_eq!(out.phi[&Vertex::Int(20)], xs);
    assert_eq!(out.phi[&Vertex::Int(21)], xs);
    assert!(lr_planar(&out.h));
}

#[test]
fn relabelling_the_host_relabels_h() {
    let b = grid_with_k4();
    let shifted = b.map_vertices(|v| match v {
        Vertex::Int(i) => Vertex::name(format!("v{i}")),
        other => other.clone(),
    });
    let cfg = PlanarizeConfig::default();
    let h1 = build_h(&b, &cfg).unwrap().h;
    let h2 = build_h(&shifted, &cfg).unwrap().h;
    assert!(find_isomorphism(&h1, &h2).is_some());
    let counts = |out: &BTreeMap<Vertex, Origin>| out.len();
    assert_eq!(counts(&build_h(&b, &cfg).unwrap().provenance), h2.vertex_count());
}
