//! The planar gluing construction. Torsos of an adhesion-3 decomposition are
//! classified as finite, bounded-treewidth or planar; each is replaced by a
//! single vertex, a copy of a decomposition tree, or pruned planar pieces;
//! and the replacements are glued through one new vertex per adhesion set.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::metric::{opt_ratio_string, ratio_string, smallest_gamma_for, tightest_constants, QiError, QiOptions, Rational};
use crate::planarity::{fully_attached_components, lr_planar};
use crate::separations::is_tight;
use crate::symmetry::{automorphisms, Automorphism};
use crate::treedecomp::{
    adhesion_and_width, clique_subtree, contract_non_tight, contract_td_edges, edge_separation,
    heuristic_td, torso, tree_center, treewidth_at_most, validate, TdError, TreeCenter,
    TreeDecomposition, Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorsoKind {
    Finite,
    BoundedTreewidth,
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarizeConfig {
    /// Parts with at most this many vertices are finite torsos.
    pub finite_threshold: usize,
    /// Vertex cap for the exact treewidth routine after reductions.
    pub treewidth_cap: usize,
    /// Additive allowance in the quasi-isometry check when markers are given.
    pub marker_tolerance: usize,
    /// Which structures each adhesion vertex `x_S` is joined to.
    pub attachment: AttachmentRule,
}

/// Structures joined to `x_S` in the gluing steps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttachmentRule {
    /// Only the torsos at the ends of tree edges whose adhesion set is `S`.
    /// Every `x_S` is then a cut vertex between the structures and `H` is
    /// planar.
    #[default]
    IncidentEdges,
    /// Every torso whose part contains `S`. Shorter routes in `H`, but
    /// nested adhesion sets can create a K3,3.
    AllContaining,
}

impl Default for PlanarizeConfig {
    fn default() -> Self {
        PlanarizeConfig {
            finite_threshold: 8,
            treewidth_cap: 16,
            marker_tolerance: 3,
            attachment: AttachmentRule::default(),
        }
    }
}

/// Input to the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceBundle {
    pub host: Graph,
    pub td: TreeDecomposition,
    pub k: usize,
    /// Classes fixed by the caller; the rest are computed.
    pub classification: BTreeMap<Vertex, TorsoKind>,
    /// Vertices where a truncated input continues to grow.
    pub infinite_markers: Option<VertexSet>,
    /// Decompositions of individual torsos, by outer tree node.
    pub sub_decompositions: BTreeMap<Vertex, TreeDecomposition>,
}

impl InstanceBundle {
    pub fn new(host: Graph, td: TreeDecomposition, k: usize) -> Self {
        InstanceBundle {
            host,
            td,
            k,
            classification: BTreeMap::new(),
            infinite_markers: None,
            sub_decompositions: BTreeMap::new(),
        }
    }

    pub fn with_markers(mut self, markers: VertexSet) -> Self {
        self.infinite_markers = Some(markers);
        self
    }

    /// Renames host vertices through an injective map, leaving tree nodes as
    /// they are.
    pub fn map_vertices(&self, f: impl Fn(&Vertex) -> Vertex) -> InstanceBundle {
        InstanceBundle {
            host: self.host.relabel(&f),
            td: self.td.map_vertices(&f),
            k: self.k,
            classification: self.classification.clone(),
            infinite_markers: self
                .infinite_markers
                .as_ref()
                .map(|m| m.iter().map(&f).collect()),
            sub_decompositions: self
                .sub_decompositions
                .iter()
                .map(|(t, d)| (t.clone(), d.map_vertices(&f)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarizeError {
    #[error("decomposition is invalid: {0:?}")]
    InvalidDecomposition(Violation),
    #[error("adhesion set of `{0}`-`{1}` has {2} vertices, above 3")]
    AdhesionTooLarge(Vertex, Vertex, usize),
    #[error("torso at `{0}` is not small, has treewidth above {1} (or undecided), and is not planar")]
    Unclassifiable(Vertex, usize),
    #[error("torso at `{node}` cannot be {claimed:?}: {reason}")]
    InconsistentClass {
        node: Vertex,
        claimed: TorsoKind,
        reason: String,
    },
    #[error("sub-decomposition of the torso at `{node}`: {reason}")]
    SubDecomposition { node: Vertex, reason: String },
    #[error("{count} components fully attached to {set:?} in a planar torso piece")]
    PlanarityContradiction { set: VertexSet, count: usize },
    #[error("both components fully attached to {set:?} grow; no side can be pruned")]
    Marker { set: VertexSet },
    #[error("vertex `{0}` received no image")]
    Unmapped(Vertex),
    #[error(transparent)]
    Td(#[from] TdError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_bundle(bundle: &InstanceBundle) -> Result<(), PlanarizeError> {
    validate(&bundle.host, &bundle.td).map_err(PlanarizeError::InvalidDecomposition)?;
    for ((a, b), s) in bundle.td.adhesion_sets() {
        if s.len() > 3 {
            return Err(PlanarizeError::AdhesionTooLarge(a, b, s.len()));
        }
    }
    Ok(())
}

fn decide_class(
    node: &Vertex,
    t: &Graph,
    k: usize,
    config: &PlanarizeConfig,
) -> Result<TorsoKind, PlanarizeError> {
    if t.vertex_count() <= config.finite_threshold {
        return Ok(TorsoKind::Finite);
    }
    if treewidth_at_most(t, k, config.treewidth_cap) == Some(true) {
        return Ok(TorsoKind::BoundedTreewidth);
    }
    if lr_planar(t) {
        return Ok(TorsoKind::Planar);
    }
    Err(PlanarizeError::Unclassifiable(node.clone(), k))
}

fn check_class(
    node: &Vertex,
    t: &Graph,
    k: usize,
    claimed: TorsoKind,
    config: &PlanarizeConfig,
) -> Result<(), PlanarizeError> {
    let fail = |reason: &str| PlanarizeError::InconsistentClass {
        node: node.clone(),
        claimed,
        reason: reason.to_string(),
    };
    match claimed {
        TorsoKind::Finite => Ok(()),
        TorsoKind::BoundedTreewidth => match treewidth_at_most(t, k, config.treewidth_cap) {
            Some(true) => Ok(()),
            Some(false) => Err(fail("treewidth exceeds k")),
            None => Err(fail("treewidth could not be decided")),
        },
        TorsoKind::Planar => {
            if lr_planar(t) {
                Ok(())
            } else {
                Err(fail("torso is not planar"))
            }
        }
    }
}

/// Class of every torso. Precedence is finite, then bounded treewidth, then
/// planar; caller overrides are checked for consistency.
pub fn classify_torsos(
    bundle: &InstanceBundle,
    config: &PlanarizeConfig,
) -> Result<BTreeMap<Vertex, TorsoKind>, PlanarizeError> {
    check_bundle(bundle)?;
    let mut out = BTreeMap::new();
    for t in bundle.td.nodes() {
        let tor = torso(&bundle.host, &bundle.td, t)?;
        let kind = match bundle.classification.get(t) {
            Some(&claimed) => {
                check_class(t, &tor.graph, bundle.k, claimed, config)?;
                claimed
            }
            None => decide_class(t, &tor.graph, bundle.k, config)?,
        };
        out.insert(t.clone(), kind);
    }
    Ok(out)
}

/// One pruned piece `G_s'` of a planar torso.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarPiece {
    pub node: Vertex,
    pub base: VertexSet,
    pub kept: Graph,
    /// Deleted components, each with the separator whose pruning removed it.
    pub deleted: Vec<(VertexSet, VertexSet)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarRefinement {
    pub contracted: TreeDecomposition,
    pub pieces: Vec<PlanarPiece>,
    pub max_deleted: usize,
    pub warnings: Vec<String>,
}

/// Whether component `c` of `piece - s` leads away from the piece: it meets
/// the markers or another outer adhesion set.
fn essential(
    c: &VertexSet,
    s: &VertexSet,
    outer: &BTreeSet<VertexSet>,
    markers: &VertexSet,
) -> bool {
    if !c.is_disjoint(markers) {
        return true;
    }
    outer
        .iter()
        .filter(|o| *o != s)
        .any(|o| o.iter().any(|x| !s.contains(x) && c.contains(x)))
}

fn split_order(c: &VertexSet) -> (std::cmp::Reverse<usize>, Option<Vertex>) {
    (std::cmp::Reverse(c.len()), c.iter().next().cloned())
}

/// Decomposition of a planar torso split along every size-3 outer adhesion
/// set whose two fully attached sides both lead away.
fn default_planar_td(
    t: &Graph,
    outer3: &[VertexSet],
    outer: &BTreeSet<VertexSet>,
    markers: &VertexSet,
) -> Result<TreeDecomposition, PlanarizeError> {
    let mut parts: Vec<VertexSet> = vec![t.vertex_set()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for s in outer3 {
        let adhesions: Vec<VertexSet> = edges
            .iter()
            .map(|&(a, b)| parts[a].intersection(&parts[b]).cloned().collect())
            .collect();
        if adhesions.contains(s) {
            continue;
        }
        let Some(pi) = parts.iter().position(|p| s.is_subset(p)) else {
            continue;
        };
        let piece = t.induced_subgraph(&parts[pi])?;
        let full = fully_attached_components(&piece, s);
        if full.len() > 2 {
            return Err(PlanarizeError::PlanarityContradiction {
                set: s.clone(),
                count: full.len(),
            });
        }
        if full.len() < 2 || !full.iter().all(|c| essential(c, s, outer, markers)) {
            continue;
        }
        // Everything outside the second full component stays in the old part.
        let second: VertexSet = full[1].clone();
        let old: VertexSet = parts[pi].difference(&second).cloned().collect();
        let new: VertexSet = second.union(s).cloned().collect();
        parts[pi] = old;
        parts.push(new);
        let ni = parts.len() - 1;
        // Reattach neighbours whose adhesion now lies in the new part.
        for (e, &(a, b)) in edges.clone().iter().enumerate() {
            let other = if a == pi {
                b
            } else if b == pi {
                a
            } else {
                continue;
            };
            let adh = &adhesions[e];
            if !adh.is_subset(&parts[pi]) {
                debug_assert!(adh.is_subset(&parts[ni]));
                edges[e] = (ni, other);
            }
        }
        edges.push((pi, ni));
    }
    let named: Vec<(i64, VertexSet)> = parts.into_iter().enumerate().map(|(i, p)| (i as i64, p)).collect();
    Ok(TreeDecomposition::from_parts(
        edges.into_iter().map(|(a, b)| (a as i64, b as i64)).collect(),
        named,
    )?)
}

fn sub_error(node: &Vertex, reason: impl Into<String>) -> PlanarizeError {
    PlanarizeError::SubDecomposition {
        node: node.clone(),
        reason: reason.into(),
    }
}

fn check_tight_edges(node: &Vertex, t: &Graph, td: &TreeDecomposition) -> Result<(), PlanarizeError> {
    for (a, b) in td.tree_edges() {
        let sep = edge_separation(t, td, &a, &b)?;
        if is_tight(t, &sep) != Ok(true) {
            return Err(sub_error(node, format!("edge-separation at `{a}`-`{b}` is not tight")));
        }
    }
    Ok(())
}

/// Contracts the torso's decomposition down to the size-3 outer adhesion
/// sets and prunes, in every piece, the non-growing side of each remaining
/// size-3 outer adhesion set.
pub fn refine_planar_torso(
    node: &Vertex,
    t: &Graph,
    supplied: Option<&TreeDecomposition>,
    outer: &BTreeSet<VertexSet>,
    markers: &VertexSet,
) -> Result<PlanarRefinement, PlanarizeError> {
    let outer3: Vec<VertexSet> = outer.iter().filter(|s| s.len() == 3).cloned().collect();
    let contracted = match supplied {
        Some(td) => {
            validate(t, td).map_err(|v| sub_error(node, format!("{v:?}")))?;
            if adhesion_and_width(td).0 > 3 {
                return Err(sub_error(node, "adhesion above 3"));
            }
            check_tight_edges(node, t, td)?;
            contract_td_edges(td, |_, _, s| outer3.contains(s))
        }
        None => default_planar_td(t, &outer3, outer, markers)?,
    };
    let inner: BTreeSet<VertexSet> = contracted.distinct_adhesion_sets();
    let mut warnings = Vec::new();
    let mut pieces = Vec::new();
    let mut max_deleted = 0;
    for (s_node, base) in contracted.parts() {
        let mut kept = t.induced_subgraph(base)?;
        let mut deleted = Vec::new();
        for s in outer3.iter().filter(|s| s.is_subset(base) && !inner.contains(*s)) {
            let full = fully_attached_components(&kept, s);
            if full.len() > 2 {
                return Err(PlanarizeError::PlanarityContradiction {
                    set: s.clone(),
                    count: full.len(),
                });
            }
            if full.len() < 2 {
                continue;
            }
            let ess: Vec<bool> = full.iter().map(|c| essential(c, s, outer, markers)).collect();
            let drop = match (ess[0], ess[1]) {
                (true, false) => 1,
                (false, true) => 0,
                (true, true) => return Err(PlanarizeError::Marker { set: s.clone() }),
                (false, false) => {
                    let keep = if split_order(&full[0]) <= split_order(&full[1]) { 0 } else { 1 };
                    warnings.push(format!(
                        "no growing side at {s:?} in the torso at `{node}`; kept the larger component"
                    ));
                    1 - keep
                }
            };
            let gone = full[drop].clone();
            max_deleted = max_deleted.max(gone.len());
            kept = kept.without(&gone);
            deleted.push((s.clone(), gone));
        }
        pieces.push(PlanarPiece {
            node: s_node.clone(),
            base: base.clone(),
            kept,
            deleted,
        });
    }
    Ok(PlanarRefinement {
        contracted,
        pieces,
        max_deleted,
        warnings,
    })
}

/// Centre of the subtree of parts containing `s`.
pub fn tw_torso_attachment(td: &TreeDecomposition, s: &VertexSet) -> Result<TreeCenter, TdError> {
    let nodes = clique_subtree(td, s)?;
    tree_center(&td.tree().induced_subgraph(&nodes)?)
}

/// Where an H-vertex comes from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    AdhesionSet { set: VertexSet },
    FiniteTorso { node: Vertex },
    TreeNode { torso: Vertex, node: Vertex },
    PlanarCopy { torso: Vertex, piece: Vertex, vertex: Vertex },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub b1: usize,
    pub b2: usize,
    pub b3: usize,
    pub b4: usize,
    pub b5: usize,
    pub b: usize,
    pub finite_threshold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrunedComponent {
    pub torso: Vertex,
    pub piece: Vertex,
    pub separator: VertexSet,
    pub vertices: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionOutput {
    pub h: Graph,
    pub phi: BTreeMap<Vertex, Vertex>,
    pub bounds: Bounds,
    pub provenance: BTreeMap<Vertex, Origin>,
    pub classification: BTreeMap<Vertex, TorsoKind>,
    pub pruned: Vec<PrunedComponent>,
    pub warnings: Vec<String>,
}

fn set_label(s: &VertexSet) -> String {
    let names: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", names.join(","))
}

/// Hands out H-vertex names, suffixing `#n` on a collision.
#[derive(Default)]
struct Names {
    used: BTreeSet<String>,
}

impl Names {
    fn take(&mut self, base: String) -> Vertex {
        let mut name = base.clone();
        let mut n = 1;
        while !self.used.insert(name.clone()) {
            n += 1;
            name = format!("{base}#{n}");
        }
        Vertex::name(name)
    }
}

fn max_part_diameter(t: &Graph, td: &TreeDecomposition) -> usize {
    let mut best = 0;
    for part in td.parts().values() {
        let idx = t.indices_of(part).expect("parts of the torso");
        for &i in &idx {
            let d = t.bfs_from_indices(&[i]);
            for &j in &idx {
                if let Some(x) = d[j] {
                    best = best.max(x);
                }
            }
        }
    }
    best
}

fn max_part_multiplicity(td: &TreeDecomposition) -> usize {
    let mut count: BTreeMap<&Vertex, usize> = BTreeMap::new();
    for part in td.parts().values() {
        for v in part {
            *count.entry(v).or_default() += 1;
        }
    }
    count.values().copied().max().unwrap_or(0)
}

/// Runs the whole construction.
pub fn build_h(
    bundle: &InstanceBundle,
    config: &PlanarizeConfig,
) -> Result<ConstructionOutput, PlanarizeError> {
    let classification = classify_torsos(bundle, config)?;
    let host = &bundle.host;
    let td = &bundle.td;
    let no_markers = VertexSet::new();
    let markers = bundle.infinite_markers.as_ref().unwrap_or(&no_markers);
    let mut names = Names::default();
    let mut provenance: BTreeMap<Vertex, Origin> = BTreeMap::new();
    let mut h_vertices: Vec<Vertex> = Vec::new();
    let mut h_edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut warnings = Vec::new();
    let mut pruned = Vec::new();
    let mut bounds = Bounds {
        finite_threshold: config.finite_threshold,
        ..Bounds::default()
    };

    // (i) one vertex per nonempty adhesion set.
    let adhesion: BTreeSet<VertexSet> = td
        .distinct_adhesion_sets()
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect();
    let mut x_s: BTreeMap<VertexSet, Vertex> = BTreeMap::new();
    for s in &adhesion {
        let x = names.take(format!("xS{}", set_label(s)));
        provenance.insert(x.clone(), Origin::AdhesionSet { set: s.clone() });
        h_vertices.push(x.clone());
        x_s.insert(s.clone(), x);
    }

    // Images by precedence class.
    let mut planar_image: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut torso_image: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    let mut deleted_image: BTreeMap<Vertex, Vertex> = BTreeMap::new();

    for t in td.nodes() {
        let part = td.part(t)?;
        let local: BTreeSet<VertexSet> = td
            .tree()
            .neighbors(t)?
            .map(|u| td.adhesion_set(t, u))
            .collect::<Result<_, _>>()?;
        let inside: Vec<&VertexSet> = adhesion
            .iter()
            .filter(|s| match config.attachment {
                AttachmentRule::IncidentEdges => local.contains(*s),
                AttachmentRule::AllContaining => s.is_subset(part),
            })
            .collect();
        let tor = torso(host, td, t)?;
        match classification[t] {
            TorsoKind::Finite => {
                if part.is_empty() {
                    continue;
                }
                // (ii) and (v)
                bounds.b1 = bounds.b1.max(part.len());
                let x = names.take(format!("xt{}", set_label(part)));
                provenance.insert(x.clone(), Origin::FiniteTorso { node: t.clone() });
                h_vertices.push(x.clone());
                for s in &inside {
                    h_edges.push((x_s[*s].clone(), x.clone()));
                }
                for v in part {
                    torso_image.entry(v.clone()).or_insert_with(|| x.clone());
                }
            }
            TorsoKind::BoundedTreewidth => {
                let sub = match bundle.sub_decompositions.get(t) {
                    Some(d) => {
                        validate(&tor.graph, d).map_err(|v| sub_error(t, format!("{v:?}")))?;
                        check_tight_edges(t, &tor.graph, d)?;
                        d.clone()
                    }
                    None => contract_non_tight(&tor.graph, &heuristic_td(&tor.graph)),
                };
                bounds.b2 = bounds.b2.max(adhesion_and_width(&sub).1);
                bounds.b3 = bounds.b3.max(max_part_diameter(&tor.graph, &sub));
                bounds.b4 = bounds.b4.max(max_part_multiplicity(&sub));
                // (iii)
                let mut copy: BTreeMap<Vertex, Vertex> = BTreeMap::new();
                for n in sub.nodes() {
                    let x = names.take(format!("tw:{t}:{n}"));
                    provenance.insert(
                        x.clone(),
                        Origin::TreeNode {
                            torso: t.clone(),
                            node: n.clone(),
                        },
                    );
                    h_vertices.push(x.clone());
                    copy.insert(n.clone(), x);
                }
                for (a, b) in sub.tree_edges() {
                    h_edges.push((copy[&a].clone(), copy[&b].clone()));
                }
                // (vi)
                for s in &inside {
                    match tw_torso_attachment(&sub, s)? {
                        TreeCenter::CentralVertex(c) => h_edges.push((x_s[*s].clone(), copy[&c].clone())),
                        TreeCenter::CentralEdge(a, b) => {
                            h_edges.push((x_s[*s].clone(), copy[&a].clone()));
                            h_edges.push((x_s[*s].clone(), copy[&b].clone()));
                        }
                    }
                }
                for v in part {
                    let first = sub
                        .parts()
                        .iter()
                        .find(|(_, p)| p.contains(v))
                        .map(|(n, _)| n)
                        .expect("valid sub-decomposition covers the torso");
                    torso_image.entry(v.clone()).or_insert_with(|| copy[first].clone());
                }
            }
            TorsoKind::Planar => {
                let local_markers: VertexSet = markers.intersection(part).cloned().collect();
                let outer: BTreeSet<VertexSet> = inside.iter().map(|s| (*s).clone()).collect();
                let refinement = refine_planar_torso(
                    t,
                    &tor.graph,
                    bundle.sub_decompositions.get(t),
                    &outer,
                    &local_markers,
                )?;
                warnings.extend(refinement.warnings);
                if refinement.max_deleted > 0 {
                    bounds.b5 = bounds.b5.max(refinement.max_deleted + 1);
                }
                for piece in refinement.pieces {
                    // (iv)
                    let mut copy: BTreeMap<Vertex, Vertex> = BTreeMap::new();
                    for v in piece.kept.vertices() {
                        let x = names.take(format!("pl:{t}:{}:{v}", piece.node));
                        provenance.insert(
                            x.clone(),
                            Origin::PlanarCopy {
                                torso: t.clone(),
                                piece: piece.node.clone(),
                                vertex: v.clone(),
                            },
                        );
                        h_vertices.push(x.clone());
                        copy.insert(v.clone(), x.clone());
                        let slot = planar_image.entry(v.clone()).or_insert_with(|| x.clone());
                        if x < *slot {
                            *slot = x;
                        }
                    }
                    for (a, b) in piece.kept.edges() {
                        h_edges.push((copy[a].clone(), copy[b].clone()));
                    }
                    // (vii)
                    let kept_set = piece.kept.vertex_set();
                    for s in inside.iter().filter(|s| s.is_subset(&kept_set)) {
                        for v in s.iter() {
                            h_edges.push((x_s[*s].clone(), copy[v].clone()));
                        }
                    }
                    for (sep, gone) in piece.deleted {
                        for v in &gone {
                            deleted_image.entry(v.clone()).or_insert_with(|| x_s[&sep].clone());
                        }
                        pruned.push(PrunedComponent {
                            torso: t.clone(),
                            piece: piece.node.clone(),
                            separator: sep,
                            vertices: gone,
                        });
                    }
                }
            }
        }
    }
    bounds.b = bounds.b1.max(bounds.b3 * bounds.b4).max(bounds.b5);

    let mut phi: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for v in host.vertices() {
        let image = planar_image
            .get(v)
            .cloned()
            .or_else(|| adhesion.iter().find(|s| s.contains(v)).map(|s| x_s[s].clone()))
            .or_else(|| torso_image.get(v).cloned())
            .or_else(|| deleted_image.get(v).cloned())
            .ok_or_else(|| PlanarizeError::Unmapped(v.clone()))?;
        phi.insert(v.clone(), image);
    }
    let h = Graph::new(h_vertices, h_edges).expect("construction names its vertices");
    Ok(ConstructionOutput {
        h,
        phi,
        bounds,
        provenance,
        classification,
        pruned,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiReport {
    /// Tightest additive constant at gamma = 1.
    #[serde(with = "opt_ratio_string")]
    pub tightest_c: Option<Rational>,
    /// Largest constant allowed: B, plus the tolerance when markers are given.
    #[serde(with = "ratio_string")]
    pub allowed_c: Rational,
    pub passes: bool,
    /// Smallest gamma at which B itself works as the additive constant.
    #[serde(with = "opt_ratio_string")]
    pub gamma_at_b: Option<Rational>,
    pub per_component: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub planar: bool,
    pub host_connected: bool,
    pub h_connected: bool,
    pub connectivity_matches: bool,
    pub qi: QiReport,
    /// Adhesion vertices whose removal does not separate their attachments.
    pub non_separating_x_s: Vec<Vertex>,
    /// Whether every host automorphism maps parts to parts; `None` when the
    /// host is too large to enumerate.
    pub decomposition_invariant: Option<bool>,
}

impl VerificationReport {
    pub fn clean(&self) -> bool {
        self.planar && self.connectivity_matches && self.qi.passes && self.non_separating_x_s.is_empty()
    }
}

/// H-component of `x` in H' (H without the adhesion vertices).
fn structure_of(origin: &Origin) -> Option<(Vertex, Option<Vertex>)> {
    match origin {
        Origin::AdhesionSet { .. } => None,
        Origin::FiniteTorso { node } => Some((node.clone(), None)),
        Origin::TreeNode { torso, .. } => Some((torso.clone(), None)),
        Origin::PlanarCopy { torso, piece, .. } => Some((torso.clone(), Some(piece.clone()))),
    }
}

/// Whether every automorphism maps the family of parts onto itself.
pub fn decomposition_invariance(host: &Graph, td: &TreeDecomposition) -> Option<bool> {
    let auts = automorphisms(host).ok()?;
    let mut parts: Vec<VertexSet> = td.parts().values().cloned().collect();
    parts.sort();
    Some(auts.iter().all(|a: &Automorphism| {
        let mut img: Vec<VertexSet> = parts.iter().map(|p| a.apply_set(p)).collect();
        img.sort();
        img == parts
    }))
}

/// Checks planarity, connectivity, the gamma = 1 constant against B and the
/// separating role of every adhesion vertex.
pub fn verify_output(
    bundle: &InstanceBundle,
    out: &ConstructionOutput,
    config: &PlanarizeConfig,
) -> Result<VerificationReport, QiError> {
    let h = &out.h;
    let host_connected = bundle.host.is_connected();
    let h_connected = h.is_connected();
    let per_component = !host_connected;
    let options = QiOptions { per_component };
    let (_, tightest_c) = tightest_constants(&bundle.host, h, &out.phi, Some(Rational::from_integer(1)), options)?;
    let tolerance = if bundle.infinite_markers.as_ref().is_some_and(|m| !m.is_empty()) {
        config.marker_tolerance
    } else {
        0
    };
    let allowed_c = Rational::from_integer((out.bounds.b + tolerance) as i64);
    let gamma_at_b = smallest_gamma_for(&bundle.host, h, &out.phi, allowed_c, options)?;
    let passes = tightest_c.is_some_and(|c| c <= allowed_c && c >= Rational::zero());

    let mut non_separating = Vec::new();
    for (x, origin) in &out.provenance {
        if !matches!(origin, Origin::AdhesionSet { .. }) {
            continue;
        }
        let xi = h.index_of(x).expect("H vertex");
        let mut groups: BTreeMap<(Vertex, Option<Vertex>), Vec<usize>> = BTreeMap::new();
        for &w in h.neighbors_of(xi) {
            let o = &out.provenance[h.vertex(w)];
            if let Some(key) = structure_of(o) {
                groups.entry(key).or_default().push(w);
            }
        }
        if groups.len() < 2 {
            continue;
        }
        let mut removed = vec![false; h.vertex_count()];
        removed[xi] = true;
        let (labels, _) = h.component_labels_avoiding(Some(&removed));
        let reps: Vec<usize> = groups.values().map(|g| labels[g[0]]).collect();
        let distinct: BTreeSet<usize> = reps.iter().copied().collect();
        if distinct.len() != reps.len() {
            non_separating.push(x.clone());
        }
    }

    Ok(VerificationReport {
        planar: lr_planar(h),
        host_connected,
        h_connected,
        connectivity_matches: host_connected == h_connected,
        qi: QiReport {
            tightest_c,
            allowed_c,
            passes,
            gamma_at_b,
            per_component,
        },
        non_separating_x_s: non_separating,
        decomposition_invariant: decomposition_invariance(&bundle.host, &bundle.td),
    })
}
