//! Tree-decompositions: validation of the three axioms, adhesion, width,
//! torsos, edge-separations, treewidth (exact and heuristic), clique
//! subtrees, tree centers and edge contraction.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::separations::{is_tight, Separation};
use crate::util::UnionFind;

/// Default vertex cap for [`exact_treewidth`]; the subset recursion is `2^n`.
pub const DEFAULT_TREEWIDTH_CAP: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TdError {
    #[error("decomposition tree is not a tree")]
    NotATree,
    #[error("tree node `{0}` has no part")]
    MissingPart(Vertex),
    #[error("part given for `{0}`, which is not a tree node")]
    ExtraPart(Vertex),
    #[error("unknown tree node `{0}`")]
    UnknownNode(Vertex),
    #[error("`{0}`-`{1}` is not an edge of the decomposition tree")]
    UnknownTreeEdge(Vertex, Vertex),
    #[error("graph has {n} vertices, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("no part contains all of {0:?}")]
    EmptyCliqueSubtree(VertexSet),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A decomposition tree together with one part per tree node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    tree: Graph,
    parts: BTreeMap<Vertex, VertexSet>,
}

impl TreeDecomposition {
    pub fn new(tree: Graph, parts: BTreeMap<Vertex, VertexSet>) -> Result<Self, TdError> {
        if !tree.is_tree() {
            return Err(TdError::NotATree);
        }
        if let Some(t) = tree.vertices().iter().find(|t| !parts.contains_key(t)) {
            return Err(TdError::MissingPart(t.clone()));
        }
        if let Some(t) = parts.keys().find(|t| !tree.contains(t)) {
            return Err(TdError::ExtraPart(t.clone()));
        }
        Ok(TreeDecomposition { tree, parts })
    }

    /// Convenience constructor from tree edges and `(node, part)` pairs.
    pub fn from_parts<N, V, P, I>(tree_edges: Vec<(N, N)>, parts: I) -> Result<Self, TdError>
    where
        N: Into<Vertex>,
        V: Into<Vertex>,
        P: IntoIterator<Item = V>,
        I: IntoIterator<Item = (N, P)>,
    {
        let parts: BTreeMap<Vertex, VertexSet> = parts
            .into_iter()
            .map(|(t, p)| (t.into(), p.into_iter().map(Into::into).collect()))
            .collect();
        let tree = Graph::new(parts.keys().cloned(), tree_edges)?;
        TreeDecomposition::new(tree, parts)
    }

    /// The trivial decomposition with a single part.
    pub fn single(node: impl Into<Vertex>, part: VertexSet) -> Self {
        let node = node.into();
        let tree = Graph::new([node.clone()], Vec::<(Vertex, Vertex)>::new())
            .expect("single vertex");
        TreeDecomposition {
            tree,
            parts: BTreeMap::from([(node, part)]),
        }
    }

    pub fn tree(&self) -> &Graph {
        &self.tree
    }

    pub fn parts(&self) -> &BTreeMap<Vertex, VertexSet> {
        &self.parts
    }

    pub fn nodes(&self) -> &[Vertex] {
        self.tree.vertices()
    }

    pub fn part(&self, t: &Vertex) -> Result<&VertexSet, TdError> {
        self.parts
            .get(t)
            .ok_or_else(|| TdError::UnknownNode(t.clone()))
    }

    pub fn tree_edges(&self) -> Vec<(Vertex, Vertex)> {
        self.tree
            .edges()
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }

    pub fn adhesion_set(&self, t1: &Vertex, t2: &Vertex) -> Result<VertexSet, TdError> {
        if !self.tree.has_edge(t1, t2) {
            return Err(TdError::UnknownTreeEdge(t1.clone(), t2.clone()));
        }
        Ok(self.parts[t1].intersection(&self.parts[t2]).cloned().collect())
    }

    /// Adhesion set of every tree edge, in tree-edge order.
    pub fn adhesion_sets(&self) -> Vec<((Vertex, Vertex), VertexSet)> {
        self.tree
            .edges()
            .map(|(a, b)| {
                let s = self.parts[a].intersection(&self.parts[b]).cloned().collect();
                ((a.clone(), b.clone()), s)
            })
            .collect()
    }

    /// Adhesion sets as a set of vertex sets (equal sets counted once).
    pub fn distinct_adhesion_sets(&self) -> BTreeSet<VertexSet> {
        self.adhesion_sets().into_iter().map(|(_, s)| s).collect()
    }

    /// Renames host vertices inside the parts.
    pub fn map_vertices(&self, f: impl Fn(&Vertex) -> Vertex) -> TreeDecomposition {
        TreeDecomposition {
            tree: self.tree.clone(),
            parts: self
                .parts
                .iter()
                .map(|(t, p)| (t.clone(), p.iter().map(&f).collect()))
                .collect(),
        }
    }

    /// Renames tree nodes through an injective map.
    pub fn map_nodes(&self, f: impl Fn(&Vertex) -> Vertex) -> TreeDecomposition {
        TreeDecomposition {
            tree: self.tree.relabel(&f),
            parts: self
                .parts
                .iter()
                .map(|(t, p)| (f(t), p.clone()))
                .collect(),
        }
    }

    /// Tree nodes whose part contains `v`.
    pub fn nodes_containing(&self, v: &Vertex) -> BTreeSet<Vertex> {
        self.parts
            .iter()
            .filter(|(_, p)| p.contains(v))
            .map(|(t, _)| t.clone())
            .collect()
    }
}

/// The first axiom a decomposition violates, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// A part names a vertex the host does not have.
    UnknownVertex { node: Vertex, vertex: Vertex },
    /// (T1): a host vertex lies in no part.
    T1 { vertex: Vertex },
    /// (T2): a host edge lies in no part.
    T2 { edge: (Vertex, Vertex) },
    /// (T3): the nodes containing `vertex` do not induce a subtree.
    T3 { vertex: Vertex, pieces: Vec<BTreeSet<Vertex>> },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::UnknownVertex { .. } => "parts",
            Violation::T1 { .. } => "T1",
            Violation::T2 { .. } => "T2",
            Violation::T3 { .. } => "T3",
        }
    }
}

/// Checks (T1), (T2) and (T3) in that order.
pub fn validate(host: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    for (t, part) in &td.parts {
        if let Some(v) = part.iter().find(|v| !host.contains(v)) {
            return Err(Violation::UnknownVertex {
                node: t.clone(),
                vertex: v.clone(),
            });
        }
    }
    let mut covered = vec![false; host.vertex_count()];
    for part in td.parts.values() {
        for v in part {
            covered[host.index_of(v).expect("checked")] = true;
        }
    }
    if let Some(i) = covered.iter().position(|c| !c) {
        return Err(Violation::T1 {
            vertex: host.vertex(i).clone(),
        });
    }
    for (u, v) in host.edges() {
        if !td.parts.values().any(|p| p.contains(u) && p.contains(v)) {
            return Err(Violation::T2 {
                edge: (u.clone(), v.clone()),
            });
        }
    }
    for v in host.vertices() {
        let holding = td.nodes_containing(v);
        let sub = td.tree.induced_subgraph(&holding).expect("tree nodes");
        if !sub.is_connected() {
            return Err(Violation::T3 {
                vertex: v.clone(),
                pieces: sub.components().into_iter().collect(),
            });
        }
    }
    Ok(())
}

/// `(adhesion, width)`; adhesion is 0 for a single-node tree and width is 0
/// when every part is empty.
pub fn adhesion_and_width(td: &TreeDecomposition) -> (usize, usize) {
    let adhesion = td
        .adhesion_sets()
        .iter()
        .map(|(_, s)| s.len())
        .max()
        .unwrap_or(0);
    let width = td
        .parts
        .values()
        .map(BTreeSet::len)
        .max()
        .unwrap_or(0)
        .saturating_sub(1);
    (adhesion, width)
}

/// A part together with its torso graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torso {
    pub base: VertexSet,
    pub graph: Graph,
}

/// Induced subgraph on `V_t` with every adhesion set at `t` made a clique.
pub fn torso(host: &Graph, td: &TreeDecomposition, t: &Vertex) -> Result<Torso, TdError> {
    let base = td.part(t)?.clone();
    let induced = host.induced_subgraph(&base)?;
    let ti = td.tree.try_index(t)?;
    let mut extra: Vec<(Vertex, Vertex)> = Vec::new();
    for &ni in td.tree.neighbors_of(ti) {
        let s: Vec<&Vertex> = base
            .intersection(&td.parts[td.tree.vertex(ni)])
            .collect();
        for (a, &u) in s.iter().enumerate() {
            for &v in &s[a + 1..] {
                extra.push((u.clone(), v.clone()));
            }
        }
    }
    let graph = induced.with_edges(extra.iter().map(|(a, b)| (a, b)))?;
    Ok(Torso { base, graph })
}

/// Union of the parts on either side of the tree edge `t1`-`t2`; the first
/// side is the one containing `t1`.
pub fn edge_separation(
    _host: &Graph,
    td: &TreeDecomposition,
    t1: &Vertex,
    t2: &Vertex,
) -> Result<Separation, TdError> {
    if !td.tree.has_edge(t1, t2) {
        return Err(TdError::UnknownTreeEdge(t1.clone(), t2.clone()));
    }
    let (i1, i2) = (td.tree.index_of(t1).unwrap(), td.tree.index_of(t2).unwrap());
    // Walk from t1 without crossing the removed edge.
    let mut side = vec![false; td.tree.vertex_count()];
    let mut stack = vec![i1];
    side[i1] = true;
    while let Some(u) = stack.pop() {
        for &w in td.tree.neighbors_of(u) {
            if !side[w] && !(u == i1 && w == i2) {
                side[w] = true;
                stack.push(w);
            }
        }
    }
    let mut a = VertexSet::new();
    let mut b = VertexSet::new();
    for (i, t) in td.tree.vertices().iter().enumerate() {
        let target = if side[i] { &mut a } else { &mut b };
        target.extend(td.parts[t].iter().cloned());
    }
    Ok(Separation::new(a, b))
}

/// Exact treewidth by the subset recursion
/// `TW(S) = min_v max(TW(S - v), |Q(S - v, v)|)`, capped at
/// [`DEFAULT_TREEWIDTH_CAP`] vertices.
pub fn exact_treewidth(g: &Graph) -> Result<usize, TdError> {
    exact_treewidth_capped(g, DEFAULT_TREEWIDTH_CAP)
}

pub fn exact_treewidth_capped(g: &Graph, cap: usize) -> Result<usize, TdError> {
    let n = g.vertex_count();
    if n > cap || n > 30 {
        return Err(TdError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|i| g.neighbors_of(i).iter().fold(0u32, |m, &j| m | (1 << j)))
        .collect();
    // q_size(s, v): vertices outside s + v reachable from v through s.
    let q_size = |s: u32, v: usize| -> u32 {
        let mut reach = 1u32 << v;
        loop {
            let mut grow = 0u32;
            let mut bits = reach;
            while bits != 0 {
                let x = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                grow |= nbr[x];
            }
            let next = reach | (grow & s);
            if next == reach {
                return (grow & !s & !(1u32 << v)).count_ones();
            }
            reach = next;
        }
    };
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // tw[s] stores TW(s) + 1 so that the empty set holds 0.
    let mut tw = vec![0u8; (full as usize) + 1];
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let q = q_size(rest, v) as u8 + 1;
            let val = tw[rest as usize].max(q);
            best = best.min(val);
        }
        tw[s as usize] = best;
    }
    Ok(usize::from(tw[full as usize]).saturating_sub(1))
}

/// Dense mutable adjacency used by the elimination-based routines.
fn adjacency_sets(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.vertex_count())
        .map(|i| g.neighbors_of(i).iter().copied().collect())
        .collect()
}

fn eliminate(adj: &mut [BTreeSet<usize>], alive: &mut [bool], v: usize) {
    let nb: Vec<usize> = adj[v].iter().copied().collect();
    for (a, &x) in nb.iter().enumerate() {
        adj[x].remove(&v);
        for &y in &nb[a + 1..] {
            adj[x].insert(y);
            adj[y].insert(x);
        }
    }
    adj[v].clear();
    alive[v] = false;
}

/// Min-degree elimination; ties go to the smallest vertex. Tree nodes are
/// named after the eliminated vertex.
pub fn heuristic_td(g: &Graph) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::single(0i64, VertexSet::new());
    }
    let mut adj = adjacency_sets(g);
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let mut later: Vec<Vec<usize>> = vec![Vec::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| (adj[i].len(), i))
            .expect("a vertex remains");
        later[v] = adj[v].iter().copied().collect();
        order.push(v);
        eliminate(&mut adj, &mut alive, v);
    }
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for &v in &order {
        match later[v].iter().min_by_key(|&&u| pos[u]) {
            Some(&u) => tree_edges.push((g.vertex(v).clone(), g.vertex(u).clone())),
            None => roots.push(v),
        }
    }
    // One tree per component; chain the roots with empty adhesion.
    for w in roots.windows(2) {
        tree_edges.push((g.vertex(w[0]).clone(), g.vertex(w[1]).clone()));
    }
    let parts: Vec<(Vertex, Vec<Vertex>)> = order
        .iter()
        .map(|&v| {
            let mut bag: Vec<Vertex> = later[v].iter().map(|&u| g.vertex(u).clone()).collect();
            bag.push(g.vertex(v).clone());
            (g.vertex(v).clone(), bag)
        })
        .collect();
    TreeDecomposition::from_parts(tree_edges, parts).expect("elimination tree is a tree")
}

/// Minor-min-width lower bound on treewidth.
pub fn treewidth_lower_bound(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut adj = adjacency_sets(g);
    let mut alive = vec![true; n];
    let mut lb = 0;
    for _ in 0..n {
        let Some(v) = (0..n).filter(|&i| alive[i]).min_by_key(|&i| (adj[i].len(), i)) else {
            break;
        };
        lb = lb.max(adj[v].len());
        alive[v] = false;
        let Some(u) = adj[v].iter().copied().min_by_key(|&u| (adj[u].len(), u)) else {
            continue;
        };
        // Contract v into u.
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &x in &nb {
            adj[x].remove(&v);
            if x != u {
                adj[x].insert(u);
                adj[u].insert(x);
            }
        }
        adj[v].clear();
    }
    lb
}

/// Treewidth computed exactly after the simplicial and almost-simplicial
/// reduction rules, provided the reduced graph fits under `cap`. `None` when
/// it does not.
pub fn treewidth_with_reductions(g: &Graph, cap: usize) -> Option<usize> {
    let n = g.vertex_count();
    let mut adj = adjacency_sets(g);
    let mut alive = vec![true; n];
    let mut low = treewidth_lower_bound(g);
    loop {
        let is_clique = |adj: &[BTreeSet<usize>], set: &[usize]| {
            set.iter()
                .enumerate()
                .all(|(a, &x)| set[a + 1..].iter().all(|y| adj[x].contains(y)))
        };
        let mut reduced = None;
        for v in (0..n).filter(|&i| alive[i]) {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            if is_clique(&adj, &nb) {
                reduced = Some(v);
                break;
            }
            if nb.len() <= low {
                let almost = (0..nb.len()).any(|skip| {
                    let rest: Vec<usize> = nb
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    is_clique(&adj, &rest)
                });
                if almost {
                    reduced = Some(v);
                    break;
                }
            }
        }
        match reduced {
            Some(v) => {
                low = low.max(adj[v].len());
                eliminate(&mut adj, &mut alive, v);
            }
            None => break,
        }
    }
    let rest: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    if rest.len() > cap {
        return None;
    }
    let verts: Vec<Vertex> = rest.iter().map(|&i| g.vertex(i).clone()).collect();
    let mut local = vec![usize::MAX; n];
    for (k, &i) in rest.iter().enumerate() {
        local[i] = k;
    }
    let dense: Vec<Vec<usize>> = rest
        .iter()
        .map(|&i| adj[i].iter().map(|&j| local[j]).collect())
        .collect();
    let reduced = Graph::from_index_adjacency(verts, &dense);
    let tw = exact_treewidth_capped(&reduced, cap).ok()?;
    Some(tw.max(low))
}

/// Decides `tw(g) <= k` where the bounds or the exact routine can;
/// `None` when undecided.
pub fn treewidth_at_most(g: &Graph, k: usize, cap: usize) -> Option<bool> {
    let n = g.vertex_count();
    if n == 0 || k + 1 >= n {
        return Some(true);
    }
    if treewidth_lower_bound(g) > k {
        return Some(false);
    }
    let (_, upper) = adhesion_and_width(&heuristic_td(g));
    if upper <= k {
        return Some(true);
    }
    treewidth_with_reductions(g, cap).map(|tw| tw <= k)
}

/// Tree nodes whose parts contain all of `s`.
pub fn clique_subtree(td: &TreeDecomposition, s: &VertexSet) -> Result<BTreeSet<Vertex>, TdError> {
    let nodes: BTreeSet<Vertex> = td
        .parts
        .iter()
        .filter(|(_, p)| s.is_subset(p))
        .map(|(t, _)| t.clone())
        .collect();
    if nodes.is_empty() {
        return Err(TdError::EmptyCliqueSubtree(s.clone()));
    }
    Ok(nodes)
}

/// Middle vertex or middle edge of a longest path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "location", rename_all = "snake_case")]
pub enum TreeCenter {
    CentralVertex(Vertex),
    CentralEdge(Vertex, Vertex),
}

/// Center by iterated leaf removal.
pub fn tree_center(tree: &Graph) -> Result<TreeCenter, TdError> {
    if !tree.is_tree() {
        return Err(TdError::NotATree);
    }
    let n = tree.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|i| tree.degree_of(i)).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &leaf in &layer {
            removed[leaf] = true;
            remaining -= 1;
            for &w in tree.neighbors_of(leaf) {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let left: Vec<usize> = (0..n).filter(|&i| !removed[i]).collect();
    Ok(match left.as_slice() {
        [v] => TreeCenter::CentralVertex(tree.vertex(*v).clone()),
        [u, v] => TreeCenter::CentralEdge(tree.vertex(*u).clone(), tree.vertex(*v).clone()),
        _ => unreachable!("leaf stripping leaves one or two vertices"),
    })
}

/// Contracts every tree edge for which `keep(t1, t2, adhesion)` is false and
/// joins the parts along it. Merged nodes take the smallest name in their
/// class.
pub fn contract_td_edges<F>(td: &TreeDecomposition, keep: F) -> TreeDecomposition
where
    F: Fn(&Vertex, &Vertex, &VertexSet) -> bool,
{
    let tree = &td.tree;
    let mut uf = UnionFind::new(tree.vertex_count());
    let mut kept = Vec::new();
    for ((a, b), s) in td.adhesion_sets() {
        let (i, j) = (tree.index_of(&a).unwrap(), tree.index_of(&b).unwrap());
        if keep(&a, &b, &s) {
            kept.push((i, j));
        } else {
            uf.union(i, j);
        }
    }
    let mut rep_name: BTreeMap<usize, Vertex> = BTreeMap::new();
    let mut merged: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for (i, t) in tree.vertices().iter().enumerate() {
        let r = uf.find(i);
        // Vertices are sorted, so the first one seen is the smallest.
        rep_name.entry(r).or_insert_with(|| t.clone());
        merged.entry(r).or_default().extend(td.parts[t].iter().cloned());
    }
    let edges: Vec<(Vertex, Vertex)> = kept
        .into_iter()
        .map(|(i, j)| (rep_name[&uf.find(i)].clone(), rep_name[&uf.find(j)].clone()))
        .collect();
    let parts: BTreeMap<Vertex, VertexSet> = merged
        .into_iter()
        .map(|(r, p)| (rep_name[&r].clone(), p))
        .collect();
    let tree = Graph::new(parts.keys().cloned(), edges).expect("contraction of a tree");
    TreeDecomposition::new(tree, parts).expect("contraction of a tree is a tree")
}

/// Contracts every tree edge whose edge-separation in `host` is not tight.
/// Contracting an edge leaves the edge-separations of the other edges
/// unchanged, so one pass suffices.
pub fn contract_non_tight(host: &Graph, td: &TreeDecomposition) -> TreeDecomposition {
    contract_td_edges(td, |a, b, _| {
        edge_separation(host, td, a, b)
            .ok()
            .and_then(|s| is_tight(host, &s).ok())
            .unwrap_or(false)
    })
}
