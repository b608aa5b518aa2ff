//! Planarity testing with the left-right criterion, Kuratowski witnesses on
//! small graphs, and components fully attached to a vertex set.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex, VertexSet};
use crate::separations::components_with_attachment;

/// Witness extraction is attempted up to this many vertices.
pub const WITNESS_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

/// A subdivision of K5 or K3,3 contained in the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub branch_vertices: VertexSet,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarityVerdict {
    pub planar: bool,
    pub witness: Option<KuratowskiWitness>,
}

pub fn is_planar(g: &Graph) -> PlanarityVerdict {
    let planar = lr_planar(g);
    let witness = if !planar && g.vertex_count() <= WITNESS_CAP {
        kuratowski_witness(g)
    } else {
        None
    };
    PlanarityVerdict { planar, witness }
}

/// Boolean planarity test without witness extraction.
pub fn lr_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    if n > 2 && g.edge_count() > 3 * n - 6 {
        return false;
    }
    LrState::new(g.adjacency()).run()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn edge(e: usize) -> Self {
        Interval {
            low: Some(e),
            high: Some(e),
        }
    }

    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Debug, Clone, Copy)]
struct ConflictPair {
    id: usize,
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState<'a> {
    adj: &'a [Vec<usize>],
    height: Vec<Option<usize>>,
    parent_edge: Vec<Option<usize>>,
    roots: Vec<usize>,
    // Oriented edges, indexed by edge id.
    src: Vec<usize>,
    dst: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting_depth: Vec<usize>,
    out_edges: Vec<Vec<usize>>,
    reference: Vec<Option<usize>>,
    lowpt_edge: Vec<Option<usize>>,
    stack_bottom: Vec<Option<usize>>,
    stack: Vec<ConflictPair>,
    next_id: usize,
}

impl<'a> LrState<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        LrState {
            adj,
            height: vec![None; n],
            parent_edge: vec![None; n],
            roots: Vec::new(),
            src: Vec::new(),
            dst: Vec::new(),
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting_depth: Vec::new(),
            out_edges: vec![Vec::new(); n],
            reference: Vec::new(),
            lowpt_edge: Vec::new(),
            stack_bottom: Vec::new(),
            stack: Vec::new(),
            next_id: 0,
        }
    }

    fn run(mut self) -> bool {
        let n = self.adj.len();
        let mut oriented: HashMap<(usize, usize), usize> = HashMap::new();
        for v in 0..n {
            if self.height[v].is_none() {
                self.height[v] = Some(0);
                self.roots.push(v);
                self.orient(v, &mut oriented);
            }
        }
        let m = self.src.len();
        self.reference = vec![None; m];
        self.lowpt_edge = vec![None; m];
        self.stack_bottom = vec![None; m];
        for v in 0..n {
            let depth = &self.nesting_depth;
            self.out_edges[v].sort_by_key(|&e| depth[e]);
        }
        let roots = self.roots.clone();
        roots.into_iter().all(|r| self.test(r))
    }

    fn h(&self, v: usize) -> usize {
        self.height[v].expect("visited")
    }

    fn orient(&mut self, root: usize, oriented: &mut HashMap<(usize, usize), usize>) {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut resume = vec![None::<usize>; n];
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            let e = self.parent_edge[v];
            while ind[v] < self.adj[v].len() {
                let w = self.adj[v][ind[v]];
                let vw = match resume[v].take() {
                    Some(vw) => vw,
                    None => {
                        let key = (v.min(w), v.max(w));
                        if oriented.contains_key(&key) {
                            ind[v] += 1;
                            continue;
                        }
                        let vw = self.src.len();
                        oriented.insert(key, vw);
                        self.src.push(v);
                        self.dst.push(w);
                        self.out_edges[v].push(vw);
                        let hv = self.h(v);
                        self.lowpt.push(hv);
                        self.lowpt2.push(hv);
                        self.nesting_depth.push(0);
                        if self.height[w].is_none() {
                            self.parent_edge[w] = Some(vw);
                            self.height[w] = Some(hv + 1);
                            resume[v] = Some(vw);
                            dfs.push(v);
                            dfs.push(w);
                            break;
                        }
                        self.lowpt[vw] = self.h(w);
                        vw
                    }
                };
                self.nesting_depth[vw] = 2 * self.lowpt[vw];
                if self.lowpt2[vw] < self.h(v) {
                    self.nesting_depth[vw] += 1;
                }
                if let Some(e) = e {
                    if self.lowpt[vw] < self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                        self.lowpt[e] = self.lowpt[vw];
                    } else if self.lowpt[vw] > self.lowpt[e] {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                    } else {
                        self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                    }
                }
                ind[v] += 1;
            }
        }
    }

    fn top_id(&self) -> Option<usize> {
        self.stack.last().map(|p| p.id)
    }

    fn push(&mut self, left: Interval, right: Interval) {
        let id = self.next_id;
        self.next_id += 1;
        self.stack.push(ConflictPair { id, left, right });
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        !i.is_empty() && self.lowpt[i.high.expect("nonempty")] > self.lowpt[b]
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        if p.left.is_empty() {
            return self.lowpt[p.right.low.expect("pair is nonempty")];
        }
        if p.right.is_empty() {
            return self.lowpt[p.left.low.expect("pair is nonempty")];
        }
        self.lowpt[p.left.low.unwrap()].min(self.lowpt[p.right.low.unwrap()])
    }

    fn test(&mut self, root: usize) -> bool {
        let n = self.adj.len();
        let mut ind = vec![0usize; n];
        let mut skip_init = vec![false; self.src.len()];
        let mut dfs = vec![root];
        while let Some(v) = dfs.pop() {
            let e = self.parent_edge[v];
            let mut skip_final = false;
            while ind[v] < self.out_edges[v].len() {
                let ei = self.out_edges[v][ind[v]];
                let w = self.dst[ei];
                if !skip_init[ei] {
                    self.stack_bottom[ei] = self.top_id();
                    if Some(ei) == self.parent_edge[w] {
                        dfs.push(v);
                        dfs.push(w);
                        skip_init[ei] = true;
                        skip_final = true;
                        break;
                    }
                    self.lowpt_edge[ei] = Some(ei);
                    self.push(Interval::default(), Interval::edge(ei));
                }
                if self.lowpt[ei] < self.h(v) {
                    let e = e.expect("return edges need a parent edge");
                    if ind[v] == 0 {
                        self.lowpt_edge[e] = self.lowpt_edge[ei];
                    } else if !self.add_constraints(ei, e) {
                        return false;
                    }
                }
                ind[v] += 1;
            }
            if !skip_final {
                if let Some(e) = e {
                    self.remove_back_edges(e);
                }
            }
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let mut p_left = Interval::default();
        let mut p_right = Interval::default();
        while let Some(mut q) = self.stack.pop() {
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let q_low = q.right.low.expect("nonempty");
            if self.lowpt[q_low] > self.lowpt[e] {
                if p_right.is_empty() {
                    p_right = q.right;
                } else {
                    self.reference[p_right.low.expect("nonempty")] = q.right.high;
                }
                p_right.low = q.right.low;
            } else {
                self.reference[q_low] = self.lowpt_edge[e];
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last().copied() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().expect("peeked");
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(l) = p_right.low {
                self.reference[l] = q.right.high;
            }
            if q.right.low.is_some() {
                p_right.low = q.right.low;
            }
            if p_left.is_empty() {
                p_left = q.left;
            } else {
                self.reference[p_left.low.expect("nonempty")] = q.left.high;
            }
            p_left.low = q.left.low;
        }
        if !(p_left.is_empty() && p_right.is_empty()) {
            self.push(p_left, p_right);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        let hu = self.h(u);
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != hu {
                break;
            }
            self.stack.pop();
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(hi) = p.left.high {
                if self.dst[hi] != u {
                    break;
                }
                p.left.high = self.reference[hi];
            }
            if p.left.high.is_none() && p.left.low.is_some() {
                self.reference[p.left.low.unwrap()] = p.right.low;
                p.left.low = None;
            }
            while let Some(hi) = p.right.high {
                if self.dst[hi] != u {
                    break;
                }
                p.right.high = self.reference[hi];
            }
            if p.right.high.is_none() && p.right.low.is_some() {
                self.reference[p.right.low.unwrap()] = p.left.low;
                p.right.low = None;
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < hu {
            if let Some(top) = self.stack.last() {
                let (hl, hr) = (top.left.high, top.right.high);
                self.reference[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }
}

/// Minimal non-planar subgraph by greedy edge deletion, classified as a
/// subdivision of K5 or K3,3.
pub fn kuratowski_witness(g: &Graph) -> Option<KuratowskiWitness> {
    if lr_planar(g) {
        return None;
    }
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    let mut i = 0;
    while i < edges.len() {
        let mut trial = edges.clone();
        trial.remove(i);
        let h = Graph::from_edges(trial.iter().cloned()).expect("subgraph");
        if lr_planar(&h) {
            i += 1;
        } else {
            edges = trial;
        }
    }
    let h = Graph::from_edges(edges.iter().cloned()).expect("subgraph");
    let mut by_degree: BTreeMap<usize, VertexSet> = BTreeMap::new();
    for v in h.vertices() {
        by_degree.entry(h.degree(v).unwrap()).or_default().insert(v.clone());
    }
    let branch: VertexSet = by_degree
        .iter()
        .filter(|(&d, _)| d >= 3)
        .flat_map(|(_, s)| s.iter().cloned())
        .collect();
    let kind = match (branch.len(), by_degree.keys().max()) {
        (5, Some(4)) => KuratowskiKind::K5,
        (6, Some(3)) => KuratowskiKind::K33,
        _ => unreachable!("minimal non-planar graphs are Kuratowski subdivisions"),
    };
    Some(KuratowskiWitness {
        kind,
        branch_vertices: branch,
        edges,
    })
}

/// Components `C` of `g - s` with `N(C) = s`.
pub fn fully_attached_components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    let Ok(sep) = g.indices_of(s) else {
        return Vec::new();
    };
    components_with_attachment(g, &sep)
        .into_iter()
        .filter(|(_, full)| *full)
        .map(|(c, _)| g.set_from_indices(c))
        .collect()
}
