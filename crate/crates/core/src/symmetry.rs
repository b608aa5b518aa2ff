//! Automorphism enumeration by backtracking over colour-refined candidate
//! classes, orbits of vertices, vertex sets and separations, and an
//! isomorphism search between two graphs.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::separations::Separation;
use crate::util::UnionFind;

/// Default vertex cap for full enumeration.
pub const DEFAULT_AUTOMORPHISM_CAP: usize = 12;
/// Largest group size the enumeration will materialise.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("graph has {n} vertices, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("automorphism group has more than {0} elements")]
    GroupTooLarge(usize),
}

/// A permutation of vertex identifiers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Automorphism(pub BTreeMap<Vertex, Vertex>);

impl Automorphism {
    pub fn identity(g: &Graph) -> Self {
        Automorphism(g.vertices().iter().map(|v| (v.clone(), v.clone())).collect())
    }

    /// Image of `v`; vertices outside the domain are fixed.
    pub fn apply(&self, v: &Vertex) -> Vertex {
        self.0.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    pub fn apply_set(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.apply(v)).collect()
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism(
            other
                .0
                .iter()
                .map(|(v, w)| (v.clone(), self.apply(w)))
                .collect(),
        )
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism(self.0.iter().map(|(v, w)| (w.clone(), v.clone())).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|(v, w)| v == w)
    }

    /// Whether this permutation maps edges to edges and non-edges to
    /// non-edges of `g`.
    pub fn preserves(&self, g: &Graph) -> bool {
        if self.0.len() != g.vertex_count() || g.vertices().iter().any(|v| !self.0.contains_key(v))
        {
            return false;
        }
        let img: VertexSet = self.0.values().cloned().collect();
        if img != g.vertex_set() {
            return false;
        }
        g.edges()
            .all(|(u, v)| g.has_edge(&self.apply(u), &self.apply(v)))
    }
}

/// Objects on which automorphisms act.
pub trait Act: Sized {
    fn act(&self, a: &Automorphism) -> Self;
}

impl Act for Vertex {
    fn act(&self, a: &Automorphism) -> Self {
        a.apply(self)
    }
}

impl Act for VertexSet {
    fn act(&self, a: &Automorphism) -> Self {
        a.apply_set(self)
    }
}

/// Separations are acted on as unordered pairs.
impl Act for Separation {
    fn act(&self, a: &Automorphism) -> Self {
        Separation::new(a.apply_set(&self.a), a.apply_set(&self.b)).canonical()
    }
}

/// Stable colour classes of the disjoint union of `adjs`, comparable across
/// the graphs.
fn refine(adjs: &[&[Vec<usize>]]) -> Vec<Vec<usize>> {
    let mut colours: Vec<Vec<usize>> = adjs
        .iter()
        .map(|adj| adj.iter().map(Vec::len).collect())
        .collect();
    let mut classes = 0usize;
    loop {
        let sigs: Vec<Vec<(usize, Vec<usize>)>> = adjs
            .iter()
            .zip(&colours)
            .map(|(adj, col)| {
                adj.iter()
                    .enumerate()
                    .map(|(i, nb)| {
                        let mut ns: Vec<usize> = nb.iter().map(|&j| col[j]).collect();
                        ns.sort_unstable();
                        (col[i], ns)
                    })
                    .collect()
            })
            .collect();
        let mut all: Vec<&(usize, Vec<usize>)> = sigs.iter().flatten().collect();
        all.sort();
        all.dedup();
        let ids: HashMap<&(usize, Vec<usize>), usize> =
            all.iter().enumerate().map(|(k, s)| (*s, k)).collect();
        let next: Vec<Vec<usize>> = sigs
            .iter()
            .map(|row| row.iter().map(|s| ids[s]).collect())
            .collect();
        let count = all.len();
        colours = next;
        if count == classes {
            return colours;
        }
        classes = count;
    }
}

/// Breadth-first order so that most vertices have an earlier neighbour.
fn search_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut head = order.len();
        order.push(s);
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

struct Matcher<'a> {
    ga: &'a [Vec<usize>],
    gb: &'a [Vec<usize>],
    ca: &'a [usize],
    cb: &'a [usize],
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNSET: usize = usize::MAX;

impl Matcher<'_> {
    fn new<'a>(
        ga: &'a [Vec<usize>],
        gb: &'a [Vec<usize>],
        ca: &'a [usize],
        cb: &'a [usize],
    ) -> Matcher<'a> {
        Matcher {
            order: search_order(ga),
            map: vec![UNSET; ga.len()],
            used: vec![false; gb.len()],
            ga,
            gb,
            ca,
            cb,
        }
    }

    fn consistent(&self, v: usize, u: usize) -> bool {
        if self.used[u] || self.ca[v] != self.cb[u] {
            return false;
        }
        // Adjacency to already-mapped vertices must match exactly.
        let mapped_nb = self.ga[v].iter().filter(|&&w| self.map[w] != UNSET).count();
        let hits = self.ga[v]
            .iter()
            .filter(|&&w| self.map[w] != UNSET)
            .filter(|&&w| self.gb[u].binary_search(&self.map[w]).is_ok())
            .count();
        if hits != mapped_nb {
            return false;
        }
        let image_nb = self.gb[u]
            .iter()
            .filter(|&&x| self.used[x])
            .count();
        image_nb == mapped_nb
    }

    fn candidates(&self, v: usize) -> Vec<usize> {
        match self.ga[v].iter().find(|&&w| self.map[w] != UNSET) {
            Some(&w) => self.gb[self.map[w]].clone(),
            None => (0..self.gb.len()).collect(),
        }
    }

    /// Visits complete matchings in lexicographic order of the image vector
    /// along the search order; stops when `visit` returns false.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[depth];
        for u in self.candidates(v) {
            if !self.consistent(v, u) {
                continue;
            }
            self.map[v] = u;
            self.used[u] = true;
            let go_on = self.run(depth + 1, visit);
            self.map[v] = UNSET;
            self.used[u] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Full automorphism group, identity first, then in lexicographic order of
/// image vectors.
pub fn automorphisms(g: &Graph) -> Result<Vec<Automorphism>, SymmetryError> {
    automorphisms_capped(g, DEFAULT_AUTOMORPHISM_CAP)
}

pub fn automorphisms_capped(g: &Graph, cap: usize) -> Result<Vec<Automorphism>, SymmetryError> {
    let n = g.vertex_count();
    if n > cap {
        return Err(SymmetryError::TooLarge { n, cap });
    }
    let adj = g.adjacency();
    let colours = refine(&[adj]);
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut overflow = false;
    Matcher::new(adj, adj, &colours[0], &colours[0]).run(0, &mut |m| {
        if perms.len() == MAX_GROUP_ORDER {
            overflow = true;
            return false;
        }
        perms.push(m.to_vec());
        true
    });
    if overflow {
        return Err(SymmetryError::GroupTooLarge(MAX_GROUP_ORDER));
    }
    perms.sort();
    Ok(perms
        .into_iter()
        .map(|p| {
            Automorphism(
                p.iter()
                    .enumerate()
                    .map(|(i, &j)| (g.vertex(i).clone(), g.vertex(j).clone()))
                    .collect(),
            )
        })
        .collect())
}

/// An isomorphism from `g` onto `h`, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<BTreeMap<Vertex, Vertex>> {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let colours = refine(&[g.adjacency(), h.adjacency()]);
    let mut ca = colours[0].clone();
    let mut cb = colours[1].clone();
    ca.sort_unstable();
    cb.sort_unstable();
    if ca != cb {
        return None;
    }
    let mut found = None;
    Matcher::new(g.adjacency(), h.adjacency(), &colours[0], &colours[1]).run(0, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    found.map(|m| {
        m.iter()
            .enumerate()
            .map(|(i, &j)| (g.vertex(i).clone(), h.vertex(j).clone()))
            .collect()
    })
}

/// Partition of `objects` into orbits under `group`. Images that are not in
/// `objects` are ignored; blocks and their members are sorted.
pub fn orbits_under<T>(group: &[Automorphism], objects: &[T]) -> Vec<Vec<T>>
where
    T: Act + Ord + Clone,
{
    let index: BTreeMap<&T, usize> = objects.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut uf = UnionFind::new(objects.len());
    for (i, x) in objects.iter().enumerate() {
        for a in group {
            if let Some(&j) = index.get(&x.act(a)) {
                uf.union(i, j);
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    for (i, x) in objects.iter().enumerate() {
        blocks.entry(uf.find(i)).or_default().push(x.clone());
    }
    let mut out: Vec<Vec<T>> = blocks
        .into_values()
        .map(|mut b| {
            b.sort();
            b.dedup();
            b
        })
        .collect();
    out.sort();
    out
}

/// Orbits of `objects` under the full automorphism group of `g`.
pub fn orbits<T>(g: &Graph, objects: &[T]) -> Result<Vec<Vec<T>>, SymmetryError>
where
    T: Act + Ord + Clone,
{
    Ok(orbits_under(&automorphisms(g)?, objects))
}
