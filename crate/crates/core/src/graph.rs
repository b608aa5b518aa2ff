//! Finite undirected simple graphs with stable vertex identifiers.
//!
//! A [`Graph`] is an immutable value. Vertices are kept in sorted order and
//! every algorithm in the crate works on their dense indices internally; the
//! public surface speaks [`Vertex`] so that maps between graphs stay auditable.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Opaque vertex identifier.
///
/// Integers order numerically and before names, so `2 < 10 < "a"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Int(i64),
    Name(String),
}

impl Vertex {
    pub fn name(s: impl Into<String>) -> Self {
        let s = s.into();
        s.parse().unwrap_or(Vertex::Name(s))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Int(i) => write!(f, "{i}"),
            Vertex::Name(s) => f.write_str(s),
        }
    }
}

impl FromStr for Vertex {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // Only canonical integer spellings become integers so that display
        // round-trips: "007" stays a name.
        match s.parse::<i64>() {
            Ok(i) if i.to_string() == s => Ok(Vertex::Int(i)),
            _ => Ok(Vertex::Name(s.to_string())),
        }
    }
}

impl From<i64> for Vertex {
    fn from(i: i64) -> Self {
        Vertex::Int(i)
    }
}

impl From<i32> for Vertex {
    fn from(i: i32) -> Self {
        Vertex::Int(i64::from(i))
    }
}

impl From<usize> for Vertex {
    fn from(i: usize) -> Self {
        Vertex::Int(i as i64)
    }
}

impl From<&str> for Vertex {
    fn from(s: &str) -> Self {
        Vertex::name(s)
    }
}

impl From<String> for Vertex {
    fn from(s: String) -> Self {
        Vertex::name(s)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::Int(i) => Vertex::Int(i),
            Raw::Str(s) => Vertex::name(s),
        })
    }
}

/// A subset of the vertices of some graph.
pub type VertexSet = BTreeSet<Vertex>;

/// Builds a [`VertexSet`] from anything convertible to [`Vertex`].
pub fn vset<I, V>(items: I) -> VertexSet
where
    I: IntoIterator<Item = V>,
    V: Into<Vertex>,
{
    items.into_iter().map(Into::into).collect()
}

/// Shortest-path distance. `Infinite` orders after every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl From<Option<usize>> for Distance {
    fn from(d: Option<usize>) -> Self {
        d.map_or(Distance::Infinite, Distance::Finite)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// Serialized as a number, or the string `"inf"`.
impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Distance::Finite(n)),
            Raw::Str(s) if s == "inf" => Ok(Distance::Infinite),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("bad distance `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(Vertex),
    #[error("self-loop at `{0}`")]
    SelfLoop(Vertex),
    #[error("vertex set must be nonempty")]
    EmptySet,
}

/// Finite undirected simple graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Default for Graph {
    fn default() -> Self {
        Graph::empty()
    }
}

impl Graph {
    pub fn empty() -> Self {
        Graph {
            vertices: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
            edge_count: 0,
        }
    }

    /// Builds a graph from a vertex list and an edge list. Edge endpoints are
    /// added as vertices if missing; repeated edges collapse into one.
    pub fn new<I, E, A, B>(vertices: I, edges: E) -> Result<Self, GraphError>
    where
        I: IntoIterator,
        I::Item: Into<Vertex>,
        E: IntoIterator<Item = (A, B)>,
        A: Into<Vertex>,
        B: Into<Vertex>,
    {
        let mut verts: BTreeSet<Vertex> = vertices.into_iter().map(Into::into).collect();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            verts.insert(a.clone());
            verts.insert(b.clone());
            pairs.push((a, b));
        }
        let vertices: Vec<Vertex> = verts.into_iter().collect();
        let index: HashMap<Vertex, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let mut adj = vec![Vec::new(); vertices.len()];
        for (a, b) in &pairs {
            let (i, j) = (index[a], index[b]);
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            vertices,
            index,
            adj,
            edge_count: edge_count / 2,
        })
    }

    pub fn from_edges<E, A, B>(edges: E) -> Result<Self, GraphError>
    where
        E: IntoIterator<Item = (A, B)>,
        A: Into<Vertex>,
        B: Into<Vertex>,
    {
        Graph::new(std::iter::empty::<Vertex>(), edges)
    }

    /// Builds a graph directly from dense adjacency. `adj` must be symmetric.
    pub(crate) fn from_index_adjacency(vertices: Vec<Vertex>, adj: &[Vec<usize>]) -> Self {
        let edges: Vec<(Vertex, Vertex)> = adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| {
                list.iter()
                    .filter(move |&&j| i < j)
                    .map(move |&j| (i, j))
            })
            .map(|(i, j)| (vertices[i].clone(), vertices[j].clone()))
            .collect();
        Graph::new(vertices, edges).expect("dense adjacency has no loops")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices in sorted order; position equals the dense index.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().cloned().collect()
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn try_index(&self, v: &Vertex) -> Result<usize, GraphError> {
        self.index_of(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    /// Sorted neighbor indices of the vertex at index `i`.
    pub fn neighbors_of(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn neighbors(&self, v: &Vertex) -> Result<impl Iterator<Item = &Vertex> + '_, GraphError> {
        let i = self.try_index(v)?;
        Ok(self.adj[i].iter().map(move |&j| &self.vertices[j]))
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn degree(&self, v: &Vertex) -> Result<usize, GraphError> {
        Ok(self.adj[self.try_index(v)?].len())
    }

    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn has_edge(&self, u: &Vertex, v: &Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adjacent_idx(i, j),
            _ => false,
        }
    }

    /// Edges as sorted pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> + '_ {
        self.edge_indices()
            .map(move |(i, j)| (&self.vertices[i], &self.vertices[j]))
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter().filter(move |&&j| i < j).map(move |&j| (i, j))
        })
    }

    pub(crate) fn adjacency(&self) -> &[Vec<usize>] {
        &self.adj
    }

    pub fn indices_of(&self, set: &VertexSet) -> Result<Vec<usize>, GraphError> {
        set.iter().map(|v| self.try_index(v)).collect()
    }

    pub fn mask_of(&self, set: &VertexSet) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.vertex_count()];
        for v in set {
            mask[self.try_index(v)?] = true;
        }
        Ok(mask)
    }

    pub fn set_from_indices<I: IntoIterator<Item = usize>>(&self, idx: I) -> VertexSet {
        idx.into_iter().map(|i| self.vertices[i].clone()).collect()
    }

    /// Breadth-first distances from a set of sources; `None` when unreachable.
    pub fn bfs_from_indices(&self, sources: &[usize]) -> Vec<Option<usize>> {
        self.bfs_within(sources, None)
    }

    /// BFS restricted to vertices with `allowed[i]` (sources always count).
    pub(crate) fn bfs_within(&self, sources: &[usize], allowed: Option<&[bool]>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &w in &self.adj[u] {
                if dist[w].is_none() && allowed.is_none_or(|a| a[w]) {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Result<Distance, GraphError> {
        let (i, j) = (self.try_index(u)?, self.try_index(v)?);
        Ok(self.bfs_from_indices(&[i])[j].into())
    }

    /// Minimum distance between members of two nonempty sets.
    pub fn set_distance(&self, x: &VertexSet, y: &VertexSet) -> Result<Distance, GraphError> {
        if x.is_empty() || y.is_empty() {
            return Err(GraphError::EmptySet);
        }
        let xs = self.indices_of(x)?;
        let ys = self.indices_of(y)?;
        Ok(self.set_distance_idx(&xs, &ys))
    }

    pub(crate) fn set_distance_idx(&self, xs: &[usize], ys: &[usize]) -> Distance {
        let dist = self.bfs_from_indices(xs);
        ys.iter().filter_map(|&j| dist[j]).min().into()
    }

    /// All-pairs distances by repeated BFS, one row per source index.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        use rayon::prelude::*;
        (0..self.vertex_count())
            .into_par_iter()
            .map(|i| self.bfs_from_indices(&[i]))
            .collect()
    }

    /// Component label per vertex index, labels numbered in index order.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        self.component_labels_avoiding(None)
    }

    /// Components of the graph with the `removed` vertices deleted. Removed
    /// vertices get label `usize::MAX`.
    pub(crate) fn component_labels_avoiding(&self, removed: Option<&[bool]>) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX || removed.is_some_and(|r| r[s]) {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX && !removed.is_some_and(|r| r[w]) {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Components of `g - removed` as sorted index lists, ordered by their
    /// smallest member.
    pub(crate) fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let (label, count) = self.component_labels_avoiding(Some(removed));
        let mut blocks = vec![Vec::new(); count];
        for (i, &l) in label.iter().enumerate() {
            if l != usize::MAX {
                blocks[l].push(i);
            }
        }
        blocks
    }

    pub fn components(&self) -> Vec<VertexSet> {
        let none = vec![false; self.vertex_count()];
        self.components_avoiding(&none)
            .into_iter()
            .map(|b| self.set_from_indices(b))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 <= 1
    }

    /// Vertices outside `x` adjacent to some member of `x`.
    pub fn neighborhood(&self, x: &VertexSet) -> Result<VertexSet, GraphError> {
        let idx = self.indices_of(x)?;
        Ok(self.set_from_indices(self.neighborhood_idx(&idx)))
    }

    pub(crate) fn neighborhood_idx(&self, members: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.vertex_count()];
        for &i in members {
            inside[i] = true;
        }
        let mut out: Vec<usize> = members
            .iter()
            .flat_map(|&i| self.adj[i].iter().copied())
            .filter(|&j| !inside[j])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn induced_subgraph(&self, x: &VertexSet) -> Result<Graph, GraphError> {
        let mask = self.mask_of(x)?;
        Ok(self.induced_by_mask(&mask))
    }

    pub(crate) fn induced_by_mask(&self, mask: &[bool]) -> Graph {
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&i| mask[i]).collect();
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (k, &i) in keep.iter().enumerate() {
            local[i] = k;
        }
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&i| {
                self.adj[i]
                    .iter()
                    .filter(|&&j| mask[j])
                    .map(|&j| local[j])
                    .collect()
            })
            .collect();
        let vertices = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        Graph {
            vertices,
            index: keep
                .iter()
                .enumerate()
                .map(|(k, &i)| (self.vertices[i].clone(), k))
                .collect(),
            edge_count: adj.iter().map(Vec::len).sum::<usize>() / 2,
            adj,
        }
    }

    /// The graph with every vertex of `x` removed.
    pub fn without(&self, x: &VertexSet) -> Graph {
        let mask: Vec<bool> = self.vertices.iter().map(|v| !x.contains(v)).collect();
        self.induced_by_mask(&mask)
    }

    /// A copy with extra edges; endpoints must already be vertices.
    pub fn with_edges<'a, I>(&self, extra: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (&'a Vertex, &'a Vertex)>,
    {
        let mut edges: Vec<(Vertex, Vertex)> =
            self.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
        for (a, b) in extra {
            self.try_index(a)?;
            self.try_index(b)?;
            if a != b {
                edges.push((a.clone(), b.clone()));
            }
        }
        Graph::new(self.vertices.iter().cloned(), edges)
    }

    /// Renames vertices through `f`, which must be injective.
    pub fn relabel(&self, f: impl Fn(&Vertex) -> Vertex) -> Graph {
        let vertices: Vec<Vertex> = self.vertices.iter().map(&f).collect();
        let edges: Vec<(Vertex, Vertex)> = self.edges().map(|(a, b)| (f(a), f(b))).collect();
        let g = Graph::new(vertices, edges).expect("relabeling keeps the graph simple");
        assert_eq!(g.vertex_count(), self.vertex_count(), "relabeling must be injective");
        g
    }

    /// Maximum finite eccentricity over all vertices, per component.
    pub fn diameter(&self) -> usize {
        self.distance_matrix()
            .iter()
            .flat_map(|row| row.iter().flatten().copied())
            .max()
            .unwrap_or(0)
    }

    /// True iff the graph is a tree (connected, `|E| = |V| - 1`, nonempty).
    pub fn is_tree(&self) -> bool {
        !self.is_empty() && self.is_connected() && self.edge_count + 1 == self.vertex_count()
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count + self.component_labels().1 == self.vertex_count()
    }

    pub fn is_clique(&self, set: &VertexSet) -> Result<bool, GraphError> {
        let idx = self.indices_of(set)?;
        Ok(idx
            .iter()
            .enumerate()
            .all(|(a, &i)| idx[a + 1..].iter().all(|&j| self.adjacent_idx(i, j))))
    }
}
