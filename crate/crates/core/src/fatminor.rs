//! K-fat minor models: an independent verifier of the four conditions, a
//! searcher (exhaustive on small hosts, ball-and-route heuristic otherwise)
//! and a sweep over K.
//!
//! All distances in the conditions are taken between full vertex sets; a
//! path's end vertices count as part of the path.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Distance, Graph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatMinorModel {
    pub pattern: Graph,
    pub host: Graph,
    pub branch_sets: BTreeMap<Vertex, VertexSet>,
    /// Keyed by pattern edge `(u, v)` with `u < v`; a path may run in
    /// either direction.
    pub edge_paths: BTreeMap<(Vertex, Vertex), Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("pattern vertex `{0}` has no branch set")]
    MissingBranchSet(Vertex),
    #[error("branch set given for `{0}`, which is not a pattern vertex")]
    ExtraBranchSet(Vertex),
    #[error("branch set of `{0}` is empty")]
    EmptyBranchSet(Vertex),
    #[error("branch set of `{0}` is not connected")]
    DisconnectedBranchSet(Vertex),
    #[error("branch sets of `{0}` and `{1}` share `{2}`")]
    OverlappingBranchSets(Vertex, Vertex, Vertex),
    #[error("pattern edge `{0}`-`{1}` has no path")]
    MissingPath(Vertex, Vertex),
    #[error("path given for `{0}`-`{1}`, which is not a pattern edge")]
    ExtraPath(Vertex, Vertex),
    #[error("path for `{0}`-`{1}` is not a path of the host: {2}")]
    NotAPath(Vertex, Vertex, String),
    #[error("`{0}` is not a host vertex")]
    UnknownHostVertex(Vertex),
}

/// A failed instance of one of the four conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition")]
pub enum ConditionFailure {
    /// (1): the path must meet the branch sets exactly in its two ends, one
    /// in each branch set of the edge.
    #[serde(rename = "1")]
    Endpoints { edge: (Vertex, Vertex) },
    /// (2): a path is closer than K to a third branch set.
    #[serde(rename = "2")]
    PathNearBranchSet {
        edge: (Vertex, Vertex),
        vertex: Vertex,
        distance: Distance,
    },
    /// (3): two branch sets are closer than K.
    #[serde(rename = "3")]
    BranchSetsClose {
        u: Vertex,
        v: Vertex,
        distance: Distance,
    },
    /// (4): two paths are closer than K.
    #[serde(rename = "4")]
    PathsClose {
        e: (Vertex, Vertex),
        f: (Vertex, Vertex),
        distance: Distance,
    },
}

impl ConditionFailure {
    pub fn condition(&self) -> u8 {
        match self {
            ConditionFailure::Endpoints { .. } => 1,
            ConditionFailure::PathNearBranchSet { .. } => 2,
            ConditionFailure::BranchSetsClose { .. } => 3,
            ConditionFailure::PathsClose { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatReport {
    pub holds: bool,
    /// Every failure found, condition (1) first.
    pub failures: Vec<ConditionFailure>,
}

impl FatReport {
    pub fn first_failure(&self) -> Option<&ConditionFailure> {
        self.failures.first()
    }
}

fn edge_key(u: &Vertex, v: &Vertex) -> (Vertex, Vertex) {
    if u <= v {
        (u.clone(), v.clone())
    } else {
        (v.clone(), u.clone())
    }
}

fn check_structure(m: &FatMinorModel) -> Result<(), ModelError> {
    let (pattern, host) = (&m.pattern, &m.host);
    for v in pattern.vertices() {
        let b = m
            .branch_sets
            .get(v)
            .ok_or_else(|| ModelError::MissingBranchSet(v.clone()))?;
        if b.is_empty() {
            return Err(ModelError::EmptyBranchSet(v.clone()));
        }
        if let Some(x) = b.iter().find(|x| !host.contains(x)) {
            return Err(ModelError::UnknownHostVertex(x.clone()));
        }
        if !host.induced_subgraph(b).expect("checked").is_connected() {
            return Err(ModelError::DisconnectedBranchSet(v.clone()));
        }
    }
    if let Some(v) = m.branch_sets.keys().find(|v| !pattern.contains(v)) {
        return Err(ModelError::ExtraBranchSet(v.clone()));
    }
    let mut owner: BTreeMap<&Vertex, &Vertex> = BTreeMap::new();
    for (v, b) in &m.branch_sets {
        for x in b {
            if let Some(u) = owner.insert(x, v) {
                return Err(ModelError::OverlappingBranchSets(u.clone(), v.clone(), x.clone()));
            }
        }
    }
    for (u, v) in pattern.edges() {
        let p = m
            .edge_paths
            .get(&edge_key(u, v))
            .ok_or_else(|| ModelError::MissingPath(u.clone(), v.clone()))?;
        let bad = |why: &str| ModelError::NotAPath(u.clone(), v.clone(), why.to_string());
        if p.is_empty() {
            return Err(bad("empty"));
        }
        if let Some(x) = p.iter().find(|x| !host.contains(x)) {
            return Err(ModelError::UnknownHostVertex(x.clone()));
        }
        let distinct: BTreeSet<&Vertex> = p.iter().collect();
        if distinct.len() != p.len() {
            return Err(bad("repeated vertex"));
        }
        if p.windows(2).any(|w| !host.has_edge(&w[0], &w[1])) {
            return Err(bad("consecutive vertices not adjacent"));
        }
    }
    if let Some((a, b)) = m.edge_paths.keys().find(|(a, b)| !pattern.has_edge(a, b)) {
        return Err(ModelError::ExtraPath(a.clone(), b.clone()));
    }
    Ok(())
}

/// Checks conditions (1)-(4) at `k` and reports every failure.
pub fn verify_fat_model(m: &FatMinorModel, k: usize) -> Result<FatReport, ModelError> {
    check_structure(m)?;
    let host = &m.host;
    let pattern = &m.pattern;
    let mut failures = Vec::new();
    let edges: Vec<(Vertex, Vertex)> = pattern.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    let path_sets: Vec<VertexSet> = edges
        .iter()
        .map(|e| m.edge_paths[e].iter().cloned().collect())
        .collect();

    // (1)
    let all_branch: VertexSet = m.branch_sets.values().flatten().cloned().collect();
    for (e, (u, v)) in edges.iter().enumerate() {
        let p = &m.edge_paths[&edges[e]];
        let first = &p[0];
        let last = &p[p.len() - 1];
        let (bu, bv) = (&m.branch_sets[u], &m.branch_sets[v]);
        let ends_ok = p.len() >= 2
            && ((bu.contains(first) && bv.contains(last)) || (bv.contains(first) && bu.contains(last)));
        let interior_ok = p[1..p.len().saturating_sub(1)]
            .iter()
            .all(|x| !all_branch.contains(x));
        if !(ends_ok && interior_ok) {
            failures.push(ConditionFailure::Endpoints { edge: (u.clone(), v.clone()) });
        }
    }
    let far = |d: Distance| match d {
        Distance::Infinite => true,
        Distance::Finite(d) => d >= k,
    };
    let dist = |x: &VertexSet, y: &VertexSet| host.set_distance(x, y).expect("nonempty sets");
    // (2)
    for (e, (u, v)) in edges.iter().enumerate() {
        for w in pattern.vertices() {
            if w == u || w == v {
                continue;
            }
            let d = dist(&path_sets[e], &m.branch_sets[w]);
            if !far(d) {
                failures.push(ConditionFailure::PathNearBranchSet {
                    edge: (u.clone(), v.clone()),
                    vertex: w.clone(),
                    distance: d,
                });
            }
        }
    }
    // (3)
    let pv = pattern.vertices();
    for (i, u) in pv.iter().enumerate() {
        for v in &pv[i + 1..] {
            let d = dist(&m.branch_sets[u], &m.branch_sets[v]);
            if !far(d) {
                failures.push(ConditionFailure::BranchSetsClose {
                    u: u.clone(),
                    v: v.clone(),
                    distance: d,
                });
            }
        }
    }
    // (4)
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let d = dist(&path_sets[i], &path_sets[j]);
            if !far(d) {
                failures.push(ConditionFailure::PathsClose {
                    e: edges[i].clone(),
                    f: edges[j].clone(),
                    distance: d,
                });
            }
        }
    }
    Ok(FatReport {
        holds: failures.is_empty(),
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Largest pattern accepted.
    pub pattern_cap: usize,
    /// Largest host accepted.
    pub host_cap: usize,
    /// Hosts up to this size are searched exhaustively.
    pub exhaustive_cap: usize,
    /// Search nodes (exhaustive) or routing attempts (heuristic).
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            pattern_cap: 5,
            host_cap: 5000,
            exhaustive_cap: 10,
            budget: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("pattern has {n} vertices, above the cap of {cap}")]
    PatternTooLarge { n: usize, cap: usize },
    #[error("host has {n} vertices, above the cap of {cap}")]
    HostTooLarge { n: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(FatMinorModel),
    /// No model exists; `reason` names the argument.
    NotFound { reason: String },
    /// Budget ran out or the heuristic gave up.
    Inconclusive,
}

impl SearchOutcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            SearchOutcome::Found(_) => Verdict::Found,
            SearchOutcome::NotFound { .. } => Verdict::NotFound,
            SearchOutcome::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Found,
    NotFound,
    Inconclusive,
}

fn not_found(reason: &str) -> SearchOutcome {
    SearchOutcome::NotFound {
        reason: reason.to_string(),
    }
}

/// Searches for a K-fat model of `pattern` in `host`. Found models have
/// passed [`verify_fat_model`].
pub fn search_fat_minor(
    pattern: &Graph,
    host: &Graph,
    k: usize,
    config: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let (p, n) = (pattern.vertex_count(), host.vertex_count());
    if p > config.pattern_cap {
        return Err(SearchError::PatternTooLarge { n: p, cap: config.pattern_cap });
    }
    if n > config.host_cap {
        return Err(SearchError::HostTooLarge { n, cap: config.host_cap });
    }
    if let Some(outcome) = shortcut(pattern, host, k) {
        return Ok(outcome);
    }
    let found = if n <= config.exhaustive_cap {
        match Exhaustive::new(pattern, host, k, config.budget).run() {
            Ok(Some(m)) => Some(m),
            Ok(None) => return Ok(not_found("search space exhausted")),
            Err(OutOfBudget) => None,
        }
    } else {
        heuristic(pattern, host, k, config.budget)
    };
    Ok(match found {
        Some(m) => {
            let report = verify_fat_model(&m, k).expect("searcher builds well-formed models");
            assert!(report.holds, "searcher produced a model failing {:?}", report.first_failure());
            SearchOutcome::Found(m)
        }
        None => SearchOutcome::Inconclusive,
    })
}

/// Cheap arguments for absence.
fn shortcut(pattern: &Graph, host: &Graph, k: usize) -> Option<SearchOutcome> {
    if pattern.vertex_count() > host.vertex_count() {
        return Some(not_found("pattern has more vertices than the host"));
    }
    if pattern.edge_count() > 0 && host.edge_count() == 0 {
        return Some(not_found("host has no edges"));
    }
    if !pattern.is_forest() && host.is_forest() {
        return Some(not_found("pattern has a cycle and the host is a forest"));
    }
    if pattern.vertex_count() >= 2 && pattern.is_connected() {
        let widest = host
            .components()
            .iter()
            .map(|c| host.induced_subgraph(c).expect("component").diameter())
            .max()
            .unwrap_or(0);
        if k > widest {
            return Some(not_found("K exceeds the diameter of every host component"));
        }
    }
    None
}

struct OutOfBudget;

/// Exhaustive search over connected branch sets and simple paths on hosts
/// small enough for bitmasks.
struct Exhaustive<'a> {
    pattern: &'a Graph,
    host: &'a Graph,
    k: usize,
    budget: u64,
    nbr: Vec<u32>,
    dist: Vec<Vec<usize>>,
    subsets: Vec<u32>,
    pattern_edges: Vec<(usize, usize)>,
}

impl<'a> Exhaustive<'a> {
    fn new(pattern: &'a Graph, host: &'a Graph, k: usize, budget: u64) -> Self {
        let n = host.vertex_count();
        let nbr: Vec<u32> = (0..n)
            .map(|i| host.neighbors_of(i).iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect();
        let dist: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                host.bfs_from_indices(&[i])
                    .into_iter()
                    .map(|d| d.unwrap_or(usize::MAX))
                    .collect()
            })
            .collect();
        let connected = |m: u32| {
            let start = m.trailing_zeros() as usize;
            let mut seen = 1u32 << start;
            loop {
                let mut grow = seen;
                let mut bits = seen;
                while bits != 0 {
                    let x = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    grow |= nbr[x] & m;
                }
                if grow == seen {
                    return seen == m;
                }
                seen = grow;
            }
        };
        let mut subsets: Vec<u32> = (1u32..(1u32 << n)).filter(|&m| connected(m)).collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        Exhaustive {
            pattern,
            host,
            k,
            budget,
            nbr,
            dist,
            subsets,
            pattern_edges: pattern.edge_indices().collect(),
        }
    }

    fn spend(&mut self) -> Result<(), OutOfBudget> {
        if self.budget == 0 {
            return Err(OutOfBudget);
        }
        self.budget -= 1;
        Ok(())
    }

    fn set_dist(&self, a: u32, b: u32) -> usize {
        let mut best = usize::MAX;
        let mut x = a;
        while x != 0 {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            let mut y = b;
            while y != 0 {
                let j = y.trailing_zeros() as usize;
                y &= y - 1;
                best = best.min(self.dist[i][j]);
            }
        }
        best
    }

    fn run(mut self) -> Result<Option<FatMinorModel>, OutOfBudget> {
        let mut chosen = Vec::with_capacity(self.pattern.vertex_count());
        self.assign(&mut chosen)
    }

    fn assign(&mut self, chosen: &mut Vec<u32>) -> Result<Option<FatMinorModel>, OutOfBudget> {
        if chosen.len() == self.pattern.vertex_count() {
            return self.route_all(chosen);
        }
        let used = chosen.iter().fold(0u32, |a, &b| a | b);
        for idx in 0..self.subsets.len() {
            let s = self.subsets[idx];
            if s & used != 0 {
                continue;
            }
            self.spend()?;
            if chosen.iter().any(|&b| self.set_dist(s, b) < self.k) {
                continue;
            }
            chosen.push(s);
            let found = self.assign(chosen)?;
            chosen.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Simple paths for pattern edge `(u, v)` meeting the branch sets only
    /// at their ends and staying K away from the other branch sets.
    fn candidate_paths(&mut self, sets: &[u32], u: usize, v: usize) -> Result<Vec<Vec<usize>>, OutOfBudget> {
        let all = sets.iter().fold(0u32, |a, &b| a | b);
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let starts: Vec<usize> = (0..self.host.vertex_count()).filter(|&i| sets[u] >> i & 1 == 1).collect();
        for a in starts {
            stack.push(a);
            self.extend_path(&mut stack, 1u32 << a, all, sets, u, v, &mut out)?;
            stack.pop();
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_path(
        &mut self,
        stack: &mut Vec<usize>,
        mask: u32,
        all: u32,
        sets: &[u32],
        u: usize,
        v: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<(), OutOfBudget> {
        self.spend()?;
        let x = *stack.last().expect("nonempty");
        let mut nb = self.nbr[x] & !mask;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            let bit = 1u32 << y;
            if sets[v] & bit != 0 {
                let full = mask | bit;
                let ok = (0..sets.len())
                    .filter(|&w| w != u && w != v)
                    .all(|w| self.set_dist(full, sets[w]) >= self.k);
                if ok {
                    let mut p = stack.clone();
                    p.push(y);
                    out.push(p);
                }
            } else if all & bit == 0 {
                stack.push(y);
                self.extend_path(stack, mask | bit, all, sets, u, v, out)?;
                stack.pop();
            }
        }
        Ok(())
    }

    fn route_all(&mut self, sets: &[u32]) -> Result<Option<FatMinorModel>, OutOfBudget> {
        let edges = self.pattern_edges.clone();
        let mut candidates = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            let c = self.candidate_paths(sets, u, v)?;
            if c.is_empty() {
                return Ok(None);
            }
            candidates.push(c);
        }
        let mut picked: Vec<usize> = Vec::new();
        if self.pick_paths(&candidates, &mut picked)? {
            let host = self.host;
            let pattern = self.pattern;
            let branch_sets = pattern
                .vertices()
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), mask_set(host, sets[i])))
                .collect();
            let edge_paths = edges
                .iter()
                .zip(&picked)
                .zip(&candidates)
                .map(|((&(u, v), &c), cands)| {
                    let key = edge_key(pattern.vertex(u), pattern.vertex(v));
                    (key, cands[c].iter().map(|&i| host.vertex(i).clone()).collect())
                })
                .collect();
            return Ok(Some(FatMinorModel {
                pattern: pattern.clone(),
                host: host.clone(),
                branch_sets,
                edge_paths,
            }));
        }
        Ok(None)
    }

    fn pick_paths(&mut self, candidates: &[Vec<Vec<usize>>], picked: &mut Vec<usize>) -> Result<bool, OutOfBudget> {
        let e = picked.len();
        if e == candidates.len() {
            return Ok(true);
        }
        let mask = |p: &[usize]| p.iter().fold(0u32, |m, &i| m | (1 << i));
        for c in 0..candidates[e].len() {
            self.spend()?;
            let me = mask(&candidates[e][c]);
            let ok = picked
                .iter()
                .enumerate()
                .all(|(f, &pc)| self.set_dist(me, mask(&candidates[f][pc])) >= self.k);
            if ok {
                picked.push(c);
                if self.pick_paths(candidates, picked)? {
                    return Ok(true);
                }
                picked.pop();
            }
        }
        Ok(false)
    }
}

fn mask_set(host: &Graph, m: u32) -> VertexSet {
    host.set_from_indices((0..host.vertex_count()).filter(|&i| m >> i & 1 == 1))
}

/// Ball-and-route heuristic: branch sets are balls around far-apart
/// centres and paths are shortest routes through the region at distance at
/// least K from everything already placed.
fn heuristic(pattern: &Graph, host: &Graph, k: usize, budget: u64) -> Option<FatMinorModel> {
    let n = host.vertex_count();
    let p = pattern.vertex_count();
    if p == 0 {
        return Some(FatMinorModel {
            pattern: pattern.clone(),
            host: host.clone(),
            branch_sets: BTreeMap::new(),
            edge_paths: BTreeMap::new(),
        });
    }
    let mut attempts = 0u64;
    let radii: Vec<usize> = {
        let mut r: Vec<usize> = vec![k.div_ceil(2), k, k / 2 + 1, 0, 1];
        r.sort_unstable();
        r.dedup();
        r
    };
    let mut seeds: Vec<usize> = vec![0, n / 2, n - 1];
    seeds.extend((1..n).step_by((n / 7).max(1)));
    seeds.sort_unstable();
    seeds.dedup();
    let edges: Vec<(usize, usize)> = pattern.edge_indices().collect();
    let perms = permutations(p);
    for &r in &radii {
        for &seed in &seeds {
            let Some(centres) = spread_centres(host, p, seed, 2 * r + k) else {
                continue;
            };
            for perm in &perms {
                for order in edge_orders(&edges) {
                    attempts += 1;
                    if attempts > budget {
                        return None;
                    }
                    let balls: Vec<Vec<usize>> = perm
                        .iter()
                        .map(|&slot| ball(host, centres[slot], r))
                        .collect();
                    if let Some(m) = route(pattern, host, k, &balls, &order) {
                        if verify_fat_model(&m, k).is_ok_and(|r| r.holds) {
                            return Some(m);
                        }
                    }
                }
            }
        }
    }
    None
}

fn permutations(p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..p).collect();
    // Heap's algorithm.
    let mut c = vec![0usize; p];
    out.push(cur.clone());
    let mut i = 0;
    while i < p {
        if c[i] < i {
            if i % 2 == 0 {
                cur.swap(0, i);
            } else {
                cur.swap(c[i], i);
            }
            out.push(cur.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// The given edge order and its reverse.
fn edge_orders(edges: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let fwd = edges.to_vec();
    let mut rev = fwd.clone();
    rev.reverse();
    if rev == fwd {
        vec![fwd]
    } else {
        vec![fwd, rev]
    }
}

/// Greedy farthest-point centres inside the component of `seed`, pairwise
/// at distance at least `gap`.
fn spread_centres(host: &Graph, p: usize, seed: usize, gap: usize) -> Option<Vec<usize>> {
    let mut centres = vec![seed];
    let mut nearest = host.bfs_from_indices(&[seed]);
    while centres.len() < p {
        let (best, d) = nearest
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (i, d)))
            .max_by_key(|&(i, d)| (d, std::cmp::Reverse(i)))?;
        if d < gap.max(1) {
            return None;
        }
        centres.push(best);
        let fresh = host.bfs_from_indices(&[best]);
        for (a, b) in nearest.iter_mut().zip(fresh) {
            *a = match (*a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
    }
    Some(centres)
}

fn ball(host: &Graph, centre: usize, r: usize) -> Vec<usize> {
    host.bfs_from_indices(&[centre])
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d <= r))
        .map(|(i, _)| i)
        .collect()
}

fn route(
    pattern: &Graph,
    host: &Graph,
    k: usize,
    balls: &[Vec<usize>],
    order: &[(usize, usize)],
) -> Option<FatMinorModel> {
    let n = host.vertex_count();
    let mut owner = vec![usize::MAX; n];
    for (b, members) in balls.iter().enumerate() {
        for &x in members {
            if owner[x] != usize::MAX {
                return None;
            }
            owner[x] = b;
        }
    }
    // Distance from every host vertex to each ball.
    let to_ball: Vec<Vec<Option<usize>>> = balls.iter().map(|b| host.bfs_from_indices(b)).collect();
    let mut near_paths: Vec<Option<usize>> = vec![None; n];
    let mut paths: Vec<((usize, usize), Vec<usize>)> = Vec::new();
    let far = |d: Option<usize>| d.is_none_or(|d| d >= k);
    for &(u, v) in order {
        let clear_of_others = |x: usize| {
            (0..balls.len())
                .filter(|&w| w != u && w != v)
                .all(|w| far(to_ball[w][x]))
                && far(near_paths[x])
        };
        let mut prev = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &a in &balls[u] {
            if clear_of_others(a) {
                seen[a] = true;
                queue.push_back(a);
            }
        }
        let mut end = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &y in host.neighbors_of(x) {
                if seen[y] || !clear_of_others(y) {
                    continue;
                }
                if owner[y] == v {
                    prev[y] = x;
                    end = Some(y);
                    break 'bfs;
                }
                // Interior vertices stay outside every ball; only the start
                // vertex lies in the ball of u.
                if owner[y] != usize::MAX {
                    continue;
                }
                seen[y] = true;
                prev[y] = x;
                queue.push_back(y);
            }
        }
        let end = end?;
        let mut path = vec![end];
        let mut x = end;
        while prev[x] != usize::MAX {
            x = prev[x];
            path.push(x);
        }
        path.reverse();
        let from_path = host.bfs_from_indices(&path);
        for (a, b) in near_paths.iter_mut().zip(from_path) {
            *a = match (*a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
        paths.push(((u, v), path));
    }
    Some(FatMinorModel {
        pattern: pattern.clone(),
        host: host.clone(),
        branch_sets: balls
            .iter()
            .enumerate()
            .map(|(i, b)| (pattern.vertex(i).clone(), host.set_from_indices(b.iter().copied())))
            .collect(),
        edge_paths: paths
            .into_iter()
            .map(|((u, v), p)| {
                (
                    edge_key(pattern.vertex(u), pattern.vertex(v)),
                    p.into_iter().map(|i| host.vertex(i).clone()).collect(),
                )
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeEntry {
    pub verdict: Verdict,
    pub model: Option<FatMinorModel>,
}

/// Verdict per K. A model found at K is reused for every smaller K, and a
/// proof of absence at K carries over to every larger K.
pub fn asymptotic_probe(
    pattern: &Graph,
    host: &Graph,
    ks: &[usize],
    config: &SearchConfig,
) -> Result<BTreeMap<usize, ProbeEntry>, SearchError> {
    let mut sorted: Vec<usize> = ks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: BTreeMap<usize, ProbeEntry> = BTreeMap::new();
    let mut witness: Option<FatMinorModel> = None;
    for &k in sorted.iter().rev() {
        if let Some(m) = &witness {
            if verify_fat_model(m, k).is_ok_and(|r| r.holds) {
                out.insert(k, ProbeEntry { verdict: Verdict::Found, model: Some(m.clone()) });
                continue;
            }
        }
        let entry = match search_fat_minor(pattern, host, k, config)? {
            SearchOutcome::Found(m) => {
                witness = Some(m.clone());
                ProbeEntry { verdict: Verdict::Found, model: Some(m) }
            }
            SearchOutcome::NotFound { .. } => ProbeEntry { verdict: Verdict::NotFound, model: None },
            SearchOutcome::Inconclusive => ProbeEntry { verdict: Verdict::Inconclusive, model: None },
        };
        out.insert(k, entry);
    }
    if let Some(&smallest_absent) = out
        .iter()
        .find(|(_, e)| e.verdict == Verdict::NotFound)
        .map(|(k, _)| k)
    {
        for (_, e) in out.range_mut(smallest_absent..) {
            if e.verdict == Verdict::Inconclusive {
                e.verdict = Verdict::NotFound;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn path(lo: i64, hi: i64) -> Graph {
        Graph::from_edges((lo..hi).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: i64) -> Graph {
        Graph::from_edges((0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn k2() -> Graph {
        Graph::from_edges([("u", "v")]).unwrap()
    }

    fn model(pattern: Graph, host: Graph, b: Vec<(&str, Vec<i64>)>, p: Vec<((&str, &str), Vec<i64>)>) -> FatMinorModel {
        FatMinorModel {
            pattern,
            host,
            branch_sets: b.into_iter().map(|(v, s)| (Vertex::from(v), vset(s))).collect(),
            edge_paths: p
                .into_iter()
                .map(|((a, b), q)| (edge_key(&a.into(), &b.into()), q.into_iter().map(Vertex::from).collect()))
                .collect(),
        }
    }

    #[test]
    fn k2_in_long_path() {
        let m = model(k2(), path(1, 10), vec![("u", vec![1]), ("v", vec![10])], vec![(("u", "v"), (1..=10).collect())]);
        assert!(verify_fat_model(&m, 3).unwrap().holds);
        assert!(verify_fat_model(&m, 0).unwrap().holds);
    }

    #[test]
    fn shared_endpoint_breaks_condition_four() {
        let p3 = Graph::from_edges([("u", "v"), ("v", "w")]).unwrap();
        let m = model(
            p3,
            path(1, 10),
            vec![("u", vec![1]), ("v", vec![5]), ("w", vec![10])],
            vec![(("u", "v"), (1..=5).collect()), (("v", "w"), (5..=10).collect())],
        );
        let report = verify_fat_model(&m, 1).unwrap();
        assert!(!report.holds);
        assert!(report.failures.iter().any(|f| f.condition() == 4));
        assert!(verify_fat_model(&m, 0).unwrap().holds);
    }

    #[test]
    fn structural_errors() {
        let m = model(k2(), path(1, 4), vec![("u", vec![1, 3]), ("v", vec![4])], vec![(("u", "v"), vec![3, 4])]);
        assert_eq!(verify_fat_model(&m, 0), Err(ModelError::DisconnectedBranchSet("u".into())));
        let m = model(k2(), path(1, 4), vec![("u", vec![1])], vec![]);
        assert_eq!(verify_fat_model(&m, 0), Err(ModelError::MissingBranchSet("v".into())));
    }

    #[test]
    fn search_examples() {
        let cfg = SearchConfig::default();
        match search_fat_minor(&k2(), &k2(), 1, &cfg).unwrap() {
            SearchOutcome::Found(m) => assert!(verify_fat_model(&m, 1).unwrap().holds),
            other => panic!("{other:?}"),
        }
        let k3 = cycle(3);
        let tree = path(0, 30);
        assert_eq!(search_fat_minor(&k3, &tree, 0, &cfg).unwrap().verdict(), Verdict::NotFound);
        let c4 = cycle(4);
        match search_fat_minor(&c4, &cycle(24), 2, &cfg).unwrap() {
            SearchOutcome::Found(m) => assert!(verify_fat_model(&m, 2).unwrap().holds),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exhaustive_negative_on_small_host() {
        let cfg = SearchConfig::default();
        // C4 has no 2-fat C4 model.
        assert_eq!(search_fat_minor(&cycle(4), &cycle(4), 2, &cfg).unwrap().verdict(), Verdict::NotFound);
        assert_eq!(search_fat_minor(&cycle(4), &cycle(4), 0, &cfg).unwrap().verdict(), Verdict::Found);
    }

    #[test]
    fn probe_is_monotone() {
        let cfg = SearchConfig::default();
        let out = asymptotic_probe(&k2(), &path(1, 100), &[1, 5, 10], &cfg).unwrap();
        assert!(out.values().all(|e| e.verdict == Verdict::Found));
        let out = asymptotic_probe(&cycle(3), &path(1, 100), &[1, 5, 10], &cfg).unwrap();
        assert!(out.values().all(|e| e.verdict == Verdict::NotFound));
    }
}
