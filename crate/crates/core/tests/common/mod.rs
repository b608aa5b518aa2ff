//! Independent oracles and seeded instance builders shared by the
//! integration tests. Nothing here calls the algorithms under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use coarse_graph::generators::{cayley_ball, CayleyPreset};
use coarse_graph::planarize::InstanceBundle;
use coarse_graph::{Graph, Separation, TreeDecomposition, Vertex, VertexSet};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = Ratio<i64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn edges_to_graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(
        (0..n).map(|i| i as i64),
        edges.iter().map(|&(a, b)| (a as i64, b as i64)),
    )
    .unwrap()
}

/// G(n, p) on `0..n`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                e.push((i, j));
            }
        }
    }
    edges_to_graph(n, &e)
}

/// Random recursive tree plus independent extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> Graph {
    let mut e = BTreeSet::new();
    for i in 1..n {
        e.insert((rng.gen_range(0..i), i));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(extra) {
                e.insert((i, j));
            }
        }
    }
    edges_to_graph(n, &e.into_iter().collect::<Vec<_>>())
}

pub fn complete(n: usize) -> Graph {
    let e: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    edges_to_graph(n, &e)
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let e: Vec<(usize, usize)> = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect();
    edges_to_graph(a + b, &e)
}

pub fn cycle(n: usize) -> Graph {
    let e: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges_to_graph(n, &e)
}

pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut e = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                e.push((v, v + 1));
            }
            if r + 1 < rows {
                e.push((v, v + cols));
            }
        }
    }
    edges_to_graph(rows * cols, &e)
}

pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    edges_to_graph(10, &e)
}

/// Prism over an `n`-cycle.
pub fn prism(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        e.push((i, (i + 1) % n));
        e.push((n + i, n + (i + 1) % n));
        e.push((i, n + i));
    }
    edges_to_graph(2 * n, &e)
}

/// Adjacency lists rebuilt from the public edge iterator.
pub struct Adj {
    pub names: Vec<Vertex>,
    pub index: BTreeMap<Vertex, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl Adj {
    pub fn new(g: &Graph) -> Self {
        let names: Vec<Vertex> = g.vertices().to_vec();
        let index: BTreeMap<Vertex, usize> =
            names.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); names.len()];
        for (a, b) in g.edges() {
            adj[index[a]].push(index[b]);
            adj[index[b]].push(index[a]);
        }
        Adj { names, index, adj }
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut d = vec![None; self.n()];
        d[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &y in &self.adj[x] {
                if d[y].is_none() {
                    d[y] = Some(d[x].unwrap() + 1);
                    q.push_back(y);
                }
            }
        }
        d
    }

    pub fn all_pairs(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n()).map(|s| self.bfs(s)).collect()
    }

    /// Components of the graph with `removed` deleted.
    pub fn components_without(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let mut seen = removed.to_vec();
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                i += 1;
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }
}

fn disjoint_paths(adj: &Adj, pairs: &[(usize, usize)], branch: &[bool], used: &mut [bool]) -> bool {
    let Some(&(a, b)) = pairs.first() else {
        return true;
    };
    fn walk(
        adj: &Adj,
        cur: usize,
        b: usize,
        pairs: &[(usize, usize)],
        branch: &[bool],
        used: &mut [bool],
    ) -> bool {
        for &y in &adj.adj[cur] {
            if y == b {
                if disjoint_paths(adj, &pairs[1..], branch, used) {
                    return true;
                }
            } else if !branch[y] && !used[y] {
                used[y] = true;
                let ok = walk(adj, y, b, pairs, branch, used);
                used[y] = false;
                if ok {
                    return true;
                }
            }
        }
        false
    }
    walk(adj, a, b, pairs, branch, used)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Whether `g` contains a subdivision of K5 or K3,3, by trying every set of
/// branch vertices and searching for internally disjoint paths.
pub fn has_kuratowski_subdivision(g: &Graph) -> bool {
    let adj = Adj::new(g);
    let n = adj.n();
    let deg: Vec<usize> = adj.adj.iter().map(Vec::len).collect();
    for b in subsets(n, 5) {
        if b.iter().any(|&v| deg[v] < 4) {
            continue;
        }
        let mut branch = vec![false; n];
        for &v in &b {
            branch[v] = true;
        }
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).map(|(i, j)| (b[i], b[j])).collect();
        if disjoint_paths(&adj, &pairs, &branch, &mut vec![false; n]) {
            return true;
        }
    }
    for b in subsets(n, 6) {
        if b.iter().any(|&v| deg[v] < 3) {
            continue;
        }
        let mut branch = vec![false; n];
        for &v in &b {
            branch[v] = true;
        }
        for rest in subsets(5, 2) {
            let left: Vec<usize> = std::iter::once(b[0]).chain(rest.iter().map(|&i| b[i + 1])).collect();
            let right: Vec<usize> = b.iter().copied().filter(|v| !left.contains(v)).collect();
            let pairs: Vec<(usize, usize)> =
                left.iter().flat_map(|&x| right.iter().map(move |&y| (x, y))).collect();
            if disjoint_paths(&adj, &pairs, &branch, &mut vec![false; n]) {
                return true;
            }
        }
    }
    false
}

/// Tight separations of order `k` by labelling every vertex A-only,
/// B-only or both.
pub fn brute_tight_separations(g: &Graph, k: usize) -> BTreeSet<Separation> {
    let adj = Adj::new(g);
    let n = adj.n();
    let mut out = BTreeSet::new();
    let total = 3usize.pow(n as u32);
    let mut label = vec![0u8; n];
    for code in 0..total {
        let mut c = code;
        for l in label.iter_mut() {
            *l = (c % 3) as u8;
            c /= 3;
        }
        if label.iter().filter(|&&l| l == 2).count() != k {
            continue;
        }
        let crossing = adj
            .adj
            .iter()
            .enumerate()
            .any(|(x, ys)| ys.iter().any(|&y| label[x] + label[y] == 1));
        if crossing {
            continue;
        }
        let removed: Vec<bool> = label.iter().map(|&l| l == 2).collect();
        let sep: BTreeSet<usize> = (0..n).filter(|&i| removed[i]).collect();
        let mut full = [false; 2];
        for comp in adj.components_without(&removed) {
            let nb: BTreeSet<usize> = comp
                .iter()
                .flat_map(|&x| adj.adj[x].iter().copied())
                .filter(|y| removed[*y])
                .collect();
            if nb == sep {
                full[label[comp[0]] as usize] = true;
            }
        }
        if full[0] && full[1] {
            let a: VertexSet = (0..n).filter(|&i| label[i] != 1).map(|i| adj.names[i].clone()).collect();
            let b: VertexSet = (0..n).filter(|&i| label[i] != 0).map(|i| adj.names[i].clone()).collect();
            out.insert(Separation::new(a, b).canonical());
        }
    }
    out
}

/// Treewidth as the best elimination order, by branch and bound.
pub fn brute_treewidth(g: &Graph) -> usize {
    let adj = Adj::new(g);
    let n = adj.n();
    if n == 0 {
        return 0;
    }
    let sets: Vec<BTreeSet<usize>> = adj.adj.iter().map(|l| l.iter().copied().collect()).collect();
    fn go(sets: &[BTreeSet<usize>], alive: &mut Vec<bool>, width: usize, best: &mut usize) {
        if width >= *best {
            return;
        }
        let left: Vec<usize> = (0..sets.len()).filter(|&i| alive[i]).collect();
        if left.is_empty() {
            *best = width;
            return;
        }
        for &v in &left {
            let nb: Vec<usize> = sets[v].iter().copied().filter(|&u| alive[u]).collect();
            let mut next = sets.to_vec();
            for &a in &nb {
                for &b in &nb {
                    if a != b {
                        next[a].insert(b);
                    }
                }
            }
            alive[v] = false;
            go(&next, alive, width.max(nb.len()), best);
            alive[v] = true;
        }
    }
    let mut best = n - 1;
    go(&sets, &mut vec![true; n], 0, &mut best);
    best
}

/// Whether a K-fat model of `pattern` exists in a tiny `host`, straight
/// from the four conditions.
pub fn brute_fat_minor(pattern: &Graph, host: &Graph, k: usize) -> bool {
    let p = Adj::new(pattern);
    let h = Adj::new(host);
    let (pn, n) = (p.n(), h.n());
    let pe: Vec<(usize, usize)> = pattern.edges().map(|(a, b)| (p.index[a], p.index[b])).collect();
    let dist = h.all_pairs();
    let dist = &dist;
    let set_dist = |x: &[usize], y: &[usize]| -> Option<usize> {
        x.iter().flat_map(|&a| y.iter().filter_map(move |&b| dist[a][b])).min()
    };
    let far = |d: Option<usize>| d.is_none_or(|d| d >= k);
    let total = (pn + 1).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut owner = vec![usize::MAX; n];
        for o in owner.iter_mut() {
            let x = c % (pn + 1);
            c /= pn + 1;
            if x > 0 {
                *o = x - 1;
            }
        }
        let sets: Vec<Vec<usize>> = (0..pn).map(|i| (0..n).filter(|&v| owner[v] == i).collect()).collect();
        if sets.iter().any(Vec::is_empty) {
            continue;
        }
        let connected = sets.iter().all(|s| {
            let mut seen = vec![s[0]];
            let mut i = 0;
            while i < seen.len() {
                let x = seen[i];
                i += 1;
                for &y in &h.adj[x] {
                    if s.contains(&y) && !seen.contains(&y) {
                        seen.push(y);
                    }
                }
            }
            seen.len() == s.len()
        });
        if !connected {
            continue;
        }
        if (0..pn).any(|i| (i + 1..pn).any(|j| !far(set_dist(&sets[i], &sets[j])))) {
            continue;
        }
        // Candidate paths per pattern edge.
        let mut options: Vec<Vec<Vec<usize>>> = Vec::new();
        for &(a, b) in &pe {
            let mut found = Vec::new();
            for &start in &sets[a] {
                let mut stack = vec![vec![start]];
                while let Some(path) = stack.pop() {
                    let last = *path.last().unwrap();
                    for &y in &h.adj[last] {
                        if path.contains(&y) {
                            continue;
                        }
                        if owner[y] == b {
                            let mut done = path.clone();
                            done.push(y);
                            let ok = (0..pn)
                                .filter(|&w| w != a && w != b)
                                .all(|w| far(set_dist(&done, &sets[w])));
                            if ok {
                                found.push(done);
                            }
                        } else if owner[y] == usize::MAX {
                            let mut next = path.clone();
                            next.push(y);
                            stack.push(next);
                        }
                    }
                }
            }
            options.push(found);
        }
        fn choose(
            options: &[Vec<Vec<usize>>],
            chosen: &mut Vec<Vec<usize>>,
            ok: &dyn Fn(&[usize], &[usize]) -> bool,
        ) -> bool {
            let i = chosen.len();
            if i == options.len() {
                return true;
            }
            for cand in &options[i] {
                if chosen.iter().all(|c| ok(c, cand)) {
                    chosen.push(cand.clone());
                    if choose(options, chosen, ok) {
                        return true;
                    }
                    chosen.pop();
                }
            }
            false
        }
        let ok = |x: &[usize], y: &[usize]| far(set_dist(x, y));
        if choose(&options, &mut Vec::new(), &ok) {
            return true;
        }
    }
    false
}

/// Tightest additive constant for `phi` at `gamma`, from independent BFS;
/// `None` when the graphs or the map leave infinite distances.
pub fn oracle_tightest_c(g: &Graph, h: &Graph, phi: &BTreeMap<Vertex, Vertex>, gamma: Q) -> Option<Q> {
    let ga = Adj::new(g);
    let ha = Adj::new(h);
    let dg = ga.all_pairs();
    let dh = ha.all_pairs();
    let img: Vec<usize> = ga.names.iter().map(|v| ha.index[&phi[v]]).collect();
    let mut c = Q::from_integer(0);
    for u in 0..ga.n() {
        for v in u + 1..ga.n() {
            let a = Q::from_integer(dg[u][v]? as i64);
            let b = Q::from_integer(dh[img[u]][img[v]]? as i64);
            c = c.max(a / gamma - b).max(b - gamma * a);
        }
    }
    for d in (0..ha.n()).map(|y| img.iter().filter_map(|&x| dh[x][y]).min()) {
        c = c.max(Q::from_integer(d? as i64));
    }
    Some(c)
}

/// One seeded construction instance.
pub struct CorpusEntry {
    pub name: String,
    pub bundle: InstanceBundle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BlockKind {
    Finite,
    Cycle,
    Tree,
    Grid,
}

struct Block {
    graph: Graph,
    /// Outer-face order used to pick adhesion windows.
    boundary: Vec<usize>,
    /// Positions on the boundary already inside a size-3 window.
    taken: Vec<bool>,
    kind: BlockKind,
}

impl Block {
    fn make(kind: BlockKind, rng: &mut ChaCha8Rng) -> Block {
        let (graph, boundary) = match kind {
            BlockKind::Finite => {
                let n = rng.gen_range(3..=7);
                let g = random_connected(rng, n, 0.5);
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(rng);
                (g, order)
            }
            BlockKind::Cycle => {
                let n = rng.gen_range(9..=14);
                (cycle(n), (0..n).collect())
            }
            BlockKind::Tree => {
                let n = rng.gen_range(9..=14);
                let g = random_connected(rng, n, 0.0);
                // A rooted path gives consecutive adjacent windows.
                let adj = Adj::new(&g);
                let d = adj.bfs(0);
                let far = (0..n).max_by_key(|&v| (d[v], v)).unwrap();
                let mut path = vec![far];
                let mut cur = far;
                while d[cur] != Some(0) {
                    cur = *adj.adj[cur].iter().find(|&&y| d[y] == d[cur].map(|x| x - 1)).unwrap();
                    path.push(cur);
                }
                (g, path)
            }
            BlockKind::Grid => {
                let rows = rng.gen_range(3..=4);
                let cols = rng.gen_range(3..=5);
                let mut per = Vec::new();
                per.extend(0..cols);
                per.extend((1..rows).map(|r| r * cols + cols - 1));
                per.extend((0..cols - 1).rev().map(|c| (rows - 1) * cols + c));
                per.extend((1..rows - 1).rev().map(|r| r * cols));
                (grid(rows, cols), per)
            }
        };
        let taken = vec![false; boundary.len()];
        Block {
            graph,
            boundary,
            taken,
            kind,
        }
    }

    /// A window of `size` consecutive boundary vertices; size-3 windows are
    /// kept pairwise disjoint so the torso stays planar.
    fn window(&mut self, size: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
        let len = self.boundary.len();
        if size > len {
            return None;
        }
        let cyclic = matches!(self.kind, BlockKind::Cycle | BlockKind::Grid);
        let starts: Vec<usize> = if cyclic {
            (0..len).collect()
        } else {
            (0..=len - size).collect()
        };
        let mut free: Vec<usize> = starts
            .into_iter()
            .filter(|&s| size < 3 || (0..size).all(|i| !self.taken[(s + i) % len]))
            .collect();
        if self.kind == BlockKind::Finite {
            free.retain(|&s| s + size <= len);
        }
        let &start = free.choose(rng)?;
        if size == 3 {
            for i in 0..size {
                self.taken[(start + i) % len] = true;
            }
        }
        Some((0..size).map(|i| self.boundary[(start + i) % len]).collect())
    }
}

/// Random blocks glued along a random tree over windows of size 1 to 3.
pub fn random_bundle(seed: u64) -> CorpusEntry {
    let mut rng = rng(seed);
    let nodes = rng.gen_range(2..=6);
    let kinds = [BlockKind::Finite, BlockKind::Cycle, BlockKind::Tree, BlockKind::Grid];
    let mut blocks: Vec<Block> = (0..nodes).map(|_| Block::make(*kinds.choose(&mut rng).unwrap(), &mut rng)).collect();
    let mut global: Vec<Vec<i64>> = Vec::new();
    let mut next_id = 0i64;
    let mut tree_edges = Vec::new();
    for i in 0..nodes {
        let n = blocks[i].graph.vertex_count();
        let mut ids = vec![-1i64; n];
        if i > 0 {
            let parent = rng.gen_range(0..i);
            let mut size = rng.gen_range(1..=3);
            loop {
                let (lo, hi) = blocks.split_at_mut(i);
                let (a, b) = (&mut lo[parent], &mut hi[0]);
                if let (Some(wp), Some(wc)) = (a.window(size, &mut rng), b.window(size, &mut rng)) {
                    for (x, y) in wp.iter().zip(&wc) {
                        ids[*y] = global[parent][*x];
                    }
                    break;
                }
                size -= 1;
                assert!(size > 0, "size-1 windows always exist");
            }
            tree_edges.push((parent as i64, i as i64));
        }
        for id in ids.iter_mut() {
            if *id < 0 {
                *id = next_id;
                next_id += 1;
            }
        }
        global.push(ids);
    }
    let mut edges = Vec::new();
    let mut parts = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        let adj = Adj::new(&b.graph);
        for (x, ys) in adj.adj.iter().enumerate() {
            for &y in ys {
                if x < y {
                    edges.push((global[i][x], global[i][y]));
                }
            }
        }
        parts.push((i as i64, global[i].clone()));
    }
    let host = Graph::from_edges(edges).unwrap();
    let td = TreeDecomposition::from_parts(tree_edges, parts).unwrap();
    let kinds: Vec<String> = blocks.iter().map(|b| format!("{:?}", b.kind).to_lowercase()).collect();
    CorpusEntry {
        name: format!("glued/{seed}[{}]", kinds.join(",")),
        bundle: InstanceBundle::new(host, td, 2),
    }
}

/// Ball with one part and the outer sphere as markers.
pub fn cayley_single(preset: CayleyPreset, radius: usize) -> CorpusEntry {
    let (g, sphere) = cayley_ball(preset, radius);
    let td = TreeDecomposition::single(0, g.vertex_set());
    CorpusEntry {
        name: format!("cayley/{preset:?}/r{radius}/single"),
        bundle: InstanceBundle::new(g, td, 2).with_markers(sphere),
    }
}

/// Decomposition of a graph whose blocks are edges and triangles: one part
/// per block, joined through cut vertices.
pub fn block_decomposition(g: &Graph) -> TreeDecomposition {
    let adj = Adj::new(g);
    let mut blocks: Vec<BTreeSet<usize>> = Vec::new();
    let mut in_triangle = BTreeSet::new();
    for x in 0..adj.n() {
        for &y in &adj.adj[x] {
            for &z in &adj.adj[y] {
                if x < y && y < z && adj.adj[x].contains(&z) {
                    blocks.push([x, y, z].into());
                    in_triangle.extend([(x, y), (y, z), (x, z)]);
                }
            }
        }
    }
    for x in 0..adj.n() {
        for &y in &adj.adj[x] {
            if x < y && !in_triangle.contains(&(x, y)) {
                blocks.push([x, y].into());
            }
        }
    }
    // Block-cut tree: blocks sharing a cut vertex are chained through a BFS
    // spanning tree of the block graph.
    let mut tree_edges = Vec::new();
    let mut seen = vec![false; blocks.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(b) = queue.pop_front() {
        for c in 0..blocks.len() {
            if !seen[c] && !blocks[b].is_disjoint(&blocks[c]) {
                seen[c] = true;
                tree_edges.push((b as i64, c as i64));
                queue.push_back(c);
            }
        }
    }
    let parts: Vec<(i64, Vec<Vertex>)> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (i as i64, b.iter().map(|&x| adj.names[x].clone()).collect()))
        .collect();
    TreeDecomposition::from_parts(tree_edges, parts).unwrap()
}

pub fn cayley_blocks(preset: CayleyPreset, radius: usize) -> CorpusEntry {
    let (g, sphere) = cayley_ball(preset, radius);
    let td = block_decomposition(&g);
    CorpusEntry {
        name: format!("cayley/{preset:?}/r{radius}/blocks"),
        bundle: InstanceBundle::new(g, td, 2).with_markers(sphere),
    }
}

/// Lattice ball glued to a K4 over a boundary triple.
pub fn lattice_with_k4(radius: usize) -> CorpusEntry {
    let (g, sphere) = cayley_ball(CayleyPreset::IntegerLatticeZ2, radius);
    let r = radius as i64;
    let s: Vec<Vertex> = [(r, 0), (r - 1, 0), (r - 1, 1)]
        .iter()
        .map(|(x, y)| Vertex::name(format!("({x},{y})")))
        .collect();
    let z = Vertex::name("z");
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
    for (i, a) in s.iter().enumerate() {
        edges.push((a.clone(), z.clone()));
        for b in &s[i + 1..] {
            if !g.has_edge(a, b) {
                edges.push((a.clone(), b.clone()));
            }
        }
    }
    let host = Graph::from_edges(edges).unwrap();
    let mut k4 = s.clone();
    k4.push(z);
    let td = TreeDecomposition::from_parts(
        vec![("ball", "k4")],
        [("ball", g.vertices().to_vec()), ("k4", k4)],
    )
    .unwrap();
    CorpusEntry {
        name: format!("cayley/lattice+k4/r{radius}"),
        bundle: InstanceBundle::new(host, td, 2).with_markers(sphere),
    }
}

/// The seeded acceptance corpus: glued random bundles and Cayley balls.
pub fn corpus(seed: u64, glued: usize) -> Vec<CorpusEntry> {
    let mut out: Vec<CorpusEntry> = (0..glued as u64).map(|i| random_bundle(seed.wrapping_add(i))).collect();
    for r in 2..=4 {
        out.push(cayley_single(CayleyPreset::IntegerLatticeZ2, r));
    }
    for r in 2..=3 {
        out.push(cayley_single(CayleyPreset::FreeGroupRank2, r));
        out.push(cayley_blocks(CayleyPreset::FreeGroupRank2, r));
    }
    for r in 3..=6 {
        out.push(cayley_single(CayleyPreset::FreeProductZ2Z3, r));
        out.push(cayley_blocks(CayleyPreset::FreeProductZ2Z3, r));
    }
    for r in 2..=3 {
        out.push(lattice_with_k4(r));
    }
    out
}

pub fn two_k4() -> InstanceBundle {
    let mut e = Vec::new();
    for part in [[0usize, 1, 2, 3], [1, 2, 3, 4]] {
        for (i, &a) in part.iter().enumerate() {
            for &b in &part[i + 1..] {
                e.push((a, b));
            }
        }
    }
    let host = edges_to_graph(5, &e);
    let td = TreeDecomposition::from_parts(
        vec![("t1", "t2")],
        [("t1", vec![0i64, 1, 2, 3]), ("t2", vec![1, 2, 3, 4])],
    )
    .unwrap();
    InstanceBundle::new(host, td, 3)
}

/// Chain of `m` K4s, consecutive ones sharing a triangle.
pub fn k4_chain(m: usize) -> InstanceBundle {
    let n = m + 3;
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n.min(i + 4) {
            e.push((i, j));
        }
    }
    let host = edges_to_graph(n, &e);
    let td = TreeDecomposition::from_parts(
        (0..m as i64 - 1).map(|i| (i, i + 1)).collect(),
        (0..m as i64).map(|i| (i, (i..i + 4).collect::<Vec<i64>>())),
    )
    .unwrap();
    InstanceBundle::new(host, td, 3)
}

/// Small instances with nontrivial symmetry.
pub fn symmetric_instances() -> Vec<(String, InstanceBundle)> {
    let single = |name: &str, g: Graph, k: usize| {
        let td = TreeDecomposition::single(0, g.vertex_set());
        (name.to_string(), InstanceBundle::new(g, td, k))
    };
    let mut out = vec![
        ("two-k4".to_string(), two_k4()),
        ("k4-chain-3".to_string(), k4_chain(3)),
        single("cycle-10", cycle(10), 2),
        single("cycle-12", cycle(12), 2),
        single("grid-3x3", grid(3, 3), 2),
        single("grid-3x4", grid(3, 4), 2),
        single("prism-5", prism(5), 2),
        single("k4", complete(4), 3),
        single("petersen", petersen(), 9),
    ];
    // Star of three triangles around a shared vertex 0.
    let host = edges_to_graph(7, &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (0, 5), (0, 6), (5, 6)]);
    let td = TreeDecomposition::from_parts(
        vec![("c", "a"), ("c", "b"), ("c", "d")],
        [
            ("c", vec![0i64]),
            ("a", vec![0, 1, 2]),
            ("b", vec![0, 3, 4]),
            ("d", vec![0, 5, 6]),
        ],
    )
    .unwrap();
    out.push(("triangle-star".to_string(), InstanceBundle::new(host, td, 2)));
    out
}
