//! Named graph families, including balls in Cayley graphs of three groups
//! with computable normal forms.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

/// Seed used when neither a flag nor `COARSE_GRAPH_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_251_014;

/// `COARSE_GRAPH_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn default_seed() -> u64 {
    std::env::var("COARSE_GRAPH_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CayleyPreset {
    /// Free group on `a`, `b`; the ball is a ball in the 4-regular tree.
    FreeGroupRank2,
    /// `Z^2` with the standard generators.
    IntegerLatticeZ2,
    /// `Z/2 * Z/3` generated by the involution `s` and the order-3 `t`.
    FreeProductZ2Z3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Path { n: usize },
    Cycle { n: usize },
    Grid { rows: usize, cols: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Tree { n: usize, seed: u64 },
    CayleyBall { preset: CayleyPreset, radius: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("{family} needs {what}")]
    BadParameter { family: &'static str, what: &'static str },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub graph: Graph,
    /// For Cayley balls, the sphere of maximal radius.
    pub markers: Option<VertexSet>,
}

fn plain(graph: Graph) -> Generated {
    Generated { graph, markers: None }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Generated, GenError> {
    let bad = |family, what| Err(GenError::BadParameter { family, what });
    Ok(match *spec {
        GeneratorSpec::Path { n: 0 } => return bad("path", "n >= 1"),
        GeneratorSpec::Path { n } => plain(path(n)),
        GeneratorSpec::Cycle { n } if n < 3 => return bad("cycle", "n >= 3"),
        GeneratorSpec::Cycle { n } => plain(cycle(n)),
        GeneratorSpec::Grid { rows, cols } if rows == 0 || cols == 0 => {
            return bad("grid", "rows >= 1 and cols >= 1")
        }
        GeneratorSpec::Grid { rows, cols } => plain(grid(rows, cols)),
        GeneratorSpec::Complete { n: 0 } => return bad("complete", "n >= 1"),
        GeneratorSpec::Complete { n } => plain(complete(n)),
        GeneratorSpec::CompleteBipartite { a, b } if a == 0 || b == 0 => {
            return bad("complete-bipartite", "a >= 1 and b >= 1")
        }
        GeneratorSpec::CompleteBipartite { a, b } => plain(complete_bipartite(a, b)),
        GeneratorSpec::Tree { n: 0, .. } => return bad("tree", "n >= 1"),
        GeneratorSpec::Tree { n, seed } => plain(random_tree(n, seed)),
        GeneratorSpec::CayleyBall { preset, radius } => {
            let (graph, markers) = cayley_ball(preset, radius);
            Generated {
                graph,
                markers: Some(markers),
            }
        }
    })
}

fn ints(edges: Vec<(usize, usize)>, n: usize) -> Graph {
    Graph::new(
        (0..n).map(|i| i as i64),
        edges.into_iter().map(|(a, b)| (a as i64, b as i64)),
    )
    .expect("generated edges have no loops")
}

/// Path on `0..n`.
pub fn path(n: usize) -> Graph {
    ints((1..n).map(|i| (i - 1, i)).collect(), n)
}

/// Cycle on `0..n`.
pub fn cycle(n: usize) -> Graph {
    ints((0..n).map(|i| (i, (i + 1) % n)).collect(), n)
}

/// Grid with vertex `r * cols + c` at row `r`, column `c`.
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
    ints(e, rows * cols)
}

pub fn complete(n: usize) -> Graph {
    ints((0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(), n)
}

/// Sides `0..a` and `a..a + b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    ints((0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))).collect(), a + b)
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ints((1..n).map(|i| (rng.gen_range(0..i), i)).collect(), n)
}

fn free_group_mul(w: &str, g: char) -> String {
    let inverse = |c: char| if c.is_ascii_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() };
    let mut s: Vec<char> = if w == "e" { Vec::new() } else { w.chars().collect() };
    if s.last() == Some(&inverse(g)) {
        s.pop();
    } else {
        s.push(g);
    }
    if s.is_empty() {
        "e".to_string()
    } else {
        s.into_iter().collect()
    }
}

/// Right multiplication in `Z/2 * Z/3` on alternating normal forms over
/// `s`, `t`, `T = t^2`.
fn free_product_mul(w: &str, g: char) -> String {
    let mut s: Vec<char> = if w == "e" { Vec::new() } else { w.chars().collect() };
    match (s.last().copied(), g) {
        (Some('s'), 's') => {
            s.pop();
        }
        (Some('t'), 't') => {
            s.pop();
            s.push('T');
        }
        (Some('T'), 't') | (Some('t'), 'T') => {
            s.pop();
        }
        (Some('T'), 'T') => {
            s.pop();
            s.push('t');
        }
        _ => s.push(g),
    }
    if s.is_empty() {
        "e".to_string()
    } else {
        s.into_iter().collect()
    }
}

/// Breadth-first ball of `radius` around the identity, and its outer sphere.
pub fn cayley_ball(preset: CayleyPreset, radius: usize) -> (Graph, VertexSet) {
    type Step = Box<dyn Fn(&str) -> Vec<String>>;
    let (identity, step): (String, Step) = match preset {
        CayleyPreset::FreeGroupRank2 => (
            "e".into(),
            Box::new(|w| "aAbB".chars().map(|g| free_group_mul(w, g)).collect()),
        ),
        CayleyPreset::IntegerLatticeZ2 => (
            "(0,0)".into(),
            Box::new(|w| {
                let inner = &w[1..w.len() - 1];
                let (x, y) = inner.split_once(',').expect("lattice name");
                let (x, y): (i64, i64) = (x.parse().expect("int"), y.parse().expect("int"));
                [(1, 0), (-1, 0), (0, 1), (0, -1)]
                    .iter()
                    .map(|(dx, dy)| format!("({},{})", x + dx, y + dy))
                    .collect()
            }),
        ),
        CayleyPreset::FreeProductZ2Z3 => (
            "e".into(),
            Box::new(|w| ['s', 't', 'T'].iter().map(|&g| free_product_mul(w, g)).collect()),
        ),
    };
    let mut dist: BTreeMap<String, usize> = BTreeMap::from([(identity.clone(), 0)]);
    let mut queue = VecDeque::from([identity]);
    while let Some(w) = queue.pop_front() {
        let d = dist[&w];
        if d == radius {
            continue;
        }
        for x in step(&w) {
            if !dist.contains_key(&x) {
                dist.insert(x.clone(), d + 1);
                queue.push_back(x);
            }
        }
    }
    let mut edges = Vec::new();
    for w in dist.keys() {
        for x in step(w) {
            if w < &x && dist.contains_key(&x) {
                edges.push((Vertex::name(w.clone()), Vertex::name(x)));
            }
        }
    }
    let vertices: Vec<Vertex> = dist.keys().map(|w| Vertex::name(w.clone())).collect();
    let graph = Graph::new(vertices, edges).expect("Cayley edges have no loops");
    let sphere = dist
        .iter()
        .filter(|(_, &d)| d == radius)
        .map(|(w, _)| Vertex::name(w.clone()))
        .collect();
    (graph, sphere)
}
