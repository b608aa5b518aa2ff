//! Separations `(A, B)`, their order and tightness, and exhaustive
//! enumeration of the tight separations of a given order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::util::Combinations;

/// An ordered pair of vertex sets. Use [`Separation::canonical`] when the
/// pair should be treated as unordered.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Separation {
    #[serde(rename = "A")]
    pub a: VertexSet,
    #[serde(rename = "B")]
    pub b: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("({a:?}, {b:?}) is not a separation of the graph")]
    NotASeparation { a: VertexSet, b: VertexSet },
}

impl Separation {
    pub fn new(a: VertexSet, b: VertexSet) -> Self {
        Separation { a, b }
    }

    pub fn separator(&self) -> VertexSet {
        self.a.intersection(&self.b).cloned().collect()
    }

    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }

    pub fn swapped(&self) -> Separation {
        Separation::new(self.b.clone(), self.a.clone())
    }

    /// Lexicographically smaller side first.
    pub fn canonical(self) -> Separation {
        if self.b < self.a {
            self.swapped()
        } else {
            self
        }
    }

    pub fn map(&self, f: impl Fn(&Vertex) -> Vertex) -> Separation {
        Separation::new(self.a.iter().map(&f).collect(), self.b.iter().map(&f).collect())
    }
}

/// Cover condition plus "no edge between `A \ B` and `B \ A`". Sides naming
/// unknown vertices are not separations.
pub fn is_separation(g: &Graph, s: &Separation) -> bool {
    if s.a.iter().chain(&s.b).any(|v| !g.contains(v)) {
        return false;
    }
    if g.vertices().iter().any(|v| !s.a.contains(v) && !s.b.contains(v)) {
        return false;
    }
    g.edges().all(|(u, v)| {
        (s.a.contains(u) && s.a.contains(v)) || (s.b.contains(u) && s.b.contains(v))
    })
}

pub fn is_tight(g: &Graph, s: &Separation) -> Result<bool, SeparationError> {
    if !is_separation(g, s) {
        return Err(SeparationError::NotASeparation {
            a: s.a.clone(),
            b: s.b.clone(),
        });
    }
    let sep = g.indices_of(&s.separator()).expect("checked above");
    let in_b = g.mask_of(&s.b).expect("checked above");
    let in_a = g.mask_of(&s.a).expect("checked above");
    Ok(has_full_component(g, &in_b, &sep) && has_full_component(g, &in_a, &sep))
}

/// Whether `g - removed` has a component whose neighborhood is exactly `sep`.
/// `removed` must contain `sep`.
fn has_full_component(g: &Graph, removed: &[bool], sep: &[usize]) -> bool {
    g.components_avoiding(removed)
        .iter()
        .any(|c| g.neighborhood_idx(c) == sep)
}

/// Components of `g - sep` (as index lists) together with a flag telling
/// whether each one is attached to the whole of `sep`.
pub(crate) fn components_with_attachment(g: &Graph, sep: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let mut removed = vec![false; g.vertex_count()];
    for &i in sep {
        removed[i] = true;
    }
    g.components_avoiding(&removed)
        .into_iter()
        .map(|c| {
            let full = g.neighborhood_idx(&c) == sep;
            (c, full)
        })
        .collect()
}

/// All tight separations whose separator is exactly `sep` (sorted indices),
/// canonically ordered and deduplicated.
pub fn tight_separations_with_separator(g: &Graph, sep: &[usize]) -> Vec<Separation> {
    let comps = components_with_attachment(g, sep);
    let full_count = comps.iter().filter(|(_, full)| *full).count();
    if full_count < 2 {
        return Vec::new();
    }
    let m = comps.len();
    assert!(m < 64, "too many components to enumerate bipartitions");
    let separator = g.set_from_indices(sep.iter().copied());
    let mut out = Vec::new();
    // Component 0 goes to the first side; this visits each unordered
    // bipartition once.
    for mask in 0u64..(1u64 << (m - 1)) {
        let side = |c: usize| c == 0 || (mask >> (c - 1)) & 1 == 1;
        let full_a = (0..m).any(|c| side(c) && comps[c].1);
        let full_b = (0..m).any(|c| !side(c) && comps[c].1);
        if !(full_a && full_b) {
            continue;
        }
        let mut a = separator.clone();
        let mut b = separator.clone();
        for (c, (members, _)) in comps.iter().enumerate() {
            let target = if side(c) { &mut a } else { &mut b };
            target.extend(members.iter().map(|&i| g.vertex(i).clone()));
        }
        out.push(Separation::new(a, b).canonical());
    }
    out.sort();
    out
}

/// Every tight separation of order exactly `k`, one representative per
/// unordered pair, sorted.
pub fn enumerate_tight(g: &Graph, k: usize) -> Vec<Separation> {
    let candidates: Vec<Vec<usize>> = Combinations::new(g.vertex_count(), k).collect();
    let mut out: Vec<Separation> = candidates
        .par_iter()
        .flat_map_iter(|sep| tight_separations_with_separator(g, sep))
        .collect();
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::vset;

    fn sep<A: Into<Vertex>, B: Into<Vertex>>(a: Vec<A>, b: Vec<B>) -> Separation {
        Separation::new(vset(a), vset(b))
    }

    fn p3() -> Graph {
        Graph::from_edges([("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn separation_predicate() {
        assert!(is_separation(&p3(), &sep(vec!["a", "b"], vec!["b", "c"])));
        let k3 = Graph::from_edges([("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        assert!(!is_separation(&k3, &sep(vec!["a", "b"], vec!["c"])));
        assert!(is_separation(&p3(), &sep(vec!["a", "b", "c"], vec!["b"])));
    }

    #[test]
    fn tightness_examples() {
        assert_eq!(is_tight(&p3(), &sep(vec!["a", "b"], vec!["b", "c"])), Ok(true));
        let c4 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        assert_eq!(
            is_tight(&c4, &sep(vec!["a", "b", "c"], vec!["c", "d", "a"])),
            Ok(true)
        );
        let p4 = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        assert_eq!(
            is_tight(&p4, &sep(vec!["a", "b"], vec!["b", "c", "d"])),
            Ok(true)
        );
        // Separator {b, c}: the only component on the left, {a}, sees b but
        // not c.
        assert_eq!(
            is_tight(&p4, &sep(vec!["a", "b", "c"], vec!["b", "c", "d"])),
            Ok(false)
        );
        assert!(is_tight(&p4, &sep(vec!["a"], vec!["c", "d"])).is_err());
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_tight(&p3(), 1), vec![sep(vec!["a", "b"], vec!["b", "c"])]);
        let k4 = Graph::from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(enumerate_tight(&k4, 1).is_empty());
        let c5 = Graph::from_edges((0..5i64).map(|i| (i, (i + 1) % 5))).unwrap();
        let found = enumerate_tight(&c5, 2);
        assert_eq!(found.len(), 5);
        assert!(found.iter().all(|s| is_tight(&c5, s) == Ok(true)));
    }

    #[test]
    fn order_zero_on_disconnected_graphs() {
        let g = Graph::from_edges([(0, 1), (2, 3)]).unwrap();
        assert_eq!(enumerate_tight(&g, 0), vec![sep(vec![0, 1], vec![2, 3])]);
        assert!(enumerate_tight(&p3(), 0).is_empty());
    }

    #[test]
    fn tightness_is_symmetric() {
        let c5 = Graph::from_edges((0..5i64).map(|i| (i, (i + 1) % 5))).unwrap();
        for s in enumerate_tight(&c5, 2) {
            assert_eq!(is_tight(&c5, &s.swapped()), Ok(true));
        }
    }
}
