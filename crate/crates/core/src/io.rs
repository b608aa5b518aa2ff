//! File formats: whitespace edge lists, JSON records for decompositions,
//! maps, certificates, models and construction bundles, and DOT export.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fatminor::FatMinorModel;
use crate::graph::{Graph, GraphError, Vertex, VertexSet};
use crate::metric::{opt_ratio_string, ratio_string, QiOptions, QiVerdict, Rational, Witness};
use crate::planarize::{
    Bounds, ConstructionOutput, InstanceBundle, Origin, PrunedComponent, TorsoKind,
    VerificationReport,
};
use crate::treedecomp::{TdError, TreeDecomposition};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Td(#[from] TdError),
    #[error("{0}")]
    Invalid(String),
}

/// Parses an edge list: one `u v` edge or one isolated `v` per line, with
/// `#` starting a comment.
pub fn parse_edge_list(text: &str) -> Result<Graph, IoError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [v] => vertices.push(Vertex::name(*v)),
            [u, v] => {
                if u == v {
                    return Err(IoError::Parse {
                        line,
                        message: format!("self-loop at `{u}`"),
                    });
                }
                edges.push((Vertex::name(*u), Vertex::name(*v)));
            }
            _ => {
                return Err(IoError::Parse {
                    line,
                    message: format!("expected one or two vertices, found {}", tokens.len()),
                })
            }
        }
    }
    Ok(Graph::new(vertices, edges)?)
}

/// Serializes isolated vertices first, then edges, all in sorted order.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for (i, v) in g.vertices().iter().enumerate() {
        if g.degree_of(i) == 0 {
            let _ = writeln!(out, "{v}");
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn dot_id(v: &Vertex) -> String {
    let s = v.to_string();
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", dot_id(&Vertex::name(name)));
    for v in g.vertices() {
        let _ = writeln!(out, "  {};", dot_id(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_id(u), dot_id(v));
    }
    out.push_str("}\n");
    out
}

/// Inline graph record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(default)]
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertices().to_vec(),
            edges: g.edges().map(|(u, v)| (u.clone(), v.clone())).collect(),
        }
    }

    pub fn to_graph(&self) -> Result<Graph, IoError> {
        Ok(Graph::new(self.vertices.iter().cloned(), self.edges.iter().cloned())?)
    }
}

/// `{"parts": {node: [vertices]}, "edges": [[node, node]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TdJson {
    pub parts: BTreeMap<Vertex, Vec<Vertex>>,
    #[serde(default)]
    pub edges: Vec<(Vertex, Vertex)>,
}

impl TdJson {
    pub fn from_td(td: &TreeDecomposition) -> Self {
        TdJson {
            parts: td
                .parts()
                .iter()
                .map(|(t, p)| (t.clone(), p.iter().cloned().collect()))
                .collect(),
            edges: td.tree_edges(),
        }
    }

    pub fn to_td(&self) -> Result<TreeDecomposition, IoError> {
        Ok(TreeDecomposition::from_parts(
            self.edges.clone(),
            self.parts.iter().map(|(t, p)| (t.clone(), p.clone())),
        )?)
    }
}

pub fn parse_td(text: &str) -> Result<TreeDecomposition, IoError> {
    serde_json::from_str::<TdJson>(text)?.to_td()
}

pub fn write_td(td: &TreeDecomposition) -> String {
    serde_json::to_string_pretty(&TdJson::from_td(td)).expect("serializable")
}

/// A vertex map `{"u": "phi(u)"}`.
pub fn parse_map(text: &str) -> Result<BTreeMap<Vertex, Vertex>, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_map(map: &BTreeMap<Vertex, Vertex>) -> String {
    serde_json::to_string_pretty(map).expect("serializable")
}

/// Result of checking one map against one pair of constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    #[serde(with = "ratio_string")]
    pub gamma: Rational,
    #[serde(with = "ratio_string")]
    pub c: Rational,
    pub valid: bool,
    #[serde(with = "opt_ratio_string")]
    pub required_c: Option<Rational>,
    pub worst_witness: Option<Witness>,
    pub options: QiOptions,
}

impl CertificateRecord {
    pub fn new(gamma: Rational, c: Rational, verdict: &QiVerdict, options: QiOptions) -> Self {
        CertificateRecord {
            gamma,
            c,
            valid: verdict.valid,
            required_c: verdict.required_c,
            worst_witness: verdict.witness.clone(),
            options,
        }
    }
}

/// Model record with edge paths keyed `"u-v"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelJson {
    pub branch_sets: BTreeMap<Vertex, Vec<Vertex>>,
    pub edge_paths: BTreeMap<String, Vec<Vertex>>,
}

impl ModelJson {
    pub fn from_model(m: &FatMinorModel) -> Self {
        ModelJson {
            branch_sets: m
                .branch_sets
                .iter()
                .map(|(v, s)| (v.clone(), s.iter().cloned().collect()))
                .collect(),
            edge_paths: m
                .edge_paths
                .iter()
                .map(|((u, v), p)| (format!("{u}-{v}"), p.clone()))
                .collect(),
        }
    }

    /// Splits each `"u-v"` key at the first dash that leaves two pattern
    /// vertices, so names that contain dashes still resolve.
    pub fn to_model(&self, pattern: &Graph, host: &Graph) -> Result<FatMinorModel, IoError> {
        let mut edge_paths = BTreeMap::new();
        for (key, path) in &self.edge_paths {
            let split = key.match_indices('-').find_map(|(i, _)| {
                let (u, v) = (Vertex::name(&key[..i]), Vertex::name(&key[i + 1..]));
                (pattern.contains(&u) && pattern.contains(&v)).then_some((u, v))
            });
            let (u, v) = split.ok_or_else(|| {
                IoError::Invalid(format!("edge key `{key}` does not name two pattern vertices"))
            })?;
            let key = if u <= v { (u, v) } else { (v, u) };
            edge_paths.insert(key, path.clone());
        }
        Ok(FatMinorModel {
            pattern: pattern.clone(),
            host: host.clone(),
            branch_sets: self
                .branch_sets
                .iter()
                .map(|(v, s)| (v.clone(), s.iter().cloned().collect()))
                .collect(),
            edge_paths,
        })
    }
}

/// Host reference: an edge-list path or an inline graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GraphRef {
    File(String),
    Inline(GraphJson),
}

/// Markers as one list, or as lists per tree node which are merged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MarkersJson {
    List(Vec<Vertex>),
    PerPart(BTreeMap<Vertex, Vec<Vertex>>),
}

impl MarkersJson {
    pub fn to_set(&self) -> VertexSet {
        match self {
            MarkersJson::List(l) => l.iter().cloned().collect(),
            MarkersJson::PerPart(m) => m.values().flatten().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleJson {
    pub graph: GraphRef,
    pub td: TdJson,
    pub k: usize,
    #[serde(default)]
    pub classification: BTreeMap<Vertex, TorsoKind>,
    #[serde(default)]
    pub markers: Option<MarkersJson>,
    #[serde(default)]
    pub sub_decompositions: BTreeMap<Vertex, TdJson>,
}

impl BundleJson {
    pub fn from_bundle(b: &InstanceBundle) -> Self {
        BundleJson {
            graph: GraphRef::Inline(GraphJson::from_graph(&b.host)),
            td: TdJson::from_td(&b.td),
            k: b.k,
            classification: b.classification.clone(),
            markers: b
                .infinite_markers
                .as_ref()
                .map(|m| MarkersJson::List(m.iter().cloned().collect())),
            sub_decompositions: b
                .sub_decompositions
                .iter()
                .map(|(t, d)| (t.clone(), TdJson::from_td(d)))
                .collect(),
        }
    }

    /// Resolves the host with `load` when it is given as a path.
    pub fn to_bundle(
        &self,
        load: impl Fn(&str) -> Result<Graph, IoError>,
    ) -> Result<InstanceBundle, IoError> {
        let host = match &self.graph {
            GraphRef::File(path) => load(path)?,
            GraphRef::Inline(g) => g.to_graph()?,
        };
        let mut sub = BTreeMap::new();
        for (t, d) in &self.sub_decompositions {
            sub.insert(t.clone(), d.to_td()?);
        }
        Ok(InstanceBundle {
            host,
            td: self.td.to_td()?,
            k: self.k,
            classification: self.classification.clone(),
            infinite_markers: self.markers.as_ref().map(MarkersJson::to_set),
            sub_decompositions: sub,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputJson {
    pub h: GraphJson,
    pub phi: BTreeMap<Vertex, Vertex>,
    pub bounds: Bounds,
    pub provenance: BTreeMap<Vertex, Origin>,
    pub classification: BTreeMap<Vertex, TorsoKind>,
    pub pruned: Vec<PrunedComponent>,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationReport>,
}

impl OutputJson {
    pub fn new(out: &ConstructionOutput, verification: Option<VerificationReport>) -> Self {
        OutputJson {
            h: GraphJson::from_graph(&out.h),
            phi: out.phi.clone(),
            bounds: out.bounds,
            provenance: out.provenance.clone(),
            classification: out.classification.clone(),
            pruned: out.pruned.clone(),
            warnings: out.warnings.clone(),
            verification,
        }
    }

    pub fn to_output(&self) -> Result<ConstructionOutput, IoError> {
        Ok(ConstructionOutput {
            h: self.h.to_graph()?,
            phi: self.phi.clone(),
            bounds: self.bounds,
            provenance: self.provenance.clone(),
            classification: self.classification.clone(),
            pruned: self.pruned.clone(),
            warnings: self.warnings.clone(),
        })
    }
}

/// Vertex sets as sorted JSON arrays.
pub fn sets_to_json(sets: &[VertexSet]) -> serde_json::Value {
    let lists: Vec<Vec<&Vertex>> = sets.iter().map(|s| s.iter().collect()).collect();
    serde_json::to_value(lists).expect("serializable")
}

/// Parses a JSON array of vertices into a set.
pub fn parse_vertex_set(text: &str) -> Result<VertexSet, IoError> {
    Ok(serde_json::from_str::<BTreeSet<Vertex>>(text)?)
}
