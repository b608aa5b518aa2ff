//! Quasi-isometry certificates for explicit vertex maps: verification with
//! exact rational constants, tightest constants, and composition.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Distance, Graph, Vertex};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a rational number (expected `p`, `p/q` or a decimal)")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `p/q` or a finite decimal such as `1.25`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| err())?;
        let q: i64 = q.trim().parse().map_err(|_| err())?;
        if q == 0 {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let w: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().map_err(|_| err())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let f: i64 = frac.parse().map_err(|_| err())?;
        let mag = w.abs() * scale + f;
        return Ok(Rational::new(if negative { -mag } else { mag }, scale));
    }
    t.parse::<i64>().map(Rational::from_integer).map_err(|_| err())
}

/// Formats as `p` or `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a [`Rational`] as a `"p/q"` string.
pub mod ratio_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for optional [`Rational`] values; `None` is `null`.
pub mod opt_ratio_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QiError {
    #[error("map sends `{from}` to `{to}`, which is not a target vertex")]
    UnknownImage { from: Vertex, to: Vertex },
    #[error("map has no image for `{0}`")]
    MissingImage(Vertex),
    #[error("map names `{0}`, which is not a source vertex")]
    UnknownSource(Vertex),
    #[error("{0} graph is disconnected; enable per-component verification")]
    Disconnected(&'static str),
    #[error("constants must satisfy gamma >= 1 and c >= 0 (got gamma = {gamma}, c = {c})")]
    InvalidConstants { gamma: Rational, c: Rational },
    #[error("target of the first map is not the source of the second")]
    Mismatch,
    #[error("composition needs two valid certificates")]
    InvalidInput,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiOptions {
    /// Skip source pairs in different components instead of rejecting
    /// disconnected graphs.
    pub per_component: bool,
}

/// The pair or vertex with the largest slack.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `d_G(u, v) / gamma - c > d_H(phi u, phi v)` is the binding side.
    Lower {
        u: Vertex,
        v: Vertex,
        source_distance: Distance,
        target_distance: Distance,
    },
    /// `d_H(phi u, phi v) > gamma d_G(u, v) + c` is the binding side.
    Upper {
        u: Vertex,
        v: Vertex,
        source_distance: Distance,
        target_distance: Distance,
    },
    /// A target vertex far from the image.
    Density { vertex: Vertex, distance: Distance },
}

impl Witness {
    pub fn vertices(&self) -> Vec<Vertex> {
        match self {
            Witness::Lower { u, v, .. } | Witness::Upper { u, v, .. } => vec![u.clone(), v.clone()],
            Witness::Density { vertex, .. } => vec![vertex.clone()],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsometryCertificate {
    pub source: Graph,
    pub target: Graph,
    pub phi: BTreeMap<Vertex, Vertex>,
    pub gamma: Rational,
    pub c: Rational,
    pub valid: bool,
    pub worst_witness: Option<Witness>,
    pub options: QiOptions,
}

impl QuasiIsometryCertificate {
    /// Unverified certificate; run [`qi_verify`] or use [`certify`].
    pub fn new(
        source: Graph,
        target: Graph,
        phi: BTreeMap<Vertex, Vertex>,
        gamma: Rational,
        c: Rational,
    ) -> Self {
        QuasiIsometryCertificate {
            source,
            target,
            phi,
            gamma,
            c,
            valid: false,
            worst_witness: None,
            options: QiOptions::default(),
        }
    }

    pub fn with_options(mut self, options: QiOptions) -> Self {
        self.options = options;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiVerdict {
    pub valid: bool,
    /// Smallest additive constant that works at the certificate's gamma;
    /// `None` when no finite constant does.
    #[serde(with = "opt_ratio_string")]
    pub required_c: Option<Rational>,
    pub witness: Option<Witness>,
}

/// Distance tables for one map.
struct Tables<'a> {
    source: &'a Graph,
    target: &'a Graph,
    /// Source all-pairs distances.
    dg: Vec<Vec<Option<usize>>>,
    /// Target distances from each image (row per source vertex).
    dh: Vec<Vec<Option<usize>>>,
    /// Distance from every target vertex to the image.
    density: Vec<Option<usize>>,
    per_component: bool,
}

fn check_constants(gamma: Rational, c: Rational) -> Result<(), QiError> {
    if gamma < Rational::one() || c < Rational::zero() {
        return Err(QiError::InvalidConstants { gamma, c });
    }
    Ok(())
}

impl<'a> Tables<'a> {
    fn build(
        source: &'a Graph,
        target: &'a Graph,
        phi: &BTreeMap<Vertex, Vertex>,
        options: QiOptions,
    ) -> Result<Self, QiError> {
        if let Some(v) = phi.keys().find(|v| !source.contains(v)) {
            return Err(QiError::UnknownSource(v.clone()));
        }
        let mut image = Vec::with_capacity(source.vertex_count());
        for v in source.vertices() {
            let w = phi.get(v).ok_or_else(|| QiError::MissingImage(v.clone()))?;
            let j = target.index_of(w).ok_or_else(|| QiError::UnknownImage {
                from: v.clone(),
                to: w.clone(),
            })?;
            image.push(j);
        }
        if !options.per_component {
            if !source.is_connected() {
                return Err(QiError::Disconnected("source"));
            }
            if !target.is_connected() {
                return Err(QiError::Disconnected("target"));
            }
        }
        let n = source.vertex_count();
        let dg: Vec<Vec<Option<usize>>> = (0..n)
            .into_par_iter()
            .map(|i| source.bfs_from_indices(&[i]))
            .collect();
        let mut distinct = image.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let rows: BTreeMap<usize, Vec<Option<usize>>> = distinct
            .par_iter()
            .map(|&j| (j, target.bfs_from_indices(&[j])))
            .collect();
        let dh: Vec<Vec<Option<usize>>> = (0..n)
            .map(|i| {
                let row = &rows[&image[i]];
                image.iter().map(|&j| row[j]).collect()
            })
            .collect();
        let density = target.bfs_from_indices(&distinct);
        Ok(Tables {
            source,
            target,
            dg,
            dh,
            density,
            per_component: options.per_component,
        })
    }

    /// Smallest `c` valid at `gamma` and the item attaining it.
    fn required(&self, gamma: Rational) -> (Option<Rational>, Option<Witness>) {
        let (p, q) = (*gamma.numer(), *gamma.denom());
        let n = self.source.vertex_count();
        let src = |i: usize| self.source.vertex(i).clone();
        // Lower slack (q dG - p dH) / p and upper slack (q dH - p dG) / q.
        let mut best: Option<(Rational, Witness)> = None;
        let consider = |val: Rational, w: &dyn Fn() -> Witness, best: &mut Option<(Rational, Witness)>| {
            if best.as_ref().is_none_or(|(b, _)| val > *b) {
                *best = Some((val, w()));
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                let dg = self.dg[i][j];
                let dh = self.dh[i][j];
                let (sd, td) = (Distance::from(dg), Distance::from(dh));
                match (dg, dh) {
                    (None, _) => {
                        // Only reachable in per-component mode.
                        debug_assert!(self.per_component);
                    }
                    (Some(_), None) => {
                        return (
                            None,
                            Some(Witness::Upper {
                                u: src(i),
                                v: src(j),
                                source_distance: sd,
                                target_distance: td,
                            }),
                        );
                    }
                    (Some(a), Some(b)) => {
                        let (a, b) = (a as i64, b as i64);
                        let lower = Rational::new(q * a - p * b, p);
                        let upper = Rational::new(q * b - p * a, q);
                        consider(
                            lower,
                            &|| Witness::Lower {
                                u: src(i),
                                v: src(j),
                                source_distance: sd,
                                target_distance: td,
                            },
                            &mut best,
                        );
                        consider(
                            upper,
                            &|| Witness::Upper {
                                u: src(i),
                                v: src(j),
                                source_distance: sd,
                                target_distance: td,
                            },
                            &mut best,
                        );
                    }
                }
            }
        }
        for (k, d) in self.density.iter().enumerate() {
            let vertex = self.target.vertex(k).clone();
            match d {
                None => {
                    return (
                        None,
                        Some(Witness::Density {
                            vertex,
                            distance: Distance::Infinite,
                        }),
                    )
                }
                Some(d) => consider(
                    Rational::from_integer(*d as i64),
                    &|| Witness::Density {
                        vertex: vertex.clone(),
                        distance: Distance::Finite(*d),
                    },
                    &mut best,
                ),
            }
        }
        match best {
            Some((val, w)) => (Some(val.max(Rational::zero())), Some(w)),
            None => (Some(Rational::zero()), None),
        }
    }

    /// Pairs `(d_G, d_H)` with finite source distance, as integers.
    fn finite_pairs(&self) -> Option<Vec<(i64, i64)>> {
        let n = self.source.vertex_count();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                match (self.dg[i][j], self.dh[i][j]) {
                    (None, _) => {}
                    (Some(_), None) => return None,
                    (Some(a), Some(b)) => out.push((a as i64, b as i64)),
                }
            }
        }
        Some(out)
    }

    fn density_radius(&self) -> Option<usize> {
        self.density.iter().try_fold(0usize, |m, d| d.map(|d| m.max(d)))
    }
}

/// Checks conditions (i) and (ii) for the certificate's constants.
pub fn qi_verify(cert: &QuasiIsometryCertificate) -> Result<QiVerdict, QiError> {
    check_constants(cert.gamma, cert.c)?;
    let tables = Tables::build(&cert.source, &cert.target, &cert.phi, cert.options)?;
    let (required_c, witness) = tables.required(cert.gamma);
    let valid = required_c.is_some_and(|r| r <= cert.c);
    Ok(QiVerdict {
        valid,
        required_c,
        witness,
    })
}

/// Builds and verifies a certificate in one step.
pub fn certify(
    source: Graph,
    target: Graph,
    phi: BTreeMap<Vertex, Vertex>,
    gamma: Rational,
    c: Rational,
    options: QiOptions,
) -> Result<QuasiIsometryCertificate, QiError> {
    let mut cert = QuasiIsometryCertificate::new(source, target, phi, gamma, c).with_options(options);
    let verdict = qi_verify(&cert)?;
    cert.valid = verdict.valid;
    cert.worst_witness = verdict.witness;
    Ok(cert)
}

/// With `fixed_gamma`, the smallest `c` valid at that gamma (`None` when no
/// finite `c` works). Without it, gamma = 1, which admits a finite `c` on
/// every pair of finite connected graphs, together with its smallest `c`.
pub fn tightest_constants(
    source: &Graph,
    target: &Graph,
    phi: &BTreeMap<Vertex, Vertex>,
    fixed_gamma: Option<Rational>,
    options: QiOptions,
) -> Result<(Rational, Option<Rational>), QiError> {
    let gamma = fixed_gamma.unwrap_or_else(Rational::one);
    check_constants(gamma, Rational::zero())?;
    let tables = Tables::build(source, target, phi, options)?;
    Ok((gamma, tables.required(gamma).0))
}

/// Smallest `gamma >= 1` at which `c` is a valid additive constant, or
/// `None` if no gamma works.
pub fn smallest_gamma_for(
    source: &Graph,
    target: &Graph,
    phi: &BTreeMap<Vertex, Vertex>,
    c: Rational,
    options: QiOptions,
) -> Result<Option<Rational>, QiError> {
    check_constants(Rational::one(), c)?;
    let tables = Tables::build(source, target, phi, options)?;
    let Some(radius) = tables.density_radius() else {
        return Ok(None);
    };
    if Rational::from_integer(radius as i64) > c {
        return Ok(None);
    }
    let Some(pairs) = tables.finite_pairs() else {
        return Ok(None);
    };
    let mut gamma = Rational::one();
    for (a, b) in pairs {
        if a == 0 {
            if Rational::from_integer(b) > c {
                return Ok(None);
            }
            continue;
        }
        let (a, b) = (Rational::from_integer(a), Rational::from_integer(b));
        // dG / gamma - c <= dH
        let denom = b + c;
        if denom.is_zero() {
            return Ok(None);
        }
        gamma = gamma.max(a / denom);
        // dH <= gamma dG + c
        gamma = gamma.max((b - c) / a);
    }
    Ok(Some(gamma))
}

/// Constants `(gamma1 gamma2, gamma2 c1 + 2 c2)` valid for `g . f` whenever
/// `f` is a `(gamma1, c1)`-map and `g` a `(gamma2, c2)`-map.
pub fn composed_constants(
    f: &QuasiIsometryCertificate,
    g: &QuasiIsometryCertificate,
) -> (Rational, Rational) {
    (f.gamma * g.gamma, g.gamma * f.c + g.c + g.c)
}

/// Composite certificate for `g . f`, re-tightened at gamma1 gamma2.
pub fn qi_compose(
    f: &QuasiIsometryCertificate,
    g: &QuasiIsometryCertificate,
) -> Result<QuasiIsometryCertificate, QiError> {
    if f.target != g.source {
        return Err(QiError::Mismatch);
    }
    if !qi_verify(f)?.valid || !qi_verify(g)?.valid {
        return Err(QiError::InvalidInput);
    }
    let phi: BTreeMap<Vertex, Vertex> = f
        .phi
        .iter()
        .map(|(v, w)| (v.clone(), g.phi[w].clone()))
        .collect();
    let (gamma, conservative) = composed_constants(f, g);
    let options = QiOptions {
        per_component: f.options.per_component || g.options.per_component,
    };
    let (_, tight) = tightest_constants(&f.source, &g.target, &phi, Some(gamma), options)?;
    let c = tight.unwrap_or(conservative).min(conservative);
    certify(f.source.clone(), g.target.clone(), phi, gamma, c, options)
}
