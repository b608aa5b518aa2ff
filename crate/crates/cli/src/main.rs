//! Command-line front end for the coarse-graph toolbox.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use coarse_graph::fatminor::{asymptotic_probe, search_fat_minor, verify_fat_model, SearchConfig, SearchOutcome};
use coarse_graph::generators::{default_seed, generate, CayleyPreset, GeneratorSpec};
use coarse_graph::io::{
    parse_edge_list, parse_map, parse_td, parse_vertex_set, sets_to_json, to_dot, write_edge_list,
    BundleJson, CertificateRecord, MarkersJson, ModelJson, OutputJson,
};
use coarse_graph::metric::{parse_rational, qi_verify, QiOptions, QuasiIsometryCertificate};
use coarse_graph::planarity::is_planar;
use coarse_graph::planarize::{build_h, verify_output, AttachmentRule, InstanceBundle, PlanarizeConfig};
use coarse_graph::symmetry::{automorphisms_capped, orbits_under, Automorphism, DEFAULT_AUTOMORPHISM_CAP};
use coarse_graph::treedecomp::{
    adhesion_and_width, exact_treewidth_capped, heuristic_td, torso, treewidth_lower_bound,
    treewidth_with_reductions, validate, DEFAULT_TREEWIDTH_CAP,
};
use coarse_graph::{enumerate_tight, Graph, Vertex};

#[derive(Parser)]
#[command(name = "coarse-graph", version, about = "Tree-decompositions, planarity and coarse geometry of finite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write JSON or the edge list here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the resulting graph as DOT.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the tree-decomposition axioms.
    ValidateTd {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Print the torso of one part as an edge list.
    Torso {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
        #[arg(long)]
        node: String,
        #[command(flatten)]
        output: Output,
    },
    /// Treewidth, exactly when the graph is small enough.
    Treewidth {
        #[arg(long)]
        graph: PathBuf,
        /// Vertex cap for the exact routine.
        #[arg(long, default_value_t = DEFAULT_TREEWIDTH_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Planarity test with a Kuratowski witness for small non-planar graphs.
    Planarity {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// All tight separations of order k.
    TightSeps {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Orbits of vertices, or of tight separations of order k.
    Orbits {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_AUTOMORPHISM_CAP)]
        cap: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Check a vertex map against quasi-isometry constants.
    QiCheck {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Multiplicative constant, as `p`, `p/q` or a decimal.
        #[arg(long, default_value = "1")]
        gamma: String,
        #[arg(long)]
        c: String,
        /// Ignore source pairs in different components.
        #[arg(long)]
        per_component: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Search for a K-fat minor, verify a given model, or sweep K.
    FatMinor {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Comma-separated K values to sweep.
        #[arg(long, value_delimiter = ',')]
        ks: Vec<usize>,
        /// Verify this model instead of searching.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Build the planar graph H and its map, then verify them.
    Planarize {
        /// Bundle JSON; replaces --graph, --td and --k.
        #[arg(long, conflicts_with_all = ["graph", "td"])]
        bundle: Option<PathBuf>,
        #[arg(long, requires = "td")]
        graph: Option<PathBuf>,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// JSON list of marker vertices, or lists per tree node.
        #[arg(long)]
        markers: Option<PathBuf>,
        #[arg(long)]
        finite_threshold: Option<usize>,
        /// Join x_S only to torsos on tree edges with adhesion set S, or to
        /// every torso containing S.
        #[arg(long, value_enum, default_value = "incident-edges")]
        attachment: Attachment,
        #[command(flatten)]
        output: Output,
    },
    /// Generate a named family as an edge list.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long)]
        radius: Option<usize>,
        /// Random seed; defaults to COARSE_GRAPH_SEED or a fixed value.
        #[arg(long)]
        seed: Option<u64>,
        /// Write Cayley-ball markers as JSON here.
        #[arg(long)]
        markers_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Path,
    Cycle,
    Grid,
    Complete,
    CompleteBipartite,
    Tree,
    CayleyBall,
}

#[derive(Clone, Copy, ValueEnum)]
enum Attachment {
    IncidentEdges,
    AllContaining,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    FreeGroupRank2,
    IntegerLatticeZ2,
    #[value(name = "free-product-z2-z3")]
    FreeProductZ2Z3,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_edge_list(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn emit_text(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(output: &Output, value: &Value) -> Result<()> {
    emit_text(output, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn emit_dot(output: &Output, g: &Graph, name: &str) -> Result<()> {
    if let Some(p) = &output.dot {
        fs::write(p, to_dot(g, name)).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.with_context(|| format!("--{flag} is required for this family"))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::ValidateTd { graph, td, output } => {
            let g = load_graph(&graph)?;
            let d = parse_td(&read(&td)?)?;
            let verdict = validate(&g, &d);
            let (adhesion, width) = adhesion_and_width(&d);
            emit_json(
                &output,
                &json!({
                    "valid": verdict.is_ok(),
                    "violation": verdict.as_ref().err(),
                    "adhesion": adhesion,
                    "width": width,
                }),
            )?;
            Ok(verdict.is_ok())
        }
        Command::Torso { graph, td, node, output } => {
            let g = load_graph(&graph)?;
            let d = parse_td(&read(&td)?)?;
            let t = torso(&g, &d, &Vertex::name(node))?;
            emit_text(&output, &write_edge_list(&t.graph))?;
            emit_dot(&output, &t.graph, "torso")?;
            Ok(true)
        }
        Command::Treewidth { graph, cap, output } => {
            let g = load_graph(&graph)?;
            let exact = if g.vertex_count() <= cap {
                Some(exact_treewidth_capped(&g, cap)?)
            } else {
                treewidth_with_reductions(&g, cap)
            };
            let heuristic = adhesion_and_width(&heuristic_td(&g)).1;
            emit_json(
                &output,
                &json!({
                    "treewidth": exact,
                    "lower_bound": treewidth_lower_bound(&g),
                    "heuristic_width": heuristic,
                }),
            )?;
            Ok(true)
        }
        Command::Planarity { graph, output } => {
            let g = load_graph(&graph)?;
            emit_json(&output, &serde_json::to_value(is_planar(&g))?)?;
            Ok(true)
        }
        Command::TightSeps { graph, k, output } => {
            let g = load_graph(&graph)?;
            emit_json(&output, &serde_json::to_value(enumerate_tight(&g, k))?)?;
            Ok(true)
        }
        Command::Orbits { graph, k, cap, output } => {
            let g = load_graph(&graph)?;
            let group: Vec<Automorphism> = automorphisms_capped(&g, cap)?;
            let orbits = match k {
                Some(k) => serde_json::to_value(orbits_under(&group, &enumerate_tight(&g, k)))?,
                None => serde_json::to_value(orbits_under(&group, g.vertices()))?,
            };
            emit_json(&output, &json!({ "group_order": group.len(), "orbits": orbits }))?;
            Ok(true)
        }
        Command::QiCheck {
            source,
            target,
            map,
            gamma,
            c,
            per_component,
            output,
        } => {
            let g = load_graph(&source)?;
            let h = load_graph(&target)?;
            let phi = parse_map(&read(&map)?)?;
            let gamma = parse_rational(&gamma)?;
            let c = parse_rational(&c)?;
            let options = QiOptions { per_component };
            let cert = QuasiIsometryCertificate::new(g, h, phi, gamma, c).with_options(options);
            let verdict = qi_verify(&cert)?;
            let record = CertificateRecord::new(gamma, c, &verdict, options);
            emit_json(&output, &serde_json::to_value(&record)?)?;
            Ok(record.valid)
        }
        Command::FatMinor {
            pattern,
            graph,
            k,
            ks,
            model,
            budget,
            output,
        } => {
            let p = load_graph(&pattern)?;
            let g = load_graph(&graph)?;
            let mut config = SearchConfig::default();
            if let Some(b) = budget {
                config.budget = b;
            }
            if let Some(path) = model {
                let k = k.context("--k is required with --model")?;
                let m: ModelJson = serde_json::from_str(&read(&path)?)?;
                let report = verify_fat_model(&m.to_model(&p, &g)?, k)?;
                emit_json(&output, &serde_json::to_value(&report)?)?;
                return Ok(report.holds);
            }
            if !ks.is_empty() {
                let probe = asymptotic_probe(&p, &g, &ks, &config)?;
                let value: BTreeMap<String, Value> = probe
                    .iter()
                    .map(|(k, e)| {
                        (
                            k.to_string(),
                            json!({
                                "verdict": e.verdict,
                                "model": e.model.as_ref().map(ModelJson::from_model),
                            }),
                        )
                    })
                    .collect();
                emit_json(&output, &serde_json::to_value(value)?)?;
                return Ok(true);
            }
            let k = k.context("one of --k or --ks is required")?;
            let outcome = search_fat_minor(&p, &g, k, &config)?;
            let value = match &outcome {
                SearchOutcome::Found(m) => json!({ "verdict": outcome.verdict(), "model": ModelJson::from_model(m) }),
                SearchOutcome::NotFound { reason } => json!({ "verdict": outcome.verdict(), "reason": reason }),
                SearchOutcome::Inconclusive => json!({ "verdict": outcome.verdict() }),
            };
            emit_json(&output, &value)?;
            Ok(true)
        }
        Command::Planarize {
            bundle,
            graph,
            td,
            k,
            markers,
            finite_threshold,
            attachment,
            output,
        } => {
            let mut b: InstanceBundle = match bundle {
                Some(path) => {
                    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                    let json: BundleJson = serde_json::from_str(&read(&path)?)?;
                    json.to_bundle(|p| {
                        parse_edge_list(&fs::read_to_string(base.join(p)).map_err(|e| {
                            coarse_graph::io::IoError::Invalid(format!("reading {p}: {e}"))
                        })?)
                    })?
                }
                None => {
                    let (Some(graph), Some(td)) = (graph, td) else {
                        bail!("either --bundle or both --graph and --td are required");
                    };
                    let k = k.context("--k is required")?;
                    InstanceBundle::new(load_graph(&graph)?, parse_td(&read(&td)?)?, k)
                }
            };
            if let Some(k) = k {
                b.k = k;
            }
            if let Some(path) = markers {
                let text = read(&path)?;
                let m: MarkersJson = serde_json::from_str(&text)
                    .or_else(|_| parse_vertex_set(&text).map(|s| MarkersJson::List(s.into_iter().collect())))?;
                b.infinite_markers = Some(m.to_set());
            }
            let mut config = PlanarizeConfig::default();
            if let Some(f) = finite_threshold {
                config.finite_threshold = f;
            }
            config.attachment = match attachment {
                Attachment::IncidentEdges => AttachmentRule::IncidentEdges,
                Attachment::AllContaining => AttachmentRule::AllContaining,
            };
            let out = build_h(&b, &config)?;
            let report = verify_output(&b, &out, &config)?;
            let clean = report.clean();
            emit_json(&output, &serde_json::to_value(OutputJson::new(&out, Some(report)))?)?;
            emit_dot(&output, &out.h, "H")?;
            for w in &out.warnings {
                eprintln!("warning: {w}");
            }
            Ok(clean)
        }
        Command::Gen {
            family,
            n,
            rows,
            cols,
            a,
            b,
            preset,
            radius,
            seed,
            markers_out,
            output,
        } => {
            let spec = match family {
                Family::Path => GeneratorSpec::Path { n: need(n, "n")? },
                Family::Cycle => GeneratorSpec::Cycle { n: need(n, "n")? },
                Family::Grid => GeneratorSpec::Grid {
                    rows: need(rows, "rows")?,
                    cols: need(cols, "cols")?,
                },
                Family::Complete => GeneratorSpec::Complete { n: need(n, "n")? },
                Family::CompleteBipartite => GeneratorSpec::CompleteBipartite {
                    a: need(a, "a")?,
                    b: need(b, "b")?,
                },
                Family::Tree => GeneratorSpec::Tree {
                    n: need(n, "n")?,
                    seed: seed.unwrap_or_else(default_seed),
                },
                Family::CayleyBall => GeneratorSpec::CayleyBall {
                    preset: match preset.context("--preset is required for cayley-ball")? {
                        Preset::FreeGroupRank2 => CayleyPreset::FreeGroupRank2,
                        Preset::IntegerLatticeZ2 => CayleyPreset::IntegerLatticeZ2,
                        Preset::FreeProductZ2Z3 => CayleyPreset::FreeProductZ2Z3,
                    },
                    radius: need(radius, "radius")?,
                },
            };
            let generated = generate(&spec)?;
            emit_text(&output, &write_edge_list(&generated.graph))?;
            emit_dot(&output, &generated.graph, "G")?;
            if let (Some(path), Some(m)) = (markers_out, &generated.markers) {
                let list = sets_to_json(std::slice::from_ref(m));
                fs::write(&path, serde_json::to_string_pretty(&list[0])? + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
