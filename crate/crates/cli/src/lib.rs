//! Command dispatch for the `tropmoduli` binary: parse arguments, run one
//! library operation, and render the outcome as a versioned JSON report or a
//! short text summary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use tropmoduli::family::{
    fiber, image_strata, induced_alpha, propagate_closure, validate_family, wall_verdicts, WallVerdict,
};
use tropmoduli::io::{
    self, read_complex, read_curve, read_enumeration, read_family, read_pair, read_seeds, read_type, read_types,
    ComplexDoc, CurveDoc, IoError, TypeDoc, TypeEntry, TypesDoc, SCHEMA,
};
use tropmoduli::linalg::{format_rat, parse_rat, RatVector};
use tropmoduli::moduli::{
    automorphisms, canonical_form, classify, enumerate_types, resolve_4valent, stratum, wall_graph, WallGraph, WallKind,
};
use tropmoduli::polyhedral::{build_skeleton, validate_complex, FaceId};
use tropmoduli::report::ValidationReport;
use tropmoduli::tropcurve::{check_balanced, genus, is_stable, CombinatorialType};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "tropmoduli",
    version,
    about = "Exact tropical curves, their moduli strata, and families over polyhedral bases"
)]
pub struct Command {
    #[command(subcommand)]
    pub verb: Verb,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker thread cap.
    #[arg(long, global = true, env = "TROPMODULI_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Check the axioms of a polyhedral complex with integral structure.
    ValidateComplex { complex: PathBuf },
    /// Build the skeleton of a strictly semistable pair.
    Skeleton { pair: PathBuf },
    /// Check a parameterized tropical curve.
    ValidateCurve { curve: PathBuf },
    /// Enumerate combinatorial types of given genus and degree.
    Enumerate { spec: PathBuf },
    /// Classify a type and report its stratum.
    Classify {
        #[arg(value_name = "TYPE")]
        ty: PathBuf,
        /// Number of random stratum points to include.
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Resolve the 4-valent vertex of a wall.
    Resolve {
        #[arg(value_name = "TYPE")]
        ty: PathBuf,
        /// Vertex id; defaults to the unique 4-valent vertex.
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Build the wall graph of the weightless 3-valent types in a list.
    Wallgraph { types: PathBuf },
    /// Check a family of curves over a polyhedral complex.
    ValidateFamily { family: PathBuf },
    /// Evaluate the fiber over a point of a face.
    Fiber {
        family: PathBuf,
        #[arg(long)]
        face: String,
        /// Chart coordinates, comma separated `p/q` values.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        point: String,
    },
    /// The induced map to moduli and the strata its image meets.
    Alpha { family: PathBuf },
    /// Harmonicity or surjectivity verdicts at faces with cofacets.
    Verdicts {
        family: PathBuf,
        #[arg(long)]
        face: Option<String>,
    },
    /// Saturate seed types through walls.
    Propagate { types: PathBuf, seeds: PathBuf },
}

impl Verb {
    pub fn name(&self) -> &'static str {
        match self {
            Verb::ValidateComplex { .. } => "validate-complex",
            Verb::Skeleton { .. } => "skeleton",
            Verb::ValidateCurve { .. } => "validate-curve",
            Verb::Enumerate { .. } => "enumerate",
            Verb::Classify { .. } => "classify",
            Verb::Resolve { .. } => "resolve",
            Verb::Wallgraph { .. } => "wallgraph",
            Verb::ValidateFamily { .. } => "validate-family",
            Verb::Fiber { .. } => "fiber",
            Verb::Alpha { .. } => "alpha",
            Verb::Verdicts { .. } => "verdicts",
            Verb::Propagate { .. } => "propagate",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown verb: {0}")]
    UnknownVerb(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("{0}")]
    Usage(String),
    /// Help or version output; not a failure.
    #[error("{0}")]
    Display(String),
}

/// Parses `argv` (without the program name).
pub fn parse_command<I, S>(argv: I) -> Result<Command, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("tropmoduli")).chain(argv.into_iter().map(Into::into));
    Command::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        let text = e.to_string();
        match e.kind() {
            ErrorKind::InvalidSubcommand => CliError::UnknownVerb(text),
            ErrorKind::MissingRequiredArgument | ErrorKind::MissingSubcommand => CliError::MissingInput(text),
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Display(text),
            ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::MissingInput(text),
            _ => CliError::Usage(text),
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violations,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violations => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub verb: &'static str,
    pub status: Status,
    pub payload: Value,
    pub summary: String,
}

struct Outcome {
    status: Status,
    payload: Value,
    summary: String,
}

impl Outcome {
    fn ok(payload: Value, summary: String) -> Self {
        Outcome {
            status: Status::Ok,
            payload,
            summary,
        }
    }

    fn validation(report: &ValidationReport, what: &str) -> Self {
        let status = if report.is_valid() {
            Status::Ok
        } else {
            Status::Violations
        };
        let summary = if report.is_valid() {
            format!("{what} is valid")
        } else {
            let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
            lines.join("\n")
        };
        Outcome {
            status,
            payload: json!({ "violations": report.violations }),
            summary,
        }
    }
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("documents serialize")
}

fn read(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::at("", format!("cannot read {}: {e}", path.display())))
}

fn with_file<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, IoError>) -> Result<T, IoError> {
    let text = read(path)?;
    parse(&text).map_err(|e| IoError {
        pointer: e.pointer,
        message: format!("{}: {}", path.display(), e.message),
    })
}

fn failure(message: impl ToString) -> IoError {
    IoError::at("", message.to_string())
}

/// Runs the command. Never panics on bad input; failures become reports
/// with status `error`.
pub fn execute(c: &Command) -> Report {
    let outcome = run(c).unwrap_or_else(|e| Outcome {
        status: Status::Error,
        payload: json!({ "error": { "pointer": e.pointer, "message": e.message } }),
        summary: format!("error at `{}`: {}", e.pointer, e.message),
    });
    Report {
        schema: SCHEMA,
        verb: c.verb.name(),
        status: outcome.status,
        payload: outcome.payload,
        summary: outcome.summary,
    }
}

/// JSON is pretty-printed with sorted keys; text is the summary.
pub fn emit(r: &Report, format: Format) -> String {
    match format {
        Format::Json => io::to_json(r),
        Format::Text => {
            let mut s = r.summary.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

fn node_id(i: usize) -> String {
    format!("n{i}")
}

fn wall_id(i: usize) -> String {
    format!("w{i}")
}

fn weightless_trivalent(types: Vec<CombinatorialType>) -> Vec<CombinatorialType> {
    types
        .into_iter()
        .filter(|t| classify(t).kind == WallKind::Weightless3Valent)
        .collect()
}

fn wallgraph_payload(wg: &WallGraph) -> Value {
    let nodes: Vec<Value> = wg
        .nodes
        .iter()
        .enumerate()
        .map(|(i, t)| json!({ "id": node_id(i), "canonical": wg.node_keys[i], "type": TypeDoc::from_type(t) }))
        .collect();
    let walls: Vec<Value> = wg
        .walls
        .iter()
        .enumerate()
        .map(|(i, w)| {
            json!({
                "id": wall_id(i),
                "canonical": w.key,
                "type": TypeDoc::from_type(&w.ty),
                "resolutions": w.resolutions.iter().map(|&n| node_id(n)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "schema": SCHEMA, "nodes": nodes, "walls": walls })
}

fn verdict_payload(v: &WallVerdict, face_id: &str, verified: bool, faces: &[String]) -> Value {
    let certificate = v.harmonicity.as_ref().map(|h| {
        json!({
            "harmonicity": h.verdict,
            "coefficients": h.certificate.as_ref().map(|a| a.iter().map(ToString::to_string).collect::<Vec<_>>()),
            "derivatives": h.derivatives.iter().map(|d| d.0.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "image_span": h.image_span.basis().iter().map(|d| d.0.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    });
    let coverage: Vec<Value> = v
        .coverage
        .iter()
        .map(|c| json!({ "canonical": c.key, "witness": c.witness.map(|w| faces[w].clone()) }))
        .collect();
    json!({
        "face": face_id,
        "verdict": v.verdict,
        "certificate": certificate,
        "coverage": coverage,
        "uncovered": v.uncovered().iter().map(|c| c.key.clone()).collect::<Vec<_>>(),
        "diagnostics": v.diagnostics,
        "verified": verified,
    })
}

fn parse_point(s: &str) -> Result<RatVector, IoError> {
    if s.trim().is_empty() {
        return Ok(RatVector(Vec::new()));
    }
    s.split(',')
        .enumerate()
        .map(|(i, x)| {
            parse_rat(x).ok_or_else(|| IoError::at(format!("/point/{i}"), format!("`{x}` is not a rational")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RatVector)
}

fn run(c: &Command) -> Result<Outcome, IoError> {
    match &c.verb {
        Verb::ValidateComplex { complex } => {
            let cx = with_file(complex, read_complex)?;
            Ok(Outcome::validation(&validate_complex(&cx), "complex"))
        }
        Verb::Skeleton { pair } => {
            let data = with_file(pair, read_pair)?;
            let sk = build_skeleton(&data).map_err(failure)?;
            let report = validate_complex(&sk);
            let mut out = Outcome::validation(&report, "skeleton");
            out.payload = json!({ "complex": ComplexDoc::from_complex(&sk), "violations": report.violations });
            if report.is_valid() {
                out.summary = format!("skeleton with {} faces of dimension at most {}", sk.len(), sk.dim());
            }
            Ok(out)
        }
        Verb::ValidateCurve { curve } => {
            let p = with_file(curve, read_curve)?;
            Ok(Outcome::validation(&p.validate(), "curve"))
        }
        Verb::Enumerate { spec } => {
            let s = with_file(spec, read_enumeration)?;
            let types = enumerate_types(&s).map_err(failure)?;
            Ok(Outcome::ok(
                value(&TypesDoc::new(&types)),
                format!("{} types", types.len()),
            ))
        }
        Verb::Classify { ty, samples } => {
            let t = with_file(ty, read_type)?;
            let class = classify(&t);
            let balanced = check_balanced(&t).is_valid();
            let (stratum_dim, points) = if balanced {
                let s = stratum(&t).map_err(failure)?;
                let mut rng = rand::rngs::StdRng::seed_from_u64(c.seed);
                let pts: Vec<Vec<String>> = s
                    .sample_points(&mut rng, *samples)
                    .iter()
                    .map(|p| p.0.iter().map(format_rat).collect())
                    .collect();
                (s.dim(), pts)
            } else {
                (None, Vec::new())
            };
            let kind = class.kind;
            let four = class.four_valent_vertex.map(|v| t.graph.vertices[v].id.clone());
            let payload = json!({
                "canonical": canonical_form(&t),
                "kind": kind,
                "four_valent_vertex": four,
                "balanced": balanced,
                "stable": is_stable(&t.graph),
                "genus": genus(&t.graph).ok(),
                "automorphisms": automorphisms(&t).len(),
                "stratum_dim": stratum_dim,
                "samples": points,
            });
            let dim = stratum_dim.map_or_else(|| "empty or undefined".to_string(), |d| d.to_string());
            Ok(Outcome::ok(payload, format!("{kind:?}, stratum dimension {dim}")))
        }
        Verb::Resolve { ty, vertex } => {
            let t = with_file(ty, read_type)?;
            let v = match vertex {
                Some(id) => t
                    .graph
                    .vertex_index(id)
                    .ok_or_else(|| IoError::at("/vertex", format!("unknown vertex `{id}`")))?,
                None => classify(&t)
                    .four_valent_vertex
                    .ok_or_else(|| failure("type is not a weightless almost 3-valent wall"))?,
            };
            let res = resolve_4valent(&t, v).map_err(failure)?;
            let list: Vec<Value> = res
                .iter()
                .map(|r| {
                    json!({
                        "new_edge": r.ty.graph.edges[r.new_edge].id,
                        "canonical": canonical_form(&r.ty),
                        "type": TypeDoc::from_type(&r.ty),
                    })
                })
                .collect();
            let payload = json!({ "wall": TypeEntry::new(&t), "vertex": t.graph.vertices[v].id, "resolutions": list });
            Ok(Outcome::ok(payload, format!("{} resolutions", res.len())))
        }
        Verb::Wallgraph { types } => {
            let ts = weightless_trivalent(with_file(types, read_types)?);
            let wg = wall_graph(&ts).map_err(failure)?;
            let summary = format!("{} nodes, {} walls", wg.nodes.len(), wg.walls.len());
            Ok(Outcome::ok(wallgraph_payload(&wg), summary))
        }
        Verb::ValidateFamily { family } => {
            let f = with_file(family, |s| read_family(s, family.parent()))?;
            Ok(Outcome::validation(&validate_family(&f), "family"))
        }
        Verb::Fiber { family, face, point } => {
            let f = with_file(family, |s| read_family(s, family.parent()))?;
            let w: FaceId = f
                .base
                .index_of(face)
                .map_err(|_| IoError::at("/face", format!("unknown face `{face}`")))?;
            let q = parse_point(point)?;
            let p = fiber(&f, w, &q).map_err(failure)?;
            let (at, _) = tropmoduli::family::locate(&f, w, &q).map_err(failure)?;
            let payload = json!({ "face": f.base.face(at).id, "curve": CurveDoc::from_curve(&p) });
            Ok(Outcome::ok(payload, format!("fiber over face {}", f.base.face(at).id)))
        }
        Verb::Alpha { family } => {
            let f = with_file(family, |s| read_family(s, family.parent()))?;
            let alpha = induced_alpha(&f).map_err(failure)?;
            let strata = image_strata(&f).map_err(failure)?;
            let faces: Vec<Value> = alpha
                .faces
                .iter()
                .enumerate()
                .map(|(w, fl)| {
                    json!({
                        "face": f.base.face(w).id,
                        "canonical": fl.key,
                        "type": TypeDoc::from_type(&fl.ty),
                        "linear": fl.lift.linear.to_i64_rows().expect("lift entries fit in 64 bits"),
                        "translation": fl.lift.translation.0.iter().map(format_rat).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let strata_v: Vec<Value> = strata
                .iter()
                .map(|s| {
                    json!({
                        "canonical": s.key,
                        "type": TypeDoc::from_type(&s.ty),
                        "dim": s.dim,
                        "stratum_dim": s.stratum_dim,
                        "full_dimensional": s.full_dimensional,
                        "faces": s.faces.iter().map(|&w| f.base.face(w).id.clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let full = strata.iter().filter(|s| s.full_dimensional).count();
            let summary = format!("{} strata met, {} of them full-dimensionally", strata.len(), full);
            Ok(Outcome::ok(json!({ "faces": faces, "strata": strata_v }), summary))
        }
        Verb::Verdicts { family, face } => {
            let f = with_file(family, |s| read_family(s, family.parent()))?;
            let alpha = induced_alpha(&f).map_err(failure)?;
            let mut verdicts = wall_verdicts(&f).map_err(failure)?;
            if let Some(id) = face {
                let w = f
                    .base
                    .index_of(id)
                    .map_err(|_| IoError::at("/face", format!("unknown face `{id}`")))?;
                verdicts.retain(|v| v.face == w);
                if verdicts.is_empty() {
                    verdicts.push(tropmoduli::family::wall_verdict(&f, w).map_err(failure)?);
                }
            }
            let ids: Vec<String> = f.base.faces().iter().map(|x| x.id.clone()).collect();
            let list: Vec<Value> = verdicts
                .iter()
                .map(|v| verdict_payload(v, &ids[v.face], v.verify(&alpha), &ids))
                .collect();
            let lines: Vec<String> = verdicts
                .iter()
                .map(|v| format!("{}: {:?}", ids[v.face], v.verdict))
                .collect();
            let summary = if lines.is_empty() {
                "no faces with cofacets".to_string()
            } else {
                lines.join("\n")
            };
            let all_ok = verdicts.iter().all(|v| v.verify(&alpha));
            let mut out = Outcome::ok(json!({ "schema": SCHEMA, "verdicts": list }), summary);
            if !all_ok {
                out.status = Status::Violations;
            }
            Ok(out)
        }
        Verb::Propagate { types, seeds } => {
            let ts = weightless_trivalent(with_file(types, read_types)?);
            let seeds = with_file(seeds, read_seeds)?;
            let wg = wall_graph(&ts).map_err(failure)?;
            let p = propagate_closure(&wg, &seeds).map_err(failure)?;
            let nodes: Vec<Value> = p
                .nodes
                .iter()
                .map(|&n| json!({ "id": node_id(n), "canonical": wg.node_keys[n] }))
                .collect();
            let trace: Vec<Value> = p
                .trace
                .iter()
                .map(|s| {
                    json!({
                        "wall": wall_id(s.wall),
                        "from": node_id(s.from),
                        "added": s.added.iter().map(|&n| node_id(n)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let summary = format!(
                "{} of {} nodes reached in {} steps",
                p.nodes.len(),
                wg.nodes.len(),
                p.trace.len()
            );
            Ok(Outcome::ok(json!({ "nodes": nodes, "trace": trace }), summary))
        }
    }
}

/// Caps the global worker pool; later calls are ignored.
pub fn configure_threads(threads: Option<usize>) {
    if let Some(n) = threads.filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
