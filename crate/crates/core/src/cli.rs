//! Command-line front end: dimension tables, diagram verification and the
//! curvature identity suite, rendered as JSON, CSV or Markdown.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::bgg::{build_strain, build_stress, BggError, Report, Status};
use crate::curvature::{run_seeded, run_vectors, CurvatureError, CurvatureReport, Outcome, VectorCase};
use crate::exactmath::parse_rational;
use crate::exactmath::scalar::to_decimal_string;
use crate::fespace::{assemble_global, element, elements_for, DimsRow, FeError};
use crate::mesh::{load_mesh, single_macro_mesh, MacroKind, MacroMesh, MeshError, BUILTIN_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Diagram {
    Stress,
    Strain,
}

#[derive(Debug, Clone, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Dimension and DOF counts of catalog elements on a mesh.
    Dims {
        /// Built-in mesh name or path to a mesh JSON file.
        #[arg(long)]
        mesh: Option<String>,
        /// Restrict the table to one element.
        #[arg(long)]
        element: Option<String>,
    },
    /// Build a BGG diagram and run every exact check on it.
    Verify {
        #[arg(long)]
        mesh: Option<String>,
        #[arg(long, value_enum)]
        diagram: Option<Diagram>,
    },
    /// Run the curvature identities on a seeded corpus or on test vectors.
    Curvature {
        /// Identity name, a name prefix, or `all`.
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per identity and dimension.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Test-vector JSON file; replaces the random corpus.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Parser)]
#[command(name = "bggfe", version, about = "Exact BGG finite element diagrams and curvature identities")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Fe(#[from] FeError),
    #[error(transparent)]
    Bgg(#[from] BggError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

/// A rendered report and whether every check in it passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub passed: bool,
    /// One line per failed check.
    pub failures: Vec<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, passed: true, failures: Vec::new() }
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output, CliError> {
    match &cfg.command {
        Command::Dims { mesh, element } => dims(mesh.as_deref(), element.as_deref(), cfg.format),
        Command::Verify { mesh, diagram } => verify(mesh.as_deref(), *diagram, cfg.format),
        Command::Curvature { check, seed, cases, input } => curvature(check, *seed, *cases, input.as_deref(), cfg.format),
    }
}

fn default_mesh(kind: MacroKind) -> &'static str {
    match kind {
        MacroKind::CloughTocher => "unit-triangle-ct",
        _ => "unit-square-cc",
    }
}

fn mesh_kind(mesh: &MacroMesh, name: &str) -> Result<MacroKind, CliError> {
    mesh.uniform_kind().ok_or_else(|| CliError::Usage(format!("mesh {name} mixes macro kinds")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing CSV to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
}

fn md_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        s.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    s
}

#[derive(Serialize)]
struct DimsTable<'a> {
    mesh: &'a str,
    macro_kind: &'a str,
    rows: &'a [DimsRow],
}

fn derived_row(kind: MacroKind, mesh: &MacroMesh) -> Result<DimsRow, CliError> {
    let one = single_macro_mesh(&mesh.macros[0].element);
    let (name, report) = match kind {
        MacroKind::CrissCross => ("ker(-2 sskw)", build_stress(&one)?.verify()?),
        MacroKind::CloughTocher => ("U1", build_strain(&one)?.verify()?),
        MacroKind::Triangle => unreachable!("no catalog elements on plain triangles"),
    };
    let s = report.spaces.iter().find(|s| s.name == name).expect("derived space reported");
    Ok(DimsRow {
        element: name.to_string(),
        macro_kind: kind.name().to_string(),
        local_dim: s.dim,
        vertex_dofs: s.dofs.vertex,
        edge_dofs: s.dofs.edge,
        interior_dofs: s.dofs.interior,
        global_dim: None,
    })
}

fn dims(mesh_name: Option<&str>, element_name: Option<&str>, format: Format) -> Result<Output, CliError> {
    let def = element_name.map(element).transpose()?;
    let mesh_name = mesh_name.unwrap_or_else(|| def.as_ref().map_or("unit-square-cc", |d| default_mesh(d.macro_kind)));
    let mesh = load_mesh(mesh_name)?;
    let kind = mesh_kind(&mesh, mesh_name)?;
    let defs = match def {
        Some(d) if d.macro_kind != kind => {
            return Err(FeError::KindMismatch { element: d.name, expected: d.macro_kind, got: kind }.into());
        }
        Some(d) => vec![d],
        None => {
            let names = elements_for(kind);
            if names.is_empty() {
                return Err(CliError::Usage(format!("no catalog elements live on {kind} macros")));
            }
            names.iter().map(|n| element(n)).collect::<Result<Vec<_>, _>>()?
        }
    };
    let mut rows = Vec::new();
    for d in &defs {
        let space = assemble_global(d, &mesh)?;
        rows.push(DimsRow::of(&space.locals[0], kind, Some(space.dim())));
    }
    if element_name.is_none() {
        rows.push(derived_row(kind, &mesh)?);
    }
    let text = match format {
        Format::Json => to_json(&DimsTable { mesh: mesh_name, macro_kind: kind.name(), rows: &rows }),
        Format::Csv => csv_text(|w| {
            w.write_record(["element", "macro_kind", "local_dim", "vertex_dofs", "edge_dofs", "interior_dofs", "global_dim"])?;
            for r in &rows {
                let g = r.global_dim.map(|g| g.to_string()).unwrap_or_default();
                let fields = [
                    &r.element,
                    &r.macro_kind,
                    &r.local_dim.to_string(),
                    &r.vertex_dofs.to_string(),
                    &r.edge_dofs.to_string(),
                    &r.interior_dofs.to_string(),
                    &g,
                ];
                w.write_record(fields)?;
            }
            Ok(())
        }),
        Format::Md => md_table(
            &["element", "macro", "local dim", "vertex", "edge", "interior", "global dim"],
            rows.iter().map(|r| {
                vec![
                    r.element.clone(),
                    r.macro_kind.clone(),
                    r.local_dim.to_string(),
                    r.vertex_dofs.to_string(),
                    r.edge_dofs.to_string(),
                    format!("+{}", r.interior_dofs),
                    r.global_dim.map(|g| g.to_string()).unwrap_or_else(|| "-".into()),
                ]
            }),
        ),
    };
    Ok(Output::ok(text))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    mesh: &'a str,
    #[serde(flatten)]
    report: &'a Report,
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
    }
}

fn verify(mesh_name: Option<&str>, diagram: Option<Diagram>, format: Format) -> Result<Output, CliError> {
    let mesh_name = mesh_name.unwrap_or(match diagram {
        Some(Diagram::Strain) => "unit-triangle-ct",
        _ => "unit-square-cc",
    });
    let mesh = load_mesh(mesh_name)?;
    let diagram = match diagram {
        Some(d) => d,
        None => match mesh_kind(&mesh, mesh_name)? {
            MacroKind::CloughTocher => Diagram::Strain,
            _ => Diagram::Stress,
        },
    };
    let report = match diagram {
        Diagram::Stress => build_stress(&mesh)?.verify()?,
        Diagram::Strain => build_strain(&mesh)?.verify()?,
    };
    let text = match format {
        Format::Json => to_json(&VerifyReport { mesh: mesh_name, report: &report }),
        Format::Csv => csv_text(|w| {
            w.write_record(["check", "status", "residual_rank"])?;
            for c in &report.checks {
                w.write_record([c.name.as_str(), status_word(c.status), &c.residual_rank.to_string()])?;
            }
            Ok(())
        }),
        Format::Md => {
            let spaces = md_table(
                &["space", "dim", "vertex", "edge", "interior"],
                report.spaces.iter().map(|s| {
                    vec![
                        s.name.clone(),
                        s.dim.to_string(),
                        s.dofs.vertex.to_string(),
                        s.dofs.edge.to_string(),
                        format!("+{}", s.dofs.interior),
                    ]
                }),
            );
            let connectors = md_table(
                &["connector", "rank", "injective", "surjective"],
                report
                    .connectors
                    .iter()
                    .map(|c| vec![c.name.clone(), c.rank.to_string(), c.injective.to_string(), c.surjective.to_string()]),
            );
            let checks = md_table(
                &["check", "status", "residual rank"],
                report.checks.iter().map(|c| vec![c.name.clone(), status_word(c.status).to_string(), c.residual_rank.to_string()]),
            );
            let cohomology = md_table(
                &["complex", "index", "dim"],
                report.cohomology.iter().map(|c| vec![c.complex.clone(), c.index.to_string(), c.dim.to_string()]),
            );
            format!("# {} diagram on {mesh_name}\n\n{spaces}\n{connectors}\n{checks}\n{cohomology}", report.diagram)
        }
    };
    let failures: Vec<String> = report.failures().map(|c| format!("{} (residual rank {})", c.name, c.residual_rank)).collect();
    Ok(Output { text, passed: failures.is_empty(), failures })
}

fn outcome_word(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
    }
}

fn load_vectors(path: &std::path::Path) -> Result<Vec<VectorCase>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn curvature(check: &str, seed: u64, cases: usize, input: Option<&std::path::Path>, format: Format) -> Result<Output, CliError> {
    if input.is_none() && cases == 0 {
        return Err(CliError::Usage("--cases must be positive".into()));
    }
    let report: CurvatureReport = match input {
        Some(path) => run_vectors(check, &load_vectors(path)?)?,
        None => run_seeded(check, seed, cases)?,
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => csv_text(|w| {
            w.write_record(["check", "dimension", "kind", "statement", "cases", "failures", "max_residual", "status"])?;
            for r in &report.results {
                let kind = serde_json::to_value(r.kind).expect("kind serializes");
                w.write_record([
                    r.check.as_str(),
                    &r.dimension.to_string(),
                    kind.as_str().unwrap_or_default(),
                    &r.statement,
                    &r.cases.to_string(),
                    &r.failures.to_string(),
                    &r.max_residual,
                    outcome_word(r.status),
                ])?;
            }
            Ok(())
        }),
        Format::Md => md_table(
            &["check", "dim", "identity", "cases", "failures", "max residual", "status"],
            report.results.iter().map(|r| {
                let max = parse_rational(&r.max_residual).map(|q| to_decimal_string(&q, 6)).unwrap_or_else(|_| r.max_residual.clone());
                vec![
                    r.check.clone(),
                    r.dimension.to_string(),
                    r.statement.clone(),
                    r.cases.to_string(),
                    r.failures.to_string(),
                    max,
                    outcome_word(r.status).to_string(),
                ]
            }),
        ),
    };
    let failures: Vec<String> = report
        .failures()
        .map(|r| format!("{} ({}D): {} of {} cases, max residual {}", r.check, r.dimension, r.failures, r.cases, r.max_residual))
        .collect();
    Ok(Output { text, passed: failures.is_empty(), failures })
}

/// Help text listing the built-in meshes, for error messages.
pub fn mesh_help() -> String {
    format!("built-in meshes: {BUILTIN_NAMES}")
}
