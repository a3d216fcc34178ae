//! Command line front end: parse diagrams, compute brackets, run
//! obstruction scans, fuzz move invariance, ingest KnotInfo data.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bracket::{self, Engine};
use crate::diagram::{parse_pd_json, parse_pd_text, DiagramError, PseudoDiagram};
use crate::knotinfo;
use crate::moves::{self, MoveKind};
use crate::obstruction::{self, ObstructionError};
use crate::polynomial::PseudoPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Naive-engine crossing cap override.
pub const STATE_LIMIT_ENV: &str = "PSEUDOBRACKET_STATE_LIMIT";

#[derive(Parser, Debug)]
#[command(
    name = "pseudobracket",
    about = "Pseudo bracket polynomials and cosmetic-crossing obstructions for PD diagrams",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EngineArg {
    Naive,
    Contract,
}

impl From<EngineArg> for Engine {
    fn from(e: EngineArg) -> Engine {
        match e {
            EngineArg::Naive => Engine::Naive,
            EngineArg::Contract => Engine::Contract,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the bracket polynomial of a diagram.
    Bracket(BracketArgs),
    /// Run the cosmetic-crossing obstruction over a classical knot diagram.
    Scan(ScanArgs),
    /// Apply random moves, checking the normalized bracket at every step.
    Fuzz(FuzzArgs),
    /// Extract a knot's PD code from a KnotInfo CSV export as text PD.
    Ingest(IngestArgs),
}

#[derive(Args, Debug)]
pub struct BracketArgs {
    /// Diagram file; `.json` selects the JSON format, anything else text PD.
    pub file: PathBuf,
    /// Multiply by the writhe normalization `(-A^-3)^w`.
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, value_enum, default_value = "contract")]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    pub file: PathBuf,
    /// Test a single crossing instead of all of them.
    #[arg(long)]
    pub crossing: Option<usize>,
    #[arg(long, value_enum, default_value = "contract")]
    pub engine: EngineArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct FuzzArgs {
    pub file: PathBuf,
    /// Comma-separated move list from r1, p1, r2.
    #[arg(long, default_value = "r1,p1,r2")]
    pub moves: String,
    #[arg(long, default_value_t = 30)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct IngestArgs {
    /// KnotInfo CSV export with Name and PD Notation columns.
    pub csv: PathBuf,
    /// Knot name, e.g. 3_1 or 11n1.
    pub name: String,
}

/// What a command produced: a payload to print and a process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputEnvelope {
    pub format: OutputFormat,
    pub payload: String,
    pub exit_code: i32,
}

impl OutputEnvelope {
    fn ok(format: OutputFormat, payload: String) -> Self {
        OutputEnvelope {
            format,
            payload,
            exit_code: EXIT_OK,
        }
    }

    fn fail(code: i32, message: String) -> Self {
        OutputEnvelope {
            format: OutputFormat::Text,
            payload: message,
            exit_code: code,
        }
    }
}

fn diagram_error_exit(e: &DiagramError) -> i32 {
    match e {
        DiagramError::Parse(_) => EXIT_USAGE,
        _ => EXIT_VALIDATION,
    }
}

fn load_diagram(path: &Path) -> Result<PseudoDiagram, OutputEnvelope> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| OutputEnvelope::fail(EXIT_USAGE, format!("error: {}: {e}", path.display())))?;
    let parsed = if path.extension().is_some_and(|x| x == "json") {
        parse_pd_json(&content)
    } else {
        parse_pd_text(&content)
    };
    parsed.map_err(|e| OutputEnvelope::fail(diagram_error_exit(&e), format!("error: {e}")))
}

fn state_limit() -> usize {
    std::env::var(STATE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(bracket::DEFAULT_STATE_LIMIT)
}

fn compute_bracket(d: &PseudoDiagram, engine: Engine) -> Result<PseudoPoly, OutputEnvelope> {
    let b = match engine {
        Engine::Naive => bracket::bracket_naive_with_limit(d, state_limit())
            .map_err(|e| OutputEnvelope::fail(EXIT_VALIDATION, format!("error: {e}")))?,
        Engine::Contract => bracket::bracket_contract(d),
    };
    Ok(b)
}

pub fn run(cli: Cli) -> OutputEnvelope {
    match cli.command {
        Command::Bracket(args) => cmd_bracket(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Ingest(args) => cmd_ingest(args),
    }
}

fn cmd_bracket(args: BracketArgs) -> OutputEnvelope {
    let d = match load_diagram(&args.file) {
        Ok(d) => d,
        Err(e) => return e,
    };
    let mut poly = match compute_bracket(&d, args.engine.into()) {
        Ok(p) => p,
        Err(e) => return e,
    };
    if args.normalized {
        poly = poly.scale(&crate::polynomial::LaurentPoly::writhe_monomial(d.writhe()));
    }
    let payload = match args.format {
        OutputFormat::Text => poly.to_string(),
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "normalized": args.normalized,
            "writhe": d.writhe(),
            "polynomial": poly.to_json(),
        }))
        .expect("json serializes"),
    };
    OutputEnvelope::ok(args.format, payload)
}

fn obstruction_error_exit(e: &ObstructionError) -> i32 {
    match e {
        ObstructionError::Diagram(d) => diagram_error_exit(d),
        _ => EXIT_VALIDATION,
    }
}

fn cmd_scan(args: ScanArgs) -> OutputEnvelope {
    let d = match load_diagram(&args.file) {
        Ok(d) => d,
        Err(e) => return e,
    };
    let engine = args.engine.into();
    let reports = match args.crossing {
        Some(i) => obstruction::obstruct(&d, i, engine).map(|r| vec![r]),
        None => obstruction::scan(&d, engine),
    };
    let reports = match reports {
        Ok(r) => r,
        Err(e) => return OutputEnvelope::fail(obstruction_error_exit(&e), format!("error: {e}")),
    };
    let payload = match args.format {
        OutputFormat::Text => obstruction::render_table(&reports),
        OutputFormat::Json => serde_json::to_string_pretty(&serde_json::Value::Array(
            reports.iter().map(|r| r.to_json()).collect(),
        ))
        .expect("json serializes"),
    };
    OutputEnvelope::ok(args.format, payload)
}

fn cmd_fuzz(args: FuzzArgs) -> OutputEnvelope {
    let d = match load_diagram(&args.file) {
        Ok(d) => d,
        Err(e) => return e,
    };
    let allowed: Vec<MoveKind> = match moves::parse_move_tokens(&args.moves) {
        Ok(m) => m,
        Err(e) => return OutputEnvelope::fail(EXIT_USAGE, format!("error: {e}")),
    };
    let reference = bracket::normalized_bracket(&d, Engine::Contract)
        .expect("contract engine has no size limit");
    let trace = moves::random_move_walk_trace(&d, args.seed, args.steps, &allowed);
    let mut violation: Option<(usize, PseudoPoly)> = None;
    for (step, diagram) in trace.iter().enumerate().skip(1) {
        let value = bracket::normalized_bracket(diagram, Engine::Contract)
            .expect("contract engine has no size limit");
        if value != reference {
            violation = Some((step, value));
            break;
        }
    }
    let final_crossings = trace.last().expect("trace nonempty").crossing_count();
    match (&violation, args.format) {
        (None, OutputFormat::Text) => OutputEnvelope::ok(
            OutputFormat::Text,
            format!(
                "PASS: {} steps, normalized bracket invariant ({} -> {} crossings)\n{}",
                args.steps,
                d.crossing_count(),
                final_crossings,
                reference
            ),
        ),
        (None, OutputFormat::Json) => OutputEnvelope::ok(
            OutputFormat::Json,
            serde_json::to_string_pretty(&json!({
                "status": "pass",
                "steps": args.steps,
                "seed": args.seed,
                "final_crossings": final_crossings,
                "normalized_bracket": reference.to_json(),
            }))
            .expect("json serializes"),
        ),
        (Some((step, value)), format) => {
            let payload = match format {
                OutputFormat::Text => format!(
                    "VIOLATION at step {step}: normalized bracket changed\nexpected: {reference}\nfound:    {value}"
                ),
                OutputFormat::Json => serde_json::to_string_pretty(&json!({
                    "status": "violation",
                    "step": step,
                    "seed": args.seed,
                    "expected": reference.to_json(),
                    "found": value.to_json(),
                }))
                .expect("json serializes"),
            };
            OutputEnvelope {
                format,
                payload,
                exit_code: EXIT_VIOLATION,
            }
        }
    }
}

fn cmd_ingest(args: IngestArgs) -> OutputEnvelope {
    let csv = match std::fs::read_to_string(&args.csv) {
        Ok(c) => c,
        Err(e) => {
            return OutputEnvelope::fail(
                EXIT_USAGE,
                format!("error: {}: {e}", args.csv.display()),
            )
        }
    };
    let text = knotinfo::lookup_pd_notation(&csv, &args.name)
        .and_then(|pd| knotinfo::pd_notation_to_text(&pd));
    match text {
        Ok(t) => OutputEnvelope::ok(OutputFormat::Text, t),
        Err(e) => OutputEnvelope::fail(EXIT_USAGE, format!("error: {e}")),
    }
}
