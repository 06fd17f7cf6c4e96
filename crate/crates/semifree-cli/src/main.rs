//! `semifree`: verify, enumerate and classify fixed-point data of semi-free
//! circle actions on symplectic 8-manifolds with `b₂ = 1`.
//!
//! Exit codes: 0 when every check passes, 1 on a constraint failure, 2 on
//! a usage or input error.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use semifree::classifier::enumerate::{
    admissible_dim_pairs, enumerate_case, EnumerationError, EnumerationResult, Member, ShapeStatus,
};
use semifree::classifier::fano::{
    classify_fano, default_fano_table, default_table_hash, FanoClassification, FanoFamilyRecord,
};
use semifree::classifier::{catalog, catalog_entry, evaluate, Evaluation, Mode};
use semifree::model::FixedPointData;
use serde::Serialize;
use std::fmt::Write as _;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "semifree", version, about = "Fixed-point data engine for semi-free circle actions on symplectic 8-manifolds with b2 = 1")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a fixed-point data file.
    Verify { file: String },
    /// Search for admissible fixed-point data of one shape, or of all.
    Enumerate {
        /// `d1,d2` or `all`.
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 14)]
        max_b4: u32,
    },
    /// Filter the positive-definite prime Fano fourfolds of index > 1.
    ClassifyFano {
        /// JSON list of family records; the bundled table when omitted.
        #[arg(long)]
        table: Option<String>,
    },
    /// Print a catalog entry, or list the catalog.
    Catalog {
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum, default_value_t = Emit::File)]
        emit: Emit,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    File,
    Report,
}

/// Input and usage problems, which exit with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    fano_table_sha256: String,
    command: &'static str,
    passed: bool,
    result: T,
}

struct Output {
    text: String,
    passed: bool,
}

fn header() -> String {
    format!("semifree {VERSION} (fano table sha256 {})\n", default_table_hash())
}

fn emit<T: Serialize>(format: Format, command: &'static str, result: &T, text: String, passed: bool) -> Output {
    let text = match format {
        Format::Text => header() + &text,
        Format::Json => {
            let env = Envelope {
                tool: "semifree",
                version: VERSION,
                fano_table_sha256: default_table_hash(),
                command,
                passed,
                result,
            };
            serde_json::to_string_pretty(&env).expect("reports serialize") + "\n"
        }
    };
    Output { text, passed }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(if out.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify { file } => {
            let text = std::fs::read_to_string(file).with_context(|| format!("reading {file}"))?;
            let data = FixedPointData::from_json(&text).map_err(|e| usage(format!("{file}: {e}")))?;
            Ok(verify(cli.format, &data))
        }
        Command::Enumerate { shape, max_b4 } => cmd_enumerate(cli.format, shape, *max_b4),
        Command::ClassifyFano { table } => cmd_classify(cli.format, table.as_deref()),
        Command::Catalog { name, emit: what } => cmd_catalog(cli.format, name.as_deref(), *what),
    }
}

fn verify(format: Format, data: &FixedPointData) -> Output {
    let ev = evaluate(data, Mode::Full);
    let passed = ev.passed();
    emit(format, "verify", &ev, render_evaluation(&ev), passed)
}

fn render_evaluation(ev: &Evaluation) -> String {
    let mut s = String::new();
    for sec in &ev.sections {
        let _ = writeln!(s, "[{}]", sec.title);
        for l in &sec.lines {
            let _ = writeln!(s, "  {l}");
        }
        let _ = write!(s, "{}", sec.checks);
    }
    if let Some(i) = ev.index {
        let _ = writeln!(s, "index: {i}");
    }
    if let Some(v) = ev.profile_volume {
        let _ = writeln!(s, "volume: {v}");
    }
    let fails = ev.failures();
    if fails.is_empty() {
        let _ = writeln!(s, "verdict: PASS");
    } else {
        let ids: Vec<&str> = fails.iter().map(|c| c.id).collect();
        let _ = writeln!(s, "verdict: FAIL ({})", ids.join(", "));
    }
    s
}

fn parse_shape(text: &str) -> Result<(u32, u32)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if let [a, b] = parts.as_slice() {
        if let (Ok(a), Ok(b)) = (a.parse(), b.parse()) {
            return Ok((a, b));
        }
    }
    Err(usage(format!("--shape expects `d1,d2` or `all`, got `{text}`")))
}

fn shape_table(statuses: &[ShapeStatus]) -> String {
    let mut s = String::new();
    for st in statuses {
        let (a, b) = st.shape;
        match &st.rejection {
            None => {
                let _ = writeln!(s, "  ({a},{b}) admissible");
            }
            Some(c) => {
                let _ = writeln!(s, "  ({a},{b}) {c}");
            }
        }
    }
    s
}

fn render_member(s: &mut String, m: &Member, indent: &str) {
    let index = m.index.map_or("-".to_string(), |i| i.to_string());
    let volume = m.volume.map_or("-".to_string(), |v| v.to_string());
    let half = m.half_volume.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(
        s,
        "{indent}N2 = {}, b4 = {}, index = {index}, DH two-sided = {}, volume = {volume}, half-volume formula = {half}",
        m.n2,
        m.b4,
        if m.profile_identity { "yes" } else { "no" },
    );
    for c in &m.components {
        let _ = writeln!(s, "{indent}  {c}");
    }
}

fn render_enumeration(r: &EnumerationResult) -> String {
    let mut s = String::new();
    let (a, b) = r.shape;
    let count = r.members().count();
    let _ = writeln!(
        s,
        "shape ({a},{b}), b4 <= {}: {} famil{}, {count} member{}, {} candidates checked",
        r.b4_max,
        r.families.len(),
        if r.families.len() == 1 { "y" } else { "ies" },
        if count == 1 { "" } else { "s" },
        r.candidates_checked
    );
    for f in &r.families {
        let _ = writeln!(s, "  family {}", f.structure);
        for m in &f.members {
            render_member(&mut s, m, "    ");
        }
    }
    if !r.index_rejected.is_empty() {
        let _ = writeln!(s, "  rejected by index rules only:");
        for m in &r.index_rejected {
            render_member(&mut s, m, "    ");
            for c in m.checks.failures() {
                let _ = writeln!(s, "      {c}");
            }
        }
    }
    s
}

#[derive(Serialize)]
struct AllShapes {
    shapes: Vec<ShapeStatus>,
    results: Vec<EnumerationResult>,
    max_b4: Option<u32>,
}

fn cmd_enumerate(format: Format, shape: &str, max_b4: u32) -> Result<Output> {
    let statuses = admissible_dim_pairs();
    if shape.trim() == "all" {
        let results: Vec<EnumerationResult> = statuses
            .iter()
            .filter(|s| s.admissible())
            .map(|s| enumerate_case(s.shape, max_b4).expect("shape is admissible"))
            .collect();
        let max = results.iter().filter_map(EnumerationResult::max_b4).max();
        let mut text = String::from("shapes:\n") + &shape_table(&statuses);
        for r in &results {
            text += &render_enumeration(r);
        }
        let _ = writeln!(text, "max b4 over all families: {}", max.map_or("-".into(), |m| m.to_string()));
        let doc = AllShapes {
            shapes: statuses,
            results,
            max_b4: max,
        };
        return Ok(emit(format, "enumerate", &doc, text, true));
    }
    let pair = parse_shape(shape)?;
    match enumerate_case(pair, max_b4) {
        Ok(r) => {
            let text = render_enumeration(&r);
            Ok(emit(format, "enumerate", &r, text, true))
        }
        Err(e @ (EnumerationError::Inadmissible(..) | EnumerationError::NotAShape(..))) => {
            Err(usage(format!("{e}\nshapes:\n{}", shape_table(&statuses).trim_end())))
        }
    }
}

fn cmd_classify(format: Format, table: Option<&str>) -> Result<Output> {
    let records: Vec<FanoFamilyRecord> = match table {
        None => default_fano_table(),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{path}: {e}")))?
        }
    };
    let c = classify_fano(&records).map_err(|e| usage(e.to_string()))?;
    let text = render_classification(&c);
    // Rejections are the expected outcome here, not a failure of the run.
    Ok(emit(format, "classify-fano", &c, text, true))
}

fn render_classification(c: &FanoClassification) -> String {
    let mut s = String::new();
    for v in &c.verdicts {
        let _ = writeln!(s, "{}: {}", v.name, if v.survives { "survives" } else { "rejected" });
        let _ = write!(s, "{}", v.checks);
    }
    let _ = writeln!(s, "survivors: {{{}}}", c.survivors.join(", "));
    s
}

fn cmd_catalog(format: Format, name: Option<&str>, what: Emit) -> Result<Output> {
    let Some(name) = name else {
        let entries = catalog();
        let mut text = String::new();
        for e in &entries {
            let _ = writeln!(text, "{} ({}, case {})", e.name, e.family, e.case);
        }
        return Ok(emit(format, "catalog", &entries, text, true));
    };
    let Some(entry) = catalog_entry(name) else {
        let names: Vec<&str> = catalog().iter().map(|e| e.name).collect();
        bail!(usage(format!("no catalog entry `{name}`; known: {}", names.join(", "))));
    };
    Ok(match what {
        // The data file itself, independent of --format.
        Emit::File => Output {
            text: entry.data.to_json() + "\n",
            passed: true,
        },
        Emit::Report => verify(format, &entry.data),
    })
}
