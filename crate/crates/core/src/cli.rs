//! Command-line front end. Every command emits a report whose payload is a
//! pure function of the inputs and the seed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::code_search::{
    builtin, builtin_text, expected_enumerator, random_search, Predicate, SearchBudget,
    BUILTIN_NAMES, DEFAULT_SEED, DEFAULT_TRIALS,
};
use crate::disc_forms::{
    has_weight3_property, is_admissible, is_isotropic, q_value, Ambient, FormSpec,
};
use crate::gf3_linear::{membership, parse_matrix, weight_enumerator, TernaryCode, TernaryWord};
use crate::lattice_engine::{gram_base, line_configuration, overlattice, DiscReport};
use crate::polarization_planner::{degree_table, make_plan, make_plan_with, DegreeQuery, SType};
use crate::separability_solver::{solve, t_bound_audit, SepSystem};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "tencusps", version, about = "Ternary codes, overlattices and polarizations with ten A2 cusps")]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "TENCUSPS_SEED")]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a plain-text summary.
    #[arg(long, global = true)]
    text: bool,
    /// Trial budget for randomized commands.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute the built-in codes' weight enumerators and predicates.
    VerifyTables(VerifyTablesArgs),
    /// Randomized search for isotropic codes, classified up to equivalence.
    SearchCodes(SearchArgs),
    /// Certified polarization plan for a degree and Artin invariant.
    Plan(PlanArgs),
    /// Admissible degrees up to a bound.
    Degrees(DegreesArgs),
    /// Feasibility of the separability system for a code.
    Separability(SeparabilityArgs),
    /// Discriminant data of the base lattice or an overlattice.
    Lattice(LatticeArgs),
    /// The lattice and code of the triple cover W³ = (x³ − x)(y³ − y).
    LineConfig,
    /// Built-in code tables.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
}

#[derive(Debug, Subcommand)]
enum CodesAction {
    /// Print a built-in generator matrix in the text format.
    Export { name: String },
    /// List the built-in codes.
    List,
}

#[derive(Debug, Args)]
struct VerifyTablesArgs {
    /// Replace a built-in matrix by a file, as NAME=PATH (repeatable).
    #[arg(long = "override", value_name = "NAME=PATH")]
    overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AmbientArg {
    U1,
    U3,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PredicateArg {
    Weight3,
    Minwt6,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "u3")]
    ambient: AmbientArg,
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, value_enum)]
    predicate: Option<PredicateArg>,
    /// Stop once this many classes are found.
    #[arg(long)]
    target: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum STypeArg {
    U1,
    U3,
}

impl From<STypeArg> for SType {
    fn from(s: STypeArg) -> Self {
        match s {
            STypeArg::U1 => SType::U1,
            STypeArg::U3 => SType::U3,
        }
    }
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long)]
    degree: u64,
    #[arg(long)]
    sigma: u32,
    #[arg(long, value_enum)]
    s_type: STypeArg,
    /// Explicit a for h = ae + bf (requires --b).
    #[arg(long, requires = "b")]
    a: Option<u64>,
    #[arg(long, requires = "a")]
    b: Option<u64>,
}

#[derive(Debug, Args)]
struct DegreesArgs {
    #[arg(long, value_enum)]
    s_type: STypeArg,
    #[arg(long)]
    max: u64,
}

#[derive(Debug, Args)]
struct SeparabilityArgs {
    /// Built-in name (C1..C7) or path to a matrix file.
    #[arg(long)]
    code: String,
    /// Also enumerate every witness with t ≤ 8.
    #[arg(long)]
    audit: bool,
}

#[derive(Debug, Args)]
struct LatticeArgs {
    /// Built-in name or matrix file; omit for the base lattice.
    #[arg(long)]
    overlattice: Option<String>,
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Include the Gram matrix.
    #[arg(long)]
    gram: bool,
}

/// The replayable report envelope.
#[derive(Debug, Serialize)]
pub struct ReportDoc {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub timestamp: String,
    pub payload: Value,
    pub elapsed_ms: u128,
}

/// A command failure: usage problems exit 2, disagreements exit 1.
#[derive(Debug)]
enum Failure {
    Usage(String),
}

struct Outcome {
    payload: Value,
    text: Vec<String>,
    agrees: bool,
}

fn load_code(spec: &str) -> Result<(TernaryCode, Option<String>), Failure> {
    if BUILTIN_NAMES.contains(&spec) {
        return Ok((builtin(spec).expect("known name"), Some(spec.to_string())));
    }
    let rows = read_rows(Path::new(spec))?;
    let width = rows.first().map_or(12, |r| r.width());
    let code = TernaryCode::from_rows(width, &rows).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
    Ok((code, None))
}

fn read_rows(path: &Path) -> Result<Vec<TernaryWord>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn matrix_strings(code: &TernaryCode) -> Vec<String> {
    code.rows().iter().map(|r| r.to_string()).collect()
}

fn cmd_verify_tables(args: &VerifyTablesArgs) -> Result<Outcome, Failure> {
    let mut overrides: Vec<(String, PathBuf)> = Vec::new();
    for o in &args.overrides {
        let (name, path) = o
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("override {o:?} is not NAME=PATH")))?;
        if !BUILTIN_NAMES.contains(&name) {
            return Err(Failure::Usage(format!("unknown code {name:?}")));
        }
        overrides.push((name.to_string(), PathBuf::from(path)));
    }
    let mut rows_out = Vec::new();
    let mut text = Vec::new();
    let mut all_ok = true;
    for name in BUILTIN_NAMES {
        let reference = builtin(name).expect("builtin");
        let (ambient, predicate) = if name == "K" {
            (Ambient::A10, Predicate::MinWt6)
        } else {
            (Ambient::A10xU3, Predicate::Weight3)
        };
        let source_rows = match overrides.iter().find(|(n, _)| n == name) {
            Some((_, path)) => read_rows(path)?,
            None => parse_matrix(builtin_text(name).expect("builtin")).expect("parses"),
        };
        if source_rows.iter().any(|r| r.width() != ambient.word_width()) {
            return Err(Failure::Usage(format!("{name}: rows must have width {}", ambient.word_width())));
        }
        let code = TernaryCode::from_rows(ambient.word_width(), &source_rows).expect("widths checked");
        let spec = FormSpec::new(ambient);
        let we = weight_enumerator(&code);
        let expected = expected_enumerator(name).expect("builtin");
        let isotropic = is_isotropic(&spec, &code).expect("width");
        let admissible = is_admissible(&code);
        let property = predicate.holds_for_code(&code);
        let weight3 = ambient == Ambient::A10xU3 && has_weight3_property(&code);
        // rows (1-based) that are anisotropic or leave the reference span
        let failing_rows: Vec<usize> = (0..source_rows.len())
            .filter(|&i| {
                let r = &source_rows[i];
                !q_value(&spec, r).expect("width").is_zero() || !membership(&reference, r).unwrap_or(false)
            })
            .map(|i| i + 1)
            .collect();
        let mut non_orthogonal_pairs = Vec::new();
        for i in 0..source_rows.len() {
            for j in i + 1..source_rows.len() {
                if !pairs_to_zero(ambient, &source_rows[i], &source_rows[j]) {
                    non_orthogonal_pairs.push((i + 1, j + 1));
                }
            }
        }
        let ok = we == expected
            && isotropic
            && admissible
            && property
            && code.dim() == reference.dim()
            && failing_rows.is_empty()
            && non_orthogonal_pairs.is_empty();
        all_ok &= ok;
        let mut line = format!("{name}: {we}  [{}]", if ok { "ok" } else { "MISMATCH" });
        if we != expected {
            line.push_str(&format!(" expected {expected}"));
        }
        if !failing_rows.is_empty() {
            line.push_str(&format!(" failing rows {failing_rows:?}"));
        }
        text.push(line);
        rows_out.push(json!({
            "name": name,
            "dim": code.dim(),
            "enumerator": we.to_string(),
            "expected": expected.to_string(),
            "enumerator_matches": we == expected,
            "isotropic": isotropic,
            "admissible": admissible,
            "predicate": predicate,
            "predicate_holds": property,
            "weight3": weight3,
            "min_weight": we.min_nonzero_weight(),
            "failing_rows": failing_rows,
            "non_orthogonal_pairs": non_orthogonal_pairs,
            "ok": ok,
        }));
    }
    Ok(Outcome { payload: json!({ "codes": rows_out, "all_match": all_ok }), text, agrees: all_ok })
}

fn pairs_to_zero(ambient: Ambient, u: &TernaryWord, v: &TernaryWord) -> bool {
    let spec = FormSpec::new(ambient);
    let s = u.add(v);
    let d = q_value(&spec, &s).expect("width").ratio()
        - q_value(&spec, u).expect("width").ratio()
        - q_value(&spec, v).expect("width").ratio();
    // 2b(u, v) ∈ 2ℤ
    (d / num_rational::Ratio::from_integer(2)).is_integer()
}

fn cmd_search(args: &SearchArgs, seed: u64, budget: Option<u64>) -> Result<Outcome, Failure> {
    let (ambient, default_pred) = match args.ambient {
        AmbientArg::U3 => (Ambient::A10xU3, Predicate::Weight3),
        AmbientArg::U1 => (Ambient::A10, Predicate::MinWt6),
    };
    let predicate = match args.predicate {
        Some(PredicateArg::Weight3) => Predicate::Weight3,
        Some(PredicateArg::Minwt6) => Predicate::MinWt6,
        None => default_pred,
    };
    let b = SearchBudget {
        seed,
        max_trials: budget.unwrap_or(DEFAULT_TRIALS),
        target_classes: args.target.unwrap_or(usize::MAX),
    };
    let out = random_search(&FormSpec::new(ambient), args.dim, predicate, &b)
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let known: Vec<(&str, _)> = BUILTIN_NAMES
        .iter()
        .filter(|n| (ambient == Ambient::A10) == (**n == "K"))
        .map(|n| (*n, expected_enumerator(n).expect("builtin")))
        .collect();
    let mut classes = Vec::new();
    let mut text = vec![format!(
        "seed {seed}: {} classes from {} trials ({} codes built)",
        out.classes.len(),
        out.trials,
        out.candidates
    )];
    let mut notable = Vec::new();
    for c in &out.classes {
        let we = weight_enumerator(c);
        let matches: Option<&str> = known.iter().find(|(_, e)| *e == we).map(|(n, _)| *n);
        if matches.is_none() && args.dim == 5 && ambient == Ambient::A10xU3 {
            notable.push(we.to_string());
        }
        text.push(format!("  {we}  {}", matches.unwrap_or("(new)")));
        classes.push(json!({
            "matrix": matrix_strings(c),
            "enumerator": we.to_string(),
            "matches": matches,
        }));
    }
    let payload = json!({
        "seed": seed,
        "trials": out.trials,
        "candidates": out.candidates,
        "ambient": ambient,
        "dim": args.dim,
        "predicate": predicate,
        "classes": classes,
        "notable_new_classes": notable,
    });
    Ok(Outcome { payload, text, agrees: true })
}

fn cmd_plan(args: &PlanArgs) -> Result<Outcome, Failure> {
    let query = DegreeQuery { d: args.degree, sigma: args.sigma, s_type: args.s_type.into() };
    let plan = match (args.a, args.b) {
        (Some(a), Some(b)) => Some(make_plan_with(&query, a, b).map_err(|e| Failure::Usage(e.to_string()))?),
        _ => make_plan(&query).map_err(|e| Failure::Usage(e.to_string()))?,
    };
    Ok(match plan {
        None => Outcome {
            payload: json!({ "query": query, "admissible": false, "plan": null }),
            text: vec![format!("degree {} is not admissible for {:?}", query.d, query.s_type)],
            agrees: true,
        },
        Some(p) => {
            let text = vec![
                format!("h = {}e + {}f, h² = {}", p.a, p.b, p.certs.h_squared),
                format!("code of dimension {}:", p.code.dim()),
                p.code.to_text(),
                format!(
                    "extra roots {}, short u {}, half vector {}, det {} -> {}",
                    p.certs.roots.count_extra,
                    p.certs.roots.found_u,
                    p.certs.roots.found_half,
                    p.certs.overlattice.det,
                    if p.certified { "certified" } else { "NOT certified" }
                ),
            ];
            Outcome {
                payload: json!({
                    "query": query,
                    "admissible": true,
                    "a": p.a,
                    "b": p.b,
                    "code_matrix": matrix_strings(&p.code),
                    "certs": p.certs,
                    "certified": p.certified,
                }),
                text,
                agrees: p.certified,
            }
        }
    })
}

fn cmd_degrees(args: &DegreesArgs) -> Result<Outcome, Failure> {
    if args.max > 1_000_000 {
        return Err(Failure::Usage("--max must be at most 1000000".into()));
    }
    let list = degree_table(args.s_type.into(), args.max);
    let text = vec![list.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")];
    Ok(Outcome { payload: json!({ "s_type": SType::from(args.s_type), "max": args.max, "degrees": list }), text, agrees: true })
}

const SEPARABILITY_NOTE: &str = "Infeasibility of this system forces the projection to be inseparable; \
feasibility does not decide whether a separable projection exists.";

fn cmd_separability(args: &SeparabilityArgs) -> Result<Outcome, Failure> {
    let (code, name) = load_code(&args.code)?;
    let system = SepSystem::new(code).map_err(|e| Failure::Usage(e.to_string()))?;
    let out = solve(&system);
    let expected = match name.as_deref() {
        Some("C1") | Some("C2") => Some(true),
        Some("C3" | "C4" | "C5" | "C6" | "C7") => Some(false),
        _ => None,
    };
    let agrees = expected.is_none_or(|e| e == out.feasible());
    let mut payload = json!({
        "code": args.code,
        "feasible": out.feasible(),
        "witness": out.witness.as_ref().map(|w| w.to_rows()),
        "nodes_explored": out.nodes_explored,
        "note": SEPARABILITY_NOTE,
    });
    if name.as_deref() == Some("C2") {
        payload["expectation"] = json!("feasible (inferred; no witness is listed for C2)");
    }
    let mut text = vec![format!(
        "{}: {} ({} nodes)",
        args.code,
        if out.feasible() { "feasible" } else { "infeasible" },
        out.nodes_explored
    )];
    if let Some(w) = &out.witness {
        for r in w.to_rows() {
            text.push(format!("  {r:?}"));
        }
    }
    if args.audit {
        let audit = t_bound_audit(&system);
        text.push(format!("witnesses by t (t ≤ 8): {:?}", audit.witnesses_by_t));
        payload["t_bound_audit"] = serde_json::to_value(audit).expect("serializable");
    }
    text.push(SEPARABILITY_NOTE.to_string());
    Ok(Outcome { payload, text, agrees })
}

fn cmd_lattice(args: &LatticeArgs) -> Result<Outcome, Failure> {
    let lattice = match &args.overlattice {
        None => gram_base(args.m).map_err(|e| Failure::Usage(e.to_string()))?,
        Some(spec) => {
            let (code, _) = load_code(spec)?;
            overlattice(args.m, &code).map_err(|e| Failure::Usage(e.to_string()))?.lattice
        }
    };
    let report = DiscReport::of(&lattice).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut payload = serde_json::to_value(&report).expect("serializable");
    let text = vec![format!(
        "det {}, elementary divisors {:?}, signature {:?}, even {}",
        report.det, report.elementary_divisors, report.signature, report.even
    )];
    if args.gram {
        payload["gram"] = serde_json::to_value(lattice.to_json()).expect("serializable");
    }
    Ok(Outcome { payload, text, agrees: true })
}

fn cmd_line_configuration() -> Result<Outcome, Failure> {
    let r = line_configuration().map_err(|e| Failure::Usage(e.to_string()))?;
    let text = vec![
        format!("span discriminant {}", r.discriminant),
        format!("words: {}", r.words.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(", ")),
        format!("code dimension {}", r.code_dim),
        format!("equivalent to C1: {}", r.witness_to_c1.is_some()),
    ];
    let agrees = r.matches_expected();
    Ok(Outcome { payload: serde_json::to_value(&r).expect("serializable"), text, agrees })
}

fn cmd_codes(action: &CodesAction) -> Result<Outcome, Failure> {
    match action {
        CodesAction::Export { name } => {
            let text = builtin_text(name).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Outcome {
                payload: json!({ "name": name, "matrix": text.lines().collect::<Vec<_>>() }),
                text: vec![text.trim_end().to_string()],
                agrees: true,
            })
        }
        CodesAction::List => Ok(Outcome {
            payload: json!({ "codes": BUILTIN_NAMES }),
            text: vec![BUILTIN_NAMES.join(" ")],
            agrees: true,
        }),
    }
}

/// Parses arguments, runs the command, prints the report and returns the
/// exit code (0 agree, 1 disagreement, 2 usage error).
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let start = Instant::now();
    let result = match &cli.command {
        Command::VerifyTables(a) => cmd_verify_tables(a),
        Command::SearchCodes(a) => cmd_search(a, seed, cli.budget),
        Command::Plan(a) => cmd_plan(a),
        Command::Degrees(a) => cmd_degrees(a),
        Command::Separability(a) => cmd_separability(a),
        Command::Lattice(a) => cmd_lattice(a),
        Command::LineConfig => cmd_line_configuration(),
        Command::Codes { action } => cmd_codes(action),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if cli.text {
        for line in &outcome.text {
            println!("{line}");
        }
    } else {
        let doc = ReportDoc {
            command: argv.iter().map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" "),
            version: VERSION.to_string(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339(),
            payload: outcome.payload,
            elapsed_ms: start.elapsed().as_millis(),
        };
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    }
    if outcome.agrees {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
