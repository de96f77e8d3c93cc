//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 parse or usage
//! error, 3 eigenvalues outside the field, 4 ordering search over budget,
//! 5 a fast path disagreed with an oracle, 6 irreducibility undetermined
//! under `--require-irreducible`. Errors are written to stderr as one JSON
//! object per line.

pub mod document;
pub mod report;

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldElement, FieldSpec};
use crate::gen::{conjugate, gen_reducible, gen_split_form_with, gen_tridiagonal_form, Fill, GenError, SplitFormParams};
use crate::modstruct::{IrreducibilityOptions, IrreducibilityStatus};
use crate::oracle::{compare_with_oracles, DEFAULT_SUBSPACE_BUDGET};
use crate::pair::{
    analyze_pair, is_tridiagonal_pair, split_from_formula, split_violations, AnalysisOptions, OrderedEigenData,
    PairError, SplitDecomposition, DEFAULT_MAX_ORDERINGS,
};
use crate::spectral::{eigen_structure, SpectralError};

use document::{instance_to_json, parse_split, split_to_json, DocumentJson, PairDocument, SplitJson};
use report::{violations_json, AnalyzeReport, CheckSplitReport, OracleJson};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("irreducibility could not be decided and --require-irreducible is set")]
    Undetermined,
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Gen(GenError),
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Pair(p) => CliError::Pair(p),
            GenError::Spectral(s) => CliError::Pair(PairError::Spectral(s)),
            other => CliError::Gen(other),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Pair(PairError::Spectral(e))
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "ParseError",
            CliError::Usage(_) => "UsageError",
            CliError::Undetermined => "IrreducibilityUndetermined",
            CliError::Gen(_) => "GenerationError",
            CliError::Pair(p) => match p {
                PairError::Spectral(SpectralError::EigenvaluesOutsideField { .. }) => "EigenvaluesOutsideField",
                PairError::SearchBudgetExceeded { .. } => "SearchBudgetExceeded",
                PairError::OracleDisagreement(_) => "OracleDisagreement",
                PairError::ShapeMismatch(_) => "ParseError",
                _ => "InvalidInput",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "EigenvaluesOutsideField" => 3,
            "SearchBudgetExceeded" => 4,
            "OracleDisagreement" => 5,
            "IrreducibilityUndetermined" => 6,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    index: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
struct ErrorJson {
    error: ErrorBody,
}

impl ErrorJson {
    fn new(e: &CliError, index: Option<usize>) -> Self {
        ErrorJson {
            error: ErrorBody { kind: e.kind(), message: e.to_string(), exit_code: e.exit_code(), index },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Cap on the number of orderings of one side's eigenspaces
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ORDERINGS)]
    pub max_orderings: u64,
    /// Seed for randomized steps (generation, MeatAxe draws)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exit 6 instead of reporting when irreducibility is undetermined
    #[arg(long, global = true)]
    pub require_irreducible: bool,
    /// Treat the input as a JSON array of documents
    #[arg(long, global = true)]
    pub batch: bool,
}

impl Flags {
    pub fn analysis_options(&self) -> AnalysisOptions {
        AnalysisOptions {
            max_orderings: self.max_orderings,
            irreducibility: IrreducibilityOptions { seed: self.seed, ..IrreducibilityOptions::default() },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    SplitForm,
    TridiagonalForm,
    ReducibleSum,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = GenKind::SplitForm)]
    pub kind: GenKind,
    /// "Q", "GF(p)" or a prime p
    #[arg(long, default_value = "Q")]
    pub field: String,
    /// Comma-separated block dimensions; repeat for each block of a reducible sum
    #[arg(long, required = true)]
    pub dims: Vec<String>,
    /// Comma-separated eigenvalues of A (default 0,1,...,d)
    #[arg(long)]
    pub theta: Option<String>,
    /// Comma-separated eigenvalues of A* (default 0,1,...,d)
    #[arg(long)]
    pub theta_star: Option<String>,
    #[arg(long, value_enum, default_value_t = FillArg::Random)]
    pub fill: FillArg,
    /// Apply a random change of basis
    #[arg(long)]
    pub conjugate: bool,
    /// Emit this many instances with consecutive seeds, as a JSON array
    #[arg(long)]
    pub count: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FillArg {
    Random,
    Ones,
    Sparse,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Eigen data, Hessenberg orderings, irreducibility, splits, tridiagonality
    Analyze {
        /// Document path, or - for stdin
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// Emit a seeded instance with its ground truth
    Generate(GenerateArgs),
    /// Verify a candidate split against the pair
    CheckSplit {
        #[arg(default_value = "-")]
        input: PathBuf,
        /// Split JSON file; defaults to the document's truth split
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Compare fast paths against brute-force oracles
    Oracle {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SUBSPACE_BUDGET)]
        subspace_budget: u64,
    },
}

#[derive(Debug, Clone, Parser)]
#[command(name = "hessenberg", version, about = "Exact analysis of Hessenberg and tridiagonal pairs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn cmd_analyze(doc: &PairDocument, flags: &Flags) -> Result<AnalyzeReport, CliError> {
    let r = analyze_pair(&doc.a, &doc.astar, &flags.analysis_options())?;
    if flags.require_irreducible && r.irreducibility.status == IrreducibilityStatus::Undetermined {
        return Err(CliError::Undetermined);
    }
    Ok(AnalyzeReport::new(&r))
}

/// `verify_split` on the candidate, and comparison with the intersection
/// formula for the orderings named by its eigenvalue sequences.
pub fn cmd_check_split(doc: &PairDocument, candidate: &SplitDecomposition) -> Result<CheckSplitReport, CliError> {
    let violations = split_violations(&doc.a, &doc.astar, candidate)?;
    let valid = violations.is_empty();
    // Eigenvalues outside the field only rule out the formula, not the check.
    let formula = match (eigen_structure(&doc.a), eigen_structure(&doc.astar)) {
        (Ok(ea), Ok(eb)) if ea.diagonalizable && eb.diagonalizable => match (
            OrderedEigenData::from_thetas(&ea, &candidate.theta),
            OrderedEigenData::from_thetas(&eb, &candidate.theta_star),
        ) {
            (Ok(oa), Ok(ob)) if oa.d() == ob.d() => Some(split_from_formula(&oa, &ob)?),
            _ => None,
        },
        _ => None,
    };
    let matches_formula = formula.as_ref().map(|f| f == candidate);
    if valid && matches_formula != Some(true) {
        return Err(PairError::OracleDisagreement(
            "a valid split differs from the intersection formula for its orderings".into(),
        )
        .into());
    }
    Ok(CheckSplitReport {
        valid,
        violations: violations_json(&violations),
        formula_split: formula.as_ref().map(split_to_json),
        matches_formula,
    })
}

pub fn cmd_oracle(doc: &PairDocument, flags: &Flags, subspace_budget: u64) -> Result<OracleJson, CliError> {
    let opts = flags.analysis_options();
    let report = compare_with_oracles(&doc.a, &doc.astar, &opts, subspace_budget)?;
    if flags.require_irreducible && report.fast_irreducibility == IrreducibilityStatus::Undetermined {
        return Err(CliError::Undetermined);
    }
    let tridiagonal = is_tridiagonal_pair(&doc.a, &doc.astar, &opts)?.status;
    if !report.all_agree() {
        return Err(PairError::OracleDisagreement(format!(
            "orderings agree: {}, irreducibility agrees: {:?}",
            report.orderings_agree, report.irreducibility_agrees
        ))
        .into());
    }
    Ok(OracleJson { all_agree: report.all_agree(), report, tridiagonal })
}

pub fn parse_field(text: &str) -> Result<FieldSpec, CliError> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::rationals());
    }
    let digits = t
        .strip_prefix("GF(")
        .or_else(|| t.strip_prefix("gf("))
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(t);
    let p: u64 = digits.parse().map_err(|_| CliError::Usage(format!("unknown field {text:?}")))?;
    FieldSpec::prime(p).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_list<T>(text: &str, f: impl Fn(&str) -> Result<T, CliError>) -> Result<Vec<T>, CliError> {
    text.split(',').map(|s| f(s.trim())).collect()
}

fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    parse_list(text, |s| s.parse().map_err(|_| CliError::Usage(format!("bad dimension {s:?}"))))
}

fn parse_thetas(spec: FieldSpec, text: Option<&str>, d: usize) -> Result<Vec<FieldElement>, CliError> {
    match text {
        None => Ok((0..=d as i64).map(|v| spec.from_i64(v)).collect()),
        Some(t) => parse_list(t, |s| FieldElement::parse(spec, s).map_err(|e| CliError::Usage(e.to_string()))),
    }
}

pub fn cmd_generate(args: &GenerateArgs, seed: u64) -> Result<DocumentJson, CliError> {
    let spec = parse_field(&args.field)?;
    let dims = args.dims.iter().map(|d| parse_dims(d)).collect::<Result<Vec<_>, _>>()?;
    let d = dims[0].len().saturating_sub(1);
    let theta = parse_thetas(spec, args.theta.as_deref(), d)?;
    let theta_star = parse_thetas(spec, args.theta_star.as_deref(), d)?;
    if args.kind != GenKind::ReducibleSum && dims.len() != 1 {
        return Err(CliError::Usage("--dims may be repeated only for reducible-sum".into()));
    }
    let fill = match args.fill {
        FillArg::Random => Fill::Random,
        FillArg::Ones => Fill::Ones,
        FillArg::Sparse => Fill::Sparse,
    };
    let inst = match args.kind {
        GenKind::SplitForm => gen_split_form_with(spec, &dims[0], &theta, &theta_star, fill, seed)?,
        GenKind::TridiagonalForm => gen_tridiagonal_form(spec, &dims[0], &theta, &theta_star, seed)?,
        GenKind::ReducibleSum => {
            let parts: Vec<SplitFormParams> = dims
                .iter()
                .map(|ds| SplitFormParams { dims: ds.clone(), theta: theta.clone(), theta_star: theta_star.clone() })
                .collect();
            gen_reducible(spec, &parts, seed)?
        }
    };
    let inst = if args.conjugate { conjugate(&inst, seed)? } else { inst };
    Ok(instance_to_json(&inst))
}

fn read_input(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| CliError::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

fn parse_documents(text: &str, batch: bool) -> Result<Vec<Result<PairDocument, CliError>>, CliError> {
    if batch {
        let raw: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(raw
            .into_iter()
            .map(|v| {
                serde_json::from_value::<DocumentJson>(v)
                    .map_err(|e| CliError::Parse(e.to_string()))
                    .and_then(|d| d.validate())
            })
            .collect())
    } else {
        Ok(vec![document::parse_document(text)])
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
enum Output {
    Analyze(Box<AnalyzeReport>),
    CheckSplit(CheckSplitReport),
    Oracle(OracleJson),
    Error(ErrorJson),
}

impl Output {
    fn to_text(&self) -> String {
        match self {
            Output::Analyze(r) => r.to_text(),
            Output::CheckSplit(r) => r.to_text(),
            Output::Oracle(r) => r.to_text(),
            Output::Error(e) => format!("error: {} ({})\n", e.error.message, e.error.kind),
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

fn error_outcome(e: &CliError) -> Outcome {
    Outcome {
        stdout: String::new(),
        stderr: serde_json::to_string(&ErrorJson::new(e, None)).expect("error serializes") + "\n",
        code: e.exit_code(),
    }
}

/// Runs one parsed invocation. Output depends only on the arguments and
/// the input bytes.
pub fn run(cli: &Cli, stdin: &mut dyn Read) -> Outcome {
    match run_inner(cli, stdin) {
        Ok(o) => o,
        Err(e) => error_outcome(&e),
    }
}

fn run_inner(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let flags = &cli.flags;
    let (input, candidate) = match &cli.command {
        Command::Generate(args) => return generate_outcome(args, flags),
        Command::Analyze { input } | Command::Oracle { input, .. } => (input, None),
        Command::CheckSplit { input, candidate } => (input, candidate.as_ref()),
    };
    let text = read_input(input, stdin)?;
    let candidate = match candidate {
        Some(_) if flags.batch => {
            return Err(CliError::Usage("--candidate cannot be combined with --batch".into()));
        }
        Some(path) => {
            let raw = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_str::<SplitJson>(&raw).map_err(|e| CliError::Parse(e.to_string()))?)
        }
        None => None,
    };
    let docs = parse_documents(&text, flags.batch)?;
    let results: Vec<(Output, i32)> = docs
        .into_par_iter()
        .map(|doc| match doc.and_then(|d| process(&cli.command, &d, flags, candidate.as_ref())) {
            Ok(r) => r,
            Err(e) => (Output::Error(ErrorJson::new(&e, None)), e.exit_code()),
        })
        .collect();
    let code = results.iter().map(|r| r.1).max().unwrap_or(0);
    let mut out = Outcome { code, ..Outcome::default() };
    for (i, (o, _)) in results.iter().enumerate() {
        if let Output::Error(e) = o {
            let mut e = e.clone();
            e.error.index = flags.batch.then_some(i);
            out.stderr.push_str(&(serde_json::to_string(&e).expect("error serializes") + "\n"));
        }
    }
    if flags.batch {
        out.stdout = match flags.format {
            Format::Json => to_json(&results.iter().map(|r| &r.0).collect::<Vec<_>>()),
            Format::Text => results
                .iter()
                .enumerate()
                .map(|(i, r)| format!("# document {i}\n{}", r.0.to_text()))
                .collect::<Vec<_>>()
                .join("\n"),
        };
    } else if !matches!(results[0].0, Output::Error(_)) {
        out.stdout = match flags.format {
            Format::Json => to_json(&results[0].0),
            Format::Text => results[0].0.to_text(),
        };
    }
    Ok(out)
}

fn process(
    command: &Command,
    doc: &PairDocument,
    flags: &Flags,
    candidate: Option<&SplitJson>,
) -> Result<(Output, i32), CliError> {
    match command {
        Command::Analyze { .. } => Ok((Output::Analyze(Box::new(cmd_analyze(doc, flags)?)), 0)),
        Command::Oracle { subspace_budget, .. } => Ok((Output::Oracle(cmd_oracle(doc, flags, *subspace_budget)?), 0)),
        Command::CheckSplit { .. } => {
            let split = match candidate {
                Some(c) => parse_split(doc.field, doc.a.rows(), c)?,
                None => doc
                    .truth
                    .as_ref()
                    .map(|t| t.split.clone())
                    .ok_or_else(|| CliError::Usage("no candidate: pass --candidate or include a truth block".into()))?,
            };
            let r = cmd_check_split(doc, &split)?;
            let code = if r.valid { 0 } else { 1 };
            Ok((Output::CheckSplit(r), code))
        }
        Command::Generate(_) => unreachable!("generate takes no input document"),
    }
}

fn generate_outcome(args: &GenerateArgs, flags: &Flags) -> Result<Outcome, CliError> {
    let stdout = match args.count {
        None => to_json(&cmd_generate(args, flags.seed)?),
        Some(k) => to_json(
            &(0..k)
                .map(|i| cmd_generate(args, flags.seed.wrapping_add(i)))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    Ok(Outcome { stdout, ..Outcome::default() })
}

/// Parses `args` (including the program name) and runs them.
pub fn run_args<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, stdin),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                Outcome { stdout: rendered, ..Outcome::default() }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: serde_json::to_string(&ErrorJson::new(&CliError::Usage(rendered.trim().to_string()), None))
                        .expect("error serializes")
                        + "\n",
                    code,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str], input: &str) -> Outcome {
        run_args(std::iter::once("hessenberg").chain(args.iter().copied()), &mut input.as_bytes())
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field("Q").unwrap(), FieldSpec::rationals());
        assert_eq!(parse_field("GF(7)").unwrap(), FieldSpec::prime(7).unwrap());
        assert_eq!(parse_field("11").unwrap(), FieldSpec::prime(11).unwrap());
        assert!(parse_field("GF(9)").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn identity_pair_is_reducible_with_witness() {
        let out = run_str(&["analyze"], r#"{"field":{"kind":"Q"},"A":[["1","0"],["0","1"]],"Astar":[["1","0"],["0","1"]]}"#);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["irreducible"]["status"], "Reducible");
        assert_eq!(v["irreducible"]["witness"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn generic_d1_pair_admits_every_ordering() {
        let out = run_str(&["analyze"], r#"{"field":{"kind":"Q"},"A":[["0","0"],["0","1"]],"Astar":[["1","1"],["1","1"]]}"#);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["hessenberg_orderings"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn usage_errors_exit_2() {
        let out = run_str(&["frobnicate"], "");
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("UsageError"));
        let out = run_str(&["generate", "--dims", "1,1", "--dims", "1,1"], "");
        assert_eq!(out.code, 2);
        let out = run_str(&["generate", "--kind", "tridiagonal-form", "--dims", "1,2"], "");
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("GenerationError"));
    }

    #[test]
    fn undetermined_fails_only_when_required() {
        // A conjugated sum of two 2-dimensional blocks over Q: reducible, but
        // no probe finds a witness and every eigenspace is 2-dimensional.
        let doc = r#"{"field":{"kind":"Q"},"A":[["13/4","51/2","39/2","-9/8"],["5/2","28","15","-37/4"],["-7/2","-38","-21","47/4"],["5/2","27","15","-33/4"]],"Astar":[["1/2","-5","-5","-1/4"],["-3/4","-19/2","-19/2","3/8"],["3/4","21/2","21/2","-3/8"],["-1","-10","-10","1/2"]]}"#;
        let loose = run_str(&["analyze"], doc);
        assert_eq!(loose.code, 0);
        let v: serde_json::Value = serde_json::from_str(&loose.stdout).unwrap();
        assert_eq!(v["irreducible"]["status"], "Undetermined");
        assert_eq!(v["tridiagonal"]["status"], "Undetermined");
        let strict = run_str(&["analyze", "--require-irreducible"], doc);
        assert_eq!(strict.code, 6);
        assert!(strict.stdout.is_empty());
        assert!(strict.stderr.contains("IrreducibilityUndetermined"));
    }
}
