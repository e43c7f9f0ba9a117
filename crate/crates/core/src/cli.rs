//! Command-line front end. `run` returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{analyze, decompose_word, rauzy_report, theorem3_report, AnalysisOptions, DecompositionReport, Method};
use crate::config::{load_word_file, parse_word_text, resolve_generator, GenSpec, MorphismConfig, ResolvedSource, SeedArgs, ThetaSpec};
use crate::decompose::{theorem3_pipeline, PipelineOptions, Verdict, DEFAULT_MARGIN, DEFAULT_RETRY_BUDGET};
use crate::error::{Error, Result};
use crate::words::{render, Antimorphism, Word};

const DEFAULT_LEN: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "almostrich", version, about = "Generalized palindromes, defect and decompositions of words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Defect, complexity, Rauzy criteria and return-word scans of a word.
    Analyze(AnalyzeArgs),
    /// Super reduced Rauzy graph of order n.
    Rauzy(RauzyArgs),
    /// Morphic decomposition of a word. Exit code 0 on pass, 2 when inconclusive.
    Decompose(DecomposeArgs),
    /// Write a prefix of a generated word.
    Generate(GenerateArgs),
    /// Apply a morphism (from a JSON file or a decomposition report) to a word.
    ApplyMorphism(ApplyArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// fibonacci, tribonacci, thue_morse, periodic:<w>, episturmian:<pre(period)>, theta_standard or a JSON file.
    #[arg(long = "gen", value_name = "SPEC", conflicts_with = "word_file", required_unless_present = "word_file")]
    generator: Option<String>,
    #[arg(long, value_name = "FILE")]
    word_file: Option<PathBuf>,
    /// Letters are whitespace-separated tokens.
    #[arg(long)]
    tokens: bool,
    /// Seed word of a theta_standard generator.
    #[arg(long, value_name = "WORD")]
    seed: Option<String>,
    /// Directive sequence of a theta_standard generator, e.g. "(ab)".
    #[arg(long, value_name = "DIRECTIVE")]
    directive: Option<String>,
    /// reversal, pairs:a-b,c-d or a JSON file.
    #[arg(long, default_value = "reversal", value_name = "THETA")]
    theta: String,
    /// Prefix length (generators default to 10000; word files are truncated only when given).
    #[arg(long, value_name = "N")]
    len: Option<usize>,
}

struct Input {
    descriptor: String,
    word: Word,
    theta: Antimorphism,
    resolved: Option<ResolvedSource>,
}

impl InputArgs {
    fn load(&self) -> Result<Input> {
        let theta_spec = ThetaSpec::parse(&self.theta)?;
        if let Some(path) = &self.word_file {
            let (mut word, theta) = load_word_file(path, self.tokens, &theta_spec)?;
            if let Some(n) = self.len {
                word = word.prefix(n.min(word.len()));
            }
            return Ok(Input {
                descriptor: format!("file:{}", path.display()),
                word,
                theta,
                resolved: None,
            });
        }
        let gen = GenSpec::parse(self.generator.as_deref().expect("clap requires --gen or --word-file"))?;
        let resolved = resolve_generator(
            &gen,
            &theta_spec,
            &SeedArgs {
                seed: self.seed.as_deref(),
                directive: self.directive.as_deref(),
            },
        )?;
        let len = self.len.unwrap_or(DEFAULT_LEN);
        Ok(Input {
            descriptor: resolved.source.describe(),
            word: resolved.source.prefix(len),
            theta: resolved.theta.clone(),
            resolved: Some(resolved),
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Path,
    Return,
    Theorem3,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Path => Method::Path,
            MethodArg::Return => Method::Return,
            MethodArg::Theorem3 => Method::Theorem3,
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// JSON report path (stdout when absent).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Directory for complexity.csv and defect_profile.csv.
    #[arg(long, value_name = "DIR")]
    csv: Option<PathBuf>,
    /// Largest order of the Rauzy graphs in the report.
    #[arg(long, default_value_t = 32)]
    max_n: usize,
    /// Also scan all factors for repeated longest palindromic suffixes (quadratic).
    #[arg(long)]
    full_lps: bool,
    /// Add a decomposition with this method.
    #[arg(long, value_enum, value_name = "METHOD")]
    decompose: Option<MethodArg>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
}

#[derive(Debug, Args)]
struct RauzyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    n: usize,
    /// Write the graph in DOT format.
    #[arg(long, value_name = "FILE")]
    dot: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "return")]
    method: MethodArg,
    /// Path length for the path method (estimated when absent).
    #[arg(long)]
    n: Option<usize>,
    /// Palindromic prefix for the return method (chosen automatically when absent).
    #[arg(long, value_name = "WORD")]
    p: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    margin: usize,
    /// Retries before giving up as inconclusive.
    #[arg(long, default_value_t = DEFAULT_RETRY_BUDGET)]
    budget: usize,
    #[arg(long, default_value_t = 1000)]
    eq4_samples: usize,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    /// Morphism JSON, or a decomposition report with a `morphism` field.
    #[arg(long, value_name = "FILE")]
    morphism: PathBuf,
    #[arg(long, value_name = "FILE", conflicts_with = "word", required_unless_present = "word")]
    word_file: Option<PathBuf>,
    #[arg(long, value_name = "WORD")]
    word: Option<String>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) if e.is_inconclusive() => {
            eprintln!("inconclusive: {e}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Rauzy(a) => cmd_rauzy(a),
        Command::Decompose(a) => cmd_decompose(a),
        Command::Generate(a) => cmd_generate(a),
        Command::ApplyMorphism(a) => cmd_apply(a),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes())?;
            s.flush()?;
        }
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn pipeline_options(margin: usize, budget: usize, eq4_samples: usize, rng_seed: u64) -> Result<PipelineOptions> {
    if margin == 0 {
        return Err(Error::OutOfRange {
            what: "margin",
            value: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    Ok(PipelineOptions {
        margin,
        retry_budget: budget,
        eq4_samples,
        seed: rng_seed,
        ..PipelineOptions::default()
    })
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<i32> {
    let input = a.input.load()?;
    let opts = AnalysisOptions {
        max_rauzy_n: a.max_n,
        full_lps: a.full_lps,
        rng_seed: a.rng_seed,
        ..AnalysisOptions::default()
    };
    let mut analysis = analyze(&input.descriptor, &input.theta, &input.word, &opts)?;
    if let Some(m) = a.decompose {
        let popts = pipeline_options(DEFAULT_MARGIN, DEFAULT_RETRY_BUDGET, 1000, a.rng_seed)?;
        let r = match Method::from(m) {
            Method::Theorem3 => theorem3_for(&input, &popts),
            m => decompose_word(m, &input.descriptor, &input.theta, &input.word, None, None, &popts),
        };
        match r {
            Ok(r) => analysis.report.decomposition = Some(r),
            Err(e) if e.is_inconclusive() => analysis.report.decomposition_error = Some(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    if let Some(dir) = &a.csv {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("complexity.csv"), analysis.report.complexity.to_csv())?;
        std::fs::write(dir.join("defect_profile.csv"), analysis.profile.to_csv())?;
    }
    write_output(a.out.as_deref(), &to_json(&analysis.report)?)?;
    Ok(0)
}

fn cmd_rauzy(a: RauzyArgs) -> Result<i32> {
    let input = a.input.load()?;
    let (report, dot) = rauzy_report(&input.descriptor, &input.theta, &input.word, a.n)?;
    if let Some(p) = &a.dot {
        std::fs::write(p, dot)?;
    }
    write_output(a.out.as_deref(), &to_json(&report)?)?;
    Ok(0)
}

fn theorem3_for(input: &Input, opts: &PipelineOptions) -> Result<DecompositionReport> {
    let (seed, d) = match &input.resolved {
        Some(ResolvedSource {
            seed: Some(s),
            directive: Some(d),
            ..
        }) => (s, d),
        _ => {
            return Err(Error::Config(
                "the theorem3 method needs --gen theta_standard (with --seed and --directive)".into(),
            ))
        }
    };
    let out = theorem3_pipeline(&input.theta, seed, d.clone(), input.word.len(), opts)?;
    Ok(theorem3_report(&input.theta, &out, opts))
}

fn cmd_decompose(a: DecomposeArgs) -> Result<i32> {
    let input = a.input.load()?;
    let opts = pipeline_options(a.margin, a.budget, a.eq4_samples, a.rng_seed)?;
    let report = match Method::from(a.method) {
        Method::Theorem3 => theorem3_for(&input, &opts)?,
        m => {
            let p = a
                .p
                .as_deref()
                .map(|t| parse_word_text(t, a.input.tokens, Some(input.word.alphabet()), &[], "--p"))
                .transpose()?;
            decompose_word(m, &input.descriptor, &input.theta, &input.word, a.n, p.as_ref(), &opts)?
        }
    };
    write_output(a.out.as_deref(), &to_json(&report)?)?;
    Ok(match report.verdict {
        Verdict::Pass => 0,
        Verdict::Inconclusive => 2,
    })
}

fn word_text(w: &Word, tokens: bool) -> String {
    let mut s = if tokens || !w.alphabet().is_single_char() {
        w.to_token_string()
    } else {
        render(w.alphabet(), w.symbols())
    };
    s.push('\n');
    s
}

fn cmd_generate(a: GenerateArgs) -> Result<i32> {
    let input = a.input.load()?;
    write_output(a.out.as_deref(), &word_text(&input.word, a.input.tokens))?;
    Ok(0)
}

fn cmd_apply(a: ApplyArgs) -> Result<i32> {
    let raw = std::fs::read_to_string(&a.morphism)?;
    let value: serde_json::Value = serde_json::from_str(&raw)?;
    let cfg: MorphismConfig = match value.get("morphism") {
        Some(m) => serde_json::from_value(m.clone())?,
        None => serde_json::from_value(value)?,
    };
    let phi = cfg.to_morphism()?;
    let (text, context) = match (&a.word_file, &a.word) {
        (Some(p), _) => (std::fs::read_to_string(p)?, p.display().to_string()),
        (None, Some(w)) => (w.clone(), "--word".to_string()),
        (None, None) => unreachable!("clap requires --word-file or --word"),
    };
    let tokens = !phi.source().is_single_char() || text.split_whitespace().count() > 1;
    let w = parse_word_text(&text, tokens, Some(phi.source()), &[], &context)?;
    let image = phi.apply(&w)?;
    write_output(a.out.as_deref(), &word_text(&image, false))?;
    Ok(0)
}
