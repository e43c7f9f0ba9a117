//! Versioned JSON reports for whole-word analyses and decompositions.
//!
//! Reports are deterministic: every collection is emitted in a fixed order
//! and all sampling is driven by the recorded seed.

use serde::Serialize;

use crate::complexity::{
    check_inequality2, closed_under_theta, complexity_table_with, is_rich_by_t, safe_length, ClosureCheck,
    ComplexityTable, InequalityReport, RichByT, DEFAULT_SAFE_DIVISOR,
};
use crate::config::MorphismConfig;
use crate::decompose::{
    empirical_thresholds, theorem1_pipeline, theorem2_pipeline, Attempt, PipelineOptions, RichnessConditions,
    Theorem1Outcome, Theorem2Checks, Theorem2Outcome, Theorem3Checks, Theorem3Outcome, Thresholds, Verdict,
};
use crate::error::{Error, Result};
use crate::palindromes::{defect_profile, DefectProfile};
use crate::rauzy::{build_graph, check_proposition1, Prop1Check};
use crate::returns::{crw_palindromicity_scan, factor_scan, unioccurrent_lps_scan, CrwScan, FactorScan, LpsScan, FULL_LPS_SCAN_LIMIT};
use crate::report::show;
use crate::words::{Antimorphism, Word};

pub const SCHEMA_VERSION: u32 = 1;


#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputInfo {
    pub descriptor: String,
    pub length: usize,
    pub alphabet: Vec<String>,
}

impl InputInfo {
    pub fn new(descriptor: &str, word: &Word) -> Self {
        Self {
            descriptor: descriptor.to_string(),
            length: word.len(),
            alphabet: word.alphabet().letters().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectSummary {
    pub final_defect: usize,
    pub last_increase: Option<usize>,
    pub stable_over_last_half: bool,
    pub gamma: usize,
    /// Distinct Θ-palindromes, ε included.
    pub palindromes: usize,
}

impl DefectSummary {
    pub fn from_profile(p: &DefectProfile) -> Self {
        Self {
            final_defect: p.final_defect(),
            last_increase: p.last_increase(),
            stable_over_last_half: p.is_stable_over_tail(0.5),
            gamma: *p.gammas.last().unwrap_or(&0),
            palindromes: *p.pal_counts.last().unwrap_or(&1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RauzyRow {
    pub n: usize,
    pub t: Option<i64>,
    pub vertices: usize,
    pub edges: usize,
    pub loops_palindromic: bool,
    pub tree_after_loop_removal: bool,
    /// `T(n) = 0` exactly when both graph conditions hold.
    pub agrees_with_t: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReturnsSection {
    pub factor_scan: FactorScan,
    pub complete_returns: CrwScan,
    pub lps_prefixes: LpsScan,
    pub lps_all_factors: Option<LpsScan>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnalysisOptions {
    /// Largest `n` for which the Rauzy graph is built.
    pub max_rauzy_n: usize,
    pub safe_divisor: usize,
    /// Also scan every factor for repeated longest palindromic suffixes.
    pub full_lps: bool,
    pub rng_seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            max_rauzy_n: 32,
            safe_divisor: DEFAULT_SAFE_DIVISOR,
            full_lps: false,
            rng_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub input: InputInfo,
    pub antimorphism: String,
    pub rng_seed: u64,
    pub safe_length: usize,
    pub defect: DefectSummary,
    pub closure: ClosureCheck,
    pub complexity: ComplexityTable,
    pub inequality: InequalityReport,
    pub richness_by_t: Option<RichByT>,
    pub richness_note: Option<String>,
    pub rauzy: Vec<RauzyRow>,
    pub returns: ReturnsSection,
    pub thresholds: Thresholds,
    pub decomposition: Option<DecompositionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition_error: Option<String>,
}

pub struct Analysis {
    pub report: AnalysisReport,
    pub profile: DefectProfile,
}

pub fn analyze(descriptor: &str, theta: &Antimorphism, word: &Word, opts: &AnalysisOptions) -> Result<Analysis> {
    theta.check_word(word)?;
    if word.len() < 3 {
        return Err(Error::Precondition("word must have at least 3 letters".into()));
    }
    let profile = defect_profile(theta, word)?;
    let safe = safe_length(word.len(), opts.safe_divisor);
    let table_len = safe.max(1).min(word.len() - 1);
    let table = complexity_table_with(theta, word, table_len, opts.safe_divisor, descriptor)?;
    let closure = closed_under_theta(theta, word, table.trusted_len().max(1))?;
    let (richness_by_t, richness_note) = match is_rich_by_t(&table, &closure) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let rauzy = (1..=table.trusted_len().min(opts.max_rauzy_n))
        .map(|n| -> Result<RauzyRow> {
            let g = build_graph(theta, word, n)?;
            let c = check_proposition1(&g, theta);
            let t = table.t(n);
            Ok(RauzyRow {
                n,
                t,
                vertices: g.vertices.len(),
                edges: g.edges.len(),
                loops_palindromic: c.loops_palindromic,
                tree_after_loop_removal: c.tree_after_loop_removal,
                agrees_with_t: (t == Some(0)) == c.holds(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let thresholds = empirical_thresholds(theta, word, PipelineOptions::default().margin)?;
    let scan = factor_scan(theta, word, thresholds.scan_len)?;
    let crw = crw_palindromicity_scan(theta, word, 1)?;
    let lps = unioccurrent_lps_scan(theta, word, false)?;
    let lps_full = (opts.full_lps && word.len() <= FULL_LPS_SCAN_LIMIT)
        .then(|| unioccurrent_lps_scan(theta, word, true))
        .transpose()?;
    let report = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        input: InputInfo::new(descriptor, word),
        antimorphism: theta.describe(),
        rng_seed: opts.rng_seed,
        safe_length: safe,
        defect: DefectSummary::from_profile(&profile),
        inequality: check_inequality2(&table, closure.closed),
        closure,
        complexity: table,
        richness_by_t,
        richness_note,
        rauzy,
        returns: ReturnsSection {
            factor_scan: scan,
            complete_returns: crw,
            lps_prefixes: lps,
            lps_all_factors: lps_full,
        },
        thresholds,
        decomposition: None,
        decomposition_error: None,
    };
    Ok(Analysis { report, profile })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Path,
    Return,
    Theorem3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LetterEntry {
    pub name: String,
    /// The n-simple path coded by this letter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub image: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mirror: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathChecks {
    pub richness_conditions: RichnessConditions,
    pub refactorization: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem3Section {
    pub l_threshold: usize,
    pub k_threshold: usize,
    pub prefix_valence: usize,
    pub derived_word: Theorem2Checks,
    pub structure: Theorem3Checks,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum DecompositionChecks {
    Path(PathChecks),
    Return(Theorem2Checks),
    Theorem3(Box<Theorem3Section>),
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub method: Method,
    pub input: InputInfo,
    pub antimorphism: String,
    pub options: PipelineOptions,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Thresholds>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub requested_n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aligned: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periodic: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    pub alphabet: Vec<LetterEntry>,
    /// Antimorphism induced on the new alphabet.
    pub derived_antimorphism: String,
    pub morphism: MorphismConfig,
    pub v_length: usize,
    pub v_prefix: String,
    pub covered: (usize, usize),
    pub uncovered_tail: usize,
    pub checks: DecompositionChecks,
    pub attempts: Vec<Attempt>,
    pub verdict: Verdict,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

pub fn path_report(descriptor: &str, theta: &Antimorphism, word: &Word, out: &Theorem1Outcome, opts: &PipelineOptions) -> DecompositionReport {
    let c = &out.coding;
    DecompositionReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        method: Method::Path,
        input: InputInfo::new(descriptor, word),
        antimorphism: theta.describe(),
        options: *opts,
        thresholds: Some(out.thresholds.clone()),
        n: Some(c.n),
        requested_n: Some(c.requested_n),
        aligned: Some(c.aligned),
        periodic: Some(c.periodic),
        p: None,
        alphabet: c
            .table
            .iter()
            .map(|l| LetterEntry {
                name: l.name.clone(),
                path: Some(show(&l.path)),
                image: show(&l.image),
                mirror: Some(l.mirror.clone()),
            })
            .collect(),
        derived_antimorphism: c.theta2.describe(),
        morphism: MorphismConfig::from_morphism(&c.phi),
        v_length: c.v_prefix.len(),
        v_prefix: show(&c.v_prefix),
        covered: c.covered,
        uncovered_tail: c.uncovered_tail,
        checks: DecompositionChecks::Path(PathChecks {
            richness_conditions: out.conditions.clone(),
            refactorization: out.refactorization,
        }),
        attempts: out.attempts.clone(),
        verdict: out.verdict,
    }
}

fn return_report_base(method: Method, descriptor: &str, theta: &Antimorphism, word: &Word, out: &Theorem2Outcome, opts: &PipelineOptions) -> DecompositionReport {
    let c = &out.coding;
    let last = *c.occurrences.last().expect("two occurrences");
    DecompositionReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        method,
        input: InputInfo::new(descriptor, word),
        antimorphism: theta.describe(),
        options: *opts,
        thresholds: None,
        n: None,
        requested_n: None,
        aligned: None,
        periodic: None,
        p: Some(show(&c.p)),
        alphabet: c
            .returns
            .iter()
            .enumerate()
            .map(|(i, q)| LetterEntry {
                name: (i + 1).to_string(),
                path: None,
                image: show(q),
                mirror: None,
            })
            .collect(),
        derived_antimorphism: "reversal".into(),
        morphism: MorphismConfig::from_morphism(&c.phi),
        v_length: c.v_prefix.len(),
        v_prefix: show(&c.v_prefix),
        covered: (0, last),
        uncovered_tail: c.uncovered_tail,
        checks: DecompositionChecks::Return(out.checks.clone()),
        attempts: Vec::new(),
        verdict: out.verdict,
    }
}

pub fn return_report(descriptor: &str, theta: &Antimorphism, word: &Word, out: &Theorem2Outcome, opts: &PipelineOptions) -> DecompositionReport {
    return_report_base(Method::Return, descriptor, theta, word, out, opts)
}

pub fn theorem3_report(theta: &Antimorphism, out: &Theorem3Outcome, opts: &PipelineOptions) -> DecompositionReport {
    let mut r = return_report_base(Method::Theorem3, &out.source, theta, &out.prefix, &out.theorem2, opts);
    r.checks = DecompositionChecks::Theorem3(Box::new(Theorem3Section {
        l_threshold: out.l_threshold,
        k_threshold: out.k_threshold,
        prefix_valence: out.prefix_valence,
        derived_word: out.theorem2.checks.clone(),
        structure: out.checks.clone(),
    }));
    r.attempts = out.attempts.clone();
    r.verdict = out.verdict;
    r
}

/// Runs the path or return pipeline on a word.
pub fn decompose_word(method: Method, descriptor: &str, theta: &Antimorphism, word: &Word, n: Option<usize>, p: Option<&Word>, opts: &PipelineOptions) -> Result<DecompositionReport> {
    match method {
        Method::Path => {
            let out = theorem1_pipeline(theta, word, n, opts)?;
            Ok(path_report(descriptor, theta, word, &out, opts))
        }
        Method::Return => {
            let out = theorem2_pipeline(theta, word, p, opts)?;
            Ok(return_report(descriptor, theta, word, &out, opts))
        }
        Method::Theorem3 => Err(Error::Precondition(
            "the theorem3 method generates its own word; use a theta-standard generator".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RauzyEdge {
    pub path: String,
    pub image: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RauzyReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub input: InputInfo,
    pub antimorphism: String,
    pub n: usize,
    pub safe_length: usize,
    pub closure: ClosureCheck,
    pub t: Option<i64>,
    /// Each vertex is a pair `(w, Θ(w))` of special factors.
    pub vertices: Vec<(String, String)>,
    pub edges: Vec<RauzyEdge>,
    pub criteria: Prop1Check,
    pub agrees_with_t: bool,
}

/// The super reduced Rauzy graph of order `n`, its criteria and its DOT
/// rendering. `n` must not exceed the safe length of the prefix.
pub fn rauzy_report(descriptor: &str, theta: &Antimorphism, word: &Word, n: usize) -> Result<(RauzyReport, String)> {
    let safe = safe_length(word.len(), DEFAULT_SAFE_DIVISOR);
    if n == 0 || n > safe {
        return Err(Error::OutOfRange {
            what: "n (graph order, bounded by the safe length of the prefix)",
            value: n,
            min: 1,
            max: safe,
        });
    }
    let g = build_graph(theta, word, n)?;
    let criteria = check_proposition1(&g, theta);
    let table = complexity_table_with(theta, word, n, DEFAULT_SAFE_DIVISOR, descriptor)?;
    let t = table.t(n);
    let dot = g.to_dot();
    let report = RauzyReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        input: InputInfo::new(descriptor, word),
        antimorphism: theta.describe(),
        n,
        safe_length: safe,
        closure: closed_under_theta(theta, word, n + 1)?,
        t,
        vertices: g.vertices.iter().map(|(a, b)| (show(a), show(b))).collect(),
        edges: g
            .edges
            .iter()
            .map(|e| RauzyEdge {
                path: show(&e.path),
                image: show(&e.image),
                from: e.from,
                to: e.to,
            })
            .collect(),
        agrees_with_t: (t == Some(0)) == criteria.holds(),
        criteria,
    };
    Ok((report, dot))
}
