//! Recoding an almost Θ-rich word as a morphic image of a rich word.
//!
//! Two codings are built: one by consecutive occurrences of special factors
//! of a fixed length (letters are n-simple paths), and one by return words
//! of a Θ-palindromic prefix (the derived word). Both depend on thresholds
//! that only exist for the infinite word; here they are estimated from
//! scans of the prefix, with a safety margin, and every choice made is
//! recorded in the result.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complexity::{closed_under_theta_slice, complexity_table, safe_length, DEFAULT_SAFE_DIVISOR};
use crate::error::{Error, Result};
use crate::factors::{extension_map, smallest_period, z_array};
use crate::generators::{arnoux_rauzy_check, theta_standard_with_seed_source, ArnouxRauzyCheck, DirectiveSequence};
use crate::palindromes::{PalIndex, PalRadii};
use crate::rauzy::special_occurrences;
use crate::returns::{crw_scan_slice, factor_scan_slice};
use crate::report::show;
use crate::words::{render, Alphabet, Antimorphism, Letter, Morphism, Word};

pub const DEFAULT_MARGIN: usize = 2;
/// Attempts at larger `n` or longer `p` before a run is declared
/// inconclusive.
pub const DEFAULT_RETRY_BUDGET: usize = 4;
/// Longest factor length scanned when estimating thresholds.
pub const THRESHOLD_SCAN_CAP: usize = 64;
/// Longest factor length of the derived word tested for injectivity.
pub const INJECTIVITY_LEN: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Inconclusive,
}

/// Tuning shared by the pipelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PipelineOptions {
    pub margin: usize,
    pub retry_budget: usize,
    pub eq4_samples: usize,
    pub eq4_max_len: usize,
    pub seed: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            margin: DEFAULT_MARGIN,
            retry_budget: DEFAULT_RETRY_BUDGET,
            eq4_samples: 1000,
            eq4_max_len: 6,
            seed: 0,
        }
    }
}

/// Largest violating lengths observed on a prefix (0 when none).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thresholds {
    pub scan_len: usize,
    pub alternation: usize,
    pub mirror_bounded: usize,
    /// Last `n ≤ scan_len` with `T(n) ≠ 0`.
    pub t_gap: usize,
    /// Longest Θ-palindrome with a non-palindromic complete return.
    pub complete_returns: usize,
    pub margin: usize,
}

impl Thresholds {
    /// Estimate of the constant beyond which alternation, mirror-bounded
    /// palindromicity and `T(n) = 0` hold.
    pub fn h(&self) -> usize {
        self.alternation.max(self.mirror_bounded).max(self.t_gap)
    }

    pub fn k(&self) -> usize {
        self.complete_returns
    }

    /// Path length used by the simple-path coding.
    pub fn path_length(&self) -> usize {
        self.margin * self.h() + 1
    }
}

pub fn empirical_thresholds(theta: &Antimorphism, prefix: &Word, margin: usize) -> Result<Thresholds> {
    theta.check_word(prefix)?;
    let text = prefix.symbols();
    if text.len() < 3 {
        return Err(Error::Precondition("prefix too short to estimate thresholds".into()));
    }
    let scan_len = safe_length(text.len(), DEFAULT_SAFE_DIVISOR).clamp(1, THRESHOLD_SCAN_CAP).min(text.len() - 2);
    let scan = factor_scan_slice(theta, text, scan_len);
    let table = complexity_table(theta, prefix, scan_len)?;
    let t_gap = (1..=scan_len).rev().find(|&n| table.t(n) != Some(0)).unwrap_or(0);
    let crw = crw_scan_slice(theta, text, 1);
    Ok(Thresholds {
        scan_len,
        alternation: scan.last_alternation_violation.unwrap_or(0),
        mirror_bounded: scan.last_mirror_violation.unwrap_or(0),
        t_gap,
        complete_returns: crw.max_violating_len.unwrap_or(0),
        margin,
    })
}

/// One letter `[k]` of the path alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathLetter {
    pub name: String,
    #[serde(serialize_with = "crate::report::ser_word")]
    pub path: Word,
    #[serde(serialize_with = "crate::report::ser_word")]
    pub image: Word,
    /// Name of the letter coding `Θ(path)`.
    pub mirror: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePathCoding {
    pub n: usize,
    pub requested_n: usize,
    /// The length-`n` prefix is special, so the coding starts at 0.
    pub aligned: bool,
    /// No special factors exist: the prefix is coded by its period.
    pub periodic: bool,
    pub table: Vec<PathLetter>,
    pub theta2: Antimorphism,
    pub phi: Morphism,
    pub v_prefix: Word,
    /// Positions `s_i` of special factors of length `n`.
    pub occurrences: Vec<usize>,
    /// `φ(v_prefix)` equals `u[start..end]`.
    pub covered: (usize, usize),
    pub uncovered_tail: usize,
}

fn path_alphabet(count: usize) -> Result<Arc<Alphabet>> {
    Alphabet::new((0..count).map(|k| format!("[{k}]")))
}

fn prefix_is_special(text: &[Letter], n: usize) -> Option<bool> {
    let ext = extension_map(text, n);
    if !ext.values().any(|e| e.left.len() >= 2 || e.right.len() >= 2) {
        return None;
    }
    let e = &ext[&text[..n]];
    Some(e.left.len() >= 2 || e.right.len() >= 2)
}

fn periodic_coding(prefix: &Word, requested_n: usize) -> Result<SimplePathCoding> {
    let text = prefix.symbols();
    let q = smallest_period(text);
    if 2 * q > text.len() {
        return Err(Error::NoSpecialFactors { n: requested_n });
    }
    let alpha = path_alphabet(1)?;
    let period = prefix.prefix(q);
    let phi = Morphism::new(alpha.clone(), prefix.alphabet().clone(), vec![period.symbols().to_vec()])?;
    let reps = text.len() / q;
    Ok(SimplePathCoding {
        n: requested_n,
        requested_n,
        aligned: true,
        periodic: true,
        table: vec![PathLetter {
            name: "[0]".into(),
            path: period.clone(),
            image: period,
            mirror: "[0]".into(),
        }],
        theta2: Antimorphism::reversal(alpha.clone()),
        phi,
        v_prefix: Word::from_trusted(alpha, vec![0; reps]),
        occurrences: (0..reps).map(|i| i * q).collect(),
        covered: (0, reps * q),
        uncovered_tail: text.len() - reps * q,
    })
}

/// Codes the prefix by its n-simple paths: `v_i` is the path from the
/// `i`-th to the `(i+1)`-th occurrence of a special factor of length `n`.
/// If the length-`n` prefix is not special, larger `n` are tried; failing
/// that, the coding starts at the first special occurrence and `aligned` is
/// false.
pub fn theorem1_decompose(theta: &Antimorphism, prefix: &Word, n: usize) -> Result<SimplePathCoding> {
    theta.check_word(prefix)?;
    let text = prefix.symbols();
    if n == 0 || n + 1 >= text.len() {
        return Err(Error::OutOfRange {
            what: "path length n",
            value: n,
            min: 1,
            max: text.len().saturating_sub(2),
        });
    }
    if let Some(w) = closed_under_theta_slice(theta, text, n).witness {
        return Err(Error::NotClosed {
            level: n,
            witness: if w.len() > 40 {
                format!("{}… ({} letters)", render(theta.alphabet(), &w[..40]), w.len())
            } else {
                render(theta.alphabet(), &w)
            },
        });
    }
    let search_end = (n + THRESHOLD_SCAN_CAP).min(text.len() / 2).max(n);
    let mut chosen = None;
    for m in n..=search_end {
        match prefix_is_special(text, m) {
            None if m == n => return periodic_coding(prefix, n),
            None => break,
            Some(true) => {
                chosen = Some(m);
                break;
            }
            Some(false) => {}
        }
    }
    let (m, aligned) = match chosen {
        Some(m) => (m, true),
        None => (n, false),
    };
    let occ = special_occurrences(text, m);
    if occ.len() < 2 {
        return Err(Error::TooFewOccurrences {
            factor: format!("special factors of length {m}"),
            found: occ.len(),
            needed: 2,
        });
    }
    let mut ids: HashMap<&[Letter], Letter> = HashMap::new();
    let mut paths: Vec<&[Letter]> = Vec::new();
    let mut images: Vec<Vec<Letter>> = Vec::new();
    let mut v = Vec::with_capacity(occ.len() - 1);
    for pair in occ.windows(2) {
        let (s, t) = (pair[0], pair[1]);
        let b = &text[s..t + m];
        let id = *ids.entry(b).or_insert_with(|| {
            paths.push(b);
            images.push(text[s..t].to_vec());
            (paths.len() - 1) as Letter
        });
        v.push(id);
    }
    let alpha = path_alphabet(paths.len())?;
    let mut pairing = Vec::with_capacity(paths.len());
    for (k, b) in paths.iter().enumerate() {
        let image = theta.apply_slice(b);
        match ids.get(image.as_slice()) {
            Some(&j) => pairing.push(j),
            None => {
                return Err(Error::Precondition(format!(
                    "image of path [{k}] = `{}` is not a witnessed path",
                    render(theta.alphabet(), b)
                )))
            }
        }
    }
    let theta2 = Antimorphism::new(alpha.clone(), pairing)?;
    let table = paths
        .iter()
        .enumerate()
        .map(|(k, b)| PathLetter {
            name: format!("[{k}]"),
            path: Word::from_trusted(prefix.alphabet().clone(), b.to_vec()),
            image: Word::from_trusted(prefix.alphabet().clone(), images[k].clone()),
            mirror: format!("[{}]", theta2.image(k as Letter)),
        })
        .collect();
    let phi = Morphism::new(alpha.clone(), prefix.alphabet().clone(), images)?;
    let (start, end) = (occ[0], *occ.last().expect("two occurrences"));
    Ok(SimplePathCoding {
        n: m,
        requested_n: n,
        aligned,
        periodic: false,
        table,
        theta2,
        phi,
        v_prefix: Word::from_trusted(alpha, v),
        occurrences: occ,
        covered: (start, end),
        uncovered_tail: text.len() - end,
    })
}

impl SimplePathCoding {
    /// `φ(v_prefix)` reproduces the covered range of the prefix.
    pub fn refactorizes(&self, prefix: &Word) -> bool {
        let (a, b) = self.covered;
        self.phi.apply_slice(self.v_prefix.symbols()) == prefix.symbols()[a..b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RichnessConditions {
    pub checked_up_to: usize,
    /// Mirror-bounded factors of `v` are Θ₂-palindromes.
    pub condition_i: bool,
    pub condition_i_witness: Option<String>,
    /// Occurrences of `[b]` and `Θ₂([b])` alternate.
    pub condition_ii: bool,
    pub condition_ii_witness: Option<String>,
}

impl RichnessConditions {
    pub fn holds(&self) -> bool {
        self.condition_i && self.condition_ii
    }
}

/// Default factor length bound for [`richness_conditions_check`].
pub fn default_condition_len(v_len: usize) -> usize {
    safe_length(v_len, DEFAULT_SAFE_DIVISOR).clamp(1, THRESHOLD_SCAN_CAP)
}

/// Checks both richness conditions on `v_prefix`, condition (i) for
/// factors of length at most `max_len`.
pub fn richness_conditions_check(theta2: &Antimorphism, v_prefix: &Word, max_len: usize) -> Result<RichnessConditions> {
    theta2.check_word(v_prefix)?;
    if v_prefix.is_empty() {
        return Err(Error::Precondition("derived word is empty".into()));
    }
    let scan = factor_scan_slice(theta2, v_prefix.symbols(), max_len.max(1));
    let letters = scan.violations.iter().find(|r| r.len == 1 && r.alternation > 0);
    let mirror = scan.violations.iter().find(|r| r.mirror_bounded > 0);
    Ok(RichnessConditions {
        checked_up_to: scan.max_len,
        condition_i: mirror.is_none(),
        condition_i_witness: mirror.and_then(|r| r.mirror_witness.clone()),
        condition_ii: letters.is_none(),
        condition_ii_witness: letters.and_then(|r| r.alternation_witness.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attempt {
    pub size: usize,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Theorem1Outcome {
    pub coding: SimplePathCoding,
    pub thresholds: Thresholds,
    pub conditions: RichnessConditions,
    pub refactorization: bool,
    pub attempts: Vec<Attempt>,
    pub verdict: Verdict,
}

/// Simple-path coding at the heuristic (or given) `n`, retried at doubled
/// `n` while the richness conditions fail.
pub fn theorem1_pipeline(theta: &Antimorphism, prefix: &Word, n: Option<usize>, opts: &PipelineOptions) -> Result<Theorem1Outcome> {
    let thresholds = empirical_thresholds(theta, prefix, opts.margin)?;
    let mut n = n.unwrap_or_else(|| thresholds.path_length());
    let mut attempts = Vec::new();
    loop {
        let coding = theorem1_decompose(theta, prefix, n)?;
        let conditions = richness_conditions_check(&coding.theta2, &coding.v_prefix, default_condition_len(coding.v_prefix.len()))?;
        let refactorization = coding.refactorizes(prefix);
        let ok = conditions.holds() && refactorization && coding.aligned;
        if !ok {
            attempts.push(Attempt {
                size: coding.n,
                reason: describe_t1_failure(&coding, &conditions, refactorization),
            });
        }
        let next = 2 * coding.n;
        if ok || attempts.len() > opts.retry_budget || next + 1 >= prefix.len() {
            return Ok(Theorem1Outcome {
                coding,
                thresholds,
                conditions,
                refactorization,
                attempts,
                verdict: if ok { Verdict::Pass } else { Verdict::Inconclusive },
            });
        }
        n = next;
    }
}

fn describe_t1_failure(c: &SimplePathCoding, r: &RichnessConditions, refac: bool) -> String {
    let mut parts = Vec::new();
    if let Some(w) = &r.condition_i_witness {
        parts.push(format!("condition (i) fails on `{w}`"));
    }
    if let Some(w) = &r.condition_ii_witness {
        parts.push(format!("condition (ii) fails on `{w}`"));
    }
    if !refac {
        parts.push("refactorization mismatch".into());
    }
    if !c.aligned {
        parts.push("no special prefix found; coding not aligned at 0".into());
    }
    parts.join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnWordCoding {
    pub p: Word,
    /// Return words `q^(1..M)` in order of first occurrence.
    pub returns: Vec<Word>,
    /// Letters `1..M`.
    pub alphabet: Arc<Alphabet>,
    pub phi: Morphism,
    pub v_prefix: Word,
    /// Occurrences of `p`; `v_prefix` covers `u[0..last]`.
    pub occurrences: Vec<usize>,
    pub uncovered_tail: usize,
}

impl ReturnWordCoding {
    pub fn m(&self) -> usize {
        self.returns.len()
    }

    /// `φ(v_prefix)·p` equals the prefix up to the end of the last
    /// occurrence of `p`.
    pub fn refactorizes(&self, prefix: &Word) -> bool {
        let last = *self.occurrences.last().expect("two occurrences");
        let mut img = self.phi.apply_slice(self.v_prefix.symbols());
        img.extend_from_slice(self.p.symbols());
        img == prefix.symbols()[..last + self.p.len()]
    }
}

/// Candidate prefix `p` and what disqualified it.
fn check_candidate(theta: &Antimorphism, text: &[Letter], z: &[usize], radii: &PalRadii, len: usize) -> std::result::Result<Vec<usize>, String> {
    let occ: Vec<usize> = (0..text.len()).filter(|&i| z[i] >= len).collect();
    if occ.len() < 2 {
        return Err(format!("occurs {} time(s)", occ.len()));
    }
    for pair in occ.windows(2) {
        if !radii.is_palindrome(pair[0], pair[1] + len) {
            return Err(format!(
                "complete return `{}` is not a palindrome",
                render(theta.alphabet(), &text[pair[0]..pair[1] + len])
            ));
        }
    }
    Ok(occ)
}

fn build_return_coding(prefix: &Word, len: usize, occ: Vec<usize>) -> Result<ReturnWordCoding> {
    let text = prefix.symbols();
    let mut ids: HashMap<&[Letter], Letter> = HashMap::new();
    let mut returns: Vec<Vec<Letter>> = Vec::new();
    let mut v = Vec::with_capacity(occ.len() - 1);
    for pair in occ.windows(2) {
        let q = &text[pair[0]..pair[1]];
        let id = *ids.entry(q).or_insert_with(|| {
            returns.push(q.to_vec());
            (returns.len() - 1) as Letter
        });
        v.push(id);
    }
    let alpha = Alphabet::new((1..=returns.len()).map(|i| i.to_string()))?;
    let phi = Morphism::new(alpha.clone(), prefix.alphabet().clone(), returns.clone())?;
    phi.ensure_non_erasing()?;
    let last = *occ.last().expect("two occurrences");
    Ok(ReturnWordCoding {
        p: prefix.prefix(len),
        returns: returns.into_iter().map(|q| Word::from_trusted(prefix.alphabet().clone(), q)).collect(),
        alphabet: alpha.clone(),
        phi,
        v_prefix: Word::from_trusted(alpha, v),
        occurrences: occ,
        uncovered_tail: text.len() - last,
    })
}

/// Return-word coding of the prefix by a Θ-palindromic prefix `p`. Without
/// a hint, `p` is the shortest Θ-palindromic prefix longer than `margin`
/// times the largest length with a non-palindromic complete return, whose
/// own complete returns are all Θ-palindromes.
pub fn theorem2_decompose_with(theta: &Antimorphism, prefix: &Word, p_hint: Option<&Word>, margin: usize) -> Result<ReturnWordCoding> {
    theta.check_word(prefix)?;
    let text = prefix.symbols();
    let radii = PalRadii::new(theta, text);
    let z = z_array(text);
    if let Some(p) = p_hint {
        theta.check_word(p)?;
        if p.is_empty() || !p.is_prefix_of(prefix) || !theta.is_palindrome_slice(p.symbols()) {
            return Err(Error::Precondition(format!("`{p}` is not a non-empty Θ-palindromic prefix")));
        }
        let occ = check_candidate(theta, text, &z, &radii, p.len()).map_err(|reason| match reason.strip_prefix("complete return `") {
            Some(rest) => Error::NonPalindromicReturn {
                factor: p.to_string(),
                ret: rest.split('`').next().unwrap_or_default().to_string(),
            },
            None => Error::Precondition(format!("`{p}` {reason}")),
        })?;
        return build_return_coding(prefix, p.len(), occ);
    }
    let k = crw_scan_slice(theta, text, 1).max_violating_len.unwrap_or(0);
    let mut best: Option<(usize, String)> = None;
    for len in (margin * k + 1)..=text.len() / 2 {
        if !radii.is_palindrome(0, len) {
            continue;
        }
        match check_candidate(theta, text, &z, &radii, len) {
            Ok(occ) => return build_return_coding(prefix, len, occ),
            Err(reason) => {
                best.get_or_insert((len, reason));
            }
        }
    }
    Err(Error::NoQualifyingPrefix(match best {
        Some((len, reason)) => format!("best candidate `{}`: {reason}", render(theta.alphabet(), &text[..len])),
        None => format!("no Θ-palindromic prefix longer than {} in the first half of the prefix", margin * k),
    }))
}

pub fn theorem2_decompose(theta: &Antimorphism, prefix: &Word, p_hint: Option<&Word>) -> Result<ReturnWordCoding> {
    theorem2_decompose_with(theta, prefix, p_hint, DEFAULT_MARGIN)
}

/// `p·Θ(q) = q·p`.
pub fn verify_eq3(theta: &Antimorphism, p: &Word, q: &Word) -> Result<bool> {
    theta.check_word(p)?;
    theta.check_word(q)?;
    let mut lhs = p.symbols().to_vec();
    lhs.extend(theta.apply_slice(q.symbols()));
    let mut rhs = q.symbols().to_vec();
    rhs.extend_from_slice(p.symbols());
    Ok(lhs == rhs)
}

/// `Θ(φ(w)·p) = φ(w̃)·p`, with `w̃` the reversal of `w`.
pub fn verify_eq4(theta: &Antimorphism, phi: &Morphism, p: &Word, w: &Word) -> Result<bool> {
    theta.check_word(p)?;
    let mut left = phi.apply(w)?.into_symbols();
    left.extend_from_slice(p.symbols());
    let reversed: Vec<Letter> = w.symbols().iter().rev().copied().collect();
    let mut right = phi.apply_slice(&reversed);
    right.extend_from_slice(p.symbols());
    Ok(theta.apply_slice(&left) == right)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub samples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub seed: u64,
}

/// Checks the identity of [`verify_eq4`] on random words of length at most
/// `max_len` over the derived alphabet.
pub fn sample_eq4(theta: &Antimorphism, coding: &ReturnWordCoding, samples: usize, max_len: usize, seed: u64) -> Result<SampleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = coding.m() as Letter;
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..samples {
        let len = rng.gen_range(0..=max_len);
        let w: Vec<Letter> = (0..len).map(|_| rng.gen_range(0..m)).collect();
        let w = Word::from_trusted(coding.alphabet.clone(), w);
        if !verify_eq4(theta, &coding.phi, &coding.p, &w)? {
            failures += 1;
            first_failure.get_or_insert_with(|| show(&w));
        }
    }
    Ok(SampleReport {
        samples,
        failures,
        first_failure,
        seed,
    })
}

/// Distinct factors of `v` of length at most `max_len` have distinct
/// images `φ(w)·p`.
pub fn injective_on_factors(coding: &ReturnWordCoding, max_len: usize) -> Option<(String, String)> {
    let v = coding.v_prefix.symbols();
    let p = coding.p.symbols();
    for n in 1..=max_len.min(v.len()) {
        let mut seen: HashMap<Vec<Letter>, &[Letter]> = HashMap::new();
        for w in v.windows(n) {
            let mut img = coding.phi.apply_slice(w);
            img.extend_from_slice(p);
            if let Some(prev) = seen.insert(img, w) {
                if prev != w {
                    let r = |s: &[Letter]| render(&coding.alphabet, s);
                    return Some((r(prev), r(w)));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem2Checks {
    pub eq3_all: bool,
    pub eq3_failures: Vec<String>,
    pub eq4: SampleReport,
    pub refactorization: bool,
    pub injective: bool,
    pub injectivity_witness: Option<(String, String)>,
    /// Classical palindromic defect of `v_prefix`.
    pub v_defect: usize,
    /// Non-palindromic complete returns of palindromes in `v_prefix`.
    pub v_crw_violations: usize,
}

impl Theorem2Checks {
    pub fn all_pass(&self) -> bool {
        self.eq3_all && self.eq4.failures == 0 && self.refactorization && self.injective && self.v_defect == 0 && self.v_crw_violations == 0
    }
}

pub fn theorem2_checks(theta: &Antimorphism, prefix: &Word, coding: &ReturnWordCoding, opts: &PipelineOptions) -> Result<Theorem2Checks> {
    let mut eq3_failures = Vec::new();
    for q in &coding.returns {
        if !verify_eq3(theta, &coding.p, q)? {
            eq3_failures.push(show(q));
        }
    }
    let eq4 = sample_eq4(theta, coding, opts.eq4_samples, opts.eq4_max_len, opts.seed)?;
    let witness = injective_on_factors(coding, INJECTIVITY_LEN);
    let tr = Antimorphism::reversal(coding.alphabet.clone());
    let v = coding.v_prefix.symbols();
    Ok(Theorem2Checks {
        eq3_all: eq3_failures.is_empty(),
        eq3_failures,
        eq4,
        refactorization: coding.refactorizes(prefix),
        injective: witness.is_none(),
        injectivity_witness: witness,
        v_defect: PalIndex::from_slice(&tr, v).defect(),
        v_crw_violations: crw_scan_slice(&tr, v, 1).violation_count,
    })
}

#[derive(Debug, Clone)]
pub struct Theorem2Outcome {
    pub coding: ReturnWordCoding,
    pub checks: Theorem2Checks,
    pub verdict: Verdict,
}

pub fn theorem2_pipeline(theta: &Antimorphism, prefix: &Word, p_hint: Option<&Word>, opts: &PipelineOptions) -> Result<Theorem2Outcome> {
    let coding = theorem2_decompose_with(theta, prefix, p_hint, opts.margin)?;
    let checks = theorem2_checks(theta, prefix, &coding, opts)?;
    let verdict = if checks.all_pass() { Verdict::Pass } else { Verdict::Inconclusive };
    Ok(Theorem2Outcome { coding, checks, verdict })
}

/// Largest `n` at which some left special factor is not a prefix, or the
/// prefix of length `n` has a different number of left extensions than the
/// prefix of length `max_len`. Returns that number of extensions too.
fn left_special_threshold(text: &[Letter], max_len: usize) -> (usize, usize) {
    let valence = |n: usize| extension_map(text, n)[&text[..n]].left.len();
    let final_valence = valence(max_len);
    let mut last = 0;
    for n in 1..=max_len {
        let ext = extension_map(text, n);
        let stray = ext.iter().any(|(f, e)| e.left.len() >= 2 && *f != &text[..n]);
        if stray || ext[&text[..n]].left.len() != final_valence {
            last = n;
        }
    }
    (last, final_valence)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem3Checks {
    pub m: usize,
    pub alphabet_size: usize,
    pub m_within_alphabet: bool,
    /// Last letters of the return words, in return order.
    pub last_letters: Vec<String>,
    pub distinct_last_letters: bool,
    /// `None` when `M = 1` (periodic word, nothing to check).
    pub arnoux_rauzy: Option<ArnouxRauzyCheck>,
}

impl Theorem3Checks {
    pub fn all_pass(&self) -> bool {
        self.m_within_alphabet && self.distinct_last_letters && self.arnoux_rauzy.as_ref().is_none_or(|c| c.passes)
    }
}

#[derive(Debug, Clone)]
pub struct Theorem3Outcome {
    pub source: String,
    pub prefix: Word,
    /// Largest length with a stray left special factor.
    pub l_threshold: usize,
    /// Left extensions of long prefixes.
    pub prefix_valence: usize,
    pub k_threshold: usize,
    pub margin: usize,
    pub theorem2: Theorem2Outcome,
    pub checks: Theorem3Checks,
    pub attempts: Vec<Attempt>,
    pub verdict: Verdict,
}

fn theorem3_checks(theta: &Antimorphism, coding: &ReturnWordCoding) -> Theorem3Checks {
    let alpha = theta.alphabet();
    let last: Vec<Letter> = coding.returns.iter().map(|q| *q.symbols().last().expect("non-empty return")).collect();
    let mut sorted = last.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let v = &coding.v_prefix;
    let ar = (coding.m() > 1).then(|| {
        let max_len = safe_length(v.len(), DEFAULT_SAFE_DIVISOR).max(1).min(v.len().saturating_sub(1));
        arnoux_rauzy_check(v, max_len, coding.m())
    });
    Theorem3Checks {
        m: coding.m(),
        alphabet_size: alpha.size(),
        m_within_alphabet: coding.m() <= alpha.size(),
        last_letters: last.iter().map(|&a| alpha.name(a).to_string()).collect(),
        distinct_last_letters: sorted.len() == last.len(),
        arnoux_rauzy: ar,
    }
}

/// Generates `scale` letters of the Θ-standard word with seed, chooses a
/// bispecial Θ-palindromic prefix above the estimated thresholds and checks
/// that the derived word is an Arnoux–Rauzy word over at most `#A` letters.
pub fn theorem3_pipeline(theta: &Antimorphism, seed: &Word, d: DirectiveSequence, scale: usize, opts: &PipelineOptions) -> Result<Theorem3Outcome> {
    let source = theta_standard_with_seed_source(theta, seed, d)?;
    let prefix = source.prefix(scale);
    let text = prefix.symbols();
    let scan_len = safe_length(scale, DEFAULT_SAFE_DIVISOR).clamp(1, THRESHOLD_SCAN_CAP).min(scale.saturating_sub(2));
    if scan_len == 0 {
        return Err(Error::Precondition(format!("scale {scale} is too small")));
    }
    let (l_threshold, prefix_valence) = left_special_threshold(text, scan_len);
    let k_threshold = crw_scan_slice(theta, text, 1).max_violating_len.unwrap_or(0);
    let floor = opts.margin * l_threshold.max(k_threshold);
    let radii = PalRadii::new(theta, text);
    let z = z_array(text);
    let mut attempts = Vec::new();
    let mut last_outcome = None;
    for len in (floor + 1)..=text.len() / 2 {
        if !radii.is_palindrome(0, len) {
            continue;
        }
        let ext = extension_map(text, len);
        let e = &ext[&text[..len]];
        if e.left.len() < 2 || e.right.len() < 2 {
            continue;
        }
        let occ = match check_candidate(theta, text, &z, &radii, len) {
            Ok(occ) => occ,
            Err(reason) => {
                attempts.push(Attempt { size: len, reason });
                if attempts.len() > opts.retry_budget {
                    break;
                }
                continue;
            }
        };
        let coding = build_return_coding(&prefix, len, occ)?;
        let checks2 = theorem2_checks(theta, &prefix, &coding, opts)?;
        let checks3 = theorem3_checks(theta, &coding);
        let ok = checks2.all_pass() && checks3.all_pass();
        if !ok {
            attempts.push(Attempt {
                size: len,
                reason: describe_t3_failure(&checks2, &checks3),
            });
        }
        let verdict2 = if checks2.all_pass() { Verdict::Pass } else { Verdict::Inconclusive };
        last_outcome = Some((
            Theorem2Outcome {
                coding,
                checks: checks2,
                verdict: verdict2,
            },
            checks3,
        ));
        if ok || attempts.len() > opts.retry_budget {
            break;
        }
    }
    let (theorem2, checks) = last_outcome.ok_or_else(|| {
        Error::NoQualifyingPrefix(match attempts.last() {
            Some(a) => format!("last candidate of length {}: {}", a.size, a.reason),
            None => format!("no bispecial Θ-palindromic prefix longer than {floor} in the first half of the prefix"),
        })
    })?;
    let verdict = if theorem2.checks.all_pass() && checks.all_pass() { Verdict::Pass } else { Verdict::Inconclusive };
    Ok(Theorem3Outcome {
        source: source.describe(),
        prefix,
        l_threshold,
        prefix_valence,
        k_threshold,
        margin: opts.margin,
        theorem2,
        checks,
        attempts,
        verdict,
    })
}

fn describe_t3_failure(c2: &Theorem2Checks, c3: &Theorem3Checks) -> String {
    let mut parts = Vec::new();
    if !c2.all_pass() {
        parts.push(format!(
            "derived-word checks failed (eq3 {}, eq4 failures {}, refactorization {}, injective {}, defect {}, crw violations {})",
            c2.eq3_all, c2.eq4.failures, c2.refactorization, c2.injective, c2.v_defect, c2.v_crw_violations
        ));
    }
    if !c3.m_within_alphabet {
        parts.push(format!("M = {} exceeds #A = {}", c3.m, c3.alphabet_size));
    }
    if !c3.distinct_last_letters {
        parts.push(format!("return words end with {:?}", c3.last_letters));
    }
    if let Some(ar) = c3.arnoux_rauzy.as_ref().filter(|c| !c.passes) {
        parts.push(format!("Arnoux-Rauzy check fails at {:?}: {}", ar.first_failure, ar.reason.clone().unwrap_or_default()));
    }
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fibonacci_source, periodic_source, theta_standard_with_seed_source};
    use proptest::prelude::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::from_chars("ab").unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(&ab(), s).unwrap()
    }

    fn tr() -> Antimorphism {
        Antimorphism::reversal(ab())
    }

    fn exchange() -> Antimorphism {
        Antimorphism::from_pairs(ab(), &[("a", "b")]).unwrap()
    }

    fn exchange_word(n: usize) -> Word {
        let d = DirectiveSequence::parse(&ab(), "(ab)").unwrap();
        theta_standard_with_seed_source(&exchange(), &Word::empty(ab()), d).unwrap().prefix(n)
    }

    fn images(c: &SimplePathCoding) -> Vec<(String, String, String)> {
        c.table.iter().map(|l| (l.name.clone(), l.path.to_string(), l.image.to_string())).collect()
    }

    #[test]
    fn fibonacci_paths_n1() {
        let u = fibonacci_source().prefix(2000);
        let c = theorem1_decompose(&tr(), &u, 1).unwrap();
        assert!(c.aligned && !c.periodic);
        assert_eq!(c.n, 1);
        assert_eq!(
            images(&c),
            vec![
                ("[0]".into(), "aba".into(), "ab".into()),
                ("[1]".into(), "aa".into(), "a".into())
            ]
        );
        assert!(c.theta2.is_reversal());
        assert!(c.refactorizes(&u));
        assert_eq!(c.covered.0, 0);
        let r = richness_conditions_check(&c.theta2, &c.v_prefix, 16).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn periodic_branch_is_unary() {
        let u = periodic_source(&w("ab")).unwrap().prefix(101);
        let c = theorem1_decompose(&tr(), &u, 1).unwrap();
        assert!(c.periodic);
        assert_eq!(c.table[0].image.to_string(), "ab");
        assert_eq!(c.v_prefix.len(), 50);
        assert_eq!(c.uncovered_tail, 1);
        assert!(c.refactorizes(&u));
        let r = richness_conditions_check(&c.theta2, &c.v_prefix, 8).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn non_closed_input_is_rejected() {
        let abc = Alphabet::from_chars("abc").unwrap();
        let u = periodic_source(&Word::parse(&abc, "abc").unwrap()).unwrap().prefix(300);
        let err = theorem1_decompose(&Antimorphism::reversal(abc), &u, 2).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
    }

    #[test]
    fn exchange_fixture_path_coding() {
        let u = exchange_word(20000);
        let out = theorem1_pipeline(&exchange(), &u, None, &PipelineOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Pass, "{:?}", out.attempts);
        assert!(out.coding.n > out.thresholds.h());
        // At n = 1 the mirror-bounded factor condition fails on this word.
        let c = theorem1_decompose(&exchange(), &u, 1).unwrap();
        let r = richness_conditions_check(&c.theta2, &c.v_prefix, 16).unwrap();
        assert!(!r.holds());
    }

    #[test]
    fn corrupted_v_is_detected() {
        let u = fibonacci_source().prefix(2000);
        let c = theorem1_decompose(&tr(), &u, 1).unwrap();
        let mut v = c.v_prefix.symbols().to_vec();
        let i = v.windows(2).position(|p| p[0] != p[1]).unwrap() + 20;
        let j = (i..v.len()).find(|&j| v[j] != v[i]).unwrap();
        v.swap(i, j);
        let v = Word::new(c.v_prefix.alphabet().clone(), v).unwrap();
        assert!(!richness_conditions_check(&c.theta2, &v, 16).unwrap().holds());
    }

    #[test]
    fn single_letter_v() {
        let a = Alphabet::new(["[0]"]).unwrap();
        let v = Word::new(a.clone(), vec![0; 5]).unwrap();
        assert!(richness_conditions_check(&Antimorphism::reversal(a), &v, 3).unwrap().holds());
    }

    #[test]
    fn fibonacci_return_coding() {
        let u = fibonacci_source().prefix(3000);
        let c = theorem2_decompose(&tr(), &u, Some(&w("aba"))).unwrap();
        assert_eq!(c.m(), 2);
        let qs: Vec<String> = c.returns.iter().map(|q| q.to_string()).collect();
        assert_eq!(qs, vec!["aba", "ab"]);
        assert!(c.refactorizes(&u));
        let checks = theorem2_checks(&tr(), &u, &c, &PipelineOptions::default()).unwrap();
        assert!(checks.all_pass(), "{checks:?}");
        let auto = theorem2_decompose(&tr(), &u, None).unwrap();
        assert_eq!(auto.p.to_string(), "a");
    }

    #[test]
    fn periodic_return_coding() {
        let u = periodic_source(&w("aba")).unwrap().prefix(300);
        let c = theorem2_decompose(&tr(), &u, Some(&w("aba"))).unwrap();
        assert_eq!(c.m(), 1);
        assert_eq!(c.returns[0].to_string(), "aba");
        assert!(c.v_prefix.symbols().iter().all(|&x| x == 0));
    }

    #[test]
    fn bad_hints() {
        let u = fibonacci_source().prefix(300);
        assert!(theorem2_decompose(&tr(), &u, Some(&w("ab"))).is_err());
        assert!(theorem2_decompose(&tr(), &u, Some(&w("b"))).is_err());
        let tm = crate::generators::thue_morse_source().prefix(300);
        assert!(matches!(
            theorem2_decompose(&tr(), &tm, Some(&w("abba"))),
            Err(Error::NonPalindromicReturn { .. })
        ));
    }

    #[test]
    fn exchange_fixture_return_coding() {
        let u = exchange_word(20000);
        let out = theorem2_pipeline(&exchange(), &u, None, &PipelineOptions::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Pass, "{:?}", out.checks);
        assert_eq!(out.checks.v_defect, 0);
    }

    #[test]
    fn eq3_examples() {
        assert!(verify_eq3(&tr(), &w("aba"), &w("ab")).unwrap());
        assert!(!verify_eq3(&tr(), &w("aa"), &w("b")).unwrap());
        assert!(verify_eq3(&tr(), &w("aa"), &Word::empty(ab())).unwrap());
    }

    #[test]
    fn eq4_base_cases() {
        let u = fibonacci_source().prefix(500);
        let c = theorem2_decompose(&tr(), &u, Some(&w("aba"))).unwrap();
        assert!(verify_eq4(&tr(), &c.phi, &c.p, &Word::empty(c.alphabet.clone())).unwrap());
        for i in 0..c.m() as Letter {
            let single = Word::new(c.alphabet.clone(), vec![i]).unwrap();
            assert_eq!(
                verify_eq4(&tr(), &c.phi, &c.p, &single).unwrap(),
                verify_eq3(&tr(), &c.p, &c.returns[i as usize]).unwrap()
            );
        }
    }

    #[test]
    fn theorem3_examples() {
        let opts = PipelineOptions::default();
        let d = DirectiveSequence::parse(&ab(), "(ab)").unwrap();
        let out = theorem3_pipeline(&tr(), &Word::empty(ab()), d.clone(), 5000, &opts).unwrap();
        assert_eq!(out.verdict, Verdict::Pass, "{:?}", out.attempts);
        assert_eq!(out.checks.m, 2);
        let out = theorem3_pipeline(&exchange(), &Word::empty(ab()), d, 20000, &opts).unwrap();
        assert_eq!(out.verdict, Verdict::Pass, "{:?}", out.attempts);
        assert!(out.checks.m <= 2);
        let abcd = Alphabet::from_chars("abcd").unwrap();
        let th = Antimorphism::from_pairs(abcd.clone(), &[("a", "b"), ("c", "d")]).unwrap();
        let d = DirectiveSequence::parse(&abcd, "(ab)").unwrap();
        let out = theorem3_pipeline(&th, &Word::parse(&abcd, "ca").unwrap(), d, 20000, &opts).unwrap();
        assert!(out.checks.m <= 4);
    }

    proptest! {
        #[test]
        fn eq3_implies_eq4(raw in proptest::collection::vec(0u32..2, 0..7)) {
            let u = fibonacci_source().prefix(2000);
            let c = theorem2_decompose(&tr(), &u, Some(&w("abaaba"))).unwrap();
            prop_assume!(c.returns.iter().all(|q| verify_eq3(&tr(), &c.p, q).unwrap()));
            let m = c.m() as u32;
            let wd = Word::new(c.alphabet.clone(), raw.into_iter().map(|x| x % m).collect()).unwrap();
            prop_assert!(verify_eq4(&tr(), &c.phi, &c.p, &wd).unwrap());
        }
    }
}
