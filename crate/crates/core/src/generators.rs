//! Corpus words: periodic words, Thue–Morse, standard episturmian words and
//! Θ-standard words with seed.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::complexity::closed_under_theta_slice;
use crate::error::{Error, Result};
use crate::palindromes::{close_in_place, PalIndex};
use crate::rauzy::extension_counts;
use crate::words::{Alphabet, Antimorphism, Letter, Word};

/// An eventually periodic directive sequence `pre · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveSequence {
    alphabet: Arc<Alphabet>,
    pre: Vec<Letter>,
    period: Vec<Letter>,
}

impl DirectiveSequence {
    pub fn new(alphabet: Arc<Alphabet>, pre: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Config("directive period must be non-empty".into()));
        }
        for &a in pre.iter().chain(&period) {
            alphabet.check(a)?;
        }
        Ok(Self {
            alphabet,
            pre,
            period,
        })
    }

    /// Parses `pre(period)`, e.g. `(ab)` or `aa(abc)`. A bare word without
    /// parentheses is taken as the period.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        let text = text.trim();
        let (pre, period) = match text.find('(') {
            Some(open) => {
                let close = text.rfind(')').filter(|&c| c > open).ok_or_else(|| Error::Parse {
                    context: "directive".into(),
                    line: 1,
                    column: open + 1,
                    message: "unbalanced `(`".into(),
                })?;
                if close + 1 != text.len() {
                    return Err(Error::Parse {
                        context: "directive".into(),
                        line: 1,
                        column: close + 2,
                        message: "trailing characters after `)`".into(),
                    });
                }
                (&text[..open], &text[open + 1..close])
            }
            None => ("", text),
        };
        let pre = Word::parse(alphabet, pre)?.into_symbols();
        let period = Word::parse(alphabet, period)?.into_symbols();
        Self::new(alphabet.clone(), pre, period)
    }

    pub fn at(&self, k: usize) -> Letter {
        if k < self.pre.len() {
            self.pre[k]
        } else {
            self.period[(k - self.pre.len()) % self.period.len()]
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }
}

impl fmt::Display for DirectiveSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |s: &[Letter]| crate::words::render(&self.alphabet, s);
        write!(f, "{}({})", r(&self.pre), r(&self.period))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceKind {
    Periodic(Vec<Letter>),
    ThueMorse,
    Episturmian(DirectiveSequence),
    ThetaStandardSeed {
        theta: Antimorphism,
        seed: Vec<Letter>,
        directive: DirectiveSequence,
    },
}

/// A deterministic generator of prefixes of an infinite word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSource {
    alphabet: Arc<Alphabet>,
    kind: SourceKind,
}

/// Lengths of the successive closure iterates `w_0, w_1, …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionLog {
    pub iterate_lengths: Vec<usize>,
}

pub fn periodic_source(p: &Word) -> Result<WordSource> {
    if p.is_empty() {
        return Err(Error::Config("period must be non-empty".into()));
    }
    Ok(WordSource {
        alphabet: p.alphabet().clone(),
        kind: SourceKind::Periodic(p.symbols().to_vec()),
    })
}

pub fn thue_morse_source() -> WordSource {
    WordSource {
        alphabet: Alphabet::from_chars("ab").expect("static alphabet"),
        kind: SourceKind::ThueMorse,
    }
}

pub fn episturmian_source(d: DirectiveSequence) -> WordSource {
    WordSource {
        alphabet: d.alphabet.clone(),
        kind: SourceKind::Episturmian(d),
    }
}

pub fn theta_standard_with_seed_source(
    theta: &Antimorphism,
    seed: &Word,
    d: DirectiveSequence,
) -> Result<WordSource> {
    theta.check_word(seed)?;
    if **d.alphabet() != **theta.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(WordSource {
        alphabet: theta.alphabet().clone(),
        kind: SourceKind::ThetaStandardSeed {
            theta: theta.clone(),
            seed: seed.symbols().to_vec(),
            directive: d,
        },
    })
}

/// The Fibonacci word, directive `(ab)^ω`.
pub fn fibonacci_source() -> WordSource {
    let alpha = Alphabet::from_chars("ab").expect("static alphabet");
    episturmian_source(DirectiveSequence::parse(&alpha, "(ab)").expect("static directive"))
}

/// The Tribonacci word, directive `(abc)^ω`.
pub fn tribonacci_source() -> WordSource {
    let alpha = Alphabet::from_chars("abc").expect("static alphabet");
    episturmian_source(DirectiveSequence::parse(&alpha, "(abc)").expect("static directive"))
}

impl WordSource {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn kind(&self) -> &SourceKind {
        &self.kind
    }

    pub fn kind_tag(&self) -> &'static str {
        match self.kind {
            SourceKind::Periodic(_) => "periodic",
            SourceKind::ThueMorse => "thue_morse",
            SourceKind::Episturmian(_) => "episturmian",
            SourceKind::ThetaStandardSeed { .. } => "theta_standard_seed",
        }
    }

    pub fn describe(&self) -> String {
        let r = |s: &[Letter]| crate::words::render(&self.alphabet, s);
        match &self.kind {
            SourceKind::Periodic(p) => format!("periodic:{}", r(p)),
            SourceKind::ThueMorse => "thue_morse".into(),
            SourceKind::Episturmian(d) => format!("episturmian:{d}"),
            SourceKind::ThetaStandardSeed {
                theta,
                seed,
                directive,
            } => format!(
                "theta_standard_seed:seed={};directive={};theta={}",
                r(seed),
                directive,
                theta.describe()
            ),
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> Word {
        let symbols = match &self.kind {
            SourceKind::Periodic(p) => (0..n).map(|i| p[i % p.len()]).collect(),
            SourceKind::ThueMorse => (0..n).map(|i| (i as u64).count_ones() % 2).collect(),
            SourceKind::Episturmian(d) => {
                let (mut w, _) = justin_iterates(d, n);
                w.truncate(n);
                w
            }
            SourceKind::ThetaStandardSeed {
                theta,
                seed,
                directive,
            } => {
                let (mut w, _) = closure_iterates(theta, seed, directive, n);
                w.truncate(n);
                w
            }
        };
        Word::from_trusted(self.alphabet.clone(), symbols)
    }

    /// Iterate lengths of the closure construction up to the first iterate
    /// of length at least `n`. Empty for non-closure sources.
    pub fn construction_log(&self, n: usize) -> ConstructionLog {
        let iterate_lengths = match &self.kind {
            SourceKind::Episturmian(d) => justin_iterates(d, n).1,
            SourceKind::ThetaStandardSeed {
                theta,
                seed,
                directive,
            } => closure_iterates(theta, seed, directive, n).1,
            _ => Vec::new(),
        };
        ConstructionLog { iterate_lengths }
    }
}

/// Standard episturmian iterates via Justin's formula: if `x` occurred in
/// the directive at step `j` (last time), `w_{k+1} = w_k · w_{j-1}^{-1} · w_k`,
/// otherwise `w_{k+1} = w_k x w_k`. Independent of the closure routine.
fn justin_iterates(d: &DirectiveSequence, n: usize) -> (Vec<Letter>, Vec<usize>) {
    let mut w: Vec<Letter> = Vec::new();
    let mut lengths = vec![0usize];
    // Length of w_{j-1} for the latest step j using each letter.
    let mut before_last: Vec<Option<usize>> = vec![None; d.alphabet.size()];
    let mut k = 0;
    while w.len() < n {
        let x = d.at(k);
        let cur = w.len();
        match before_last[x as usize] {
            Some(cut) => w.extend_from_within(cut..cur),
            None => {
                w.push(x);
                w.extend_from_within(0..cur);
            }
        }
        before_last[x as usize] = Some(cur);
        lengths.push(w.len());
        k += 1;
    }
    (w, lengths)
}

/// Iterated Θ-palindromic closure: `w_0 = closure(seed)`,
/// `w_{k+1} = closure(w_k · d_{k+1})`.
fn closure_iterates(
    theta: &Antimorphism,
    seed: &[Letter],
    d: &DirectiveSequence,
    n: usize,
) -> (Vec<Letter>, Vec<usize>) {
    let mut idx = PalIndex::from_slice(theta, seed);
    close_in_place(&mut idx);
    let mut lengths = vec![idx.len()];
    let mut k = 0;
    while idx.len() < n {
        idx.push(d.at(k));
        close_in_place(&mut idx);
        lengths.push(idx.len());
        k += 1;
    }
    (idx.text().to_vec(), lengths)
}

/// Result of [`arnoux_rauzy_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArnouxRauzyCheck {
    pub passes: bool,
    pub checked_up_to: usize,
    pub first_failure: Option<usize>,
    pub reason: Option<String>,
}

/// Checks, for every `1 ≤ n ≤ max_len`, that the prefix has exactly one
/// left special and one right special factor of length `n`, each with
/// `valence` extensions, and that its language is closed under reversal up
/// to `max_len`.
pub fn arnoux_rauzy_check(prefix: &Word, max_len: usize, valence: usize) -> ArnouxRauzyCheck {
    let text = prefix.symbols();
    let fail = |n: usize, reason: String| ArnouxRauzyCheck {
        passes: false,
        checked_up_to: max_len,
        first_failure: Some(n),
        reason: Some(reason),
    };
    if max_len == 0 || max_len >= text.len() {
        return fail(max_len, format!("max_len {max_len} out of range for prefix of length {}", text.len()));
    }
    let letters = {
        let mut seen = vec![false; prefix.alphabet().size()];
        text.iter().for_each(|&a| seen[a as usize] = true);
        seen.iter().filter(|&&s| s).count()
    };
    if letters != valence {
        return fail(1, format!("{letters} letters occur, expected {valence}"));
    }
    for n in 1..=max_len {
        let (left, right) = extension_counts(text, n);
        let ls: Vec<usize> = left.into_iter().filter(|&c| c >= 2).collect();
        let rs: Vec<usize> = right.into_iter().filter(|&c| c >= 2).collect();
        if ls.len() != 1 || rs.len() != 1 {
            return fail(n, format!("{} left special and {} right special factors", ls.len(), rs.len()));
        }
        if ls[0] != valence || rs[0] != valence {
            return fail(n, format!("special factor valences {}/{} differ from {valence}", ls[0], rs[0]));
        }
    }
    let tr = Antimorphism::reversal(prefix.alphabet().clone());
    if let Some(w) = closed_under_theta_slice(&tr, text, max_len).witness {
        return fail(w.len(), format!("reversal of `{}` does not occur", crate::words::render(prefix.alphabet(), &w)));
    }
    ArnouxRauzyCheck {
        passes: true,
        checked_up_to: max_len,
        first_failure: None,
        reason: None,
    }
}
