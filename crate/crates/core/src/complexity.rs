//! Factor complexity `C(n)`, Θ-palindromic complexity `P(n)`, the gap
//! `T(n) = C(n+1) − C(n) + 2 − P(n+1) − P(n)` and closure under Θ.
//!
//! Everything here is computed over a finite prefix standing in for an
//! infinite word. Counts are exact for the prefix; they are only trusted
//! for the infinite word up to `safe_length`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::LengthClasses;
use crate::palindromes::PalRadii;
use crate::words::{render, Antimorphism, Letter, Word};

/// Default ratio between prefix length and the largest trusted factor length.
pub const DEFAULT_SAFE_DIVISOR: usize = 64;

pub fn safe_length(prefix_len: usize, divisor: usize) -> usize {
    prefix_len / divisor.max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub c: usize,
    pub p: usize,
    /// `T(n)`, defined for `n ≥ 1`.
    pub t: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexityTable {
    pub source: String,
    pub max_len: usize,
    pub safe_length: usize,
    pub rows: Vec<ComplexityRow>,
}

impl ComplexityTable {
    pub fn c(&self, n: usize) -> usize {
        self.rows[n].c
    }

    pub fn p(&self, n: usize) -> usize {
        self.rows[n].p
    }

    pub fn t(&self, n: usize) -> Option<i64> {
        self.rows.get(n).and_then(|r| r.t)
    }

    /// Largest `n` for which the table is trusted.
    pub fn trusted_len(&self) -> usize {
        self.safe_length.min(self.max_len)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,C,P,T\n");
        for r in &self.rows {
            let t = r.t.map(|t| t.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", r.n, r.c, r.p, t));
        }
        out
    }
}

pub fn complexity_table(theta: &Antimorphism, prefix: &Word, max_len: usize) -> Result<ComplexityTable> {
    complexity_table_with(theta, prefix, max_len, DEFAULT_SAFE_DIVISOR, "")
}

/// [`complexity_table`] with an explicit safe-length divisor and source label.
pub fn complexity_table_with(
    theta: &Antimorphism,
    prefix: &Word,
    max_len: usize,
    safe_divisor: usize,
    source: &str,
) -> Result<ComplexityTable> {
    theta.check_word(prefix)?;
    let text = prefix.symbols();
    if max_len + 1 > text.len() {
        return Err(Error::OutOfRange {
            what: "table length N (N + 1 must not exceed the prefix length)",
            value: max_len,
            min: 0,
            max: text.len().saturating_sub(1),
        });
    }
    let radii = PalRadii::new(theta, text);
    let mut classes = LengthClasses::new(text);
    let mut counts = Vec::with_capacity(max_len + 2);
    loop {
        let n = classes.len();
        let pal = classes
            .first_occurrences()
            .iter()
            .filter(|&&s| radii.is_palindrome(s, s + n))
            .count();
        counts.push((classes.count(), pal));
        if n == max_len + 1 || !classes.advance() {
            break;
        }
    }
    let rows = (0..=max_len)
        .map(|n| {
            let (c, p) = counts[n];
            let t = (n >= 1).then(|| {
                let (c1, p1) = counts[n + 1];
                c1 as i64 - c as i64 + 2 - p1 as i64 - p as i64
            });
            ComplexityRow { n, c, p, t }
        })
        .collect();
    Ok(ComplexityTable {
        source: source.to_string(),
        max_len,
        safe_length: safe_length(text.len(), safe_divisor),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureCheck {
    pub closed: bool,
    pub level: usize,
    /// A shortest factor whose image does not occur.
    #[serde(serialize_with = "crate::report::ser_opt_word")]
    pub witness: Option<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct SliceClosure {
    pub witness: Option<Vec<Letter>>,
}

fn first_unclosed(theta: &Antimorphism, text: &[Letter], n: usize) -> Option<usize> {
    if n == 0 || n > text.len() {
        return None;
    }
    let set: HashSet<&[Letter]> = text.windows(n).collect();
    let mut image = vec![0; n];
    text.windows(n).position(|win| {
        for (k, &a) in win.iter().rev().enumerate() {
            image[k] = theta.image(a);
        }
        !set.contains(image.as_slice())
    })
}

pub(crate) fn closed_under_theta_slice(theta: &Antimorphism, text: &[Letter], n: usize) -> SliceClosure {
    let n = n.min(text.len());
    if first_unclosed(theta, text, n).is_none() {
        return SliceClosure { witness: None };
    }
    // Closure at length m implies closure at every shorter length, so the
    // shortest failing length can be found by bisection.
    let (mut lo, mut hi) = (0, n);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if first_unclosed(theta, text, mid).is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let pos = first_unclosed(theta, text, hi).expect("failing length");
    SliceClosure {
        witness: Some(text[pos..pos + hi].to_vec()),
    }
}

/// Whether every factor of length ≤ `n` has its Θ-image among the factors
/// of the prefix.
pub fn closed_under_theta(theta: &Antimorphism, prefix: &Word, n: usize) -> Result<ClosureCheck> {
    theta.check_word(prefix)?;
    let r = closed_under_theta_slice(theta, prefix.symbols(), n);
    Ok(ClosureCheck {
        closed: r.witness.is_none(),
        level: n,
        witness: r
            .witness
            .map(|w| Word::from_trusted(prefix.alphabet().clone(), w)),
    })
}

impl ClosureCheck {
    pub fn describe_witness(&self) -> Option<String> {
        self.witness
            .as_ref()
            .map(|w| render(w.alphabet(), w.symbols()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub checked_up_to: usize,
    pub closed: bool,
    /// `n` with `T(n) < 0`.
    pub violations: Vec<usize>,
}

pub fn check_inequality2(table: &ComplexityTable, closed: bool) -> InequalityReport {
    let limit = table.trusted_len();
    let violations = (1..=limit)
        .filter(|&n| table.t(n).is_some_and(|t| t < 0))
        .collect();
    InequalityReport {
        checked_up_to: limit,
        closed,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RichByT {
    pub rich: bool,
    /// Verdict holds for lengths up to this value.
    pub up_to: usize,
    pub first_nonzero: Option<usize>,
}

/// `T(n) = 0` for `1 ≤ n < L`, with `L` the table's trusted length. Requires
/// a closure check covering `L`.
pub fn is_rich_by_t(table: &ComplexityTable, closure: &ClosureCheck) -> Result<RichByT> {
    let limit = table.trusted_len();
    if !closure.closed || closure.level < limit {
        return Err(Error::Precondition(format!(
            "closure under the antimorphism must be verified up to length {limit}"
        )));
    }
    let first_nonzero = (1..limit).find(|&n| table.t(n) != Some(0));
    Ok(RichByT {
        rich: first_nonzero.is_none(),
        up_to: limit,
        first_nonzero,
    })
}
