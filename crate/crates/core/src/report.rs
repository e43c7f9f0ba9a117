//! Serialization helpers shared by the JSON reports.

use serde::Serializer;

use crate::words::{render, Word};

/// Letters concatenated for one-character alphabets, space-separated
/// otherwise. The empty word is the empty string.
pub(crate) fn show(w: &Word) -> String {
    render(w.alphabet(), w.symbols())
}

pub(crate) fn ser_word<S: Serializer>(w: &Word, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&show(w))
}

pub(crate) fn ser_opt_word<S: Serializer>(w: &Option<Word>, s: S) -> Result<S::Ok, S::Error> {
    match w {
        Some(w) => s.serialize_str(&show(w)),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_words<S: Serializer>(ws: &[Word], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ws.iter().map(show))
}
