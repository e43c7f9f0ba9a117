//! Alphabets, letter-induced involutive antimorphisms, finite words and
//! morphisms.
//!
//! Letters are arbitrary whitespace-free tokens mapped to dense indices;
//! every algorithm in the crate works on `&[Letter]` slices and only
//! converts back to tokens for display.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Dense index of a letter inside its [`Alphabet`].
pub type Letter = u32;

/// An ordered set of distinct letter tokens.
#[derive(Debug, Clone)]
pub struct Alphabet {
    letters: Vec<String>,
    index: HashMap<String, Letter>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(letters.len());
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLetterToken(l.clone()));
            }
            if index.insert(l.clone(), i as Letter).is_some() {
                return Err(Error::DuplicateLetter(l.clone()));
            }
        }
        Ok(Arc::new(Self { letters, index }))
    }

    /// Alphabet whose letters are the characters of `chars`, in order.
    pub fn from_chars(chars: &str) -> Result<Arc<Self>> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn size(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn index_of(&self, token: &str) -> Result<Letter> {
        self.index
            .get(token)
            .copied()
            .ok_or_else(|| Error::UnknownLetter(token.to_string()))
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.letters[letter as usize]
    }

    /// True when every letter is a single character, so words can be
    /// printed without separators.
    pub fn is_single_char(&self) -> bool {
        self.letters.iter().all(|l| l.chars().count() == 1)
    }

    pub(crate) fn check(&self, letter: Letter) -> Result<()> {
        if (letter as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                index: letter,
                size: self.size(),
            })
        }
    }
}

/// A finite word over an [`Alphabet`]. The empty word is allowed.
#[derive(Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    symbols: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, symbols: Vec<Letter>) -> Result<Self> {
        for &s in &symbols {
            alphabet.check(s)?;
        }
        Ok(Self { alphabet, symbols })
    }

    pub(crate) fn from_trusted(alphabet: Arc<Alphabet>, symbols: Vec<Letter>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.size()));
        Self { alphabet, symbols }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Self {
            alphabet,
            symbols: Vec::new(),
        }
    }

    /// Parses one letter per character.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        let mut buf = [0u8; 4];
        let symbols = text
            .chars()
            .map(|c| alphabet.index_of(c.encode_utf8(&mut buf)))
            .collect::<Result<_>>()?;
        Ok(Self::from_trusted(alphabet.clone(), symbols))
    }

    /// Parses whitespace-separated letter tokens.
    pub fn parse_tokens(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        let symbols = text
            .split_whitespace()
            .map(|t| alphabet.index_of(t))
            .collect::<Result<_>>()?;
        Ok(Self::from_trusted(alphabet.clone(), symbols))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Letter] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Letter> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The factor `w[start..end]`.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Self::from_trusted(self.alphabet.clone(), self.symbols[start..end].to_vec())
    }

    /// The prefix of length `len` (clamped to the word length).
    pub fn prefix(&self, len: usize) -> Word {
        self.factor(0, len.min(self.len()))
    }

    pub fn same_alphabet(&self, other: &Word) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.same_alphabet(other)?;
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Ok(Self::from_trusted(self.alphabet.clone(), symbols))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    pub fn tokens(&self) -> Vec<&str> {
        self.symbols.iter().map(|&s| self.alphabet.name(s)).collect()
    }

    /// Space-separated tokens regardless of letter width.
    pub fn to_token_string(&self) -> String {
        self.tokens().join(" ")
    }
}

/// Renders a slice of letters the same way [`Word`]'s `Display` does.
pub fn render(alphabet: &Alphabet, symbols: &[Letter]) -> String {
    if alphabet.is_single_char() {
        symbols.iter().map(|&s| alphabet.name(s)).collect()
    } else {
        symbols
            .iter()
            .map(|&s| alphabet.name(s))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&render(&self.alphabet, &self.symbols))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && (Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.symbols.cmp(&other.symbols)
    }
}

/// An involutive antimorphism induced by an involution on letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Antimorphism {
    alphabet: Arc<Alphabet>,
    pairing: Vec<Letter>,
}

impl Antimorphism {
    pub fn new(alphabet: Arc<Alphabet>, pairing: Vec<Letter>) -> Result<Self> {
        if pairing.len() != alphabet.size() {
            return Err(Error::Config(format!(
                "pairing has {} entries for an alphabet of size {}",
                pairing.len(),
                alphabet.size()
            )));
        }
        for &p in &pairing {
            alphabet.check(p)?;
        }
        for (a, &b) in pairing.iter().enumerate() {
            if pairing[b as usize] as usize != a {
                return Err(Error::NotInvolutive(alphabet.name(a as Letter).to_string()));
            }
        }
        Ok(Self { alphabet, pairing })
    }

    /// The reversal mapping (identity pairing).
    pub fn reversal(alphabet: Arc<Alphabet>) -> Self {
        let pairing = (0..alphabet.size() as Letter).collect();
        Self { alphabet, pairing }
    }

    /// Builds the antimorphism from explicit pairs; letters not mentioned
    /// are fixed points.
    pub fn from_pairs(alphabet: Arc<Alphabet>, pairs: &[(&str, &str)]) -> Result<Self> {
        Self::build_from_pairs(alphabet, pairs, false)
    }

    /// Like [`Antimorphism::from_pairs`] but every letter must appear in
    /// exactly one pair (fixed points as `(c, c)`).
    pub fn from_pairs_strict(alphabet: Arc<Alphabet>, pairs: &[(&str, &str)]) -> Result<Self> {
        Self::build_from_pairs(alphabet, pairs, true)
    }

    fn build_from_pairs(
        alphabet: Arc<Alphabet>,
        pairs: &[(&str, &str)],
        strict: bool,
    ) -> Result<Self> {
        let mut pairing: Vec<Option<Letter>> = vec![None; alphabet.size()];
        for &(x, y) in pairs {
            let a = alphabet.index_of(x)?;
            let b = alphabet.index_of(y)?;
            for (s, t, name) in [(a, b, x), (b, a, y)] {
                match pairing[s as usize] {
                    Some(prev) if prev != t => return Err(Error::DuplicatePairing(name.into())),
                    Some(_) if a != b => return Err(Error::DuplicatePairing(name.into())),
                    _ => pairing[s as usize] = Some(t),
                }
            }
        }
        let pairing = pairing
            .into_iter()
            .enumerate()
            .map(|(i, p)| match p {
                Some(p) => Ok(p),
                None if strict => Err(Error::UnpairedLetter(
                    alphabet.name(i as Letter).to_string(),
                )),
                None => Ok(i as Letter),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, pairing)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn pairing(&self) -> &[Letter] {
        &self.pairing
    }

    #[inline]
    pub fn image(&self, a: Letter) -> Letter {
        self.pairing[a as usize]
    }

    pub fn is_reversal(&self) -> bool {
        self.pairing.iter().enumerate().all(|(i, &p)| i as Letter == p)
    }

    /// Unordered letter pairs, fixed points as `(a, a)`, in index order.
    pub fn pairs(&self) -> Vec<(Letter, Letter)> {
        self.pairing
            .iter()
            .enumerate()
            .filter(|&(i, &p)| i as Letter <= p)
            .map(|(i, &p)| (i as Letter, p))
            .collect()
    }

    pub fn describe(&self) -> String {
        if self.is_reversal() {
            return "reversal".into();
        }
        let parts: Vec<String> = self
            .pairs()
            .into_iter()
            .map(|(a, b)| format!("{}-{}", self.alphabet.name(a), self.alphabet.name(b)))
            .collect();
        format!("pairs:{}", parts.join(","))
    }

    pub fn apply_slice(&self, w: &[Letter]) -> Vec<Letter> {
        w.iter().rev().map(|&a| self.image(a)).collect()
    }

    pub fn is_palindrome_slice(&self, w: &[Letter]) -> bool {
        let n = w.len();
        (0..n.div_ceil(2)).all(|i| w[i] == self.image(w[n - 1 - i]))
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        Ok(Word::from_trusted(
            self.alphabet.clone(),
            self.apply_slice(w.symbols()),
        ))
    }

    pub fn is_palindrome(&self, w: &Word) -> Result<bool> {
        self.check_word(w)?;
        Ok(self.is_palindrome_slice(w.symbols()))
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, w.alphabet()) || *self.alphabet == **w.alphabet() {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch)
        }
    }

    /// Number of pairs `{a, Θ(a)}` with `a ≠ Θ(a)` meeting `w`.
    pub fn gamma_slice(&self, w: &[Letter]) -> usize {
        let mut seen = vec![false; self.alphabet.size()];
        let mut count = 0;
        for &a in w {
            let b = self.image(a);
            if a != b && !seen[a as usize] && !seen[b as usize] {
                count += 1;
            }
            seen[a as usize] = true;
        }
        count
    }
}

/// A morphism between free monoids, given by its letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Vec<Letter>>,
}

impl Morphism {
    pub fn new(source: Arc<Alphabet>, target: Arc<Alphabet>, images: Vec<Vec<Letter>>) -> Result<Self> {
        if images.len() != source.size() {
            return Err(Error::Config(format!(
                "morphism has {} images for a source alphabet of size {}",
                images.len(),
                source.size()
            )));
        }
        for img in &images {
            for &s in img {
                target.check(s)?;
            }
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn image(&self, a: Letter) -> &[Letter] {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Vec<Letter>] {
        &self.images
    }

    pub fn is_erasing(&self) -> bool {
        self.images.iter().any(Vec::is_empty)
    }

    pub fn ensure_non_erasing(&self) -> Result<()> {
        match self.images.iter().position(Vec::is_empty) {
            Some(i) => Err(Error::ErasingMorphism(
                self.source.name(i as Letter).to_string(),
            )),
            None => Ok(()),
        }
    }

    pub fn apply_slice(&self, w: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(w.len());
        for &a in w {
            out.extend_from_slice(&self.images[a as usize]);
        }
        out
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if !(Arc::ptr_eq(&self.source, w.alphabet()) || *self.source == **w.alphabet()) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Word::from_trusted(
            self.target.clone(),
            self.apply_slice(w.symbols()),
        ))
    }
}

pub fn apply_antimorphism(theta: &Antimorphism, w: &Word) -> Result<Word> {
    theta.apply(w)
}

pub fn is_theta_palindrome(theta: &Antimorphism, w: &Word) -> Result<bool> {
    theta.is_palindrome(w)
}

pub fn apply_morphism(phi: &Morphism, w: &Word) -> Result<Word> {
    phi.apply(w)
}

pub fn gamma(theta: &Antimorphism, w: &Word) -> Result<usize> {
    theta.check_word(w)?;
    Ok(theta.gamma_slice(w.symbols()))
}

/// All (possibly overlapping) occurrences of `needle` in `hay`.
pub fn occurrences_slice(hay: &[Letter], needle: &[Letter]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return Vec::new();
    }
    hay.windows(needle.len())
        .enumerate()
        .filter(|(_, win)| *win == needle)
        .map(|(i, _)| i)
        .collect()
}

pub fn occurrences(w: &Word, f: &Word) -> Result<Vec<usize>> {
    if f.is_empty() {
        return Err(Error::EmptyFactor);
    }
    w.same_alphabet(f)?;
    Ok(occurrences_slice(w.symbols(), f.symbols()))
}

pub fn factor_set(w: &Word, n: usize) -> Result<BTreeSet<Word>> {
    if n > w.len() {
        return Err(Error::OutOfRange {
            what: "factor length",
            value: n,
            min: 0,
            max: w.len(),
        });
    }
    if n == 0 {
        return Ok(BTreeSet::from([Word::empty(w.alphabet().clone())]));
    }
    Ok(w.symbols()
        .windows(n)
        .map(|win| Word::from_trusted(w.alphabet().clone(), win.to_vec()))
        .collect())
}
