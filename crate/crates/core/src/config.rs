//! Textual and JSON inputs: antimorphism specs, generator specs, word files
//! and the morphism exchange format.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{
    episturmian_source, fibonacci_source, periodic_source, theta_standard_with_seed_source, thue_morse_source,
    tribonacci_source, DirectiveSequence, WordSource,
};
use crate::words::{Alphabet, Antimorphism, Letter, Morphism, Word};

/// JSON form of an antimorphism: every letter is listed, and the involution
/// is given either as pairs (fixed letters as `["c", "c"]`) or as a full
/// letter map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntimorphismConfig {
    pub letters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
}

impl AntimorphismConfig {
    pub fn to_antimorphism(&self) -> Result<Antimorphism> {
        let alpha = Alphabet::new(self.letters.iter().cloned())?;
        match (&self.pairs, &self.map) {
            (Some(pairs), None) => {
                let pairs: Vec<(&str, &str)> = pairs.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
                Antimorphism::from_pairs_strict(alpha, &pairs)
            }
            (None, Some(map)) => {
                let mut pairing = Vec::with_capacity(alpha.size());
                for name in alpha.letters() {
                    let image = map.get(name).ok_or_else(|| Error::UnpairedLetter(name.clone()))?;
                    pairing.push(alpha.index_of(image)?);
                }
                if let Some(extra) = map.keys().find(|k| alpha.index_of(k).is_err()) {
                    return Err(Error::UnknownLetter(extra.clone()));
                }
                Antimorphism::new(alpha, pairing)
            }
            _ => Err(Error::Config("antimorphism config needs exactly one of `pairs` or `map`".into())),
        }
    }

    pub fn from_antimorphism(theta: &Antimorphism) -> Self {
        let alpha = theta.alphabet();
        let name = |a: Letter| alpha.name(a).to_string();
        let pairs = (0..alpha.size() as Letter)
            .filter(|&a| theta.image(a) >= a)
            .map(|a| [name(a), name(theta.image(a))])
            .collect();
        Self {
            letters: alpha.letters().to_vec(),
            pairs: Some(pairs),
            map: None,
        }
    }
}

/// The `--theta` argument before an alphabet is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaSpec {
    Reversal,
    /// Explicit pairs; unlisted letters are fixed.
    Pairs(Vec<(String, String)>),
    File(AntimorphismConfig),
}

impl ThetaSpec {
    /// Parses `reversal`, `pairs:a-b,c-d` or a path to a JSON config.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "reversal" || text == "tr" {
            return Ok(Self::Reversal);
        }
        if let Some(rest) = text.strip_prefix("pairs:") {
            let mut pairs = Vec::new();
            for (k, item) in rest.split(',').enumerate() {
                let (a, b) = item.split_once('-').filter(|(a, b)| !a.is_empty() && !b.is_empty()).ok_or_else(|| Error::Parse {
                    context: "--theta".into(),
                    line: 1,
                    column: k + 1,
                    message: format!("expected `x-y`, found `{item}`"),
                })?;
                pairs.push((a.trim().to_string(), b.trim().to_string()));
            }
            return Ok(Self::Pairs(pairs));
        }
        let raw = std::fs::read_to_string(text)?;
        let cfg: AntimorphismConfig = serde_json::from_str(&raw).map_err(|e| Error::Parse {
            context: text.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        cfg.to_antimorphism()?;
        Ok(Self::File(cfg))
    }

    /// Letters named by this argument.
    pub fn letters(&self) -> Vec<String> {
        match self {
            Self::Reversal => Vec::new(),
            Self::Pairs(p) => p.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).collect(),
            Self::File(c) => c.letters.clone(),
        }
    }

    /// A config file fixes the alphabet; other specs adapt to the input.
    pub fn fixed_alphabet(&self) -> Result<Option<Arc<Alphabet>>> {
        match self {
            Self::File(c) => Ok(Some(c.to_antimorphism()?.alphabet().clone())),
            _ => Ok(None),
        }
    }

    pub fn resolve(&self, alphabet: &Arc<Alphabet>) -> Result<Antimorphism> {
        match self {
            Self::Reversal => Ok(Antimorphism::reversal(alphabet.clone())),
            Self::Pairs(p) => {
                let pairs: Vec<(&str, &str)> = p.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
                Antimorphism::from_pairs(alphabet.clone(), &pairs)
            }
            Self::File(c) => {
                let theta = c.to_antimorphism()?;
                if **theta.alphabet() != **alphabet {
                    return Err(Error::AlphabetMismatch);
                }
                Antimorphism::new(alphabet.clone(), theta.pairing().to_vec())
            }
        }
    }
}

/// JSON form of a generator, for `--gen file.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorConfig {
    Fibonacci,
    Tribonacci,
    ThueMorse,
    Periodic {
        period: String,
    },
    Episturmian {
        directive: DirectiveText,
    },
    #[serde(alias = "theta_standard_seed")]
    ThetaStandard {
        #[serde(default)]
        seed: String,
        directive: DirectiveText,
        /// Overrides `--theta` when present.
        #[serde(default)]
        theta: Option<String>,
        #[serde(default)]
        antimorphism: Option<AntimorphismConfig>,
        #[serde(default)]
        letters: Option<Vec<String>>,
    },
}

/// A directive sequence as `"pre(period)"` or as its two parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectiveText {
    Text(String),
    Parts {
        #[serde(default)]
        pre: String,
        period: String,
    },
}

impl DirectiveText {
    pub fn to_text(&self) -> String {
        match self {
            Self::Text(t) => t.clone(),
            Self::Parts { pre, period } => format!("{pre}({period})"),
        }
    }
}

/// The `--gen` argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Fibonacci,
    Tribonacci,
    ThueMorse,
    Periodic(String),
    Episturmian(String),
    /// Seed and directive come from separate arguments unless set here.
    ThetaStandard {
        seed: Option<String>,
        directive: Option<String>,
        theta: Option<ThetaSpec>,
        letters: Option<Vec<String>>,
    },
}

impl GenSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(w) = text.strip_prefix("periodic:") {
            return Ok(Self::Periodic(w.to_string()));
        }
        if let Some(d) = text.strip_prefix("episturmian:") {
            return Ok(Self::Episturmian(d.to_string()));
        }
        match text {
            "fibonacci" => Ok(Self::Fibonacci),
            "tribonacci" => Ok(Self::Tribonacci),
            "thue_morse" | "thue-morse" => Ok(Self::ThueMorse),
            "theta_standard" => Ok(Self::ThetaStandard {
                seed: None,
                directive: None,
                theta: None,
                letters: None,
            }),
            t if t.ends_with(".json") => {
                let raw = std::fs::read_to_string(t)?;
                let cfg: GeneratorConfig = serde_json::from_str(&raw).map_err(|e| Error::Parse {
                    context: t.to_string(),
                    line: e.line(),
                    column: e.column(),
                    message: e.to_string(),
                })?;
                Self::from_config(cfg)
            }
            other => Err(Error::Config(format!(
                "unknown generator `{other}` (expected fibonacci, tribonacci, thue_morse, periodic:<w>, episturmian:<directive>, theta_standard or a .json file)"
            ))),
        }
    }

    pub fn from_config(cfg: GeneratorConfig) -> Result<Self> {
        Ok(match cfg {
            GeneratorConfig::Fibonacci => Self::Fibonacci,
            GeneratorConfig::Tribonacci => Self::Tribonacci,
            GeneratorConfig::ThueMorse => Self::ThueMorse,
            GeneratorConfig::Periodic { period } => Self::Periodic(period),
            GeneratorConfig::Episturmian { directive } => Self::Episturmian(directive.to_text()),
            GeneratorConfig::ThetaStandard {
                seed,
                directive,
                theta,
                antimorphism,
                letters,
            } => {
                let theta = match (theta, antimorphism) {
                    (Some(_), Some(_)) => {
                        return Err(Error::Config("give either `theta` or `antimorphism`, not both".into()))
                    }
                    (Some(t), None) => Some(ThetaSpec::parse(&t)?),
                    (None, Some(cfg)) => {
                        cfg.to_antimorphism()?;
                        Some(ThetaSpec::File(cfg))
                    }
                    (None, None) => None,
                };
                Self::ThetaStandard {
                    seed: Some(seed),
                    directive: Some(directive.to_text()),
                    theta,
                    letters,
                }
            }
        })
    }
}

/// Letters of a word or directive given as text: whitespace-separated
/// tokens when whitespace is present, single characters otherwise.
fn text_letters(text: &str) -> Vec<String> {
    let stripped: String = text.chars().filter(|&c| c != '(' && c != ')').collect();
    if stripped.split_whitespace().count() > 1 {
        stripped.split_whitespace().map(str::to_string).collect()
    } else {
        stripped.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
    }
}

fn sorted_alphabet<I: IntoIterator<Item = String>>(letters: I) -> Result<Arc<Alphabet>> {
    let set: BTreeSet<String> = letters.into_iter().collect();
    Alphabet::new(set)
}

fn parse_inline(alpha: &Arc<Alphabet>, text: &str) -> Result<Word> {
    if text.split_whitespace().count() > 1 || !alpha.is_single_char() {
        Word::parse_tokens(alpha, text)
    } else {
        Word::parse(alpha, text.trim())
    }
}

/// Defaults for the theta-standard generator taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct SeedArgs<'a> {
    pub seed: Option<&'a str>,
    pub directive: Option<&'a str>,
}

/// A word source together with the antimorphism it is analyzed under.
#[derive(Debug, Clone)]
pub struct ResolvedSource {
    pub source: WordSource,
    pub theta: Antimorphism,
    /// Seed and directive of a theta-standard source.
    pub seed: Option<Word>,
    pub directive: Option<DirectiveSequence>,
}

pub fn resolve_generator(gen: &GenSpec, theta: &ThetaSpec, args: &SeedArgs<'_>) -> Result<ResolvedSource> {
    let with_theta = |source: WordSource| -> Result<ResolvedSource> {
        let theta = theta.resolve(source.alphabet())?;
        Ok(ResolvedSource {
            source,
            theta,
            seed: None,
            directive: None,
        })
    };
    let alphabet_for = |text: &str| -> Result<Arc<Alphabet>> {
        match theta.fixed_alphabet()? {
            Some(a) => Ok(a),
            None => sorted_alphabet(text_letters(text).into_iter().chain(theta.letters())),
        }
    };
    match gen {
        GenSpec::Fibonacci => with_theta(fibonacci_source()),
        GenSpec::Tribonacci => with_theta(tribonacci_source()),
        GenSpec::ThueMorse => with_theta(thue_morse_source()),
        GenSpec::Periodic(p) => {
            let alpha = alphabet_for(p)?;
            with_theta(periodic_source(&parse_inline(&alpha, p)?)?)
        }
        GenSpec::Episturmian(d) => {
            let alpha = alphabet_for(d)?;
            with_theta(episturmian_source(DirectiveSequence::parse(&alpha, d)?))
        }
        GenSpec::ThetaStandard {
            seed,
            directive,
            theta: own_theta,
            letters,
        } => {
            let theta_spec = own_theta.as_ref().unwrap_or(theta);
            let seed = seed.as_deref().or(args.seed).unwrap_or("");
            let directive = directive.as_deref().or(args.directive).ok_or_else(|| {
                Error::Config("theta_standard needs a directive (e.g. --directive \"(ab)\")".into())
            })?;
            let alpha = match (theta_spec.fixed_alphabet()?, letters) {
                (Some(a), _) => a,
                (None, Some(l)) => Alphabet::new(l.iter().cloned())?,
                (None, None) => sorted_alphabet(
                    text_letters(seed).into_iter().chain(text_letters(directive)).chain(theta_spec.letters()),
                )?,
            };
            let th = theta_spec.resolve(&alpha)?;
            let seed_word = parse_inline(&alpha, seed)?;
            let d = DirectiveSequence::parse(&alpha, directive)?;
            let source = theta_standard_with_seed_source(&th, &seed_word, d.clone())?;
            Ok(ResolvedSource {
                source,
                theta: th,
                seed: Some(seed_word),
                directive: Some(d),
            })
        }
    }
}

/// Parses the contents of a word file. In token mode letters are separated
/// by whitespace; otherwise every non-whitespace character is a letter.
/// Without an alphabet, the letters found (plus `extra`) form one, sorted.
pub fn parse_word_text(text: &str, tokens: bool, alphabet: Option<&Arc<Alphabet>>, extra: &[String], context: &str) -> Result<Word> {
    let mut items: Vec<(&str, usize, usize)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if tokens {
            let mut col = 0;
            for tok in line.split_whitespace() {
                let at = line[col..].find(tok).expect("token is in its line") + col;
                items.push((tok, ln + 1, line[..at].chars().count() + 1));
                col = at + tok.len();
            }
        } else {
            for (ci, (bi, ch)) in line.char_indices().enumerate() {
                if !ch.is_whitespace() {
                    items.push((&line[bi..bi + ch.len_utf8()], ln + 1, ci + 1));
                }
            }
        }
    }
    if items.is_empty() {
        return Err(Error::Parse {
            context: context.to_string(),
            line: 1,
            column: 1,
            message: "no letters found".into(),
        });
    }
    let alpha = match alphabet {
        Some(a) => a.clone(),
        None => sorted_alphabet(items.iter().map(|(t, _, _)| t.to_string()).chain(extra.iter().cloned()))?,
    };
    let mut symbols = Vec::with_capacity(items.len());
    for (tok, line, column) in items {
        let a = alpha.index_of(tok).map_err(|_| Error::Parse {
            context: context.to_string(),
            line,
            column,
            message: format!("letter `{tok}` is not in the alphabet {:?}", alpha.letters()),
        })?;
        symbols.push(a);
    }
    Word::new(alpha, symbols)
}

pub fn load_word_file(path: &Path, tokens: bool, theta: &ThetaSpec) -> Result<(Word, Antimorphism)> {
    let text = std::fs::read_to_string(path)?;
    let fixed = theta.fixed_alphabet()?;
    let word = parse_word_text(&text, tokens, fixed.as_ref(), &theta.letters(), &path.display().to_string())?;
    let th = theta.resolve(word.alphabet())?;
    Ok((word, th))
}

/// JSON form of a morphism: `images[i]` is the image of `source[i]` as a
/// list of target letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismConfig {
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub images: Vec<Vec<String>>,
}

impl MorphismConfig {
    pub fn from_morphism(phi: &Morphism) -> Self {
        let t = phi.target();
        Self {
            source: phi.source().letters().to_vec(),
            target: t.letters().to_vec(),
            images: phi
                .images()
                .iter()
                .map(|img| img.iter().map(|&a| t.name(a).to_string()).collect())
                .collect(),
        }
    }

    pub fn to_morphism(&self) -> Result<Morphism> {
        let source = Alphabet::new(self.source.iter().cloned())?;
        let target = Alphabet::new(self.target.iter().cloned())?;
        let images = self
            .images
            .iter()
            .map(|img| img.iter().map(|t| target.index_of(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(source, target, images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_specs() {
        assert_eq!(ThetaSpec::parse("reversal").unwrap(), ThetaSpec::Reversal);
        assert_eq!(
            ThetaSpec::parse("pairs:a-b,c-d").unwrap(),
            ThetaSpec::Pairs(vec![("a".into(), "b".into()), ("c".into(), "d".into())])
        );
        assert!(matches!(ThetaSpec::parse("pairs:ab"), Err(Error::Parse { .. })));
    }

    #[test]
    fn antimorphism_config_forms() {
        let cfg: AntimorphismConfig = serde_json::from_str(r#"{"letters":["a","b","c"],"pairs":[["a","b"],["c","c"]]}"#).unwrap();
        let th = cfg.to_antimorphism().unwrap();
        assert_eq!(th.describe(), "pairs:a-b,c-c");
        assert_eq!(AntimorphismConfig::from_antimorphism(&th).to_antimorphism().unwrap(), th);
        let missing: AntimorphismConfig = serde_json::from_str(r#"{"letters":["a","b","c"],"pairs":[["a","b"]]}"#).unwrap();
        assert!(matches!(missing.to_antimorphism(), Err(Error::UnpairedLetter(_))));
        let bad: AntimorphismConfig = serde_json::from_str(r#"{"letters":["a","b","c"],"map":{"a":"b","b":"c","c":"a"}}"#).unwrap();
        let err = bad.to_antimorphism().unwrap_err();
        assert!(err.to_string().contains("Θ² = Id"), "{err}");
        assert!(serde_json::from_str::<AntimorphismConfig>(r#"{"letters":["a"],"pairs":[],"extra":1}"#).is_err());
    }

    #[test]
    fn word_text_errors_carry_positions() {
        let alpha = Alphabet::from_chars("ab").unwrap();
        let err = parse_word_text("abab\nabxb\n", false, Some(&alpha), &[], "w.txt").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 3)),
            other => panic!("{other}"),
        }
        let w = parse_word_text("x1 x2\n  x1\n", true, None, &[], "t").unwrap();
        assert_eq!(w.alphabet().letters(), ["x1", "x2"]);
        assert_eq!(w.symbols(), [0, 1, 0]);
        let alpha = Alphabet::new(["x1", "x2"]).unwrap();
        let err = parse_word_text("x1 x2\n  x1 y\n", true, Some(&alpha), &[], "t").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, column: 6, .. }), "{err}");
        assert!(parse_word_text(" \n", false, None, &[], "t").is_err());
    }

    #[test]
    fn generator_resolution() {
        let r = resolve_generator(&GenSpec::parse("periodic:ab").unwrap(), &ThetaSpec::Reversal, &SeedArgs::default()).unwrap();
        assert_eq!(r.source.prefix(5).to_string(), "ababa");
        let r = resolve_generator(
            &GenSpec::parse("theta_standard").unwrap(),
            &ThetaSpec::parse("pairs:a-b").unwrap(),
            &SeedArgs {
                seed: Some(""),
                directive: Some("(ab)"),
            },
        )
        .unwrap();
        assert_eq!(r.source.prefix(8).to_string(), "abbaabab");
        let r = resolve_generator(&GenSpec::parse("periodic:a").unwrap(), &ThetaSpec::parse("pairs:a-b").unwrap(), &SeedArgs::default()).unwrap();
        assert_eq!(r.theta.alphabet().letters(), ["a", "b"]);
        assert!(GenSpec::parse("nonsense").is_err());
    }

    #[test]
    fn generator_json_forms() {
        let cfg: GeneratorConfig = serde_json::from_str(
            r#"{"kind":"theta_standard_seed","seed":"","directive":{"pre":"","period":"ab"},
                "antimorphism":{"letters":["a","b"],"pairs":[["a","b"]]}}"#,
        )
        .unwrap();
        let gen = GenSpec::from_config(cfg).unwrap();
        let r = resolve_generator(&gen, &ThetaSpec::Reversal, &SeedArgs::default()).unwrap();
        assert_eq!(r.source.prefix(8).to_string(), "abbaabab");
        let cfg: GeneratorConfig = serde_json::from_str(r#"{"kind":"episturmian","directive":"a(ab)"}"#).unwrap();
        assert_eq!(GenSpec::from_config(cfg).unwrap(), GenSpec::Episturmian("a(ab)".into()));
        let both: GeneratorConfig = serde_json::from_str(
            r#"{"kind":"theta_standard","directive":"(ab)","theta":"reversal","antimorphism":{"letters":["a","b"]}}"#,
        )
        .unwrap();
        assert!(GenSpec::from_config(both).is_err());
    }

    #[test]
    fn morphism_round_trip() {
        let src = Alphabet::new(["[0]", "[1]"]).unwrap();
        let tgt = Alphabet::from_chars("ab").unwrap();
        let phi = Morphism::new(src, tgt, vec![vec![0, 1], vec![0]]).unwrap();
        let cfg = MorphismConfig::from_morphism(&phi);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(json, r#"{"source":["[0]","[1]"],"target":["a","b"],"images":[["a","b"],["a"]]}"#);
        let back: MorphismConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_morphism().unwrap(), phi);
    }
}
