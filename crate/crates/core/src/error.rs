use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("letter `{0}` appears more than once in the alphabet")]
    DuplicateLetter(String),

    #[error("invalid letter token `{0}`")]
    InvalidLetterToken(String),

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("letter index {index} is out of range for an alphabet of size {size}")]
    LetterOutOfRange { index: u32, size: usize },

    #[error("words are over different alphabets")]
    AlphabetMismatch,

    #[error("pairing is not an involution (Θ² = Id fails at letter `{0}`)")]
    NotInvolutive(String),

    #[error("letter `{0}` is paired more than once")]
    DuplicatePairing(String),

    #[error("letter `{0}` is not covered by any pair")]
    UnpairedLetter(String),

    #[error("factor must be non-empty")]
    EmptyFactor,

    #[error("{what} = {value} is out of range (allowed {min}..={max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("factor `{factor}` occurs {found} time(s); at least {needed} required")]
    TooFewOccurrences {
        factor: String,
        found: usize,
        needed: usize,
    },

    #[error("morphism is erasing: letter `{0}` maps to the empty word")]
    ErasingMorphism(String),

    #[error("language of the prefix is not closed under the antimorphism up to length {level}: `{witness}` occurs but its image does not")]
    NotClosed { level: usize, witness: String },

    #[error("no special factors of length {n}: the prefix looks eventually periodic")]
    NoSpecialFactors { n: usize },

    #[error("no qualifying palindromic prefix: {0}")]
    NoQualifyingPrefix(String),

    #[error("complete return `{ret}` of `{factor}` is not a palindrome")]
    NonPalindromicReturn { factor: String, ret: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{context}:{line}:{column}: {message}")]
    Parse {
        context: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Failures that say the prefix gave no usable evidence, as opposed to
    /// bad input.
    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            Self::NotClosed { .. }
                | Self::NoSpecialFactors { .. }
                | Self::NoQualifyingPrefix(_)
                | Self::NonPalindromicReturn { .. }
                | Self::TooFewOccurrences { .. }
        )
    }
}
