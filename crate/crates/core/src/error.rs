use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("contraction of letters {a} and {b} gives letter {letter}, beyond the truncation bound {max}")]
    Overflow { a: u32, b: u32, letter: u32, max: u32 },
    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("unknown built-in product `{0}`")]
    UnknownBuiltin(String),
    #[error("expected a tuple of length {expected}, got {got}")]
    TupleLength { expected: usize, got: usize },
    #[error("tuples are defined for alphabets of size 2 or 3, not {0}")]
    TupleAlphabet(usize),
    #[error("invalid table: {0}")]
    Invalid(String),
    #[error("cannot parse rational `{0}`")]
    Rational(String),
    #[error("malformed spec file: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
