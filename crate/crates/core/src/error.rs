use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },

    #[error("structure does not belong to species `{species}`")]
    ForeignStructure { species: String },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("arity error: {0}")]
    Arity(String),

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("unknown weight `{0}`")]
    UnknownWeight(String),

    #[error("composition precondition violated: {0}")]
    Composition(String),

    #[error("free product operand `{0}` must have exactly one structure on the empty set")]
    FreeOperand(String),

    #[error("species mismatch: space is over `{space}`, weight is over `{weight}`")]
    SpeciesMismatch { space: String, weight: String },

    #[error("index k={k} out of range for level {n}")]
    KernelIndex { k: usize, n: usize },

    #[error("space over `{0}` has no vacuum")]
    NoVacuum(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("truncation too small: {0}")]
    Truncation(String),

    #[error("operation requires species `{expected}`, got `{found}`")]
    WrongSpecies { expected: String, found: String },

    #[error("monomial reduction disagrees with direct evaluation (deviation {0:e})")]
    MonomialMismatch(f64),

    #[error("polynomial is not a product of x+c and x^2+c factors with c >= 0: {0}")]
    PolynomialForm(String),

    #[error("not enough colors: need {needed}, space has {available}")]
    Colors { needed: usize, available: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
