use thiserror::Error;

/// Errors raised while building or evaluating a fuzzy registry.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzyError {
    #[error("invalid membership shape {breakpoints:?}: {reason}")]
    InvalidShape {
        breakpoints: [f64; 4],
        reason: &'static str,
    },
    #[error("variable `{variable}`: invalid universe [{lo}, {hi}]")]
    InvalidUniverse { variable: String, lo: f64, hi: f64 },
    #[error("variable `{variable}`: term `{term}` support [{a}, {d}] leaves universe [{lo}, {hi}]")]
    OutsideUniverse {
        variable: String,
        term: String,
        a: f64,
        d: f64,
        lo: f64,
        hi: f64,
    },
    #[error("variable `{variable}`: duplicate term `{term}`")]
    DuplicateTerm { variable: String, term: String },
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate rule base `{0}`")]
    DuplicateRuleBase(String),
    #[error("degree {degree} for term `{term}` is outside [0, 1]")]
    InvalidDegree { term: String, degree: f64 },
    #[error("variable `{0}` declares no terms")]
    NoTerms(String),
    #[error("variable `{variable}`: no term covers {x}")]
    Uncovered { variable: String, x: f64 },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String },
    #[error("unknown rule base `{0}`")]
    UnknownRuleBase(String),
    #[error("rule base `{rulebase}`: {reason}")]
    InvalidRule { rulebase: String, reason: String },
    #[error("rule base `{rulebase}` is declared complete but has no rule for [{missing}]")]
    IncompleteRuleBase { rulebase: String, missing: String },
    #[error("rule base `{rulebase}` has more than one rule for [{combination}]")]
    DuplicateCombination { rulebase: String, combination: String },
    #[error("rule base `{rulebase}`: missing input for variable `{variable}`")]
    MissingInput { rulebase: String, variable: String },
    #[error("variable `{0}`: no rule fired, aggregate output is empty")]
    NoRuleFired(String),
    #[error("centroid step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("no variables declared")]
    NoVariables,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<FuzzyError>,
    },
}

impl FuzzyError {
    pub(crate) fn at_line(self, line: usize) -> Self {
        match self {
            e @ (FuzzyError::Syntax { .. } | FuzzyError::AtLine { .. }) => e,
            e => FuzzyError::AtLine {
                line,
                source: Box::new(e),
            },
        }
    }

    /// Strips line context, handy for matching on the underlying cause.
    pub fn root(&self) -> &FuzzyError {
        match self {
            FuzzyError::AtLine { source, .. } => source.root(),
            e => e,
        }
    }
}
