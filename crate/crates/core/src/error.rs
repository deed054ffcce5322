use std::fmt;

/// Everything that can go wrong while building or analysing a system.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Every column of a spanning set deflated to zero.
    #[error("EmptySpan: all {columns} columns deflated below the rank tolerance")]
    EmptySpan { columns: usize },

    #[error("NotHermitian: max |A - A*| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),

    /// The frame operator is not safely invertible.
    #[error("NotAFrame: lambda_min={lambda_min}")]
    NotAFrame { lambda_min: f64 },

    #[error("LocalSpaceMismatch: component {index} maps into dimension {left} vs {right}")]
    LocalSpaceMismatch {
        index: usize,
        left: usize,
        right: usize,
    },

    #[error("SizeLimit: {elements} matrix entries exceed the budget of {budget}")]
    SizeLimit { elements: usize, budget: usize },

    #[error("ParseError at {path}: {message}")]
    Parse { path: KeyPath, message: String },

    #[error("NonPositiveWeight: component {index} has weight {weight}")]
    NonPositiveWeight { index: usize, weight: f64 },

    #[error("NonFinite: {0} contains NaN or infinite entries")]
    NonFinite(String),

    #[error("BadParams: {0}")]
    BadParams(String),

    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn parse(path: KeyPath, message: impl Into<String>) -> Self {
        Error::Parse {
            path,
            message: message.into(),
        }
    }
}

/// JSON-pointer-like location of an offending key, e.g. `$.components[2].operator.entries`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KeyPath(Vec<Segment>);

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Key(String),
    Index(usize),
}

impl KeyPath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn key(&self, k: &str) -> Self {
        let mut out = self.clone();
        out.0.push(Segment::Key(k.to_owned()));
        out
    }

    pub fn index(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.0.push(Segment::Index(i));
        out
    }
}

impl fmt::Display for KeyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("$")?;
        for seg in &self.0 {
            match seg {
                Segment::Key(k) => write!(f, ".{k}")?,
                Segment::Index(i) => write!(f, "[{i}]")?,
            }
        }
        Ok(())
    }
}
