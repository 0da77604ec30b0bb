use thiserror::Error;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Position, message: String },

    #[error("duplicate rule id `{id}` at line {line}")]
    DuplicateId { id: String, line: usize },

    #[error("norm `{norm}` references undeclared principle `{principle}`")]
    UnknownPrinciple { norm: String, principle: String },

    #[error("norm `{norm}` has no principle tag")]
    MissingPrinciple { norm: String },

    #[error("unbound variable `{var}` in rule `{rule}`")]
    UnboundVariable { rule: String, var: String },

    #[error("rule `{rule}` is quantified but no constants are declared")]
    NoConstants { rule: String },

    #[error("argument construction exceeded the cap of {cap} arguments")]
    ExplosionGuard { cap: usize },

    #[error("attack computation exceeded the cap of {cap} attacks")]
    AttackGuard { cap: usize },

    #[error("`{target}` is not accepted in the selected extension")]
    NotAccepted { target: String },

    #[error("no extensions to draw conclusions from")]
    EmptyInput,
}

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            pos: Position { line, column },
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
