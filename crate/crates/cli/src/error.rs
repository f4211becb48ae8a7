use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error{}{}: {message}", location(*line, *column), field_suffix(field))]
    Schema {
        line: Option<usize>,
        column: Option<usize>,
        field: String,
        message: String,
    },
    #[error("field `{field}` is not square: {rows} rows of {cols} entries")]
    NonSquare { field: String, rows: usize, cols: usize },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sectorial_core::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn location(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!(" at line {l} column {c}"),
        (Some(l), None) => format!(" at line {l}"),
        _ => String::new(),
    }
}

fn field_suffix(field: &str) -> String {
    if field.is_empty() {
        String::new()
    } else {
        format!(" in `{field}`")
    }
}

impl HarnessError {
    /// A counterexample alarm means a claimed inequality failed; everything
    /// else is bad input or an unusable instance.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(sectorial_core::Error::CounterexampleAlarm { .. }) => EXIT_VIOLATION,
            _ => EXIT_INPUT,
        }
    }
}
