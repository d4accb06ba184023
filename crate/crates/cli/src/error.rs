use std::path::PathBuf;

use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input file; `at` locates the problem (line:column or a JSON
    /// path such as `real[1][0]`).
    #[error("{path}: {at}: {message}")]
    Parse {
        path: PathBuf,
        at: String,
        message: String,
    },

    #[error("bad function spec '{spec}': {message}")]
    Spec { spec: String, message: String },

    #[error(transparent)]
    Numeric(#[from] relop::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Usage(_) => "usage",
            Self::Io { .. } => "io",
            Self::Parse { .. } => "parse",
            Self::Spec { .. } => "spec",
            Self::Numeric(_) => "numeric",
            Self::Csv(_) => "csv",
            Self::Json(_) => "json",
        }
    }

    pub fn to_json(&self, command: Option<&str>) -> Value {
        let mut err = json!({
            "kind": self.kind(),
            "message": self.to_string(),
        });
        if let Self::Parse { path, at, .. } = self {
            err["path"] = json!(path.display().to_string());
            err["at"] = json!(at);
        }
        json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "error": err,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
