use std::fmt;

/// Command failure, classified by exit status.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    Validation(String),
    Data(String),
    Fit(String),
    Accuracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Data(_) => 4,
            CliError::Fit(_) => 5,
            CliError::Accuracy(_) => 6,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Data(_) => "data",
            CliError::Fit(_) => "fit",
            CliError::Accuracy(_) => "accuracy",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Io(m)
            | CliError::Usage(m)
            | CliError::Validation(m)
            | CliError::Data(m)
            | CliError::Fit(m)
            | CliError::Accuracy(m) => m,
        }
    }

    /// One-line JSON record for the error stream.
    pub fn diagnostic(&self) -> String {
        serde_json::json!({
            "level": "error",
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.message(),
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<ringqed::Error> for CliError {
    fn from(e: ringqed::Error) -> Self {
        use ringqed::Error as E;
        let msg = e.to_string();
        match e {
            E::Domain(_) => CliError::Validation(msg),
            E::Data(_) => CliError::Data(msg),
            E::Singular(_) | E::Accuracy(_) => CliError::Accuracy(msg),
            E::Fit(_) => CliError::Fit(msg),
            E::Usage(_) => CliError::Usage(msg),
            E::Io(_) => CliError::Io(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
