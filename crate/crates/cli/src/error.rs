use rcldpc::construction::ConstructionError;
use rcldpc::extension::ExtensionError;
use rcldpc::gf2::{AlistError, GeneratorFileError, RankDeficient};
use rcldpc::puncturing::PunctureError;
use rcldpc::sim::SimError;
use thiserror::Error;

/// Failures of a subcommand, grouped by exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid or infeasible configuration (exit 3).
    #[error("{0}")]
    Config(String),
    /// Malformed, inconsistent or tampered input data (exit 4).
    #[error("{0}")]
    Data(String),
    /// A scheme that cannot handle the given code (exit 5).
    #[error("{0}")]
    Unsupported(String),
    /// Reading or writing files (exit 6).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Data(_) => "data",
            Self::Unsupported(_) => "unsupported",
            Self::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 3,
            Self::Data(_) => 4,
            Self::Unsupported(_) => 5,
            Self::Io(_) => 6,
        }
    }

    /// Adds the file or step the error concerns.
    pub fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            Self::Config(m) => Self::Config(format!("{what}: {m}")),
            Self::Data(m) => Self::Data(format!("{what}: {m}")),
            Self::Unsupported(m) => Self::Unsupported(format!("{what}: {m}")),
            Self::Io(m) => Self::Io(format!("{what}: {m}")),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        if e.is_io() {
            Self::Io(e.to_string())
        } else {
            Self::Data(e.to_string())
        }
    }
}

impl From<AlistError> for CliError {
    fn from(e: AlistError) -> Self {
        match e {
            AlistError::Io(io) => io.into(),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<GeneratorFileError> for CliError {
    fn from(e: GeneratorFileError) -> Self {
        match e {
            GeneratorFileError::Io(io) => io.into(),
            other => Self::Data(other.to_string()),
        }
    }
}

impl From<RankDeficient> for CliError {
    fn from(e: RankDeficient) -> Self {
        Self::Data(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<PunctureError> for CliError {
    fn from(e: PunctureError) -> Self {
        match e {
            PunctureError::UnsupportedCode(_) => Self::Unsupported(e.to_string()),
            PunctureError::TooMany { .. }
            | PunctureError::NotEnoughCandidates { .. }
            | PunctureError::InvalidConfig(_) => Self::Config(e.to_string()),
            PunctureError::Io(io) => io.into(),
            PunctureError::Json(json) => json.into(),
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::InvalidTargets(_)
            | ExtensionError::Infeasible { .. }
            | ExtensionError::NoCandidates(_)
            | ExtensionError::InvalidSubmatrix(_) => Self::Config(e.to_string()),
            ExtensionError::Construction(c) => c.into(),
            ExtensionError::Alist(a) => a.into(),
            ExtensionError::Generator(g) => g.into(),
            ExtensionError::Io(io) => io.into(),
            ExtensionError::Json(json) => json.into(),
            _ => Self::Data(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::InvalidConfig(_) => Self::Config(e.to_string()),
            SimError::Io(io) => io.into(),
            SimError::Json(json) => json.into(),
            _ => Self::Data(e.to_string()),
        }
    }
}
