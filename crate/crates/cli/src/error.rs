use thiserror::Error;

/// Process exit status for each failure class.
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] stark_shell::Error),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("incompatible record: {0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Usage(_) => EXIT_CONFIG,
            Self::Numerical(e) if is_input_error(e) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NO_CONVERGENCE,
            Self::Io { .. } => EXIT_CHECKS_FAILED,
        }
    }
}

/// Errors caused by the request rather than by the numerics.
pub fn is_input_error(e: &stark_shell::Error) -> bool {
    use stark_shell::Error as E;
    matches!(e, E::Domain { .. } | E::Contour { .. } | E::UnstableOrder { .. })
}
