use std::path::Path;

use thiserror::Error;

/// Exit codes of the `nsp-decay-lab` binary.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] nsp_decay_core::Error),
    #[error("I/O error at {path}: {message}")]
    Io { path: String, message: String },
    #[error("internal error: {0}")]
    Internal(String),
}

impl LabError {
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        LabError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// Stable machine-readable failure class.
    pub fn class(&self) -> &'static str {
        use nsp_decay_core::Error as E;
        match self {
            LabError::Config(_) => "config",
            LabError::Io { .. } => "io",
            LabError::Internal(_) => "internal",
            LabError::Core(e) => match e {
                E::Domain(_) => "domain",
                E::Hypothesis(_) => "hypothesis",
                E::Structural(_) => "structural",
                E::Vacuum { .. } => "vacuum",
                E::StepSize { .. } => "step-size",
                E::Divergence { .. } => "divergence",
                E::Io { .. } => "io",
                E::Format(_) => "format",
            },
        }
    }

    /// `2` for parameters outside their domain, `3` when a numeric guard
    /// stops a run, `4` for I/O and file-format failures.
    pub fn exit_code(&self) -> u8 {
        match self.class() {
            "config" | "domain" | "hypothesis" => EXIT_CONFIG,
            "io" | "format" => EXIT_IO,
            _ => EXIT_NUMERIC,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nsp_decay_core::Error as E;

    #[test]
    fn exit_table() {
        let cases = [
            (LabError::Config("x".into()), 2, "config"),
            (E::Domain("x".into()).into(), 2, "domain"),
            (
                E::Vacuum {
                    min_density: -0.1,
                    time: 0.0,
                }
                .into(),
                3,
                "vacuum",
            ),
            (E::StepSize { dt: 1.0, limit: 0.5 }.into(), 3, "step-size"),
            (E::Format("x".into()).into(), 4, "format"),
            (LabError::io(Path::new("/x"), std::io::Error::other("boom")), 4, "io"),
        ];
        for (err, code, class) in cases {
            assert_eq!((err.exit_code(), err.class()), (code, class));
        }
    }
}
