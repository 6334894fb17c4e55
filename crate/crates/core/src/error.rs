use std::fmt;

use serde::Serialize;

/// Broad class of a failure, surfaced verbatim by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCategory {
    Domain,
    UnsupportedConfiguration,
    Resource,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Domain => "domain",
            ErrorCategory::UnsupportedConfiguration => "unsupported-configuration",
            ErrorCategory::Resource => "resource",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error in `{field}`: {message}")]
    Domain { field: String, message: String },
    #[error("unsupported configuration in `{field}`: {message}")]
    Unsupported { field: String, message: String },
    #[error("resource limit exceeded in `{field}`: {message}")]
    Resource { field: String, message: String },
}

impl Error {
    pub fn domain(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Domain { field: field.into(), message: message.into() }
    }

    pub fn unsupported(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Unsupported { field: field.into(), message: message.into() }
    }

    pub fn resource(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Resource { field: field.into(), message: message.into() }
    }

    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Domain { .. } => ErrorCategory::Domain,
            Error::Unsupported { .. } => ErrorCategory::UnsupportedConfiguration,
            Error::Resource { .. } => ErrorCategory::Resource,
        }
    }

    pub fn field(&self) -> &str {
        match self {
            Error::Domain { field, .. }
            | Error::Unsupported { field, .. }
            | Error::Resource { field, .. } => field,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Error::Domain { message, .. }
            | Error::Unsupported { message, .. }
            | Error::Resource { message, .. } => message,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
