use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use smooth_renyi_core::Error;

/// A reportable error with its process exit status.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
    #[serde(skip)]
    pub code: u8,
}

impl Failure {
    pub fn validation(error: &'static str, message: impl Into<String>) -> Self {
        Self {
            error,
            message: message.into(),
            code: 1,
        }
    }

    pub fn io(path: &Path, e: &std::io::Error) -> Self {
        Self::validation("io", format!("{}: {e}", path.display()))
    }

    pub fn json(path: &Path, e: &serde_json::Error) -> Self {
        Self::validation("malformed_json", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code)
    }

    /// One JSON object on a single line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain strings serialize")
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::EmptyOrRagged => "empty_or_ragged",
        Error::NonFinite { .. } => "non_finite",
        Error::NegativeEntry { .. } => "negative_entry",
        Error::MassDeviationTooLarge { .. } => "mass_deviation",
        Error::ZeroMarginal { .. } => "zero_marginal",
        Error::SymbolOutOfRange { .. } => "symbol_out_of_range",
        Error::AlphabetMismatch { .. } => "alphabet_mismatch",
        Error::InvalidParameter { .. } => "invalid_parameter",
        Error::InvalidMixture(_) => "invalid_mixture",
        Error::BlockTooLarge { .. } => "block_too_large",
        Error::InstanceTooLarge(_) => "instance_too_large",
        Error::MalformedBitstring { .. } => "malformed_bitstring",
        Error::LengthOverflow(_) => "length_overflow",
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            error: kind(&e),
            message: e.to_string(),
            code: if e.is_budget() { 2 } else { 1 },
        }
    }
}
