//! Run bookkeeping: error-to-exit-code mapping, file digests, and the JSON
//! report every command prints on standard output.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Failure classes, each tied to a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Flag grammar violations beyond what the parser catches. Exit 2.
    Usage(String),
    /// Missing or unreadable files. Exit 2.
    Io(String),
    /// Files that parse but violate a state schema, and operand mismatches.
    /// Exit 2.
    Schema(String),
    /// The coupling strength cannot satisfy the positivity condition. Exit 3.
    Infeasible(String),
    /// Reconstruction or a built-in acceptance gate failed. Exit 4.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Schema(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Failure(_) => 4,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Schema(_) => "schema",
            CliError::Infeasible(_) => "infeasible",
            CliError::Failure(_) => "failure",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::Schema(m)
            | CliError::Infeasible(m)
            | CliError::Failure(m) => m,
        }
    }

    /// One line, spaces but no newlines, safe to split on `code=` / `msg=`.
    pub fn stderr_line(&self) -> String {
        let msg = self.message().replace(['\n', '\r'], " ");
        format!(
            "anamorph: code={} exit={} msg=\"{}\"",
            self.label(),
            self.exit_code(),
            msg
        )
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label(), self.message())
    }
}

impl From<anamorph_core::CoreError> for CliError {
    fn from(e: anamorph_core::CoreError) -> Self {
        use anamorph_core::CoreError::*;
        match e {
            EtaInfeasible { .. } | EtaTooSmallForDilation { .. } | NotStrictlyPositive { .. } => {
                CliError::Infeasible(e.to_string())
            }
            NoCovertSignal { .. } => CliError::Failure(e.to_string()),
            Dimension(_) | Qop(_) | Mat(_) => CliError::Schema(e.to_string()),
        }
    }
}

impl From<mat_core::MatError> for CliError {
    fn from(e: mat_core::MatError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<qop_kit::QopError> for CliError {
    fn from(e: qop_kit::QopError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<probe_tomography::TomoError> for CliError {
    fn from(e: probe_tomography::TomoError) -> Self {
        use probe_tomography::TomoError::*;
        match e {
            EmptyBranch { .. } | NoShotsInBranch { .. } => CliError::Failure(e.to_string()),
            Core(inner) => inner.into(),
            UnsupportedDesign { .. } | BadPlan(_) | BadState(_) | Qop(_) | Mat(_) => {
                CliError::Schema(e.to_string())
            }
        }
    }
}

impl From<security_metrics::MetricsError> for CliError {
    fn from(e: security_metrics::MetricsError) -> Self {
        use security_metrics::MetricsError::*;
        match e {
            NotStrictlyPositive { .. } => CliError::Infeasible(e.to_string()),
            Core(inner) => inner.into(),
            DimensionMismatch { .. } | TooLargeForBruteForce { .. } | UnsupportedDims { .. }
            | Mat(_) | Qop(_) => CliError::Schema(e.to_string()),
        }
    }
}

impl From<qass_compiler::QassError> for CliError {
    fn from(e: qass_compiler::QassError) -> Self {
        use qass_compiler::QassError::*;
        match e {
            NoFeasibleEta { .. } => CliError::Infeasible(e.to_string()),
            ThresholdUnmet | DuplicatePoints | InvalidPair { .. } | CovertUnavailable
            | ComponentMissing(_) | BadShare(_) => CliError::Failure(e.to_string()),
            Core(inner) => inner.into(),
            NotPrime { .. } | FieldTooSmall { .. } | ValueOutOfField { .. } | BadEtaDomain(_)
            | UnsupportedScale { .. } | Mat(_) | Qop(_) => CliError::Schema(e.to_string()),
        }
    }
}

/// What the command touched, keyed by path; values are FNV-1a digests of the
/// file bytes.
#[derive(Debug, Default)]
pub struct Run {
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

fn digest(bytes: &[u8]) -> String {
    format!("{:016x}", seedstream::fnv1a64(bytes))
}

impl Run {
    pub fn read_bytes(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.insert(path.display().to_string(), digest(&bytes));
        Ok(bytes)
    }

    /// Parse a JSON state file; parse errors carry the file and position.
    pub fn load<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let bytes = self.read_bytes(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    /// Serialize a state value with fixed-width floats and a trailing newline.
    pub fn write<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<(), CliError> {
        let mut text = mat_core::json::to_json_string(value);
        text.push('\n');
        self.write_text(path, &text)
    }

    pub fn write_text(&mut self, path: &Path, text: &str) -> Result<(), CliError> {
        fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        self.outputs
            .insert(path.display().to_string(), digest(text.as_bytes()));
        Ok(())
    }
}

/// The single JSON document each run prints on standard output.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
    pub metrics: serde_json::Value,
    /// Wall-clock only; excluded from the determinism contract.
    pub wall_time_ms: u64,
}

/// Seed resolution: flag, then the ANAMORPH_SEED environment variable,
/// then 0. The seed is the sole entropy source of every command.
pub fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("ANAMORPH_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Usage(format!("ANAMORPH_SEED = {text:?} is not a 64-bit unsigned integer"))
        }),
        Err(_) => Ok(0),
    }
}

/// Comma-separated unsigned integers ("4,8,16").
pub fn parse_u64_list(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad list entry {tok:?}")))
        })
        .collect()
}
