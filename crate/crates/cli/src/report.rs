use std::fmt;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, or a method applied outside its hypotheses.
    Usage(String),
    /// A computation or verification failed.
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<specwass::Error> for CliError {
    fn from(e: specwass::Error) -> Self {
        use specwass::Error as E;
        let msg = e.to_string();
        match e {
            E::NotSquare { .. }
            | E::Size(_)
            | E::Parameter(_)
            | E::DimensionMismatch { .. }
            | E::IndexOutOfRange { .. }
            | E::InvalidDistribution(_)
            | E::InvalidCost(_)
            | E::UnsupportedSpace(_)
            | E::Hypothesis(_)
            | E::Normalization { .. }
            | E::Embedding(_)
            | E::Parse(_)
            | E::Io(_)
            | E::Json(_) => CliError::Usage(msg),
            _ => CliError::Failure(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub method: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Value>,
    /// Only filled in with `--timing`, so default output stays reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn emit(&self, csv_out: bool) -> CliResult<()> {
        if csv_out {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["method", "value", "certificate", "wall_time_ms"])?;
            let cert = self.certificate.as_ref().map(Value::to_string).unwrap_or_default();
            let time = self.wall_time_ms.map(|t| t.to_string()).unwrap_or_default();
            w.write_record([self.method.as_str(), &self.value.to_string(), &cert, &time])?;
            w.flush()?;
        } else {
            print_json(self)?;
        }
        Ok(())
    }
}

pub fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Failure(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}
