mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use weilmod::basefield::BaseError;
use weilmod::coeff::CoeffError;
use weilmod::heisenberg::HeisenbergError;
use weilmod::metaplectic::MetaError;
use weilmod::schwartz::SchwartzError;
use weilmod::theta::ThetaError;
use weilmod::weilfactor::WeilError;

use args::{Command, Format, JobConfig};
use output::Printer;

/// Exit 1: a check failed. Exit 2: the input was invalid or a cap was hit.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Check(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Invalid(_) | CliError::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(s) => write!(f, "invalid input: {s}"),
            CliError::Check(s) => write!(f, "check failed: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invalid(e.to_string())
            }
        }
    )*};
}

invalid_from!(BaseError, CoeffError, HeisenbergError);

impl From<WeilError> for CliError {
    fn from(e: WeilError) -> Self {
        match e {
            WeilError::Mismatch(_) => CliError::Check(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<MetaError> for CliError {
    fn from(e: MetaError) -> Self {
        match e {
            MetaError::NotScalar => CliError::Check(e.to_string()),
            MetaError::Weil(w) => w.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<SchwartzError> for CliError {
    fn from(e: SchwartzError) -> Self {
        match e {
            SchwartzError::NotProportional => CliError::Check(e.to_string()),
            SchwartzError::Meta(m) => m.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> Self {
        match e {
            ThetaError::Mismatch(_) => CliError::Check(e.to_string()),
            ThetaError::Meta(m) => m.into(),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn configure_threads(cfg: &JobConfig) -> Result<(), CliError> {
    let n = match cfg.threads {
        Some(n) => Some(n),
        None => match std::env::var("WEILMOD_THREADS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| CliError::Invalid(format!("WEILMOD_THREADS={s:?}")))?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        // a pool already set up by an earlier call is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// `--out json|csv` picks a format for stdout; anything else is a path.
fn destination(cfg: &JobConfig) -> (Format, Option<String>) {
    match cfg.out.as_deref() {
        None => (cfg.format, None),
        Some("json") => (Format::Json, None),
        Some("csv") => (Format::Csv, None),
        Some(path) if path.ends_with(".csv") => (Format::Csv, Some(path.to_string())),
        Some(path) => (cfg.format, Some(path.to_string())),
    }
}

fn load_config(path: &std::path::Path) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let cfg: JobConfig = serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    if matches!(cfg.command, Command::Run { .. }) {
        return Err(CliError::Invalid("`run` cannot be nested".into()));
    }
    Ok(cfg)
}

fn run(cfg: JobConfig) -> Result<bool, CliError> {
    let cfg = match &cfg.command {
        Command::Run { config } => load_config(config)?,
        _ => cfg,
    };
    configure_threads(&cfg)?;
    let (format, target) = destination(&cfg);
    if cfg.print_config {
        let doc = serde_json::to_value(&cfg).map_err(|e| CliError::Io(e.to_string()))?;
        output::write_bytes(target.as_deref(), &output::render(&doc, Format::Json)?)?;
        return Ok(true);
    }
    let outcome = commands::execute(&cfg.command, Printer { approx: cfg.approx })?;
    output::write_bytes(target.as_deref(), &output::render(&outcome.value, format)?)?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cfg = match JobConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("weilmod: {e}");
            ExitCode::from(e.code())
        }
    }
}
