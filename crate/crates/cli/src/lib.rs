//! Job runner behind the `odh` binary: loads a problem, sweeps an `(r, d)`
//! window and renders the resulting grid.

use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::ValueEnum;
use odh_core::contraction::{contraction_params, ContractionData, ContractionIdeal};
use odh_core::hyperterm::{minimal_telescoper, rat_actual_min_height, LeDecomposition, ProperTerm};
use odh_core::surfaces::{sweep, sweep_cells, LclmShapes};
use odh_core::{clm, Budget, Components, Error, Format, PolyOp, SurfaceGrid};
use serde::Deserialize;

/// Largest telescoper order tried when building the ideal for actual heights.
pub const MAX_TELESCOPER_ORDER: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Common left multiples of several operators.
    #[value(alias = "clm")]
    Lclm,
    /// Telescopers of a proper hypergeometric term.
    Hyper,
    /// Telescopers of a rational function given by a Le decomposition.
    Rat,
    /// Elements of the contraction of an operator ideal.
    Contraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Action {
    Predict,
    Actual,
    Compare,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub mode: Mode,
    pub action: Action,
    pub r_range: RangeInclusive<u32>,
    pub d_range: RangeInclusive<u32>,
    pub h_cap: u32,
    pub slack: u32,
    pub input: PathBuf,
    pub format: OutputFormat,
    pub jobs: usize,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) | CliError::Core(Error::Parse(_)) => 3,
            CliError::Core(Error::ResourceLimit(_)) => 5,
            CliError::Core(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

/// Parses `A..B` (inclusive); a single number `A` stands for `A..A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let a = parse(s)?;
            (a, a)
        }
    };
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

#[derive(Deserialize)]
struct LclmInput {
    ops: Vec<PolyOp>,
}

fn read_input(job: &JobSpec) -> Result<String, CliError> {
    std::fs::read_to_string(&job.input).map_err(|e| CliError::Input(format!("{}: {e}", job.input.display())))
}

fn cell_budget() -> Budget {
    Budget::from_env()
}

fn predict(job: &JobSpec, src: &str) -> Result<SurfaceGrid, CliError> {
    let (r, d, cap) = (job.r_range.clone(), job.d_range.clone(), job.h_cap);
    Ok(match job.mode {
        Mode::Lclm => {
            let input: LclmInput = serde_json::from_str(src).map_err(Error::from)?;
            let shapes = input.ops.iter().map(|o| o.shape()).collect::<odh_core::Result<Vec<_>>>()?;
            sweep(&LclmShapes::new(shapes)?, r, d, cap)?
        }
        Mode::Hyper => sweep(&ProperTerm::from_json(src)?.params(), r, d, cap)?,
        Mode::Rat => sweep(&LeDecomposition::from_json(src)?.params(), r, d, cap)?,
        Mode::Contraction => sweep(&contraction_params(&ContractionData::from_json(src)?)?, r, d, cap)?,
    })
}

fn actual(job: &JobSpec, src: &str) -> Result<SurfaceGrid, CliError> {
    let (rr, dr, cap) = (job.r_range.clone(), job.d_range.clone(), job.h_cap);
    let r_max = *rr.end();
    let setup = Budget::unlimited();
    let by_ideal = |ideal: ContractionIdeal| {
        sweep_cells(rr.clone(), dr.clone(), Components::ACTUAL, move |r, d| {
            ideal.actual_min_height(r, d, cap, &cell_budget())
        })
    };
    Ok(match job.mode {
        Mode::Lclm => {
            let input: LclmInput = serde_json::from_str(src).map_err(Error::from)?;
            by_ideal(clm::common_multiple_ideal(&input.ops, r_max)?)?
        }
        Mode::Hyper => {
            let term = ProperTerm::from_json(src)?;
            let cert = minimal_telescoper(&term, job.slack, MAX_TELESCOPER_ORDER, &setup)?;
            by_ideal(ContractionIdeal::from_poly_op(&cert.l, r_max)?)?
        }
        Mode::Rat => {
            let dec = LeDecomposition::from_json(src)?;
            let ideal = ContractionIdeal::new(&dec.telescoper_generator()?, r_max)?;
            sweep_cells(rr, dr, Components::ACTUAL, |r, d| rat_actual_min_height(&dec, &ideal, r, d, cap, &cell_budget()))?
        }
        Mode::Contraction => {
            let data = ContractionData::from_json(src)?;
            by_ideal(ContractionIdeal::from_poly_op(&data.l, r_max)?)?
        }
    })
}

/// Runs a job on a thread pool of `job.jobs` workers (0 = all cores).
pub fn run(job: &JobSpec) -> Result<SurfaceGrid, CliError> {
    if job.r_range.is_empty() || job.d_range.is_empty() {
        return Err(CliError::Usage("empty range".into()));
    }
    let src = read_input(job)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(job.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    pool.install(|| match job.action {
        Action::Predict => predict(job, &src),
        Action::Actual => actual(job, &src),
        Action::Compare => Ok(predict(job, &src)?.join(&actual(job, &src)?)?),
    })
}

/// Runs a job and renders the grid in the requested format.
pub fn run_rendered(job: &JobSpec) -> Result<String, CliError> {
    Ok(run(job)?.render(job.format.into()))
}
