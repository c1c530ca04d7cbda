//! The `polyent` command-line front end.
//!
//! Input files are JSON and the kind is picked from the document's shape:
//! an array is a [`Pmf`], an object with `"marginals"` is a
//! [`FactoredSystem`], an object with `"shape"` is a [`JointTable`].
//! Results go to standard output as JSON (`entropy`, `synergy`, `info`) or
//! CSV (`verify`, `sweep`).
//!
//! Exit codes: 0 ok, 2 malformed input, 3 domain error, 4 joint table not
//! factorable, 5 internal identity failure, 6 I/O error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classic_info::{interaction_information, multi_information, mutual_information};
use crate::composition::{audit_expansions, Term};
use crate::distribution::{
    independence_defect, materialize, FactoredSystem, JointTable, Pmf, DEFAULT_MAX_CELLS,
};
use crate::entropy::{
    entropy_bgs, entropy_generalized, entropy_joint_factored, entropy_joint_table, EntropyParams,
};
use crate::error::Error;
use crate::synergy::{
    dyadic_synergy_expanded, polyadic_synergy, triadic_synergy_expanded, Classification,
    SynergyReport,
};

/// Environment variable overriding the materialization cap.
pub const MAX_CELLS_ENV: &str = "POLYENT_MAX_CELLS";

/// Joint tables whose independence defect exceeds this are refused by
/// `synergy` and `verify`.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Domain(#[from] Error),
    #[error("joint table is not factorable (independence defect {0:e} > {INDEPENDENCE_TOL:e})")]
    NotIndependent(f64),
    #[error("internal identity check failed: {0}")]
    Internal(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::NotIndependent(_) => 4,
            CliError::Internal(_) => 5,
            CliError::Io(_) => 6,
        }
    }
}

/// Logarithm base; accepts `e` or a number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogBase(pub f64);

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("e") {
            return Ok(LogBase(std::f64::consts::E));
        }
        s.parse::<f64>()
            .map(LogBase)
            .map_err(|e| format!("invalid base {s:?}: {e}"))
    }
}

/// An evenly spaced `(q, r)` grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub q_steps: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
}

fn axis_points(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let span = max - min;
    (0..steps)
        .map(|k| {
            if k == steps - 1 {
                max
            } else {
                min + span * k as f64 / (steps - 1) as f64
            }
        })
        .collect()
}

impl SweepGrid {
    /// A one-point grid at `(q, r)`.
    pub fn point(q: f64, r: f64) -> Self {
        SweepGrid {
            q_min: q,
            q_max: q,
            q_steps: 1,
            r_min: r,
            r_max: r,
            r_steps: 1,
        }
    }

    pub fn q_values(&self) -> Vec<f64> {
        axis_points(self.q_min, self.q_max, self.q_steps)
    }

    pub fn r_values(&self) -> Vec<f64> {
        axis_points(self.r_min, self.r_max, self.r_steps)
    }

    /// All grid points in row-major order (`q` outer, `r` inner), validated.
    pub fn params(&self) -> Result<Vec<EntropyParams>, Error> {
        let rs = self.r_values();
        self.q_values()
            .into_iter()
            .flat_map(|q| rs.iter().map(move |&r| EntropyParams::new(q, r)))
            .collect()
    }
}

impl FromStr for SweepGrid {
    type Err = String;

    /// `qmin:qmax:steps,rmin:rmax:steps`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        fn axis(part: &str) -> Result<(f64, f64, usize), String> {
            let fields: Vec<&str> = part.split(':').map(str::trim).collect();
            let [min, max, steps] = fields[..] else {
                return Err(format!("expected min:max:steps, got {part:?}"));
            };
            let min: f64 = min.parse().map_err(|e| format!("{min:?}: {e}"))?;
            let max: f64 = max.parse().map_err(|e| format!("{max:?}: {e}"))?;
            let steps: usize = steps.parse().map_err(|e| format!("{steps:?}: {e}"))?;
            if steps == 0 {
                return Err("grid needs at least one step per axis".into());
            }
            if !(min.is_finite() && max.is_finite()) || min > max {
                return Err(format!("invalid range {min}:{max}"));
            }
            Ok((min, max, steps))
        }
        let Some((q, r)) = s.split_once(',') else {
            return Err(format!("expected q-axis,r-axis, got {s:?}"));
        };
        let (q_min, q_max, q_steps) = axis(q)?;
        let (r_min, r_max, r_steps) = axis(r)?;
        Ok(SweepGrid {
            q_min,
            q_max,
            q_steps,
            r_min,
            r_max,
            r_steps,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    /// Mutual information (two axes)
    Mi,
    /// Multi-information (total correlation)
    Multi,
    /// Interaction information
    Interaction,
}

#[derive(Debug, Parser)]
#[command(
    name = "polyent",
    version,
    about = "Generalized (q, r) entropies, polyadic synergy and classical information measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generalized entropy of a pmf, factored system or joint table
    Entropy {
        input: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
        /// Logarithm base for the Shannon case (q = r = 1)
        #[arg(long, default_value = "e", allow_hyphen_values = true)]
        base: LogBase,
    },
    /// Polyadic synergy of independent subsystems
    Synergy {
        input: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
    },
    /// Compare printed and derived expansions against direct evaluation (CSV)
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        r: f64,
        /// qmin:qmax:steps,rmin:rmax:steps (overrides --q/--r)
        #[arg(long)]
        grid: Option<SweepGrid>,
    },
    /// Synergy over a (q, r) grid, written as CSV
    Sweep {
        input: PathBuf,
        /// qmin:qmax:steps,rmin:rmax:steps
        #[arg(long)]
        grid: SweepGrid,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Classical information measures of a joint table
    Info {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = MeasureArg::Mi)]
        measure: MeasureArg,
        #[arg(long, default_value = "e", allow_hyphen_values = true)]
        base: LogBase,
    },
}

/// A parsed input document.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Pmf(Pmf),
    Factored(FactoredSystem),
    Joint(JointTable),
}

#[derive(Deserialize)]
struct RawFactored {
    marginals: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawJoint {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl Input {
    /// Parses a JSON document. Structural problems are [`CliError::Parse`];
    /// invalid probabilities are [`CliError::Domain`].
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let parse = |e: serde_json::Error| CliError::Parse(e.to_string());
        match &value {
            serde_json::Value::Array(_) => {
                let probs: Vec<f64> = serde_json::from_value(value).map_err(parse)?;
                Ok(Input::Pmf(Pmf::new(probs)?))
            }
            serde_json::Value::Object(map) if map.contains_key("marginals") => {
                let raw: RawFactored = serde_json::from_value(value).map_err(parse)?;
                let marginals = raw
                    .marginals
                    .into_iter()
                    .map(Pmf::new)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Input::Factored(FactoredSystem::new(marginals)?))
            }
            serde_json::Value::Object(map) if map.contains_key("shape") => {
                let raw: RawJoint = serde_json::from_value(value).map_err(parse)?;
                Ok(Input::Joint(JointTable::new(raw.shape, raw.probs)?))
            }
            _ => Err(CliError::Parse(
                "expected an array, an object with \"marginals\", or an object with \"shape\""
                    .into(),
            )),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Input::from_json(&text)
    }

    /// The input as independent subsystems. Joint tables must factorize.
    pub fn into_factored(self) -> Result<FactoredSystem, CliError> {
        match self {
            Input::Pmf(p) => Ok(FactoredSystem::new(vec![p])?),
            Input::Factored(s) => Ok(s),
            Input::Joint(j) => {
                let defect = independence_defect(&j);
                if defect > INDEPENDENCE_TOL {
                    return Err(CliError::NotIndependent(defect));
                }
                let marginals = j
                    .axis_marginals()
                    .into_iter()
                    .map(|m| Pmf::new(m.into()))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FactoredSystem::new(marginals)?)
            }
        }
    }

    /// The input as an explicit joint table, materializing if needed.
    pub fn into_joint(self, max_cells: usize) -> Result<JointTable, CliError> {
        match self {
            Input::Pmf(p) => Ok(JointTable::new(vec![p.len()], p.into())?),
            Input::Factored(s) => Ok(materialize(&s, max_cells)?),
            Input::Joint(j) => Ok(j),
        }
    }
}

/// Reads the materialization cap from [`MAX_CELLS_ENV`].
pub fn max_cells_from_env() -> Result<usize, CliError> {
    match std::env::var(MAX_CELLS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError::Parse(format!("{MAX_CELLS_ENV}={v:?}: {e}"))),
        Err(_) => Ok(DEFAULT_MAX_CELLS),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyOutput {
    pub entropy: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<String>,
}

fn unit_name(base: f64) -> String {
    if base == 2.0 {
        "bit".into()
    } else if base == std::f64::consts::E {
        "nat".into()
    } else if base == 10.0 {
        "hartley".into()
    } else {
        format!("log{base}")
    }
}

/// Computes the `entropy` command's output.
pub fn entropy_report(
    input: &Input,
    params: EntropyParams,
    base: f64,
) -> Result<EntropyOutput, Error> {
    if params.is_bgs() {
        let entropy = match input {
            Input::Pmf(p) => entropy_bgs(p, base)?,
            Input::Factored(s) => s
                .marginals()
                .iter()
                .map(|m| entropy_bgs(m, base))
                .sum::<Result<f64, _>>()?,
            Input::Joint(j) => entropy_bgs(&j.as_pmf(), base)?,
        };
        return Ok(EntropyOutput {
            entropy,
            units: Some(unit_name(base)),
        });
    }
    let entropy = match input {
        Input::Pmf(p) => entropy_generalized(p, params),
        Input::Factored(s) => entropy_joint_factored(s, params),
        Input::Joint(j) => entropy_joint_table(j, params),
    };
    Ok(EntropyOutput {
        entropy,
        units: None,
    })
}

/// Direct synergy plus expanded-form diagnostics for two or three subsystems.
pub fn synergy_report(
    system: &FactoredSystem,
    params: EntropyParams,
) -> Result<SynergyReport, Error> {
    let mut report = polyadic_synergy(system, params)?;
    match system.marginals() {
        [yi, yj] => {
            let expanded = dyadic_synergy_expanded(yi, yj, params);
            report
                .terms
                .push(Term::new("expanded printed", expanded.value));
            report
                .terms
                .extend(expanded.terms.into_iter().map(|t| Term {
                    label: format!("printed {}", t.label),
                    value: t.value,
                }));
        }
        [yi, yj, yl] => {
            let expanded = triadic_synergy_expanded(yi, yj, yl, params);
            report
                .terms
                .extend(expanded.terms.into_iter().filter(|t| t.label != "direct"));
        }
        _ => {}
    }
    Ok(report)
}

/// One row of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub r: f64,
    pub synergy: f64,
    pub classification: Classification,
}

/// Evaluates the synergy at every grid point. Rows come back in grid order
/// whatever the number of threads.
pub fn sweep(
    system: &FactoredSystem,
    grid: &SweepGrid,
    threads: Option<usize>,
) -> Result<Vec<SweepRow>, CliError> {
    if system.arity() < 2 {
        return Err(Error::ArityTooSmall(system.arity()).into());
    }
    let points = grid.params()?;
    let eval = || -> Vec<SweepRow> {
        points
            .par_iter()
            .map(|&p| {
                let report = polyadic_synergy(system, p).expect("arity checked");
                SweepRow {
                    q: p.q(),
                    r: p.r(),
                    synergy: report.value,
                    classification: report.classification,
                }
            })
            .collect()
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(e.to_string()))?;
            Ok(pool.install(eval))
        }
        None => Ok(eval()),
    }
}

/// Renders sweep rows as CSV with header `q,r,synergy,classification`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("q,r,synergy,classification\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.q, row.r, row.synergy, row.classification
        );
    }
    out
}

/// Renders an audit as CSV; returns the text and whether every derived
/// expansion matched.
pub fn verify_csv(system: &FactoredSystem, grid: &SweepGrid) -> Result<(String, bool), CliError> {
    let audit = audit_expansions(system, &grid.params()?)?;
    let mut out =
        String::from("q,r,direct,derived,printed,abs_printed_minus_direct,printed_mismatch\n");
    for rep in &audit.reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            rep.params.q(),
            rep.params.r(),
            rep.direct,
            rep.derived,
            rep.printed,
            rep.printed_discrepancy,
            !rep.printed_matches()
        );
    }
    Ok((out, audit.derived_failures.is_empty()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

/// Runs one command, writing its result to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Entropy { input, q, r, base } => {
            let params = EntropyParams::new(q, r)?;
            let input = Input::load(&input)?;
            let report = entropy_report(&input, params, base.0)?;
            write_out(out, &(to_json(&report) + "\n"))
        }
        Command::Synergy { input, q, r } => {
            let params = EntropyParams::new(q, r)?;
            let system = Input::load(&input)?.into_factored()?;
            let report = synergy_report(&system, params)?;
            write_out(out, &(to_json(&report) + "\n"))
        }
        Command::Verify { input, q, r, grid } => {
            let grid = grid.unwrap_or(SweepGrid::point(q, r));
            let system = Input::load(&input)?.into_factored()?;
            let (csv, ok) = verify_csv(&system, &grid)?;
            write_out(out, &csv)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Internal(
                    "derived expansion disagrees with direct evaluation".into(),
                ))
            }
        }
        Command::Sweep {
            input,
            grid,
            out: path,
            threads,
        } => {
            let system = Input::load(&input)?.into_factored()?;
            let rows = sweep(&system, &grid, threads)?;
            std::fs::write(&path, sweep_csv(&rows))
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        Command::Info {
            input,
            measure,
            base,
        } => {
            let joint = Input::load(&input)?.into_joint(max_cells_from_env()?)?;
            let result = match measure {
                MeasureArg::Mi => mutual_information(&joint, base.0),
                MeasureArg::Multi => multi_information(&joint, base.0),
                MeasureArg::Interaction => interaction_information(&joint, base.0),
            }?;
            write_out(out, &(to_json(&result) + "\n"))
        }
    }
}
