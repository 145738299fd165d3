//! JSON run configuration.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays of them. Unknown fields are rejected.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "hamiltonian": [{"op": "sigma_x"}],
//!   "lindblad": [{"op": "sigma_z", "scale": 0.5}],
//!   "initial_state": {"sampler": "haar_pure", "seed": 7, "count": 10},
//!   "grid": {"t_end": 3.0, "dt": 0.001, "sample_stride": 10},
//!   "bounds": ["hilbert", "liouville", "dephasing_floor"]
//! }
//! ```

use std::path::PathBuf;

use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::dynamics::{SteadyStateStrategy, TimeGrid};
use crate::error::Error;
use crate::linalg::{pauli, Matrix, C64};
use crate::model::{validate_density, DensityMatrix, LindbladModel, Schedule, Term};
use crate::scenarios::{sample_states, BoundKind, SamplerConfig, SamplerKind};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error("validation error: {0}")]
    Validation(#[from] Error),
}

impl ConfigError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type ComplexEntry = [f64; 2];
pub type RawMatrix = Vec<Vec<ComplexEntry>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dim: usize,
    #[serde(default)]
    hamiltonian: Vec<RawTerm>,
    #[serde(default)]
    lindblad: Vec<RawTerm>,
    schedule: Option<RawSchedule>,
    initial_state: RawInitialState,
    grid: RawGrid,
    #[serde(default)]
    bounds: Vec<String>,
    steady_state: Option<RawSteadyState>,
    output: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    op: Option<String>,
    matrix: Option<RawMatrix>,
    #[serde(default = "one")]
    scale: f64,
    coefficient: Option<usize>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    breakpoints: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitialState {
    matrix: Option<RawMatrix>,
    sampler: Option<String>,
    seed: Option<u64>,
    count: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    #[serde(default)]
    t_start: f64,
    t_end: f64,
    #[serde(default = "default_dt")]
    dt: f64,
    #[serde(default = "default_stride")]
    sample_stride: usize,
}

fn default_dt() -> f64 {
    TimeGrid::DEFAULT_DT
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSteadyState {
    strategy: String,
    matrix: Option<RawMatrix>,
    dt: Option<f64>,
    t_max: Option<f64>,
}

/// A parsed and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: LindbladModel,
    pub initial_states: Vec<DensityMatrix>,
    /// Sampler seed, when the initial states were drawn at random.
    pub seed: Option<u64>,
    pub grid: TimeGrid,
    pub bounds: Vec<BoundKind>,
    pub steady_state: Option<SteadyStateStrategy>,
    pub output: Option<PathBuf>,
    /// Hex SHA-256 of the configuration text.
    pub sha256: String,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn named_operator(name: &str, dim: usize) -> Option<Matrix> {
    let m = match name {
        "identity" => return Some(Matrix::identity(dim)),
        "sigma_x" => pauli::sigma_x(),
        "sigma_y" => pauli::sigma_y(),
        "sigma_z" => pauli::sigma_z(),
        "sigma_minus" => pauli::sigma_minus(),
        "sigma_plus" => pauli::sigma_plus(),
        _ => return None,
    };
    (dim == 2).then_some(m)
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() {
            let message = inner.to_string();
            // serde_json appends the position; the path is more useful.
            let message = match message.rfind(" at line ") {
                Some(k) => message[..k].to_string(),
                None => message,
            };
            ConfigError::schema(path, message)
        } else {
            ConfigError::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        }
    })?;
    build(raw, sha256_hex(text))
}

fn build(raw: RawConfig, sha256: String) -> Result<RunConfig, ConfigError> {
    let dim = raw.dim;
    if dim == 0 {
        return Err(ConfigError::schema("dim", "must be at least 1"));
    }

    let schedule = match raw.schedule {
        Some(s) => {
            if let Some(i) =
                (1..s.breakpoints.len()).find(|&i| s.breakpoints[i] <= s.breakpoints[i - 1])
            {
                return Err(ConfigError::schema(
                    format!("schedule.breakpoints[{i}]"),
                    format!(
                        "breakpoint {} does not exceed the previous breakpoint {}",
                        s.breakpoints[i],
                        s.breakpoints[i - 1]
                    ),
                ));
            }
            Some(Schedule::new(s.breakpoints, s.values)?)
        }
        None => None,
    };

    let hterms = terms("hamiltonian", raw.hamiltonian, dim)?;
    let lterms = terms("lindblad", raw.lindblad, dim)?;
    let model = LindbladModel::new(dim, hterms, lterms, schedule)?;

    let grid = TimeGrid::new(
        raw.grid.t_start,
        raw.grid.t_end,
        raw.grid.dt,
        raw.grid.sample_stride,
    )?;

    let (initial_states, seed) = initial_states(raw.initial_state, dim)?;

    let mut bounds = Vec::with_capacity(raw.bounds.len());
    for (i, name) in raw.bounds.iter().enumerate() {
        let kind = BoundKind::parse(name).ok_or_else(|| {
            ConfigError::schema(
                format!("bounds[{i}]"),
                format!(
                    "unknown bound `{name}` (expected hilbert, liouville, deviation, dephasing_floor or cooling)"
                ),
            )
        })?;
        if kind == BoundKind::Deviation && raw.steady_state.is_none() {
            return Err(ConfigError::schema(
                format!("bounds[{i}]"),
                "the deviation bound needs a `steady_state` entry",
            ));
        }
        bounds.push(kind);
    }
    if bounds.is_empty() {
        bounds = vec![BoundKind::Hilbert, BoundKind::Liouville];
    }

    let steady_state = raw.steady_state.map(|s| steady_state(s, dim)).transpose()?;

    Ok(RunConfig {
        model,
        initial_states,
        seed,
        grid,
        bounds,
        steady_state,
        output: raw.output,
        sha256,
    })
}

fn terms(field: &str, raw: Vec<RawTerm>, dim: usize) -> Result<Vec<Term>, ConfigError> {
    raw.into_iter()
        .enumerate()
        .map(|(i, t)| {
            let path = format!("{field}[{i}]");
            let op = match (t.op, t.matrix) {
                (Some(name), None) => named_operator(&name, dim).ok_or_else(|| {
                    ConfigError::schema(
                        format!("{path}.op"),
                        format!("unknown operator `{name}` for dim {dim}"),
                    )
                })?,
                (None, Some(m)) => matrix(&format!("{path}.matrix"), &m, dim)?,
                _ => {
                    return Err(ConfigError::schema(
                        path,
                        "exactly one of `op` and `matrix` is required",
                    ))
                }
            };
            if !t.scale.is_finite() {
                return Err(ConfigError::schema(
                    format!("{path}.scale"),
                    "must be finite",
                ));
            }
            let op = op.scale_real(t.scale);
            Ok(match t.coefficient {
                Some(c) => Term::scheduled(op, c),
                None => Term::constant(op),
            })
        })
        .collect()
}

pub fn matrix(path: &str, raw: &RawMatrix, dim: usize) -> Result<Matrix, ConfigError> {
    if raw.len() != dim {
        return Err(ConfigError::schema(
            path,
            format!("expected {dim} rows, found {}", raw.len()),
        ));
    }
    let mut data = Vec::with_capacity(dim * dim);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != dim {
            return Err(ConfigError::schema(
                format!("{path}[{i}]"),
                format!("expected {dim} entries, found {}", row.len()),
            ));
        }
        data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
    }
    Ok(Matrix::from_vec(dim, dim, data)?)
}

fn initial_states(
    raw: RawInitialState,
    dim: usize,
) -> Result<(Vec<DensityMatrix>, Option<u64>), ConfigError> {
    match (raw.matrix, raw.sampler) {
        (Some(m), None) => {
            if raw.seed.is_some() || raw.count.is_some() {
                return Err(ConfigError::schema(
                    "initial_state",
                    "`seed` and `count` apply only to a sampler",
                ));
            }
            let m = matrix("initial_state.matrix", &m, dim)?;
            Ok((vec![validate_density(&m)?], None))
        }
        (None, Some(name)) => {
            let kind = SamplerKind::parse(&name)
                .filter(|k| k.produces_states())
                .ok_or_else(|| {
                    ConfigError::schema(
                        "initial_state.sampler",
                        format!("`{name}` is not a state sampler (expected haar_pure or ginibre_density)"),
                    )
                })?;
            let seed = raw.seed.ok_or_else(|| {
                ConfigError::schema("initial_state.seed", "required with a sampler")
            })?;
            let count = raw.count.unwrap_or(1);
            if count == 0 {
                return Err(ConfigError::schema(
                    "initial_state.count",
                    "must be at least 1",
                ));
            }
            let states = sample_states(&SamplerConfig { kind, dim, seed }, count)?;
            Ok((states, Some(seed)))
        }
        _ => Err(ConfigError::schema(
            "initial_state",
            "exactly one of `matrix` and `sampler` is required",
        )),
    }
}

fn steady_state(raw: RawSteadyState, dim: usize) -> Result<SteadyStateStrategy, ConfigError> {
    let extra = |field: &str| {
        ConfigError::schema(
            format!("steady_state.{field}"),
            format!("not used by strategy `{}`", raw.strategy),
        )
    };
    let strategy = match raw.strategy.as_str() {
        "user_supplied" => {
            let m = raw.matrix.as_ref().ok_or_else(|| {
                ConfigError::schema("steady_state.matrix", "required for user_supplied")
            })?;
            SteadyStateStrategy::UserSupplied(matrix("steady_state.matrix", m, dim)?)
        }
        "maximally_mixed" => SteadyStateStrategy::MaximallyMixed,
        "dephased_diagonal" => SteadyStateStrategy::DephasedDiagonal,
        "kernel" => SteadyStateStrategy::Kernel,
        "long_time" => SteadyStateStrategy::LongTime {
            dt: raw.dt.unwrap_or(TimeGrid::DEFAULT_DT),
            t_max: raw.t_max.unwrap_or(100.0),
        },
        other => {
            return Err(ConfigError::schema(
                "steady_state.strategy",
                format!("unknown strategy `{other}`"),
            ))
        }
    };
    if raw.matrix.is_some() && !matches!(strategy, SteadyStateStrategy::UserSupplied(_)) {
        return Err(extra("matrix"));
    }
    if !matches!(strategy, SteadyStateStrategy::LongTime { .. }) {
        if raw.dt.is_some() {
            return Err(extra("dt"));
        }
        if raw.t_max.is_some() {
            return Err(extra("t_max"));
        }
    }
    Ok(strategy)
}
