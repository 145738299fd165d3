//! CSV tables for the command-line front end.
//!
//! Every file starts with one comment line
//! `# config_sha256=<hex> seed=<n|none> schema_version=<v>`, followed by a
//! header row. Reals are written with 17 significant digits; a missing value
//! is an empty cell.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::{bound_report, hilbert_rate, liouville_rate, BoundReport};
use crate::config::RunConfig;
use crate::dynamics::{integrate, integrate_with_reference, steady_state, Trajectory};
use crate::error::{Error, Result};
use crate::model::{classify_channel, ChannelKind, LindbladModel};
use crate::scenarios::{
    builtin_scenario, compose_independent, product_state, BoundKind, ScenarioParams,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Provenance recorded in the comment line of every CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stamp {
    pub config_sha256: String,
    pub seed: Option<u64>,
}

impl Stamp {
    pub fn comment(&self) -> String {
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!(
            "# config_sha256={} seed={seed} schema_version={SCHEMA_VERSION}",
            self.config_sha256
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_real(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_real)
}

pub fn write_table<W: Write>(out: W, stamp: &Stamp, table: &Table) -> io::Result<()> {
    let mut out = out;
    writeln!(out, "{}", stamp.comment())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn write_table_file(path: &Path, stamp: &Stamp, table: &Table) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_table(io::BufWriter::new(File::create(path)?), stamp, table)
}

/// Trajectories of every initial state, integrated in parallel. With a
/// steady-state strategy the purity deviation is measured against its `rho_s`.
pub fn run_trajectories(cfg: &RunConfig) -> Result<Vec<Trajectory>> {
    cfg.initial_states
        .par_iter()
        .map(|rho0| match &cfg.steady_state {
            Some(strategy) => {
                let ss = steady_state(&cfg.model, rho0, strategy.clone())?;
                integrate_with_reference(&cfg.model, rho0, &cfg.grid, Some(&ss.rho_s))
            }
            None => integrate(&cfg.model, rho0, &cfg.grid),
        })
        .collect()
}

pub fn trajectory_table(trajectories: &[Trajectory]) -> Table {
    let mut table = Table::new([
        "state",
        "t",
        "purity",
        "purity_deviation",
        "renyi2",
        "vn_entropy",
    ]);
    for (k, tr) in trajectories.iter().enumerate() {
        for (t, o) in tr.times.iter().zip(&tr.observables) {
            table.rows.push(vec![
                k.to_string(),
                fmt_real(*t),
                fmt_real(o.purity),
                fmt_real(o.purity_deviation),
                fmt_real(o.renyi2),
                fmt_real(o.vn_entropy),
            ]);
        }
    }
    table
}

/// Rates, actions and the requested envelopes next to the simulated values.
pub fn bounds_table(cfg: &RunConfig, trajectories: &[Trajectory]) -> Result<Table> {
    if cfg.bounds.contains(&BoundKind::DephasingFloor)
        && classify_channel(&cfg.model).kind == ChannelKind::General
    {
        return Err(Error::NotDephasing(
            "the dephasing_floor bound needs normal Lindblad operators".into(),
        ));
    }
    let mut columns: Vec<&str> = vec![
        "state",
        "t",
        "purity",
        "vn_entropy",
        "hilbert_rate",
        "liouville_rate",
        "cooling_rate",
    ];
    for kind in &cfg.bounds {
        columns.extend_from_slice(match kind {
            BoundKind::Hilbert => &[
                "hilbert_action",
                "hilbert_lower_raw",
                "hilbert_upper_raw",
                "hilbert_lower",
                "hilbert_upper",
            ],
            BoundKind::Liouville => &[
                "liouville_action",
                "liouville_lower_raw",
                "liouville_upper_raw",
                "liouville_lower",
                "liouville_upper",
            ],
            BoundKind::Deviation => &["purity_deviation", "deviation_lower", "deviation_upper"],
            BoundKind::DephasingFloor => &["dephasing_floor"],
            BoundKind::Cooling => &["cooling_action", "entropy_floor"],
        });
    }
    let mut table = Table::new(columns);

    let reports: Vec<BoundReport> = trajectories
        .par_iter()
        .map(|tr| {
            let first = &tr.observables[0];
            let deviation = cfg.steady_state.as_ref().map(|_| first.purity_deviation);
            bound_report(&cfg.model, &cfg.grid, first.purity, deviation)
        })
        .collect::<Result<_>>()?;

    for (k, (tr, rep)) in trajectories.iter().zip(&reports).enumerate() {
        for (i, o) in tr.observables.iter().enumerate() {
            let env = &rep.envelopes[i];
            let act = &rep.actions[i];
            let mut row = vec![
                k.to_string(),
                fmt_real(tr.times[i]),
                fmt_real(o.purity),
                fmt_real(o.vn_entropy),
                fmt_real(rep.hilbert_rate_series[i]),
                fmt_real(rep.liouville_rate_series[i]),
                fmt_real(rep.cooling_rate_series[i]),
            ];
            for kind in &cfg.bounds {
                match kind {
                    BoundKind::Hilbert | BoundKind::Liouville => {
                        let (action, e) = if *kind == BoundKind::Hilbert {
                            (act.hilbert, env.purity.hilbert)
                        } else {
                            (act.liouville, env.purity.liouville)
                        };
                        row.extend(
                            [action, e.raw_lower, e.raw_upper, e.lower, e.upper].map(fmt_real),
                        );
                    }
                    BoundKind::Deviation => {
                        let d = env.purity.deviation;
                        row.push(fmt_real(o.purity_deviation));
                        row.push(opt_real(d.map(|e| e.lower)));
                        row.push(opt_real(d.map(|e| e.upper)));
                    }
                    BoundKind::DephasingFloor => row.push(opt_real(env.dephasing_floor)),
                    BoundKind::Cooling => {
                        row.push(fmt_real(act.cooling));
                        row.push(fmt_real(env.entropy_floor));
                    }
                }
            }
            table.rows.push(row);
        }
    }
    Ok(table)
}

/// Dephasing floor, Liouville and Hilbert envelopes and every purity trajectory
/// of the `fig1` scenario.
pub fn fig1_table(params: &ScenarioParams) -> Result<Table> {
    let sc = builtin_scenario("fig1", params)?;
    let trajectories: Vec<Trajectory> = sc
        .initial_states
        .par_iter()
        .map(|rho0| integrate(&sc.model, rho0, &sc.grid))
        .collect::<Result<_>>()?;
    let rep = bound_report(&sc.model, &sc.grid, 1.0, None)?;

    let mut columns: Vec<String> = [
        "t",
        "dephasing_floor",
        "liouville_lower",
        "liouville_upper",
        "liouville_lower_raw",
        "liouville_upper_raw",
        "hilbert_lower",
        "hilbert_upper",
        "hilbert_lower_raw",
        "hilbert_upper_raw",
    ]
    .map(String::from)
    .to_vec();
    columns.extend((0..trajectories.len()).map(|k| format!("purity_{k}")));
    let mut table = Table::new(columns);

    for (i, t) in rep.times.iter().enumerate() {
        let env = &rep.envelopes[i];
        let (l, h) = (env.purity.liouville, env.purity.hilbert);
        let mut row = vec![fmt_real(*t), opt_real(env.dephasing_floor)];
        row.extend([l.lower, l.upper, l.raw_lower, l.raw_upper].map(fmt_real));
        row.extend([h.lower, h.upper, h.raw_lower, h.raw_upper].map(fmt_real));
        row.extend(
            trajectories
                .iter()
                .map(|tr| fmt_real(tr.observables[i].purity)),
        );
        table.rows.push(row);
    }
    Ok(table)
}

/// Exact entropy, Renyi-2 entropy and the cooling, Liouville and Hilbert
/// entropy floors of the `fig2` scenario.
pub fn fig2_table(params: &ScenarioParams) -> Result<Table> {
    let sc = builtin_scenario("fig2", params)?;
    let rho0 = &sc.initial_states[0];
    let tr = integrate(&sc.model, rho0, &sc.grid)?;
    let rep = bound_report(&sc.model, &sc.grid, rho0.purity(), None)?;
    let mut table = Table::new([
        "t",
        "S_exact",
        "neg_log_purity",
        "entropy_floor_eq14",
        "liouville_envelope",
        "hilbert_envelope",
    ]);
    for (i, o) in tr.observables.iter().enumerate() {
        let env = &rep.envelopes[i];
        table.rows.push(
            [
                tr.times[i],
                o.vn_entropy,
                o.renyi2,
                env.entropy_floor,
                env.entropy_liouville,
                env.entropy_hilbert,
            ]
            .map(fmt_real)
            .to_vec(),
        );
    }
    Ok(table)
}

/// Rates and final log-purity of `m = 1..=copies` independent copies of a
/// time-independent model, next to the single-copy predictions
/// `m N^(m-1) hilbert_1`, `m liouville_1` and `m ln P_1`.
pub fn compose_table(cfg: &RunConfig, copies: usize) -> Result<Table> {
    let single = &cfg.model;
    let rho0 = &cfg.initial_states[0];
    let n = single.dim() as f64;
    let h1 = hilbert_rate(single, 0.0)?;
    let l1 = liouville_rate(single, 0.0)?;
    let ln_p1 = integrate(single, rho0, &cfg.grid)?.last().2.purity.ln();

    let mut table = Table::new([
        "copies",
        "dim",
        "hilbert_rate",
        "hilbert_predicted",
        "liouville_rate",
        "liouville_predicted",
        "log_purity_final",
        "log_purity_predicted",
    ]);
    table
        .rows
        .push(row_for(1, single.dim(), h1, h1, l1, l1, ln_p1, ln_p1));
    for m in 2..=copies {
        let model: LindbladModel = compose_independent(single, m)?;
        let state = product_state(rho0, m)?;
        let ln_pm = integrate(&model, &state, &cfg.grid)?.last().2.purity.ln();
        let mf = m as f64;
        table.rows.push(row_for(
            m,
            model.dim(),
            hilbert_rate(&model, 0.0)?,
            mf * n.powi(m as i32 - 1) * h1,
            liouville_rate(&model, 0.0)?,
            mf * l1,
            ln_pm,
            mf * ln_p1,
        ));
    }
    Ok(table)
}

#[allow(clippy::too_many_arguments)]
fn row_for(m: usize, dim: usize, h: f64, hp: f64, l: f64, lp: f64, p: f64, pp: f64) -> Vec<String> {
    let mut row = vec![m.to_string(), dim.to_string()];
    row.extend([h, hp, l, lp, p, pp].map(fmt_real));
    row
}
