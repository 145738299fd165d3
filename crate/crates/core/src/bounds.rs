//! State-independent speed limits on purity and entropy.
//!
//! Three rates bound `|d ln P / dt|` or the entropy decrease, all functions of
//! the generator alone:
//!
//! * Hilbert-space rate `4 sum_k ||A_k||_F^2`,
//! * Liouville-space rate `||H_r - H_r^dagger||_sp`,
//! * cooling rate `max eig(-i (H_r - H_r^dagger))`, signed, only meaningful
//!   while purity grows.
//!
//! Integrated over time they give "actions"; exponentiated they give purity
//! envelopes. Rates are piecewise constant because schedules are.

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm_sqr, hermitian_eigs, joint_eigenbasis, Matrix, C64, I};
use crate::liouville::{max_growth_rate, model_skew_part, skew_spectral_norm};
use crate::model::{classify_channel, normality_defect, ChannelKind, LindbladModel, NORMALITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    Hilbert,
    Liouville,
    Cooling,
}

/// `4 sum_k ||A_k(t)||_F^2`.
pub fn hilbert_rate(model: &LindbladModel, t: f64) -> Result<f64> {
    Ok(4.0
        * model
            .lindblad_ops_at(t)?
            .iter()
            .map(frobenius_norm_sqr)
            .sum::<f64>())
}

/// `||H_r - H_r^dagger||_sp` at time `t`.
pub fn liouville_rate(model: &LindbladModel, t: f64) -> Result<f64> {
    Ok(skew_spectral_norm(&model_skew_part(model, t)?))
}

/// Largest signed eigenvalue of `-i (H_r - H_r^dagger)` at time `t`.
pub fn cooling_rate(model: &LindbladModel, t: f64) -> Result<f64> {
    Ok(max_growth_rate(&model_skew_part(model, t)?))
}

pub fn rate(model: &LindbladModel, t: f64, kind: RateKind) -> Result<f64> {
    match kind {
        RateKind::Hilbert => hilbert_rate(model, t),
        RateKind::Liouville => liouville_rate(model, t),
        RateKind::Cooling => cooling_rate(model, t),
    }
}

/// All three rates on one piece of constant coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePiece {
    pub t0: f64,
    pub t1: f64,
    pub hilbert: f64,
    pub liouville: f64,
    pub cooling: f64,
}

impl RatePiece {
    pub fn get(&self, kind: RateKind) -> f64 {
        match kind {
            RateKind::Hilbert => self.hilbert,
            RateKind::Liouville => self.liouville,
            RateKind::Cooling => self.cooling,
        }
    }
}

/// Rates over `[t0, t1]`, one piece per schedule segment.
#[derive(Debug, Clone)]
pub struct RateProfile {
    pieces: Vec<RatePiece>,
}

impl RateProfile {
    pub fn new(model: &LindbladModel, t0: f64, t1: f64) -> Result<Self> {
        if let Some(s) = model.schedule() {
            s.segment_at(t0)?;
            s.segment_at(t1)?;
        }
        let mut knots = vec![t0];
        knots.extend(model.breakpoints_within(t0, t1));
        knots.push(t1);
        let mut pieces = Vec::with_capacity(knots.len() - 1);
        for w in knots.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let skew = model_skew_part(model, mid)?;
            pieces.push(RatePiece {
                t0: w[0],
                t1: w[1],
                hilbert: hilbert_rate(model, mid)?,
                liouville: skew_spectral_norm(&skew),
                cooling: max_growth_rate(&skew),
            });
        }
        Ok(RateProfile { pieces })
    }

    pub fn pieces(&self) -> &[RatePiece] {
        &self.pieces
    }

    /// Rate in force at `t` (right-continuous; the final endpoint belongs to the last piece).
    pub fn rate_at(&self, t: f64, kind: RateKind) -> f64 {
        let idx = self.pieces.iter().rposition(|p| p.t0 <= t).unwrap_or(0);
        self.pieces[idx].get(kind)
    }

    /// `int_{t0}^{t} rate`, with `t` clamped to the profile window.
    pub fn action_until(&self, t: f64, kind: RateKind) -> f64 {
        self.pieces
            .iter()
            .map(|p| {
                let hi = t.min(p.t1);
                if hi <= p.t0 {
                    0.0
                } else {
                    p.get(kind) * (hi - p.t0)
                }
            })
            .sum()
    }

    pub fn total_action(&self, kind: RateKind) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.get(kind) * (p.t1 - p.t0))
            .sum()
    }
}

/// `int rate dt` over the grid window, exact for piecewise-constant schedules.
pub fn bound_action(model: &LindbladModel, grid: &TimeGrid, kind: RateKind) -> Result<f64> {
    action_between(model, grid.t_start, grid.t_end, kind)
}

pub fn action_between(model: &LindbladModel, t0: f64, t1: f64, kind: RateKind) -> Result<f64> {
    Ok(RateProfile::new(model, t0, t1)?.total_action(kind))
}

/// Lower/upper envelope, both raw and clamped to the physical purity range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub raw_lower: f64,
    pub raw_upper: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Envelope {
    fn exponential(initial: f64, action: f64, floor: f64, ceiling: f64) -> Self {
        let raw_lower = initial * (-action).exp();
        let raw_upper = initial * action.exp();
        Envelope {
            raw_lower,
            raw_upper,
            lower: raw_lower.clamp(floor, ceiling),
            upper: raw_upper.clamp(floor, ceiling),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurityEnvelopes {
    pub hilbert: Envelope,
    pub liouville: Envelope,
    /// `P_D(0) e^{-+ action_liouville}`, clamped only below at zero.
    pub deviation: Option<Envelope>,
}

pub fn purity_envelopes(
    p_init: f64,
    dim: usize,
    action_hilbert: f64,
    action_liouville: f64,
    deviation_init: Option<f64>,
) -> PurityEnvelopes {
    let floor = 1.0 / dim as f64;
    PurityEnvelopes {
        hilbert: Envelope::exponential(p_init, action_hilbert, floor, 1.0),
        liouville: Envelope::exponential(p_init, action_liouville, floor, 1.0),
        deviation: deviation_init
            .map(|pd| Envelope::exponential(pd, action_liouville, 0.0, f64::INFINITY)),
    }
}

/// `1/N + (P_init - 1/N) e^{-action}`.
pub fn dephasing_floor_value(p_init: f64, dim: usize, action_liouville: f64) -> f64 {
    let mixed = 1.0 / dim as f64;
    mixed + (p_init - mixed) * (-action_liouville).exp()
}

/// Purity floor that holds for dephasing (all-normal) channels only.
pub fn dephasing_floor(model: &LindbladModel, p_init: f64, action_liouville: f64) -> Result<f64> {
    if classify_channel(model).kind == ChannelKind::General {
        return Err(Error::NotDephasing(
            "purity floor requires every Lindblad operator to be normal".into(),
        ));
    }
    Ok(dephasing_floor_value(p_init, model.dim(), action_liouville))
}

/// Final-purity floor for an initially pure state under control noise.
pub fn control_floor(dim: usize, action_liouville: f64) -> f64 {
    dephasing_floor_value(1.0, dim, action_liouville)
}

/// Exact Liouville rate for qubit Pauli noise `A_k = sqrt(n_k) sigma_k / 2`:
/// `sum n - min n`.
pub fn control_exact_rate(noise: [f64; 3]) -> Result<f64> {
    if noise.iter().any(|&n| n < 0.0 || !n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise amplitudes must be finite and non-negative, got {noise:?}"
        )));
    }
    let sum: f64 = noise.iter().sum();
    let min = noise.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(sum - min)
}

/// Eigenvalues of a normal operator via joint diagonalization of its
/// Hermitian and anti-Hermitian parts.
pub fn normal_eigenvalues(a: &Matrix) -> Result<Vec<C64>> {
    a.ensure_square()?;
    let defect = normality_defect(a);
    if defect > NORMALITY_TOL {
        return Err(Error::NotNormal { defect });
    }
    let re_part = a.hermitian_part();
    let im_part = (a - &a.adjoint()).scale(-I * 0.5);
    let v = joint_eigenbasis(&[re_part, im_part], 1e-8)?;
    let d = &(&v.adjoint() * a) * &v;
    Ok((0..a.rows()).map(|i| d[(i, i)]).collect())
}

/// `max_{i,j} |lambda_i - lambda_j|^2` for a normal operator.
pub fn dephasing_eig_rate(a: &Matrix) -> Result<f64> {
    let lambdas = normal_eigenvalues(a)?;
    let mut best: f64 = 0.0;
    for (i, li) in lambdas.iter().enumerate() {
        for lj in &lambdas[i + 1..] {
            best = best.max((li - lj).norm_sqr());
        }
    }
    Ok(best)
}

/// `Delta_A^2` with `Delta_A` the spectral gap of a Hermitian operator.
pub fn hermitian_gap_rate(a: &Matrix) -> Result<f64> {
    let gap = hermitian_eigs(a)?.gap;
    Ok(gap * gap)
}

/// `max(0, -ln P_init - int cooling_rate dt)`.
pub fn entropy_floor(p_init: f64, model: &LindbladModel, grid: &TimeGrid) -> Result<f64> {
    if !(p_init > 0.0 && p_init <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "initial purity must lie in (0, 1], got {p_init}"
        )));
    }
    let cooling = bound_action(model, grid, RateKind::Cooling)?;
    Ok((-p_init.ln() - cooling).max(0.0))
}

/// Envelope values at one sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub purity: PurityEnvelopes,
    /// `None` for channels with a non-normal Lindblad operator.
    pub dephasing_floor: Option<f64>,
    /// `max(0, -ln P_init - cooling action)`.
    pub entropy_floor: f64,
    /// Same with the Liouville and Hilbert actions in place of the cooling action.
    pub entropy_liouville: f64,
    pub entropy_hilbert: f64,
}

#[derive(Debug, Clone)]
pub struct Actions {
    pub hilbert: f64,
    pub liouville: f64,
    pub cooling: f64,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub dim: usize,
    pub times: Vec<f64>,
    pub hilbert_rate_series: Vec<f64>,
    pub liouville_rate_series: Vec<f64>,
    pub cooling_rate_series: Vec<f64>,
    /// Cumulative actions from `t_start` to each sample time.
    pub actions: Vec<Actions>,
    pub envelopes: Vec<EnvelopeSample>,
    /// The cooling floor is informative only while the cooling rate is positive.
    pub cooling_valid: bool,
}

pub fn bound_report(
    model: &LindbladModel,
    grid: &TimeGrid,
    p_init: f64,
    deviation_init: Option<f64>,
) -> Result<BoundReport> {
    let dim = model.dim();
    if !(p_init >= 1.0 / dim as f64 - 1e-9 && p_init <= 1.0 + 1e-9) {
        return Err(Error::InvalidArgument(format!(
            "initial purity {p_init} outside [1/{dim}, 1]"
        )));
    }
    let profile = RateProfile::new(model, grid.t_start, grid.t_end)?;
    let dephasing = classify_channel(model).kind != ChannelKind::General;
    let times = grid.sample_times(model);
    let entropy_init = -p_init.ln();

    let mut report = BoundReport {
        dim,
        times: times.clone(),
        hilbert_rate_series: Vec::with_capacity(times.len()),
        liouville_rate_series: Vec::with_capacity(times.len()),
        cooling_rate_series: Vec::with_capacity(times.len()),
        actions: Vec::with_capacity(times.len()),
        envelopes: Vec::with_capacity(times.len()),
        cooling_valid: profile.pieces().iter().any(|p| p.cooling > 0.0),
    };
    for &t in &times {
        report
            .hilbert_rate_series
            .push(profile.rate_at(t, RateKind::Hilbert));
        report
            .liouville_rate_series
            .push(profile.rate_at(t, RateKind::Liouville));
        report
            .cooling_rate_series
            .push(profile.rate_at(t, RateKind::Cooling));
        let actions = Actions {
            hilbert: profile.action_until(t, RateKind::Hilbert),
            liouville: profile.action_until(t, RateKind::Liouville),
            cooling: profile.action_until(t, RateKind::Cooling),
        };
        report.envelopes.push(EnvelopeSample {
            purity: purity_envelopes(
                p_init,
                dim,
                actions.hilbert,
                actions.liouville,
                deviation_init,
            ),
            dephasing_floor: dephasing
                .then(|| dephasing_floor_value(p_init, dim, actions.liouville)),
            entropy_floor: (entropy_init - actions.cooling).max(0.0),
            entropy_liouville: (entropy_init - actions.liouville).max(0.0),
            entropy_hilbert: (entropy_init - actions.hilbert).max(0.0),
        });
        report.actions.push(actions);
    }
    Ok(report)
}
