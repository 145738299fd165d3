//! Fixed-step RK4 integration of the master equation, trajectory observables
//! and steady-state references for the purity-deviation bound.
//!
//! The trace is never renormalized: drift is measured and a step is rejected
//! once it exceeds [`TRACE_DRIFT_TOL`].

use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_norm, frobenius_norm_sqr, hermitian_eigs, joint_eigenbasis, kernel_vector, Matrix,
    C64, I,
};
use crate::liouville::{build_superoperator, devectorize_slice};
use crate::model::{
    classify_channel, validate_density, ChannelKind, DensityMatrix, DensityTolerances,
    FrozenGenerator, LindbladModel,
};

pub const TRACE_DRIFT_TOL: f64 = 1e-7;
pub const HERMITICITY_TOL: f64 = 1e-8;
pub const STEADY_STATE_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    pub sample_stride: usize,
}

impl TimeGrid {
    pub const DEFAULT_DT: f64 = 1e-3;

    pub fn new(t_start: f64, t_end: f64, dt: f64, sample_stride: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite() && dt.is_finite()) {
            return Err(Error::InvalidGrid("times must be finite".into()));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        if dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if (t_end - t_start) / dt < 1.0 - 1e-12 {
            return Err(Error::InvalidGrid(format!(
                "dt ({dt}) exceeds the integration window ({})",
                t_end - t_start
            )));
        }
        if sample_stride == 0 {
            return Err(Error::InvalidGrid(
                "sample_stride must be at least 1".into(),
            ));
        }
        Ok(TimeGrid {
            t_start,
            t_end,
            dt,
            sample_stride,
        })
    }

    /// Step boundaries. Interior schedule breakpoints become step boundaries;
    /// each piece between them is split into `ceil(len / dt)` equal steps.
    pub fn step_boundaries(&self, model: &LindbladModel) -> Vec<f64> {
        let mut knots = vec![self.t_start];
        knots.extend(model.breakpoints_within(self.t_start, self.t_end));
        knots.push(self.t_end);
        let mut out = vec![self.t_start];
        for w in knots.windows(2) {
            let len = w[1] - w[0];
            let steps = ((len / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
            let h = len / steps as f64;
            for s in 1..steps {
                out.push(w[0] + s as f64 * h);
            }
            out.push(w[1]);
        }
        out
    }

    /// Step indices (into `step_boundaries`) at which observables are recorded.
    pub fn sample_indices(&self, n_boundaries: usize) -> Vec<usize> {
        let last = n_boundaries - 1;
        let mut idx: Vec<usize> = (0..=last).step_by(self.sample_stride).collect();
        if *idx.last().unwrap() != last {
            idx.push(last);
        }
        idx
    }

    pub fn sample_times(&self, model: &LindbladModel) -> Vec<f64> {
        let b = self.step_boundaries(model);
        self.sample_indices(b.len())
            .into_iter()
            .map(|i| b[i])
            .collect()
    }

    fn check_domain(&self, model: &LindbladModel) -> Result<()> {
        if let Some(s) = model.schedule() {
            s.segment_at(self.t_start)?;
            s.segment_at(self.t_end)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub purity: f64,
    /// `tr[(rho - rho_s)^2]`; equals the purity when no reference is given.
    pub purity_deviation: f64,
    /// `-ln P`.
    pub renyi2: f64,
    pub vn_entropy: f64,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: Vec<Observables>,
}

impl Trajectory {
    pub fn purities(&self) -> Vec<f64> {
        self.observables.iter().map(|o| o.purity).collect()
    }

    pub fn last(&self) -> (&f64, &DensityMatrix, &Observables) {
        let k = self.times.len() - 1;
        (&self.times[k], &self.states[k], &self.observables[k])
    }
}

pub fn integrate(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    integrate_with_reference(model, rho0, grid, None)
}

/// RK4 integration; `reference` is the `rho_s` used for the purity deviation.
pub fn integrate_with_reference(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    reference: Option<&Matrix>,
) -> Result<Trajectory> {
    if rho0.dim() != model.dim() {
        return Err(Error::DimMismatch {
            expected: model.dim(),
            found: rho0.dim(),
        });
    }
    if let Some(r) = reference {
        if r.rows() != model.dim() || r.cols() != model.dim() {
            return Err(Error::DimMismatch {
                expected: model.dim(),
                found: r.rows(),
            });
        }
    }
    grid.check_domain(model)?;

    let boundaries = grid.step_boundaries(model);
    let samples = grid.sample_indices(boundaries.len());
    let mut next_sample = 0;

    let mut trajectory = Trajectory {
        times: Vec::with_capacity(samples.len()),
        states: Vec::with_capacity(samples.len()),
        observables: Vec::with_capacity(samples.len()),
    };

    let initial_trace = rho0.matrix().trace().re;
    let mut rho = rho0.matrix().clone();
    let mut cached: Option<(Option<usize>, FrozenGenerator)> = None;

    for step in 0..boundaries.len() {
        let t = boundaries[step];
        if samples[next_sample] == step {
            let state =
                DensityMatrix::with_tolerances(&rho, DensityTolerances::RELAXED).map_err(|e| {
                    Error::StepRejected {
                        t,
                        reason: e.to_string(),
                    }
                })?;
            trajectory.observables.push(observe(&state, reference)?);
            trajectory.states.push(state);
            trajectory.times.push(t);
            next_sample += 1;
        }
        if step + 1 == boundaries.len() {
            break;
        }
        let h = boundaries[step + 1] - t;
        let mid = t + 0.5 * h;
        let segment = match model.schedule() {
            Some(s) => Some(s.segment_at(mid)?),
            None => None,
        };
        if cached.as_ref().is_none_or(|(seg, _)| *seg != segment) {
            cached = Some((segment, model.generator_at(mid)?));
        }
        let generator = &cached.as_ref().unwrap().1;
        rho = rk4_step(generator, &rho, h);
        check_step(&rho, initial_trace, boundaries[step + 1])?;
    }
    Ok(trajectory)
}

fn rk4_step(g: &FrozenGenerator, rho: &Matrix, h: f64) -> Matrix {
    let k1 = g.apply(rho);
    let k2 = g.apply(&(rho + &k1.scale_real(0.5 * h)));
    let k3 = g.apply(&(rho + &k2.scale_real(0.5 * h)));
    let k4 = g.apply(&(rho + &k3.scale_real(h)));
    let incr = &(&k1 + &k4) + &(&k2 + &k3).scale_real(2.0);
    rho + &incr.scale_real(h / 6.0)
}

fn check_step(rho: &Matrix, initial_trace: f64, t: f64) -> Result<()> {
    if rho
        .as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::StepRejected {
            t,
            reason: "state diverged to non-finite values".into(),
        });
    }
    let drift = (rho.trace().re - initial_trace).abs();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::StepRejected {
            t,
            reason: format!("trace drift {drift:e} exceeds {TRACE_DRIFT_TOL:e}; reduce dt"),
        });
    }
    let defect = rho.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::StepRejected {
            t,
            reason: format!("Hermiticity defect {defect:e} exceeds {HERMITICITY_TOL:e}"),
        });
    }
    Ok(())
}

fn observe(state: &DensityMatrix, reference: Option<&Matrix>) -> Result<Observables> {
    let purity = state.purity();
    let purity_deviation = match reference {
        Some(r) => purity_deviation(state, r)?,
        None => purity,
    };
    Ok(Observables {
        purity,
        purity_deviation,
        renyi2: -purity.ln(),
        vn_entropy: vn_entropy(state)?,
    })
}

/// `tr[(rho - rho_s)^2] = <r_D|r_D>`.
pub fn purity_deviation(rho: &DensityMatrix, rho_s: &Matrix) -> Result<f64> {
    if rho_s.rows() != rho.dim() || rho_s.cols() != rho.dim() {
        return Err(Error::DimMismatch {
            expected: rho.dim(),
            found: rho_s.rows(),
        });
    }
    Ok(frobenius_norm_sqr(&(rho.matrix() - rho_s)))
}

/// `-sum lambda ln lambda`; eigenvalues in `[-1e-9, 0)` count as zero.
pub fn vn_entropy(rho: &DensityMatrix) -> Result<f64> {
    let spectrum = hermitian_eigs(&rho.matrix().hermitian_part())?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SteadyStateStrategy {
    UserSupplied(Matrix),
    MaximallyMixed,
    DephasedDiagonal,
    Kernel,
    LongTime { dt: f64, t_max: f64 },
}

impl SteadyStateStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            SteadyStateStrategy::UserSupplied(_) => "user_supplied",
            SteadyStateStrategy::MaximallyMixed => "maximally_mixed",
            SteadyStateStrategy::DephasedDiagonal => "dephased_diagonal",
            SteadyStateStrategy::Kernel => "kernel",
            SteadyStateStrategy::LongTime { .. } => "long_time",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    /// Reference matrix; not necessarily a valid state for `UserSupplied`.
    pub rho_s: Matrix,
    pub strategy: &'static str,
    /// `||L(rho_s)||_F`, maximized over schedule segments.
    pub residual: f64,
}

/// `||L(m)||_F`, maximized over the generator's distinct segments.
pub fn stationarity_residual(model: &LindbladModel, m: &Matrix) -> Result<f64> {
    let probe_times: Vec<f64> = match model.schedule() {
        Some(s) => s
            .breakpoints()
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect(),
        None => vec![0.0],
    };
    let mut worst: f64 = 0.0;
    for t in probe_times {
        worst = worst.max(frobenius_norm(&model.generator_at(t)?.apply(m)));
    }
    Ok(worst)
}

pub fn steady_state(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    strategy: SteadyStateStrategy,
) -> Result<SteadyState> {
    if rho0.dim() != model.dim() {
        return Err(Error::DimMismatch {
            expected: model.dim(),
            found: rho0.dim(),
        });
    }
    let name = strategy.name();
    let rho_s = match strategy {
        SteadyStateStrategy::UserSupplied(m) => {
            if m.rows() != model.dim() || m.cols() != model.dim() {
                return Err(Error::DimMismatch {
                    expected: model.dim(),
                    found: m.rows(),
                });
            }
            let residual = stationarity_residual(model, &m)?;
            return Ok(SteadyState {
                rho_s: m,
                strategy: name,
                residual,
            });
        }
        SteadyStateStrategy::MaximallyMixed => {
            require_dephasing(model)?;
            DensityMatrix::maximally_mixed(model.dim()).into_matrix()
        }
        SteadyStateStrategy::DephasedDiagonal => dephased_diagonal(model, rho0)?,
        SteadyStateStrategy::Kernel => kernel_state(model)?,
        SteadyStateStrategy::LongTime { dt, t_max } => long_time_state(model, rho0, dt, t_max)?,
    };
    let residual = stationarity_residual(model, &rho_s)?;
    if residual > STEADY_STATE_RESIDUAL_TOL {
        return Err(match name {
            "kernel" => Error::KernelDegenerate {
                reason: format!("generator residual {residual:e}"),
            },
            _ => Error::NotStationary { residual },
        });
    }
    Ok(SteadyState {
        rho_s,
        strategy: name,
        residual,
    })
}

fn require_dephasing(model: &LindbladModel) -> Result<()> {
    match classify_channel(model).kind {
        ChannelKind::Dephasing => Ok(()),
        ChannelKind::Unitary => Err(Error::NotDephasing(
            "model has no Lindblad operators".into(),
        )),
        ChannelKind::General => Err(Error::NotDephasing(
            "at least one Lindblad operator is not normal".into(),
        )),
    }
}

/// `rho0` with coherences removed in the joint eigenbasis of the Lindblad operators.
fn dephased_diagonal(model: &LindbladModel, rho0: &DensityMatrix) -> Result<Matrix> {
    require_dephasing(model)?;
    let ops: Vec<&Matrix> = model.lindblad_terms().iter().map(|t| &t.operator).collect();
    for (j, a) in ops.iter().enumerate() {
        for b in &ops[j + 1..] {
            let defect =
                frobenius_norm(&a.commutator(b)).max(frobenius_norm(&a.commutator(&b.adjoint())));
            if defect > crate::model::NORMALITY_TOL {
                return Err(Error::NotDephasing(
                    "Lindblad operators do not share an eigenbasis".into(),
                ));
            }
        }
    }
    let mut hermitian_parts = Vec::with_capacity(2 * ops.len());
    for a in &ops {
        hermitian_parts.push(a.hermitian_part());
        hermitian_parts.push((&**a - &a.adjoint()).scale(-I * 0.5));
    }
    let v = joint_eigenbasis(&hermitian_parts, 1e-8)?;
    let in_basis = &(&v.adjoint() * rho0.matrix()) * &v;
    let diag: Vec<C64> = (0..model.dim())
        .map(|i| C64::new(in_basis[(i, i)].re, 0.0))
        .collect();
    Ok(&(&v * &Matrix::from_diag(&diag)) * &v.adjoint())
}

fn kernel_state(model: &LindbladModel) -> Result<Matrix> {
    if !model.is_time_independent() {
        return Err(Error::InvalidArgument(
            "kernel steady state needs a time-independent model".into(),
        ));
    }
    let sup = build_superoperator(model, 0.0)?;
    let (v, residual) = kernel_vector(sup.generator())?;
    let raw = devectorize_slice(model.dim(), &v)?;
    let tr = raw.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::KernelDegenerate {
            reason: "kernel vector is traceless".into(),
        });
    }
    let m = raw.scale(tr.inv()).hermitian_part();
    validate_density(&m).map_err(|e| Error::KernelDegenerate {
        reason: format!("kernel direction is not a state ({e}); kernel residual {residual:e}"),
    })?;
    Ok(m)
}

fn long_time_state(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    dt: f64,
    t_max: f64,
) -> Result<Matrix> {
    if !model.is_time_independent() {
        return Err(Error::InvalidArgument(
            "long_time steady state needs a time-independent model".into(),
        ));
    }
    let generator = model.generator_at(0.0)?;
    let initial_trace = rho0.matrix().trace().re;
    let mut rho = rho0.matrix().clone();
    let mut t = 0.0;
    loop {
        let rate = frobenius_norm(&generator.apply(&rho));
        if rate < 1e-9 {
            return Ok(rho);
        }
        if t >= t_max {
            return Err(Error::NoSteadyState { t_max, rate });
        }
        rho = rk4_step(&generator, &rho, dt);
        t += dt;
        check_step(&rho, initial_trace, t)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;

    fn qubit(a: f64, b: f64) -> DensityMatrix {
        validate_density(&Matrix::from_real(2, 2, &[a, b, b, 1.0 - a])).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(1.0, 1.0, 0.1, 1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.0, 1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 2.0, 1).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0.1, 0).is_err());
        let g = TimeGrid::new(0.0, 1.0, 0.1, 3).unwrap();
        let m = LindbladModel::time_independent(2, vec![], vec![]).unwrap();
        let b = g.step_boundaries(&m);
        assert_eq!(b.len(), 11);
        assert_eq!(g.sample_indices(b.len()), vec![0, 3, 6, 9, 10]);
    }

    #[test]
    fn grid_snaps_to_breakpoints() {
        use crate::model::{Schedule, Term};
        let s = Schedule::new(vec![0.0, 0.25, 1.0], vec![vec![1.0], vec![2.0]]).unwrap();
        let m =
            LindbladModel::new(2, vec![], vec![Term::scheduled(sigma_z(), 0)], Some(s)).unwrap();
        let g = TimeGrid::new(0.0, 1.0, 0.1, 1).unwrap();
        let b = g.step_boundaries(&m);
        assert!(b.contains(&0.25));
        assert!(b.windows(2).all(|w| w[1] - w[0] <= 0.1 + 1e-12));
    }

    #[test]
    fn unitary_evolution_conserves_purity() {
        let m = LindbladModel::time_independent(2, vec![sigma_x()], vec![]).unwrap();
        let rho0 = qubit(1.0, 0.0);
        let g = TimeGrid::new(0.0, std::f64::consts::PI, 1e-3, 100).unwrap();
        let traj = integrate(&m, &rho0, &g).unwrap();
        for o in &traj.observables {
            assert!((o.purity - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dephasing_closed_form() {
        let m = LindbladModel::time_independent(2, vec![], vec![sigma_z()]).unwrap();
        let rho0 = qubit(0.5, 0.5);
        let g = TimeGrid::new(0.0, 1.0, 1e-3, 50).unwrap();
        let traj = integrate(&m, &rho0, &g).unwrap();
        for (t, (s, o)) in traj
            .times
            .iter()
            .zip(traj.states.iter().zip(&traj.observables))
        {
            assert!((s.matrix()[(0, 1)].re - 0.5 * (-2.0 * t).exp()).abs() < 1e-6);
            assert!((o.purity - (0.5 + 0.5 * (-4.0 * t).exp())).abs() < 1e-6);
        }
    }

    #[test]
    fn decay_closed_form() {
        let m = LindbladModel::time_independent(2, vec![], vec![sigma_minus()]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(2);
        let g = TimeGrid::new(0.0, 3.0, 1e-3, 100).unwrap();
        let traj = integrate(&m, &rho0, &g).unwrap();
        for (t, (s, o)) in traj
            .times
            .iter()
            .zip(traj.states.iter().zip(&traj.observables))
        {
            let p1 = 0.5 * (-t).exp();
            assert!((s.matrix()[(1, 1)].re - p1).abs() < 1e-9);
            let entropy = -p1 * p1.ln() - (1.0 - p1) * (1.0 - p1).ln();
            assert!((o.vn_entropy - entropy).abs() < 1e-8);
            assert!(o.vn_entropy >= o.renyi2 - 1e-9);
        }
    }

    #[test]
    fn coarse_step_is_rejected() {
        let m = LindbladModel::time_independent(2, vec![], vec![sigma_minus().scale_real(2.0)])
            .unwrap();
        let g = TimeGrid::new(0.0, 10.0, 1.0, 1).unwrap();
        let err = integrate(&m, &qubit(0.0, 0.0), &g).unwrap_err();
        assert!(matches!(err, Error::StepRejected { .. }), "{err:?}");
    }

    #[test]
    fn out_of_schedule_grid_rejected() {
        use crate::model::{Schedule, Term};
        let s = Schedule::new(vec![0.0, 1.0], vec![vec![1.0]]).unwrap();
        let m =
            LindbladModel::new(2, vec![], vec![Term::scheduled(sigma_z(), 0)], Some(s)).unwrap();
        let g = TimeGrid::new(0.0, 2.0, 0.1, 1).unwrap();
        assert!(matches!(
            integrate(&m, &qubit(0.5, 0.1), &g),
            Err(Error::TimeOutOfRange { .. })
        ));
    }

    #[test]
    fn steady_state_strategies() {
        let deph = LindbladModel::time_independent(2, vec![], vec![sigma_z()]).unwrap();
        let rho0 = qubit(0.7, 0.3);
        let s = steady_state(&deph, &rho0, SteadyStateStrategy::DephasedDiagonal).unwrap();
        assert!(
            s.rho_s
                .max_abs_diff(&Matrix::from_real(2, 2, &[0.7, 0.0, 0.0, 0.3]))
                < 1e-14
        );

        let s = steady_state(&deph, &rho0, SteadyStateStrategy::MaximallyMixed).unwrap();
        assert_eq!(s.rho_s, Matrix::identity(2).scale_real(0.5));
        assert_eq!(s.residual, 0.0);

        let decay = LindbladModel::time_independent(2, vec![], vec![sigma_minus()]).unwrap();
        let s = steady_state(&decay, &rho0, SteadyStateStrategy::Kernel).unwrap();
        assert!(
            s.rho_s
                .max_abs_diff(&Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]))
                < 1e-10
        );
        assert!(s.residual < 1e-10);

        assert!(matches!(
            steady_state(&decay, &rho0, SteadyStateStrategy::MaximallyMixed),
            Err(Error::NotDephasing(_))
        ));

        let s = steady_state(
            &decay,
            &rho0,
            SteadyStateStrategy::LongTime {
                dt: 1e-2,
                t_max: 100.0,
            },
        )
        .unwrap();
        assert!(
            s.rho_s
                .max_abs_diff(&Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]))
                < 1e-8
        );
    }

    #[test]
    fn dephased_diagonal_in_rotated_basis() {
        // A = sigma_x: stationary states are diagonal in the x basis.
        let m = LindbladModel::time_independent(2, vec![], vec![sigma_x()]).unwrap();
        let rho0 = qubit(0.9, 0.2);
        let s = steady_state(&m, &rho0, SteadyStateStrategy::DephasedDiagonal).unwrap();
        assert!(s.residual < 1e-12);
        assert!((s.rho_s.trace().re - 1.0).abs() < 1e-12);
        // <+|rho|+> is kept: 0.5 + b.
        let plus = [C64::new(0.5f64.sqrt(), 0.0), C64::new(0.5f64.sqrt(), 0.0)];
        let pop = crate::linalg::inner(&plus, &s.rho_s.matvec(&plus)).re;
        assert!((pop - 0.7).abs() < 1e-12);
    }

    #[test]
    fn dephased_diagonal_needs_stationarity() {
        let m = LindbladModel::time_independent(2, vec![sigma_x()], vec![sigma_z()]).unwrap();
        assert!(matches!(
            steady_state(&m, &qubit(0.7, 0.3), SteadyStateStrategy::DephasedDiagonal),
            Err(Error::NotStationary { .. })
        ));
    }

    #[test]
    fn purity_deviation_examples() {
        let rho = qubit(0.7, 0.3);
        assert_eq!(purity_deviation(&rho, rho.matrix()).unwrap(), 0.0);
        let origin = purity_deviation(&rho, &Matrix::zeros(2, 2)).unwrap();
        assert!((origin - rho.purity()).abs() < 1e-15);
        let diag = Matrix::from_real(2, 2, &[0.7, 0.0, 0.0, 0.3]);
        assert!((purity_deviation(&rho, &diag).unwrap() - 2.0 * 0.09).abs() < 1e-15);
        assert!(purity_deviation(&rho, &Matrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(vn_entropy(&qubit(1.0, 0.0)).unwrap().abs() < 1e-15);
        assert!(
            (vn_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 2f64.ln()).abs() < 1e-15
        );
        let s = vn_entropy(&qubit(0.2, 0.0)).unwrap();
        let want = -0.2 * 0.2f64.ln() - 0.8 * 0.8f64.ln();
        assert!((s - want).abs() < 1e-14);
        assert!((s - 0.5004).abs() < 1e-4);
    }
}
