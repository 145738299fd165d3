//! Lindblad models, density matrices and channel classification.
//!
//! Sign convention: `d rho/dt = -i[H, rho] + sum_k A_k rho A_k^dagger - 1/2 {A_k^dagger A_k, rho}`.
//!
//! Time dependence enters through a piecewise-constant [`Schedule`]. A
//! Hamiltonian term `(H_j, idx)` contributes `f_idx(t) H_j`; a Lindblad term
//! `(A_k, idx)` contributes the operator `sqrt(n_idx(t)) A_k`, so the schedule
//! holds noise rates `n >= 0` for dissipative terms. Terms without an index
//! are constant with unit coefficient.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, frobenius_norm_sqr, hermitian_eigs, Matrix, C64, I};

/// Tolerances used when accepting a matrix as a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl DensityTolerances {
    pub const STRICT: DensityTolerances = DensityTolerances {
        hermiticity: 1e-10,
        trace: 1e-10,
        min_eigenvalue: -1e-9,
    };

    /// Applied to states produced by numerical integration.
    pub const RELAXED: DensityTolerances = DensityTolerances {
        hermiticity: 1e-8,
        trace: 1e-7,
        min_eigenvalue: -1e-8,
    };
}

/// A Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: Matrix,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn maximally_mixed(n: usize) -> Self {
        DensityMatrix {
            matrix: Matrix::identity(n).scale_real(1.0 / n as f64),
        }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::InvalidArgument("state vector has zero norm".into()));
        }
        let m = Matrix::outer(psi, psi).scale_real(1.0 / norm_sq);
        validate_density(&m)
    }

    /// `tr(rho^2)`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        frobenius_norm_sqr(&self.matrix)
    }

    pub fn with_tolerances(m: &Matrix, tol: DensityTolerances) -> Result<Self> {
        let n = m.ensure_square()?;
        let defect = m.hermiticity_defect();
        if defect > tol.hermiticity {
            return Err(Error::NotHermitian { defect });
        }
        let trace = m.trace().re;
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::TraceNotOne {
                trace,
                defect: (trace - 1.0).abs(),
            });
        }
        let spectrum = hermitian_eigs(&m.hermitian_part())?;
        let min_eigenvalue = spectrum.min();
        if min_eigenvalue < tol.min_eigenvalue {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        debug_assert_eq!(n, spectrum.eigenvalues.len());
        Ok(DensityMatrix { matrix: m.clone() })
    }
}

/// Validates `m` as a density matrix with the strict tolerances.
pub fn validate_density(m: &Matrix) -> Result<DensityMatrix> {
    DensityMatrix::with_tolerances(m, DensityTolerances::STRICT)
}

/// Piecewise-constant coefficient table. Segment `s` covers
/// `[breakpoints[s], breakpoints[s + 1])`; the last segment also owns its right
/// endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    breakpoints: Vec<f64>,
    segment_values: Vec<Vec<f64>>,
}

impl Schedule {
    pub fn new(breakpoints: Vec<f64>, segment_values: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidSchedule {
                index: breakpoints.len(),
                reason: "at least two breakpoints are required".into(),
            });
        }
        for (i, b) in breakpoints.iter().enumerate() {
            if !b.is_finite() {
                return Err(Error::InvalidSchedule {
                    index: i,
                    reason: "breakpoint is not finite".into(),
                });
            }
            if i > 0 && *b <= breakpoints[i - 1] {
                return Err(Error::InvalidSchedule {
                    index: i,
                    reason: format!(
                        "breakpoint {b} does not exceed previous breakpoint {}",
                        breakpoints[i - 1]
                    ),
                });
            }
        }
        if segment_values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidSchedule {
                index: 0,
                reason: format!(
                    "{} breakpoints need {} segments, got {}",
                    breakpoints.len(),
                    breakpoints.len() - 1,
                    segment_values.len()
                ),
            });
        }
        let width = segment_values[0].len();
        for (s, row) in segment_values.iter().enumerate() {
            if row.len() != width {
                return Err(Error::InvalidSchedule {
                    index: s,
                    reason: format!("segment has {} coefficients, expected {width}", row.len()),
                });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSchedule {
                    index: s,
                    reason: "segment coefficient is not finite".into(),
                });
            }
        }
        Ok(Schedule {
            breakpoints,
            segment_values,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segment_values(&self) -> &[Vec<f64>] {
        &self.segment_values
    }

    pub fn start(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn coefficient_count(&self) -> usize {
        self.segment_values[0].len()
    }

    fn slack(&self) -> f64 {
        1e-12 * (self.end() - self.start()).max(self.end().abs()).max(1.0)
    }

    pub fn segment_at(&self, t: f64) -> Result<usize> {
        let slack = self.slack();
        if !(t >= self.start() - slack && t <= self.end() + slack) {
            return Err(Error::TimeOutOfRange {
                t,
                start: self.start(),
                end: self.end(),
            });
        }
        let last = self.segment_values.len() - 1;
        // Index of the last breakpoint <= t, capped to the final segment.
        let idx = self
            .breakpoints
            .partition_point(|&b| b <= t)
            .saturating_sub(1);
        Ok(idx.min(last))
    }

    pub fn value(&self, t: f64, coefficient: usize) -> Result<f64> {
        Ok(self.segment_values[self.segment_at(t)?][coefficient])
    }
}

/// An operator together with the schedule coefficient that scales it.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub operator: Matrix,
    pub coefficient: Option<usize>,
}

impl Term {
    pub fn constant(operator: Matrix) -> Self {
        Term {
            operator,
            coefficient: None,
        }
    }

    pub fn scheduled(operator: Matrix, coefficient: usize) -> Self {
        Term {
            operator,
            coefficient: Some(coefficient),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian_terms: Vec<Term>,
    lindblad_terms: Vec<Term>,
    schedule: Option<Schedule>,
}

impl LindbladModel {
    pub fn new(
        dim: usize,
        hamiltonian_terms: Vec<Term>,
        lindblad_terms: Vec<Term>,
        schedule: Option<Schedule>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidModel("dimension must be positive".into()));
        }
        let width = schedule.as_ref().map_or(0, Schedule::coefficient_count);
        for (kind, terms) in [
            ("hamiltonian", &hamiltonian_terms),
            ("lindblad", &lindblad_terms),
        ] {
            for (k, term) in terms.iter().enumerate() {
                let op = &term.operator;
                if op.rows() != dim || op.cols() != dim {
                    return Err(Error::InvalidModel(format!(
                        "{kind} term {k} is {}x{}, model dimension is {dim}",
                        op.rows(),
                        op.cols()
                    )));
                }
                if let Some(idx) = term.coefficient {
                    if idx >= width {
                        return Err(Error::InvalidModel(format!(
                            "{kind} term {k} references coefficient {idx}, schedule has {width}"
                        )));
                    }
                }
            }
        }
        for (k, term) in hamiltonian_terms.iter().enumerate() {
            let defect = term.operator.hermiticity_defect();
            if defect > 1e-10 {
                return Err(Error::InvalidModel(format!(
                    "hamiltonian term {k} is not Hermitian (defect {defect:e})"
                )));
            }
        }
        if let Some(s) = &schedule {
            for term in &lindblad_terms {
                if let Some(idx) = term.coefficient {
                    if let Some(seg) = s.segment_values.iter().position(|row| row[idx] < 0.0) {
                        return Err(Error::InvalidSchedule {
                            index: seg,
                            reason: format!("noise rate coefficient {idx} is negative"),
                        });
                    }
                }
            }
        }
        Ok(LindbladModel {
            dim,
            hamiltonian_terms,
            lindblad_terms,
            schedule,
        })
    }

    /// Constant-coefficient model `H = sum hamiltonians`, Lindblad set `lindblad_ops`.
    pub fn time_independent(
        dim: usize,
        hamiltonians: Vec<Matrix>,
        lindblad_ops: Vec<Matrix>,
    ) -> Result<Self> {
        Self::new(
            dim,
            hamiltonians.into_iter().map(Term::constant).collect(),
            lindblad_ops.into_iter().map(Term::constant).collect(),
            None,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian_terms(&self) -> &[Term] {
        &self.hamiltonian_terms
    }

    pub fn lindblad_terms(&self) -> &[Term] {
        &self.lindblad_terms
    }

    pub fn schedule(&self) -> Option<&Schedule> {
        self.schedule.as_ref()
    }

    pub fn is_time_independent(&self) -> bool {
        self.schedule.is_none()
    }

    /// Same dissipators, Hamiltonian replaced.
    pub fn with_hamiltonian_terms(&self, hamiltonian_terms: Vec<Term>) -> Result<Self> {
        Self::new(
            self.dim,
            hamiltonian_terms,
            self.lindblad_terms.clone(),
            self.schedule.clone(),
        )
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::TimeOutOfRange {
                t,
                start: f64::NEG_INFINITY,
                end: f64::INFINITY,
            });
        }
        if let Some(s) = &self.schedule {
            s.segment_at(t)?;
        }
        Ok(())
    }

    fn coefficient(&self, idx: Option<usize>, t: f64) -> Result<f64> {
        match (idx, &self.schedule) {
            (None, _) => Ok(1.0),
            (Some(i), Some(s)) => s.value(t, i),
            (Some(_), None) => unreachable!("validated at construction"),
        }
    }

    /// `H(t) = sum_j f_j(t) H_j`.
    pub fn hamiltonian_at(&self, t: f64) -> Result<Matrix> {
        self.check_time(t)?;
        let mut h = Matrix::zeros(self.dim, self.dim);
        for term in &self.hamiltonian_terms {
            let f = self.coefficient(term.coefficient, t)?;
            if f != 0.0 {
                h = &h + &term.operator.scale_real(f);
            }
        }
        Ok(h)
    }

    /// Effective Lindblad operators `sqrt(n_k(t)) A_k`.
    pub fn lindblad_ops_at(&self, t: f64) -> Result<Vec<Matrix>> {
        self.check_time(t)?;
        self.lindblad_terms
            .iter()
            .map(|term| {
                let n = self.coefficient(term.coefficient, t)?;
                Ok(match term.coefficient {
                    None => term.operator.clone(),
                    Some(_) => term.operator.scale_real(n.max(0.0).sqrt()),
                })
            })
            .collect()
    }

    /// Freezes the generator at time `t`.
    pub fn generator_at(&self, t: f64) -> Result<FrozenGenerator> {
        let hamiltonian = self.hamiltonian_at(t)?;
        let dissipators = self
            .lindblad_ops_at(t)?
            .into_iter()
            .map(|a| {
                let a_dag = a.adjoint();
                let a_dag_a = &a_dag * &a;
                (a, a_dag, a_dag_a)
            })
            .collect();
        Ok(FrozenGenerator {
            hamiltonian,
            dissipators,
        })
    }

    /// Times in `(t0, t1)` where the coefficients jump.
    pub fn breakpoints_within(&self, t0: f64, t1: f64) -> Vec<f64> {
        self.schedule
            .as_ref()
            .map(|s| {
                s.breakpoints
                    .iter()
                    .copied()
                    .filter(|&b| b > t0 && b < t1)
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// The Lindblad generator with its operators evaluated at a fixed time.
#[derive(Debug, Clone)]
pub struct FrozenGenerator {
    hamiltonian: Matrix,
    /// `(A, A^dagger, A^dagger A)`.
    dissipators: Vec<(Matrix, Matrix, Matrix)>,
}

impl FrozenGenerator {
    pub fn hamiltonian(&self) -> &Matrix {
        &self.hamiltonian
    }

    pub fn lindblad_ops(&self) -> impl Iterator<Item = &Matrix> {
        self.dissipators.iter().map(|(a, _, _)| a)
    }

    /// Applies the generator to an arbitrary (not necessarily physical) matrix.
    pub fn apply(&self, rho: &Matrix) -> Matrix {
        let h_rho = &self.hamiltonian * rho;
        let rho_h = rho * &self.hamiltonian;
        let mut out = (&h_rho - &rho_h).scale(-I);
        for (a, a_dag, a_dag_a) in &self.dissipators {
            let jump = &(a * rho) * a_dag;
            let anti = &(a_dag_a * rho) + &(rho * a_dag_a);
            out = &out + &(&jump - &anti.scale_real(0.5));
        }
        out
    }
}

/// `d rho / dt` at time `t`.
pub fn apply_lindbladian(model: &LindbladModel, rho: &DensityMatrix, t: f64) -> Result<Matrix> {
    if rho.dim() != model.dim() {
        return Err(Error::DimMismatch {
            expected: model.dim(),
            found: rho.dim(),
        });
    }
    Ok(model.generator_at(t)?.apply(rho.matrix()))
}

/// Frobenius-norm tolerance on `[A, A^dagger]` for normality.
pub const NORMALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Unitary,
    Dephasing,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelClass {
    pub kind: ChannelKind,
    pub per_operator_normality: Vec<bool>,
}

pub fn normality_defect(a: &Matrix) -> f64 {
    frobenius_norm(&a.commutator(&a.adjoint()))
}

/// Purity is non-increasing for every state iff every Lindblad operator is normal.
/// Uses the schedule-free operators `A_k`.
pub fn classify_channel(model: &LindbladModel) -> ChannelClass {
    let mut any_nonzero = false;
    let mut all_normal = true;
    let per_operator_normality = model
        .lindblad_terms()
        .iter()
        .map(|term| {
            let nonzero = frobenius_norm(&term.operator) > 0.0;
            let normal = normality_defect(&term.operator) <= NORMALITY_TOL;
            any_nonzero |= nonzero;
            all_normal &= normal || !nonzero;
            normal
        })
        .collect();
    let kind = match (any_nonzero, all_normal) {
        (false, _) => ChannelKind::Unitary,
        (true, true) => ChannelKind::Dephasing,
        (true, false) => ChannelKind::General,
    };
    ChannelClass {
        kind,
        per_operator_normality,
    }
}

/// `a - (tr a / N) I`, the Frobenius-closest traceless shift of `a`.
pub fn traceless_shift(a: &Matrix) -> Result<Matrix> {
    let n = a.ensure_square()?;
    let mean = a.trace() / n as f64;
    Ok(a - &Matrix::identity(n).scale(mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn validate_density_examples() {
        assert!(validate_density(&Matrix::identity(2).scale_real(0.5)).is_ok());

        let (a, b) = (0.7, 0.3);
        let m = Matrix::from_real(2, 2, &[a, b, b, 1.0 - a]);
        // Trace/determinant closed form: (1 +- sqrt(1 - 4 det)) / 2 with det = a(1-a) - b^2.
        let det = a * (1.0 - a) - b * b;
        let lo = (1.0 - (1.0 - 4.0 * det).sqrt()) / 2.0;
        assert!(lo > 0.0);
        let solver = hermitian_eigs(&m).unwrap();
        assert!((solver.min() - lo).abs() < 1e-12);
        assert!(validate_density(&m).is_ok());

        let neg = Matrix::from_real(2, 2, &[1.2, 0.0, 0.0, -0.2]);
        match validate_density(&neg) {
            Err(Error::NotPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.2).abs() < 1e-12)
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }
    }

    #[test]
    fn validate_density_errors_name_defects() {
        let m = Matrix::from_real(2, 2, &[0.5, 0.0, 0.0, 0.6]);
        assert!(matches!(
            validate_density(&m),
            Err(Error::TraceNotOne { .. })
        ));
        let m = Matrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]);
        assert!(matches!(
            validate_density(&m),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            validate_density(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn unitary_steady_state_is_fixed() {
        let model = LindbladModel::time_independent(2, vec![sigma_z()], vec![]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        let d = apply_lindbladian(&model, &rho, 0.0).unwrap();
        assert_eq!(d, Matrix::zeros(2, 2));
    }

    #[test]
    fn dephasing_kills_coherences_at_rate_two() {
        let model = LindbladModel::time_independent(2, vec![], vec![sigma_z()]).unwrap();
        let rho = validate_density(&Matrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        let d = apply_lindbladian(&model, &rho, 0.0).unwrap();
        let want = Matrix::from_real(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(d.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn decay_transfers_excited_population() {
        let model = LindbladModel::time_independent(2, vec![], vec![sigma_minus()]).unwrap();
        let rho = validate_density(&Matrix::from_real(2, 2, &[0.0, 0.0, 0.0, 1.0])).unwrap();
        let d = apply_lindbladian(&model, &rho, 0.0).unwrap();
        let want = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(d.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn apply_rejects_mismatch_and_out_of_range() {
        let model = LindbladModel::time_independent(3, vec![], vec![]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            apply_lindbladian(&model, &rho, 0.0),
            Err(Error::DimMismatch { .. })
        ));

        let sched = Schedule::new(vec![0.0, 1.0], vec![vec![1.0]]).unwrap();
        let model = LindbladModel::new(2, vec![], vec![Term::scheduled(sigma_z(), 0)], Some(sched))
            .unwrap();
        assert!(matches!(
            apply_lindbladian(&model, &rho, 1.5),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(apply_lindbladian(&model, &rho, 1.0).is_ok());
    }

    #[test]
    fn schedule_segments_are_right_continuous() {
        let s = Schedule::new(vec![0.0, 1.0, 2.0], vec![vec![1.0], vec![3.0]]).unwrap();
        assert_eq!(s.value(0.0, 0).unwrap(), 1.0);
        assert_eq!(s.value(0.999, 0).unwrap(), 1.0);
        assert_eq!(s.value(1.0, 0).unwrap(), 3.0);
        assert_eq!(s.value(2.0, 0).unwrap(), 3.0);
    }

    #[test]
    fn schedule_rejects_overlapping_breakpoints() {
        match Schedule::new(vec![0.0, 1.0, 1.0], vec![vec![1.0], vec![1.0]]) {
            Err(Error::InvalidSchedule { index, .. }) => assert_eq!(index, 2),
            other => panic!("{other:?}"),
        }
        assert!(Schedule::new(vec![0.0, 1.0], vec![]).is_err());
    }

    #[test]
    fn negative_noise_rate_rejected() {
        let sched = Schedule::new(vec![0.0, 1.0], vec![vec![-0.1]]).unwrap();
        let r = LindbladModel::new(2, vec![], vec![Term::scheduled(sigma_z(), 0)], Some(sched));
        assert!(matches!(r, Err(Error::InvalidSchedule { .. })));
    }

    #[test]
    fn scheduled_rate_enters_under_square_root() {
        let sched = Schedule::new(vec![0.0, 1.0], vec![vec![4.0]]).unwrap();
        let model = LindbladModel::new(2, vec![], vec![Term::scheduled(sigma_z(), 0)], Some(sched))
            .unwrap();
        let ops = model.lindblad_ops_at(0.5).unwrap();
        assert_eq!(ops[0], sigma_z().scale_real(2.0));
    }

    #[test]
    fn non_hermitian_hamiltonian_rejected() {
        let r = LindbladModel::time_independent(2, vec![sigma_minus()], vec![]);
        assert!(matches!(r, Err(Error::InvalidModel(_))));
    }

    #[test]
    fn classification_examples() {
        let m = LindbladModel::time_independent(2, vec![], vec![sigma_z()]).unwrap();
        assert_eq!(classify_channel(&m).kind, ChannelKind::Dephasing);

        let m = LindbladModel::time_independent(2, vec![], vec![sigma_minus()]).unwrap();
        let class = classify_channel(&m);
        assert_eq!(class.kind, ChannelKind::General);
        assert_eq!(class.per_operator_normality, vec![false]);

        let phases = Matrix::from_diag(&[C64::from_polar(1.0, 0.4), C64::from_polar(1.0, 2.9)]);
        let m = LindbladModel::time_independent(2, vec![], vec![phases]).unwrap();
        assert_eq!(classify_channel(&m).kind, ChannelKind::Dephasing);

        let m =
            LindbladModel::time_independent(2, vec![sigma_x()], vec![Matrix::zeros(2, 2)]).unwrap();
        assert_eq!(classify_channel(&m).kind, ChannelKind::Unitary);
    }

    #[test]
    fn traceless_shift_examples() {
        assert_eq!(traceless_shift(&sigma_z()).unwrap(), sigma_z());
        assert_eq!(
            traceless_shift(&Matrix::identity(2)).unwrap(),
            Matrix::zeros(2, 2)
        );

        let a = Matrix::from_real(2, 2, &[2.0, 0.0, 0.0, 0.0]);
        let shifted = traceless_shift(&a).unwrap();
        assert_eq!(shifted, Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let best = frobenius_norm(&shifted);
        assert!((best - 2f64.sqrt()).abs() < 1e-15);
        assert!(best < frobenius_norm(&a));
        // 1-D scan over the shift c in [-1, 3].
        let scan_min = (0..=4000)
            .map(|k| -1.0 + k as f64 * 1e-3)
            .map(|s| frobenius_norm(&(&a - &Matrix::identity(2).scale(c(s, 0.0)))))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= scan_min + 1e-12);
    }
}
