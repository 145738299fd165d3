//! Liouville-space representation.
//!
//! A density matrix is flattened row-major, `alpha = i * N + j`, so that
//! `vec(A rho B) = (A kron B^T) vec(rho)`. The generator `L` satisfies
//! `d vec(rho)/dt = L vec(rho)` and the Hamiltonian superoperator is `H_r = i L`.
//! Purity changes are governed entirely by the skew-Hermitian part
//! `H_r - H_r^dagger`; `-i (H_r - H_r^dagger) = L + L^dagger` is Hermitian.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs, inner, kron, Matrix, SpectralSummary, C64, I};
use crate::model::{DensityMatrix, LindbladModel};

/// A vectorized density matrix; `<r|r> = tr(rho^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VecState {
    dim: usize,
    amplitudes: Vec<C64>,
}

impl VecState {
    pub fn new(dim: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                found: amplitudes.len(),
            });
        }
        Ok(VecState { dim, amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn vectorize(rho: &DensityMatrix) -> VecState {
    vectorize_matrix(rho.matrix())
}

pub fn vectorize_matrix(m: &Matrix) -> VecState {
    assert!(m.is_square(), "only square matrices are vectorized");
    VecState {
        dim: m.rows(),
        amplitudes: m.as_slice().to_vec(),
    }
}

pub fn devectorize(r: &VecState) -> Matrix {
    Matrix::from_vec(r.dim, r.dim, r.amplitudes.clone()).expect("VecState holds N^2 finite entries")
}

/// Reshapes a raw length-`N^2` vector.
pub fn devectorize_slice(dim: usize, amplitudes: &[C64]) -> Result<Matrix> {
    if amplitudes.len() != dim * dim {
        return Err(Error::DimMismatch {
            expected: dim * dim,
            found: amplitudes.len(),
        });
    }
    Matrix::from_vec(dim, dim, amplitudes.to_vec())
}

#[derive(Debug, Clone)]
pub struct Superoperator {
    dim: usize,
    generator: Matrix,
    hr: Matrix,
}

impl Superoperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `L`, with `d vec(rho)/dt = L vec(rho)`.
    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    /// `H_r = i L`.
    pub fn hr(&self) -> &Matrix {
        &self.hr
    }

    pub fn apply(&self, r: &VecState) -> Result<VecState> {
        if r.dim != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: r.dim,
            });
        }
        Ok(VecState {
            dim: self.dim,
            amplitudes: self.generator.matvec(&r.amplitudes),
        })
    }
}

/// Assembles `L = -i(H kron I - I kron H^T) + sum_k [A kron conj(A) - 1/2 (A^dag A) kron I - 1/2 I kron (A^dag A)^T]`.
pub fn build_superoperator(model: &LindbladModel, t: f64) -> Result<Superoperator> {
    let n = model.dim();
    let id = Matrix::identity(n);
    let h = model.hamiltonian_at(t)?;
    let mut generator = (&kron(&h, &id) - &kron(&id, &h.transpose())).scale(-I);
    for a in model.lindblad_ops_at(t)? {
        let a_dag_a = &a.adjoint() * &a;
        let jump = kron(&a, &a.conj());
        let left = kron(&a_dag_a, &id);
        let right = kron(&id, &a_dag_a.transpose());
        generator = &generator + &(&jump - &(&left + &right).scale_real(0.5));
    }
    let hr = generator.scale(I);
    Ok(Superoperator {
        dim: n,
        generator,
        hr,
    })
}

#[derive(Debug, Clone)]
pub struct SkewPart {
    /// `H_r - H_r^dagger`.
    matrix: Matrix,
    /// Spectrum of `-i (H_r - H_r^dagger)`.
    spectrum: SpectralSummary,
}

impl SkewPart {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralSummary {
        &self.spectrum
    }

    /// `-i (H_r - H_r^dagger)`.
    pub fn hermitian_form(&self) -> Matrix {
        self.matrix.scale(-I)
    }

    /// `-i <r|H_r - H_r^dagger|r> / <r|r>`, the instantaneous `d ln P / dt`.
    pub fn log_purity_rate(&self, r: &VecState) -> f64 {
        let herm = self.hermitian_form();
        let hr = herm.matvec(r.amplitudes());
        inner(r.amplitudes(), &hr).re / r.norm_sqr()
    }
}

pub fn skew_part(s: &Superoperator) -> Result<SkewPart> {
    let matrix = &s.hr - &s.hr.adjoint();
    let spectrum = hermitian_eigs(&matrix.scale(-I))?;
    Ok(SkewPart { matrix, spectrum })
}

/// `||H_r - H_r^dagger||_sp`.
pub fn skew_spectral_norm(sk: &SkewPart) -> f64 {
    sk.spectrum.max_abs
}

/// Largest signed eigenvalue of `-i (H_r - H_r^dagger)`: the fastest possible
/// log-purity growth.
pub fn max_growth_rate(sk: &SkewPart) -> f64 {
    sk.spectrum.max()
}

/// Convenience: skew part of the generator of `model` at time `t`.
pub fn model_skew_part(model: &LindbladModel, t: f64) -> Result<SkewPart> {
    skew_part(&build_superoperator(model, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::*;
    use crate::model::{apply_lindbladian, validate_density};

    fn model(h: Vec<Matrix>, a: Vec<Matrix>) -> LindbladModel {
        LindbladModel::time_independent(2, h, a).unwrap()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn vectorize_examples() {
        let r = vectorize(&DensityMatrix::maximally_mixed(2));
        assert_eq!(r.amplitudes(), &[re(0.5), re(0.0), re(0.0), re(0.5)]);
        assert_eq!(r.norm_sqr(), 0.5);

        let pure = validate_density(&Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let r = vectorize(&pure);
        assert_eq!(r.amplitudes(), &[re(1.0), re(0.0), re(0.0), re(0.0)]);
        assert_eq!(r.norm_sqr(), 1.0);
        assert_eq!(devectorize(&r), *pure.matrix());
    }

    #[test]
    fn devectorize_checks_length() {
        assert!(matches!(
            devectorize_slice(2, &[re(1.0); 3]),
            Err(Error::DimMismatch { .. })
        ));
        assert!(VecState::new(3, vec![re(0.0); 4]).is_err());
    }

    #[test]
    fn unitary_superoperator_has_hermitian_hr() {
        let s = build_superoperator(&model(vec![sigma_z()], vec![]), 0.0).unwrap();
        assert!(s.hr().hermiticity_defect() < 1e-15);
        // Diagonal, purely imaginary generator: -i(z_i - z_j).
        let g = s.generator();
        for a in 0..4 {
            assert_eq!(g[(a, a)].re, 0.0);
        }
        assert_eq!(g[(1, 1)], C64::new(0.0, -2.0));
        assert_eq!(g[(2, 2)], C64::new(0.0, 2.0));
    }

    #[test]
    fn dephasing_generator_is_diagonal() {
        let s = build_superoperator(&model(vec![], vec![sigma_z()]), 0.0).unwrap();
        let want = Matrix::from_diag(&[re(0.0), re(-2.0), re(-2.0), re(0.0)]);
        assert!(s.generator().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn decay_generator_rows() {
        let s = build_superoperator(&model(vec![], vec![sigma_minus()]), 0.0).unwrap();
        let mut want = Matrix::zeros(4, 4);
        want[(0, 3)] = re(1.0); // rho00' = rho11
        want[(1, 1)] = re(-0.5);
        want[(2, 2)] = re(-0.5);
        want[(3, 3)] = re(-1.0);
        assert!(s.generator().max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn superoperator_matches_density_picture() {
        let m = model(
            vec![sigma_x().scale_real(0.7)],
            vec![sigma_minus(), sigma_z().scale_real(0.3)],
        );
        let s = build_superoperator(&m, 0.0).unwrap();
        let rho = validate_density(
            &Matrix::from_vec(
                2,
                2,
                vec![re(0.6), C64::new(0.1, 0.2), C64::new(0.1, -0.2), re(0.4)],
            )
            .unwrap(),
        )
        .unwrap();
        let lhs = vectorize_matrix(&apply_lindbladian(&m, &rho, 0.0).unwrap());
        let rhs = s.apply(&vectorize(&rho)).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(rhs.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn skew_part_examples() {
        let sk = model_skew_part(&model(vec![sigma_y()], vec![]), 0.0).unwrap();
        assert_eq!(skew_spectral_norm(&sk), 0.0);
        assert_eq!(max_growth_rate(&sk), 0.0);

        let sk = model_skew_part(&model(vec![], vec![sigma_z()]), 0.0).unwrap();
        let want = Matrix::from_diag(&[re(0.0), re(-4.0), re(-4.0), re(0.0)]);
        assert!(sk.hermitian_form().max_abs_diff(&want) < 1e-15);
        assert!((skew_spectral_norm(&sk) - 4.0).abs() < 1e-14);
        assert!(max_growth_rate(&sk).abs() < 1e-14);

        let sk = model_skew_part(&model(vec![], vec![sigma_z().scale_real(0.5)]), 0.0).unwrap();
        assert!((skew_spectral_norm(&sk) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decay_skew_spectrum() {
        let sk = model_skew_part(&model(vec![], vec![sigma_minus()]), 0.0).unwrap();
        // (00, 11) block of L + L^dagger is [[0, 1], [1, -2]]: trace -2, det -1.
        let (tr, det) = (-2.0_f64, -1.0_f64);
        let disc = (tr * tr / 4.0 - det).sqrt();
        let mut want = [tr / 2.0 - disc, -1.0, -1.0, tr / 2.0 + disc];
        want.sort_by(f64::total_cmp);
        for (got, w) in sk.spectrum().eigenvalues.iter().zip(want) {
            assert!((got - w).abs() < 1e-13, "{got} vs {w}");
        }
        assert!((skew_spectral_norm(&sk) - (1.0 + 2f64.sqrt())).abs() < 1e-13);
        assert!((max_growth_rate(&sk) - (2f64.sqrt() - 1.0)).abs() < 1e-13);
    }
}
