//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.
//!
//! Everything spectral in this crate (spectral norms, entropies, the skew part
//! of the Liouville generator) reduces to a Hermitian eigenproblem, so a single
//! Jacobi solver serves all of it. Matrices stay small: at most 64x64 in Hilbert
//! space and 4096x4096 in Liouville space.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Absolute entrywise tolerance on `|m - m^dagger|` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::DimMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::DimMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Self::from_vec(n_rows, n_cols, rows.concat())
    }

    /// Real-valued convenience constructor, mostly for tests and fixed operators.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count");
        Matrix {
            rows,
            cols,
            data: data.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Outer product `u v^dagger`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                m[(i, j)] = ui * vj.conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn conj(&self) -> Matrix {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Matrix {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> Matrix {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "matvec dimension");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self * other` with an explicit dimension check.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        &(self * other) - &(other * self)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m^dagger) / 2`.
    pub fn hermitian_part(&self) -> Matrix {
        (self + &self.adjoint()).scale_real(0.5)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        self.map(|z| -z)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on a shape mismatch; use [`Matrix::matmul`] for a checked product.
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

pub fn vec_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x|y>`, conjugate-linear in the first argument.
pub fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn frobenius_norm(m: &Matrix) -> f64 {
    frobenius_norm_sqr(m).sqrt()
}

/// `sum |m_ij|^2 = tr(m^dagger m)`.
pub fn frobenius_norm_sqr(m: &Matrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Real eigenvalues of a Hermitian matrix, ascending, with derived extremes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub max_abs: f64,
    pub gap: f64,
}

impl SpectralSummary {
    pub fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        let max_abs = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let gap = match (eigenvalues.first(), eigenvalues.last()) {
            (Some(lo), Some(hi)) => (hi - lo).max(0.0),
            _ => 0.0,
        };
        SpectralSummary {
            eigenvalues,
            max_abs,
            gap,
        }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }
}

/// Full Hermitian eigendecomposition: `m = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: Matrix,
}

impl Eigh {
    pub fn summary(&self) -> SpectralSummary {
        SpectralSummary::from_sorted(self.values.clone())
    }

    pub fn reconstruct(&self) -> Matrix {
        let d: Vec<C64> = self.values.iter().map(|&x| C64::new(x, 0.0)).collect();
        &(&self.vectors * &Matrix::from_diag(&d)) * &self.vectors.adjoint()
    }
}

pub fn hermitian_eigs(m: &Matrix) -> Result<SpectralSummary> {
    Ok(hermitian_eigh(m)?.summary())
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// The input is symmetrized before the sweep loop when it is within
/// [`HERMITIAN_TOL`] of Hermitian.
pub fn hermitian_eigh(m: &Matrix) -> Result<Eigh> {
    let n = m.ensure_square()?;
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let mut a = m.hermitian_part();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = Matrix::identity(n);
    let scale = frobenius_norm(&a);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= f64::EPSILON * scale || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&k| diag[k]).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(Eigh { values, vectors })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `U = diag(1, e^{-i phi}) R(c, s)`
/// acting on rows/columns `p, q`, and accumulates `v <- v U`.
fn jacobi_rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let n = a.rows();
    let phase = apq / g; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // Column update: a <- a U.
    let e_minus = phase.conj();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * e_minus * s;
        a[(k, q)] = akp * s + akq * e_minus * c;
    }
    // Row update: a <- U^dagger a.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * phase * s;
        a[(q, k)] = apk * s + aqk * phase * c;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(app - t * g, 0.0);
    a[(q, q)] = C64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * e_minus * s;
        v[(k, q)] = vkp * s + vkq * e_minus * c;
    }
}

/// Largest singular value, `sqrt(max eig(m^dagger m))`.
pub fn spectral_norm(m: &Matrix) -> Result<f64> {
    let gram = &m.adjoint() * m;
    let spec = hermitian_eigs(&gram)?;
    Ok(spec.max().max(0.0).sqrt())
}

/// Standard Kronecker product with block layout `a_ij * b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = Matrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(x: &[C64], y: &[C64]) -> Vec<C64> {
    x.iter()
        .flat_map(|a| y.iter().map(move |b| a * b))
        .collect()
}

/// Unit vector minimizing `||m v||`: the lowest eigenvector of `m^dagger m`.
/// Returns the vector together with the achieved residual `||m v||`.
pub fn kernel_vector(m: &Matrix) -> Result<(Vec<C64>, f64)> {
    m.ensure_square()?;
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigh(&gram)?;
    let v = eig.vectors.column(0);
    let residual = vec_norm(&m.matvec(&v));
    Ok((v, residual))
}

/// Common eigenbasis of pairwise-commuting Hermitian matrices.
///
/// The first matrix is diagonalized, then every later matrix is diagonalized
/// inside each remaining degenerate eigenspace. Eigenvalues closer than
/// `degeneracy_tol` (scaled by the operator's largest eigenvalue magnitude when
/// that exceeds one) are treated as degenerate. Columns of the result are the
/// joint eigenvectors.
pub fn joint_eigenbasis(ops: &[Matrix], degeneracy_tol: f64) -> Result<Matrix> {
    let n = match ops.first() {
        Some(m) => m.ensure_square()?,
        None => return Err(Error::InvalidArgument("no operators to diagonalize".into())),
    };
    let mut basis = Matrix::identity(n);
    let mut clusters: Vec<Vec<usize>> = vec![(0..n).collect()];
    for op in ops {
        if op.rows() != n || op.cols() != n {
            return Err(Error::DimMismatch {
                expected: n,
                found: op.rows(),
            });
        }
        let mut next_clusters = Vec::with_capacity(clusters.len());
        for cluster in &clusters {
            let k = cluster.len();
            let mut sub_basis = Matrix::zeros(n, k);
            for (c, &col) in cluster.iter().enumerate() {
                for i in 0..n {
                    sub_basis[(i, c)] = basis[(i, col)];
                }
            }
            if k == 1 {
                next_clusters.push(cluster.clone());
                continue;
            }
            let projected = &(&sub_basis.adjoint() * op) * &sub_basis;
            let eig = hermitian_eigh(&projected.hermitian_part())?;
            let rotated = &sub_basis * &eig.vectors;
            for (c, &col) in cluster.iter().enumerate() {
                for i in 0..n {
                    basis[(i, col)] = rotated[(i, c)];
                }
            }
            let tol = degeneracy_tol * eig.summary().max_abs.max(1.0);
            let mut current = vec![cluster[0]];
            for (c, &col) in cluster.iter().enumerate().skip(1) {
                if eig.values[c] - eig.values[c - 1] > tol {
                    next_clusters.push(std::mem::take(&mut current));
                }
                current.push(col);
            }
            next_clusters.push(current);
        }
        clusters = next_clusters;
    }
    Ok(basis)
}

/// Pauli and ladder operators with the ground state at index 0, `sigma_minus = |0><1|`.
pub mod pauli {
    use super::{Matrix, C64};

    pub fn sigma_x() -> Matrix {
        Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn sigma_y() -> Matrix {
        Matrix::from_vec(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .expect("valid sigma_y")
    }

    pub fn sigma_z() -> Matrix {
        Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0])
    }

    pub fn sigma_minus() -> Matrix {
        Matrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0])
    }

    pub fn sigma_plus() -> Matrix {
        Matrix::from_real(2, 2, &[0.0, 0.0, 1.0, 0.0])
    }
}
