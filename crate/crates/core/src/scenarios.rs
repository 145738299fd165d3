//! Built-in scenarios, seeded random samplers and independent-copy composition.
//!
//! Random streams use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`; item `i` of a batch is drawn from stream `i`
//! (`set_stream(i)`), so a batch can be generated in parallel and any item
//! reproduced on its own. Complex Gaussians have independent standard-normal
//! real and imaginary parts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dynamics::TimeGrid;
use crate::error::{Error, Result};
use crate::linalg::{inner, kron, pauli, Matrix, C64};
use crate::model::{validate_density, DensityMatrix, LindbladModel, Term};

/// Largest Hilbert-space dimension accepted by [`compose_independent`].
pub const MAX_COMPOSED_DIM: usize = 64;

pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws random vectors, states and operators from one RNG stream.
pub struct Sampler<R> {
    rng: R,
}

impl Sampler<ChaCha8Rng> {
    pub fn from_stream(seed: u64, index: u64) -> Self {
        Sampler {
            rng: substream(seed, index),
        }
    }
}

impl<R: rand::Rng> Sampler<R> {
    pub fn new(rng: R) -> Self {
        Sampler { rng }
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn complex_gaussian(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    pub fn gaussian_vector(&mut self, n: usize) -> Vec<C64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }

    /// Ginibre matrix: i.i.d. complex Gaussian entries.
    pub fn ginibre(&mut self, n: usize) -> Matrix {
        Matrix::from_vec(n, n, self.gaussian_vector(n * n)).expect("finite Gaussian entries")
    }

    pub fn haar_pure_state(&mut self, n: usize) -> DensityMatrix {
        let psi = self.gaussian_vector(n);
        DensityMatrix::pure(&psi).expect("Gaussian vector is non-zero")
    }

    /// `G G^dagger / tr(G G^dagger)`.
    pub fn ginibre_density(&mut self, n: usize) -> DensityMatrix {
        let g = self.ginibre(n);
        let w = &g * &g.adjoint();
        let tr = w.trace().re;
        // Exact Hermitian symmetry guards against round-off in the product.
        let m = w.scale_real(1.0 / tr).hermitian_part();
        validate_density(&m).expect("Ginibre construction is positive with unit trace")
    }

    /// Unitary from the QR factorization of a Ginibre matrix, with the phases
    /// of `R`'s diagonal absorbed so the distribution is Haar.
    pub fn haar_unitary(&mut self, n: usize) -> Matrix {
        let g = self.ginibre(n);
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = g.column(j);
            for q in &cols {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
            // Second pass for numerical orthogonality.
            for q in &cols {
                let proj = inner(q, &v);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
            let norm = crate::linalg::vec_norm(&v);
            for vi in &mut v {
                *vi /= norm;
            }
            cols.push(v);
        }
        let mut u = Matrix::zeros(n, n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                u[(i, j)] = z;
            }
        }
        u
    }

    /// `U diag(z) U^dagger` with Gaussian `z` and Haar `U`.
    pub fn random_normal_operator(&mut self, n: usize) -> Matrix {
        let u = self.haar_unitary(n);
        let d = Matrix::from_diag(&self.gaussian_vector(n));
        &(&u * &d) * &u.adjoint()
    }

    /// Hermitian part of a Ginibre matrix.
    pub fn random_hermitian(&mut self, n: usize) -> Matrix {
        self.ginibre(n).hermitian_part()
    }

    /// Time-independent model with a random Hamiltonian and `channels` Lindblad
    /// operators, normal or Ginibre, scaled by `1 / (2 sqrt(n))` so that every
    /// rate stays of order one.
    pub fn random_model(&mut self, n: usize, channels: usize, normal: bool) -> LindbladModel {
        let s = 0.5 / (n as f64).sqrt();
        let h = self.random_hermitian(n).scale_real(s);
        let ops = (0..channels)
            .map(|_| {
                let a = if normal {
                    self.random_normal_operator(n)
                } else {
                    self.ginibre(n)
                };
                a.scale_real(s)
            })
            .collect();
        LindbladModel::time_independent(n, vec![h], ops)
            .expect("random Hermitian H and square operators")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    HaarPure,
    GinibreDensity,
    GinibreOperator,
    RandomNormalOperator,
}

impl SamplerKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "haar_pure" => SamplerKind::HaarPure,
            "ginibre_density" => SamplerKind::GinibreDensity,
            "ginibre_operator" => SamplerKind::GinibreOperator,
            "random_normal_operator" => SamplerKind::RandomNormalOperator,
            _ => return None,
        })
    }

    pub fn produces_states(self) -> bool {
        matches!(self, SamplerKind::HaarPure | SamplerKind::GinibreDensity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub kind: SamplerKind,
    pub dim: usize,
    pub seed: u64,
}

/// `count` independent draws; item `i` comes from stream `i`.
pub fn sample(cfg: &SamplerConfig, count: usize) -> Vec<Matrix> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::from_stream(cfg.seed, i);
            match cfg.kind {
                SamplerKind::HaarPure => s.haar_pure_state(cfg.dim).into_matrix(),
                SamplerKind::GinibreDensity => s.ginibre_density(cfg.dim).into_matrix(),
                SamplerKind::GinibreOperator => s.ginibre(cfg.dim),
                SamplerKind::RandomNormalOperator => s.random_normal_operator(cfg.dim),
            }
        })
        .collect()
}

pub fn sample_states(cfg: &SamplerConfig, count: usize) -> Result<Vec<DensityMatrix>> {
    if !cfg.kind.produces_states() {
        return Err(Error::InvalidArgument(format!(
            "sampler {:?} does not produce density matrices",
            cfg.kind
        )));
    }
    sample(cfg, count).iter().map(validate_density).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Hilbert,
    Liouville,
    Deviation,
    DephasingFloor,
    Cooling,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::Hilbert,
        BoundKind::Liouville,
        BoundKind::Deviation,
        BoundKind::DephasingFloor,
        BoundKind::Cooling,
    ];

    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "hilbert" => BoundKind::Hilbert,
            "liouville" => BoundKind::Liouville,
            "deviation" => BoundKind::Deviation,
            "dephasing_floor" => BoundKind::DephasingFloor,
            "cooling" => BoundKind::Cooling,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub model: LindbladModel,
    pub initial_states: Vec<DensityMatrix>,
    pub grid: TimeGrid,
    pub requested_bounds: Vec<BoundKind>,
}

/// Knobs of the built-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub seed: u64,
    /// Number of random initial states for `fig1` and `control`.
    pub count: usize,
    pub dt: f64,
    /// `(n_x, n_y, n_z)` for `control`.
    pub control_noise: [f64; 3],
    /// Amplitude `a` of `A = a sigma_z` in `tightness`.
    pub tightness_amplitude: f64,
    /// `(a', b)` of the `tightness` initial state `{{a', b}, {b*, 1 - a'}}`.
    pub tightness_population: f64,
    pub tightness_coherence: C64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            seed: 20140601,
            count: 100,
            dt: 1e-3,
            control_noise: [0.1, 0.1, 0.1],
            tightness_amplitude: 0.5,
            tightness_population: 0.7,
            tightness_coherence: C64::new(0.3, 0.0),
        }
    }
}

pub const SCENARIO_NAMES: [&str; 4] = ["fig1", "fig2", "control", "tightness"];

/// Qubit Pauli noise `A_k = sqrt(n_k) sigma_k / 2`, with control drive `sigma_x / 2`.
pub fn control_model(noise: [f64; 3]) -> Result<LindbladModel> {
    if noise.iter().any(|&n| n < 0.0 || !n.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise amplitudes must be finite and non-negative, got {noise:?}"
        )));
    }
    let ops = [pauli::sigma_x(), pauli::sigma_y(), pauli::sigma_z()]
        .iter()
        .zip(noise)
        .map(|(s, n)| s.scale_real(n.sqrt() / 2.0))
        .collect();
    LindbladModel::time_independent(2, vec![pauli::sigma_x().scale_real(0.5)], ops)
}

/// `H = 0`, `A = a sigma_z`.
pub fn tightness_model(amplitude: f64) -> Result<LindbladModel> {
    LindbladModel::time_independent(2, vec![], vec![pauli::sigma_z().scale_real(amplitude)])
}

pub fn tightness_state(population: f64, coherence: C64) -> Result<DensityMatrix> {
    let m = Matrix::from_vec(
        2,
        2,
        vec![
            C64::new(population, 0.0),
            coherence,
            coherence.conj(),
            C64::new(1.0 - population, 0.0),
        ],
    )?;
    validate_density(&m)
}

fn haar_states(dim: usize, seed: u64, count: usize) -> Result<Vec<DensityMatrix>> {
    sample_states(
        &SamplerConfig {
            kind: SamplerKind::HaarPure,
            dim,
            seed,
        },
        count,
    )
}

pub fn builtin_scenario(name: &str, params: &ScenarioParams) -> Result<Scenario> {
    use pauli::*;
    let scenario = match name {
        "fig1" => Scenario {
            name: name.into(),
            model: LindbladModel::time_independent(2, vec![sigma_x()], vec![sigma_z()])?,
            initial_states: haar_states(2, params.seed, params.count)?,
            grid: TimeGrid::new(0.0, 3.0, params.dt, 10)?,
            requested_bounds: vec![
                BoundKind::Hilbert,
                BoundKind::Liouville,
                BoundKind::DephasingFloor,
            ],
        },
        "fig2" => Scenario {
            name: name.into(),
            model: LindbladModel::time_independent(2, vec![], vec![sigma_minus()])?,
            initial_states: vec![DensityMatrix::maximally_mixed(2)],
            grid: TimeGrid::new(0.0, 3.0, params.dt, 10)?,
            requested_bounds: vec![BoundKind::Hilbert, BoundKind::Liouville, BoundKind::Cooling],
        },
        "control" => Scenario {
            name: name.into(),
            model: control_model(params.control_noise)?,
            initial_states: haar_states(2, params.seed, params.count)?,
            grid: TimeGrid::new(0.0, 3.0, params.dt, 10)?,
            requested_bounds: vec![BoundKind::Liouville, BoundKind::DephasingFloor],
        },
        "tightness" => Scenario {
            name: name.into(),
            model: tightness_model(params.tightness_amplitude)?,
            initial_states: vec![tightness_state(
                params.tightness_population,
                params.tightness_coherence,
            )?],
            grid: TimeGrid::new(0.0, 5.0, params.dt, 10)?,
            requested_bounds: vec![
                BoundKind::Hilbert,
                BoundKind::Liouville,
                BoundKind::Deviation,
            ],
        },
        other => return Err(Error::UnknownScenario(other.into())),
    };
    Ok(scenario)
}

/// `I^{(m-1)} kron op kron I^{(M-m)}`.
fn embed(op: &Matrix, position: usize, copies: usize) -> Matrix {
    let id = Matrix::identity(op.rows());
    let mut out: Option<Matrix> = None;
    for m in 0..copies {
        let factor = if m == position { op } else { &id };
        out = Some(match out {
            None => factor.clone(),
            Some(acc) => kron(&acc, factor),
        });
    }
    out.expect("copies >= 1")
}

/// `M` independent copies of a time-independent model.
pub fn compose_independent(model: &LindbladModel, copies: usize) -> Result<LindbladModel> {
    if copies < 2 {
        return Err(Error::InvalidArgument(format!(
            "composition needs at least 2 copies, got {copies}"
        )));
    }
    if !model.is_time_independent() {
        return Err(Error::InvalidArgument(
            "composition needs a time-independent model".into(),
        ));
    }
    let dim = (model.dim() as u64)
        .checked_pow(copies as u32)
        .filter(|&d| d <= MAX_COMPOSED_DIM as u64)
        .ok_or(Error::DimTooLarge {
            dim: model.dim().saturating_pow(copies.min(64) as u32),
        })? as usize;
    let h = model.hamiltonian_at(0.0)?;
    let mut total_h = Matrix::zeros(dim, dim);
    let mut ops = Vec::new();
    for m in 0..copies {
        total_h = &total_h + &embed(&h, m, copies);
        for term in model.lindblad_terms() {
            ops.push(Term::constant(embed(&term.operator, m, copies)));
        }
    }
    LindbladModel::new(dim, vec![Term::constant(total_h)], ops, None)
}

/// `rho^{kron M}`.
pub fn product_state(rho: &DensityMatrix, copies: usize) -> Result<DensityMatrix> {
    let mut acc = rho.matrix().clone();
    for _ in 1..copies {
        acc = kron(&acc, rho.matrix());
    }
    validate_density(&acc)
}
