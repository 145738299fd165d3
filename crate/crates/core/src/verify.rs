//! Invariant suite run by `lindblad-lab verify`.
//!
//! Each check draws its own seeded random inputs, so a run is reproducible.
//! `quick` reduces the sample counts by roughly a factor of ten.

use rayon::prelude::*;

use crate::bounds::{
    bound_report, control_exact_rate, control_floor, dephasing_eig_rate, dephasing_floor_value,
    hermitian_gap_rate, hilbert_rate, liouville_rate,
};
use crate::dynamics::{
    integrate, integrate_with_reference, steady_state, vn_entropy, SteadyStateStrategy, TimeGrid,
};
use crate::error::Result;
use crate::linalg::{frobenius_norm, frobenius_norm_sqr, hermitian_eigs, pauli, Matrix};
use crate::liouville::{
    build_superoperator, max_growth_rate, model_skew_part, skew_spectral_norm, vectorize,
    vectorize_matrix,
};
use crate::model::{apply_lindbladian, LindbladModel};
use crate::scenarios::{
    builtin_scenario, compose_independent, control_model, product_state, tightness_model,
    tightness_state, Sampler, ScenarioParams,
};
use crate::C64;

const SEED: u64 = 0x5eed_1a7e;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(usize) -> Result<(bool, String)>;

const CHECKS: [(&str, usize, Check); 15] = [
    ("superoperator_oracle", 1000, superoperator_oracle),
    ("speed_limit", 1000, speed_limit),
    ("hamiltonian_independence", 200, hamiltonian_independence),
    ("rate_identity", 100, rate_identity),
    ("factor_two_ratio", 200, factor_two_ratio),
    ("liouville_below_hilbert", 500, liouville_below_hilbert),
    ("hermitian_gap", 200, hermitian_gap),
    ("jensen", 1000, jensen),
    ("purity_bounds", 100, purity_bounds),
    ("tightness", 1, tightness),
    ("fig1_floor", 100, fig1_floor),
    ("fig2_entropy_floor", 1, fig2_entropy_floor),
    ("control_rates", 100, control_rates),
    ("m_scaling", 1, |_| m_scaling(&[2, 3])),
    ("floor_saturation", 1, |_| floor_saturation()),
];

pub fn run_suite(quick: bool) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .map(|&(name, full, check)| {
            let count = if quick { full.div_ceil(10) } else { full };
            match check(count) {
                Ok((passed, detail)) => CheckOutcome {
                    name,
                    passed,
                    detail,
                },
                Err(e) => CheckOutcome {
                    name,
                    passed: false,
                    detail: format!("error: {e}"),
                },
            }
        })
        .collect()
}

pub fn render(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status}  {:width$}  {}\n", o.name, o.detail));
    }
    out
}

fn dims(i: usize, lo: usize, hi: usize) -> usize {
    lo + i % (hi - lo + 1)
}

/// Runs `f` on `count` independent streams and returns the worst score.
fn worst(
    count: usize,
    f: impl Fn(&mut Sampler<rand_chacha::ChaCha8Rng>, usize) -> Result<f64> + Sync,
) -> Result<f64> {
    (0..count)
        .into_par_iter()
        .map(|i| f(&mut Sampler::from_stream(SEED, i as u64), i))
        .try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(a.max(b)))
}

fn superoperator_oracle(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 4);
        let model = s.random_model(n, 1 + i % 3, i % 2 == 0);
        let rho = s.ginibre_density(n);
        let sup = build_superoperator(&model, 0.0)?;
        let direct = vectorize_matrix(&apply_lindbladian(&model, &rho, 0.0)?);
        let via = sup.apply(&vectorize(&rho))?;
        let diff: f64 = direct
            .amplitudes()
            .iter()
            .zip(via.amplitudes())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        Ok(diff / frobenius_norm(sup.generator()))
    })?;
    Ok((w < 1e-10, format!("max relative residual {w:.3e}")))
}

fn speed_limit(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 4);
        let model = s.random_model(n, 1 + i % 3, i % 2 == 1);
        let rho = s.ginibre_density(n);
        let sk = model_skew_part(&model, 0.0)?;
        Ok(sk.log_purity_rate(&vectorize(&rho)).abs() - skew_spectral_norm(&sk))
    })?;
    Ok((w <= 1e-12, format!("max (|rate| - norm) {w:.3e}")))
}

fn hamiltonian_independence(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 4);
        let model = s.random_model(n, 2, i % 2 == 0);
        let bare = model.with_hamiltonian_terms(vec![])?;
        let a = model_skew_part(&model, 0.0)?;
        let b = model_skew_part(&bare, 0.0)?;
        Ok(a.matrix().max_abs_diff(b.matrix()))
    })?;
    Ok((w <= 1e-12, format!("max entry difference {w:.3e}")))
}

fn rate_identity(count: usize) -> Result<(bool, String)> {
    let h = 1e-4;
    let grid = TimeGrid::new(0.0, 2.0 * h, h, 1)?;
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 4);
        let model = s.random_model(n, 2, i % 2 == 0);
        let rho = s.ginibre_density(n);
        let tr = integrate(&model, &rho, &grid)?;
        let p = tr.purities();
        let fd = (p[2].ln() - p[0].ln()) / (2.0 * h);
        let exact = model_skew_part(&model, h)?.log_purity_rate(&vectorize(&tr.states[1]));
        Ok((fd - exact).abs() / exact.abs().max(1e-12))
    })?;
    Ok((w < 1e-4, format!("max relative difference {w:.3e}")))
}

fn factor_two_ratio(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, _| {
        let a = s.random_normal_operator(2);
        let shift = a.trace() * 0.5;
        let a = &a - &Matrix::identity(2).scale(shift);
        let m = LindbladModel::time_independent(2, vec![], vec![a])?;
        Ok((hilbert_rate(&m, 0.0)? / liouville_rate(&m, 0.0)? - 2.0).abs())
    })?;
    Ok((w < 1e-9, format!("max |ratio - 2| {w:.3e}")))
}

fn liouville_below_hilbert(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 8);
        let channels = 1 + i % 3;
        let ops: Vec<Matrix> = (0..channels).map(|_| s.random_normal_operator(n)).collect();
        let model = LindbladModel::time_independent(n, vec![], ops.clone())?;
        let l = liouville_rate(&model, 0.0)?;
        let mut score = l - hilbert_rate(&model, 0.0)?;
        if channels == 1 {
            let e = dephasing_eig_rate(&ops[0])?;
            score = score.max((l - e).abs() - 1e-9 * e.max(1.0));
            score = score.max(e - 4.0 * frobenius_norm_sqr(&ops[0]));
        }
        Ok(score)
    })?;
    Ok((w <= 1e-9, format!("worst violation {w:.3e}")))
}

fn hermitian_gap(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 6);
        let a = s.random_hermitian(n);
        let m = LindbladModel::time_independent(n, vec![], vec![a.clone()])?;
        Ok((liouville_rate(&m, 0.0)? - hermitian_gap_rate(&a)?).abs())
    })?;
    Ok((w < 1e-9, format!("max |rate - gap^2| {w:.3e}")))
}

fn jensen(count: usize) -> Result<(bool, String)> {
    let w = worst(count, |s, i| {
        let rho = s.ginibre_density(dims(i, 2, 8));
        Ok(-rho.purity().ln() - vn_entropy(&rho)?)
    })?;
    Ok((w <= 1e-9, format!("max (-ln P - S) {w:.3e}")))
}

/// Hilbert and Liouville actions bound |ln P(t)/P(0)|, the deviation action
/// bounds |ln P_D(t)/P_D(0)|, and normal channels never raise the purity.
fn purity_bounds(count: usize) -> Result<(bool, String)> {
    let grid = TimeGrid::new(0.0, 1.0, 1e-3, 10)?;
    let w = worst(count, |s, i| {
        let n = dims(i, 2, 4);
        let normal = i % 2 == 0;
        let model = s.random_model(n, 1 + i % 2, normal);
        let rho = s.ginibre_density(n);
        let ss = steady_state(&model, &rho, SteadyStateStrategy::Kernel).ok();
        let reference = ss.as_ref().map(|ss| &ss.rho_s);
        let tr = integrate_with_reference(&model, &rho, &grid, reference)?;
        let p0 = tr.observables[0].purity;
        let d0 = tr.observables[0].purity_deviation;
        let rep = bound_report(&model, &grid, p0, None)?;
        let mut score = f64::NEG_INFINITY;
        for (k, o) in tr.observables.iter().enumerate() {
            let dlog = (o.purity / p0).ln().abs();
            let a = &rep.actions[k];
            score = score
                .max(dlog - a.hilbert - 1e-6)
                .max(dlog - a.liouville - 1e-6);
            if reference.is_some() && d0 > 1e-12 && o.purity_deviation > 1e-12 {
                score = score.max((o.purity_deviation / d0).ln().abs() - a.liouville - 1e-6);
            }
            if normal && k > 0 {
                score = score.max(o.purity - tr.observables[k - 1].purity - 1e-9);
            }
        }
        Ok(score)
    })?;
    Ok((w <= 0.0, format!("worst violation {w:.3e}")))
}

fn tightness(_: usize) -> Result<(bool, String)> {
    let grid = TimeGrid::new(0.0, 5.0, 1e-3, 100)?;
    let rho = tightness_state(0.7, C64::new(0.3, 0.0))?;
    let mut w: f64 = 0.0;
    for a in [0.5, 1.0, 2.0] {
        let model = tightness_model(a)?;
        let ss = steady_state(&model, &rho, SteadyStateStrategy::DephasedDiagonal)?;
        let tr = integrate_with_reference(&model, &rho, &grid, Some(&ss.rho_s))?;
        let d0 = tr.observables[0].purity_deviation;
        for (t, o) in tr.times.iter().zip(&tr.observables).skip(1) {
            let action = 4.0 * a * a * t;
            w = w.max(((o.purity_deviation / d0).ln().abs() - action).abs() / action);
        }
    }
    Ok((w < 1e-5, format!("max relative error {w:.3e}")))
}

fn fig1_floor(count: usize) -> Result<(bool, String)> {
    let params = ScenarioParams {
        count,
        ..ScenarioParams::default()
    };
    let sc = builtin_scenario("fig1", &params)?;
    let rep = bound_report(&sc.model, &sc.grid, 1.0, None)?;
    let floors: Vec<f64> = rep
        .envelopes
        .iter()
        .map(|e| e.dephasing_floor.unwrap_or(f64::NAN))
        .collect();
    let results: Vec<(f64, f64)> = sc
        .initial_states
        .par_iter()
        .map(|rho| {
            let tr = integrate(&sc.model, rho, &sc.grid)?;
            let mut below = f64::NEG_INFINITY;
            let mut closest = f64::INFINITY;
            for (k, o) in tr.observables.iter().enumerate() {
                below = below.max(floors[k] - o.purity);
                if tr.times[k] > 0.5 {
                    closest = closest.min(o.purity - floors[k]);
                }
            }
            Ok((below, closest))
        })
        .collect::<Result<_>>()?;
    let below = results
        .iter()
        .map(|r| r.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let closest = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let ordered = rep.envelopes.iter().all(|e| {
        let floor = e.dephasing_floor.unwrap_or(f64::NAN);
        floor >= e.purity.liouville.lower - 1e-12
            && e.purity.liouville.lower >= e.purity.hilbert.lower - 1e-12
    });
    Ok((
        below <= 1e-8 && closest < 0.05 && ordered,
        format!("max floor excess {below:.3e}, closest approach {closest:.3e}, ordered {ordered}"),
    ))
}

fn fig2_entropy_floor(_: usize) -> Result<(bool, String)> {
    let sc = builtin_scenario("fig2", &ScenarioParams::default())?;
    let rho = &sc.initial_states[0];
    let tr = integrate(&sc.model, rho, &sc.grid)?;
    let rep = bound_report(&sc.model, &sc.grid, rho.purity(), None)?;
    let excess = tr
        .observables
        .iter()
        .zip(&rep.envelopes)
        .map(|(o, e)| e.entropy_floor - o.vn_entropy)
        .fold(f64::NEG_INFINITY, f64::max);
    let sk = model_skew_part(&sc.model, 0.0)?;
    let oracle = hermitian_eigs(&sk.hermitian_form())?;
    let r2 = 2f64.sqrt();
    let const_err = (max_growth_rate(&sk) - (r2 - 1.0))
        .abs()
        .max((skew_spectral_norm(&sk) - (1.0 + r2)).abs())
        .max((oracle.max() - (r2 - 1.0)).abs());
    Ok((
        excess <= 1e-6 && const_err < 1e-10,
        format!("max floor excess {excess:.3e}, constant error {const_err:.3e}"),
    ))
}

fn control_rates(count: usize) -> Result<(bool, String)> {
    let grid = TimeGrid::new(0.0, 3.0, 1e-3, 10)?;
    let w = worst(count, |s, _| {
        let noise = [s.uniform(), s.uniform(), s.uniform()];
        let model = control_model(noise)?;
        let l = liouville_rate(&model, 0.0)?;
        let mut score = (control_exact_rate(noise)? - l).abs() - 1e-10;

        let n0 = noise[0];
        let iso = control_model([n0; 3])?;
        score = score.max((liouville_rate(&iso, 0.0)? - 2.0 * n0).abs() - 1e-10);
        let rho = s.haar_pure_state(2);
        let tr = integrate(&iso, &rho, &grid)?;
        for (t, o) in tr.times.iter().zip(&tr.observables) {
            let e = (-2.0 * n0 * t).exp();
            score = score.max(e - o.purity - 1e-8);
            score = score.max(control_floor(2, 2.0 * n0 * t) - o.purity - 1e-8);
        }
        Ok(score)
    })?;
    Ok((w <= 0.0, format!("worst violation {w:.3e}")))
}

/// `M` copies of qubit dephasing: Hilbert rate `M 2^(M-1) 4 ||A||^2`,
/// Liouville rate `4M`, log-purity additive.
pub fn m_scaling(copies: &[usize]) -> Result<(bool, String)> {
    let single =
        LindbladModel::time_independent(2, vec![pauli::sigma_x()], vec![pauli::sigma_z()])?;
    let grid = TimeGrid::new(0.0, 1.0, 1e-3, 10)?;
    let rho = Sampler::from_stream(SEED, 0).haar_pure_state(2);
    let ln_p1: Vec<f64> = integrate(&single, &rho, &grid)?
        .purities()
        .iter()
        .map(|p| p.ln())
        .collect();
    let mut ok = true;
    let mut worst_add: f64 = 0.0;
    for &m in copies {
        let model = compose_independent(&single, m)?;
        let mf = m as f64;
        ok &= hilbert_rate(&model, 0.0)? == mf * 2f64.powi(m as i32 - 1) * 4.0 * 2.0;
        ok &= (liouville_rate(&model, 0.0)? - 4.0 * mf).abs() < 1e-9;
        let tr = integrate(&model, &product_state(&rho, m)?, &grid)?;
        for (p, l1) in tr.purities().iter().zip(&ln_p1) {
            worst_add = worst_add.max((p.ln() - mf * l1).abs());
        }
    }
    ok &= worst_add < 1e-8;
    Ok((
        ok,
        format!("max log-purity additivity error {worst_add:.3e}"),
    ))
}

/// The dephasing floor is the exact purity for an `x`-polarized qubit.
pub fn floor_saturation() -> Result<(bool, String)> {
    let model = LindbladModel::time_independent(2, vec![], vec![pauli::sigma_z()])?;
    let grid = TimeGrid::new(0.0, 1.0, 1e-3, 10)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rho = crate::DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)])?;
    let tr = integrate(&model, &rho, &grid)?;
    let err = tr
        .times
        .iter()
        .zip(&tr.observables)
        .map(|(t, o)| (o.purity - dephasing_floor_value(1.0, 2, 4.0 * t)).abs())
        .fold(0.0, f64::max);
    Ok((err < 1e-9, format!("max |P - floor| {err:.3e}")))
}
