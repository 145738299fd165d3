use proptest::prelude::*;

use lindblad_lab::bounds::{
    bound_report, dephasing_eig_rate, entropy_floor, hilbert_rate, liouville_rate,
    normal_eigenvalues,
};
use lindblad_lab::dynamics::{integrate, purity_deviation, vn_entropy, TimeGrid};
use lindblad_lab::linalg::{
    frobenius_norm, hermitian_eigh, hermitian_eigs, kron, pauli, spectral_norm, Matrix, C64,
};
use lindblad_lab::liouville::{devectorize, model_skew_part, skew_spectral_norm, vectorize};
use lindblad_lab::model::{apply_lindbladian, traceless_shift, DensityMatrix, LindbladModel};
use lindblad_lab::scenarios::{sample, Sampler, SamplerConfig, SamplerKind};

type Rng = rand_chacha::ChaCha8Rng;

fn sampler(seed: u64) -> Sampler<Rng> {
    Sampler::from_stream(seed, 0)
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn max_pair_gap_sqr(eigenvalues: &[C64]) -> f64 {
    let mut best: f64 = 0.0;
    for a in eigenvalues {
        for b in eigenvalues {
            best = best.max((a - b).norm_sqr());
        }
    }
    best
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn norm_ordering(seed in any::<u64>(), n in 1usize..7) {
        let m = sampler(seed).ginibre(n);
        let sp = spectral_norm(&m).unwrap();
        let fro = frobenius_norm(&m);
        prop_assert!(sp <= fro * (1.0 + 1e-12));
        prop_assert!(fro <= (n as f64).sqrt() * sp * (1.0 + 1e-12));
    }

    #[test]
    fn eigh_reconstructs(seed in any::<u64>(), n in 1usize..9) {
        let h = sampler(seed).random_hermitian(n);
        let e = hermitian_eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) < 1e-10 * frobenius_norm(&h).max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_unitarily_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut s = sampler(seed);
        let h = s.random_hermitian(n);
        let u = s.haar_unitary(n);
        let rotated = (&(&u * &h) * &u.adjoint()).hermitian_part();
        let a = hermitian_eigs(&h).unwrap().eigenvalues;
        let b = hermitian_eigs(&rotated).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn kron_is_associative(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let mut s = sampler(seed);
        let (x, y, z) = (s.ginibre(a), s.ginibre(b), s.ginibre(c));
        let left = kron(&kron(&x, &y), &z);
        let right = kron(&x, &kron(&y, &z));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn vectorization_round_trip(seed in any::<u64>(), n in 1usize..6) {
        let rho = sampler(seed).ginibre_density(n);
        let r = vectorize(&rho);
        prop_assert_eq!(&devectorize(&r), rho.matrix());
        prop_assert!((r.norm_sqr() - rho.purity()).abs() < 1e-12);
    }

    #[test]
    fn lindbladian_output_is_hermitian_and_traceless(seed in any::<u64>(), n in 2usize..5, k in 1usize..4, normal in any::<bool>()) {
        let mut s = sampler(seed);
        let model = s.random_model(n, k, normal);
        let rho = s.ginibre_density(n);
        let d = apply_lindbladian(&model, &rho, 0.0).unwrap();
        prop_assert!(d.hermiticity_defect() < 1e-12);
        prop_assert!(d.trace().norm() < 1e-12);
    }

    #[test]
    fn skew_part_ignores_hamiltonian_and_trace_shift(seed in any::<u64>(), n in 2usize..5, k in 1usize..3) {
        let mut s = sampler(seed);
        let model = s.random_model(n, k, false);
        let base = model_skew_part(&model, 0.0).unwrap();

        let extra = s.random_hermitian(n);
        let mut terms = model.hamiltonian_terms().to_vec();
        terms.push(lindblad_lab::model::Term::constant(extra.scale_real(3.0)));
        let heavier = model_skew_part(&model.with_hamiltonian_terms(terms).unwrap(), 0.0).unwrap();
        prop_assert!(base.matrix().max_abs_diff(heavier.matrix()) < 1e-12);

        let ops: Vec<Matrix> = model.lindblad_ops_at(0.0).unwrap().iter().map(|a| traceless_shift(a).unwrap()).collect();
        let shifted = LindbladModel::time_independent(n, vec![], ops).unwrap();
        let sk = model_skew_part(&shifted, 0.0).unwrap();
        prop_assert!(base.matrix().max_abs_diff(sk.matrix()) < 1e-12);
    }

    #[test]
    fn instantaneous_speed_limit(seed in any::<u64>(), n in 2usize..5, k in 1usize..4, normal in any::<bool>()) {
        let mut s = sampler(seed);
        let model = s.random_model(n, k, normal);
        let rho = s.ginibre_density(n);
        let sk = model_skew_part(&model, 0.0).unwrap();
        prop_assert!(sk.log_purity_rate(&vectorize(&rho)).abs() <= skew_spectral_norm(&sk) * (1.0 + 1e-12));
    }

    #[test]
    fn log_purity_rate_matches_finite_difference(seed in any::<u64>(), n in 2usize..5, normal in any::<bool>()) {
        let mut s = sampler(seed);
        let model = s.random_model(n, 2, normal);
        let rho = s.ginibre_density(n);
        let h = 1e-4;
        let tr = integrate(&model, &rho, &TimeGrid::new(0.0, 2.0 * h, h, 1).unwrap()).unwrap();
        let p = tr.purities();
        let fd = (p[2].ln() - p[0].ln()) / (2.0 * h);
        let exact = model_skew_part(&model, h).unwrap().log_purity_rate(&vectorize(&tr.states[1]));
        prop_assert!((fd - exact).abs() <= 1e-4 * exact.abs().max(1e-8));
    }

    #[test]
    fn dephasing_skew_spectrum(seed in any::<u64>(), n in 2usize..5) {
        let mut s = sampler(seed);
        let a = s.random_normal_operator(n);
        let model = LindbladModel::time_independent(n, vec![], vec![a.clone()]).unwrap();
        let got = model_skew_part(&model, 0.0).unwrap().spectrum().eigenvalues.clone();
        let lambda = normal_eigenvalues(&a).unwrap();
        let mut want: Vec<f64> = Vec::new();
        for x in &lambda {
            for y in &lambda {
                want.push(-(x - y).norm_sqr());
            }
        }
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-9 * w.abs().max(1.0), "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn multichannel_rate_ordering(seed in any::<u64>(), n in 2usize..6, k in 2usize..4) {
        let mut s = sampler(seed);
        let ops: Vec<Matrix> = (0..k).map(|_| s.random_normal_operator(n)).collect();
        let total = liouville_rate(&LindbladModel::time_independent(n, vec![], ops.clone()).unwrap(), 0.0).unwrap();
        let mut sum_l = 0.0;
        let mut sum_h = 0.0;
        for a in &ops {
            let single = LindbladModel::time_independent(n, vec![], vec![a.clone()]).unwrap();
            let l = liouville_rate(&single, 0.0).unwrap();
            prop_assert!((l - dephasing_eig_rate(a).unwrap()).abs() < 1e-9 * l.max(1.0));
            prop_assert!((l - max_pair_gap_sqr(&normal_eigenvalues(a).unwrap())).abs() < 1e-9 * l.max(1.0));
            sum_l += l;
            sum_h += hilbert_rate(&single, 0.0).unwrap();
        }
        prop_assert!(total <= sum_l * (1.0 + 1e-12));
        prop_assert!(sum_l <= sum_h * (1.0 + 1e-12));
    }

    #[test]
    fn jensen(seed in any::<u64>(), n in 2usize..9) {
        let rho = sampler(seed).ginibre_density(n);
        prop_assert!(vn_entropy(&rho).unwrap() >= -rho.purity().ln() - 1e-9);
    }

    #[test]
    fn sampler_is_deterministic(seed in any::<u64>(), n in 1usize..5) {
        let cfg = SamplerConfig { kind: SamplerKind::RandomNormalOperator, dim: n, seed };
        prop_assert_eq!(sample(&cfg, 3), sample(&cfg, 3));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn trajectory_respects_bounds(seed in any::<u64>(), n in 2usize..5, k in 1usize..3, normal in any::<bool>()) {
        let mut s = sampler(seed);
        let model = s.random_model(n, k, normal);
        let rho = s.ginibre_density(n);
        let grid = TimeGrid::new(0.0, 1.0, 1e-3, 20).unwrap();
        let tr = integrate(&model, &rho, &grid).unwrap();
        let p0 = tr.observables[0].purity;
        let rep = bound_report(&model, &grid, p0, None).unwrap();
        let lo = 1.0 / n as f64;
        for (k, o) in tr.observables.iter().enumerate() {
            prop_assert!(o.purity >= lo - 1e-9 && o.purity <= 1.0 + 1e-9);
            prop_assert!(o.vn_entropy >= o.renyi2 - 1e-9);
            let d = (o.purity / p0).ln().abs();
            prop_assert!(d <= rep.actions[k].liouville + 1e-6);
            prop_assert!(d <= rep.actions[k].hilbert + 1e-6);
            if let Some(floor) = rep.envelopes[k].dephasing_floor {
                let e = &rep.envelopes[k].purity;
                prop_assert!(o.purity >= floor - 1e-8);
                prop_assert!(floor >= e.liouville.lower - 1e-12);
                prop_assert!(e.liouville.lower >= e.hilbert.lower - 1e-12);
            }
        }
    }

    #[test]
    fn deviation_bound_against_second_solution(seed in any::<u64>(), n in 2usize..4, normal in any::<bool>()) {
        let mut s = sampler(seed);
        let model = s.random_model(n, 2, normal);
        let grid = TimeGrid::new(0.0, 1.0, 1e-3, 20).unwrap();
        let a = integrate(&model, &s.ginibre_density(n), &grid).unwrap();
        let b = integrate(&model, &s.ginibre_density(n), &grid).unwrap();
        let rate = liouville_rate(&model, 0.0).unwrap();
        let d0 = purity_deviation(&a.states[0], b.states[0].matrix()).unwrap();
        for k in 1..a.states.len() {
            let d = purity_deviation(&a.states[k], b.states[k].matrix()).unwrap();
            prop_assert!((d / d0).ln().abs() <= rate * a.times[k] + 1e-6);
        }
    }

    #[test]
    fn cooling_floor_on_decay(seed in any::<u64>()) {
        let model = LindbladModel::time_independent(2, vec![], vec![pauli::sigma_minus()]).unwrap();
        let rho = sampler(seed).ginibre_density(2);
        let grid = TimeGrid::new(0.0, 3.0, 1e-3, 50).unwrap();
        let tr = integrate(&model, &rho, &grid).unwrap();
        for (t, o) in tr.times.iter().zip(&tr.observables).skip(1) {
            let g = TimeGrid::new(0.0, *t, 1e-3, 1).unwrap();
            prop_assert!(o.vn_entropy >= entropy_floor(rho.purity(), &model, &g).unwrap() - 1e-6);
        }
    }

    #[test]
    fn rk4_is_fourth_order(seed in any::<u64>(), n in 2usize..4) {
        let mut s = sampler(seed);
        let model = s.random_model(n, 2, false);
        let rho = s.ginibre_density(n);
        let end = |dt: f64| -> DensityMatrix {
            integrate(&model, &rho, &TimeGrid::new(0.0, 1.0, dt, 1).unwrap()).unwrap().last().1.clone()
        };
        let reference = end(1e-3);
        let e1 = end(0.1).matrix().max_abs_diff(reference.matrix());
        let e2 = end(0.05).matrix().max_abs_diff(reference.matrix());
        prop_assume!(e2 > 1e-13);
        let ratio = e1 / e2;
        prop_assert!(ratio > 12.0 && ratio < 20.0, "error ratio {ratio}");
    }
}
