use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use nmrsp::channels::{apply_dephasing, choi_state, ChannelFamily};
use nmrsp::decoherence::{kappa_abs, kappa_complex, DephasingSpec};
use nmrsp::linalg::{negativity, trace_distance, Bipartition};
use nmrsp::measures::{
    blp_search, mutual_information, optimal_pairs, pair_distance, sample_random_pair, PairVariant, SearchOptions,
    SeedStream, TimeWindow,
};
use nmrsp::rsp::{bell_diagonal, correlation_matrix, rsp_fidelity};
use nmrsp::{BellDiagonalParams, DensityMatrix};
use num_complex::Complex64;

fn dephasing() -> impl Strategy<Value = DephasingSpec> {
    (0.0..FRAC_PI_2, 2.0..20.0f64, 0.2..2.0f64)
        .prop_map(|(theta, dw, sigma)| DephasingSpec::with_separation(theta, dw, sigma).unwrap())
}

fn bell_params() -> impl Strategy<Value = BellDiagonalParams> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
        .prop_filter_map("not positive", |(a, b, c)| BellDiagonalParams::new(a, b, c).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>()) {
        let p = sample_random_pair(&SeedStream::new(seed, 0));
        let q = sample_random_pair(&SeedStream::new(seed, 1));
        let (a, b, c) = (&p.rho1, &p.rho2, &q.rho1);
        let ab = trace_distance(a, b).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - trace_distance(b, a).unwrap()).abs() < 1e-14);
        prop_assert!(trace_distance(a, a).unwrap() < 1e-7);
        prop_assert!(ab <= trace_distance(a, c).unwrap() + trace_distance(c, b).unwrap() + 1e-12);
    }

    #[test]
    fn kappa_modulus_is_consistent(spec in dephasing(), tau in 0.0..5.0f64) {
        let k = kappa_complex(&spec, tau);
        prop_assert!((k.norm() - kappa_abs(&spec, tau)).abs() < 1e-13);
        prop_assert!(k.norm() <= 1.0 + 1e-15);
        let mirrored = spec.with_theta(FRAC_PI_2 - spec.theta).unwrap();
        prop_assert!((kappa_abs(&mirrored, tau) - kappa_abs(&spec, tau)).abs() < 1e-13);
        prop_assert!((kappa_complex(&spec, -tau) - k.conj()).norm() < 1e-14);
    }

    #[test]
    fn channels_preserve_states(spec in dephasing(), tau in 0.0..3.0f64, seed in any::<u64>()) {
        let pair = sample_random_pair(&SeedStream::new(seed, 0));
        let family = ChannelFamily::Dephasing(spec);
        let out = family.evolve(&pair.rho1, tau).unwrap();
        prop_assert!(DensityMatrix::new(out.into_matrix()).is_ok());
        let before = trace_distance(&pair.rho1, &pair.rho2).unwrap();
        let after = trace_distance(&family.evolve(&pair.rho1, tau).unwrap(), &family.evolve(&pair.rho2, tau).unwrap()).unwrap();
        prop_assert!(after <= before + 1e-12);
    }

    #[test]
    fn fidelity_ignores_the_dephasing_phase(params in bell_params(), modulus in 0.0..=1.0f64, phase in 0.0..(2.0 * PI)) {
        let rho = bell_diagonal(&params);
        let real = rsp_fidelity(&correlation_matrix(&apply_dephasing(&rho, Complex64::new(modulus, 0.0)).unwrap()));
        let rotated = rsp_fidelity(&correlation_matrix(&apply_dephasing(&rho, Complex64::from_polar(modulus, phase)).unwrap()));
        prop_assert!((real - rotated).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&real));
    }

    #[test]
    fn optimal_pairs_track_the_modulus(alpha in 0.0..=1.0f64, phase in 0.0..(2.0 * PI), spec in dephasing(), tau in 0.0..3.0f64) {
        for variant in [PairVariant::Zeta, PairVariant::Eta] {
            let pair = optimal_pairs(alpha, phase, variant).unwrap();
            let d = pair_distance(&ChannelFamily::Dephasing(spec), &pair.difference(), tau);
            prop_assert!((d - kappa_abs(&spec, tau)).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn correlation_series_rise_and_fall_together(spec in dephasing()) {
        let family = ChannelFamily::Dephasing(spec);
        let pair = optimal_pairs(0.4, 0.9, PairVariant::Zeta).unwrap();
        let diff = pair.difference();
        let window = 2.0 * PI / spec.delta_omega();
        let grid: Vec<f64> = (0..=200).map(|k| window * k as f64 / 200.0).collect();
        let series = |t: f64| {
            let choi = choi_state(&family, t, 4).unwrap();
            [
                pair_distance(&family, &diff, t),
                negativity(&choi.state, Bipartition::new(4, 4)).unwrap(),
                mutual_information(&choi),
                kappa_abs(&spec, t),
            ]
        };
        let values: Vec<[f64; 4]> = grid.iter().map(|&t| series(t)).collect();
        for w in values.windows(2) {
            let reference = w[1][3] - w[0][3];
            if reference.abs() < 1e-9 {
                continue;
            }
            for k in 0..3 {
                prop_assert_eq!((w[1][k] - w[0][k]).signum(), reference.signum());
            }
        }
    }
}

#[test]
fn search_dominates_every_candidate() {
    let family = ChannelFamily::Dephasing(DephasingSpec::with_separation(0.6, 10.0, 1.0).unwrap());
    let window = TimeWindow::new(0.0, 0.2 * PI).unwrap();
    let opts = SearchOptions { n_pairs: 40, grid_size: 801, seed: 5, ..SearchOptions::default() };
    let report = blp_search(&family, window, &opts).unwrap();
    let random_max = report.random_max.unwrap();
    assert!(report.report.value >= report.optimal_value && report.report.value >= random_max);
    assert!(random_max < report.optimal_value);
    assert!(report.best_index < 352);
}

#[test]
fn single_peak_spectra_are_markovian() {
    for theta in [0.0, FRAC_PI_2] {
        let family = ChannelFamily::Dephasing(DephasingSpec::with_separation(theta, 10.0, 1.0).unwrap());
        let window = TimeWindow::new(0.0, 0.8).unwrap();
        let opts = SearchOptions { n_pairs: 10, grid_size: 401, ..SearchOptions::default() };
        assert!(blp_search(&family, window, &opts).unwrap().report.value < 1e-12);
        assert!(nmrsp::measures::divisibility_measure(&family, window, 401).unwrap().value < 1e-12);
        assert!(nmrsp::measures::entanglement_measure(&family, window, 401).unwrap().value < 1e-12);
        assert!(nmrsp::measures::mutual_info_measure(&family, window, 401).unwrap().value < 1e-12);
    }
}

#[test]
fn haar_mean_distance_is_stable_across_seeds() {
    let mean = |seed: u64| {
        let n = 10_000;
        (0..n)
            .map(|i| {
                let p = sample_random_pair(&SeedStream::new(seed, i));
                trace_distance(&p.rho1, &p.rho2).unwrap()
            })
            .sum::<f64>()
            / n as f64
    };
    let (a, b) = (mean(1), mean(2));
    assert!((a - b).abs() < 0.01, "{a} vs {b}");
}
