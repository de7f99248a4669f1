use std::f64::consts::PI;

use fsi_core::baselines::{
    binary_channel_capacity, dolinar_error, holevo_capacity, homodyne_error, ook_direct_detection_capacity,
    phase_eigenstate_error, CoherentAmplitude,
};
use fsi_core::phase_search::{
    binary_sweep, fit_sop_scaling, smallest_optimum_phase, ternary_optimize_with, TernaryOptions, DEFAULT_ZERO_TOL,
};
use fsi_core::reading::{bpsk_capacity, receiver_comparison, tpsk_reports};
use fsi_core::{Execution, SpinState};
use proptest::prelude::*;

/// Legendre P_n and its derivative by the three-term recurrence.
fn legendre(n: u32, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let k = f64::from(k);
        (p0, p1) = (p1, ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0));
    }
    let dp = f64::from(n) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn largest_legendre_root(n: u32) -> f64 {
    let mut x = (PI * 0.75 / (f64::from(n) + 0.5)).cos();
    for _ in 0..50 {
        let (p, dp) = legendre(n, x);
        x -= p / dp;
    }
    x
}

fn sop(n_a: u32, n_b: u32) -> f64 {
    smallest_optimum_phase(&SpinState::from_photons(n_a, n_b).unwrap(), DEFAULT_ZERO_TOL).unwrap()
}

#[test]
fn balanced_sop_is_first_legendre_node() {
    for j in 1..=6 {
        let want = largest_legendre_root(j).acos();
        assert!((sop(j, j) - want).abs() < 1e-9, "j={j}");
    }
    assert!((largest_legendre_root(5) - (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0).abs() < 1e-14);
}

#[test]
fn sop_ordering() {
    for j in 1..=6u32 {
        let by_m: Vec<f64> = (0..=j).map(|m| sop(j + m, j - m)).collect();
        assert!(by_m.windows(2).all(|w| w[0] <= w[1] + 1e-12), "j={j}: {by_m:?}");
        assert!((by_m[j as usize] - PI).abs() < 1e-6);
    }
    let balanced: Vec<f64> = (1..=6).map(|j| sop(j, j)).collect();
    assert!(balanced.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn sop_fit_over_small_inputs() {
    let two_j: Vec<f64> = (1..=5).map(|j| 2.0 * j as f64).collect();
    let sops: Vec<f64> = (1..=5).map(|j| sop(j, j)).collect();
    let fit = fit_sop_scaling(&two_j, &sops).unwrap();
    assert!((2.52..=2.82).contains(&fit.amplitude), "{fit:?}");
    assert!((-0.82..=-0.72).contains(&fit.exponent), "{fit:?}");
    assert!(fit.amplitude_se >= 0.0 && fit.exponent_se >= 0.0);
}

#[test]
fn sweeps_are_continuous_and_finite() {
    let res = 1e-3;
    for tj in 0..=12u32 {
        for k in 0..=tj {
            let state = SpinState::new(tj, 2 * k as i32 - tj as i32).unwrap();
            let s = binary_sweep(&state, res).unwrap();
            assert!(s.pe.iter().chain(&s.mi).all(|v| v.is_finite()));
            let bound = 10.0 * res * f64::from(tj.max(1));
            assert!(s.pe.windows(2).all(|w| (w[1] - w[0]).abs() < bound), "{state}");
            assert!(s.pe.iter().all(|&p| (0.0..=0.5).contains(&p)));
            assert!(s.mi.iter().all(|&i| (0.0..=1.0 + 1e-12).contains(&i)));
        }
    }
}

#[test]
fn classical_probe_separates_zero_and_pi() {
    for n in 1..=20 {
        let state = SpinState::from_photons(n, 0).unwrap();
        let s = binary_sweep(&state, 1e-3).unwrap();
        assert!(*s.pe.last().unwrap() <= 1e-12);
    }
    assert_eq!(phase_eigenstate_error(0.5).unwrap(), 0.0);
}

#[test]
fn ternary_refinement_never_loses() {
    for (na, nb) in [(2, 2), (3, 1), (4, 0), (3, 3)] {
        let state = SpinState::from_photons(na, nb).unwrap();
        let opts = TernaryOptions { resolution: 0.02, ..TernaryOptions::default() };
        let o = ternary_optimize_with(&state, &opts).unwrap();
        assert!(o.error_probability <= o.grid_performance.error_probability + 1e-15);
        assert!(o.mutual_information <= 3f64.log2() + 1e-12);
    }
}

#[test]
fn reading_capacities_bounded() {
    let mut last = 0.0;
    for j in 1..=5 {
        let r = bpsk_capacity(&SpinState::from_photons(j, j).unwrap()).unwrap();
        assert!(r.capacity <= 1.0 + 1e-12);
        assert!(r.capacity + 1e-12 >= last, "j={j}");
        assert!(r.respects_holevo());
        assert!((r.pie.unwrap() * r.n_s - r.capacity).abs() < 1e-12);
        last = r.capacity;
    }
    let t = tpsk_reports(&SpinState::from_photons(2, 2).unwrap(), Execution::default()).unwrap();
    for r in [&t.max_information, &t.min_error] {
        assert!(r.capacity <= 3f64.log2() + 1e-12);
        assert!(r.respects_holevo());
    }
    assert!(t.max_information.capacity + 1e-12 >= t.min_error.capacity);
}

#[test]
fn receiver_table_respects_holevo() {
    let rows = receiver_comparison(&[0.5, 1.0, 1.5, 2.0, 3.0]).unwrap();
    assert!(rows.iter().all(|r| r.respects_holevo()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dolinar_beats_homodyne(a in 0.0..6.0f64, b in 0.0..6.0f64) {
        let (lo, hi) = (a.min(b), a.max(b));
        let (x, y) = (CoherentAmplitude::new(lo).unwrap(), CoherentAmplitude::new(hi).unwrap());
        prop_assert!(dolinar_error(x) <= homodyne_error(x));
        if hi - lo > 1e-6 && dolinar_error(y) > 0.0 {
            prop_assert!(homodyne_error(y) < homodyne_error(x));
            prop_assert!(dolinar_error(y) < dolinar_error(x));
        }
    }

    #[test]
    fn channel_capacity_symmetric(p in 0.0..=1.0f64) {
        prop_assert!((binary_channel_capacity(p) - binary_channel_capacity(1.0 - p)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&binary_channel_capacity(p)));
    }

    #[test]
    fn ook_efficiency_limited(n_s in 1.0..200.0f64) {
        let c = ook_direct_detection_capacity(n_s);
        prop_assert!(c / n_s <= 0.5);
        prop_assert!(c <= holevo_capacity(n_s));
    }
}
