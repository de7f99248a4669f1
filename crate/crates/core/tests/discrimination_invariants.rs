use std::f64::consts::PI;

use fsi_core::discrimination::{
    conditional_entropy, confusion_matrix, error_probability, likelihood_table, mutual_information,
    performance, shannon_entropy, ConfusionMatrix, HypothesisSet,
};
use fsi_core::phase_search::{binary_error_closed_form, binary_sweep};
use fsi_core::special::binary_entropy;
use fsi_core::spin::wigner_d;
use fsi_core::SpinState;
use proptest::prelude::*;

fn states(max_two_j: u32) -> Vec<SpinState> {
    (0..=max_two_j)
        .flat_map(|tj| (0..=tj).map(move |k| SpinState::new(tj, 2 * k as i32 - tj as i32).unwrap()))
        .collect()
}

/// Smallest error over every deterministic rule mapping outcomes to {0, 1}.
fn exhaustive_binary_error(p0: &[f64], p1: &[f64]) -> f64 {
    let n = p0.len();
    (0u32..1 << n)
        .map(|mask| {
            (0..n)
                .map(|k| if mask >> k & 1 == 1 { 0.5 * p0[k] } else { 0.5 * p1[k] })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn ml_rule_is_optimal_among_all_rules() {
    for state in states(8) {
        for k in 1..12 {
            let hyp = HypothesisSet::uniform(vec![0.13 * k as f64, 0.29 * k as f64 + 0.05]).unwrap();
            let table = likelihood_table(&state, &hyp).unwrap();
            let best = exhaustive_binary_error(&table.rows()[0], &table.rows()[1]);
            let cm = confusion_matrix(&state, &hyp).unwrap();
            let pe = error_probability(&cm, hyp.priors());
            assert!((pe - best).abs() < 1e-12, "{state}: {pe} vs {best}");
            let min_sum: f64 = table.rows()[0].iter().zip(&table.rows()[1]).map(|(a, b)| a.min(*b)).sum();
            assert!((pe - 0.5 * min_sum).abs() < 1e-12);
        }
    }
}

#[test]
fn binary_sweep_reduces_to_closed_form() {
    for state in states(10) {
        let sweep = binary_sweep(&state, 1e-2).unwrap();
        for (theta, pe) in sweep.thetas.iter().zip(&sweep.pe) {
            let d = wigner_d(state.two_j(), state.two_mu(), state.two_mu(), *theta).unwrap();
            assert!((pe - 0.5 * d * d).abs() <= 1e-12, "{state} at {theta}");
            assert!((pe - binary_error_closed_form(&state, *theta)).abs() <= 1e-12);
        }
    }
}

#[test]
fn perfect_channel_carries_full_entropy() {
    let cm = ConfusionMatrix::identity(3);
    let priors = [0.5, 0.25, 0.25];
    assert_eq!(error_probability(&cm, &priors), 0.0);
    assert!((mutual_information(&cm, &priors) - 1.5).abs() < 1e-15);
    assert!(ConfusionMatrix::from_rows(&[vec![0.5, 0.6], vec![1.0, 0.0]]).is_err());
}

fn three_phases() -> impl Strategy<Value = Vec<f64>> {
    (0.0..1.0f64, 1.05..2.0f64, 2.05..3.1f64).prop_map(|(a, b, c)| vec![a, b, c])
}

fn priors3() -> impl Strategy<Value = Vec<f64>> {
    (0.05..1.0f64, 0.05..1.0f64, 0.05..1.0f64).prop_map(|(a, b, c)| {
        let s = a + b + c;
        let (a, b) = (a / s, b / s);
        vec![a, b, 1.0 - a - b]
    })
}

fn spin_state() -> impl Strategy<Value = SpinState> {
    (0u32..=12).prop_flat_map(|tj| (Just(tj), 0..=tj)).prop_map(|(tj, k)| SpinState::new(tj, 2 * k as i32 - tj as i32).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn information_bounds(state in spin_state(), phases in three_phases(), priors in priors3()) {
        let hyp = HypothesisSet::new(phases, priors.clone()).unwrap();
        let cm = confusion_matrix(&state, &hyp).unwrap();
        for i in 0..3 {
            let row = cm.row(i);
            prop_assert!(row.iter().all(|&p| (0.0..=1.0).contains(&p)));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
        let mi = mutual_information(&cm, &priors);
        let h = shannon_entropy(&priors);
        prop_assert!(mi >= 0.0);
        prop_assert!(mi <= 3f64.log2() + 1e-12);
        prop_assert!(mi <= h.min((state.outcomes() as f64).log2()) + 1e-12);

        let pe = error_probability(&cm, &priors);
        let top = priors.iter().cloned().fold(0.0, f64::max);
        prop_assert!(pe >= 0.0 && pe <= 1.0 - top + 1e-12);
        let fano = binary_entropy(pe) + pe * 2f64.log2();
        prop_assert!(conditional_entropy(&cm, &priors) <= fano + 1e-12);
        prop_assert!((mi - (h - conditional_entropy(&cm, &priors))).abs() <= 1e-12);
    }

    #[test]
    fn relabeling_permutes_confusion_matrix(state in spin_state(), phases in three_phases(), priors in priors3()) {
        let perm = [2usize, 0, 1];
        let hyp = HypothesisSet::new(phases.clone(), priors.clone()).unwrap();
        let hyp_p = HypothesisSet::new(perm.iter().map(|&i| phases[i]).collect(), perm.iter().map(|&i| priors[i]).collect()).unwrap();
        let cm = confusion_matrix(&state, &hyp).unwrap();
        let cm_p = confusion_matrix(&state, &hyp_p).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                prop_assert!((cm_p.get(i, k) - cm.get(perm[i], perm[k])).abs() <= 1e-12);
            }
        }
        let a = performance(&state, &hyp).unwrap();
        let b = performance(&state, &hyp_p).unwrap();
        prop_assert!((a.error_probability - b.error_probability).abs() <= 1e-12);
        prop_assert!((a.mutual_information - b.mutual_information).abs() <= 1e-12);
    }
}

#[test]
fn duplicate_phases_rejected() {
    assert!(HypothesisSet::uniform(vec![0.3, 0.3 + 2.0 * PI]).is_err());
    assert!(HypothesisSet::uniform(vec![0.3]).is_err());
    assert!(HypothesisSet::new(vec![0.0, 1.0], vec![0.6, 0.6]).is_err());
}
