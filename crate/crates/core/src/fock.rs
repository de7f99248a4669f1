//! Brute-force two-mode Fock-space simulator.
//!
//! Works directly on amplitudes over |k>_a |n-k>_b and applies each optical
//! element combinatorially, without any rotation-matrix machinery. It is the
//! reference the [`crate::spin`] engine is validated against, and is kept to
//! small photon numbers because each element costs O(n^3).

use num_complex::Complex64;

use crate::error::{FsiError, Result};
use crate::spin::{OutcomeDistribution, PhotonPair};

/// Photon cap for the oracle.
pub const ORACLE_MAX_PHOTONS: u32 = 24;

/// Pure state of two modes sharing a fixed total of n = 2j photons.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeAmplitudes {
    total: u32,
    /// Index k holds the amplitude of |k>_a |total-k>_b.
    amps: Vec<Complex64>,
}

impl ModeAmplitudes {
    pub fn fock(input: PhotonPair) -> Result<Self> {
        let total = input.total();
        if total > ORACLE_MAX_PHOTONS {
            return Err(FsiError::TooManyPhotons { two_j: total, max: ORACLE_MAX_PHOTONS });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); total as usize + 1];
        amps[input.n_a as usize] = Complex64::new(1.0, 0.0);
        Ok(ModeAmplitudes { total, amps })
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Expected photon number in mode a.
    pub fn mean_photons_a(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(k, a)| k as f64 * a.norm_sqr())
            .sum()
    }
}

/// Lossless beam splitter with reflection cos(phi/2) and transmission sin(phi/2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BeamSplitterSpec {
    pub phi: f64,
}

impl BeamSplitterSpec {
    pub fn new(phi: f64) -> Self {
        BeamSplitterSpec { phi }
    }

    pub fn balanced() -> Self {
        BeamSplitterSpec::new(std::f64::consts::FRAC_PI_2)
    }

    pub fn rho(&self) -> f64 {
        (0.5 * self.phi).cos()
    }

    pub fn tau(&self) -> f64 {
        (0.5 * self.phi).sin()
    }
}

fn binomial_row(n: u32) -> Vec<f64> {
    let mut row = vec![1.0; n as usize + 1];
    for k in 1..n as usize {
        row[k] = row[k - 1] * (n as usize - k + 1) as f64 / k as f64;
    }
    row
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Applies the beam splitter a† -> rho a† - i tau b†, b† -> -i tau a† + rho b†
/// by expanding both creation-operator powers binomially.
pub fn apply_beam_splitter(state: &ModeAmplitudes, bs: BeamSplitterSpec) -> ModeAmplitudes {
    let n = state.total;
    let rho = Complex64::new(bs.rho(), 0.0);
    let mitau = Complex64::new(0.0, -bs.tau());
    let fact: Vec<f64> = (0..=n).map(factorial).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n as usize + 1];

    for (k, &amp) in state.amps.iter().enumerate() {
        if amp == Complex64::new(0.0, 0.0) {
            continue;
        }
        let k = k as u32;
        let rest = n - k;
        let row_a = binomial_row(k);
        let row_b = binomial_row(rest);
        let input_norm = (fact[k as usize] * fact[rest as usize]).sqrt();
        // p photons from a stay in a, q photons from b move into a.
        for p in 0..=k {
            let from_a = rho.powu(p) * mitau.powu(k - p) * row_a[p as usize];
            for q in 0..=rest {
                let from_b = mitau.powu(q) * rho.powu(rest - q) * row_b[q as usize];
                let l = (p + q) as usize;
                let output_norm = (fact[l] * fact[n as usize - l]).sqrt();
                out[l] += amp * from_a * from_b * (output_norm / input_norm);
            }
        }
    }
    ModeAmplitudes { total: n, amps: out }
}

/// Phase shift theta in arm a: |k>_a |n-k>_b picks up e^{i theta k}.
pub fn apply_phase(state: &ModeAmplitudes, theta: f64) -> ModeAmplitudes {
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(k, a)| a * Complex64::from_polar(1.0, theta * k as f64))
        .collect();
    ModeAmplitudes { total: state.total, amps }
}

/// Output photon-difference statistics of the Mach-Zehnder interferometer,
/// composed as beam splitter (+pi/2), phase theta, beam splitter (-pi/2).
pub fn mzi_distribution(input: PhotonPair, theta: f64) -> Result<OutcomeDistribution> {
    if !theta.is_finite() {
        return Err(FsiError::NonFinitePhase(theta));
    }
    let state = ModeAmplitudes::fock(input)?;
    let state = apply_beam_splitter(&state, BeamSplitterSpec::balanced());
    let state = apply_phase(&state, theta);
    let state = apply_beam_splitter(&state, BeamSplitterSpec::new(-std::f64::consts::FRAC_PI_2));
    // k photons in a means mu' = (2k - n)/2, which is exactly outcome index k.
    let probs = state.amps.iter().map(|a| a.norm_sqr()).collect();
    Ok(OutcomeDistribution::from_raw(state.total, probs))
}

/// Mean photon number inside the phase-bearing arm (after the first beam splitter).
pub fn signal_arm_photons(input: PhotonPair) -> Result<f64> {
    let state = ModeAmplitudes::fock(input)?;
    Ok(apply_beam_splitter(&state, BeamSplitterSpec::balanced()).mean_photons_a())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn probs(s: &ModeAmplitudes) -> Vec<f64> {
        s.amplitudes().iter().map(|a| a.norm_sqr()).collect()
    }

    #[test]
    fn single_photon_splits_evenly() {
        let s = ModeAmplitudes::fock(PhotonPair::new(1, 0)).unwrap();
        let out = apply_beam_splitter(&s, BeamSplitterSpec::balanced());
        let p = probs(&out);
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
        // the transmitted amplitude is imaginary
        assert_abs_diff_eq!(out.amplitudes()[0].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let s = ModeAmplitudes::fock(PhotonPair::new(1, 1)).unwrap();
        let p = probs(&apply_beam_splitter(&s, BeamSplitterSpec::balanced()));
        assert_abs_diff_eq!(p[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn two_photons_split_binomially() {
        let s = ModeAmplitudes::fock(PhotonPair::new(2, 0)).unwrap();
        let p = probs(&apply_beam_splitter(&s, BeamSplitterSpec::balanced()));
        // index k = photons in a: |0,2>, |1,1>, |2,0>
        assert_abs_diff_eq!(p[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], 0.25, epsilon = 1e-15);
    }

    #[test]
    fn phase_shift_examples() {
        let s = ModeAmplitudes::fock(PhotonPair::new(1, 0)).unwrap();
        assert_eq!(apply_phase(&s, 0.0), s);
        assert_abs_diff_eq!(apply_phase(&s, PI).amplitudes()[1].re, -1.0, epsilon = 1e-15);
        let s = ModeAmplitudes::fock(PhotonPair::new(2, 0)).unwrap();
        assert_abs_diff_eq!(apply_phase(&s, PI / 2.0).amplitudes()[2].re, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn single_photon_fringe_closed_form() {
        for &t in &[0.0, 0.4, 1.3, PI / 2.0, 2.9, PI] {
            let d = mzi_distribution(PhotonPair::new(1, 0), t).unwrap();
            assert_abs_diff_eq!(d.prob(1).unwrap(), (t / 2.0).cos().powi(2), epsilon = 1e-14);
            assert_abs_diff_eq!(d.prob(-1).unwrap(), (t / 2.0).sin().powi(2), epsilon = 1e-14);
        }
    }

    #[test]
    fn mzi_examples() {
        let d = mzi_distribution(PhotonPair::new(1, 1), PI / 2.0).unwrap();
        assert_abs_diff_eq!(d.probs()[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(d.probs()[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.probs()[2], 0.5, epsilon = 1e-14);
        let d = mzi_distribution(PhotonPair::new(3, 2), 0.0).unwrap();
        assert_abs_diff_eq!(d.prob(1).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn unitarity_through_device_chain() {
        let mut s = ModeAmplitudes::fock(PhotonPair::new(5, 3)).unwrap();
        for (i, phi) in [0.3, 1.1, -2.0, 0.7].iter().enumerate() {
            s = apply_beam_splitter(&s, BeamSplitterSpec::new(*phi));
            s = apply_phase(&s, 0.37 * i as f64);
            assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-12);
            assert_eq!(s.amplitudes().len(), 9);
        }
    }

    #[test]
    fn signal_arm_holds_half_the_photons() {
        for (a, b) in [(1, 1), (2, 0), (3, 1), (4, 4), (0, 0)] {
            let n = signal_arm_photons(PhotonPair::new(a, b)).unwrap();
            assert_abs_diff_eq!(n, f64::from(a + b) / 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            ModeAmplitudes::fock(PhotonPair::new(20, 5)),
            Err(FsiError::TooManyPhotons { .. })
        ));
    }
}
