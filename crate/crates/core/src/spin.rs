//! Schwinger-representation engine.
//!
//! A two-mode Fock input |n_a>|n_b> is the spin state |j mu> with
//! j = (n_a + n_b)/2 and mu = (n_a - n_b)/2. A Mach-Zehnder interferometer
//! with phase difference theta rotates that spin about the y axis, so the
//! photon-difference statistics at the output are squared Wigner d-matrix
//! elements. Spin labels are carried as doubled integers (2j, 2mu) so that
//! half-integer spins stay exact.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{FsiError, Result};
use crate::special::{jacobi, ln_factorial, MAX_TWO_J};

/// Residual above which a renormalized distribution counts as unhealthy.
pub const HEALTH_RESIDUAL: f64 = 1e-9;

static HEALTH_WARNINGS: AtomicUsize = AtomicUsize::new(0);

/// Number of outcome distributions whose normalization residual exceeded
/// [`HEALTH_RESIDUAL`] since process start.
pub fn health_warnings() -> usize {
    HEALTH_WARNINGS.load(Ordering::Relaxed)
}

/// Photon numbers at the two input ports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhotonPair {
    pub n_a: u32,
    pub n_b: u32,
}

impl PhotonPair {
    pub fn new(n_a: u32, n_b: u32) -> Self {
        PhotonPair { n_a, n_b }
    }

    pub fn total(&self) -> u32 {
        self.n_a + self.n_b
    }
}

impl std::fmt::Display for PhotonPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{}>|{}>", self.n_a, self.n_b)
    }
}

/// Interferometer input as an effective spin |j mu>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinState {
    two_j: u32,
    two_mu: i32,
}

impl SpinState {
    pub fn new(two_j: u32, two_mu: i32) -> Result<Self> {
        check_labels(two_j, two_mu, two_mu)?;
        Ok(SpinState { two_j, two_mu })
    }

    pub fn from_photons(n_a: u32, n_b: u32) -> Result<Self> {
        let two_j = n_a
            .checked_add(n_b)
            .ok_or(FsiError::TooManyPhotons { two_j: u32::MAX, max: MAX_TWO_J })?;
        if two_j > MAX_TWO_J {
            return Err(FsiError::TooManyPhotons { two_j, max: MAX_TWO_J });
        }
        SpinState::new(two_j, n_a as i32 - n_b as i32)
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn two_mu(&self) -> i32 {
        self.two_mu
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn mu(&self) -> f64 {
        f64::from(self.two_mu) / 2.0
    }

    /// Number of measurement outcomes, 2j + 1.
    pub fn outcomes(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn photons(&self) -> PhotonPair {
        let n_a = (self.two_j as i32 + self.two_mu) / 2;
        let n_b = (self.two_j as i32 - self.two_mu) / 2;
        PhotonPair::new(n_a as u32, n_b as u32)
    }

    /// Doubled projection 2mu' of outcome index `k` (k = 0 is mu' = -j).
    pub fn outcome_two_mu(&self, k: usize) -> i32 {
        2 * k as i32 - self.two_j as i32
    }

    /// Index of the input projection within the outcome vector.
    pub fn input_index(&self) -> usize {
        ((self.two_mu + self.two_j as i32) / 2) as usize
    }
}

impl TryFrom<PhotonPair> for SpinState {
    type Error = FsiError;

    fn try_from(p: PhotonPair) -> Result<Self> {
        SpinState::from_photons(p.n_a, p.n_b)
    }
}

impl From<SpinState> for PhotonPair {
    fn from(s: SpinState) -> Self {
        s.photons()
    }
}

impl std::fmt::Display for SpinState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let half = |v: i32| {
            if v % 2 == 0 {
                format!("{}", v / 2)
            } else {
                format!("{v}/2")
            }
        };
        write!(f, "|{} {}>_z", half(self.two_j as i32), half(self.two_mu))
    }
}

/// A phase difference in radians. Stored as given.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Phase(f64);

impl Phase {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_finite() {
            Ok(Phase(theta))
        } else {
            Err(FsiError::NonFinitePhase(theta))
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// The same angle mapped into [0, 2pi).
    pub fn canonical(self) -> f64 {
        self.0.rem_euclid(std::f64::consts::TAU)
    }
}

fn check_labels(two_j: u32, two_mu_p: i32, two_mu: i32) -> Result<()> {
    if two_j > MAX_TWO_J {
        return Err(FsiError::TooManyPhotons { two_j, max: MAX_TWO_J });
    }
    let j = two_j as i32;
    let ok = |m: i32| m.abs() <= j && (j - m) % 2 == 0;
    if ok(two_mu) && ok(two_mu_p) {
        Ok(())
    } else {
        Err(FsiError::InvalidProjection { two_j, two_mu_p, two_mu })
    }
}

/// Wigner small-d matrix element d^j_{mu',mu}(theta), all labels doubled.
///
/// Uses the Jacobi-polynomial form, which has nonnegative polynomial
/// parameters only when mu' <= mu and mu + mu' >= 0. Other label pairs are
/// first mapped there with d_{mu',mu} = (-1)^{mu'-mu} d_{mu,mu'} and
/// d_{mu',mu} = d_{-mu,-mu'}.
pub fn wigner_d(two_j: u32, two_mu_p: i32, two_mu: i32, theta: f64) -> Result<f64> {
    check_labels(two_j, two_mu_p, two_mu)?;
    if !theta.is_finite() {
        return Err(FsiError::NonFinitePhase(theta));
    }
    Ok(wigner_d_unchecked(two_j, two_mu_p, two_mu, theta))
}

pub(crate) fn wigner_d_unchecked(two_j: u32, mut two_mu_p: i32, mut two_mu: i32, theta: f64) -> f64 {
    let mut sign = 1.0;
    if two_mu_p > two_mu {
        if ((two_mu_p - two_mu) / 2) % 2 != 0 {
            sign = -sign;
        }
        std::mem::swap(&mut two_mu_p, &mut two_mu);
    }
    if two_mu + two_mu_p < 0 {
        (two_mu_p, two_mu) = (-two_mu, -two_mu_p);
    }
    let j = two_j as i32;
    // a = mu - mu', b = mu + mu', n = j - mu; all nonnegative integers here.
    let a = ((two_mu - two_mu_p) / 2) as u32;
    let b = ((two_mu + two_mu_p) / 2) as u32;
    let n = ((j - two_mu) / 2) as u32;
    let ln_ratio = 0.5
        * (ln_factorial(((j + two_mu) / 2) as u32) + ln_factorial(((j - two_mu) / 2) as u32)
            - ln_factorial(((j + two_mu_p) / 2) as u32)
            - ln_factorial(((j - two_mu_p) / 2) as u32));
    let half = 0.5 * theta;
    let (s, c) = half.sin_cos();
    sign * ln_ratio.exp() * s.powi(a as i32) * c.powi(b as i32) * jacobi(n, a, b, theta.cos())
}

/// Photon-difference statistics at the interferometer output for one phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    two_j: u32,
    probs: Vec<f64>,
    residual: f64,
}

impl OutcomeDistribution {
    /// Builds a distribution from raw probabilities: entries are clamped to
    /// [0, 1] and the vector renormalized, keeping |sum - 1| as the residual.
    pub fn from_raw(two_j: u32, mut probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), two_j as usize + 1, "outcome vector length must be 2j+1");
        for p in probs.iter_mut() {
            *p = p.clamp(0.0, 1.0);
        }
        let total: f64 = probs.iter().sum();
        let residual = (total - 1.0).abs();
        if total > 0.0 {
            for p in probs.iter_mut() {
                *p /= total;
            }
        }
        if residual > HEALTH_RESIDUAL {
            HEALTH_WARNINGS.fetch_add(1, Ordering::Relaxed);
            log::warn!("outcome distribution for 2j={two_j} renormalized with residual {residual:e}");
        }
        OutcomeDistribution { two_j, probs, residual }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    /// Probabilities indexed from mu' = -j (index 0) to mu' = +j.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Probability of the outcome with doubled projection `two_mu_p`.
    pub fn prob(&self, two_mu_p: i32) -> Option<f64> {
        let idx = two_mu_p + self.two_j as i32;
        if idx < 0 || idx % 2 != 0 {
            return None;
        }
        self.probs.get((idx / 2) as usize).copied()
    }

    /// Normalization residual before renormalization.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn is_healthy(&self) -> bool {
        self.residual <= HEALTH_RESIDUAL
    }

    /// Expectation of the photon-number difference N_a - N_b (= 2mu').
    pub fn mean_difference(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| p * f64::from(2 * k as i32 - self.two_j as i32))
            .sum()
    }

    /// Variance of N_a - N_b.
    pub fn variance_difference(&self) -> f64 {
        let mean = self.mean_difference();
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let d = f64::from(2 * k as i32 - self.two_j as i32) - mean;
                p * d * d
            })
            .sum()
    }
}

/// Output statistics P(mu'|mu, theta) = d^j_{mu',mu}(theta)^2.
pub fn outcome_distribution(state: &SpinState, theta: f64) -> Result<OutcomeDistribution> {
    if !theta.is_finite() {
        return Err(FsiError::NonFinitePhase(theta));
    }
    let two_j = state.two_j;
    let probs = (0..=two_j as usize)
        .map(|k| {
            let d = wigner_d_unchecked(two_j, state.outcome_two_mu(k), state.two_mu, theta);
            d * d
        })
        .collect();
    Ok(OutcomeDistribution::from_raw(two_j, probs))
}

/// Interference fringe <N_a - N_b> = (n_a - n_b) cos(theta).
pub fn mean_photon_difference(state: &SpinState, theta: f64) -> f64 {
    f64::from(state.two_mu) * theta.cos()
}

/// Quantum standard deviation of N_a - N_b at the output.
pub fn std_photon_difference(state: &SpinState, theta: f64) -> f64 {
    let j = state.j();
    let m = state.mu();
    theta.sin().abs() * (2.0 * (j * (j + 1.0) - m * m)).sqrt()
}

/// Propagated phase error [j(j+1)/(2m^2) - 1/2]^{1/2}; independent of theta.
pub fn phase_error_estimate(state: &SpinState) -> Result<f64> {
    if state.two_mu == 0 {
        return Err(FsiError::BalancedInput);
    }
    let j = state.j();
    let m = state.mu();
    Ok((j * (j + 1.0) / (2.0 * m * m) - 0.5).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn state_round_trip_and_validation() {
        let s = SpinState::from_photons(3, 1).unwrap();
        assert_eq!((s.two_j(), s.two_mu()), (4, 2));
        assert_eq!(PhotonPair::from(s), PhotonPair::new(3, 1));
        assert_eq!(s.to_string(), "|2 1>_z");
        assert_eq!(SpinState::from_photons(1, 0).unwrap().to_string(), "|1/2 1/2>_z");
        assert!(matches!(SpinState::new(2, 1), Err(FsiError::InvalidProjection { .. })));
        assert!(matches!(SpinState::new(2, 4), Err(FsiError::InvalidProjection { .. })));
        assert!(matches!(
            SpinState::from_photons(40, 30),
            Err(FsiError::TooManyPhotons { two_j: 70, .. })
        ));
    }

    #[test]
    fn d_identity_and_spin_half() {
        for two_j in 0..8u32 {
            for a in 0..=two_j {
                for b in 0..=two_j {
                    let (mp, m) = (2 * a as i32 - two_j as i32, 2 * b as i32 - two_j as i32);
                    let d = wigner_d(two_j, mp, m, 0.0).unwrap();
                    assert_abs_diff_eq!(d, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-15);
                }
            }
        }
        for &t in &[0.1, 1.0, 2.5, -0.7] {
            assert_abs_diff_eq!(wigner_d(1, 1, 1, t).unwrap(), (t / 2.0).cos(), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(wigner_d(2, 0, 0, PI / 3.0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn d_rejects_bad_labels() {
        assert!(wigner_d(2, 1, 0, 0.3).is_err());
        assert!(wigner_d(2, 0, 4, 0.3).is_err());
        assert!(wigner_d(66, 0, 0, 0.3).is_err());
        assert!(wigner_d(2, 0, 0, f64::NAN).is_err());
    }

    #[test]
    fn hom_suppression_and_full_swap() {
        let s = SpinState::from_photons(1, 1).unwrap();
        let p = outcome_distribution(&s, PI / 2.0).unwrap();
        assert_abs_diff_eq!(p.probs()[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probs()[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probs()[2], 0.5, epsilon = 1e-15);

        for n in 1..6 {
            let s = SpinState::from_photons(n, 0).unwrap();
            let p = outcome_distribution(&s, PI).unwrap();
            assert_abs_diff_eq!(p.prob(-(n as i32)).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn moments_examples() {
        let s20 = SpinState::from_photons(2, 0).unwrap();
        assert_eq!(mean_photon_difference(&s20, 0.0), 2.0);
        assert_abs_diff_eq!(std_photon_difference(&s20, PI / 2.0), 2f64.sqrt(), epsilon = 1e-15);
        let s11 = SpinState::from_photons(1, 1).unwrap();
        assert_eq!(mean_photon_difference(&s11, 1.234), 0.0);
        assert_abs_diff_eq!(std_photon_difference(&s11, PI / 2.0), 2.0, epsilon = 1e-15);
        let s31 = SpinState::from_photons(3, 1).unwrap();
        assert_abs_diff_eq!(mean_photon_difference(&s31, PI / 3.0), 1.0, epsilon = 1e-15);
        assert_eq!(std_photon_difference(&s31, 0.0), 0.0);
    }

    #[test]
    fn phase_error_cases() {
        for two_j in 1..10 {
            let s = SpinState::new(two_j, two_j as i32).unwrap();
            let e = phase_error_estimate(&s).unwrap();
            assert_abs_diff_eq!(e, 1.0 / f64::from(two_j).sqrt(), epsilon = 1e-14);
        }
        assert_eq!(
            phase_error_estimate(&SpinState::from_photons(2, 2).unwrap()),
            Err(FsiError::BalancedInput)
        );
        let s31 = SpinState::from_photons(3, 1).unwrap();
        let e = phase_error_estimate(&s31).unwrap();
        assert_abs_diff_eq!(e, 2.5f64.sqrt(), epsilon = 1e-14);
        // same value from the fringe slope at theta = pi/2
        let slope = f64::from(s31.two_mu()) * (PI / 2.0).sin();
        assert_abs_diff_eq!(e, std_photon_difference(&s31, PI / 2.0) / slope, epsilon = 1e-14);
    }

    #[test]
    fn prob_lookup() {
        let s = SpinState::from_photons(2, 1).unwrap();
        let p = outcome_distribution(&s, 0.0).unwrap();
        assert_eq!(p.prob(1), Some(1.0));
        assert_eq!(p.prob(0), None);
        assert_eq!(p.prob(5), None);
        assert!(p.is_healthy());
    }
}
