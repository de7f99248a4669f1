//! Closed-form comparison receivers and capacity bounds.
//!
//! Coherent BPSK uses the pair |alpha>, |-alpha>. All capacities are in bits
//! per pixel (one channel use).

use serde::{Deserialize, Serialize};

use crate::error::{FsiError, Result};
use crate::special::{binary_entropy, erfc, xlog2x};

/// Coherent-state amplitude |alpha| for BPSK encoding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentAmplitude(f64);

impl CoherentAmplitude {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha >= 0.0 {
            Ok(CoherentAmplitude(alpha))
        } else {
            Err(FsiError::out_of_domain("alpha", alpha, "[0, inf)"))
        }
    }

    /// Amplitude carrying `n` mean photons.
    pub fn from_mean_photons(n: f64) -> Result<Self> {
        if n.is_finite() && n >= 0.0 {
            Ok(CoherentAmplitude(n.sqrt()))
        } else {
            Err(FsiError::out_of_domain("mean photon number", n, "[0, inf)"))
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn mean_photons(self) -> f64 {
        self.0 * self.0
    }
}

/// Homodyne receiver error for +-alpha: (1/2)[1 - erf(|alpha|/2)].
pub fn homodyne_error(alpha: CoherentAmplitude) -> f64 {
    0.5 * erfc(0.5 * alpha.alpha())
}

/// Dolinar receiver (Helstrom bound) error for +-alpha.
pub fn dolinar_error(alpha: CoherentAmplitude) -> f64 {
    let overlap = (-4.0 * alpha.mean_photons()).exp();
    // 1 - sqrt(1 - x) written to avoid cancellation when x is tiny
    0.5 * overlap / (1.0 + (1.0 - overlap).sqrt())
}

/// Minimum error of the two-level phase-eigenstate probe, defined for 0 <= j <= 1.
pub fn phase_eigenstate_error(j: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&j) {
        return Err(FsiError::out_of_domain("j", j, "[0, 1]"));
    }
    Ok((0.5 - (j * (1.0 - j)).sqrt()).max(0.0))
}

/// Holevo capacity of lossless phase-only encoding with n_s signal photons.
pub fn holevo_capacity(n_s: f64) -> f64 {
    if n_s <= 0.0 {
        return 0.0;
    }
    xlog2x(1.0 + n_s) - xlog2x(n_s)
}

/// Capacity of a binary symmetric channel with crossover `pe`.
pub fn binary_channel_capacity(pe: f64) -> f64 {
    (1.0 - binary_entropy(pe.clamp(0.0, 1.0))).max(0.0)
}

/// On-off keying read by an ideal photon counter.
///
/// Dark pixels never click; lit pixels carry a coherent pulse of `n_s` mean
/// photons and are missed with probability e^{-n_s}. Equiprobable inputs.
pub fn ook_direct_detection_capacity(n_s: f64) -> f64 {
    if n_s <= 0.0 {
        return 0.0;
    }
    let miss = (-n_s).exp();
    let click = 0.5 * (1.0 - miss);
    (binary_entropy(click) - 0.5 * binary_entropy(miss)).max(0.0)
}

/// Photon information efficiency: bits per signal photon.
pub fn pie(capacity: f64, n_s: f64) -> Result<f64> {
    if n_s > 0.0 && n_s.is_finite() {
        Ok(capacity / n_s)
    } else {
        Err(FsiError::out_of_domain("n_s", n_s, "(0, inf)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn amp(a: f64) -> CoherentAmplitude {
        CoherentAmplitude::new(a).unwrap()
    }

    #[test]
    fn homodyne_values() {
        assert_eq!(homodyne_error(amp(0.0)), 0.5);
        assert_abs_diff_eq!(homodyne_error(amp(2.0)), 0.078_649_603_525_142_5, epsilon = 1e-12);
        assert!(homodyne_error(amp(40.0)) < 1e-100);
    }

    #[test]
    fn dolinar_values() {
        assert_eq!(dolinar_error(amp(0.0)), 0.5);
        let pe = dolinar_error(CoherentAmplitude::from_mean_photons(1.0).unwrap());
        assert_abs_diff_eq!(pe, 0.5 * (1.0 - (1.0 - (-4f64).exp()).sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(pe, 0.004_600_070_369_588_705, epsilon = 1e-12);
    }

    #[test]
    fn phase_eigenstate_values() {
        assert_eq!(phase_eigenstate_error(0.0).unwrap(), 0.5);
        assert_eq!(phase_eigenstate_error(0.5).unwrap(), 0.0);
        assert_eq!(phase_eigenstate_error(1.0).unwrap(), 0.5);
        assert!(phase_eigenstate_error(1.5).is_err());
        assert!(phase_eigenstate_error(-0.1).is_err());
    }

    #[test]
    fn capacity_values() {
        assert_eq!(holevo_capacity(0.0), 0.0);
        assert_abs_diff_eq!(holevo_capacity(1.0), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(holevo_capacity(3.0), 8.0 - 3.0 * 3f64.log2(), epsilon = 1e-14);
        assert!(holevo_capacity(1e-300) >= 0.0);
        assert_eq!(binary_channel_capacity(0.0), 1.0);
        assert_eq!(binary_channel_capacity(0.5), 0.0);
        assert_abs_diff_eq!(binary_channel_capacity(0.11), 0.500_084_041_835_472, epsilon = 1e-12);
    }

    #[test]
    fn ook_limits() {
        assert_eq!(ook_direct_detection_capacity(0.0), 0.0);
        assert!(ook_direct_detection_capacity(60.0) > 1.0 - 1e-12);
        assert_abs_diff_eq!(ook_direct_detection_capacity(1.0), 0.425_530_619_203_450_5, epsilon = 1e-12);
    }

    #[test]
    fn pie_values() {
        assert_eq!(pie(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(pie(2.0, 4.0).unwrap(), 0.5);
        assert_abs_diff_eq!(pie(3f64.log2(), 2.0).unwrap(), 0.792, epsilon = 1e-3);
        assert!(pie(1.0, 0.0).is_err());
    }

    #[test]
    fn amplitude_validation() {
        assert!(CoherentAmplitude::new(-1.0).is_err());
        assert!(CoherentAmplitude::new(f64::NAN).is_err());
        assert_abs_diff_eq!(CoherentAmplitude::from_mean_photons(4.0).unwrap().alpha(), 2.0);
    }
}
