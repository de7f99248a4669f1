//! Optical reading of phase-encoded memory pixels: per-pixel capacity as the
//! best achievable mutual information, photon information efficiency, and a
//! comparison of Fock-state reading against coherent-state receivers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::baselines::{
    binary_channel_capacity, dolinar_error, holevo_capacity, homodyne_error, ook_direct_detection_capacity,
    pie, CoherentAmplitude,
};
use crate::discrimination::{performance, HypothesisSet, Performance};
use crate::error::Result;
use crate::exec::Execution;
use crate::phase_search::{
    binary_performance, binary_sweep_with, smallest_optimum_phase, ternary_optimize_with, Objective,
    TernaryOptions, DEFAULT_BINARY_RESOLUTION, DEFAULT_ZERO_TOL, TIE_TOL,
};
use crate::spin::{PhotonPair, SpinState};

/// Slack allowed when checking capacities against the Holevo bound.
pub const HOLEVO_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Bpsk,
    Tpsk,
    Ook,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Probe {
    Fock(PhotonPair),
    Coherent { alpha: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadingReport {
    pub probe: Probe,
    pub encoding: Encoding,
    pub n_s: f64,
    /// Bits per pixel.
    pub capacity: f64,
    /// Bits per signal photon; `None` when no signal photons are used.
    pub pie: Option<f64>,
    /// Phase placement, including the reference phase 0.
    pub phases: Vec<f64>,
    pub error_probability: f64,
}

impl ReadingReport {
    fn fock(state: &SpinState, encoding: Encoding, phases: Vec<f64>, perf: Performance) -> Self {
        let n_s = signal_photons(state);
        ReadingReport {
            probe: Probe::Fock(state.photons()),
            encoding,
            n_s,
            capacity: perf.mutual_information,
            pie: pie(perf.mutual_information, n_s).ok(),
            phases,
            error_probability: perf.error_probability,
        }
    }

    pub fn respects_holevo(&self) -> bool {
        self.capacity <= holevo_capacity(self.n_s) + HOLEVO_SLACK
    }
}

/// Mean photon number in the phase-bearing arm: n_s = j.
pub fn signal_photons(state: &SpinState) -> f64 {
    state.j()
}

pub fn bpsk_capacity(state: &SpinState) -> Result<ReadingReport> {
    bpsk_capacity_with(state, DEFAULT_BINARY_RESOLUTION, Execution::default())
}

/// Maximal MI over binary encodings (0, theta), theta in (0, pi], uniform
/// priors. Among maximizing phases the smallest is reported.
pub fn bpsk_capacity_with(state: &SpinState, resolution: f64, exec: Execution) -> Result<ReadingReport> {
    let sweep = binary_sweep_with(state, resolution, exec)?;
    let best_mi = sweep.mi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let k = sweep
        .mi
        .iter()
        .position(|&m| m >= best_mi - TIE_TOL)
        .expect("sweep is nonempty");

    let lo = if k == 0 { 0.0 } else { sweep.thetas[k - 1] };
    let hi = sweep.thetas.get(k + 1).copied().unwrap_or(PI);
    let mut best = (sweep.thetas[k], binary_performance(state, sweep.thetas[k])?);
    let refined = golden_max_mi(state, lo.max(1e-12), hi)?;
    if refined.1.mutual_information > best.1.mutual_information {
        best = refined;
    }
    if let Ok(t) = smallest_optimum_phase(state, DEFAULT_ZERO_TOL) {
        let p = binary_performance(state, t)?;
        let gain = p.mutual_information - best.1.mutual_information;
        if gain > 1e-12 || (gain.abs() <= 1e-12 && t < best.0) {
            best = (t, p);
        }
    }
    Ok(ReadingReport::fock(state, Encoding::Bpsk, vec![0.0, best.0], best.1))
}

fn golden_max_mi(state: &SpinState, mut a: f64, mut b: f64) -> Result<(f64, Performance)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| binary_performance(state, t);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?.mutual_information, f(d)?.mutual_information);
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?.mutual_information;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?.mutual_information;
        }
    }
    let t = 0.5 * (a + b);
    Ok((t, f(t)?))
}

/// Ternary reading. With `phases` given, evaluates that placement; otherwise
/// uses the MI-maximizing placement (ties broken by lower error).
pub fn tpsk_report(state: &SpinState, phases: Option<[f64; 3]>) -> Result<ReadingReport> {
    match phases {
        Some(p) => {
            let hyp = HypothesisSet::uniform(p.to_vec())?;
            let perf = performance(state, &hyp)?;
            Ok(ReadingReport::fock(state, Encoding::Tpsk, p.to_vec(), perf))
        }
        None => tpsk_optimal(state, Objective::MaxInformation, Execution::default()),
    }
}

fn tpsk_optimal(state: &SpinState, objective: Objective, exec: Execution) -> Result<ReadingReport> {
    let opts = TernaryOptions { objective, exec, ..Default::default() };
    let o = ternary_optimize_with(state, &opts)?;
    let perf = Performance {
        error_probability: o.error_probability,
        mutual_information: o.mutual_information,
    };
    Ok(ReadingReport::fock(state, Encoding::Tpsk, vec![0.0, o.theta1, o.theta2], perf))
}

/// The two readings of "optimal" ternary placement side by side.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TpskComparison {
    pub max_information: ReadingReport,
    pub min_error: ReadingReport,
}

pub fn tpsk_reports(state: &SpinState, exec: Execution) -> Result<TpskComparison> {
    Ok(TpskComparison {
        max_information: tpsk_optimal(state, Objective::MaxInformation, exec)?,
        min_error: tpsk_optimal(state, Objective::MinError, exec)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Receiver {
    FsiBpsk,
    HomodyneBpsk,
    DolinarBpsk,
    OokDirect,
    Holevo,
}

impl Receiver {
    pub const ALL: [Receiver; 5] = [
        Receiver::FsiBpsk,
        Receiver::HomodyneBpsk,
        Receiver::DolinarBpsk,
        Receiver::OokDirect,
        Receiver::Holevo,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Receiver::FsiBpsk => "fsi-bpsk",
            Receiver::HomodyneBpsk => "homodyne-bpsk",
            Receiver::DolinarBpsk => "dolinar-bpsk",
            Receiver::OokDirect => "ook-direct",
            Receiver::Holevo => "holevo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub n_s: f64,
    pub receiver: Receiver,
    pub capacity: f64,
    pub pie: f64,
    /// Fock probe used for the FSI row.
    pub probe: Option<PhotonPair>,
    /// Signal photons actually used when n_s is not a half-integer.
    pub j_used: Option<f64>,
    pub j_flagged: bool,
}

impl ComparisonRow {
    /// Signal photons this row actually spends.
    pub fn effective_ns(&self) -> f64 {
        self.j_used.unwrap_or(self.n_s)
    }

    pub fn respects_holevo(&self) -> bool {
        self.capacity <= holevo_capacity(self.effective_ns()) + HOLEVO_SLACK
    }
}

/// Best FSI BPSK reading at the achievable j nearest to `n_s`.
///
/// Every projection of that j is tried; ties go to the smallest |mu|.
pub fn fsi_bpsk_best(n_s: f64, exec: Execution) -> Result<(SpinState, ReadingReport)> {
    let two_j = (2.0 * n_s).round().max(1.0) as u32;
    let mut best: Option<(SpinState, ReadingReport)> = None;
    for two_mu in ((two_j % 2) as i32..=two_j as i32).step_by(2) {
        let s = SpinState::new(two_j, two_mu)?;
        let r = bpsk_capacity_with(&s, DEFAULT_BINARY_RESOLUTION, exec)?;
        if best.as_ref().map_or(true, |(_, b)| r.capacity > b.capacity + 1e-12) {
            best = Some((s, r));
        }
    }
    Ok(best.expect("at least one projection"))
}

/// Capacity and PIE per receiver at each n_s.
///
/// Coherent BPSK receivers spend all photons as signal (|alpha|^2 = n_s) and
/// use the binary symmetric channel capacity of their error probability.
/// FSI rows use n_s = j at the nearest achievable j, flagged when it differs.
pub fn receiver_comparison(ns_grid: &[f64]) -> Result<Vec<ComparisonRow>> {
    receiver_comparison_with(ns_grid, Execution::default())
}

pub fn receiver_comparison_with(ns_grid: &[f64], exec: Execution) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(ns_grid.len() * Receiver::ALL.len());
    for &n_s in ns_grid {
        pie(0.0, n_s)?;
        let alpha = CoherentAmplitude::from_mean_photons(n_s)?;
        for receiver in Receiver::ALL {
            let row = match receiver {
                Receiver::FsiBpsk => {
                    let (state, report) = fsi_bpsk_best(n_s, exec)?;
                    let j = state.j();
                    ComparisonRow {
                        n_s,
                        receiver,
                        capacity: report.capacity,
                        pie: pie(report.capacity, j)?,
                        probe: Some(state.photons()),
                        j_used: Some(j),
                        j_flagged: (j - n_s).abs() > 1e-12,
                    }
                }
                _ => {
                    let capacity = match receiver {
                        Receiver::HomodyneBpsk => binary_channel_capacity(homodyne_error(alpha)),
                        Receiver::DolinarBpsk => binary_channel_capacity(dolinar_error(alpha)),
                        Receiver::OokDirect => ook_direct_detection_capacity(n_s),
                        _ => holevo_capacity(n_s),
                    };
                    ComparisonRow {
                        n_s,
                        receiver,
                        capacity,
                        pie: pie(capacity, n_s)?,
                        probe: None,
                        j_used: None,
                        j_flagged: false,
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}
