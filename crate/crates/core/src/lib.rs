//! Exact photon-counting statistics of a Mach-Zehnder interferometer fed with
//! two Fock states, and what they buy for phase discrimination and optical
//! reading.
//!
//! * [`spin`]: Schwinger-spin engine (Wigner d-matrix, outcome statistics, fringe moments).
//! * [`fock`]: brute-force two-mode Fock simulator, the independent oracle for [`spin`].
//! * [`discrimination`]: maximum-likelihood M-ary phase discrimination.
//! * [`baselines`]: closed-form comparison receivers and capacity bounds.
//! * [`phase_search`]: phase sweeps, smallest optimum phase, ternary optimization.
//! * [`reading`]: capacity and photon information efficiency for optical reading.

pub mod baselines;
pub mod discrimination;
pub mod error;
pub mod exec;
pub mod fock;
pub mod phase_search;
pub mod reading;
pub mod reference;
pub mod special;
pub mod spin;

pub use error::{FsiError, Result};
pub use exec::Execution;
pub use spin::{OutcomeDistribution, Phase, PhotonPair, SpinState};
