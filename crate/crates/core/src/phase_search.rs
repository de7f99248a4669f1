//! Searches over phase space: binary error sweeps, the smallest phase that
//! can be told apart from zero without error, the power-law scaling of that
//! phase with photon number, and optimal ternary phase placements.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::discrimination::{error_of_rows, performance_of_rows, Performance};
use crate::error::{FsiError, Result};
use crate::exec::{map_indices, map_slice, Execution};
use crate::spin::{outcome_distribution, wigner_d_unchecked, SpinState};

pub const DEFAULT_BINARY_RESOLUTION: f64 = 1e-3;
pub const DEFAULT_TERNARY_RESOLUTION: f64 = 5e-3;
/// Upper end of the ternary search domain in radians.
pub const DEFAULT_TERNARY_CAP: f64 = 3.2;
/// Error probabilities at or below this count as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
/// Grid optima closer than this are treated as ties.
pub const TIE_TOL: f64 = 1e-9;

const MAX_BINARY_RESOLUTION: f64 = PI / 16.0;

/// Binary grid over (0, pi]: theta_k = k pi / n with spacing at most `resolution`.
/// The grid always contains pi/2 and pi when n is even.
pub fn binary_grid(resolution: f64) -> Result<Vec<f64>> {
    if !(resolution > 0.0 && resolution <= MAX_BINARY_RESOLUTION) {
        return Err(FsiError::out_of_domain("grid resolution", resolution, "(0, pi/16]"));
    }
    let n = (PI / resolution).ceil() as usize;
    Ok((1..=n).map(|k| k as f64 * PI / n as f64).collect())
}

/// Binary error probability and information along a phase grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub thetas: Vec<f64>,
    pub pe: Vec<f64>,
    pub mi: Vec<f64>,
}

impl SweepResult {
    /// First grid phase where P_e is a local minimum at or below `zero_tol`.
    pub fn first_zero(&self, zero_tol: f64) -> Option<f64> {
        let pe = &self.pe;
        (0..pe.len())
            .find(|&i| {
                pe[i] <= zero_tol
                    && (i == 0 || pe[i] <= pe[i - 1])
                    && (i + 1 == pe.len() || pe[i] <= pe[i + 1])
            })
            .map(|i| self.thetas[i])
    }
}

fn point_mass(state: &SpinState) -> Vec<f64> {
    let mut row = vec![0.0; state.outcomes()];
    row[state.input_index()] = 1.0;
    row
}

/// Performance of discriminating {0, theta} with uniform priors.
pub fn binary_performance(state: &SpinState, theta: f64) -> Result<Performance> {
    let zero = point_mass(state);
    let dist = outcome_distribution(state, theta)?;
    Ok(performance_of_rows(&[&zero, dist.probs()], &[0.5, 0.5]))
}

/// Closed form of the binary error against theta = 0: (1/2) d^j_{mu,mu}(theta)^2.
pub fn binary_error_closed_form(state: &SpinState, theta: f64) -> f64 {
    let d = wigner_d_unchecked(state.two_j(), state.two_mu(), state.two_mu(), theta);
    0.5 * d * d
}

pub fn binary_sweep(state: &SpinState, resolution: f64) -> Result<SweepResult> {
    binary_sweep_with(state, resolution, Execution::default())
}

/// P_e and MI for hypotheses {0, theta} at every theta of the binary grid.
pub fn binary_sweep_with(state: &SpinState, resolution: f64, exec: Execution) -> Result<SweepResult> {
    let thetas = binary_grid(resolution)?;
    let zero = point_mass(state);
    let perf = map_slice(exec, &thetas, |&t| {
        let dist = outcome_distribution(state, t).expect("grid phases are finite");
        performance_of_rows(&[&zero, dist.probs()], &[0.5, 0.5])
    });
    Ok(SweepResult {
        pe: perf.iter().map(|p| p.error_probability).collect(),
        mi: perf.iter().map(|p| p.mutual_information).collect(),
        thetas,
    })
}

pub fn smallest_optimum_phase(state: &SpinState, zero_tol: f64) -> Result<f64> {
    smallest_optimum_phase_with(state, zero_tol, DEFAULT_BINARY_RESOLUTION)
}

/// Smallest theta in (0, pi] at which binary discrimination against 0 is
/// error free.
///
/// Zeros of d^j_{mu,mu} are bracketed on the binary grid. Sign changes are
/// bisected; zeros of even order show up as local minima of |d| and are
/// refined by golden-section search. A candidate counts when the refined
/// error is at most `zero_tol`.
pub fn smallest_optimum_phase_with(state: &SpinState, zero_tol: f64, resolution: f64) -> Result<f64> {
    let grid = binary_grid(resolution)?;
    let g = |t: f64| wigner_d_unchecked(state.two_j(), state.two_mu(), state.two_mu(), t);
    let is_zero = |v: f64| 0.5 * v * v <= zero_tol;
    let values: Vec<f64> = grid.iter().map(|&t| g(t)).collect();
    let n = grid.len();

    let mut prev_t = 0.0;
    let mut prev_v = 1.0;
    for k in 0..n {
        let (t, v) = (grid[k], values[k]);
        if prev_v * v < 0.0 {
            let root = bisect(&g, prev_t, t, prev_v);
            if is_zero(g(root)) {
                return Ok(root);
            }
        }
        let next = values.get(k + 1).copied();
        let local_min = v.abs() <= prev_v.abs() && next.map_or(true, |w| v.abs() <= w.abs());
        if local_min {
            if k + 1 == n {
                // endpoint pi
                if is_zero(v) {
                    return Ok(t);
                }
            } else if next.map_or(false, |w| w * v >= 0.0) && prev_v * v >= 0.0 {
                let (tm, vm) = golden_min_abs(&g, prev_t, grid[k + 1]);
                if is_zero(vm) {
                    return Ok(tm);
                }
            }
        }
        prev_t = t;
        prev_v = v;
    }
    Err(FsiError::NoZero)
}

fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut g_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (g_lo < 0.0) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn golden_min_abs(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g(c).abs(), g(d).abs());
    while b - a > 1e-13 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g(c).abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = g(d).abs();
        }
    }
    let t = 0.5 * (a + b);
    (t, g(t))
}

/// y = amplitude * x^exponent fitted by least squares on the logarithms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub amplitude: f64,
    pub exponent: f64,
    pub amplitude_se: f64,
    pub exponent_se: f64,
}

/// Unweighted log-log least squares. Standard errors come from the
/// regression covariance; the amplitude error is propagated through exp.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(FsiError::DegenerateFit("abscissa and ordinate lengths differ".into()));
    }
    let n = x.len();
    if n < 3 {
        return Err(FsiError::DegenerateFit(format!("need at least 3 points, got {n}")));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(FsiError::DegenerateFit("all values must be positive".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(FsiError::DegenerateFit("all abscissae are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let s2 = ssr / (nf - 2.0);
    let slope_se = (s2 / sxx).sqrt();
    let intercept_se = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    let amplitude = intercept.exp();
    Ok(PowerLawFit {
        amplitude,
        exponent: slope,
        amplitude_se: amplitude * intercept_se,
        exponent_se: slope_se,
    })
}

/// Fits theta_sop = A (2j)^b.
pub fn fit_sop_scaling(two_j: &[f64], sop: &[f64]) -> Result<PowerLawFit> {
    fit_power_law(two_j, sop)
}

/// Grid over (0, cap] with theta_k = k h.
pub fn ternary_grid(resolution: f64, cap: f64) -> Result<Vec<f64>> {
    if !(resolution > 0.0 && resolution < cap) {
        return Err(FsiError::out_of_domain("grid resolution", resolution, "(0, cap)"));
    }
    let n = (cap / resolution + 1e-9).floor() as usize;
    Ok((1..=n).map(|k| k as f64 * resolution).collect())
}

/// P_e(theta1, theta2) for hypotheses {0, theta1, theta2}, upper triangle only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TernarySurface {
    pub thetas: Vec<f64>,
    /// Row-major upper triangle: for a < b, entry (a, b).
    pe: Vec<f64>,
}

impl TernarySurface {
    fn offset(n: usize, a: usize) -> usize {
        a * n - a * (a + 1) / 2
    }

    /// P_e at grid indices a < b; `None` on the excluded diagonal and below.
    pub fn get(&self, a: usize, b: usize) -> Option<f64> {
        let n = self.thetas.len();
        if a >= b || b >= n {
            return None;
        }
        Some(self.pe[Self::offset(n, a) + (b - a - 1)])
    }

    /// (theta1, theta2, pe) in lexicographic order of (theta1, theta2).
    pub fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.thetas.len();
        (0..n).flat_map(move |a| {
            ((a + 1)..n).map(move |b| (self.thetas[a], self.thetas[b], self.pe[Self::offset(n, a) + (b - a - 1)]))
        })
    }

    pub fn len(&self) -> usize {
        self.pe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pe.is_empty()
    }
}

fn grid_distributions(state: &SpinState, thetas: &[f64], exec: Execution) -> Vec<Vec<f64>> {
    map_slice(exec, thetas, |&t| {
        outcome_distribution(state, t).expect("grid phases are finite").into_probs()
    })
}

const UNIFORM3: [f64; 3] = [1.0 / 3.0; 3];

pub fn ternary_surface(state: &SpinState, resolution: f64, cap: f64) -> Result<TernarySurface> {
    ternary_surface_with(state, resolution, cap, Execution::default())
}

pub fn ternary_surface_with(
    state: &SpinState,
    resolution: f64,
    cap: f64,
    exec: Execution,
) -> Result<TernarySurface> {
    let thetas = ternary_grid(resolution, cap)?;
    let dists = grid_distributions(state, &thetas, exec);
    let zero = point_mass(state);
    let n = thetas.len();
    let rows = map_indices(exec, n, |a| {
        ((a + 1)..n)
            .map(|b| error_of_rows(&[&zero, &dists[a], &dists[b]], &UNIFORM3))
            .collect::<Vec<f64>>()
    });
    Ok(TernarySurface { thetas, pe: rows.concat() })
}

/// What the ternary search optimizes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    MinError,
    /// Maximize mutual information; ties go to the lower error probability.
    MaxInformation,
}

impl Objective {
    fn better(self, a: &Performance, b: &Performance) -> bool {
        match self {
            Objective::MinError => a.error_probability < b.error_probability,
            Objective::MaxInformation => {
                a.mutual_information > b.mutual_information
                    || (a.mutual_information == b.mutual_information
                        && a.error_probability < b.error_probability)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TernaryOptions {
    pub resolution: f64,
    pub cap: f64,
    /// Pattern-search stopping step in radians.
    pub refine_tol: f64,
    pub objective: Objective,
    pub exec: Execution,
}

impl Default for TernaryOptions {
    fn default() -> Self {
        TernaryOptions {
            resolution: DEFAULT_TERNARY_RESOLUTION,
            cap: DEFAULT_TERNARY_CAP,
            refine_tol: 1e-6,
            objective: Objective::MinError,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TernaryOptimum {
    pub theta1: f64,
    pub theta2: f64,
    pub error_probability: f64,
    pub mutual_information: f64,
    /// Best coarse-grid point the refinement started from.
    pub grid_theta1: f64,
    pub grid_theta2: f64,
    pub grid_performance: Performance,
}

pub fn ternary_optimize(state: &SpinState) -> Result<TernaryOptimum> {
    ternary_optimize_with(state, &TernaryOptions::default())
}

/// Coarse grid over 0 < theta1 < theta2 <= cap, then compass pattern search
/// from the best grid point until the step drops below `refine_tol`. Grid
/// ties within [`TIE_TOL`] resolve to the lexicographically smallest pair.
pub fn ternary_optimize_with(state: &SpinState, opts: &TernaryOptions) -> Result<TernaryOptimum> {
    let thetas = ternary_grid(opts.resolution, opts.cap)?;
    let dists = grid_distributions(state, &thetas, opts.exec);
    let zero = point_mass(state);
    let n = thetas.len();
    if n < 2 {
        return Err(FsiError::out_of_domain("grid resolution", opts.resolution, "at least two grid phases"));
    }

    let rows = map_indices(opts.exec, n, |a| {
        ((a + 1)..n)
            .map(|b| performance_of_rows(&[&zero, &dists[a], &dists[b]], &UNIFORM3))
            .collect::<Vec<Performance>>()
    });

    let (ga, gb, grid_perf) = select_grid_optimum(&rows, opts.objective);
    let (t1, t2, refined) = pattern_search(state, opts, thetas[ga], thetas[gb], grid_perf);
    let (theta1, theta2, perf) = canonical_placement(state, opts, t1, t2, refined);
    Ok(TernaryOptimum {
        theta1,
        theta2,
        error_probability: perf.error_probability,
        mutual_information: perf.mutual_information,
        grid_theta1: thetas[ga],
        grid_theta2: thetas[gb],
        grid_performance: grid_perf,
    })
}

/// Placements {0, t1, t2}, t1 < t2, with the same statistics as {0, theta1, theta2}.
///
/// P(.|pi - t) is the mirror image of P(.|t), so when one phase sits at pi
/// (within `pi_tol`) the other may be reflected about pi/2. Balanced inputs
/// (mu = 0) are mirror symmetric themselves, so each phase may independently
/// be replaced by -t, pi - t or pi + t (mod 2 pi).
pub fn equivalent_placements(state: &SpinState, theta1: f64, theta2: f64, pi_tol: f64) -> Vec<(f64, f64)> {
    let sorted = |a: f64, b: f64| if a <= b { (a, b) } else { (b, a) };
    let mut out = vec![sorted(theta1, theta2)];
    if state.two_mu() == 0 {
        let images = |t: f64| {
            let t = t.rem_euclid(2.0 * PI);
            [t, PI - t, PI + t, 2.0 * PI - t].map(|v| v.rem_euclid(2.0 * PI))
        };
        for a in images(theta1) {
            for b in images(theta2) {
                out.push(sorted(a, b));
            }
        }
    } else {
        if (theta2 - PI).abs() <= pi_tol {
            out.push(sorted(PI - theta1, theta2));
        }
        if (theta1 - PI).abs() <= pi_tol {
            out.push(sorted(theta1, PI - theta2));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    out.dedup_by(|x, y| (x.0 - y.0).abs() < 1e-15 && (x.1 - y.1).abs() < 1e-15);
    out
}

/// Lexicographically smallest equivalent placement inside the search domain
/// that performs as well as the refined one.
fn canonical_placement(
    state: &SpinState,
    opts: &TernaryOptions,
    t1: f64,
    t2: f64,
    perf: Performance,
) -> (f64, f64, Performance) {
    let zero = point_mass(state);
    for (a, b) in equivalent_placements(state, t1, t2, opts.refine_tol) {
        if !(a > 0.0 && b <= opts.cap && b - a > 1e-12) {
            continue;
        }
        if (a, b) == (t1, t2) {
            break;
        }
        let p = ternary_performance(state, &zero, a, b);
        if (p.error_probability - perf.error_probability).abs() <= TIE_TOL
            && (p.mutual_information - perf.mutual_information).abs() <= TIE_TOL
        {
            return (a, b, p);
        }
    }
    (t1, t2, perf)
}

fn select_grid_optimum(rows: &[Vec<Performance>], objective: Objective) -> (usize, usize, Performance) {
    let all = || {
        rows.iter()
            .enumerate()
            .flat_map(|(a, row)| row.iter().enumerate().map(move |(k, p)| (a, a + 1 + k, *p)))
    };
    match objective {
        Objective::MinError => {
            let best = all().map(|(_, _, p)| p.error_probability).fold(f64::INFINITY, f64::min);
            all()
                .find(|(_, _, p)| p.error_probability <= best + TIE_TOL)
                .expect("grid is nonempty")
        }
        Objective::MaxInformation => {
            let best = all().map(|(_, _, p)| p.mutual_information).fold(f64::NEG_INFINITY, f64::max);
            let mut pick: Option<(usize, usize, Performance)> = None;
            for cand in all().filter(|(_, _, p)| p.mutual_information >= best - TIE_TOL) {
                if pick.map_or(true, |c| cand.2.error_probability < c.2.error_probability) {
                    pick = Some(cand);
                }
            }
            pick.expect("grid is nonempty")
        }
    }
}

fn ternary_performance(state: &SpinState, zero: &[f64], t1: f64, t2: f64) -> Performance {
    let d1 = outcome_distribution(state, t1).expect("finite phase");
    let d2 = outcome_distribution(state, t2).expect("finite phase");
    performance_of_rows(&[zero, d1.probs(), d2.probs()], &UNIFORM3)
}

fn pattern_search(
    state: &SpinState,
    opts: &TernaryOptions,
    mut t1: f64,
    mut t2: f64,
    start: Performance,
) -> (f64, f64, Performance) {
    const MOVES: [(f64, f64); 8] = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (1.0, 1.0),
        (-1.0, -1.0),
        (1.0, -1.0),
        (-1.0, 1.0),
    ];
    let zero = point_mass(state);
    let mut current = start;
    let mut step = opts.resolution;
    while step >= opts.refine_tol {
        let mut best: Option<(f64, f64, Performance)> = None;
        for (d1, d2) in MOVES {
            let (c1, c2) = (t1 + d1 * step, t2 + d2 * step);
            if !(c1 > 0.0 && c2 <= opts.cap && c2 - c1 > 1e-12) {
                continue;
            }
            let p = ternary_performance(state, &zero, c1, c2);
            let incumbent = best.map_or(current, |b| b.2);
            if opts.objective.better(&p, &incumbent) {
                best = Some((c1, c2, p));
            }
        }
        match best {
            Some((c1, c2, p)) => {
                t1 = c1;
                t2 = c2;
                current = p;
            }
            None => step *= 0.5,
        }
    }
    (t1, t2, current)
}
