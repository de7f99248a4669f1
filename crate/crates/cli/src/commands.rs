use std::f64::consts::PI;

use fsi_core::baselines::holevo_capacity;
use fsi_core::fock::mzi_distribution;
use fsi_core::phase_search::{
    binary_sweep, fit_sop_scaling, smallest_optimum_phase, ternary_optimize_with, ternary_surface, TernaryOptions,
    DEFAULT_ZERO_TOL, TIE_TOL,
};
use fsi_core::reading::{bpsk_capacity, receiver_comparison, tpsk_report, tpsk_reports, ReadingReport};
use fsi_core::reference::{TERNARY_REFERENCE, MI_ABS_TOL, PE_ABS_TOL, PE_REL_TOL, PHASE_ABS_TOL};
use fsi_core::spin::{outcome_distribution, HEALTH_RESIDUAL};
use fsi_core::{discrimination, Execution, PhotonPair, SpinState};
use serde::Serialize;

use crate::args::{Command, Format, NsGrid, PhaseList, StateArgs, TernaryArgs};
use crate::output::{Artifact, Meta};
use crate::records::*;
use crate::CliError;

/// Tolerance for spin engine versus Fock simulation agreement.
pub const ORACLE_TOL: f64 = 1e-9;
const DEFAULT_NS_GRID: &str = "0.5:10:0.5";

/// A rendered artifact plus any numerical failure it revealed.
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failure: Option<String>,
}

fn render<R: Serialize>(format: Format, artifact: Artifact<R>, failure: Option<String>) -> Result<Outcome, CliError> {
    let mut bytes = Vec::new();
    artifact.write_to(format, &mut bytes)?;
    Ok(Outcome { bytes, failure })
}

fn state(s: StateArgs) -> Result<SpinState, CliError> {
    Ok(SpinState::from_photons(s.na, s.nb)?)
}

fn base_meta(command_line: &str) -> Meta {
    let mut meta = Meta::new(command_line.to_string());
    meta.param("zero_tol", DEFAULT_ZERO_TOL)
        .param("tie_tol", TIE_TOL)
        .param("health_residual", HEALTH_RESIDUAL);
    meta
}

pub fn execute(command: &Command, format: Format, command_line: &str) -> Result<Outcome, CliError> {
    let mut meta = base_meta(command_line);
    match *command {
        Command::BinarySweep { state: s, grid, batch } => {
            meta.param("grid", grid).param("priors", "uniform");
            let input = state(s)?;
            if batch {
                let two_j = input.two_j();
                let mut rows = Vec::new();
                for k in 0..=two_j {
                    let st = SpinState::new(two_j, 2 * k as i32 - two_j as i32)?;
                    let p = st.photons();
                    let sweep = binary_sweep(&st, grid)?;
                    rows.extend((0..sweep.thetas.len()).map(|i| BatchSweepRow {
                        n_a: p.n_a,
                        n_b: p.n_b,
                        theta_rad: sweep.thetas[i],
                        pe: sweep.pe[i],
                        mi: sweep.mi[i],
                    }));
                }
                render(format, Artifact { meta, rows }, None)
            } else {
                let sweep = binary_sweep(&input, grid)?;
                if let Some(t) = sweep.first_zero(DEFAULT_ZERO_TOL) {
                    meta.summary("first_zero_rad", t);
                }
                let rows = (0..sweep.thetas.len())
                    .map(|i| SweepRow { theta_rad: sweep.thetas[i], pe: sweep.pe[i], mi: sweep.mi[i] })
                    .collect();
                render(format, Artifact { meta, rows }, None)
            }
        }
        Command::SopFit { max_two_j, zero_tol } => {
            meta.param("max_two_j", max_two_j).param("zero_tol", zero_tol);
            let mut rows = Vec::new();
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for two_j in (2..=max_two_j).step_by(2) {
                let sop = smallest_optimum_phase(&SpinState::new(two_j, 0)?, zero_tol)?;
                rows.push(SopRow { two_j, m: 0.0, sop_rad: sop });
                xs.push(f64::from(two_j));
                ys.push(sop);
            }
            for two_j in 1..=max_two_j {
                let sop = smallest_optimum_phase(&SpinState::new(two_j, two_j as i32)?, zero_tol)?;
                rows.push(SopRow { two_j, m: f64::from(two_j) / 2.0, sop_rad: sop });
            }
            let fit = fit_sop_scaling(&xs, &ys)?;
            meta.summary("fit_amplitude", fit.amplitude)
                .summary("fit_amplitude_se", fit.amplitude_se)
                .summary("fit_exponent", fit.exponent)
                .summary("fit_exponent_se", fit.exponent_se);
            render(format, Artifact { meta, rows }, None)
        }
        Command::TernarySurface { state: s, grid, cap } => {
            meta.param("grid", grid).param("cap", cap).param("priors", "uniform");
            let surface = ternary_surface(&state(s)?, grid, cap)?;
            let rows = surface.points().map(|(theta1, theta2, pe)| SurfaceRow { theta1, theta2, pe }).collect();
            render(format, Artifact { meta, rows }, None)
        }
        Command::TernaryOptimize { state: s, search, ref phases } => {
            let input = state(s)?;
            let p = input.photons();
            let row = match phases {
                Some(PhaseList(v)) => {
                    meta.param("phases", v.clone());
                    let perf = discrimination::performance(
                        &input,
                        &discrimination::HypothesisSet::uniform(vec![0.0, v[0], v[1]])?,
                    )?;
                    OptimumRow {
                        n_a: p.n_a,
                        n_b: p.n_b,
                        theta1: v[0],
                        theta2: v[1],
                        pe: perf.error_probability,
                        mi: perf.mutual_information,
                        grid_theta1: None,
                        grid_theta2: None,
                        grid_pe: None,
                    }
                }
                None => {
                    let opts = ternary_options(&mut meta, search);
                    let o = ternary_optimize_with(&input, &opts)?;
                    OptimumRow {
                        n_a: p.n_a,
                        n_b: p.n_b,
                        theta1: o.theta1,
                        theta2: o.theta2,
                        pe: o.error_probability,
                        mi: o.mutual_information,
                        grid_theta1: Some(o.grid_theta1),
                        grid_theta2: Some(o.grid_theta2),
                        grid_pe: Some(o.grid_performance.error_probability),
                    }
                }
            };
            render(format, Artifact { meta, rows: vec![row] }, None)
        }
        Command::Table2 { search } => {
            let opts = ternary_options(&mut meta, search);
            meta.param("pe_rel_tol", PE_REL_TOL)
                .param("pe_abs_tol", PE_ABS_TOL)
                .param("mi_abs_tol", MI_ABS_TOL)
                .param("phase_abs_tol", PHASE_ABS_TOL);
            let mut rows = Vec::with_capacity(TERNARY_REFERENCE.len());
            for r in &TERNARY_REFERENCE {
                let st = SpinState::try_from(r.input)?;
                let o = ternary_optimize_with(&st, &opts)?;
                let check = r.check(o.theta1, o.theta2, o.error_probability, o.mutual_information);
                rows.push(Table2Row {
                    n_a: r.input.n_a,
                    n_b: r.input.n_b,
                    j: st.j(),
                    m: st.mu(),
                    theta1: o.theta1,
                    theta2: o.theta2,
                    pe: o.error_probability,
                    mi: o.mutual_information,
                    ref_theta1: r.theta1,
                    ref_theta2: r.theta2,
                    ref_pe: r.error_probability,
                    ref_mi: r.mutual_information,
                    deviation: check.deviations(),
                });
            }
            let flagged = rows.iter().filter(|r| r.deviation != "ok").count();
            meta.summary("rows_deviating", flagged);
            render(format, Artifact { meta, rows }, None)
        }
        Command::Reading { ref ns_grid, bpsk_sweep, max_two_j, na, nb, ref phases } => {
            if bpsk_sweep {
                meta.param("mode", "bpsk-sweep").param("max_two_j", max_two_j);
                let mut rows = Vec::new();
                let mut ok = true;
                for two_j in 1..=max_two_j {
                    for two_mu in ((two_j % 2) as i32..=two_j as i32).step_by(2) {
                        let st = SpinState::new(two_j, two_mu)?;
                        let r = bpsk_capacity(&st)?;
                        ok &= r.respects_holevo();
                        let p = st.photons();
                        rows.push(BpskSweepRow {
                            n_a: p.n_a,
                            n_b: p.n_b,
                            n_s: r.n_s,
                            theta: r.phases[1],
                            capacity: r.capacity,
                            pie: r.pie.unwrap_or(0.0),
                            pe: r.error_probability,
                        });
                    }
                }
                return render(format, Artifact { meta, rows }, holevo_failure(ok));
            }
            if let (Some(na), Some(nb)) = (na, nb) {
                meta.param("mode", "probe");
                let st = SpinState::from_photons(na, nb)?;
                let mut reports: Vec<(&str, ReadingReport)> = vec![("bpsk", bpsk_capacity(&st)?)];
                let t = tpsk_reports(&st, Execution::default())?;
                reports.push(("tpsk-max-information", t.max_information));
                reports.push(("tpsk-min-error", t.min_error));
                if let Some(PhaseList(v)) = phases {
                    meta.param("phases", v.clone());
                    reports.push(("tpsk-given", tpsk_report(&st, Some([0.0, v[0], v[1]]))?));
                }
                let violated = reports.iter().any(|(_, r)| !r.respects_holevo());
                let rows = reports
                    .into_iter()
                    .map(|(label, r)| ProbeRow {
                        n_a: na,
                        n_b: nb,
                        encoding: label.to_string(),
                        n_s: r.n_s,
                        theta1: r.phases[1],
                        theta2: r.phases.get(2).copied(),
                        capacity: r.capacity,
                        pie: r.pie,
                        pe: r.error_probability,
                        holevo: holevo_capacity(r.n_s),
                    })
                    .collect();
                return render(format, Artifact { meta, rows }, holevo_failure(!violated));
            }
            let grid = match ns_grid {
                Some(NsGrid(g)) => g.clone(),
                None => crate::args::parse_ns_grid(DEFAULT_NS_GRID).map_err(CliError::Usage)?.0,
            };
            meta.param("mode", "comparison")
                .param("ns_grid", grid.clone())
                .param("coherent_signal_photons", "|alpha|^2 = n_s")
                .param("fsi_signal_photons", "n_s = j at the nearest achievable j");
            let table = receiver_comparison(&grid)?;
            let ok = table.iter().all(|r| r.respects_holevo());
            let rows = table
                .into_iter()
                .map(|r| ComparisonRecord {
                    n_s: r.n_s,
                    receiver: r.receiver.label().to_string(),
                    capacity: r.capacity,
                    pie: r.pie,
                    probe_n_a: r.probe.map(|p| p.n_a),
                    probe_n_b: r.probe.map(|p| p.n_b),
                    j_used: r.j_used,
                    j_flagged: r.j_flagged,
                })
                .collect();
            render(format, Artifact { meta, rows }, holevo_failure(ok))
        }
        Command::OracleCheck { max_two_j, points } => {
            meta.param("max_two_j", max_two_j).param("points", points).param("oracle_tol", ORACLE_TOL);
            let mut rows = Vec::new();
            for n in 0..=max_two_j {
                for n_a in 0..=n {
                    let input = PhotonPair::new(n_a, n - n_a);
                    let st = SpinState::try_from(input)?;
                    let mut worst = 0.0f64;
                    for k in 0..points {
                        let theta = f64::from(k) * PI / 17.0;
                        let a = outcome_distribution(&st, theta)?;
                        let b = mzi_distribution(input, theta)?;
                        for (x, y) in a.probs().iter().zip(b.probs()) {
                            worst = worst.max((x - y).abs());
                        }
                    }
                    rows.push(OracleRow { n_a: input.n_a, n_b: input.n_b, max_abs_diff: worst, ok: worst <= ORACLE_TOL });
                }
            }
            let bad = rows.iter().filter(|r| !r.ok).count();
            let failure = (bad > 0).then(|| format!("{bad} inputs disagree with the Fock simulation"));
            render(format, Artifact { meta, rows }, failure)
        }
    }
}

fn ternary_options(meta: &mut Meta, search: TernaryArgs) -> TernaryOptions {
    let opts = TernaryOptions {
        resolution: search.grid,
        cap: search.cap,
        objective: search.objective.into(),
        ..TernaryOptions::default()
    };
    meta.param("grid", opts.resolution)
        .param("cap", opts.cap)
        .param("refine_tol", opts.refine_tol)
        .param("objective", serde_json::to_value(opts.objective).expect("objective serializes"))
        .param("priors", "uniform");
    opts
}

fn holevo_failure(ok: bool) -> Option<String> {
    (!ok).then(|| "a capacity exceeds the Holevo bound".to_string())
}
