//! Row schemas of the artifacts each command writes.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_rad: f64,
    pub pe: f64,
    pub mi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSweepRow {
    pub n_a: u32,
    pub n_b: u32,
    pub theta_rad: f64,
    pub pe: f64,
    pub mi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SopRow {
    pub two_j: u32,
    pub m: f64,
    pub sop_rad: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub theta1: f64,
    pub theta2: f64,
    pub pe: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimumRow {
    pub n_a: u32,
    pub n_b: u32,
    pub theta1: f64,
    pub theta2: f64,
    pub pe: f64,
    pub mi: f64,
    /// Starting grid point; absent when a placement was evaluated directly.
    pub grid_theta1: Option<f64>,
    pub grid_theta2: Option<f64>,
    pub grid_pe: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub n_a: u32,
    pub n_b: u32,
    pub j: f64,
    pub m: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub pe: f64,
    pub mi: f64,
    pub ref_theta1: f64,
    pub ref_theta2: f64,
    pub ref_pe: f64,
    pub ref_mi: f64,
    /// `ok`, or the quantities outside the reference bands (`pe`, `mi`, `phases`).
    pub deviation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub n_s: f64,
    pub receiver: String,
    pub capacity: f64,
    pub pie: f64,
    pub probe_n_a: Option<u32>,
    pub probe_n_b: Option<u32>,
    pub j_used: Option<f64>,
    pub j_flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BpskSweepRow {
    pub n_a: u32,
    pub n_b: u32,
    pub n_s: f64,
    pub theta: f64,
    pub capacity: f64,
    pub pie: f64,
    pub pe: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n_a: u32,
    pub n_b: u32,
    pub encoding: String,
    pub n_s: f64,
    pub theta1: f64,
    pub theta2: Option<f64>,
    pub capacity: f64,
    pub pie: Option<f64>,
    pub pe: f64,
    pub holevo: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub n_a: u32,
    pub n_b: u32,
    pub max_abs_diff: f64,
    pub ok: bool,
}
