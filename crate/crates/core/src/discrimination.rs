//! Maximum-likelihood discrimination between M candidate phases from a single
//! photon-number-difference measurement.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{FsiError, Result};
use crate::special::xlog2x;
use crate::spin::{outcome_distribution, SpinState};

const PRIOR_SUM_TOL: f64 = 1e-12;
const DUPLICATE_TOL: f64 = 1e-12;

/// M candidate phases with their prior probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSet {
    phases: Vec<f64>,
    priors: Vec<f64>,
}

impl HypothesisSet {
    pub fn new(phases: Vec<f64>, priors: Vec<f64>) -> Result<Self> {
        if phases.len() < 2 {
            return Err(FsiError::TooFewHypotheses(phases.len()));
        }
        if priors.len() != phases.len() {
            return Err(FsiError::InvalidPriors(format!(
                "{} priors for {} phases",
                priors.len(),
                phases.len()
            )));
        }
        if let Some(&t) = phases.iter().find(|t| !t.is_finite()) {
            return Err(FsiError::NonFinitePhase(t));
        }
        if priors.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(FsiError::InvalidPriors("entries must lie in [0, 1]".into()));
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_SUM_TOL {
            return Err(FsiError::InvalidPriors(format!("priors sum to {total}")));
        }
        for (i, &a) in phases.iter().enumerate() {
            for &b in &phases[i + 1..] {
                let gap = (a - b).rem_euclid(TAU);
                if gap < DUPLICATE_TOL || TAU - gap < DUPLICATE_TOL {
                    return Err(FsiError::DuplicatePhase { first: a, second: b });
                }
            }
        }
        Ok(HypothesisSet { phases, priors })
    }

    /// Equiprobable hypotheses.
    pub fn uniform(phases: Vec<f64>) -> Result<Self> {
        let m = phases.len().max(1);
        HypothesisSet::new(phases, vec![1.0 / m as f64; m])
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Row i holds P(mu' | theta_i) over the 2j+1 outcomes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodTable {
    rows: Vec<Vec<f64>>,
}

impl LikelihoodTable {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        LikelihoodTable { rows }
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn hypotheses(&self) -> usize {
        self.rows.len()
    }

    pub fn outcomes(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }
}

pub fn likelihood_table(state: &SpinState, hyp: &HypothesisSet) -> Result<LikelihoodTable> {
    let rows = hyp
        .phases()
        .iter()
        .map(|&t| outcome_distribution(state, t).map(|d| d.into_probs()))
        .collect::<Result<_>>()?;
    Ok(LikelihoodTable { rows })
}

/// Outcome index -> decided hypothesis index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionRule {
    decide: Vec<usize>,
}

impl DecisionRule {
    pub fn decide(&self, outcome: usize) -> usize {
        self.decide[outcome]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.decide
    }
}

/// Index of the largest weighted likelihood; ties go to the lowest index.
fn argmax_weighted(columns: impl Iterator<Item = (f64, f64)>) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, (prior, p)) in columns.enumerate() {
        let v = prior * p;
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    best
}

/// Maximum a posteriori rule (maximum likelihood for uniform priors).
pub fn ml_rule(table: &LikelihoodTable, priors: &[f64]) -> DecisionRule {
    let decide = (0..table.outcomes())
        .map(|k| argmax_weighted(priors.iter().zip(&table.rows).map(|(&w, row)| (w, row[k]))))
        .collect();
    DecisionRule { decide }
}

/// Entry (i, k) is P(decide theta_k | true theta_i).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl ConfusionMatrix {
    /// Builds a matrix from rows; each row must be a probability vector.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(FsiError::InvalidPriors("confusion matrix must be square".into()));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-12 || row.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(FsiError::InvalidPriors("confusion rows must be stochastic".into()));
            }
            entries.extend_from_slice(row);
        }
        Ok(ConfusionMatrix { size, entries })
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        ConfusionMatrix { size, entries }
    }

    pub fn from_rule(table: &LikelihoodTable, rule: &DecisionRule) -> Self {
        let size = table.hypotheses();
        let mut entries = vec![0.0; size * size];
        for (i, row) in table.rows.iter().enumerate() {
            for (k, &p) in row.iter().enumerate() {
                entries[i * size + rule.decide(k)] += p;
            }
        }
        for e in &mut entries {
            *e = e.min(1.0);
        }
        ConfusionMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, truth: usize, decided: usize) -> f64 {
        self.entries[truth * self.size + decided]
    }

    pub fn row(&self, truth: usize) -> &[f64] {
        &self.entries[truth * self.size..(truth + 1) * self.size]
    }

    /// Marginal P(decide theta_k) under the given priors.
    pub fn decision_marginal(&self, priors: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|k| (0..self.size).map(|i| priors[i] * self.get(i, k)).sum())
            .collect()
    }
}

pub fn confusion_matrix(state: &SpinState, hyp: &HypothesisSet) -> Result<ConfusionMatrix> {
    let table = likelihood_table(state, hyp)?;
    let rule = ml_rule(&table, hyp.priors());
    Ok(ConfusionMatrix::from_rule(&table, &rule))
}

/// Average error probability sum_i p_i (1 - P(decide i | i)).
pub fn error_probability(cm: &ConfusionMatrix, priors: &[f64]) -> f64 {
    priors
        .iter()
        .enumerate()
        .map(|(i, p)| p * (1.0 - cm.get(i, i)))
        .sum::<f64>()
        .max(0.0)
}

/// Shannon entropy in bits, 0 log 0 = 0.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    -p.iter().copied().map(xlog2x).sum::<f64>()
}

/// I(theta; theta_hat) = sum_{i,k} p_i P(k|i) log2[P(k|i) / P(k)].
pub fn mutual_information(cm: &ConfusionMatrix, priors: &[f64]) -> f64 {
    let marginal = cm.decision_marginal(priors);
    let mut total = 0.0;
    for (i, &p) in priors.iter().enumerate() {
        for (k, &q) in marginal.iter().enumerate() {
            let c = cm.get(i, k);
            if p > 0.0 && c > 0.0 {
                total += p * c * (c / q).log2();
            }
        }
    }
    total.max(0.0)
}

/// H(theta | theta_hat) via Bayes inversion of the confusion matrix.
pub fn conditional_entropy(cm: &ConfusionMatrix, priors: &[f64]) -> f64 {
    let marginal = cm.decision_marginal(priors);
    let mut total = 0.0;
    for (k, &q) in marginal.iter().enumerate() {
        if q <= 0.0 {
            continue;
        }
        let h: f64 = priors
            .iter()
            .enumerate()
            .map(|(i, &p)| xlog2x(p * cm.get(i, k) / q))
            .sum();
        total -= q * h;
    }
    total.max(0.0)
}

/// Error probability and mutual information for one hypothesis set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Performance {
    pub error_probability: f64,
    pub mutual_information: f64,
}

/// Performance of ML decoding for likelihood rows given as slices; avoids
/// allocating a table in search loops.
pub(crate) fn performance_of_rows(rows: &[&[f64]], priors: &[f64]) -> Performance {
    let m = rows.len();
    let mut entries = vec![0.0; m * m];
    let outcomes = rows[0].len();
    for k in 0..outcomes {
        let d = argmax_weighted(priors.iter().zip(rows).map(|(&w, r)| (w, r[k])));
        for (i, r) in rows.iter().enumerate() {
            entries[i * m + d] += r[k];
        }
    }
    let cm = ConfusionMatrix { size: m, entries };
    Performance {
        error_probability: error_probability(&cm, priors),
        mutual_information: mutual_information(&cm, priors),
    }
}

/// Error probability only: 1 - sum_k max_i p_i P(k|i).
pub(crate) fn error_of_rows(rows: &[&[f64]], priors: &[f64]) -> f64 {
    let outcomes = rows[0].len();
    let mut success = 0.0;
    for k in 0..outcomes {
        let mut best = f64::NEG_INFINITY;
        for (w, r) in priors.iter().zip(rows) {
            best = best.max(w * r[k]);
        }
        success += best;
    }
    (1.0 - success).max(0.0)
}

pub fn performance(state: &SpinState, hyp: &HypothesisSet) -> Result<Performance> {
    let cm = confusion_matrix(state, hyp)?;
    Ok(Performance {
        error_probability: error_probability(&cm, hyp.priors()),
        mutual_information: mutual_information(&cm, hyp.priors()),
    })
}
