//! Gaussian class statistics, per-sample fuzzy weights, and membership
//! probabilities.
//!
//! Products of per-feature Gaussians underflow quickly in double precision
//! (23 features a few sigma out already reach e^-100), so every product here
//! is carried as a sum of exponents and only exponentiated at the end.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};

/// Relative part of the default sigma floor: fraction of the per-feature
/// global standard deviation.
pub const SIGMA_FLOOR_REL: f64 = 1e-6;
/// Absolute lower bound of any sigma floor.
pub const SIGMA_FLOOR_ABS: f64 = 1e-12;

/// Per-feature mean and standard deviation of one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub count: usize,
}

impl ClassSummary {
    /// Sample mean and (n-1)-denominator standard deviation of `points`,
    /// with `std[j]` clamped below at `floors[j]`. A single point yields the
    /// floors themselves. Returns `None` when `points` is empty.
    pub fn compute(points: &[&[f64]], floors: &[f64]) -> Option<ClassSummary> {
        let n = points.len();
        if n == 0 {
            return None;
        }
        let dim = floors.len();
        let mut mean = vec![0.0; dim];
        for x in points {
            for (m, v) in mean.iter_mut().zip(*x) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut std = floors.to_vec();
        if n >= 2 {
            for (j, s) in std.iter_mut().enumerate() {
                let ss: f64 = points.iter().map(|x| (x[j] - mean[j]).powi(2)).sum();
                *s = (ss / (n - 1) as f64).sqrt().max(floors[j]);
            }
        }
        Some(ClassSummary { mean, std, count: n })
    }
}

/// Per-class, per-feature Gaussian statistics shared by the weight and
/// membership computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    malignant: ClassSummary,
    benign: ClassSummary,
    sigma_floor: f64,
}

impl ClassStats {
    /// Computes both class summaries with a uniform sigma floor.
    /// A class absent from `data` is an error naming that class.
    pub fn compute(data: &Dataset, sigma_floor: f64) -> Result<ClassStats> {
        if !(sigma_floor > 0.0) {
            return Err(Error::Argument(format!(
                "sigma floor must be positive, got {}",
                sigma_floor
            )));
        }
        let floors = vec![sigma_floor; data.dim()];
        Self::compute_with_floors(data, &floors)
    }

    /// Computes both class summaries with per-feature sigma floors.
    pub fn compute_with_floors(data: &Dataset, floors: &[f64]) -> Result<ClassStats> {
        if floors.len() != data.dim() {
            return Err(Error::Argument(format!(
                "{} sigma floors for {} features",
                floors.len(),
                data.dim()
            )));
        }
        if floors.iter().any(|&f| !(f > 0.0)) {
            return Err(Error::Argument("sigma floors must be positive".into()));
        }
        let mut summaries = Vec::with_capacity(2);
        for label in Label::BOTH {
            let points: Vec<&[f64]> = data
                .instances()
                .iter()
                .filter(|i| i.label == label)
                .map(|i| i.features.as_slice())
                .collect();
            let summary =
                ClassSummary::compute(&points, floors).ok_or(Error::MissingClass(label))?;
            summaries.push(summary);
        }
        let benign = summaries.pop().expect("two summaries");
        let malignant = summaries.pop().expect("two summaries");
        Ok(ClassStats::from_summaries(malignant, benign, min_floor(floors)))
    }

    /// Assembles stats from independently computed class summaries. Used by
    /// the pipeline when the two classes come from different populations
    /// (marginal points versus the whole-set fallback).
    pub fn from_summaries(malignant: ClassSummary, benign: ClassSummary, sigma_floor: f64) -> ClassStats {
        ClassStats { malignant, benign, sigma_floor }
    }

    pub fn summary(&self, label: Label) -> &ClassSummary {
        match label {
            Label::Malignant => &self.malignant,
            Label::Benign => &self.benign,
        }
    }

    pub fn dim(&self) -> usize {
        self.malignant.mean.len()
    }

    pub fn sigma_floor(&self) -> f64 {
        self.sigma_floor
    }

    /// Sum over features of -(x_j - mu_jk)^2 / (2 sigma_jk^2): the exponent
    /// of the Gaussian product for class `label`.
    pub fn log_membership(&self, x: &[f64], label: Label) -> Result<f64> {
        let s = self.summary(label);
        if x.len() != s.mean.len() {
            return Err(Error::Argument(format!(
                "point has {} features, stats have {}",
                x.len(),
                s.mean.len()
            )));
        }
        let mut exponent = 0.0;
        for ((v, m), sd) in x.iter().zip(&s.mean).zip(&s.std) {
            let d = v - m;
            exponent -= d * d / (2.0 * sd * sd);
        }
        Ok(exponent)
    }

    /// The Gaussian product itself; underflows to 0 for far points, never NaN.
    pub fn membership(&self, x: &[f64], label: Label) -> Result<f64> {
        Ok(self.log_membership(x, label)?.exp())
    }
}

fn min_floor(floors: &[f64]) -> f64 {
    floors.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Default per-feature sigma floors: a small fraction of each feature's
/// global standard deviation, never below the absolute floor.
pub fn default_sigma_floors(data: &Dataset) -> Vec<f64> {
    let n = data.len();
    (0..data.dim())
        .map(|j| {
            let col = data.feature_column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let gstd = if n >= 2 {
                (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            (SIGMA_FLOOR_REL * gstd).max(SIGMA_FLOOR_ABS)
        })
        .collect()
}

/// Gaussian weight of `x` against class `label`: the membership product
/// evaluated with whole-class statistics.
pub fn gaussian_weight(x: &[f64], stats: &ClassStats, label: Label) -> Result<f64> {
    stats.membership(x, label)
}

/// Log-space variant of [`gaussian_weight`].
pub fn log_gaussian_weight(x: &[f64], stats: &ClassStats, label: Label) -> Result<f64> {
    stats.log_membership(x, label)
}

/// Raw weight of every training instance against its own class.
pub fn sample_weights(data: &Dataset, stats: &ClassStats) -> Result<Vec<f64>> {
    data.instances()
        .iter()
        .map(|inst| gaussian_weight(&inst.features, stats, inst.label))
        .collect()
}

/// Raw and normalized per-sample weights. Normalization rescales the raw
/// weights so their total equals the sample count.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
}

/// Rescales `raw` so the weights sum to `N = raw.len()`.
pub fn normalize_weights(raw: &[f64]) -> Result<WeightVector> {
    if raw.is_empty() {
        return Err(Error::Argument("cannot normalize an empty weight vector".into()));
    }
    if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Argument("raw weights must be finite and non-negative".into()));
    }
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroWeightSum);
    }
    let n = raw.len() as f64;
    let normalized = raw.iter().map(|w| n * w / total).collect();
    Ok(WeightVector { raw: raw.to_vec(), normalized })
}

/// Relative closeness of a point to the two class centers, from the
/// log-memberships: `p1 = A1 / (A1 + A2)` and `p2 = 1 - p1`.
///
/// Computed from the log difference alone, so simultaneous underflow of the
/// two memberships cannot produce 0/0. The symmetric form below lands on the
/// exact boundary value for exact odds (9:1 maps to exactly 0.9).
pub fn membership_probability(log_a1: f64, log_a2: f64) -> Result<(f64, f64)> {
    if log_a1.is_nan() || log_a2.is_nan() || log_a1 > 0.0 || log_a2 > 0.0 {
        return Err(Error::Argument(format!(
            "log-memberships must be non-positive numbers, got ({}, {})",
            log_a1, log_a2
        )));
    }
    if log_a1 == f64::NEG_INFINITY && log_a2 == f64::NEG_INFINITY {
        return Err(Error::DegenerateMemberships);
    }
    let z = (log_a1 - log_a2) / 2.0;
    let p1 = 0.5 * (1.0 + z.tanh());
    Ok((p1, 1.0 - p1))
}
