//! The two-phase classifier: a fuzzy-weighted SVM followed by a
//! membership-probability rule over margin-interior points, with abstention
//! below the confidence threshold. Also houses the three comparison
//! baselines (plain SVM, weighted SVM, whole-set fuzzy).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::fuzzy::{
    self, default_sigma_floors, membership_probability, normalize_weights, ClassStats,
    ClassSummary,
};
use crate::svm::{self, SmoParams, SvmModel};

/// Version of the serialized model document.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// How phase one weights the training samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightMode {
    /// Gaussian fuzzy weights from whole-class statistics.
    Gaussian,
    /// All raw weights forced to one; collapses phase one to the classic SVM.
    Uniform,
}

/// Fit-time configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    /// Confidence threshold for probabilistic assignment, in (0.5, 1].
    pub threshold: f64,
    /// Slack-cost multiplier applied to Malignant samples after
    /// normalization, at least 1.
    pub malignant_cost_multiplier: f64,
    /// Global cost scale; the effective cost is `base_cost * W_n(x_i)`.
    pub base_cost: f64,
    pub weight_mode: WeightMode,
    pub solver: SmoParams,
}

impl Default for FitParams {
    fn default() -> Self {
        FitParams {
            threshold: 0.9,
            malignant_cost_multiplier: 1.0,
            base_cost: 1.0,
            weight_mode: WeightMode::Gaussian,
            solver: SmoParams::default(),
        }
    }
}

/// Classification outcome of one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Outcome {
    /// Outside the margin: assigned with probability one.
    Definite(Label),
    /// Inside the margin with winning probability at or above the threshold.
    Probabilistic { label: Label, probability: f64 },
    /// Inside the margin, neither class reaches the threshold.
    Undetermined { p_malignant: f64 },
}

impl Outcome {
    /// The class this outcome commits to, if it commits at all.
    pub fn label(&self) -> Option<Label> {
        match self {
            Outcome::Definite(l) => Some(*l),
            Outcome::Probabilistic { label, .. } => Some(*label),
            Outcome::Undetermined { .. } => None,
        }
    }
}

/// Full prediction record for one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub outcome: Outcome,
    pub decision_value: f64,
    pub in_margin: bool,
    /// Both memberships underflowed; the probability defaulted to 0.5.
    pub membership_underflow: bool,
}

/// The fitted two-phase classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PfsvmModel {
    svm: SvmModel,
    marginal_stats: ClassStats,
    fallback_stats: ClassStats,
    threshold: f64,
    malignant_cost_multiplier: f64,
    /// Classes whose marginal population was empty, per [Malignant, Benign];
    /// their phase-two statistics fell back to the whole-set stats.
    fallback_used: [bool; 2],
}

impl PfsvmModel {
    /// Fits both phases on `train`.
    ///
    /// Phase one computes normalized Gaussian weights, scales Malignant
    /// costs by the multiplier, and trains the weighted SVM. Phase two
    /// collects the training points strictly inside the margin and computes
    /// per-class Gaussian statistics from them, falling back to whole-set
    /// statistics for a class with no marginal points.
    pub fn fit(train: &Dataset, params: &FitParams) -> Result<PfsvmModel> {
        if !(params.threshold > 0.5 && params.threshold <= 1.0) {
            return Err(Error::Argument(format!(
                "threshold must be in (0.5, 1], got {}",
                params.threshold
            )));
        }
        if !(params.malignant_cost_multiplier >= 1.0) {
            return Err(Error::Argument(format!(
                "malignant cost multiplier must be >= 1, got {}",
                params.malignant_cost_multiplier
            )));
        }
        if !(params.base_cost > 0.0) {
            return Err(Error::Argument(format!(
                "base cost must be positive, got {}",
                params.base_cost
            )));
        }

        let floors = default_sigma_floors(train);
        let whole_stats = ClassStats::compute_with_floors(train, &floors)?;

        let raw = match params.weight_mode {
            WeightMode::Gaussian => fuzzy::sample_weights(train, &whole_stats)?,
            WeightMode::Uniform => vec![1.0; train.len()],
        };
        let weights = normalize_weights(&raw)?;
        let costs: Vec<f64> = weights
            .normalized
            .iter()
            .zip(train.instances())
            .map(|(w, inst)| {
                let mult = match inst.label {
                    Label::Malignant => params.malignant_cost_multiplier,
                    Label::Benign => 1.0,
                };
                // keep costs strictly positive even when a weight underflowed
                (params.base_cost * w * mult).max(f64::MIN_POSITIVE)
            })
            .collect();

        let svm = svm::train(train, &costs, &params.solver)?;

        let mut fallback_used = [false; 2];
        let mut summaries: Vec<ClassSummary> = Vec::with_capacity(2);
        for (slot, label) in Label::BOTH.into_iter().enumerate() {
            let marginal: Vec<&[f64]> = train
                .instances()
                .iter()
                .filter(|inst| inst.label == label)
                .map(|inst| inst.features.as_slice())
                .filter(|x| svm.decision_value(x).map(|f| f.abs() < 1.0).unwrap_or(false))
                .collect();
            match ClassSummary::compute(&marginal, &floors) {
                Some(s) => summaries.push(s),
                None => {
                    fallback_used[slot] = true;
                    summaries.push(whole_stats.summary(label).clone());
                }
            }
        }
        let benign = summaries.pop().expect("two summaries");
        let malignant = summaries.pop().expect("two summaries");
        let marginal_stats =
            ClassStats::from_summaries(malignant, benign, whole_stats.sigma_floor());

        Ok(PfsvmModel {
            svm,
            marginal_stats,
            fallback_stats: whole_stats,
            threshold: params.threshold,
            malignant_cost_multiplier: params.malignant_cost_multiplier,
            fallback_used,
        })
    }

    /// Classifies `x` with the model's own threshold.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction> {
        self.predict_with_threshold(x, self.threshold)
    }

    /// Classifies `x` with an explicit threshold; the assignment rule is
    /// inclusive (`p >= threshold` assigns).
    pub fn predict_with_threshold(&self, x: &[f64], threshold: f64) -> Result<Prediction> {
        if !(threshold > 0.5 && threshold <= 1.0) {
            return Err(Error::Argument(format!(
                "threshold must be in (0.5, 1], got {}",
                threshold
            )));
        }
        let f = self.svm.decision_value(x)?;
        let in_margin = f.abs() < 1.0;
        if !in_margin {
            return Ok(Prediction {
                outcome: Outcome::Definite(Label::from_sign(f)),
                decision_value: f,
                in_margin,
                membership_underflow: false,
            });
        }
        let log_m = self.marginal_stats.log_membership(x, Label::Malignant)?;
        let log_b = self.marginal_stats.log_membership(x, Label::Benign)?;
        let (p_m, p_b, underflow) = match membership_probability(log_m, log_b) {
            Ok((p_m, p_b)) => (p_m, p_b, false),
            Err(Error::DegenerateMemberships) => (0.5, 0.5, true),
            Err(e) => return Err(e),
        };
        let outcome = if !underflow && p_m >= threshold {
            Outcome::Probabilistic { label: Label::Malignant, probability: p_m }
        } else if !underflow && p_b >= threshold {
            Outcome::Probabilistic { label: Label::Benign, probability: p_b }
        } else {
            Outcome::Undetermined { p_malignant: p_m }
        };
        Ok(Prediction { outcome, decision_value: f, in_margin, membership_underflow: underflow })
    }

    /// Sign rule of the phase-one weighted SVM, ignoring phase two.
    pub fn predict_fsvm_baseline(&self, x: &[f64]) -> Result<Label> {
        self.svm.predict_sign(x)
    }

    pub fn svm(&self) -> &SvmModel {
        &self.svm
    }

    pub fn marginal_stats(&self) -> &ClassStats {
        &self.marginal_stats
    }

    /// Whole-training-set statistics; also the FUZZY baseline's statistics.
    pub fn fallback_stats(&self) -> &ClassStats {
        &self.fallback_stats
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn malignant_cost_multiplier(&self) -> f64 {
        self.malignant_cost_multiplier
    }

    /// Per [Malignant, Benign]: true when that class had no margin-interior
    /// training points and phase two uses the whole-set fallback.
    pub fn fallback_used(&self) -> [bool; 2] {
        self.fallback_used
    }

    /// Serializes the model to a versioned JSON document.
    pub fn to_json(&self) -> Result<String> {
        let doc = ModelDocument { version: MODEL_FORMAT_VERSION, model: self.clone() };
        serde_json::to_string_pretty(&doc).map_err(|e| Error::ModelFormat(e.to_string()))
    }

    /// Parses a versioned JSON document produced by [`PfsvmModel::to_json`].
    pub fn from_json(text: &str) -> Result<PfsvmModel> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::ModelFormat(format!(
                "unsupported model format version {} (expected {})",
                doc.version, MODEL_FORMAT_VERSION
            )));
        }
        Ok(doc.model)
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<PfsvmModel> {
        let text = fs::read_to_string(path)?;
        PfsvmModel::from_json(&text)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    version: u32,
    model: PfsvmModel,
}

/// Plain sign rule on an unweighted SVM.
pub fn predict_svm_baseline(model: &SvmModel, x: &[f64]) -> Result<Label> {
    model.predict_sign(x)
}

/// Argmax membership rule against precomputed class statistics. Ties break
/// toward Malignant.
pub fn fuzzy_classify(stats: &ClassStats, x: &[f64]) -> Result<Label> {
    let log_m = stats.log_membership(x, Label::Malignant)?;
    let log_b = stats.log_membership(x, Label::Benign)?;
    let (p_m, _) = membership_probability(log_m, log_b)?;
    Ok(if p_m >= 0.5 { Label::Malignant } else { Label::Benign })
}

/// The FUZZY baseline: membership probability computed from whole-training-
/// set statistics, argmax assignment, no abstention, no SVM.
pub fn predict_fuzzy_baseline(train: &Dataset, x: &[f64]) -> Result<Label> {
    let floors = default_sigma_floors(train);
    let stats = ClassStats::compute_with_floors(train, &floors)?;
    fuzzy_classify(&stats, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two tight, far-apart blobs: separable with a wide corridor.
    fn blob_dataset() -> Dataset {
        let mut rows = Vec::new();
        for i in 0..10 {
            let t = (i as f64) * 0.1;
            rows.push((vec![10.0 + t, 10.0 - t], 1.0));
            rows.push((vec![-10.0 - t, -10.0 + t], -1.0));
        }
        Dataset::from_rows(&rows).unwrap()
    }

    /// Overlapping classes along the first axis, so the margin is populated.
    fn overlapping_dataset() -> Dataset {
        let mut rows = Vec::new();
        for i in 0..20 {
            let t = i as f64 * 0.1;
            rows.push((vec![1.0 + t, 0.5 * t], 1.0));
            rows.push((vec![-1.0 - t, -0.5 * t], -1.0));
        }
        // a few strays inside the corridor
        rows.push((vec![0.3, 0.1], 1.0));
        rows.push((vec![0.1, -0.2], 1.0));
        rows.push((vec![-0.3, 0.2], -1.0));
        rows.push((vec![-0.1, 0.0], -1.0));
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn fit_validates_parameters() {
        let d = blob_dataset();
        let bad = FitParams { threshold: 0.5, ..FitParams::default() };
        assert!(PfsvmModel::fit(&d, &bad).is_err());
        let bad = FitParams { threshold: 1.2, ..FitParams::default() };
        assert!(PfsvmModel::fit(&d, &bad).is_err());
        let bad = FitParams { malignant_cost_multiplier: 0.5, ..FitParams::default() };
        assert!(PfsvmModel::fit(&d, &bad).is_err());
        let bad = FitParams { base_cost: 0.0, ..FitParams::default() };
        assert!(PfsvmModel::fit(&d, &bad).is_err());
    }

    #[test]
    fn uniform_weights_collapse_to_plain_svm() {
        let d = overlapping_dataset();
        let base_cost = 2.5;
        let params = FitParams {
            weight_mode: WeightMode::Uniform,
            base_cost,
            ..FitParams::default()
        };
        let fsvm = PfsvmModel::fit(&d, &params).unwrap();
        let plain = svm::train(&d, &vec![base_cost; d.len()], &params.solver).unwrap();
        for inst in d.instances() {
            let a = fsvm.svm().decision_value(&inst.features).unwrap();
            let b = plain.decision_value(&inst.features).unwrap();
            assert!(
                (a - b).abs() <= 1e-6 * b.abs().max(1.0),
                "decision values diverge: {} vs {}",
                a,
                b
            );
        }
    }

    #[test]
    fn separable_blobs_have_empty_margin_and_definite_predictions() {
        let d = blob_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        assert_eq!(model.fallback_used(), [true, true]);
        for inst in d.instances() {
            let p = model.predict(&inst.features).unwrap();
            assert!(!p.in_margin);
            match p.outcome {
                Outcome::Definite(l) => assert_eq!(l, inst.label),
                other => panic!("expected Definite, got {:?}", other),
            }
        }
    }

    #[test]
    fn definite_outside_margin_probabilistic_or_undetermined_inside() {
        let d = overlapping_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        for inst in d.instances() {
            let p = model.predict(&inst.features).unwrap();
            match p.outcome {
                Outcome::Definite(_) => assert!(!p.in_margin),
                Outcome::Probabilistic { probability, .. } => {
                    assert!(p.in_margin);
                    assert!(probability >= model.threshold());
                }
                Outcome::Undetermined { p_malignant } => {
                    assert!(p.in_margin);
                    assert!(p_malignant.max(1.0 - p_malignant) < model.threshold());
                }
            }
        }
    }

    #[test]
    fn monotone_abstention_under_rising_threshold() {
        let d = overlapping_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        let undetermined_at = |t: f64| -> Vec<usize> {
            d.instances()
                .iter()
                .enumerate()
                .filter(|(_, inst)| {
                    matches!(
                        model.predict_with_threshold(&inst.features, t).unwrap().outcome,
                        Outcome::Undetermined { .. }
                    )
                })
                .map(|(i, _)| i)
                .collect()
        };
        let u6 = undetermined_at(0.6);
        let u9 = undetermined_at(0.9);
        let u99 = undetermined_at(0.99);
        assert!(u6.iter().all(|i| u9.contains(i)));
        assert!(u9.iter().all(|i| u99.contains(i)));
    }

    #[test]
    fn fsvm_baseline_has_no_abstention() {
        let d = overlapping_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        for inst in d.instances() {
            let l = model.predict_fsvm_baseline(&inst.features).unwrap();
            let f = model.svm().decision_value(&inst.features).unwrap();
            assert_eq!(l, Label::from_sign(f));
        }
    }

    #[test]
    fn fuzzy_baseline_nearest_gaussian_wins() {
        let rows = vec![
            (vec![-1.0], 1.0),
            (vec![1.0], 1.0),
            (vec![3.0], -1.0),
            (vec![5.0], -1.0),
        ];
        let d = Dataset::from_rows(&rows).unwrap();
        // means 0 and 4, equal spreads: x = 1 is nearer the Malignant mean
        assert_eq!(predict_fuzzy_baseline(&d, &[1.0]).unwrap(), Label::Malignant);
        assert_eq!(predict_fuzzy_baseline(&d, &[3.0]).unwrap(), Label::Benign);
        // x at the whole-set Malignant mean
        assert_eq!(predict_fuzzy_baseline(&d, &[0.0]).unwrap(), Label::Malignant);
        // equidistant point: tie breaks toward Malignant
        assert_eq!(predict_fuzzy_baseline(&d, &[2.0]).unwrap(), Label::Malignant);
    }

    #[test]
    fn model_json_round_trip() {
        let d = overlapping_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        let json = model.to_json().unwrap();
        assert!(json.contains("\"version\": 1"));
        let back = PfsvmModel::from_json(&json).unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn model_json_rejects_wrong_version_and_garbage() {
        let d = blob_dataset();
        let model = PfsvmModel::fit(&d, &FitParams::default()).unwrap();
        let json = model.to_json().unwrap().replace("\"version\": 1", "\"version\": 99");
        assert!(matches!(PfsvmModel::from_json(&json), Err(Error::ModelFormat(_))));
        assert!(matches!(PfsvmModel::from_json("{}"), Err(Error::ModelFormat(_))));
    }
}
