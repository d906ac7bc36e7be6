//! WDBC ingestion, correlation-based feature pruning, and deterministic k-fold splits.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Binary diagnosis label. Malignant maps to +1, Benign to -1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Malignant,
    Benign,
}

impl Label {
    /// Signed representation used by the SVM: +1 for Malignant, -1 for Benign.
    pub fn sign(self) -> f64 {
        match self {
            Label::Malignant => 1.0,
            Label::Benign => -1.0,
        }
    }

    /// Maps a decision value to a label. Exact zero maps to Malignant,
    /// the documented tie rule.
    pub fn from_sign(value: f64) -> Label {
        if value >= 0.0 {
            Label::Malignant
        } else {
            Label::Benign
        }
    }

    pub fn letter(self) -> char {
        match self {
            Label::Malignant => 'M',
            Label::Benign => 'B',
        }
    }

    pub const BOTH: [Label; 2] = [Label::Malignant, Label::Benign];
}

/// One labeled observation.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub features: Vec<f64>,
    pub label: Label,
}

/// A labeled feature matrix with provenance of the selected feature columns.
///
/// Invariants enforced at construction: every feature vector has the same
/// length `p >= 1`, no value is NaN or infinite, and the instance list is
/// non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    instances: Vec<Instance>,
    feature_names: Vec<String>,
    selected_feature_indices: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset, validating the type invariants. The selected-feature
    /// provenance is the identity over `feature_names`.
    pub fn new(instances: Vec<Instance>, feature_names: Vec<String>) -> Result<Dataset> {
        let selected = (0..feature_names.len()).collect();
        Dataset::with_selection(instances, feature_names, selected)
    }

    fn with_selection(
        instances: Vec<Instance>,
        feature_names: Vec<String>,
        selected_feature_indices: Vec<usize>,
    ) -> Result<Dataset> {
        if instances.is_empty() {
            return Err(Error::Argument("dataset must contain at least one instance".into()));
        }
        let dim = instances[0].features.len();
        if dim == 0 {
            return Err(Error::Argument("instances must have at least one feature".into()));
        }
        if feature_names.len() != dim {
            return Err(Error::Argument(format!(
                "{} feature names for {} features",
                feature_names.len(),
                dim
            )));
        }
        if selected_feature_indices.len() != dim {
            return Err(Error::Argument(format!(
                "{} selected indices for {} features",
                selected_feature_indices.len(),
                dim
            )));
        }
        for (i, inst) in instances.iter().enumerate() {
            if inst.features.len() != dim {
                return Err(Error::Argument(format!(
                    "instance {} has {} features, expected {}",
                    i,
                    inst.features.len(),
                    dim
                )));
            }
            if inst.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::Argument(format!(
                    "instance {} contains a non-finite feature value",
                    i
                )));
            }
        }
        Ok(Dataset { instances, feature_names, selected_feature_indices })
    }

    /// Convenience constructor for numeric fixtures: labels by sign of `y`.
    pub fn from_rows(rows: &[(Vec<f64>, f64)]) -> Result<Dataset> {
        let dim = rows.first().map_or(0, |(x, _)| x.len());
        let names = (0..dim).map(|j| format!("f{}", j + 1)).collect();
        let instances = rows
            .iter()
            .map(|(x, y)| Instance { features: x.clone(), label: Label::from_sign(*y) })
            .collect();
        Dataset::new(instances, names)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Feature dimension `p`.
    pub fn dim(&self) -> usize {
        self.instances[0].features.len()
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.instances[i].features
    }

    pub fn label(&self, i: usize) -> Label {
        self.instances[i].label
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Indices of the current feature columns in the original file.
    pub fn selected_feature_indices(&self) -> &[usize] {
        &self.selected_feature_indices
    }

    /// Number of instances carrying `label`.
    pub fn class_count(&self, label: Label) -> usize {
        self.instances.iter().filter(|i| i.label == label).count()
    }

    /// Column `j` as a vector, in instance order.
    pub fn feature_column(&self, j: usize) -> Vec<f64> {
        self.instances.iter().map(|i| i.features[j]).collect()
    }

    /// New dataset holding the instances at `indices`, preserving feature
    /// provenance. Order follows `indices`.
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let instances = indices.iter().map(|&i| self.instances[i].clone()).collect();
        Dataset::with_selection(
            instances,
            self.feature_names.clone(),
            self.selected_feature_indices.clone(),
        )
    }

    /// Writes the debugging CSV form: header, then one row per instance with
    /// the label letter first and the selected features after it.
    pub fn write_canonical_csv<W: Write>(&self, mut out: W) -> Result<()> {
        write!(out, "label")?;
        for name in &self.feature_names {
            write!(out, ",{}", name)?;
        }
        writeln!(out)?;
        for inst in &self.instances {
            write!(out, "{}", inst.label.letter())?;
            for v in &inst.features {
                write!(out, ",{}", v)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Loads the WDBC file: `id, diagnosis, f1..fp` per row, diagnosis `M` or `B`.
///
/// A single leading header row is skipped when its first field is not numeric.
/// The id column is dropped. Row numbers in errors are 1-based file lines.
pub fn load_wdbc<P: AsRef<Path>>(path: P) -> Result<Dataset> {
    let file = File::open(path.as_ref()).map_err(|e| {
        Error::Ingestion {
            row: 0,
            reason: format!("cannot open {}: {}", path.as_ref().display(), e),
        }
    })?;
    let reader = BufReader::new(file);

    let mut instances = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let row = idx + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if row == 1 && instances.is_empty() && fields[0].parse::<f64>().is_err() {
            // optional header row
            continue;
        }
        if fields.len() < 3 {
            return Err(Error::Ingestion {
                row,
                reason: format!("expected `id, diagnosis, features...`, got {} fields", fields.len()),
            });
        }
        fields[0].parse::<f64>().map_err(|_| Error::Ingestion {
            row,
            reason: format!("unparseable id `{}`", fields[0]),
        })?;
        let label = match fields[1] {
            "M" => Label::Malignant,
            "B" => Label::Benign,
            other => {
                return Err(Error::Ingestion {
                    row,
                    reason: format!("unknown diagnosis `{}` (expected M or B)", other),
                })
            }
        };
        let expected = *dim.get_or_insert(fields.len() - 2);
        if fields.len() - 2 != expected {
            return Err(Error::Ingestion {
                row,
                reason: format!("expected {} feature values, got {}", expected, fields.len() - 2),
            });
        }
        let mut features = Vec::with_capacity(expected);
        for f in &fields[2..] {
            let v: f64 = f.parse().map_err(|_| Error::Ingestion {
                row,
                reason: format!("unparseable number `{}`", f),
            })?;
            if !v.is_finite() {
                return Err(Error::Ingestion {
                    row,
                    reason: format!("non-finite feature value `{}`", f),
                });
            }
            features.push(v);
        }
        instances.push(Instance { features, label });
    }

    if instances.is_empty() {
        return Err(Error::EmptyFile);
    }
    let p = instances[0].features.len();
    let names = (0..p).map(|j| format!("f{}", j + 1)).collect();
    Dataset::new(instances, names)
}

/// Pearson correlation of two columns. Zero-variance columns correlate
/// perfectly with each other (both constant) and not at all with anything
/// that varies.
fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den_a = 0.0;
    let mut den_b = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        num += dx * dy;
        den_a += dx * dx;
        den_b += dy * dy;
    }
    match (den_a == 0.0, den_b == 0.0) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        (false, false) => num / (den_a * den_b).sqrt(),
    }
}

/// Greedy correlation pruning: features are scanned in column order and a
/// feature is dropped when its absolute Pearson correlation with any
/// already-kept feature exceeds `threshold`. Earlier columns win ties.
pub fn prune_correlated(data: &Dataset, threshold: f64) -> Result<Dataset> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::Argument(format!(
            "correlation threshold must be in (0, 1], got {}",
            threshold
        )));
    }
    let p = data.dim();
    let columns: Vec<Vec<f64>> = (0..p).map(|j| data.feature_column(j)).collect();

    let mut kept: Vec<usize> = Vec::new();
    for j in 0..p {
        let correlated = kept
            .iter()
            .any(|&k| pearson(&columns[j], &columns[k]).abs() > threshold);
        if !correlated {
            kept.push(j);
        }
    }

    let instances = data
        .instances
        .iter()
        .map(|inst| Instance {
            features: kept.iter().map(|&j| inst.features[j]).collect(),
            label: inst.label,
        })
        .collect();
    let names = kept.iter().map(|&j| data.feature_names[j].clone()).collect();
    let selection = kept.iter().map(|&j| data.selected_feature_indices[j]).collect();
    Dataset::with_selection(instances, names, selection)
}

/// A reproducible assignment of instances to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    /// Fold index in `0..k` for each instance.
    pub fold_assignment: Vec<usize>,
}

impl FoldPlan {
    /// Instance counts per fold; sizes differ by at most one.
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &f in &self.fold_assignment {
            sizes[f] += 1;
        }
        sizes
    }

    /// Indices held out by `fold` and the complementary training indices,
    /// both in instance order.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.fold_assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }
}

/// Deals a seeded pseudorandom permutation of the instances round-robin into
/// `k` folds. No stratification is applied.
pub fn make_folds(data: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    let n = data.len();
    if k < 2 || k > n {
        return Err(Error::Argument(format!(
            "fold count must satisfy 2 <= k <= {}, got {}",
            n, k
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut fold_assignment = vec![0usize; n];
    for (pos, &inst) in order.iter().enumerate() {
        fold_assignment[inst] = pos % k;
    }
    Ok(FoldPlan { k, seed, fold_assignment })
}
