//! Seeded k-fold benchmark over the four methods, report rendering, and
//! margin-plot data export.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{make_folds, Dataset, Label};
use crate::error::{Error, Result};
use crate::pfsvm::{fuzzy_classify, FitParams, Outcome, PfsvmModel, WeightMode};
use crate::svm::{self, SmoParams, SvmModel};

/// Configuration echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub k: usize,
    pub seed: u64,
    pub threshold: f64,
    pub malignant_cost_multiplier: f64,
    pub base_cost: f64,
}

/// Per-fold counts and geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldRow {
    pub fold: usize,
    pub svm_err: usize,
    pub fsvm_err: usize,
    pub fuzzy_err: usize,
    pub pfsvm_definite_err: usize,
    pub pfsvm_probabilistic_err: usize,
    pub pfsvm_undetermined: usize,
    pub test_size: usize,
    pub margin_width_svm: f64,
    pub margin_width_fsvm: f64,
    /// Fraction of this fold's FSVM errors lying strictly inside the margin;
    /// absent when the fold has no FSVM errors.
    pub errors_in_margin_fraction: Option<f64>,
    /// Set when training failed on this fold; counts are then zero and the
    /// fold is excluded from aggregates.
    pub failure: Option<String>,
}

/// Percentages over all successfully evaluated test instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub svm_err_pct: f64,
    pub fsvm_err_pct: f64,
    pub fuzzy_err_pct: f64,
    /// Definite plus probabilistic errors.
    pub pfsvm_err_pct: f64,
    pub pfsvm_undetermined_pct: f64,
    pub total_test: usize,
}

/// Full cross-validation report in the layout of the reference tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub per_fold: Vec<FoldRow>,
    pub aggregate: Aggregate,
}

impl RunReport {
    /// Recomputes the aggregate from the per-fold rows.
    pub fn recompute_aggregate(&self) -> Aggregate {
        aggregate_rows(&self.per_fold)
    }
}

fn aggregate_rows(rows: &[FoldRow]) -> Aggregate {
    let ok = rows.iter().filter(|r| r.failure.is_none());
    let mut total = 0usize;
    let (mut svm, mut fsvm, mut fuzzy, mut pfsvm, mut undet) = (0, 0, 0, 0, 0);
    for r in ok {
        total += r.test_size;
        svm += r.svm_err;
        fsvm += r.fsvm_err;
        fuzzy += r.fuzzy_err;
        pfsvm += r.pfsvm_definite_err + r.pfsvm_probabilistic_err;
        undet += r.pfsvm_undetermined;
    }
    let pct = |c: usize| 100.0 * c as f64 / total as f64;
    Aggregate {
        svm_err_pct: pct(svm),
        fsvm_err_pct: pct(fsvm),
        fuzzy_err_pct: pct(fuzzy),
        pfsvm_err_pct: pct(pfsvm),
        pfsvm_undetermined_pct: pct(undet),
        total_test: total,
    }
}

/// Runs the full k-fold comparison: plain SVM, weighted SVM (FSVM sign
/// rule), whole-set fuzzy baseline, and the two-phase classifier, all
/// trained per fold on the training portion and counted on the held-out
/// portion. A fold whose training fails is marked and skipped in aggregates.
pub fn run_experiment(
    data: &Dataset,
    k: usize,
    seed: u64,
    threshold: f64,
    malignant_cost_multiplier: f64,
    base_cost: f64,
) -> Result<RunReport> {
    let config = RunConfig { k, seed, threshold, malignant_cost_multiplier, base_cost };
    let plan = make_folds(data, k, seed)?;

    let mut per_fold = Vec::with_capacity(k);
    for fold in 0..k {
        let (train_idx, test_idx) = plan.split(fold);
        let row = match evaluate_fold(data, fold, &train_idx, &test_idx, &config) {
            Ok(row) => row,
            Err(e) => FoldRow {
                fold,
                svm_err: 0,
                fsvm_err: 0,
                fuzzy_err: 0,
                pfsvm_definite_err: 0,
                pfsvm_probabilistic_err: 0,
                pfsvm_undetermined: 0,
                test_size: test_idx.len(),
                margin_width_svm: 0.0,
                margin_width_fsvm: 0.0,
                errors_in_margin_fraction: None,
                failure: Some(e.to_string()),
            },
        };
        per_fold.push(row);
    }

    if per_fold.iter().all(|r| r.failure.is_some()) {
        return Err(Error::AllFoldsFailed);
    }
    let aggregate = aggregate_rows(&per_fold);
    Ok(RunReport { config, per_fold, aggregate })
}

fn evaluate_fold(
    data: &Dataset,
    fold: usize,
    train_idx: &[usize],
    test_idx: &[usize],
    config: &RunConfig,
) -> Result<FoldRow> {
    let train = data.subset(train_idx)?;
    let test = data.subset(test_idx)?;
    let solver = SmoParams::default();

    let plain = svm::train(&train, &vec![config.base_cost; train.len()], &solver)?;
    let fit = FitParams {
        threshold: config.threshold,
        malignant_cost_multiplier: config.malignant_cost_multiplier,
        base_cost: config.base_cost,
        weight_mode: WeightMode::Gaussian,
        solver,
    };
    let pfsvm = PfsvmModel::fit(&train, &fit)?;

    let (mut svm_err, mut fsvm_err, mut fuzzy_err) = (0, 0, 0);
    let (mut def_err, mut prob_err, mut undet) = (0, 0, 0);
    for inst in test.instances() {
        if plain.predict_sign(&inst.features)? != inst.label {
            svm_err += 1;
        }
        if pfsvm.predict_fsvm_baseline(&inst.features)? != inst.label {
            fsvm_err += 1;
        }
        if fuzzy_classify(pfsvm.fallback_stats(), &inst.features)? != inst.label {
            fuzzy_err += 1;
        }
        let p = pfsvm.predict(&inst.features)?;
        match p.outcome {
            Outcome::Definite(l) => {
                if l != inst.label {
                    def_err += 1;
                }
            }
            Outcome::Probabilistic { label, .. } => {
                if label != inst.label {
                    prob_err += 1;
                }
            }
            Outcome::Undetermined { .. } => undet += 1,
        }
    }

    let (inside, outside) = errors_in_margin(&pfsvm, &test)?;
    let errors_in_margin_fraction = if inside + outside > 0 {
        Some(inside as f64 / (inside + outside) as f64)
    } else {
        None
    };

    Ok(FoldRow {
        fold,
        svm_err,
        fsvm_err,
        fuzzy_err,
        pfsvm_definite_err: def_err,
        pfsvm_probabilistic_err: prob_err,
        pfsvm_undetermined: undet,
        test_size: test.len(),
        margin_width_svm: plain.margin_width(),
        margin_width_fsvm: pfsvm.svm().margin_width(),
        errors_in_margin_fraction,
        failure: None,
    })
}

/// Among the test points misclassified by the FSVM sign rule, counts those
/// strictly inside the margin versus on or outside it.
pub fn errors_in_margin(model: &PfsvmModel, test: &Dataset) -> Result<(usize, usize)> {
    let mut inside = 0;
    let mut outside = 0;
    for inst in test.instances() {
        let f = model.svm().decision_value(&inst.features)?;
        if Label::from_sign(f) != inst.label {
            if f.abs() < 1.0 {
                inside += 1;
            } else {
                outside += 1;
            }
        }
    }
    Ok((inside, outside))
}

/// Writes per-point decision values under both models plus the two margin
/// widths: a 1-D projection onto each hyperplane normal, enough to
/// regenerate the margin-comparison and error-location views.
pub fn export_margin_plot<P: AsRef<Path>>(
    model_svm: &SvmModel,
    model_fsvm: &SvmModel,
    data: &Dataset,
    path: P,
) -> Result<()> {
    if model_svm.dim() != data.dim() || model_fsvm.dim() != data.dim() {
        return Err(Error::Argument(
            "models and data must share the same feature dimension".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(
        "decision_value_svm,decision_value_fsvm,label,in_margin_svm,in_margin_fsvm,\
         margin_width_svm,margin_width_fsvm\n",
    );
    for inst in data.instances() {
        let f_svm = model_svm.decision_value(&inst.features)?;
        let f_fsvm = model_fsvm.decision_value(&inst.features)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            f_svm,
            f_fsvm,
            inst.label.sign() as i32,
            (f_svm.abs() < 1.0) as u8,
            (f_fsvm.abs() < 1.0) as u8,
            model_svm.margin_width(),
            model_fsvm.margin_width(),
        )
        .expect("writing to a String cannot fail");
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Renders the report as an aligned text table in the reference layout:
/// one column per run plus the aggregate percentage column. The PFSVM error
/// cell shows `definite+probabilistic` when probabilistic errors occurred.
pub fn render_text(report: &RunReport) -> String {
    let k = report.per_fold.len();
    let mut cells: Vec<(String, Vec<String>, String)> = Vec::new();

    let fold_cell = |row: &FoldRow, value: String| -> String {
        if row.failure.is_some() {
            "x".to_string()
        } else {
            value
        }
    };
    let agg = &report.aggregate;
    cells.push((
        "SVM_err".into(),
        report.per_fold.iter().map(|r| fold_cell(r, r.svm_err.to_string())).collect(),
        format!("{:.2}", agg.svm_err_pct),
    ));
    cells.push((
        "FSVM_err".into(),
        report.per_fold.iter().map(|r| fold_cell(r, r.fsvm_err.to_string())).collect(),
        format!("{:.2}", agg.fsvm_err_pct),
    ));
    cells.push((
        "FUZZY_err".into(),
        report.per_fold.iter().map(|r| fold_cell(r, r.fuzzy_err.to_string())).collect(),
        format!("{:.2}", agg.fuzzy_err_pct),
    ));
    cells.push((
        "PFSVM_err".into(),
        report
            .per_fold
            .iter()
            .map(|r| {
                let text = if r.pfsvm_probabilistic_err > 0 {
                    format!("{}+{}", r.pfsvm_definite_err, r.pfsvm_probabilistic_err)
                } else {
                    r.pfsvm_definite_err.to_string()
                };
                fold_cell(r, text)
            })
            .collect(),
        format!("{:.2}", agg.pfsvm_err_pct),
    ));
    cells.push((
        "PFSVM_undet".into(),
        report
            .per_fold
            .iter()
            .map(|r| fold_cell(r, r.pfsvm_undetermined.to_string()))
            .collect(),
        format!("{:.2}", agg.pfsvm_undetermined_pct),
    ));

    let name_w = cells.iter().map(|(n, _, _)| n.len()).max().unwrap_or(0).max(14);
    let col_w = cells
        .iter()
        .flat_map(|(_, cols, _)| cols.iter().map(|c| c.len()))
        .max()
        .unwrap_or(1)
        .max(4);
    let avg_w = "percent_ave".len();

    let mut out = String::new();
    writeln!(
        out,
        "k = {}, seed = {}, threshold = {}, multiplier = {}, base cost = {}",
        report.config.k,
        report.config.seed,
        report.config.threshold,
        report.config.malignant_cost_multiplier,
        report.config.base_cost
    )
    .unwrap();
    write!(out, "{:<name_w$}", "Method \\ Run #").unwrap();
    for i in 1..=k {
        write!(out, " {:>col_w$}", i).unwrap();
    }
    writeln!(out, " {:>avg_w$}", "percent_ave").unwrap();
    for (name, cols, avg) in &cells {
        write!(out, "{:<name_w$}", name).unwrap();
        for c in cols {
            write!(out, " {:>col_w$}", c).unwrap();
        }
        writeln!(out, " {:>avg_w$}", avg).unwrap();
    }

    writeln!(out).unwrap();
    writeln!(
        out,
        "{:<6} {:>9} {:>16} {:>17} {:>19}",
        "fold", "test_size", "margin_width_svm", "margin_width_fsvm", "errors_in_margin"
    )
    .unwrap();
    for r in &report.per_fold {
        if let Some(err) = &r.failure {
            writeln!(out, "{:<6} failed: {}", r.fold + 1, err).unwrap();
            continue;
        }
        let frac = match r.errors_in_margin_fraction {
            Some(f) => format!("{:.3}", f),
            None => "-".to_string(),
        };
        writeln!(
            out,
            "{:<6} {:>9} {:>16.4} {:>17.4} {:>19}",
            r.fold + 1,
            r.test_size,
            r.margin_width_svm,
            r.margin_width_fsvm,
            frac
        )
        .unwrap();
    }
    out
}

/// Machine-readable JSON form; parses back to an identical report.
pub fn render_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

/// One CSV row per fold.
pub fn render_csv(report: &RunReport) -> String {
    let mut out = String::from(
        "fold,svm_err,fsvm_err,fuzzy_err,pfsvm_definite_err,pfsvm_probabilistic_err,\
         pfsvm_undetermined,test_size,margin_width_svm,margin_width_fsvm,\
         errors_in_margin_fraction,failure\n",
    );
    for r in &report.per_fold {
        let frac = r
            .errors_in_margin_fraction
            .map(|f| f.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.fold,
            r.svm_err,
            r.fsvm_err,
            r.fuzzy_err,
            r.pfsvm_definite_err,
            r.pfsvm_probabilistic_err,
            r.pfsvm_undetermined,
            r.test_size,
            r.margin_width_svm,
            r.margin_width_fsvm,
            frac,
            r.failure.clone().unwrap_or_default()
        )
        .unwrap();
    }
    out
}
