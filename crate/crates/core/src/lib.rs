//! Two-phase probabilistic fuzzy SVM for binary diagnosis data.
//!
//! Phase one trains a soft-margin linear SVM whose per-sample slack costs
//! are Gaussian fuzzy weights, widening the margin around uncertain points.
//! Phase two classifies margin-interior points by the ratio of their
//! Gaussian memberships to the two marginal populations, assigning a class
//! only when the winning probability reaches a confidence threshold and
//! abstaining otherwise.
//!
//! The crate also ships the plain-SVM, weighted-SVM, and whole-set fuzzy
//! baselines plus a seeded k-fold benchmark harness that reproduces the
//! reference experiment layout on the Wisconsin diagnostic dataset.

pub mod dataset;
pub mod error;
pub mod eval;
pub mod fuzzy;
pub mod pfsvm;
pub mod svm;

pub use dataset::{load_wdbc, make_folds, prune_correlated, Dataset, FoldPlan, Instance, Label};
pub use error::{Error, Result};
pub use eval::{errors_in_margin, export_margin_plot, run_experiment, RunReport};
pub use fuzzy::{
    default_sigma_floors, gaussian_weight, log_gaussian_weight, membership_probability,
    normalize_weights, ClassStats, ClassSummary, WeightVector,
};
pub use pfsvm::{FitParams, Outcome, PfsvmModel, Prediction, WeightMode};
pub use svm::{train, SmoParams, SvmModel};
