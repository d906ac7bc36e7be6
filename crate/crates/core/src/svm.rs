//! Soft-margin linear SVM with an individual slack cost per sample.
//!
//! The primal `min 1/2 ||beta||^2 + sum c_i zeta_i` is solved in dual form:
//! maximize `sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j <x_i, x_j>`
//! subject to `0 <= alpha_i <= c_i` and `sum alpha_i y_i = 0`, by sequential
//! minimal optimization over pairs of duals. The per-sample cost c_i is the
//! upper box bound of alpha_i.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};

/// Stopping parameters for the SMO loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoParams {
    /// Maximum tolerated KKT violation on exit.
    pub tolerance: f64,
    /// Cap on full sweeps before the trainer gives up and flags the model.
    pub max_passes: usize,
}

impl Default for SmoParams {
    fn default() -> Self {
        SmoParams { tolerance: 1e-3, max_passes: 10_000 }
    }
}

/// Trained hyperplane together with the dual state that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    normal: Vec<f64>,
    offset: f64,
    duals: Vec<f64>,
    per_sample_cost: Vec<f64>,
    margin_width: f64,
    converged: bool,
}

impl SvmModel {
    /// Hyperplane normal vector `beta = sum alpha_i y_i x_i`.
    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    /// Hyperplane offset `beta_0`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Dual variables, one per training sample.
    pub fn duals(&self) -> &[f64] {
        &self.duals
    }

    /// Effective upper box bound of each dual variable.
    pub fn per_sample_cost(&self) -> &[f64] {
        &self.per_sample_cost
    }

    /// Geometric width `2 / ||beta||` between the two margin hyperplanes.
    pub fn margin_width(&self) -> f64 {
        self.margin_width
    }

    /// False when training stopped at the sweep cap with KKT violations
    /// above tolerance.
    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `f(x) = x . beta + beta_0`.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.normal.len() {
            return Err(Error::Argument(format!(
                "point has {} features, model has {}",
                x.len(),
                self.normal.len()
            )));
        }
        Ok(dot(x, &self.normal) + self.offset)
    }

    /// Sign classification rule; exact zero maps to Malignant.
    pub fn predict_sign(&self, x: &[f64]) -> Result<Label> {
        Ok(Label::from_sign(self.decision_value(x)?))
    }

    /// True iff the point lies strictly between the margin hyperplanes.
    pub fn in_margin(&self, x: &[f64]) -> Result<bool> {
        Ok(self.decision_value(x)?.abs() < 1.0)
    }

    /// Slack of every instance: `zeta_i = max(0, 1 - y_i f(x_i))`.
    pub fn slack_of(&self, data: &Dataset) -> Result<Vec<f64>> {
        data.instances()
            .iter()
            .map(|inst| {
                let f = self.decision_value(&inst.features)?;
                Ok((1.0 - inst.label.sign() * f).max(0.0))
            })
            .collect()
    }

    /// Dual objective at the stored duals.
    pub fn dual_objective(&self) -> f64 {
        self.duals.iter().sum::<f64>() - 0.5 * dot(&self.normal, &self.normal)
    }

    /// Largest KKT violation over the training data, with duals within a
    /// small band of their bounds treated as bound.
    pub fn max_kkt_violation(&self, data: &Dataset) -> Result<f64> {
        if data.len() != self.duals.len() || data.dim() != self.normal.len() {
            return Err(Error::Argument(
                "data does not match the model's training shape".into(),
            ));
        }
        let mut worst: f64 = 0.0;
        for (i, inst) in data.instances().iter().enumerate() {
            let m = inst.label.sign() * self.decision_value(&inst.features)? - 1.0;
            worst = worst.max(single_kkt_violation(
                m,
                self.duals[i],
                self.per_sample_cost[i],
            ));
        }
        Ok(worst)
    }
}

/// Violation of the box-KKT conditions for one sample, given its margin
/// value `m = y f(x) - 1`. Duals within a tiny band of a bound count as
/// bound; a dual whose box has collapsed to a point constrains nothing.
fn single_kkt_violation(m: f64, alpha: f64, cost: f64) -> f64 {
    let band = 1e-9 * cost.max(1.0);
    let at_lower = alpha <= band;
    let at_upper = alpha >= cost - band;
    match (at_lower, at_upper) {
        (true, true) => 0.0,
        (true, false) => (-m).max(0.0),
        (false, true) => m.max(0.0),
        (false, false) => m.abs(),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Trains the weighted soft-margin SVM. `per_sample_cost[i]` is the slack
/// penalty (and dual box bound) of instance `i`.
pub fn train(data: &Dataset, per_sample_cost: &[f64], params: &SmoParams) -> Result<SvmModel> {
    train_with_trace(data, per_sample_cost, params, None)
}

/// Training entry point that can record the dual objective after every
/// successful pair update. The trace is test instrumentation.
pub(crate) fn train_with_trace(
    data: &Dataset,
    per_sample_cost: &[f64],
    params: &SmoParams,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<SvmModel> {
    let n = data.len();
    if per_sample_cost.len() != n {
        return Err(Error::Argument(format!(
            "{} costs for {} instances",
            per_sample_cost.len(),
            n
        )));
    }
    if per_sample_cost.iter().any(|c| !c.is_finite() || *c <= 0.0) {
        return Err(Error::Argument("per-sample costs must be finite and positive".into()));
    }
    if !(params.tolerance > 0.0) {
        return Err(Error::Argument("tolerance must be positive".into()));
    }
    for label in Label::BOTH {
        if data.class_count(label) == n {
            return Err(Error::SingleClass(label));
        }
    }

    let mut state = SmoState::new(data, per_sample_cost, params);
    state.run(&mut trace);
    Ok(state.into_model())
}

struct SmoState<'a> {
    x: Vec<&'a [f64]>,
    y: Vec<f64>,
    cost: &'a [f64],
    tol: f64,
    max_passes: usize,
    alpha: Vec<f64>,
    weights: Vec<f64>,
    bias: f64,
    errors: Vec<f64>,
    self_dot: Vec<f64>,
    rng: ChaCha8Rng,
}

impl<'a> SmoState<'a> {
    fn new(data: &'a Dataset, cost: &'a [f64], params: &SmoParams) -> SmoState<'a> {
        let n = data.len();
        let x: Vec<&[f64]> = data.instances().iter().map(|i| i.features.as_slice()).collect();
        let y: Vec<f64> = data.instances().iter().map(|i| i.label.sign()).collect();
        let self_dot = x.iter().map(|xi| dot(xi, xi)).collect();
        // errors start at f(x_i) - y_i = -y_i since alpha = 0, b = 0
        let errors = y.iter().map(|yi| -yi).collect();
        SmoState {
            x,
            y,
            cost,
            tol: params.tolerance,
            max_passes: params.max_passes,
            alpha: vec![0.0; n],
            weights: vec![0.0; data.dim()],
            bias: 0.0,
            errors,
            self_dot,
            // fixed seed: training must be deterministic for its inputs
            rng: ChaCha8Rng::seed_from_u64(0x5310_7e57),
        }
    }

    fn run(&mut self, trace: &mut Option<&mut Vec<f64>>) {
        let n = self.x.len();
        let mut examine_all = true;
        let mut num_changed = 1usize;
        let mut passes = 0usize;
        while passes < self.max_passes && (num_changed > 0 || examine_all) {
            self.refresh_errors();
            num_changed = 0;
            if examine_all {
                for i in 0..n {
                    num_changed += self.examine(i, trace) as usize;
                }
            } else {
                for i in 0..n {
                    if self.is_free(i) {
                        num_changed += self.examine(i, trace) as usize;
                    }
                }
            }
            if examine_all {
                examine_all = false;
            } else if num_changed == 0 {
                examine_all = true;
            }
            passes += 1;
        }
    }

    fn is_free(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.cost[i]
    }

    /// Recomputes the error cache from the maintained weight vector,
    /// discarding incremental rounding drift.
    fn refresh_errors(&mut self) {
        for i in 0..self.x.len() {
            self.errors[i] = dot(&self.weights, self.x[i]) + self.bias - self.y[i];
        }
    }

    fn examine(&mut self, i2: usize, trace: &mut Option<&mut Vec<f64>>) -> bool {
        let r2 = self.errors[i2] * self.y[i2];
        let violates = (r2 < -self.tol && self.alpha[i2] < self.cost[i2])
            || (r2 > self.tol && self.alpha[i2] > 0.0);
        if !violates {
            return false;
        }
        let n = self.x.len();

        // best |E1 - E2| over free duals
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if i != i2 && self.is_free(i) {
                let gap = (self.errors[i] - self.errors[i2]).abs();
                if best.map_or(true, |(_, g)| gap > g) {
                    best = Some((i, gap));
                }
            }
        }
        if let Some((i1, _)) = best {
            if self.take_step(i1, i2, trace) {
                return true;
            }
        }

        // fall back to all free duals, then all duals, from a random start
        let start = self.rng.random_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if i1 != i2 && self.is_free(i1) && self.take_step(i1, i2, trace) {
                return true;
            }
        }
        let start = self.rng.random_range(0..n);
        for off in 0..n {
            let i1 = (start + off) % n;
            if i1 != i2 && self.take_step(i1, i2, trace) {
                return true;
            }
        }
        false
    }

    fn take_step(&mut self, i1: usize, i2: usize, trace: &mut Option<&mut Vec<f64>>) -> bool {
        let (a1_old, a2_old) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (c1, c2) = (self.cost[i1], self.cost[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;

        let (lo, hi) = if s < 0.0 {
            ((a2_old - a1_old).max(0.0), (c1 + a2_old - a1_old).min(c2))
        } else {
            ((a1_old + a2_old - c1).max(0.0), (a1_old + a2_old).min(c2))
        };
        if lo >= hi {
            return false;
        }

        let k11 = self.self_dot[i1];
        let k22 = self.self_dot[i2];
        let k12 = dot(self.x[i1], self.x[i2]);
        let eta = k11 + k22 - 2.0 * k12;

        let mut a2 = if eta > 0.0 {
            (a2_old + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            // flat direction: evaluate the pair objective at both ends
            let f1 = y1 * (e1 + self.bias) - a1_old * k11 - s * a2_old * k12;
            let f2 = y2 * (e2 + self.bias) - s * a1_old * k12 - a2_old * k22;
            let l1 = a1_old + s * (a2_old - lo);
            let h1 = a1_old + s * (a2_old - hi);
            let obj_lo = l1 * f1 + lo * f2
                + 0.5 * l1 * l1 * k11
                + 0.5 * lo * lo * k22
                + s * lo * l1 * k12;
            let obj_hi = h1 * f1 + hi * f2
                + 0.5 * h1 * h1 * k11
                + 0.5 * hi * hi * k22
                + s * hi * h1 * k12;
            if obj_lo < obj_hi - 1e-12 {
                lo
            } else if obj_lo > obj_hi + 1e-12 {
                hi
            } else {
                return false;
            }
        };

        if (a2 - a2_old).abs() < 1e-12 * (a2 + a2_old + 1e-12) {
            return false;
        }
        if a2 < 1e-11 * c2 {
            a2 = 0.0;
        } else if a2 > c2 * (1.0 - 1e-11) {
            a2 = c2;
        }
        let a1 = (a1_old + s * (a2_old - a2)).clamp(0.0, c1);

        // offset update keeping the freshly optimized pair consistent
        let d1 = y1 * (a1 - a1_old);
        let d2 = y2 * (a2 - a2_old);
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if a1 > 0.0 && a1 < c1 {
            b1
        } else if a2 > 0.0 && a2 < c2 {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let delta_bias = new_bias - self.bias;

        for (w, (v1, v2)) in self.weights.iter_mut().zip(self.x[i1].iter().zip(self.x[i2])) {
            *w += d1 * v1 + d2 * v2;
        }
        // incremental error update: d1 * K(x1, xk) + d2 * K(x2, xk) + delta_b
        for i in 0..self.x.len() {
            self.errors[i] +=
                d1 * dot(self.x[i1], self.x[i]) + d2 * dot(self.x[i2], self.x[i]) + delta_bias;
        }

        self.alpha[i1] = a1;
        self.alpha[i2] = a2;
        self.bias = new_bias;

        if let Some(t) = trace.as_deref_mut() {
            t.push(self.alpha.iter().sum::<f64>() - 0.5 * dot(&self.weights, &self.weights));
        }
        true
    }

    fn into_model(self) -> SvmModel {
        // recompute the normal exactly from the final duals
        let dim = self.weights.len();
        let mut normal = vec![0.0; dim];
        for ((&a, &y), x) in self.alpha.iter().zip(&self.y).zip(&self.x) {
            if a != 0.0 {
                let coeff = a * y;
                for (w, v) in normal.iter_mut().zip(*x) {
                    *w += coeff * v;
                }
            }
        }

        let offset = self.final_offset(&normal);
        let margin_width = 2.0 / dot(&normal, &normal).sqrt();

        let mut model = SvmModel {
            normal,
            offset,
            duals: self.alpha,
            per_sample_cost: self.cost.to_vec(),
            margin_width,
            converged: false,
        };
        let violation = self
            .x
            .iter()
            .enumerate()
            .map(|(i, xi)| {
                let m = self.y[i] * (dot(xi, &model.normal) + model.offset) - 1.0;
                single_kkt_violation(m, model.duals[i], model.per_sample_cost[i])
            })
            .fold(0.0f64, f64::max);
        model.converged = violation <= self.tol;
        model
    }

    /// Average of `y_i - x_i . beta` over free support vectors; if none
    /// exist, midpoint of the feasibility interval given by the bound duals.
    fn final_offset(&self, normal: &[f64]) -> f64 {
        let n = self.x.len();
        let mut sum = 0.0;
        let mut count = 0usize;
        for i in 0..n {
            let band = 1e-9 * self.cost[i].max(1.0);
            if self.alpha[i] > band && self.alpha[i] < self.cost[i] - band {
                sum += self.y[i] - dot(self.x[i], normal);
                count += 1;
            }
        }
        if count > 0 {
            return sum / count as f64;
        }
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for i in 0..n {
            let g = dot(self.x[i], normal);
            let band = 1e-9 * self.cost[i].max(1.0);
            let at_lower = self.alpha[i] <= band;
            // alpha at 0 demands y f >= 1; alpha at c demands y f <= 1
            if at_lower {
                if self.y[i] > 0.0 {
                    lower = lower.max(1.0 - g);
                } else {
                    upper = upper.min(-1.0 - g);
                }
            } else if self.y[i] > 0.0 {
                upper = upper.min(1.0 - g);
            } else {
                lower = lower.max(-1.0 - g);
            }
        }
        match (lower.is_finite(), upper.is_finite()) {
            (true, true) => 0.5 * (lower + upper),
            (true, false) => lower,
            (false, true) => upper,
            (false, false) => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_point_dataset() -> Dataset {
        Dataset::from_rows(&[
            (vec![0.0, 0.0], -1.0),
            (vec![0.0, 1.0], -1.0),
            (vec![2.0, 0.0], 1.0),
            (vec![2.0, 1.0], 1.0),
        ])
        .unwrap()
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{} vs {} (tol {})", a, b, tol);
    }

    #[test]
    fn separable_four_points_give_bisecting_hyperplane() {
        let data = four_point_dataset();
        let model = train(&data, &[10.0; 4], &SmoParams::default()).unwrap();
        assert!(model.converged());
        // separating plane x1 = 1: normal parallel to (1, 0), f((1, y)) = 0
        assert_close(model.decision_value(&[1.0, 0.0]).unwrap(), 0.0, 1e-6);
        assert_close(model.decision_value(&[1.0, 1.0]).unwrap(), 0.0, 1e-6);
        assert_close(model.normal()[1], 0.0, 1e-6);
        assert_close(model.margin_width(), 2.0, 1e-4);
        // margin boundaries
        assert_close(model.decision_value(&[0.0, 0.0]).unwrap(), -1.0, 1e-4);
        assert_close(model.decision_value(&[2.0, 0.5]).unwrap(), 1.0, 1e-4);
    }

    #[test]
    fn huge_costs_reach_the_hard_margin_limit() {
        let data = Dataset::from_rows(&[
            (vec![0.0, 0.2], -1.0),
            (vec![0.4, 1.0], -1.0),
            (vec![0.1, -0.5], -1.0),
            (vec![2.0, 0.3], 1.0),
            (vec![2.5, 1.0], 1.0),
            (vec![3.0, -0.2], 1.0),
        ])
        .unwrap();
        let model = train(&data, &[1e6; 6], &SmoParams::default()).unwrap();
        let slacks = model.slack_of(&data).unwrap();
        assert!(slacks.iter().all(|&s| s < 1e-6), "slacks: {:?}", slacks);
    }

    #[test]
    fn predict_sign_follows_the_tie_rule() {
        let data = four_point_dataset();
        let model = train(&data, &[10.0; 4], &SmoParams::default()).unwrap();
        assert_eq!(model.predict_sign(&[3.0, 0.0]).unwrap(), Label::Malignant);
        assert_eq!(model.predict_sign(&[-1.0, 0.0]).unwrap(), Label::Benign);
        // a point on the hyperplane has f = 0 up to rounding; the tie rule
        // itself is covered by Label::from_sign
        assert_eq!(Label::from_sign(0.0), Label::Malignant);
    }

    #[test]
    fn in_margin_is_strict() {
        let data = four_point_dataset();
        let model = train(&data, &[10.0; 4], &SmoParams::default()).unwrap();
        assert!(model.in_margin(&[1.5, 0.0]).unwrap()); // f = 0.5
        assert!(!model.in_margin(&[-2.0, 0.0]).unwrap()); // f = -3
        // f(2, y) = 1.0 exactly at the optimum; allow solver rounding by
        // testing a point clearly outside instead
        assert!(!model.in_margin(&[2.2, 0.0]).unwrap());
    }

    #[test]
    fn slack_arithmetic() {
        let data = four_point_dataset();
        let model = train(&data, &[10.0; 4], &SmoParams::default()).unwrap();
        let slacks = model.slack_of(&data).unwrap();
        for s in slacks {
            assert_close(s, 0.0, 1e-4); // separable: all slacks zero
        }
        // misclassified point with f = -0.5 and y = +1 has slack 1.5
        let probe = Dataset::from_rows(&[(vec![0.5, 0.0], 1.0), (vec![0.5, 0.0], -1.0)]).unwrap();
        let slacks = model.slack_of(&probe).unwrap();
        assert_close(slacks[0], 1.5, 1e-4);
        assert_close(slacks[1], 0.5, 1e-4);
    }

    #[test]
    fn dimension_mismatch_is_an_argument_error() {
        let data = four_point_dataset();
        let model = train(&data, &[10.0; 4], &SmoParams::default()).unwrap();
        assert!(model.decision_value(&[1.0]).is_err());
        assert!(model.predict_sign(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn single_class_data_is_a_training_error() {
        let data = Dataset::from_rows(&[(vec![0.0], 1.0), (vec![1.0], 1.0)]).unwrap();
        match train(&data, &[1.0; 2], &SmoParams::default()) {
            Err(Error::SingleClass(Label::Malignant)) => {}
            other => panic!("expected SingleClass, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn invalid_costs_are_rejected() {
        let data = four_point_dataset();
        assert!(train(&data, &[1.0; 3], &SmoParams::default()).is_err());
        assert!(train(&data, &[1.0, -1.0, 1.0, 1.0], &SmoParams::default()).is_err());
        assert!(train(&data, &[1.0, 0.0, 1.0, 1.0], &SmoParams::default()).is_err());
    }

    #[test]
    fn model_invariants_hold_after_training() {
        let data = Dataset::from_rows(&[
            (vec![0.1, 1.3], 1.0),
            (vec![0.7, 0.9], 1.0),
            (vec![1.4, 1.1], 1.0),
            (vec![0.3, 0.2], -1.0),
            (vec![0.9, 0.1], -1.0),
            (vec![1.2, -0.4], -1.0),
            (vec![0.6, 0.6], 1.0),
            (vec![0.8, 0.4], -1.0),
        ])
        .unwrap();
        let costs = [0.5, 2.0, 1.0, 3.0, 0.7, 1.5, 2.5, 0.9];
        let model = train(&data, &costs, &SmoParams::default()).unwrap();

        // box constraints
        for (a, c) in model.duals().iter().zip(&costs) {
            assert!(*a >= 0.0 && *a <= *c, "alpha {} outside [0, {}]", a, c);
        }
        // equality constraint
        let sum_ay: f64 = model
            .duals()
            .iter()
            .zip(data.instances())
            .map(|(a, inst)| a * inst.label.sign())
            .sum();
        let sum_a: f64 = model.duals().iter().sum();
        assert!(sum_ay.abs() <= 1e-8 * sum_a + 1e-12, "sum alpha*y = {}", sum_ay);
        // normal is exactly the dual expansion
        let mut expected = vec![0.0; data.dim()];
        for (i, inst) in data.instances().iter().enumerate() {
            for (e, v) in expected.iter_mut().zip(&inst.features) {
                *e += model.duals()[i] * inst.label.sign() * v;
            }
        }
        assert_eq!(model.normal(), expected.as_slice());
        // margin width definition
        let norm = dot(model.normal(), model.normal()).sqrt();
        assert_eq!(model.margin_width(), 2.0 / norm);
        assert!(model.margin_width() > 0.0);
        // KKT within tolerance when converged
        assert!(model.converged());
        assert!(model.max_kkt_violation(&data).unwrap() <= 1e-3);
    }

    #[test]
    fn dual_objective_is_monotone_over_pair_updates() {
        let data = Dataset::from_rows(&[
            (vec![0.2, 0.1], 1.0),
            (vec![1.1, 0.8], 1.0),
            (vec![0.4, 1.2], 1.0),
            (vec![-0.3, 0.5], -1.0),
            (vec![-1.0, -0.2], -1.0),
            (vec![0.1, -0.9], -1.0),
        ])
        .unwrap();
        let mut trace = Vec::new();
        let _ = train_with_trace(&data, &[2.0; 6], &SmoParams::default(), Some(&mut trace))
            .unwrap();
        assert!(trace.len() > 1);
        for pair in trace.windows(2) {
            assert!(
                pair[1] >= pair[0] - 1e-9 * pair[0].abs().max(1.0),
                "objective decreased: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }

    #[test]
    fn scaling_costs_up_never_increases_total_slack() {
        let data = Dataset::from_rows(&[
            (vec![0.0, 0.0], 1.0),
            (vec![1.0, 0.4], 1.0),
            (vec![0.3, 0.8], -1.0),
            (vec![0.9, 0.1], -1.0),
            (vec![0.5, 0.5], 1.0),
            (vec![0.45, 0.52], -1.0),
        ])
        .unwrap();
        let base = [0.3, 1.0, 0.8, 0.5, 1.2, 0.9];
        let tight = SmoParams { tolerance: 1e-5, max_passes: 100_000 };
        let m1 = train(&data, &base, &tight).unwrap();
        let slack1: f64 = m1.slack_of(&data).unwrap().iter().sum();
        for gamma in [1.0, 2.0, 5.0] {
            let scaled: Vec<f64> = base.iter().map(|c| c * gamma).collect();
            let m2 = train(&data, &scaled, &tight).unwrap();
            let slack2: f64 = m2.slack_of(&data).unwrap().iter().sum();
            assert!(
                slack2 <= slack1 + 1e-6,
                "gamma {}: slack went {} -> {}",
                gamma,
                slack1,
                slack2
            );
        }
    }

    #[test]
    fn training_is_deterministic() {
        let data = four_point_dataset();
        let a = train(&data, &[3.0; 4], &SmoParams::default()).unwrap();
        let b = train(&data, &[3.0; 4], &SmoParams::default()).unwrap();
        assert_eq!(a, b);
    }
}
