//! L2-regularised logistic regression fitted by damped Newton steps.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::model::{Algorithm, ModelParams, Scaler, TrainedModel, TrainingMeta};
use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::features::FEATURE_COUNT;

/// Parameters: `FEATURE_COUNT` weights followed by the bias.
pub const PARAM_COUNT: usize = FEATURE_COUNT + 1;

const GRADIENT_TOLERANCE: f64 = 1e-6;
const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrConfig {
    pub ridge: f64,
    pub max_epochs: usize,
}

impl Default for LrConfig {
    fn default() -> Self {
        LrConfig {
            ridge: 1e-8,
            max_epochs: 100,
        }
    }
}

impl LrConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.ridge >= 0.0) || !self.ridge.is_finite() {
            return Err(Error::InvalidParams(format!("ridge must be >= 0, got {}", self.ridge)));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidParams("max_epochs must be at least 1".into()));
        }
        Ok(())
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// Negative log-likelihood plus `ridge * |w|^2`; the bias is not penalised.
#[derive(Debug, Clone, Copy)]
pub struct LogisticObjective<'a> {
    pub x: &'a [[f64; FEATURE_COUNT]],
    /// 0 or 1 per row.
    pub y: &'a [f64],
    pub ridge: f64,
}

impl LogisticObjective<'_> {
    fn eta(theta: &[f64; PARAM_COUNT], row: &[f64; FEATURE_COUNT]) -> f64 {
        theta[FEATURE_COUNT] + row.iter().zip(theta).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn loss(&self, theta: &[f64; PARAM_COUNT]) -> f64 {
        let data: f64 = self
            .x
            .iter()
            .zip(self.y)
            .map(|(row, y)| {
                let eta = Self::eta(theta, row);
                softplus(eta) - y * eta
            })
            .sum();
        data + self.ridge * theta[..FEATURE_COUNT].iter().map(|w| w * w).sum::<f64>()
    }

    pub fn gradient(&self, theta: &[f64; PARAM_COUNT]) -> [f64; PARAM_COUNT] {
        let mut g = [0.0; PARAM_COUNT];
        for (row, y) in self.x.iter().zip(self.y) {
            let r = sigmoid(Self::eta(theta, row)) - y;
            for j in 0..FEATURE_COUNT {
                g[j] += r * row[j];
            }
            g[FEATURE_COUNT] += r;
        }
        for j in 0..FEATURE_COUNT {
            g[j] += 2.0 * self.ridge * theta[j];
        }
        g
    }

    fn hessian(&self, theta: &[f64; PARAM_COUNT]) -> DMatrix<f64> {
        let mut h = DMatrix::<f64>::zeros(PARAM_COUNT, PARAM_COUNT);
        for row in self.x {
            let p = sigmoid(Self::eta(theta, row));
            let s = p * (1.0 - p);
            let mut z = [1.0; PARAM_COUNT];
            z[..FEATURE_COUNT].copy_from_slice(row);
            for a in 0..PARAM_COUNT {
                for b in 0..PARAM_COUNT {
                    h[(a, b)] += s * z[a] * z[b];
                }
            }
        }
        for j in 0..FEATURE_COUNT {
            h[(j, j)] += 2.0 * self.ridge;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticFit {
    pub theta: [f64; PARAM_COUNT],
    /// Loss before the first step and after every accepted step.
    pub loss_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Minimise the objective from zero. Newton directions come from a Cholesky
/// solve of the Hessian; when that fails or is not a descent direction the
/// negative gradient is used. Every step is Armijo-backtracked, so the loss
/// never increases.
pub fn fit_logistic(objective: &LogisticObjective, max_epochs: usize) -> LogisticFit {
    let mut theta = [0.0; PARAM_COUNT];
    let mut loss = objective.loss(&theta);
    let mut loss_trace = vec![loss];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_epochs {
        let g = objective.gradient(&theta);
        if norm(&g) < GRADIENT_TOLERANCE {
            converged = true;
            break;
        }
        let grad = DVector::from_column_slice(&g);
        let newton = objective
            .hessian(&theta)
            .cholesky()
            .map(|c| -c.solve(&grad))
            .filter(|d| d.iter().all(|v| v.is_finite()) && d.dot(&grad) < 0.0);
        let direction = newton.unwrap_or_else(|| -grad.clone());
        let slope = direction.dot(&grad);

        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut candidate = theta;
            for (t, d) in candidate.iter_mut().zip(direction.iter()) {
                *t += step * d;
            }
            let candidate_loss = objective.loss(&candidate);
            if candidate_loss <= loss + ARMIJO_C * step * slope {
                accepted = Some((candidate, candidate_loss));
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        match accepted {
            Some((next, next_loss)) => {
                theta = next;
                loss = next_loss;
                loss_trace.push(loss);
            }
            // no representable decrease left
            None => break,
        }
    }
    if !converged {
        converged = norm(&objective.gradient(&theta)) < GRADIENT_TOLERANCE;
    }
    LogisticFit {
        theta,
        loss_trace,
        iterations,
        converged,
    }
}

/// Standardise features with training statistics and fit. Non-convergence is
/// logged and recorded in the model metadata; the last iterate is kept.
pub fn train_logistic_regression(ds: &LabeledDataset, config: LrConfig, seed: u64) -> Result<TrainedModel> {
    config.validate()?;
    ds.require_both_classes()?;
    let raw: Vec<[f64; FEATURE_COUNT]> = ds.records.iter().map(|r| r.features()).collect();
    let scaler = Scaler::fit(&raw);
    let x: Vec<[f64; FEATURE_COUNT]> = raw.iter().map(|row| scaler.transform(row)).collect();
    let y: Vec<f64> = ds.records.iter().map(|r| r.is_positive() as u8 as f64).collect();
    let objective = LogisticObjective {
        x: &x,
        y: &y,
        ridge: config.ridge,
    };
    let fit = fit_logistic(&objective, config.max_epochs);
    if fit.theta.iter().any(|v| !v.is_finite()) {
        return Err(Error::Training("logistic regression diverged".into()));
    }
    if !fit.converged {
        log::warn!(
            "logistic regression stopped after {} iterations without reaching gradient norm {GRADIENT_TOLERANCE:e}",
            fit.iterations
        );
    }
    let mut meta = TrainingMeta::from_dataset(ds);
    meta.converged = fit.converged;
    meta.iterations = fit.iterations;
    meta.final_loss = fit.loss_trace.last().copied();
    let params = ModelParams::LogisticRegression {
        weights: fit.theta[..FEATURE_COUNT].to_vec(),
        bias: fit.theta[FEATURE_COUNT],
        ridge: config.ridge,
    };
    Ok(TrainedModel::new(
        Algorithm::LogisticRegression,
        seed,
        scaler,
        params,
        meta,
    ))
}
