//! Monte Carlo power estimation and the sample-complexity calculator.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Result, SrsError};
use crate::exact::{exact_rank_pmf, sup_norm_to_uniform};
use crate::model::{DiscreteModel, MixtureModel};
use crate::order::TotalOrder;
use crate::rank::rank_dataset;
use crate::rng::RandomSource;
use crate::special::normal_quantile;
use crate::uniformity::{binomial_normal_test, chisq_uniformity, Decision, TestMethod};

/// A full test-power experiment: observations from `alt_model` tested
/// against `null_model` at the given size.
pub struct ExperimentConfig<T> {
    pub null_model: Arc<dyn DiscreteModel<T>>,
    pub alt_model: Arc<dyn DiscreteModel<T>>,
    pub order: Arc<dyn TotalOrder<T>>,
    pub m: u32,
    pub n: usize,
    pub alpha: f64,
    pub trials: u32,
    pub seed: u64,
    pub method: TestMethod,
}

/// Estimated rejection probability with its experiment echo.
#[derive(Debug, Clone)]
pub struct PowerEstimate {
    pub trials: u32,
    pub rejections: u32,
    pub power: f64,
    pub alpha: f64,
    pub null_model: String,
    pub alt_model: String,
    pub order: String,
    pub m: u32,
    pub n: usize,
    pub seed: u64,
}

/// Run `trials` independent full tests and report the rejection fraction.
///
/// Trial `t` works entirely inside child stream `t` of the configured seed
/// (observations on sub-stream 0, ranking on sub-stream 1), so runs are
/// reproducible and trial counts can grow without disturbing earlier
/// trials.
pub fn estimate_power<T: Sync + Send>(cfg: &ExperimentConfig<T>) -> Result<PowerEstimate> {
    if cfg.method == TestMethod::BinomialNormal && cfg.m != 1 {
        return Err(SrsError::invalid("the binomial test variant requires m = 1"));
    }
    estimate_power_with(cfg, |observations, candidate, rng| {
        let hist = rank_dataset(observations, candidate, cfg.m, &cfg.order, rng)?;
        let report = match cfg.method {
            TestMethod::Chisq => chisq_uniformity(&hist, cfg.alpha)?,
            TestMethod::BinomialNormal => binomial_normal_test(&hist, cfg.alpha)?,
        };
        Ok(report.decision)
    })
}

/// [`estimate_power`] with a caller-supplied per-trial decision rule.
///
/// The rule sees the trial's observations, the candidate model, and a
/// dedicated random stream, so external tests (two-sample baselines and
/// the like) can be benchmarked through the same harness.
pub fn estimate_power_with<T, F>(cfg: &ExperimentConfig<T>, decide: F) -> Result<PowerEstimate>
where
    T: Sync + Send,
    F: Fn(&[T], &dyn DiscreteModel<T>, &RandomSource) -> Result<Decision> + Sync,
{
    if cfg.trials == 0 {
        return Err(SrsError::invalid("need at least one trial"));
    }
    if cfg.n == 0 {
        return Err(SrsError::invalid("need at least one observation per trial"));
    }
    let root = RandomSource::new(cfg.seed);
    let rejections = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<u32> {
            let trial = root.child(u64::from(t));
            let mut obs_rng = trial.child(0);
            let mut observations = Vec::with_capacity(cfg.n);
            for _ in 0..cfg.n {
                observations.push(cfg.alt_model.sample(&mut obs_rng)?);
            }
            let decision = decide(&observations, &cfg.null_model, &trial.child(1))?;
            Ok(u32::from(decision == Decision::Reject))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(PowerEstimate {
        trials: cfg.trials,
        rejections,
        power: f64::from(rejections) / f64::from(cfg.trials),
        alpha: cfg.alpha,
        null_model: cfg.null_model.name().to_string(),
        alt_model: cfg.alt_model.name().to_string(),
        order: cfg.order.name().to_string(),
        m: cfg.m,
        n: cfg.n,
        seed: cfg.seed,
    })
}

/// Observations needed for the m = 1 test to reach power 1 - Φ(-c) at
/// significance `alpha = 2Φ(-c)` against a pair at the given L∞ distance:
/// `ceil(4 c² / l_inf⁴)` with `c = -Φ⁻¹(alpha / 2)`.
pub fn sample_complexity(alpha: f64, l_inf: f64) -> Result<u64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SrsError::invalid(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(l_inf > 0.0 && l_inf <= 1.0) {
        return Err(SrsError::invalid(format!(
            "L-infinity distance must lie in (0, 1], got {l_inf}"
        )));
    }
    let c = -normal_quantile(alpha / 2.0)?;
    let raw = 4.0 * c * c / l_inf.powi(4);
    // Nudge below the ceiling by a relative epsilon so exactly-integral
    // values of the formula are not pushed up by quantile rounding.
    Ok((raw - raw * 1e-9).ceil() as u64)
}

/// `max_x |p(x) - q(x)|` over aligned pmf tables.
pub fn l_inf_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.is_empty() || p.len() != q.len() {
        return Err(SrsError::mismatch(format!(
            "pmf tables of lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Which quantity a mixture-weight sweep records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMetric {
    /// Estimated rejection rate (Monte Carlo).
    Power,
    /// Exact sup-norm distance of the rank law from uniform.
    SupNorm,
}

/// Base setup for a mixture-weight sweep: the null stays `ind_model`; the
/// alternative at weight w is `w * alt_model + (1 - w) * ind_model`.
pub struct SweepConfig<T> {
    pub ind_model: Arc<dyn DiscreteModel<T>>,
    pub alt_model: Arc<dyn DiscreteModel<T>>,
    pub orders: Vec<Arc<dyn TotalOrder<T>>>,
    pub m: u32,
    pub n: usize,
    pub alpha: f64,
    pub trials: u32,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub weight: f64,
    pub ordering: String,
    pub m: u32,
    pub value: f64,
    pub trials: u32,
    pub seed: u64,
}

/// Evaluate the metric for each (weight, ordering) cell.
pub fn weight_sweep<T: Clone + PartialEq + Send + Sync + 'static>(
    cfg: &SweepConfig<T>,
    weights: &[f64],
    metric: SweepMetric,
) -> Result<Vec<SweepRow>> {
    if cfg.orders.is_empty() {
        return Err(SrsError::invalid("sweep needs at least one ordering"));
    }
    if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
        return Err(SrsError::invalid("mixture weights must lie in [0, 1]"));
    }
    let mut rows = Vec::with_capacity(weights.len() * cfg.orders.len());
    for (wi, &w) in weights.iter().enumerate() {
        let q_w: Arc<dyn DiscreteModel<T>> = Arc::new(MixtureModel::new(
            vec![cfg.alt_model.clone(), cfg.ind_model.clone()],
            vec![w, 1.0 - w],
        )?);
        for (oi, order) in cfg.orders.iter().enumerate() {
            let (value, trials) = match metric {
                SweepMetric::SupNorm => {
                    let pmf =
                        exact_rank_pmf(&cfg.ind_model, &q_w, order, cfg.m)?;
                    (sup_norm_to_uniform(&pmf), 0)
                }
                SweepMetric::Power => {
                    let cell_seed = crate::rng::derive_stream_key(
                        cfg.seed,
                        (wi * cfg.orders.len() + oi) as u64,
                    );
                    let est = estimate_power(&ExperimentConfig {
                        null_model: cfg.ind_model.clone(),
                        alt_model: q_w.clone(),
                        order: order.clone(),
                        m: cfg.m,
                        n: cfg.n,
                        alpha: cfg.alpha,
                        trials: cfg.trials,
                        seed: cell_seed,
                        method: TestMethod::Chisq,
                    })?;
                    (est.power, cfg.trials)
                }
            };
            rows.push(SweepRow {
                weight: w,
                ordering: order.name().to_string(),
                m: cfg.m,
                value,
                trials,
                seed: cfg.seed,
            });
        }
    }
    Ok(rows)
}
