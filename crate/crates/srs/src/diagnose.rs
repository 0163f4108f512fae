//! Sample-quality diagnostics for approximate Ising samplers.
//!
//! A reference sample set stands in for exact draws: independent chains run
//! `reference_multiplier` times longer than the largest diagnostic
//! checkpoint. At each checkpoint the reference set is ranked against fresh
//! draws from the checkpoint sampler; a chain that has converged by `s`
//! sweeps leaves the ranks uniform, so the chi-square trace over
//! checkpoints shows where sample quality stops improving.

use rayon::prelude::*;

use crate::domain::SpinLattice;
use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::models::ising::{ising_sampler, IsingKernel};
use crate::orderings::ising_epm_order;
use crate::rank::rank_dataset;
use crate::rng::RandomSource;
use crate::uniformity::chisq_uniformity;

pub struct DiagnoseConfig {
    pub side: usize,
    pub temperature: f64,
    pub kernel: IsingKernel,
    pub coupling: f64,
    /// Sweep counts to probe, each a checkpoint of the approximate sampler.
    pub checkpoints: Vec<u32>,
    /// Observations (reference lattices) per checkpoint test.
    pub n: usize,
    pub m: u32,
    pub alpha: f64,
    /// Reference chains run this multiple of the largest checkpoint.
    pub reference_multiplier: u32,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct DiagnoseRow {
    pub steps: u32,
    pub statistic: f64,
    pub p_value: f64,
}

/// Run the diagnostic trace. Returns one row per checkpoint, in input
/// order.
pub fn ising_diagnose(cfg: &DiagnoseConfig) -> Result<Vec<DiagnoseRow>> {
    if cfg.checkpoints.is_empty() {
        return Err(SrsError::invalid("need at least one checkpoint"));
    }
    if cfg.n == 0 {
        return Err(SrsError::invalid("need at least one reference observation"));
    }
    if cfg.reference_multiplier == 0 {
        return Err(SrsError::invalid("reference multiplier must be >= 1"));
    }
    let max_checkpoint = *cfg.checkpoints.iter().max().expect("non-empty");
    let reference_sweeps = max_checkpoint
        .checked_mul(cfg.reference_multiplier)
        .ok_or_else(|| SrsError::invalid("reference sweep count overflows"))?;
    let reference_model = ising_sampler(
        cfg.side,
        cfg.temperature,
        cfg.kernel,
        reference_sweeps,
        cfg.coupling,
    )?;

    let root = RandomSource::new(cfg.seed);
    let reference_rng = root.child(0);
    let references: Result<Vec<SpinLattice>> = (0..cfg.n)
        .into_par_iter()
        .map(|i| {
            let mut chain_rng = reference_rng.child(i as u64);
            reference_model.sample(&mut chain_rng)
        })
        .collect();
    let references = references?;

    let order = ising_epm_order();
    let mut rows = Vec::with_capacity(cfg.checkpoints.len());
    for (ci, &steps) in cfg.checkpoints.iter().enumerate() {
        let checkpoint_model =
            ising_sampler(cfg.side, cfg.temperature, cfg.kernel, steps, cfg.coupling)?;
        let hist = rank_dataset(
            &references,
            &checkpoint_model,
            cfg.m,
            &order,
            &root.child(1 + ci as u64),
        )?;
        let report = chisq_uniformity(&hist, cfg.alpha)?;
        rows.push(DiagnoseRow {
            steps,
            statistic: report.statistic,
            p_value: report.p_value,
        });
    }
    Ok(rows)
}
