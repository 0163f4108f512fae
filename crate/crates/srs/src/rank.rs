//! Stochastic ranking of observations against fresh candidate samples.
//!
//! For each observation `y`, draw `m` new candidates from the hypothesized
//! model and `m + 1` tie-break uniforms, then count the candidates that fall
//! strictly below `y` in the chosen total order, breaking ties by the paired
//! uniforms. Under the null the resulting rank is exactly uniform on
//! `{0, ..., m}` regardless of the model.
//!
//! Each observation uses its own child random stream indexed by position, so
//! datasets may be ranked in parallel with results independent of thread
//! scheduling. Within an observation's stream the draw discipline is fixed:
//! the `m` candidate samples first, then `u_0`, then `u_1..u_m`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::order::TotalOrder;
use crate::rng::RandomSource;

/// Histogram of stochastic ranks over bins `{0, ..., m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankHistogram {
    counts: Vec<u64>,
}

impl RankHistogram {
    pub fn new(m: u32) -> Self {
        RankHistogram {
            counts: vec![0; m as usize + 1],
        }
    }

    pub fn from_ranks(m: u32, ranks: impl IntoIterator<Item = u32>) -> Self {
        let mut hist = Self::new(m);
        for r in ranks {
            hist.record(r);
        }
        hist
    }

    pub fn record(&mut self, rank: u32) {
        assert!(
            (rank as usize) < self.counts.len(),
            "rank {rank} out of range for m = {}",
            self.m()
        );
        self.counts[rank as usize] += 1;
    }

    pub fn m(&self) -> u32 {
        self.counts.len() as u32 - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Total number of recorded observations.
    pub fn n(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn merge(&mut self, other: &RankHistogram) {
        assert_eq!(self.m(), other.m(), "cannot merge histograms of unequal m");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }
}

/// One ranked observation: the value, its stochastic rank, and the number
/// of candidates it was ranked within. Always satisfies `rank <= m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSample<T> {
    pub observation: T,
    pub rank: u32,
    pub m: u32,
}

/// Rank one observation and keep the pairing.
pub fn rank_sample<T>(
    y: T,
    candidate: &dyn DiscreteModel<T>,
    m: u32,
    order: &dyn TotalOrder<T>,
    rng: &mut RandomSource,
) -> Result<RankSample<T>> {
    let rank = rank_observation(&y, candidate, m, order, rng)?;
    Ok(RankSample {
        observation: y,
        rank,
        m,
    })
}

/// Rank of `y` among `candidates` with paired-uniform tie breaking:
/// `Σ_k 1[x_k < y] + 1[x_k = y, u_k < u0]`.
///
/// Deterministic given its inputs. `candidates` and `tie_breaks` must have
/// equal positive length and all uniforms must lie strictly inside (0, 1).
pub fn stochastic_rank<T>(
    y: &T,
    candidates: &[T],
    u0: f64,
    tie_breaks: &[f64],
    order: &dyn TotalOrder<T>,
) -> Result<u32> {
    if candidates.is_empty() {
        return Err(SrsError::invalid("need at least one candidate (m >= 1)"));
    }
    if candidates.len() != tie_breaks.len() {
        return Err(SrsError::invalid(format!(
            "{} candidates but {} tie-break uniforms",
            candidates.len(),
            tie_breaks.len()
        )));
    }
    if !(u0 > 0.0 && u0 < 1.0) || tie_breaks.iter().any(|&u| !(u > 0.0 && u < 1.0)) {
        return Err(SrsError::invalid(
            "tie-break uniforms must lie strictly inside (0, 1)",
        ));
    }
    let mut rank = 0u32;
    for (x, &u) in candidates.iter().zip(tie_breaks) {
        match order.compare(x, y)? {
            Ordering::Less => rank += 1,
            Ordering::Equal if u < u0 => rank += 1,
            _ => {}
        }
    }
    Ok(rank)
}

/// Rank a single observation against `m` fresh candidate draws taken from
/// `rng`, consuming the stream in the documented order.
pub fn rank_observation<T>(
    y: &T,
    candidate: &dyn DiscreteModel<T>,
    m: u32,
    order: &dyn TotalOrder<T>,
    rng: &mut RandomSource,
) -> Result<u32> {
    if m == 0 {
        return Err(SrsError::invalid("m must be >= 1"));
    }
    let mut xs = Vec::with_capacity(m as usize);
    for _ in 0..m {
        xs.push(candidate.sample(rng)?);
    }
    let u0 = rng.next_open01();
    let tie_breaks: Vec<f64> = (0..m).map(|_| rng.next_open01()).collect();
    stochastic_rank(y, &xs, u0, &tie_breaks, order)
}

/// Rank every observation against fresh candidate samples and histogram the
/// ranks. Observation `i` draws from `rng.child(i)`, so the result does not
/// depend on how the loop is scheduled across threads. Total model draws are
/// exactly `n * m`, plus `n * (m + 1)` uniforms.
pub fn rank_dataset<T: Sync>(
    observations: &[T],
    candidate: &(dyn DiscreteModel<T> + Sync),
    m: u32,
    order: &(dyn TotalOrder<T> + Sync),
    rng: &RandomSource,
) -> Result<RankHistogram> {
    if observations.is_empty() {
        return Err(SrsError::invalid("need at least one observation"));
    }
    if m == 0 {
        return Err(SrsError::invalid("m must be >= 1"));
    }
    let ranks: Result<Vec<u32>> = observations
        .par_iter()
        .enumerate()
        .map(|(i, y)| {
            let mut child = rng.child(i as u64);
            rank_observation(y, candidate, m, order, &mut child)
                .map_err(|e| SrsError::at_observation(i, e))
        })
        .collect();
    Ok(RankHistogram::from_ranks(m, ranks?))
}
