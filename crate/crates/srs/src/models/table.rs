//! Categorical distribution over an indexed finite domain `{0, ..., k-1}`.
//!
//! The workhorse for synthetic test pairs: any finite pmf becomes a model
//! with sampler, pmf, and enumerator.

use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::rng::RandomSource;

pub struct TableModel {
    name: String,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl TableModel {
    pub fn new(name: impl Into<String>, probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(SrsError::invalid("pmf table must be non-empty"));
        }
        if probs.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(SrsError::invalid("pmf entries must lie in [0, 1]"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(SrsError::invalid(format!(
                "pmf sums to {total}, expected 1 +/- 1e-9"
            )));
        }
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        Ok(TableModel {
            name: name.into(),
            probs,
            cumulative,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl DiscreteModel<i64> for TableModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<i64> {
        let u = rng.next_open01();
        let idx = self.cumulative.partition_point(|&c| c < u);
        Ok(idx.min(self.probs.len() - 1) as i64)
    }

    fn pmf(&self, x: &i64) -> Option<f64> {
        if *x < 0 || *x as usize >= self.probs.len() {
            return Some(0.0);
        }
        Some(self.probs[*x as usize])
    }

    fn enumerate(&self) -> Option<Vec<i64>> {
        Some((0..self.probs.len() as i64).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_tables() {
        assert!(TableModel::new("bad", vec![0.5, 0.6]).is_err());
        assert!(TableModel::new("bad", vec![]).is_err());
        assert!(TableModel::new("bad", vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn sampler_matches_pmf() {
        let t = TableModel::new("t", vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let mut rng = RandomSource::new(4);
        let draws = 400_000;
        let mut counts = [0u64; 4];
        for _ in 0..draws {
            counts[t.sample(&mut rng).unwrap() as usize] += 1;
        }
        for (i, &c) in counts.iter().enumerate() {
            let got = c as f64 / draws as f64;
            let want = t.probs()[i];
            assert!((got - want).abs() < 0.004, "bin {i}: {got} vs {want}");
        }
    }

    #[test]
    fn pmf_outside_domain_is_zero() {
        let t = TableModel::new("t", vec![0.5, 0.5]).unwrap();
        assert_eq!(t.pmf(&-1), Some(0.0));
        assert_eq!(t.pmf(&2), Some(0.0));
        assert_eq!(t.pmf(&1), Some(0.5));
    }
}
