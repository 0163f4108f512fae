//! Small helpers shared by unit, integration, and acceptance tests.

use crate::rng::RandomSource;

/// A random pair of strictly positive pmfs over an indexed domain of size
/// `k`, each normalized to sum exactly to 1 after rounding.
pub fn random_pmf_pair(k: usize, rng: &mut RandomSource) -> (Vec<f64>, Vec<f64>) {
    (random_pmf(k, rng), random_pmf(k, rng))
}

/// One random strictly positive pmf of size `k`; entries are bounded away
/// from zero so Monte Carlo comparisons keep healthy per-bin counts.
pub fn random_pmf(k: usize, rng: &mut RandomSource) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| 0.05 + rng.next_open01()).collect();
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    // push rounding residue into the largest entry so sums are exact
    let residue = 1.0 - v.iter().sum::<f64>();
    let argmax = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    v[argmax] += residue;
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmfs_are_normalized_and_positive() {
        let mut rng = RandomSource::new(0);
        for _ in 0..100 {
            let p = random_pmf(8, &mut rng);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert!(p.iter().all(|&x| x > 0.0));
        }
    }
}
