//! Reflected bimodal Poisson distribution over the integers.
//!
//! `f(x; l1, l2)` mixes Poisson(l1) and Poisson(l2) equally and reflects the
//! result symmetrically about 0: the sampler draws a rate uniformly, draws
//! `K` from that Poisson, and flips a fair sign. The pmf is the sampler's
//! exact law: mass `mix(0)` at zero and `mix(|x|)/2` elsewhere, which is
//! normalized by construction.

use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::rng::RandomSource;
use crate::special::ln_gamma;

pub struct BimodalPoisson {
    name: String,
    lambda1: f64,
    lambda2: f64,
    radius: i64,
}

/// Poisson pmf at `k` via logs; exact enough for the rates used here.
fn poisson_pmf(k: u64, lambda: f64) -> f64 {
    let kf = k as f64;
    (-lambda + kf * lambda.ln() - ln_gamma(kf + 1.0)).exp()
}

/// Poisson draw by CDF inversion; expected cost O(lambda).
fn poisson_draw(lambda: f64, cap: u64, rng: &mut RandomSource) -> u64 {
    let u = rng.next_open01();
    let mut k = 0u64;
    let mut term = (-lambda).exp();
    let mut acc = term;
    while u > acc && k < cap {
        k += 1;
        term *= lambda / k as f64;
        acc += term;
    }
    k
}

pub fn bimodal_poisson(lambda1: f64, lambda2: f64) -> Result<BimodalPoisson> {
    for l in [lambda1, lambda2] {
        if !l.is_finite() || l <= 0.0 {
            return Err(SrsError::invalid(format!("Poisson rate must be > 0, got {l}")));
        }
        if l > 600.0 {
            return Err(SrsError::invalid(format!(
                "Poisson rate {l} too large for direct inversion sampling"
            )));
        }
    }
    let lmax = lambda1.max(lambda2);
    // Truncation radius for the enumerator; the excluded tail is far below
    // 1e-12 for any accepted rate.
    let radius = 200f64.max((lmax + 12.0 * lmax.sqrt() + 30.0).ceil()) as i64;
    Ok(BimodalPoisson {
        name: format!("bimodal_poisson({lambda1}, {lambda2})"),
        lambda1,
        lambda2,
        radius,
    })
}

impl BimodalPoisson {
    fn mix(&self, k: u64) -> f64 {
        0.5 * poisson_pmf(k, self.lambda1) + 0.5 * poisson_pmf(k, self.lambda2)
    }

    pub fn truncation_radius(&self) -> i64 {
        self.radius
    }
}

impl DiscreteModel<i64> for BimodalPoisson {
    fn name(&self) -> &str {
        &self.name
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<i64> {
        let lambda = if rng.next_bool() {
            self.lambda1
        } else {
            self.lambda2
        };
        let k = poisson_draw(lambda, self.radius as u64, rng) as i64;
        let sign = if rng.next_bool() { 1 } else { -1 };
        Ok(sign * k)
    }

    fn pmf(&self, x: &i64) -> Option<f64> {
        let k = x.unsigned_abs();
        Some(if *x == 0 {
            self.mix(0)
        } else {
            0.5 * self.mix(k)
        })
    }

    fn enumerate(&self) -> Option<Vec<i64>> {
        Some((-self.radius..=self.radius).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_rates() {
        assert!(bimodal_poisson(0.0, 1.0).is_err());
        assert!(bimodal_poisson(10.0, -2.0).is_err());
        assert!(bimodal_poisson(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn pmf_is_symmetric_off_zero() {
        let m = bimodal_poisson(10.0, 20.0).unwrap();
        for x in 1..=60i64 {
            assert_eq!(m.pmf(&x), m.pmf(&-x));
        }
    }

    #[test]
    fn pmf_sums_to_one_on_truncation() {
        // Direct summation oracle over [-200, 200].
        for (l1, l2) in [(10.0, 20.0), (10.0, 25.0), (30.0, 30.0), (1.0, 2.0)] {
            let m = bimodal_poisson(l1, l2).unwrap();
            let total: f64 = (-200..=200i64).map(|x| m.pmf(&x).unwrap()).sum();
            assert!(
                (total - 1.0).abs() < 1e-9,
                "({l1}, {l2}) sums to {total}"
            );
        }
    }

    #[test]
    fn modes_sit_near_the_rates() {
        let m = bimodal_poisson(10.0, 20.0).unwrap();
        // Local maxima of the positive side should be near 10 and 20.
        let pmf = |x: i64| m.pmf(&x).unwrap();
        assert!(pmf(10) > pmf(15));
        assert!(pmf(20) > pmf(15));
        assert!(pmf(10) > pmf(2));
    }

    #[test]
    fn sampler_matches_pmf_frequencies() {
        let m = bimodal_poisson(10.0, 20.0).unwrap();
        let mut rng = RandomSource::new(9);
        let draws = 300_000;
        let mut hist = std::collections::HashMap::new();
        for _ in 0..draws {
            *hist.entry(m.sample(&mut rng).unwrap()).or_insert(0u64) += 1;
        }
        // chi-square sanity over |x| <= 40 cells with the tail pooled
        let mut stat = 0.0;
        let mut tail_expected = draws as f64;
        let mut tail_observed = draws as f64;
        for x in -40..=40i64 {
            let e = draws as f64 * m.pmf(&x).unwrap();
            let o = *hist.get(&x).unwrap_or(&0) as f64;
            if e >= 5.0 {
                stat += (o - e).powi(2) / e;
                tail_expected -= e;
                tail_observed -= o;
            }
        }
        if tail_expected >= 5.0 {
            stat += (tail_observed - tail_expected).powi(2) / tail_expected;
        }
        // ~60 cells; chi-square far tail at alpha = 1e-4 is ~120.
        assert!(stat < 140.0, "sampler/pmf chi-square statistic {stat}");
    }
}
