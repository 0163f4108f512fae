//! Uniformity tests over rank histograms: Pearson chi-square for general m
//! and the normal-approximation binomial test for m = 1.

use serde::Serialize;

use crate::error::{Result, SrsError};
use crate::rank::RankHistogram;
use crate::special::{chisq_survival, normal_cdf, normal_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Reject,
    NotReject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestMethod {
    Chisq,
    BinomialNormal,
}

/// Outcome of a uniformity test. `decision` is `Reject` exactly when
/// `p_value <= alpha`.
#[derive(Debug, Clone, Serialize)]
pub struct TestReport {
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub alpha: f64,
    pub decision: Decision,
    pub method: TestMethod,
    /// Advisory only; set when expected counts run low.
    pub warning: Option<String>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SrsError::invalid(format!(
            "significance level must lie in (0, 1), got {alpha}"
        )));
    }
    Ok(())
}

fn decide(p_value: f64, alpha: f64) -> Decision {
    if p_value <= alpha {
        Decision::Reject
    } else {
        Decision::NotReject
    }
}

/// Pearson chi-square against the discrete uniform on `{0, ..., m}`.
///
/// The null fully specifies every bin, so df = m regardless of observed
/// zeros. Expected counts below 5 produce a warning, not an error.
pub fn chisq_uniformity(hist: &RankHistogram, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    let n = hist.n();
    if n == 0 {
        return Err(SrsError::invalid("empty histogram"));
    }
    let bins = hist.m() as usize + 1;
    let expected = n as f64 / bins as f64;
    let statistic: f64 = hist
        .counts()
        .iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum();
    let p_value = chisq_survival(statistic, hist.m())?;
    let warning = (expected < 5.0).then(|| {
        format!("expected count per bin is {expected:.2} (< 5); chi-square approximation is rough")
    });
    Ok(TestReport {
        statistic,
        df: hist.m(),
        p_value,
        alpha,
        decision: decide(p_value, alpha),
        method: TestMethod::Chisq,
        warning,
    })
}

/// Two-sided binomial test via the normal approximation, m = 1 only:
/// `z = 2 sqrt(n) (B - 1/2)` with `B` the fraction of rank-0 observations,
/// `p = 2 Phi(-|z|)`, no continuity correction.
pub fn binomial_normal_test(hist: &RankHistogram, alpha: f64) -> Result<TestReport> {
    check_alpha(alpha)?;
    if hist.m() != 1 {
        return Err(SrsError::invalid(format!(
            "binomial test requires m = 1, got m = {}",
            hist.m()
        )));
    }
    let n = hist.n();
    if n == 0 {
        return Err(SrsError::invalid("empty histogram"));
    }
    let b_hat = hist.counts()[0] as f64 / n as f64;
    let z = 2.0 * (n as f64).sqrt() * (b_hat - 0.5);
    let p_value = (2.0 * normal_cdf(-z.abs())).min(1.0);
    Ok(TestReport {
        statistic: z,
        df: 1,
        p_value,
        alpha,
        decision: decide(p_value, alpha),
        method: TestMethod::BinomialNormal,
        warning: None,
    })
}

/// Critical proportion γ = 1/2 + c / (2 sqrt(n)) with c = -Φ⁻¹(α/2): the
/// binomial test rejects exactly when the rank-0 fraction leaves
/// `[1 - γ, γ]`.
pub fn binomial_critical_fraction(n: u64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(SrsError::invalid("need n >= 1"));
    }
    let c = -normal_quantile(alpha / 2.0)?;
    Ok(0.5 + c / (2.0 * (n as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(counts: &[u64]) -> RankHistogram {
        let mut h = RankHistogram::new(counts.len() as u32 - 1);
        for (r, &c) in counts.iter().enumerate() {
            for _ in 0..c {
                h.record(r as u32);
            }
        }
        h
    }

    #[test]
    fn perfectly_uniform_counts_do_not_reject() {
        let report = chisq_uniformity(&hist(&[10, 10, 10]), 0.05).unwrap();
        assert_eq!(report.statistic, 0.0);
        assert_eq!(report.df, 2);
        assert!((report.p_value - 1.0).abs() < 1e-12);
        assert_eq!(report.decision, Decision::NotReject);
    }

    #[test]
    fn mild_imbalance_m1() {
        // counts (10, 20): statistic 25/15 + 25/15 = 10/3, p ~ 0.0679
        let report = chisq_uniformity(&hist(&[10, 20]), 0.05).unwrap();
        assert!((report.statistic - 10.0 / 3.0).abs() < 1e-12);
        assert_eq!(report.df, 1);
        assert!((report.p_value - 0.067_889_154_861_828_93).abs() < 1e-12);
        assert_eq!(report.decision, Decision::NotReject);
    }

    #[test]
    fn severe_imbalance_rejects() {
        let report = chisq_uniformity(&hist(&[30, 0]), 0.05).unwrap();
        assert!((report.statistic - 30.0).abs() < 1e-12);
        assert!(report.p_value < 1e-6);
        assert_eq!(report.decision, Decision::Reject);
    }

    #[test]
    fn low_count_warning_fires_below_five_per_bin() {
        let report = chisq_uniformity(&hist(&[3, 2, 4]), 0.05).unwrap();
        assert!(report.warning.is_some());
        let report = chisq_uniformity(&hist(&[50, 50]), 0.05).unwrap();
        assert!(report.warning.is_none());
    }

    #[test]
    fn chisq_input_validation() {
        assert!(chisq_uniformity(&RankHistogram::new(3), 0.05).is_err()); // n = 0
        assert!(chisq_uniformity(&hist(&[1, 1]), 0.0).is_err());
        assert!(chisq_uniformity(&hist(&[1, 1]), 1.0).is_err());
    }

    #[test]
    fn binomial_balanced_is_p_one() {
        let report = binomial_normal_test(&hist(&[50, 50]), 0.05).unwrap();
        assert_eq!(report.statistic, 0.0);
        assert!((report.p_value - 1.0).abs() < 1e-12);
        assert_eq!(report.decision, Decision::NotReject);
    }

    #[test]
    fn binomial_example_n400() {
        // count_0 = 240 of 400: z = 2 * 20 * 0.1 = 4, p ~ 6.334e-5
        let report = binomial_normal_test(&hist(&[240, 160]), 0.05).unwrap();
        assert!((report.statistic - 4.0).abs() < 1e-12);
        assert!((report.p_value - 6.334_248_366_623_973e-5).abs() < 1e-15);
        assert_eq!(report.decision, Decision::Reject);
    }

    #[test]
    fn binomial_requires_m_equal_one() {
        assert!(binomial_normal_test(&hist(&[5, 5, 5]), 0.05).is_err());
    }

    #[test]
    fn critical_fraction_example() {
        // alpha = 0.05, n = 246: gamma ~ 0.5625
        let gamma = binomial_critical_fraction(246, 0.05).unwrap();
        assert!((gamma - 0.562_481_369_749_278_5).abs() < 1e-9);
    }

    #[test]
    fn rejection_boundary_consistent_with_critical_fraction() {
        // n = 246: counts of 139 zeros cross gamma; 138 do not.
        let reject = binomial_normal_test(&hist(&[139, 107]), 0.05).unwrap();
        assert_eq!(reject.decision, Decision::Reject);
        let keep = binomial_normal_test(&hist(&[138, 108]), 0.05).unwrap();
        assert_eq!(keep.decision, Decision::NotReject);
        let gamma = binomial_critical_fraction(246, 0.05).unwrap();
        assert!(139.0 / 246.0 > gamma && 138.0 / 246.0 < gamma);
    }

    #[test]
    fn decision_always_tracks_p_value_vs_alpha() {
        for counts in [[10u64, 20], [15, 15], [0, 30], [13, 17]] {
            for alpha in [0.01, 0.05, 0.5] {
                for report in [
                    chisq_uniformity(&hist(&counts), alpha).unwrap(),
                    binomial_normal_test(&hist(&counts), alpha).unwrap(),
                ] {
                    assert_eq!(
                        report.decision == Decision::Reject,
                        report.p_value <= report.alpha
                    );
                }
            }
        }
    }

    #[test]
    fn report_serializes_all_fields() {
        let report = chisq_uniformity(&hist(&[10, 20]), 0.05).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        for key in ["statistic", "df", "p_value", "alpha", "decision", "method", "warning"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["method"], "chisq");
        assert_eq!(json["decision"], "not_reject");
    }
}
