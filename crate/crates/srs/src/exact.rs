//! Exact sampling distribution of the rank statistic for enumerable pairs.
//!
//! For any pair of models over a common finite domain and any total order,
//! the rank pmf has a closed form: `Pr{R = r} = Σ_x H(x, m, r) q(x)`, where
//! `H` splits on the candidate mass at `x`. With `p(x) = 0` the rank is
//! binomial in the below-`x` mass; with `p(x) = 1` it is uniform; otherwise
//! it mixes over the number of exact ties `e`, whose tie-break positions are
//! uniform on `{0, ..., e}`, with the remaining `m - e` candidates binomial
//! in the renormalized below-mass.
//!
//! Countably infinite models participate through truncated enumerations;
//! the neglected tail must be below 1e-9 and is reported on the result.

use rayon::prelude::*;

use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::order::TotalOrder;
use crate::rank::rank_observation;
use crate::rng::RandomSource;
use crate::special::{binomial_pmf, KahanSum};

/// The exact law of the rank statistic: `probs[r] = Pr{R = r}`.
#[derive(Debug, Clone)]
pub struct ExactRankPmf {
    pub m: u32,
    pub probs: Vec<f64>,
    /// Candidate-model mass outside the enumerated domain.
    pub p_tail: f64,
    /// Observation-model mass outside the enumerated domain.
    pub q_tail: f64,
}

/// A domain sorted by a total order together with each element's pmf value
/// and strictly-below cumulative mass.
pub struct OrderedCdf<T> {
    pub elements: Vec<T>,
    pub pmf: Vec<f64>,
    /// `below[i] = Σ_{j < i} pmf[j]`, the left-open CDF.
    pub below: Vec<f64>,
}

impl<T> OrderedCdf<T> {
    /// Sort a model's enumerated domain by `order` and accumulate its CDF.
    pub fn build(
        model: &dyn DiscreteModel<T>,
        order: &dyn TotalOrder<T>,
    ) -> Result<OrderedCdf<T>> {
        let mut elements = model.enumerate().ok_or_else(|| SrsError::MissingCapability {
            model: model.name().to_string(),
            capability: "enumerate",
        })?;
        if elements.is_empty() {
            return Err(SrsError::invalid("model enumerated an empty domain"));
        }
        // One pass against a fixed pivot surfaces structural mismatches so
        // the sort below cannot fail.
        let (pivot, rest) = elements.split_first().expect("non-empty");
        for e in rest {
            order.compare(e, pivot)?;
        }
        elements.sort_by(|a, b| order.compare(a, b).expect("domain validated"));
        let mut pmf = Vec::with_capacity(elements.len());
        for e in &elements {
            let mass = model.pmf(e).ok_or_else(|| SrsError::MissingCapability {
                model: model.name().to_string(),
                capability: "pmf",
            })?;
            pmf.push(mass);
        }
        let mut below = Vec::with_capacity(elements.len());
        let mut acc = KahanSum::default();
        for &mass in &pmf {
            below.push(acc.value());
            acc.add(mass);
        }
        Ok(OrderedCdf {
            elements,
            pmf,
            below,
        })
    }

    pub fn total_mass(&self) -> f64 {
        let mut acc = KahanSum::default();
        for &p in &self.pmf {
            acc.add(p);
        }
        acc.value()
    }
}

/// `H(x, m, ·)` for a domain point with candidate mass `px` and
/// strictly-below candidate mass `ptx`; one probability per rank.
fn rank_kernel(px: f64, ptx: f64, m: u32) -> Vec<f64> {
    let bins = m as usize + 1;
    let mut h = vec![0.0; bins];
    if px <= 0.0 {
        for (r, slot) in h.iter_mut().enumerate() {
            *slot = binomial_pmf(r as u32, m, ptx);
        }
        return h;
    }
    if px >= 1.0 {
        h.fill(1.0 / bins as f64);
        return h;
    }
    // 0 < p(x) < 1: condition on the tie count e ~ Binomial(m, px); the
    // observation's position among the ties is uniform on {0..e}; the
    // m - e non-tied candidates fall below with probability ptx / (1 - px).
    let below_given_not_tied = (ptx / (1.0 - px)).clamp(0.0, 1.0);
    let mut prefix = vec![0.0; bins + 1];
    for e in 0..=m {
        let tie_weight = binomial_pmf(e, m, px) / f64::from(e + 1);
        if tie_weight == 0.0 {
            continue;
        }
        let free = m - e;
        // prefix[l + 1] = P(L <= l) for L ~ Binomial(free, below | not tied)
        prefix[0] = 0.0;
        for l in 0..=free {
            prefix[l as usize + 1] =
                prefix[l as usize] + binomial_pmf(l, free, below_given_not_tied);
        }
        for (r, slot) in h.iter_mut().enumerate() {
            let r = r as u32;
            let lo = r.saturating_sub(e);
            let hi = r.min(free);
            if hi >= lo {
                *slot += tie_weight * (prefix[hi as usize + 1] - prefix[lo as usize]);
            }
        }
    }
    h
}

/// Exact rank pmf for observations from `q` ranked within `m` candidates
/// from `p` under `order`. Both models must enumerate the same domain.
pub fn exact_rank_pmf<T: Clone + Sync>(
    p: &dyn DiscreteModel<T>,
    q: &dyn DiscreteModel<T>,
    order: &(dyn TotalOrder<T> + Sync),
    m: u32,
) -> Result<ExactRankPmf> {
    if m == 0 {
        return Err(SrsError::invalid("m must be >= 1"));
    }
    let p_cdf = OrderedCdf::build(p, order)?;
    let q_cdf = OrderedCdf::build(q, order)?;
    if p_cdf.elements.len() != q_cdf.elements.len() {
        return Err(SrsError::mismatch(format!(
            "models enumerate {} vs {} elements",
            p_cdf.elements.len(),
            q_cdf.elements.len()
        )));
    }
    for (a, b) in p_cdf.elements.iter().zip(&q_cdf.elements) {
        if order.compare(a, b)? != std::cmp::Ordering::Equal {
            return Err(SrsError::mismatch(
                "models enumerate different domains".to_string(),
            ));
        }
    }
    let p_tail = (1.0 - p_cdf.total_mass()).max(0.0);
    let q_tail = (1.0 - q_cdf.total_mass()).max(0.0);
    for (label, tail) in [("p", p_tail), ("q", q_tail)] {
        if tail > 1e-9 {
            return Err(SrsError::invalid(format!(
                "enumerated domain misses {tail:.3e} of {label}'s mass (limit 1e-9)"
            )));
        }
    }

    let bins = m as usize + 1;
    // Deterministic parallel reduction: fixed-size chunks combined in order.
    let chunk = 4096;
    let n = p_cdf.elements.len();
    let partials: Vec<Vec<KahanSum>> = (0..n.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let mut acc = vec![KahanSum::default(); bins];
            let lo = ci * chunk;
            let hi = (lo + chunk).min(n);
            for i in lo..hi {
                let qx = q_cdf.pmf[i];
                if qx == 0.0 {
                    continue;
                }
                let h = rank_kernel(p_cdf.pmf[i], p_cdf.below[i], m);
                for (slot, hv) in acc.iter_mut().zip(&h) {
                    slot.add(hv * qx);
                }
            }
            acc
        })
        .collect();
    let mut probs = vec![KahanSum::default(); bins];
    for part in partials {
        for (slot, p) in probs.iter_mut().zip(part) {
            slot.add(p.value());
        }
    }
    Ok(ExactRankPmf {
        m,
        probs: probs.iter().map(|k| k.value()).collect(),
        p_tail,
        q_tail,
    })
}

/// Exact rank pmf straight from aligned tables (index order = domain order
/// already sorted by the intended total order).
pub fn exact_rank_pmf_from_sorted_tables(p: &[f64], q: &[f64], m: u32) -> Result<ExactRankPmf> {
    if m == 0 {
        return Err(SrsError::invalid("m must be >= 1"));
    }
    if p.is_empty() || p.len() != q.len() {
        return Err(SrsError::mismatch("tables must be equal-length and non-empty"));
    }
    let bins = m as usize + 1;
    let mut probs = vec![KahanSum::default(); bins];
    let mut below = 0.0f64;
    let mut p_total = KahanSum::default();
    let mut q_total = KahanSum::default();
    for i in 0..p.len() {
        q_total.add(q[i]);
        if q[i] > 0.0 {
            let h = rank_kernel(p[i], below, m);
            for (slot, hv) in probs.iter_mut().zip(&h) {
                slot.add(hv * q[i]);
            }
        }
        p_total.add(p[i]);
        below = p_total.value();
    }
    Ok(ExactRankPmf {
        m,
        probs: probs.iter().map(|k| k.value()).collect(),
        p_tail: (1.0 - p_total.value()).max(0.0),
        q_tail: (1.0 - q_total.value()).max(0.0),
    })
}

/// `max_r |Pr{R = r} - 1/(m+1)|`, the distance from the null law.
pub fn sup_norm_to_uniform(pmf: &ExactRankPmf) -> f64 {
    let uniform = 1.0 / (pmf.m as f64 + 1.0);
    pmf.probs
        .iter()
        .map(|&p| (p - uniform).abs())
        .fold(0.0, f64::max)
}

/// Monte Carlo estimate of the rank pmf with per-bin standard errors.
#[derive(Debug, Clone)]
pub struct MonteCarloRankPmf {
    pub m: u32,
    pub probs: Vec<f64>,
    pub std_err: Vec<f64>,
    pub draws: u64,
}

/// Direct simulation of the ranking process: `draws` independent
/// replicates, each drawing one observation from `q` and `m` candidates
/// from `p` on its own child stream. Serves as the independent oracle for
/// [`exact_rank_pmf`].
pub fn mc_rank_pmf<T: Sync>(
    p: &(dyn DiscreteModel<T> + Sync),
    q: &(dyn DiscreteModel<T> + Sync),
    order: &(dyn TotalOrder<T> + Sync),
    m: u32,
    draws: u64,
    rng: &RandomSource,
) -> Result<MonteCarloRankPmf> {
    if m == 0 {
        return Err(SrsError::invalid("m must be >= 1"));
    }
    if draws < 10_000 {
        return Err(SrsError::invalid(format!(
            "need at least 10^4 draws for a useful estimate, got {draws}"
        )));
    }
    let bins = m as usize + 1;
    let counts = (0..draws)
        .into_par_iter()
        .try_fold(
            || vec![0u64; bins],
            |mut acc, i| -> Result<Vec<u64>> {
                let mut child = rng.child(i);
                let y = q.sample(&mut child)?;
                let r = rank_observation(&y, p, m, order, &mut child)?;
                acc[r as usize] += 1;
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; bins],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / draws as f64).collect();
    let std_err = probs
        .iter()
        .map(|&ph| (ph * (1.0 - ph) / draws as f64).sqrt())
        .collect();
    Ok(MonteCarloRankPmf {
        m,
        probs,
        std_err,
        draws,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::TableModel;
    use crate::order::NaturalOrder;

    fn table(probs: &[f64]) -> TableModel {
        TableModel::new("t", probs.to_vec()).unwrap()
    }

    fn assert_pmf_close(pmf: &ExactRankPmf, want: &[f64], tol: f64) {
        assert_eq!(pmf.probs.len(), want.len());
        for (got, want) in pmf.probs.iter().zip(want) {
            assert!((got - want).abs() <= tol, "{:?} vs {want:?}", pmf.probs);
        }
    }

    #[test]
    fn equal_models_are_exactly_uniform() {
        let p = table(&[0.1, 0.4, 0.25, 0.25]);
        for m in [1u32, 2, 5, 9] {
            let pmf = exact_rank_pmf(&p, &p, &NaturalOrder, m).unwrap();
            let want = vec![1.0 / (m as f64 + 1.0); m as usize + 1];
            assert_pmf_close(&pmf, &want, 1e-12);
            assert!(sup_norm_to_uniform(&pmf) < 1e-12);
        }
    }

    #[test]
    fn interleaved_point_masses_match_the_remark() {
        // p = (1/2)δ0 + (1/2)δ3, q = (1/2)δ1 + (1/2)δ2 on {0, 1, 2, 3}:
        // uniform at m = 1 despite p != q, non-uniform at m = 2.
        let p = table(&[0.5, 0.0, 0.0, 0.5]);
        let q = table(&[0.0, 0.5, 0.5, 0.0]);
        let at1 = exact_rank_pmf(&p, &q, &NaturalOrder, 1).unwrap();
        assert_pmf_close(&at1, &[0.5, 0.5], 1e-12);
        let at2 = exact_rank_pmf(&p, &q, &NaturalOrder, 2).unwrap();
        assert_pmf_close(&at2, &[0.25, 0.5, 0.25], 1e-12);
        assert!((sup_norm_to_uniform(&at2) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = RandomSource::new(17);
        for _ in 0..50 {
            let (pv, qv) = crate::test_support::random_pmf_pair(6, &mut rng);
            let p = table(&pv);
            let q = table(&qv);
            for m in [1u32, 3, 5, 8] {
                let pmf = exact_rank_pmf(&p, &q, &NaturalOrder, m).unwrap();
                let total: f64 = pmf.probs.iter().sum();
                assert!((total - 1.0).abs() < 1e-9, "sum {total}");
                assert!(pmf.probs.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn matches_brute_force_enumeration_oracle() {
        // Independent oracle: enumerate all (x0, x_1..x_m) assignments; the
        // tie position is uniform on {0..e} among e ties.
        fn brute_force(p: &[f64], q: &[f64], m: usize) -> Vec<f64> {
            let k = p.len();
            let mut out = vec![0.0; m + 1];
            let mut assignment = vec![0usize; m];
            loop {
                for (x0, &qx) in q.iter().enumerate() {
                    if qx == 0.0 {
                        continue;
                    }
                    let mut weight = qx;
                    for &xi in &assignment {
                        weight *= p[xi];
                    }
                    if weight > 0.0 {
                        let below = assignment.iter().filter(|&&xi| xi < x0).count();
                        let ties = assignment.iter().filter(|&&xi| xi == x0).count();
                        for t in 0..=ties {
                            out[below + t] += weight / (ties as f64 + 1.0);
                        }
                    }
                }
                // odometer over assignments
                let mut i = 0;
                loop {
                    if i == m {
                        return out;
                    }
                    assignment[i] += 1;
                    if assignment[i] < k {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
            }
        }

        let mut rng = RandomSource::new(23);
        for _ in 0..10 {
            let (pv, qv) = crate::test_support::random_pmf_pair(4, &mut rng);
            for m in [1u32, 2, 3, 4] {
                let got = exact_rank_pmf(&table(&pv), &table(&qv), &NaturalOrder, m).unwrap();
                let want = brute_force(&pv, &qv, m as usize);
                for (g, w) in got.probs.iter().zip(&want) {
                    assert!((g - w).abs() < 1e-12, "m={m}: {:?} vs {want:?}", got.probs);
                }
            }
        }
    }

    #[test]
    fn sup_norm_examples() {
        let uniform = ExactRankPmf {
            m: 3,
            probs: vec![0.25; 4],
            p_tail: 0.0,
            q_tail: 0.0,
        };
        assert_eq!(sup_norm_to_uniform(&uniform), 0.0);
        let skewed = ExactRankPmf {
            m: 2,
            probs: vec![0.25, 0.5, 0.25],
            p_tail: 0.0,
            q_tail: 0.0,
        };
        assert!((sup_norm_to_uniform(&skewed) - 1.0 / 6.0).abs() < 1e-15);
        let point = ExactRankPmf {
            m: 1,
            probs: vec![1.0, 0.0],
            p_tail: 0.0,
            q_tail: 0.0,
        };
        assert!((sup_norm_to_uniform(&point) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ordered_cdf_invariants() {
        let mut rng = RandomSource::new(3);
        for _ in 0..20 {
            let (pv, _) = crate::test_support::random_pmf_pair(9, &mut rng);
            let model = table(&pv);
            let cdf = OrderedCdf::build(&model, &NaturalOrder).unwrap();
            assert_eq!(cdf.below[0], 0.0);
            for w in cdf.below.windows(2) {
                assert!(w[1] >= w[0]);
            }
            for (b, p) in cdf.below.iter().zip(&cdf.pmf) {
                assert!(b + p <= 1.0 + 1e-12);
            }
            assert!((cdf.total_mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sorted_table_shortcut_agrees_with_model_path() {
        let mut rng = RandomSource::new(29);
        let (pv, qv) = crate::test_support::random_pmf_pair(7, &mut rng);
        for m in [1u32, 4] {
            let a = exact_rank_pmf(&table(&pv), &table(&qv), &NaturalOrder, m).unwrap();
            let b = exact_rank_pmf_from_sorted_tables(&pv, &qv, m).unwrap();
            for (x, y) in a.probs.iter().zip(&b.probs) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn mc_oracle_agrees_on_the_null() {
        // p = q uniform on {0, 1}, m = 3: every bin 1/4 within 3 SE.
        let p = table(&[0.5, 0.5]);
        let mc = mc_rank_pmf(&p, &p, &NaturalOrder, 3, 1_000_000, &RandomSource::new(5)).unwrap();
        for (i, (&ph, &se)) in mc.probs.iter().zip(&mc.std_err).enumerate() {
            assert!((ph - 0.25).abs() <= 3.0 * se, "bin {i}: {ph} +/- {se}");
        }
    }

    #[test]
    fn mc_is_deterministic_under_a_seed() {
        let p = table(&[0.3, 0.7]);
        let q = table(&[0.6, 0.4]);
        let rng = RandomSource::new(10);
        let a = mc_rank_pmf(&p, &q, &NaturalOrder, 2, 20_000, &rng).unwrap();
        let b = mc_rank_pmf(&p, &q, &NaturalOrder, 2, 20_000, &rng).unwrap();
        assert_eq!(a.probs, b.probs);
    }

    #[test]
    fn mc_rejects_tiny_draw_counts() {
        let p = table(&[1.0]);
        assert!(mc_rank_pmf(&p, &p, &NaturalOrder, 1, 100, &RandomSource::new(0)).is_err());
    }

    #[test]
    fn mismatched_domains_error() {
        let p = table(&[0.5, 0.5]);
        let q = table(&[0.4, 0.3, 0.3]);
        assert!(exact_rank_pmf(&p, &q, &NaturalOrder, 2).is_err());
    }

    #[test]
    fn theorem_three_style_persistence_on_random_pairs() {
        // Once the sup-norm leaves zero at some M <= 6 it stays away from
        // zero for m in [M, M + 5]; the m = 1 deviation, when present,
        // persists through m = 8.
        let mut rng = RandomSource::new(31);
        for _ in 0..50 {
            let (pv, qv) = crate::test_support::random_pmf_pair(6, &mut rng);
            let p = table(&pv);
            let q = table(&qv);
            let sup = |m: u32| {
                sup_norm_to_uniform(&exact_rank_pmf(&p, &q, &NaturalOrder, m).unwrap())
            };
            let first_m = (1..=6u32).find(|&m| sup(m) > 1e-9);
            if let Some(big_m) = first_m {
                for m in big_m..=big_m + 5 {
                    assert!(sup(m) > 1e-9, "sup-norm collapsed at m={m}");
                }
            }
            if sup(1) > 1e-9 {
                for m in 1..=8u32 {
                    assert!(sup(m) > 1e-9, "m=1 deviation vanished at m={m}");
                }
            }
        }
    }
}
