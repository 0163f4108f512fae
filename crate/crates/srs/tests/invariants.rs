//! Property tests for the algebraic invariants of the core operations.

use proptest::prelude::*;

use srs::exact::{exact_rank_pmf_from_sorted_tables, sup_norm_to_uniform};
use srs::order::NaturalOrder;
use srs::rank::stochastic_rank;

fn pmf_strategy(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|mut v| {
        let total: f64 = v.iter().sum();
        for x in &mut v {
            *x /= total;
        }
        v
    })
}

proptest! {
    #[test]
    fn rank_stays_in_range(
        y in -50i64..50,
        xs in prop::collection::vec(-50i64..50, 1..30),
        u0 in 1e-9f64..1.0,
        seed in any::<u64>(),
    ) {
        prop_assume!(u0 < 1.0);
        let mut rng = srs::RandomSource::new(seed);
        let us: Vec<f64> = xs.iter().map(|_| rng.next_open01()).collect();
        let m = xs.len() as u32;
        let r = stochastic_rank(&y, &xs, u0, &us, &NaturalOrder).unwrap();
        prop_assert!(r <= m);
    }

    #[test]
    fn exact_rank_pmf_is_a_probability_vector(
        p in pmf_strategy(6),
        q in pmf_strategy(6),
        m in 1u32..8,
    ) {
        let pmf = exact_rank_pmf_from_sorted_tables(&p, &q, m).unwrap();
        let total: f64 = pmf.probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(pmf.probs.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
        prop_assert!(sup_norm_to_uniform(&pmf) <= 1.0);
    }

    #[test]
    fn equal_tables_give_uniform_ranks(p in pmf_strategy(7), m in 1u32..10) {
        let pmf = exact_rank_pmf_from_sorted_tables(&p, &p, m).unwrap();
        prop_assert!(sup_norm_to_uniform(&pmf) < 1e-12);
    }

    #[test]
    fn l_inf_is_a_metric_on_tables(
        p in pmf_strategy(8),
        q in pmf_strategy(8),
    ) {
        let d_pq = srs::power::l_inf_distance(&p, &q).unwrap();
        let d_qp = srs::power::l_inf_distance(&q, &p).unwrap();
        prop_assert_eq!(d_pq, d_qp);
        prop_assert!((0.0..=1.0).contains(&d_pq));
        prop_assert!(srs::power::l_inf_distance(&p, &p).unwrap() == 0.0);
    }
}
