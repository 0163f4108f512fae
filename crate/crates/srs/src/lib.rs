//! Exact, distribution-free goodness-of-fit testing for discrete
//! distributions on structured domains.
//!
//! The test ranks each observation within `m` fresh samples from the
//! candidate distribution under a practitioner-chosen total order, breaking
//! ties with paired uniforms. Under the null hypothesis the rank is exactly
//! uniform on `{0, ..., m}` for every candidate distribution, so a single
//! uniformity test of the rank histogram decides goodness of fit — no
//! probabilities of the candidate are ever evaluated, only sampled.
//!
//! The crate provides the ranking core ([`rank`]), a library of total
//! orders over bit strings, set partitions, and spin lattices
//! ([`orderings`]), distribution families with samplers and pmfs
//! ([`models`]), the exact rank law for enumerable pairs ([`exact`]),
//! uniformity tests ([`uniformity`]), a power-study harness ([`power`]),
//! and an MCMC sample-quality diagnostic ([`diagnose`]).

pub mod diagnose;
pub mod domain;
pub mod error;
pub mod exact;
pub mod model;
pub mod models;
pub mod order;
pub mod orderings;
pub mod power;
pub mod rank;
pub mod rng;
pub mod special;
pub mod test_support;
pub mod uniformity;

pub use domain::{enumerate_partitions, BitString, Partition, SpinLattice};
pub use error::{Result, SrsError};
pub use model::{DiscreteModel, MixtureModel};
pub use order::{validate_total_order, NaturalOrder, TotalOrder};
pub use rank::{rank_dataset, rank_observation, rank_sample, stochastic_rank, RankHistogram, RankSample};
pub use rng::RandomSource;
pub use uniformity::{binomial_normal_test, chisq_uniformity, Decision, TestMethod, TestReport};
