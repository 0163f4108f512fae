//! Two-parameter Chinese restaurant process over set partitions.
//!
//! With discount `a` and strength `b`, the probability of a partition with
//! blocks of sizes c_1..c_k is
//!
//! ```text
//!   (b|a)_k / (b|1)_N * prod_i (1-a)_{c_i - 1}
//! ```
//!
//! where `(x|y)_n = x (x+y) (x+2y) ... (x+(n-1)y)` and `(1-a)_{c-1}` is the
//! rising factorial `(1-a)(2-a)...(c-1-a)` with empty products equal to 1.
//! At `a = 0` this reduces to `b^k / (b|1)_N * prod_i (c_i - 1)!`. Sampling
//! seats customers sequentially: customer t+1 joins an existing block of
//! size c with probability `(c - a)/(t + b)` and opens a new block with
//! probability `(b + k a)/(t + b)`.

use std::sync::Arc;

use crate::domain::{enumerate_partitions, Partition};
use crate::error::{Result, SrsError};
use crate::model::{DiscreteModel, MixtureModel};
use crate::rng::RandomSource;

pub struct Crp {
    name: String,
    customers: u32,
    discount: f64,
    strength: f64,
}

/// Largest ground set the enumerator will expand (Bell(10) = 115,975).
const ENUMERATION_LIMIT: u32 = 10;

/// `x (x+y) (x+2y) ... (x+(n-1)y)`
fn shifted_factorial(x: f64, y: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (x + f64::from(j) * y))
}

pub fn crp(customers: u32, discount: f64, strength: f64) -> Result<Crp> {
    if customers == 0 {
        return Err(SrsError::invalid("CRP needs at least one customer"));
    }
    if !(0.0..1.0).contains(&discount) {
        return Err(SrsError::invalid(format!(
            "CRP discount must satisfy 0 <= a < 1, got {discount}"
        )));
    }
    if !strength.is_finite() || strength <= -discount {
        return Err(SrsError::invalid(format!(
            "CRP strength must satisfy b > -a, got b={strength}, a={discount}"
        )));
    }
    Ok(Crp {
        name: format!("crp(N={customers}, a={discount}, b={strength})"),
        customers,
        discount,
        strength,
    })
}

impl Crp {
    pub fn customers(&self) -> u32 {
        self.customers
    }

    /// Exact probability of `partition` under this CRP.
    pub fn probability(&self, partition: &Partition) -> Result<f64> {
        if partition.ground_size() != self.customers as usize {
            return Err(SrsError::mismatch(format!(
                "partition of {} elements scored under a CRP on {}",
                partition.ground_size(),
                self.customers
            )));
        }
        let (a, b) = (self.discount, self.strength);
        let k = partition.block_count() as u32;
        let mut value = shifted_factorial(b, a, k) / shifted_factorial(b, 1.0, self.customers);
        for size in partition.block_sizes() {
            value *= shifted_factorial(1.0 - a, 1.0, size as u32 - 1);
        }
        Ok(value)
    }
}

impl DiscreteModel<Partition> for Crp {
    fn name(&self) -> &str {
        &self.name
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<Partition> {
        let (a, b) = (self.discount, self.strength);
        let mut blocks: Vec<Vec<u32>> = vec![vec![1]];
        for t in 1..self.customers {
            let denom = f64::from(t) + b;
            let u = rng.next_open01() * denom;
            let mut acc = 0.0;
            let mut joined = false;
            for block in &mut blocks {
                acc += block.len() as f64 - a;
                if u < acc {
                    block.push(t + 1);
                    joined = true;
                    break;
                }
            }
            if !joined {
                blocks.push(vec![t + 1]);
            }
        }
        Partition::new(self.customers as usize, blocks)
    }

    fn pmf(&self, x: &Partition) -> Option<f64> {
        if x.ground_size() != self.customers as usize {
            return Some(0.0);
        }
        Some(self.probability(x).expect("ground size checked"))
    }

    fn enumerate(&self) -> Option<Vec<Partition>> {
        if self.customers > ENUMERATION_LIMIT {
            return None;
        }
        Some(enumerate_partitions(self.customers as usize))
    }
}

/// The mixed CRP null `CRP(0.26, 0.76)/2 + CRP(0.19, 5.1)/2`.
pub fn crp_mixture_p(customers: u32) -> Result<MixtureModel<Partition>> {
    let c1: Arc<dyn DiscreteModel<Partition>> = Arc::new(crp(customers, 0.26, 0.76)?);
    let c2: Arc<dyn DiscreteModel<Partition>> = Arc::new(crp(customers, 0.19, 5.1)?);
    MixtureModel::new(vec![c1, c2], vec![0.5, 0.5])
}

/// The alternative `CRP(0.52, 0.52)` paired with [`crp_mixture_p`].
pub fn crp_pair_q(customers: u32) -> Result<Crp> {
    crp(customers, 0.52, 0.52)
}
