//! Bit-string families: uniform, odd parity, and tied first half.
//!
//! All three give every bit marginal probability 1/2, so they differ only
//! through higher-order structure.

use crate::domain::BitString;
use crate::error::{Result, SrsError};
use crate::model::DiscreteModel;
use crate::rng::RandomSource;

/// Which predicate the family is uniform over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitFamily {
    /// Uniform over all 2^k strings.
    Independent,
    /// Uniform over strings with an odd number of ones.
    OddParity,
    /// Uniform over strings whose first k/2 bits agree.
    TiedHalf,
}

pub struct BitStringFamily {
    name: String,
    k: u32,
    family: BitFamily,
}

const ENUMERATION_LIMIT: u32 = 20;

pub fn bitstring_family(k: u32, family: BitFamily) -> Result<BitStringFamily> {
    if !(2..=64).contains(&k) {
        return Err(SrsError::invalid(format!(
            "bit string length must be in 2..=64, got {k}"
        )));
    }
    if family == BitFamily::TiedHalf && !k.is_multiple_of(2) {
        return Err(SrsError::invalid(format!(
            "tied-half family needs an even length, got {k}"
        )));
    }
    let tag = match family {
        BitFamily::Independent => "ind",
        BitFamily::OddParity => "odd",
        BitFamily::TiedHalf => "tie",
    };
    Ok(BitStringFamily {
        name: format!("bitstring_{tag}(k={k})"),
        k,
        family,
    })
}

impl BitStringFamily {
    fn mask(&self, bits: u32) -> u64 {
        if bits == 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        }
    }

    fn member(&self, x: &BitString) -> bool {
        match self.family {
            BitFamily::Independent => true,
            BitFamily::OddParity => x.word().count_ones() % 2 == 1,
            BitFamily::TiedHalf => {
                let half = self.k / 2;
                let high = x.word() >> (self.k - half);
                high == 0 || high == self.mask(half)
            }
        }
    }

    /// Log2 of the support size.
    fn support_bits(&self) -> u32 {
        match self.family {
            BitFamily::Independent => self.k,
            BitFamily::OddParity => self.k - 1,
            BitFamily::TiedHalf => self.k / 2 + 1,
        }
    }
}

impl DiscreteModel<BitString> for BitStringFamily {
    fn name(&self) -> &str {
        &self.name
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<BitString> {
        let k = self.k;
        let word = match self.family {
            BitFamily::Independent => rng.next_u64() & self.mask(k),
            BitFamily::OddParity => {
                // k-1 free bits (x_1..x_{k-1}); the last bit fixes parity.
                let free = rng.next_u64() & self.mask(k - 1);
                let fix = 1 ^ (free.count_ones() as u64 & 1);
                (free << 1) | fix
            }
            BitFamily::TiedHalf => {
                // one shared bit for the first half, k/2 free bits after.
                let half = k / 2;
                let free = rng.next_u64() & self.mask(half);
                let shared = if rng.next_bool() {
                    self.mask(half) << half
                } else {
                    0
                };
                shared | free
            }
        };
        BitString::new(k as usize, word)
    }

    fn pmf(&self, x: &BitString) -> Option<f64> {
        if x.len() != self.k as usize {
            return Some(0.0);
        }
        Some(if self.member(x) {
            (0.5f64).powi(self.support_bits() as i32)
        } else {
            0.0
        })
    }

    fn enumerate(&self) -> Option<Vec<BitString>> {
        if self.k > ENUMERATION_LIMIT {
            return None;
        }
        let k = self.k as usize;
        Some(
            (0..(1u64 << self.k))
                .map(|w| BitString::new(k, w).expect("word fits"))
                .collect(),
        )
    }
}
