//! Strict total orders over observation domains.
//!
//! The rank statistic is computed against a practitioner-chosen total order
//! on the domain. Orders are small immutable strategy objects behind the
//! [`TotalOrder`] trait so they can be registered by name and swapped at
//! runtime; comparisons are pure functions and safe to share across threads.

use std::cmp::Ordering;

use crate::error::{Result, SrsError};
use crate::rng::RandomSource;

/// A strict total order over `T`.
///
/// Implementations must be total (every comparable pair yields exactly one
/// of `Less`/`Equal`/`Greater`), antisymmetric, and transitive, with
/// `compare(a, a) == Equal`. Comparing structurally incompatible values
/// (mismatched lengths, ground sets, or lattice sides) is an argument error.
pub trait TotalOrder<T: ?Sized>: Send + Sync {
    /// Name the order is registered under.
    fn name(&self) -> &str;

    /// Three-way comparison.
    fn compare(&self, a: &T, b: &T) -> Result<Ordering>;
}

impl<T: ?Sized, O: TotalOrder<T> + ?Sized> TotalOrder<T> for &O {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn compare(&self, a: &T, b: &T) -> Result<Ordering> {
        (**self).compare(a, b)
    }
}

impl<T: ?Sized, O: TotalOrder<T> + ?Sized> TotalOrder<T> for std::sync::Arc<O> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn compare(&self, a: &T, b: &T) -> Result<Ordering> {
        (**self).compare(a, b)
    }
}

/// The intrinsic order of a type that is already `Ord` (integers, mostly).
#[derive(Debug, Clone, Copy, Default)]
pub struct NaturalOrder;

impl<T: Ord + Send + Sync> TotalOrder<T> for NaturalOrder {
    fn name(&self) -> &str {
        "natural"
    }

    fn compare(&self, a: &T, b: &T) -> Result<Ordering> {
        Ok(a.cmp(b))
    }
}

/// Check the total-order laws on randomly sampled element triples.
///
/// Draws `triples` index triples from `elements` and verifies reflexivity,
/// antisymmetry, and transitivity. Returns the first violation found.
pub fn validate_total_order<T>(
    order: &dyn TotalOrder<T>,
    elements: &[T],
    triples: usize,
    rng: &mut RandomSource,
) -> Result<()> {
    if elements.is_empty() {
        return Err(SrsError::invalid("cannot validate an order on no elements"));
    }
    let n = elements.len() as u64;
    for _ in 0..triples {
        let a = &elements[rng.next_below(n) as usize];
        let b = &elements[rng.next_below(n) as usize];
        let c = &elements[rng.next_below(n) as usize];

        if order.compare(a, a)? != Ordering::Equal {
            return Err(SrsError::invalid(format!(
                "order '{}' is not reflexive",
                order.name()
            )));
        }
        let ab = order.compare(a, b)?;
        let ba = order.compare(b, a)?;
        if ab != ba.reverse() {
            return Err(SrsError::invalid(format!(
                "order '{}' is not antisymmetric",
                order.name()
            )));
        }
        let bc = order.compare(b, c)?;
        let ac = order.compare(a, c)?;
        if ab == Ordering::Less && bc == Ordering::Less && ac != Ordering::Less {
            return Err(SrsError::invalid(format!(
                "order '{}' is not transitive",
                order.name()
            )));
        }
        if ab == Ordering::Equal && bc == Ordering::Equal && ac != Ordering::Equal {
            return Err(SrsError::invalid(format!(
                "order '{}' equality is not transitive",
                order.name()
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn natural_order_on_integers() {
        let o = NaturalOrder;
        assert_eq!(o.compare(&1i64, &2).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&2i64, &1).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(&5i64, &5).unwrap(), Ordering::Equal);
    }

    #[test]
    fn natural_order_passes_laws() {
        let elements: Vec<i64> = (-20..20).collect();
        let mut rng = RandomSource::new(1);
        validate_total_order(&NaturalOrder, &elements, 10_000, &mut rng).unwrap();
    }
}
