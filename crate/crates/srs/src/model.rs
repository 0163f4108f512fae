//! The model abstraction: named distributions with samplers and optional
//! pmfs / finite-domain enumerators.

use std::sync::Arc;

use crate::error::{Result, SrsError};
use crate::rng::RandomSource;

/// A named discrete distribution over `T`.
///
/// Sampling is mandatory. A pmf and a finite-domain enumeration are
/// capabilities a model may or may not expose; `None` means "not
/// available", not "probability zero". Models are immutable and the sampler
/// takes an explicit [`RandomSource`], so concurrent callers simply use
/// disjoint streams.
pub trait DiscreteModel<T>: Send + Sync {
    fn name(&self) -> &str;

    /// Draw one value.
    fn sample(&self, rng: &mut RandomSource) -> Result<T>;

    /// Probability mass at `x`, if the model can evaluate it.
    fn pmf(&self, _x: &T) -> Option<f64> {
        None
    }

    /// All domain elements in a deterministic order, for finite domains
    /// small enough to enumerate. Countably infinite models may return a
    /// truncation that carries all but a negligible (< 1e-12) tail.
    fn enumerate(&self) -> Option<Vec<T>> {
        None
    }
}

impl<T, M: DiscreteModel<T> + ?Sized> DiscreteModel<T> for Arc<M> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<T> {
        (**self).sample(rng)
    }

    fn pmf(&self, x: &T) -> Option<f64> {
        (**self).pmf(x)
    }

    fn enumerate(&self) -> Option<Vec<T>> {
        (**self).enumerate()
    }
}

impl<T, M: DiscreteModel<T> + ?Sized> DiscreteModel<T> for &M {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<T> {
        (**self).sample(rng)
    }

    fn pmf(&self, x: &T) -> Option<f64> {
        (**self).pmf(x)
    }

    fn enumerate(&self) -> Option<Vec<T>> {
        (**self).enumerate()
    }
}

/// Finite mixture of models over a common domain.
pub struct MixtureModel<T> {
    name: String,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    components: Vec<Arc<dyn DiscreteModel<T>>>,
}

impl<T> MixtureModel<T> {
    /// Build a mixture; weights must be non-negative and sum to 1 ± 1e-12.
    pub fn new(components: Vec<Arc<dyn DiscreteModel<T>>>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(SrsError::invalid(
                "mixture needs one weight per component and at least one component",
            ));
        }
        if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(SrsError::invalid("mixture weights must lie in [0, 1]"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(SrsError::invalid(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        let name = format!(
            "mixture({})",
            components
                .iter()
                .map(|c| c.name().to_string())
                .collect::<Vec<_>>()
                .join(" + ")
        );
        Ok(MixtureModel {
            name,
            weights,
            cumulative,
            components,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Arc<dyn DiscreteModel<T>>] {
        &self.components
    }
}

impl<T: Clone + PartialEq + Send + Sync> DiscreteModel<T> for MixtureModel<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn sample(&self, rng: &mut RandomSource) -> Result<T> {
        let u = rng.next_open01();
        let idx = self
            .cumulative
            .iter()
            .position(|&c| u <= c)
            .unwrap_or(self.components.len() - 1);
        self.components[idx].sample(rng)
    }

    fn pmf(&self, x: &T) -> Option<f64> {
        let mut total = 0.0;
        for (w, c) in self.weights.iter().zip(&self.components) {
            total += w * c.pmf(x)?;
        }
        Some(total)
    }

    fn enumerate(&self) -> Option<Vec<T>> {
        // All components must enumerate the identical domain; the mixture
        // inherits that domain.
        let first = self.components[0].enumerate()?;
        for c in &self.components[1..] {
            let other = c.enumerate()?;
            if other.len() != first.len() || other.iter().zip(&first).any(|(a, b)| a != b) {
                return None;
            }
        }
        Some(first)
    }
}
