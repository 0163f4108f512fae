//! Runtime construction of models and orderings from config names.
//!
//! Model specs resolve to one of four observation domains; orderings are
//! then looked up by name within that domain. The `"optimal"` ordering is
//! special: it is built from the pmf tables of the two models in play, so
//! only commands that carry a (p, q) pair can use it.

use std::hash::Hash;
use std::sync::Arc;

use srs::domain::{BitString, Partition, SpinLattice};
use srs::models::{
    bimodal_poisson, bitstring_family, crp, ising_sampler, BitFamily, IsingKernel, TableModel,
};
use srs::orderings;
use srs::{DiscreteModel, MixtureModel, SrsError, TotalOrder};

use crate::config::{BitKind, KernelKind, ModelSpec};
use crate::error::{CliError, CliResult};

/// A model bound to its concrete observation domain.
pub enum DomainModel {
    Int(Arc<dyn DiscreteModel<i64>>),
    Bits(Arc<dyn DiscreteModel<BitString>>),
    Parts(Arc<dyn DiscreteModel<Partition>>),
    Lattice(Arc<dyn DiscreteModel<SpinLattice>>),
}

impl DomainModel {
    pub fn domain_name(&self) -> &'static str {
        match self {
            DomainModel::Int(_) => "integers",
            DomainModel::Bits(_) => "bit strings",
            DomainModel::Parts(_) => "partitions",
            DomainModel::Lattice(_) => "lattices",
        }
    }
}

pub fn build_model(spec: &ModelSpec) -> CliResult<DomainModel> {
    Ok(match spec {
        ModelSpec::BimodalPoisson { lambda1, lambda2 } => {
            DomainModel::Int(Arc::new(bimodal_poisson(*lambda1, *lambda2)?))
        }
        ModelSpec::Table { probs } => {
            DomainModel::Int(Arc::new(TableModel::new("table", probs.clone())?))
        }
        ModelSpec::Bitstring { k, kind } => {
            let family = match kind {
                BitKind::Ind => BitFamily::Independent,
                BitKind::Odd => BitFamily::OddParity,
                BitKind::Tie => BitFamily::TiedHalf,
            };
            DomainModel::Bits(Arc::new(bitstring_family(*k, family)?))
        }
        ModelSpec::Crp { n, a, b } => DomainModel::Parts(Arc::new(crp(*n, *a, *b)?)),
        ModelSpec::Ising {
            k,
            t,
            method,
            steps,
            coupling,
        } => {
            let kernel = match method {
                KernelKind::Gibbs => IsingKernel::Gibbs,
                KernelKind::Mh => IsingKernel::MetropolisHastings,
            };
            DomainModel::Lattice(Arc::new(ising_sampler(
                *k as usize,
                *t,
                kernel,
                *steps,
                *coupling,
            )?))
        }
        ModelSpec::Mixture {
            weights,
            components,
        } => build_mixture(weights, components)?,
    })
}

fn build_mixture(weights: &[f64], components: &[ModelSpec]) -> CliResult<DomainModel> {
    if components.is_empty() {
        return Err(CliError::Config("mixture needs components".into()));
    }
    let built: Vec<DomainModel> = components
        .iter()
        .map(build_model)
        .collect::<CliResult<_>>()?;
    macro_rules! collect_variant {
        ($variant:ident) => {{
            let mut comps = Vec::new();
            for b in built {
                match b {
                    DomainModel::$variant(m) => comps.push(m),
                    other => {
                        return Err(CliError::Config(format!(
                            "mixture components span different domains ({} vs {})",
                            comps
                                .first()
                                .map(|_| stringify!($variant))
                                .unwrap_or("?"),
                            other.domain_name()
                        )))
                    }
                }
            }
            DomainModel::$variant(Arc::new(MixtureModel::new(comps, weights.to_vec())?))
        }};
    }
    Ok(match built.first().expect("non-empty") {
        DomainModel::Int(_) => collect_variant!(Int),
        DomainModel::Bits(_) => collect_variant!(Bits),
        DomainModel::Parts(_) => collect_variant!(Parts),
        DomainModel::Lattice(_) => collect_variant!(Lattice),
    })
}

/// Build the `"optimal"` ordering from the pmf tables of two enumerable
/// models over the same domain.
pub fn optimal_from_models<T>(
    p: &Arc<dyn DiscreteModel<T>>,
    q: &Arc<dyn DiscreteModel<T>>,
) -> CliResult<Arc<dyn TotalOrder<T>>>
where
    T: Eq + Hash + Clone + Send + Sync + 'static,
{
    let domain = p.enumerate().ok_or_else(|| SrsError::MissingCapability {
        model: p.name().to_string(),
        capability: "enumerate (required by the optimal ordering)",
    })?;
    let table = |m: &Arc<dyn DiscreteModel<T>>| -> CliResult<Vec<f64>> {
        domain
            .iter()
            .map(|x| {
                m.pmf(x).ok_or_else(|| {
                    CliError::Srs(SrsError::MissingCapability {
                        model: m.name().to_string(),
                        capability: "pmf (required by the optimal ordering)",
                    })
                })
            })
            .collect()
    };
    let pv = table(p)?;
    let qv = table(q)?;
    Ok(Arc::new(orderings::optimal_order(&domain, &pv, &qv)?))
}

fn unknown_order(name: &str, domain: &str) -> CliError {
    CliError::Config(format!("no ordering named '{name}' over {domain}"))
}

pub fn int_order(
    name: &str,
    p: &Arc<dyn DiscreteModel<i64>>,
    q: Option<&Arc<dyn DiscreteModel<i64>>>,
) -> CliResult<Arc<dyn TotalOrder<i64>>> {
    match (name, q) {
        ("optimal", Some(q)) => optimal_from_models(p, q),
        ("optimal", None) => Err(CliError::Config(
            "the optimal ordering needs both a null and an alternative model".into(),
        )),
        _ => orderings::integer_order(name).ok_or_else(|| unknown_order(name, "integers")),
    }
}

pub fn bits_order(
    name: &str,
    p: &Arc<dyn DiscreteModel<BitString>>,
    q: Option<&Arc<dyn DiscreteModel<BitString>>>,
) -> CliResult<Arc<dyn TotalOrder<BitString>>> {
    match (name, q) {
        ("optimal", Some(q)) => optimal_from_models(p, q),
        ("optimal", None) => Err(CliError::Config(
            "the optimal ordering needs both a null and an alternative model".into(),
        )),
        _ => orderings::bitstring_order(name).ok_or_else(|| unknown_order(name, "bit strings")),
    }
}

pub fn parts_order(
    name: &str,
    p: &Arc<dyn DiscreteModel<Partition>>,
    q: Option<&Arc<dyn DiscreteModel<Partition>>>,
) -> CliResult<Arc<dyn TotalOrder<Partition>>> {
    match (name, q) {
        ("optimal", Some(q)) => optimal_from_models(p, q),
        ("optimal", None) => Err(CliError::Config(
            "the optimal ordering needs both a null and an alternative model".into(),
        )),
        _ => orderings::partition_order(name).ok_or_else(|| unknown_order(name, "partitions")),
    }
}

pub fn lattice_order_by_name(name: &str) -> CliResult<Arc<dyn TotalOrder<SpinLattice>>> {
    orderings::lattice_order(name).ok_or_else(|| unknown_order(name, "lattices"))
}
