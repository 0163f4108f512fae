//! Concrete distribution families.

pub mod bitstring;
pub mod crp;
pub mod ising;
pub mod poisson;
pub mod table;

pub use bitstring::{bitstring_family, BitFamily, BitStringFamily};
pub use crp::{crp, crp_mixture_p, crp_pair_q, Crp};
pub use ising::{exact_boltzmann, ising_sampler, IsingKernel, IsingSampler};
pub use poisson::{bimodal_poisson, BimodalPoisson};
pub use table::TableModel;
