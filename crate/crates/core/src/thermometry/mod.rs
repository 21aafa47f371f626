//! Sideband thermometry of the logic ion: Fock populations, sideband Rabi
//! flops and n̄ estimation.

pub mod fit;
pub mod fock;
pub mod sideband;
pub mod trace;

pub use fit::{fit_nbar, FitOptions, FitReport};
pub use fock::FockDistribution;
pub use sideband::{beta_minus_ca, lamb_dicke, rsb_rabi_frequency, SidebandCoupling, SidebandOrder};
pub use trace::{add_binomial_noise, linspace, synthesize_trace, RabiTrace};
