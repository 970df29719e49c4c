//! Coherent information and quantum capacity of noisy channels.
//!
//! The crate is `no_std` (it needs `alloc`). Enable `std` for
//! `std::error::Error` on [`Error`], and `parallel` to spread restarts and
//! Monte Carlo trials over rayon. Results do not depend on the thread count:
//! every random draw comes from a counter-addressed stream (see [`rng`]) and
//! reductions run in index order.
//!
//! Module map:
//!
//! * [`matrix`]: dense complex matrices, Kronecker products, partial traces,
//!   Hermitian eigendecomposition.
//! * [`state`]: pure states, density matrices, ensembles, purification.
//! * [`channel`]: Kraus channels, built-in noise families, joint states.
//! * [`info`]: entropies and coherent information.
//! * [`capacity`]: maximization of coherent information, depolarizing threshold.
//! * [`typical`]: entropy-typical subspaces by exact type-class enumeration.
//! * [`coding`]: random block codes, overlaps, projection decoding, and the
//!   output-purity Monte Carlo.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod capacity;
pub mod channel;
pub mod coding;
mod error;
pub mod info;
mod math;
pub mod matrix;
mod par;
pub mod rng;
pub mod simplex;
pub mod state;
pub mod typical;

pub use capacity::{channel_capacity, depolarizing_threshold, parameterize_density, CapacityResult, OptimizerConfig};
pub use channel::QuantumChannel;
pub use coding::{
    bell_code, projection_decode, purity_average_experiment, random_code, transmit, Code, CodeKind,
    DecodingReport, OverlapReport, PurityExperiment,
};
pub use error::{Error, Result};
pub use info::{coherent_information, purity, von_neumann_entropy, InfoReport};
pub use matrix::{eig_hermitian, partial_trace, tensor, ComplexMatrix};
pub use num_complex::Complex64;
pub use state::{DensityMatrix, Ensemble, EnsembleMember, PureState};
pub use typical::{typical_set, TypeClass, TypicalSet};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
