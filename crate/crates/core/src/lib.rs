//! Compression of finite-dimensional quantum channels into completely
//! positive maps with few Kraus operators, by averaging random environment
//! slices of a Stinespring dilation, together with the numerics needed to
//! certify the approximation quality (Schatten-norm distances, operator
//! ordering, output entropies, fidelities).
//!
//! The crate is `no_std` + `alloc`: all operations are pure functions of
//! their inputs, every random quantity is drawn from an explicitly seeded
//! counter-based stream, and values are immutable after construction, so
//! everything here is safe to share across concurrent workers.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod channel;
pub mod compress;
pub mod error;
pub mod linalg;
pub mod mat;
pub mod metrics;
pub mod rng;
pub mod zoo;

pub use channel::{kraus_from_choi, Channel, ChoiMatrix, StinespringIsometry, TpFlag};
pub use compress::{
    compress, psi1_moment_oracle, sample_env_vector, slice_kraus_operator, slice_map,
    tail_probability_oracle, tp_correct, CompressionPlan, CompressionResult, Psi1Moments, Sampler,
};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, inv_sqrt_psd, numerical_rank, schatten_norm, sqrt_psd, HermEig,
    DEFAULT_RANK_TOL,
};
pub use mat::{partial_trace, CMatrix, CVector, Factor, TensorIndex, C64};
pub use metrics::{
    approximation_report, entropy_exchange, entropy_rank_bound, fidelity, max_output_infnorm,
    one_to_p_distance, ordering_epsilon, ordering_margin, renyi_entropy, vn_entropy,
    ApproximationReport, MetricReport, OptBudget, Witness,
};
pub use rng::SplitMix64;
