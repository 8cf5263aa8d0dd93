//! Multipartite entanglement monotones and local-unitary invariants.
//!
//! The crate is organised the same way the computations build on each other:
//!
//! * [`tensor`] holds party-structured pure states and density operators
//!   together with partial traces, the collective (`⊙`) product and local
//!   operations.
//! * [`monotones`] computes the projector monotones `E_k` by a closed form on
//!   bipartite cuts and by multi-start alternating maximization otherwise,
//!   plus the spectral bipartite monotones.
//! * [`invariants`] parses and evaluates index contractions over `ψ`, `ψ*`,
//!   `δ` and `ε`, and provides the low-degree three-party invariants and the
//!   residual tangle.
//! * [`locc`] turns monotone and invariant values into convertibility verdicts.
//! * [`oracle`] holds brute-force estimators used to cross-check the solver.
//! * [`catalog`] builds the named example states.
//!
//! Amplitudes are stored row-major with the last party's index varying
//! fastest. Party indices in the API are zero-based.

pub mod catalog;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod locc;
pub mod monotones;
pub mod oracle;
pub mod rng;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::{DensityOp, Ensemble, PartyGrouping, StateTensor};
