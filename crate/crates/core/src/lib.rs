//! Quantum search with a partial diffusion operator.
//!
//! This crate implements the same search algorithm two independent ways and
//! cross-validates them:
//!
//! - [`statevector`] / [`operators`]: an exact complex state-vector simulator
//!   for an `n + 1` qubit register (n index qubits plus one workspace qubit),
//!   with the oracle, the partial diffusion operator, and a Grover baseline.
//! - [`analytic`]: the closed-form amplitude model — first- and second-order
//!   recurrences, Chebyshev (second kind) closed forms, success/failure
//!   probabilities, iteration counts, and binomially averaged performance laws.
//! - [`experiments`]: reproduction of the reference probability table, the
//!   success-probability curves over the match ratio, the minimum-probability
//!   grid searches, and a three-way simulator/recurrence/closed-form
//!   cross-validation report.
//!
//! The partial diffusion operator performs inversion about the mean only on
//! the workspace-0 subspace and negates the workspace-1 amplitudes; iterating
//! oracle-then-diffusion amplifies marked states while keeping a stock of
//! negative-phase marked amplitudes that resists de-amplification. Every
//! probability the simulator produces is checkable against the closed forms,
//! and vice versa.

pub mod analytic;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod marked;
pub mod operators;
pub mod statevector;

pub use analytic::{AmplitudeTriple, RunReport, RunSource, SearchParams};
pub use dense::DenseMatrix;
pub use error::Error;
pub use marked::MarkedSet;
pub use statevector::StateVector;
