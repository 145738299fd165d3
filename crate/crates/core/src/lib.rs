//! Lindblad master-equation toolkit with state-independent speed limits on
//! purity and entropy change.
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, Jacobi eigensolver.
//! * [`model`]: Lindblad models, density matrices, channel classification.
//! * [`liouville`]: vectorization, the generator superoperator and its skew part.
//! * [`dynamics`]: RK4 integration, observables, steady states.
//! * [`bounds`]: Hilbert/Liouville/cooling rates, actions and envelopes.
//! * [`scenarios`]: built-in scenarios, seeded samplers, composition.
//! * [`config`], [`report`], [`cli`], [`verify`]: the command-line front end.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod liouville;
pub mod model;
pub mod report;
pub mod scenarios;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Matrix, C64};
pub use model::{DensityMatrix, LindbladModel};
