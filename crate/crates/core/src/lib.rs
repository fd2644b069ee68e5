//! Principal function of the bi-free central limit operator
//! `T = l(v1) + l(v1)* + i (r(v2) + r(v2)*)`.
//!
//! * [`analytic`]: branch-correct `q`, `zeta`, `Arg`, `Log` and boundary-value limits.
//! * [`fock`]: truncated full Fock space model used as a brute-force oracle.
//! * [`principal`]: closed forms for the Green's function, `det E`, the principal
//!   function and the dependent (ellipse) case.
//! * [`verify`]: named verification checks shared by the CLI and the test suite.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod principal;
pub mod verify;

pub use analytic::{ComplexScalar, StieltjesSchedule};
pub use error::{Error, Result};
pub use fock::{build_model, ModelConfig, TruncatedFock, Variable};
