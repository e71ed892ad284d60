//! Joint spectral radius of finite families of real 2x2 matrices, together
//! with an approximate Barabanov norm, computed by the linear-relaxation and
//! max-relaxation iterations.
//!
//! ```
//! use jsr_core::{relax, MatrixSet, RelaxConfig, Status};
//!
//! let family = MatrixSet::from_2x2(&[
//!     [[1.0, 1.0], [0.0, 1.0]],
//!     [[1.0, 0.0], [-1.0, 1.0]],
//! ])?;
//! let result = relax::run(&family, &RelaxConfig::lr())?;
//! assert_eq!(result.status, Status::Converged);
//! assert!(result.rho_lo <= result.rho_mid && result.rho_mid <= result.rho_hi);
//! # Ok::<(), jsr_core::Error>(())
//! ```
//!
//! Every step reports a bracket `[rho-, rho+]` that contains the joint
//! spectral radius; [`oracle`] gives independent brute-force bounds from
//! explicit matrix products.

pub mod error;
pub mod io;
pub mod matrix;
pub mod norm;
pub mod oracle;
pub mod relax;

pub use error::{Error, Result};
pub use matrix::{Eigendirections, Matrix, MatrixSet};
pub use norm::AngularNorm;
pub use oracle::{product_bounds, trace_estimate, NormUsed, ProductBounds};
pub use relax::{
    Algorithm, Averaging, InitialNorm, IterationRecord, LambdaSchedule, RelaxConfig, RelaxResult,
    Status,
};
