//! Exact construction of a `(6p-4)`-dimensional representation of the double
//! affine Hecke algebra at `q = e^{iπ/p}`, its modular action, the symmetrized
//! eigenspace of `T`, and the fusion algebra carried by it.

pub mod cyclotomic;
pub mod emit;
pub mod error;
pub mod identities;
pub mod linalg;
pub mod modular;
pub mod polyoracle;
pub mod qnum;
pub mod rep_z;
pub mod report;
pub mod session;
pub mod symmetric;
pub mod ybasis;

pub use cyclotomic::{cyclotomic_poly, CycRing, CycScalar, Rational};
pub use emit::{emit, EmitTarget, Emission};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use qnum::{chebyshev_u, LaurentPoly, QNumbers};
pub use report::{CheckResult, Report, Status};
pub use session::{run_suite, Model, Suite};
