//! Exact verification of mixed parafermion/paraboson algebras and of the
//! Klein transformation `f̃ = ±fK`, `b̃ = b` that turns relative-parafermion
//! paraoperators into relative-paraboson ones.
//!
//! * [`algebra`]: the free algebra over `f_j^±`, `b_k^±` and a Klein element.
//! * [`relations`]: every instance of the defining triple relations.
//! * [`fock`]: Green-ansatz matrices for the order-`p` Fock representation.
//! * [`verify`]: symbolic replay and matrix suites producing reports.
//! * [`cli`]: the command-line front end.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fock;
pub mod random;
pub mod relations;
pub mod verify;

pub use algebra::{Expression, Generator, Kind, Rational, Sign, Word};
pub use error::ConfigError;
