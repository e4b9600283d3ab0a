//! Exact stable commutator length in free groups, and incompressibility
//! certificates for surfaces in amalgamated products built from it.

pub mod certificates;
pub mod error;
pub mod experiments;
pub mod lp;
pub mod rational;
pub mod word;

pub use error::{CertificateError, ExperimentError, ParseError, SclError, WordError};
pub use rational::Rational;
pub mod scl;
