//! Exact symbolic kernel for free graded-commutative algebras over a
//! polynomial base, together with the calculus built on top of it: the
//! bigraded de Rham extension with its contraction and Lie-derivative
//! operators, standard-form differential graded algebras, closed forms and
//! their pairing matrices, the explicit shifted-symplectic model families,
//! Hamiltonian vector fields and shifted Poisson brackets, and the
//! critical-chart comparison machinery at shift -1.
//!
//! Everything is computed over exact rationals (optionally Gaussian
//! rationals); there is no floating point anywhere. All values are immutable
//! after construction and every operation is pure.

pub mod acceptance;
pub mod cdga;
pub mod darboux;
pub mod dcrit;
pub mod derham;
pub mod derivation;
pub mod element;
pub mod error;
pub mod forms;
pub mod hamilton;
pub mod model;
pub mod monomial;
pub mod parse;
pub mod sample;
pub mod scalar;
pub mod sig;

pub use element::Element;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use sig::{FieldKind, GenId, SigRef, Signature};
