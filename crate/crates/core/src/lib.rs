//! Symplectic elimination over arbitrary fields.
//!
//! * [`elimination`] reduces a symplectic matrix to a diagonal matrix using
//!   only elementary symplectic row operations, recording a [`Transcript`].
//! * [`stfactor`] runs the same schedule on any nonsingular matrix to get
//!   `M = S T` with `S` symplectic and `T` reduced.
//! * [`conjugate`] computes `S^-1 M S` factor by factor.
//!
//! Matrices are generic over a [`Field`]: exact rationals, prime fields, or
//! floats with a pivot tolerance.
//!
//! ```
//! use symplectic::{eliminate, random_symplectic, st_decompose, Rationals, StMode, StOutcome};
//!
//! let g = random_symplectic(&Rationals, 3, 40, 7);
//! let r = eliminate(&g)?;
//! assert!(r.diagonal.is_diagonal_symplectic());
//!
//! match st_decompose(&g, StMode::Strict)?.outcome {
//!     StOutcome::Success { s, t, .. } => assert_eq!(s.mul(&t)?, g),
//!     StOutcome::Failure { column, stage, .. } => eprintln!("zero {stage} at column {column}"),
//! }
//! # Ok::<(), symplectic::Error>(())
//! ```

pub mod cli;
pub mod conjugate;
pub mod elimination;
pub mod error;
pub mod field;
pub mod generators;
pub mod io;
pub mod matrix;
pub mod stfactor;

pub use conjugate::{conjugate_by_symplectic, conjugate_by_transcript};
pub use elimination::{
    eliminate, eliminate_with, reconstruct_from_transcript, EliminationOptions, EliminationResult, Stage,
};
pub use error::{Error, Result};
pub use field::{Field, FieldConfig, PrimeField, Rational, Rationals, Reals};
pub use generators::{random_symplectic, row_exchange_sequence, Generator, GeneratorKind, Transcript};
pub use matrix::{Block, Matrix};
pub use stfactor::{st_decompose, validate_factorization, FactorizationReport, StMode, StOutcome, StResult};
