//! Graded polynomial identities with involution for upper triangular
//! matrices under the fine free-group grading.

pub mod acceptance;
pub mod cli;
pub mod codim;
pub mod error;
pub mod freestar;
pub mod grading;
pub mod group;
pub mod normal;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod utmatrix;

pub use error::{Error, Result};
pub use group::{GroupWord, Letter};
pub use scalar::{Field, Scalar};
pub use utmatrix::{InvolutionKind, UtMatrix};
