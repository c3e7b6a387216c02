//! Moments of additive functionals on conditioned Galton–Watson trees.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod comparison;
pub mod error;
pub mod limits;
pub mod moments;
pub mod offspring;
pub mod series;
pub mod simulator;
pub mod treesize;
pub mod verify;

pub use error::{Error, Result};
pub use offspring::OffspringLaw;
pub use series::TruncatedSeries;
pub use treesize::TreeSizeLaw;
