//! Exact counting and verification of arithmetic-progression structure in
//! symmetric subsets of `Z_q^n`.

pub mod budget;
pub mod cli;
pub mod clt;
pub mod combinatorics;
pub mod count;
pub mod encode;
pub mod error;
pub mod feasible;
pub mod json;
pub mod matrix;
pub mod modp;
pub mod oracle;
pub mod sample;
pub mod verify;
pub mod weights;

pub use budget::Budget;
pub use error::{Error, Result};
pub use oracle::ProgressionKind;
pub use weights::{ShiftConvention, ShiftedWeightTuple, SpaceParams, SymmetricSet, WeightArrangement, WeightTuple};
