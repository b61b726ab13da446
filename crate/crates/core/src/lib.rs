//! Canonical bases of the level-one Fock space of quantum affine `sl_n`,
//! q-decomposition numbers, abacus blocks, runner removal and the
//! cup-diagram formulas for two-runner blocks.

pub mod abacus;
pub mod blocks;
pub mod cache;
pub mod canonical;
pub mod error;
pub mod fk2;
pub mod fock;
pub mod laurent;
pub mod partition;
pub mod suites;
pub mod wedge;

pub use abacus::{BetaSet, BlockSignature, RunnerTuple};
pub use canonical::{CanonicalColumn, CanonicalEngine};
pub use error::{Error, Result};
pub use fock::{FockContext, FockVector};
pub use laurent::LaurentPoly;
pub use partition::{Node, Partition};
