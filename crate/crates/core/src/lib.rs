//! Explicit permutation codes in the Ulam metric.
//!
//! Codewords are built by repeatedly shuffling small blocks of the identity
//! permutation with members of a ground set of permutations; the choice of
//! shuffle at each stage is protected by a Hamming-metric block code.

pub mod channel;
pub mod codes;
pub mod ground;
pub mod perm;
pub mod ulam;
pub mod verify;

pub use codes::{BlockCode, BlockCodeSpec, CodeError};
pub use ground::{GroundSet, GroundSetError};
pub use perm::{lcs_length, ulam_distance, DistinctString, PermError, Permutation};
pub use ulam::{DecodeFailure, Decoded, UlamCode, UlamError};
