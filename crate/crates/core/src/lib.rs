//! Keyed quantum authentication codes analysed through the binary-symplectic
//! representation of Pauli operators.
//!
//! Paulis are tracked modulo phase as `(x, z)` bit vectors, Clifford encoders
//! as compiled symplectic maps, and an attack is judged by pulling it back
//! through the keyed encoder and checking which register it touches.

pub mod auth;
pub mod cli;
pub mod clifford;
pub mod codes;
pub mod error;
pub mod gf2;
pub mod protocol;
pub mod purity;
pub mod selftest;
pub mod stats;
pub mod symplectic;

pub use auth::{AuthFamily, BlockType, FamilyDescriptor, FamilyKind, Key};
pub use codes::{CssCode, LinearCode};
pub use error::{Error, Result};
pub use gf2::BitVec;
pub use symplectic::{DetectionClass, Direction, Gate, Pauli1, PauliOp, SymplecticCircuit, TagLayout};
