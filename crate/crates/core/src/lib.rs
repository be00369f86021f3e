//! Code-based public-key encryption of classical and quantum messages.
//!
//! The classical layer is binary-Goppa McEliece ([`mceliece`]) built on
//! GF(2^m) arithmetic ([`gf2m`]), packed GF(2) linear algebra
//! ([`bitlinalg`]) and Patterson decoding ([`goppa`]). The quantum layer
//! ([`protocol`]) runs the same maps as reversible XOR oracles on an exact
//! sparse state simulator ([`qsim`]).

pub mod bitlinalg;
pub mod gf2m;
pub mod goppa;
pub mod mceliece;
pub mod protocol;
pub mod qsim;
pub mod seed;
pub mod selftest;

pub use bitlinalg::{BitMatrix, BitVec, Permutation};
pub use gf2m::{FieldElement, FieldParams};
pub use goppa::GoppaCode;
pub use mceliece::{PrivateKey, PublicKey};
pub use qsim::{MeasurementRecord, RegisterLayout};

/// Sparse state with double-precision amplitudes.
pub type SparseState = qsim::State<f64>;
/// Sparse state with single-precision amplitudes.
pub type SparseState32 = qsim::State<f32>;
