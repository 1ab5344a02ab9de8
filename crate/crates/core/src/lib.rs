//! Conflict-avoiding codes: constant- and mixed-weight constructions over
//! `Z_a × Z_{p^r}`, a disjoint-difference-set verifier, closed-form and
//! exhaustive-search optimality certificates, and a collision-channel
//! simulator for the per-period success guarantees.

pub mod additive;
pub mod catalog;
pub mod channel;
pub mod code;
pub mod constructions;
pub mod error;
pub mod numtheory;
pub mod optimality;

pub use code::{verify_cac, Code, Codeword, Conflict, Provenance, Verdict};
pub use error::{CacError, Result};
