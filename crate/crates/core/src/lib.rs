//! Symmetric bilinear lattices over valuation rings.
//!
//! Backends: `Z_p` (odd p), `Z_2`, `Z_2[sqrt 2]` and a truncated
//! `F_q((u))((t))` with a rank-2 value group.

pub mod canonical;
pub mod classify_odd;
pub mod encode;
pub mod error;
pub mod hensel;
pub mod isometry;
pub mod jordan;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod rank2;
pub mod valuation;

pub use error::{Error, Result};
pub use valuation::{vg_compare, Residue, RingConfig, RingElem, RingKind, Val, ValInfo};
pub use lattice::GramLattice;
