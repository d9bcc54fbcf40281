//! Exact genus-0 Gromov-Witten invariants of complex projective space.
//!
//! Closed invariants of `CP^n` are reconstructed from the Kontsevich-Manin
//! axioms and the WDVV exchange relation. Open invariants of
//! `(CP^n, RP^n)` for odd `n` come from the open WDVV recursions, the
//! unit/zero/divisor/degree axioms, wall-crossing and the degree-one seed
//! `ogw_{1,2} = 2`. Everything is exact rational arithmetic and every
//! recursive value goes through a shared [`MemoStore`].
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the command
//! line and random sampling live in the `gw` crate.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod closed;
mod error;
pub mod memo;
pub mod open;
pub mod verify;

pub use arith::{binomial, ExactRational};
pub use closed::{
    canonical_closed_keys, closed_admissible, gw_closed, kontsevich_n2_oracle, ClosedKey,
};
pub use error::GwError;
pub use memo::{MemoKey, MemoStore};
pub use open::{
    normalize, ogw, ogw_linear, ogwb, ogwb_linear, open_admissible, Class, ConstraintVector,
    Normalized, OpenKey,
};
