//! Orbit-category sites of finite groups with exact cohomology.
//!
//! The crate builds permutation groups and their orbit categories, the
//! Grothendieck topologies living on them, abelian presheaves and their Kan
//! extensions, and computes category cohomology, Čech cohomology through
//! resolutions by representables, and Picard groups of unit cocycles. All
//! arithmetic is exact.
//!
//! Only `alloc` is required; the `std` feature is on by default and adds
//! nothing but `std::error::Error` impls.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bitset;
pub mod cohomology;
pub mod error;
pub mod fincat;
pub mod group;
pub mod guards;
pub mod kan;
pub mod linalg;
pub mod orbit;
pub mod picard;
pub mod presheaf;
pub mod site;

pub use error::{Error, Result};
pub use guards::Guards;
