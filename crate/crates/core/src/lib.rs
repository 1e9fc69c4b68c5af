//! Finite Kleisli dualities between spaces with relations and lattices with
//! join-preserving operators.
//!
//! Everything here works on finite structures, so each equation between
//! functors, monads or morphisms becomes a decidable check.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod duality;
pub mod error;
pub mod finstruct;
pub mod instances;
pub mod lattice;
pub mod monadkit;
pub mod monoidal;

pub use error::{Error, Result};
