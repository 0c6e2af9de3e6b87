//! Finite rank-two incidence geometries, the rank-three triangle complexes
//! built from them, and exact permutation-group machinery to verify their
//! correlation structure.

#![no_std]

extern crate alloc;

pub mod field;
pub mod group;
pub mod harness;
pub mod incidence;
pub mod perm;
pub mod space;
pub mod triangle;
