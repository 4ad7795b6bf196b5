//! Reduced Khovanov homology over F2 for planar diagrams, the twist-family
//! inverse system of a sutured tangle, and the kappa invariant of a strongly
//! invertible knot read off from that system.
//!
//! Everything here is pure computation on owned values; file formats and the
//! command line live in the companion `kappa` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod diagram;
pub mod f2la;
pub mod khcomplex;
pub mod skein;
pub mod limit;

pub use error::{Error, Result};
