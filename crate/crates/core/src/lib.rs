//! Poisson-type limit moments for bm-independent operators indexed by the
//! lattice points of positive symmetric cones.
//!
//! The crate computes the same moments three ways and cross-checks them:
//!
//! * [`moments`] sums the volume-characteristic weights `V` over noncrossing
//!   partitions with pair and inner singleton blocks, exactly over the
//!   rationals;
//! * [`labellings`] counts bm-ordered labellings of those partitions by the
//!   points of a finite cone interval, which gives the pre-limit moments at a
//!   finite index `ρ`;
//! * [`fock`] simulates the creation, annihilation and conservation operators
//!   of the discrete bm-Fock space and takes vacuum expectations directly.
//!
//! [`partitions`] and [`cones`] hold the combinatorial and geometric
//! building blocks shared by all three.

pub mod cones;
pub mod error;
pub mod fock;
pub mod labellings;
pub mod moments;
pub mod partitions;
pub mod reference;

pub use cones::{ConeDescriptor, ConeFamily, ConePoint, Volume};
pub use error::{Error, Result};
pub use moments::{FiniteMoment, RationalPolynomial};
pub use partitions::{EpsilonSequence, Partition};
