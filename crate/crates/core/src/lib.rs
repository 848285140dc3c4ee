//! Exact computations on finite truncations of rooted-tree automorphism groups.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs: file formats, environment handling and random sampling live
//! in the `branchlab` companion crate.
//!
//! Conventions used across every module:
//!
//! * Products compose right-to-left: `p.compose(&q)` acts as `q` first, then `p`,
//!   so `compose(p, q).act(v) == p.act(q.act(v))`.
//! * Commutators are `[g, h] = g h g⁻¹ h⁻¹`.
//! * Tree vertices are words of child indices; each level is ordered
//!   lexicographically and vertices are ranked within their level in that order.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod burgermozes;
pub mod cayley;
mod error;
pub mod perm;
pub mod permgroup;
pub mod portrait;
pub mod selfsimilar;
pub mod tree;
pub mod treegroup;
pub mod verifier;
pub mod wreathtower;

pub use error::{Error, Result};
pub use perm::Perm;
pub use permgroup::{Budget, PermGroup, StabChain};
pub use portrait::Portrait;
pub use tree::{DegreeSequence, Vertex};
pub use treegroup::TreeGroup;

pub use num_bigint::BigUint;
