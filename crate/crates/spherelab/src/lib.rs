//! Combinatorial models of sphere systems in doubled handlebodies.
//!
//! The crate is organised around three interlocking pictures:
//!
//! * [`splits`] / [`punctured`] / [`disks`] — spheres and disks in a punctured
//!   3-sphere, encoded as partitions of boundary labels, with the full sphere
//!   complex, its pants decompositions, and the disk calculus used to build
//!   handle-crossing spheres;
//! * [`glued`] / [`rigid`] — the restricted sphere model of the doubled
//!   handlebody obtained by pairing boundary spheres, together with the rigid
//!   vertex set construction, split-pair certificates, fully-split expansion,
//!   and the exchange-move exhaustion;
//! * [`rank2`] — the genus-two sphere complex as a Farey graph with fins and
//!   an algorithmic witness finder showing finite subgraphs are never rigid.
//!
//! [`autom`] supplies the finite-graph automorphism and map-enumeration
//! engine shared by the verification suites.

pub mod autom;
pub mod disks;
pub mod error;
pub mod glued;
pub mod punctured;
pub mod rank2;
pub mod rigid;
pub mod splits;

pub use error::{Error, Result};
