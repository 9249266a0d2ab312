//! Exact computer algebra for graded necklace Lie bialgebras of quivers,
//! the induced Batalin-Vilkovisky operator on the shifted symmetric
//! algebra, the BV algebra of functions on the iota-intertwining
//! representation variety, and the supertrace morphism between them.
//!
//! All coefficients are arbitrary-precision rationals and every identity
//! checked by the verifiers is an exact-zero identity.

pub mod grading;
pub mod necklace;
pub mod quiver;
pub mod rat;
pub mod repbv;
pub mod report;
pub mod rng;
pub mod superlin;
pub mod symbv;
pub mod tracemap;
pub mod verify;

pub use grading::Parity;
pub use quiver::{ArrowId, DArrow, DoubledQuiver, Quiver, VertexId};
pub use rat::Rat;
