//! Exact-arithmetic library for weighted hyperplane arrangements in CP^n:
//! intersection lattices, the combinatorial existence criterion for polyhedral
//! Kahler metrics (linear, klt, and Hirzebruch quadratic-form conditions), and
//! symbolic degree-two cohomology of minimal wonderful models with
//! Chern-class identity verification.
//!
//! All computation is over arbitrary-precision rationals; equalities reported
//! by this crate are exact, never approximate.

pub mod arrangement;
pub mod chern;
pub mod checker;
pub mod lattice;
pub mod linalg;
pub mod sampling;
pub mod weights;
pub mod wonder;

pub use arrangement::{Arrangement, ArrangementFile, Hyperplane};
pub use lattice::{Flat, FlatId, IntersectionLattice};
pub use linalg::{Matrix, Rational};
pub use weights::WeightedArrangement;
