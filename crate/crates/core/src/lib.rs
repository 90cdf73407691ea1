//! Exact computations on finite median algebras.
//!
//! The crate covers the combinatorics that can be checked exhaustively on a
//! finite carrier: median axioms, intervals and convexity, halfspaces and
//! walls, rank by two independent routes, Rosenthal independence numbers of
//! set systems and function families, VC dimension of dual systems, the
//! halfspace sign embedding, automorphism orbits, and two notions of bounded
//! variation. All arithmetic is exact.

pub mod actions;
pub mod algebra;
pub mod clique;
pub mod elements;
pub mod error;
pub mod generators;
pub mod independence;
pub mod io;
pub mod limits;
pub mod maps;
pub mod rational;
pub mod variation;
pub mod walls;

pub use algebra::{Axiom, AxiomReport, MedianAlgebra, Provenance, VerifyMode, VerifyOptions};
pub use elements::ElementSet;
pub use error::{Error, Result};
pub use limits::Limit;
pub use maps::MpMap;
pub use rational::{Rational, RationalFunctionTable};
pub use walls::{HalfspaceMethod, Wall, WallSystem};
