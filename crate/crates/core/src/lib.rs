//! Matroid-freeness of Boolean functions over GF(2).
//!
//! A Boolean function `f: {0,1}^n -> {0,1}` is `(M, Σ)`-free for a binary
//! matroid `M = (v_1, …, v_k)` and pattern `Σ ∈ {0,1}^k` when no linear map
//! `L` gives `(f(L v_1), …, f(L v_k)) = Σ`. This crate provides exact GF(2)
//! linear algebra, truth-table Fourier analysis, matroid structure
//! (circuits, complexity, odd girth, homomorphisms), exhaustive and sampled
//! freeness checks, and the classification of cycle patterns.

pub mod boolfn;
pub mod error;
pub mod families;
pub mod gf2;
pub mod matroid;
pub mod tester;

pub use boolfn::{BooleanFunction, FourierSpectrum, Rational};
pub use error::{Error, Result};
pub use gf2::{Coset, GfVec, LinearMap, Subspace};
pub use matroid::{BinaryMatroid, Complexity, Graph, Homomorphism};
pub use tester::{CountReport, PatternInstance, PatternSpec};
pub use families::FamilyId;
