//! Exact invariants of formal manifolds over the rationals.
//!
//! Everything here is computed with arbitrary-precision rational arithmetic;
//! there is no floating point anywhere and all reported dimensions and
//! coefficients are exact. The main layers:
//!
//! * [`linalg`] — rational scalars, graded bases, sparse vectors/matrices and
//!   deterministic exact elimination, plus the Koszul sign bookkeeping used by
//!   every graded construction.
//! * [`ring`] / [`coalgebra`] — finite graded-commutative cohomology rings
//!   with Poincaré duality, their builders (projective spaces, products,
//!   six-manifolds, exterior algebras, spheres) and the dual homology
//!   coalgebra.
//! * [`ring_io`] — the JSON file format for rings.
//! * [`adams`] — the loop-space homology page of the tensor-algebra complex
//!   on reduced homology, rational homotopy ranks through coalgebra
//!   primitives, and the low-degree exact sequences.
//! * [`lie`] — free graded DG-Lie models with quadratic differentials,
//!   derivations, exponentials, Johnson invariants and derivation cohomology.
//! * [`charclass`] — Chern/Pontryagin classes, Betti numbers and distortion
//!   data of complete intersections.
//! * [`lefschetz`] — the sl2 action of a Lefschetz class, primitive
//!   decompositions, polarization pairings and derivation algebras.
//! * [`builtins`] — the named example rings used by the CLI and the tests.

pub mod adams;
pub mod builtins;
pub mod charclass;
pub mod cli;
pub mod coalgebra;
pub mod lefschetz;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod ring;
pub mod ring_io;
pub mod word;

pub use linalg::Q;
