//! Combinatorics of face-codegeneracy polyhedra and the operator calculi
//! around them.
//!
//! The crate has five layers:
//!
//! * [`word`] — operator words over bigraded objects: validation, the
//!   commutation rewriting engine, canonical factorizations, the
//!   Eilenberg-Zilber normal form for simplicial words, and the
//!   finite-ordinal oracle that certifies all of it.
//! * [`polytope`] — permutohedra and their face-codegeneracy quotients as
//!   explicit finite cell complexes, with f-vectors, Euler characteristics,
//!   and JSON/DOT/OFF exports.
//! * [`factorization`] — the factorization set of a composite
//!   face-codegeneracy map, the labeled polyhedron it spans, allowable
//!   subcomposites, and the boundary scheme pairing facets with factoring
//!   tuples.
//! * [`cw`] — index calculus for CW bases of simplicial objects: degeneracy
//!   multi-indices, level decompositions, cross-term levels,
//!   latching/matching bookkeeping, and the normalization recursion that
//!   pushes a formal generator into the chains subobject.
//! * [`whitehead`] — formal graded Whitehead brackets over operator-decorated
//!   generators, with degree arithmetic, a bilinear/antisymmetric normal
//!   form, and morphism application.

pub mod cw;
pub mod factorization;
pub mod polytope;
pub mod whitehead;
pub mod word;

pub use word::{apply_letter, Bidegree, CanonicalForm, DeltaOracle, Letter, LetterKind, MonotoneMap, OpWord, WordError};
