//! Exact analysis of multiset-based vertex anonymity in graphs.
//!
//! A probe set S assigns every outside vertex the multiset of its distances
//! to S; vertices sharing a multiset are mutually indistinguishable. The
//! crate computes, exactly:
//!
//! - the equivalence classes and the anonymity guarantee k(S) of a probe
//!   set ([`multiset`]),
//! - minimum probe sets achieving a prescribed guarantee, the largest
//!   achievable guarantee, and anonymity under a probe budget ([`solver`]),
//! - generators and closed-form answers for structured graph families
//!   ([`families`]),
//! - an integer-program encoding of the search, exportable as LP text
//!   ([`milp`]).
//!
//! Everything is driven by exhaustive enumeration or certified formulas;
//! no result depends on heuristics.

pub mod families;
pub mod graph;
pub mod milp;
pub mod multiset;
pub mod solver;
