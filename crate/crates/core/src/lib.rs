//! Regular digraphs of ideals of finite commutative Artinian rings.
//!
//! Rings are built as products of finite local rings ([`ring`]). The
//! vertices of the regular digraph are the non-trivial ideals, with an arc
//! `I -> J` whenever `I` contains an element that is regular on `J`
//! ([`regular`]). [`metrics`] computes distances, eccentricities, radius,
//! diameter and center of the underlying graph by breadth-first search;
//! [`closed_form`] evaluates the same quantities from the ideal structure
//! alone, and [`verify`] cross-checks the two over families of rings.

pub mod ring;
pub mod regular;
pub mod metrics;
pub mod closed_form;
pub mod notation;
pub mod verify;
