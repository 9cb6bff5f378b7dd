//! Search engine for binary q-analogs of Steiner triple systems.
//!
//! The crate implements the full pipeline for deciding whether a
//! 2-(v,3,1)_2 subspace design with a prescribed automorphism group exists:
//!
//! * [`gf2`] - packed linear algebra over GF(2): vectors, matrices, canonical
//!   subspaces, Grassmannian enumeration, Gaussian binomials.
//! * [`group`] - finite subgroups of GL(v,2): closure from generators,
//!   element orders, classification of order-3 elements by fixed-space
//!   dimension, normalizer verification.
//! * [`action`] - orbits of matrix groups on Grassmannians, point-orbit and
//!   fixed-plane classification under order-3 automorphisms, and the induced
//!   normalizer action on the set of orbits.
//! * [`theory`] - closed-form counts for order-3 automorphisms, admissibility
//!   and exclusion criteria, and the forced fixed blocks of type A_{v,1}.
//! * [`km`] - Kramer-Mesner orbit incidence matrices, lambda = 1 column
//!   filtering, design assembly and direct verification.
//! * [`solver`] - dancing-links exact cover search with forced/excluded
//!   columns, Knuth-style tree size estimation and prefix job splitting.
//! * [`campaign`] - the symmetry-breaking search campaign: normalizer classes
//!   on columns, the force-then-exclude loop, pair fixing under orbit
//!   stabilizers, and a parallel work queue over prefix jobs.
//!
//! All values are immutable after construction and safe to share across
//! threads; every randomized routine takes an explicit seed.

pub mod action;
pub mod campaign;
pub mod gf2;
pub mod group;
pub mod km;
pub mod rng;
pub mod solver;
pub mod theory;
