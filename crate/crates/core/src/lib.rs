//! Geography of simply connected spin symplectic 4-manifolds: exact
//! characteristic numbers, a catalog of building blocks, fiber-sum and
//! knot-surgery constructions, formal Seiberg–Witten invariants, and
//! realization and coverage of lattice points in the (χ, c)-plane.

pub mod catalog;
pub mod construct;
pub mod geography;
pub mod invariants;
pub mod plot;
pub mod swring;
