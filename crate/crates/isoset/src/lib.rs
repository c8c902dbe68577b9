//! Finite simplicial sets with a two-element-group twist.
//!
//! The crate models a variant of the simplex category whose objects are
//! posets with an order-preserving involution: each object `[n]_k` glues two
//! copies of the `n`-simplex along the vertices from index `k` upward, and
//! morphisms preserve order, the involution, and stabilizers exactly.
//! Presheaves over this category behave like simplicial sets: they have
//! boundaries, horns, cylinders, a homotopy relation, and a geometric
//! realization, all computed here by finite enumeration so that the
//! structural lemmas about them can be machine-checked in low dimensions.

pub mod anodyne;
pub mod codec;
pub mod cylinder;
pub mod gdelta;
pub mod homotopy;
pub mod presheaf;
pub mod realization;
pub mod standard;
