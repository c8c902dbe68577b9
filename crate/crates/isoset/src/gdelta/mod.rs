//! The indexing category for simplicial sets with a two-element symmetry.
//!
//! Objects are finite posets built from a linear order `0 < 1 < ... < n`
//! doubled into two branches that are glued together from position `k`
//! upwards. The doubling carries an order involution that exchanges the two
//! branches below `k` and fixes everything from `k` on. Morphisms are
//! monotone maps that commute with the involution and preserve the size of
//! each point's stabilizer exactly (a fixed point may only land on a fixed
//! point, a free point only on a free point).
//!
//! The module provides the objects and their vertex calculus, validated
//! morphisms, the generating cofaces/codegeneracies/swap, the unique
//! factorization of an arbitrary morphism through codegeneracies, cofaces
//! and an optional swap, exhaustive hom-set enumeration, a checker for the
//! generator relations, and a small theory of finite posets with involution
//! used for products, fiber products and cospan completion.

mod cospan;
mod decompose;
mod gposet;
mod hom;
mod map;
mod object;
mod relations;

pub use cospan::{complete_cospan, CospanCompletion, ThickenedCospan};
pub use decompose::{decompose, Decomposition};
pub use gposet::{
    enumerate_gposet_maps, fiber_product, isov_product, split_thickened_name, thicken_level,
    thicken_map, thicken_poset, thicken_projection, thickened_name, to_gposet, to_gposet_map,
    try_from_gposet_map, FinGPoset, GPosetMap,
};
pub use hom::{enumerate_hom, enumerate_monos, enumerate_pure_epis, sections};
pub use map::{Coface, Codegen, GDeltaMap};
pub use object::{Branch, SimplexObject, Vertex};
pub use relations::{check_cosimplicial_relations, RelationInstance, RelationsReport};

use thiserror::Error;

/// Failure modes for object and morphism construction in the indexing category.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GDeltaError {
    /// The glue bound of an object must satisfy `k <= n + 1`.
    #[error("glue bound {k} out of range for dimension {n} (need k <= n + 1)")]
    GlueBoundOutOfRange { n: usize, k: usize },
    /// A generator index was outside its legal band.
    #[error("index {index} out of range for {generator} on [{n}]_{k}")]
    IndexOutOfRange {
        generator: &'static str,
        index: usize,
        n: usize,
        k: usize,
    },
    /// A vertex image was written in a non-canonical form (branch `s` at a
    /// fixed position) or points outside the target object.
    #[error("non-canonical or out-of-range vertex {vertex} for target {target}")]
    NonCanonicalVertex { vertex: String, target: String },
    /// The number of vertex images does not match the source object.
    #[error("expected {expected} vertex images for source {src}, got {got}")]
    ImageCountMismatch {
        src: String,
        expected: usize,
        got: usize,
    },
    /// Monotonicity failed on a concrete pair of comparable vertices.
    #[error("order violation: {u} <= {v} in {src} but {fu} !<= {fv} in {tgt}")]
    OrderViolation {
        src: String,
        tgt: String,
        u: String,
        v: String,
        fu: String,
        fv: String,
    },
    /// The map fails to commute with the involution on some vertex.
    #[error("equivariance violation at {vertex}: image of swapped vertex is {got}, expected {expected}")]
    EquivarianceViolation {
        vertex: String,
        got: String,
        expected: String,
    },
    /// A free vertex was sent to a fixed one or vice versa.
    #[error("stabilizer violation: {vertex} ({src_kind}) maps to {image} ({tgt_kind})")]
    IsovarianceViolation {
        vertex: String,
        image: String,
        src_kind: &'static str,
        tgt_kind: &'static str,
    },
    /// Two maps were composed whose middle objects disagree.
    #[error("composition mismatch: cannot compose map into {mid1} with map out of {mid2}")]
    CompositionMismatch { mid1: String, mid2: String },
    /// A poset map failed validation.
    #[error("poset map invalid: {0}")]
    PosetMapInvalid(String),
    /// A finite poset with involution failed validation.
    #[error("poset invalid: {0}")]
    PosetInvalid(String),
    /// A cospan handed to completion does not commute.
    #[error("cospan does not commute: {0}")]
    InvalidCospan(String),
}
