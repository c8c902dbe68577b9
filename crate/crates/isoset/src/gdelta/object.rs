use std::fmt;

use serde::{Deserialize, Serialize};

use super::GDeltaError;

/// One of the two branches of a doubled simplex.
///
/// `E` is the identity branch, `S` the branch obtained by applying the
/// involution. Vertices at a fixed position carry branch `E` in canonical
/// form; branch `S` is only meaningful below the glue bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Branch {
    E,
    S,
}

impl Branch {
    pub fn flipped(self) -> Branch {
        match self {
            Branch::E => Branch::S,
            Branch::S => Branch::E,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::E => "e",
            Branch::S => "s",
        }
    }
}

/// A vertex of a doubled simplex, written `index` + branch letter.
///
/// The derived order (index first, `E` before `S`) is the enumeration order
/// used throughout; it is not the poset order of the object, which lives in
/// [`SimplexObject::leq`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub index: usize,
    pub branch: Branch,
}

impl Vertex {
    pub fn new(index: usize, branch: Branch) -> Self {
        Vertex { index, branch }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.index, self.branch.as_str())
    }
}

/// An object of the indexing category: the linear order `0..=n` doubled into
/// two branches which are identified from position `k` upwards.
///
/// `k` ranges over `0..=n+1`. At `k = 0` the two branches coincide and the
/// object is the plain simplex; at `k = n + 1` nothing is identified and the
/// object is two disjoint copies. Positions `< k` form free involution
/// pairs, positions `>= k` are fixed points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimplexObject {
    n: usize,
    k: usize,
}

impl SimplexObject {
    pub fn new(n: usize, k: usize) -> Result<Self, GDeltaError> {
        if k > n + 1 {
            return Err(GDeltaError::GlueBoundOutOfRange { n, k });
        }
        Ok(SimplexObject { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct vertices: `n + 1 + k`.
    pub fn vertex_count(&self) -> usize {
        self.n + 1 + self.k
    }

    /// A vertex is a fixed point of the involution iff its index is at least
    /// the glue bound.
    pub fn is_fixed(&self, v: Vertex) -> bool {
        v.index >= self.k
    }

    /// Canonical form of a vertex: branch `S` is collapsed to `E` at fixed
    /// positions.
    pub fn canonical(&self, v: Vertex) -> Vertex {
        if v.index >= self.k {
            Vertex::new(v.index, Branch::E)
        } else {
            v
        }
    }

    /// Whether a vertex is in range and canonically written.
    pub fn contains(&self, v: Vertex) -> bool {
        v.index <= self.n && (v.branch == Branch::E || v.index < self.k)
    }

    /// The involution acting on a canonical vertex.
    pub fn swap_vertex(&self, v: Vertex) -> Vertex {
        self.canonical(Vertex::new(v.index, v.branch.flipped()))
    }

    /// All vertices in canonical form, ordered by index with branch `E`
    /// before `S`.
    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(self.vertex_count());
        for i in 0..=self.n {
            out.push(Vertex::new(i, Branch::E));
            if i < self.k {
                out.push(Vertex::new(i, Branch::S));
            }
        }
        out.sort();
        out
    }

    /// The partial order of the object, in closed form: `u <= v` iff the
    /// indices are ordered and either the branches agree or `v` is a fixed
    /// point. Both arguments must be canonical.
    ///
    /// The closed form is validated in tests against the reflexive-transitive
    /// closure of the generating relations of the doubled chain.
    pub fn leq(&self, u: Vertex, v: Vertex) -> bool {
        debug_assert!(self.contains(u) && self.contains(v));
        u.index <= v.index && (u.branch == v.branch || v.index >= self.k)
    }
}

impl fmt::Display for SimplexObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self.n, self.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_enumeration_order() {
        let obj = SimplexObject::new(2, 1).unwrap();
        let names: Vec<String> = obj.vertices().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["0e", "0s", "1e", "2e"]);
    }

    #[test]
    fn vertex_count_matches_formula() {
        for n in 0..=5 {
            for k in 0..=n + 1 {
                let obj = SimplexObject::new(n, k).unwrap();
                assert_eq!(obj.vertices().len(), n + 1 + k);
            }
        }
    }

    #[test]
    fn glue_bound_is_checked() {
        assert!(SimplexObject::new(2, 4).is_err());
        assert!(SimplexObject::new(2, 3).is_ok());
    }

    #[test]
    fn cross_branch_order_requires_fixed_upper() {
        let glued = SimplexObject::new(2, 1).unwrap();
        let s0 = Vertex::new(0, Branch::S);
        let e1 = Vertex::new(1, Branch::E);
        assert!(glued.leq(s0, e1));

        let split = SimplexObject::new(2, 2).unwrap();
        assert!(!split.leq(s0, e1));
    }
}
