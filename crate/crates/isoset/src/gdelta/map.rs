use std::fmt;

use super::object::{Branch, SimplexObject, Vertex};
use super::GDeltaError;

/// A single generating coface, recorded by the vertex position it omits.
///
/// `eps = 0` omits a fixed position (legal when `index >= k`, raising the
/// dimension and keeping the glue bound), `eps = 1` omits a free pair (legal
/// when `index <= k`, raising both the dimension and the glue bound).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coface {
    pub index: usize,
    pub eps: u8,
}

/// A single generating codegeneracy, recorded by the lower of the two vertex
/// positions it merges.
///
/// With source `[n+1]_k`: `eps = 0` merges two fixed positions (`index >= k`)
/// and keeps the glue bound; `eps = 1` merges two free pairs
/// (`index <= k - 2`) and lowers the glue bound by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codegen {
    pub index: usize,
    pub eps: u8,
}

/// A morphism of the indexing category.
///
/// Stored by the images of the branch-`E` vertices only; the branch-`S`
/// images are forced by equivariance. Construction validates the full
/// three-part definition (monotone, equivariant, stabilizer-preserving) on
/// every vertex of both branches, so a constructed value is always a valid
/// morphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GDeltaMap {
    src: SimplexObject,
    tgt: SimplexObject,
    e_images: Vec<Vertex>,
}

impl GDeltaMap {
    /// Builds and fully validates a morphism from the images of the
    /// branch-`E` vertices `0..=n` of the source.
    pub fn make_map(
        src: SimplexObject,
        tgt: SimplexObject,
        e_images: Vec<Vertex>,
    ) -> Result<Self, GDeltaError> {
        if e_images.len() != src.n() + 1 {
            return Err(GDeltaError::ImageCountMismatch {
                src: src.to_string(),
                expected: src.n() + 1,
                got: e_images.len(),
            });
        }
        for v in &e_images {
            if !tgt.contains(*v) {
                return Err(GDeltaError::NonCanonicalVertex {
                    vertex: v.to_string(),
                    target: tgt.to_string(),
                });
            }
        }
        let map = GDeltaMap { src, tgt, e_images };
        map.validate()?;
        Ok(map)
    }

    /// The full three-part validation, quantified over all canonical
    /// vertices of both branches.
    fn validate(&self) -> Result<(), GDeltaError> {
        let verts = self.src.vertices();
        // Stabilizer preservation: fixed to fixed, free to free.
        for &v in &verts {
            let fv = self.apply(v);
            if self.src.is_fixed(v) != self.tgt.is_fixed(fv) {
                return Err(GDeltaError::IsovarianceViolation {
                    vertex: v.to_string(),
                    image: fv.to_string(),
                    src_kind: if self.src.is_fixed(v) { "fixed" } else { "free" },
                    tgt_kind: if self.tgt.is_fixed(fv) { "fixed" } else { "free" },
                });
            }
        }
        // Equivariance: commutes with the involution on every vertex.
        for &v in &verts {
            let got = self.apply(self.src.swap_vertex(v));
            let expected = self.tgt.swap_vertex(self.apply(v));
            if got != expected {
                return Err(GDeltaError::EquivarianceViolation {
                    vertex: v.to_string(),
                    got: got.to_string(),
                    expected: expected.to_string(),
                });
            }
        }
        // Monotonicity on every comparable pair.
        for &u in &verts {
            for &v in &verts {
                if self.src.leq(u, v) {
                    let (fu, fv) = (self.apply(u), self.apply(v));
                    if !self.tgt.leq(fu, fv) {
                        return Err(GDeltaError::OrderViolation {
                            src: self.src.to_string(),
                            tgt: self.tgt.to_string(),
                            u: u.to_string(),
                            v: v.to_string(),
                            fu: fu.to_string(),
                            fv: fv.to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn src(&self) -> SimplexObject {
        self.src
    }

    pub fn tgt(&self) -> SimplexObject {
        self.tgt
    }

    pub fn e_images(&self) -> &[Vertex] {
        &self.e_images
    }

    /// Image of an arbitrary canonical vertex, extending the stored
    /// branch-`E` images equivariantly.
    pub fn apply(&self, v: Vertex) -> Vertex {
        debug_assert!(self.src.contains(v));
        match v.branch {
            Branch::E => self.e_images[v.index],
            Branch::S => self.tgt.swap_vertex(self.e_images[v.index]),
        }
    }

    pub fn identity(obj: SimplexObject) -> Self {
        let e_images = (0..=obj.n()).map(|i| Vertex::new(i, Branch::E)).collect();
        GDeltaMap {
            src: obj,
            tgt: obj,
            e_images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.tgt && *self == GDeltaMap::identity(self.src)
    }

    /// The branch swap on `[n]_k`. Equal to the identity when `k = 0`.
    pub fn swap(obj: SimplexObject) -> Self {
        let e_images = (0..=obj.n())
            .map(|i| obj.canonical(Vertex::new(i, Branch::S)))
            .collect();
        GDeltaMap {
            src: obj,
            tgt: obj,
            e_images,
        }
    }

    /// The generating coface omitting position `index` of the target.
    ///
    /// Source is `[n]_k`. With `eps = 0` the target is `[n+1]_k` and
    /// `index` must lie in `k..=n+1`; with `eps = 1` the target is
    /// `[n+1]_{k+1}` and `index` must lie in `0..=k`.
    pub fn coface(n: usize, k: usize, index: usize, eps: u8) -> Result<Self, GDeltaError> {
        let src = SimplexObject::new(n, k)?;
        let legal = match eps {
            0 => index >= k && index <= n + 1,
            1 => index <= k,
            _ => false,
        };
        if !legal {
            return Err(GDeltaError::IndexOutOfRange {
                generator: if eps == 0 { "coface (fixed)" } else { "coface (free)" },
                index,
                n,
                k,
            });
        }
        let tgt = SimplexObject::new(n + 1, k + usize::from(eps == 1))?;
        let e_images = (0..=n)
            .map(|j| Vertex::new(if j < index { j } else { j + 1 }, Branch::E))
            .collect();
        GDeltaMap::make_map(src, tgt, e_images)
    }

    /// The generating codegeneracy merging positions `index` and `index + 1`
    /// of the source.
    ///
    /// Source is `[n+1]_k`. With `eps = 0` the target is `[n]_k` and `index`
    /// must lie in `k..=n`; with `eps = 1` the target is `[n]_{k-1}` and
    /// `index` must lie in `0..=k-2` (both merged positions stay free).
    pub fn codegeneracy(n: usize, k: usize, index: usize, eps: u8) -> Result<Self, GDeltaError> {
        let src = SimplexObject::new(n + 1, k)?;
        let legal = match eps {
            0 => index >= k && index <= n,
            1 => k >= 1 && index + 2 <= k,
            _ => false,
        };
        if !legal {
            return Err(GDeltaError::IndexOutOfRange {
                generator: if eps == 0 {
                    "codegeneracy (fixed)"
                } else {
                    "codegeneracy (free)"
                },
                index,
                n: n + 1,
                k,
            });
        }
        let tgt = SimplexObject::new(n, k - usize::from(eps == 1))?;
        let e_images = (0..=n + 1)
            .map(|j| Vertex::new(if j <= index { j } else { j - 1 }, Branch::E))
            .collect();
        GDeltaMap::make_map(src, tgt, e_images)
    }

    /// Composition `self` after `first`: the resulting map sends `v` to
    /// `self(first(v))`.
    pub fn compose(&self, first: &GDeltaMap) -> Result<Self, GDeltaError> {
        if first.tgt != self.src {
            return Err(GDeltaError::CompositionMismatch {
                mid1: self.src.to_string(),
                mid2: first.tgt.to_string(),
            });
        }
        let e_images = (0..=first.src.n())
            .map(|j| self.apply(first.e_images[j]))
            .collect();
        // Both factors are valid, so the composite is; skip re-validation.
        Ok(GDeltaMap {
            src: first.src,
            tgt: self.tgt,
            e_images,
        })
    }

    /// Composition `self` after `first` when composability is guaranteed
    /// by construction; panics on an endpoint mismatch.
    pub fn after(&self, first: &GDeltaMap) -> Self {
        self.compose(first)
            .expect("endpoints match by construction")
    }

    /// Injectivity on the full vertex set.
    pub fn is_mono(&self) -> bool {
        let verts = self.src.vertices();
        let mut images: Vec<Vertex> = verts.iter().map(|&v| self.apply(v)).collect();
        images.sort();
        images.windows(2).all(|w| w[0] != w[1])
    }

    /// Surjectivity onto the full vertex set.
    pub fn is_epi(&self) -> bool {
        let mut images: Vec<Vertex> = self.src.vertices().iter().map(|&v| self.apply(v)).collect();
        images.sort();
        images.dedup();
        images.len() == self.tgt.vertex_count()
    }

    /// Whether every branch-`E` vertex maps to a branch-`E` vertex. Epis of
    /// this kind are exactly the composites of codegeneracies.
    pub fn is_branch_preserving(&self) -> bool {
        self.e_images.iter().all(|v| v.branch == Branch::E)
    }
}

impl fmt::Display for GDeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [", self.src, self.tgt)?;
        for (j, v) in self.e_images.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
