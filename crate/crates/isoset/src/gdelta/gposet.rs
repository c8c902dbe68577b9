//! Finite posets with an order-preserving involution, and the isovariant
//! maps between them.
//!
//! The indexing category embeds here (objects become their vertex posets),
//! but the poset world is strictly larger: it also contains the thickened
//! objects (a prism over each object), isovariant products and fiber
//! products. Maps are required to preserve order, commute with the
//! involution, and preserve stabilizers exactly (fixed points to fixed
//! points, moved points to moved points).

use std::collections::BTreeMap;
use std::fmt;

use super::map::GDeltaMap;
use super::object::{Branch, SimplexObject, Vertex};
use super::GDeltaError;

/// Name of a prism element over `vertex` at `level`, as in `(1e,0)`.
pub fn thickened_name(vertex: &str, level: u8) -> String {
    format!("({vertex},{level})")
}

/// Splits a prism element name back into vertex name and level.
pub fn split_thickened_name(name: &str) -> Option<(&str, u8)> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    let (vertex, level) = inner.rsplit_once(',')?;
    let level: u8 = level.parse().ok()?;
    (level < 2).then_some((vertex, level))
}

/// A finite poset with an order-preserving involution, elements addressed
/// both by name and by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGPoset {
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    leq: Vec<Vec<bool>>,
    involution: Vec<usize>,
}

impl FinGPoset {
    /// Builds and validates: `leq` must be a partial order, `involution` an
    /// order-preserving self-inverse permutation.
    pub fn from_parts(
        elements: Vec<String>,
        leq_fn: impl Fn(usize, usize) -> bool,
        involution_fn: impl Fn(usize) -> usize,
    ) -> Result<Self, GDeltaError> {
        let n = elements.len();
        let mut index = BTreeMap::new();
        for (i, name) in elements.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(GDeltaError::PosetInvalid(format!(
                    "duplicate element name {name:?}"
                )));
            }
        }
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| leq_fn(i, j)).collect())
            .collect();
        let involution: Vec<usize> = (0..n).map(&involution_fn).collect();

        for i in 0..n {
            if !leq[i][i] {
                return Err(GDeltaError::PosetInvalid(format!(
                    "order not reflexive at {}",
                    elements[i]
                )));
            }
            if involution[i] >= n || involution[involution[i]] != i {
                return Err(GDeltaError::PosetInvalid(format!(
                    "involution not self-inverse at {}",
                    elements[i]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(GDeltaError::PosetInvalid(format!(
                        "order not antisymmetric on {} and {}",
                        elements[i], elements[j]
                    )));
                }
                if leq[i][j] && !leq[involution[i]][involution[j]] {
                    return Err(GDeltaError::PosetInvalid(format!(
                        "involution not order-preserving on {} and {}",
                        elements[i], elements[j]
                    )));
                }
                for m in 0..n {
                    if leq[i][j] && leq[j][m] && !leq[i][m] {
                        return Err(GDeltaError::PosetInvalid(format!(
                            "order not transitive through {}",
                            elements[j]
                        )));
                    }
                }
            }
        }

        Ok(FinGPoset {
            elements,
            index,
            leq,
            involution,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn sigma(&self, i: usize) -> usize {
        self.involution[i]
    }

    /// Fixed under the involution.
    pub fn is_fixed(&self, i: usize) -> bool {
        self.involution[i] == i
    }
}

/// An isovariant order-preserving map of involutive posets, stored with
/// owned copies of both endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GPosetMap {
    src: FinGPoset,
    tgt: FinGPoset,
    images: Vec<usize>,
}

impl GPosetMap {
    pub fn new(src: FinGPoset, tgt: FinGPoset, images: Vec<usize>) -> Result<Self, GDeltaError> {
        if images.len() != src.len() {
            return Err(GDeltaError::PosetMapInvalid(format!(
                "expected {} images, got {}",
                src.len(),
                images.len()
            )));
        }
        for (i, &fi) in images.iter().enumerate() {
            if fi >= tgt.len() {
                return Err(GDeltaError::PosetMapInvalid(format!(
                    "image of {} out of range",
                    src.name(i)
                )));
            }
            if src.is_fixed(i) != tgt.is_fixed(fi) {
                return Err(GDeltaError::PosetMapInvalid(format!(
                    "stabilizer not preserved at {}",
                    src.name(i)
                )));
            }
            if images[src.sigma(i)] != tgt.sigma(fi) {
                return Err(GDeltaError::PosetMapInvalid(format!(
                    "involution not respected at {}",
                    src.name(i)
                )));
            }
        }
        for i in 0..src.len() {
            for j in 0..src.len() {
                if src.leq(i, j) && !tgt.leq(images[i], images[j]) {
                    return Err(GDeltaError::PosetMapInvalid(format!(
                        "order violated on {} <= {}",
                        src.name(i),
                        src.name(j)
                    )));
                }
            }
        }
        Ok(GPosetMap { src, tgt, images })
    }

    pub fn from_names(
        src: FinGPoset,
        tgt: FinGPoset,
        by_name: &BTreeMap<String, String>,
    ) -> Result<Self, GDeltaError> {
        let images = src
            .elements()
            .iter()
            .map(|e| {
                let img = by_name.get(e).ok_or_else(|| {
                    GDeltaError::PosetMapInvalid(format!("no image given for {e}"))
                })?;
                tgt.index_of(img).ok_or_else(|| {
                    GDeltaError::PosetMapInvalid(format!("unknown target element {img}"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GPosetMap::new(src, tgt, images)
    }

    pub fn identity(poset: FinGPoset) -> Self {
        let images = (0..poset.len()).collect();
        GPosetMap {
            src: poset.clone(),
            tgt: poset,
            images,
        }
    }

    pub fn src(&self) -> &FinGPoset {
        &self.src
    }

    pub fn tgt(&self) -> &FinGPoset {
        &self.tgt
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply_name(&self, name: &str) -> Option<&str> {
        self.src.index_of(name).map(|i| self.tgt.name(self.images[i]))
    }

    /// Composition `self` after `first`.
    pub fn compose(&self, first: &GPosetMap) -> Result<Self, GDeltaError> {
        if first.tgt != self.src {
            return Err(GDeltaError::PosetMapInvalid(
                "composition endpoints do not match".into(),
            ));
        }
        let images = first.images.iter().map(|&i| self.images[i]).collect();
        Ok(GPosetMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            images,
        })
    }

    /// Composition `self` after `first` when the endpoints are known to
    /// match by construction; panics on a mismatch.
    pub fn after(&self, first: &GPosetMap) -> Self {
        self.compose(first)
            .expect("poset map endpoints match by construction")
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.tgt.len()];
        self.images.iter().all(|&i| !std::mem::replace(&mut seen[i], true))
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }
}

impl fmt::Display for GPosetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .src
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{e}->{}", self.tgt.name(self.images[i])))
            .collect();
        write!(f, "{{{}}}", pairs.join(", "))
    }
}

/// The vertex poset of an object of the indexing category.
pub fn to_gposet(obj: SimplexObject) -> FinGPoset {
    let verts = obj.vertices();
    let names = verts.iter().map(Vertex::to_string).collect();
    FinGPoset::from_parts(
        names,
        |i, j| obj.leq(verts[i], verts[j]),
        |i| {
            let sv = obj.swap_vertex(verts[i]);
            verts.iter().position(|&v| v == sv).expect("closed under swap")
        },
    )
    .expect("object poset is valid")
}

/// A morphism of the indexing category as a poset map.
pub fn to_gposet_map(f: &GDeltaMap) -> GPosetMap {
    let src = to_gposet(f.src());
    let tgt = to_gposet(f.tgt());
    let src_verts = f.src().vertices();
    let images = src_verts
        .iter()
        .map(|&v| {
            tgt.index_of(&f.apply(v).to_string())
                .expect("image is a canonical vertex")
        })
        .collect();
    GPosetMap::new(src, tgt, images).expect("morphisms are isovariant poset maps")
}

/// Reads a poset map between two object posets back as a morphism of the
/// indexing category, failing if it is not one (it always is: the embedding
/// is full, so this re-validates and re-types).
pub fn try_from_gposet_map(
    m: &GPosetMap,
    src: SimplexObject,
    tgt: SimplexObject,
) -> Result<GDeltaMap, GDeltaError> {
    if *m.src() != to_gposet(src) || *m.tgt() != to_gposet(tgt) {
        return Err(GDeltaError::PosetMapInvalid(
            "endpoints are not the posets of the given objects".into(),
        ));
    }
    let e_images = (0..=src.n())
        .map(|j| {
            let name = m
                .apply_name(&Vertex::new(j, Branch::E).to_string())
                .expect("canonical vertex name");
            parse_vertex(name)
        })
        .collect::<Result<Vec<_>, _>>()?;
    GDeltaMap::make_map(src, tgt, e_images)
}

fn parse_vertex(name: &str) -> Result<Vertex, GDeltaError> {
    let (digits, branch) = name.split_at(name.len().saturating_sub(1));
    let index: usize = digits.parse().map_err(|_| {
        GDeltaError::PosetMapInvalid(format!("unparseable vertex name {name:?}"))
    })?;
    let branch = match branch {
        "e" => Branch::E,
        "s" => Branch::S,
        _ => {
            return Err(GDeltaError::PosetMapInvalid(format!(
                "unparseable vertex branch in {name:?}"
            )))
        }
    };
    Ok(Vertex::new(index, branch))
}

/// The prism over an object: vertex poset times the two-element chain, with
/// the involution acting on the first factor only. Elements are named
/// `({vertex},{level})`.
pub fn thicken_poset(obj: SimplexObject) -> FinGPoset {
    let verts = obj.vertices();
    let mut names = Vec::with_capacity(verts.len() * 2);
    for v in &verts {
        for level in 0..2 {
            names.push(thickened_name(&v.to_string(), level));
        }
    }
    FinGPoset::from_parts(
        names,
        |i, j| {
            let (vi, li) = (verts[i / 2], i % 2);
            let (vj, lj) = (verts[j / 2], j % 2);
            obj.leq(vi, vj) && li <= lj
        },
        |i| {
            let sv = obj.swap_vertex(verts[i / 2]);
            let pos = verts.iter().position(|&v| v == sv).expect("closed under swap");
            pos * 2 + i % 2
        },
    )
    .expect("prism poset is valid")
}

/// The prism over a morphism: acts on the vertex, keeps the level.
pub fn thicken_map(f: &GDeltaMap) -> GPosetMap {
    let src = thicken_poset(f.src());
    let tgt = thicken_poset(f.tgt());
    let src_verts = f.src().vertices();
    let images = (0..src.len())
        .map(|i| {
            let v = src_verts[i / 2];
            let name = thickened_name(&f.apply(v).to_string(), (i % 2) as u8);
            tgt.index_of(&name).expect("image element exists")
        })
        .collect();
    GPosetMap::new(src, tgt, images).expect("prism of a morphism is isovariant")
}

/// Level inclusion of an object into its prism.
pub fn thicken_level(obj: SimplexObject, level: u8) -> GPosetMap {
    let src = to_gposet(obj);
    let tgt = thicken_poset(obj);
    let images = src
        .elements()
        .iter()
        .map(|v| {
            tgt.index_of(&thickened_name(v, level))
                .expect("level copy exists")
        })
        .collect();
    GPosetMap::new(src, tgt, images).expect("level inclusion is isovariant")
}

/// Projection from the prism back to the object.
pub fn thicken_projection(obj: SimplexObject) -> GPosetMap {
    let src = thicken_poset(obj);
    let tgt = to_gposet(obj);
    let images = src
        .elements()
        .iter()
        .map(|e| {
            let (vertex, _) = split_thickened_name(e).expect("prism element name");
            tgt.index_of(vertex).expect("vertex exists")
        })
        .collect();
    GPosetMap::new(src, tgt, images).expect("projection is isovariant")
}

/// Isovariant product: pairs whose coordinates are both fixed or both
/// moved, ordered and acted on componentwise.
pub fn isov_product(a: &FinGPoset, b: &FinGPoset) -> FinGPoset {
    let mut pairs = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            if a.is_fixed(i) == b.is_fixed(j) {
                pairs.push((i, j));
            }
        }
    }
    let names = pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", a.name(i), b.name(j)))
        .collect();
    FinGPoset::from_parts(
        names,
        |p, q| {
            let ((i1, j1), (i2, j2)) = (pairs[p], pairs[q]);
            a.leq(i1, i2) && b.leq(j1, j2)
        },
        |p| {
            let (i, j) = pairs[p];
            let target = (a.sigma(i), b.sigma(j));
            pairs.iter().position(|&pq| pq == target).expect("closed under swap")
        },
    )
    .expect("isovariant product is valid")
}

/// Fiber product of two maps with a common target, as a sub-poset of the
/// isovariant product, with its two projections.
pub fn fiber_product(f: &GPosetMap, g: &GPosetMap) -> (FinGPoset, GPosetMap, GPosetMap) {
    assert_eq!(f.tgt(), g.tgt(), "fiber product needs a common target");
    let (a, b) = (f.src().clone(), g.src().clone());
    let mut pairs = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            if f.apply(i) == g.apply(j) {
                pairs.push((i, j));
            }
        }
    }
    let names: Vec<String> = pairs
        .iter()
        .map(|&(i, j)| format!("({},{})", a.name(i), b.name(j)))
        .collect();
    let poset = FinGPoset::from_parts(
        names,
        |p, q| {
            let ((i1, j1), (i2, j2)) = (pairs[p], pairs[q]);
            a.leq(i1, i2) && b.leq(j1, j2)
        },
        |p| {
            let (i, j) = pairs[p];
            let target = (a.sigma(i), b.sigma(j));
            pairs.iter().position(|&pq| pq == target).expect("closed under swap")
        },
    )
    .expect("fiber product is valid");
    let proj1 = GPosetMap::new(poset.clone(), a, pairs.iter().map(|&(i, _)| i).collect())
        .expect("first projection is isovariant");
    let proj2 = GPosetMap::new(poset.clone(), b, pairs.iter().map(|&(_, j)| j).collect())
        .expect("second projection is isovariant");
    (poset, proj1, proj2)
}

/// All isovariant maps `src -> tgt`, by backtracking over involution
/// orbits with order-consistency pruning.
pub fn enumerate_gposet_maps(src: &FinGPoset, tgt: &FinGPoset) -> Vec<GPosetMap> {
    let n = src.len();
    let mut out = Vec::new();
    let mut images: Vec<Option<usize>> = vec![None; n];

    fn consistent(src: &FinGPoset, tgt: &FinGPoset, images: &[Option<usize>], i: usize) -> bool {
        let fi = images[i].expect("just assigned");
        for j in 0..src.len() {
            let Some(fj) = images[j] else { continue };
            if src.leq(i, j) && !tgt.leq(fi, fj) {
                return false;
            }
            if src.leq(j, i) && !tgt.leq(fj, fi) {
                return false;
            }
        }
        true
    }

    fn rec(
        src: &FinGPoset,
        tgt: &FinGPoset,
        images: &mut Vec<Option<usize>>,
        next: usize,
        out: &mut Vec<GPosetMap>,
    ) {
        let Some(i) = (next..src.len()).find(|&i| images[i].is_none()) else {
            let assigned: Vec<usize> = images.iter().map(|o| o.expect("all set")).collect();
            out.push(
                GPosetMap::new(src.clone(), tgt.clone(), assigned)
                    .expect("pruned assignments are valid"),
            );
            return;
        };
        for cand in 0..tgt.len() {
            if src.is_fixed(i) != tgt.is_fixed(cand) {
                continue;
            }
            images[i] = Some(cand);
            let partner = src.sigma(i);
            // Orbit assignment: the partner's image is forced.
            if partner != i {
                images[partner] = Some(tgt.sigma(cand));
            }
            if consistent(src, tgt, images, i)
                && (partner == i || consistent(src, tgt, images, partner))
            {
                rec(src, tgt, images, i + 1, out);
            }
            images[i] = None;
            if partner != i {
                images[partner] = None;
            }
        }
    }

    rec(src, tgt, &mut images, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_poset_round_trips_through_maps() {
        let src = SimplexObject::new(2, 1).unwrap();
        let tgt = SimplexObject::new(3, 2).unwrap();
        for f in super::super::hom::enumerate_hom(src, tgt) {
            let pm = to_gposet_map(&f);
            let back = try_from_gposet_map(&pm, src, tgt).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn isovariant_product_of_two_free_segments() {
        // Each factor has a free pair and a fixed endpoint; the product
        // keeps matched-stabilizer pairs only: 2*2 free plus 1 fixed.
        let seg = to_gposet(SimplexObject::new(1, 1).unwrap());
        let prod = isov_product(&seg, &seg);
        assert_eq!(prod.len(), 5);
    }

    #[test]
    fn prism_doubles_the_vertex_count() {
        let obj = SimplexObject::new(2, 1).unwrap();
        let th = thicken_poset(obj);
        assert_eq!(th.len(), 2 * obj.vertex_count());
        // Level inclusions section the projection.
        let pr = thicken_projection(obj);
        for level in 0..2 {
            let inc = thicken_level(obj, level);
            let round = pr.compose(&inc).unwrap();
            assert_eq!(round, GPosetMap::identity(to_gposet(obj)));
        }
    }

    #[test]
    fn fiber_product_of_identities_is_diagonal() {
        let p = to_gposet(SimplexObject::new(1, 1).unwrap());
        let id = GPosetMap::identity(p.clone());
        let (fp, pr1, pr2) = fiber_product(&id, &id);
        assert_eq!(fp.len(), p.len());
        assert_eq!(pr1, pr2);
    }

    #[test]
    fn poset_map_enumeration_respects_stabilizers() {
        let free_pt = to_gposet(SimplexObject::new(0, 1).unwrap());
        let fixed_pt = to_gposet(SimplexObject::new(0, 0).unwrap());
        assert!(enumerate_gposet_maps(&free_pt, &fixed_pt).is_empty());
        assert_eq!(enumerate_gposet_maps(&free_pt, &free_pt).len(), 2);
    }

    #[test]
    fn enumeration_agrees_with_category_homs() {
        let src = SimplexObject::new(1, 1).unwrap();
        let tgt = SimplexObject::new(2, 2).unwrap();
        let maps = enumerate_gposet_maps(&to_gposet(src), &to_gposet(tgt));
        let homs = super::super::hom::enumerate_hom(src, tgt);
        assert_eq!(maps.len(), homs.len());
    }
}
