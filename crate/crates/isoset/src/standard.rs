//! Standard finite objects: faces, boundaries and horns of representables,
//! plus the bracket notation for their cells.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::gdelta::{Branch, Coface, GDeltaMap, SimplexObject, Vertex};
use crate::presheaf::{
    coface_map, image, legal_cofaces, representable, representable_monos, sub_from_cells,
    yoneda_map, CellId, IsoSSet,
};

#[derive(Debug, Error)]
pub enum StandardError {
    #[error("coface ({index}, {eps}) is not legal into {target}")]
    IllegalCoface {
        target: SimplexObject,
        index: usize,
        eps: u8,
    },
    #[error("horn index {l} out of range for {target}")]
    HornIndexOutOfRange { target: SimplexObject, l: usize },
    #[error("horns need dimension at least 1, got {0}")]
    HornInDimensionZero(SimplexObject),
    #[error("cannot parse cell notation `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

/// The subobject of the representable at `deg` cut out by one generating
/// coface: every cell factoring through that face.
pub fn face_image(deg: SimplexObject, cf: Coface) -> Result<IsoSSet, StandardError> {
    if !legal_cofaces(deg).contains(&cf) {
        return Err(StandardError::IllegalCoface {
            target: deg,
            index: cf.index,
            eps: cf.eps,
        });
    }
    Ok(image(&yoneda_map(&coface_map(deg, cf))))
}

/// Union of all face images. Empty in dimension 0.
pub fn boundary(deg: SimplexObject) -> IsoSSet {
    let ambient = representable(deg);
    let mut keep: BTreeSet<CellId> = BTreeSet::new();
    for cf in legal_cofaces(deg) {
        let face = face_image(deg, cf).expect("enumerated cofaces are legal");
        keep.extend(face.cell_ids().cloned());
    }
    sub_from_cells(&ambient, &keep).expect("a union of subobjects is closed")
}

/// Index of the orbit a generating coface omits: the glue-raising coface
/// at `i` omits the free pair at `i`, the plain one omits the fixed
/// vertex at `i`.
pub fn omitted_orbit(cf: Coface) -> usize {
    cf.index
}

/// The horn: all cells of the representable whose image misses some
/// orbit other than the `l`-th. This membership predicate is the
/// authoritative construction; [`horn_by_faces`] is the cross-check.
pub fn horn(deg: SimplexObject, l: usize) -> Result<IsoSSet, StandardError> {
    if deg.n() == 0 {
        return Err(StandardError::HornInDimensionZero(deg));
    }
    if l > deg.n() {
        return Err(StandardError::HornIndexOutOfRange { target: deg, l });
    }
    let ambient = representable(deg);
    let mut keep = BTreeSet::new();
    for (id, mono) in representable_monos(deg) {
        let covered: BTreeSet<usize> = (0..=mono.src().n())
            .map(|j| mono.apply(Vertex::new(j, Branch::E)).index)
            .collect();
        let misses_other_orbit = (0..=deg.n()).any(|j| j != l && !covered.contains(&j));
        if misses_other_orbit {
            keep.insert(id);
        }
    }
    Ok(sub_from_cells(&ambient, &keep).expect("horn cells are closed under faces and swaps"))
}

/// The horn built the other way round: union of every face image except
/// the one omitting the `l`-th orbit.
pub fn horn_by_faces(deg: SimplexObject, l: usize) -> Result<IsoSSet, StandardError> {
    if deg.n() == 0 {
        return Err(StandardError::HornInDimensionZero(deg));
    }
    if l > deg.n() {
        return Err(StandardError::HornIndexOutOfRange { target: deg, l });
    }
    let ambient = representable(deg);
    let mut keep: BTreeSet<CellId> = BTreeSet::new();
    for cf in legal_cofaces(deg) {
        if omitted_orbit(cf) == l {
            continue;
        }
        let face = face_image(deg, cf).expect("enumerated cofaces are legal");
        keep.extend(face.cell_ids().cloned());
    }
    Ok(sub_from_cells(&ambient, &keep).expect("a union of subobjects is closed"))
}

/// Bracket notation for a cell of a representable, listing the images of
/// its vertices: cone vertices (below the glue bound, marked `^c`) before
/// the bar, real vertices (marked `^r`) after it, and a `^σ` suffix when
/// the cell is twisted.
pub fn notation(mono: &GDeltaMap) -> String {
    let k = mono.tgt().k();
    let mut cone = Vec::new();
    let mut real = Vec::new();
    let mut twisted = false;
    for j in 0..=mono.src().n() {
        let v = mono.apply(Vertex::new(j, Branch::E));
        if v.index < k {
            if v.branch == Branch::S {
                twisted = true;
            }
            cone.push(format!("v{}^c", v.index));
        } else {
            real.push(format!("v{}^r", v.index));
        }
    }
    let middle = match (cone.is_empty(), real.is_empty()) {
        (false, false) => format!("{} | {}", cone.join(" "), real.join(" ")),
        _ => [cone, real].concat().join(" "),
    };
    let suffix = if twisted { "^σ" } else { "" };
    format!("⟨{middle}⟩{suffix}")
}

/// Parse the bracket notation back into the defining injection into
/// `ambient`. Inverse of [`notation`] on cells of the representable.
pub fn parse_notation(text: &str, ambient: SimplexObject) -> Result<GDeltaMap, StandardError> {
    let fail = |reason: &str| StandardError::Parse {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    let (body, twisted) = match trimmed.strip_suffix("^σ") {
        Some(rest) => (rest, true),
        None => (trimmed, false),
    };
    let body = body
        .strip_prefix('⟨')
        .and_then(|b| b.strip_suffix('⟩'))
        .ok_or_else(|| fail("expected angle brackets"))?;
    let mut cone_images: Vec<usize> = Vec::new();
    let mut real_images: Vec<usize> = Vec::new();
    for token in body.split_whitespace() {
        if token == "|" {
            continue;
        }
        let rest = token
            .strip_prefix('v')
            .ok_or_else(|| fail("vertex tokens start with 'v'"))?;
        let (num, kind) = rest
            .split_once('^')
            .ok_or_else(|| fail("vertex tokens carry a ^c or ^r kind"))?;
        let index: usize = num.parse().map_err(|_| fail("bad vertex index"))?;
        match kind {
            "c" => {
                if index >= ambient.k() {
                    return Err(fail("cone vertex at or above the glue bound"));
                }
                cone_images.push(index);
            }
            "r" => {
                if index < ambient.k() {
                    return Err(fail("real vertex below the glue bound"));
                }
                real_images.push(index);
            }
            _ => return Err(fail("vertex kind must be c or r")),
        }
    }
    if twisted && cone_images.is_empty() {
        return Err(fail("a twist needs at least one cone vertex"));
    }
    let l = cone_images.len();
    let m = l + real_images.len();
    if m == 0 {
        return Err(fail("empty vertex list"));
    }
    let src = SimplexObject::new(m - 1, l)
        .map_err(|e| fail(&format!("no such source object: {e}")))?;
    let branch = if twisted { Branch::S } else { Branch::E };
    let e_images: Vec<Vertex> = cone_images
        .iter()
        .map(|&i| Vertex::new(i, branch))
        .chain(real_images.iter().map(|&i| Vertex::new(i, Branch::E)))
        .collect();
    let map = GDeltaMap::make_map(src, ambient, e_images)
        .map_err(|e| fail(&format!("not a valid map: {e}")))?;
    if !map.is_mono() {
        return Err(fail("notation must name an injective map"));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{is_sub, mono_cell_id, skeleton};

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn face_image_census_matches_its_source() {
        let face = face_image(obj(2, 1), Coface { index: 1, eps: 0 }).unwrap();
        let model = representable(obj(1, 1));
        assert_eq!(face.degree_census(), model.degree_census());
    }

    #[test]
    fn vertex_face_of_an_edge() {
        let face = face_image(obj(1, 0), Coface { index: 0, eps: 0 }).unwrap();
        assert_eq!(face.cell_count(), 1);
    }

    #[test]
    fn boundaries_in_dimension_zero_are_empty() {
        assert!(boundary(obj(0, 0)).is_empty());
        assert!(boundary(obj(0, 1)).is_empty());
    }

    #[test]
    fn boundary_census_of_the_mixed_triangle() {
        let b = boundary(obj(2, 1));
        let census = b.degree_census();
        assert_eq!(census[&obj(0, 0)], 2);
        assert_eq!(census[&obj(0, 1)], 2);
        assert_eq!(census[&obj(1, 0)], 1);
        assert_eq!(census[&obj(1, 1)], 4);
        assert_eq!(census.get(&obj(2, 1)), None);
        assert_eq!(skeleton(&representable(obj(2, 1)), 1), b);
    }

    #[test]
    fn horn_constructions_agree() {
        for l in 0..=2 {
            let a = horn(obj(2, 1), l).unwrap();
            let b = horn_by_faces(obj(2, 1), l).unwrap();
            assert_eq!(a, b, "horn mismatch at l={l}");
            assert!(is_sub(&a, &boundary(obj(2, 1))));
        }
    }

    #[test]
    fn horn_drops_the_named_face_interior() {
        let h = horn(obj(2, 1), 1).unwrap();
        let b = boundary(obj(2, 1));
        assert!(!h.has_cell(&CellId::new("0e,2e")));
        assert!(!h.has_cell(&CellId::new("0s,2e")));
        assert_eq!(h.cell_count() + 2, b.cell_count());
    }

    #[test]
    fn horn_rejects_bad_indices() {
        assert!(horn(obj(0, 1), 0).is_err());
        assert!(horn(obj(2, 1), 3).is_err());
    }

    #[test]
    fn notation_of_the_full_mixed_triangle() {
        let monos = representable_monos(obj(2, 1));
        let id_cell = monos[&CellId::new("0e,1e,2e")].clone();
        assert_eq!(notation(&id_cell), "⟨v0^c | v1^r v2^r⟩");
        let twisted = monos[&CellId::new("0s,1e,2e")].clone();
        assert_eq!(notation(&twisted), "⟨v0^c | v1^r v2^r⟩^σ");
    }

    #[test]
    fn notation_round_trips_on_all_cells() {
        let deg = obj(3, 2);
        for (id, mono) in representable_monos(deg) {
            let text = notation(&mono);
            let parsed = parse_notation(&text, deg).unwrap();
            assert_eq!(mono_cell_id(&parsed), id, "round trip failed for {text}");
        }
    }

    #[test]
    fn parse_rejects_malformed_text() {
        assert!(parse_notation("v0^c", obj(1, 1)).is_err());
        assert!(parse_notation("⟨v0^r⟩", obj(1, 1)).is_err());
        assert!(parse_notation("⟨v1^r⟩^σ", obj(1, 1)).is_err());
        assert!(parse_notation("⟨v0^c v0^c⟩", obj(1, 2)).is_err());
    }
}
