//! Natural maps between presheaves, given by their values on cells.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

use crate::gdelta::SimplexObject;

use super::{coface_map, legal_cofaces, CellId, IsoSSet, PresheafError, Simplex};

/// A natural map, stored by its value on every cell of the source. The
/// value on an arbitrary simplex follows by composing surjection parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafMap {
    src: IsoSSet,
    tgt: IsoSSet,
    assignment: BTreeMap<CellId, Simplex>,
}

impl PresheafMap {
    /// Check completeness, well-formedness and naturality of a cell
    /// assignment, then wrap it up.
    pub fn new(
        src: IsoSSet,
        tgt: IsoSSet,
        assignment: BTreeMap<CellId, Simplex>,
    ) -> Result<Self, PresheafError> {
        for u in assignment.keys() {
            if !src.has_cell(u) {
                return Err(PresheafError::UnknownCell(u.to_string()));
            }
        }
        for u in src.cell_ids() {
            let s = assignment
                .get(u)
                .ok_or_else(|| PresheafError::NotNatural(format!("cell `{u}` is unassigned")))?;
            if !tgt.has_cell(&s.cell) {
                return Err(PresheafError::UnknownCell(s.cell.to_string()));
            }
            if s.degree() != src.degree_of(u)
                || s.epi.tgt() != tgt.degree_of(&s.cell)
                || !s.epi.is_epi()
                || !s.epi.is_branch_preserving()
            {
                return Err(PresheafError::NotNatural(format!(
                    "image of `{u}` is not a well-formed simplex of its degree"
                )));
            }
        }
        let map = PresheafMap {
            src,
            tgt,
            assignment,
        };
        for u in map.src.cell_ids() {
            let du = map.src.degree_of(u);
            for cf in legal_cofaces(du) {
                let through_src = map.apply(map.src.face(u, cf));
                let through_tgt = map
                    .tgt
                    .act_simplex(map.apply_cell(u), &coface_map(du, cf));
                if through_src != through_tgt {
                    return Err(PresheafError::NotNatural(format!(
                        "face {cf:?} of `{u}`: image of the face is {through_src}, \
                         face of the image is {through_tgt}"
                    )));
                }
            }
            let swapped = map.apply_cell(map.src.swap_cell(u)).clone();
            if swapped != map.tgt.swap_simplex(map.apply_cell(u)) {
                return Err(PresheafError::NotNatural(format!(
                    "swap of `{u}` does not commute with the map"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(x: &IsoSSet) -> Self {
        let assignment = x
            .cells()
            .map(|(id, cell)| {
                (
                    id.clone(),
                    Simplex {
                        epi: crate::gdelta::GDeltaMap::identity(cell.degree),
                        cell: id.clone(),
                    },
                )
            })
            .collect();
        PresheafMap {
            src: x.clone(),
            tgt: x.clone(),
            assignment,
        }
    }

    pub fn src(&self) -> &IsoSSet {
        &self.src
    }

    pub fn tgt(&self) -> &IsoSSet {
        &self.tgt
    }

    pub fn assignment(&self) -> &BTreeMap<CellId, Simplex> {
        &self.assignment
    }

    /// Image of a cell.
    pub fn apply_cell(&self, u: &CellId) -> &Simplex {
        &self.assignment[u]
    }

    /// Image of an arbitrary simplex.
    pub fn apply(&self, s: &Simplex) -> Simplex {
        let img = &self.assignment[&s.cell];
        Simplex {
            epi: img.epi.after(&s.epi),
            cell: img.cell.clone(),
        }
    }

    /// Composition `self` after `first`; their endpoints must match.
    pub fn compose(&self, first: &PresheafMap) -> Result<PresheafMap, PresheafError> {
        if first.tgt != self.src {
            return Err(PresheafError::EndpointMismatch(
                "inner target differs from outer source".into(),
            ));
        }
        let assignment = first
            .assignment
            .iter()
            .map(|(u, s)| (u.clone(), self.apply(s)))
            .collect();
        // Naturality is preserved under composition; no recheck needed.
        Ok(PresheafMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            assignment,
        })
    }

    /// A natural map is injective exactly when it sends cells to cells
    /// without collisions: values on general simplices then differ
    /// whenever their normal forms do.
    pub fn is_mono(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.assignment
            .values()
            .all(|s| s.is_cell() && seen.insert(s.cell.clone()))
    }

    /// Injective plus an equal cell census per degree is a bijection on
    /// cells, hence an isomorphism.
    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.src.degree_census() == self.tgt.degree_census()
    }

    pub fn inverse(&self) -> Option<PresheafMap> {
        if !self.is_iso() {
            return None;
        }
        let assignment: BTreeMap<CellId, Simplex> = self
            .assignment
            .iter()
            .map(|(u, s)| {
                (
                    s.cell.clone(),
                    Simplex {
                        epi: crate::gdelta::GDeltaMap::identity(self.src.degree_of(u)),
                        cell: u.clone(),
                    },
                )
            })
            .collect();
        Some(PresheafMap {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            assignment,
        })
    }
}

/// Cells of `x` in ascending dimension; all faces of a cell precede it.
fn cell_order(x: &IsoSSet) -> Vec<CellId> {
    let mut order: Vec<CellId> = x.cell_ids().cloned().collect();
    order.sort_by_key(|id| {
        let d = x.degree_of(id);
        (d.n(), d.k(), id.clone())
    });
    order
}

/// Can `u -> s` coexist with the partial assignment built so far?
fn consistent(
    x: &IsoSSet,
    y: &IsoSSet,
    partial: &BTreeMap<CellId, Simplex>,
    u: &CellId,
    s: &Simplex,
) -> bool {
    let du = x.degree_of(u);
    if !y.has_cell(&s.cell)
        || s.degree() != du
        || s.epi.tgt() != y.degree_of(&s.cell)
        || !s.epi.is_epi()
        || !s.epi.is_branch_preserving()
    {
        return false;
    }
    for cf in legal_cofaces(du) {
        let face = x.face(u, cf);
        if let Some(img_of_face_cell) = partial.get(&face.cell) {
            let through_src = Simplex {
                epi: img_of_face_cell.epi.after(&face.epi),
                cell: img_of_face_cell.cell.clone(),
            };
            let through_tgt = y.act_simplex(s, &coface_map(du, cf));
            if through_src != through_tgt {
                return false;
            }
        }
    }
    let su = x.swap_cell(u);
    if su == u {
        if y.swap_simplex(s) != *s {
            return false;
        }
    } else if let Some(img_of_swap) = partial.get(su) {
        if *img_of_swap != y.swap_simplex(s) {
            return false;
        }
    }
    true
}

/// All natural maps `x -> y` extending the partial assignment `fixed`,
/// found by backtracking over cells in ascending dimension. Candidate
/// images are tried least-collapsed first. `limit` caps the number of
/// maps returned.
pub fn extend_to_map(
    x: &IsoSSet,
    y: &IsoSSet,
    fixed: &BTreeMap<CellId, Simplex>,
    limit: Option<usize>,
) -> Vec<PresheafMap> {
    for u in fixed.keys() {
        assert!(x.has_cell(u), "fixed assignment names unknown cell `{u}`");
    }
    let order = cell_order(x);
    let mut candidates: BTreeMap<SimplexObject, Vec<Simplex>> = BTreeMap::new();
    for d in x.cell_degrees() {
        let mut sims = y.simplices_at(d);
        sims.sort_by_key(|s| (Reverse(s.epi.tgt().vertex_count()), s.cell.clone()));
        candidates.insert(d, sims);
    }

    struct Search<'a> {
        x: &'a IsoSSet,
        y: &'a IsoSSet,
        order: &'a [CellId],
        fixed: &'a BTreeMap<CellId, Simplex>,
        candidates: &'a BTreeMap<SimplexObject, Vec<Simplex>>,
        limit: Option<usize>,
        found: Vec<BTreeMap<CellId, Simplex>>,
    }

    impl Search<'_> {
        fn full(&self) -> bool {
            self.limit.is_some_and(|cap| self.found.len() >= cap)
        }

        fn step(&mut self, idx: usize, partial: &mut BTreeMap<CellId, Simplex>) {
            if self.full() {
                return;
            }
            if idx == self.order.len() {
                self.found.push(partial.clone());
                return;
            }
            let u = &self.order[idx];
            if let Some(pinned) = self.fixed.get(u) {
                if consistent(self.x, self.y, partial, u, pinned) {
                    self.step(idx + 1, partial);
                }
                return;
            }
            let pool = self.candidates[&self.x.degree_of(u)].clone();
            for s in pool {
                if consistent(self.x, self.y, partial, u, &s) {
                    partial.insert(u.clone(), s);
                    self.step(idx + 1, partial);
                    partial.remove(u);
                    if self.full() {
                        return;
                    }
                }
            }
        }
    }

    let mut search = Search {
        x,
        y,
        order: &order,
        fixed,
        candidates: &candidates,
        limit,
        found: Vec::new(),
    };
    let mut partial = fixed.clone();
    search.step(0, &mut partial);
    search
        .found
        .into_iter()
        .map(|assignment| {
            PresheafMap::new(x.clone(), y.clone(), assignment)
                .expect("search emits natural assignments")
        })
        .collect()
}

/// Shrinks the target of `f` to a subobject of it that contains the whole
/// image; fails when `sub` is not a subobject or misses part of the image.
pub fn corestrict(f: &PresheafMap, sub: &IsoSSet) -> Result<PresheafMap, PresheafError> {
    if !super::build::is_sub(sub, f.tgt()) {
        return Err(PresheafError::NotClosed(
            "corestriction target must be a subobject of the original target".into(),
        ));
    }
    PresheafMap::new(f.src().clone(), sub.clone(), f.assignment().clone())
}

/// All natural maps `x -> y`.
pub fn enumerate_presheaf_maps(x: &IsoSSet, y: &IsoSSet) -> Vec<PresheafMap> {
    extend_to_map(x, y, &BTreeMap::new(), None)
}

/// Search for an isomorphism: a degree-preserving cell bijection
/// compatible with faces and swaps. The cell census per degree prunes
/// mismatches immediately.
pub fn find_isomorphism(x: &IsoSSet, y: &IsoSSet) -> Option<PresheafMap> {
    if x.degree_census() != y.degree_census() {
        return None;
    }
    let order = cell_order(x);
    let mut by_degree: BTreeMap<SimplexObject, Vec<CellId>> = BTreeMap::new();
    for (id, cell) in y.cells() {
        by_degree.entry(cell.degree).or_default().push(id.clone());
    }

    fn step(
        x: &IsoSSet,
        y: &IsoSSet,
        order: &[CellId],
        by_degree: &BTreeMap<SimplexObject, Vec<CellId>>,
        idx: usize,
        partial: &mut BTreeMap<CellId, CellId>,
        used: &mut BTreeSet<CellId>,
    ) -> bool {
        let Some(u) = order.get(idx) else {
            return true;
        };
        let du = x.degree_of(u);
        for img in &by_degree[&du] {
            if used.contains(img) {
                continue;
            }
            let ok = legal_cofaces(du).into_iter().all(|cf| {
                let fx = x.face(u, cf);
                let fy = y.face(img, cf);
                fy.epi == fx.epi && fy.cell == partial[&fx.cell]
            }) && {
                let su = x.swap_cell(u);
                if su == u {
                    y.swap_cell(img) == img
                } else {
                    match partial.get(su) {
                        Some(img_swap) => y.swap_cell(img) == img_swap,
                        None => true,
                    }
                }
            };
            if !ok {
                continue;
            }
            partial.insert(u.clone(), img.clone());
            used.insert(img.clone());
            if step(x, y, order, by_degree, idx + 1, partial, used) {
                return true;
            }
            partial.remove(u);
            used.remove(img);
        }
        false
    }

    let mut partial = BTreeMap::new();
    let mut used = BTreeSet::new();
    if !step(x, y, &order, &by_degree, 0, &mut partial, &mut used) {
        return None;
    }
    let assignment = partial
        .into_iter()
        .map(|(u, img)| {
            let deg = x.degree_of(&u);
            (
                u,
                Simplex {
                    epi: crate::gdelta::GDeltaMap::identity(deg),
                    cell: img,
                },
            )
        })
        .collect();
    Some(
        PresheafMap::new(x.clone(), y.clone(), assignment)
            .expect("cell bijections compatible with the tables are natural"),
    )
}

pub fn isomorphic(x: &IsoSSet, y: &IsoSSet) -> bool {
    find_isomorphism(x, y).is_some()
}

#[cfg(test)]
mod tests {
    use super::super::representable;
    use super::*;
    use crate::gdelta::GDeltaMap;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn maps_from_a_point_pick_out_fixed_vertices() {
        let point = representable(obj(0, 0));
        let edge = representable(obj(1, 0));
        let maps = enumerate_presheaf_maps(&point, &edge);
        assert_eq!(maps.len(), 2);
    }

    #[test]
    fn maps_from_a_representable_count_simplices() {
        let tgt = representable(obj(2, 1));
        for (n, k) in [(0, 0), (0, 1), (1, 1)] {
            let src = representable(obj(n, k));
            assert_eq!(
                enumerate_presheaf_maps(&src, &tgt).len(),
                tgt.simplex_count(obj(n, k)),
                "mismatch at ({n},{k})"
            );
        }
    }

    #[test]
    fn free_point_self_maps_are_identity_and_twist() {
        let x = representable(obj(0, 1));
        let maps = enumerate_presheaf_maps(&x, &x);
        assert_eq!(maps.len(), 2);
        assert!(maps.iter().all(PresheafMap::is_iso));
        assert!(maps.iter().any(|m| *m == PresheafMap::identity(&x)));
    }

    #[test]
    fn pinning_a_cell_restricts_the_search() {
        let x = representable(obj(0, 1));
        let mut fixed = BTreeMap::new();
        fixed.insert(
            CellId::new("0e"),
            Simplex {
                epi: GDeltaMap::identity(obj(0, 1)),
                cell: CellId::new("0s"),
            },
        );
        let maps = extend_to_map(&x, &x, &fixed, None);
        assert_eq!(maps.len(), 1);
        assert!(!maps[0].assignment()[&CellId::new("0s")].cell.as_str().eq("0s"));
    }

    #[test]
    fn isomorphism_search_separates_degrees() {
        let a = representable(obj(1, 1));
        let b = representable(obj(1, 0));
        assert!(isomorphic(&a, &a));
        assert!(!isomorphic(&a, &b));
        let iso = find_isomorphism(&a, &a).unwrap();
        assert!(iso.is_iso());
        assert!(iso.inverse().is_some());
    }

    #[test]
    fn composition_matches_pointwise_application() {
        let x = representable(obj(1, 1));
        let twist = find_isomorphism(&x, &x).and_then(|_| {
            enumerate_presheaf_maps(&x, &x)
                .into_iter()
                .find(|m| m.is_iso() && *m != PresheafMap::identity(&x))
        });
        let twist = twist.expect("the twist exists");
        let square = twist.compose(&twist).unwrap();
        assert_eq!(square, PresheafMap::identity(&x));
    }
}
