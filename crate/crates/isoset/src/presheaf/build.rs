//! Construction of presheaves: representables, subobjects, images,
//! pushouts along injective maps, coproducts and skeleta.

use std::collections::{BTreeMap, BTreeSet};

use crate::gdelta::{decompose, enumerate_monos, Branch, GDeltaMap, SimplexObject, Vertex};

use super::{
    coface_map, legal_cofaces, Cell, CellId, IsoSSet, PresheafError, PresheafMap, Simplex,
};

/// Stable name of the cell carried by an injective map: the images of the
/// canonical-branch vertices, joined by commas.
pub fn mono_cell_id(mono: &GDeltaMap) -> CellId {
    let imgs: Vec<String> = (0..=mono.src().n())
        .map(|j| mono.apply(Vertex::new(j, Branch::E)).to_string())
        .collect();
    CellId::new(imgs.join(","))
}

/// Every injective map into `deg`, keyed by the cell name it defines.
/// These are exactly the cells of the representable at `deg`.
pub fn representable_monos(deg: SimplexObject) -> BTreeMap<CellId, GDeltaMap> {
    let mut out = BTreeMap::new();
    for m in 0..=deg.n() {
        for l in 0..=m + 1 {
            let Ok(src) = SimplexObject::new(m, l) else {
                continue;
            };
            for mono in enumerate_monos(src, deg) {
                out.insert(mono_cell_id(&mono), mono);
            }
        }
    }
    out
}

/// The representable presheaf at `deg`: one cell per injective map into
/// `deg`, faces by composition, swap by precomposing the source twist.
pub fn representable(deg: SimplexObject) -> IsoSSet {
    let monos = representable_monos(deg);
    let mut cells = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    for (id, mono) in &monos {
        let sdeg = mono.src();
        cells.insert(id.clone(), Cell::new(sdeg, format!("embedding into {deg}")));
        for cf in legal_cofaces(sdeg) {
            let d = coface_map(sdeg, cf);
            let sub = mono.after(&d);
            faces.insert(
                (id.clone(), cf),
                Simplex {
                    epi: GDeltaMap::identity(sub.src()),
                    cell: mono_cell_id(&sub),
                },
            );
        }
        let twisted = mono.after(&GDeltaMap::swap(sdeg));
        swaps.insert(id.clone(), mono_cell_id(&twisted));
    }
    IsoSSet::new(cells, faces, swaps).expect("representables are structurally valid")
}

/// The natural map between representables induced by `theta`, acting by
/// postcomposition on cells.
pub fn yoneda_map(theta: &GDeltaMap) -> PresheafMap {
    let src = representable(theta.src());
    let tgt = representable(theta.tgt());
    let mut assignment = BTreeMap::new();
    for (id, alpha) in representable_monos(theta.src()) {
        let dec = decompose(&theta.after(&alpha));
        assignment.insert(
            id,
            Simplex {
                epi: dec.epi_part(),
                cell: mono_cell_id(&dec.mono_part()),
            },
        );
    }
    PresheafMap::new(src, tgt, assignment).expect("postcomposition is natural")
}

/// The subpresheaf of `ambient` spanned by `keep`, which must be closed
/// under faces and swaps.
pub fn sub_from_cells(
    ambient: &IsoSSet,
    keep: &BTreeSet<CellId>,
) -> Result<IsoSSet, PresheafError> {
    let mut cells = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    for id in keep {
        if !ambient.has_cell(id) {
            return Err(PresheafError::UnknownCell(id.to_string()));
        }
        let cell = ambient.cell(id).clone();
        for cf in legal_cofaces(cell.degree) {
            let entry = ambient.face(id, cf);
            if !keep.contains(&entry.cell) {
                return Err(PresheafError::NotClosed(format!(
                    "face {cf:?} of `{id}` lands outside the set"
                )));
            }
            faces.insert((id.clone(), cf), entry.clone());
        }
        let swapped = ambient.swap_cell(id);
        if !keep.contains(swapped) {
            return Err(PresheafError::NotClosed(format!(
                "the swap of `{id}` lies outside the set"
            )));
        }
        swaps.insert(id.clone(), swapped.clone());
        cells.insert(id.clone(), cell);
    }
    IsoSSet::new(cells, faces, swaps)
}

/// Close a seed set of cells under faces and swaps inside `ambient`.
pub fn close_cells(ambient: &IsoSSet, seed: &BTreeSet<CellId>) -> BTreeSet<CellId> {
    let mut done: BTreeSet<CellId> = BTreeSet::new();
    let mut todo: Vec<CellId> = seed.iter().cloned().collect();
    while let Some(id) = todo.pop() {
        if !done.insert(id.clone()) {
            continue;
        }
        todo.push(ambient.swap_cell(&id).clone());
        for cf in legal_cofaces(ambient.degree_of(&id)) {
            todo.push(ambient.face(&id, cf).cell.clone());
        }
    }
    done
}

/// The map out of a representable classifying one simplex of `x`: the top
/// cell goes to `s` and every other cell to the matching restriction of
/// `s`. Inverse to evaluation at the top cell.
pub fn classifying_map(
    x: &IsoSSet,
    at: SimplexObject,
    s: &Simplex,
) -> Result<PresheafMap, PresheafError> {
    let src = representable(at);
    let mut assignment = BTreeMap::new();
    for (id, mono) in representable_monos(at) {
        assignment.insert(id, x.act_simplex(s, &mono));
    }
    PresheafMap::new(src, x.clone(), assignment)
}

/// The inclusion of a subpresheaf into its ambient object.
pub fn inclusion(sub: &IsoSSet, ambient: &IsoSSet) -> Result<PresheafMap, PresheafError> {
    if !is_sub(sub, ambient) {
        return Err(PresheafError::NotClosed(
            "inclusion source must be a subobject of the target".into(),
        ));
    }
    let assignment = sub
        .cell_ids()
        .map(|id| {
            (
                id.clone(),
                Simplex {
                    epi: GDeltaMap::identity(sub.degree_of(id)),
                    cell: id.clone(),
                },
            )
        })
        .collect();
    PresheafMap::new(sub.clone(), ambient.clone(), assignment)
}

/// True when `a` is a subpresheaf of `x`: same cells, faces and swaps on
/// a subset of the cells of `x`.
pub fn is_sub(a: &IsoSSet, x: &IsoSSet) -> bool {
    let keep: BTreeSet<CellId> = a.cell_ids().cloned().collect();
    if !keep.iter().all(|id| x.has_cell(id)) {
        return false;
    }
    match sub_from_cells(x, &keep) {
        Ok(sub) => sub == *a,
        Err(_) => false,
    }
}

/// Union of two subpresheaves of the same ambient object.
pub fn sub_union(
    ambient: &IsoSSet,
    a: &IsoSSet,
    b: &IsoSSet,
) -> Result<IsoSSet, PresheafError> {
    if !is_sub(a, ambient) || !is_sub(b, ambient) {
        return Err(PresheafError::NotClosed(
            "union arguments must be subobjects of the ambient object".into(),
        ));
    }
    let keep: BTreeSet<CellId> = a.cell_ids().chain(b.cell_ids()).cloned().collect();
    sub_from_cells(ambient, &keep)
}

/// Intersection of two subpresheaves of the same ambient object.
pub fn sub_intersection(
    ambient: &IsoSSet,
    a: &IsoSSet,
    b: &IsoSSet,
) -> Result<IsoSSet, PresheafError> {
    if !is_sub(a, ambient) || !is_sub(b, ambient) {
        return Err(PresheafError::NotClosed(
            "intersection arguments must be subobjects of the ambient object".into(),
        ));
    }
    let in_b: BTreeSet<CellId> = b.cell_ids().cloned().collect();
    let keep: BTreeSet<CellId> = a
        .cell_ids()
        .filter(|id| in_b.contains(*id))
        .cloned()
        .collect();
    sub_from_cells(ambient, &keep)
}

/// The image of a map as a subpresheaf of its target. The cell set
/// {cell part of f(u) : u a cell} is automatically closed: a section of
/// the surjection part exhibits each such cell as an honest cell image,
/// and naturality then keeps faces and swaps inside the set.
pub fn image(f: &PresheafMap) -> IsoSSet {
    let keep: BTreeSet<CellId> = f
        .src()
        .cell_ids()
        .map(|u| f.apply_cell(u).cell.clone())
        .collect();
    sub_from_cells(f.tgt(), &keep).expect("map images are closed under faces and swaps")
}

/// Result of gluing `x` and `y` along a span `x <- a -> y` whose left leg
/// is injective.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: IsoSSet,
    pub from_x: PresheafMap,
    pub from_y: PresheafMap,
}

/// Pushout of `f: a -> y` along the injective `i: a -> x`. The result has
/// one cell per cell of `y` plus one per cell of `x` not hit by `i`;
/// faces of the latter that fall into the image of `i` are rerouted
/// through `f`.
pub fn pushout(i: &PresheafMap, f: &PresheafMap) -> Result<Pushout, PresheafError> {
    if i.src() != f.src() {
        return Err(PresheafError::EndpointMismatch(
            "pushout legs must share their source".into(),
        ));
    }
    if !i.is_mono() {
        return Err(PresheafError::NonMonoLeg(
            "pushout requires the first leg to be injective".into(),
        ));
    }
    let x = i.tgt();
    let y = f.tgt();
    // Inverse of the injective leg on cells.
    let mut x_to_a: BTreeMap<CellId, CellId> = BTreeMap::new();
    for a_id in i.src().cell_ids() {
        x_to_a.insert(i.apply_cell(a_id).cell.clone(), a_id.clone());
    }

    let mut counter = 0usize;
    let mut fresh = |provenance: String| {
        let id = CellId::new(format!("c{counter}"));
        counter += 1;
        (id, provenance)
    };
    let mut y_ids: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut x_ids: BTreeMap<CellId, CellId> = BTreeMap::new();
    let mut cells = BTreeMap::new();
    for (id, cell) in y.cells() {
        let (fresh_id, provenance) = fresh(format!("second leg cell `{id}`"));
        cells.insert(fresh_id.clone(), Cell::new(cell.degree, provenance));
        y_ids.insert(id.clone(), fresh_id);
    }
    for (id, cell) in x.cells() {
        if x_to_a.contains_key(id) {
            continue;
        }
        let (fresh_id, provenance) = fresh(format!("first leg cell `{id}`"));
        cells.insert(fresh_id.clone(), Cell::new(cell.degree, provenance));
        x_ids.insert(id.clone(), fresh_id);
    }

    let transport_y = |s: &Simplex| Simplex {
        epi: s.epi.clone(),
        cell: y_ids[&s.cell].clone(),
    };
    let transport_x = |s: &Simplex| match x_to_a.get(&s.cell) {
        Some(a_id) => {
            let through = f.apply_cell(a_id);
            Simplex {
                epi: through.epi.after(&s.epi),
                cell: y_ids[&through.cell].clone(),
            }
        }
        None => Simplex {
            epi: s.epi.clone(),
            cell: x_ids[&s.cell].clone(),
        },
    };

    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    for (id, cell) in y.cells() {
        let new_id = &y_ids[id];
        for cf in legal_cofaces(cell.degree) {
            faces.insert((new_id.clone(), cf), transport_y(y.face(id, cf)));
        }
        swaps.insert(new_id.clone(), y_ids[y.swap_cell(id)].clone());
    }
    for (id, cell) in x.cells() {
        let Some(new_id) = x_ids.get(id) else {
            continue;
        };
        for cf in legal_cofaces(cell.degree) {
            faces.insert((new_id.clone(), cf), transport_x(x.face(id, cf)));
        }
        // The complement of the image is swap-closed because the image is.
        swaps.insert(new_id.clone(), x_ids[x.swap_cell(id)].clone());
    }
    let object = IsoSSet::new(cells, faces, swaps)?;

    let x_assignment: BTreeMap<CellId, Simplex> = x
        .cell_ids()
        .map(|id| {
            (
                id.clone(),
                transport_x(&Simplex {
                    epi: GDeltaMap::identity(x.degree_of(id)),
                    cell: id.clone(),
                }),
            )
        })
        .collect();
    let y_assignment: BTreeMap<CellId, Simplex> = y
        .cell_ids()
        .map(|id| {
            (
                id.clone(),
                transport_y(&Simplex {
                    epi: GDeltaMap::identity(y.degree_of(id)),
                    cell: id.clone(),
                }),
            )
        })
        .collect();
    let from_x = PresheafMap::new(x.clone(), object.clone(), x_assignment)?;
    let from_y = PresheafMap::new(y.clone(), object.clone(), y_assignment)?;
    Ok(Pushout {
        object,
        from_x,
        from_y,
    })
}

/// Disjoint union, built as the pushout over the empty presheaf.
pub fn coproduct(x: &IsoSSet, y: &IsoSSet) -> Pushout {
    let empty = IsoSSet::empty();
    let to_x = PresheafMap::new(empty.clone(), x.clone(), BTreeMap::new())
        .expect("the empty map is natural");
    let to_y =
        PresheafMap::new(empty, y.clone(), BTreeMap::new()).expect("the empty map is natural");
    pushout(&to_x, &to_y).expect("empty legs are injective")
}

/// The subpresheaf of cells of dimension at most `m`.
pub fn skeleton(x: &IsoSSet, m: usize) -> IsoSSet {
    let keep: BTreeSet<CellId> = x
        .cells()
        .filter(|(_, c)| c.degree.n() <= m)
        .map(|(id, _)| id.clone())
        .collect();
    sub_from_cells(x, &keep).expect("a dimension cutoff is closed under faces and swaps")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gdelta::Coface;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn representable_census_matches_hand_count() {
        let x = representable(obj(2, 1));
        let census = x.degree_census();
        assert_eq!(census[&obj(0, 0)], 2);
        assert_eq!(census[&obj(0, 1)], 2);
        assert_eq!(census[&obj(1, 0)], 1);
        assert_eq!(census[&obj(1, 1)], 4);
        assert_eq!(census[&obj(2, 1)], 2);
        assert_eq!(x.cell_count(), 11);
        assert!(x.validate().is_valid());
    }

    #[test]
    fn free_point_representable_is_a_swapped_pair() {
        let x = representable(obj(0, 1));
        assert_eq!(x.cell_count(), 2);
        let ids: Vec<&CellId> = x.cell_ids().collect();
        assert_eq!(x.swap_cell(ids[0]), ids[1]);
    }

    #[test]
    fn yoneda_respects_simplex_counts() {
        // Maps out of a representable correspond to simplices of the target.
        let x = representable(obj(2, 1));
        for (n, k) in [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (2, 2)] {
            let d = obj(n, k);
            assert_eq!(
                x.simplex_count(d),
                crate::gdelta::enumerate_hom(d, obj(2, 1)).len(),
                "count mismatch at {d}"
            );
        }
    }

    #[test]
    fn yoneda_map_collapses_and_twists() {
        let s = GDeltaMap::codegeneracy(1, 1, 1, 0).unwrap();
        let f = yoneda_map(&s);
        assert!(!f.is_mono());
        let sigma = GDeltaMap::swap(obj(1, 1));
        let g = yoneda_map(&sigma);
        assert!(g.is_mono());
        assert!(g.is_iso());
    }

    #[test]
    fn skeleton_keeps_low_cells_only() {
        let x = representable(obj(2, 1));
        let sk = skeleton(&x, 1);
        assert_eq!(sk.cell_count(), 9);
        assert!(is_sub(&sk, &x));
        assert!(close_cells(&x, &sk.cell_ids().cloned().collect()).len() == 9);
    }

    #[test]
    fn gluing_two_edges_at_a_vertex() {
        // Two intervals glued end to start: three vertices, two edges.
        let edge = representable(obj(1, 0));
        let point = representable(obj(0, 0));
        let end = yoneda_map(&GDeltaMap::coface(0, 0, 0, 0).unwrap());
        let start = yoneda_map(&GDeltaMap::coface(0, 0, 1, 0).unwrap());
        assert_eq!(end.src(), &point);
        let glued = pushout(&end, &start).unwrap();
        let census = glued.object.degree_census();
        assert_eq!(census[&obj(0, 0)], 3);
        assert_eq!(census[&obj(1, 0)], 2);
        assert!(glued.object.validate().is_valid());
        // The two legs agree on the glued vertex.
        let via_x = glued.from_x.apply(end.apply_cell(&CellId::new("0e")));
        let via_y = glued.from_y.apply(start.apply_cell(&CellId::new("0e")));
        assert_eq!(via_x, via_y);
        let _ = edge;
    }

    #[test]
    fn image_of_a_collapse_is_the_small_object() {
        let s = GDeltaMap::codegeneracy(0, 0, 0, 0).unwrap();
        let f = yoneda_map(&s);
        let im = image(&f);
        assert_eq!(im, *f.tgt());
    }

    #[test]
    fn coproduct_counts_add() {
        let x = representable(obj(1, 0));
        let y = representable(obj(0, 1));
        let both = coproduct(&x, &y);
        assert_eq!(both.object.cell_count(), x.cell_count() + y.cell_count());
        assert!(both.from_x.is_mono() && both.from_y.is_mono());
    }

    #[test]
    fn faces_of_representable_cells_are_composites() {
        let x = representable(obj(2, 2));
        let top = CellId::new("0e,1e,2e");
        assert!(x.has_cell(&top));
        let f = x.face(&top, Coface { index: 1, eps: 1 });
        assert!(f.is_cell());
        assert_eq!(f.cell, CellId::new("0e,2e"));
    }
}
