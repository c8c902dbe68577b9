//! Horn admissibility, deformation retractions onto horns, elementary
//! homotopies between presheaf maps, homotopy classes and equivalences,
//! and normality via free swap actions.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::cylinder::{cylinder, cylinder_map_with, CylinderBundle};
use crate::gdelta::{
    decompose, enumerate_hom, split_thickened_name, thicken_map, thicken_poset, to_gposet,
    try_from_gposet_map, Coface, GDeltaMap, GPosetMap, SimplexObject, Vertex,
};
use crate::presheaf::{
    corestrict, enumerate_presheaf_maps, extend_to_map, image, inclusion, mono_cell_id,
    representable, representable_monos, yoneda_map, CellId, IsoSSet, PresheafMap, Simplex,
};
use crate::standard::horn;

/// Failure modes of horn deformation and homotopy search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    /// A horn index triple outside `n > 0`, `k <= n + 1`, `l <= n`.
    #[error("horn index ({n},{k},{l}) out of range")]
    HornRange { n: usize, k: usize, l: usize },
    /// The deformation retraction exists only for admissible horns.
    #[error("the horn ({n},{k},{l}) admits no deformation retraction")]
    NotAdmissible { n: usize, k: usize, l: usize },
}

fn horn_index_ok(n: usize, k: usize, l: usize) -> bool {
    n > 0 && k <= n + 1 && l <= n
}

/// Closed-form admissibility of the `l`-horn of the representable at
/// `[n]_k`: every horn is admissible except the free-vertex `0`-horns at
/// glue bound one and the top horns of the all-free-but-one objects.
pub fn is_admissible(n: usize, k: usize, l: usize) -> bool {
    assert!(horn_index_ok(n, k, l), "horn index ({n},{k},{l}) out of range");
    !((k == 1 && l == 0) || (k == l && l == n))
}

/// Admissibility by direct construction: search the two candidate collapse
/// indices for a codegeneracy-then-coface composite out of `[n]_k` whose
/// image is exactly the face the horn omits. Index choices that name no
/// legal generator count as failures.
pub fn is_admissible_by_definition(n: usize, k: usize, l: usize) -> bool {
    assert!(horn_index_ok(n, k, l), "horn index ({n},{k},{l}) out of range");
    let deg = SimplexObject::new(n, k).expect("k <= n + 1 checked above");
    let eps = u8::from(l < k);
    for a in [l.checked_sub(1), Some(l)].into_iter().flatten() {
        let s = if eps == 1 {
            GDeltaMap::codegeneracy(n - 1, k, a, 1)
        } else {
            GDeltaMap::codegeneracy(n - 1, k, a, 0)
        };
        let d = if eps == 1 {
            GDeltaMap::coface(n - 1, k - 1, l, 1)
        } else {
            GDeltaMap::coface(n - 1, k, l, 0)
        };
        let (Ok(s), Ok(d)) = (s, d) else {
            continue;
        };
        let composite = image(&yoneda_map(&d.after(&s)));
        let omitted = crate::standard::face_image(deg, Coface { index: l, eps })
            .expect("the omitted face of a legal horn index exists");
        if composite == omitted {
            return true;
        }
    }
    false
}

/// A deformation retraction of a representable onto one of its admissible
/// horns: the retraction `phi` collapses the vertex orbit `collapsed` onto
/// a neighbour, and `homotopy` connects `phi` (at end `phi_end`) to the
/// identity (at the other end) through the cylinder in `bundle`. Both
/// endpoint identities are checked at construction time.
#[derive(Debug, Clone)]
pub struct Deformation {
    pub degree: SimplexObject,
    pub omitted: usize,
    pub collapsed: usize,
    pub phi_end: u8,
    pub retraction: GDeltaMap,
    pub phi: PresheafMap,
    pub homotopy: PresheafMap,
    pub bundle: CylinderBundle,
}

/// Builds the deformation retraction witnessing admissibility of the
/// `l`-horn at `[n]_k`.
///
/// The retraction folds a single vertex orbit `c` onto one of its
/// neighbours; its image then omits exactly orbit `c`, so `c != l` is what
/// keeps it inside the horn. Folding downward (`c` onto `c - 1`) admits a
/// prism homotopy with the retraction at end `0`. Every admissible horn
/// with no legal downward choice admits an upward fold (`c` onto `c + 1`),
/// but the prism map collapsing upward is only monotone when it acts on
/// level `1`, so there the retraction sits at end `1` instead.
pub fn deformation(n: usize, k: usize, l: usize) -> Result<Deformation, HomotopyError> {
    if !horn_index_ok(n, k, l) {
        return Err(HomotopyError::HornRange { n, k, l });
    }
    if !is_admissible(n, k, l) {
        return Err(HomotopyError::NotAdmissible { n, k, l });
    }
    let deg = SimplexObject::new(n, k).expect("k <= n + 1 by the range check");

    // The fold must land on the omitted orbit itself: the prism homotopy
    // sends a diagonal chain over the face missing j to a simplex that
    // also hits the fold's target, so folding onto anything but l would
    // push chains of the horn's cylinder outside the horn. That leaves
    // two candidates, l+1 folded down or l-1 folded up; admissibility is
    // exactly the guarantee that one of them names legal generators.
    // Downward folds pair codegeneracy c-1 with coface c (free band
    // 1 <= c < k, real band k < c <= n) and put the retraction at end 0.
    let legal = "the fold candidates stay inside the generator index bands";
    let down_legal = l + 1 <= n && l + 1 != k;
    let (retraction, collapse_from, collapse_to, phi_end) = if down_legal {
        let c = l + 1;
        let (s, d) = if c < k {
            (
                GDeltaMap::codegeneracy(n - 1, k, c - 1, 1).expect(legal),
                GDeltaMap::coface(n - 1, k - 1, c, 1).expect(legal),
            )
        } else {
            (
                GDeltaMap::codegeneracy(n - 1, k, c - 1, 0).expect(legal),
                GDeltaMap::coface(n - 1, k, c, 0).expect(legal),
            )
        };
        (d.after(&s), c, c - 1, 0u8)
    } else {
        // Upward folds pair codegeneracy c with coface c; the free band
        // allows c <= k - 2 and the real band k <= c < n. The prism map
        // collapsing upward is only monotone when it acts on level 1, so
        // the retraction sits at end 1.
        let c = l
            .checked_sub(1)
            .expect("an admissible horn with no downward fold omits a positive orbit");
        let (s, d) = if c + 2 <= k {
            (
                GDeltaMap::codegeneracy(n - 1, k, c, 1).expect(legal),
                GDeltaMap::coface(n - 1, k - 1, c, 1).expect(legal),
            )
        } else {
            (
                GDeltaMap::codegeneracy(n - 1, k, c, 0).expect(legal),
                GDeltaMap::coface(n - 1, k, c, 0).expect(legal),
            )
        };
        (d.after(&s), c, c + 1, 1u8)
    };

    // On the prism, level `phi_end` performs the same fold and the other
    // level is the identity; evaluating chains through this map is the
    // homotopy.
    let th = thicken_poset(deg);
    let tposet = to_gposet(deg);
    let verts = deg.vertices();
    let images = th
        .elements()
        .iter()
        .map(|nm| {
            let (vname, level) =
                split_thickened_name(nm).expect("prism elements carry level suffixes");
            let v = verts
                .iter()
                .find(|v| v.to_string() == vname)
                .expect("prism vertices come from the base object");
            let w = if level == phi_end && v.index == collapse_from {
                Vertex::new(collapse_to, v.branch)
            } else {
                *v
            };
            tposet
                .index_of(&w.to_string())
                .expect("folded vertex stays in the base object")
        })
        .collect();
    let htilde = GPosetMap::new(th, tposet, images)
        .expect("folding one orbit on the retraction level is monotone");

    let bundle = cylinder(&representable(deg));
    let homotopy = evaluate_prism_map(&bundle, deg, &htilde);
    let phi = yoneda_map(&retraction);

    let ends = [&bundle.d0, &bundle.d1];
    let at_phi = homotopy
        .compose(ends[usize::from(phi_end)])
        .expect("ends compose with the homotopy");
    assert!(
        at_phi == phi,
        "end {phi_end} of the deformation must be the retraction"
    );
    let at_id = homotopy
        .compose(ends[usize::from(1 - phi_end)])
        .expect("ends compose with the homotopy");
    assert!(
        at_id == PresheafMap::identity(&bundle.base),
        "the other end of the deformation must be the identity"
    );

    Ok(Deformation {
        degree: deg,
        omitted: l,
        collapsed: collapse_from,
        phi_end,
        retraction,
        phi,
        homotopy,
        bundle,
    })
}

/// The presheaf map `total -> representable(deg)` induced by a poset map
/// from the prism over `deg` to the object itself; `bundle` must be the
/// cylinder of the representable at `deg`.
pub fn evaluate_prism_map(
    bundle: &CylinderBundle,
    deg: SimplexObject,
    htilde: &GPosetMap,
) -> PresheafMap {
    let monos = representable_monos(deg);
    let mut assign = BTreeMap::new();
    for u in bundle.total.cell_ids() {
        let (xc, beta) = bundle.representative(u);
        let chain = thicken_map(&monos[xc]).after(beta);
        let theta = try_from_gposet_map(
            &htilde.after(&chain),
            bundle.total.degree_of(u),
            deg,
        )
        .expect("a poset map under a morphism composite is a morphism");
        let dec = decompose(&theta);
        assign.insert(
            u.clone(),
            Simplex {
                epi: dec.epi_part(),
                cell: mono_cell_id(&dec.mono_part()),
            },
        );
    }
    PresheafMap::new(bundle.total.clone(), bundle.base.clone(), assign)
        .expect("evaluation through a prism map is natural")
}

/// Searches for an elementary homotopy from `f` to `g`: a map out of the
/// cylinder of their common source restricting to `f` at end `0` and `g`
/// at end `1`. Exhaustive over the finite search space.
pub fn find_elementary_homotopy(f: &PresheafMap, g: &PresheafMap) -> Option<PresheafMap> {
    assert!(
        f.src() == g.src() && f.tgt() == g.tgt(),
        "homotopy endpoints must be parallel maps"
    );
    find_elementary_homotopy_with(&cylinder(f.src()), f, g)
}

/// Same search against a prebuilt cylinder of the common source.
pub fn find_elementary_homotopy_with(
    bundle: &CylinderBundle,
    f: &PresheafMap,
    g: &PresheafMap,
) -> Option<PresheafMap> {
    debug_assert!(f.src() == &bundle.base && g.src() == &bundle.base);
    let mut fixed: BTreeMap<CellId, Simplex> = BTreeMap::new();
    for u in bundle.base.cell_ids() {
        for (end, value) in [(&bundle.d0, f), (&bundle.d1, g)] {
            let key = end.apply_cell(u);
            debug_assert!(key.is_cell(), "cylinder ends carry cells to cells");
            let val = value.apply_cell(u).clone();
            if let Some(prev) = fixed.insert(key.cell.clone(), val.clone()) {
                if prev != val {
                    return None;
                }
            }
        }
    }
    extend_to_map(&bundle.total, f.tgt(), &fixed, Some(1))
        .into_iter()
        .next()
}

/// Partition of all maps `x -> y` into connected components of the
/// single-elementary-homotopy relation, taken in either direction.
pub fn homotopy_classes(x: &IsoSSet, y: &IsoSSet) -> Vec<Vec<PresheafMap>> {
    let maps = enumerate_presheaf_maps(x, y);
    if maps.is_empty() {
        return Vec::new();
    }
    let bundle = cylinder(x);
    let mut uf: UnionFind<usize> = UnionFind::new(maps.len());
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            if uf.find(i) == uf.find(j) {
                continue;
            }
            if find_elementary_homotopy_with(&bundle, &maps[i], &maps[j]).is_some()
                || find_elementary_homotopy_with(&bundle, &maps[j], &maps[i]).is_some()
            {
                uf.union(i, j);
            }
        }
    }
    let mut grouped: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..maps.len() {
        grouped.entry(uf.find(i)).or_default().push(i);
    }
    let mut classes: Vec<Vec<usize>> = grouped.into_values().collect();
    classes.sort_by_key(|c| c[0]);
    classes
        .into_iter()
        .map(|c| c.into_iter().map(|i| maps[i].clone()).collect())
        .collect()
}

/// A homotopy inverse with the chains of elementary homotopies connecting
/// the two composites to the identities of the endpoints.
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub inverse: PresheafMap,
    pub source_homotopies: Vec<PresheafMap>,
    pub target_homotopies: Vec<PresheafMap>,
}

/// Decides whether `f` has a homotopy inverse with a single elementary
/// homotopy on each side (either direction), returning the witness.
pub fn is_elementary_homotopy_equivalence(f: &PresheafMap) -> Option<EquivalenceWitness> {
    homotopy_equivalence_within(f, 1)
}

/// Like [`is_elementary_homotopy_equivalence`] but allowing zigzags of up
/// to `depth` elementary homotopies per side.
pub fn homotopy_equivalence_within(f: &PresheafMap, depth: usize) -> Option<EquivalenceWitness> {
    assert!(depth >= 1, "a zigzag needs at least one step");
    let bx = cylinder(f.src());
    let by = cylinder(f.tgt());
    let idx = PresheafMap::identity(f.src());
    let idy = PresheafMap::identity(f.tgt());
    for candidate in enumerate_presheaf_maps(f.tgt(), f.src()) {
        let back = candidate.compose(f).expect("candidate composes after f");
        let Some(src_chain) = connect(&bx, &back, &idx, depth) else {
            continue;
        };
        let fwd = f.compose(&candidate).expect("f composes after candidate");
        let Some(tgt_chain) = connect(&by, &fwd, &idy, depth) else {
            continue;
        };
        return Some(EquivalenceWitness {
            inverse: candidate,
            source_homotopies: src_chain,
            target_homotopies: tgt_chain,
        });
    }
    None
}

/// Finds a zigzag of at most `depth` elementary homotopies (each step in
/// either direction) connecting `from` to `to`, returning the homotopies.
fn connect(
    bundle: &CylinderBundle,
    from: &PresheafMap,
    to: &PresheafMap,
    depth: usize,
) -> Option<Vec<PresheafMap>> {
    if from == to {
        return Some(Vec::new());
    }
    if let Some(h) = find_elementary_homotopy_with(bundle, from, to) {
        return Some(vec![h]);
    }
    if let Some(h) = find_elementary_homotopy_with(bundle, to, from) {
        return Some(vec![h]);
    }
    if depth == 1 {
        return None;
    }
    // Breadth-first over all parallel maps, one elementary step at a time.
    let all = enumerate_presheaf_maps(from.src(), from.tgt());
    let position = |m: &PresheafMap| all.iter().position(|c| c == m).expect("map in hom set");
    let start = position(from);
    let goal = position(to);
    let mut parent: BTreeMap<usize, (usize, PresheafMap)> = BTreeMap::new();
    let mut frontier = vec![start];
    let mut seen: BTreeSet<usize> = [start].into();
    for _ in 0..depth {
        let mut next = Vec::new();
        for &i in &frontier {
            for (j, other) in all.iter().enumerate() {
                if seen.contains(&j) {
                    continue;
                }
                let step = find_elementary_homotopy_with(bundle, &all[i], other)
                    .or_else(|| find_elementary_homotopy_with(bundle, other, &all[i]));
                if let Some(h) = step {
                    parent.insert(j, (i, h));
                    seen.insert(j);
                    next.push(j);
                }
            }
        }
        if seen.contains(&goal) {
            let mut chain = Vec::new();
            let mut cur = goal;
            while cur != start {
                let (prev, h) = parent.remove(&cur).expect("path recorded");
                chain.push(h);
                cur = prev;
            }
            chain.reverse();
            return Some(chain);
        }
        if next.is_empty() {
            return None;
        }
        frontier = next;
    }
    None
}

/// The equivalence witness for an admissible horn inclusion, built from
/// its deformation retraction instead of a blind search: the inverse is
/// the retraction corestricted to the horn, and both homotopies are the
/// deformation homotopy and its restriction to the horn's cylinder.
pub fn horn_equivalence_witness(
    n: usize,
    k: usize,
    l: usize,
) -> Result<EquivalenceWitness, HomotopyError> {
    let def = deformation(n, k, l)?;
    let horn_obj = horn(def.degree, l).expect("indices validated by deformation");
    let ambient = &def.bundle.base;
    let psi =
        corestrict(&def.phi, &horn_obj).expect("the retraction lands in its horn");
    let iota = inclusion(&horn_obj, ambient).expect("the horn includes into the representable");

    let hb = cylinder(&horn_obj);
    let thick_iota = cylinder_map_with(&iota, &hb, &def.bundle);
    let on_horn = corestrict(
        &def
            .homotopy
            .compose(&thick_iota)
            .expect("the homotopy composes with the thickened inclusion"),
        &horn_obj,
    )
    .expect("the homotopy keeps the horn's cylinder inside the horn");

    // End checks: the horn-side homotopy connects psi . iota (at the
    // retraction's end) to the identity, mirroring the ambient-side
    // homotopy between iota . psi and the identity.
    let psi_iota = psi.compose(&iota).expect("corestriction composes");
    let ends = [&hb.d0, &hb.d1];
    let at_phi = on_horn
        .compose(ends[usize::from(def.phi_end)])
        .expect("ends compose");
    assert!(
        at_phi == psi_iota,
        "the horn-side homotopy must reach the retraction composite"
    );
    let at_id = on_horn
        .compose(ends[usize::from(1 - def.phi_end)])
        .expect("ends compose");
    assert!(
        at_id == PresheafMap::identity(&horn_obj),
        "the horn-side homotopy must reach the identity"
    );

    Ok(EquivalenceWitness {
        inverse: psi,
        source_homotopies: vec![on_horn],
        target_homotopies: vec![def.homotopy],
    })
}

/// All invertible self-maps of `[n]_k`, found by exhausting the hom set
/// for two-sided inverses.
pub fn automorphisms(deg: SimplexObject) -> Vec<GDeltaMap> {
    let homs = enumerate_hom(deg, deg);
    let id = GDeltaMap::identity(deg);
    homs.iter()
        .filter(|f| {
            homs.iter()
                .any(|g| g.after(f) == id && f.after(g) == id)
        })
        .cloned()
        .collect()
}

/// True when the swap acts freely on the simplices of every degree with
/// free vertices, up to the cell dimension.
pub fn is_normal(x: &IsoSSet) -> bool {
    let Some(top) = x.max_cell_dim() else {
        return true;
    };
    for m in 0..=top {
        for l in 1..=m + 1 {
            let deg = SimplexObject::new(m, l).expect("l <= m + 1 by the loop bound");
            let sw = GDeltaMap::swap(deg);
            for s in x.simplices_at(deg) {
                if x.act_simplex(&s, &sw) == s {
                    return false;
                }
            }
        }
    }
    true
}

/// True when `f` is injective and the swap acts freely on the complement
/// of its image, degreewise over the degrees with free vertices.
pub fn is_normal_mono(f: &PresheafMap) -> bool {
    if !f.is_mono() {
        return false;
    }
    let y = f.tgt();
    let Some(top) = y.max_cell_dim() else {
        return true;
    };
    for m in 0..=top {
        for l in 1..=m + 1 {
            let deg = SimplexObject::new(m, l).expect("l <= m + 1 by the loop bound");
            let hit: BTreeSet<Simplex> = f
                .src()
                .simplices_at(deg)
                .iter()
                .map(|s| f.apply(s))
                .collect();
            let sw = GDeltaMap::swap(deg);
            for s in y.simplices_at(deg) {
                if !hit.contains(&s) && y.act_simplex(&s, &sw) == s {
                    return false;
                }
            }
        }
    }
    true
}

/// True when no self-map of the cell's degree other than the identity
/// fixes the cell.
pub fn is_dominant(x: &IsoSSet, u: &CellId) -> bool {
    let deg = x.degree_of(u);
    let me = Simplex {
        epi: GDeltaMap::identity(deg),
        cell: u.clone(),
    };
    automorphisms(deg)
        .iter()
        .all(|a| a.is_identity() || x.act(u, a) != me)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{sub_from_cells, Cell};
    use crate::standard::boundary;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn closed_form_matches_the_constructive_search() {
        for n in 1..=4usize {
            for k in 0..=n + 1 {
                for l in 0..=n {
                    assert_eq!(
                        is_admissible(n, k, l),
                        is_admissible_by_definition(n, k, l),
                        "disagreement at ({n},{k},{l})"
                    );
                }
            }
        }
    }

    #[test]
    fn known_admissibility_values() {
        for l in 0..=4 {
            assert!(is_admissible(4, 3, l));
        }
        assert!(!is_admissible(2, 1, 0));
        assert!(is_admissible(2, 1, 1));
        assert!(!is_admissible(1, 1, 0));
        assert!(!is_admissible(1, 1, 1));
    }

    #[test]
    fn deformation_rejects_non_admissible_horns() {
        assert!(matches!(
            deformation(2, 1, 0),
            Err(HomotopyError::NotAdmissible { n: 2, k: 1, l: 0 })
        ));
        assert!(matches!(
            deformation(0, 0, 0),
            Err(HomotopyError::HornRange { n: 0, k: 0, l: 0 })
        ));
    }

    #[test]
    fn deformation_retraction_lands_in_the_horn() {
        // Covers both fold directions: the last four triples admit no
        // downward fold and run with the retraction at end 1.
        let triples = [
            (2, 1, 1),
            (2, 2, 0),
            (3, 2, 2),
            (3, 2, 1),
            (2, 0, 2),
            (1, 2, 1),
            (2, 2, 1),
            (2, 1, 2),
            (1, 0, 1),
        ];
        for (n, k, l) in triples {
            let def = deformation(n, k, l).unwrap();
            assert_ne!(def.collapsed, l, "({n},{k},{l}): fold hits the omitted orbit");
            let horn_obj = horn(def.degree, l).unwrap();
            let im = image(&def.phi);
            for u in im.cell_ids() {
                assert!(horn_obj.has_cell(u), "({n},{k},{l}): {u} escapes the horn");
            }
        }
    }

    #[test]
    fn deformation_homotopy_keeps_the_horn_inside_itself() {
        // (2,1,1) folds downward, (1,0,1) and (2,2,1) upward; the witness
        // constructor asserts the endpoint identities for each direction.
        for (n, k, l) in [(2, 1, 1), (1, 0, 1), (2, 2, 1)] {
            let witness = horn_equivalence_witness(n, k, l).unwrap();
            assert_eq!(witness.source_homotopies.len(), 1);
            assert_eq!(witness.target_homotopies.len(), 1);
        }
    }

    #[test]
    fn classical_deformations_build_in_low_dimensions() {
        for n in 1..=2usize {
            for l in 0..=n {
                deformation(n, 0, l).unwrap();
            }
        }
    }

    #[test]
    fn equal_maps_are_homotopic_by_a_constant() {
        let x = representable(obj(0, 0));
        let y = representable(obj(1, 0));
        let maps = enumerate_presheaf_maps(&x, &y);
        let f = &maps[0];
        assert!(find_elementary_homotopy(f, f).is_some());
    }

    #[test]
    fn the_two_vertices_of_an_edge_are_homotopic() {
        let x = representable(obj(0, 0));
        let y = representable(obj(1, 0));
        let maps = enumerate_presheaf_maps(&x, &y);
        assert_eq!(maps.len(), 2);
        assert!(
            find_elementary_homotopy(&maps[0], &maps[1]).is_some()
                || find_elementary_homotopy(&maps[1], &maps[0]).is_some()
        );
        assert_eq!(homotopy_classes(&x, &y).len(), 1);
    }

    #[test]
    fn identity_and_twist_of_the_free_point_are_not_homotopic() {
        let x = representable(obj(0, 1));
        let maps = enumerate_presheaf_maps(&x, &x);
        assert_eq!(maps.len(), 2);
        assert!(find_elementary_homotopy(&maps[0], &maps[1]).is_none());
        assert!(find_elementary_homotopy(&maps[1], &maps[0]).is_none());
        assert_eq!(homotopy_classes(&x, &x).len(), 2);
    }

    #[test]
    fn maps_from_empty_form_one_class() {
        let e = IsoSSet::empty();
        let y = representable(obj(1, 1));
        assert_eq!(homotopy_classes(&e, &y).len(), 1);
    }

    #[test]
    fn identity_is_an_equivalence() {
        let x = representable(obj(1, 1));
        let w = is_elementary_homotopy_equivalence(&PresheafMap::identity(&x)).unwrap();
        assert_eq!(w.inverse, PresheafMap::identity(&x));
    }

    #[test]
    fn blind_search_agrees_with_the_deformation_witness() {
        let deg = obj(1, 0);
        let horn_obj = horn(deg, 0).unwrap();
        let iota = inclusion(&horn_obj, &representable(deg)).unwrap();
        assert!(is_elementary_homotopy_equivalence(&iota).is_some());
        horn_equivalence_witness(1, 0, 0).unwrap();
    }

    #[test]
    fn non_admissible_horn_inclusion_is_refuted() {
        let deg = obj(1, 1);
        let horn_obj = horn(deg, 0).unwrap();
        let ambient = representable(deg);
        let iota = inclusion(&horn_obj, &ambient).unwrap();
        assert!(is_elementary_homotopy_equivalence(&iota).is_none());
    }

    #[test]
    fn automorphism_census() {
        for n in 0..=3usize {
            for k in 0..=n + 1 {
                let auts = automorphisms(obj(n, k));
                let expected = if k == 0 { 1 } else { 2 };
                assert_eq!(auts.len(), expected, "at [{n}]_{k}");
            }
        }
    }

    #[test]
    fn representables_are_normal_and_their_cells_dominant() {
        for (n, k) in [(0, 0), (0, 1), (1, 1), (2, 1)] {
            let x = representable(obj(n, k));
            assert!(is_normal(&x));
            for u in x.cell_ids().cloned().collect::<Vec<_>>() {
                assert!(is_dominant(&x, &u), "cell {u} of [{n}]_{k}");
            }
        }
    }

    #[test]
    fn a_swap_fixed_free_cell_breaks_normality() {
        let deg = obj(0, 1);
        let id = CellId::new("pinned");
        let cells = BTreeMap::from([(id.clone(), Cell::new(deg, "swap-fixed free point"))]);
        let swaps = BTreeMap::from([(id.clone(), id.clone())]);
        let x = IsoSSet::new(cells, BTreeMap::new(), swaps).unwrap();
        assert!(!is_normal(&x));
        assert!(!is_dominant(&x, &id));
    }

    #[test]
    fn normality_matches_the_cell_level_criterion() {
        let ambient = representable(obj(2, 1));
        let samples = [boundary(obj(2, 1)), horn(obj(2, 1), 1).unwrap(), ambient.clone()];
        for x in &samples {
            let cell_level = x.cell_ids().all(|u| {
                x.degree_of(u).k() == 0 || x.swap_cell(u) != u
            });
            assert_eq!(is_normal(x), cell_level);
        }
    }

    #[test]
    fn inclusions_of_subobjects_are_normal_monos() {
        let ambient = representable(obj(2, 1));
        let sub = boundary(obj(2, 1));
        let f = inclusion(&sub, &ambient).unwrap();
        assert!(is_normal_mono(&f));
        assert!(is_normal_mono(&PresheafMap::identity(&ambient)));
    }

    #[test]
    fn a_sampled_sub_of_a_representable_is_normal() {
        let ambient = representable(obj(2, 2));
        let keep: BTreeSet<CellId> = crate::presheaf::close_cells(
            &ambient,
            &[CellId::new("0e,1e")].into_iter().collect(),
        );
        let sub = sub_from_cells(&ambient, &keep).unwrap();
        assert!(is_normal(&sub));
    }
}
