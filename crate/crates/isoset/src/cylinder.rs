//! Cylinders for presheaves with a two-element symmetry.
//!
//! The prism over an indexing object is its underlying poset crossed with a
//! two-point chain, with the involution acting on the first factor alone.
//! Injective chains in the prism classify the simplices of the interval over
//! the corresponding representable, and the cylinder of an arbitrary finite
//! presheaf is glued degreewise from one copy of the prism per cell, with
//! identifications driven by the face and swap structure of the base.
//!
//! The construction hands back a [`CylinderBundle`]: the glued total object,
//! the two end inclusions, the projection back to the base, and an index
//! that lets maps of presheaves be transported through the gluing.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;

use crate::gdelta::{
    enumerate_gposet_maps, thicken_level, thicken_map, thicken_poset, thicken_projection,
    to_gposet, to_gposet_map, try_from_gposet_map, Branch, FinGPoset, GDeltaMap, GPosetMap,
    SimplexObject, Vertex,
};
use crate::presheaf::{
    coface_map, legal_cofaces, Cell, CellId, IsoSSet, PresheafError, PresheafMap, Simplex,
};

/// The prism over an indexing object: the object's poset crossed with the
/// two-point chain `0 < 1`, involution on the first factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thickening {
    pub base: SimplexObject,
    pub poset: FinGPoset,
}

/// Builds the prism over `base`.
pub fn thicken(base: SimplexObject) -> Thickening {
    Thickening {
        base,
        poset: thicken_poset(base),
    }
}

/// Cell name of a chain in a prism: the images of the canonical branch
/// vertices, in order. Equivariance makes these determine the whole map.
fn chain_cell_id(src: SimplexObject, pm: &GPosetMap) -> CellId {
    let names: Vec<&str> = (0..=src.n())
        .map(|j| {
            pm.apply_name(&Vertex::new(j, Branch::E).to_string())
                .expect("canonical vertices exist in the source poset")
        })
        .collect();
    CellId::new(names.join(";"))
}

/// All injective chains `[m]_l -> prism` for the prism over `deg`, keyed by
/// their cell name.
///
/// The ranges are exact: a chain of `m + 1` comparable elements needs
/// `m <= n + 1` (the longest chain in the prism has `n + 2` elements), and
/// the free half on one branch is a `k`-chain crossed with `0 < 1`, whose
/// longest chain has `k + 1` elements, so `l <= k + 1`.
fn prism_chains(deg: SimplexObject) -> BTreeMap<CellId, (SimplexObject, GPosetMap)> {
    let th = thicken_poset(deg);
    let mut out = BTreeMap::new();
    for m in 0..=deg.n() + 1 {
        for l in 0..=(m + 1).min(deg.k() + 1) {
            let src = SimplexObject::new(m, l).expect("l <= m + 1 by the loop bound");
            let src_poset = to_gposet(src);
            for pm in enumerate_gposet_maps(&src_poset, &th) {
                if pm.is_injective() {
                    out.insert(chain_cell_id(src, &pm), (src, pm));
                }
            }
        }
    }
    out
}

/// The interval over the representable at `deg`: cells are the injective
/// chains in the prism over `deg`, faces and the swap act by composition.
pub fn interval_of_representable(deg: SimplexObject) -> IsoSSet {
    let chains = prism_chains(deg);
    let mut cells = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    for (id, (cdeg, pm)) in &chains {
        cells.insert(
            id.clone(),
            Cell::new(*cdeg, format!("chain in the prism over {deg}")),
        );
        for cf in legal_cofaces(*cdeg) {
            let d = coface_map(*cdeg, cf);
            let sub = pm.after(&to_gposet_map(&d));
            faces.insert(
                (id.clone(), cf),
                Simplex {
                    epi: GDeltaMap::identity(d.src()),
                    cell: chain_cell_id(d.src(), &sub),
                },
            );
        }
        let sw = pm.after(&to_gposet_map(&GDeltaMap::swap(*cdeg)));
        swaps.insert(id.clone(), chain_cell_id(*cdeg, &sw));
    }
    IsoSSet::new(cells, faces, swaps).expect("prism chains are closed under faces and swap")
}

/// A pair (base cell, chain into the prism over its degree), keyed by the
/// chain's image indices. The degree of the chain's source is fixed by the
/// table the key lives in.
type PairKey = (CellId, Vec<usize>);

/// Gluing data of a cylinder, kept alongside the bundle so maps can be
/// transported through the construction.
#[derive(Debug, Clone)]
struct CylinderIndex {
    /// Normal form in the total object of every (base cell, chain) pair,
    /// per degree of the chain's source.
    classes: BTreeMap<SimplexObject, BTreeMap<PairKey, Simplex>>,
    /// Chosen representative pair of every cell of the total object.
    reps: BTreeMap<CellId, (CellId, GPosetMap)>,
}

/// A presheaf cylinder: the base, the glued total object, the two end
/// inclusions, and the projection back to the base.
///
/// The constructor checks that both ends are sections of the projection;
/// a bundle in hand always satisfies `rho . d0 = rho . d1 = id`.
#[derive(Debug, Clone)]
pub struct CylinderBundle {
    pub base: IsoSSet,
    pub total: IsoSSet,
    pub d0: PresheafMap,
    pub d1: PresheafMap,
    pub rho: PresheafMap,
    index: CylinderIndex,
}

impl CylinderBundle {
    /// Normal form in the total object of the pair (base cell `x`, chain
    /// `beta` into the prism over the degree of `x`), where `at` is the
    /// degree of the chain's source.
    pub fn class_of(&self, at: SimplexObject, x: &CellId, beta: &GPosetMap) -> &Simplex {
        &self.index.classes[&at][&(x.clone(), beta.images().to_vec())]
    }

    /// The chosen (base cell, chain) representative of a total cell.
    pub fn representative(&self, u: &CellId) -> (&CellId, &GPosetMap) {
        let (x, beta) = &self.index.reps[u];
        (x, beta)
    }
}

/// The generating codegeneracies with source `deg`, as morphisms.
fn codegens_from(deg: SimplexObject) -> Vec<GDeltaMap> {
    let (m, l) = (deg.n(), deg.k());
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    for i in l..m {
        out.push(GDeltaMap::codegeneracy(m - 1, l, i, 0).expect("index in the legal band"));
    }
    for i in 0..l.saturating_sub(1) {
        out.push(GDeltaMap::codegeneracy(m - 1, l, i, 1).expect("index in the legal band"));
    }
    out
}

/// One gluing rule `(x, post_lhs . beta) ~ (other, post_rhs . beta)`, with
/// `beta` ranging over all chains into the prism over `gen_src`.
struct MergeRule {
    post_lhs: GPosetMap,
    other: CellId,
    post_rhs: GPosetMap,
    gen_src: SimplexObject,
}

/// Glues the cylinder of a finite presheaf.
///
/// Degreewise, the simplices of the total object are classes of pairs
/// (cell `x` of the base, chain into the prism over the degree of `x`).
/// Two pairs are identified when a generating coface or the swap carries
/// one to the other through the base's face and swap tables; composite
/// identifications follow because the chains range over all poset maps,
/// and codegeneracies identify nothing (they act on the cell coordinate of
/// a pair by forming an honest degenerate simplex). A class is degenerate
/// exactly when it is hit by a chain factoring through a codegeneracy; the
/// rest become cells, named in degree order with the lexicographically
/// least member as representative.
pub fn cylinder(x: &IsoSSet) -> CylinderBundle {
    let Some(maxdim) = x.max_cell_dim() else {
        let total = IsoSSet::empty();
        let nothing = |s: &IsoSSet, t: &IsoSSet| {
            PresheafMap::new(s.clone(), t.clone(), BTreeMap::new())
                .expect("a map out of the empty presheaf needs no data")
        };
        return CylinderBundle {
            base: x.clone(),
            total: total.clone(),
            d0: nothing(x, &total),
            d1: nothing(x, &total),
            rho: nothing(&total, x),
            index: CylinderIndex {
                classes: BTreeMap::new(),
                reps: BTreeMap::new(),
            },
        };
    };

    // Gluing rules per base cell: one per generating coface into its
    // degree, plus the swap when the degree has free vertices.
    let mut rules: BTreeMap<CellId, Vec<MergeRule>> = BTreeMap::new();
    for u in x.cell_ids() {
        let deg = x.degree_of(u);
        let mut list = Vec::new();
        for cf in legal_cofaces(deg) {
            let d = coface_map(deg, cf);
            let entry = x.face(u, cf);
            list.push(MergeRule {
                post_lhs: thicken_map(&d),
                other: entry.cell.clone(),
                post_rhs: thicken_map(&entry.epi),
                gen_src: d.src(),
            });
        }
        if deg.k() >= 1 {
            let partner = x.swap_cell(u).clone();
            list.push(MergeRule {
                post_lhs: thicken_map(&GDeltaMap::swap(deg)),
                post_rhs: GPosetMap::identity(thicken_poset(deg)),
                other: partner,
                gen_src: deg,
            });
        }
        rules.insert(u.clone(), list);
    }

    let mut classes: BTreeMap<SimplexObject, BTreeMap<PairKey, Simplex>> = BTreeMap::new();
    let mut pairs_store: BTreeMap<SimplexObject, Vec<(CellId, GPosetMap)>> = BTreeMap::new();
    let mut reps: BTreeMap<CellId, (CellId, GPosetMap)> = BTreeMap::new();
    let mut cells: BTreeMap<CellId, Cell> = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    let mut counter = 0usize;

    for m in 0..=maxdim + 1 {
        for l in 0..=m + 1 {
            let dd = SimplexObject::new(m, l).expect("l <= m + 1 by the loop bound");
            let d_poset = to_gposet(dd);

            // Chains from dd into the prism over every degree a rule or a
            // cell mentions.
            let mut wanted: BTreeSet<SimplexObject> = x.cell_degrees();
            for list in rules.values() {
                wanted.extend(list.iter().map(|r| r.gen_src));
            }
            let maps_to: BTreeMap<SimplexObject, Vec<GPosetMap>> = wanted
                .into_iter()
                .map(|b| (b, enumerate_gposet_maps(&d_poset, &thicken_poset(b))))
                .collect();

            let mut pair_keys: Vec<PairKey> = Vec::new();
            let mut pair_maps: Vec<(CellId, GPosetMap)> = Vec::new();
            let mut index_of: BTreeMap<PairKey, usize> = BTreeMap::new();
            for u in x.cell_ids() {
                for pm in &maps_to[&x.degree_of(u)] {
                    let key = (u.clone(), pm.images().to_vec());
                    index_of.insert(key.clone(), pair_keys.len());
                    pair_keys.push(key);
                    pair_maps.push((u.clone(), pm.clone()));
                }
            }

            let mut uf: UnionFind<usize> = UnionFind::new(pair_keys.len());
            for (u, list) in &rules {
                for rule in list {
                    for beta in &maps_to[&rule.gen_src] {
                        let lhs = (u.clone(), rule.post_lhs.after(beta).images().to_vec());
                        let rhs = (
                            rule.other.clone(),
                            rule.post_rhs.after(beta).images().to_vec(),
                        );
                        uf.union(index_of[&lhs], index_of[&rhs]);
                    }
                }
            }

            // A class is degenerate when some chain at a lower degree,
            // pushed through a codegeneracy, lands in it; its normal form
            // is the lower class's normal form behind that codegeneracy.
            let mut root_simplex: BTreeMap<usize, Simplex> = BTreeMap::new();
            for s in codegens_from(dd) {
                let sp = to_gposet_map(&s);
                let low = s.tgt();
                for (ucell, beta_low) in &pairs_store[&low] {
                    let lifted = (ucell.clone(), beta_low.after(&sp).images().to_vec());
                    let root = uf.find(index_of[&lifted]);
                    let nf_low = &classes[&low][&(ucell.clone(), beta_low.images().to_vec())];
                    let expected = Simplex {
                        epi: nf_low.epi.after(&s),
                        cell: nf_low.cell.clone(),
                    };
                    if let Some(prev) = root_simplex.get(&root) {
                        assert_eq!(
                            prev, &expected,
                            "degeneracy witnesses of one gluing class disagree"
                        );
                    } else {
                        root_simplex.insert(root, expected);
                    }
                }
            }

            // The remaining classes become cells, in order of their least
            // member.
            let mut least_of_root: BTreeMap<usize, usize> = BTreeMap::new();
            for i in 0..pair_keys.len() {
                let root = uf.find(i);
                let slot = least_of_root.entry(root).or_insert(i);
                if pair_keys[i] < pair_keys[*slot] {
                    *slot = i;
                }
            }
            let mut fresh: Vec<(&PairKey, usize)> = least_of_root
                .iter()
                .filter(|(root, _)| !root_simplex.contains_key(root))
                .map(|(&root, &i)| (&pair_keys[i], root))
                .collect();
            fresh.sort();
            let mut new_cells: Vec<CellId> = Vec::new();
            for (least, root) in fresh {
                let id = CellId::new(format!("i{counter}"));
                counter += 1;
                cells.insert(
                    id.clone(),
                    Cell::new(dd, format!("glued class of {} with chain {:?}", least.0, least.1)),
                );
                reps.insert(id.clone(), pair_maps[index_of[least]].clone());
                root_simplex.insert(
                    root,
                    Simplex {
                        epi: GDeltaMap::identity(dd),
                        cell: id.clone(),
                    },
                );
                new_cells.push(id);
            }

            let table: BTreeMap<PairKey, Simplex> = pair_keys
                .iter()
                .enumerate()
                .map(|(i, key)| (key.clone(), root_simplex[&uf.find(i)].clone()))
                .collect();
            classes.insert(dd, table);
            pairs_store.insert(dd, pair_maps);

            // Faces and swap of the fresh cells, read off their
            // representatives. The swap of a cell is again a cell: the
            // swap of a nondegenerate class is nondegenerate.
            for id in &new_cells {
                let (xc, beta) = reps[id].clone();
                for cf in legal_cofaces(dd) {
                    let d = coface_map(dd, cf);
                    let sub = beta.after(&to_gposet_map(&d));
                    let nf = classes[&d.src()][&(xc.clone(), sub.images().to_vec())].clone();
                    faces.insert((id.clone(), cf), nf);
                }
                let sw = beta.after(&to_gposet_map(&GDeltaMap::swap(dd)));
                let snf = &classes[&dd][&(xc.clone(), sw.images().to_vec())];
                assert!(snf.is_cell(), "swap carried a cell to a degenerate class");
                swaps.insert(id.clone(), snf.cell.clone());
            }
        }
    }

    let total =
        IsoSSet::new(cells, faces, swaps).expect("the glued cylinder is a well-formed presheaf");

    let mut a0 = BTreeMap::new();
    let mut a1 = BTreeMap::new();
    for u in x.cell_ids() {
        let deg = x.degree_of(u);
        for (level, acc) in [(0u8, &mut a0), (1u8, &mut a1)] {
            let lvl = thicken_level(deg, level);
            let nf = classes[&deg][&(u.clone(), lvl.images().to_vec())].clone();
            acc.insert(u.clone(), nf);
        }
    }
    let d0 = PresheafMap::new(x.clone(), total.clone(), a0).expect("the 0 end is natural");
    let d1 = PresheafMap::new(x.clone(), total.clone(), a1).expect("the 1 end is natural");

    let mut ar = BTreeMap::new();
    for (id, (xc, beta)) in &reps {
        let dcell = x.degree_of(xc);
        let dtot = total.degree_of(id);
        let proj = thicken_projection(dcell);
        let theta = try_from_gposet_map(&proj.after(beta), dtot, dcell)
            .expect("projecting a chain out of the prism yields a morphism");
        ar.insert(id.clone(), x.act(xc, &theta));
    }
    let rho = PresheafMap::new(total.clone(), x.clone(), ar).expect("the projection is natural");

    let idmap = PresheafMap::identity(x);
    for end in [&d0, &d1] {
        let back = rho.compose(end).expect("projection composes with an end");
        assert!(back == idmap, "the projection must retract both ends");
    }

    CylinderBundle {
        base: x.clone(),
        total,
        d0,
        d1,
        rho,
        index: CylinderIndex { classes, reps },
    }
}

/// Transports a map of presheaves through given cylinders of its endpoints:
/// a class of (x, chain) goes to the class of (image cell, prism of the
/// image's surjection composed with the chain).
pub fn cylinder_map_with(
    f: &PresheafMap,
    cx: &CylinderBundle,
    cy: &CylinderBundle,
) -> PresheafMap {
    assert!(
        f.src() == &cx.base && f.tgt() == &cy.base,
        "bundles must sit over the endpoints of the map"
    );
    let mut assign = BTreeMap::new();
    for (id, (xc, beta)) in &cx.index.reps {
        let img = f.apply_cell(xc);
        let moved = thicken_map(&img.epi).after(beta);
        let at = cx.total.degree_of(id);
        assign.insert(id.clone(), cy.class_of(at, &img.cell, &moved).clone());
    }
    PresheafMap::new(cx.total.clone(), cy.total.clone(), assign)
        .expect("the cylinder of a natural map is natural")
}

/// Builds both cylinders and transports `f` through them.
pub fn cylinder_map(f: &PresheafMap) -> PresheafMap {
    cylinder_map_with(f, &cylinder(f.src()), &cylinder(f.tgt()))
}

/// Degreewise comparison of a subobject with the part of the ambient object
/// lying over either end of the thickened subobject.
#[derive(Debug, Clone, Default)]
pub struct ExactnessReport {
    pub degrees_checked: usize,
    pub problems: Vec<String>,
}

impl ExactnessReport {
    pub fn is_exact(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks that thickening an inclusion keeps both ends exact: a simplex of
/// the ambient object whose end image lies in the thickened subobject must
/// itself come from the subobject. Checked degreewise through the top cell
/// dimension of the ambient cylinder.
pub fn verify_exactness(iota: &PresheafMap) -> Result<ExactnessReport, PresheafError> {
    if !iota.is_mono() {
        return Err(PresheafError::NonMonoLeg(
            "the exactness check needs an injective map".into(),
        ));
    }
    let cx = cylinder(iota.src());
    let cy = cylinder(iota.tgt());
    let thick = cylinder_map_with(iota, &cx, &cy);
    let mut report = ExactnessReport::default();
    let top = cy.base.max_cell_dim().map_or(0, |m| m + 1);
    for m in 0..=top {
        for l in 0..=m + 1 {
            let deg = SimplexObject::new(m, l).expect("l <= m + 1 by the loop bound");
            let from_sub: BTreeSet<Simplex> = iota
                .src()
                .simplices_at(deg)
                .iter()
                .map(|s| iota.apply(s))
                .collect();
            let thick_sub: BTreeSet<Simplex> = cx
                .total
                .simplices_at(deg)
                .iter()
                .map(|s| thick.apply(s))
                .collect();
            report.degrees_checked += 1;
            for (end, name) in [(&cy.d0, "0"), (&cy.d1, "1")] {
                let over_end: BTreeSet<Simplex> = cy
                    .base
                    .simplices_at(deg)
                    .into_iter()
                    .filter(|s| thick_sub.contains(&end.apply(s)))
                    .collect();
                if over_end != from_sub {
                    report.problems.push(format!(
                        "at {deg}, end {name}: {} simplices lie over the thickened \
                         subobject, {} come from the subobject",
                        over_end.len(),
                        from_sub.len()
                    ));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{inclusion, representable};
    use crate::standard::boundary;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    /// Counts swap orbits among the cells of top degree `deg`.
    fn orbit_count(x: &IsoSSet, deg: SimplexObject) -> usize {
        let mut seen = BTreeSet::new();
        let mut orbits = 0;
        for u in x.cell_ids() {
            if x.degree_of(u) == deg && !seen.contains(u) {
                seen.insert(u.clone());
                seen.insert(x.swap_cell(u).clone());
                orbits += 1;
            }
        }
        orbits
    }

    #[test]
    fn interval_over_an_edge_is_the_square() {
        let i = interval_of_representable(obj(1, 0));
        assert!(i.validate().is_valid());
        let mut census = BTreeMap::new();
        for u in i.cell_ids() {
            *census.entry(i.degree_of(u)).or_insert(0usize) += 1;
        }
        assert_eq!(census[&obj(0, 0)], 4);
        assert_eq!(census[&obj(1, 0)], 5);
        assert_eq!(census[&obj(2, 0)], 2);
        assert_eq!(i.cell_count(), 11);
    }

    #[test]
    fn interval_top_cells_split_by_glue_bound() {
        for n in 0..=3usize {
            for k in 0..=n + 1 {
                let i = interval_of_representable(obj(n, k));
                assert_eq!(
                    orbit_count(&i, obj(n + 1, k)),
                    (n + 1).saturating_sub(k),
                    "plain top cells over [{n}]_{k}"
                );
                if k >= 1 {
                    assert_eq!(
                        orbit_count(&i, obj(n + 1, k + 1)),
                        k,
                        "glue-raised top cells over [{n}]_{k}"
                    );
                }
            }
        }
    }

    #[test]
    fn cylinder_of_empty_is_empty() {
        let c = cylinder(&IsoSSet::empty());
        assert!(c.total.is_empty());
    }

    #[test]
    fn cylinder_of_representables_matches_the_interval() {
        for (n, k) in [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2), (2, 1)] {
            let c = cylinder(&representable(obj(n, k)));
            let i = interval_of_representable(obj(n, k));
            assert!(c.total.validate().is_valid());
            assert!(
                crate::presheaf::isomorphic(&c.total, &i),
                "cylinder over [{n}]_{k} differs from the interval"
            );
        }
    }

    #[test]
    fn cylinder_of_the_free_point_has_one_swapped_pair_on_top() {
        let c = cylinder(&representable(obj(0, 1)));
        let tops: Vec<&CellId> = c
            .total
            .cell_ids()
            .filter(|u| c.total.degree_of(u) == obj(1, 2))
            .collect();
        assert_eq!(tops.len(), 2);
        assert_eq!(c.total.swap_cell(tops[0]), tops[1]);
    }

    #[test]
    fn free_point_ends_are_disjoint_on_cells() {
        let x = representable(obj(0, 1));
        let c = cylinder(&x);
        for u in x.cell_ids() {
            assert_ne!(c.d0.apply_cell(u), c.d1.apply_cell(u));
        }
    }

    #[test]
    fn thickened_boundary_inclusion_is_exact() {
        let ambient = representable(obj(1, 0));
        let sub = boundary(obj(1, 0));
        assert!(!sub.is_empty());
        let inc = inclusion(&sub, &ambient).unwrap();
        let report = verify_exactness(&inc).unwrap();
        assert!(report.is_exact(), "problems: {:?}", report.problems);
    }

    #[test]
    fn cylinder_map_of_a_boundary_inclusion_is_injective() {
        let ambient = representable(obj(1, 0));
        let inc = inclusion(&boundary(obj(1, 0)), &ambient).unwrap();
        let ii = cylinder_map(&inc);
        assert!(ii.is_mono());
    }
}
