//! Combinatorial geometric realization.
//!
//! The realization of `[n]_k` is two affine `n`-simplices glued along the
//! face spanned by the real vertices (one simplex when `k = 0`, two
//! disjoint copies when `k = n + 1`). Coordinates are schematic: vertex
//! `(j, branch)` goes to the `j`-th unit basis vector of `R^{n+1}` with a
//! trailing flag coordinate, `0` for real vertices and `+1`/`-1` for the
//! two branches of a free pair. The deliverable is the combinatorial
//! complex plus viewable geometry, since the space itself is only defined
//! up to homeomorphism.
//!
//! [`realize`] glues per-cell copies of that model along the face and swap
//! tables of a finite presheaf, with vertex identifications computed by
//! union-find. Each cell contributes its branch chain and its swapped
//! chain, split into sub-simplices of every dimension, which makes the
//! Euler characteristic a plain alternating sum over the facet census.
//!
//! Morphisms push forward by summing barycentric mass over vertex
//! preimages ([`theta_star_coords`], with [`theta_star_real`] for the face
//! spanned by real vertices); the two variants commute with the real-face
//! embedding [`iota_real`]. [`theta_star`] applies the same formula to a
//! point of the glued space, tracking which branch copy it lives in.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::gdelta::{decompose, Branch, GDeltaMap, SimplexObject, Vertex};
use crate::presheaf::{coface_map, legal_cofaces, CellId, IsoSSet};

/// Absolute tolerance for all floating-point checks in this module.
pub const REALIZE_TOL: f64 = 1e-12;
/// Looser tolerance used only to validate user-supplied barycentric input.
const BARY_INPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error("degree ({n},{k}) is out of range (need k <= n + 1)")]
    BadDegree { n: usize, k: usize },
    #[error("expected {expected} barycentric coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("coordinates are not barycentric: {0}")]
    NotBarycentric(String),
}

/// One embedded vertex of a mesh.
#[derive(Debug, Clone, Serialize)]
pub struct MeshVertex {
    pub id: usize,
    pub coords: Vec<f64>,
    /// The `cell:vertex` slot this class is named after.
    pub provenance: String,
}

/// One affine simplex of a mesh, stored as a sorted vertex-id tuple.
#[derive(Debug, Clone, Serialize)]
pub struct MeshFacet {
    pub vertices: Vec<usize>,
    /// The `cell:branch` chain that first contributed this facet.
    pub provenance: String,
}

/// A finite affine simplicial complex: vertices with coordinates plus the
/// sub-simplices of every dimension spanned by the glued branch chains.
#[derive(Debug, Clone, Serialize)]
pub struct Mesh {
    /// Dimension of the ambient coordinate space.
    pub ambient: usize,
    pub vertices: Vec<MeshVertex>,
    /// All facets of dimension 1 and up; dimension-0 facets are the
    /// vertices themselves.
    pub facets: Vec<MeshFacet>,
}

impl Mesh {
    fn empty() -> Self {
        Mesh {
            ambient: 0,
            vertices: Vec::new(),
            facets: Vec::new(),
        }
    }

    /// Simplex counts by dimension; index 0 counts vertices.
    pub fn census(&self) -> Vec<usize> {
        let mut out = vec![self.vertices.len()];
        for f in &self.facets {
            let d = f.vertices.len() - 1;
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }

    /// Alternating sum of the census.
    pub fn euler(&self) -> i64 {
        self.census()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Highest facet dimension present (0 when only vertices exist).
    pub fn top_dimension(&self) -> Option<usize> {
        if self.vertices.is_empty() {
            return None;
        }
        Some(
            self.facets
                .iter()
                .map(|f| f.vertices.len() - 1)
                .max()
                .unwrap_or(0),
        )
    }

    /// Facets of the highest dimension.
    pub fn top_facets(&self) -> Vec<&MeshFacet> {
        let Some(d) = self.top_dimension() else {
            return Vec::new();
        };
        self.facets
            .iter()
            .filter(|f| f.vertices.len() - 1 == d)
            .collect()
    }

    /// How many top-dimensional simplices the mesh has. At dimension zero
    /// these are the vertices themselves.
    pub fn top_facet_count(&self) -> usize {
        match self.top_dimension() {
            None => 0,
            Some(0) => self.vertices.len(),
            Some(_) => self.top_facets().len(),
        }
    }

    /// Every facet of dimension 1 and up has all its codimension-1 faces
    /// present in the mesh (as facets or vertices).
    pub fn closed_under_faces(&self) -> bool {
        let present: BTreeSet<&[usize]> =
            self.facets.iter().map(|f| f.vertices.as_slice()).collect();
        let vertex_ids: BTreeSet<usize> = self.vertices.iter().map(|v| v.id).collect();
        self.facets.iter().all(|f| {
            (0..f.vertices.len()).all(|drop| {
                let mut sub = f.vertices.clone();
                sub.remove(drop);
                if sub.len() == 1 {
                    vertex_ids.contains(&sub[0])
                } else {
                    present.contains(sub.as_slice())
                }
            })
        })
    }

    /// Whether the top facets form one component under the relation of
    /// sharing a codimension-1 face. Empty and single-facet meshes count
    /// as connected.
    pub fn top_facet_graph_is_connected(&self) -> bool {
        if self.top_dimension() == Some(0) {
            return self.vertices.len() <= 1;
        }
        let tops = self.top_facets();
        if tops.len() <= 1 {
            return true;
        }
        let d = tops[0].vertices.len() - 1;
        let mut uf = UnionFind::<usize>::new(tops.len());
        for i in 0..tops.len() {
            for j in i + 1..tops.len() {
                let a: BTreeSet<usize> = tops[i].vertices.iter().copied().collect();
                let shared = tops[j].vertices.iter().filter(|v| a.contains(v)).count();
                if shared >= d {
                    uf.union(i, j);
                }
            }
        }
        let root = uf.find(0);
        (1..tops.len()).all(|i| uf.find(i) == root)
    }
}

/// Schematic embedding of one vertex: unit basis position plus the branch
/// flag, padded into `R^{ambient}`.
fn embed_vertex(v: Vertex, free_below: usize, ambient: usize) -> Vec<f64> {
    let mut coords = vec![0.0; ambient];
    coords[v.index] = 1.0;
    coords[ambient - 1] = if v.index >= free_below {
        0.0
    } else if v.branch == Branch::E {
        1.0
    } else {
        -1.0
    };
    coords
}

/// The two maximal chains of `[n]_k`: the branch-`e` vertex chain and its
/// swapped copy (they agree from index `k` on and entirely when `k = 0`).
fn branch_chains(deg: SimplexObject) -> Vec<(Branch, Vec<Vertex>)> {
    let (n, k) = (deg.n(), deg.k());
    let e_chain: Vec<Vertex> = (0..=n).map(|j| Vertex::new(j, Branch::E)).collect();
    if k == 0 {
        return vec![(Branch::E, e_chain)];
    }
    let s_chain: Vec<Vertex> = (0..=n)
        .map(|j| {
            if j < k {
                Vertex::new(j, Branch::S)
            } else {
                Vertex::new(j, Branch::E)
            }
        })
        .collect();
    vec![(Branch::E, e_chain), (Branch::S, s_chain)]
}

/// All sub-tuples of size 2 and up of a chain of vertex ids, deduplicated
/// by the caller.
fn sub_tuples(ids: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << ids.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let tuple: Vec<usize> = (0..ids.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| ids[i])
            .collect();
        out.push(tuple);
    }
    out
}

fn assemble_facets(
    chains: Vec<(String, Vec<usize>)>,
    vertices: Vec<MeshVertex>,
    ambient: usize,
) -> Mesh {
    let mut seen: BTreeMap<Vec<usize>, String> = BTreeMap::new();
    for (tag, ids) in chains {
        for mut tuple in sub_tuples(&ids) {
            tuple.sort_unstable();
            tuple.dedup();
            if tuple.len() < 2 {
                continue;
            }
            seen.entry(tuple).or_insert_with(|| tag.clone());
        }
    }
    let facets = seen
        .into_iter()
        .map(|(vertices, provenance)| MeshFacet {
            vertices,
            provenance,
        })
        .collect();
    Mesh {
        ambient,
        vertices,
        facets,
    }
}

/// The realization of the representable at `[n]_k`, built directly from
/// its two vertex chains: two affine `n`-simplices sharing the face on
/// the real vertices.
pub fn realize_cellwise(n: usize, k: usize) -> Result<Mesh, RealizeError> {
    let deg = SimplexObject::new(n, k).map_err(|_| RealizeError::BadDegree { n, k })?;
    let ambient = n + 2;
    let verts = deg.vertices();
    let mut id_of = BTreeMap::new();
    let mut vertices = Vec::new();
    for v in &verts {
        let id = vertices.len();
        id_of.insert(v.to_string(), id);
        vertices.push(MeshVertex {
            id,
            coords: embed_vertex(*v, k, ambient),
            provenance: v.to_string(),
        });
    }
    let top: Vec<String> = (0..=n).map(|j| Vertex::new(j, Branch::E).to_string()).collect();
    let chains = branch_chains(deg)
        .into_iter()
        .map(|(b, chain)| {
            let tag = format!("{}:{b:?}", top.join(","));
            let ids = chain.iter().map(|v| id_of[&v.to_string()]).collect();
            (tag, ids)
        })
        .collect();
    Ok(assemble_facets(chains, vertices, ambient))
}

/// Geometric vertex slots of a cell: its degree's vertices, keyed by name.
fn slot_names(deg: SimplexObject) -> Vec<String> {
    deg.vertices().iter().map(|v| v.to_string()).collect()
}

/// Glues the per-cell realizations of a finite presheaf along its face
/// and swap tables. Vertex classes are computed by union-find; each class
/// takes coordinates and a name from its smallest member slot.
pub fn realize(x: &IsoSSet) -> Mesh {
    let Some(maxdim) = x.max_cell_dim() else {
        return Mesh::empty();
    };
    let ambient = maxdim + 2;

    let mut slot: BTreeMap<(CellId, String), usize> = BTreeMap::new();
    for u in x.cell_ids() {
        for name in slot_names(x.degree_of(u)) {
            let next = slot.len();
            slot.insert((u.clone(), name), next);
        }
    }
    let mut uf = UnionFind::<usize>::new(slot.len());

    for u in x.cell_ids() {
        let deg = x.degree_of(u);
        // Face gluing: the face simplex (epi, cell) parametrizes the same
        // geometric points as the cell restricted along the coface.
        for cf in legal_cofaces(deg) {
            let d = coface_map(deg, cf);
            let s = x.face(u, cf);
            for w in d.src().vertices() {
                let here = slot[&(u.clone(), d.apply(w).to_string())];
                let there = slot[&(s.cell.clone(), s.epi.apply(w).to_string())];
                uf.union(here, there);
            }
        }
        // Swap gluing: the swapped chain of a cell is the plain chain of
        // its swap partner.
        let su = x.swap_cell(u);
        for w in deg.vertices() {
            let flipped = if w.index < deg.k() {
                Vertex::new(w.index, w.branch.flipped())
            } else {
                w
            };
            let here = slot[&(u.clone(), w.to_string())];
            let there = slot[&(su.clone(), flipped.to_string())];
            uf.union(here, there);
        }
    }

    // Name every class after its smallest slot and number classes in that
    // order, so the output is deterministic.
    let mut class_repr: BTreeMap<usize, &(CellId, String)> = BTreeMap::new();
    for (key, &ix) in &slot {
        class_repr.entry(uf.find(ix)).or_insert(key);
    }
    let mut reps: Vec<(&(CellId, String), usize)> =
        class_repr.iter().map(|(&root, &key)| (key, root)).collect();
    reps.sort();
    let mut id_of_root = BTreeMap::new();
    let mut vertices = Vec::new();
    for (key, root) in reps {
        let id = vertices.len();
        id_of_root.insert(root, id);
        let (cell, vname) = key;
        let deg = x.degree_of(cell);
        let v = deg
            .vertices()
            .into_iter()
            .find(|v| v.to_string() == *vname)
            .expect("slot names come from degree vertices");
        vertices.push(MeshVertex {
            id,
            coords: embed_vertex(v, deg.k(), ambient),
            provenance: format!("{cell}:{vname}"),
        });
    }

    let mut chains = Vec::new();
    for u in x.cell_ids() {
        let deg = x.degree_of(u);
        for (b, chain) in branch_chains(deg) {
            let ids: Vec<usize> = chain
                .iter()
                .map(|v| id_of_root[&uf.find(slot[&(u.clone(), v.to_string())])])
                .collect();
            chains.push((format!("{u}:{b:?}"), ids));
        }
    }
    assemble_facets(chains, vertices, ambient)
}

/// Realizes and takes the alternating simplex count.
pub fn euler_characteristic(x: &IsoSSet) -> i64 {
    realize(x).euler()
}

fn check_barycentric(t: &[f64], expected: usize) -> Result<(), RealizeError> {
    if t.len() != expected {
        return Err(RealizeError::WrongLength {
            expected,
            got: t.len(),
        });
    }
    if t.iter().any(|&v| v < -BARY_INPUT_TOL) {
        return Err(RealizeError::NotBarycentric(format!(
            "negative coordinate in {t:?}"
        )));
    }
    let sum: f64 = t.iter().sum();
    if (sum - 1.0).abs() > BARY_INPUT_TOL {
        return Err(RealizeError::NotBarycentric(format!(
            "coordinates sum to {sum}, not 1"
        )));
    }
    Ok(())
}

/// Pushforward on the full simplex: target coordinate `i` collects the
/// mass of the branch-`e` vertices mapping onto the branch-`e` vertex at
/// `i`. This is the coordinate expression of the induced map between the
/// chosen branch copies; mass sent to the other copy is dropped here and
/// tracked by [`theta_star`] instead.
pub fn theta_star_coords(theta: &GDeltaMap, t: &[f64]) -> Result<Vec<f64>, RealizeError> {
    check_barycentric(t, theta.src().n() + 1)?;
    let mut out = vec![0.0; theta.tgt().n() + 1];
    for (j, &mass) in t.iter().enumerate() {
        let img = theta.apply(Vertex::new(j, Branch::E));
        if img.branch == Branch::E {
            out[img.index] += mass;
        }
    }
    Ok(out)
}

/// Pushforward on the face spanned by the real vertices: coordinates are
/// indexed by orbits `k..=n` of the source and `l..=m` of the target, and
/// real vertices can only map to real vertices.
pub fn theta_star_real(theta: &GDeltaMap, t: &[f64]) -> Result<Vec<f64>, RealizeError> {
    let (n, k) = (theta.src().n(), theta.src().k());
    let (m, l) = (theta.tgt().n(), theta.tgt().k());
    check_barycentric(t, n + 1 - k)?;
    let mut out = vec![0.0; m + 1 - l];
    for j in k..=n {
        let img = theta.apply(Vertex::new(j, Branch::E));
        out[img.index - l] += t[j - k];
    }
    Ok(out)
}

/// Embeds the real face into the full simplex by padding `k` zeros in
/// front.
pub fn iota_real(deg: SimplexObject, t: &[f64]) -> Result<Vec<f64>, RealizeError> {
    let (n, k) = (deg.n(), deg.k());
    check_barycentric(t, n + 1 - k)?;
    let mut out = vec![0.0; n + 1];
    out[k..].copy_from_slice(t);
    Ok(out)
}

/// A point of the glued realization: barycentric coordinates on one of
/// the two branch copies. Points with no mass on free vertices lie on the
/// shared face and are normalized to the `e` copy.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    pub copy: Branch,
    pub coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(deg: SimplexObject, copy: Branch, coords: Vec<f64>) -> Result<Self, RealizeError> {
        check_barycentric(&coords, deg.n() + 1)?;
        let mut p = SimplexPoint { copy, coords };
        p.normalize(deg.k());
        Ok(p)
    }

    fn normalize(&mut self, free_below: usize) {
        if self.coords[..free_below].iter().all(|&v| v <= REALIZE_TOL) {
            self.copy = Branch::E;
        }
    }

    /// Componentwise comparison within [`REALIZE_TOL`], copies included.
    pub fn close_to(&self, other: &SimplexPoint) -> bool {
        self.copy == other.copy
            && self.coords.len() == other.coords.len()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| (a - b).abs() <= REALIZE_TOL)
    }
}

/// Pushforward of a point of the glued space. Mass moves along vertex
/// orbits; the copy flips when the map twists the branches. Functorial:
/// composing maps composes the pushforwards.
pub fn theta_star(theta: &GDeltaMap, p: &SimplexPoint) -> Result<SimplexPoint, RealizeError> {
    check_barycentric(&p.coords, theta.src().n() + 1)?;
    let mut coords = vec![0.0; theta.tgt().n() + 1];
    for (j, &mass) in p.coords.iter().enumerate() {
        coords[theta.apply(Vertex::new(j, Branch::E)).index] += mass;
    }
    let twisted = decompose(theta).swap;
    let copy = if twisted { p.copy.flipped() } else { p.copy };
    SimplexPoint::new(theta.tgt(), copy, coords)
}

/// Deterministic three-coordinate projection for export: unit-circle
/// placement of the basis directions with the branch flag as height.
fn viewable(coords: &[f64]) -> [f64; 3] {
    if coords.len() <= 3 {
        let mut out = [0.0; 3];
        out[..coords.len()].copy_from_slice(coords);
        return out;
    }
    let n = coords.len() - 1;
    let mut out = [0.0; 3];
    for (j, &c) in coords[..n].iter().enumerate() {
        let angle = std::f64::consts::TAU * j as f64 / n as f64;
        out[0] += c * angle.cos();
        out[1] += c * angle.sin();
    }
    out[2] = coords[n];
    out
}

/// Object File Format text: counts line, vertex coordinates, then the top
/// facets as polygon lines. Chosen here: vertices are projected to three
/// coordinates when the ambient space is larger.
pub fn export_off(mesh: &Mesh) -> String {
    let tops = mesh.top_facets();
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} 0\n", mesh.vertices.len(), tops.len()));
    for v in &mesh.vertices {
        let [x, y, z] = viewable(&v.coords);
        out.push_str(&format!("{x} {y} {z}\n"));
    }
    for f in tops {
        let ids: Vec<String> = f.vertices.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!("{} {}\n", f.vertices.len(), ids.join(" ")));
    }
    out
}

/// Parses the counts and facet lines back out of [`export_off`] output.
pub fn parse_off_census(text: &str) -> Option<(usize, usize)> {
    let mut lines = text.lines();
    if lines.next()? != "OFF" {
        return None;
    }
    let counts: Vec<usize> = lines
        .next()?
        .split_whitespace()
        .map(|w| w.parse().ok())
        .collect::<Option<_>>()?;
    Some((counts[0], counts[1]))
}

/// Wavefront OBJ text: `v` lines with three coordinates and `f` lines for
/// the triangles (1-based). Facets of dimension above 2 are skipped, with
/// a comment recording how many.
pub fn export_obj(mesh: &Mesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let [x, y, z] = viewable(&v.coords);
        out.push_str(&format!("v {x} {y} {z}\n"));
    }
    let mut skipped = 0usize;
    for f in &mesh.facets {
        match f.vertices.len() {
            3 => {
                let ids: Vec<String> =
                    f.vertices.iter().map(|i| (i + 1).to_string()).collect();
                out.push_str(&format!("f {}\n", ids.join(" ")));
            }
            d if d > 3 => skipped += 1,
            _ => {}
        }
    }
    if skipped > 0 {
        out.push_str(&format!(
            "# skipped {skipped} facets above dimension 2\n"
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{coproduct, representable};
    use crate::standard::boundary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    /// Independent census: geometric simplices of a subcomplex of a
    /// representable are the sub-tuples of its cells' branch chains, with
    /// vertices named canonically by the ambient object.
    fn chain_census(x: &IsoSSet) -> Vec<usize> {
        let mut verts: BTreeSet<String> = BTreeSet::new();
        let mut tuples: BTreeSet<Vec<String>> = BTreeSet::new();
        for u in x.cell_ids() {
            let deg = x.degree_of(u);
            let cell_verts: Vec<&str> = u.as_str().split(',').collect();
            for (_, chain) in branch_chains(deg) {
                let named: Vec<String> = chain
                    .iter()
                    .map(|v| {
                        let base = cell_verts[v.index];
                        if v.branch == Branch::S {
                            // Swapped chain reads the partner vertex name.
                            let (ix, br) = base.split_at(base.len() - 1);
                            let flipped = if br == "e" { "s" } else { "e" };
                            format!("{ix}{flipped}")
                        } else {
                            base.to_string()
                        }
                    })
                    .collect();
                for v in &named {
                    verts.insert(v.clone());
                }
                for mask in 1u32..(1 << named.len()) {
                    if mask.count_ones() < 2 {
                        continue;
                    }
                    let mut t: Vec<String> = (0..named.len())
                        .filter(|&i| mask & (1 << i) != 0)
                        .map(|i| named[i].clone())
                        .collect();
                    t.sort();
                    t.dedup();
                    if t.len() >= 2 {
                        tuples.insert(t);
                    }
                }
            }
        }
        let mut census = vec![verts.len()];
        for t in &tuples {
            let d = t.len() - 1;
            if census.len() <= d {
                census.resize(d + 1, 0);
            }
            census[d] += 1;
        }
        census
    }

    #[test]
    fn the_mixed_triangle_realizes_to_a_disk_shaped_complex() {
        let mesh = realize(&representable(obj(2, 1)));
        assert_eq!(mesh.census(), vec![4, 5, 2]);
        assert_eq!(mesh.euler(), 1);
        assert!(mesh.top_facet_graph_is_connected());
        assert!(mesh.closed_under_faces());

        let direct = realize_cellwise(2, 1).unwrap();
        assert_eq!(direct.census(), mesh.census());
    }

    #[test]
    fn representables_have_one_or_two_top_facets() {
        for n in 0..=4usize {
            for k in 0..=n + 1 {
                let mesh = realize_cellwise(n, k).unwrap();
                let expected = if k == 0 { 1 } else { 2 };
                assert_eq!(mesh.top_facet_count(), expected, "({n},{k})");
                assert_eq!(mesh.top_dimension(), Some(n));
                assert!(mesh.closed_under_faces());
                let glued = realize(&representable(obj(n, k)));
                assert_eq!(glued.census(), mesh.census(), "({n},{k})");
            }
        }
    }

    #[test]
    fn free_extremes_fall_apart() {
        let seg = realize_cellwise(1, 2).unwrap();
        assert_eq!(seg.census(), vec![4, 2]);
        assert!(!seg.top_facet_graph_is_connected());

        let points = realize(&representable(obj(0, 1)));
        assert_eq!(points.euler(), 2);

        assert_eq!(realize(&IsoSSet::empty()).census(), vec![0]);
    }

    #[test]
    fn boundary_censuses_match_the_chain_oracle() {
        for (n, k) in [(2, 1), (2, 2), (2, 0), (3, 1)] {
            let bd = boundary(obj(n, k));
            let mesh = realize(&bd);
            assert_eq!(mesh.census(), chain_census(&bd), "({n},{k})");
        }
        assert_eq!(euler_characteristic(&boundary(obj(2, 1))), -1);
        assert_eq!(euler_characteristic(&boundary(obj(2, 2))), -1);
    }

    #[test]
    fn realization_adds_over_coproducts() {
        let x = representable(obj(2, 1));
        let y = representable(obj(1, 1));
        let both = coproduct(&x, &y).object;
        let cx = realize(&x).census();
        let cy = realize(&y).census();
        let mut expected = cx.clone();
        for (d, &c) in cy.iter().enumerate() {
            if expected.len() <= d {
                expected.resize(d + 1, 0);
            }
            expected[d] += c;
        }
        assert_eq!(realize(&both).census(), expected);
    }

    fn random_barycentric(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..len).map(|_| -rng.gen::<f64>().ln()).collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / sum).collect()
    }

    fn generators_up_to(max_n: usize) -> Vec<GDeltaMap> {
        let mut out = Vec::new();
        for n in 0..max_n {
            for k in 0..=n + 1 {
                for index in 0..=n + 1 {
                    for eps in [0u8, 1] {
                        if let Ok(d) = GDeltaMap::coface(n, k, index, eps) {
                            out.push(d);
                        }
                    }
                }
                for index in 0..=n {
                    for eps in [0u8, 1] {
                        if let Ok(s) = GDeltaMap::codegeneracy(n, k, index, eps) {
                            out.push(s);
                        }
                    }
                }
            }
        }
        for n in 0..=max_n {
            for k in 0..=n + 1 {
                out.push(GDeltaMap::swap(SimplexObject::new(n, k).unwrap()));
            }
        }
        out
    }

    #[test]
    fn collapsing_a_pair_of_coordinates_adds_them() {
        let s = GDeltaMap::codegeneracy(0, 0, 0, 0).unwrap();
        let out = theta_star_coords(&s, &[0.5, 0.5]).unwrap();
        assert!((out[0] - 1.0).abs() <= REALIZE_TOL);

        let id = GDeltaMap::identity(obj(2, 1));
        let t = [0.2, 0.3, 0.5];
        assert_eq!(theta_star_coords(&id, &t).unwrap(), t.to_vec());
    }

    #[test]
    fn pushforwards_commute_with_the_real_face_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x15D_0CE4);
        for theta in generators_up_to(3) {
            let (n, k) = (theta.src().n(), theta.src().k());
            if k > n {
                continue;
            }
            for _ in 0..100 {
                let t = random_barycentric(&mut rng, n + 1 - k);
                let through_full =
                    theta_star_coords(&theta, &iota_real(theta.src(), &t).unwrap()).unwrap();
                let through_face =
                    iota_real(theta.tgt(), &theta_star_real(&theta, &t).unwrap()).unwrap();
                let residual: f64 = through_full
                    .iter()
                    .zip(&through_face)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(
                    residual <= REALIZE_TOL,
                    "{theta:?} residual {residual}"
                );
            }
        }
    }

    #[test]
    fn pushforwards_stay_barycentric_and_compose() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBA5E);
        let gens = generators_up_to(3);
        for alpha in &gens {
            for beta in &gens {
                if beta.src() != alpha.tgt() {
                    continue;
                }
                let composite = beta.after(alpha);
                for _ in 0..5 {
                    let coords = random_barycentric(&mut rng, alpha.src().n() + 1);
                    let p = SimplexPoint::new(alpha.src(), Branch::E, coords).unwrap();
                    let two_steps =
                        theta_star(beta, &theta_star(alpha, &p).unwrap()).unwrap();
                    let one_step = theta_star(&composite, &p).unwrap();
                    assert!(two_steps.close_to(&one_step), "{alpha:?} then {beta:?}");
                    let sum: f64 = one_step.coords.iter().sum();
                    assert!((sum - 1.0).abs() <= 1e-9);
                    assert!(one_step.coords.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }

    #[test]
    fn exports_carry_the_expected_lines() {
        let mesh = realize_cellwise(2, 1).unwrap();
        let objtext = export_obj(&mesh);
        assert_eq!(objtext.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(objtext.lines().filter(|l| l.starts_with("f ")).count(), 2);

        let off = export_off(&mesh);
        assert_eq!(parse_off_census(&off), Some((4, 2)));

        let empty = export_off(&Mesh::empty());
        assert_eq!(empty, "OFF\n0 0 0\n");

        let solid = realize_cellwise(3, 0).unwrap();
        let solid_obj = export_obj(&solid);
        assert!(solid_obj.contains("# skipped 1 facets above dimension 2"));
    }

    #[test]
    fn bad_inputs_are_rejected() {
        let id = GDeltaMap::identity(obj(1, 0));
        assert!(matches!(
            theta_star_coords(&id, &[0.5]),
            Err(RealizeError::WrongLength { .. })
        ));
        assert!(matches!(
            theta_star_coords(&id, &[0.7, 0.7]),
            Err(RealizeError::NotBarycentric(_))
        ));
        assert!(matches!(
            realize_cellwise(1, 3),
            Err(RealizeError::BadDegree { .. })
        ));
    }
}
