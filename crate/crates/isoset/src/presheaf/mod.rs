//! Finite presheaves stored by their non-degenerate cells.
//!
//! An [`IsoSSet`] keeps three tables: the cells (with their degrees), the
//! face table (one entry per cell per generating coface into its degree),
//! and the swap table (an involution on cells). Every simplex of the
//! presheaf is represented by a unique pair of a branch-preserving
//! surjection and a cell; the twist is absorbed into the cell part, which
//! is what makes the pair unique.

mod build;
mod map;

pub use build::{
    classifying_map, close_cells, coproduct, image, inclusion, is_sub, mono_cell_id, pushout,
    representable, representable_monos, skeleton, sub_from_cells, sub_intersection, sub_union,
    yoneda_map, Pushout,
};
pub use map::{
    corestrict, enumerate_presheaf_maps, extend_to_map, find_isomorphism, isomorphic, PresheafMap,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::gdelta::{decompose, Coface, GDeltaMap, SimplexObject};

/// Errors raised while assembling presheaf data from parts.
#[derive(Debug, Error)]
pub enum PresheafError {
    #[error("cell `{0}` is referenced but not declared")]
    UnknownCell(String),
    #[error("cell `{cell}` has no face entry for {coface:?}")]
    MissingFace { cell: String, coface: Coface },
    #[error("cell `{cell}` has a face entry {coface:?} outside its degree")]
    IllegalFaceKey { cell: String, coface: Coface },
    #[error("face entry ({cell}, {coface:?}) is malformed: {reason}")]
    BadFaceEntry {
        cell: String,
        coface: Coface,
        reason: String,
    },
    #[error("cell `{0}` has no swap entry")]
    MissingSwap(String),
    #[error("swap table is not an involution at `{0}`")]
    SwapNotInvolution(String),
    #[error("swap entry for `{0}` changes the degree")]
    SwapDegreeMismatch(String),
    #[error("swap entry for `{0}` must be the identity at glue bound 0")]
    SwapNotIdentityAtZero(String),
    #[error("swap and face tables disagree at ({cell}, {coface:?})")]
    SwapFaceMismatch { cell: String, coface: Coface },
    #[error("map is not natural: {0}")]
    NotNatural(String),
    #[error("expected a monomorphism: {0}")]
    NonMonoLeg(String),
    #[error("cell set is not closed under the structure maps: {0}")]
    NotClosed(String),
    #[error("presheaf maps are not composable or have mismatched endpoints: {0}")]
    EndpointMismatch(String),
}

/// Name of a non-degenerate cell. Opaque; constructions choose stable,
/// content-derived names and gluings fall back to numbered names with a
/// provenance note on the cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId(String);

impl CellId {
    pub fn new(name: impl Into<String>) -> Self {
        CellId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A declared non-degenerate cell: its degree plus a free-form provenance
/// note used only for debugging and reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub degree: SimplexObject,
    pub provenance: String,
}

impl Cell {
    pub fn new(degree: SimplexObject, provenance: impl Into<String>) -> Self {
        Cell {
            degree,
            provenance: provenance.into(),
        }
    }
}

/// A simplex in normal form: a branch-preserving surjection applied to a
/// cell. `epi.src()` is the degree of the simplex, `epi.tgt()` the degree
/// of the cell.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    pub epi: GDeltaMap,
    pub cell: CellId,
}

impl Simplex {
    pub fn degree(&self) -> SimplexObject {
        self.epi.src()
    }

    /// True when the surjection part is an identity.
    pub fn is_cell(&self) -> bool {
        self.epi.is_identity()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_cell() {
            write!(f, "{}", self.cell)
        } else {
            write!(f, "{} via {}", self.cell, self.epi)
        }
    }
}

/// The generating cofaces with target `deg`, in a fixed order: first the
/// glue-raising ones (`eps = 1`, index below the glue bound), then the
/// plain ones (`eps = 0`, index from the glue bound up to the dimension).
pub fn legal_cofaces(deg: SimplexObject) -> Vec<Coface> {
    if deg.n() == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for index in 0..deg.k() {
        out.push(Coface { index, eps: 1 });
    }
    for index in deg.k()..=deg.n() {
        out.push(Coface { index, eps: 0 });
    }
    out
}

/// The actual map of a generating coface with target `deg`.
///
/// Panics when the coface is not legal for `deg`; pair with
/// [`legal_cofaces`].
pub fn coface_map(deg: SimplexObject, cf: Coface) -> GDeltaMap {
    assert!(deg.n() >= 1, "no cofaces land in dimension 0");
    let built = if cf.eps == 1 {
        GDeltaMap::coface(deg.n() - 1, deg.k() - 1, cf.index, 1)
    } else {
        GDeltaMap::coface(deg.n() - 1, deg.k(), cf.index, 0)
    };
    built.unwrap_or_else(|e| panic!("illegal coface {cf:?} into {deg}: {e}"))
}

/// Outcome of the exhaustive validity check. Structural problems and
/// violated composition identities are listed verbatim.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub problems: Vec<String>,
    pub paths_checked: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// A finite presheaf, stored by cells, face entries and the swap
/// involution.
#[derive(Debug, Clone)]
pub struct IsoSSet {
    cells: BTreeMap<CellId, Cell>,
    faces: BTreeMap<(CellId, Coface), Simplex>,
    swaps: BTreeMap<CellId, CellId>,
}

/// Structural equality: cell names and degrees, faces and swaps. The
/// provenance notes are debug metadata and do not participate.
impl PartialEq for IsoSSet {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
            && self.swaps == other.swaps
            && self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|((i1, c1), (i2, c2))| i1 == i2 && c1.degree == c2.degree)
    }
}

impl Eq for IsoSSet {}

impl IsoSSet {
    /// The empty presheaf.
    pub fn empty() -> Self {
        IsoSSet {
            cells: BTreeMap::new(),
            faces: BTreeMap::new(),
            swaps: BTreeMap::new(),
        }
    }

    /// Assemble a presheaf from raw tables, checking the structural
    /// invariants: completeness and well-formedness of the face table,
    /// the swap involution (identity where the glue bound is 0), and the
    /// compatibility of swaps with faces.
    pub fn new(
        cells: BTreeMap<CellId, Cell>,
        faces: BTreeMap<(CellId, Coface), Simplex>,
        swaps: BTreeMap<CellId, CellId>,
    ) -> Result<Self, PresheafError> {
        let raw = IsoSSet {
            cells,
            faces,
            swaps,
        };
        raw.check_structure()?;
        Ok(raw)
    }

    /// Assemble without any checking. Only for fault injection in tests
    /// and for internals that validate by other means.
    pub fn from_parts_unchecked(
        cells: BTreeMap<CellId, Cell>,
        faces: BTreeMap<(CellId, Coface), Simplex>,
        swaps: BTreeMap<CellId, CellId>,
    ) -> Self {
        IsoSSet {
            cells,
            faces,
            swaps,
        }
    }

    fn check_structure(&self) -> Result<(), PresheafError> {
        for (id, cell) in &self.cells {
            let legal: BTreeSet<Coface> = legal_cofaces(cell.degree).into_iter().collect();
            for cf in &legal {
                let entry = self.faces.get(&(id.clone(), *cf)).ok_or_else(|| {
                    PresheafError::MissingFace {
                        cell: id.to_string(),
                        coface: *cf,
                    }
                })?;
                let d = coface_map(cell.degree, *cf);
                let bad = |reason: String| PresheafError::BadFaceEntry {
                    cell: id.to_string(),
                    coface: *cf,
                    reason,
                };
                if entry.epi.src() != d.src() {
                    return Err(bad(format!(
                        "expected degree {}, found {}",
                        d.src(),
                        entry.degree()
                    )));
                }
                if !entry.epi.is_epi() || !entry.epi.is_branch_preserving() {
                    return Err(bad("surjection part is not branch-preserving epi".into()));
                }
                let target = self
                    .cells
                    .get(&entry.cell)
                    .ok_or_else(|| PresheafError::UnknownCell(entry.cell.to_string()))?;
                if entry.epi.tgt() != target.degree {
                    return Err(bad(format!(
                        "surjection lands in {}, cell `{}` has degree {}",
                        entry.epi.tgt(),
                        entry.cell,
                        target.degree
                    )));
                }
            }
            let swapped = self
                .swaps
                .get(id)
                .ok_or_else(|| PresheafError::MissingSwap(id.to_string()))?;
            let swapped_cell = self
                .cells
                .get(swapped)
                .ok_or_else(|| PresheafError::UnknownCell(swapped.to_string()))?;
            if swapped_cell.degree != cell.degree {
                return Err(PresheafError::SwapDegreeMismatch(id.to_string()));
            }
            if self.swaps.get(swapped) != Some(id) {
                return Err(PresheafError::SwapNotInvolution(id.to_string()));
            }
            if cell.degree.k() == 0 && swapped != id {
                return Err(PresheafError::SwapNotIdentityAtZero(id.to_string()));
            }
        }
        for (id, cf) in self.faces.keys() {
            let cell = self
                .cells
                .get(id)
                .ok_or_else(|| PresheafError::UnknownCell(id.to_string()))?;
            if !legal_cofaces(cell.degree).contains(cf) {
                return Err(PresheafError::IllegalFaceKey {
                    cell: id.to_string(),
                    coface: *cf,
                });
            }
        }
        for id in self.swaps.keys() {
            if !self.cells.contains_key(id) {
                return Err(PresheafError::UnknownCell(id.to_string()));
            }
        }
        // Swapping a cell then taking a face must match taking the face
        // and swapping the resulting simplex.
        for (id, cell) in &self.cells {
            for cf in legal_cofaces(cell.degree) {
                let direct = &self.faces[&(self.swaps[id].clone(), cf)];
                let routed = self.swap_simplex(&self.faces[&(id.clone(), cf)]);
                if *direct != routed {
                    return Err(PresheafError::SwapFaceMismatch {
                        cell: id.to_string(),
                        coface: cf,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = &CellId> {
        self.cells.keys()
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellId, &Cell)> {
        self.cells.iter()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn has_cell(&self, id: &CellId) -> bool {
        self.cells.contains_key(id)
    }

    pub fn cell(&self, id: &CellId) -> &Cell {
        &self.cells[id]
    }

    pub fn degree_of(&self, id: &CellId) -> SimplexObject {
        self.cells[id].degree
    }

    /// The face entry: the value of the presheaf on a generating coface,
    /// applied to a cell.
    pub fn face(&self, id: &CellId, cf: Coface) -> &Simplex {
        &self.faces[&(id.clone(), cf)]
    }

    pub fn face_entries(&self) -> impl Iterator<Item = (&(CellId, Coface), &Simplex)> {
        self.faces.iter()
    }

    /// The swap involution on cells.
    pub fn swap_cell(&self, id: &CellId) -> &CellId {
        &self.swaps[id]
    }

    /// The swap involution extended to simplices: the surjection part is
    /// untouched because swaps commute with the degeneracies.
    pub fn swap_simplex(&self, s: &Simplex) -> Simplex {
        Simplex {
            epi: s.epi.clone(),
            cell: self.swaps[&s.cell].clone(),
        }
    }

    /// Largest dimension carrying a cell, if any.
    pub fn max_cell_dim(&self) -> Option<usize> {
        self.cells.values().map(|c| c.degree.n()).max()
    }

    /// Cells that are not a face (degenerate or not) of any other cell.
    pub fn maximal_cells(&self) -> Vec<CellId> {
        let face_targets: BTreeSet<&CellId> = self.faces.values().map(|s| &s.cell).collect();
        self.cells
            .keys()
            .filter(|id| !face_targets.contains(id))
            .cloned()
            .collect()
    }

    /// The set of degrees in which cells live.
    pub fn cell_degrees(&self) -> BTreeSet<SimplexObject> {
        self.cells.values().map(|c| c.degree).collect()
    }

    /// Number of cells per degree; the census used for quick pruning.
    pub fn degree_census(&self) -> BTreeMap<SimplexObject, usize> {
        let mut out = BTreeMap::new();
        for cell in self.cells.values() {
            *out.entry(cell.degree).or_insert(0) += 1;
        }
        out
    }

    /// Evaluate the presheaf on `theta` at the cell `u`.
    ///
    /// `theta` must land in the degree of `u`. The unique decomposition
    /// of `theta` drives the evaluation: an optional swap rewrites the
    /// cell, the injective part is resolved one coface at a time against
    /// the face table (outermost coface first, so each step composes a
    /// degeneracy chain with a single coface and produces at most one new
    /// coface to resolve), and the degeneracy tail is composed onto the
    /// surjection part at the end.
    pub fn act(&self, u: &CellId, theta: &GDeltaMap) -> Simplex {
        let deg = self.degree_of(u);
        assert_eq!(
            theta.tgt(),
            deg,
            "map lands in {}, cell `{u}` has degree {deg}",
            theta.tgt()
        );
        let dec = decompose(theta);
        let mut cell = if dec.swap {
            self.swaps[u].clone()
        } else {
            u.clone()
        };
        let mut epi = GDeltaMap::identity(deg);
        for d in Self::coface_chain(&dec).iter().rev() {
            let step = self.face_step(&epi, &cell, d);
            epi = step.epi;
            cell = step.cell;
        }
        Simplex {
            epi: epi.after(&dec.epi_part()),
            cell,
        }
    }

    /// The coface factors of a decomposition as actual maps, in
    /// application order (innermost first).
    fn coface_chain(dec: &crate::gdelta::Decomposition) -> Vec<GDeltaMap> {
        let mut out = Vec::with_capacity(dec.cofaces.len());
        let mut cur = dec.mid();
        for cf in &dec.cofaces {
            let step = GDeltaMap::coface(cur.n(), cur.k(), cf.index, cf.eps)
                .expect("decomposition emits legal cofaces");
            cur = step.tgt();
            out.push(step);
        }
        out
    }

    /// Evaluate a single generating coface `d` against the simplex
    /// `(epi, cell)`. The composite of a degeneracy chain with one coface
    /// decomposes with at most one coface and no swap, so a single face
    /// table lookup suffices.
    fn face_step(&self, epi: &GDeltaMap, cell: &CellId, d: &GDeltaMap) -> Simplex {
        let comp = epi.after(d);
        let dec = decompose(&comp);
        debug_assert!(!dec.swap && dec.cofaces.len() <= 1);
        let tail = dec.epi_part();
        match dec.cofaces.first() {
            None => Simplex {
                epi: tail,
                cell: cell.clone(),
            },
            Some(cf) => {
                let entry = self.face(cell, *cf);
                Simplex {
                    epi: entry.epi.after(&tail),
                    cell: entry.cell.clone(),
                }
            }
        }
    }

    /// Evaluate the presheaf on `theta` at an arbitrary simplex.
    pub fn act_simplex(&self, s: &Simplex, theta: &GDeltaMap) -> Simplex {
        self.act(&s.cell, &s.epi.after(theta))
    }

    /// Number of simplices in the given degree: each cell contributes one
    /// simplex per branch-preserving surjection onto its degree.
    pub fn simplex_count(&self, deg: SimplexObject) -> usize {
        self.cells
            .values()
            .map(|c| crate::gdelta::enumerate_pure_epis(deg, c.degree).len())
            .sum()
    }

    /// All simplices in the given degree, in a stable order.
    pub fn simplices_at(&self, deg: SimplexObject) -> Vec<Simplex> {
        let mut out = Vec::new();
        for (id, cell) in &self.cells {
            for epi in crate::gdelta::enumerate_pure_epis(deg, cell.degree) {
                out.push(Simplex {
                    epi,
                    cell: id.clone(),
                });
            }
        }
        out
    }

    /// Exhaustive validity check: the structural invariants plus path
    /// independence of evaluation. For every cell and every composable
    /// pair of generating cofaces the one-step route through the face
    /// table must agree with evaluating the composite in one go; the same
    /// is required with a swap inserted before the pair.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if let Err(e) = self.check_structure() {
            report.problems.push(e.to_string());
            // Path checks dereference the tables; stop on broken structure.
            return report;
        }
        for (id, cell) in &self.cells {
            for cf in legal_cofaces(cell.degree) {
                let d = coface_map(cell.degree, cf);
                let first = self.face(id, cf).clone();
                for cf2 in legal_cofaces(d.src()) {
                    let d2 = coface_map(d.src(), cf2);
                    let via_steps = self.act_simplex(&first, &d2);
                    let composite = self.act(id, &d.after(&d2));
                    report.paths_checked += 1;
                    if via_steps != composite {
                        report.problems.push(format!(
                            "path independence fails at cell `{id}`, cofaces {cf:?} then {cf2:?}: \
                             stepwise {via_steps}, composite {composite}"
                        ));
                    }
                    let swapped_first = self.face(self.swap_cell(id), cf).clone();
                    let via_swap = self.act_simplex(&swapped_first, &d2);
                    let swap_then_composite =
                        self.act(self.swap_cell(id), &d.after(&d2));
                    report.paths_checked += 1;
                    if via_swap != swap_then_composite {
                        report.problems.push(format!(
                            "path independence fails after swapping cell `{id}`, \
                             cofaces {cf:?} then {cf2:?}"
                        ));
                    }
                }
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gdelta::Branch;

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn point_presheaf_validates() {
        let id = CellId::new("pt");
        let mut cells = BTreeMap::new();
        cells.insert(id.clone(), Cell::new(obj(0, 0), "point"));
        let mut swaps = BTreeMap::new();
        swaps.insert(id.clone(), id.clone());
        let x = IsoSSet::new(cells, BTreeMap::new(), swaps).unwrap();
        assert!(x.validate().is_valid());
        assert_eq!(x.simplex_count(obj(0, 0)), 1);
        // Degenerate edges on one vertex: exactly one per degree.
        assert_eq!(x.simplex_count(obj(1, 0)), 1);
    }

    #[test]
    fn free_point_needs_swap_partner_or_fixed_point() {
        let id = CellId::new("pt");
        let mut cells = BTreeMap::new();
        cells.insert(id.clone(), Cell::new(obj(0, 0), "free point"));
        let swaps = BTreeMap::new();
        assert!(IsoSSet::new(cells, BTreeMap::new(), swaps).is_err());
    }

    #[test]
    fn missing_face_is_reported() {
        let edge = CellId::new("edge");
        let mut cells = BTreeMap::new();
        cells.insert(edge.clone(), Cell::new(obj(1, 0), "lone edge"));
        let mut swaps = BTreeMap::new();
        swaps.insert(edge.clone(), edge.clone());
        let err = IsoSSet::new(cells, BTreeMap::new(), swaps).unwrap_err();
        assert!(matches!(err, PresheafError::MissingFace { .. }));
    }

    #[test]
    fn legal_cofaces_split_at_glue_bound() {
        let cfs = legal_cofaces(obj(2, 1));
        assert_eq!(
            cfs,
            vec![
                Coface { index: 0, eps: 1 },
                Coface { index: 1, eps: 0 },
                Coface { index: 2, eps: 0 },
            ]
        );
        for cf in cfs {
            let d = coface_map(obj(2, 1), cf);
            assert_eq!(d.tgt(), obj(2, 1));
        }
        assert!(legal_cofaces(obj(0, 1)).is_empty());
    }

    #[test]
    fn degenerate_loop_presheaf_acts_correctly() {
        // One vertex, one loop edge whose both faces are the vertex.
        let v = CellId::new("v");
        let e = CellId::new("e");
        let mut cells = BTreeMap::new();
        cells.insert(v.clone(), Cell::new(obj(0, 0), "vertex"));
        cells.insert(e.clone(), Cell::new(obj(1, 0), "loop"));
        let vertex_simplex = Simplex {
            epi: GDeltaMap::identity(obj(0, 0)),
            cell: v.clone(),
        };
        let mut faces = BTreeMap::new();
        faces.insert(
            (e.clone(), Coface { index: 0, eps: 0 }),
            vertex_simplex.clone(),
        );
        faces.insert((e.clone(), Coface { index: 1, eps: 0 }), vertex_simplex);
        let mut swaps = BTreeMap::new();
        swaps.insert(v.clone(), v.clone());
        swaps.insert(e.clone(), e.clone());
        let x = IsoSSet::new(cells, faces, swaps).unwrap();
        assert!(x.validate().is_valid());
        // Two cells plus the degenerate edge on the vertex.
        assert_eq!(x.simplex_count(obj(1, 0)), 2);
        // Acting by a codegeneracy then a coface recovers the vertex.
        let s = GDeltaMap::codegeneracy(0, 0, 0, 0).unwrap();
        let degenerate = x.act(&v, &s);
        assert_eq!(degenerate.epi, s);
        let d0 = coface_map(obj(1, 0), Coface { index: 0, eps: 0 });
        let back = x.act_simplex(&degenerate, &d0);
        assert!(back.is_cell());
        assert_eq!(back.cell, v);
    }

    #[test]
    fn swapped_pair_of_free_points() {
        let a = CellId::new("a");
        let b = CellId::new("b");
        let mut cells = BTreeMap::new();
        cells.insert(a.clone(), Cell::new(obj(0, 1), "free point"));
        cells.insert(b.clone(), Cell::new(obj(0, 1), "its mirror"));
        let mut swaps = BTreeMap::new();
        swaps.insert(a.clone(), b.clone());
        swaps.insert(b.clone(), a.clone());
        let x = IsoSSet::new(cells, BTreeMap::new(), swaps).unwrap();
        assert!(x.validate().is_valid());
        let sigma = GDeltaMap::swap(obj(0, 1));
        let moved = x.act(&a, &sigma);
        assert!(moved.is_cell());
        assert_eq!(moved.cell, b);
        let _ = Branch::E;
    }
}
