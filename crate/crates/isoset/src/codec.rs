//! JSON interchange for presheaves and morphisms.
//!
//! The document format is canonical: maps are keyed by sorted cell names,
//! struct fields appear in a fixed order, and provenance notes are left
//! out, so two documents are byte-identical exactly when the presheaves
//! they describe are structurally equal. Face tables are keyed by
//! generator names (`d0_i`, `d1_i`, and `sigma` for the swap partner);
//! morphisms of the indexing category are stored as their branch-`e`
//! vertex images. Decoding always re-runs the structural validation, so a
//! parsed document is as trustworthy as a constructed object.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gdelta::{Branch, Coface, GDeltaMap, SimplexObject, Vertex};
use crate::presheaf::{
    legal_cofaces, Cell, CellId, IsoSSet, PresheafError, PresheafMap, Simplex,
};

/// Format tag carried by every document.
pub const FORMAT: &str = "ISOV-SSET";
/// Current document version.
pub const VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognized format tag `{0}`")]
    WrongFormat(String),
    #[error("unsupported version {0}")]
    WrongVersion(u64),
    #[error("degree [{0},{1}] is out of range (need k <= n + 1)")]
    BadDegree(usize, usize),
    #[error("unknown branch tag `{0}` (expected \"e\" or \"s\")")]
    BadBranch(String),
    #[error("bad face key `{0}` (expected d0_<i>, d1_<i>, or sigma)")]
    BadFaceKey(String),
    #[error("morphism data is invalid: {0}")]
    BadMap(String),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}

/// A morphism of the indexing category: endpoints plus the images of the
/// branch-`e` vertices in source order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub src: [usize; 2],
    pub tgt: [usize; 2],
    pub images: Vec<(usize, String)>,
}

fn branch_tag(b: Branch) -> String {
    match b {
        Branch::E => "e".to_string(),
        Branch::S => "s".to_string(),
    }
}

fn parse_branch(tag: &str) -> Result<Branch, CodecError> {
    match tag {
        "e" => Ok(Branch::E),
        "s" => Ok(Branch::S),
        other => Err(CodecError::BadBranch(other.to_string())),
    }
}

fn parse_degree(pair: [usize; 2]) -> Result<SimplexObject, CodecError> {
    SimplexObject::new(pair[0], pair[1]).map_err(|_| CodecError::BadDegree(pair[0], pair[1]))
}

pub fn map_to_doc(f: &GDeltaMap) -> MapDoc {
    MapDoc {
        src: [f.src().n(), f.src().k()],
        tgt: [f.tgt().n(), f.tgt().k()],
        images: f
            .e_images()
            .iter()
            .map(|v| (v.index, branch_tag(v.branch)))
            .collect(),
    }
}

pub fn map_from_doc(doc: &MapDoc) -> Result<GDeltaMap, CodecError> {
    let src = parse_degree(doc.src)?;
    let tgt = parse_degree(doc.tgt)?;
    let images = doc
        .images
        .iter()
        .map(|(ix, tag)| Ok(Vertex::new(*ix, parse_branch(tag)?)))
        .collect::<Result<Vec<_>, CodecError>>()?;
    GDeltaMap::make_map(src, tgt, images).map_err(|e| CodecError::BadMap(e.to_string()))
}

/// Canonical JSON for one morphism.
pub fn encode_map(f: &GDeltaMap) -> String {
    let mut text = serde_json::to_string_pretty(&map_to_doc(f)).expect("morphisms serialize");
    text.push('\n');
    text
}

pub fn decode_map(text: &str) -> Result<GDeltaMap, CodecError> {
    map_from_doc(&serde_json::from_str(text)?)
}

/// A simplex reference: a cell name and the collapsing surjection onto it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplexDoc {
    pub cell: String,
    pub epi: MapDoc,
}

/// One entry of a cell's face table: either a face simplex or, under the
/// key `sigma`, the name of the swap partner.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FaceEntry {
    Swap(String),
    Face(SimplexDoc),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellDoc {
    pub degree: [usize; 2],
    /// Keys `d0_<i>` and `d1_<i>` carry face simplices, `sigma` the swap
    /// partner's name.
    pub faces: BTreeMap<String, FaceEntry>,
    /// Tolerated on input, never written by [`encode`]: equality of
    /// presheaves ignores provenance, and the canonical bytes must too.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// The interchange document for one finite presheaf.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Document {
    pub format: String,
    pub version: u64,
    /// Truncation bound: the largest cell dimension present.
    pub max_n: Option<usize>,
    pub cells: BTreeMap<String, CellDoc>,
}

fn face_key(cf: Coface) -> String {
    format!("d{}_{}", cf.eps, cf.index)
}

fn parse_face_key(key: &str) -> Result<Coface, CodecError> {
    let bad = || CodecError::BadFaceKey(key.to_string());
    let rest = key.strip_prefix('d').ok_or_else(bad)?;
    let (eps, index) = rest.split_once('_').ok_or_else(bad)?;
    let eps: u8 = eps.parse().map_err(|_| bad())?;
    if eps > 1 {
        return Err(bad());
    }
    let index: usize = index.parse().map_err(|_| bad())?;
    Ok(Coface { index, eps })
}

pub fn to_document(x: &IsoSSet) -> Document {
    let mut cells = BTreeMap::new();
    for u in x.cell_ids() {
        let deg = x.degree_of(u);
        let mut faces = BTreeMap::new();
        for cf in legal_cofaces(deg) {
            let s = x.face(u, cf);
            faces.insert(
                face_key(cf),
                FaceEntry::Face(SimplexDoc {
                    cell: s.cell.to_string(),
                    epi: map_to_doc(&s.epi),
                }),
            );
        }
        faces.insert("sigma".to_string(), FaceEntry::Swap(x.swap_cell(u).to_string()));
        cells.insert(
            u.to_string(),
            CellDoc {
                degree: [deg.n(), deg.k()],
                faces,
                provenance: None,
            },
        );
    }
    Document {
        format: FORMAT.to_string(),
        version: VERSION,
        max_n: x.max_cell_dim(),
        cells,
    }
}

pub fn from_document(doc: &Document) -> Result<IsoSSet, CodecError> {
    if doc.format != FORMAT {
        return Err(CodecError::WrongFormat(doc.format.clone()));
    }
    if doc.version != VERSION {
        return Err(CodecError::WrongVersion(doc.version));
    }
    let mut cells = BTreeMap::new();
    let mut faces = BTreeMap::new();
    let mut swaps = BTreeMap::new();
    for (name, cd) in &doc.cells {
        let deg = parse_degree(cd.degree)?;
        let id = CellId::new(name.clone());
        let provenance = cd.provenance.clone().unwrap_or_default();
        cells.insert(id.clone(), Cell::new(deg, provenance));
        for (key, entry) in &cd.faces {
            match entry {
                FaceEntry::Swap(partner) if key == "sigma" => {
                    swaps.insert(id.clone(), CellId::new(partner.clone()));
                }
                FaceEntry::Face(sd) => {
                    let cf = parse_face_key(key)?;
                    faces.insert(
                        (id.clone(), cf),
                        Simplex {
                            epi: map_from_doc(&sd.epi)?,
                            cell: CellId::new(sd.cell.clone()),
                        },
                    );
                }
                FaceEntry::Swap(_) => return Err(CodecError::BadFaceKey(key.clone())),
            }
        }
    }
    Ok(IsoSSet::new(cells, faces, swaps)?)
}

/// Canonical JSON for one presheaf. Byte equality of outputs coincides
/// with structural equality of inputs.
pub fn encode(x: &IsoSSet) -> String {
    let mut text = serde_json::to_string_pretty(&to_document(x)).expect("documents serialize");
    text.push('\n');
    text
}

/// Parses and fully re-validates a document.
pub fn decode(text: &str) -> Result<IsoSSet, CodecError> {
    from_document(&serde_json::from_str(text)?)
}

/// Format tag for presheaf morphism files.
pub const MAP_FORMAT: &str = "ISOV-SSET-HOM";

/// A morphism of presheaves: both endpoint documents plus the image
/// simplex of every source cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafMapDoc {
    pub format: String,
    pub version: u64,
    pub src: Document,
    pub tgt: Document,
    pub images: BTreeMap<String, SimplexDoc>,
}

pub fn presheaf_map_to_doc(f: &PresheafMap) -> PresheafMapDoc {
    let images = f
        .assignment()
        .iter()
        .map(|(id, s)| {
            (
                id.to_string(),
                SimplexDoc {
                    cell: s.cell.to_string(),
                    epi: map_to_doc(&s.epi),
                },
            )
        })
        .collect();
    PresheafMapDoc {
        format: MAP_FORMAT.to_string(),
        version: VERSION,
        src: to_document(f.src()),
        tgt: to_document(f.tgt()),
        images,
    }
}

pub fn presheaf_map_from_doc(doc: &PresheafMapDoc) -> Result<PresheafMap, CodecError> {
    if doc.format != MAP_FORMAT {
        return Err(CodecError::WrongFormat(doc.format.clone()));
    }
    if doc.version != VERSION {
        return Err(CodecError::WrongVersion(doc.version));
    }
    let src = from_document(&doc.src)?;
    let tgt = from_document(&doc.tgt)?;
    let assignment = doc
        .images
        .iter()
        .map(|(name, sd)| {
            Ok((
                CellId::new(name.clone()),
                Simplex {
                    epi: map_from_doc(&sd.epi)?,
                    cell: CellId::new(sd.cell.clone()),
                },
            ))
        })
        .collect::<Result<BTreeMap<_, _>, CodecError>>()?;
    Ok(PresheafMap::new(src, tgt, assignment)?)
}

pub fn encode_presheaf_map(f: &PresheafMap) -> String {
    let mut text =
        serde_json::to_string_pretty(&presheaf_map_to_doc(f)).expect("morphisms serialize");
    text.push('\n');
    text
}

pub fn decode_presheaf_map(text: &str) -> Result<PresheafMap, CodecError> {
    presheaf_map_from_doc(&serde_json::from_str(text)?)
}

/// Format tag for cylinder bundle files.
pub const BUNDLE_FORMAT: &str = "ISOV-SSET-CYL";

/// A cylinder on a base object, in the shape the cylinder axioms use:
/// the base X, the coproduct of the two ends X ⊔ X, and the total object,
/// joined by the boundary map (both ends at once) and the projection back
/// to the base. Three presheaf blocks, two morphism blocks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleDoc {
    pub format: String,
    pub version: u64,
    pub base: Document,
    pub ends: Document,
    pub total: Document,
    pub boundary: BTreeMap<String, SimplexDoc>,
    pub projection: BTreeMap<String, SimplexDoc>,
}

fn image_table(f: &PresheafMap) -> BTreeMap<String, SimplexDoc> {
    f.assignment()
        .iter()
        .map(|(id, s)| {
            (
                id.to_string(),
                SimplexDoc {
                    cell: s.cell.to_string(),
                    epi: map_to_doc(&s.epi),
                },
            )
        })
        .collect()
}

fn parse_image_table(
    table: &BTreeMap<String, SimplexDoc>,
) -> Result<BTreeMap<CellId, Simplex>, CodecError> {
    table
        .iter()
        .map(|(name, sd)| {
            Ok((
                CellId::new(name.clone()),
                Simplex {
                    epi: map_from_doc(&sd.epi)?,
                    cell: CellId::new(sd.cell.clone()),
                },
            ))
        })
        .collect()
}

pub fn bundle_to_doc(b: &crate::cylinder::CylinderBundle) -> BundleDoc {
    let pair = crate::presheaf::coproduct(&b.base, &b.base);
    let mut assignment = BTreeMap::new();
    for u in b.base.cell_ids() {
        let left = pair.from_x.apply_cell(u);
        let right = pair.from_y.apply_cell(u);
        debug_assert!(left.epi.is_identity() && right.epi.is_identity());
        assignment.insert(left.cell.clone(), b.d0.apply_cell(u).clone());
        assignment.insert(right.cell.clone(), b.d1.apply_cell(u).clone());
    }
    let boundary = PresheafMap::new(pair.object.clone(), b.total.clone(), assignment)
        .expect("the two end inclusions assemble into one map from the coproduct");
    BundleDoc {
        format: BUNDLE_FORMAT.to_string(),
        version: VERSION,
        base: to_document(&b.base),
        ends: to_document(&pair.object),
        total: to_document(&b.total),
        boundary: image_table(&boundary),
        projection: image_table(&b.rho),
    }
}

/// A decoded and re-validated bundle file.
#[derive(Debug, Clone)]
pub struct BundleFile {
    pub base: IsoSSet,
    pub ends: IsoSSet,
    pub total: IsoSSet,
    pub boundary: PresheafMap,
    pub projection: PresheafMap,
}

pub fn bundle_from_doc(doc: &BundleDoc) -> Result<BundleFile, CodecError> {
    if doc.format != BUNDLE_FORMAT {
        return Err(CodecError::WrongFormat(doc.format.clone()));
    }
    if doc.version != VERSION {
        return Err(CodecError::WrongVersion(doc.version));
    }
    let base = from_document(&doc.base)?;
    let ends = from_document(&doc.ends)?;
    let total = from_document(&doc.total)?;
    let boundary = PresheafMap::new(ends.clone(), total.clone(), parse_image_table(&doc.boundary)?)?;
    let projection = PresheafMap::new(total.clone(), base.clone(), parse_image_table(&doc.projection)?)?;
    Ok(BundleFile {
        base,
        ends,
        total,
        boundary,
        projection,
    })
}

pub fn encode_bundle(b: &crate::cylinder::CylinderBundle) -> String {
    let mut text = serde_json::to_string_pretty(&bundle_to_doc(b)).expect("bundles serialize");
    text.push('\n');
    text
}

pub fn decode_bundle(text: &str) -> Result<BundleFile, CodecError> {
    bundle_from_doc(&serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::cylinder;
    use crate::presheaf::{inclusion, representable, sub_from_cells, yoneda_map};
    use crate::standard::{boundary, horn};

    fn obj(n: usize, k: usize) -> SimplexObject {
        SimplexObject::new(n, k).unwrap()
    }

    #[test]
    fn presheaves_survive_the_round_trip() {
        let samples = vec![
            IsoSSet::empty(),
            representable(obj(0, 0)),
            representable(obj(2, 1)),
            boundary(obj(2, 2)),
            horn(obj(2, 1), 1).unwrap(),
            cylinder(&representable(obj(1, 1))).total,
        ];
        for x in samples {
            let text = encode(&x);
            let back = decode(&text).unwrap();
            assert!(back == x);
            assert_eq!(encode(&back), text);
        }
    }

    #[test]
    fn canonical_bytes_ignore_provenance() {
        let rep = representable(obj(2, 1));
        let all = rep.cell_ids().cloned().collect();
        let rebuilt = sub_from_cells(&rep, &all).unwrap();
        assert!(rebuilt == rep);
        assert_eq!(encode(&rebuilt), encode(&rep));
    }

    #[test]
    fn morphism_documents_match_the_expected_shape() {
        let d = GDeltaMap::coface(2, 1, 1, 0).unwrap();
        let doc = map_to_doc(&d);
        assert_eq!(doc.src, [2, 1]);
        assert_eq!(doc.tgt, [3, 1]);
        assert_eq!(
            doc.images,
            vec![
                (0, "e".to_string()),
                (2, "e".to_string()),
                (3, "e".to_string())
            ]
        );
        let back = decode_map(&encode_map(&d)).unwrap();
        assert_eq!(back, d);

        let sw = GDeltaMap::swap(obj(1, 1));
        assert_eq!(decode_map(&encode_map(&sw)).unwrap(), sw);
    }

    #[test]
    fn presheaf_maps_survive_the_round_trip() {
        let bd = boundary(obj(2, 1));
        let rep = representable(obj(2, 1));
        let inc = inclusion(&bd, &rep).unwrap();
        let back = decode_presheaf_map(&encode_presheaf_map(&inc)).unwrap();
        assert!(back == inc);

        let y = yoneda_map(&GDeltaMap::coface(1, 1, 1, 1).unwrap());
        let back = decode_presheaf_map(&encode_presheaf_map(&y)).unwrap();
        assert!(back == y);
    }

    #[test]
    fn bundles_survive_the_round_trip() {
        let b = cylinder(&boundary(obj(1, 1)));
        let text = encode_bundle(&b);
        let back = decode_bundle(&text).unwrap();
        assert!(back.base == b.base);
        assert!(back.total == b.total);
        assert!(back.projection == b.rho);
        // Both end inclusions are recoverable as restrictions of the
        // boundary map along the coproduct legs.
        let pair = crate::presheaf::coproduct(&b.base, &b.base);
        let d0 = back.boundary.compose(&pair.from_x).unwrap();
        let d1 = back.boundary.compose(&pair.from_y).unwrap();
        assert!(d0 == b.d0);
        assert!(d1 == b.d1);
    }

    #[test]
    fn corrupted_documents_are_rejected() {
        let good = encode(&representable(obj(1, 1)));

        let wrong_format = good.replace("ISOV-SSET", "SOMETHING");
        assert!(matches!(
            decode(&wrong_format),
            Err(CodecError::WrongFormat(_))
        ));

        let wrong_version = good.replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            decode(&wrong_version),
            Err(CodecError::WrongVersion(9))
        ));

        // Point one face at the wrong cell: structural validation fails.
        let broken = good.replace("\"cell\": \"1e\"", "\"cell\": \"0e\"");
        assert!(decode(&broken).is_err());

        assert!(matches!(
            parse_face_key("d7_0"),
            Err(CodecError::BadFaceKey(_))
        ));
        assert!(matches!(parse_branch("x"), Err(CodecError::BadBranch(_))));
    }
}
