//! Exhaustive hom-set enumeration for the indexing category.
//!
//! A morphism is a monotone index map that respects the stabilizer split,
//! together with an optional branch twist on the free part. Enumeration
//! therefore walks nondecreasing sequences over the two index bands
//! independently and attaches the twisted variant whenever the source has a
//! free vertex for the twist to act on.

use super::map::GDeltaMap;
use super::object::{Branch, SimplexObject, Vertex};

fn nondecreasing(len: usize, lo: usize, hi_inclusive: Option<usize>) -> Vec<Vec<usize>> {
    let Some(hi) = hi_inclusive else {
        // Empty codomain band: only the empty sequence exists.
        return if len == 0 { vec![Vec::new()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(cur: &mut Vec<usize>, len: usize, lo: usize, hi: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().map_or(lo, |&v| v);
        for next in start..=hi {
            cur.push(next);
            rec(cur, len, lo, hi, out);
            cur.pop();
        }
    }
    if lo > hi {
        return if len == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    rec(&mut cur, len, lo, hi, &mut out);
    out
}

/// All morphisms `src -> tgt`, in a deterministic order.
pub fn enumerate_hom(src: SimplexObject, tgt: SimplexObject) -> Vec<GDeltaMap> {
    let (n, l) = (src.n(), src.k());
    let (m, k) = (tgt.n(), tgt.k());

    // Free band: positions 0..l map into indices 0..k. Fixed band:
    // positions l..=n map into indices k..=m.
    let free_band = nondecreasing(l, 0, k.checked_sub(1));
    let fixed_len = (n + 1).saturating_sub(l);
    let fixed_band = if k > m {
        // Target without fixed vertices: legal only if the source has none.
        if fixed_len == 0 { vec![Vec::new()] } else { Vec::new() }
    } else {
        nondecreasing(fixed_len, k, Some(m))
    };

    let mut out = Vec::new();
    for free in &free_band {
        for fixed in &fixed_band {
            for twist in [false, true] {
                if twist && l == 0 {
                    break;
                }
                let free_branch = if twist { Branch::S } else { Branch::E };
                let e_images: Vec<Vertex> = free
                    .iter()
                    .map(|&i| Vertex::new(i, free_branch))
                    .chain(fixed.iter().map(|&i| Vertex::new(i, Branch::E)))
                    .collect();
                out.push(
                    GDeltaMap::make_map(src, tgt, e_images)
                        .expect("band-respecting monotone images form a morphism"),
                );
            }
        }
    }
    out
}

/// All monomorphisms `src -> tgt`.
pub fn enumerate_monos(src: SimplexObject, tgt: SimplexObject) -> Vec<GDeltaMap> {
    enumerate_hom(src, tgt)
        .into_iter()
        .filter(GDeltaMap::is_mono)
        .collect()
}

/// All composites of codegeneracies `src -> tgt`: the branch-preserving
/// surjections.
pub fn enumerate_pure_epis(src: SimplexObject, tgt: SimplexObject) -> Vec<GDeltaMap> {
    enumerate_hom(src, tgt)
        .into_iter()
        .filter(|f| f.is_epi() && f.is_branch_preserving())
        .collect()
}

/// All right inverses of `f`: maps `s` with `f` after `s` the identity.
pub fn sections(f: &GDeltaMap) -> Vec<GDeltaMap> {
    let id = GDeltaMap::identity(f.tgt());
    enumerate_hom(f.tgt(), f.src())
        .into_iter()
        .filter(|s| f.compose(s).map(|c| c == id).unwrap_or(false))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endomorphisms_of_the_free_point() {
        // [0]_1 has one free pair; its endomorphisms are identity and swap.
        let obj = SimplexObject::new(0, 1).unwrap();
        let maps = enumerate_hom(obj, obj);
        assert_eq!(maps.len(), 2);
        assert!(maps.contains(&GDeltaMap::identity(obj)));
        assert!(maps.contains(&GDeltaMap::swap(obj)));
    }

    #[test]
    fn stabilizers_must_match_exactly() {
        // No map may move a vertex between the free and fixed strata, so the
        // two kinds of point admit no maps in either direction.
        let fixed = SimplexObject::new(0, 0).unwrap();
        let free = SimplexObject::new(0, 1).unwrap();
        assert!(enumerate_hom(fixed, free).is_empty());
        assert!(enumerate_hom(free, fixed).is_empty());
        // Mixed target: each point includes in its own stratum.
        let seg = SimplexObject::new(1, 1).unwrap();
        assert_eq!(enumerate_hom(fixed, seg).len(), 1);
        assert_eq!(enumerate_hom(free, seg).len(), 2);
    }

    #[test]
    fn every_codegeneracy_has_a_section() {
        let s = GDeltaMap::codegeneracy(2, 1, 1, 0).unwrap();
        let secs = sections(&s);
        assert!(!secs.is_empty());
        for sec in &secs {
            assert!(sec.is_mono());
        }
    }

    #[test]
    fn mono_count_matches_twist_structure() {
        // Monos [1]_1 -> [2]_1 pick the free pair's image (forced to the
        // single free index, twisted or not) and one of two fixed targets.
        let src = SimplexObject::new(1, 1).unwrap();
        let tgt = SimplexObject::new(2, 1).unwrap();
        assert_eq!(enumerate_monos(src, tgt).len(), 4);
    }
}
