//! Unique normal form for morphisms of the indexing category.
//!
//! Every morphism factors as (optional branch swap) after (cofaces, inserted
//! at strictly increasing target positions) after (codegeneracies, collapsing
//! at strictly decreasing source positions). The factorization is computed
//! purely on the underlying index map: a branch swap never moves indices, so
//! the swap flag can be read off the image of the first free vertex and the
//! rest recovered as in the classical simplex category, with each step
//! tagged by whether it happens below or above the running glue bound.

use std::collections::BTreeSet;

use super::map::{Coface, Codegen, GDeltaMap};
use super::object::{Branch, SimplexObject, Vertex};

/// Normal form of a morphism: `swap` applied last, `cofaces` in application
/// order (indices strictly increasing), `codegens` in application order
/// (indices strictly decreasing).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub src: SimplexObject,
    pub tgt: SimplexObject,
    pub swap: bool,
    pub codegens: Vec<Codegen>,
    pub cofaces: Vec<Coface>,
}

/// Computes the normal form of `theta`. Total on valid morphisms.
pub fn decompose(theta: &GDeltaMap) -> Decomposition {
    let src = theta.src();
    let tgt = theta.tgt();

    // All free source vertices twist the same way (their branch chain must
    // land in a single branch chain of the target), so one probe decides.
    let swap = src.k() >= 1 && theta.apply(Vertex::new(0, Branch::E)).branch == Branch::S;

    // The underlying index map is insensitive to the swap.
    let f: Vec<usize> = (0..=src.n())
        .map(|j| theta.apply(Vertex::new(j, Branch::E)).index)
        .collect();

    let mut codegens = Vec::new();
    let mut f_cur = f;
    let mut cur_k = src.k();
    while let Some(i) = (0..f_cur.len().saturating_sub(1))
        .rev()
        .find(|&j| f_cur[j] == f_cur[j + 1])
    {
        // A collapsed pair cannot straddle the glue bound: its two members
        // share an image, hence share the image's stabilizer.
        debug_assert!(i + 2 <= cur_k || i >= cur_k);
        let eps = u8::from(i + 2 <= cur_k);
        codegens.push(Codegen { index: i, eps });
        f_cur.remove(i);
        if eps == 1 {
            cur_k -= 1;
        }
    }

    let image: BTreeSet<usize> = f_cur.into_iter().collect();
    let cofaces = (0..=tgt.n())
        .filter(|i| !image.contains(i))
        .map(|i| Coface {
            index: i,
            eps: u8::from(i < tgt.k()),
        })
        .collect();

    Decomposition {
        src,
        tgt,
        swap,
        codegens,
        cofaces,
    }
}

impl Decomposition {
    /// The object between the collapsing and inserting halves.
    pub fn mid(&self) -> SimplexObject {
        let n = self.src.n() - self.codegens.len();
        let k = self.src.k() - self.codegens.iter().filter(|c| c.eps == 1).count();
        SimplexObject::new(n, k).expect("intermediate object of a valid normal form")
    }

    /// Composite of the codegeneracy half, `src -> mid`. Normal forms
    /// list only legal steps, so assembly cannot fail.
    pub fn epi_part(&self) -> GDeltaMap {
        let mut cur = GDeltaMap::identity(self.src);
        let (mut n, mut k) = (self.src.n(), self.src.k());
        for cg in &self.codegens {
            let step = GDeltaMap::codegeneracy(n - 1, k, cg.index, cg.eps)
                .expect("normal forms carry legal codegeneracies");
            cur = step.after(&cur);
            n -= 1;
            if cg.eps == 1 {
                k -= 1;
            }
        }
        cur
    }

    /// Composite of the coface half and the swap, `mid -> tgt`.
    pub fn mono_part(&self) -> GDeltaMap {
        let mid = self.mid();
        let mut cur = GDeltaMap::identity(mid);
        let (mut n, mut k) = (mid.n(), mid.k());
        for cf in &self.cofaces {
            let step = GDeltaMap::coface(n, k, cf.index, cf.eps)
                .expect("normal forms carry legal cofaces");
            cur = step.after(&cur);
            n += 1;
            if cf.eps == 1 {
                k += 1;
            }
        }
        if self.swap {
            cur = GDeltaMap::swap(self.tgt).after(&cur);
        }
        cur
    }

    /// Rebuilds the morphism from its parts.
    pub fn recompose(&self) -> GDeltaMap {
        self.mono_part().after(&self.epi_part())
    }

    /// True when the morphism is a plain composite of codegeneracies.
    pub fn is_pure_epi(&self) -> bool {
        !self.swap && self.cofaces.is_empty()
    }

    /// True when the morphism is a composite of cofaces, swap allowed.
    pub fn is_mono(&self) -> bool {
        self.codegens.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_decompose_to_themselves() {
        let d = GDeltaMap::coface(2, 1, 1, 1).unwrap();
        let dec = decompose(&d);
        assert!(!dec.swap);
        assert!(dec.codegens.is_empty());
        assert_eq!(dec.cofaces, vec![Coface { index: 1, eps: 1 }]);
        assert_eq!(dec.recompose(), d);

        let s = GDeltaMap::codegeneracy(3, 3, 0, 1).unwrap();
        let dec = decompose(&s);
        assert!(!dec.swap);
        assert_eq!(dec.codegens, vec![Codegen { index: 0, eps: 1 }]);
        assert!(dec.cofaces.is_empty());
        assert_eq!(dec.recompose(), s);
    }

    #[test]
    fn swap_is_detected_and_absorbed() {
        let obj = SimplexObject::new(2, 2).unwrap();
        let s = GDeltaMap::swap(obj);
        let dec = decompose(&s);
        assert!(dec.swap);
        assert!(dec.codegens.is_empty() && dec.cofaces.is_empty());
        assert_eq!(dec.recompose(), s);

        // At glue bound zero the swap is the identity and must not be flagged.
        let obj0 = SimplexObject::new(2, 0).unwrap();
        assert!(!decompose(&GDeltaMap::swap(obj0)).swap);
    }

    #[test]
    fn triple_collapse_emits_strictly_decreasing_positions() {
        let obj = SimplexObject::new(2, 0).unwrap();
        let pt = SimplexObject::new(0, 0).unwrap();
        let theta = GDeltaMap::make_map(
            obj,
            pt,
            vec![
                Vertex::new(0, Branch::E),
                Vertex::new(0, Branch::E),
                Vertex::new(0, Branch::E),
            ],
        )
        .unwrap();
        let dec = decompose(&theta);
        assert_eq!(
            dec.codegens,
            vec![Codegen { index: 1, eps: 0 }, Codegen { index: 0, eps: 0 }]
        );
        assert_eq!(dec.recompose(), theta);
    }

    #[test]
    fn mixed_normal_form_round_trips() {
        // [2]_1 -> [2]_2 collapsing the fixed tail and re-inserting freely.
        let src = SimplexObject::new(2, 1).unwrap();
        let tgt = SimplexObject::new(2, 2).unwrap();
        let theta = GDeltaMap::make_map(
            src,
            tgt,
            vec![
                Vertex::new(1, Branch::S),
                Vertex::new(2, Branch::E),
                Vertex::new(2, Branch::E),
            ],
        )
        .unwrap();
        let dec = decompose(&theta);
        assert!(dec.swap);
        assert_eq!(dec.codegens, vec![Codegen { index: 1, eps: 0 }]);
        assert_eq!(dec.recompose(), theta);
    }
}
