//! Exhaustive verification of the generator relations.
//!
//! The indexing category is presented by cofaces, codegeneracies and the
//! branch swap subject to four relation families: coface interchange,
//! codegeneracy interchange, the mixed coface/codegeneracy rules (including
//! the two identity cases), and naturality of the swap. The checker
//! instantiates every family at every index typing where both sides of the
//! equation are defined, up to a dimension bound, and compares the composite
//! morphisms on the nose.

use super::map::GDeltaMap;
use super::object::SimplexObject;

/// One instantiated relation, with the verdict of the comparison.
#[derive(Debug, Clone)]
pub struct RelationInstance {
    /// Relation family: 2 coface interchange, 3 codegeneracy interchange,
    /// 4 mixed, 5 swap naturality.
    pub family: u8,
    /// Common source of both composites.
    pub source: SimplexObject,
    /// Human-readable rendering of the instantiated equation.
    pub detail: String,
    pub holds: bool,
}

/// Outcome of a full relations sweep.
#[derive(Debug, Clone)]
pub struct RelationsReport {
    pub max_n: usize,
    pub instances: Vec<RelationInstance>,
}

impl RelationsReport {
    pub fn failures(&self) -> Vec<&RelationInstance> {
        self.instances.iter().filter(|i| !i.holds).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.instances.iter().all(|i| i.holds)
    }

    pub fn family_count(&self, family: u8) -> usize {
        self.instances.iter().filter(|i| i.family == family).count()
    }
}

// Generator constructors keyed by the object the generator is applied to,
// returning None on illegal indices so typing can be probed.
fn coface_from(obj: SimplexObject, i: usize, eps: u8) -> Option<GDeltaMap> {
    GDeltaMap::coface(obj.n(), obj.k(), i, eps).ok()
}

fn codegen_from(obj: SimplexObject, i: usize, eps: u8) -> Option<GDeltaMap> {
    if obj.n() == 0 {
        return None;
    }
    GDeltaMap::codegeneracy(obj.n() - 1, obj.k(), i, eps).ok()
}

fn gen_name(kind: char, eps: u8, i: usize) -> String {
    format!("{kind}{eps}^{i}")
}

/// Verifies every relation instance whose source dimension is at most
/// `max_n`. Failures are entries in the report, not errors.
pub fn check_cosimplicial_relations(max_n: usize) -> RelationsReport {
    let mut instances = Vec::new();

    for n in 0..=max_n {
        for k in 0..=n + 1 {
            let src = SimplexObject::new(n, k).expect("k <= n + 1");
            check_coface_interchange(src, &mut instances);
            check_codegen_interchange(src, &mut instances);
            check_mixed(src, &mut instances);
            check_swap_naturality(src, &mut instances);
        }
    }

    RelationsReport { max_n, instances }
}

/// Family 2: `d^j d^i = d^i d^{j-1}` for `i < j`, same side of the glue
/// bound on both factors.
fn check_coface_interchange(src: SimplexObject, out: &mut Vec<RelationInstance>) {
    let n = src.n();
    for eps in [0u8, 1u8] {
        for i in 0..=n + 1 {
            for j in (i + 1)..=n + 2 {
                let Some(lhs_inner) = coface_from(src, i, eps) else {
                    continue;
                };
                let mid_l = lhs_inner.tgt();
                let Some(lhs_outer) = coface_from(mid_l, j, eps) else {
                    continue;
                };
                let Some(rhs_inner) = coface_from(src, j - 1, eps) else {
                    continue;
                };
                let Some(rhs_outer) = coface_from(rhs_inner.tgt(), i, eps) else {
                    continue;
                };
                let lhs = lhs_outer.compose(&lhs_inner).expect("typed above");
                let rhs = rhs_outer.compose(&rhs_inner).expect("typed above");
                out.push(RelationInstance {
                    family: 2,
                    source: src,
                    detail: format!(
                        "{} . {} = {} . {} on {}",
                        gen_name('d', eps, j),
                        gen_name('d', eps, i),
                        gen_name('d', eps, i),
                        gen_name('d', eps, j - 1),
                        src
                    ),
                    holds: lhs == rhs,
                });
            }
        }
    }
}

/// Family 3: `s^j s^i = s^{i-1} s^j` for `j < i`, same side of the glue
/// bound on both factors.
fn check_codegen_interchange(src: SimplexObject, out: &mut Vec<RelationInstance>) {
    let n = src.n();
    if n < 2 {
        return;
    }
    for eps in [0u8, 1u8] {
        for j in 0..n {
            for i in (j + 1)..n {
                let Some(lhs_inner) = codegen_from(src, i, eps) else {
                    continue;
                };
                let Some(lhs_outer) = codegen_from(lhs_inner.tgt(), j, eps) else {
                    continue;
                };
                let Some(rhs_inner) = codegen_from(src, j, eps) else {
                    continue;
                };
                let Some(rhs_outer) = codegen_from(rhs_inner.tgt(), i - 1, eps) else {
                    continue;
                };
                let lhs = lhs_outer.compose(&lhs_inner).expect("typed above");
                let rhs = rhs_outer.compose(&rhs_inner).expect("typed above");
                out.push(RelationInstance {
                    family: 3,
                    source: src,
                    detail: format!(
                        "{} . {} = {} . {} on {}",
                        gen_name('s', eps, j),
                        gen_name('s', eps, i),
                        gen_name('s', eps, i - 1),
                        gen_name('s', eps, j),
                        src
                    ),
                    holds: lhs == rhs,
                });
            }
        }
    }
}

/// Family 4: `s^j d^i` collapses to a coface-after-codegeneracy, or to the
/// identity when the inserted position is immediately re-collapsed.
fn check_mixed(src: SimplexObject, out: &mut Vec<RelationInstance>) {
    let n = src.n();
    for eps in [0u8, 1u8] {
        for i in 0..=n + 1 {
            let Some(d) = coface_from(src, i, eps) else {
                continue;
            };
            let mid = d.tgt();
            for j in 0..=n {
                let Some(s) = codegen_from(mid, j, eps) else {
                    continue;
                };
                let lhs = s.compose(&d).expect("typed above");
                let (rhs, rhs_name) = if i == j || i == j + 1 {
                    (Some(GDeltaMap::identity(src)), "id".to_string())
                } else if i < j {
                    let inner = codegen_from(src, j - 1, eps);
                    let pair = inner.and_then(|inner| {
                        let outer = coface_from(inner.tgt(), i, eps)?;
                        outer.compose(&inner).ok()
                    });
                    (
                        pair,
                        format!("{} . {}", gen_name('d', eps, i), gen_name('s', eps, j - 1)),
                    )
                } else {
                    let inner = codegen_from(src, j, eps);
                    let pair = inner.and_then(|inner| {
                        let outer = coface_from(inner.tgt(), i - 1, eps)?;
                        outer.compose(&inner).ok()
                    });
                    (
                        pair,
                        format!("{} . {}", gen_name('d', eps, i - 1), gen_name('s', eps, j)),
                    )
                };
                let Some(rhs) = rhs else {
                    continue;
                };
                out.push(RelationInstance {
                    family: 4,
                    source: src,
                    detail: format!(
                        "{} . {} = {} on {}",
                        gen_name('s', eps, j),
                        gen_name('d', eps, i),
                        rhs_name,
                        src
                    ),
                    holds: lhs == rhs,
                });
            }
        }
    }
}

/// Family 5: every generator commutes with the branch swap, and the swap is
/// an involution.
fn check_swap_naturality(src: SimplexObject, out: &mut Vec<RelationInstance>) {
    let n = src.n();
    let sigma_src = GDeltaMap::swap(src);

    out.push(RelationInstance {
        family: 5,
        source: src,
        detail: format!("sigma . sigma = id on {src}"),
        holds: sigma_src.compose(&sigma_src).expect("endomorphism")
            == GDeltaMap::identity(src),
    });

    for eps in [0u8, 1u8] {
        for i in 0..=n + 1 {
            if let Some(d) = coface_from(src, i, eps) {
                let sigma_tgt = GDeltaMap::swap(d.tgt());
                let lhs = d.compose(&sigma_src).expect("typed above");
                let rhs = sigma_tgt.compose(&d).expect("typed above");
                out.push(RelationInstance {
                    family: 5,
                    source: src,
                    detail: format!("{} . sigma = sigma . {} on {}", gen_name('d', eps, i), gen_name('d', eps, i), src),
                    holds: lhs == rhs,
                });
            }
        }
        for i in 0..n {
            if let Some(s) = codegen_from(src, i, eps) {
                let sigma_tgt = GDeltaMap::swap(s.tgt());
                let lhs = s.compose(&sigma_src).expect("typed above");
                let rhs = sigma_tgt.compose(&s).expect("typed above");
                out.push(RelationInstance {
                    family: 5,
                    source: src,
                    detail: format!("{} . sigma = sigma . {} on {}", gen_name('s', eps, i), gen_name('s', eps, i), src),
                    holds: lhs == rhs,
                });
            }
        }
    }
}
