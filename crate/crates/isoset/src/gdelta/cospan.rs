//! Completing cospans under a fixed object mapped into prisms.
//!
//! Work in the comma category whose objects are pairs of an indexing object
//! `[p]_q` and an isovariant poset map from a fixed base object into the
//! prism over `[p]_q`. A cospan here is two prism morphisms into a common
//! prism whose legs from the base agree. Every such cospan admits a
//! commuting square: take the fiber product of the two prism morphisms,
//! pair the legs into it, and factor that pairing through the prism over
//! the base itself using the level-zero inclusion and the projection.

use super::gposet::{
    fiber_product, thicken_level, thicken_map, thicken_poset, thicken_projection, to_gposet,
    FinGPoset, GPosetMap,
};
use super::map::GDeltaMap;
use super::object::SimplexObject;
use super::GDeltaError;

/// A cospan over a base object: two morphisms `f0: [p]_q -> [a]_b` and
/// `g0: [m]_l -> [a]_b` of the indexing category, plus legs from the base
/// into the three prisms, commuting with the thickened morphisms.
#[derive(Debug, Clone)]
pub struct ThickenedCospan {
    pub base: SimplexObject,
    pub f0: GDeltaMap,
    pub g0: GDeltaMap,
    /// Leg `base -> th(src f0)`.
    pub alpha: GPosetMap,
    /// Leg `base -> th(src g0)`.
    pub gamma: GPosetMap,
    /// Leg `base -> th(tgt)`, equal to both composites.
    pub beta: GPosetMap,
}

impl ThickenedCospan {
    /// Builds the cospan from the two morphisms and the first two legs; the
    /// common leg into the target prism is computed and cross-checked.
    pub fn new(
        base: SimplexObject,
        f0: GDeltaMap,
        g0: GDeltaMap,
        alpha: GPosetMap,
        gamma: GPosetMap,
    ) -> Result<Self, GDeltaError> {
        if f0.tgt() != g0.tgt() {
            return Err(GDeltaError::InvalidCospan(
                "the two morphisms do not share a target".into(),
            ));
        }
        let base_poset = to_gposet(base);
        if *alpha.src() != base_poset || *gamma.src() != base_poset {
            return Err(GDeltaError::InvalidCospan(
                "legs must start at the base object".into(),
            ));
        }
        if *alpha.tgt() != thicken_poset(f0.src()) || *gamma.tgt() != thicken_poset(g0.src()) {
            return Err(GDeltaError::InvalidCospan(
                "legs must land in the prisms over the morphism sources".into(),
            ));
        }
        let beta = thicken_map(&f0).compose(&alpha)?;
        let other = thicken_map(&g0).compose(&gamma)?;
        if beta != other {
            return Err(GDeltaError::InvalidCospan(
                "the two legs do not agree in the target prism".into(),
            ));
        }
        Ok(ThickenedCospan {
            base,
            f0,
            g0,
            alpha,
            gamma,
            beta,
        })
    }
}

/// A verified commuting square completing a cospan. The cone object is the
/// prism over the base itself.
#[derive(Debug, Clone)]
pub struct CospanCompletion {
    /// The object whose prism carries the cone; always the cospan's base.
    pub cone_obj: SimplexObject,
    /// Level-zero inclusion `base -> th(base)`.
    pub delta: GPosetMap,
    /// `th(base) -> th(src f0)`.
    pub phi: GPosetMap,
    /// `th(base) -> th(src g0)`.
    pub psi: GPosetMap,
    /// Fiber product of the two thickened morphisms, kept for inspection.
    pub fiber: FinGPoset,
}

/// Completes a cospan to a commuting square. The fiber product `P` of the
/// thickened morphisms receives a unique pairing `h` of the legs; `h`
/// factors through the prism over the base as `h` after the projection,
/// and the two fiber projections then give the square. All three
/// commutation equations are checked before returning.
pub fn complete_cospan(cospan: &ThickenedCospan) -> Result<CospanCompletion, GDeltaError> {
    let base = cospan.base;
    let base_poset = to_gposet(base);
    let tf = thicken_map(&cospan.f0);
    let tg = thicken_map(&cospan.g0);
    let (fiber, proj1, proj2) = fiber_product(&tf, &tg);

    // Pairing of the legs into the fiber product.
    let h_images = (0..base_poset.len())
        .map(|i| {
            let a = cospan.alpha.apply(i);
            let b = cospan.gamma.apply(i);
            let name = format!("({},{})", tf.src().name(a), tg.src().name(b));
            fiber.index_of(&name).ok_or_else(|| {
                GDeltaError::InvalidCospan(format!(
                    "legs of {} do not pair into the fiber product",
                    base_poset.name(i)
                ))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let h = GPosetMap::new(base_poset.clone(), fiber.clone(), h_images)?;

    let delta = thicken_level(base, 0);
    let rho = thicken_projection(base);
    let h_bar = h.compose(&rho)?;
    let phi = proj1.compose(&h_bar)?;
    let psi = proj2.compose(&h_bar)?;

    // The square and both leg triangles must commute on the nose.
    if phi.compose(&delta)? != cospan.alpha {
        return Err(GDeltaError::InvalidCospan(
            "first leg triangle does not commute".into(),
        ));
    }
    if psi.compose(&delta)? != cospan.gamma {
        return Err(GDeltaError::InvalidCospan(
            "second leg triangle does not commute".into(),
        ));
    }
    if tf.compose(&phi)? != tg.compose(&psi)? {
        return Err(GDeltaError::InvalidCospan(
            "completed square does not commute".into(),
        ));
    }

    Ok(CospanCompletion {
        cone_obj: base,
        delta,
        phi,
        psi,
        fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn identity_cospan_completes_with_equal_projections() {
        let obj = SimplexObject::new(1, 1).unwrap();
        let id = GDeltaMap::identity(obj);
        let leg = thicken_level(obj, 0);
        let cospan =
            ThickenedCospan::new(obj, id.clone(), id, leg.clone(), leg).unwrap();
        let square = complete_cospan(&cospan).unwrap();
        assert_eq!(square.phi, square.psi);
    }

    #[test]
    fn distinct_free_cofaces_admit_a_square() {
        // Two coface maps raising the glue bound, with a base carrying
        // compatible legs into both prisms.
        let base = SimplexObject::new(1, 0).unwrap();
        let d0 = GDeltaMap::coface(2, 1, 0, 1).unwrap();
        let d1 = GDeltaMap::coface(2, 1, 1, 1).unwrap();
        let th_src = thicken_poset(d0.src());
        let mk_leg = |images: &[(&str, &str)]| {
            let by_name: BTreeMap<String, String> = images
                .iter()
                .map(|&(a, b)| (a.to_string(), b.to_string()))
                .collect();
            GPosetMap::from_names(to_gposet(base), th_src.clone(), &by_name).unwrap()
        };
        // th(d0) sends (1e,l) to (2e,l); th(d1) sends (1e,l) to (2e,l) too,
        // so legs hitting the fixed tail agree in the target prism.
        let alpha = mk_leg(&[("0e", "(1e,0)"), ("1e", "(2e,0)")]);
        let gamma = mk_leg(&[("0e", "(1e,0)"), ("1e", "(2e,0)")]);
        let cospan = ThickenedCospan::new(base, d0, d1, alpha, gamma).unwrap();
        let square = complete_cospan(&cospan).unwrap();
        assert_eq!(square.cone_obj, base);
        assert!(!square.fiber.is_empty());
    }

    #[test]
    fn mismatched_legs_are_rejected() {
        let base = SimplexObject::new(0, 0).unwrap();
        let d0 = GDeltaMap::coface(1, 0, 0, 0).unwrap();
        let d2 = GDeltaMap::coface(1, 0, 2, 0).unwrap();
        let th_src = thicken_poset(d0.src());
        let leg = |img: &str| {
            let mut by_name = BTreeMap::new();
            by_name.insert("0e".to_string(), img.to_string());
            GPosetMap::from_names(to_gposet(base), th_src.clone(), &by_name).unwrap()
        };
        // d0 shifts index 0 up, d2 keeps it; the legs then disagree.
        let err = ThickenedCospan::new(base, d0, d2, leg("(0e,0)"), leg("(0e,0)"));
        assert!(matches!(err, Err(GDeltaError::InvalidCospan(_))));
    }
}
