//! Morita morphisms and Morita equivalence.
//!
//! For finite groupoids, Morita equivalence is decided by skeleton matching.
//! Two groupoids are equivalent exactly when their orbits can be paired so
//! that the isotropy groups at the representatives are isomorphic.

use std::sync::Arc;

use crate::construct::{pullback_along, pullback_groupoid, tuple_id};
use crate::error::Error;
use crate::functor::{GroupoidExtension, GroupoidMap};
use crate::group::{group_isomorphism, FinGroup};
use crate::groupoid::FinGroupoid;
use crate::iso::{verify_isomorphism, GroupoidIso};
use crate::search::{Meter, Search};

/// One representative per orbit with the isotropy group there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub orbit_reps: Vec<String>,
    pub iso_classes: Vec<FinGroup>,
}

/// Representatives are the first object of each orbit in insertion order.
pub fn skeleton(g: &FinGroupoid) -> Skeleton {
    let blocks = g.orbits();
    Skeleton {
        orbit_reps: blocks.iter().map(|b| g.object_id(b[0]).to_string()).collect(),
        iso_classes: blocks.iter().map(|b| g.isotropy_at(b[0])).collect(),
    }
}

/// Pairs the orbits of two skeletons so that matched isotropy groups are
/// isomorphic. Returns the pairing as representative ids.
pub fn match_skeletons(a: &Skeleton, b: &Skeleton, meter: &mut Meter) -> Search<Vec<(String, String)>> {
    if a.orbit_reps.len() != b.orbit_reps.len() {
        return Search::NotFound;
    }
    let n = a.orbit_reps.len();
    let mut cache: Vec<Vec<Option<bool>>> = vec![vec![None; n]; n];
    let mut pairing = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        i: usize,
        a: &Skeleton,
        b: &Skeleton,
        cache: &mut Vec<Vec<Option<bool>>>,
        pairing: &mut Vec<usize>,
        used: &mut Vec<bool>,
        meter: &mut Meter,
    ) -> Search<()> {
        if i == a.orbit_reps.len() {
            return Search::Found(());
        }
        let mut exhausted = false;
        for j in 0..b.orbit_reps.len() {
            if used[j] {
                continue;
            }
            if cache[i][j].is_none() {
                match group_isomorphism(&a.iso_classes[i], &b.iso_classes[j], meter) {
                    Search::Found(_) => cache[i][j] = Some(true),
                    Search::NotFound => cache[i][j] = Some(false),
                    Search::BudgetExceeded => {
                        exhausted = true;
                        continue;
                    }
                }
            }
            if cache[i][j] != Some(true) {
                continue;
            }
            used[j] = true;
            pairing[i] = j;
            match go(i + 1, a, b, cache, pairing, used, meter) {
                Search::Found(()) => return Search::Found(()),
                Search::BudgetExceeded => exhausted = true,
                Search::NotFound => {}
            }
            used[j] = false;
        }
        if exhausted {
            Search::BudgetExceeded
        } else {
            Search::NotFound
        }
    }

    go(0, a, b, &mut cache, &mut pairing, &mut used, meter)
        .map(|()| (0..n).map(|i| (a.orbit_reps[i].clone(), b.orbit_reps[pairing[i]].clone())).collect())
}

/// Decides Morita equivalence and returns the orbit matching that proves it.
pub fn are_morita_equivalent(a: &FinGroupoid, b: &FinGroupoid, meter: &mut Meter) -> Search<Vec<(String, String)>> {
    match_skeletons(&skeleton(a), &skeleton(b), meter)
}

/// Evidence produced by [`is_morita_morphism`].
#[derive(Debug, Clone)]
pub struct MoritaMorphismReport {
    /// Every codomain object is reached by an arrow from the image of `f0`.
    pub essentially_surjective: bool,
    /// `f0` itself is onto.
    pub surjective_on_objects: bool,
    /// Codomain orbits missed by the image of `f0`, by representative.
    pub missed_orbits: Vec<String>,
    /// Isomorphism from the domain onto the pullback of the codomain along
    /// `f0`, identity on objects and over the projection, when it exists.
    pub witness: Option<GroupoidIso>,
    pub pullback: Arc<FinGroupoid>,
    /// Why the comparison with the pullback failed, if it did.
    pub failure: Option<String>,
}

impl MoritaMorphismReport {
    pub fn is_morita(&self) -> bool {
        self.essentially_surjective && self.witness.is_some()
    }
}

/// Checks that `m` is a Morita morphism: its domain is isomorphic, over
/// `f0`, to the pullback of the codomain along `f0`, and every codomain
/// object is reached from the image.
///
/// Surjectivity of `f0` is reported separately as
/// `surjective_on_objects` but is not required; with it, the standard
/// inclusion of an isotropy group into a transitive groupoid on several
/// objects would not count.
pub fn is_morita_morphism(m: &GroupoidMap) -> Result<MoritaMorphismReport, Error> {
    if !m.validate().is_ok() {
        return Err(Error::Validation(m.validate()));
    }
    let (dom, cod) = (m.dom(), m.cod());
    let pb = pullback_along(cod, dom.objects(), m.on_objects())?;

    let mut reached = vec![false; cod.num_objects()];
    let mut missed = Vec::new();
    for block in cod.orbits() {
        let hit = block.iter().any(|&y| m.on_objects().contains(&y));
        for &y in &block {
            reached[y] = hit;
        }
        if !hit {
            missed.push(cod.object_id(block[0]).to_string());
        }
    }
    let essentially_surjective = reached.iter().all(|&r| r);
    let surjective_on_objects = m.uncovered_objects().is_empty();

    // the only candidate over f0 is g -> (s g | f(g) | t g)
    let index: std::collections::HashMap<(usize, usize, usize), usize> =
        pb.triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let arrows: Vec<usize> = (0..dom.num_arrows()).map(|g| index[&(dom.src(g), m.arrow(g), dom.tgt(g))]).collect();
    let candidate = GroupoidIso { objects: (0..dom.num_objects()).collect(), arrows };
    let (witness, failure) = if dom.num_arrows() != pb.groupoid.num_arrows() {
        let failure = if dom.num_arrows() < pb.groupoid.num_arrows() {
            "not full: the pullback has arrows outside the image"
        } else {
            "not faithful: distinct arrows share an image"
        };
        (None, Some(format!("{failure} ({} vs {} arrows)", dom.num_arrows(), pb.groupoid.num_arrows())))
    } else if verify_isomorphism(dom, &pb.groupoid, &candidate) {
        (Some(candidate), None)
    } else {
        (None, Some("comparison with the pullback is not bijective".into()))
    };
    let failure = match (failure, essentially_surjective) {
        (None, false) => Some(format!("not essentially surjective; missed orbits: {}", missed.join(", "))),
        (f, _) => f,
    };
    Ok(MoritaMorphismReport {
        essentially_surjective,
        surjective_on_objects,
        missed_orbits: missed,
        witness,
        pullback: pb.groupoid,
        failure,
    })
}

/// The inclusion of the isotropy group at `x`, as a one-object groupoid,
/// into `g`.
pub fn isotropy_inclusion(g: &Arc<FinGroupoid>, x: usize) -> GroupoidMap {
    let loops = g.loops(x);
    let one = FinGroupoid::from_group(&g.isotropy_at(x), "pt");
    GroupoidMap::new(one, g.clone(), vec![x], loops).expect("loops are arrows of g")
}

/// An extension pulled back along a surjection of object sets, with the
/// two legs of the Morita morphism of extensions back to the original.
#[derive(Debug, Clone)]
pub struct PulledExtension {
    pub extension: GroupoidExtension,
    pub dom_leg: GroupoidMap,
    pub cod_leg: GroupoidMap,
}

/// Pulls both groupoids of `e` back along `f: new_objects -> M`; the arrow
/// map is `(p|x|q) -> (p|phi(x)|q)`.
pub fn pullback_extension<S: AsRef<str>>(
    e: &GroupoidExtension,
    new_objects: &[S],
    f: &[usize],
) -> Result<PulledExtension, Error> {
    let top = pullback_groupoid(e.dom(), new_objects, f)?;
    let bottom = pullback_groupoid(e.cod(), new_objects, f)?;
    let index: std::collections::HashMap<(usize, usize, usize), usize> =
        bottom.triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let f1 = top.triples.iter().map(|&(p, x, q)| index[&(p, e.phi().arrow(x), q)]).collect();
    let extension = GroupoidExtension::from_arrow_map(top.groupoid.clone(), bottom.groupoid.clone(), f1)?;
    Ok(PulledExtension { extension, dom_leg: top.projection, cod_leg: bottom.projection })
}

/// Verdicts for one side of an equivalence witness: the pair of legs from
/// the middle extension to one end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegVerdict {
    pub dom_leg_morita: bool,
    pub cod_leg_morita: bool,
    pub same_object_map: bool,
    pub square_commutes: bool,
}

impl LegVerdict {
    pub fn holds(&self) -> bool {
        self.dom_leg_morita && self.cod_leg_morita && self.same_object_map && self.square_commutes
    }

    pub fn failed_conditions(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.dom_leg_morita {
            out.push("dom-leg-morita");
        }
        if !self.cod_leg_morita {
            out.push("cod-leg-morita");
        }
        if !self.same_object_map {
            out.push("same-object-map");
        }
        if !self.square_commutes {
            out.push("square");
        }
        out
    }
}

/// Checks that `(dom_leg, cod_leg)` is a Morita morphism of extensions
/// from `source` to `target`.
pub fn verify_extension_morphism(
    source: &GroupoidExtension,
    target: &GroupoidExtension,
    dom_leg: &GroupoidMap,
    cod_leg: &GroupoidMap,
) -> Result<LegVerdict, Error> {
    let fits = **dom_leg.dom() == **source.dom()
        && **dom_leg.cod() == **target.dom()
        && **cod_leg.dom() == **source.cod()
        && **cod_leg.cod() == **target.cod();
    if !fits {
        return Err(Error::Invalid("legs do not connect the given extensions".into()));
    }
    let dom_leg_morita = dom_leg.validate().is_ok() && is_morita_morphism(dom_leg)?.is_morita();
    let cod_leg_morita = cod_leg.validate().is_ok() && is_morita_morphism(cod_leg)?.is_morita();
    let same_object_map = dom_leg.on_objects() == cod_leg.on_objects();
    let square_commutes = (0..source.dom().num_arrows())
        .all(|x| cod_leg.arrow(source.phi().arrow(x)) == target.phi().arrow(dom_leg.arrow(x)));
    Ok(LegVerdict { dom_leg_morita, cod_leg_morita, same_object_map, square_commutes })
}

/// Per-side verdicts for a witness `e1 <- e3 -> e2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitnessReport {
    pub to_first: LegVerdict,
    pub to_second: LegVerdict,
}

impl EquivalenceWitnessReport {
    pub fn holds(&self) -> bool {
        self.to_first.holds() && self.to_second.holds()
    }
}

/// The four legs of an extension equivalence witness.
#[derive(Debug, Clone)]
pub struct WitnessLegs {
    pub dom_to_first: GroupoidMap,
    pub cod_to_first: GroupoidMap,
    pub dom_to_second: GroupoidMap,
    pub cod_to_second: GroupoidMap,
}

pub fn verify_extension_equivalence_witness(
    e1: &GroupoidExtension,
    e2: &GroupoidExtension,
    e3: &GroupoidExtension,
    legs: &WitnessLegs,
) -> Result<EquivalenceWitnessReport, Error> {
    Ok(EquivalenceWitnessReport {
        to_first: verify_extension_morphism(e3, e1, &legs.dom_to_first, &legs.cod_to_first)?,
        to_second: verify_extension_morphism(e3, e2, &legs.dom_to_second, &legs.cod_to_second)?,
    })
}

/// `M` with its first object duplicated, and the collapse back onto `M`.
/// Used as the standard two-to-one surjection.
pub fn collapse_first(objects: &[String]) -> (Vec<String>, Vec<usize>) {
    let mut new: Vec<String> = objects.to_vec();
    let mut map: Vec<usize> = (0..objects.len()).collect();
    if let Some(first) = objects.first() {
        let mut copy = tuple_id(&[first, "dup"]);
        while objects.contains(&copy) {
            copy.push('_');
        }
        new.push(copy);
        map.push(0);
    }
    (new, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::pullback_groupoid;

    fn transitive_two() -> Arc<FinGroupoid> {
        // Z/4 acting on {0,1} through Z/2: transitive, isotropy Z/2
        Arc::new(FinGroupoid::action_groupoid(&FinGroup::cyclic(4), &["0", "1"], |k, x| (k + x) % 2).unwrap())
    }

    #[test]
    fn skeleton_examples() {
        let s = skeleton(&FinGroupoid::unit_groupoid(&["a", "b"]));
        assert_eq!(s.orbit_reps, vec!["a", "b"]);
        assert!(s.iso_classes.iter().all(|g| g.order() == 1));
        let swap = FinGroupoid::action_groupoid(&FinGroup::cyclic(2), &["0", "1"], |k, x| (k + x) % 2).unwrap();
        let s = skeleton(&swap);
        assert_eq!((s.orbit_reps.len(), s.iso_classes[0].order()), (1, 1));
        let s = skeleton(&FinGroupoid::from_group(&FinGroup::cyclic(4), "pt"));
        assert_eq!((s.orbit_reps.len(), s.iso_classes[0].order()), (1, 4));
    }

    #[test]
    fn isotropy_inclusion_is_morita() {
        let g = transitive_two();
        let inc = isotropy_inclusion(&g, 0);
        let r = is_morita_morphism(&inc).unwrap();
        assert!(r.is_morita(), "{:?}", r.failure);
        assert!(!r.surjective_on_objects);
        assert!(is_morita_morphism(&GroupoidMap::identity(g)).unwrap().is_morita());
    }

    #[test]
    fn constant_functor_is_not_morita() {
        let u = FinGroupoid::unit_groupoid(&["a", "b"]);
        let z2 = FinGroupoid::from_group(&FinGroup::cyclic(2), "pt");
        let m = GroupoidMap::new(u, z2, vec![0, 0], vec![0, 0]).unwrap();
        let r = is_morita_morphism(&m).unwrap();
        assert!(!r.is_morita());
        assert_eq!(r.pullback.num_arrows(), 8);
    }

    #[test]
    fn pullback_projection_is_morita() {
        let k = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(3), "pt"));
        let pb = pullback_groupoid(&k, &["p", "q"], &[0, 0]).unwrap();
        assert!(is_morita_morphism(&pb.projection).unwrap().is_morita());
    }

    #[test]
    fn transitive_equivalent_to_isotropy() {
        let g = transitive_two();
        let k = FinGroupoid::from_group(&g.isotropy_at(0), "pt");
        assert!(are_morita_equivalent(&g, &k, &mut Meter::default()).is_found());
        let two = FinGroupoid::unit_groupoid(&["a", "b"]);
        let three = FinGroupoid::unit_groupoid(&["a", "b", "c"]);
        assert_eq!(are_morita_equivalent(&two, &three, &mut Meter::default()), Search::NotFound);
        assert!(are_morita_equivalent(&g, &g, &mut Meter::default()).is_found());
    }

    fn mod2() -> GroupoidExtension {
        let z4 = FinGroupoid::from_group(&FinGroup::cyclic(4), "pt");
        let z2 = FinGroupoid::from_group(&FinGroup::cyclic(2), "pt");
        GroupoidExtension::from_arrow_map(z4, z2, vec![0, 1, 0, 1]).unwrap()
    }

    #[test]
    fn pulled_extension_counts() {
        let e = mod2();
        let p = pullback_extension(&e, &["1", "2"], &[0, 0]).unwrap();
        assert!(p.extension.validate().is_ok());
        assert_eq!(p.extension.dom().num_arrows(), 16);
        assert_eq!(p.extension.cod().num_arrows(), 8);
        assert!(pullback_extension(&e, &["1"], &[0]).is_ok());
    }

    #[test]
    fn non_surjective_pullback_extension() {
        let z4 = FinGroupoid::from_group(&FinGroup::cyclic(4), "pt");
        let two = FinGroupoid::disjoint_union(&z4, &z4);
        let e = GroupoidExtension::new(GroupoidMap::identity(two));
        assert!(matches!(pullback_extension(&e, &["p"], &[0]), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn canonical_witness_verifies() {
        let e = mod2();
        let (objs, f) = collapse_first(e.dom().objects());
        let p = pullback_extension(&e, &objs, &f).unwrap();
        let legs = WitnessLegs {
            dom_to_first: p.dom_leg.clone(),
            cod_to_first: p.cod_leg.clone(),
            dom_to_second: p.dom_leg.clone(),
            cod_to_second: p.cod_leg.clone(),
        };
        let report = verify_extension_equivalence_witness(&e, &e, &p.extension, &legs).unwrap();
        assert!(report.holds());

        assert!(verify_extension_morphism(&p.extension, &e, &p.dom_leg, &p.cod_leg).unwrap().holds());
    }

    #[test]
    fn twisted_leg_breaks_the_square() {
        // first-factor projection of Z/2 x Z/2, witnessed with the factors swapped
        let v4 = FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2));
        let top = Arc::new(FinGroupoid::from_group(&v4, "pt"));
        let bottom = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(2), "pt"));
        let first: Vec<usize> = (0..4).map(|k| k / 2).collect();
        let e = GroupoidExtension::from_arrow_map(top.clone(), bottom.clone(), first).unwrap();
        let swap = GroupoidMap::new(top.clone(), top, vec![0], vec![0, 2, 1, 3]).unwrap();
        assert!(swap.validate().is_ok());
        let v = verify_extension_morphism(&e, &e, &swap, &GroupoidMap::identity(bottom)).unwrap();
        assert!(v.dom_leg_morita && v.cod_leg_morita && v.same_object_map);
        assert_eq!(v.failed_conditions(), vec!["square"]);
    }
}
