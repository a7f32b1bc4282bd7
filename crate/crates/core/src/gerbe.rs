//! Gerbe data of a groupoid extension and the reconstruction of the
//! extension from its bibundle.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bibundle::{apply_bibundle, bibundle_from_functor, Bibundle};
use crate::bundle::{gauge_groupoid, unit_bundle, PrincipalBundle};
use crate::construct::{fiber_product_groupoid, tuple_id, FiberProduct};
use crate::error::Error;
use crate::functor::{GroupoidExtension, GroupoidMap};
use crate::group::{group_isomorphism, FinGroup};
use crate::groupoid::FinGroupoid;
use crate::iso::{groupoid_isomorphic, verify_isomorphism, GroupoidIso};
use crate::morita::{are_morita_equivalent, is_morita_morphism, isotropy_inclusion};
use crate::report::Report;
use crate::search::{Meter, Search};

/// Evidence that the self fiber product is Morita equivalent to its
/// isotropy group.
#[derive(Debug, Clone)]
pub struct MoritaWitness {
    /// Orbit of the fiber product matched with the single object `pt`.
    pub orbit_matching: Vec<(String, String)>,
    /// The isotropy inclusion passes [`is_morita_morphism`].
    pub inclusion_is_morita: bool,
}

#[derive(Debug, Clone)]
pub struct GerbeCertificate {
    pub extension: GroupoidExtension,
    pub fiber_product: FiberProduct,
    /// Object `i` of the fiber product is `(a|alpha|b)`; this is `alpha`,
    /// an arrow of the codomain. The map is a bijection.
    pub object_to_arrow: Vec<usize>,
    pub surjective_on_arrows: bool,
    pub transitive: bool,
    /// Orbits of the fiber product, present only when there are several.
    pub orbit_report: Option<Vec<Vec<String>>>,
    /// The object at which `isotropy_k` was taken.
    pub base_object: Option<String>,
    pub isotropy_k: Option<FinGroup>,
    /// Isotropy at a second object is isomorphic to `isotropy_k`.
    pub second_sample_agrees: Option<bool>,
    pub morita_witness: Option<MoritaWitness>,
}

impl GerbeCertificate {
    /// Arrow surjectivity and transitivity hold and the Morita reduction to
    /// the isotropy group was verified.
    pub fn certified(&self) -> bool {
        self.surjective_on_arrows
            && self.transitive
            && self.morita_witness.as_ref().is_some_and(|w| w.inclusion_is_morita)
    }
}

fn budget<T>(s: Search<T>, meter: &Meter) -> Result<Option<T>, Error> {
    match s {
        Search::Found(t) => Ok(Some(t)),
        Search::NotFound => Ok(None),
        Search::BudgetExceeded => Err(Error::BudgetExceeded(meter.limit())),
    }
}

/// Builds `G x_H G` for `e: G -> H` and records its transitivity and
/// isotropy.
pub fn certify_gerbe(e: &GroupoidExtension, meter: &mut Meter) -> Result<GerbeCertificate, Error> {
    let report = e.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let (g, h) = (e.dom(), e.cod());
    if g.num_objects() == 0 {
        return Err(Error::Invalid("extension over an empty object set".into()));
    }
    let fp = fiber_product_groupoid(e.phi(), e.phi())?;
    let object_to_arrow: Vec<usize> = fp.object_triples.iter().map(|&(_, alpha, _)| alpha).collect();
    let mut sorted = object_to_arrow.clone();
    sorted.sort_unstable();
    assert!(sorted.iter().copied().eq(0..h.num_arrows()), "internal: fiber product objects do not match codomain arrows");

    let surjective_on_arrows = e.phi().uncovered_arrows().is_empty();
    let transitive = fp.groupoid.is_transitive();
    let mut cert = GerbeCertificate {
        extension: e.clone(),
        fiber_product: fp.clone(),
        object_to_arrow,
        surjective_on_arrows,
        transitive,
        orbit_report: None,
        base_object: None,
        isotropy_k: None,
        second_sample_agrees: None,
        morita_witness: None,
    };
    if !transitive {
        cert.orbit_report = Some(fp.groupoid.orbit_ids());
        return Ok(cert);
    }
    let base = fp.object_of(0, h.unit(0), 0).expect("unit object exists");
    let k = fp.groupoid.isotropy_at(base);
    let last = fp.groupoid.num_objects() - 1;
    if last != base {
        let other = fp.groupoid.isotropy_at(last);
        let agrees = budget(group_isomorphism(&k, &other, meter), meter)?.is_some();
        assert!(agrees, "internal: isotropy differs across a transitive groupoid");
        cert.second_sample_agrees = Some(agrees);
    }
    let one = FinGroupoid::from_group(&k, "pt");
    let matching = budget(are_morita_equivalent(&fp.groupoid, &one, meter), meter)?;
    let inclusion_is_morita = is_morita_morphism(&isotropy_inclusion(&fp.groupoid, base))?.is_morita();
    cert.morita_witness = matching.map(|orbit_matching| MoritaWitness { orbit_matching, inclusion_is_morita });
    cert.base_object = Some(fp.groupoid.object_id(base).to_string());
    cert.isotropy_k = Some(k);
    Ok(cert)
}

/// The reconstruction of an extension from its bibundle.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub bibundle: Bibundle,
    /// The bibundle applied to the unit bundle of the domain.
    pub bundle: PrincipalBundle,
    pub gauge: Arc<FinGroupoid>,
    /// `G -> gauge`, identity on objects.
    pub theta: GroupoidExtension,
    pub theta_report: Report,
    /// `gauge -> H`, identity on objects, with `witness . theta = phi`.
    pub witness: GroupoidIso,
}

/// Rebuilds the codomain of `e` as the gauge groupoid of the bibundle of `e`
/// applied to the unit bundle, and checks that the induced `theta` is `phi`
/// up to the isomorphism found.
pub fn roundtrip_extension(e: &GroupoidExtension, meter: &mut Meter) -> Result<RoundTrip, Error> {
    let report = e.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let (g, h) = (e.dom(), e.cod());
    let phi = e.phi();
    let bibundle = bibundle_from_functor(phi);
    let applied = apply_bibundle(&bibundle, &unit_bundle(g))?;
    let gauge = gauge_groupoid(&applied.bundle)?;
    let k = gauge.groupoid.clone();

    let position: HashMap<&str, usize> = bibundle.carrier().iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let base_point = |x: usize| position[tuple_id(&[g.object_id(x), h.arrow_id(h.unit(x))]).as_str()];
    // theta(g) = [ [1_x, (x, 1_x)], [g, (x, 1_x)] ] for g: x -> y
    let f1: Vec<usize> = (0..g.num_arrows())
        .map(|a| {
            let x = g.src(a);
            let px = base_point(x);
            let unit_side = applied.class(g.unit(x), px).expect("anchors match");
            let arrow_side = applied.class(a, px).expect("anchors match");
            gauge.class(unit_side, arrow_side).expect("anchors match")
        })
        .collect();
    let theta = GroupoidExtension::from_arrow_map(g.clone(), k.clone(), f1)?;
    let theta_report = theta.validate();

    if let Some(witness) = induced_iso(&theta, phi) {
        return Ok(RoundTrip { bibundle, bundle: applied.bundle, gauge: k, theta, theta_report, witness });
    }
    match groupoid_isomorphic(&k, h, meter) {
        Search::Found(_) => Err(Error::ReconstructionMismatch),
        Search::NotFound => Err(Error::NoIsomorphism),
        Search::BudgetExceeded => Err(Error::BudgetExceeded(meter.limit())),
    }
}

/// The map `theta(a) -> phi(a)`, if it is a well defined isomorphism that
/// is the identity on objects.
fn induced_iso(theta: &GroupoidExtension, phi: &GroupoidMap) -> Option<GroupoidIso> {
    let (k, h) = (theta.cod(), phi.cod());
    if k.objects() != h.objects() {
        return None;
    }
    let mut arrows = vec![usize::MAX; k.num_arrows()];
    for a in 0..theta.dom().num_arrows() {
        let slot = &mut arrows[theta.phi().arrow(a)];
        if *slot == usize::MAX {
            *slot = phi.arrow(a);
        } else if *slot != phi.arrow(a) {
            return None;
        }
    }
    if arrows.contains(&usize::MAX) {
        return None;
    }
    let iso = GroupoidIso { objects: (0..k.num_objects()).collect(), arrows };
    verify_isomorphism(k, h, &iso).then_some(iso)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_object(group: &FinGroup) -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::from_group(group, "pt"))
    }

    fn z4_to_z2() -> GroupoidExtension {
        GroupoidExtension::from_arrow_map(one_object(&FinGroup::cyclic(4)), one_object(&FinGroup::cyclic(2)), vec![0, 1, 0, 1])
            .unwrap()
    }

    #[test]
    fn z4_over_z2_certificate() {
        let c = certify_gerbe(&z4_to_z2(), &mut Meter::default()).unwrap();
        assert!(c.transitive && c.certified());
        assert_eq!(c.fiber_product.groupoid.num_objects(), 2);
        assert_eq!(c.fiber_product.groupoid.num_arrows(), 32);
        assert_eq!(c.isotropy_k.as_ref().unwrap().order(), 8);
        assert_eq!(c.second_sample_agrees, Some(true));
    }

    #[test]
    fn identity_on_two_points_is_not_transitive() {
        let u = Arc::new(FinGroupoid::unit_groupoid(&["a", "b"]));
        let e = GroupoidExtension::new(GroupoidMap::identity(u));
        let c = certify_gerbe(&e, &mut Meter::default()).unwrap();
        assert!(!c.transitive);
        assert_eq!(c.orbit_report.as_ref().unwrap().len(), 2);
        assert!(c.isotropy_k.is_none() && c.morita_witness.is_none());
    }

    #[test]
    fn roundtrips() {
        let r = roundtrip_extension(&z4_to_z2(), &mut Meter::default()).unwrap();
        assert!(r.theta_report.is_ok());
        assert_eq!(r.gauge.num_arrows(), 2);
        let swap4 = Arc::new(FinGroupoid::action_groupoid(&FinGroup::cyclic(4), &["0", "1"], |k, x| (k + x) % 2).unwrap());
        let swap2 = Arc::new(FinGroupoid::action_groupoid(&FinGroup::cyclic(2), &["0", "1"], |k, x| (k + x) % 2).unwrap());
        // (k|x) -> (k mod 2|x); arrows are ordered group-major
        let f1 = (0..8).map(|i| (i / 2 % 2) * 2 + i % 2).collect();
        let e = GroupoidExtension::from_arrow_map(swap4, swap2, f1).unwrap();
        assert!(e.validate().is_ok(), "{}", e.validate());
        let r = roundtrip_extension(&e, &mut Meter::default()).unwrap();
        assert!(r.theta_report.is_ok());
    }

    #[test]
    fn rejects_invalid_extension() {
        let z2 = one_object(&FinGroup::cyclic(2));
        let z4 = one_object(&FinGroup::cyclic(4));
        let inc = GroupoidExtension::from_arrow_map(z2, z4, vec![0, 2]).unwrap();
        assert!(matches!(certify_gerbe(&inc, &mut Meter::default()), Err(Error::Validation(_))));
    }
}
