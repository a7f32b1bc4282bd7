//! Principal groupoid bundles, trivializations and the gauge groupoid.

use std::collections::HashMap;
use std::sync::Arc;

use crate::action::{equivariant_bijection, Action, Side};
use crate::construct::tuple_id;
use crate::error::{Error, StructureError};
use crate::groupoid::{check_unique, FinGroupoid};
use crate::quotient::DisjointSets;
use crate::report::{Report, ViolationKind};
use crate::search::{Meter, Search};

/// A finite set `P` over a base `M` with a right action of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalBundle {
    carrier: Vec<String>,
    base: Vec<String>,
    proj: Vec<usize>,
    action: Action,
}

impl PrincipalBundle {
    pub fn new(carrier: Vec<String>, base: Vec<String>, proj: Vec<usize>, action: Action) -> Result<Self, StructureError> {
        check_unique("carrier", &carrier)?;
        check_unique("base", &base)?;
        if action.side() != Side::Right {
            return Err(StructureError::Shape("bundles carry a right action".into()));
        }
        if proj.len() != carrier.len() || action.len() != carrier.len() {
            return Err(StructureError::Shape("projection or action does not cover the carrier".into()));
        }
        if proj.iter().any(|&m| m >= base.len()) {
            return Err(StructureError::Shape("projection lands outside the base".into()));
        }
        Ok(Self { carrier, base, proj, action })
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn groupoid(&self) -> &Arc<FinGroupoid> {
        self.action.groupoid()
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn action_mut(&mut self) -> &mut Action {
        &mut self.action
    }

    pub fn proj(&self, p: usize) -> usize {
        self.proj[p]
    }

    pub fn projection(&self) -> &[usize] {
        &self.proj
    }

    pub fn set_proj(&mut self, p: usize, m: usize) {
        self.proj[p] = m;
    }

    pub fn anchor(&self, p: usize) -> usize {
        self.action.anchor(p)
    }

    pub fn act(&self, p: usize, h: usize) -> Option<usize> {
        self.action.act(p, h)
    }

    pub fn fiber(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.carrier.len()).filter(move |&p| self.proj[p] == m)
    }

    /// Action laws, surjective invariant projection, and principality.
    pub fn validate(&self) -> Report {
        principal_report(&self.carrier, &self.base, &self.proj, &self.action)
    }
}

/// Principality of `action` with respect to `proj`, shared with the
/// biprincipality check for bibundles.
pub(crate) fn principal_report(carrier: &[String], base: &[String], proj: &[usize], action: &Action) -> Report {
    let mut r = action.validate(carrier);
    if !r.is_ok() {
        return r;
    }
    let g = &**action.groupoid();
    let n = carrier.len();
    let mut hit = vec![false; base.len()];
    proj.iter().for_each(|&m| hit[m] = true);
    let empty: Vec<String> = (0..base.len()).filter(|&m| !hit[m]).map(|m| base[m].clone()).collect();
    if !empty.is_empty() {
        r.push(ViolationKind::NotSurjective, "proj-surjective", empty);
    }
    let mut between: HashMap<(usize, usize), usize> = HashMap::new();
    for p in 0..n {
        for h in 0..g.num_arrows() {
            let Some(q) = action.act(p, h) else { continue };
            if proj[q] != proj[p] {
                r.push(ViolationKind::NotInvariant, "proj-invariant", vec![carrier[p].clone(), g.arrow_id(h).into()]);
            }
            if let Some(&h0) = between.get(&(p, q)) {
                r.push(
                    ViolationKind::NotPrincipal,
                    "principal-free",
                    vec![carrier[p].clone(), g.arrow_id(h0).into(), g.arrow_id(h).into()],
                );
            } else {
                between.insert((p, q), h);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            if proj[p] == proj[q] && !between.contains_key(&(p, q)) {
                r.push(ViolationKind::NotPrincipal, "principal-transitive", vec![carrier[p].clone(), carrier[q].clone()]);
            }
        }
    }
    r
}

/// `G1` over `G0` by the target map, acted on by composition.
pub fn unit_bundle(g: &Arc<FinGroupoid>) -> PrincipalBundle {
    let na = g.num_arrows();
    let anchor = (0..na).map(|p| g.src(p)).collect();
    let action = Action::from_fn(g.clone(), Side::Right, anchor, |p, h| g.comp(p, h)).expect("composition stays in G1");
    PrincipalBundle::new(g.arrows().to_vec(), g.objects().to_vec(), (0..na).map(|p| g.tgt(p)).collect(), action)
        .expect("unit bundle tables are well formed")
}

/// The bundle `N x_M P` of pairs `(n|p)` with `f(n) = proj(p)`.
pub fn pullback_bundle<S: AsRef<str>>(b: &PrincipalBundle, new_base: &[S], f: &[usize]) -> Result<PrincipalBundle, Error> {
    if new_base.len() != f.len() || f.iter().any(|&m| m >= b.base.len()) {
        return Err(Error::Invalid("base map does not fit the bundle".into()));
    }
    let pairs = pullback_pairs(b, f);
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pair)| (pair, i)).collect();
    let carrier = pairs.iter().map(|&(n, p)| tuple_id(&[new_base[n].as_ref(), &b.carrier[p]])).collect();
    let anchor = pairs.iter().map(|&(_, p)| b.anchor(p)).collect();
    let action = Action::from_fn(b.groupoid().clone(), Side::Right, anchor, |i, h| {
        let (n, p) = pairs[i];
        b.act(p, h).and_then(|q| index.get(&(n, q)).copied())
    })?;
    let base = new_base.iter().map(|s| s.as_ref().to_string()).collect();
    Ok(PrincipalBundle::new(carrier, base, pairs.iter().map(|&(n, _)| n).collect(), action)?)
}

/// `(n, p)` with `f(n) = proj(p)`, in carrier order of the pullback.
fn pullback_pairs(b: &PrincipalBundle, f: &[usize]) -> Vec<(usize, usize)> {
    f.iter().enumerate().flat_map(|(n, &m)| b.fiber(m).map(move |p| (n, p))).collect()
}

/// Checks that `(carrier_map, base_map)` is a morphism of bundles `a -> b`
/// over the same groupoid.
pub fn validate_bundle_morphism(
    a: &PrincipalBundle,
    b: &PrincipalBundle,
    carrier_map: &[usize],
    base_map: &[usize],
) -> Result<Report, Error> {
    if **a.groupoid() != **b.groupoid() {
        return Err(Error::GroupoidMismatch);
    }
    if carrier_map.len() != a.carrier.len() || base_map.len() != a.base.len() {
        return Err(Error::Invalid("maps do not cover the source bundle".into()));
    }
    if carrier_map.iter().any(|&q| q >= b.carrier.len()) || base_map.iter().any(|&m| m >= b.base.len()) {
        return Err(Error::Invalid("maps land outside the target bundle".into()));
    }
    let mut r = Report::new();
    let g = a.groupoid();
    for p in 0..a.carrier.len() {
        let q = carrier_map[p];
        if b.proj(q) != base_map[a.proj(p)] {
            r.push(ViolationKind::NotCompatible, "morphism-base", vec![a.carrier[p].clone()]);
        }
        if b.anchor(q) != a.anchor(p) {
            r.push(ViolationKind::NotCompatible, "morphism-anchor", vec![a.carrier[p].clone()]);
        }
        for h in 0..g.num_arrows() {
            if a.act(p, h).map(|s| carrier_map[s]) != b.act(q, h) {
                r.push(ViolationKind::NotCompatible, "morphism-equivariant", vec![a.carrier[p].clone(), g.arrow_id(h).into()]);
            }
        }
    }
    Ok(r)
}

/// Searches for an isomorphism of bundles over the identity of a shared
/// base.
pub fn bundle_isomorphism(a: &PrincipalBundle, b: &PrincipalBundle, meter: &mut Meter) -> Result<Search<Vec<usize>>, Error> {
    if **a.groupoid() != **b.groupoid() {
        return Err(Error::GroupoidMismatch);
    }
    if a.base != b.base {
        return Err(Error::Invalid("bundles have different bases".into()));
    }
    let label = |x: &PrincipalBundle| -> Vec<(usize, usize)> { (0..x.carrier.len()).map(|p| (x.proj(p), x.anchor(p))).collect() };
    let stride = a.groupoid().num_arrows();
    Ok(equivariant_bijection(&label(a), &label(b), &[(a.action.table(), b.action.table(), stride)], meter))
}

/// A global section together with the isomorphism it induces onto the
/// pullback of the unit bundle along the classifying map.
#[derive(Debug, Clone)]
pub struct Trivialization {
    pub section: Vec<usize>,
    /// `anchor . section`, from the base to the objects of `G`.
    pub classifying: Vec<usize>,
    pub trivial: PrincipalBundle,
    /// Carrier bijection from the bundle onto `trivial`, over the identity.
    pub iso: Vec<usize>,
}

/// Trivializes a principal bundle over a finite (discrete) base.
///
/// Any choice of one point per fiber is a section here; the first point of
/// each fiber is taken and the induced map is checked to be an isomorphism.
pub fn trivialize(b: &PrincipalBundle) -> Result<Trivialization, Error> {
    let report = b.validate();
    if let Some(m) = (0..b.base.len()).find(|&m| b.fiber(m).next().is_none()) {
        return Err(Error::NoSection(b.base[m].clone()));
    }
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let section: Vec<usize> = (0..b.base.len()).map(|m| b.fiber(m).next().unwrap()).collect();
    let classifying: Vec<usize> = section.iter().map(|&p| b.anchor(p)).collect();
    let unit = unit_bundle(b.groupoid());
    let trivial = pullback_bundle(&unit, &b.base, &classifying)?;
    let g = b.groupoid();
    let index: HashMap<(usize, usize), usize> =
        pullback_pairs(&unit, &classifying).into_iter().enumerate().map(|(i, pair)| (pair, i)).collect();
    let iso: Vec<usize> = (0..b.carrier.len())
        .map(|p| {
            let m = b.proj(p);
            let k = (0..g.num_arrows()).find(|&k| b.act(section[m], k) == Some(p)).expect("principal");
            index[&(m, k)]
        })
        .collect();
    let check = validate_bundle_morphism(b, &trivial, &iso, &(0..b.base.len()).collect::<Vec<_>>())?;
    assert!(check.is_ok() && is_permutation(&iso), "internal: trivialization is not an isomorphism: {check}");
    Ok(Trivialization { section, classifying, trivial, iso })
}

fn is_permutation(map: &[usize]) -> bool {
    let mut hit = vec![false; map.len()];
    map.iter().all(|&j| j < map.len() && !std::mem::replace(&mut hit[j], true))
}

/// A trivialization over each single base point.
pub fn local_trivializations(b: &PrincipalBundle) -> Result<Vec<Trivialization>, Error> {
    (0..b.base.len()).map(|m| trivialize(&pullback_bundle(b, &[&b.base[m]], &[m])?)).collect()
}

/// The gauge groupoid `(P x_G0 P)/G` over the base, with a lookup from
/// representative pairs to arrows.
#[derive(Debug, Clone)]
pub struct Gauge {
    pub groupoid: Arc<FinGroupoid>,
    class_of: HashMap<(usize, usize), usize>,
}

impl Gauge {
    /// The arrow `[p, q]`, from `proj(p)` to `proj(q)`.
    pub fn class(&self, p: usize, q: usize) -> Option<usize> {
        self.class_of.get(&(p, q)).copied()
    }
}

pub fn gauge_groupoid(b: &PrincipalBundle) -> Result<Gauge, Error> {
    let report = b.validate();
    if !report.is_ok() {
        return Err(Error::Validation(report));
    }
    let g = b.groupoid();
    let n = b.carrier.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|p| (0..n).filter(move |&q| b.anchor(p) == b.anchor(q)).map(move |q| (p, q))).collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &pq)| (pq, i)).collect();
    let mut sets = DisjointSets::new(pairs.len());
    for (i, &(p, q)) in pairs.iter().enumerate() {
        for h in 0..g.num_arrows() {
            if let (Some(ph), Some(qh)) = (b.act(p, h), b.act(q, h)) {
                sets.union(i, index[&(ph, qh)]);
            }
        }
    }
    let (label, count) = sets.classes();
    let mut reps = vec![usize::MAX; count];
    for (i, &c) in label.iter().enumerate() {
        if reps[c] == usize::MAX {
            reps[c] = i;
        }
    }
    let mut divide: HashMap<(usize, usize), usize> = HashMap::new();
    for p in 0..n {
        for h in 0..g.num_arrows() {
            if let Some(q) = b.act(p, h) {
                divide.insert((p, q), h);
            }
        }
    }
    let class = |p: usize, q: usize| label[index[&(p, q)]];
    let arrows = reps.iter().map(|&i| tuple_id(&[&b.carrier[pairs[i].0], &b.carrier[pairs[i].1]])).collect();
    let src = reps.iter().map(|&i| b.proj(pairs[i].0)).collect();
    let tgt = reps.iter().map(|&i| b.proj(pairs[i].1)).collect();
    let unit = (0..b.base.len())
        .map(|m| {
            let p = b.fiber(m).next().ok_or_else(|| Error::NoSection(b.base[m].clone()))?;
            Ok(class(p, p))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let inv = reps.iter().map(|&i| class(pairs[i].1, pairs[i].0)).collect();
    // [q1,q2].[p1,p2] = [p1, q2.k] where q1.k = p2
    let compose = |x: usize, y: usize| -> usize {
        let (q1, q2) = pairs[reps[x]];
        let (p1, p2) = pairs[reps[y]];
        let k = divide[&(q1, p2)];
        class(p1, b.act(q2, k).expect("anchors agree"))
    };
    let groupoid = FinGroupoid::from_indexed(b.base.clone(), arrows, src, tgt, unit, inv, |x, y| Some(compose(x, y)))?;
    if cfg!(debug_assertions) {
        // the composite must not depend on the chosen representatives
        for (i, &(q1, q2)) in pairs.iter().enumerate() {
            for (j, &(p1, p2)) in pairs.iter().enumerate() {
                if b.proj(p2) != b.proj(q1) {
                    continue;
                }
                let k = divide[&(q1, p2)];
                let direct = class(p1, b.act(q2, k).unwrap());
                assert_eq!(groupoid.comp(label[i], label[j]), Some(direct), "gauge composition is not well defined");
            }
        }
    }
    let class_of = index.into_iter().map(|(pq, i)| (pq, label[i])).collect();
    Ok(Gauge { groupoid: Arc::new(groupoid), class_of })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinGroup;
    use crate::iso::{groupoid_isomorphic, verify_isomorphism, GroupoidIso};

    fn transitive() -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::action_groupoid(&FinGroup::cyclic(4), &["0", "1"], |k, x| (k + x) % 2).unwrap())
    }

    #[test]
    fn unit_bundle_is_principal() {
        let g = transitive();
        let u = unit_bundle(&g);
        assert!(u.validate().is_ok(), "{}", u.validate());
        assert_eq!(u.carrier().len(), 8);
    }

    #[test]
    fn broken_action_is_not_principal() {
        let g = transitive();
        let mut u = unit_bundle(&g);
        let p = 0;
        let h = g.unit(u.anchor(p));
        u.action_mut().set(p, h, Some(1));
        assert!(u.validate().has_kind(ViolationKind::NotAnAction));
        let mut u = unit_bundle(&g);
        let m = u.proj(0);
        u.set_proj(0, 1 - m);
        let r = u.validate();
        assert!(r.has_rule("proj-invariant"));
    }

    #[test]
    fn pullback_of_unit_bundle() {
        let g = transitive();
        let u = unit_bundle(&g);
        let pb = pullback_bundle(&u, &["a", "b", "c"], &[0, 0, 1]).unwrap();
        assert!(pb.validate().is_ok());
        assert_eq!(pb.carrier().len(), 12);
    }

    #[test]
    fn trivialization_round_trips() {
        let g = transitive();
        let u = unit_bundle(&g);
        let t = trivialize(&u).unwrap();
        assert_eq!(t.section.len(), 2);
        assert!(bundle_isomorphism(&u, &t.trivial, &mut Meter::default()).unwrap().is_found());
        assert_eq!(local_trivializations(&u).unwrap().len(), 2);
    }

    #[test]
    fn empty_fiber_has_no_section() {
        let g = Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(2), "pt"));
        let u = unit_bundle(&g);
        let action = u.action().clone();
        let b = PrincipalBundle::new(u.carrier().to_vec(), vec!["m".into(), "empty".into()], vec![0, 0], action).unwrap();
        assert_eq!(trivialize(&b).unwrap_err(), Error::NoSection("empty".into()));
    }

    #[test]
    fn gauge_of_unit_bundle_is_the_groupoid() {
        let g = transitive();
        let u = unit_bundle(&g);
        let gauge = gauge_groupoid(&u).unwrap();
        assert!(gauge.groupoid.validate().is_ok());
        // [p, q] corresponds to q . p^-1
        let mut arrows = vec![usize::MAX; g.num_arrows()];
        for p in 0..g.num_arrows() {
            for q in 0..g.num_arrows() {
                if let Some(c) = gauge.class(p, q) {
                    arrows[c] = g.compose(q, g.inv(p));
                }
            }
        }
        let iso = GroupoidIso { objects: vec![0, 1], arrows };
        assert!(verify_isomorphism(&gauge.groupoid, &g, &iso));
        assert!(groupoid_isomorphic(&gauge.groupoid, &g, &mut Meter::default()).is_found());
    }

    #[test]
    fn bundle_morphism_violations() {
        let g = transitive();
        let u = unit_bundle(&g);
        let id: Vec<usize> = (0..8).collect();
        assert!(validate_bundle_morphism(&u, &u, &id, &[0, 1]).unwrap().is_ok());
        let r = validate_bundle_morphism(&u, &u, &id, &[1, 0]).unwrap();
        assert!(r.has_rule("morphism-base"));
    }
}
