//! Pullback groupoids, 2-fiber products and the diagonal functor.
//!
//! Constructed ids are canonical tuples `(a|b|c)` so that outputs are
//! reproducible byte for byte.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::functor::{GroupoidExtension, GroupoidMap};
use crate::groupoid::FinGroupoid;

pub(crate) fn tuple_id(parts: &[&str]) -> String {
    format!("({})", parts.join("|"))
}

/// The pullback groupoid together with its projection functor back to the
/// groupoid it was pulled back from.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub groupoid: Arc<FinGroupoid>,
    pub projection: GroupoidMap,
    /// `(p, x, q)` for every arrow, in arrow order.
    pub triples: Vec<(usize, usize, usize)>,
}

/// Pulls `gamma` back along `j: new_objects -> gamma.objects`.
///
/// Arrows `p -> q` are triples `(p|x|q)` with `x: j(p) -> j(q)`. Composition
/// is `(q|y|r) . (p|x|q) = (p|y.x|r)` in functional order; the diagrammatic
/// `((p,x,q),(q,y,r)) -> (p, x∘y, r)` reads the same product left to right.
/// Units are `(a|1|a)` and inverses `(b|x^-1|a)`.
pub fn pullback_groupoid<S: AsRef<str>>(
    gamma: &Arc<FinGroupoid>,
    new_objects: &[S],
    j: &[usize],
) -> Result<Pullback, Error> {
    let missing = {
        let mut hit = vec![false; gamma.num_objects()];
        j.iter().for_each(|&y| hit[y] = true);
        (0..gamma.num_objects()).filter(|&y| !hit[y]).collect::<Vec<_>>()
    };
    if !missing.is_empty() {
        return Err(Error::NotSurjective(missing.into_iter().map(|y| gamma.object_id(y).to_string()).collect()));
    }
    pullback_along(gamma, new_objects, j)
}

/// Pullback without the surjectivity requirement. Morita tests use it to
/// compare a functor's domain with the full subgroupoid on its image.
pub(crate) fn pullback_along<S: AsRef<str>>(
    gamma: &Arc<FinGroupoid>,
    new_objects: &[S],
    j: &[usize],
) -> Result<Pullback, Error> {
    if new_objects.len() != j.len() {
        return Err(Error::Invalid("object list and map have different lengths".into()));
    }
    if j.iter().any(|&y| y >= gamma.num_objects()) {
        return Err(Error::Invalid("map lands outside the groupoid's objects".into()));
    }
    let objects: Vec<String> = new_objects.iter().map(|s| s.as_ref().to_string()).collect();
    let n = objects.len();
    let mut triples = Vec::new();
    let mut index = HashMap::new();
    for p in 0..n {
        for q in 0..n {
            for x in gamma.hom(j[p], j[q]) {
                index.insert((p, x, q), triples.len());
                triples.push((p, x, q));
            }
        }
    }
    let arrows = triples.iter().map(|&(p, x, q)| tuple_id(&[&objects[p], gamma.arrow_id(x), &objects[q]])).collect();
    let src = triples.iter().map(|t| t.0).collect();
    let tgt = triples.iter().map(|t| t.2).collect();
    let unit = (0..n).map(|a| index[&(a, gamma.unit(j[a]), a)]).collect();
    let inv = triples.iter().map(|&(p, x, q)| index[&(q, gamma.inv(x), p)]).collect();
    let groupoid = FinGroupoid::from_indexed(objects, arrows, src, tgt, unit, inv, |second, first| {
        let (p, x, _) = triples[first];
        let (_, y, r) = triples[second];
        Some(index[&(p, gamma.compose(y, x), r)])
    })?;
    let groupoid = Arc::new(groupoid);
    let projection =
        GroupoidMap::new(groupoid.clone(), gamma.clone(), j.to_vec(), triples.iter().map(|t| t.1).collect())?;
    Ok(Pullback { groupoid, projection, triples })
}

/// The 2-fiber product of `phi: G -> K` and `psi: H -> K`.
#[derive(Debug, Clone)]
pub struct FiberProduct {
    pub groupoid: Arc<FinGroupoid>,
    pub to_left: GroupoidMap,
    pub to_right: GroupoidMap,
    /// `(a, alpha, b)` per object: `alpha: phi(a) -> psi(b)` in K.
    pub object_triples: Vec<(usize, usize, usize)>,
    /// `(u, gamma, v)` per arrow: `gamma: t(phi(u)) -> s(psi(v))` in K.
    pub arrow_triples: Vec<(usize, usize, usize)>,
}

/// Builds `G x_K H`.
///
/// Objects are `(a|alpha|b)` with `alpha: phi(a) -> psi(b)`; arrows are
/// `(u|gamma|v)` with `gamma: t(phi(u)) -> s(psi(v))`, and
///
/// ```text
/// s(u, gamma, v) = (s(u), gamma . phi(u), s(v))
/// t(u, gamma, v) = (t(u), psi(v) . gamma, t(v))
/// ```
///
/// Composing `(u'|gamma'|v') . (u|gamma|v)` gives `(u'.u | gamma'' | v'.v)`
/// where the middle component is forced by the source formula to be
/// `gamma . phi(u')^-1`; the commuting square `alpha' . phi(u) = psi(v) . alpha`
/// is asserted on every composite.
pub fn fiber_product_groupoid(phi: &GroupoidMap, psi: &GroupoidMap) -> Result<FiberProduct, Error> {
    if **phi.cod() != **psi.cod() {
        return Err(Error::CodomainMismatch);
    }
    let (g, h, k) = (&**phi.dom(), &**psi.dom(), &**phi.cod());

    let mut object_triples = Vec::new();
    let mut object_index = HashMap::new();
    for a in 0..g.num_objects() {
        for b in 0..h.num_objects() {
            for alpha in k.hom(phi.object(a), psi.object(b)) {
                object_index.insert((a, alpha, b), object_triples.len());
                object_triples.push((a, alpha, b));
            }
        }
    }
    let mut arrow_triples = Vec::new();
    let mut arrow_index = HashMap::new();
    for u in 0..g.num_arrows() {
        for v in 0..h.num_arrows() {
            for gamma in k.hom(k.tgt(phi.arrow(u)), k.src(psi.arrow(v))) {
                arrow_index.insert((u, gamma, v), arrow_triples.len());
                arrow_triples.push((u, gamma, v));
            }
        }
    }

    let source = |&(u, gamma, v): &(usize, usize, usize)| {
        object_index[&(g.src(u), k.compose(gamma, phi.arrow(u)), h.src(v))]
    };
    let target = |&(u, gamma, v): &(usize, usize, usize)| {
        object_index[&(g.tgt(u), k.compose(psi.arrow(v), gamma), h.tgt(v))]
    };
    let src: Vec<usize> = arrow_triples.iter().map(source).collect();
    let tgt: Vec<usize> = arrow_triples.iter().map(target).collect();
    let unit = object_triples.iter().map(|&(a, alpha, b)| arrow_index[&(g.unit(a), alpha, h.unit(b))]).collect();
    // inverse of (u, gamma, v) starts at its target, whose middle is psi(v).gamma
    let inv = arrow_triples
        .iter()
        .map(|&(u, gamma, v)| {
            let middle = k.compose(k.compose(psi.arrow(v), gamma), phi.arrow(u));
            arrow_index[&(g.inv(u), middle, h.inv(v))]
        })
        .collect();

    let objects = object_triples
        .iter()
        .map(|&(a, alpha, b)| tuple_id(&[g.object_id(a), k.arrow_id(alpha), h.object_id(b)]))
        .collect();
    let arrows = arrow_triples
        .iter()
        .map(|&(u, gamma, v)| tuple_id(&[g.arrow_id(u), k.arrow_id(gamma), h.arrow_id(v)]))
        .collect();

    let groupoid = FinGroupoid::from_indexed(objects, arrows, src.clone(), tgt.clone(), unit, inv, |second, first| {
        let (u, gamma, v) = arrow_triples[first];
        let (u2, _, v2) = arrow_triples[second];
        let middle = k.compose(gamma, k.inv(phi.arrow(u2)));
        let key = (g.compose(u2, u), middle, h.compose(v2, v));
        let composite = arrow_index[&key];
        let (_, alpha, _) = object_triples[src[first]];
        let (_, alpha2, _) = object_triples[tgt[second]];
        let (uu, vv) = (g.compose(u2, u), h.compose(v2, v));
        assert_eq!(
            k.compose(alpha2, phi.arrow(uu)),
            k.compose(psi.arrow(vv), alpha),
            "internal: fiber product composite violates the commuting square"
        );
        Some(composite)
    })?;
    let groupoid = Arc::new(groupoid);
    for (f, t) in arrow_triples.iter().enumerate() {
        assert_eq!(groupoid.src(f), source(t), "internal: source formula");
        assert_eq!(groupoid.tgt(f), target(t), "internal: target formula");
    }
    let to_left = GroupoidMap::new(
        groupoid.clone(),
        phi.dom().clone(),
        object_triples.iter().map(|t| t.0).collect(),
        arrow_triples.iter().map(|t| t.0).collect(),
    )?;
    let to_right = GroupoidMap::new(
        groupoid.clone(),
        psi.dom().clone(),
        object_triples.iter().map(|t| t.2).collect(),
        arrow_triples.iter().map(|t| t.2).collect(),
    )?;
    Ok(FiberProduct { groupoid, to_left, to_right, object_triples, arrow_triples })
}

impl FiberProduct {
    /// Object `(a|alpha|b)` by component indices.
    pub fn object_of(&self, a: usize, alpha: usize, b: usize) -> Option<usize> {
        self.object_triples.iter().position(|&t| t == (a, alpha, b))
    }
}

/// The diagonal `G -> G x_H G` of an extension `phi: G -> H`.
///
/// Objects go to `(a|1_a|a)`. An arrow `g: a -> b` goes to
/// `(g | phi(g)^-1 | g)`: the source formula `gamma . phi(g) = 1_a` forces the
/// middle component, and both endpoints then carry unit middles.
pub fn diagonal_functor(e: &GroupoidExtension) -> Result<(FiberProduct, GroupoidMap), Error> {
    let phi = e.phi();
    let fp = fiber_product_groupoid(phi, phi)?;
    let (g, h) = (&**e.dom(), &**e.cod());
    let index: HashMap<(usize, usize, usize), usize> =
        fp.arrow_triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let f0 = (0..g.num_objects())
        .map(|a| fp.object_of(a, h.unit(phi.object(a)), a).expect("diagonal object exists"))
        .collect();
    let f1 = (0..g.num_arrows()).map(|u| index[&(u, h.inv(phi.arrow(u)), u)]).collect();
    let delta = GroupoidMap::new(e.dom().clone(), fp.groupoid.clone(), f0, f1)?;
    Ok((fp, delta))
}
