//! Groupoid isomorphism.
//!
//! A finite groupoid is determined up to isomorphism by its connected
//! components, and a component is determined by its object count and the
//! isotropy group at any object. The search pairs components with equal
//! invariants (object count, isotropy order profile), runs a budgeted group
//! isomorphism for each candidate pair, and then writes down the arrow
//! bijection through spanning trees rooted at each component's first object.
//! Every returned witness is re-checked against all structure maps.

use crate::group::{group_isomorphism, FinGroup};
use crate::groupoid::FinGroupoid;
use crate::search::{Meter, Search};

/// A pair of bijections commuting with all structure maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidIso {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl GroupoidIso {
    pub fn identity(g: &FinGroupoid) -> Self {
        Self { objects: (0..g.num_objects()).collect(), arrows: (0..g.num_arrows()).collect() }
    }

    pub fn inverse(&self) -> Self {
        Self { objects: invert(&self.objects), arrows: invert(&self.arrows) }
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    map.iter().all(|&j| j < n && !std::mem::replace(&mut hit[j], true))
}

/// Checks that `iso` is an isomorphism `a -> b`.
pub fn verify_isomorphism(a: &FinGroupoid, b: &FinGroupoid, iso: &GroupoidIso) -> bool {
    if !is_bijection(&iso.objects, b.num_objects()) || !is_bijection(&iso.arrows, b.num_arrows()) {
        return false;
    }
    let (fo, fa) = (&iso.objects, &iso.arrows);
    let maps_ok = (0..a.num_arrows()).all(|f| {
        b.src(fa[f]) == fo[a.src(f)] && b.tgt(fa[f]) == fo[a.tgt(f)] && b.inv(fa[f]) == fa[a.inv(f)]
    }) && (0..a.num_objects()).all(|x| b.unit(fo[x]) == fa[a.unit(x)]);
    maps_ok && a.composition_entries().all(|(g, f, h)| b.comp(fa[g], fa[f]) == Some(fa[h]))
}

struct Component {
    objects: Vec<usize>,
    /// `span[i]`: an arrow from the root `objects[0]` to `objects[i]`.
    span: Vec<usize>,
    isotropy: FinGroup,
    /// Arrow indices of the isotropy group elements, in group order.
    loops: Vec<usize>,
    profile: Vec<usize>,
}

fn components(g: &FinGroupoid) -> Vec<Component> {
    g.orbits()
        .into_iter()
        .map(|objects| {
            let root = objects[0];
            let span = objects.iter().map(|&x| g.hom(root, x).next().expect("orbit is connected")).collect();
            let loops = g.loops(root);
            let isotropy = g.isotropy_at(root);
            let profile = isotropy.order_profile();
            Component { objects, span, isotropy, loops, profile }
        })
        .collect()
}

/// Searches for an isomorphism `a -> b` within `meter`'s budget.
pub fn groupoid_isomorphic(a: &FinGroupoid, b: &FinGroupoid, meter: &mut Meter) -> Search<GroupoidIso> {
    if a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows() {
        return Search::NotFound;
    }
    let ca = components(a);
    let cb = components(b);
    if ca.len() != cb.len() {
        return Search::NotFound;
    }
    let key = |c: &Component| (c.objects.len(), c.profile.clone());
    let mut ka: Vec<_> = ca.iter().map(key).collect();
    let mut kb: Vec<_> = cb.iter().map(key).collect();
    ka.sort();
    kb.sort();
    if ka != kb {
        return Search::NotFound;
    }

    // group isomorphisms between candidate component pairs, computed lazily
    let mut cache: Vec<Vec<Option<Search<Vec<usize>>>>> = vec![vec![None; cb.len()]; ca.len()];
    let mut assignment = vec![usize::MAX; ca.len()];
    let mut used = vec![false; cb.len()];

    fn go(
        i: usize,
        ca: &[Component],
        cb: &[Component],
        cache: &mut Vec<Vec<Option<Search<Vec<usize>>>>>,
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        meter: &mut Meter,
    ) -> Search<()> {
        if i == ca.len() {
            return Search::Found(());
        }
        let mut exhausted = false;
        for j in 0..cb.len() {
            if used[j] || ca[i].objects.len() != cb[j].objects.len() || ca[i].profile != cb[j].profile {
                continue;
            }
            if meter.tick().is_err() {
                return Search::BudgetExceeded;
            }
            if cache[i][j].is_none() {
                cache[i][j] = Some(group_isomorphism(&ca[i].isotropy, &cb[j].isotropy, meter));
            }
            match cache[i][j].as_ref().unwrap() {
                Search::Found(_) => {}
                Search::NotFound => continue,
                Search::BudgetExceeded => {
                    exhausted = true;
                    continue;
                }
            }
            used[j] = true;
            assignment[i] = j;
            match go(i + 1, ca, cb, cache, assignment, used, meter) {
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

    match go(0, &ca, &cb, &mut cache, &mut assignment, &mut used, meter) {
        Search::Found(()) => {}
        Search::NotFound => return Search::NotFound,
        Search::BudgetExceeded => return Search::BudgetExceeded,
    }

    let mut objects = vec![usize::MAX; a.num_objects()];
    let mut arrows = vec![usize::MAX; a.num_arrows()];
    let mut pos_in_comp = vec![(0, 0); a.num_objects()];
    for (i, c) in ca.iter().enumerate() {
        let d = &cb[assignment[i]];
        for (k, &x) in c.objects.iter().enumerate() {
            objects[x] = d.objects[k];
            pos_in_comp[x] = (i, k);
        }
    }
    for f in 0..a.num_arrows() {
        let (i, kx) = pos_in_comp[a.src(f)];
        let (_, ky) = pos_in_comp[a.tgt(f)];
        let (c, d) = (&ca[i], &cb[assignment[i]]);
        let theta = cache[i][assignment[i]].clone().unwrap().found().unwrap();
        // loop at the root: span_y^-1 . f . span_x
        let looped = a.compose(a.inv(c.span[ky]), a.compose(f, c.span[kx]));
        let elem = c.loops.iter().position(|&l| l == looped).expect("loop lies in isotropy");
        let image_loop = d.loops[theta[elem]];
        arrows[f] = b.compose(b.compose(d.span[ky], image_loop), b.inv(d.span[kx]));
    }
    let iso = GroupoidIso { objects, arrows };
    assert!(verify_isomorphism(a, b, &iso), "internal: constructed groupoid isomorphism fails verification");
    Search::Found(iso)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_isomorphism() {
        let g = FinGroupoid::action_groupoid(&FinGroup::cyclic(4), &["0", "1"], |k, x| (k + x) % 2).unwrap();
        let iso = groupoid_isomorphic(&g, &g, &mut Meter::default()).found().unwrap();
        assert!(verify_isomorphism(&g, &g, &iso));
        assert!(verify_isomorphism(&g, &g, &GroupoidIso::identity(&g)));
    }

    #[test]
    fn object_count_mismatch() {
        let u = FinGroupoid::unit_groupoid(&["a", "b"]);
        let z2 = FinGroupoid::from_group(&FinGroup::cyclic(2), "pt");
        assert_eq!(groupoid_isomorphic(&u, &z2, &mut Meter::default()), Search::NotFound);
    }

    #[test]
    fn z4_vs_klein() {
        let z4 = FinGroupoid::from_group(&FinGroup::cyclic(4), "pt");
        let v4 = FinGroupoid::from_group(&FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2)), "pt");
        assert_eq!(groupoid_isomorphic(&z4, &v4, &mut Meter::default()), Search::NotFound);
    }

    #[test]
    fn tiny_budget_is_not_false() {
        let a = FinGroupoid::from_group(&FinGroup::symmetric(3), "pt");
        assert_eq!(groupoid_isomorphic(&a, &a, &mut Meter::new(0)), Search::BudgetExceeded);
    }
}
