//! Seeded generators for groupoids, functors and extensions.
//!
//! A finite groupoid is a disjoint union of pullbacks of groups along
//! maps onto a point, so random groupoids are assembled that way and then
//! shuffled so that index order carries no structure.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::construct::pullback_groupoid;
use crate::functor::{GroupoidExtension, GroupoidMap};
use crate::group::{homomorphisms, FinGroup};
use crate::groupoid::FinGroupoid;
use crate::morita::isotropy_inclusion;

/// Groups of order at most 8 used as isotropy.
pub fn small_groups() -> Vec<FinGroup> {
    let c2 = FinGroup::cyclic(2);
    vec![
        FinGroup::cyclic(1),
        c2.clone(),
        FinGroup::cyclic(3),
        FinGroup::cyclic(4),
        FinGroup::product(&c2, &c2),
        FinGroup::cyclic(5),
        FinGroup::cyclic(6),
        FinGroup::symmetric(3),
        FinGroup::cyclic(8),
        FinGroup::dihedral(4),
        FinGroup::quaternion(),
    ]
}

/// The transitive groupoid on `n` objects with isotropy `k`, objects named
/// `{prefix}0..`.
pub fn transitive_groupoid(k: &FinGroup, n: usize, prefix: &str) -> FinGroupoid {
    let point = Arc::new(FinGroupoid::from_group(k, "pt"));
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let pb = pullback_groupoid(&point, &names, &vec![0; n]).expect("maps onto the single object");
    Arc::try_unwrap(pb.groupoid).unwrap_or_else(|g| (*g).clone())
}

/// Disjoint union of components `(isotropy, object count)`, with short
/// generated ids.
pub fn assemble(components: &[(FinGroup, usize)]) -> FinGroupoid {
    let mut iter = components.iter().enumerate();
    let Some((_, (k, n))) = iter.next() else {
        return FinGroupoid::unit_groupoid::<&str>(&[]);
    };
    let mut g = transitive_groupoid(k, *n, "c0x");
    for (i, (k, n)) in iter {
        g = FinGroupoid::disjoint_union(&g, &transitive_groupoid(k, *n, &format!("c{i}x")));
    }
    let objects = (0..g.num_objects()).map(|x| format!("x{x}")).collect();
    let arrows = (0..g.num_arrows()).map(|a| format!("a{a}")).collect();
    g.relabel(objects, arrows).expect("generated ids are distinct")
}

/// The same groupoid with objects and arrows in a random order.
pub fn shuffled<R: Rng>(g: &FinGroupoid, rng: &mut R) -> FinGroupoid {
    let mut obj: Vec<usize> = (0..g.num_objects()).collect();
    let mut arr: Vec<usize> = (0..g.num_arrows()).collect();
    obj.shuffle(rng);
    arr.shuffle(rng);
    // new index i holds old element obj[i]
    let mut obj_pos = vec![0; obj.len()];
    let mut arr_pos = vec![0; arr.len()];
    obj.iter().enumerate().for_each(|(i, &o)| obj_pos[o] = i);
    arr.iter().enumerate().for_each(|(i, &a)| arr_pos[a] = i);
    FinGroupoid::from_indexed(
        obj.iter().map(|&o| g.object_id(o).to_string()).collect(),
        arr.iter().map(|&a| g.arrow_id(a).to_string()).collect(),
        arr.iter().map(|&a| obj_pos[g.src(a)]).collect(),
        arr.iter().map(|&a| obj_pos[g.tgt(a)]).collect(),
        obj.iter().map(|&o| arr_pos[g.unit(o)]).collect(),
        arr.iter().map(|&a| arr_pos[g.inv(a)]).collect(),
        |second, first| g.comp(arr[second], arr[first]).map(|h| arr_pos[h]),
    )
    .expect("a permutation keeps the tables well formed")
}

/// Random component list with at most `max_arrows` arrows in total and at
/// most `max_components` components.
fn random_components<R: Rng>(rng: &mut R, max_arrows: usize, max_components: usize) -> Vec<(FinGroup, usize)> {
    let groups = small_groups();
    let mut out = Vec::new();
    let mut budget = max_arrows;
    let target = rng.gen_range(1..=max_components);
    while out.len() < target {
        let options: Vec<(usize, usize)> = (0..groups.len())
            .flat_map(|k| (1..=4).map(move |n| (k, n)))
            .filter(|&(k, n)| n * n * groups[k].order() <= budget)
            .collect();
        let Some(&(k, n)) = options.choose(rng) else { break };
        budget -= n * n * groups[k].order();
        out.push((groups[k].clone(), n));
    }
    out
}

pub fn random_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FinGroupoid {
    let parts = random_components(rng, max_arrows, 3);
    shuffled(&assemble(&parts), rng)
}

pub fn random_transitive_groupoid<R: Rng>(rng: &mut R, max_arrows: usize) -> FinGroupoid {
    let parts = random_components(rng, max_arrows, 1);
    shuffled(&assemble(&parts), rng)
}

/// A random functor `dom -> cod`: each component of `dom` goes to a random
/// component of `cod` through a random isotropy homomorphism and random
/// images of spanning arrows.
pub fn random_functor<R: Rng>(rng: &mut R, dom: &Arc<FinGroupoid>, cod: &Arc<FinGroupoid>) -> Option<GroupoidMap> {
    let targets = cod.orbits();
    if targets.is_empty() {
        return dom.num_objects().eq(&0).then(|| GroupoidMap::new(dom.clone(), cod.clone(), vec![], vec![]).unwrap());
    }
    let mut f0 = vec![0; dom.num_objects()];
    let mut f1 = vec![0; dom.num_arrows()];
    for block in dom.orbits() {
        let target = targets.choose(rng).unwrap();
        for &x in &block {
            f0[x] = *target.choose(rng).unwrap();
        }
        let root = block[0];
        let (src_loops, dst_loops) = (dom.loops(root), cod.loops(f0[root]));
        let theta = homomorphisms(&dom.isotropy_at(root), &cod.isotropy_at(f0[root]));
        let theta = theta.choose(rng)?;
        // span[x]: root -> x in dom; image[x]: f0(root) -> f0(x) in cod
        let span: Vec<usize> = block.iter().map(|&x| dom.hom(root, x).next().unwrap()).collect();
        let image: Vec<usize> = block
            .iter()
            .map(|&x| {
                if x == root {
                    cod.unit(f0[root])
                } else {
                    let options: Vec<usize> = cod.hom(f0[root], f0[x]).collect();
                    *options.choose(rng).unwrap()
                }
            })
            .collect();
        let pos = |x: usize| block.iter().position(|&y| y == x).unwrap();
        for a in 0..dom.num_arrows() {
            let (x, y) = (dom.src(a), dom.tgt(a));
            if !block.contains(&x) {
                continue;
            }
            let (ix, iy) = (pos(x), pos(y));
            let looped = dom.compose(dom.inv(span[iy]), dom.compose(a, span[ix]));
            let elem = src_loops.iter().position(|&l| l == looped).unwrap();
            let moved = dst_loops[theta[elem]];
            f1[a] = cod.compose(cod.compose(image[iy], moved), cod.inv(image[ix]));
        }
    }
    Some(GroupoidMap::new(dom.clone(), cod.clone(), f0, f1).expect("images lie in the codomain"))
}

/// A functor built to be a Morita morphism: a pullback projection, an
/// isotropy inclusion, or a shuffled identity, chosen at random.
pub fn random_morita_functor<R: Rng>(rng: &mut R, max_arrows: usize) -> GroupoidMap {
    let cod = Arc::new(random_groupoid(rng, max_arrows));
    match rng.gen_range(0..3) {
        0 => {
            // cover every object, then pull back if it still fits
            let n = cod.num_objects();
            let mut f: Vec<usize> = (0..n).collect();
            if rng.gen_bool(0.5) && n > 0 {
                f.push(rng.gen_range(0..n));
            }
            f.shuffle(rng);
            let names: Vec<String> = (0..f.len()).map(|i| format!("y{i}")).collect();
            let pb = pullback_groupoid(&cod, &names, &f).expect("f is onto");
            if pb.groupoid.num_arrows() <= max_arrows {
                pb.projection
            } else {
                GroupoidMap::identity(cod)
            }
        }
        1 if cod.is_transitive() && cod.num_objects() > 0 => isotropy_inclusion(&cod, rng.gen_range(0..cod.num_objects())),
        _ => {
            let dom = Arc::new(shuffled(&cod, rng));
            let f0 = (0..dom.num_objects()).map(|x| cod.object_index(dom.object_id(x)).unwrap()).collect();
            let f1 = (0..dom.num_arrows()).map(|a| cod.arrow_index(dom.arrow_id(a)).unwrap()).collect();
            GroupoidMap::new(dom, cod, f0, f1).unwrap()
        }
    }
}

/// Named extensions used by examples and tests.
pub fn standard_extensions() -> Vec<(&'static str, GroupoidExtension)> {
    let one = |g: &FinGroup| Arc::new(FinGroupoid::from_group(g, "pt"));
    let c2 = FinGroup::cyclic(2);
    let c4 = FinGroup::cyclic(4);
    let v4 = FinGroup::product(&c2, &c2);
    let s3 = FinGroup::symmetric(3);
    let sign: Vec<usize> = (0..s3.order()).map(|p| usize::from(permutation_is_odd(&s3.elements()[p]))).collect();
    let swap4 = Arc::new(FinGroupoid::action_groupoid(&c4, &["0", "1"], |k, x| (k + x) % 2).unwrap());
    let swap2 = Arc::new(FinGroupoid::action_groupoid(&c2, &["0", "1"], |k, x| (k + x) % 2).unwrap());
    let unit2 = Arc::new(FinGroupoid::unit_groupoid(&["a", "b"]));
    vec![
        ("z4-to-z2", GroupoidExtension::from_arrow_map(one(&c4), one(&c2), (0..4).map(|k| k % 2).collect()).unwrap()),
        ("v4-to-z2", GroupoidExtension::from_arrow_map(one(&v4), one(&c2), (0..4).map(|k| k / 2).collect()).unwrap()),
        ("s3-sign", GroupoidExtension::from_arrow_map(one(&s3), one(&c2), sign).unwrap()),
        ("swap-action", GroupoidExtension::from_arrow_map(swap4, swap2, (0..8).map(|i| (i / 2 % 2) * 2 + i % 2).collect()).unwrap()),
        ("z4-identity", GroupoidExtension::new(GroupoidMap::identity(one(&c4)))),
        ("unit-pair-identity", GroupoidExtension::new(GroupoidMap::identity(unit2))),
    ]
}

/// Parity of a permutation named `p012`-style.
fn permutation_is_odd(name: &str) -> bool {
    let digits: Vec<u32> = name.chars().filter_map(|c| c.to_digit(10)).collect();
    let mut inversions = 0;
    for i in 0..digits.len() {
        for j in i + 1..digits.len() {
            if digits[i] > digits[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}
