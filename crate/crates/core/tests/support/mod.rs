//! Independent oracles. Nothing here calls the library's deciders; only
//! table accessors are used.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::HashSet;
use std::path::PathBuf;

use groupoid_calculus::functor::GroupoidMap;
use groupoid_calculus::groupoid::FinGroupoid;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/data")
}

pub fn data_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data_dir())
        .expect("data directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    files
}

/// Whether `y` is reachable from `x` by some arrow.
fn connected(g: &FinGroupoid, x: usize, y: usize) -> bool {
    (0..g.num_arrows()).any(|a| g.src(a) == x && g.tgt(a) == y)
}

fn hom(g: &FinGroupoid, x: usize, y: usize) -> Vec<usize> {
    (0..g.num_arrows()).filter(|&a| g.src(a) == x && g.tgt(a) == y).collect()
}

/// Fully faithful and essentially surjective, checked hom-set by hom-set.
pub fn is_equivalence_functor(m: &GroupoidMap) -> bool {
    let (d, c) = (m.dom(), m.cod());
    for x in 0..d.num_objects() {
        for y in 0..d.num_objects() {
            let image: HashSet<usize> = hom(d, x, y).into_iter().map(|a| m.arrow(a)).collect();
            let target = hom(c, m.object(x), m.object(y));
            if image.len() != hom(d, x, y).len() || image.len() != target.len() {
                return false;
            }
        }
    }
    (0..c.num_objects()).all(|z| (0..d.num_objects()).any(|x| connected(c, m.object(x), z)))
}

/// Searches for a fully faithful, essentially surjective functor `a -> b`
/// by backtracking over object and arrow assignments. `None` means the
/// step budget ran out.
pub fn brute_force_equivalent(a: &FinGroupoid, b: &FinGroupoid, budget: u64) -> Option<bool> {
    let mut steps = 0u64;
    let mut f0 = vec![usize::MAX; a.num_objects()];
    let found = objects(a, b, 0, &mut f0, &mut steps, budget)?;
    Some(found)
}

fn objects(a: &FinGroupoid, b: &FinGroupoid, x: usize, f0: &mut Vec<usize>, steps: &mut u64, budget: u64) -> Option<bool> {
    if x == a.num_objects() {
        let surjective = (0..b.num_objects()).all(|z| f0.iter().any(|&y| connected(b, y, z)));
        let sizes = (0..a.num_objects())
            .all(|p| (0..a.num_objects()).all(|q| hom(a, p, q).len() == hom(b, f0[p], f0[q]).len()));
        if !surjective || !sizes {
            return Some(false);
        }
        let mut f1 = vec![usize::MAX; a.num_arrows()];
        return arrows(a, b, 0, f0, &mut f1, steps, budget);
    }
    for y in 0..b.num_objects() {
        f0[x] = y;
        if objects(a, b, x + 1, f0, steps, budget)? {
            return Some(true);
        }
    }
    Some(false)
}

fn arrows(
    a: &FinGroupoid,
    b: &FinGroupoid,
    i: usize,
    f0: &[usize],
    f1: &mut Vec<usize>,
    steps: &mut u64,
    budget: u64,
) -> Option<bool> {
    *steps += 1;
    if *steps > budget {
        return None;
    }
    if i == a.num_arrows() {
        return Some(true);
    }
    for cand in hom(b, f0[a.src(i)], f0[a.tgt(i)]) {
        f1[i] = cand;
        if consistent(a, b, i, f0, f1) && arrows(a, b, i + 1, f0, f1, steps, budget)? {
            return Some(true);
        }
    }
    f1[i] = usize::MAX;
    Some(false)
}

/// Checks the laws that involve arrow `i` and already assigned arrows.
fn consistent(a: &FinGroupoid, b: &FinGroupoid, i: usize, f0: &[usize], f1: &[usize]) -> bool {
    let set = |k: usize| f1[k] != usize::MAX;
    for j in 0..=i {
        if j != i && f1[j] == f1[i] && a.src(i) == a.src(j) && a.tgt(i) == a.tgt(j) {
            return false;
        }
    }
    for x in 0..a.num_objects() {
        if a.unit(x) == i && f1[i] != b.unit(f0[x]) {
            return false;
        }
    }
    for g in 0..=i {
        for f in 0..=i {
            if g != i && f != i {
                continue;
            }
            if let Some(h) = a.comp(g, f) {
                if set(h) && set(g) && set(f) && b.comp(f1[g], f1[f]) != Some(f1[h]) {
                    return false;
                }
            }
        }
    }
    for g in 0..=i {
        let gi = a.inv(g);
        if (g == i || gi == i) && set(g) && set(gi) && b.inv(f1[g]) != f1[gi] {
            return false;
        }
    }
    true
}

/// Counts `(objects, arrows, loops at (x, 1, x))` of the self fiber product
/// of `phi` straight from the definition.
pub fn fiber_product_counts(phi: &GroupoidMap, x: usize) -> (usize, usize, usize) {
    let (g, h) = (phi.dom(), phi.cod());
    let objects = (0..g.num_objects())
        .flat_map(|a| (0..g.num_objects()).map(move |b| (a, b)))
        .map(|(a, b)| hom(h, phi.object(a), phi.object(b)).len())
        .sum();
    let arrows = (0..g.num_arrows())
        .flat_map(|g1| (0..g.num_arrows()).map(move |g2| (g1, g2)))
        .map(|(g1, g2)| hom(h, phi.object(g.src(g1)), phi.object(g.src(g2))).len())
        .sum();
    // (g1, 1, g2) fixes (x, 1, x) exactly when both are loops at x with
    // the same image.
    let mut loops = 0;
    for g1 in hom(g, x, x) {
        for g2 in hom(g, x, x) {
            if phi.arrow(g1) == phi.arrow(g2) {
                loops += 1;
            }
        }
    }
    (objects, arrows, loops)
}
