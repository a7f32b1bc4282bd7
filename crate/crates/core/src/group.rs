//! Finite groups given by multiplication tables.
//!
//! Isotropy groups of finite groupoids land here, and Morita equivalence
//! ultimately reduces to comparing them, so this module also owns group
//! isomorphism and homomorphism enumeration.

use std::collections::VecDeque;

use crate::report::{Report, ViolationKind};
use crate::search::{Meter, OutOfBudget, Search};

/// A finite group presented by its full multiplication table.
///
/// `mul[a * n + b]` is the product `a * b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroup {
    elements: Vec<String>,
    mul: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FinGroup {
    /// Builds a group from raw tables. Only shapes are checked here; use
    /// [`FinGroup::validate`] for the axioms.
    pub fn from_tables(
        elements: Vec<String>,
        mul: Vec<usize>,
        identity: usize,
        inverse: Vec<usize>,
    ) -> Result<Self, String> {
        let n = elements.len();
        if mul.len() != n * n || inverse.len() != n || identity >= n.max(1) {
            return Err("table sizes do not match element count".into());
        }
        if mul.iter().chain(inverse.iter()).any(|&x| x >= n) {
            return Err("table entry out of range".into());
        }
        Ok(Self { elements, mul, identity, inverse })
    }

    /// Builds a group from a multiplication closure over `0..n`, deriving
    /// the identity and inverses.
    pub fn from_fn(names: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Self {
        let n = names.len();
        let table: Vec<usize> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| mul(a, b)).collect();
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e * n + a] == a && table[a * n + e] == a))
            .expect("multiplication has no identity");
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a * n + b] == identity).expect("element without inverse"))
            .collect();
        Self { elements: names, mul: table, identity, inverse }
    }

    /// Cyclic group of order `n` with elements `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        Self::from_fn((0..n).map(|k| k.to_string()).collect(), |a, b| (a + b) % n)
    }

    /// Direct product, elements named `a_b`.
    pub fn product(a: &FinGroup, b: &FinGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let names = (0..na * nb)
            .map(|k| format!("{}_{}", a.elements[k / nb], b.elements[k % nb]))
            .collect();
        Self::from_fn(names, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
    }

    /// Symmetric group on `n` letters, elements named by one-line notation.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let names = perms
            .iter()
            .map(|p| format!("p{}", p.iter().map(|d| d.to_string()).collect::<String>()))
            .collect();
        // (a * b)(i) = a(b(i))
        Self::from_fn(names, |a, b| {
            let composed: Vec<usize> = (0..n).map(|i| perms[a][perms[b][i]]).collect();
            perms.iter().position(|p| *p == composed).unwrap()
        })
    }

    /// Dihedral group of order `2n`: rotations `r0..`, reflections `s0..`.
    pub fn dihedral(n: usize) -> Self {
        let names = (0..n).map(|k| format!("r{k}")).chain((0..n).map(|k| format!("s{k}"))).collect();
        Self::from_fn(names, |a, b| {
            let (ra, sa) = (a % n, a >= n);
            let (rb, sb) = (b % n, b >= n);
            // elements r^k s^e, with s r = r^-1 s
            let k = if sa { (ra + n - rb) % n } else { (ra + rb) % n };
            k + if sa ^ sb { n } else { 0 }
        })
    }

    /// Quaternion group of order 8.
    pub fn quaternion() -> Self {
        // indices: 0=1 1=-1 2=i 3=-i 4=j 5=-j 6=k 7=-k
        let names = ["1", "m1", "i", "mi", "j", "mj", "k", "mk"].iter().map(|s| s.to_string()).collect();
        let unit = |x: usize| x / 2; // 0:1 1:i 2:j 3:k
        let sign = |x: usize| x % 2;
        let table = [[(0, 0), (1, 0), (2, 0), (3, 0)], [(1, 0), (0, 1), (3, 0), (2, 1)], [(2, 0), (3, 1), (0, 1), (1, 0)], [(3, 0), (2, 0), (1, 1), (0, 1)]];
        Self::from_fn(names, |a, b| {
            let (u, s) = table[unit(a)][unit(b)];
            u * 2 + (s + sign(a) + sign(b)) % 2
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Checks associativity, identity and inverse laws by enumeration.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.order();
        if n == 0 {
            report.push(ViolationKind::AxiomViolation, "group-nonempty", vec![]);
            return report;
        }
        let name = |i: usize| self.elements[i].clone();
        for a in 0..n {
            if self.mul(self.identity, a) != a || self.mul(a, self.identity) != a {
                report.push(ViolationKind::AxiomViolation, "group-identity", vec![name(a)]);
            }
            let ai = self.inverse[a];
            if self.mul(a, ai) != self.identity || self.mul(ai, a) != self.identity {
                report.push(ViolationKind::AxiomViolation, "group-inverse", vec![name(a)]);
            }
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        report.push(
                            ViolationKind::AxiomViolation,
                            "group-assoc",
                            vec![name(a), name(b), name(c)],
                        );
                    }
                }
            }
        }
        report
    }

    /// Sorted multiset of element orders, an isomorphism invariant.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// A generating set chosen greedily, highest element order first.
    pub fn generators(&self) -> Vec<usize> {
        let n = self.order();
        let mut by_order: Vec<usize> = (0..n).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut span = vec![false; n];
        span[self.identity] = true;
        for a in by_order {
            if !span[a] {
                gens.push(a);
                span = self.span(&gens);
            }
        }
        gens
    }

    fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    /// Checks that `map` is a homomorphism `self -> target`.
    pub fn is_homomorphism(&self, target: &FinGroup, map: &[usize]) -> bool {
        let n = self.order();
        map.len() == n
            && (0..n).all(|a| (0..n).all(|b| map[self.mul(a, b)] == target.mul(map[a], map[b])))
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Extends generator images to the subgroup they generate by walking the
/// Cayley graph. Returns `None` when two words collide inconsistently.
fn extend_images(a: &FinGroup, b: &FinGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; a.order()];
    map[a.identity] = b.identity;
    let mut queue = VecDeque::from([a.identity]);
    while let Some(x) = queue.pop_front() {
        for (&g, &img) in gens.iter().zip(images) {
            let y = a.mul(x, g);
            let fy = b.mul(map[x], img);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

/// Searches for an isomorphism `a -> b` by assigning images to a generating
/// set of `a`, pruned by element orders. Each candidate image costs one
/// budget tick.
pub fn group_isomorphism(a: &FinGroup, b: &FinGroup, meter: &mut Meter) -> Search<Vec<usize>> {
    if a.order() != b.order() || a.order_profile() != b.order_profile() || a.is_abelian() != b.is_abelian() {
        return Search::NotFound;
    }
    let gens = a.generators();
    let gen_orders: Vec<usize> = gens.iter().map(|&g| a.element_order(g)).collect();
    let b_orders: Vec<usize> = (0..b.order()).map(|x| b.element_order(x)).collect();

    fn go(
        a: &FinGroup,
        b: &FinGroup,
        gens: &[usize],
        gen_orders: &[usize],
        b_orders: &[usize],
        images: &mut Vec<usize>,
        meter: &mut Meter,
    ) -> Result<Option<Vec<usize>>, OutOfBudget> {
        let k = images.len();
        if k == gens.len() {
            let map = match extend_images(a, b, gens, images) {
                Some(m) => m,
                None => return Ok(None),
            };
            let mut hit = vec![false; b.order()];
            for &y in &map {
                if y == usize::MAX || hit[y] {
                    return Ok(None);
                }
                hit[y] = true;
            }
            return Ok(Some(map));
        }
        for cand in 0..b.order() {
            if b_orders[cand] != gen_orders[k] {
                continue;
            }
            meter.tick()?;
            images.push(cand);
            // the partial assignment must already be consistent and injective
            let ok = extend_images(a, b, &gens[..=k], images).is_some_and(|m| {
                let mut hit = vec![false; b.order()];
                m.iter().filter(|&&y| y != usize::MAX).all(|&y| !std::mem::replace(&mut hit[y], true))
            });
            if ok {
                if let Some(found) = go(a, b, gens, gen_orders, b_orders, images, meter)? {
                    return Ok(Some(found));
                }
            }
            images.pop();
        }
        Ok(None)
    }

    match go(a, b, &gens, &gen_orders, &b_orders, &mut Vec::new(), meter) {
        Ok(Some(map)) => {
            assert!(a.is_homomorphism(b, &map), "internal: group isomorphism witness is not a homomorphism");
            Search::Found(map)
        }
        Ok(None) => Search::NotFound,
        Err(OutOfBudget) => Search::BudgetExceeded,
    }
}

/// Every homomorphism `a -> b`, enumerated through generator images whose
/// orders divide the generator orders.
pub fn homomorphisms(a: &FinGroup, b: &FinGroup) -> Vec<Vec<usize>> {
    let gens = a.generators();
    let mut out = Vec::new();
    let mut images = Vec::new();
    fn go(a: &FinGroup, b: &FinGroup, gens: &[usize], images: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let k = images.len();
        if k == gens.len() {
            if let Some(map) = extend_images(a, b, gens, images) {
                out.push(map);
            }
            return;
        }
        let ord = a.element_order(gens[k]);
        for cand in 0..b.order() {
            if !ord.is_multiple_of(b.element_order(cand)) {
                continue;
            }
            images.push(cand);
            if extend_images(a, b, &gens[..=k], images).is_some() {
                go(a, b, gens, images, out);
            }
            images.pop();
        }
    }
    go(a, b, &gens, &mut images, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_isomorphic(a: &FinGroup, b: &FinGroup) -> bool {
        if a.order() != b.order() {
            return false;
        }
        permutations(a.order()).into_iter().any(|p| a.is_homomorphism(b, &p))
    }

    #[test]
    fn standard_groups_validate() {
        for g in [
            FinGroup::cyclic(1),
            FinGroup::cyclic(6),
            FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2)),
            FinGroup::symmetric(3),
            FinGroup::dihedral(4),
            FinGroup::quaternion(),
        ] {
            assert!(g.validate().is_ok(), "{:?}", g.validate());
        }
        assert_eq!(FinGroup::symmetric(3).order(), 6);
        assert!(!FinGroup::symmetric(3).is_abelian());
    }

    #[test]
    fn z4_is_not_klein() {
        let z4 = FinGroup::cyclic(4);
        let v4 = FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2));
        assert!(!brute_force_isomorphic(&z4, &v4));
        assert_eq!(group_isomorphism(&z4, &v4, &mut Meter::default()), Search::NotFound);
    }

    #[test]
    fn iso_search_agrees_with_brute_force() {
        let z6 = FinGroup::cyclic(6);
        let z2z3 = FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(3));
        let s3 = FinGroup::symmetric(3);
        let d3 = FinGroup::dihedral(3);
        for (a, b) in [(&z6, &z2z3), (&z6, &s3), (&s3, &d3), (&z2z3, &d3)] {
            let fast = group_isomorphism(a, b, &mut Meter::default());
            assert_eq!(fast.is_found(), brute_force_isomorphic(a, b));
            if let Search::Found(map) = fast {
                assert!(a.is_homomorphism(b, &map));
            }
        }
        let d4 = FinGroup::dihedral(4);
        let q8 = FinGroup::quaternion();
        assert_eq!(group_isomorphism(&d4, &q8, &mut Meter::default()), Search::NotFound);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = FinGroup::product(&FinGroup::cyclic(2), &FinGroup::product(&FinGroup::cyclic(2), &FinGroup::cyclic(2)));
        let b = a.clone();
        assert_eq!(group_isomorphism(&a, &b, &mut Meter::new(1)), Search::BudgetExceeded);
    }

    #[test]
    fn homomorphism_counts() {
        // Hom(Z/4, Z/2) has 2 elements, Hom(Z/2xZ/2, Z/2) has 4, Hom(S3, Z/2) has 2.
        let z2 = FinGroup::cyclic(2);
        assert_eq!(homomorphisms(&FinGroup::cyclic(4), &z2).len(), 2);
        assert_eq!(homomorphisms(&FinGroup::product(&z2, &z2), &z2).len(), 4);
        assert_eq!(homomorphisms(&FinGroup::symmetric(3), &z2).len(), 2);
        for h in homomorphisms(&FinGroup::symmetric(3), &FinGroup::cyclic(6)) {
            assert!(FinGroup::symmetric(3).is_homomorphism(&FinGroup::cyclic(6), &h));
        }
    }
}
