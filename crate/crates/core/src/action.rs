//! Groupoid actions on finite sets.
//!
//! A right action `p.h` is defined when `anchor(p) = tgt(h)` and lands over
//! `src(h)`. A left action `g.p` is defined when `src(g) = anchor(p)` and
//! lands over `tgt(g)`; it is the same thing as a right action of the
//! opposite groupoid.

use std::sync::Arc;

use crate::error::StructureError;
use crate::groupoid::{FinGroupoid, NONE};
use crate::report::{Report, ViolationKind};
use crate::search::{Meter, Search};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// An action of a groupoid on `0..len`, stored as a dense table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    groupoid: Arc<FinGroupoid>,
    side: Side,
    anchor: Vec<usize>,
    /// `table[p * arrows + h]`, [`NONE`] where undefined.
    table: Vec<usize>,
}

impl Action {
    /// Tabulates `act(p, h)` for every element and arrow.
    pub fn from_fn(
        groupoid: Arc<FinGroupoid>,
        side: Side,
        anchor: Vec<usize>,
        act: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, StructureError> {
        let na = groupoid.num_arrows();
        let mut table = vec![NONE; anchor.len() * na];
        for p in 0..anchor.len() {
            for h in 0..na {
                if let Some(q) = act(p, h) {
                    table[p * na + h] = q;
                }
            }
        }
        Self::from_table(groupoid, side, anchor, table)
    }

    pub fn from_table(
        groupoid: Arc<FinGroupoid>,
        side: Side,
        anchor: Vec<usize>,
        table: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let n = anchor.len();
        if table.len() != n * groupoid.num_arrows() {
            return Err(StructureError::Shape("action table does not match carrier and arrows".into()));
        }
        if anchor.iter().any(|&x| x >= groupoid.num_objects()) {
            return Err(StructureError::Shape("anchor lands outside the objects".into()));
        }
        if table.iter().any(|&q| q != NONE && q >= n) {
            return Err(StructureError::Shape("action result outside the carrier".into()));
        }
        Ok(Self { groupoid, side, anchor, table })
    }

    pub fn groupoid(&self) -> &Arc<FinGroupoid> {
        &self.groupoid
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn len(&self) -> usize {
        self.anchor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchor.is_empty()
    }

    pub fn anchor(&self, p: usize) -> usize {
        self.anchor[p]
    }

    pub fn anchors(&self) -> &[usize] {
        &self.anchor
    }

    pub(crate) fn table(&self) -> &[usize] {
        &self.table
    }

    /// `p.h` for a right action, `h.p` for a left one.
    pub fn act(&self, p: usize, h: usize) -> Option<usize> {
        let q = self.table[p * self.groupoid.num_arrows() + h];
        (q != NONE).then_some(q)
    }

    /// Mutation hook for seeded-failure tests.
    pub fn set(&mut self, p: usize, h: usize, q: Option<usize>) {
        let na = self.groupoid.num_arrows();
        self.table[p * na + h] = q.unwrap_or(NONE);
    }

    pub fn set_anchor(&mut self, p: usize, x: usize) {
        self.anchor[p] = x;
    }

    /// The endpoint of `h` that must match the anchor, and the one the
    /// result lies over.
    fn ends(&self, h: usize) -> (usize, usize) {
        let g = &self.groupoid;
        match self.side {
            Side::Right => (g.tgt(h), g.src(h)),
            Side::Left => (g.src(h), g.tgt(h)),
        }
    }

    /// Acting by `a` then `b` equals acting by the returned arrow.
    fn combined(&self, a: usize, b: usize) -> Option<usize> {
        match self.side {
            Side::Right => self.groupoid.comp(a, b),
            Side::Left => self.groupoid.comp(b, a),
        }
    }

    /// Checks the action laws. `carrier` names elements in witnesses.
    pub fn validate(&self, carrier: &[String]) -> Report {
        let mut r = Report::new();
        let g = &*self.groupoid;
        let na = g.num_arrows();
        let name = |p: usize| carrier.get(p).cloned().unwrap_or_else(|| p.to_string());
        use ViolationKind::NotAnAction;
        let mut domain_ok = true;
        for p in 0..self.len() {
            for h in 0..na {
                let (need, over) = self.ends(h);
                match (self.act(p, h), self.anchor[p] == need) {
                    (Some(q), true) => {
                        if self.anchor[q] != over {
                            r.push(NotAnAction, "action-anchor", vec![name(p), g.arrow_id(h).into()]);
                        }
                    }
                    (None, false) => {}
                    _ => {
                        domain_ok = false;
                        r.push(NotAnAction, "action-domain", vec![name(p), g.arrow_id(h).into()]);
                    }
                }
            }
            if self.act(p, g.unit(self.anchor[p])) != Some(p) && domain_ok {
                r.push(NotAnAction, "action-unit", vec![name(p)]);
            }
        }
        if !domain_ok {
            return r;
        }
        for p in 0..self.len() {
            for a in 0..na {
                let Some(q) = self.act(p, a) else { continue };
                for b in 0..na {
                    let Some(s) = self.act(q, b) else { continue };
                    let lawful = self.combined(a, b).is_some_and(|c| self.act(p, c) == Some(s));
                    if !lawful {
                        r.push(NotAnAction, "action-assoc", vec![name(p), g.arrow_id(a).into(), g.arrow_id(b).into()]);
                    }
                }
            }
        }
        r
    }
}

/// Finds a bijection between two finite sets that preserves `labels` and
/// commutes with every pair of action tables `(on_a, on_b, stride)`.
///
/// Choices are made one orbit at a time; a single choice determines the
/// image of the whole orbit, so the branching is over orbit representatives.
pub(crate) fn equivariant_bijection<L: PartialEq>(
    labels_a: &[L],
    labels_b: &[L],
    tables: &[(&[usize], &[usize], usize)],
    meter: &mut Meter,
) -> Search<Vec<usize>> {
    let n = labels_a.len();
    if labels_b.len() != n {
        return Search::NotFound;
    }

    fn propagate<L: PartialEq>(
        x: usize,
        y: usize,
        fwd: &mut [usize],
        bwd: &mut [usize],
        la: &[L],
        lb: &[L],
        tables: &[(&[usize], &[usize], usize)],
    ) -> bool {
        fwd[x] = y;
        bwd[y] = x;
        let mut stack = vec![(x, y)];
        while let Some((x, y)) = stack.pop() {
            for &(ta, tb, stride) in tables {
                for a in 0..stride {
                    let (sx, sy) = (ta[x * stride + a], tb[y * stride + a]);
                    match (sx == NONE, sy == NONE) {
                        (true, true) => continue,
                        (false, false) => {}
                        _ => return false,
                    }
                    if fwd[sx] == NONE && bwd[sy] == NONE {
                        if la[sx] != lb[sy] {
                            return false;
                        }
                        fwd[sx] = sy;
                        bwd[sy] = sx;
                        stack.push((sx, sy));
                    } else if fwd[sx] != sy {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn go<L: PartialEq>(
        fwd: Vec<usize>,
        bwd: Vec<usize>,
        la: &[L],
        lb: &[L],
        tables: &[(&[usize], &[usize], usize)],
        meter: &mut Meter,
    ) -> Search<Vec<usize>> {
        let Some(x) = fwd.iter().position(|&y| y == NONE) else {
            return Search::Found(fwd);
        };
        for y in 0..lb.len() {
            if bwd[y] != NONE || la[x] != lb[y] {
                continue;
            }
            if meter.tick().is_err() {
                return Search::BudgetExceeded;
            }
            let (mut f, mut b) = (fwd.clone(), bwd.clone());
            if !propagate(x, y, &mut f, &mut b, la, lb, tables) {
                continue;
            }
            match go(f, b, la, lb, tables, meter) {
                Search::NotFound => {}
                other => return other,
            }
        }
        Search::NotFound
    }

    go(vec![NONE; n], vec![NONE; n], labels_a, labels_b, tables, meter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FinGroup;

    fn z3() -> Arc<FinGroupoid> {
        Arc::new(FinGroupoid::from_group(&FinGroup::cyclic(3), "pt"))
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn translation_is_an_action_on_both_sides() {
        let g = z3();
        for side in [Side::Left, Side::Right] {
            let a = Action::from_fn(g.clone(), side, vec![0; 3], |p, h| Some((p + h) % 3)).unwrap();
            assert!(a.validate(&names(3)).is_ok());
        }
    }

    #[test]
    fn left_and_right_differ_for_nonabelian_groups() {
        let s3 = FinGroup::symmetric(3);
        let g = Arc::new(FinGroupoid::from_group(&s3, "pt"));
        // p.h = p*h is a right action, and not a left one
        let right = Action::from_fn(g.clone(), Side::Right, vec![0; 6], |p, h| Some(s3.mul(p, h))).unwrap();
        assert!(right.validate(&names(6)).is_ok());
        let left = Action::from_fn(g, Side::Left, vec![0; 6], |p, h| Some(s3.mul(p, h))).unwrap();
        assert!(left.validate(&names(6)).has_rule("action-assoc"));
    }

    #[test]
    fn broken_unit_and_domain() {
        let g = z3();
        let mut a = Action::from_fn(g.clone(), Side::Right, vec![0; 3], |p, h| Some((p + h) % 3)).unwrap();
        a.set(1, 0, Some(2));
        assert!(a.validate(&names(3)).has_rule("action-unit"));
        a.set(1, 0, None);
        assert!(a.validate(&names(3)).has_rule("action-domain"));
    }

    #[test]
    fn orbitwise_bijection() {
        let g = z3();
        let a = Action::from_fn(g.clone(), Side::Right, vec![0; 3], |p, h| Some((p + h) % 3)).unwrap();
        let b = Action::from_fn(g, Side::Right, vec![0; 3], |p, h| Some((p + 3 - h) % 3)).unwrap();
        let labels = [0, 0, 0];
        let f = equivariant_bijection(&labels, &labels, &[(a.table(), b.table(), 3)], &mut Meter::default())
            .found()
            .unwrap();
        for p in 0..3 {
            for h in 0..3 {
                assert_eq!(f[a.act(p, h).unwrap()], b.act(f[p], h).unwrap());
            }
        }
        let fixed = Action::from_fn(z3(), Side::Right, vec![0; 3], |p, _| Some(p)).unwrap();
        let r = equivariant_bijection(&labels, &labels, &[(a.table(), fixed.table(), 3)], &mut Meter::default());
        assert_eq!(r, Search::NotFound);
    }
}
