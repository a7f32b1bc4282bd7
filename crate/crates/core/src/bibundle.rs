//! Bibundles between finite groupoids: a left `G`-action and a right
//! `H`-action on one carrier, principal on the right.

use std::collections::HashMap;
use std::sync::Arc;

use crate::action::{equivariant_bijection, Action, Side};
use crate::bundle::{principal_report, PrincipalBundle};
use crate::construct::tuple_id;
use crate::error::{Error, StructureError};
use crate::functor::GroupoidMap;
use crate::groupoid::{check_unique, FinGroupoid};
use crate::quotient::DisjointSets;
use crate::report::{Report, ViolationKind};
use crate::search::{Meter, Search};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bibundle {
    carrier: Vec<String>,
    left: Action,
    right: Action,
}

impl Bibundle {
    pub fn new(carrier: Vec<String>, left: Action, right: Action) -> Result<Self, StructureError> {
        check_unique("carrier", &carrier)?;
        if left.side() != Side::Left || right.side() != Side::Right {
            return Err(StructureError::Shape("bibundle actions are on the wrong sides".into()));
        }
        if left.len() != carrier.len() || right.len() != carrier.len() {
            return Err(StructureError::Shape("actions do not cover the carrier".into()));
        }
        Ok(Self { carrier, left, right })
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn left_groupoid(&self) -> &Arc<FinGroupoid> {
        self.left.groupoid()
    }

    pub fn right_groupoid(&self) -> &Arc<FinGroupoid> {
        self.right.groupoid()
    }

    pub fn left(&self) -> &Action {
        &self.left
    }

    pub fn right(&self) -> &Action {
        &self.right
    }

    pub fn left_mut(&mut self) -> &mut Action {
        &mut self.left
    }

    pub fn right_mut(&mut self) -> &mut Action {
        &mut self.right
    }

    /// `a_G(p)`.
    pub fn left_anchor(&self, p: usize) -> usize {
        self.left.anchor(p)
    }

    /// `a_H(p)`.
    pub fn right_anchor(&self, p: usize) -> usize {
        self.right.anchor(p)
    }

    /// `g.p`.
    pub fn left_act(&self, g: usize, p: usize) -> Option<usize> {
        self.left.act(p, g)
    }

    /// `p.h`.
    pub fn right_act(&self, p: usize, h: usize) -> Option<usize> {
        self.right.act(p, h)
    }

    /// The right action as a principal bundle over the objects of `G`.
    pub fn right_bundle(&self) -> PrincipalBundle {
        PrincipalBundle::new(
            self.carrier.clone(),
            self.left_groupoid().objects().to_vec(),
            self.left.anchors().to_vec(),
            self.right.clone(),
        )
        .expect("carrier ids are unique and anchors are objects")
    }

    /// Both action laws, right principality over `a_G`, invariance of
    /// `a_H` under `G`, and commuting actions.
    pub fn validate(&self) -> Report {
        let mut r = self.left.validate(&self.carrier);
        let g = self.left_groupoid();
        r.extend(principal_report(&self.carrier, g.objects(), self.left.anchors(), &self.right));
        if !r.is_ok() {
            return r;
        }
        let h = self.right_groupoid();
        for p in 0..self.len() {
            for a in 0..g.num_arrows() {
                let Some(q) = self.left_act(a, p) else { continue };
                if self.right_anchor(q) != self.right_anchor(p) {
                    r.push(ViolationKind::NotInvariant, "left-invariant-anchor", vec![self.carrier[p].clone(), g.arrow_id(a).into()]);
                }
                for b in 0..h.num_arrows() {
                    let via_left = self.right_act(q, b);
                    let via_right = self.right_act(p, b).and_then(|s| self.left_act(a, s));
                    if via_left != via_right {
                        r.push(
                            ViolationKind::NotCompatible,
                            "actions-commute",
                            vec![self.carrier[p].clone(), g.arrow_id(a).into(), h.arrow_id(b).into()],
                        );
                    }
                }
            }
        }
        r
    }

    /// Validation plus principality of the left action over `a_H`.
    pub fn biprincipality(&self) -> Report {
        let mut r = self.validate();
        if !r.is_ok() {
            return r;
        }
        let mirrored = principal_report(&self.carrier, self.right_groupoid().objects(), self.right.anchors(), &self.left);
        for v in mirrored.violations {
            let rule = match v.rule {
                "proj-surjective" => "left-surjective",
                "principal-free" => "left-principal-free",
                "principal-transitive" => "left-principal-transitive",
                other => other,
            };
            r.push(v.kind, rule, v.witnesses);
        }
        r
    }

    pub fn is_biprincipal(&self) -> bool {
        self.biprincipality().is_ok()
    }
}

/// The bibundle `<m>`: pairs `(u|h)` with `m(u) = tgt(h)`, anchored at `u`
/// and `src(h)`, with `g.(u,h) = (tgt g, m(g) h)` and `(u,h).k = (u, h k)`.
pub fn bibundle_from_functor(m: &GroupoidMap) -> Bibundle {
    let (g, h) = (m.dom(), m.cod());
    let pairs: Vec<(usize, usize)> = (0..g.num_objects())
        .flat_map(|u| (0..h.num_arrows()).filter(move |&a| h.tgt(a) == m.object(u)).map(move |a| (u, a)))
        .collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let carrier = pairs.iter().map(|&(u, a)| tuple_id(&[g.object_id(u), h.arrow_id(a)])).collect();
    let left = Action::from_fn(g.clone(), Side::Left, pairs.iter().map(|&(u, _)| u).collect(), |i, a| {
        let (u, k) = pairs[i];
        if g.src(a) != u {
            return None;
        }
        h.comp(m.arrow(a), k).and_then(|c| index.get(&(g.tgt(a), c)).copied())
    })
    .expect("tables sized from the carrier");
    let right = Action::from_fn(h.clone(), Side::Right, pairs.iter().map(|&(_, k)| h.src(k)).collect(), |i, b| {
        let (u, k) = pairs[i];
        h.comp(k, b).map(|c| index[&(u, c)])
    })
    .expect("tables sized from the carrier");
    Bibundle::new(carrier, left, right).expect("pair ids are unique")
}

/// Anchor-matched pairs from a right `K`-set and a left `K`-set, modulo
/// `(x.k, y) ~ (x, k.y)`.
struct Balanced {
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    label: Vec<usize>,
    /// Least pair of each class.
    reps: Vec<usize>,
}

impl Balanced {
    fn new(first: &Action, second: &Action) -> Self {
        let k = first.groupoid();
        let pairs: Vec<(usize, usize)> = (0..first.len())
            .flat_map(|x| (0..second.len()).filter(move |&y| first.anchor(x) == second.anchor(y)).map(move |y| (x, y)))
            .collect();
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut sets = DisjointSets::new(pairs.len());
        for (i, &(x, y)) in pairs.iter().enumerate() {
            // (x, y) ~ (x.a, a^-1.y) for a ending at the shared anchor
            for a in 0..k.num_arrows() {
                if let (Some(xa), Some(ay)) = (first.act(x, a), second.act(y, k.inv(a))) {
                    sets.union(i, index[&(xa, ay)]);
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
        Self { pairs, index, label, reps }
    }

    fn class(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&(x, y)).map(|&i| self.label[i])
    }

    fn rep(&self, c: usize) -> (usize, usize) {
        self.pairs[self.reps[c]]
    }

    fn lookup(&self) -> HashMap<(usize, usize), usize> {
        self.index.iter().map(|(&pq, &i)| (pq, self.label[i])).collect()
    }

    /// Recomputes an induced action from every member of every class and
    /// checks it agrees with the representative's answer.
    fn assert_well_defined(&self, arrows: usize, via: impl Fn(usize, usize, usize) -> Option<usize>, on_class: impl Fn(usize, usize) -> Option<usize>) {
        for (i, &(x, y)) in self.pairs.iter().enumerate() {
            for a in 0..arrows {
                assert_eq!(via(x, y, a), on_class(self.label[i], a), "induced action depends on the representative");
            }
        }
    }
}

/// The composite `q . p = (P x_H0 Q)/H`, with the class of each pair.
#[derive(Debug, Clone)]
pub struct Composite {
    pub bibundle: Bibundle,
    class_of: HashMap<(usize, usize), usize>,
}

impl Composite {
    pub fn class(&self, x: usize, y: usize) -> Option<usize> {
        self.class_of.get(&(x, y)).copied()
    }
}

pub fn compose_bibundles(p: &Bibundle, q: &Bibundle) -> Result<Composite, Error> {
    if **p.right_groupoid() != **q.left_groupoid() {
        return Err(Error::MiddleGroupoidMismatch);
    }
    let bal = Balanced::new(&p.right, &q.left);
    let n = bal.reps.len();
    let carrier = (0..n).map(|c| {
        let (x, y) = bal.rep(c);
        tuple_id(&[&p.carrier[x], &q.carrier[y]])
    });
    let carrier: Vec<String> = carrier.collect();
    let g = p.left_groupoid();
    let h2 = q.right_groupoid();
    let left_via = |x: usize, y: usize, a: usize| p.left_act(a, x).and_then(|xa| bal.class(xa, y));
    let right_via = |x: usize, y: usize, b: usize| q.right_act(y, b).and_then(|yb| bal.class(x, yb));
    let left_on = |c: usize, a: usize| {
        let (x, y) = bal.rep(c);
        left_via(x, y, a)
    };
    let right_on = |c: usize, b: usize| {
        let (x, y) = bal.rep(c);
        right_via(x, y, b)
    };
    if cfg!(debug_assertions) {
        bal.assert_well_defined(g.num_arrows(), left_via, left_on);
        bal.assert_well_defined(h2.num_arrows(), right_via, right_on);
    }
    let left = Action::from_fn(g.clone(), Side::Left, (0..n).map(|c| p.left_anchor(bal.rep(c).0)).collect(), left_on)?;
    let right = Action::from_fn(h2.clone(), Side::Right, (0..n).map(|c| q.right_anchor(bal.rep(c).1)).collect(), right_on)?;
    Ok(Composite { bibundle: Bibundle::new(carrier, left, right)?, class_of: bal.lookup() })
}

/// `BP(b) = (Q x_G0 P)/G` over the base of `b`.
#[derive(Debug, Clone)]
pub struct Applied {
    pub bundle: PrincipalBundle,
    class_of: HashMap<(usize, usize), usize>,
}

impl Applied {
    /// The class of `(q, x)` with `q` in the bundle and `x` in the bibundle.
    pub fn class(&self, q: usize, x: usize) -> Option<usize> {
        self.class_of.get(&(q, x)).copied()
    }
}

pub fn apply_bibundle(p: &Bibundle, b: &PrincipalBundle) -> Result<Applied, Error> {
    if **p.left_groupoid() != **b.groupoid() {
        return Err(Error::GroupoidMismatch);
    }
    let bal = Balanced::new(b.action(), &p.left);
    let n = bal.reps.len();
    let carrier: Vec<String> = (0..n)
        .map(|c| {
            let (q, x) = bal.rep(c);
            tuple_id(&[&b.carrier()[q], &p.carrier[x]])
        })
        .collect();
    let h = p.right_groupoid();
    let via = |q: usize, x: usize, k: usize| p.right_act(x, k).and_then(|xk| bal.class(q, xk));
    let on = |c: usize, k: usize| {
        let (q, x) = bal.rep(c);
        via(q, x, k)
    };
    if cfg!(debug_assertions) {
        bal.assert_well_defined(h.num_arrows(), via, on);
    }
    let anchor = (0..n).map(|c| p.right_anchor(bal.rep(c).1)).collect();
    let action = Action::from_fn(h.clone(), Side::Right, anchor, on)?;
    let proj = (0..n).map(|c| b.proj(bal.rep(c).0)).collect();
    let bundle = PrincipalBundle::new(carrier, b.base().to_vec(), proj, action)?;
    Ok(Applied { bundle, class_of: bal.lookup() })
}

/// The `H-G` bibundle on the same carrier: `h.x = x.h^-1`, `x.g = g^-1.x`.
pub fn invert_bibundle(p: &Bibundle) -> Result<Bibundle, Error> {
    if !p.is_biprincipal() {
        return Err(Error::NotBiprincipal);
    }
    let (g, h) = (p.left_groupoid(), p.right_groupoid());
    let left = Action::from_fn(h.clone(), Side::Left, p.right.anchors().to_vec(), |x, b| p.right_act(x, h.inv(b)))?;
    let right = Action::from_fn(g.clone(), Side::Right, p.left.anchors().to_vec(), |x, a| p.left_act(g.inv(a), x))?;
    Ok(Bibundle::new(p.carrier.clone(), left, right)?)
}

/// Searches for a carrier bijection `p -> q` preserving both anchors and
/// commuting with both actions.
pub fn bibundle_isomorphism(p: &Bibundle, q: &Bibundle, meter: &mut Meter) -> Result<Search<Vec<usize>>, Error> {
    if **p.left_groupoid() != **q.left_groupoid() || **p.right_groupoid() != **q.right_groupoid() {
        return Err(Error::GroupoidMismatch);
    }
    let labels = |b: &Bibundle| -> Vec<(usize, usize)> { (0..b.len()).map(|x| (b.left_anchor(x), b.right_anchor(x))).collect() };
    let (la, lb) = (labels(p), labels(q));
    // anchor-fiber sizes must agree before any search
    let mut sa = la.clone();
    let mut sb = lb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(Search::NotFound);
    }
    let tables = [
        (p.left.table(), q.left.table(), p.left_groupoid().num_arrows()),
        (p.right.table(), q.right.table(), p.right_groupoid().num_arrows()),
    ];
    Ok(equivariant_bijection(&la, &lb, &tables, meter))
}
