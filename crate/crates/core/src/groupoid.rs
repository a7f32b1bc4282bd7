//! Finite groupoids presented by tables.
//!
//! Composition is written in functional order throughout: `comp(g, f)` is
//! "`f` first, then `g`" and is defined exactly when `tgt(f) == src(g)`.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, StructureError};
use crate::group::FinGroup;
use crate::quotient::DisjointSets;
use crate::report::{Report, ViolationKind};

pub(crate) const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    objects: Vec<String>,
    arrows: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    /// Row-major `comp[g * n + f]`, `NONE` where undefined.
    comp: Vec<usize>,
}

/// Incremental, id-based construction of a [`FinGroupoid`].
///
/// Every referenced id must be declared before use; the finished tables are
/// structurally sound but the groupoid axioms are not checked.
#[derive(Debug, Default)]
pub struct GroupoidBuilder {
    objects: Vec<String>,
    object_ix: HashMap<String, usize>,
    arrows: Vec<String>,
    arrow_ix: HashMap<String, usize>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    comp: Vec<(usize, usize, usize)>,
}

impl GroupoidBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, id: &str) -> Result<usize, StructureError> {
        if self.object_ix.contains_key(id) {
            return Err(StructureError::DuplicateId { kind: "object", id: id.into() });
        }
        let ix = self.objects.len();
        self.objects.push(id.into());
        self.object_ix.insert(id.into(), ix);
        Ok(ix)
    }

    pub fn arrow(&mut self, id: &str, src: &str, tgt: &str) -> Result<usize, StructureError> {
        if self.arrow_ix.contains_key(id) {
            return Err(StructureError::DuplicateId { kind: "arrow", id: id.into() });
        }
        let s = self.object_ref(src, id)?;
        let t = self.object_ref(tgt, id)?;
        let ix = self.arrows.len();
        self.arrows.push(id.into());
        self.arrow_ix.insert(id.into(), ix);
        self.src.push(s);
        self.tgt.push(t);
        Ok(ix)
    }

    fn object_ref(&self, id: &str, context: &str) -> Result<usize, StructureError> {
        self.object_ix
            .get(id)
            .copied()
            .ok_or_else(|| StructureError::DanglingId { id: id.into(), context: format!("arrow `{context}`") })
    }

    fn arrow_ref(&self, id: &str, context: &str) -> Result<usize, StructureError> {
        self.arrow_ix
            .get(id)
            .copied()
            .ok_or_else(|| StructureError::DanglingId { id: id.into(), context: context.into() })
    }

    pub fn unit(&mut self, object: &str, arrow: &str) -> Result<(), StructureError> {
        let x = self.object_ix.get(object).copied().ok_or_else(|| StructureError::DanglingId {
            id: object.into(),
            context: "unit table".into(),
        })?;
        let a = self.arrow_ref(arrow, "unit table")?;
        if self.unit.len() < self.objects.len() {
            self.unit.resize(self.objects.len(), NONE);
        }
        if self.unit[x] != NONE {
            return Err(StructureError::DuplicateId { kind: "unit entry", id: object.into() });
        }
        self.unit[x] = a;
        Ok(())
    }

    pub fn inverse(&mut self, arrow: &str, inverse: &str) -> Result<(), StructureError> {
        let f = self.arrow_ref(arrow, "inverse table")?;
        let g = self.arrow_ref(inverse, "inverse table")?;
        if self.inv.len() < self.arrows.len() {
            self.inv.resize(self.arrows.len(), NONE);
        }
        if self.inv[f] != NONE {
            return Err(StructureError::DuplicateId { kind: "inverse entry", id: arrow.into() });
        }
        self.inv[f] = g;
        Ok(())
    }

    /// Records `comp(g, f) = h`.
    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> Result<(), StructureError> {
        let g = self.arrow_ref(g, "composition table")?;
        let f = self.arrow_ref(f, "composition table")?;
        let h = self.arrow_ref(h, "composition table")?;
        self.comp.push((g, f, h));
        Ok(())
    }

    pub fn build(self) -> Result<FinGroupoid, StructureError> {
        let mut unit = self.unit;
        unit.resize(self.objects.len(), NONE);
        let mut inv = self.inv;
        inv.resize(self.arrows.len(), NONE);
        if let Some(x) = unit.iter().position(|&u| u == NONE) {
            return Err(StructureError::MissingEntry { table: "unit", id: self.objects[x].clone() });
        }
        if let Some(f) = inv.iter().position(|&i| i == NONE) {
            return Err(StructureError::MissingEntry { table: "inverse", id: self.arrows[f].clone() });
        }
        let n = self.arrows.len();
        let mut comp = vec![NONE; n * n];
        for (g, f, h) in self.comp {
            if comp[g * n + f] != NONE {
                return Err(StructureError::DuplicateId {
                    kind: "composition entry",
                    id: format!("{}.{}", self.arrows[g], self.arrows[f]),
                });
            }
            comp[g * n + f] = h;
        }
        Ok(FinGroupoid { objects: self.objects, arrows: self.arrows, src: self.src, tgt: self.tgt, unit, inv, comp })
    }
}

impl FinGroupoid {
    /// Assembles a groupoid from index tables. `comp(g, f)` is called for
    /// every composable pair; `None` leaves the entry undefined.
    pub fn from_indexed(
        objects: Vec<String>,
        arrows: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        comp: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self, StructureError> {
        let (no, na) = (objects.len(), arrows.len());
        if src.len() != na || tgt.len() != na || inv.len() != na || unit.len() != no {
            return Err(StructureError::Shape("table lengths disagree with id counts".into()));
        }
        if src.iter().chain(&tgt).any(|&x| x >= no) || unit.iter().chain(&inv).any(|&a| a >= na) {
            return Err(StructureError::Shape("index out of range".into()));
        }
        check_unique("object", &objects)?;
        check_unique("arrow", &arrows)?;
        let mut table = vec![NONE; na * na];
        for f in 0..na {
            for g in 0..na {
                if tgt[f] == src[g] {
                    if let Some(h) = comp(g, f) {
                        if h >= na {
                            return Err(StructureError::Shape("composite out of range".into()));
                        }
                        table[g * na + f] = h;
                    }
                }
            }
        }
        Ok(Self { objects, arrows, src, tgt, unit, inv, comp: table })
    }

    /// The groupoid with only identity arrows over `objects`.
    pub fn unit_groupoid<S: AsRef<str>>(objects: &[S]) -> Self {
        let ids: Vec<String> = objects.iter().map(|s| s.as_ref().to_string()).collect();
        let n = ids.len();
        Self::from_indexed(ids.clone(), ids, (0..n).collect(), (0..n).collect(), (0..n).collect(), (0..n).collect(), |g, f| {
            (g == f).then_some(g)
        })
        .expect("unit groupoid ids must be distinct")
    }

    /// The one-object groupoid whose arrows are the elements of `group`.
    pub fn from_group(group: &FinGroup, object: &str) -> Self {
        let n = group.order();
        Self::from_indexed(
            vec![object.to_string()],
            group.elements().to_vec(),
            vec![0; n],
            vec![0; n],
            vec![group.identity()],
            (0..n).map(|a| group.inverse(a)).collect(),
            |g, f| Some(group.mul(g, f)),
        )
        .expect("group element names must be distinct")
    }

    /// Action groupoid of a left action `act(g, x)` of `group` on `set`.
    ///
    /// Arrows are pairs `(g|x)` running `x -> g.x`; `comp((h|g.x), (g|x)) = (hg|x)`.
    pub fn action_groupoid<S: AsRef<str>>(
        group: &FinGroup,
        set: &[S],
        act: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, Error> {
        let nx = set.len();
        let ng = group.order();
        let table: Vec<usize> = (0..ng * nx).map(|k| act(k / nx, k % nx)).collect();
        if let Some(&bad) = table.iter().find(|&&y| y >= nx) {
            return Err(Error::NotAnAction(format!("image index {bad} outside the set")));
        }
        let at = |g: usize, x: usize| table[g * nx + x];
        for x in 0..nx {
            if at(group.identity(), x) != x {
                return Err(Error::NotAnAction(format!("identity moves {}", set[x].as_ref())));
            }
            for g in 0..ng {
                for h in 0..ng {
                    if at(group.mul(g, h), x) != at(g, at(h, x)) {
                        return Err(Error::NotAnAction(format!(
                            "({} {}).{} differs from {}.({}.{})",
                            group.elements()[g],
                            group.elements()[h],
                            set[x].as_ref(),
                            group.elements()[g],
                            group.elements()[h],
                            set[x].as_ref()
                        )));
                    }
                }
            }
        }
        let objects: Vec<String> = set.iter().map(|s| s.as_ref().to_string()).collect();
        let ix = |g: usize, x: usize| g * nx + x;
        let arrows = (0..ng * nx).map(|k| format!("({}|{})", group.elements()[k / nx], objects[k % nx])).collect();
        let src = (0..ng * nx).map(|k| k % nx).collect();
        let tgt = (0..ng * nx).map(|k| at(k / nx, k % nx)).collect();
        let unit = (0..nx).map(|x| ix(group.identity(), x)).collect();
        let inv = (0..ng * nx).map(|k| ix(group.inverse(k / nx), at(k / nx, k % nx))).collect();
        let g = Self::from_indexed(objects, arrows, src, tgt, unit, inv, |second, first| {
            Some(ix(group.mul(second / nx, first / nx), first % nx))
        })?;
        Ok(g)
    }

    /// Disjoint union; ids are kept when distinct, else prefixed `l_`/`r_`.
    pub fn disjoint_union(a: &FinGroupoid, b: &FinGroupoid) -> Self {
        let clash = a.objects.iter().any(|o| b.objects.contains(o)) || a.arrows.iter().any(|x| b.arrows.contains(x));
        let tag = |side: &str, s: &String| if clash { format!("{side}_{s}") } else { s.clone() };
        let (oa, aa) = (a.num_objects(), a.num_arrows());
        let objects = a.objects.iter().map(|s| tag("l", s)).chain(b.objects.iter().map(|s| tag("r", s))).collect();
        let arrows = a.arrows.iter().map(|s| tag("l", s)).chain(b.arrows.iter().map(|s| tag("r", s))).collect();
        let src = a.src.iter().copied().chain(b.src.iter().map(|&x| x + oa)).collect();
        let tgt = a.tgt.iter().copied().chain(b.tgt.iter().map(|&x| x + oa)).collect();
        let unit = a.unit.iter().copied().chain(b.unit.iter().map(|&x| x + aa)).collect();
        let inv = a.inv.iter().copied().chain(b.inv.iter().map(|&x| x + aa)).collect();
        Self::from_indexed(objects, arrows, src, tgt, unit, inv, |g, f| match (g < aa, f < aa) {
            (true, true) => a.comp(g, f),
            (false, false) => b.comp(g - aa, f - aa).map(|h| h + aa),
            _ => None,
        })
        .expect("disjoint union of structurally sound groupoids")
    }

    /// Same groupoid with composition reversed and source/target swapped.
    pub fn opposite(&self) -> Self {
        Self {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            unit: self.unit.clone(),
            inv: self.inv.clone(),
            comp: {
                let n = self.num_arrows();
                let mut t = vec![NONE; n * n];
                for g in 0..n {
                    for f in 0..n {
                        t[g * n + f] = self.comp[f * n + g];
                    }
                }
                t
            },
        }
    }

    /// Relabels objects and arrows; indices and tables are untouched.
    pub fn relabel(&self, objects: Vec<String>, arrows: Vec<String>) -> Result<Self, StructureError> {
        if objects.len() != self.num_objects() || arrows.len() != self.num_arrows() {
            return Err(StructureError::Shape("relabeling changes counts".into()));
        }
        check_unique("object", &objects)?;
        check_unique("arrow", &arrows)?;
        Ok(Self { objects, arrows, ..self.clone() })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[String] {
        &self.arrows
    }

    pub fn object_id(&self, x: usize) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, f: usize) -> &str {
        &self.arrows[f]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a == id)
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }

    /// `comp(g, f)`, i.e. `f` then `g`.
    pub fn comp(&self, g: usize, f: usize) -> Option<usize> {
        let h = self.comp[g * self.num_arrows() + f];
        (h != NONE).then_some(h)
    }

    /// Composite that the caller knows to exist in a validated groupoid.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp(g, f).unwrap_or_else(|| {
            panic!("arrows `{}` and `{}` do not compose", self.arrows[g], self.arrows[f])
        })
    }

    /// Arrows `x -> y`.
    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_arrows()).filter(move |&f| self.src[f] == x && self.tgt[f] == y)
    }

    /// Every defined composition entry as `(g, f, comp(g, f))`, row-major.
    pub fn composition_entries(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.num_arrows();
        (0..n * n).filter_map(move |k| {
            let h = self.comp[k];
            (h != NONE).then_some((k / n, k % n, h))
        })
    }

    /// Test and mutation hook: overwrite or clear one composition entry.
    pub fn set_comp(&mut self, g: usize, f: usize, h: Option<usize>) {
        let n = self.num_arrows();
        self.comp[g * n + f] = h.unwrap_or(NONE);
    }

    pub fn set_inv(&mut self, f: usize, g: usize) {
        self.inv[f] = g;
    }

    pub fn set_unit(&mut self, x: usize, f: usize) {
        self.unit[x] = f;
    }

    pub fn set_src(&mut self, f: usize, x: usize) {
        self.src[f] = x;
    }

    pub fn set_tgt(&mut self, f: usize, x: usize) {
        self.tgt[f] = x;
    }

    /// Checks every groupoid axiom by enumeration.
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let n = self.num_arrows();
        let o = |x: usize| self.objects[x].clone();
        let a = |f: usize| self.arrows[f].clone();
        use ViolationKind::*;

        for x in 0..self.num_objects() {
            let u = self.unit[x];
            if self.src[u] != x || self.tgt[u] != x {
                r.push(AxiomViolation, "unit-endpoints", vec![o(x), a(u)]);
            }
        }
        for f in 0..n {
            for g in 0..n {
                let composable = self.tgt[f] == self.src[g];
                match (composable, self.comp(g, f)) {
                    (true, None) => r.push(MissingComposite, "comp-total", vec![a(g), a(f)]),
                    (false, Some(h)) => r.push(AxiomViolation, "comp-domain", vec![a(g), a(f), a(h)]),
                    (true, Some(h)) => {
                        if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                            r.push(AxiomViolation, "comp-endpoints", vec![a(g), a(f), a(h)]);
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        if !r.is_ok() {
            // laws below assume a well-formed composition table
            return r;
        }
        let outgoing = self.outgoing();
        for f in 0..n {
            if self.compose(self.unit[self.tgt[f]], f) != f {
                r.push(AxiomViolation, "unit-left", vec![a(f)]);
            }
            if self.compose(f, self.unit[self.src[f]]) != f {
                r.push(AxiomViolation, "unit-right", vec![a(f)]);
            }
            let i = self.inv[f];
            if self.src[i] != self.tgt[f] || self.tgt[i] != self.src[f] {
                r.push(AxiomViolation, "inv-endpoints", vec![a(f), a(i)]);
            } else {
                if self.compose(i, f) != self.unit[self.src[f]] {
                    r.push(AxiomViolation, "inv-left", vec![a(f), a(i)]);
                }
                if self.compose(f, i) != self.unit[self.tgt[f]] {
                    r.push(AxiomViolation, "inv-right", vec![a(f), a(i)]);
                }
            }
            if self.inv[i] != f {
                r.push(AxiomViolation, "inv-involution", vec![a(f), a(i)]);
            }
            for &g in &outgoing[self.tgt[f]] {
                let gf = self.compose(g, f);
                for &h in &outgoing[self.tgt[g]] {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        r.push(AxiomViolation, "assoc", vec![a(h), a(g), a(f)]);
                    }
                }
            }
        }
        r
    }

    fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_objects()];
        for f in 0..self.num_arrows() {
            out[self.src[f]].push(f);
        }
        out
    }

    /// Loops at `x`.
    pub fn loops(&self, x: usize) -> Vec<usize> {
        self.hom(x, x).collect()
    }

    /// Isotropy group at object index `x`, elements named by arrow ids.
    pub fn isotropy_at(&self, x: usize) -> FinGroup {
        let loops = self.loops(x);
        let pos: HashMap<usize, usize> = loops.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let k = loops.len();
        let mul = (0..k * k).map(|ix| pos[&self.compose(loops[ix / k], loops[ix % k])]).collect();
        let inverse = loops.iter().map(|&f| pos[&self.inv[f]]).collect();
        FinGroup::from_tables(loops.iter().map(|&f| self.arrows[f].clone()).collect(), mul, pos[&self.unit[x]], inverse)
            .expect("isotropy tables are square by construction")
    }

    /// Isotropy group at the object named `x`.
    pub fn isotropy_group(&self, x: &str) -> Result<FinGroup, Error> {
        let ix = self.object_index(x).ok_or_else(|| Error::UnknownObject(x.into()))?;
        Ok(self.isotropy_at(ix))
    }

    /// Connected components as blocks of object indices, ordered by least
    /// member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut ds = DisjointSets::new(self.num_objects());
        for f in 0..self.num_arrows() {
            ds.union(self.src[f], self.tgt[f]);
        }
        let (labels, count) = ds.classes();
        let mut blocks = vec![Vec::new(); count];
        for (x, &l) in labels.iter().enumerate() {
            blocks[l].push(x);
        }
        blocks
    }

    /// Orbit blocks rendered as object ids.
    pub fn orbit_ids(&self) -> Vec<Vec<String>> {
        self.orbits().into_iter().map(|b| b.into_iter().map(|x| self.objects[x].clone()).collect()).collect()
    }

    /// At most one orbit. The empty groupoid counts as transitive.
    pub fn is_transitive(&self) -> bool {
        self.orbits().len() <= 1
    }
}

pub(crate) fn check_unique(kind: &'static str, ids: &[String]) -> Result<(), StructureError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(StructureError::DuplicateId { kind, id: id.clone() });
        }
    }
    Ok(())
}
