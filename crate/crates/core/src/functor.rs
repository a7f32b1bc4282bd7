//! Functors between finite groupoids and groupoid extensions.

use std::sync::Arc;

use crate::error::{Error, StructureError};
use crate::groupoid::FinGroupoid;
use crate::report::{Report, ViolationKind};

/// A functor given by its object map `f0` and arrow map `f1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidMap {
    dom: Arc<FinGroupoid>,
    cod: Arc<FinGroupoid>,
    f0: Vec<usize>,
    f1: Vec<usize>,
}

impl GroupoidMap {
    pub fn new(
        dom: impl Into<Arc<FinGroupoid>>,
        cod: impl Into<Arc<FinGroupoid>>,
        f0: Vec<usize>,
        f1: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let (dom, cod) = (dom.into(), cod.into());
        if f0.len() != dom.num_objects() || f1.len() != dom.num_arrows() {
            return Err(StructureError::Shape("functor tables do not cover the domain".into()));
        }
        if f0.iter().any(|&y| y >= cod.num_objects()) || f1.iter().any(|&y| y >= cod.num_arrows()) {
            return Err(StructureError::Shape("functor image outside the codomain".into()));
        }
        Ok(Self { dom, cod, f0, f1 })
    }

    /// Builds a functor from `(domain id, codomain id)` pairs.
    pub fn from_ids<S: AsRef<str>>(
        dom: impl Into<Arc<FinGroupoid>>,
        cod: impl Into<Arc<FinGroupoid>>,
        objects: &[(S, S)],
        arrows: &[(S, S)],
    ) -> Result<Self, StructureError> {
        let (dom, cod) = (dom.into(), cod.into());
        let lookup = |pairs: &[(S, S)], n: usize, from: &dyn Fn(&str) -> Option<usize>, to: &dyn Fn(&str) -> Option<usize>, what: &str| {
            let mut table = vec![usize::MAX; n];
            for (a, b) in pairs {
                let (a, b) = (a.as_ref(), b.as_ref());
                let i = from(a).ok_or_else(|| StructureError::DanglingId { id: a.into(), context: format!("{what} map domain") })?;
                let j = to(b).ok_or_else(|| StructureError::DanglingId { id: b.into(), context: format!("{what} map codomain") })?;
                if table[i] != usize::MAX {
                    return Err(StructureError::DuplicateId { kind: "map entry", id: a.into() });
                }
                table[i] = j;
            }
            Ok(table)
        };
        let f0 = lookup(objects, dom.num_objects(), &|s| dom.object_index(s), &|s| cod.object_index(s), "object")?;
        let f1 = lookup(arrows, dom.num_arrows(), &|s| dom.arrow_index(s), &|s| cod.arrow_index(s), "arrow")?;
        if let Some(x) = f0.iter().position(|&y| y == usize::MAX) {
            return Err(StructureError::MissingEntry { table: "object map", id: dom.object_id(x).into() });
        }
        if let Some(f) = f1.iter().position(|&y| y == usize::MAX) {
            return Err(StructureError::MissingEntry { table: "arrow map", id: dom.arrow_id(f).into() });
        }
        Ok(Self { dom, cod, f0, f1 })
    }

    pub fn identity(g: impl Into<Arc<FinGroupoid>>) -> Self {
        let g = g.into();
        let (no, na) = (g.num_objects(), g.num_arrows());
        Self { dom: g.clone(), cod: g, f0: (0..no).collect(), f1: (0..na).collect() }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupoidMap) -> Result<GroupoidMap, Error> {
        if *self.cod != *next.dom {
            return Err(Error::Invalid("functors are not composable".into()));
        }
        Ok(GroupoidMap {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            f0: self.f0.iter().map(|&y| next.f0[y]).collect(),
            f1: self.f1.iter().map(|&y| next.f1[y]).collect(),
        })
    }

    pub fn dom(&self) -> &Arc<FinGroupoid> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinGroupoid> {
        &self.cod
    }

    pub fn on_objects(&self) -> &[usize] {
        &self.f0
    }

    pub fn on_arrows(&self) -> &[usize] {
        &self.f1
    }

    pub fn object(&self, x: usize) -> usize {
        self.f0[x]
    }

    pub fn arrow(&self, f: usize) -> usize {
        self.f1[f]
    }

    /// Mutation hook for tests and seeded-failure suites.
    pub fn set_object(&mut self, x: usize, y: usize) {
        self.f0[x] = y;
    }

    pub fn set_arrow(&mut self, f: usize, g: usize) {
        self.f1[f] = g;
    }

    /// Checks compatibility with source, target, units and composition.
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let (d, c) = (&*self.dom, &*self.cod);
        use ViolationKind::AxiomViolation;
        for f in 0..d.num_arrows() {
            let img = self.f1[f];
            if c.src(img) != self.f0[d.src(f)] {
                r.push(AxiomViolation, "src-compat", vec![d.arrow_id(f).into(), c.arrow_id(img).into()]);
            }
            if c.tgt(img) != self.f0[d.tgt(f)] {
                r.push(AxiomViolation, "tgt-compat", vec![d.arrow_id(f).into(), c.arrow_id(img).into()]);
            }
        }
        for x in 0..d.num_objects() {
            if self.f1[d.unit(x)] != c.unit(self.f0[x]) {
                r.push(AxiomViolation, "unit-compat", vec![d.object_id(x).into()]);
            }
        }
        for (g, f, h) in d.composition_entries() {
            if c.comp(self.f1[g], self.f1[f]) != Some(self.f1[h]) {
                r.push(AxiomViolation, "comp-compat", vec![d.arrow_id(g).into(), d.arrow_id(f).into()]);
            }
        }
        r
    }

    pub fn uncovered_objects(&self) -> Vec<usize> {
        uncovered(&self.f0, self.cod.num_objects())
    }

    pub fn uncovered_arrows(&self) -> Vec<usize> {
        uncovered(&self.f1, self.cod.num_arrows())
    }
}

fn uncovered(map: &[usize], n: usize) -> Vec<usize> {
    let mut hit = vec![false; n];
    for &y in map {
        hit[y] = true;
    }
    (0..n).filter(|&y| !hit[y]).collect()
}

/// A functor that is the identity on a shared object set and surjective on
/// arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidExtension {
    phi: GroupoidMap,
}

impl GroupoidExtension {
    /// Wraps a functor; the extension conditions are checked by
    /// [`GroupoidExtension::validate`].
    pub fn new(phi: GroupoidMap) -> Self {
        Self { phi }
    }

    /// Builds the extension from an arrow map alone, using the identity on
    /// the (shared) object set.
    pub fn from_arrow_map(
        dom: impl Into<Arc<FinGroupoid>>,
        cod: impl Into<Arc<FinGroupoid>>,
        f1: Vec<usize>,
    ) -> Result<Self, StructureError> {
        let dom = dom.into();
        let n = dom.num_objects();
        Ok(Self { phi: GroupoidMap::new(dom, cod, (0..n).collect(), f1)? })
    }

    pub fn phi(&self) -> &GroupoidMap {
        &self.phi
    }

    pub fn into_map(self) -> GroupoidMap {
        self.phi
    }

    pub fn dom(&self) -> &Arc<FinGroupoid> {
        self.phi.dom()
    }

    pub fn cod(&self) -> &Arc<FinGroupoid> {
        self.phi.cod()
    }

    /// Functor laws, identity on objects, surjectivity on arrows.
    pub fn validate(&self) -> Report {
        let mut r = self.phi.validate();
        let (d, c) = (&**self.dom(), &**self.cod());
        let same_objects = d.objects() == c.objects();
        let identity = same_objects && self.phi.on_objects().iter().enumerate().all(|(x, &y)| x == y);
        if !identity {
            let witnesses = if same_objects {
                self.phi
                    .on_objects()
                    .iter()
                    .enumerate()
                    .filter(|(x, y)| x != *y)
                    .map(|(x, &y)| format!("{}->{}", d.object_id(x), c.object_id(y)))
                    .collect()
            } else {
                vec!["object sets differ".to_string()]
            };
            r.push(ViolationKind::NotIdentityOnObjects, "identity-on-objects", witnesses);
        }
        let missing = self.phi.uncovered_arrows();
        if !missing.is_empty() {
            r.push(
                ViolationKind::NotSurjectiveOnArrows,
                "surjective-on-arrows",
                missing.into_iter().map(|f| c.arrow_id(f).to_string()).collect(),
            );
        }
        r
    }
}
