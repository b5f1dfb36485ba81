use std::sync::Arc;

use super::TorsorError;
use crate::group::{Elem, FiniteGroup, GroupHom};

/// Arrow `s -> t` written `α_t · γ · α_s⁻¹` with `γ` in the vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub target: usize,
    pub gamma: Elem,
    pub source: usize,
}

/// A connected groupoid on finitely many objects whose automorphism group
/// at the base object `s₀ = 0` is `Γ`. The connecting arrow to `s` is
/// `α_s = (s, 1, s₀)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelGroupoid {
    objects: Vec<String>,
    group: Arc<FiniteGroup>,
}

impl ModelGroupoid {
    /// Objects are kept in the given order; the first is the base object.
    pub fn new(objects: Vec<String>, group: Arc<FiniteGroup>) -> Result<Self, TorsorError> {
        if objects.is_empty() {
            return Err(TorsorError::NoObjects);
        }
        let mut sorted = objects.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(TorsorError::DuplicateObject);
        }
        Ok(ModelGroupoid { objects, group })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_index(&self, label: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == label)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn arrow_count(&self) -> usize {
        self.objects.len() * self.objects.len() * self.group.order()
    }

    pub fn arrow_index(&self, a: Arrow) -> usize {
        (a.target * self.objects.len() + a.source) * self.group.order() + a.gamma
    }

    pub fn arrow(&self, index: usize) -> Arrow {
        let n = self.group.order();
        let (pair, gamma) = (index / n, index % n);
        Arrow { target: pair / self.objects.len(), gamma, source: pair % self.objects.len() }
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> + '_ {
        (0..self.arrow_count()).map(|i| self.arrow(i))
    }

    /// `a ∘ b`, defined when `b` ends where `a` starts.
    pub fn compose(&self, a: Arrow, b: Arrow) -> Option<Arrow> {
        (a.source == b.target).then(|| Arrow {
            target: a.target,
            gamma: self.group.mul(a.gamma, b.gamma),
            source: b.source,
        })
    }

    pub fn identity(&self, s: usize) -> Arrow {
        Arrow { target: s, gamma: self.group.identity(), source: s }
    }

    pub fn connecting(&self, s: usize) -> Arrow {
        Arrow { target: s, gamma: self.group.identity(), source: 0 }
    }

    pub fn loop_at(&self, s: usize, gamma: Elem) -> Arrow {
        Arrow { target: s, gamma, source: s }
    }
}

/// A functor from a [`ModelGroupoid`] to the one-object groupoid `BG`,
/// stored as a value per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidFunctor {
    groupoid: ModelGroupoid,
    target: Arc<FiniteGroup>,
    values: Vec<Elem>,
}

impl GroupoidFunctor {
    /// Checks `f(a ∘ b) = f(a) f(b)` for every composable pair.
    pub fn new(groupoid: ModelGroupoid, target: Arc<FiniteGroup>, values: Vec<Elem>) -> Result<Self, TorsorError> {
        if values.len() != groupoid.arrow_count() || values.iter().any(|&x| !target.contains(x)) {
            return Err(TorsorError::Shape("functor table has the wrong size or entries".into()));
        }
        let n = groupoid.object_count();
        let gamma = groupoid.group().clone();
        for t in 0..n {
            for m in 0..n {
                for s in 0..n {
                    for g1 in gamma.elements() {
                        for g2 in gamma.elements() {
                            let a = Arrow { target: t, gamma: g1, source: m };
                            let b = Arrow { target: m, gamma: g2, source: s };
                            let ab = groupoid.compose(a, b).expect("composable by construction");
                            let lhs = values[groupoid.arrow_index(ab)];
                            let rhs = target.mul(values[groupoid.arrow_index(a)], values[groupoid.arrow_index(b)]);
                            if lhs != rhs {
                                return Err(TorsorError::NotAFunctor { a, b });
                            }
                        }
                    }
                }
            }
        }
        Ok(GroupoidFunctor { groupoid, target, values })
    }

    /// The functor with `f|Aut(s₀) = λ` and `f(α_s) = c_s`; `c_{s₀}` must be the identity.
    pub fn from_data(
        groupoid: ModelGroupoid,
        lambda: &GroupHom,
        connecting: &[Elem],
    ) -> Result<Self, TorsorError> {
        let target = lambda.target().clone();
        if **lambda.source() != **groupoid.group() {
            return Err(TorsorError::ActionMismatch);
        }
        if connecting.len() != groupoid.object_count() || connecting.iter().any(|&c| !target.contains(c)) {
            return Err(TorsorError::Shape("one connecting value per object required".into()));
        }
        if connecting[0] != target.identity() {
            return Err(TorsorError::Shape("the connecting arrow of the base object is its identity".into()));
        }
        let values = groupoid
            .arrows()
            .map(|a| {
                let x = target.mul(connecting[a.target], lambda.apply(a.gamma));
                target.mul(x, target.inv(connecting[a.source]))
            })
            .collect();
        Ok(GroupoidFunctor { groupoid, target, values })
    }

    /// Every functor, ordered by `(λ table, connecting values)`.
    pub fn enumerate(groupoid: &ModelGroupoid, target: &Arc<FiniteGroup>) -> Vec<GroupoidFunctor> {
        let mut out = Vec::new();
        let n = groupoid.object_count();
        for lambda in crate::group::homs_between(groupoid.group(), target) {
            let mut c = vec![0; n];
            c[0] = target.identity();
            loop {
                out.push(Self::from_data(groupoid.clone(), &lambda, &c).expect("well-formed data"));
                let Some(i) = (1..n).rev().find(|&i| c[i] + 1 < target.order()) else { break };
                c[i] += 1;
                for x in &mut c[i + 1..] {
                    *x = 0;
                }
            }
        }
        out
    }

    pub fn groupoid(&self) -> &ModelGroupoid {
        &self.groupoid
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn apply(&self, a: Arrow) -> Elem {
        self.values[self.groupoid.arrow_index(a)]
    }

    /// Restriction to the automorphism group of the base object.
    pub fn base_hom(&self) -> GroupHom {
        let g = &self.groupoid;
        let map = g.group().elements().map(|x| self.apply(g.loop_at(0, x))).collect();
        GroupHom::new(g.group().clone(), self.target.clone(), map).expect("functors restrict to homs")
    }

    /// `f(α_s)` for each object.
    pub fn connecting_values(&self) -> Vec<Elem> {
        (0..self.groupoid.object_count()).map(|s| self.apply(self.groupoid.connecting(s))).collect()
    }
}
