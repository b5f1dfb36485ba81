use std::sync::Arc;

use super::{GroupoidFunctor, ModelGroupoid, TorsorError};
use crate::group::{Elem, FiniteGroup, GroupHom};

/// A finite set with a free transitive right `G`-action, a commuting left
/// `Γ`-action, and one marked element per object of a model groupoid.
///
/// Tables: `right[x * |G| + g] = x·g`, `left[γ * n + x] = γ·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultipointedTorsor {
    groupoid: ModelGroupoid,
    group: Arc<FiniteGroup>,
    right: Vec<usize>,
    left: Vec<usize>,
    points: Vec<usize>,
}

/// The unique point-preserving equivariant bijection between two torsors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorMorphism {
    pub map: Vec<usize>,
}

impl MultipointedTorsor {
    pub fn new(
        groupoid: ModelGroupoid,
        group: Arc<FiniteGroup>,
        right: Vec<usize>,
        left: Vec<usize>,
        points: Vec<usize>,
    ) -> Result<Self, TorsorError> {
        let n = group.order();
        let gamma = groupoid.group().clone();
        if right.len() != n * n || left.len() != gamma.order() * n || points.len() != groupoid.object_count() {
            return Err(TorsorError::Shape("action tables or point list have the wrong size".into()));
        }
        if right.iter().chain(&left).chain(&points).any(|&x| x >= n) {
            return Err(TorsorError::Shape("carrier index out of range".into()));
        }
        let r = |x: usize, g: Elem| right[x * n + g];
        let l = |c: Elem, x: usize| left[c * n + x];
        for x in 0..n {
            if r(x, group.identity()) != x || l(gamma.identity(), x) != x {
                return Err(TorsorError::NotAnAction);
            }
            for g in group.elements() {
                for h in group.elements() {
                    if r(r(x, g), h) != r(x, group.mul(g, h)) {
                        return Err(TorsorError::NotAnAction);
                    }
                }
            }
            for a in gamma.elements() {
                for b in gamma.elements() {
                    if l(a, l(b, x)) != l(gamma.mul(a, b), x) {
                        return Err(TorsorError::NotAnAction);
                    }
                }
                for g in group.elements() {
                    if l(a, r(x, g)) != r(l(a, x), g) {
                        return Err(TorsorError::ActionsDoNotCommute);
                    }
                }
            }
        }
        // Free and transitive: the orbit map at 0 is a bijection.
        let mut hit = vec![false; n];
        for g in group.elements() {
            hit[r(0, g)] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(TorsorError::NotATorsor);
        }
        Ok(MultipointedTorsor { groupoid, group, right, left, points })
    }

    /// Carrier `G` under right multiplication, `Γ` acting by left
    /// multiplication through `λ`, with the given points.
    pub fn regular(groupoid: ModelGroupoid, lambda: &GroupHom, points: Vec<Elem>) -> Result<Self, TorsorError> {
        let group = lambda.target().clone();
        if **lambda.source() != **groupoid.group() {
            return Err(TorsorError::ActionMismatch);
        }
        let right = group.elements().flat_map(|x| group.elements().map(move |g| (x, g))).map(|(x, g)| group.mul(x, g)).collect();
        let left = groupoid
            .group()
            .elements()
            .flat_map(|c| group.elements().map(move |x| (c, x)))
            .map(|(c, x)| group.mul(lambda.apply(c), x))
            .collect();
        Self::new(groupoid, group, right, left, points)
    }

    pub fn groupoid(&self) -> &ModelGroupoid {
        &self.groupoid
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn carrier_size(&self) -> usize {
        self.group.order()
    }

    pub fn act_right(&self, x: usize, g: Elem) -> usize {
        self.right[x * self.group.order() + g]
    }

    pub fn act_left(&self, c: Elem, x: usize) -> usize {
        self.left[c * self.group.order() + x]
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn point(&self, s: usize) -> usize {
        self.points[s]
    }

    /// The unique `g` with `x·g = y`.
    pub fn divide(&self, x: usize, y: usize) -> Elem {
        self.group.elements().find(|&g| self.act_right(x, g) == y).expect("the right action is transitive")
    }

    /// Moves every point by the same right translation `ζ_s ↦ ζ_s·g`.
    pub fn remark(&self, g: Elem) -> MultipointedTorsor {
        let mut out = self.clone();
        out.points = self.points.iter().map(|&z| self.act_right(z, g)).collect();
        out
    }

    /// Replaces one point.
    pub fn with_point(&self, s: usize, x: usize) -> MultipointedTorsor {
        let mut out = self.clone();
        out.points[s] = x;
        out
    }

    /// Transports the structure along a bijection of the carrier.
    pub fn relabel(&self, perm: &[usize]) -> Result<MultipointedTorsor, TorsorError> {
        let n = self.carrier_size();
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(TorsorError::Shape("relabelling is not a bijection of the carrier".into()));
        }
        let mut inv = vec![0; n];
        for (x, &y) in perm.iter().enumerate() {
            inv[y] = x;
        }
        let gamma = self.groupoid.group();
        let right = (0..n).flat_map(|y| self.group.elements().map(move |g| (y, g))).map(|(y, g)| perm[self.act_right(inv[y], g)]).collect();
        let left = gamma.elements().flat_map(|c| (0..n).map(move |y| (c, y))).map(|(c, y)| perm[self.act_left(c, inv[y])]).collect();
        let points = self.points.iter().map(|&z| perm[z]).collect();
        Self::new(self.groupoid.clone(), self.group.clone(), right, left, points)
    }

    /// Restriction along a one-object subgroupoid: the object `s` with
    /// `Γ' -> Γ` acting through `inclusion`.
    pub fn restrict_to_object(&self, s: usize, inclusion: &GroupHom) -> Result<MultipointedTorsor, TorsorError> {
        if **inclusion.target() != **self.groupoid.group() {
            return Err(TorsorError::ActionMismatch);
        }
        let sub = ModelGroupoid::new(vec![self.groupoid.objects()[s].clone()], inclusion.source().clone())?;
        // Arrow (s, γ, s) acts as γ in base coordinates; see `hom_from_torsor`.
        let n = self.carrier_size();
        let left = inclusion
            .source()
            .elements()
            .flat_map(|h| (0..n).map(move |x| (h, x)))
            .map(|(h, x)| self.act_left(inclusion.apply(h), x))
            .collect();
        Self::new(sub, self.group.clone(), self.right.clone(), left, vec![self.points[s]])
    }
}

/// Carrier `G`, left action through `f|Aut(s₀)`, points `ζ_s = f(α_s)⁻¹`.
pub fn torsor_from_hom(f: &GroupoidFunctor) -> MultipointedTorsor {
    let g = f.target();
    let points = f.connecting_values().into_iter().map(|c| g.inv(c)).collect();
    MultipointedTorsor::regular(f.groupoid().clone(), &f.base_hom(), points).expect("functor data gives a torsor")
}

/// `f(α)` for `α = (t, γ, s)` is the unique `g` with `γ·ζ_s = ζ_t·g`.
pub fn hom_from_torsor(t: &MultipointedTorsor, groupoid: &ModelGroupoid) -> Result<GroupoidFunctor, TorsorError> {
    if groupoid != t.groupoid() {
        return Err(TorsorError::ActionMismatch);
    }
    let values = groupoid.arrows().map(|a| t.divide(t.point(a.target), t.act_left(a.gamma, t.point(a.source)))).collect();
    GroupoidFunctor::new(groupoid.clone(), t.group().clone(), values)
}

/// The point-preserving equivariant map, if one exists. It is pinned down by
/// where the base point goes: `ζ_{s₀}·g ↦ ζ'_{s₀}·g`.
pub fn torsor_morphisms(a: &MultipointedTorsor, b: &MultipointedTorsor) -> Option<TorsorMorphism> {
    if a.groupoid() != b.groupoid() || a.group() != b.group() {
        return None;
    }
    let group = a.group();
    let n = a.carrier_size();
    let mut map = vec![usize::MAX; n];
    for g in group.elements() {
        map[a.act_right(a.point(0), g)] = b.act_right(b.point(0), g);
    }
    let gamma = a.groupoid().group();
    let equivariant = (0..n).all(|x| gamma.elements().all(|c| map[a.act_left(c, x)] == b.act_left(c, map[x])));
    let pointed = a.points().iter().zip(b.points()).all(|(&p, &q)| map[p] == q);
    (equivariant && pointed).then_some(TorsorMorphism { map })
}
