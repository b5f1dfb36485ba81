use std::collections::VecDeque;
use std::sync::Arc;

use super::{Elem, FiniteGroup, GroupError};

/// A homomorphism between finite groups, stored as an image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<Elem>,
}

impl GroupHom {
    /// Checks that `map` is a homomorphism before accepting it.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<Elem>) -> Result<Self, GroupError> {
        if map.len() != source.order() {
            return Err(GroupError::MapLength { got: map.len(), expected: source.order() });
        }
        if let Some(&bad) = map.iter().find(|&&x| !target.contains(x)) {
            return Err(GroupError::ImageOutOfRange(bad));
        }
        if map[source.identity()] != target.identity() {
            return Err(GroupError::IdentityNotPreserved);
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(GroupError::NotMultiplicative {
                        a: source.label(a).to_string(),
                        b: source.label(b).to_string(),
                    });
                }
            }
        }
        Ok(GroupHom { source, target, map })
    }

    pub fn trivial(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Self {
        let map = vec![target.identity(); source.order()];
        GroupHom { source, target, map }
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        GroupHom { source: group.clone(), target: group, map }
    }

    /// Builds a hom from the images of the source's generating set, if they extend.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        gens: &[Elem],
        images: &[Elem],
    ) -> Option<Self> {
        extend_from_generators(&source, &target, gens, images).map(|map| GroupHom { source, target, map })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn table(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_witness().is_none()
    }

    /// Two distinct elements with the same image, if any.
    pub fn kernel_witness(&self) -> Option<(Elem, Elem)> {
        let mut first = vec![None; self.target.order()];
        for a in self.source.elements() {
            match first[self.map[a]] {
                Some(b) => return Some((b, a)),
                None => first[self.map[a]] = Some(a),
            }
        }
        None
    }

    pub fn is_trivial(&self) -> bool {
        self.map.iter().all(|&x| x == self.target.identity())
    }

    /// `self ∘ inner`: restriction of `self` along an injective `inner`.
    pub fn restrict(&self, inner: &GroupHom) -> Result<GroupHom, GroupError> {
        if inner.target != self.source {
            return Err(GroupError::Mismatch(format!(
                "cannot compose: inner map lands in {}, outer map starts at {}",
                inner.target.name(),
                self.source.name()
            )));
        }
        if let Some((a, b)) = inner.kernel_witness() {
            return Err(GroupError::NotInjective(
                inner.source.label(a).to_string(),
                inner.source.label(b).to_string(),
            ));
        }
        Ok(self.compose_unchecked(inner))
    }

    /// `self ∘ inner` without the injectivity requirement.
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, GroupError> {
        if inner.target != self.source {
            return Err(GroupError::Mismatch(format!(
                "cannot compose: inner map lands in {}, outer map starts at {}",
                inner.target.name(),
                self.source.name()
            )));
        }
        Ok(self.compose_unchecked(inner))
    }

    fn compose_unchecked(&self, inner: &GroupHom) -> GroupHom {
        let map = inner.map.iter().map(|&x| self.map[x]).collect();
        GroupHom { source: inner.source.clone(), target: self.target.clone(), map }
    }

    /// `x ↦ g f(x) g^-1`
    pub fn conjugate(&self, g: Elem) -> Result<GroupHom, GroupError> {
        if !self.target.contains(g) {
            return Err(GroupError::NotAnElement(g, self.target.name().to_string()));
        }
        let map = self.map.iter().map(|&x| self.target.conj(g, x)).collect();
        Ok(GroupHom { source: self.source.clone(), target: self.target.clone(), map })
    }
}

/// Extends generator images along the right Cayley graph, rejecting on conflict.
fn extend_from_generators(source: &FiniteGroup, target: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let mut map: Vec<Option<Elem>> = vec![None; source.order()];
    map[source.identity()] = Some(target.identity());
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x].expect("queued elements are mapped");
        for (&s, &fs) in gens.iter().zip(images) {
            let y = source.mul(x, s);
            let fy = target.mul(fx, fs);
            match map[y] {
                Some(existing) if existing != fy => return None,
                Some(_) => {}
                None => {
                    map[y] = Some(fy);
                    queue.push_back(y);
                }
            }
        }
    }
    map.into_iter().collect()
}

/// All homomorphisms `source -> target`, ordered lexicographically by image table.
///
/// Searches over images of a generating set and extends along the Cayley graph;
/// independent of the presentation-based solver in [`super::enumerate_homs`].
pub fn homs_between(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let gens = source.generators();
    // Images of a generator must have order dividing the generator's order.
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&s| {
            let k = source.element_order(s);
            target.elements().filter(|&y| k.is_multiple_of(target.element_order(y))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = vec![0; gens.len()];
    fn rec(
        depth: usize,
        candidates: &[Vec<Elem>],
        images: &mut Vec<Elem>,
        emit: &mut dyn FnMut(&[Elem]),
    ) {
        if depth == candidates.len() {
            emit(images);
            return;
        }
        for &y in &candidates[depth] {
            images[depth] = y;
            rec(depth + 1, candidates, images, emit);
        }
    }
    rec(0, &candidates, &mut images, &mut |imgs| {
        if let Some(map) = extend_from_generators(source, target, &gens, imgs) {
            out.push(GroupHom { source: source.clone(), target: target.clone(), map });
        }
    });
    out.sort_by(|a, b| a.map.cmp(&b.map));
    out
}
