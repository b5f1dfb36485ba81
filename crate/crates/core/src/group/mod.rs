//! Finite groups given by explicit multiplication tables.
//!
//! Elements are indices `0..order` into a canonical element list, so every
//! table, hom and report built on top of a group iterates in the same order.

mod hom;
mod presentation;

pub use hom::{homs_between, GroupHom};
pub use presentation::{count_homs, enumerate_homs, visit_homs, Letter, Presentation, Word};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element in its group's canonical element list.
pub type Elem = usize;

/// Groups above this order are refused; associativity is checked in `O(n^3)`.
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be at least 1 (got {0})")]
    EmptyGroup(usize),
    #[error("group of order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(usize),
    #[error("multiplication table is not {n}x{n} or has an entry outside 0..{n}")]
    MalformedTable { n: usize },
    #[error("associativity fails for ({a}, {b}, {c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(String),
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),
    #[error("permutation {0:?} is not a bijection of 1..={1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("map does not send identity to identity")]
    IdentityNotPreserved,
    #[error("map is not multiplicative at ({a}, {b})")]
    NotMultiplicative { a: String, b: String },
    #[error("map table has length {got}, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("map image {0} is not an element of the target")]
    ImageOutOfRange(usize),
    #[error("{0}")]
    Mismatch(String),
    #[error("edge map is not injective: {0} and {1} have the same image")]
    NotInjective(String, String),
    #[error("element {0} is not in group {1}")]
    NotAnElement(usize, String),
    #[error("unknown element label {0:?} in group {1}")]
    UnknownLabel(String, String),
    #[error("relator refers to generator index {0}, but only {1} generators are declared")]
    UndeclaredGenerator(usize, usize),
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),
    #[error("cannot parse group descriptor {0:?}")]
    BadDescriptor(String),
}

/// How a group is requested: by family or by explicit table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupDescriptor {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Product(Box<GroupDescriptor>, Box<GroupDescriptor>),
    /// Permutation group on `1..=degree` generated by the given one-line images.
    Permutations { degree: usize, generators: Vec<Vec<usize>> },
    Table { elements: Vec<String>, mul: Vec<Vec<usize>> },
}

impl GroupDescriptor {
    /// Parses the short forms `trivial`, `Z/n`, `Zn`, `Cn`, `Sn`, `Dn` and `A x B`.
    pub fn parse_short(text: &str) -> Result<Self, GroupError> {
        let text = text.trim();
        if let Some((lhs, rhs)) = text.split_once(" x ") {
            return Ok(GroupDescriptor::Product(
                Box::new(Self::parse_short(lhs)?),
                Box::new(Self::parse_short(rhs)?),
            ));
        }
        if text.eq_ignore_ascii_case("trivial") || text == "1" {
            return Ok(GroupDescriptor::Trivial);
        }
        let bad = || GroupError::BadDescriptor(text.to_string());
        let (head, rest) = text.split_at(text.find(|c: char| c.is_ascii_digit() || c == '/').ok_or_else(bad)?);
        let n: usize = rest.trim_start_matches('/').trim_start_matches('_').parse().map_err(|_| bad())?;
        match head {
            "Z" | "C" => Ok(GroupDescriptor::Cyclic(n)),
            "S" => Ok(GroupDescriptor::Symmetric(n)),
            "D" => Ok(GroupDescriptor::Dihedral(n)),
            _ => Err(bad()),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupDescriptor::Trivial => FiniteGroup::cyclic(1),
            GroupDescriptor::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupDescriptor::Symmetric(n) => FiniteGroup::symmetric(*n),
            GroupDescriptor::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupDescriptor::Product(a, b) => FiniteGroup::product(&a.build()?, &b.build()?),
            GroupDescriptor::Permutations { degree, generators } => {
                FiniteGroup::from_permutations(*degree, generators)
            }
            GroupDescriptor::Table { elements, mul } => {
                FiniteGroup::from_table("table", elements.clone(), mul.clone())
            }
        }
    }
}

/// A finite group with an exact multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    mul: Vec<Elem>,
    inverse: Vec<Elem>,
    identity: Elem,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order())
    }
}

impl FiniteGroup {
    /// Builds a group from an explicit table, checking every group axiom.
    pub fn from_table(
        name: impl Into<String>,
        labels: Vec<String>,
        table: Vec<Vec<Elem>>,
    ) -> Result<Self, GroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupError::EmptyGroup(0));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(GroupError::MalformedTable { n });
        }
        let mul: Vec<Elem> = table.into_iter().flatten().collect();
        let at = |a: Elem, b: Elem| mul[a * n + b];

        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative {
                            a: labels[a].clone(),
                            b: labels[b].clone(),
                            c: labels[c].clone(),
                        });
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| GroupError::NoInverse(labels[a].clone()))?;
            inverse.push(inv);
        }
        Ok(FiniteGroup { name: name.into(), labels, mul, inverse, identity })
    }

    /// Trusted constructor for tables produced by the family builders below.
    fn from_closed_table(name: String, labels: Vec<String>, mul: Vec<Elem>) -> Self {
        let n = labels.len();
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul[e * n + x] == x))
            .expect("family table has an identity");
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| mul[a * n + b] == identity).expect("family table has inverses"))
            .collect();
        FiniteGroup { name, labels, mul, inverse, identity }
    }

    pub fn trivial() -> Self {
        Self::from_closed_table("1".into(), vec!["1".into()], vec![0])
    }

    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup(0));
        }
        if n > MAX_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        if n == 1 {
            return Ok(Self::trivial());
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        Ok(Self::from_closed_table(format!("Z/{n}"), labels, mul))
    }

    /// Symmetric group on `1..=n`, elements in lexicographic order of their
    /// one-line notation (so the identity comes first).
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup(0));
        }
        let order: usize = (1..=n).product();
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut g = Self::from_permutation_list(n, permutations_lex(n));
        g.name = format!("S{n}");
        Ok(g)
    }

    /// Dihedral group of order `2n` as permutations of the `n`-gon (`n >= 3`),
    /// or `Z/2 x Z/2` style small cases for `n` in `1..=2` via permutations.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::EmptyGroup(0));
        }
        if n == 1 {
            return Ok(Self::cyclic(2)?.renamed("D1"));
        }
        if n == 2 {
            return Ok(Self::product(&Self::cyclic(2)?, &Self::cyclic(2)?)?.renamed("D2"));
        }
        let rotation: Vec<usize> = (1..=n).map(|i| i % n + 1).collect();
        let reflection: Vec<usize> = (1..=n).map(|i| (n + 1 - i) % n + 1).collect();
        Ok(Self::from_permutations(n, &[rotation, reflection])?.renamed(&format!("D{n}")))
    }

    /// Permutation group generated by one-line images on `1..=degree`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        let mut gens = Vec::new();
        for g in generators {
            let zero_based: Vec<usize> = g.iter().map(|&x| x.wrapping_sub(1)).collect();
            let mut sorted = zero_based.clone();
            sorted.sort_unstable();
            if g.len() != degree || sorted != (0..degree).collect::<Vec<_>>() {
                return Err(GroupError::BadPermutation(g.clone(), degree));
            }
            gens.push(zero_based);
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut found = BTreeSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(p) = queue.pop_front() {
            for g in &gens {
                let q = compose_perm(&p, g);
                if found.insert(q.clone()) {
                    if found.len() > MAX_ORDER {
                        return Err(GroupError::TooLarge(found.len()));
                    }
                    queue.push_back(q);
                }
            }
        }
        let name = format!("perm group of order {}", found.len());
        let mut g = Self::from_permutation_list(degree, found.into_iter().collect());
        g.name = name;
        Ok(g)
    }

    fn from_permutation_list(degree: usize, perms: Vec<Vec<usize>>) -> Self {
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("closed under composition");
        let n = perms.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                mul.push(index(&compose_perm(a, b)));
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p, degree)).collect();
        Self::from_closed_table(String::new(), labels, mul)
    }

    /// Direct product with lexicographically ordered pairs.
    pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let (na, nb) = (a.order(), b.order());
        if na * nb > MAX_ORDER {
            return Err(GroupError::TooLarge(na * nb));
        }
        let mut labels = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                labels.push(format!("({},{})", a.label(x), b.label(y)));
            }
        }
        let mut mul = Vec::with_capacity(na * na * nb * nb);
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        mul.push(a.mul(x1, x2) * nb + b.mul(y1, y2));
                    }
                }
            }
        }
        Ok(Self::from_closed_table(format!("{} x {}", a.name, b.name), labels, mul))
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn element_by_label(&self, label: &str) -> Result<Elem, GroupError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GroupError::UnknownLabel(label.to_string(), self.name.clone()))
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order()
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.order()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }

    /// `g a g^-1`
    #[inline]
    pub fn conj(&self, g: Elem, a: Elem) -> Elem {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn pow(&self, a: Elem, k: usize) -> Elem {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|a| self.element_order(a)).fold(1, lcm)
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = BTreeSet::from([self.identity]);
        for a in self.elements() {
            if span.contains(&a) {
                continue;
            }
            gens.push(a);
            span = self.closure(&gens);
            if span.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Elem]) -> BTreeSet<Elem> {
        let mut span = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if span.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        span
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(a ∘ b)(i) = a(b(i))`, i.e. apply `b` first.
fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

/// All permutations of `0..n` in lexicographic order; index `i` here is
/// element `i` of [`FiniteGroup::symmetric`].
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        perms.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    perms
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn cycle_notation(p: &[usize], degree: usize) -> String {
    let mut seen = vec![false; degree];
    let mut out = String::new();
    for start in 0..degree {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut i = p[start];
        while i != start {
            seen[i] = true;
            cycle.push(i + 1);
            i = p[i];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}
