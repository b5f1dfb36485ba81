use std::fmt;

use super::{Elem, FiniteGroup, GroupError};

/// A generator or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn inv(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }
}

pub type Word = Vec<Letter>;

/// A finitely presented group `⟨generators | relators⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, GroupError> {
        let n = generators.len();
        for letter in relators.iter().flatten() {
            if letter.generator >= n {
                return Err(GroupError::UndeclaredGenerator(letter.generator, n));
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// Parses relators written as `x y^-1 x^2` (or with `*` separators).
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self, GroupError> {
        let names: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let words = relators.iter().map(|r| parse_word(&names, r)).collect::<Result<_, _>>()?;
        Presentation::new(names, words)
    }

    /// Free group of the given rank on `x0, x1, ...`.
    pub fn free(rank: usize) -> Self {
        Presentation { generators: (0..rank).map(|i| format!("x{i}")).collect(), relators: Vec::new() }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_index(&self, symbol: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == symbol)
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|l| {
                let g = &self.generators[l.generator];
                if l.inverse {
                    format!("{g}^-1")
                } else {
                    g.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Evaluates a word under an assignment of generators to elements of `target`.
    pub fn evaluate(&self, word: &Word, assignment: &[Elem], target: &FiniteGroup) -> Elem {
        eval(word, assignment, target)
    }

    /// True when every relator maps to the identity.
    pub fn satisfied_by(&self, assignment: &[Elem], target: &FiniteGroup) -> bool {
        assignment.len() == self.generators.len()
            && self.relators.iter().all(|r| eval(r, assignment, target) == target.identity())
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< {} | ", self.generators.join(", "))?;
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "{} >", rels.join(", "))
    }
}

fn parse_word(generators: &[String], text: &str) -> Result<Word, GroupError> {
    let mut word = Vec::new();
    for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
        if token == "1" {
            continue;
        }
        let (symbol, power) = match token.split_once('^') {
            Some((s, p)) => (s, p.parse::<i64>().map_err(|_| GroupError::UnknownSymbol(token.to_string()))?),
            None => (token, 1),
        };
        let generator = generators
            .iter()
            .position(|g| g == symbol)
            .ok_or_else(|| GroupError::UnknownSymbol(symbol.to_string()))?;
        let letter = Letter { generator, inverse: power < 0 };
        word.extend(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
    }
    Ok(word)
}

#[inline]
fn eval(word: &Word, assignment: &[Elem], target: &FiniteGroup) -> Elem {
    word.iter().fold(target.identity(), |acc, l| {
        let x = assignment[l.generator];
        target.mul(acc, if l.inverse { target.inv(x) } else { x })
    })
}

/// Search plan: generator order plus, per depth, the relators that become
/// fully assigned at that depth.
struct Plan {
    order: Vec<usize>,
    checks: Vec<Vec<usize>>,
}

fn plan(presentation: &Presentation) -> Plan {
    let n = presentation.generators.len();
    let supports: Vec<Vec<usize>> = presentation
        .relators
        .iter()
        .map(|r| {
            let mut s: Vec<usize> = r.iter().map(|l| l.generator).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // Greedy: next generator is the one closing the most relators, ties to the
    // smallest index.
    for _ in 0..n {
        let mut best: Option<(usize, usize)> = None;
        for g in (0..n).filter(|&g| !placed[g]) {
            let closes = supports
                .iter()
                .filter(|s| s.contains(&g) && s.iter().all(|&h| h == g || placed[h]))
                .count();
            if best.is_none_or(|(_, c)| closes > c) {
                best = Some((g, closes));
            }
        }
        let (g, _) = best.expect("an unplaced generator remains");
        placed[g] = true;
        order.push(g);
    }
    let mut position = vec![0; n];
    for (depth, &g) in order.iter().enumerate() {
        position[g] = depth;
    }
    let mut checks = vec![Vec::new(); n.max(1)];
    for (r, support) in supports.iter().enumerate() {
        let depth = support.iter().map(|&g| position[g]).max().unwrap_or(0);
        checks[depth].push(r);
    }
    Plan { order, checks }
}

/// Visits every assignment of generators to `target` elements under which all
/// relators vanish. Visiting order follows the internal search plan, not the
/// canonical order; [`enumerate_homs`] sorts.
pub fn visit_homs(presentation: &Presentation, target: &FiniteGroup, visit: &mut dyn FnMut(&[Elem])) {
    let n = presentation.generators.len();
    let identity = target.identity();
    if n == 0 {
        if presentation.relators.iter().all(|r| r.is_empty()) {
            visit(&[]);
        }
        return;
    }
    let Plan { order, checks } = plan(presentation);
    let mut assignment = vec![identity; n];

    fn rec(
        depth: usize,
        order: &[usize],
        checks: &[Vec<usize>],
        presentation: &Presentation,
        target: &FiniteGroup,
        assignment: &mut Vec<Elem>,
        visit: &mut dyn FnMut(&[Elem]),
    ) {
        if depth == order.len() {
            visit(assignment);
            return;
        }
        let g = order[depth];
        for y in target.elements() {
            assignment[g] = y;
            let ok = checks[depth]
                .iter()
                .all(|&r| eval(&presentation.relators[r], assignment, target) == target.identity());
            if ok {
                rec(depth + 1, order, checks, presentation, target, assignment, visit);
            }
        }
        assignment[g] = target.identity();
    }
    rec(0, &order, &checks, presentation, target, &mut assignment, visit);
}

/// All generator assignments into `target` that kill every relator, in
/// lexicographic order of the image tuples.
pub fn enumerate_homs(presentation: &Presentation, target: &FiniteGroup) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    visit_homs(presentation, target, &mut |a| out.push(a.to_vec()));
    out.sort_unstable();
    out
}

/// Number of homomorphisms, without materializing them.
pub fn count_homs(presentation: &Presentation, target: &FiniteGroup) -> usize {
    let mut n = 0;
    visit_homs(presentation, target, &mut |_| n += 1);
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn involutions_in_s3() {
        let p = Presentation::parse(&["x"], &["x^2"]).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let homs = enumerate_homs(&p, &s3);
        assert_eq!(homs.len(), 4);
        let brute = s3.elements().filter(|&a| s3.mul(a, a) == s3.identity()).count();
        assert_eq!(homs.len(), brute);
    }

    #[test]
    fn only_one_map_to_trivial_group() {
        let p = Presentation::parse(&["x"], &["x^3"]).unwrap();
        assert_eq!(enumerate_homs(&p, &FiniteGroup::trivial()), vec![vec![0]]);
    }

    #[test]
    fn free_rank_two_into_z2() {
        let p = Presentation::parse(&["x", "y"], &[]).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(enumerate_homs(&p, &z2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn undeclared_symbol_rejected() {
        assert_eq!(Presentation::parse(&["x"], &["x y"]), Err(GroupError::UnknownSymbol("y".into())));
        assert!(matches!(
            Presentation::new(vec!["x".into()], vec![vec![Letter::gen(3)]]),
            Err(GroupError::UndeclaredGenerator(3, 1))
        ));
    }

    #[test]
    fn output_is_exhaustive_and_sorted() {
        // <x, y | x^2, y^3, (xy)^2> is S3; Hom(S3, S3) has 10 elements.
        let p = Presentation::parse(&["x", "y"], &["x^2", "y^3", "x y x y"]).unwrap();
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let homs = enumerate_homs(&p, &s3);
        assert_eq!(homs.len(), 10);
        assert!(homs.windows(2).all(|w| w[0] < w[1]));
        for x in s3.elements() {
            for y in s3.elements() {
                let a = vec![x, y];
                assert_eq!(p.satisfied_by(&a, &s3), homs.binary_search(&a).is_ok());
            }
        }
    }

    #[test]
    fn display_format() {
        let p = Presentation::parse(&["a", "b"], &["a b a^-1 b^-1"]).unwrap();
        assert_eq!(p.to_string(), "< a, b | a b a^-1 b^-1 >");
    }
}
