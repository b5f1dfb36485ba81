use std::collections::BTreeMap;

use super::field::{Coeff, CoeffField, Fq};
use super::series::LaurentSeries;
use super::{DescentError, Verdict};

/// Residue fields `k₁ ⊂ k₂`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldPair {
    /// `F_{p^d} ⊂ F_{p^e}` with `d | e`; `embedding[a]` is the image of `a`.
    Finite { small: Fq, large: Fq, embedding: Vec<usize> },
    /// `F_q ⊂ F_q(s)`.
    Rational { base: Fq },
}

impl FieldPair {
    pub fn finite(small: Fq, large: Fq) -> Result<Self, DescentError> {
        let embedding = large.embedding_from(&small)?;
        Ok(FieldPair::Finite { small, large, embedding })
    }

    pub fn rational(base: Fq) -> Self {
        FieldPair::Rational { base }
    }

    pub fn small_field(&self) -> &Fq {
        match self {
            FieldPair::Finite { small, .. } => small,
            FieldPair::Rational { base } => base,
        }
    }

    pub fn k1(&self) -> CoeffField {
        CoeffField::Finite(self.small_field().clone())
    }

    pub fn k2(&self) -> CoeffField {
        match self {
            FieldPair::Finite { large, .. } => CoeffField::Finite(large.clone()),
            FieldPair::Rational { base } => CoeffField::Rational(base.clone()),
        }
    }

    /// Image of `a ∈ k₁` in `k₂`.
    pub fn embed(&self, a: usize) -> Coeff {
        match self {
            FieldPair::Finite { embedding, .. } => Coeff::Finite(embedding[a]),
            FieldPair::Rational { .. } => self.k2().constant(a),
        }
    }

    /// Preimage in `k₁`, if any.
    pub fn preimage(&self, a: &Coeff) -> Option<usize> {
        match (self, a) {
            (FieldPair::Finite { embedding, .. }, Coeff::Finite(x)) => embedding.iter().position(|y| y == x),
            (FieldPair::Rational { .. }, Coeff::Rational(r)) => r.as_constant(),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        format!("{} ⊂ {}", self.k1().describe(), self.k2().describe())
    }
}

/// The extension of `k₂((t))` given by `Y^p - Y - α/t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsInstance {
    pair: FieldPair,
    alpha: Coeff,
}

impl AsInstance {
    pub fn new(pair: FieldPair, alpha: Coeff) -> Result<Self, DescentError> {
        let k2 = pair.k2();
        if !k2.contains(&alpha) {
            return Err(DescentError::InvalidInstance(format!("α is not an element of {}", k2.describe())));
        }
        if k2.is_zero(&alpha) {
            return Err(DescentError::InvalidInstance("α must be nonzero".into()));
        }
        Ok(AsInstance { pair, alpha })
    }

    pub fn p(&self) -> usize {
        self.pair.small_field().characteristic()
    }

    pub fn pair(&self) -> &FieldPair {
        &self.pair
    }

    pub fn alpha(&self) -> &Coeff {
        &self.alpha
    }

    /// `α/t` as an exact series over `k₂`.
    pub fn datum(&self) -> LaurentSeries {
        LaurentSeries::monomial(self.pair.k2(), self.alpha.clone(), -1)
    }

    /// A `k₁`-series viewed over `k₂`.
    pub fn lift(&self, beta: &LaurentSeries) -> Result<LaurentSeries, DescentError> {
        let terms: Vec<(i64, Coeff)> = beta
            .terms()
            .map(|(k, c)| match c {
                Coeff::Finite(x) => Ok((k, self.pair.embed(*x))),
                Coeff::Rational(_) => Err(DescentError::FieldMismatch),
            })
            .collect::<Result<_, _>>()?;
        let exact = LaurentSeries::from_terms(self.pair.k2(), &terms)?;
        Ok(match beta.truncation_order() {
            Some(n) => exact.truncate(n),
            None => exact,
        })
    }
}

/// Result of the criterion: `β` over `k₁` and `γ` over `k₂` with
/// `γ^p - γ = α/t - β` when descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsDecision {
    pub verdict: Verdict,
    pub beta: Option<LaurentSeries>,
    pub gamma: Option<LaurentSeries>,
    pub certificate: String,
}

/// The extension is induced from `k₁((t))` exactly when `α ∈ k₁`.
pub fn as_descends_galois(instance: &AsInstance) -> AsDecision {
    let pair = instance.pair();
    let k2 = pair.k2();
    let alpha_txt = k2.format(instance.alpha());
    if let Some(a) = pair.preimage(instance.alpha()) {
        let beta = LaurentSeries::monomial(pair.k1(), Coeff::Finite(a), -1);
        return AsDecision {
            verdict: Verdict::Descends,
            certificate: format!("α = {alpha_txt} lies in {}; β = {beta}, γ = 0", pair.k1().describe()),
            beta: Some(beta),
            gamma: Some(LaurentSeries::zero(k2)),
        };
    }
    let certificate = match (pair, instance.alpha()) {
        (FieldPair::Finite { small, large, .. }, Coeff::Finite(x)) => {
            let d = small.degree();
            let image = large.pow(*x, (large.characteristic() as u64).pow(d));
            format!(
                "α = {alpha_txt} is not in {}: α^(p^{d}) = {} ≠ α",
                pair.k1().describe(),
                large.format(image)
            )
        }
        (FieldPair::Rational { .. }, Coeff::Rational(r)) => format!(
            "α = {alpha_txt} is not a constant of {}: numerator degree {}, denominator degree {}",
            pair.k2().describe(),
            r.numerator().len().saturating_sub(1),
            r.denominator().len().saturating_sub(1)
        ),
        _ => "α is not in k₁".into(),
    };
    AsDecision { verdict: Verdict::Fails, beta: None, gamma: None, certificate }
}

/// Outcome of the exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsOracleResult {
    pub verdict: Verdict,
    pub beta: Option<LaurentSeries>,
    /// `γ` over `k₂`, known through the truncation order.
    pub gamma: Option<LaurentSeries>,
    pub support_bound: usize,
    pub truncation: i64,
    pub nodes: u64,
    pub reason: String,
}

/// Search budget for [`as_brute_force_oracle`].
pub const ORACLE_NODE_LIMIT: u64 = 20_000_000;

/// Exhaustive search over `β = Σ_{m ≤ B} c_m t^-m` with `c_m ∈ k₁`,
/// solving `γ^p - γ = α/t - β` coefficient by coefficient. A solution with
/// `β` supported in `t^-1..t^-b` has `γ` supported in `t^-1..t^-(b/p)`;
/// below that `γ` must vanish, which prunes the search. Support bounds
/// `b = 1..=B` are tried in turn, so the witness has the least pole order
/// and is then least in lexicographic order of `(c_1, …, c_b)`.
pub fn as_brute_force_oracle(instance: &AsInstance, support_bound: usize, truncation: i64) -> Result<AsOracleResult, DescentError> {
    let mut result = AsOracleResult {
        verdict: Verdict::Inconclusive,
        beta: None,
        gamma: None,
        support_bound,
        truncation,
        nodes: 0,
        reason: String::new(),
    };
    if support_bound == 0 || truncation < 0 {
        result.reason = "empty search space: support bound and truncation must be positive".into();
        return Ok(result);
    }
    let pair = instance.pair();
    let k2 = pair.k2();
    let k1_elems: Vec<usize> = pair.small_field().elements().collect();
    for bound in 1..=support_bound {
        let mut search = Search {
            k2: &k2,
            pair,
            alpha: instance.alpha(),
            p: instance.p(),
            bound,
            k1_elems: &k1_elems,
            choice: vec![0; bound + 1],
            gamma: vec![k2.zero(); bound + 1],
            nodes: result.nodes,
            exhausted: false,
        };
        let found = search.dfs(1);
        result.nodes = search.nodes;
        if search.exhausted {
            result.reason = format!("search budget of {ORACLE_NODE_LIMIT} nodes exhausted at support bound {bound}");
            return Ok(result);
        }
        if !found {
            continue;
        }
        let beta_terms: Vec<(i64, Coeff)> =
            (1..=bound).map(|m| (-(m as i64), Coeff::Finite(search.choice[m]))).collect();
        let beta = LaurentSeries::from_terms(pair.k1(), &beta_terms)?;
        let gamma_terms: Vec<(i64, Coeff)> = (1..=bound).map(|m| (-(m as i64), search.gamma[m].clone())).collect();
        let gamma = LaurentSeries::from_terms(k2.clone(), &gamma_terms)?.truncate(truncation);
        let rhs = instance.datum().sub(&instance.lift(&beta)?)?;
        if !gamma.artin_schreier()?.agrees_to(&rhs, truncation)? {
            return Err(DescentError::Internal("oracle witness fails γ^p - γ = α/t - β".into()));
        }
        result.verdict = Verdict::Descends;
        result.reason = format!("γ^p - γ = α/t - β verified through t^{truncation}");
        result.beta = Some(beta);
        result.gamma = Some(gamma);
        return Ok(result);
    }
    result.verdict = Verdict::FailsWithinBounds;
    result.reason = format!(
        "no β supported in t^-1..t^-{support_bound} with {} coefficients solves γ^p - γ = α/t - β",
        pair.k1().describe()
    );
    Ok(result)
}

struct Search<'a> {
    k2: &'a CoeffField,
    pair: &'a FieldPair,
    alpha: &'a Coeff,
    p: usize,
    bound: usize,
    k1_elems: &'a [usize],
    choice: Vec<usize>,
    /// `gamma[m]` is the coefficient of `t^-m`.
    gamma: Vec<Coeff>,
    nodes: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, m: usize) -> bool {
        if m > self.bound {
            return true;
        }
        let k2 = self.k2;
        for &c in self.k1_elems {
            self.nodes += 1;
            if self.nodes > ORACLE_NODE_LIMIT {
                self.exhausted = true;
                return false;
            }
            // Coefficient of t^-m in α/t - β.
            let alpha_part = if m == 1 { self.alpha.clone() } else { k2.zero() };
            let delta = k2.sub(&alpha_part, &self.pair.embed(c));
            let carried = if m.is_multiple_of(self.p) { k2.frobenius(&self.gamma[m / self.p]) } else { k2.zero() };
            let g = k2.sub(&carried, &delta);
            if m * self.p > self.bound && !k2.is_zero(&g) {
                continue;
            }
            self.choice[m] = c;
            self.gamma[m] = g;
            if self.dfs(m + 1) {
                return true;
            }
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

/// Output of [`as_reduce`]: `input = reduced + (γ^p - γ) + nonnegative`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsReduction {
    pub reduced: LaurentSeries,
    pub gamma: LaurentSeries,
    pub nonnegative: LaurentSeries,
    /// Exponents `-m` with `p | m` whose coefficient is not a `p`-th power.
    pub obstructions: Vec<i64>,
}

/// Repeatedly replaces `c t^-m` (with `p | m`, `c = r^p`) by `r t^-(m/p)`,
/// largest `m` first, and drops the part of nonnegative valuation.
pub fn as_reduce(beta: &LaurentSeries) -> Result<AsReduction, DescentError> {
    let f = beta.field().clone();
    let p = f.characteristic() as i64;
    let principal = beta.principal_part()?;
    let nonnegative = beta.nonnegative_part();
    let mut work: BTreeMap<i64, Coeff> = principal.terms().map(|(k, c)| (-k, c.clone())).collect();
    let mut gamma_terms: Vec<(i64, Coeff)> = Vec::new();
    let mut obstructions = Vec::new();
    let top = work.keys().next_back().copied().unwrap_or(0);
    for m in (1..=top).rev() {
        let Some(c) = work.get(&m).cloned() else { continue };
        if f.is_zero(&c) || m % p != 0 {
            continue;
        }
        match f.pth_root(&c) {
            Some(r) => {
                work.remove(&m);
                let entry = work.entry(m / p).or_insert_with(|| f.zero());
                *entry = f.add(entry, &r);
                gamma_terms.push((-(m / p), r));
            }
            None => obstructions.push(-m),
        }
    }
    let reduced_terms: Vec<(i64, Coeff)> = work.into_iter().map(|(m, c)| (-m, c)).collect();
    let reduced = LaurentSeries::from_terms(f.clone(), &reduced_terms)?;
    let gamma = LaurentSeries::from_terms(f, &gamma_terms)?;
    obstructions.sort_unstable();
    Ok(AsReduction { reduced, gamma, nonnegative, obstructions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: usize, e: u32) -> Fq {
        Fq::new(p, e).unwrap()
    }

    fn finite_instance(p: usize, e: u32, alpha: usize) -> AsInstance {
        let pair = FieldPair::finite(f(p, 1), f(p, e)).unwrap();
        AsInstance::new(pair, Coeff::Finite(alpha)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let k = CoeffField::Finite(f(2, 1));
        let one = k.one();
        let t1 = LaurentSeries::monomial(k.clone(), one.clone(), -1);
        assert_eq!(as_reduce(&t1).unwrap().reduced, t1);
        let t2 = LaurentSeries::monomial(k.clone(), one.clone(), -2);
        let r = as_reduce(&t2).unwrap();
        assert_eq!(r.reduced, t1);
        assert_eq!(r.gamma, t1);
        let t3 = LaurentSeries::monomial(k.clone(), one, -3);
        assert_eq!(as_reduce(&t3).unwrap().reduced, t3);
    }

    #[test]
    fn reduce_is_idempotent_and_accounts_for_the_difference() {
        let k = CoeffField::Finite(f(3, 2));
        let beta = LaurentSeries::new(k.clone(), -9, (0..12).map(|i| k.constant((i * 5 + 1) % 9)).collect(), Some(4)).unwrap();
        let r = as_reduce(&beta).unwrap();
        let again = as_reduce(&r.reduced).unwrap();
        assert_eq!(again.reduced, r.reduced);
        assert!(again.gamma.is_zero());
        let rebuilt = r.reduced.add(&r.gamma.artin_schreier().unwrap()).unwrap().add(&r.nonnegative).unwrap();
        assert!(rebuilt.agrees_to(&beta, 2).unwrap());
        assert!(r.reduced.terms().all(|(e, _)| e % 3 != 0));
    }

    #[test]
    fn reduce_stops_at_non_pth_powers() {
        let k = CoeffField::Rational(f(2, 1));
        let s = k.variable().unwrap();
        let beta = LaurentSeries::monomial(k, s, -2);
        let r = as_reduce(&beta).unwrap();
        assert_eq!(r.reduced, beta);
        assert_eq!(r.obstructions, vec![-2]);
    }

    #[test]
    fn criterion_examples() {
        let d = as_descends_galois(&finite_instance(2, 2, 1));
        assert_eq!(d.verdict, Verdict::Descends);
        assert_eq!(d.beta.unwrap().to_string(), "t^-1");
        assert_eq!(as_descends_galois(&finite_instance(2, 2, 2)).verdict, Verdict::Fails);
        let ks = CoeffField::Rational(f(3, 1));
        let inst = AsInstance::new(FieldPair::rational(f(3, 1)), ks.variable().unwrap()).unwrap();
        let d = as_descends_galois(&inst);
        assert_eq!(d.verdict, Verdict::Fails);
        assert!(d.certificate.contains("numerator degree 1"), "{}", d.certificate);
    }

    #[test]
    fn oracle_examples() {
        let same = AsInstance::new(FieldPair::finite(f(2, 1), f(2, 1)).unwrap(), Coeff::Finite(1)).unwrap();
        let r = as_brute_force_oracle(&same, 4, 50).unwrap();
        assert_eq!(r.verdict, Verdict::Descends);
        assert_eq!(r.beta.unwrap().to_string(), "t^-1");
        assert!(r.gamma.unwrap().is_zero());
        let omega = finite_instance(2, 2, 2);
        assert_eq!(as_brute_force_oracle(&omega, 8, 50).unwrap().verdict, Verdict::FailsWithinBounds);
        assert_eq!(as_brute_force_oracle(&omega, 0, 50).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn oracle_witness_solves_the_equation() {
        // α = 1 + w over F_9 is outside F_3; α = 2 is inside.
        assert_eq!(as_brute_force_oracle(&finite_instance(3, 2, 4), 9, 20).unwrap().verdict, Verdict::FailsWithinBounds);
        let inst = finite_instance(3, 2, 2);
        let r = as_brute_force_oracle(&inst, 9, 20).unwrap();
        assert_eq!(r.verdict, Verdict::Descends);
        let beta = r.beta.unwrap();
        let rhs = inst.datum().sub(&inst.lift(&beta).unwrap()).unwrap();
        assert!(r.gamma.unwrap().artin_schreier().unwrap().agrees_to(&rhs, 20).unwrap());
    }

    #[test]
    fn invalid_instances_rejected() {
        let pair = FieldPair::finite(f(2, 1), f(2, 2)).unwrap();
        assert!(AsInstance::new(pair.clone(), Coeff::Finite(0)).is_err());
        assert!(AsInstance::new(pair, Coeff::Finite(7)).is_err());
        assert!(FieldPair::finite(f(2, 2), f(2, 3)).is_err());
    }
}
