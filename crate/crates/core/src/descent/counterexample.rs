use super::artin_schreier::{as_descends_galois, AsDecision, AsInstance, FieldPair};
use super::field::Fq;
use super::kummer::{kummer_obstruction, KummerInstance, KummerReport, ResidueSeries};
use super::{DescentError, Verdict};

/// The larger residue field in the equal-characteristic construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondField {
    /// `F_{p^degree}`.
    FiniteExtension { degree: u32 },
    /// `k₁(s)`.
    RationalFunctions,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CounterexampleSpec {
    /// `k₁ = F_{p^k1_degree}`, `α` parsed in the second field.
    EqualChar { p: usize, k1_degree: u32, k2: SecondField, alpha: String },
    /// Lacunary `ḡ` over `F_{p^k1_degree}`.
    MixedChar { p: usize, k1_degree: u32, terms: Option<usize>, precision: usize, search_bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    ArtinSchreier { instance: AsInstance, decision: AsDecision },
    Kummer { instance: KummerInstance, report: KummerReport },
}

/// Builds an instance and certifies that it does not descend; instances
/// that do descend are rejected with the certificate.
pub fn build_counterexample(spec: &CounterexampleSpec) -> Result<Counterexample, DescentError> {
    match spec {
        CounterexampleSpec::EqualChar { p, k1_degree, k2, alpha } => {
            let small = Fq::new(*p, *k1_degree)?;
            let pair = match k2 {
                SecondField::FiniteExtension { degree } => FieldPair::finite(small.clone(), Fq::new(*p, *degree)?)?,
                SecondField::RationalFunctions => FieldPair::rational(small),
            };
            let alpha = pair.k2().parse(alpha)?;
            let instance = AsInstance::new(pair, alpha)?;
            let decision = as_descends_galois(&instance);
            if decision.verdict != Verdict::Fails {
                return Err(DescentError::NotACounterexample(decision.certificate));
            }
            Ok(Counterexample::ArtinSchreier { instance, decision })
        }
        CounterexampleSpec::MixedChar { p, k1_degree, terms, precision, search_bound } => {
            let field = Fq::new(*p, *k1_degree)?;
            let instance = KummerInstance::new(field, ResidueSeries::LacunarySquares { terms: *terms }, *precision)?;
            let report = kummer_obstruction(&instance, *search_bound);
            if report.verdict != Verdict::ObstructedWithinBounds {
                return Err(DescentError::NotACounterexample(format!("{}: {}", report.verdict, report.detail)));
            }
            Ok(Counterexample::Kummer { instance, report })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transcendental_alpha_is_a_counterexample() {
        let spec = CounterexampleSpec::EqualChar {
            p: 2,
            k1_degree: 1,
            k2: SecondField::RationalFunctions,
            alpha: "s".into(),
        };
        match build_counterexample(&spec).unwrap() {
            Counterexample::ArtinSchreier { decision, .. } => assert_eq!(decision.verdict, Verdict::Fails),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn member_alpha_is_rejected() {
        for k2 in [SecondField::RationalFunctions, SecondField::FiniteExtension { degree: 2 }] {
            let spec = CounterexampleSpec::EqualChar { p: 3, k1_degree: 1, k2, alpha: "1".into() };
            assert!(matches!(build_counterexample(&spec), Err(DescentError::NotACounterexample(_))));
        }
    }

    #[test]
    fn lacunary_kummer_counterexample() {
        let spec = CounterexampleSpec::MixedChar { p: 2, k1_degree: 1, terms: Some(4), precision: 128, search_bound: 4 };
        match build_counterexample(&spec).unwrap() {
            Counterexample::Kummer { report, .. } => {
                assert_eq!(report.verdict, Verdict::ObstructedWithinBounds)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
