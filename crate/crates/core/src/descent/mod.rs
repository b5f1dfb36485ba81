//! Characteristic-p descent at desk scale: truncated Laurent series over
//! `F_q` and `F_q(s)`, the Artin–Schreier descent criterion with an
//! exhaustive oracle, the cubic identity certificate, and the residue-level
//! Kummer obstruction.

mod artin_schreier;
mod counterexample;
mod example29;
pub mod field;
mod kummer;
mod series;

pub use artin_schreier::{
    as_brute_force_oracle, as_descends_galois, as_reduce, AsDecision, AsInstance, AsOracleResult, AsReduction,
    FieldPair,
};
pub use counterexample::{build_counterexample, Counterexample, CounterexampleSpec, SecondField};
pub use example29::{reduction_certificate, verify_example_29, CubicGenerator, ReductionCertificate};
pub use field::{Coeff, CoeffField, Fq, RatFn};
pub use kummer::{kummer_obstruction, KummerInstance, KummerReport, ResidueSeries};
pub use series::{pth_power_test, LaurentSeries, PthPower, PthWitness};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("{0}")]
    Field(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Embedding(String),
    #[error("series over different coefficient fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("requested coefficient of t^{requested}, but the series is only known through t^{known}")]
    PrecisionExceeded { requested: i64, known: i64 },
    #[error("exact quotient is an infinite series; truncate an operand first")]
    Unbounded,
    #[error("the zero series has no p-th root test")]
    ZeroInput,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not a counterexample: {0}")]
    NotACounterexample(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Outcome of a descent decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "DESCENDS")]
    Descends,
    #[serde(rename = "FAILS")]
    Fails,
    #[serde(rename = "FAILS-WITHIN-BOUNDS")]
    FailsWithinBounds,
    #[serde(rename = "OBSTRUCTED-WITHIN-BOUNDS")]
    ObstructedWithinBounds,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Descends => "DESCENDS",
            Verdict::Fails => "FAILS",
            Verdict::FailsWithinBounds => "FAILS-WITHIN-BOUNDS",
            Verdict::ObstructedWithinBounds => "OBSTRUCTED-WITHIN-BOUNDS",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}
