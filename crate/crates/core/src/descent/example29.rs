//! The cubic identity behind the `W = Y²` generator: in `F_p[u, T][Y]` with
//! `T = t⁻¹`, reduce `W³ + W² + W - u²T²` modulo `Y³ = Y + uT`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::is_prime;
use super::DescentError;

/// Polynomial in `u` and `T`, keyed by `(deg_u, deg_T)`.
type Mono = BTreeMap<(u32, u32), usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct YPoly {
    p: usize,
    /// `coeffs[i]` multiplies `Y^i`.
    coeffs: Vec<Mono>,
}

impl YPoly {
    fn zero(p: usize) -> Self {
        YPoly { p, coeffs: Vec::new() }
    }

    fn term(p: usize, c: usize, u: u32, t: u32, y: usize) -> Self {
        let mut out = Self::zero(p);
        out.add_term(c, (u, t), y);
        out
    }

    fn add_term(&mut self, c: usize, key: (u32, u32), y: usize) {
        if self.coeffs.len() <= y {
            self.coeffs.resize(y + 1, Mono::new());
        }
        let slot = self.coeffs[y].entry(key).or_insert(0);
        *slot = (*slot + c) % self.p;
        if *slot == 0 {
            self.coeffs[y].remove(&key);
        }
        while self.coeffs.last().is_some_and(|m| m.is_empty()) {
            self.coeffs.pop();
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (y, m) in other.coeffs.iter().enumerate() {
            for (&key, &c) in m {
                out.add_term(c, key, y);
            }
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.p);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                for (&(ua, ta), &ca) in a {
                    for (&(ub, tb), &cb) in b {
                        out.add_term(ca * cb % self.p, (ua + ub, ta + tb), i + j);
                    }
                }
            }
        }
        out
    }

    /// Rewrites `Y^k`, `k ≥ 3`, as `Y^(k-3) (Y + uT)` until the degree is below 3.
    fn reduce(&self) -> Self {
        let mut out = self.clone();
        while out.coeffs.len() > 3 {
            let k = out.coeffs.len() - 1;
            let top = out.coeffs.pop().expect("nonempty");
            for ((u, t), c) in top {
                out.add_term(c, (u, t), k - 2);
                out.add_term(c, (u + 1, t + 1), k - 3);
            }
            while out.coeffs.last().is_some_and(|m| m.is_empty()) {
                out.coeffs.pop();
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Display for YPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (y, m) in self.coeffs.iter().enumerate().rev() {
            for (&(u, t), &c) in m {
                let mut factors = Vec::new();
                if c != 1 || (u == 0 && t == 0 && y == 0) {
                    factors.push(c.to_string());
                }
                for (name, e) in [("u", u as usize), ("T", t as usize), ("Y", y)] {
                    match e {
                        0 => {}
                        1 => factors.push(name.into()),
                        e => factors.push(format!("{name}^{e}")),
                    }
                }
                parts.push(factors.join("*"));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicGenerator {
    /// `W = Y²`.
    Square,
    /// `W = Y`.
    Identity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionCertificate {
    pub p: usize,
    pub generator: CubicGenerator,
    /// Each reduced intermediate, in order.
    pub steps: Vec<String>,
    pub remainder: String,
    pub is_zero: bool,
}

/// Reduces `W³ + W² + W - u²T²` modulo `Y³ - Y - uT` over `F_p`. The
/// computation is polynomial, so there is no truncation.
pub fn reduction_certificate(p: usize, generator: CubicGenerator) -> Result<ReductionCertificate, DescentError> {
    if !is_prime(p) {
        return Err(DescentError::NotPrime(p));
    }
    let y = YPoly::term(p, 1, 0, 0, 1);
    let w = match generator {
        CubicGenerator::Square => y.mul(&y),
        CubicGenerator::Identity => y,
    };
    let mut steps = vec![format!("relation: Y^3 = Y + u*T (T = t^-1) over F_{p}")];
    let w1 = w.reduce();
    steps.push(format!("W = {w1}"));
    let w2 = w1.mul(&w1).reduce();
    steps.push(format!("W^2 ≡ {w2}"));
    let w3 = w2.mul(&w1).reduce();
    steps.push(format!("W^3 ≡ {w3}"));
    let constant = YPoly::term(p, p - 1, 2, 2, 0);
    let sum = w3.add(&w2).add(&w1).add(&constant).reduce();
    steps.push(format!("W^3 + W^2 + W - u^2*T^2 ≡ {sum}"));
    Ok(ReductionCertificate { p, generator, steps, remainder: sum.to_string(), is_zero: sum.is_zero() })
}

/// The characteristic-3 identity with `W = Y²`.
pub fn verify_example_29() -> ReductionCertificate {
    reduction_certificate(3, CubicGenerator::Square).expect("3 is prime")
}
