use std::fmt;

use super::field::{Coeff, CoeffField};
use super::DescentError;

/// A Laurent series in `t` known through a truncation order `N`, meaning
/// every coefficient of `t^k` with `k <= N` is exact and nothing is claimed
/// beyond. Series without a truncation order are exact (finite) sums.
///
/// Stored normalized: the first stored coefficient is nonzero, trailing
/// zeros are dropped, and a zero series has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: CoeffField,
    valuation: i64,
    coeffs: Vec<Coeff>,
    /// Exclusive bound `N + 1`; `None` for exact series.
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    /// `Σ coeffs[i] t^(valuation + i)`, known through `t^order` if given.
    pub fn new(field: CoeffField, valuation: i64, coeffs: Vec<Coeff>, order: Option<i64>) -> Result<Self, DescentError> {
        if coeffs.iter().any(|c| !field.contains(c)) {
            return Err(DescentError::FieldMismatch);
        }
        Ok(Self::normalized(field, valuation, coeffs, order.map(|n| n + 1)))
    }

    fn normalized(field: CoeffField, mut valuation: i64, mut coeffs: Vec<Coeff>, prec: Option<i64>) -> Self {
        if let Some(p) = prec {
            let keep = (p - valuation).clamp(0, coeffs.len() as i64) as usize;
            coeffs.truncate(keep);
        }
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !field.is_zero(c)).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        valuation += lead as i64;
        if coeffs.is_empty() {
            valuation = prec.unwrap_or(0);
        }
        LaurentSeries { field, valuation, coeffs, prec }
    }

    pub fn zero(field: CoeffField) -> Self {
        LaurentSeries { field, valuation: 0, coeffs: Vec::new(), prec: None }
    }

    pub fn one(field: CoeffField) -> Self {
        let one = field.one();
        Self::monomial(field, one, 0)
    }

    /// `c t^k`, exact.
    pub fn monomial(field: CoeffField, c: Coeff, k: i64) -> Self {
        Self::normalized(field, k, vec![c], None)
    }

    /// The uniformizer `t`.
    pub fn t(field: CoeffField) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    /// Builds an exact series from `(exponent, coefficient)` terms.
    pub fn from_terms(field: CoeffField, terms: &[(i64, Coeff)]) -> Result<Self, DescentError> {
        let mut out = Self::zero(field.clone());
        for (k, c) in terms {
            if !field.contains(c) {
                return Err(DescentError::FieldMismatch);
            }
            out = out.add(&Self::monomial(field.clone(), c.clone(), *k))?;
        }
        Ok(out)
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation)
    }

    /// The highest exponent whose coefficient is known.
    pub fn truncation_order(&self) -> Option<i64> {
        self.prec.map(|p| p - 1)
    }

    /// Valuation if nonzero, else the precision; `None` for the exact zero.
    fn effective_valuation(&self) -> Option<i64> {
        if self.is_zero() {
            self.prec
        } else {
            Some(self.valuation)
        }
    }

    pub fn coefficient(&self, k: i64) -> Result<Coeff, DescentError> {
        if let Some(p) = self.prec {
            if k >= p {
                return Err(DescentError::PrecisionExceeded { requested: k, known: p - 1 });
            }
        }
        let i = k - self.valuation;
        Ok(if self.is_zero() || i < 0 || i >= self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[i as usize].clone()
        })
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Coeff)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(move |(i, c)| (self.valuation + i as i64, c))
    }

    /// Forgets every coefficient above `t^order`.
    pub fn truncate(&self, order: i64) -> Self {
        let prec = min_prec(self.prec, Some(order + 1));
        Self::normalized(self.field.clone(), self.valuation, self.coeffs.clone(), prec)
    }

    /// Terms with negative exponent, as an exact series. Needs the series to
    /// be known through `t^-1`.
    pub fn principal_part(&self) -> Result<Self, DescentError> {
        if let Some(p) = self.prec {
            if p < 0 {
                return Err(DescentError::PrecisionExceeded { requested: -1, known: p - 1 });
            }
        }
        let terms: Vec<(i64, Coeff)> = self.terms().filter(|(k, _)| *k < 0).map(|(k, c)| (k, c.clone())).collect();
        Self::from_terms(self.field.clone(), &terms)
    }

    /// Terms with nonnegative exponent, keeping the truncation order.
    pub fn nonnegative_part(&self) -> Self {
        let start = self.valuation.max(0);
        let coeffs = self.coeffs.iter().skip((start - self.valuation) as usize).cloned().collect();
        Self::normalized(self.field.clone(), start, coeffs, self.prec.map(|p| p.max(0)))
    }

    fn check_field(&self, other: &Self) -> Result<(), DescentError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(DescentError::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, DescentError> {
        self.check_field(other)?;
        let prec = min_prec(self.prec, other.prec);
        let (a, b) = (self, other);
        if a.is_zero() && b.is_zero() {
            return Ok(Self::normalized(self.field.clone(), 0, Vec::new(), prec));
        }
        let lo = match (a.is_zero(), b.is_zero()) {
            (true, _) => b.valuation,
            (_, true) => a.valuation,
            _ => a.valuation.min(b.valuation),
        };
        let hi = (a.valuation + a.coeffs.len() as i64).max(b.valuation + b.coeffs.len() as i64);
        let hi = prec.map_or(hi, |p| hi.min(p));
        let f = &self.field;
        let get = |s: &Self, k: i64| {
            let i = k - s.valuation;
            if s.is_zero() || i < 0 || i >= s.coeffs.len() as i64 {
                f.zero()
            } else {
                s.coeffs[i as usize].clone()
            }
        };
        let coeffs = (lo..hi.max(lo)).map(|k| f.add(&get(a, k), &get(b, k))).collect();
        Ok(Self::normalized(f.clone(), lo, coeffs, prec))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        LaurentSeries { field: self.field.clone(), valuation: self.valuation, coeffs, prec: self.prec }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DescentError> {
        self.add(&other.neg())
    }

    /// Multiplication by a field element.
    pub fn scale(&self, c: &Coeff) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(c, x)).collect();
        Self::normalized(self.field.clone(), self.valuation, coeffs, self.prec)
    }

    /// Product; known through `min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self, DescentError> {
        self.check_field(other)?;
        let f = &self.field;
        let (ea, eb) = (self.effective_valuation(), other.effective_valuation());
        let (Some(va), Some(vb)) = (ea, eb) else {
            // An exact zero factor.
            return Ok(Self::zero(f.clone()));
        };
        let prec = min_prec(self.prec.map(|p| p + vb), other.prec.map(|p| p + va));
        if self.is_zero() || other.is_zero() {
            return Ok(Self::normalized(f.clone(), 0, Vec::new(), prec));
        }
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if let Some(p) = prec {
            len = len.min((p - va - vb).max(0) as usize);
        }
        let mut coeffs = vec![f.zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if f.is_zero(x) || i >= len {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = f.add(&coeffs[i + j], &f.mul(x, y));
            }
        }
        Ok(Self::normalized(f.clone(), va + vb, coeffs, prec))
    }

    /// Quotient by long division. Exact by exact is refused unless the
    /// divisor is a monomial.
    pub fn div(&self, other: &Self) -> Result<Self, DescentError> {
        self.check_field(other)?;
        let f = &self.field;
        if other.is_zero() {
            return Err(DescentError::DivisionByZero);
        }
        let vb = other.valuation;
        let Some(va) = self.effective_valuation() else {
            return Ok(Self::zero(f.clone()));
        };
        let rel_b = other.prec.map(|p| p - vb);
        let prec = min_prec(self.prec.map(|p| p - vb), rel_b.map(|r| va - vb + r));
        let prec = match prec {
            Some(p) => p,
            None if other.coeffs.len() == 1 => {
                let c = f.inv(&other.coeffs[0]).expect("nonzero leading coefficient");
                let shifted = LaurentSeries { valuation: self.valuation - vb, ..self.clone() };
                return Ok(shifted.scale(&c));
            }
            None => return Err(DescentError::Unbounded),
        };
        let lead_inv = f.inv(&other.coeffs[0]).expect("nonzero leading coefficient");
        let start = va - vb;
        let len = (prec - start).max(0) as usize;
        let mut q: Vec<Coeff> = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.coefficient(start + n as i64 + vb)?;
            for i in 1..=n.min(other.coeffs.len().saturating_sub(1)) {
                acc = f.sub(&acc, &f.mul(&other.coeffs[i], &q[n - i]));
            }
            q.push(f.mul(&acc, &lead_inv));
        }
        Ok(Self::normalized(f.clone(), start, q, Some(prec)))
    }

    pub fn pow(&self, k: u32) -> Result<Self, DescentError> {
        let mut out = Self::one(self.field.clone());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `a^p = Σ c^p t^(p k)`; precision scales by `p`.
    pub fn frobenius(&self) -> Self {
        let p = self.field.characteristic() as i64;
        let terms: Vec<(i64, Coeff)> = self.terms().map(|(k, c)| (k * p, self.field.frobenius(c))).collect();
        let mut coeffs = Vec::new();
        let lo = terms.first().map_or(0, |t| t.0);
        for (k, c) in terms {
            coeffs.resize((k - lo) as usize, self.field.zero());
            coeffs.push(c);
        }
        Self::normalized(self.field.clone(), lo, coeffs, self.prec.map(|n| n * p))
    }

    /// `γ^p - γ`.
    pub fn artin_schreier(&self) -> Result<Self, DescentError> {
        self.frobenius().sub(self)
    }

    /// Coefficientwise equality through `t^order`; refuses if either side is
    /// not known that far.
    pub fn agrees_to(&self, other: &Self, order: i64) -> Result<bool, DescentError> {
        self.check_field(other)?;
        for s in [self, other] {
            if let Some(p) = s.prec {
                if p <= order {
                    return Err(DescentError::PrecisionExceeded { requested: order, known: p - 1 });
                }
            }
        }
        let lo = [self, other].iter().filter_map(|s| s.valuation()).min().unwrap_or(0);
        for k in lo..=order {
            if self.coefficient(k)? != other.coefficient(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .map(|(k, c)| {
                let c_txt = self.field.format(c);
                let one = self.field.one() == *c;
                let c_txt = if c_txt.contains(['+', '/']) { format!("({c_txt})") } else { c_txt };
                match (k, one) {
                    (0, _) => c_txt,
                    (1, true) => "t".into(),
                    (1, false) => format!("{c_txt}*t"),
                    (k, true) => format!("t^{k}"),
                    (k, false) => format!("{c_txt}*t^{k}"),
                }
            })
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O(t^{p})"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Why a series is not a `p`-th power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PthWitness {
    /// The leading exponent is not divisible by `p`.
    Valuation { valuation: i64 },
    /// A later exponent with nonzero coefficient is not divisible by `p`.
    Exponent { exponent: i64 },
    /// The coefficient of `t^exponent` is not a `p`-th power in the field.
    Coefficient { exponent: i64, coefficient: String },
}

impl fmt::Display for PthWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PthWitness::Valuation { valuation } => write!(f, "valuation {valuation} is not divisible by p"),
            PthWitness::Exponent { exponent } => write!(f, "exponent {exponent} has a nonzero coefficient and is not divisible by p"),
            PthWitness::Coefficient { exponent, coefficient } => {
                write!(f, "coefficient {coefficient} of t^{exponent} is not a p-th power")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PthPower {
    Root(LaurentSeries),
    NotAPower(PthWitness),
}

/// Decides whether `a` is a `p`-th power within its truncation. Terms are
/// scanned by increasing exponent; at each term the coefficient is tested
/// before the exponent, and the first failure is the witness.
pub fn pth_power_test(a: &LaurentSeries) -> Result<PthPower, DescentError> {
    if a.is_zero() {
        return Err(DescentError::ZeroInput);
    }
    let f = a.field();
    let p = f.characteristic() as i64;
    let v = a.valuation;
    let mut root_terms = Vec::new();
    for (k, c) in a.terms() {
        let Some(r) = f.pth_root(c) else {
            return Ok(PthPower::NotAPower(PthWitness::Coefficient { exponent: k, coefficient: f.format(c) }));
        };
        if k.rem_euclid(p) != 0 {
            let w = if k == v { PthWitness::Valuation { valuation: k } } else { PthWitness::Exponent { exponent: k } };
            return Ok(PthPower::NotAPower(w));
        }
        root_terms.push((k / p, r));
    }
    let mut root = LaurentSeries::from_terms(f.clone(), &root_terms)?;
    if let Some(prec) = a.prec {
        // Root coefficients at j are known when p j < prec.
        let root_prec = prec.div_euclid(p) + i64::from(prec.rem_euclid(p) != 0);
        root = root.truncate(root_prec - 1);
    }
    Ok(PthPower::Root(root))
}
