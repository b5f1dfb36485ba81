//! Exact coefficient fields: finite fields `F_q` and rational function
//! fields `F_q(s)`.

use std::fmt;
use std::sync::Arc;

use super::DescentError;

/// Largest supported finite field.
pub const MAX_FIELD_ORDER: usize = 1 << 16;

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

#[derive(Debug)]
struct FqTables {
    p: usize,
    e: u32,
    q: usize,
    /// Monic modulus, low coefficient first, length `e + 1`.
    modulus: Vec<usize>,
    exp: Vec<usize>,
    log: Vec<usize>,
}

/// The finite field with `p^e` elements. Elements are integers `0..q` whose
/// base-`p` digits are the coefficients of a polynomial in the generator
/// `w`, reduced by the first monic modulus (in digit order) for which `w` is
/// primitive. For `e = 1` elements are residues mod `p`.
#[derive(Clone)]
pub struct Fq(Arc<FqTables>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

fn digits(mut a: usize, p: usize, e: u32) -> Vec<usize> {
    (0..e)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[usize], p: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Multiplies a reduced residue by `w` modulo a monic modulus.
fn times_w(a: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let e = a.len();
    let top = a[e - 1];
    let mut out = vec![0; e];
    for i in (1..e).rev() {
        out[i] = a[i - 1];
    }
    for (i, o) in out.iter_mut().enumerate() {
        *o = (*o + (p - top) * modulus[i]) % p;
    }
    out
}

/// Whether `w` has order `p^e - 1` in `F_p[w]/(m)`.
fn w_is_primitive(modulus: &[usize], p: usize, e: u32) -> bool {
    let q = p.pow(e);
    let one: Vec<usize> = (0..e as usize).map(|i| usize::from(i == 0)).collect();
    let mut x = one.clone();
    for k in 1..q {
        x = if e == 1 {
            // Degree one: multiply by the constant root of the modulus.
            vec![(x[0] * ((p - modulus[0]) % p)) % p]
        } else {
            times_w(&x, modulus, p)
        };
        if x == one {
            return k == q - 1;
        }
        if x.iter().all(|&d| d == 0) {
            return false;
        }
    }
    false
}

impl Fq {
    pub fn new(p: usize, e: u32) -> Result<Self, DescentError> {
        if !is_prime(p) {
            return Err(DescentError::NotPrime(p));
        }
        if e == 0 {
            return Err(DescentError::Field("extension degree must be positive".into()));
        }
        let q = p.checked_pow(e).filter(|&q| q <= MAX_FIELD_ORDER).ok_or_else(|| {
            DescentError::Field(format!("{p}^{e} exceeds the supported field size {MAX_FIELD_ORDER}"))
        })?;
        // Monic moduli of degree e in digit order; a primitive w forces irreducibility.
        let modulus = (0..q)
            .map(|c| {
                let mut m = digits(c, p, e);
                m.push(1);
                m
            })
            .find(|m| w_is_primitive(m, p, e))
            .ok_or_else(|| DescentError::Field(format!("no primitive modulus for F_{q}")))?;
        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![0; q];
        let mut x: Vec<usize> = (0..e as usize).map(|i| usize::from(i == 0)).collect();
        for k in 0..q - 1 {
            let code = undigits(&x, p);
            exp.push(code);
            log[code] = k;
            x = if e == 1 { vec![(x[0] * ((p - modulus[0]) % p)) % p] } else { times_w(&x, &modulus, p) };
        }
        Ok(Fq(Arc::new(FqTables { p, e, q, modulus, exp, log })))
    }

    pub fn prime(p: usize) -> Result<Self, DescentError> {
        Self::new(p, 1)
    }

    /// `F_q` from its order.
    pub fn of_order(q: usize) -> Result<Self, DescentError> {
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).ok_or(DescentError::Field(format!("no field of order {q}")))?;
        let mut e = 0;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            e += 1;
        }
        if r != 1 {
            return Err(DescentError::Field(format!("{q} is not a prime power")));
        }
        Self::new(p, e)
    }

    pub fn characteristic(&self) -> usize {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> usize {
        self.0.q
    }

    pub fn modulus(&self) -> &[usize] {
        &self.0.modulus
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.q
    }

    pub fn contains(&self, a: usize) -> bool {
        a < self.0.q
    }

    /// The primitive element behind the log tables; `w` itself when `e > 1`.
    pub fn generator(&self) -> usize {
        self.0.exp[1 % (self.0.q - 1).max(1)]
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (p, e) = (self.0.p, self.0.e);
        if e == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..e {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: usize) -> usize {
        let (p, e) = (self.0.p, self.0.e);
        if e == 1 {
            return (p - a % p) % p;
        }
        let mut a = a;
        let (mut out, mut place) = (0, 1);
        for _ in 0..e {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[(t.log[a] + t.log[b]) % (t.q - 1)]
    }

    pub fn inv(&self, a: usize) -> Option<usize> {
        if a == 0 {
            return None;
        }
        let t = &self.0;
        Some(t.exp[(t.q - 1 - t.log[a]) % (t.q - 1)])
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.0;
        let n = (t.q - 1) as u64;
        t.exp[((t.log[a] as u64 * (k % n)) % n) as usize]
    }

    /// Multiplication by an integer.
    pub fn scale(&self, k: usize, a: usize) -> usize {
        self.mul(k % self.0.p, a)
    }

    pub fn frobenius(&self, a: usize) -> usize {
        self.pow(a, self.0.p as u64)
    }

    /// The unique `p`-th root; finite fields are perfect.
    pub fn pth_root(&self, a: usize) -> usize {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    /// Membership in the subfield with `p^d` elements.
    pub fn in_subfield(&self, a: usize, d: u32) -> bool {
        self.pow(a, (self.0.p as u64).pow(d)) == a
    }

    pub fn format(&self, a: usize) -> String {
        let (p, e) = (self.0.p, self.0.e);
        if e == 1 {
            return a.to_string();
        }
        let ds = digits(a, p, e);
        let terms: Vec<String> = ds
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".into(),
                (1, c) => format!("{c}w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}w^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses an element code (`7`) or a polynomial in `w` (`w^2+2w+1`).
    pub fn parse(&self, text: &str) -> Result<usize, DescentError> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || DescentError::Parse(format!("{text:?} is not an element of {self:?}"));
        if let Ok(code) = text.parse::<usize>() {
            return if self.contains(code) { Ok(code) } else { Err(bad()) };
        }
        let (p, e) = (self.0.p, self.0.e as usize);
        let mut ds = vec![0; e.max(1)];
        for term in text.split('+') {
            let (coef, power) = match term.find('w') {
                None => (term.parse::<usize>().map_err(|_| bad())?, 0),
                Some(i) => {
                    let coef = if i == 0 { 1 } else { term[..i].parse::<usize>().map_err(|_| bad())? };
                    let rest = &term[i + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').and_then(|r| r.parse::<usize>().ok()).ok_or_else(bad)?
                    };
                    (coef, power)
                }
            };
            if power >= e {
                return Err(bad());
            }
            ds[power] = (ds[power] + coef) % p;
        }
        Ok(undigits(&ds, p))
    }

    /// Elements of the subfield with `p^d` elements, in code order.
    pub fn subfield_elements(&self, d: u32) -> Vec<usize> {
        self.elements().filter(|&a| self.in_subfield(a, d)).collect()
    }

    /// The embedding `F_{p^d} → self` sending the generator of `small` to
    /// the least root of its modulus, if `d` divides `e`.
    pub fn embedding_from(&self, small: &Fq) -> Result<Vec<usize>, DescentError> {
        if small.characteristic() != self.characteristic() || !self.degree().is_multiple_of(small.degree()) {
            return Err(DescentError::Embedding(format!("{small:?} does not embed in {self:?}")));
        }
        let m = small.modulus();
        let eval = |r: usize, coeffs: &[usize]| {
            coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, r), c))
        };
        let root = if small.degree() == 1 {
            // F_p: the root of x - r is r itself.
            (self.characteristic() - m[0]) % self.characteristic()
        } else {
            self.elements().find(|&r| eval(r, m) == 0).ok_or_else(|| DescentError::Internal("no root of the subfield modulus".into()))?
        };
        let p = small.characteristic();
        Ok(small
            .elements()
            .map(|a| eval(root, &digits(a, p, small.degree())))
            .collect())
    }
}

/// Dense polynomials over `F_q`, lowest coefficient first, no trailing zeros.
pub mod poly {
    use super::Fq;

    pub fn trim(mut a: Vec<usize>) -> Vec<usize> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn degree(a: &[usize]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn add(f: &Fq, a: &[usize], b: &[usize]) -> Vec<usize> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
    }

    pub fn neg(f: &Fq, a: &[usize]) -> Vec<usize> {
        a.iter().map(|&c| f.neg(c)).collect()
    }

    pub fn sub(f: &Fq, a: &[usize], b: &[usize]) -> Vec<usize> {
        add(f, a, &neg(f, b))
    }

    pub fn mul(f: &Fq, a: &[usize], b: &[usize]) -> Vec<usize> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        trim(out)
    }

    pub fn scale(f: &Fq, c: usize, a: &[usize]) -> Vec<usize> {
        trim(a.iter().map(|&x| f.mul(c, x)).collect())
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(f: &Fq, a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let db = b.len() - 1;
        let lead_inv = f.inv(b[db]).expect("nonzero divisor");
        let mut r = a.to_vec();
        let mut q = vec![0; a.len().saturating_sub(db)];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let c = f.mul(r[r.len() - 1], lead_inv);
            q[k] = c;
            for (i, &y) in b.iter().enumerate() {
                r[k + i] = f.sub(r[k + i], f.mul(c, y));
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic(f: &Fq, a: &[usize]) -> Vec<usize> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => scale(f, f.inv(l).expect("nonzero leading coefficient"), a),
        }
    }

    pub fn gcd(f: &Fq, a: &[usize], b: &[usize]) -> Vec<usize> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let (_, r) = divrem(f, &a, &b);
            a = b;
            b = r;
        }
        monic(f, &a)
    }

    /// `Σ c_i^{1/p} s^{i/p}` when only exponents divisible by `p` occur.
    pub fn pth_root(f: &Fq, a: &[usize]) -> Option<Vec<usize>> {
        let p = f.characteristic();
        if a.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return None;
        }
        Some(a.iter().step_by(p).map(|&c| f.pth_root(c)).collect())
    }

    pub fn frobenius(f: &Fq, a: &[usize]) -> Vec<usize> {
        let p = f.characteristic();
        let mut out = vec![0; a.len().saturating_sub(1) * p + 1];
        for (i, &c) in a.iter().enumerate() {
            out[i * p] = f.frobenius(c);
        }
        trim(out)
    }

    pub fn format(f: &Fq, a: &[usize], var: &str) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let c_txt = f.format(c);
                let c_txt = if c_txt.contains('+') { format!("({c_txt})") } else { c_txt };
                match (i, c == 1) {
                    (0, _) => c_txt,
                    (1, true) => var.to_string(),
                    (1, false) => format!("{c_txt}{var}"),
                    (i, true) => format!("{var}^{i}"),
                    (i, false) => format!("{c_txt}{var}^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

/// A reduced fraction in `F_q(s)` with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Vec<usize>,
    den: Vec<usize>,
}

impl RatFn {
    pub fn new(f: &Fq, num: Vec<usize>, den: Vec<usize>) -> Result<Self, DescentError> {
        let (num, den) = (poly::trim(num), poly::trim(den));
        if den.is_empty() {
            return Err(DescentError::DivisionByZero);
        }
        if num.iter().chain(&den).any(|&c| !f.contains(c)) {
            return Err(DescentError::Field("polynomial coefficient outside the field".into()));
        }
        if num.is_empty() {
            return Ok(RatFn { num, den: vec![1] });
        }
        let g = poly::gcd(f, &num, &den);
        let (num, _) = poly::divrem(f, &num, &g);
        let (den, _) = poly::divrem(f, &den, &g);
        let lead = f.inv(*den.last().expect("nonzero")).expect("nonzero");
        Ok(RatFn { num: poly::scale(f, lead, &num), den: poly::scale(f, lead, &den) })
    }

    pub fn constant(c: usize) -> Self {
        RatFn { num: poly::trim(vec![c]), den: vec![1] }
    }

    pub fn numerator(&self) -> &[usize] {
        &self.num
    }

    pub fn denominator(&self) -> &[usize] {
        &self.den
    }

    pub fn as_constant(&self) -> Option<usize> {
        (self.den == [1] && self.num.len() <= 1).then(|| self.num.first().copied().unwrap_or(0))
    }
}

/// A coefficient field for Laurent series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoeffField {
    Finite(Fq),
    /// `F_q(s)`.
    Rational(Fq),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Finite(usize),
    Rational(RatFn),
}

impl CoeffField {
    pub fn base(&self) -> &Fq {
        match self {
            CoeffField::Finite(f) | CoeffField::Rational(f) => f,
        }
    }

    pub fn characteristic(&self) -> usize {
        self.base().characteristic()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CoeffField::Finite(_))
    }

    pub fn describe(&self) -> String {
        match self {
            CoeffField::Finite(f) => format!("F_{}", f.order()),
            CoeffField::Rational(f) => format!("F_{}(s)", f.order()),
        }
    }

    pub fn contains(&self, a: &Coeff) -> bool {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => f.contains(*x),
            (CoeffField::Rational(f), Coeff::Rational(r)) => r.num.iter().chain(&r.den).all(|&c| f.contains(c)),
            _ => false,
        }
    }

    /// Image of an element of the prime-power base field.
    pub fn constant(&self, c: usize) -> Coeff {
        match self {
            CoeffField::Finite(_) => Coeff::Finite(c),
            CoeffField::Rational(_) => Coeff::Rational(RatFn::constant(c)),
        }
    }

    pub fn zero(&self) -> Coeff {
        self.constant(0)
    }

    pub fn one(&self) -> Coeff {
        self.constant(1)
    }

    /// The transcendental `s` of `F_q(s)`.
    pub fn variable(&self) -> Option<Coeff> {
        match self {
            CoeffField::Finite(_) => None,
            CoeffField::Rational(_) => Some(Coeff::Rational(RatFn { num: vec![0, 1], den: vec![1] })),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Finite(x) => *x == 0,
            Coeff::Rational(r) => r.num.is_empty(),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Finite(f), Coeff::Finite(x), Coeff::Finite(y)) => Coeff::Finite(f.add(*x, *y)),
            (CoeffField::Rational(f), Coeff::Rational(x), Coeff::Rational(y)) => {
                let num = poly::add(f, &poly::mul(f, &x.num, &y.den), &poly::mul(f, &y.num, &x.den));
                let den = poly::mul(f, &x.den, &y.den);
                Coeff::Rational(RatFn::new(f, num, den).expect("nonzero denominator"))
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => Coeff::Finite(f.neg(*x)),
            (CoeffField::Rational(f), Coeff::Rational(x)) => {
                Coeff::Rational(RatFn { num: poly::neg(f, &x.num), den: x.den.clone() })
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (CoeffField::Finite(f), Coeff::Finite(x), Coeff::Finite(y)) => Coeff::Finite(f.mul(*x, *y)),
            (CoeffField::Rational(f), Coeff::Rational(x), Coeff::Rational(y)) => {
                let num = poly::mul(f, &x.num, &y.num);
                let den = poly::mul(f, &x.den, &y.den);
                Coeff::Rational(RatFn::new(f, num, den).expect("nonzero denominator"))
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => f.inv(*x).map(Coeff::Finite),
            (CoeffField::Rational(f), Coeff::Rational(x)) => {
                RatFn::new(f, x.den.clone(), x.num.clone()).ok().map(Coeff::Rational)
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn pow(&self, a: &Coeff, k: u64) -> Coeff {
        let mut out = self.one();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    pub fn frobenius(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => Coeff::Finite(f.frobenius(*x)),
            (CoeffField::Rational(f), Coeff::Rational(x)) => {
                Coeff::Rational(RatFn { num: poly::frobenius(f, &x.num), den: poly::frobenius(f, &x.den) })
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    /// The `p`-th root if `a` is a `p`-th power. In `F_q(s)` a reduced
    /// fraction is a `p`-th power exactly when numerator and denominator are.
    pub fn pth_root(&self, a: &Coeff) -> Option<Coeff> {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => Some(Coeff::Finite(f.pth_root(*x))),
            (CoeffField::Rational(f), Coeff::Rational(x)) => {
                let num = poly::pth_root(f, &x.num)?;
                let den = poly::pth_root(f, &x.den)?;
                Some(Coeff::Rational(RatFn { num, den }))
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn format(&self, a: &Coeff) -> String {
        match (self, a) {
            (CoeffField::Finite(f), Coeff::Finite(x)) => f.format(*x),
            (CoeffField::Rational(f), Coeff::Rational(x)) => {
                let num = poly::format(f, &x.num, "s");
                if x.den == [1] {
                    num
                } else {
                    let wrap = |t: String| if t.contains('+') { format!("({t})") } else { t };
                    format!("{}/{}", wrap(num), wrap(poly::format(f, &x.den, "s")))
                }
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    /// Parses `a` or, for `F_q(s)`, `num` or `num/den` with polynomials in `s`
    /// whose coefficients are base-field codes (`s^2+2s+1`, `(s+1)/s`).
    pub fn parse(&self, text: &str) -> Result<Coeff, DescentError> {
        match self {
            CoeffField::Finite(f) => f.parse(text).map(Coeff::Finite),
            CoeffField::Rational(f) => {
                let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (parse_poly(f, n)?, parse_poly(f, d)?),
                    None => (parse_poly(f, &text)?, vec![1]),
                };
                RatFn::new(f, num, den).map(Coeff::Rational)
            }
        }
    }
}

fn parse_poly(f: &Fq, text: &str) -> Result<Vec<usize>, DescentError> {
    let text = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(text);
    let bad = || DescentError::Parse(format!("{text:?} is not a polynomial in s over {f:?}"));
    let mut out: Vec<usize> = Vec::new();
    for term in text.split('+') {
        let (coef, power) = match term.find('s') {
            None => (term.parse::<usize>().map_err(|_| bad())?, 0),
            Some(i) => {
                let coef = if i == 0 { 1 } else { term[..i].parse::<usize>().map_err(|_| bad())? };
                let rest = &term[i + 1..];
                let power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|r| r.parse::<usize>().ok()).ok_or_else(bad)?
                };
                (coef, power)
            }
        };
        if !f.contains(coef) {
            return Err(bad());
        }
        if out.len() <= power {
            out.resize(power + 1, 0);
        }
        out[power] = f.add(out[power], coef);
    }
    Ok(poly::trim(out))
}
