//! Residue-level Kummer obstruction. The residue field of the completion is
//! modelled by `F_q[[x]]` truncated at `x^N`, the base ring by `F_q[x]`, and
//! "algebraic over `F_q(x)`" by "satisfies a nonzero polynomial relation of
//! degree at most `B` whose coefficients are polynomials of degree at most
//! `p B`", checked modulo `x^N`.

use super::field::{poly, Fq};
use super::{DescentError, Verdict};

/// How `ḡ` is given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueSeries {
    /// An element of the base ring `F_q[x]`.
    Polynomial(Vec<usize>),
    /// `Σ x^(i²)` over `i ≤ terms`, or over every square below the
    /// truncation when `terms` is `None`.
    LacunarySquares { terms: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerInstance {
    field: Fq,
    gbar: ResidueSeries,
    precision: usize,
}

/// Candidate units above this count make the search inconclusive.
pub const KUMMER_CANDIDATE_LIMIT: u64 = 200_000;

impl KummerInstance {
    /// `f = g^p + x` over `F_q`, with residues known modulo `x^precision`.
    pub fn new(field: Fq, gbar: ResidueSeries, precision: usize) -> Result<Self, DescentError> {
        if precision == 0 {
            return Err(DescentError::InvalidInstance("precision must be positive".into()));
        }
        if let ResidueSeries::Polynomial(g) = &gbar {
            if g.iter().any(|&c| !field.contains(c)) {
                return Err(DescentError::InvalidInstance("ḡ has a coefficient outside the field".into()));
            }
        }
        Ok(KummerInstance { field, gbar, precision })
    }

    pub fn p(&self) -> usize {
        self.field.characteristic()
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn gbar(&self) -> &ResidueSeries {
        &self.gbar
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Coefficients of `ḡ` below `x^N`.
    pub fn gbar_coeffs(&self) -> Vec<usize> {
        let n = self.precision;
        let mut out = vec![0; n];
        match &self.gbar {
            ResidueSeries::Polynomial(g) => {
                for (i, &c) in g.iter().enumerate().take(n) {
                    out[i] = c;
                }
            }
            ResidueSeries::LacunarySquares { terms } => {
                for i in 0.. {
                    if terms.is_some_and(|t| i > t) || i * i >= n {
                        break;
                    }
                    out[i * i] = 1;
                }
            }
        }
        out
    }

    /// Coefficients of `f̄ = ḡ^p + x` below `x^N`.
    pub fn fbar_coeffs(&self) -> Vec<usize> {
        let n = self.precision;
        let p = self.p();
        let mut out = vec![0; n];
        for (i, c) in self.gbar_coeffs().into_iter().enumerate() {
            if i * p < n {
                out[i * p] = self.field.frobenius(c);
            }
        }
        if n > 1 {
            out[1] = self.field.add(out[1], 1);
        }
        out
    }

    /// `f̄` as an element of the base ring, when `ḡ` is one.
    pub fn fbar_polynomial(&self) -> Option<Vec<usize>> {
        let g = match &self.gbar {
            ResidueSeries::Polynomial(g) => poly::trim(g.clone()),
            ResidueSeries::LacunarySquares { terms: Some(t) } => {
                let mut g = vec![0; t * t + 1];
                for i in 0..=*t {
                    g[i * i] = 1;
                }
                g
            }
            ResidueSeries::LacunarySquares { terms: None } => return None,
        };
        Some(poly::add(&self.field, &poly::frobenius(&self.field, &g), &[0, 1]))
    }

    pub fn describe_gbar(&self) -> String {
        match &self.gbar {
            ResidueSeries::Polynomial(g) => poly::format(&self.field, g, "x"),
            ResidueSeries::LacunarySquares { terms: Some(t) } => format!("Σ_(i≤{t}) x^(i²)"),
            ResidueSeries::LacunarySquares { terms: None } => format!("Σ x^(i²) mod x^{}", self.precision),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KummerReport {
    pub verdict: Verdict,
    pub search_bound: usize,
    pub height_bound: usize,
    pub precision: usize,
    pub candidates: u64,
    /// The unit `e` of the witness.
    pub unit: Option<Vec<usize>>,
    /// Coefficients `a_0, …, a_d` of the relation `Σ a_i(x) X^i` satisfied by `f̄ e^p`.
    pub relation: Option<Vec<Vec<usize>>>,
    pub detail: String,
}

impl KummerReport {
    pub fn format_relation(&self, field: &Fq) -> Option<String> {
        self.relation.as_ref().map(|rel| {
            let parts: Vec<String> = rel
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, a)| !a.is_empty())
                .map(|(i, a)| {
                    let a_txt = poly::format(field, a, "x");
                    let a_txt = if a_txt.contains('+') { format!("({a_txt})") } else { a_txt };
                    match (i, a_txt.as_str()) {
                        (0, _) => a_txt,
                        (1, "1") => "X".into(),
                        (1, _) => format!("{a_txt}*X"),
                        (_, "1") => format!("X^{i}"),
                        _ => format!("{a_txt}*X^{i}"),
                    }
                })
                .collect();
            parts.join(" + ")
        })
    }
}

fn mul_trunc(f: &Fq, a: &[usize], b: &[usize], n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// The first nullspace vector of `columns` (each of length `rows`) in
/// reduced row echelon order, scaled so its last nonzero entry is 1.
fn first_null_vector(f: &Fq, columns: &[Vec<usize>], rows: usize) -> Option<Vec<usize>> {
    let ncols = columns.len();
    let mut m: Vec<Vec<usize>> = (0..rows).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    let mut free = None;
    for col in 0..ncols {
        let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else {
            free.get_or_insert(col);
            continue;
        };
        m.swap(row, pr);
        let inv = f.inv(m[row][col]).expect("nonzero pivot");
        for x in &mut m[row] {
            *x = f.mul(*x, inv);
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..ncols {
                    let sub = f.mul(factor, m[row][c]);
                    m[r][c] = f.sub(m[r][c], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = free?;
    let mut v = vec![0; ncols];
    v[free] = 1;
    for (r, &pc) in pivots.iter().enumerate() {
        if pc < free {
            v[pc] = f.neg(m[r][free]);
        }
    }
    let last = *v.iter().rev().find(|&&x| x != 0).expect("nonzero vector");
    let inv = f.inv(last).expect("nonzero");
    Some(v.into_iter().map(|x| f.mul(x, inv)).collect())
}

/// The lowest-degree relation for `h` within the bounds, as `a_0..a_d`.
fn bounded_relation(f: &Fq, h: &[usize], degree_bound: usize, height: usize, n: usize) -> Option<Vec<Vec<usize>>> {
    let mut powers = vec![{
        let mut one = vec![0; n];
        one[0] = 1;
        one
    }];
    for d in 1..=degree_bound {
        powers.push(mul_trunc(f, &powers[d - 1], h, n));
        let columns: Vec<Vec<usize>> = (0..=d)
            .flat_map(|i| {
                let hp = &powers[i];
                (0..=height).map(move |j| {
                    let mut col = vec![0; n];
                    col[j..].copy_from_slice(&hp[..n - j]);
                    col
                })
            })
            .collect();
        if let Some(v) = first_null_vector(f, &columns, n) {
            return Some(v.chunks(height + 1).map(|c| poly::trim(c.to_vec())).collect());
        }
    }
    None
}

/// Searches units `e ∈ F_q[x]` of degree at most `search_bound` (nonzero
/// constant term, in increasing digit order, so `e = 1` first) for one
/// making `f̄ e^p` algebraic within the bounds.
pub fn kummer_obstruction(instance: &KummerInstance, search_bound: usize) -> KummerReport {
    let f = instance.field();
    let p = instance.p();
    let n = instance.precision();
    let height = p * search_bound;
    let unknowns = (search_bound + 1) * (height + 1);
    let mut report = KummerReport {
        verdict: Verdict::Inconclusive,
        search_bound,
        height_bound: height,
        precision: n,
        candidates: 0,
        unit: None,
        relation: None,
        detail: String::new(),
    };
    if search_bound == 0 {
        report.detail = "search bound 0 leaves no candidate relations".into();
        return report;
    }
    if n < 2 * unknowns || height >= n {
        report.detail = format!(
            "precision x^{n} is too small for {unknowns} unknown relation coefficients (needs at least {})",
            2 * unknowns
        );
        return report;
    }
    let q = f.order() as u64;
    let total = (q - 1) * q.pow(search_bound as u32);
    if total > KUMMER_CANDIDATE_LIMIT {
        report.detail = format!("{total} candidate units exceed the limit {KUMMER_CANDIDATE_LIMIT}");
        return report;
    }
    let fbar = instance.fbar_coeffs();
    for code in 0..q.pow(search_bound as u32 + 1) {
        if code % q == 0 {
            continue;
        }
        report.candidates += 1;
        let e: Vec<usize> = (0..=search_bound).map(|i| ((code / q.pow(i as u32)) % q) as usize).collect();
        let e = poly::trim(e);
        let ep = poly::frobenius(f, &e);
        let h = mul_trunc(f, &fbar, &ep, n);
        if let Some(rel) = bounded_relation(f, &h, search_bound, height, n) {
            report.verdict = Verdict::Descends;
            report.detail = format!(
                "e = {} makes f̄·e^{p} satisfy a degree-{} relation with coefficients of degree ≤ {height} modulo x^{n}",
                poly::format(f, &e, "x"),
                rel.len() - 1
            );
            report.unit = Some(e);
            report.relation = Some(rel);
            return report;
        }
    }
    report.verdict = Verdict::ObstructedWithinBounds;
    report.detail = format!(
        "no unit e of degree ≤ {search_bound} makes f̄·e^{p} satisfy a relation of degree ≤ {search_bound} with coefficients of degree ≤ {height} modulo x^{n}"
    );
    report
}
