//! Period power series in (λ, μ), θ-operators acting on them, annihilator
//! searches and the Appell F4 reduction of the first family.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::exactcore::rat::{factorial, fmt_rat, int, rat};
use crate::exactcore::{parse_poly, AlgebraError, BigRat, Exp, MultiPoly, RatFunc, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unknown family {0}")]
    UnknownFamily(String),
    #[error("ratio denominator vanishes at ({0}, {1})")]
    VanishingDenominator(u32, u32),
    #[error("ratio must live in the ring [n, m]")]
    RatioRing,
    #[error("fixed-point iteration did not stabilise within {0} steps")]
    NoConvergence(u32),
    #[error("series has zero constant term")]
    NotInvertible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum PeriodFamily {
    One,
    Two,
    Three,
}

impl PeriodFamily {
    pub const ALL: [PeriodFamily; 3] = [PeriodFamily::One, PeriodFamily::Two, PeriodFamily::Three];

    pub fn from_id(s: &str) -> Result<Self, PeriodError> {
        match s {
            "1" => Ok(Self::One),
            "2" => Ok(Self::Two),
            "3" => Ok(Self::Three),
            _ => Err(PeriodError::UnknownFamily(s.to_string())),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Two => "2",
            Self::Three => "3",
        }
    }

    /// Coefficient of `λ^n μ^m` with the constant prefactor dropped.
    pub fn coefficient(&self, n: u32, m: u32) -> BigRat {
        let f = |k: u32| factorial(k as u64);
        let sign = if n % 2 == 1 { -BigRat::one() } else { BigRat::one() };
        match self {
            Self::One => f(3 * m + 3 * n) / (f(n) * f(n) * f(m) * f(m) * f(m + n)),
            Self::Two => sign * f(4 * m + 3 * n) / (f(m) * f(m) * f(n) * f(m + n) * f(m + n)),
            Self::Three => sign * f(3 * m + 2 * n) / (f(m) * f(m) * f(n) * f(n) * f(n)),
        }
    }

    /// Exact ratios `c(n+1, m)/c(n, m)` and `c(n, m+1)/c(n, m)` as
    /// rational functions in the ring `[n, m]`.
    pub fn recurrence_ratios(&self) -> (RatFunc, RatFunc) {
        let ring = Ring::new(&["n", "m"]);
        let p = |s: &str| parse_poly(s, &ring).expect("static polynomial");
        let r = |a: &str, b: &str| RatFunc::new(p(a), p(b)).expect("nonzero");
        match self {
            Self::One => (
                r("(3*n+3*m+1)*(3*n+3*m+2)*(3*n+3*m+3)", "(n+1)^2*(n+m+1)"),
                r("(3*n+3*m+1)*(3*n+3*m+2)*(3*n+3*m+3)", "(m+1)^2*(n+m+1)"),
            ),
            Self::Two => (
                r("-(3*n+4*m+1)*(3*n+4*m+2)*(3*n+4*m+3)", "(n+1)*(n+m+1)^2"),
                r("(3*n+4*m+1)*(3*n+4*m+2)*(3*n+4*m+3)*(3*n+4*m+4)", "(m+1)^2*(n+m+1)^2"),
            ),
            Self::Three => (
                r("-(2*n+3*m+1)*(2*n+3*m+2)", "(n+1)^3"),
                r("(2*n+3*m+1)*(2*n+3*m+2)*(2*n+3*m+3)", "(m+1)^2"),
            ),
        }
    }
}

/// Coefficients of the third family's series with the roles of 2 and 3 in
/// the numerator exchanged: `(-1)^n (3n+2m)! / ((n!)^3 (m!)^2)`.
pub fn exchanged_three_coefficient(n: u32, m: u32) -> BigRat {
    let f = |k: u32| factorial(k as u64);
    let sign = if n % 2 == 1 { -BigRat::one() } else { BigRat::one() };
    sign * f(3 * n + 2 * m) / (f(n) * f(n) * f(n) * f(m) * f(m))
}

/// Truncated series `Σ c(n,m) λ^n μ^m` over `n + m <= order`; coefficients
/// with `n + m <= valid` are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiPowerSeries {
    order: u32,
    valid: u32,
    coeffs: BTreeMap<(u32, u32), BigRat>,
}

impl BiPowerSeries {
    pub fn zero(order: u32) -> Self {
        BiPowerSeries { order, valid: order, coeffs: BTreeMap::new() }
    }

    pub fn from_fn(order: u32, f: impl Fn(u32, u32) -> BigRat) -> Self {
        let mut s = Self::zero(order);
        for d in 0..=order {
            for n in 0..=d {
                s.set(n, d - n, f(n, d - n));
            }
        }
        s
    }

    pub fn constant(order: u32, c: BigRat) -> Self {
        let mut s = Self::zero(order);
        s.set(0, 0, c);
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn valid(&self) -> u32 {
        self.valid
    }

    pub fn coeff(&self, n: u32, m: u32) -> BigRat {
        self.coeffs.get(&(n, m)).cloned().unwrap_or_else(BigRat::zero)
    }

    fn set(&mut self, n: u32, m: u32, c: BigRat) {
        if n + m > self.order || c.is_zero() {
            self.coeffs.remove(&(n, m));
        } else {
            self.coeffs.insert((n, m), c);
        }
    }

    /// Nonzero coefficients in lexicographic `(n, m)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRat)> {
        self.coeffs.iter()
    }

    /// First nonzero coefficient within the validity order.
    pub fn first_nonzero(&self) -> Option<((u32, u32), BigRat)> {
        self.coeffs.iter().find(|((n, m), _)| n + m <= self.valid).map(|(k, v)| (*k, v.clone()))
    }

    pub fn truncate(&self, order: u32) -> Self {
        let mut s = Self::zero(order.min(self.order));
        s.valid = self.valid.min(order);
        for ((n, m), c) in &self.coeffs {
            s.set(*n, *m, c.clone());
        }
        s
    }

    /// Exchange the roles of λ and μ.
    pub fn swapped(&self) -> Self {
        let mut s = Self::zero(self.order);
        s.valid = self.valid;
        for ((n, m), c) in &self.coeffs {
            s.set(*m, *n, c.clone());
        }
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = Self::zero(self.order.min(other.order));
        s.valid = self.valid.min(other.valid);
        for ((n, m), c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            let v = s.coeff(*n, *m) + c;
            s.set(*n, *m, v);
        }
        s
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        let mut s = self.clone();
        s.coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).filter(|(_, v)| !v.is_zero()).collect();
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut s = Self::zero(self.order.min(other.order));
        s.valid = self.valid.min(other.valid);
        for ((n1, m1), c1) in &self.coeffs {
            for ((n2, m2), c2) in &other.coeffs {
                if n1 + n2 + m1 + m2 <= s.order {
                    let v = s.coeff(n1 + n2, m1 + m2) + c1 * c2;
                    s.set(n1 + n2, m1 + m2, v);
                }
            }
        }
        s
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self, PeriodError> {
        let c0 = self.coeff(0, 0);
        if c0.is_zero() {
            return Err(PeriodError::NotInvertible);
        }
        let mut s = Self::zero(self.order);
        s.valid = self.valid;
        for d in 0..=self.order {
            for n in 0..=d {
                let m = d - n;
                let mut acc = if d == 0 { BigRat::one() } else { BigRat::zero() };
                for ((a, b), c) in &self.coeffs {
                    if (*a, *b) == (0, 0) || *a > n || *b > m {
                        continue;
                    }
                    acc -= c * s.coeff(n - a, m - b);
                }
                s.set(n, m, acc / &c0);
            }
        }
        Ok(s)
    }

    /// Expansion of a polynomial in the ring variables named `l` and `m`.
    pub fn from_poly(order: u32, p: &MultiPoly) -> Result<Self, PeriodError> {
        let ring = p.ring();
        let li = ring.index("l");
        let mi = ring.index("m");
        let mut s = Self::zero(order);
        for (e, c) in p.terms() {
            for (i, k) in e.0.iter().enumerate() {
                if *k > 0 && Some(i) != li && Some(i) != mi {
                    return Err(AlgebraError::UnknownVariable(ring.vars()[i].clone()).into());
                }
            }
            let n = li.map(|i| e.0[i]).unwrap_or(0);
            let m = mi.map(|i| e.0[i]).unwrap_or(0);
            let v = s.coeff(n, m) + c;
            s.set(n, m, v);
        }
        Ok(s)
    }

    pub fn from_ratfunc(order: u32, r: &RatFunc) -> Result<Self, PeriodError> {
        let num = Self::from_poly(order, r.num())?;
        let den = Self::from_poly(order, r.den())?;
        Ok(num.mul(&den.inverse()?))
    }
}

pub fn period_series(family: PeriodFamily, order: u32) -> BiPowerSeries {
    BiPowerSeries::from_fn(order, |n, m| family.coefficient(n, m))
}

/// Σ c · λ^a μ^b θλ^p θμ^q with every θ to the right of its monomial.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ThetaOperator {
    terms: BTreeMap<(u32, u32, u32, u32), BigRat>,
}

fn theta_ring() -> Ring {
    Ring::new(&["l", "m", "Tl", "Tm"])
}

fn binomial(n: u32, k: u32) -> BigRat {
    factorial(n as u64) / (factorial(k as u64) * factorial((n - k) as u64))
}

impl ThetaOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: BigRat, a: u32, b: u32, p: u32, q: u32) -> Self {
        let mut o = Self::zero();
        o.add_term((a, b, p, q), c);
        o
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32, u32, u32), &BigRat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: (u32, u32, u32, u32), c: BigRat) {
        let v = self.terms.get(&k).cloned().unwrap_or_else(BigRat::zero) + c;
        if v.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, v);
        }
    }

    /// Reads the commutative text `c * l^a * m^b * Tl^p * Tm^q + ...`, in
    /// which each monomial in `l, m` stands to the left of its θ-factors.
    pub fn parse(src: &str) -> Result<Self, PeriodError> {
        Ok(Self::from_commutative(&parse_poly(src, &theta_ring())?))
    }

    /// Reads a polynomial in `[l, m, Tl, Tm]` term by term.
    pub fn from_commutative(p: &MultiPoly) -> Self {
        let r = p.ring();
        let at = |e: &Exp, v: &str| r.index(v).map(|i| e.0[i]).unwrap_or(0);
        let mut o = Self::zero();
        for (e, c) in p.terms() {
            o.add_term((at(e, "l"), at(e, "m"), at(e, "Tl"), at(e, "Tm")), c.clone());
        }
        o
    }

    pub fn to_commutative(&self) -> MultiPoly {
        let ring = theta_ring();
        MultiPoly::from_terms(&ring, self.terms.iter().map(|((a, b, p, q), c)| (Exp(vec![*a, *b, *p, *q]), c.clone())))
    }

    /// Polynomial in θ only, read from a polynomial in `[n, m]` with
    /// `n -> θλ`, `m -> θμ`.
    pub fn from_theta_poly(p: &MultiPoly) -> Self {
        let mut o = Self::zero();
        for (e, c) in p.terms() {
            o.add_term((0, 0, e.0[0], e.0[1]), c.clone());
        }
        o
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut o = self.clone();
        for (k, c) in &other.terms {
            o.add_term(*k, c.clone());
        }
        o
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRat::one()))
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        let mut o = Self::zero();
        for (k, v) in &self.terms {
            o.add_term(*k, v * c);
        }
        o
    }

    /// Canonical product, using `θλ λ^c = λ^c (θλ + c)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut o = Self::zero();
        for ((a, b, p, q), c1) in &self.terms {
            for ((c, d, r, s), c2) in &other.terms {
                for i in 0..=*p {
                    let ci = binomial(*p, i) * num::pow(int(*c as i64), (*p - i) as usize);
                    if ci.is_zero() {
                        continue;
                    }
                    for j in 0..=*q {
                        let cj = binomial(*q, j) * num::pow(int(*d as i64), (*q - j) as usize);
                        if cj.is_zero() {
                            continue;
                        }
                        o.add_term((a + c, b + d, i + r, j + s), c1 * c2 * &ci * &cj);
                    }
                }
            }
        }
        o
    }

    pub fn theta_l() -> Self {
        Self::monomial(BigRat::one(), 0, 0, 1, 0)
    }

    pub fn theta_m() -> Self {
        Self::monomial(BigRat::one(), 0, 0, 0, 1)
    }

    pub fn lambda() -> Self {
        Self::monomial(BigRat::one(), 1, 0, 0, 0)
    }

    pub fn mu() -> Self {
        Self::monomial(BigRat::one(), 0, 1, 0, 0)
    }

    /// Largest `a + b` among the monomial coefficients.
    pub fn coeff_degree(&self) -> u32 {
        self.terms.keys().map(|(a, b, _, _)| a + b).max().unwrap_or(0)
    }

    pub fn theta_degree(&self) -> u32 {
        self.terms.keys().map(|(_, _, p, q)| p + q).max().unwrap_or(0)
    }

    /// Exchange θλ and θμ, leaving the monomials alone.
    pub fn swap_thetas(&self) -> Self {
        let mut o = Self::zero();
        for ((a, b, p, q), c) in &self.terms {
            o.add_term((*a, *b, *q, *p), c.clone());
        }
        o
    }

    /// Exchange λ and μ everywhere.
    pub fn swap_variables(&self) -> Self {
        let mut o = Self::zero();
        for ((a, b, p, q), c) in &self.terms {
            o.add_term((*b, *a, *q, *p), c.clone());
        }
        o
    }

    /// Coefficient polynomial in `ring` (which must contain `l` and `m`)
    /// for each θ-monomial `(p, q)`.
    pub fn coefficient_polys(&self, ring: &Ring) -> BTreeMap<(u32, u32), MultiPoly> {
        let li = ring.index("l").expect("ring has l");
        let mi = ring.index("m").expect("ring has m");
        let mut out: BTreeMap<(u32, u32), MultiPoly> = BTreeMap::new();
        for ((a, b, p, q), c) in &self.terms {
            let mut e = Exp::zero(ring.len());
            e.0[li] = *a;
            e.0[mi] = *b;
            let t = MultiPoly::monomial(ring, e, c.clone());
            let slot = out.entry((*p, *q)).or_insert_with(|| MultiPoly::zero(ring));
            *slot = &*slot + &t;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_commutative())
    }
}

pub fn apply_operator(op: &ThetaOperator, s: &BiPowerSeries) -> BiPowerSeries {
    let mut out = BiPowerSeries::zero(s.order);
    out.valid = s.valid;
    for ((a, b, p, q), c) in &op.terms {
        for ((n, m), v) in &s.coeffs {
            if n + m + a + b > s.order {
                continue;
            }
            let w = c * v * num::pow(int(*n as i64), *p as usize) * num::pow(int(*m as i64), *q as usize);
            let cur = out.coeff(n + a, m + b) + w;
            out.set(n + a, m + b, cur);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Annihilation {
    Pass,
    FirstFailure { n: u32, m: u32, residual: String },
}

impl Annihilation {
    pub fn passed(&self) -> bool {
        matches!(self, Annihilation::Pass)
    }
}

pub fn annihilation_report(op: &ThetaOperator, s: &BiPowerSeries) -> Annihilation {
    match apply_operator(op, s).first_nonzero() {
        None => Annihilation::Pass,
        Some(((n, m), r)) => Annihilation::FirstFailure { n, m, residual: fmt_rat(&r) },
    }
}

fn ratio_parts(r: &RatFunc) -> Result<(MultiPoly, MultiPoly), PeriodError> {
    let nm = Ring::new(&["n", "m"]);
    if r.ring() != &nm {
        return Err(PeriodError::RatioRing);
    }
    Ok((r.num().clone(), r.den().clone()))
}

/// `Q(θ) - x P(θ)` for the ratio `P/Q~` along the variable `dir` (0 = λ,
/// 1 = μ), with `Q(θ) = Q~(θ - e_dir)`, left-multiplied by θ_dir when
/// `Q` does not already vanish on the boundary `θ_dir = 0`.
fn recurrence_operator(ratio: &RatFunc, dir: usize, check: u32) -> Result<ThetaOperator, PeriodError> {
    let (p, q) = ratio_parts(ratio)?;
    for d in 0..=check {
        for n in 0..=d {
            if q.eval(&[int(n as i64), int((d - n) as i64)]).is_zero() {
                return Err(PeriodError::VanishingDenominator(n, d - n));
            }
        }
    }
    let shifted = q.shift_var(dir, &-BigRat::one());
    let mut qop = ThetaOperator::from_theta_poly(&shifted);
    let boundary = shifted.eval_partial(&[(dir, BigRat::zero())]);
    let (theta, x) = if dir == 0 {
        (ThetaOperator::theta_l(), ThetaOperator::lambda())
    } else {
        (ThetaOperator::theta_m(), ThetaOperator::mu())
    };
    let mut pop = x.mul(&ThetaOperator::from_theta_poly(&p));
    if !boundary.is_zero() {
        qop = theta.mul(&qop);
        pop = theta.mul(&pop);
    }
    Ok(qop.sub(&pop))
}

/// Operators in λ and μ built from the two coefficient ratios; both
/// annihilate the series by construction.
pub fn operator_from_recurrence(
    ratio_l: &RatFunc,
    ratio_m: &RatFunc,
) -> Result<(ThetaOperator, ThetaOperator), PeriodError> {
    Ok((recurrence_operator(ratio_l, 0, 24)?, recurrence_operator(ratio_m, 1, 24)?))
}

/// Reduced row echelon form over Q; returns the pivot columns.
pub(crate) fn rref(a: &mut [Vec<BigRat>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRat::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Candidate monomials `λ^a μ^b θλ^p θμ^q`, ordered.
fn search_monomials(theta_deg: u32, coeff_deg: u32) -> Vec<(u32, u32, u32, u32)> {
    let mut v = Vec::new();
    for cd in 0..=coeff_deg {
        for a in (0..=cd).rev() {
            for td in 0..=theta_deg {
                for p in (0..=td).rev() {
                    v.push((a, cd - a, p, td - p));
                }
            }
        }
    }
    v
}

/// Basis of all operators with θ-degree `<= theta_deg` and monomial
/// coefficients of degree `<= coeff_deg` annihilating `s` to its validity
/// order. Each basis vector is scaled to primitive integer coefficients.
pub fn find_annihilators(s: &BiPowerSeries, theta_deg: u32, coeff_deg: u32) -> Vec<ThetaOperator> {
    let mons = search_monomials(theta_deg, coeff_deg);
    let mut rows = Vec::new();
    for d in 0..=s.valid {
        for n in 0..=d {
            let m = d - n;
            let row: Vec<BigRat> = mons
                .iter()
                .map(|(a, b, p, q)| {
                    if *a > n || *b > m {
                        return BigRat::zero();
                    }
                    let (nn, mm) = (n - a, m - b);
                    s.coeff(nn, mm) * num::pow(int(nn as i64), *p as usize) * num::pow(int(mm as i64), *q as usize)
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..mons.len()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRat::zero(); mons.len()];
            v[f] = BigRat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[r][f].clone();
            }
            let mut op = ThetaOperator::zero();
            for (k, c) in mons.iter().zip(v) {
                op.add_term(*k, c);
            }
            primitive(&op)
        })
        .collect()
}

/// Scale to coprime integer coefficients with a positive leading term.
pub fn primitive(op: &ThetaOperator) -> ThetaOperator {
    let Some((_, last)) = op.terms.iter().next_back() else { return op.clone() };
    let mut den = num::BigInt::one();
    let mut g = num::BigInt::zero();
    for c in op.terms.values() {
        den = num::integer::lcm(den, c.denom().clone());
    }
    for c in op.terms.values() {
        g = num::integer::gcd(g, (c * BigRat::from_integer(den.clone())).to_integer());
    }
    let mut f = BigRat::new(den, g);
    if last.is_negative() {
        f = -f;
    }
    op.scale(&f)
}

/// Whether `op` is a Q-linear combination of `basis`.
pub fn in_span(op: &ThetaOperator, basis: &[ThetaOperator]) -> bool {
    let mut keys: Vec<(u32, u32, u32, u32)> = op.terms.keys().copied().collect();
    for b in basis {
        keys.extend(b.terms.keys().copied());
    }
    keys.sort();
    keys.dedup();
    let column = |o: &ThetaOperator| -> Vec<BigRat> { keys.iter().map(|k| o.terms.get(k).cloned().unwrap_or_default()).collect() };
    let rank = |ops: &[&ThetaOperator]| {
        let mut m: Vec<Vec<BigRat>> = ops.iter().map(|o| column(o)).collect();
        rref(&mut m).len()
    };
    let base: Vec<&ThetaOperator> = basis.iter().collect();
    let mut with = base.clone();
    with.push(op);
    rank(&base) == rank(&with)
}

/// `F(a, b, c; x)` coefficients up to `k`.
fn gauss_coefficients(a: &BigRat, b: &BigRat, c: &BigRat, k: u32) -> Vec<BigRat> {
    let mut out = vec![BigRat::one()];
    for j in 0..k {
        let j = int(j as i64);
        let prev = out.last().unwrap().clone();
        out.push(prev * (a + &j) * (b + &j) / ((c + &j) * (&j + int(1))));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum F4Outcome {
    Pass,
    FirstFailure { n: u32, m: u32, product: String, series: String },
}

/// Solves `x(1 - y) = 27λ`, `y(1 - x) = 27μ` by fixed-point iteration and
/// compares `F(1/3, 2/3, 1; x) F(1/3, 2/3, 1; y)` with the first series.
pub fn f4_factorization_check(order: u32) -> Result<F4Outcome, PeriodError> {
    let l = BiPowerSeries::from_fn(order, |n, m| if (n, m) == (1, 0) { int(27) } else { BigRat::zero() });
    let mu = l.swapped();
    let (mut x, mut y) = (l.clone(), mu.clone());
    let mut stable = false;
    for _ in 0..=order + 1 {
        let xy = x.mul(&y);
        let nx = l.add(&xy);
        let ny = mu.add(&xy);
        if nx == x && ny == y {
            stable = true;
            break;
        }
        x = nx;
        y = ny;
    }
    if !stable {
        return Err(PeriodError::NoConvergence(order + 2));
    }
    let g = gauss_coefficients(&rat(1, 3), &rat(2, 3), &BigRat::one(), order);
    let compose = |t: &BiPowerSeries| {
        let mut acc = BiPowerSeries::zero(order);
        let mut pw = BiPowerSeries::constant(order, BigRat::one());
        for c in &g {
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(t);
        }
        acc
    };
    let prod = compose(&x).mul(&compose(&y));
    let eta = period_series(PeriodFamily::One, order);
    for d in 0..=order {
        for n in 0..=d {
            let m = d - n;
            if prod.coeff(n, m) != eta.coeff(n, m) {
                return Ok(F4Outcome::FirstFailure {
                    n,
                    m,
                    product: fmt_rat(&prod.coeff(n, m)),
                    series: fmt_rat(&eta.coeff(n, m)),
                });
            }
        }
    }
    Ok(F4Outcome::Pass)
}
