use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use super::rat::{fmt_rat, int, BigRat};
use super::ratfunc::RatFunc;
use super::AlgebraError;

/// Ordered list of variable names shared by polynomials that may be combined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring(Arc<Vec<String>>);

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S]) -> Ring {
        let names: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate variable {n}");
        }
        Ring(Arc::new(names))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    /// `self`'s variables followed by those of `other` not already present.
    pub fn union(&self, other: &Ring) -> Ring {
        let mut v: Vec<String> = self.0.to_vec();
        for n in other.vars() {
            if !v.contains(n) {
                v.push(n.clone());
            }
        }
        Ring(Arc::new(v))
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exp(pub Vec<u32>);

impl Exp {
    pub fn zero(n: usize) -> Exp {
        Exp(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, o: &Exp) -> Exp {
        Exp(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn checked_sub(&self, o: &Exp) -> Option<Exp> {
        let mut v = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            v.push(a.checked_sub(*b)?);
        }
        Some(Exp(v))
    }
}

impl Ord for Exp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over Q. Terms are kept in ascending grlex order, so the
/// leading term is the last one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    ring: Ring,
    terms: BTreeMap<Exp, BigRat>,
}

impl MultiPoly {
    pub fn zero(ring: &Ring) -> Self {
        MultiPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: BigRat) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Exp::zero(ring.len()), c);
        p
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, BigRat::one())
    }

    pub fn from_int(ring: &Ring, c: i64) -> Self {
        Self::constant(ring, int(c))
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self, AlgebraError> {
        let i = ring
            .index(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        let mut e = Exp::zero(ring.len());
        e.0[i] = 1;
        Ok(Self::monomial(ring, e, BigRat::one()))
    }

    pub fn monomial(ring: &Ring, e: Exp, c: BigRat) -> Self {
        assert_eq!(e.0.len(), ring.len());
        let mut p = Self::zero(ring);
        p.add_term(e, c);
        p
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Exp, BigRat)>) -> Self {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            assert_eq!(e.0.len(), ring.len());
            p.add_term(e, c);
        }
        p
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &BigRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    pub fn constant_term(&self) -> BigRat {
        self.terms
            .get(&Exp::zero(self.ring.len()))
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }

    pub fn leading(&self) -> Option<(&Exp, &BigRat)> {
        self.terms.last_key_value()
    }

    pub fn coefficient(&self, e: &Exp) -> BigRat {
        self.terms.get(e).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ring(&self, o: &MultiPoly) {
        assert!(self.ring == o.ring, "ring mismatch: {:?} vs {:?}", self.ring, o.ring);
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// `self -= c * x^shift * b`, in place.
    fn sub_shifted(&mut self, b: &MultiPoly, shift: &Exp, c: &BigRat) {
        for (e, v) in &b.terms {
            self.add_term(e.add(shift), -(v * c));
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Exp::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0)
    }

    /// Smallest exponent of variable `i` over all terms (order at `x_i = 0`).
    pub fn min_degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e.0[i]).min().unwrap_or(0)
    }

    /// Coefficients with respect to variable `i`, each still living in the full ring.
    pub fn coefficients_in(&self, i: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = std::mem::replace(&mut f.0[i], 0);
            out.entry(k)
                .or_insert_with(|| MultiPoly::zero(&self.ring))
                .add_term(f, c.clone());
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            if e.0[i] > 0 {
                let mut f = e.clone();
                f.0[i] -= 1;
                p.add_term(f, c * int(e.0[i] as i64));
            }
        }
        p
    }

    /// Euler operator `x_i d/dx_i`.
    pub fn theta(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * int(e.0[i] as i64));
        }
        p
    }

    /// Multiply by `x_i^k`.
    pub fn mul_var_pow(&self, i: usize, k: u32) -> Self {
        let mut p = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.0[i] += k;
            p.add_term(f, c.clone());
        }
        p
    }

    /// Divide by `x_i^k`; `None` unless every term carries the power.
    pub fn div_var_pow(&self, i: usize, k: u32) -> Option<Self> {
        let mut p = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f.0[i] = f.0[i].checked_sub(k)?;
            p.add_term(f, c.clone());
        }
        Some(p)
    }

    /// `p(x_i + c)`.
    pub fn shift_var(&self, i: usize, c: &BigRat) -> Self {
        if c.is_zero() {
            return self.clone();
        }
        let mut lin = Self::var_at(&self.ring, i);
        lin.add_term(Exp::zero(self.ring.len()), c.clone());
        let coeffs = self.coefficients_in(i);
        let top = self.degree_in(i);
        let mut acc = Self::zero(&self.ring);
        for k in (0..=top).rev() {
            acc = &acc * &lin;
            if let Some(c) = coeffs.get(&k) {
                acc = &acc + c;
            }
        }
        acc
    }

    fn var_at(ring: &Ring, i: usize) -> Self {
        let mut e = Exp::zero(ring.len());
        e.0[i] = 1;
        Self::monomial(ring, e, BigRat::one())
    }

    /// Largest `k` with `(x_i - c)^k | p`.
    pub fn vanishing_order(&self, var: &str, c: &BigRat) -> Result<u32, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::OrderOfZero);
        }
        let i = self
            .ring
            .index(var)
            .ok_or_else(|| AlgebraError::UnknownVariable(var.to_string()))?;
        Ok(self.shift_var(i, c).min_degree_in(i))
    }

    /// Substitute rational constants for some variables; the ring is unchanged.
    pub fn eval_partial(&self, point: &[(usize, BigRat)]) -> Self {
        let mut p = Self::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let mut v = c.clone();
            for (i, x) in point {
                let k = std::mem::replace(&mut f.0[*i], 0);
                if k > 0 {
                    v *= num::pow(x.clone(), k as usize);
                }
            }
            p.add_term(f, v);
        }
        p
    }

    /// Value at a full rational point given in ring order.
    pub fn eval(&self, point: &[BigRat]) -> BigRat {
        assert_eq!(point.len(), self.ring.len());
        let mut s = BigRat::zero();
        for (e, c) in &self.terms {
            let mut v = c.clone();
            for (x, k) in point.iter().zip(&e.0) {
                if *k > 0 {
                    v *= num::pow(x.clone(), *k as usize);
                }
            }
            s += v;
        }
        s
    }

    /// Re-express in another ring containing every variable that occurs.
    pub fn to_ring(&self, ring: &Ring) -> Result<Self, AlgebraError> {
        self.rename_into(ring, &[])
    }

    /// Move into `ring`, renaming variables via `(from, to)` pairs.
    pub fn rename_into(&self, ring: &Ring, renames: &[(&str, &str)]) -> Result<Self, AlgebraError> {
        if *ring == self.ring && renames.is_empty() {
            return Ok(self.clone());
        }
        let mut idx = Vec::with_capacity(self.ring.len());
        for v in self.ring.vars() {
            let name = renames
                .iter()
                .find(|(f, _)| f == v)
                .map(|(_, t)| *t)
                .unwrap_or(v.as_str());
            idx.push(ring.index(name));
        }
        let mut p = Self::zero(ring);
        for (e, c) in &self.terms {
            let mut f = Exp::zero(ring.len());
            for (j, k) in e.0.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                match idx[j] {
                    Some(t) => f.0[t] += k,
                    None => return Err(AlgebraError::UnknownVariable(self.ring.vars()[j].clone())),
                }
            }
            p.add_term(f, c.clone());
        }
        Ok(p)
    }

    /// Names of variables that actually occur.
    pub fn support_vars(&self) -> Vec<String> {
        let mut used = vec![false; self.ring.len()];
        for e in self.terms.keys() {
            for (u, k) in used.iter_mut().zip(&e.0) {
                *u |= *k > 0;
            }
        }
        self.ring
            .vars()
            .iter()
            .zip(used)
            .filter(|(_, u)| *u)
            .map(|(v, _)| v.clone())
            .collect()
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> BigRat {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            BigRat::one()
        } else {
            BigRat::new(g, l)
        }
    }

    /// Primitive integer polynomial with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().unwrap().1.is_negative() {
            c = -c;
        }
        self.scale(&(BigRat::one() / c))
    }

    /// Multivariate division by a single divisor: `self = q*b + r`, where no
    /// term of `r` is divisible by the leading term of `b`.
    pub fn div_rem(&self, b: &MultiPoly) -> Result<(MultiPoly, MultiPoly), AlgebraError> {
        self.same_ring(b);
        let (lbe, lbc) = b.leading().ok_or(AlgebraError::DivisionByZero)?;
        let (lbe, lbc) = (lbe.clone(), lbc.clone());
        let mut p = self.clone();
        let mut q = Self::zero(&self.ring);
        let mut r = Self::zero(&self.ring);
        while let Some((e, c)) = p.terms.last_key_value().map(|(e, c)| (e.clone(), c.clone())) {
            match e.checked_sub(&lbe) {
                Some(d) => {
                    let t = &c / &lbc;
                    p.sub_shifted(b, &d, &t);
                    q.add_term(d, t);
                }
                None => {
                    p.terms.remove(&e);
                    r.add_term(e, c);
                }
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `None` as soon as a leading term fails to divide.
    pub fn exact_divide(&self, b: &MultiPoly) -> Result<Option<MultiPoly>, AlgebraError> {
        self.same_ring(b);
        let (lbe, lbc) = b.leading().ok_or(AlgebraError::DivisionByZero)?;
        let (lbe, lbc) = (lbe.clone(), lbc.clone());
        let mut p = self.clone();
        let mut q = Self::zero(&self.ring);
        while let Some((e, c)) = p.terms.last_key_value().map(|(e, c)| (e.clone(), c.clone())) {
            let Some(d) = e.checked_sub(&lbe) else {
                return Ok(None);
            };
            let t = &c / &lbc;
            p.sub_shifted(b, &d, &t);
            q.add_term(d, t);
        }
        Ok(Some(q))
    }

    /// Divide out `f` as many times as it goes; returns the cofactor and the count.
    pub fn strip_factor(&self, f: &MultiPoly) -> (MultiPoly, u32) {
        let mut p = self.clone();
        let mut k = 0;
        if f.is_constant() || p.is_zero() {
            return (p, 0);
        }
        while let Ok(Some(q)) = p.exact_divide(f) {
            p = q;
            k += 1;
        }
        (p, k)
    }

    /// Compose with rational functions. Variables absent from `map` must exist
    /// in `target` and are carried over unchanged.
    pub fn substitute(
        &self,
        map: &BTreeMap<String, RatFunc>,
        target: &Ring,
    ) -> Result<RatFunc, AlgebraError> {
        let n = self.ring.len();
        let mut nums = Vec::with_capacity(n);
        let mut dens = Vec::with_capacity(n);
        for (i, v) in self.ring.vars().iter().enumerate() {
            let used = self.degree_in(i) > 0;
            let (a, b) = match map.get(v) {
                Some(r) => {
                    let r = r.to_ring(target)?;
                    if r.den().is_zero() {
                        return Err(AlgebraError::ZeroDenominator);
                    }
                    (r.num().clone(), r.den().clone())
                }
                None if !used => (MultiPoly::zero(target), MultiPoly::one(target)),
                None => {
                    if target.index(v).is_none() {
                        return Err(AlgebraError::UnknownVariable(v.clone()));
                    }
                    (MultiPoly::var(target, v)?, MultiPoly::one(target))
                }
            };
            nums.push(a);
            dens.push(b);
        }
        let top: Vec<u32> = (0..n).map(|i| self.degree_in(i)).collect();
        let pows = |base: &MultiPoly, k: u32| {
            let mut v = vec![MultiPoly::one(target)];
            for j in 1..=k as usize {
                let next = &v[j - 1] * base;
                v.push(next);
            }
            v
        };
        let npow: Vec<Vec<MultiPoly>> = (0..n).map(|i| pows(&nums[i], top[i])).collect();
        let dpow: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| {
                if dens[i].is_constant() && dens[i].constant_term().is_one() {
                    vec![MultiPoly::one(target); top[i] as usize + 1]
                } else {
                    pows(&dens[i], top[i])
                }
            })
            .collect();
        let mut num = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for i in 0..n {
                let k = e.0[i] as usize;
                if k > 0 {
                    t = &t * &npow[i][k];
                }
                let rest = top[i] as usize - k;
                if rest > 0 && !dpow[i][rest].is_constant() {
                    t = &t * &dpow[i][rest];
                }
            }
            num = &num + &t;
        }
        let mut den = MultiPoly::one(target);
        for i in 0..n {
            den = &den * &dpow[i][top[i] as usize];
        }
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        RatFunc::new(num, den)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || e.degree() == 0 {
                parts.push(fmt_rat(&a));
            }
            for (v, p) in self.ring.vars().iter().zip(&e.0) {
                match p {
                    0 => {}
                    1 => parts.push(v.clone()),
                    _ => parts.push(format!("{v}^{p}")),
                }
            }
            write!(f, "{}", parts.join(" * "))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.same_ring(o);
        let (mut big, small) = if self.terms.len() >= o.terms.len() { (self.clone(), o) } else { (o.clone(), self) };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.same_ring(o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.same_ring(o);
        let mut acc: BTreeMap<Exp, BigRat> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.add(e2);
                let v = c1 * c2;
                match acc.get_mut(&e) {
                    Some(x) => *x += v,
                    None => {
                        acc.insert(e, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiPoly { ring: self.ring.clone(), terms: acc }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-BigRat::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: &MultiPoly) -> MultiPoly { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
