//! Multivariate gcd over Q by recursive primitive pseudo-remainder sequences.

use num::One;

use super::poly::MultiPoly;
use super::ratfunc::RatFunc;
use super::rat::BigRat;

/// Leading coefficient and degree with respect to variable `v`.
fn lead_in(p: &MultiPoly, v: usize) -> (MultiPoly, u32) {
    let d = p.degree_in(v);
    let c = p.coefficients_in(v).remove(&d).unwrap_or_else(|| MultiPoly::zero(p.ring()));
    (c, d)
}

/// `lc(b)^k a = q b + r` with `deg_v r < deg_v b`; only `r` is returned.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
    let (lb, db) = lead_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let (lr, dr) = lead_in(&r, v);
        r = &(&r * &lb) - &(&b.mul_var_pow(v, dr - db) * &lr);
    }
    r
}

/// Gcd of the coefficients of `p` with respect to `v`.
fn content_in(p: &MultiPoly, v: usize) -> MultiPoly {
    p.coefficients_in(v).values().fold(MultiPoly::zero(p.ring()), |g, c| gcd(&g, c))
}

fn divide(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a.exact_divide(b).ok().flatten().expect("gcd divides its arguments")
}

fn normalize(p: &MultiPoly) -> MultiPoly {
    if p.is_zero() {
        p.clone()
    } else if p.is_constant() {
        MultiPoly::one(p.ring())
    } else {
        p.primitive()
    }
}

/// Greatest common divisor, primitive with positive leading coefficient
/// (1 for coprime inputs, 0 only for two zero inputs).
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.ring());
    }
    let n = a.ring().len();
    let Some(v) = (0..n).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0) else {
        return MultiPoly::one(a.ring());
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&content_in(a, v), b);
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let mut p = divide(a, &ca);
    let mut q = divide(b, &cb);
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.degree_in(v) == 0 {
            p = MultiPoly::one(a.ring());
            break;
        }
        let r = pseudo_rem(&p, &q, v);
        p = q;
        q = if r.is_zero() { r } else { divide(&r, &content_in(&r, v)).primitive() };
    }
    let prim = if p.degree_in(v) == 0 { MultiPoly::one(a.ring()) } else { divide(&p, &content_in(&p, v)) };
    normalize(&(&prim * &gcd(&ca, &cb)))
}

impl RatFunc {
    /// Numerator and denominator with their gcd removed and the
    /// denominator scaled to a primitive polynomial with positive leading
    /// coefficient.
    pub fn reduced(&self) -> RatFunc {
        if self.num().is_zero() {
            return RatFunc::zero(self.ring());
        }
        let g = gcd(self.num(), self.den());
        let num = divide(self.num(), &g);
        let den = divide(self.den(), &g);
        let p = den.primitive();
        let scale = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRat::one)
            / p.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRat::one);
        RatFunc::from_parts_unchecked(num.scale(&(BigRat::one() / scale)), p)
    }
}
