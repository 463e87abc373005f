use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::poly::{MultiPoly, Ring};
use super::rat::BigRat;
use super::AlgebraError;

/// Quotient of polynomials, never reduced by a polynomial gcd. The
/// denominator is scaled to be primitive with positive leading coefficient.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        let mut c = den.content();
        if den.leading().unwrap().1.is_negative() {
            c = -c;
        }
        let inv = BigRat::one() / c;
        Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
    }

    /// Skips every check; only for exercising error paths.
    pub fn from_parts_unchecked(num: MultiPoly, den: MultiPoly) -> Self {
        RatFunc { num, den }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.ring());
        RatFunc { num: p, den }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::from_poly(MultiPoly::zero(ring))
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_poly(MultiPoly::one(ring))
    }

    pub fn constant(ring: &Ring, c: BigRat) -> Self {
        Self::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_ring(&self, ring: &Ring) -> Result<Self, AlgebraError> {
        Ok(RatFunc { num: self.num.to_ring(ring)?, den: self.den.to_ring(ring)? })
    }

    /// Polynomial value if the denominator divides the numerator.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        self.num.exact_divide(&self.den).ok().flatten()
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Euler operator `x_i d/dx_i` by the quotient rule.
    pub fn theta(&self, i: usize) -> Self {
        let n = &(&self.num.theta(i) * &self.den) - &(&self.num * &self.den.theta(i));
        let d = &self.den * &self.den;
        Self::new(n, d).expect("square of a nonzero denominator")
    }

    /// Remove common copies of `f` from numerator and denominator.
    pub fn cancel_factor(&self, f: &MultiPoly) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if f.is_constant() {
            return self.clone();
        }
        while let Ok(Some(dq)) = den.exact_divide(f) {
            if num.is_zero() {
                den = dq;
                continue;
            }
            let Ok(Some(nq)) = num.exact_divide(f) else { break };
            num = nq;
            den = dq;
        }
        if num.is_zero() {
            return Self::zero(self.ring());
        }
        Self::new(num, den).expect("cofactor of a nonzero denominator")
    }

    pub fn eval(&self, point: &[BigRat]) -> Result<BigRat, AlgebraError> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(self.num.eval(point) / d)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function.
    fn div(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.den, &self.den * &o.num).expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}
