use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Reduced arbitrary-precision rational with positive denominator.
pub type BigRat = BigRational;

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: &BigInt) -> BigRat {
    BigRat::from_integer(n.clone())
}

/// `p/q` or `p`, the fixture coefficient format.
pub fn fmt_rat(r: &BigRat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Integer factorial as a rational.
pub fn factorial(n: u64) -> BigRat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    big(&acc)
}

pub fn is_nonneg(r: &BigRat) -> bool {
    !r.is_negative()
}

/// Sign as -1, 0, 1.
pub fn sign(r: &BigRat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(fmt_rat(&r), "-3/2");
        assert_eq!(fmt_rat(&BigRat::zero()), "0");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(6), int(720));
    }
}
