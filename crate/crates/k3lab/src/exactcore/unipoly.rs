use num::{One, Zero};

use super::poly::MultiPoly;
use super::rat::{int, BigRat};

/// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRat>);

impl UniPoly {
    pub fn new(mut c: Vec<BigRat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    /// Read a polynomial that only involves variable `i`.
    pub fn from_multi(p: &MultiPoly, i: usize) -> Option<Self> {
        let mut c = vec![BigRat::zero(); p.degree_in(i) as usize + 1];
        for (e, v) in p.terms() {
            if e.0.iter().enumerate().any(|(j, k)| j != i && *k > 0) {
                return None;
            }
            c[e.0[i] as usize] = v.clone();
        }
        Some(Self::new(c))
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn rem(&self, b: &UniPoly) -> UniPoly {
        let db = b.degree().expect("division by zero polynomial");
        let lb = b.0[db].clone();
        let mut r = self.0.clone();
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let t = &r[k] / &lb;
            for j in 0..=db {
                let v = &t * &b.0[j];
                r[k - db + j] -= v;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let inv = BigRat::one() / l;
                Self::new(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn gcd(&self, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}
