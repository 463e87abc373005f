//! The period domain of a rank-4 transcendental form and membership in
//! its integral orthogonal group, with the component-preserving
//! subgroup decided by an exact orientation sign.
//!
//! Vectors are rows: a point `ξ` maps to `ξ g`, so `g` is an isometry
//! exactly when `g A gᵗ = A`.

use num::{BigInt, One, Signed, Zero};

use crate::exactcore::BigRat;
use crate::fixtures::DomainEntry;
use crate::lattice::{determinant, signature, GramMatrix, IntMatrix, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonodromyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("expected a 4x4 form, got dimension {0}")]
    Dimension(usize),
    #[error("form has signature ({0}, {1}), not (2, 2)")]
    Signature(usize, usize),
    #[error("vector has length {0}")]
    VectorLength(usize),
    #[error("matrix is not 4x4")]
    MatrixShape,
    #[error("reference point is not in the period domain")]
    ReferenceOutsideDomain,
    #[error("reference pair is not positive definite")]
    ReferencePair,
    #[error("reference pair invalid for this point")]
    DegeneratePairing,
}

/// A 4×4 integral symmetric form of signature (2, 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    a: GramMatrix,
}

impl QuadraticSpace {
    pub fn new(a: GramMatrix) -> Result<Self, MonodromyError> {
        if a.dim() != 4 {
            return Err(MonodromyError::Dimension(a.dim()));
        }
        if determinant(a.rows())?.is_zero() {
            return Err(LatticeError::Singular.into());
        }
        match signature(&a)? {
            (2, 2) => Ok(QuadraticSpace { a }),
            (p, q) => Err(MonodromyError::Signature(p, q)),
        }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, MonodromyError> {
        Self::new(GramMatrix::from_i64(rows)?)
    }

    pub fn gram(&self) -> &GramMatrix {
        &self.a
    }

    /// `x A yᵗ` for rational row vectors.
    pub fn pair(&self, x: &[BigRat], y: &[BigRat]) -> BigRat {
        let mut s = BigRat::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                let a = self.a.entry(i, j);
                if !a.is_zero() {
                    s += xi * yj * BigRat::from_integer(a.clone());
                }
            }
        }
        s
    }
}

pub fn rat_vector(v: &[i64]) -> Vec<BigRat> {
    v.iter().map(|&x| BigRat::from_integer(x.into())).collect()
}

/// `ξ = x + i y`, up to a complex scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainPoint {
    pub x: Vec<BigRat>,
    pub y: Vec<BigRat>,
}

impl DomainPoint {
    pub fn new(x: Vec<BigRat>, y: Vec<BigRat>) -> Result<Self, MonodromyError> {
        for v in [&x, &y] {
            if v.len() != 4 {
                return Err(MonodromyError::VectorLength(v.len()));
            }
        }
        Ok(DomainPoint { x, y })
    }

    pub fn from_i64(x: &[i64], y: &[i64]) -> Result<Self, MonodromyError> {
        Self::new(rat_vector(x), rat_vector(y))
    }

    pub fn conjugate(&self) -> DomainPoint {
        DomainPoint { x: self.x.clone(), y: self.y.iter().map(|c| -c).collect() }
    }

    /// Multiplication of `ξ` by `a + i b`.
    pub fn rescaled(&self, a: &BigRat, b: &BigRat) -> DomainPoint {
        let x = self.x.iter().zip(&self.y).map(|(x, y)| a * x - b * y).collect();
        let y = self.x.iter().zip(&self.y).map(|(x, y)| b * x + a * y).collect();
        DomainPoint { x, y }
    }

    /// The image `ξ g`.
    pub fn transformed(&self, g: &ProjectiveTransform) -> DomainPoint {
        DomainPoint { x: g.act(&self.x), y: g.act(&self.y) }
    }
}

/// A 4×4 integer matrix acting on rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectiveTransform {
    g: IntMatrix,
}

impl ProjectiveTransform {
    pub fn new(g: IntMatrix) -> Result<Self, MonodromyError> {
        if g.len() != 4 || g.iter().any(|r| r.len() != 4) {
            return Err(MonodromyError::MatrixShape);
        }
        Ok(ProjectiveTransform { g })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, MonodromyError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn identity() -> Self {
        Self::scalar(1)
    }

    pub fn scalar(c: i64) -> Self {
        let g = (0..4).map(|i| (0..4).map(|j| BigInt::from(if i == j { c } else { 0 })).collect()).collect();
        ProjectiveTransform { g }
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.g
    }

    pub fn mul(&self, other: &ProjectiveTransform) -> ProjectiveTransform {
        ProjectiveTransform { g: crate::lattice::mat_mul(&self.g, &other.g) }
    }

    fn act(&self, v: &[BigRat]) -> Vec<BigRat> {
        (0..4)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .fold(BigRat::zero(), |s, (i, c)| s + c * BigRat::from_integer(self.g[i][j].clone()))
            })
            .collect()
    }

    /// Integral inverse, if `det = ±1`.
    pub fn inverse(&self) -> Option<ProjectiveTransform> {
        let n = 4;
        let mut m: Vec<Vec<BigRat>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigRat> = self.g[i].iter().map(|x| BigRat::from_integer(x.clone())).collect();
                row.extend((0..n).map(|j| if i == j { BigRat::one() } else { BigRat::zero() }));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !m[i][k].is_zero())?;
            m.swap(p, k);
            let piv = m[k][k].clone();
            for c in m[k].iter_mut() {
                *c /= &piv;
            }
            for i in 0..n {
                if i != k && !m[i][k].is_zero() {
                    let f = m[i][k].clone();
                    for c in 0..2 * n {
                        let v = &f * &m[k][c];
                        m[i][c] -= v;
                    }
                }
            }
        }
        let mut g = Vec::with_capacity(n);
        for row in &m {
            let mut r = Vec::with_capacity(n);
            for c in &row[n..] {
                if !c.is_integer() {
                    return None;
                }
                r.push(c.to_integer());
            }
            g.push(r);
        }
        Some(ProjectiveTransform { g })
    }
}

/// `g` is integral with `det g = ±1` and `g A gᵗ = A`.
pub fn in_po(space: &QuadraticSpace, g: &ProjectiveTransform) -> bool {
    let a = space.a.rows();
    let d = match determinant(&g.g) {
        Ok(d) => d,
        Err(_) => return false,
    };
    if !d.abs().is_one() {
        return false;
    }
    for i in 0..4 {
        for j in i..4 {
            let mut s = BigInt::zero();
            for k in 0..4 {
                for l in 0..4 {
                    s += &g.g[i][k] * &a[k][l] * &g.g[j][l];
                }
            }
            if s != a[i][j] {
                return false;
            }
        }
    }
    true
}

/// `x A xᵗ = y A yᵗ`, `x A yᵗ = 0`, `y A yᵗ > 0`.
pub fn domain_member(space: &QuadraticSpace, p: &DomainPoint) -> bool {
    let yy = space.pair(&p.y, &p.y);
    yy.is_positive() && space.pair(&p.x, &p.x) == yy && space.pair(&p.x, &p.y).is_zero()
}

/// A point of the domain declared to lie in the `+1` component, and a
/// positive-definite pair `(e, f)` against which planes are oriented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    pub point: DomainPoint,
    pub e: Vec<BigRat>,
    pub f: Vec<BigRat>,
    sign: i8,
}

impl Reference {
    pub fn new(space: &QuadraticSpace, point: DomainPoint, e: Vec<BigRat>, f: Vec<BigRat>) -> Result<Self, MonodromyError> {
        if e.len() != 4 || f.len() != 4 {
            return Err(MonodromyError::VectorLength(e.len().min(f.len())));
        }
        if !domain_member(space, &point) {
            return Err(MonodromyError::ReferenceOutsideDomain);
        }
        let (ee, ff, ef) = (space.pair(&e, &e), space.pair(&f, &f), space.pair(&e, &f));
        if !ee.is_positive() || !(&ee * &ff - &ef * &ef).is_positive() {
            return Err(MonodromyError::ReferencePair);
        }
        let mut r = Reference { point, e, f, sign: 1 };
        r.sign = r.raw_sign(space, &r.point)?;
        Ok(r)
    }

    pub fn from_entry(space: &QuadraticSpace, d: &DomainEntry) -> Result<Self, MonodromyError> {
        let point = DomainPoint::from_i64(&d.x, &d.y)?;
        Self::new(space, point, rat_vector(&d.e), rat_vector(&d.f))
    }

    fn raw_sign(&self, space: &QuadraticSpace, p: &DomainPoint) -> Result<i8, MonodromyError> {
        let (xe, ye) = (space.pair(&p.x, &self.e), space.pair(&p.y, &self.e));
        let (xf, yf) = (space.pair(&p.x, &self.f), space.pair(&p.y, &self.f));
        let d = xe * yf - ye * xf;
        if d.is_zero() {
            return Err(MonodromyError::DegeneratePairing);
        }
        Ok(if d.is_positive() { 1 } else { -1 })
    }
}

/// `+1` on the component of the reference point, `-1` on the other.
pub fn component_orientation(space: &QuadraticSpace, reference: &Reference, p: &DomainPoint) -> Result<i8, MonodromyError> {
    Ok(reference.raw_sign(space, p)? * reference.sign)
}

/// Whether `g ∈ PO(A, Z)` keeps the reference component in place.
pub fn in_po_plus(space: &QuadraticSpace, g: &ProjectiveTransform, reference: &Reference) -> Result<bool, MonodromyError> {
    let image = reference.point.transformed(g);
    Ok(component_orientation(space, reference, &image)? == 1)
}

/// Members of `PO(A, Z)` with every entry in `-bound..=bound`, in
/// lexicographic order of their rows, stopping after `cap` matrices.
pub fn search_members(space: &QuadraticSpace, bound: i64, cap: usize) -> Vec<ProjectiveTransform> {
    let a: Vec<Vec<i64>> = space
        .a
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x).expect("small form entries")).collect())
        .collect();
    let pair = |u: &[i64; 4], v: &[i64; 4]| -> i64 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += u[i] * a[i][j] * v[j];
            }
        }
        s
    };
    let side = (2 * bound + 1) as usize;
    let all: Vec<[i64; 4]> = (0..side.pow(4))
        .map(|mut k| {
            let mut v = [0i64; 4];
            for c in v.iter_mut().rev() {
                *c = (k % side) as i64 - bound;
                k /= side;
            }
            v
        })
        .collect();
    let candidates: Vec<Vec<[i64; 4]>> =
        (0..4).map(|r| all.iter().copied().filter(|v| pair(v, v) == a[r][r]).collect()).collect();
    let mut out = Vec::new();
    let mut rows: Vec<[i64; 4]> = Vec::with_capacity(4);
    fn extend(
        r: usize,
        rows: &mut Vec<[i64; 4]>,
        candidates: &[Vec<[i64; 4]>],
        a: &[Vec<i64>],
        pair: &dyn Fn(&[i64; 4], &[i64; 4]) -> i64,
        out: &mut Vec<ProjectiveTransform>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if r == 4 {
            let g = rows.iter().map(|v| v.to_vec()).collect::<Vec<_>>();
            out.push(ProjectiveTransform::from_i64(&g).expect("4x4"));
            return;
        }
        for v in &candidates[r] {
            if rows.iter().enumerate().all(|(s, u)| pair(u, v) == a[s][r]) {
                rows.push(*v);
                extend(r + 1, rows, candidates, a, pair, out, cap);
                rows.pop();
            }
        }
    }
    extend(0, &mut rows, &candidates, &a, &pair, &mut out, cap);
    out
}
