//! Integral lattices given by Gram matrices: determinants, signatures,
//! congruences, Smith normal forms and the trivial-lattice builder.

use num::{BigInt, One, Signed, Zero};
use serde::Serialize;

use crate::exactcore::BigRat;
use crate::fibration::FiberKind;

pub type IntMatrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("fiber {fiber} has no component {index}")]
    BadComponent { fiber: usize, index: usize },
    #[error("section {0} lists {1} fiber entries")]
    SectionShape(String, usize),
    #[error("inconsistent configuration: rank {0}")]
    Inconsistent(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    rows: IntMatrix,
}

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn square_dim(m: &IntMatrix) -> Result<usize, LatticeError> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(LatticeError::NotSquare);
    }
    Ok(n)
}

impl GramMatrix {
    pub fn new(rows: IntMatrix) -> Result<Self, LatticeError> {
        let n = square_dim(&rows)?;
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        Ok(GramMatrix { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(to_int_matrix(rows))
    }

    fn zero(n: usize) -> Self {
        GramMatrix { rows: vec![vec![BigInt::zero(); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.rows[i][j] = v.into();
        self.rows[j][i] = v.into();
    }

    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (a, b) = (self.dim(), other.dim());
        let mut g = GramMatrix::zero(a + b);
        for i in 0..a {
            for j in 0..a {
                g.rows[i][j] = self.rows[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                g.rows[a + i][a + j] = other.rows[i][j].clone();
            }
        }
        g
    }

    /// Entry `(i, j)` of the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> GramMatrix {
        let rows = perm.iter().map(|&i| perm.iter().map(|&j| self.rows[i][j].clone()).collect()).collect();
        GramMatrix { rows }
    }

    /// Value of the form on two integer row vectors.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut s = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * &self.rows[i][j] * yj;
            }
        }
        s
    }
}

/// `A_{n}(-1)`: a chain of `n` nodes.
pub fn a_block(n: usize) -> GramMatrix {
    let mut g = GramMatrix::zero(n);
    for i in 0..n {
        g.set(i, i, -2);
        if i + 1 < n {
            g.set(i, i + 1, 1);
        }
    }
    g
}

/// `D_m(-1)`: nodes `0..=m-3` form a chain, the tips `m-2` and `m-1` are
/// attached to node `m-3`.
pub fn d_block(m: usize) -> GramMatrix {
    let mut g = GramMatrix::zero(m);
    for i in 0..m {
        g.set(i, i, -2);
    }
    for i in 0..m - 3 {
        g.set(i, i + 1, 1);
    }
    g.set(m - 3, m - 2, 1);
    g.set(m - 3, m - 1, 1);
    g
}

/// `E_n(-1)` for n = 6, 7, 8: a chain `0..=n-4`, then node `n-3` and the
/// two-node arm `n-2, n-1` attached to node `n-4`.
pub fn e_block(n: usize) -> GramMatrix {
    let mut g = a_block(n - 3).direct_sum(&GramMatrix::zero(3));
    for i in n - 3..n {
        g.set(i, i, -2);
    }
    g.set(n - 4, n - 3, 1);
    g.set(n - 4, n - 2, 1);
    g.set(n - 2, n - 1, 1);
    g
}

pub fn e8() -> GramMatrix {
    GramMatrix::from_i64(&[
        vec![-2, 1, 0, 0, 0, 0, 0, 0],
        vec![1, -2, 1, 0, 0, 0, 0, 0],
        vec![0, 1, -2, 1, 0, 0, 0, 0],
        vec![0, 0, 1, -2, 1, 0, 0, 0],
        vec![0, 0, 0, 1, -2, 1, 1, 0],
        vec![0, 0, 0, 0, 1, -2, 0, 0],
        vec![0, 0, 0, 0, 1, 0, -2, 1],
        vec![0, 0, 0, 0, 0, 0, 1, -2],
    ])
    .unwrap()
}

pub fn hyperbolic_plane() -> GramMatrix {
    GramMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap()
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, LatticeError> {
    let n = square_dim(m)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(&a[n - 1][n - 1] * sign)
}

/// Signature `(p, q)` by symmetric Gaussian elimination over Q. A zero
/// diagonal is repaired with `e_i <- e_i + e_j`.
pub fn signature(g: &GramMatrix) -> Result<(usize, usize), LatticeError> {
    let n = g.dim();
    let mut a: Vec<Vec<BigRat>> =
        g.rows.iter().map(|r| r.iter().map(|x| BigRat::from_integer(x.clone())).collect()).collect();
    let (mut p, mut q) = (0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(i, k);
                for r in a.iter_mut() {
                    r.swap(i, k);
                }
            } else {
                let j = (k + 1..n).find(|&j| !a[k][j].is_zero());
                match j {
                    Some(j) => {
                        for c in 0..n {
                            let v = a[j][c].clone();
                            a[k][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][j].clone();
                            a[r][k] += v;
                        }
                    }
                    None => return Err(LatticeError::Singular),
                }
            }
        }
        let piv = a[k][k].clone();
        if piv.is_positive() {
            p += 1;
        } else {
            q += 1;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &a[r][k];
                a[r][i] -= v;
            }
        }
    }
    Ok((p, q))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CongruenceOutcome {
    Pass,
    NotUnimodular { det: String },
    Mismatch { row: usize, col: usize, expected: String, found: String },
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let cols = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (k, x) in r.iter().enumerate() {
                        if !x.is_zero() {
                            s += x * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Checks `det U = ±1` and `Uᵗ M U = N`.
pub fn verify_congruence(m: &GramMatrix, u: &IntMatrix, n: &GramMatrix) -> Result<CongruenceOutcome, LatticeError> {
    let d = square_dim(u)?;
    if d != m.dim() {
        return Err(LatticeError::DimensionMismatch(m.dim(), d));
    }
    if d != n.dim() {
        return Err(LatticeError::DimensionMismatch(n.dim(), d));
    }
    let det = determinant(u)?;
    if det.abs() != BigInt::one() {
        return Ok(CongruenceOutcome::NotUnimodular { det: det.to_string() });
    }
    let t = mat_mul(&mat_mul(&transpose(u), &m.rows), u);
    for i in 0..d {
        for j in 0..d {
            if t[i][j] != n.rows[i][j] {
                return Ok(CongruenceOutcome::Mismatch {
                    row: i,
                    col: j,
                    expected: n.rows[i][j].to_string(),
                    found: t[i][j].to_string(),
                });
            }
        }
    }
    Ok(CongruenceOutcome::Pass)
}

/// Diagonal of the Smith normal form (nonnegative, zeros last).
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diag.extend(std::iter::repeat_n(BigInt::zero(), rows.min(cols) - t));
                return diag;
            };
            a.swap(t, pi);
            for r in a.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                let q = &a[i][t] / &a[t][t];
                if !q.is_zero() {
                    for j in t..cols {
                        let v = &q * &a[t][j];
                        a[i][j] -= v;
                    }
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = &a[t][j] / &a[t][t];
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &q * &a[i][t];
                        a[i][j] -= v;
                    }
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the remaining block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

/// Elementary divisors of the discriminant group (unit divisors dropped).
pub fn discriminant_group(g: &GramMatrix) -> Result<Vec<BigInt>, LatticeError> {
    let d = smith_diagonal(&g.rows);
    if d.iter().any(|x| x.is_zero()) {
        return Err(LatticeError::Singular);
    }
    Ok(d.into_iter().filter(|x| !x.is_one()).collect())
}

/// One singular fiber of the builder; `omit` removes components (by
/// position in the non-identity list) from the basis.
#[derive(Debug, Clone)]
pub struct FiberBlock {
    pub kind: FiberKind,
    pub omit: Vec<usize>,
}

/// A section: the non-identity component it meets on each fiber (`None`
/// for the identity component), `(S·O)` and its intersections with the
/// sections listed before it.
#[derive(Debug, Clone)]
pub struct SectionSpec {
    pub name: String,
    pub meets: Vec<Option<usize>>,
    pub with_zero: i64,
    pub with_previous: Vec<i64>,
}

#[derive(Debug, Clone)]
pub struct FiberLatticeSpec {
    pub fibers: Vec<FiberBlock>,
    pub sections: Vec<SectionSpec>,
}

fn fiber_block(kind: &FiberKind) -> GramMatrix {
    match kind {
        FiberKind::Smooth | FiberKind::II => GramMatrix::zero(0),
        FiberKind::I(n) => a_block(*n as usize - 1),
        FiberKind::III => a_block(1),
        FiberKind::IV => a_block(2),
        FiberKind::IStar(n) => d_block(*n as usize + 4),
        FiberKind::IVStar => e_block(6),
        FiberKind::IIIStar => e_block(7),
        FiberKind::IIStar => e_block(8),
    }
}

/// Gram matrix over the basis (fiber components, O, F, sections).
pub fn build_gram(spec: &FiberLatticeSpec) -> Result<GramMatrix, LatticeError> {
    let mut blocks = Vec::new();
    let mut offsets = Vec::new();
    let mut total = 0;
    for (fi, f) in spec.fibers.iter().enumerate() {
        let b = fiber_block(&f.kind);
        if let Some(&bad) = f.omit.iter().find(|&&i| i >= b.dim()) {
            return Err(LatticeError::BadComponent { fiber: fi, index: bad });
        }
        let keep: Vec<usize> = (0..b.dim()).filter(|i| !f.omit.contains(i)).collect();
        let mut pos = vec![None; b.dim()];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = Some(total + k);
        }
        offsets.push(pos);
        total += keep.len();
        blocks.push(b.permuted(&keep));
    }
    let mut g = GramMatrix::zero(0);
    for b in &blocks {
        g = g.direct_sum(b);
    }
    let o = total;
    let f = total + 1;
    let mut tail = GramMatrix::zero(2 + spec.sections.len());
    tail.set(0, 0, -2);
    tail.set(0, 1, 1);
    g = g.direct_sum(&tail);
    for (si, s) in spec.sections.iter().enumerate() {
        if s.meets.len() != spec.fibers.len() {
            return Err(LatticeError::SectionShape(s.name.clone(), s.meets.len()));
        }
        let r = f + 1 + si;
        g.set(r, r, -2);
        g.set(r, f, 1);
        g.set(r, o, s.with_zero);
        for (fi, m) in s.meets.iter().enumerate() {
            if let Some(c) = m {
                let p = offsets[fi]
                    .get(*c)
                    .copied()
                    .flatten()
                    .ok_or(LatticeError::BadComponent { fiber: fi, index: *c })?;
                g.set(r, p, 1);
            }
        }
        for (j, v) in s.with_previous.iter().enumerate().take(si) {
            g.set(r, f + 1 + j, *v);
        }
    }
    Ok(g)
}

/// Determinants with `(S·O) = k` for the section at `section`, over `ks`.
pub fn tilde_determinant_scan(
    spec: &FiberLatticeSpec,
    section: usize,
    ks: impl IntoIterator<Item = i64>,
) -> Result<Vec<(i64, BigInt)>, LatticeError> {
    let mut s = spec.clone();
    ks.into_iter()
        .map(|k| {
            s.sections[section].with_zero = k;
            Ok((k, determinant(&build_gram(&s)?.rows)?))
        })
        .collect()
}

/// Interpolates the values on their first `degree + 1` points and checks the
/// rest; returns coefficients from the constant term up.
pub fn fit_polynomial(points: &[(i64, BigInt)], degree: usize) -> Option<Vec<BigRat>> {
    if points.len() <= degree {
        return None;
    }
    let base = &points[..=degree];
    let mut coeffs = vec![BigRat::zero(); degree + 1];
    for (i, (xi, yi)) in base.iter().enumerate() {
        // Lagrange basis polynomial for node i
        let mut basis = vec![BigRat::one()];
        let mut denom = BigRat::one();
        for (j, (xj, _)) in base.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRat::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * BigRat::from_integer((*xj).into());
            }
            basis = next;
            denom *= BigRat::from_integer((xi - xj).into());
        }
        let scale = BigRat::from_integer(yi.clone()) / denom;
        for (k, c) in basis.iter().enumerate() {
            coeffs[k] += c * &scale;
        }
    }
    let eval = |x: i64| {
        coeffs.iter().rev().fold(BigRat::zero(), |acc, c| acc * BigRat::from_integer(x.into()) + c)
    };
    points.iter().all(|(x, y)| eval(*x) == BigRat::from_integer(y.clone())).then_some(coeffs)
}

/// Components of a fiber in the trivial lattice count.
pub fn component_count(kind: &FiberKind) -> i64 {
    match kind {
        FiberKind::Smooth => 1,
        FiberKind::I(n) => *n as i64,
        FiberKind::IStar(n) => *n as i64 + 5,
        FiberKind::II => 1,
        FiberKind::III => 2,
        FiberKind::IV => 3,
        FiberKind::IVStar => 7,
        FiberKind::IIIStar => 8,
        FiberKind::IIStar => 9,
    }
}

/// Mordell–Weil rank `ρ - 2 - Σ (m_v - 1)`.
pub fn shioda_tate_rank(ns_rank: i64, fibers: &[FiberKind]) -> Result<i64, LatticeError> {
    let r = ns_rank - 2 - fibers.iter().map(|k| component_count(k) - 1).sum::<i64>();
    if r < 0 {
        return Err(LatticeError::Inconsistent(r));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(rows: &[Vec<i64>]) -> GramMatrix {
        GramMatrix::from_i64(rows).unwrap()
    }

    fn det(m: &GramMatrix) -> i64 {
        determinant(m.rows()).unwrap().try_into().unwrap()
    }

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &IntMatrix) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut s = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: IntMatrix =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
            let t = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
        }
        s
    }

    /// Characteristic polynomial by Faddeev–LeVerrier, highest degree first.
    fn charpoly(m: &GramMatrix) -> Vec<BigRat> {
        let n = m.dim();
        let a: Vec<Vec<BigRat>> =
            m.rows().iter().map(|r| r.iter().map(|x| BigRat::from_integer(x.clone())).collect()).collect();
        let mut c = vec![BigRat::one()];
        let mut mk = vec![vec![BigRat::zero(); n]; n];
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = vec![vec![BigRat::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        next[i][j] += &a[i][l] * &mk[l][j];
                    }
                }
                next[i][i] += &c[k - 1];
            }
            mk = next;
            let mut tr = BigRat::zero();
            for i in 0..n {
                for l in 0..n {
                    tr += &a[i][l] * &mk[l][i];
                }
            }
            c.push(-tr / BigRat::from_integer((k as i64).into()));
        }
        c
    }

    fn sign_changes(c: &[BigRat]) -> usize {
        let s: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Positive roots are the sign changes of χ(x), negative ones those of χ(-x).
    fn charpoly_signature(m: &GramMatrix) -> (usize, usize) {
        let c = charpoly(m);
        let n = c.len() - 1;
        let neg: Vec<BigRat> = c.iter().enumerate().map(|(i, x)| if (n - i) % 2 == 1 { -x } else { x.clone() }).collect();
        (sign_changes(&c), sign_changes(&neg))
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det(&g(&[vec![0, 3], vec![3, 0]])), -9);
        assert_eq!(determinant(&to_int_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]])).unwrap(), 1.into());
        assert_eq!(det(&hyperbolic_plane()), -1);
    }

    #[test]
    fn e8_determinant_matches_cofactor_expansion() {
        assert_eq!(det(&e8()), 1);
        assert_eq!(cofactor_det(e8().rows()), BigInt::one());
        for n in [6, 7, 8] {
            assert_eq!(determinant(e_block(n).rows()).unwrap(), cofactor_det(e_block(n).rows()));
        }
    }

    #[test]
    fn block_determinants() {
        for n in 1..9 {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(det(&a_block(n)), sign * (n as i64 + 1));
        }
        for m in 4..9 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            assert_eq!(det(&d_block(m)), sign * 4);
        }
        assert_eq!(det(&e_block(6)), 3);
        assert_eq!(det(&e_block(7)), -2);
        assert_eq!(e_block(8), e8());
    }

    #[test]
    fn signatures_against_characteristic_polynomial() {
        let u = hyperbolic_plane();
        let a1 = u.direct_sum(&g(&[vec![0, 3], vec![3, 0]]));
        for (m, expect) in [(a1, (2, 2)), (e8(), (0, 8)), (u, (1, 1))] {
            assert_eq!(signature(&m).unwrap(), expect);
            assert_eq!(charpoly_signature(&m), expect);
        }
    }

    #[test]
    fn signature_rejects_singular() {
        assert_eq!(signature(&g(&[vec![1, 1], vec![1, 1]])), Err(LatticeError::Singular));
        assert_eq!(signature(&g(&[vec![0, 0], vec![0, 0]])), Err(LatticeError::Singular));
    }

    #[test]
    fn zero_diagonal_pivoting() {
        let m = g(&[vec![0, 0, 1], vec![0, 0, 2], vec![1, 2, 0]]);
        assert_eq!(signature(&m), Err(LatticeError::Singular));
        let m = g(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(signature(&m).unwrap(), (2, 2));
        assert_eq!(charpoly_signature(&m), (2, 2));
    }

    #[test]
    fn smith_forms() {
        let d = |rows: &[Vec<i64>]| discriminant_group(&g(rows)).unwrap();
        assert_eq!(d(&[vec![0, 3], vec![3, 0]]), vec![BigInt::from(3), BigInt::from(3)]);
        assert_eq!(d(&[vec![0, 3], vec![3, 2]]), vec![BigInt::from(9)]);
        assert!(d(&[vec![0, 1], vec![1, 0]]).is_empty());
        assert_eq!(smith_diagonal(&to_int_matrix(&[vec![2, 4], vec![6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn congruence_identity_and_dimension_check() {
        let m = e8();
        let id: IntMatrix = (0..8).map(|i| (0..8).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        assert_eq!(verify_congruence(&m, &id, &m).unwrap(), CongruenceOutcome::Pass);
        assert!(verify_congruence(&m, &id[..4].to_vec(), &m).is_err());
        let twice: IntMatrix = id.iter().map(|r| r.iter().map(|x| x * 2).collect()).collect();
        assert!(matches!(verify_congruence(&m, &twice, &m).unwrap(), CongruenceOutcome::NotUnimodular { .. }));
    }

    #[test]
    fn builder_rejects_bad_indices() {
        let spec = FiberLatticeSpec {
            fibers: vec![FiberBlock { kind: FiberKind::I(3), omit: vec![] }],
            sections: vec![SectionSpec { name: "P".into(), meets: vec![Some(2)], with_zero: 0, with_previous: vec![] }],
        };
        assert_eq!(build_gram(&spec), Err(LatticeError::BadComponent { fiber: 0, index: 2 }));
    }

    #[test]
    fn shioda_tate() {
        use FiberKind::*;
        assert_eq!(shioda_tate_rank(18, &[I(9), IStar(3)]).unwrap(), 1);
        assert_eq!(shioda_tate_rank(18, &[I(9), I(9)]).unwrap(), 0);
        assert_eq!(shioda_tate_rank(18, &[IStar(1), I(11)]).unwrap(), 1);
        assert!(shioda_tate_rank(10, &[I(9), I(9)]).is_err());
    }

    #[test]
    fn quadratic_fit() {
        let pts: Vec<(i64, BigInt)> = (-3..=3).map(|k: i64| (k, BigInt::from(-72 * (1 + k + k * k)))).collect();
        let c = fit_polynomial(&pts, 2).unwrap();
        assert_eq!(c, vec![BigRat::from_integer((-72).into()); 3]);
        let mut bad = pts.clone();
        bad[6].1 += 1;
        assert!(fit_polynomial(&bad, 2).is_none());
    }
}
