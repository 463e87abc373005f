//! Rank-4 Pfaffian systems `θλφ = Ãφ`, `θμφ = B̃φ` for `φ = (1, θλ, θμ, X)η`,
//! derived by fraction-free elimination over `Q[λ, μ]`, and their
//! integrability, series and singular-locus checks.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exactcore::{gcd, identifiers, parse_poly, AlgebraError, MultiPoly, RatFunc, Ring};
use crate::period::{apply_operator, BiPowerSeries, ThetaOperator};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfaffianError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generators force a relation among the basis; the system is degenerate")]
    Degenerate,
    #[error("basis does not close; extend generator set")]
    NotClosed,
    #[error("basis element {0:?} must have degree 2")]
    BadBasis((u32, u32)),
    #[error("symbol {0} is defined in terms of itself")]
    Cyclic(String),
    #[error("matrix must be 4x4")]
    Shape,
}

pub type RatMatrix = Vec<Vec<RatFunc>>;

/// The ring `[l, m]` all connection entries live in.
pub fn param_ring() -> Ring {
    Ring::new(&["l", "m"])
}

const LAMBDA: usize = 0;
const MU: usize = 1;

/// Logarithmic connection for the basis `(1, θλ, θμ, X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMatrixPair {
    pub basis: [(u32, u32); 4],
    pub a: RatMatrix,
    pub b: RatMatrix,
}

pub const THETA_L2: (u32, u32) = (2, 0);
pub const THETA_M2: (u32, u32) = (0, 2);
pub const THETA_LM: (u32, u32) = (1, 1);

impl ConnectionMatrixPair {
    /// The connection after `(λ, μ) -> (-λ, -μ)`; the θ-operators are
    /// unchanged by this substitution.
    pub fn reflected(&self) -> ConnectionMatrixPair {
        let ring = param_ring();
        let mut map = BTreeMap::new();
        for v in ["l", "m"] {
            map.insert(v.to_string(), RatFunc::from_poly(-MultiPoly::var(&ring, v).expect("ring has l and m")));
        }
        let flip = |p: &MultiPoly| p.substitute(&map, &ring).expect("polynomial substitution").as_poly().expect("polynomial");
        let go = |m: &RatMatrix| -> RatMatrix {
            m.iter().map(|r| r.iter().map(|e| RatFunc::from_parts_unchecked(flip(e.num()), flip(e.den())).reduced()).collect()).collect()
        };
        ConnectionMatrixPair { basis: self.basis, a: go(&self.a), b: go(&self.b) }
    }
}

/// Connection for the basis `(1, θλ, θμ, θλ²)`.
pub fn derive_pfaffian(gens: &[ThetaOperator]) -> Result<ConnectionMatrixPair, PfaffianError> {
    derive_with_basis(gens, THETA_L2)
}

fn theta_power(p: u32, q: u32) -> ThetaOperator {
    ThetaOperator::monomial(num::One::one(), 0, 0, p, q)
}

/// Monomials `θλ^p θμ^q` with `p + q <= d`, highest degree first.
fn monomials(d: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for k in (0..=d).rev() {
        for p in (0..=k).rev() {
            v.push((p, k - p));
        }
    }
    v
}

fn primitive_row(row: &mut [MultiPoly]) {
    let g = row.iter().fold(MultiPoly::zero(&param_ring()), |g, e| gcd(&g, e));
    if g.is_zero() || g.is_constant() {
        return;
    }
    for e in row.iter_mut() {
        *e = e.exact_divide(&g).ok().flatten().expect("row content divides each entry");
    }
}

fn size(p: &MultiPoly) -> (u32, usize) {
    (p.total_degree(), p.num_terms())
}

struct Elimination {
    cols: Vec<(u32, u32)>,
    rows: Vec<Vec<MultiPoly>>,
    pivot: BTreeMap<usize, usize>,
}

/// Gauss-Jordan on the non-basis columns with row contents removed after
/// every update.
fn eliminate(gens: &[ThetaOperator], basis: &[(u32, u32); 4], degree: u32) -> Elimination {
    let ring = param_ring();
    let mut cols: Vec<(u32, u32)> = monomials(degree).into_iter().filter(|c| !basis.contains(c)).collect();
    cols.extend(basis.iter().copied());
    let nb = cols.len() - 4;
    let mut rows = Vec::new();
    for g in gens {
        let order = g.theta_degree();
        for (p, q) in monomials(degree) {
            if order + p + q > degree {
                continue;
            }
            let op = theta_power(p, q).mul(g);
            let coeffs = op.coefficient_polys(&ring);
            let mut row: Vec<MultiPoly> =
                cols.iter().map(|c| coeffs.get(c).cloned().unwrap_or_else(|| MultiPoly::zero(&ring))).collect();
            primitive_row(&mut row);
            if row.iter().any(|e| !e.is_zero()) {
                rows.push(row);
            }
        }
    }
    let mut pivot = BTreeMap::new();
    let mut used = vec![false; rows.len()];
    for c in 0..nb {
        let Some(r) = (0..rows.len()).filter(|&r| !used[r] && !rows[r][c].is_zero()).min_by_key(|&r| size(&rows[r][c])) else {
            continue;
        };
        used[r] = true;
        pivot.insert(c, r);
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, pe) in row.iter_mut().zip(&prow) {
                *e = &(&*e * &prow[c]) - &(pe * &f);
            }
            primitive_row(row);
        }
    }
    Elimination { cols, rows, pivot }
}

/// Connection for the basis `(1, θλ, θμ, fourth)`; tries prolongation
/// degrees 3 and 4.
pub fn derive_with_basis(gens: &[ThetaOperator], fourth: (u32, u32)) -> Result<ConnectionMatrixPair, PfaffianError> {
    if fourth.0 + fourth.1 != 2 {
        return Err(PfaffianError::BadBasis(fourth));
    }
    let basis = [(0, 0), (1, 0), (0, 1), fourth];
    let top = gens.iter().map(|g| g.theta_degree()).max().unwrap_or(0);
    let mut last = PfaffianError::NotClosed;
    for degree in top.max(3)..=4 {
        match assemble(gens, &basis, degree) {
            Ok(c) => return Ok(c),
            Err(PfaffianError::NotClosed) => last = PfaffianError::NotClosed,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

fn assemble(gens: &[ThetaOperator], basis: &[(u32, u32); 4], degree: u32) -> Result<ConnectionMatrixPair, PfaffianError> {
    let el = eliminate(gens, basis, degree);
    let nb = el.cols.len() - 4;
    for row in &el.rows {
        if row[..nb].iter().all(|e| e.is_zero()) && row[nb..].iter().any(|e| !e.is_zero()) {
            return Err(PfaffianError::Degenerate);
        }
    }
    let ring = param_ring();
    let unit = |k: usize| -> Vec<RatFunc> {
        (0..4).map(|j| if j == k { RatFunc::one(&ring) } else { RatFunc::zero(&ring) }).collect()
    };
    let reduce = |mono: (u32, u32)| -> Result<Vec<RatFunc>, PfaffianError> {
        if let Some(k) = basis.iter().position(|b| *b == mono) {
            return Ok(unit(k));
        }
        let c = el.cols.iter().position(|x| *x == mono).ok_or(PfaffianError::NotClosed)?;
        let r = *el.pivot.get(&c).ok_or(PfaffianError::NotClosed)?;
        let row = &el.rows[r];
        if (0..nb).any(|j| j != c && !row[j].is_zero()) {
            return Err(PfaffianError::NotClosed);
        }
        Ok((0..4).map(|j| RatFunc::from_parts_unchecked(-&row[nb + j], row[c].clone()).reduced()).collect())
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (p, q) in basis {
        a.push(reduce((p + 1, *q))?);
        b.push(reduce((*p, q + 1))?);
    }
    Ok(ConnectionMatrixPair { basis: *basis, a, b })
}

type PolyMatrix = Vec<Vec<MultiPoly>>;

/// `M = N / D` with one common denominator `D`.
fn common_denominator(x: &RatMatrix) -> (PolyMatrix, MultiPoly) {
    let d = x.iter().flatten().fold(MultiPoly::one(&param_ring()), |acc, e| lcm(&acc, e.den()));
    let n = x
        .iter()
        .map(|r| r.iter().map(|e| e.num() * &d.exact_divide(e.den()).ok().flatten().expect("lcm is a multiple")).collect())
        .collect();
    (n, d)
}

fn pmul(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    (0..4)
        .map(|i| (0..4).map(|j| (0..4).fold(MultiPoly::zero(&param_ring()), |acc, k| &acc + &(&x[i][k] * &y[k][j]))).collect())
        .collect()
}

fn pmap(x: &PolyMatrix, f: impl Fn(&MultiPoly) -> MultiPoly) -> PolyMatrix {
    x.iter().map(|r| r.iter().map(&f).collect()).collect()
}

fn padd(x: &PolyMatrix, y: &PolyMatrix) -> PolyMatrix {
    x.iter().zip(y).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Integrability {
    Pass,
    Fail { row: usize, col: usize },
}

/// `θμÃ + ÃB̃ = θλB̃ + B̃Ã`, entry by entry. With `Ã = N/D`, `B̃ = M/E`
/// both sides are multiplied by `D²E²`, so only polynomials are compared:
/// `(θμN·D − N·θμD)E² + NM·DE = (θλM·E − M·θλE)D² + MN·DE`.
pub fn verify_integrability(c: &ConnectionMatrixPair) -> Integrability {
    let (n, d) = common_denominator(&c.a);
    let (m, e) = common_denominator(&c.b);
    let (d2, e2, de) = (&d * &d, &e * &e, &d * &e);
    let lhs = padd(
        &pmap(&n, |x| &(&(&x.theta(MU) * &d) - &(x * &d.theta(MU))) * &e2),
        &pmap(&pmul(&n, &m), |x| x * &de),
    );
    let rhs = padd(
        &pmap(&m, |x| &(&(&x.theta(LAMBDA) * &e) - &(x * &e.theta(LAMBDA))) * &d2),
        &pmap(&pmul(&m, &n), |x| x * &de),
    );
    for i in 0..4 {
        for j in 0..4 {
            if lhs[i][j] != rhs[i][j] {
                return Integrability::Fail { row: i, col: j };
            }
        }
    }
    Integrability::Pass
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SeriesCheck {
    Pass,
    FirstFailure { matrix: char, row: usize, n: u32, m: u32 },
}

fn lcm(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let g = gcd(a, b);
    (a * b).exact_divide(&g).ok().flatten().expect("gcd divides the product")
}

/// Checks each row of `θφ = Mφ` on the truncated series after clearing
/// the row's denominators, so no entry is expanded at the origin.
pub fn verify_on_series(c: &ConnectionMatrixPair, s: &BiPowerSeries) -> SeriesCheck {
    let order = s.order();
    let phi: Vec<BiPowerSeries> = c.basis.iter().map(|(p, q)| apply_operator(&theta_power(*p, *q), s)).collect();
    for (name, mat, theta) in [('A', &c.a, ThetaOperator::theta_l()), ('B', &c.b, ThetaOperator::theta_m())] {
        for (i, row) in mat.iter().enumerate() {
            let den = row.iter().fold(MultiPoly::one(&param_ring()), |acc, e| lcm(&acc, e.den()));
            let series = |p: &MultiPoly| BiPowerSeries::from_poly(order, p).expect("entries live in [l, m]");
            let mut resid = series(&den).mul(&apply_operator(&theta, &phi[i]));
            for (e, f) in row.iter().zip(&phi) {
                let scale = den.exact_divide(e.den()).ok().flatten().expect("lcm is a multiple");
                let term = series(&(e.num() * &scale)).mul(f);
                resid = resid.add(&term.scale(&-num::BigRational::from_integer(1.into())));
            }
            if let Some(((n, m), _)) = resid.first_nonzero() {
                return SeriesCheck::FirstFailure { matrix: name, row: i, n, m };
            }
        }
    }
    SeriesCheck::Pass
}

/// Splits `polys` into pairwise coprime primitive factors, each listed once.
pub fn coprime_base(polys: &[MultiPoly]) -> Vec<MultiPoly> {
    fn insert(base: &mut Vec<MultiPoly>, p: MultiPoly) {
        if p.is_zero() || p.is_constant() {
            return;
        }
        let p = p.primitive();
        for k in 0..base.len() {
            let g = gcd(&p, &base[k]);
            if g.is_constant() {
                continue;
            }
            let q = base.remove(k);
            let div = |x: &MultiPoly| x.exact_divide(&g).ok().flatten().expect("gcd divides");
            let (pq, qq) = (div(&p), div(&q));
            insert(base, g);
            insert(base, pq);
            insert(base, qq);
            return;
        }
        base.push(p);
    }
    let mut base = Vec::new();
    for p in polys {
        insert(&mut base, p.clone());
    }
    base.sort_by(|a, b| size(a).cmp(&size(b)).then_with(|| a.to_string().cmp(&b.to_string())));
    base
}

/// Distinct factors of all entry denominators.
pub fn singular_locus(c: &ConnectionMatrixPair) -> Vec<MultiPoly> {
    let dens: Vec<MultiPoly> = c.a.iter().chain(&c.b).flatten().map(|e| e.reduced().den().clone()).collect();
    coprime_base(&dens)
}

pub fn same_up_to_scalar(a: &MultiPoly, b: &MultiPoly) -> bool {
    a.primitive() == b.primitive()
}

/// `{λ, μ}` together with the denominator factors shared by the
/// connections for all three choices of the fourth basis element; factors
/// that move with the basis are apparent singularities.
pub fn intrinsic_singular_locus(gens: &[ThetaOperator]) -> Result<Vec<MultiPoly>, PfaffianError> {
    let ring = param_ring();
    let mut common: Option<Vec<MultiPoly>> = None;
    for fourth in [THETA_L2, THETA_M2, THETA_LM] {
        let c = match derive_with_basis(gens, fourth) {
            Ok(c) => c,
            Err(PfaffianError::Degenerate) => continue,
            Err(e) => return Err(e),
        };
        let f = singular_locus(&c);
        common = Some(match common {
            None => f,
            Some(prev) => prev.into_iter().filter(|p| f.iter().any(|q| same_up_to_scalar(p, q))).collect(),
        });
    }
    let mut out = vec![MultiPoly::var(&ring, "l")?, MultiPoly::var(&ring, "m")?];
    out.extend(common.ok_or(PfaffianError::NotClosed)?);
    Ok(coprime_base(&out))
}

/// Printed entry: a rational function, or the undefined symbols it uses.
#[derive(Debug, Clone, PartialEq)]
pub enum PrintedEntry {
    Value(RatFunc),
    Undefined(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrintedConnection {
    pub a: Vec<Vec<PrintedEntry>>,
    pub b: Vec<Vec<PrintedEntry>>,
}

fn undefined_markers(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut rest = src;
    while let Some(i) = rest.find("UNDEFINED(") {
        rest = &rest[i + "UNDEFINED(".len()..];
        let end = rest.find(')').unwrap_or(rest.len());
        out.push(rest[..end].to_string());
        rest = &rest[end..];
    }
    out
}

type Resolved = Result<MultiPoly, Vec<String>>;

/// Evaluates the printed symbol table into polynomials in `[l, m]`.
struct SymbolTable<'a> {
    defs: &'a BTreeMap<String, String>,
    done: BTreeMap<String, Resolved>,
}

impl SymbolTable<'_> {
    fn expr(&mut self, src: &str, stack: &mut Vec<String>) -> Result<Resolved, PfaffianError> {
        let marked = undefined_markers(src);
        if !marked.is_empty() {
            return Ok(Err(marked));
        }
        let ring = param_ring();
        let mut missing = BTreeSet::new();
        let mut map = BTreeMap::new();
        let mut names = vec!["l".to_string(), "m".to_string()];
        for id in identifiers(src) {
            if id == "l" || id == "m" {
                continue;
            }
            match self.symbol(&id, stack)? {
                Ok(p) => {
                    map.insert(id.clone(), RatFunc::from_poly(p));
                }
                Err(u) => missing.extend(u),
            }
            names.push(id);
        }
        if !missing.is_empty() {
            return Ok(Err(missing.into_iter().collect()));
        }
        let p = parse_poly(src, &Ring::new(&names))?;
        let r = p.substitute(&map, &ring)?;
        Ok(Ok(r.as_poly().expect("polynomial symbols give a polynomial")))
    }

    fn symbol(&mut self, name: &str, stack: &mut Vec<String>) -> Result<Resolved, PfaffianError> {
        if let Some(r) = self.done.get(name) {
            return Ok(r.clone());
        }
        let Some(def) = self.defs.get(name) else {
            return Ok(Err(vec![name.to_string()]));
        };
        if stack.iter().any(|s| s == name) {
            return Err(PfaffianError::Cyclic(name.to_string()));
        }
        stack.push(name.to_string());
        let r = self.expr(def, stack)?;
        stack.pop();
        self.done.insert(name.to_string(), r.clone());
        Ok(r)
    }

    fn entry(&mut self, src: &str) -> Result<PrintedEntry, PfaffianError> {
        let (num, den) = split_fraction(src);
        let n = self.expr(num, &mut Vec::new())?;
        let d = match den {
            Some(d) => self.expr(d, &mut Vec::new())?,
            None => Ok(MultiPoly::one(&param_ring())),
        };
        Ok(match (n, d) {
            (Ok(n), Ok(d)) => PrintedEntry::Value(RatFunc::new(n, d)?),
            (n, d) => {
                let mut u: Vec<String> = n.err().into_iter().chain(d.err()).flatten().collect();
                u.sort();
                u.dedup();
                PrintedEntry::Undefined(u)
            }
        })
    }
}

/// Splits at the last slash outside parentheses.
fn split_fraction(src: &str) -> (&str, Option<&str>) {
    let mut depth = 0i32;
    let mut at = None;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => at = Some(i),
            _ => {}
        }
    }
    match at {
        Some(i) => (&src[..i], Some(&src[i + 1..])),
        None => (src, None),
    }
}

/// Evaluates printed matrices given as entry text over a symbol table.
pub fn printed_pair(
    symbols: &BTreeMap<String, String>,
    a: &[Vec<String>],
    b: &[Vec<String>],
) -> Result<PrintedConnection, PfaffianError> {
    let mut table = SymbolTable { defs: symbols, done: BTreeMap::new() };
    let mut read = |m: &[Vec<String>]| -> Result<Vec<Vec<PrintedEntry>>, PfaffianError> {
        if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
            return Err(PfaffianError::Shape);
        }
        m.iter().map(|r| r.iter().map(|e| table.entry(e)).collect()).collect()
    };
    Ok(PrintedConnection { a: read(a)?, b: read(b)? })
}

/// Resolves one symbol of a printed table to a polynomial, if defined.
pub fn printed_symbol(symbols: &BTreeMap<String, String>, name: &str) -> Result<Option<MultiPoly>, PfaffianError> {
    let mut table = SymbolTable { defs: symbols, done: BTreeMap::new() };
    Ok(table.symbol(name, &mut Vec::new())?.ok())
}

/// Value of the single undefined symbol in a printed entry that makes the
/// entry equal `target`, when the entry is affine in that symbol.
pub fn solve_undefined(
    symbols: &BTreeMap<String, String>,
    entry: &str,
    target: &RatFunc,
) -> Result<Option<(String, RatFunc)>, PfaffianError> {
    let mut names: Vec<String> = symbols.values().flat_map(|d| undefined_markers(d)).collect();
    names.extend(undefined_markers(entry));
    names.sort();
    names.dedup();
    let [name] = names.as_slice() else { return Ok(None) };
    let marker = format!("UNDEFINED({name})");
    let at = |k: i64| -> Result<Option<RatFunc>, PfaffianError> {
        let defs: BTreeMap<String, String> =
            symbols.iter().map(|(n, d)| (n.clone(), d.replace(&marker, &format!("({k})")))).collect();
        let mut table = SymbolTable { defs: &defs, done: BTreeMap::new() };
        Ok(match table.entry(&entry.replace(&marker, &format!("({k})")))? {
            PrintedEntry::Value(v) => Some(v),
            PrintedEntry::Undefined(_) => None,
        })
    };
    let (Some(v0), Some(v1), Some(v2)) = (at(0)?, at(1)?, at(2)?) else { return Ok(None) };
    let slope = &v1 - &v0;
    if slope.is_zero() || &v2 - &v0 != &slope + &slope {
        return Ok(None);
    }
    Ok(Some((name.clone(), (&(target - &v0) / &slope).reduced())))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EntryStatus {
    Match,
    Mismatch,
    UndefinedInSource(Vec<String>),
}

/// How the printed matrices relate to the logarithmic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// printed `A = Ã`, `B = B̃`
    Logarithmic,
    /// printed `A = Ã/λ`, `B = B̃/μ`
    Differential,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrintedComparison {
    pub convention: Convention,
    pub a: Vec<Vec<EntryStatus>>,
    pub b: Vec<Vec<EntryStatus>>,
}

impl PrintedComparison {
    pub fn count(&self, status: &EntryStatus) -> usize {
        self.a.iter().chain(&self.b).flatten().filter(|s| *s == status).count()
    }

    pub fn mismatches(&self) -> Vec<(char, usize, usize)> {
        let mut out = Vec::new();
        for (name, m) in [('A', &self.a), ('B', &self.b)] {
            for (i, r) in m.iter().enumerate() {
                for (j, s) in r.iter().enumerate() {
                    if *s == EntryStatus::Mismatch {
                        out.push((name, i, j));
                    }
                }
            }
        }
        out
    }
}

fn statuses(derived: &RatMatrix, printed: &[Vec<PrintedEntry>], scale: &RatFunc) -> Vec<Vec<EntryStatus>> {
    derived
        .iter()
        .zip(printed)
        .map(|(dr, pr)| {
            dr.iter()
                .zip(pr)
                .map(|(d, p)| match p {
                    PrintedEntry::Undefined(u) => EntryStatus::UndefinedInSource(u.clone()),
                    PrintedEntry::Value(v) if *v == d * scale => EntryStatus::Match,
                    PrintedEntry::Value(_) => EntryStatus::Mismatch,
                })
                .collect()
        })
        .collect()
}

/// Entrywise comparison under both conventions; the one with more matches
/// is reported (the logarithmic one on a tie).
pub fn compare_with_printed(c: &ConnectionMatrixPair, p: &PrintedConnection) -> PrintedComparison {
    let ring = param_ring();
    let one = RatFunc::one(&ring);
    let var = |v: &str| RatFunc::from_poly(MultiPoly::var(&ring, v).expect("ring has l and m"));
    let inv = |r: RatFunc| r.inv().expect("nonzero variable");
    let log = PrintedComparison {
        convention: Convention::Logarithmic,
        a: statuses(&c.a, &p.a, &one),
        b: statuses(&c.b, &p.b, &one),
    };
    let diff = PrintedComparison {
        convention: Convention::Differential,
        a: statuses(&c.a, &p.a, &inv(var("l"))),
        b: statuses(&c.b, &p.b, &inv(var("m"))),
    };
    if diff.count(&EntryStatus::Match) > log.count(&EntryStatus::Match) {
        diff
    } else {
        log
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::BigRat;
    use num::One;

    fn op(s: &str) -> ThetaOperator {
        ThetaOperator::parse(s).unwrap()
    }

    #[test]
    fn theta_generators_are_degenerate() {
        assert_eq!(derive_pfaffian(&[op("Tl"), op("Tm")]), Err(PfaffianError::Degenerate));
    }

    #[test]
    fn single_generator_does_not_close() {
        assert_eq!(derive_pfaffian(&[op("l*Tm^2 - m*Tl^2")]), Err(PfaffianError::NotClosed));
    }

    fn gauss_pair() -> [ThetaOperator; 2] {
        [op("Tl^2 - l*(Tl+1/2)^2"), op("Tm^2 - m*(Tm+1/3)*(Tm+2/3)")]
    }

    /// A product of two Gauss functions: θλ² reduces into (1, θλ), so the
    /// fourth basis element must be θλθμ.
    #[test]
    fn product_of_gauss_functions() {
        let gens = gauss_pair();
        assert_eq!(derive_pfaffian(&gens), Err(PfaffianError::Degenerate));
        let c = derive_with_basis(&gens, THETA_LM).unwrap();
        assert_eq!(verify_integrability(&c), Integrability::Pass);
        let coeff = |a: BigRat, b: BigRat, k: u32| {
            (0..k).fold(BigRat::one(), |acc, j| {
                let j = BigRat::from_integer(j.into());
                acc * (&a + &j) * (&b + &j) / ((&j + BigRat::one()) * (&j + BigRat::one()))
            })
        };
        let h = BigRat::new(1.into(), 2.into());
        let (t1, t2) = (BigRat::new(1.into(), 3.into()), BigRat::new(2.into(), 3.into()));
        let s = BiPowerSeries::from_fn(10, |n, m| coeff(h.clone(), h.clone(), n) * coeff(t1.clone(), t2.clone(), m));
        assert_eq!(verify_on_series(&c, &s), SeriesCheck::Pass);
        let bad = BiPowerSeries::from_fn(10, |n, m| coeff(h.clone(), h.clone(), n + m));
        assert!(matches!(verify_on_series(&c, &bad), SeriesCheck::FirstFailure { .. }));
        let locus = singular_locus(&c);
        let ring = param_ring();
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        assert_eq!(locus, vec![p("l - 1"), p("m - 1")]);
    }

    #[test]
    fn perturbed_pair_fails_integrability() {
        let mut c = derive_with_basis(&gauss_pair(), THETA_LM).unwrap();
        let one = RatFunc::one(&param_ring());
        c.a[3][0] = &c.a[3][0] + &one;
        assert!(matches!(verify_integrability(&c), Integrability::Fail { .. }));
    }

    #[test]
    fn fraction_split() {
        assert_eq!(split_fraction("-(1+l)/(54*l)"), ("-(1+l)", Some("(54*l)")));
        assert_eq!(split_fraction("a11"), ("a11", None));
        assert_eq!(split_fraction("(a/2)"), ("(a/2)", None));
    }

    #[test]
    fn symbol_table_resolution() {
        let mut defs = BTreeMap::new();
        defs.insert("s".to_string(), "1 + l".to_string());
        defs.insert("a".to_string(), "2*s*m".to_string());
        defs.insert("b".to_string(), "UNDEFINED(r) + s".to_string());
        let rows = |e: &str| vec![vec![e.to_string(); 4]; 4];
        let p = printed_pair(&defs, &rows("a/(2*s)"), &rows("b/s + c")).unwrap();
        let ring = param_ring();
        let m = RatFunc::from_poly(MultiPoly::var(&ring, "m").unwrap());
        assert_eq!(p.a[0][0], PrintedEntry::Value(m));
        // the split happens at the slash, so `c` lands in the denominator
        assert_eq!(p.b[1][2], PrintedEntry::Undefined(vec!["c".to_string(), "r".to_string()]));
    }

    #[test]
    fn cyclic_symbols_rejected() {
        let mut defs = BTreeMap::new();
        defs.insert("a".to_string(), "b + 1".to_string());
        defs.insert("b".to_string(), "a*l".to_string());
        assert_eq!(printed_symbol(&defs, "a"), Err(PfaffianError::Cyclic("a".to_string())));
    }

    #[test]
    fn coprime_base_splits_powers_and_products() {
        let ring = param_ring();
        let p = |s: &str| parse_poly(s, &ring).unwrap();
        let base = coprime_base(&[p("l^2*(1+m)"), p("(1+m)*(2+l)"), p("3*l")]);
        assert_eq!(base, vec![p("l"), p("l + 2"), p("m + 1")]);
    }
}
