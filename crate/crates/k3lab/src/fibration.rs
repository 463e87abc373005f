//! Elliptic fibrations of the three K3 families: birational maps onto
//! Weierstrass models, Kodaira normal forms, discriminants and fiber types.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::exactcore::rat::{fmt_rat, int};
use crate::exactcore::{parse_poly, AlgebraError, BigRat, MultiPoly, RatFunc, Ring, UniPoly};

/// Order used for an identically vanishing coefficient.
pub const INFINITE_ORDER: u32 = u32::MAX / 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FibrationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("non-minimal or inconsistent orders ({0}, {1}, {2})")]
    BadOrders(u32, u32, u32),
    #[error("degenerate cubic: discriminant vanishes identically")]
    Degenerate,
    #[error("sample outside Λ")]
    SampleOutside,
    #[error("chart at infinity needs deg g2 <= 8 and deg g3 <= 12, got {0} and {1}")]
    WeightTooHigh(u32, u32),
    #[error("residual factor at the sample is not squarefree of degree {expected}: {detail}")]
    Residual { expected: u32, detail: String },
    #[error("unknown fiber type {0:?}")]
    UnknownFiber(String),
}

#[derive(Debug, Clone)]
pub struct SurfaceEquation {
    pub family: String,
    pub poly: MultiPoly,
}

/// `square^2 = cubic^3 + a2 cubic^2 + a1 cubic + a0` over the base variable.
#[derive(Debug, Clone)]
pub struct WeierstrassForm {
    pub ring: Ring,
    pub base: String,
    pub cubic: String,
    pub square: String,
    pub a2: MultiPoly,
    pub a1: MultiPoly,
    pub a0: MultiPoly,
}

impl WeierstrassForm {
    /// `square^2 - (cubic^3 + a2 cubic^2 + a1 cubic + a0)`.
    pub fn equation(&self) -> MultiPoly {
        let y = MultiPoly::var(&self.ring, &self.cubic).unwrap();
        let z = MultiPoly::var(&self.ring, &self.square).unwrap();
        let rhs = &(&(&y.pow(3) + &(&self.a2 * &y.pow(2))) + &(&self.a1 * &y)) + &self.a0;
        &z.pow(2) - &rhs
    }

    /// Does the point `(cubic, square) = (c, s)` lie on the curve?
    pub fn contains(&self, c: &MultiPoly, s: &MultiPoly) -> Result<bool, AlgebraError> {
        let mut map = BTreeMap::new();
        map.insert(self.cubic.clone(), RatFunc::from_poly(c.to_ring(&self.ring)?));
        map.insert(self.square.clone(), RatFunc::from_poly(s.to_ring(&self.ring)?));
        Ok(self.equation().substitute(&map, &self.ring)?.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    Finite,
    Infinity,
}

/// `z^2 = y^3 - g2 y - g3` over the ring `[t, l, m]`.
#[derive(Debug, Clone)]
pub struct KodairaNormalForm {
    pub ring: Ring,
    pub base: String,
    pub g2: MultiPoly,
    pub g3: MultiPoly,
    pub chart: Chart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FiberKind {
    Smooth,
    I(u32),
    IStar(u32),
    II,
    III,
    IV,
    IIStar,
    IIIStar,
    IVStar,
}

impl FiberKind {
    pub fn euler(&self) -> u32 {
        match self {
            FiberKind::Smooth => 0,
            FiberKind::I(n) => *n,
            FiberKind::IStar(n) => n + 6,
            FiberKind::II => 2,
            FiberKind::III => 3,
            FiberKind::IV => 4,
            FiberKind::IVStar => 8,
            FiberKind::IIIStar => 9,
            FiberKind::IIStar => 10,
        }
    }

    pub fn parse(s: &str) -> Result<FiberKind, FibrationError> {
        let bad = || FibrationError::UnknownFiber(s.to_string());
        Ok(match s {
            "smooth" => FiberKind::Smooth,
            "II" => FiberKind::II,
            "III" => FiberKind::III,
            "IV" => FiberKind::IV,
            "II*" => FiberKind::IIStar,
            "III*" => FiberKind::IIIStar,
            "IV*" => FiberKind::IVStar,
            _ => {
                if let Some(n) = s.strip_prefix("I*") {
                    FiberKind::IStar(n.parse().map_err(|_| bad())?)
                } else if let Some(n) = s.strip_prefix('I') {
                    FiberKind::I(n.parse().map_err(|_| bad())?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::Smooth => write!(f, "smooth"),
            FiberKind::I(n) => write!(f, "I{n}"),
            FiberKind::IStar(n) => write!(f, "I*{n}"),
            FiberKind::II => write!(f, "II"),
            FiberKind::III => write!(f, "III"),
            FiberKind::IV => write!(f, "IV"),
            FiberKind::IIStar => write!(f, "II*"),
            FiberKind::IIIStar => write!(f, "III*"),
            FiberKind::IVStar => write!(f, "IV*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberLocation {
    Zero,
    Infinity,
    ResidualRoots,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberEntry {
    pub location: FiberLocation,
    pub kind: FiberKind,
    pub count: u32,
    /// Orders of (g2, g3, Δ) before minimal reduction.
    pub orders: (u32, u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberConfiguration {
    pub fibers: Vec<FiberEntry>,
}

impl FiberConfiguration {
    pub fn euler_sum(&self) -> u32 {
        self.fibers.iter().map(|f| f.kind.euler() * f.count).sum()
    }

    /// `I9 + I*3 + 6I1` style summary.
    pub fn summary(&self) -> String {
        self.fibers
            .iter()
            .map(|f| if f.count == 1 { f.kind.to_string() } else { format!("{}{}", f.count, f.kind) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn euler_check(c: &FiberConfiguration) -> bool {
    c.euler_sum() == 24
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BirationalOutcome {
    Pass,
    Fail { witness: String },
}

/// Pull the surface back along `φ` and test divisibility of the numerator by
/// the Weierstrass equation. Variables of `φ` outside the chart are kept as
/// extra indeterminates, so a stray symbol shows up as non-divisibility.
pub fn verify_birational(
    f: &SurfaceEquation,
    phi: &BTreeMap<String, RatFunc>,
    target: &WeierstrassForm,
) -> Result<BirationalOutcome, FibrationError> {
    let mut ring = target.ring.clone();
    for r in phi.values() {
        ring = ring.union(r.ring());
    }
    let pulled = f.poly.substitute(phi, &ring)?;
    let mut num = pulled.num().clone();
    if num.is_zero() {
        return Err(AlgebraError::ZeroDenominator.into());
    }
    for (i, v) in ring.vars().iter().enumerate() {
        if v != "l" && v != "m" {
            let k = num.min_degree_in(i);
            num = num.div_var_pow(i, k).expect("monomial factor");
        }
    }
    let w = target.equation().to_ring(&ring)?;
    match num.exact_divide(&w)? {
        Some(_) => Ok(BirationalOutcome::Pass),
        None => {
            let (_, r) = num.div_rem(&w)?;
            let lt = r.leading().map(|(e, c)| MultiPoly::monomial(&ring, e.clone(), c.clone()));
            Ok(BirationalOutcome::Fail {
                witness: format!(
                    "remainder has {} terms, leading term {}",
                    r.num_terms(),
                    lt.map(|p| p.to_string()).unwrap_or_default()
                ),
            })
        }
    }
}

/// Complete the cube and rescale by `u` so the coefficients are integral.
/// Returns the normal form and `u`.
pub fn depress_cubic(w: &WeierstrassForm) -> Result<(KodairaNormalForm, BigRat), FibrationError> {
    let ring = Ring::new(&[w.base.as_str(), "l", "m"]);
    let a2 = w.a2.to_ring(&ring)?;
    let a1 = w.a1.to_ring(&ring)?;
    let a0 = w.a0.to_ring(&ring)?;
    let g2 = &(&a2 * &a2).scale(&BigRat::new(1.into(), 3.into())) - &a1;
    let g3 = &(&(&a1 * &a2).scale(&BigRat::new(1.into(), 3.into()))
        - &a2.pow(3).scale(&BigRat::new(2.into(), 27.into())))
        - &a0;
    let integral = |p: &MultiPoly| p.terms().all(|(_, c)| c.is_integer());
    let mut u = BigRat::one();
    for k in 1..=36 {
        let uk = int(k);
        let s2 = g2.scale(&num::pow(uk.clone(), 4));
        let s3 = g3.scale(&num::pow(uk.clone(), 6));
        if integral(&s2) && integral(&s3) {
            u = uk;
            break;
        }
    }
    let g2 = g2.scale(&num::pow(u.clone(), 4));
    let g3 = g3.scale(&num::pow(u.clone(), 6));
    Ok((KodairaNormalForm { ring, base: w.base.clone(), g2, g3, chart: Chart::Finite }, u))
}

/// `Δ = 4 g2^3 - 27 g3^2`.
pub fn discriminant(k: &KodairaNormalForm) -> Result<MultiPoly, FibrationError> {
    let d = &k.g2.pow(3).scale(&int(4)) - &k.g3.pow(2).scale(&int(27));
    if d.is_zero() {
        return Err(FibrationError::Degenerate);
    }
    Ok(d)
}

/// Second chart `s = 1/t`: `(s^8 g2(1/s), s^12 g3(1/s))` in the variable `var`.
pub fn to_infinity(k: &KodairaNormalForm, var: &str) -> Result<KodairaNormalForm, FibrationError> {
    let (d2, d3) = (k.g2.degree_in(0), k.g3.degree_in(0));
    if d2 > 8 || d3 > 12 {
        return Err(FibrationError::WeightTooHigh(d2, d3));
    }
    let ring = Ring::new(&[var, "l", "m"]);
    let flip = |p: &MultiPoly, w: u32| {
        MultiPoly::from_terms(
            &ring,
            p.terms().map(|(e, c)| {
                let mut f = e.clone();
                f.0[0] = w - f.0[0];
                (f, c.clone())
            }),
        )
    };
    Ok(KodairaNormalForm {
        ring: ring.clone(),
        base: var.to_string(),
        g2: flip(&k.g2, 8),
        g3: flip(&k.g3, 12),
        chart: Chart::Infinity,
    })
}

/// Finite and infinite charts of the depressed cubic.
pub fn normal_forms(
    w: &WeierstrassForm,
    inf_var: &str,
) -> Result<(KodairaNormalForm, KodairaNormalForm), FibrationError> {
    let (k, _) = depress_cubic(w)?;
    let inf = to_infinity(&k, inf_var)?;
    Ok((k, inf))
}

/// Kodaira's table on minimal orders.
pub fn classify_fiber(o2: u32, o3: u32, od: u32) -> Result<FiberKind, FibrationError> {
    let bad = Err(FibrationError::BadOrders(o2, o3, od));
    if o2 >= 4 && o3 >= 6 {
        return bad;
    }
    let kind = match (o2, o3, od) {
        (_, _, 0) if o2 == 0 || o3 == 0 => FiberKind::Smooth,
        (0, 0, n) => FiberKind::I(n),
        (a, 1, 2) if a >= 1 => FiberKind::II,
        (1, b, 3) if b >= 2 => FiberKind::III,
        (a, 2, 4) if a >= 2 => FiberKind::IV,
        (a, b, 6) if a >= 2 && b >= 3 => FiberKind::IStar(0),
        (2, 3, n) if n > 6 => FiberKind::IStar(n - 6),
        (a, 4, 8) if a >= 3 => FiberKind::IVStar,
        (3, b, 9) if b >= 5 => FiberKind::IIIStar,
        (a, 5, 10) if a >= 4 => FiberKind::IIStar,
        _ => return bad,
    };
    Ok(kind)
}

fn order_at_zero(p: &MultiPoly) -> u32 {
    if p.is_zero() {
        INFINITE_ORDER
    } else {
        p.min_degree_in(0)
    }
}

/// Orders of `(g2, g3, Δ)` at `t = 0` over Q(λ, μ), then minimal reduction
/// and classification.
pub fn fiber_at_zero(k: &KodairaNormalForm) -> Result<(FiberKind, (u32, u32, u32)), FibrationError> {
    let d = discriminant(k)?;
    let raw = (order_at_zero(&k.g2), order_at_zero(&k.g3), order_at_zero(&d));
    let (mut o2, mut o3, mut od) = raw;
    while o2 >= 4 && o3 >= 6 {
        o2 -= 4;
        o3 -= 6;
        od -= 12;
    }
    Ok((classify_fiber(o2, o3, od)?, raw))
}

/// Fiber configuration from the two charts; the residual factor of Δ is
/// checked at a rational sample of the parameter space.
pub fn analyze_fibration(
    finite: &KodairaNormalForm,
    infinity: &KodairaNormalForm,
    sample: (&BigRat, &BigRat),
    locus: &MultiPoly,
) -> Result<FiberConfiguration, FibrationError> {
    let lr = locus.ring();
    let mut pt = vec![BigRat::zero(); lr.len()];
    for (i, v) in lr.vars().iter().enumerate() {
        pt[i] = match v.as_str() {
            "l" => sample.0.clone(),
            "m" => sample.1.clone(),
            _ => BigRat::zero(),
        };
    }
    if locus.eval(&pt).is_zero() {
        return Err(FibrationError::SampleOutside);
    }
    let (k0, o0) = fiber_at_zero(finite)?;
    let (ki, oi) = fiber_at_zero(infinity)?;
    let d = discriminant(finite)?;
    let generic_deg = d.degree_in(0) - o0.2;
    let residual = d.div_var_pow(0, o0.2).expect("order divides");
    let at = residual.eval_partial(&[(1, sample.0.clone()), (2, sample.1.clone())]);
    let u = UniPoly::from_multi(&at, 0).expect("univariate after evaluation");
    let ok_deg = u.degree() == Some(generic_deg as usize);
    let ok_zero = !u.coeffs().first().map(|c| c.is_zero()).unwrap_or(true);
    if !(ok_deg && ok_zero && u.is_squarefree()) {
        return Err(FibrationError::Residual {
            expected: generic_deg,
            detail: format!("degree {:?}, squarefree {}", u.degree(), u.is_squarefree()),
        });
    }
    Ok(FiberConfiguration {
        fibers: vec![
            FiberEntry { location: FiberLocation::Zero, kind: k0, count: 1, orders: o0 },
            FiberEntry { location: FiberLocation::Infinity, kind: ki, count: 1, orders: oi },
            FiberEntry {
                location: FiberLocation::ResidualRoots,
                kind: FiberKind::I(1),
                count: generic_deg,
                orders: (0, 0, 1),
            },
        ],
    })
}

/// Outcome of comparing a printed polynomial with a derived one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaledComparison {
    /// `printed = factor * derived` when such a constant exists.
    pub factor: Option<String>,
    /// Exact quotient when one side divides the other by a non-constant.
    pub quotient: Option<String>,
    /// Powers of the base variable whose coefficients disagree under the best constant.
    pub mismatched_powers: Vec<u32>,
}

impl ScaledComparison {
    pub fn matches(&self) -> bool {
        self.factor.is_some()
    }
}

fn common_ring(a: &MultiPoly, b: &MultiPoly, renames: &[(&str, &str)]) -> Result<(MultiPoly, MultiPoly), AlgebraError> {
    let mut ra = a.ring().clone();
    for (f, t) in renames {
        if let Some(i) = ra.index(f) {
            let mut v = ra.vars().to_vec();
            v[i] = t.to_string();
            ra = Ring::new(&v);
        }
    }
    let ring = b.ring().union(&ra);
    Ok((a.rename_into(&ring, renames)?, b.to_ring(&ring)?))
}

/// Compare `printed` with `derived` up to a nonzero rational constant.
/// `renames` maps printed variable names to derived ones.
pub fn compare_up_to_constant(
    printed: &MultiPoly,
    derived: &MultiPoly,
    renames: &[(&str, &str)],
) -> Result<ScaledComparison, FibrationError> {
    let (p, d) = common_ring(printed, derived, renames)?;
    let base = 0;
    let pc = p.coefficients_in(base);
    let dc = d.coefficients_in(base);
    let mut votes: Vec<(BigRat, u32)> = Vec::new();
    for (k, dk) in &dc {
        if let Some(pk) = pc.get(k) {
            let (e, c) = dk.leading().unwrap();
            let r = pk.coefficient(e) / c;
            if !r.is_zero() && &dk.scale(&r) == pk {
                match votes.iter_mut().find(|(x, _)| *x == r) {
                    Some(v) => v.1 += 1,
                    None => votes.push((r, 1)),
                }
            }
        }
    }
    votes.sort_by_key(|v| std::cmp::Reverse(v.1));
    let best = votes.first().map(|v| v.0.clone());
    let mut mism = Vec::new();
    let keys: std::collections::BTreeSet<u32> = pc.keys().chain(dc.keys()).copied().collect();
    for k in keys {
        let pk = pc.get(&k).cloned().unwrap_or_else(|| MultiPoly::zero(p.ring()));
        let dk = dc.get(&k).cloned().unwrap_or_else(|| MultiPoly::zero(p.ring()));
        let ok = best.as_ref().map(|r| dk.scale(r) == pk).unwrap_or(false);
        if !ok {
            mism.push(k);
        }
    }
    let factor = if mism.is_empty() { best.map(|r| fmt_rat(&r)) } else { None };
    let quotient = if factor.is_none() {
        match p.exact_divide(&d)? {
            Some(q) if !q.is_zero() => Some(format!("printed = ({q}) * derived")),
            _ => match d.exact_divide(&p)? {
                Some(q) if !q.is_zero() => Some(format!("derived = ({q}) * printed")),
                _ => None,
            },
        }
    } else {
        None
    };
    Ok(ScaledComparison { factor, quotient, mismatched_powers: mism })
}

/// Printed `(g2, g3)` against derived ones, allowing `(u^4 g2, u^6 g3)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormComparison {
    pub g2: ScaledComparison,
    pub g3: ScaledComparison,
    pub consistent_weights: bool,
}

impl NormalFormComparison {
    pub fn matches(&self) -> bool {
        self.g2.matches() && self.g3.matches() && self.consistent_weights
    }
}

pub fn compare_normal_forms(
    printed_g2: &MultiPoly,
    printed_g3: &MultiPoly,
    derived: &KodairaNormalForm,
    renames: &[(&str, &str)],
) -> Result<NormalFormComparison, FibrationError> {
    let g2 = compare_up_to_constant(printed_g2, &derived.g2, renames)?;
    let g3 = compare_up_to_constant(printed_g3, &derived.g3, renames)?;
    let consistent_weights = match (&g2.factor, &g3.factor) {
        (Some(a), Some(b)) => {
            let a = parse_rat(a);
            let b = parse_rat(b);
            a.is_positive() && num::pow(a, 3) == num::pow(b, 2)
        }
        _ => false,
    };
    Ok(NormalFormComparison { g2, g3, consistent_weights })
}

fn parse_rat(s: &str) -> BigRat {
    parse_poly(s, &Ring::new::<&str>(&[])).expect("formatted rational").constant_term()
}

/// Rebuild `a1, a0` of a Weierstrass form from a printed `g2` (with scale 1)
/// and a 2-torsion point `(c, 0)`.
pub fn reconstruct_from_g2_and_torsion(
    w: &WeierstrassForm,
    printed_g2: &MultiPoly,
    torsion_cubic: &MultiPoly,
) -> Result<WeierstrassForm, FibrationError> {
    let a2 = &w.a2;
    let g2 = printed_g2.to_ring(&w.ring)?;
    let a1 = &(a2 * a2).scale(&BigRat::new(1.into(), 3.into())) - &g2;
    let c = torsion_cubic.to_ring(&w.ring)?;
    let a0 = -&(&(&c.pow(3) + &(a2 * &c.pow(2))) + &(&a1 * &c));
    Ok(WeierstrassForm { a1, a0, ..w.clone() })
}
