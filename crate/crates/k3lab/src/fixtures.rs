//! Fixture files and their conversion into domain values.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::exactcore::{identifiers, parse_poly, AlgebraError, MultiPoly, RatFunc, Ring};
use crate::fibration::{FiberKind, FibrationError, SurfaceEquation, WeierstrassForm};
use crate::lattice::{FiberBlock, FiberLatticeSpec, GramMatrix, LatticeError, SectionSpec};
use crate::period::{PeriodError, PeriodFamily, ThetaOperator};
use crate::pfaffian::{param_ring, printed_pair, printed_symbol, PfaffianError, PrintedConnection};

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("fixture entry {0} not found")]
    Missing(String),
    #[error("bad polynomial in fixture: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("bad fiber type in fixture: {0}")]
    Fiber(#[from] FibrationError),
    #[error("bad matrix in fixture: {0}")]
    Lattice(#[from] LatticeError),
    #[error("bad operator in fixture: {0}")]
    Period(#[from] PeriodError),
    #[error("bad printed matrix in fixture: {0}")]
    Pfaffian(#[from] PfaffianError),
    #[error("bad value in fixture: {0}")]
    Value(String),
}

/// `K3LAB_FIXTURES` if set, else the repository's `fixtures/` directory.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os("K3LAB_FIXTURES") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"),
    }
}

pub fn load<T: DeserializeOwned>(dir: &Path, name: &str) -> Result<T, FixtureError> {
    let path = dir.join(name);
    let text = std::fs::read_to_string(&path)
        .map_err(|source| FixtureError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| FixtureError::Json { path: path.display().to_string(), source })
}

// polytopes.json

#[derive(Debug, Clone, Deserialize)]
pub struct PolytopeFile {
    pub polytopes: Vec<PolytopeEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PolytopeEntry {
    pub id: String,
    pub rows: [Vec<i64>; 3],
    pub fano: bool,
}

// fibrations.json

#[derive(Debug, Clone, Deserialize)]
pub struct FibrationFile {
    pub families: Vec<FamilyEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FamilyEntry {
    pub id: String,
    pub surface: String,
    pub lambda_locus: String,
    pub map: MapEntry,
    pub weierstrass: WeierstrassEntry,
    pub sections: Vec<SectionEntry>,
    pub kodaira_printed: PrintedPair,
    pub kodaira_infinity_printed: PrintedPair,
    pub discriminant_printed: PrintedDiscriminant,
    pub expected: ExpectedFibers,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Fraction {
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct MapEntry {
    pub chart_vars: Vec<String>,
    pub x: Fraction,
    pub y: Fraction,
    pub z: Fraction,
}

#[derive(Debug, Clone, Deserialize)]
pub struct WeierstrassEntry {
    pub base: String,
    pub square: String,
    pub cubic: String,
    pub a2: String,
    pub a1: String,
    pub a0: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SectionEntry {
    pub name: String,
    pub cubic: String,
    pub square: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PrintedPair {
    pub base: String,
    pub g2: String,
    pub g3: String,
    #[serde(default)]
    pub transcription: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PrintedDiscriminant {
    pub finite: String,
    pub infinity: String,
    #[serde(default)]
    pub transcription: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ExpectedFibers {
    pub zero: String,
    pub infinity: String,
    pub residual_i1: u32,
}

/// Ring holding the variables of `src` with `l, m` last.
pub fn ring_of(src: &[&str]) -> Ring {
    let mut vars: Vec<String> = Vec::new();
    for s in src {
        for v in identifiers(s) {
            if v != "l" && v != "m" && !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.push("l".into());
    vars.push("m".into());
    Ring::new(&vars)
}

/// Parse with a ring made of the expression's own variables.
pub fn poly(src: &str) -> Result<MultiPoly, AlgebraError> {
    parse_poly(src, &ring_of(&[src]))
}

/// Parse in the ring `[first, l, m]` (or just `[l, m]`), extending with any
/// stray variables the printed text contains.
pub fn poly_in(src: &str, first: &str) -> Result<MultiPoly, AlgebraError> {
    let base = if first.is_empty() { Ring::new(&["l", "m"]) } else { Ring::new(&[first, "l", "m"]) };
    parse_poly(src, &base.union(&ring_of(&[src])))
}

impl FamilyEntry {
    pub fn surface(&self) -> Result<SurfaceEquation, FixtureError> {
        let ring = Ring::new(&["x", "y", "z", "l", "m"]);
        Ok(SurfaceEquation { family: self.id.clone(), poly: parse_poly(&self.surface, &ring)? })
    }

    pub fn chart_ring(&self) -> Ring {
        let mut v: Vec<&str> = self.map.chart_vars.iter().map(String::as_str).collect();
        v.push("l");
        v.push("m");
        Ring::new(&v)
    }

    pub fn map(&self) -> Result<BTreeMap<String, RatFunc>, FixtureError> {
        let chart = self.chart_ring();
        let mut out = BTreeMap::new();
        for (name, f) in [("x", &self.map.x), ("y", &self.map.y), ("z", &self.map.z)] {
            let ring = chart.union(&ring_of(&[&f.num, &f.den]));
            let r = RatFunc::new(parse_poly(&f.num, &ring)?, parse_poly(&f.den, &ring)?)?;
            out.insert(name.to_string(), r);
        }
        Ok(out)
    }

    pub fn weierstrass(&self) -> Result<WeierstrassForm, FixtureError> {
        let w = &self.weierstrass;
        let ring = Ring::new(&[w.base.as_str(), w.cubic.as_str(), w.square.as_str(), "l", "m"]);
        Ok(WeierstrassForm {
            a2: parse_poly(&w.a2, &ring)?,
            a1: parse_poly(&w.a1, &ring)?,
            a0: parse_poly(&w.a0, &ring)?,
            ring,
            base: w.base.clone(),
            cubic: w.cubic.clone(),
            square: w.square.clone(),
        })
    }

    pub fn locus(&self) -> Result<MultiPoly, FixtureError> {
        Ok(parse_poly(&self.lambda_locus, &Ring::new(&["l", "m"]))?)
    }

    pub fn section(&self, name: &str) -> Result<(MultiPoly, MultiPoly), FixtureError> {
        let s = self
            .sections
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| FixtureError::Missing(format!("section {name} of family {}", self.id)))?;
        let ring = self.weierstrass()?.ring;
        Ok((parse_poly(&s.cubic, &ring)?, parse_poly(&s.square, &ring)?))
    }
}

impl FibrationFile {
    pub fn family(&self, id: &str) -> Result<&FamilyEntry, FixtureError> {
        self.families
            .iter()
            .find(|f| f.id == id)
            .ok_or_else(|| FixtureError::Missing(format!("family {id}")))
    }
}

// lattices.json

#[derive(Debug, Clone, Deserialize)]
pub struct LatticeFile {
    pub families: Vec<LatticeFamily>,
    pub lattices: Vec<LatticeEntry>,
    pub table3: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LatticeFamily {
    pub id: String,
    #[serde(rename = "M")]
    pub m: Vec<Vec<i64>>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<i64>>,
    pub ns_form: Vec<Vec<i64>>,
    pub tr: Vec<Vec<i64>>,
    pub builder: BuilderEntry,
    pub permutation: Vec<usize>,
    pub domain: DomainEntry,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BuilderEntry {
    pub fibers: Vec<FiberBlockEntry>,
    pub sections: Vec<SectionSpecEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FiberBlockEntry {
    pub kind: String,
    #[serde(default)]
    pub omit: Vec<usize>,
}

/// `zero` is an integer or the parameter name `"k"`.
#[derive(Debug, Clone, Deserialize)]
pub struct SectionSpecEntry {
    pub name: String,
    pub meets: Vec<Option<usize>>,
    pub zero: serde_json::Value,
    #[serde(default)]
    pub others: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct LatticeEntry {
    pub id: String,
    pub family: String,
    pub fibers: Vec<FiberBlockEntry>,
    pub sections: Vec<SectionSpecEntry>,
    pub printed: Option<i64>,
    pub printed_poly: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DomainEntry {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub e: Vec<i64>,
    pub f: Vec<i64>,
}

/// A builder spec plus the index of the section whose `(S·O)` is the
/// free parameter, if any.
pub fn lattice_spec(
    fibers: &[FiberBlockEntry],
    sections: &[SectionSpecEntry],
) -> Result<(FiberLatticeSpec, Option<usize>), FixtureError> {
    let mut param = None;
    let mut out = Vec::new();
    for (i, s) in sections.iter().enumerate() {
        let with_zero = match &s.zero {
            serde_json::Value::Number(n) => n.as_i64().ok_or_else(|| FixtureError::Value(n.to_string()))?,
            serde_json::Value::String(k) if k == "k" => {
                param = Some(i);
                0
            }
            v => return Err(FixtureError::Value(v.to_string())),
        };
        out.push(SectionSpec { name: s.name.clone(), meets: s.meets.clone(), with_zero, with_previous: s.others.clone() });
    }
    let fibers = fibers
        .iter()
        .map(|f| Ok(FiberBlock { kind: FiberKind::parse(&f.kind)?, omit: f.omit.clone() }))
        .collect::<Result<Vec<_>, FixtureError>>()?;
    Ok((FiberLatticeSpec { fibers, sections: out }, param))
}

impl LatticeFamily {
    pub fn printed(&self) -> Result<GramMatrix, FixtureError> {
        Ok(GramMatrix::from_i64(&self.m)?)
    }

    pub fn builder_spec(&self) -> Result<FiberLatticeSpec, FixtureError> {
        Ok(lattice_spec(&self.builder.fibers, &self.builder.sections)?.0)
    }
}

impl LatticeFile {
    pub fn family(&self, id: &str) -> Result<&LatticeFamily, FixtureError> {
        self.families.iter().find(|f| f.id == id).ok_or_else(|| FixtureError::Missing(format!("lattice family {id}")))
    }

    pub fn lattice(&self, id: &str) -> Result<&LatticeEntry, FixtureError> {
        self.lattices.iter().find(|f| f.id == id).ok_or_else(|| FixtureError::Missing(format!("lattice {id}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct OperatorFile {
    pub operators: Vec<OperatorEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct OperatorEntry {
    pub id: String,
    pub family: String,
    pub text: String,
}

impl OperatorEntry {
    pub fn operator(&self) -> Result<ThetaOperator, FixtureError> {
        Ok(ThetaOperator::parse(&self.text)?)
    }

    pub fn period_family(&self) -> Result<PeriodFamily, FixtureError> {
        Ok(PeriodFamily::from_id(&self.family)?)
    }
}

impl OperatorFile {
    pub fn operator(&self, id: &str) -> Result<&OperatorEntry, FixtureError> {
        self.operators.iter().find(|o| o.id == id).ok_or_else(|| FixtureError::Missing(format!("operator {id}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct PfaffianFile {
    pub families: Vec<PfaffianEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PfaffianEntry {
    pub family: String,
    pub symbols: BTreeMap<String, String>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    pub locus: Vec<String>,
}

impl PfaffianEntry {
    pub fn printed(&self) -> Result<PrintedConnection, FixtureError> {
        Ok(printed_pair(&self.symbols, &self.a, &self.b)?)
    }

    pub fn symbol(&self, name: &str) -> Result<MultiPoly, FixtureError> {
        printed_symbol(&self.symbols, name)?.ok_or_else(|| FixtureError::Missing(format!("symbol {name}")))
    }

    /// `λ`, `μ` and the printed locus polynomials.
    pub fn locus_polys(&self) -> Result<Vec<MultiPoly>, FixtureError> {
        let ring = param_ring();
        let mut out = vec![MultiPoly::var(&ring, "l")?, MultiPoly::var(&ring, "m")?];
        for s in &self.locus {
            out.push(self.symbol(s)?);
        }
        Ok(out)
    }
}

impl PfaffianFile {
    pub fn family(&self, id: &str) -> Result<&PfaffianEntry, FixtureError> {
        self.families.iter().find(|f| f.family == id).ok_or_else(|| FixtureError::Missing(format!("pfaffian family {id}")))
    }
}
