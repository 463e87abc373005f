use std::collections::BTreeMap;

use num::One;
use proptest::prelude::*;

use k3lab::exactcore::{parse_poly, BigRat, MultiPoly, RatFunc};
use k3lab::fixtures::*;
use k3lab::period::*;
use k3lab::pfaffian::*;

fn operators() -> OperatorFile {
    load(&fixture_dir(), "operators.json").unwrap()
}

fn printed_file() -> PfaffianFile {
    load(&fixture_dir(), "pfaffians.json").unwrap()
}

fn printed_op(id: &str) -> ThetaOperator {
    operators().operator(id).unwrap().operator().unwrap()
}

fn p(s: &str) -> MultiPoly {
    parse_poly(s, &param_ring()).unwrap()
}

fn same_set(a: &[MultiPoly], b: &[MultiPoly]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| same_up_to_scalar(x, y)))
}

/// Family-2 generators as printed.
fn family_two() -> Vec<ThetaOperator> {
    vec![printed_op("rank4.2.L1"), printed_op("rank4.2.L3")]
}

/// Family-3 printed L3 with L1's θλ² replaced by θμ².
fn family_three_exchanged() -> Vec<ThetaOperator> {
    vec![ThetaOperator::parse("Tm^2 - m*(3*Tl+2*Tm+1)*(3*Tl+2*Tm+2)").unwrap(), printed_op("rank4.3.L3")]
}

#[test]
fn family_one_from_searched_annihilators() {
    let gens = find_annihilators(&period_series(PeriodFamily::One, 12), 2, 1);
    let c = derive_pfaffian(&gens).unwrap();
    assert_eq!(verify_integrability(&c), Integrability::Pass);
    assert_eq!(verify_on_series(&c, &period_series(PeriodFamily::One, 14)), SeriesCheck::Pass);
    // a smaller generating set gives the same connection
    let fewer = [printed_op("gkz.1.L1"), ThetaOperator::parse("Tm^2 - 3*m*(3*Tl+3*Tm+1)*(3*Tl+3*Tm+2)").unwrap()];
    assert_eq!(derive_pfaffian(&fewer).unwrap(), c);
}

#[test]
fn family_one_locus_is_the_reflected_printed_one() {
    let gens = find_annihilators(&period_series(PeriodFamily::One, 12), 2, 1);
    let locus = intrinsic_singular_locus(&gens).unwrap();
    let file = printed_file();
    let printed = file.family("1").unwrap();
    let t1 = printed.symbol("t1").unwrap();
    assert!(!same_set(&locus, &printed.locus_polys().unwrap()));
    let reflected_t1 = p("729*l^2 + 54*l*(-27*m-1) + (1-27*m)^2");
    assert!(same_set(&locus, &[p("l"), p("m"), reflected_t1]));
    let c = derive_pfaffian(&gens).unwrap().reflected();
    assert!(singular_locus(&c).iter().any(|f| same_up_to_scalar(f, &t1)));
}

#[test]
fn family_one_printed_matrices() {
    let gens = find_annihilators(&period_series(PeriodFamily::One, 12), 2, 1);
    let c = derive_pfaffian(&gens).unwrap();
    let file = printed_file();
    let entry = file.family("1").unwrap();
    let direct = compare_with_printed(&c, &entry.printed().unwrap());
    assert_eq!(direct.a[3][2], EntryStatus::UndefinedInSource(vec!["a23".into()]));
    assert_eq!(direct.a[3][3], EntryStatus::UndefinedInSource(vec!["a24".into()]));
    assert_eq!(direct.a[0][1], EntryStatus::Match);
    assert!(direct.count(&EntryStatus::Mismatch) > 0);
    // after (λ, μ) -> (-λ, -μ), and reading a23, a24 as a13, a14, every entry agrees
    let mut symbols = entry.symbols.clone();
    symbols.insert("a23".into(), symbols["a13"].clone());
    symbols.insert("a24".into(), symbols["a14"].clone());
    let read = printed_pair(&symbols, &entry.a, &entry.b).unwrap();
    let flipped = compare_with_printed(&c.reflected(), &read);
    assert_eq!(flipped.count(&EntryStatus::Match), 32);
}

#[test]
fn family_two_printed_generators() {
    let c = derive_pfaffian(&family_two()).unwrap();
    assert_eq!(verify_integrability(&c), Integrability::Pass);
    assert_eq!(verify_on_series(&c, &period_series(PeriodFamily::Two, 14)), SeriesCheck::Pass);
    let printed = printed_file();
    let locus = intrinsic_singular_locus(&family_two()).unwrap();
    assert!(same_set(&locus, &printed.family("2").unwrap().locus_polys().unwrap()));
    // s2 is an apparent singularity of the basis (1, θλ, θμ, θλ²)
    let s2 = printed.family("2").unwrap().symbol("s2").unwrap();
    assert!(singular_locus(&c).iter().any(|f| same_up_to_scalar(f, &s2)));
    assert!(!locus.iter().any(|f| same_up_to_scalar(f, &s2)));
}

#[test]
fn family_two_connection_is_unique() {
    let searched = find_annihilators(&period_series(PeriodFamily::Two, 12), 2, 2);
    assert_eq!(derive_pfaffian(&searched).unwrap(), derive_pfaffian(&family_two()).unwrap());
}

#[test]
fn family_two_printed_matrices() {
    let c = derive_pfaffian(&family_two()).unwrap();
    let file = printed_file();
    let entry = file.family("2").unwrap();
    let cmp = compare_with_printed(&c, &entry.printed().unwrap());
    assert_eq!(cmp.convention, Convention::Logarithmic);
    assert_eq!(cmp.a[3][3], EntryStatus::UndefinedInSource(vec!["r_2".into()]));
    assert_eq!(cmp.mismatches(), vec![('A', 3, 1)]);
    // the first term of a22 carries λ³ in the derived matrix
    let ts = &entry.symbol("t2").unwrap() * &entry.symbol("s2").unwrap();
    let derived = (&c.a[3][1] * &RatFunc::from_poly(ts)).reduced().as_poly().unwrap();
    let fixed = &entry.symbol("a22").unwrap() + &p("3*l^2*(11+54*l*(5+351*l)) - 3*l^3*(11+54*l*(5+351*l))");
    assert_eq!(derived, fixed);
    let (name, value) = solve_undefined(&entry.symbols, &entry.a[3][3], &c.a[3][3]).unwrap().unwrap();
    assert_eq!(name, "r_2");
    assert_eq!(value, RatFunc::from_poly(entry.symbol("t2").unwrap()));
}

#[test]
fn family_three_printed_generators_are_not_integrable() {
    let gens = [printed_op("rank4.3.L1"), printed_op("rank4.3.L3")];
    let c = derive_pfaffian(&gens).unwrap();
    assert!(matches!(verify_integrability(&c), Integrability::Fail { .. }));
    assert!(matches!(verify_on_series(&c, &period_series(PeriodFamily::Three, 12)), SeriesCheck::FirstFailure { .. }));
}

#[test]
fn family_three_exchanged_system() {
    let c = derive_pfaffian(&family_three_exchanged()).unwrap();
    assert_eq!(verify_integrability(&c), Integrability::Pass);
    let v = BiPowerSeries::from_fn(14, exchanged_three_coefficient);
    assert_eq!(verify_on_series(&c, &v), SeriesCheck::Pass);
    assert!(matches!(verify_on_series(&c, &period_series(PeriodFamily::Three, 14)), SeriesCheck::FirstFailure { .. }));
    let file = printed_file();
    let entry = file.family("3").unwrap();
    let cmp = compare_with_printed(&c, &entry.printed().unwrap());
    assert_eq!(cmp.count(&EntryStatus::Match), 31);
    assert_eq!(cmp.b[3][3], EntryStatus::UndefinedInSource(vec!["r_3".into()]));
    let (name, value) = solve_undefined(&entry.symbols, &entry.b[3][3], &c.b[3][3]).unwrap().unwrap();
    assert_eq!(name, "r_3");
    assert_eq!(value, RatFunc::from_poly(entry.symbol("t3").unwrap()));
    let locus = intrinsic_singular_locus(&family_three_exchanged()).unwrap();
    assert!(same_set(&locus, &entry.locus_polys().unwrap()));
}

#[test]
fn identity_connection_fails_on_the_first_row() {
    let ring = param_ring();
    let id: Vec<Vec<RatFunc>> =
        (0..4).map(|i| (0..4).map(|j| if i == j { RatFunc::one(&ring) } else { RatFunc::zero(&ring) }).collect()).collect();
    let c = ConnectionMatrixPair { basis: [(0, 0), (1, 0), (0, 1), (2, 0)], a: id.clone(), b: id };
    let out = verify_on_series(&c, &period_series(PeriodFamily::Two, 10));
    assert!(matches!(out, SeriesCheck::FirstFailure { matrix: 'A', row: 0, .. }));
}

#[test]
fn printed_symbols_parse() {
    let file = printed_file();
    for f in &file.families {
        let pair = f.printed().unwrap();
        assert_eq!(pair.a.len(), 4);
        for s in f.symbols.keys() {
            let v = printed_symbol(&f.symbols, s).unwrap();
            let marked = f.symbols[s].contains("UNDEFINED(");
            assert_eq!(v.is_none(), marked, "family {} symbol {s}", f.family);
        }
    }
    let empty: BTreeMap<String, String> = BTreeMap::new();
    assert_eq!(printed_symbol(&empty, "x").unwrap(), None);
}

fn gauss(a: &BigRat, b: &BigRat, k: u32) -> BigRat {
    (0..k).fold(BigRat::one(), |acc, j| {
        let j = BigRat::from_integer(j.into());
        acc * (a + &j) * (b + &j) / ((&j + BigRat::one()) * (&j + BigRat::one()))
    })
}

fn small_rat() -> impl Strategy<Value = BigRat> {
    (1i64..6, 1i64..5).prop_map(|(n, d)| BigRat::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Products of Gauss functions: every derived connection passes both
    /// checks, and a perturbed one fails integrability.
    #[test]
    fn gauss_products(a in small_rat(), b in small_rat(), c in small_rat(), d in small_rat(), k in 1i64..4) {
        let text = |x: &BigRat| format!("({}/{})", x.numer(), x.denom());
        let gens = [
            ThetaOperator::parse(&format!("Tl^2 - l*(Tl+{})*(Tl+{})", text(&a), text(&b))).unwrap(),
            ThetaOperator::parse(&format!("Tm^2 - m*(Tm+{})*(Tm+{})", text(&c), text(&d))).unwrap(),
        ];
        let conn = derive_with_basis(&gens, THETA_LM).unwrap();
        prop_assert_eq!(verify_integrability(&conn), Integrability::Pass);
        let s = BiPowerSeries::from_fn(10, |n, m| gauss(&a, &b, n) * gauss(&c, &d, m));
        prop_assert_eq!(verify_on_series(&conn, &s), SeriesCheck::Pass);
        let mut bad = conn.clone();
        let shift = RatFunc::constant(&param_ring(), BigRat::from_integer(k.into()));
        bad.b[3][0] = &bad.b[3][0] + &shift;
        let failed = matches!(verify_integrability(&bad), Integrability::Fail { .. });
        prop_assert!(failed);
    }
}
