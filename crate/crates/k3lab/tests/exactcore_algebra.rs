use std::collections::BTreeMap;

use num::{One, Zero};
use proptest::prelude::*;

use k3lab::exactcore::{gcd, parse_poly, BigRat, Exp, MultiPoly, RatFunc, Ring};

fn ring() -> Ring {
    Ring::new(&["x", "y", "z"])
}

fn p(s: &str) -> MultiPoly {
    parse_poly(s, &ring()).unwrap()
}

fn poly(max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..=5, 1i64..=3), 0..max_terms).prop_map(|terms| {
        MultiPoly::from_terms(
            &ring(),
            terms.into_iter().map(|((a, b, c), n, d)| (Exp(vec![a, b, c]), BigRat::new(n.into(), d.into()))),
        )
    })
}

fn nonzero(max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    poly(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

#[test]
fn substitution_examples() {
    let r = Ring::new(&["z"]);
    let z = MultiPoly::var(&r, "z").unwrap();
    let mut map = BTreeMap::new();
    map.insert("x".to_string(), RatFunc::new(MultiPoly::one(&r), z.clone()).unwrap());
    map.insert("y".to_string(), RatFunc::from_poly(z.clone()));
    let src = parse_poly("x + y", &Ring::new(&["x", "y"])).unwrap();
    let out = src.substitute(&map, &r).unwrap();
    assert_eq!(out, RatFunc::new(parse_poly("1 + z^2", &r).unwrap(), z).unwrap());
    let id: BTreeMap<String, RatFunc> = BTreeMap::new();
    let q = p("x^2*y - 3*z + 1/2");
    assert_eq!(q.substitute(&id, &ring()).unwrap(), RatFunc::from_poly(q.clone()));
    let mut bad = BTreeMap::new();
    bad.insert("x".to_string(), RatFunc::from_parts_unchecked(MultiPoly::one(&ring()), MultiPoly::zero(&ring())));
    assert!(q.substitute(&bad, &ring()).is_err());
}

#[test]
fn division_examples() {
    assert_eq!(p("x^2 - y^2").exact_divide(&p("x - y")).unwrap(), Some(p("x + y")));
    assert_eq!(p("x^2 + 1").exact_divide(&p("x - y")).unwrap(), None);
    assert!(p("x").exact_divide(&p("0")).is_err());
}

#[test]
fn order_examples() {
    let t = Ring::new(&["t"]);
    let q = parse_poly("t^3*(t - 1)", &t).unwrap();
    assert_eq!(q.vanishing_order("t", &BigRat::zero()).unwrap(), 3);
    assert_eq!(q.vanishing_order("t", &BigRat::one()).unwrap(), 1);
    assert!(MultiPoly::zero(&t).vanishing_order("t", &BigRat::zero()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(5), b in poly(5), c in poly(5)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_division_recovers_the_factor(a in poly(5), b in nonzero(4)) {
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), Some(a));
    }

    #[test]
    fn substitution_is_multiplicative(a in poly(4), b in poly(4), f in nonzero(3), g in nonzero(3)) {
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), RatFunc::new(f, g.clone()).unwrap());
        map.insert("y".to_string(), RatFunc::from_poly(&g + &MultiPoly::from_int(&ring(), 1)));
        let ab = (&a * &b).substitute(&map, &ring()).unwrap();
        let sa = a.substitute(&map, &ring()).unwrap();
        let sb = b.substitute(&map, &ring()).unwrap();
        prop_assert_eq!(ab, &sa * &sb);
    }

    #[test]
    fn vanishing_order_is_additive(a in nonzero(4), b in nonzero(4), c in -2i64..=2) {
        let c = BigRat::from_integer(c.into());
        let oa = a.vanishing_order("x", &c).unwrap();
        let ob = b.vanishing_order("x", &c).unwrap();
        prop_assert_eq!((&a * &b).vanishing_order("x", &c).unwrap(), oa + ob);
    }

    #[test]
    fn gcd_divides_both_and_keeps_common_factors(a in nonzero(3), b in nonzero(3), g in nonzero(3)) {
        let (ga, gb) = (&a * &g, &b * &g);
        let d = gcd(&ga, &gb);
        prop_assert!(ga.exact_divide(&d).unwrap().is_some());
        prop_assert!(gb.exact_divide(&d).unwrap().is_some());
        prop_assert!(d.exact_divide(&g.primitive()).unwrap().is_some() || g.is_constant());
    }

    #[test]
    fn text_round_trip(a in poly(6)) {
        prop_assert_eq!(parse_poly(&a.to_string(), &ring()).unwrap(), a);
    }
}
