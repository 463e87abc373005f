use num::{BigInt, One, Signed};
use proptest::prelude::*;

use k3lab::exactcore::BigRat;
use k3lab::lattice::*;
use k3lab::fixtures::*;

fn file() -> LatticeFile {
    load(&fixture_dir(), "lattices.json").unwrap()
}

fn det_of(id: &str) -> BigInt {
    let f = file();
    let e = f.lattice(id).unwrap();
    let (spec, _) = lattice_spec(&e.fibers, &e.sections).unwrap();
    determinant(build_gram(&spec).unwrap().rows()).unwrap()
}

fn canonical(tail: &[Vec<i64>]) -> GramMatrix {
    e8().direct_sum(&e8()).direct_sum(&GramMatrix::from_i64(tail).unwrap())
}

#[test]
fn printed_matrices_have_determinant_minus_nine() {
    for fam in &file().families {
        let m = fam.printed().unwrap();
        assert_eq!(determinant(m.rows()).unwrap(), BigInt::from(-9), "family {}", fam.id);
        assert_eq!(signature(&m).unwrap(), (1, 17));
    }
}

#[test]
fn builder_reproduces_printed_matrices() {
    for fam in &file().families {
        let built = build_gram(&fam.builder_spec().unwrap()).unwrap();
        assert_eq!(built.permuted(&fam.permutation), fam.printed().unwrap(), "family {}", fam.id);
    }
}

#[test]
fn congruences_to_canonical_forms() {
    for fam in &file().families {
        let out = verify_congruence(&fam.printed().unwrap(), &to_int_matrix(&fam.u), &canonical(&fam.ns_form)).unwrap();
        assert_eq!(out, CongruenceOutcome::Pass, "family {}", fam.id);
    }
}

#[test]
fn transcendental_forms() {
    for fam in &file().families {
        let a = GramMatrix::from_i64(&fam.tr).unwrap();
        let ns = fam.printed().unwrap();
        assert_eq!(signature(&a).unwrap(), (2, 2));
        assert_eq!(determinant(a.rows()).unwrap().abs(), BigInt::from(9));
        assert_eq!(discriminant_group(&a).unwrap(), discriminant_group(&ns).unwrap(), "family {}", fam.id);
    }
    let expect = |id: &str| discriminant_group(&file().family(id).unwrap().printed().unwrap()).unwrap();
    assert_eq!(expect("1"), vec![BigInt::from(3), BigInt::from(3)]);
    assert_eq!(expect("2"), vec![BigInt::from(9)]);
    assert_eq!(expect("3"), vec![BigInt::from(9)]);
}

#[test]
fn dual_polytope_forms_equal_transcendental_tails() {
    let f = file();
    for (poly, fam) in [("P2", "2"), ("P3", "3")] {
        let tr = &f.family(fam).unwrap().tr;
        let tail: Vec<Vec<i64>> = tr[2..].iter().map(|r| r[2..].to_vec()).collect();
        assert_eq!(&tail, &f.table3[poly]);
    }
}

#[test]
fn named_lattice_determinants() {
    let cases = [
        ("T1", 36),
        ("L1", -9),
        ("L1~.a1", 12),
        ("L1~.a4", -30),
        ("L1~.a7", 6),
        ("T2", 44),
        ("L2", -9),
        ("L2~.prose", -72),
        ("L2~.specialization", -38),
        ("T3", 40),
        ("L3'", -36),
        ("L3'~.RP0", -16),
        ("L3'~.RP1", -112),
        ("L3", -9),
    ];
    for (id, d) in cases {
        assert_eq!(det_of(id), BigInt::from(d), "{id}");
    }
}

#[test]
fn torsion_candidate_determinant_is_linear_in_k() {
    let f = file();
    let e = f.lattice("T1~").unwrap();
    let (spec, param) = lattice_spec(&e.fibers, &e.sections).unwrap();
    let scan = tilde_determinant_scan(&spec, param.unwrap(), -3..=3).unwrap();
    let fit = fit_polynomial(&scan, 2).unwrap();
    let c = |n: i64| BigRat::from_integer(n.into());
    assert_eq!(fit, vec![c(-72), c(-72), c(0)]);
}

#[test]
fn trivial_lattice_signs_follow_the_signature() {
    // (1, 16): the sign of the determinant is (-1)^16
    for id in ["T1", "T2", "T3"] {
        let f = file();
        let e = f.lattice(id).unwrap();
        let (spec, _) = lattice_spec(&e.fibers, &e.sections).unwrap();
        let g = build_gram(&spec).unwrap();
        assert_eq!(signature(&g).unwrap(), (1, 16));
        assert!(determinant(g.rows()).unwrap().is_positive());
    }
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u: IntMatrix = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for r in u.iter_mut() {
            let v = &r[j] * k;
            r[i] += v;
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_invariant_under_unimodular_change(ops in prop::collection::vec((0usize..18, 0usize..18, -2i64..=2), 0..12)) {
        let m = file().family("1").unwrap().printed().unwrap();
        let u = unimodular(18, &ops);
        prop_assert!(determinant(&u).unwrap().abs().is_one());
        let t: IntMatrix = (0..18).map(|j| u.iter().map(|r| r[j].clone()).collect()).collect();
        let n = GramMatrix::new(mat_mul(&mat_mul(&t, m.rows()), &u)).unwrap();
        prop_assert_eq!(determinant(n.rows()).unwrap(), BigInt::from(-9));
        prop_assert_eq!(verify_congruence(&m, &u, &n).unwrap(), CongruenceOutcome::Pass);
        prop_assert_eq!(signature(&n).unwrap(), (1, 17));
    }
}
