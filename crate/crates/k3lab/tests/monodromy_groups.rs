use std::sync::OnceLock;

use num::Zero;
use proptest::prelude::*;

use k3lab::exactcore::BigRat;
use k3lab::fixtures::*;
use k3lab::monodromy::*;

struct Family {
    space: QuadraticSpace,
    reference: Reference,
    members: Vec<ProjectiveTransform>,
}

const BOUND: i64 = 2;
const CAP: usize = 4000;

fn families() -> &'static Vec<Family> {
    static CELL: OnceLock<Vec<Family>> = OnceLock::new();
    CELL.get_or_init(|| {
        let file: LatticeFile = load(&fixture_dir(), "lattices.json").unwrap();
        file.families
            .iter()
            .map(|f| {
                let space = QuadraticSpace::from_i64(&f.tr).unwrap();
                let reference = Reference::from_entry(&space, &f.domain).unwrap();
                let members = search_members(&space, BOUND, CAP);
                Family { space, reference, members }
            })
            .collect()
    })
}

fn epsilon(f: &Family, g: &ProjectiveTransform) -> i8 {
    if in_po_plus(&f.space, g, &f.reference).unwrap() {
        1
    } else {
        -1
    }
}

#[test]
fn reference_points_lie_in_the_domain() {
    for f in families() {
        assert!(domain_member(&f.space, &f.reference.point));
        assert_eq!(component_orientation(&f.space, &f.reference, &f.reference.point).unwrap(), 1);
        assert_eq!(component_orientation(&f.space, &f.reference, &f.reference.point.conjugate()).unwrap(), -1);
    }
}

#[test]
fn search_reports_members_of_both_kinds() {
    for f in families() {
        let n = f.members.len();
        let plus = f.members.iter().filter(|g| epsilon(f, g) == 1).count();
        eprintln!("members with entries in [-{BOUND}, {BOUND}]: {n}, preserving the component: {plus}");
        assert!(n < CAP);
        assert!(f.members.iter().all(|g| in_po(&f.space, g)));
        assert!(f.members.contains(&ProjectiveTransform::scalar(-1)));
        assert!(plus > 0 && plus < n);
    }
}

#[test]
fn inverse_has_the_same_sign() {
    for f in families() {
        for g in f.members.iter().take(200) {
            let inv = g.inverse().unwrap();
            assert!(in_po(&f.space, &inv));
            assert!(g.mul(&inv) == ProjectiveTransform::identity());
            assert_eq!(epsilon(f, g), epsilon(f, &inv));
        }
    }
}

fn nonzero_rat() -> impl Strategy<Value = BigRat> {
    (-9i64..=9, 1i64..=7).prop_map(|(n, d)| BigRat::new(n.into(), d.into()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_under_product_and_inverse(fam in 0usize..3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let f = &families()[fam];
        let g = i.get(&f.members);
        let h = j.get(&f.members);
        prop_assert!(in_po(&f.space, &g.mul(h)));
        prop_assert!(in_po(&f.space, &g.inverse().unwrap()));
        prop_assert!(in_po(&f.space, &g.mul(&h.inverse().unwrap())));
    }

    #[test]
    fn sign_is_multiplicative(fam in 0usize..3, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let f = &families()[fam];
        let g = i.get(&f.members);
        let h = j.get(&f.members);
        prop_assert_eq!(epsilon(f, &g.mul(h)), epsilon(f, g) * epsilon(f, h));
    }

    #[test]
    fn orientation_ignores_rescaling(fam in 0usize..3, i in any::<prop::sample::Index>(), a in nonzero_rat(), b in nonzero_rat()) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let f = &families()[fam];
        let p = f.reference.point.transformed(i.get(&f.members));
        let q = p.rescaled(&a, &b);
        prop_assert!(domain_member(&f.space, &q));
        prop_assert_eq!(
            component_orientation(&f.space, &f.reference, &p).unwrap(),
            component_orientation(&f.space, &f.reference, &q).unwrap()
        );
        let minus = p.transformed(&ProjectiveTransform::scalar(-1));
        prop_assert_eq!(
            component_orientation(&f.space, &f.reference, &minus).unwrap(),
            component_orientation(&f.space, &f.reference, &p).unwrap()
        );
    }
}
