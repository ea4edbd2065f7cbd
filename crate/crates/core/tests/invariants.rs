use flatamp::lattice::{det, enumerate_norm};
use flatamp::lie::{iwasawa_a, iwasawa_of, kostant_gap, m_elements, random_traceless, CartanCovec, CartanVec, GroupElement, RotationElement};
use flatamp::rng;
use flatamp::spherical::spherical_auto;
use proptest::prelude::*;

fn group_element(seed: u64, r: f64) -> GroupElement {
    let mut g = rng::stream(seed, "tests.group");
    GroupElement::exp_of(&random_traceless(&mut g, r)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iwasawa_reassembles(seed in any::<u64>(), r in 0.1f64..1.5) {
        let g = group_element(seed, r);
        let c = iwasawa_of(g.matrix()).unwrap();
        prop_assert!((c.reassemble() - g.matrix()).norm() <= 1e-10 * g.matrix().norm());
    }

    #[test]
    fn a_part_is_left_m_invariant(seed in any::<u64>(), i in 0usize..4) {
        let g = group_element(seed, 1.0);
        let m = m_elements()[i];
        let (a, b) = (iwasawa_a(g.matrix()), iwasawa_a(&(m * g.matrix())));
        prop_assert!(a.sub(&b).norm() <= 1e-10);
    }

    #[test]
    fn kostant_gap_is_nonnegative(seed in any::<u64>(), x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let k = RotationElement::random(&mut rng::stream(seed, "tests.rotation"));
        let nu = CartanCovec::from_coords(x, y);
        prop_assert!(kostant_gap(&nu, &k) >= -1e-12 * (1.0 + nu.norm() * nu.norm()));
    }

    #[test]
    fn spherical_function_is_one_at_identity(x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let e = spherical_auto(&CartanCovec::from_coords(x, y), &CartanVec::ZERO, 1e-10).unwrap();
        prop_assert!((e.value.re - 1.0).abs() <= 1e-9 && e.value.im.abs() <= 1e-9);
    }
}

#[test]
fn enumerated_matrices_have_the_requested_determinant() {
    for n in 1..=6u64 {
        let xs = enumerate_norm(n, 2).unwrap();
        assert!(!xs.is_empty());
        assert!(xs.iter().all(|x| det(x).unsigned_abs() == n));
    }
}
