mod common;

use common::*;
use proptest::prelude::*;
use weylwalks_core::{classify, exponential_growth, growth_of, ModelKind, Regime, Surd, Weights};

fn both() -> [ModelKind; 2] {
    [ModelKind::Tandem, ModelKind::DoubleTandem]
}

#[test]
fn known_growth_values() {
    assert_eq!(
        growth_of(&w(1, 1, 1, 1), ModelKind::Tandem),
        Surd::from_integer(3)
    );
    assert_eq!(
        growth_of(&w(1, 1, 1, 1), ModelKind::DoubleTandem),
        Surd::from_integer(6)
    );
    assert_eq!(
        growth_of(&w(4, 1, 2, 1), ModelKind::Tandem),
        Surd::from_integer(5)
    );
    assert_eq!(
        growth_of(&w(4, 1, 2, 1), ModelKind::DoubleTandem),
        Surd::from_rational(q(37, 4))
    );
    // (1, 1/4) lies in a ≤ 1, b ≤ 1, where the growth is 3, not the B-directional 2√b + 1/b = 5.
    assert_eq!(
        growth_of(&w(1, 1, 1, 4), ModelKind::Tandem),
        Surd::from_integer(3)
    );
}

proptest! {
    #[test]
    fn regimes_partition_the_quadrant(w in weights()) {
        let r = classify(&w, ModelKind::Tandem);
        prop_assert_eq!(r, classify(&w, ModelKind::DoubleTandem));
        prop_assert_eq!(r.conjectured(), matches!(r, Regime::BoundaryAStar | Regime::BoundaryBStar));
        prop_assert_eq!(r.name().parse::<Regime>().unwrap(), r);
    }

    #[test]
    fn swapping_weights_mirrors_the_regime(w in weights()) {
        let mirror = |r: Regime| match r {
            Regime::AxialA => Regime::AxialB,
            Regime::AxialB => Regime::AxialA,
            Regime::DirectionalA => Regime::DirectionalB,
            Regime::DirectionalB => Regime::DirectionalA,
            Regime::BoundaryAStar => Regime::BoundaryBStar,
            Regime::BoundaryBStar => Regime::BoundaryAStar,
            r => r,
        };
        prop_assert_eq!(classify(&w.swapped(), ModelKind::Tandem), mirror(classify(&w, ModelKind::Tandem)));
        // The Double Tandem step set is symmetric, so its growth is too.
        prop_assert_eq!(growth_of(&w.swapped(), ModelKind::DoubleTandem), growth_of(&w, ModelKind::DoubleTandem));
    }

    #[test]
    fn growth_is_continuous_across_a_equals_b_squared(b in above_one()) {
        let w = Weights::new(&b * &b, b).unwrap();
        for k in both() {
            let g = exponential_growth(Regime::Interior, &w, k);
            prop_assert_eq!(&g, &exponential_growth(Regime::DirectionalA, &w, k));
            prop_assert_eq!(&g, &exponential_growth(Regime::AxialA, &w, k));
        }
    }

    #[test]
    fn growth_is_continuous_across_b_equals_a_squared(a in above_one()) {
        let w = Weights::new(a.clone(), &a * &a).unwrap();
        for k in both() {
            let g = exponential_growth(Regime::Interior, &w, k);
            prop_assert_eq!(&g, &exponential_growth(Regime::DirectionalB, &w, k));
        }
    }

    #[test]
    fn growth_is_continuous_on_the_unit_lines(t in below_one()) {
        let one = num_rational::BigRational::from_integer(1.into());
        for k in both() {
            // The starred lines border the reluctant square.
            let wb = Weights::new(one.clone(), t.clone()).unwrap();
            prop_assert_eq!(exponential_growth(Regime::Reluctant, &wb, k), exponential_growth(Regime::BoundaryBStar, &wb, k));
            let wa = Weights::new(t.clone(), one.clone()).unwrap();
            prop_assert_eq!(exponential_growth(Regime::Reluctant, &wa, k), exponential_growth(Regime::BoundaryAStar, &wa, k));
        }
        let w11 = Weights::new(one.clone(), one.clone()).unwrap();
        for k in both() {
            for r in [Regime::Interior, Regime::DirectionalA, Regime::DirectionalB, Regime::Reluctant] {
                prop_assert_eq!(exponential_growth(r, &w11, k), exponential_growth(Regime::Balanced, &w11, k));
            }
        }
    }
}
