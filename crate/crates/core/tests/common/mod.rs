#![allow(dead_code)]

use num_rational::BigRational;
use proptest::prelude::*;
use weylwalks_core::{classify, ModelKind, Regime, Weights};

pub fn w(an: i64, ad: i64, bn: i64, bd: i64) -> Weights {
    Weights::from_fractions(an, ad, bn, bd).unwrap()
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn kind() -> impl Strategy<Value = ModelKind> {
    prop_oneof![Just(ModelKind::Tandem), Just(ModelKind::DoubleTandem)]
}

/// Positive rationals p/q with small p, q.
pub fn weight() -> impl Strategy<Value = BigRational> {
    (1i64..=12, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

pub fn below_one() -> impl Strategy<Value = BigRational> {
    (1i64..=11).prop_flat_map(|n| ((n + 1)..=12).prop_map(move |d| q(n, d)))
}

pub fn above_one() -> impl Strategy<Value = BigRational> {
    (1i64..=8).prop_flat_map(|d| ((d + 1)..=12).prop_map(move |n| q(n, d)))
}

pub fn weights() -> impl Strategy<Value = Weights> {
    (weight(), weight()).prop_map(|(a, b)| Weights::new(a, b).unwrap())
}

/// Weight pairs in a given regime, including the measure-zero lines.
pub fn in_regime(regime: Regime) -> BoxedStrategy<Weights> {
    let one = || BigRational::from_integer(1.into());
    let make = |a: BigRational, b: BigRational| Weights::new(a, b).unwrap();
    match regime {
        Regime::Balanced => Just(make(one(), one())).boxed(),
        Regime::Reluctant => (below_one(), below_one())
            .prop_map(move |(a, b)| make(a, b))
            .boxed(),
        Regime::BoundaryAStar => below_one().prop_map(move |a| make(a, one())).boxed(),
        Regime::BoundaryBStar => below_one().prop_map(move |b| make(one(), b)).boxed(),
        Regime::AxialA => above_one().prop_map(move |b| make(&b * &b, b)).boxed(),
        Regime::AxialB => above_one()
            .prop_map(move |a| make(a.clone(), &a * &a))
            .boxed(),
        r => weights()
            .prop_filter("regime", move |w| classify(w, ModelKind::Tandem) == r)
            .boxed(),
    }
}
