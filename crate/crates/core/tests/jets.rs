use proptest::prelude::*;
use weylwalks_core::fl::{fl_expand, FLProblem};
use weylwalks_core::jet::Jet;
use weylwalks_core::Complex;

const PREC: u32 = 128;
const ORDER: usize = 6;

fn jet_from(cs: &[(f64, f64)], arity: usize) -> Jet {
    let mut j = Jet::zero(arity, ORDER, PREC).unwrap();
    let mut it = cs.iter();
    for d in 0..=ORDER {
        for k in 0..if arity == 1 { 1 } else { d + 1 } {
            let &(re, im) = it.next().unwrap();
            j.set_coeff(d - k, k, Complex::from_f64(re, im, PREC));
        }
    }
    j
}

fn distance(f: &Jet, g: &Jet) -> f64 {
    (0..=ORDER)
        .flat_map(|d| {
            f.component(d)
                .iter()
                .zip(g.component(d))
                .map(|(a, b)| (a - b).abs_f64())
        })
        .fold(0.0, f64::max)
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 28)
}

fn unit_jet() -> impl Strategy<Value = Jet> {
    coeffs().prop_map(|mut c| {
        c[0] = (1.0 + c[0].0.abs(), c[0].1);
        jet_from(&c, 2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative_and_commutative(f in coeffs(), g in coeffs(), h in coeffs()) {
        let (f, g, h) = (jet_from(&f, 2), jet_from(&g, 2), jet_from(&h, 2));
        prop_assert!(distance(&f.mul(&g).mul(&h), &f.mul(&g.mul(&h))) < 1e-25);
        prop_assert!(distance(&f.mul(&g), &g.mul(&f)) < 1e-25);
        prop_assert!(distance(&f.mul(&g.add(&h)), &f.mul(&g).add(&f.mul(&h))) < 1e-25);
    }

    #[test]
    fn reciprocal_inverts(g in unit_jet()) {
        let one = Jet::constant(Complex::one(PREC), 2, ORDER).unwrap();
        prop_assert!(distance(&g.mul(&g.reciprocal().unwrap()), &one) < 1e-20);
    }

    #[test]
    fn exp_undoes_log(g in unit_jet()) {
        let g0 = g.coeff(0, 0).clone();
        let back = g.log_normalized().unwrap().exp().unwrap().scale(&g0);
        prop_assert!(distance(&back, &g) < 1e-20);
    }

    #[test]
    fn log_of_a_product_is_a_sum(f in unit_jet(), g in unit_jet()) {
        let lhs = f.mul(&g).log_normalized().unwrap();
        let rhs = f.log_normalized().unwrap().add(&g.log_normalized().unwrap());
        prop_assert!(distance(&lhs, &rhs) < 1e-20);
    }

    /// A pure Gaussian has no corrections, and the leading term is `2π/(n√det ℋ)`.
    #[test]
    fn gaussian_constants_vanish(h11 in 0.2..5.0f64, h22 in 0.2..5.0f64, rho in -0.9..0.9f64, c in 0.1..10.0f64) {
        let h12 = rho * (h11 * h22).sqrt();
        let order = 24;
        let amp = Jet::constant(Complex::from_f64(c, 0.0, PREC), 2, order).unwrap();
        let mut phi = Jet::zero(2, order, PREC).unwrap();
        phi.set_coeff(2, 0, Complex::from_f64(h11 / 2.0, 0.0, PREC));
        phi.set_coeff(1, 1, Complex::from_f64(h12, 0.0, PREC));
        phi.set_coeff(0, 2, Complex::from_f64(h22 / 2.0, 0.0, PREC));
        let e = fl_expand(&FLProblem::new(amp, phi).unwrap(), 4).unwrap();
        prop_assert_eq!(e.first_nonzero, 0);
        prop_assert!((e.constants[0].to_f64().0 - c).abs() < 1e-25 * c);
        for cj in &e.constants[1..] {
            prop_assert!(cj.abs_f64() < 1e-12);
        }
        let n = 50.0;
        let expect = c * std::f64::consts::TAU / (n * (h11 * h22 - h12 * h12).sqrt());
        prop_assert!((e.leading(n).0 / expect - 1.0).abs() < 1e-13);
    }

    /// `∫ θ₁² e^{−nθᵀℋθ/2}` picks out `(ℋ⁻¹)₁₁ / n`.
    #[test]
    fn second_moment(h11 in 0.2..5.0f64, h22 in 0.2..5.0f64, rho in -0.9..0.9f64) {
        let h12 = rho * (h11 * h22).sqrt();
        let mut amp = Jet::zero(2, 12, PREC).unwrap();
        amp.set_coeff(2, 0, Complex::one(PREC));
        let mut phi = Jet::zero(2, 12, PREC).unwrap();
        phi.set_coeff(2, 0, Complex::from_f64(h11 / 2.0, 0.0, PREC));
        phi.set_coeff(1, 1, Complex::from_f64(h12, 0.0, PREC));
        phi.set_coeff(0, 2, Complex::from_f64(h22 / 2.0, 0.0, PREC));
        let e = fl_expand(&FLProblem::new(amp, phi).unwrap(), 2).unwrap();
        prop_assert_eq!(e.first_nonzero, 1);
        let inv11 = h22 / (h11 * h22 - h12 * h12);
        prop_assert!((e.constants[1].to_f64().0 / inv11 - 1.0).abs() < 1e-13);
    }
}

/// `e^{−n} I₀(n) = (2π)^{−1} ∫ e^{n(cos θ − 1)} dθ ~ (2πn)^{−1/2}(1 + 1/(8n) + 9/(128n²) + 75/(1024n³))`.
#[test]
fn bessel_expansion() {
    let order = 18;
    let amp = Jet::constant(Complex::one(PREC), 1, order).unwrap();
    let mut phi = Jet::zero(1, order, PREC).unwrap();
    let mut fact = 1.0f64;
    for d in 1..=order {
        fact *= d as f64;
        if d % 2 == 0 {
            let sign = if (d / 2) % 2 == 1 { 1.0 } else { -1.0 };
            phi.set_coeff(d, 0, Complex::from_f64(sign / fact, 0.0, PREC));
        }
    }
    let e = fl_expand(&FLProblem::new(amp, phi).unwrap(), 3).unwrap();
    let expect = [1.0, 1.0 / 8.0, 9.0 / 128.0, 75.0 / 1024.0];
    for (c, x) in e.constants.iter().zip(expect) {
        assert!((c.to_f64().0 - x).abs() < 1e-15, "{c} vs {x}");
    }
}

/// Two uncoupled quartic wells: the corrections of the one-variable problem carry over.
#[test]
fn separable_quartic() {
    let order = 12;
    let amp = Jet::constant(Complex::one(PREC), 2, order).unwrap();
    let mut phi = Jet::zero(2, order, PREC).unwrap();
    phi.set_coeff(2, 0, Complex::from_f64(0.5, 0.0, PREC));
    phi.set_coeff(4, 0, Complex::one(PREC));
    phi.set_coeff(0, 2, Complex::from_f64(0.5, 0.0, PREC));
    let e = fl_expand(&FLProblem::new(amp, phi).unwrap(), 2).unwrap();
    assert!((e.constants[1].to_f64().0 + 3.0).abs() < 1e-25);
    assert!((e.constants[2].to_f64().0 - 52.5).abs() < 1e-22);
}
