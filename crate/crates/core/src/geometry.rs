//! Critical points of the generating functions, minimality, dominance and
//! normal-cone membership of the diagonal direction `(1, 1, 1)`.
//!
//! Points are carried exactly as surds. The only non-real points are the
//! rotations `(ω^k·a, ω^{2k}·b)` of the smooth point, with `ω` a cube root of
//! unity. They are stored as the real base point plus exponents for the
//! phases of `x`, `y` and `t`.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};
use crate::model::{classify, exponential_growth, Model, ModelKind, Regime, Weights};
use crate::poly::{Poly, X, Y};
use crate::real::Complex;
use crate::surd::Surd;

/// A set `K ⊆ {0, 1, 2}` of denominator factors that vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Stratum(u8);

impl Stratum {
    pub const SMOOTH: Stratum = Stratum(0b001);
    pub const X_POLE: Stratum = Stratum(0b011);
    pub const Y_POLE: Stratum = Stratum(0b101);
    pub const BOTH_POLES: Stratum = Stratum(0b111);

    pub fn from_factors(factors: &[usize]) -> Self {
        Stratum(factors.iter().fold(0, |m, &k| m | (1 << k)))
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 & (1 << k) != 0
    }

    pub fn factors(self) -> Vec<usize> {
        (0..3).filter(|&k| self.contains(k)).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// All seven nonempty subsets.
    pub fn all() -> impl Iterator<Item = Stratum> {
        (1u8..8).map(Stratum)
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<alloc::string::String> =
            self.factors().iter().map(|k| format!("{k}")).collect();
        write!(f, "V{}", ks.join(","))
    }
}

/// Position of `(1, 1, 1)` relative to the open normal cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConeStatus {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub stratum: Stratum,
    /// Real coordinates `(x, y, t)` before rotation.
    pub base: [Surd; 3],
    /// Rotation exponent `k`: the point is `(ω^k x, ω^{2k} y, ω^m t)`.
    pub rotation: u8,
    /// The exponent `m` of the phase of `t`: `k` for Tandem, whose kernel
    /// picks up `ω^{−k}`, and 0 for Double Tandem, where `P = −3` there.
    pub t_rotation: u8,
    /// Exact moduli `(|x|, |y|, |t|)`.
    pub moduli: [Surd; 3],
    pub is_minimal: bool,
    pub is_positive: bool,
    /// `|xyt|⁻¹` as a float.
    pub height: f64,
    /// Cone status for minimal points on strata with at least two factors.
    pub cone: Option<ConeStatus>,
}

impl CriticalPoint {
    /// Exact `(x, y, t)` for real points.
    pub fn exact(&self) -> Option<&[Surd; 3]> {
        (self.rotation == 0).then_some(&self.base)
    }

    pub fn x(&self) -> &Surd {
        &self.base[0]
    }

    pub fn y(&self) -> &Surd {
        &self.base[1]
    }

    pub fn t(&self) -> &Surd {
        &self.base[2]
    }

    /// Exact height `|xyt|⁻¹`.
    pub fn height_exact(&self) -> Surd {
        (self.moduli[0].clone() * self.moduli[1].clone() * self.moduli[2].clone()).recip()
    }

    /// Complex coordinates at the given precision.
    pub fn coords(&self, prec: u32) -> [Complex; 3] {
        let k = self.rotation as i32;
        let w = |e: i32| Complex::cube_root_of_unity(e, prec);
        [
            &Complex::from_real(self.base[0].to_real(prec)) * &w(k),
            &Complex::from_real(self.base[1].to_real(prec)) * &w(2 * k),
            &Complex::from_real(self.base[2].to_real(prec)) * &w(self.t_rotation as i32),
        ]
    }

    pub fn has_unit_coordinate(&self) -> bool {
        self.rotation == 0 && (self.base[0].is_one() || self.base[1].is_one())
    }
}

/// The generators and coefficients of the normal-cone decomposition of `(1, 1, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalConeResult {
    /// Normalized logarithmic gradients, one per factor of the stratum.
    pub generators: Vec<[f64; 3]>,
    /// Exact coefficients `a_j` with `(1,1,1) = Σ a_j v_j`, when the system is solvable.
    pub coefficients: Option<Vec<Surd>>,
    pub status: ConeStatus,
}

/// Exact data needed at a point: the kernel `P` and its Euler derivatives.
struct Kernel {
    p: Poly,
    xp: Poly,
    yp: Poly,
}

impl Kernel {
    fn new(kind: ModelKind, weights: &Weights) -> Self {
        let p = Model::new(kind, weights.clone()).inventory().kernel();
        let xp = p.euler(X);
        let yp = p.euler(Y);
        Kernel { p, xp, yp }
    }
}

/// Every solution `(x, y, rotation)` of the stratum equations, before stratum assignment.
fn candidates(kind: ModelKind, weights: &Weights) -> Vec<(Surd, Surd, u8)> {
    let a = Surd::from_rational(weights.a().clone());
    let b = Surd::from_rational(weights.b().clone());
    let one = Surd::from_integer(1);
    let ra = Surd::sqrt_of(weights.a());
    let rb = Surd::sqrt_of(weights.b());
    let mut out = Vec::new();
    // H₀ smooth points: x·P_x = y·P_y = 0.
    out.push((a.clone(), b.clone(), 0));
    match kind {
        ModelKind::Tandem => {
            out.push((a.clone(), b.clone(), 1));
            out.push((a.clone(), b.clone(), 2));
        }
        ModelKind::DoubleTandem => {
            // x·P_x ∝ (b + y)(bx² − a²y) and y·P_y ∝ (a + x)(b²x − ay²).
            out.push((a.clone(), b.clone(), 1));
            out.push((a.clone(), b.clone(), 2));
            out.push((-a.clone(), b.clone(), 0));
            out.push((a.clone(), -b.clone(), 0));
            out.push((-a.clone(), -b.clone(), 0));
        }
    }
    // x = 1 and y·P_y = 0: y² = b²/a in both models.
    let y1 = b.clone() / ra;
    out.push((one.clone(), y1.clone(), 0));
    out.push((one.clone(), -y1, 0));
    // y = 1 and x·P_x = 0: x² = a²/b.
    let x2 = a / rb;
    out.push((x2.clone(), one.clone(), 0));
    out.push((-x2, one.clone(), 0));
    out.push((one.clone(), one, 0));
    out
}

/// Critical points of every stratum carrying points.
///
/// Each point is assigned the stratum of all factors that vanish on it, so a
/// candidate from one stratum that happens to have a unit coordinate moves to
/// the larger stratum.
pub fn critical_points(kind: ModelKind, weights: &Weights) -> Result<Vec<CriticalPoint>> {
    let kernel = Kernel::new(kind, weights);
    let mut points: Vec<CriticalPoint> = Vec::new();
    for (x, y, rotation) in candidates(kind, weights) {
        if points
            .iter()
            .any(|p| p.rotation == rotation && p.base[0] == x && p.base[1] == y)
        {
            continue;
        }
        // The kernel at a rotated point is ω^{−k}·P(a, b) for Tandem and −3 for Double Tandem.
        let (p, t_rotation) = match (rotation, kind) {
            (0, _) | (_, ModelKind::Tandem) => (kernel.p.eval2(&x, &y), rotation),
            (_, ModelKind::DoubleTandem) => (Surd::from_integer(-3), 0),
        };
        if p.is_zero() {
            return Err(Error::DegenerateDenominator);
        }
        let t = (x.clone() * y.clone() * p.clone()).recip();
        let mut factors = Vec::from([0usize]);
        if rotation == 0 && x.is_one() {
            factors.push(1);
        }
        if rotation == 0 && y.is_one() {
            factors.push(2);
        }
        let stratum = Stratum::from_factors(&factors);
        let moduli = [x.abs(), y.abs(), t.abs()];
        let is_positive = rotation == 0 && x.is_positive() && y.is_positive() && t.is_positive();
        let mut cp = CriticalPoint {
            stratum,
            base: [x, y, t],
            rotation,
            t_rotation,
            moduli,
            is_minimal: false,
            is_positive,
            height: 0.0,
            cone: None,
        };
        cp.height = cp.height_exact().to_f64();
        cp.is_minimal = is_minimal(&cp, kind, weights);
        if cp.is_minimal && cp.stratum.len() >= 2 {
            cp.cone = Some(normal_cone(&cp, kind, weights).status);
        }
        points.push(cp);
    }
    Ok(points)
}

/// Points on the strata without `H₀`.
///
/// On `{H₁ = 0}`, `{H₂ = 0}` and `{H₁ = H₂ = 0}` the logarithmic gradients
/// span only directions with a zero `t` component, so `(1, 1, 1)` is never in
/// their span and no critical point exists. The scan checks this span
/// condition directly.
pub fn pole_only_points(stratum: Stratum) -> Vec<CriticalPoint> {
    assert!(!stratum.contains(0));
    let gradients: Vec<[i32; 3]> = stratum
        .factors()
        .iter()
        .map(|&k| if k == 1 { [1, 0, 0] } else { [0, 1, 0] })
        .collect();
    let t_reachable = gradients.iter().any(|g| g[2] != 0);
    debug_assert!(!t_reachable);
    Vec::new()
}

/// Minimality: `|x| ≤ 1`, `|y| ≤ 1`, `|t| ≤ 1/(|xy|·S(1/|x|, 1/|y|))`, not all strict.
pub fn is_minimal(cp: &CriticalPoint, kind: ModelKind, weights: &Weights) -> bool {
    let kernel = Kernel::new(kind, weights);
    let one = Surd::from_integer(1);
    let [mx, my, mt] = &cp.moduli;
    let p_abs = kernel.p.eval2(mx, my);
    let bound = (mx.clone() * my.clone() * p_abs).recip();
    let cx = mx.cmp_exact(&one);
    let cy = my.cmp_exact(&one);
    let ct = mt.cmp_exact(&bound);
    if cx == Ordering::Greater || cy == Ordering::Greater || ct == Ordering::Greater {
        return false;
    }
    !(cx == Ordering::Less && cy == Ordering::Less && ct == Ordering::Less)
}

/// Exact drift components `x·P_x/P` and `y·P_y/P` at a real point.
pub fn drift(cp: &CriticalPoint, kind: ModelKind, weights: &Weights) -> [Surd; 2] {
    let kernel = Kernel::new(kind, weights);
    let [x, y, _] = &cp.base;
    let p = kernel.p.eval2(x, y);
    [kernel.xp.eval2(x, y) / p.clone(), kernel.yp.eval2(x, y) / p]
}

/// Normal cone at a minimal point and the position of `(1, 1, 1)`.
///
/// With `v₀ = (1 + x·P_x/P, 1 + y·P_y/P, 1)` and unit vectors for the pole
/// factors, the decomposition has `a₀ = 1` and `a_k = −(drift component)`.
pub fn normal_cone(cp: &CriticalPoint, kind: ModelKind, weights: &Weights) -> NormalConeResult {
    let [dx, dy] = drift(cp, kind, weights);
    let one = Surd::from_integer(1);
    let v0 = [
        (one.clone() + dx.clone()).to_f64(),
        (one.clone() + dy.clone()).to_f64(),
        1.0,
    ];
    let mut generators = Vec::from([v0]);
    let mut coefficients = Vec::from([one]);
    let mut solvable = true;
    for (k, d) in [(1usize, dx), (2usize, dy)] {
        if cp.stratum.contains(k) {
            generators.push(if k == 1 {
                [1.0, 0.0, 0.0]
            } else {
                [0.0, 1.0, 0.0]
            });
            coefficients.push(-d);
        } else if !d.is_zero() {
            solvable = false;
        }
    }
    if !solvable {
        return NormalConeResult {
            generators,
            coefficients: None,
            status: ConeStatus::Outside,
        };
    }
    let status = if coefficients.iter().any(|c| c.signum() < 0) {
        ConeStatus::Outside
    } else if coefficients.iter().any(|c| c.is_zero()) {
        ConeStatus::Boundary
    } else {
        ConeStatus::Interior
    };
    NormalConeResult {
        generators,
        coefficients: Some(coefficients),
        status,
    }
}

/// Whether the smooth critical point equations of `H₀` hold at a point with a
/// unit coordinate, which places `(1, 1, 1)` on the boundary of the cone.
pub fn cone_boundary_test(cp: &CriticalPoint, kind: ModelKind, weights: &Weights) -> bool {
    assert!(
        cp.has_unit_coordinate(),
        "the point needs a coordinate equal to 1"
    );
    let [dx, dy] = drift(cp, kind, weights);
    dx.is_zero() && dy.is_zero()
}

/// The closed-form dominant `(x, y)` of each regime.
pub fn dominant_closed_form(regime: Regime, weights: &Weights) -> (Surd, Surd) {
    let a = Surd::from_rational(weights.a().clone());
    let b = Surd::from_rational(weights.b().clone());
    let one = Surd::from_integer(1);
    match regime {
        Regime::Interior => (one.clone(), one),
        Regime::AxialA | Regime::DirectionalA => (one, b / Surd::sqrt_of(weights.a())),
        Regime::AxialB | Regime::DirectionalB => (a / Surd::sqrt_of(weights.b()), one),
        Regime::Balanced | Regime::BoundaryAStar | Regime::BoundaryBStar | Regime::Reluctant => {
            (a, b)
        }
    }
}

/// The unique positive minimal point of least height, checked against the closed form.
pub fn select_dominant(
    points: &[CriticalPoint],
    kind: ModelKind,
    weights: &Weights,
) -> Result<CriticalPoint> {
    let mut best: Option<&CriticalPoint> = None;
    for p in points.iter().filter(|p| p.is_positive && p.is_minimal) {
        best = match best {
            None => Some(p),
            Some(q) => match p.height_exact().cmp_exact(&q.height_exact()) {
                Ordering::Less => Some(p),
                Ordering::Equal => {
                    return Err(Error::Inconsistent(format!(
                        "two dominant candidates of equal height {}",
                        p.height
                    )))
                }
                Ordering::Greater => Some(q),
            },
        };
    }
    let best =
        best.ok_or_else(|| Error::Inconsistent("no positive minimal critical point".into()))?;
    let regime = classify(weights, kind);
    let (x, y) = dominant_closed_form(regime, weights);
    if best.base[0] != x || best.base[1] != y {
        return Err(Error::Inconsistent(format!(
            "dominant point ({}, {}) differs from the closed form ({x}, {y})",
            best.base[0], best.base[1]
        )));
    }
    let rho = exponential_growth(regime, weights, kind);
    if best.height_exact() != rho {
        return Err(Error::Inconsistent(format!(
            "height {} differs from growth {rho}",
            best.height_exact()
        )));
    }
    Ok(best.clone())
}

/// Critical points plus the dominant one.
pub fn dominant_point(kind: ModelKind, weights: &Weights) -> Result<CriticalPoint> {
    select_dominant(&critical_points(kind, weights)?, kind, weights)
}

/// Largest absolute residual of the stratum equations at a point.
///
/// Factors of the stratum must vanish; the remaining equations say that
/// `(1, 1, 1)` lies in the span of the logarithmic gradients.
pub fn stratum_residual(cp: &CriticalPoint, kind: ModelKind, weights: &Weights, prec: u32) -> f64 {
    let fr = crate::gf::build_gf(kind, weights);
    let [x, y, t] = cp.coords(prec);
    let pt = [x.clone(), y.clone(), t.clone()];
    let h0 = &fr.denominator_factors[0];
    let mut res: Vec<Complex> = Vec::from([h0.eval(&pt)]);
    if cp.stratum.contains(1) {
        res.push(fr.denominator_factors[1].eval(&pt));
    }
    if cp.stratum.contains(2) {
        res.push(fr.denominator_factors[2].eval(&pt));
    }
    let lx = h0.euler(X).eval(&pt);
    let ly = h0.euler(Y).eval(&pt);
    let lt = h0.euler(crate::poly::T).eval(&pt);
    if !cp.stratum.contains(1) {
        res.push(&lx - &lt);
    }
    if !cp.stratum.contains(2) {
        res.push(&ly - &lt);
    }
    res.iter().map(|r| r.abs_f64()).fold(0.0, f64::max)
}

/// Smallest singular value proxy: `|det|` of the gradients of the vanishing factors,
/// used to confirm the factorization is transverse at a point.
pub fn transversality(cp: &CriticalPoint, kind: ModelKind, weights: &Weights, prec: u32) -> f64 {
    let fr = crate::gf::build_gf(kind, weights);
    let pt = cp.coords(prec);
    let grads: Vec<[(f64, f64); 3]> = cp
        .stratum
        .factors()
        .iter()
        .map(|&k| {
            let h = &fr.denominator_factors[k];
            let g = |v: usize| h.derivative(v).eval(&pt).to_f64();
            [g(0), g(1), g(2)]
        })
        .collect();
    // Gram determinant of the complex gradient vectors.
    let n = grads.len();
    let mut gram = [[(0.0f64, 0.0f64); 3]; 3];
    for i in 0..n {
        for j in 0..n {
            let mut s = (0.0, 0.0);
            for v in 0..3 {
                let (ar, ai) = grads[i][v];
                let (br, bi) = grads[j][v];
                // a · conj(b)
                s.0 += ar * br + ai * bi;
                s.1 += ai * br - ar * bi;
            }
            gram[i][j] = s;
        }
    }
    match n {
        1 => gram[0][0].0,
        2 => {
            gram[0][0].0 * gram[1][1].0
                - (gram[0][1].0 * gram[1][0].0 - gram[0][1].1 * gram[1][0].1)
        }
        _ => {
            // Real part suffices: the Gram matrix is Hermitian and here real.
            let m = |i: usize, j: usize| gram[i][j].0;
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
    }
}

/// `t` from the closed form `(a^{5/2} − 2a)/(b(a³ − 4))` on the Tandem
/// `x = 1` stratum; it has a removable pole at `a³ = 4`.
pub fn tandem_x_stratum_t_closed_form(weights: &Weights) -> Result<Surd> {
    let a = Surd::from_rational(weights.a().clone());
    let b = Surd::from_rational(weights.b().clone());
    let ra = Surd::sqrt_of(weights.a());
    let den = b * (a.clone() * a.clone() * a.clone() - Surd::from_integer(4));
    if den.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok((a.clone() * a.clone() * ra - Surd::from_integer(2) * a) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    fn w(an: i64, ad: i64, bn: i64, bd: i64) -> Weights {
        Weights::from_fractions(an, ad, bn, bd).unwrap()
    }

    fn find<'a>(pts: &'a [CriticalPoint], x: &Surd, y: &Surd, rot: u8) -> &'a CriticalPoint {
        pts.iter()
            .find(|p| &p.base[0] == x && &p.base[1] == y && p.rotation == rot)
            .unwrap()
    }

    #[test]
    fn tandem_table_points() {
        let wt = w(2, 1, 3, 1);
        let pts = critical_points(ModelKind::Tandem, &wt).unwrap();
        let smooth = find(&pts, &Surd::from_integer(2), &Surd::from_integer(3), 0);
        assert_eq!(
            smooth.t(),
            &Surd::from_rational(BigRational::new(1.into(), 18.into()))
        );
        assert!(!smooth.is_minimal);
        let corner = find(&pts, &Surd::from_integer(1), &Surd::from_integer(1), 0);
        // 1/(a + b/a + 1/b) = 6/23
        assert_eq!(
            corner.t(),
            &Surd::from_rational(BigRational::new(6.into(), 23.into()))
        );
        assert_eq!(corner.stratum, Stratum::BOTH_POLES);
        assert!(corner.is_minimal);
        for p in &pts {
            assert!(
                stratum_residual(p, ModelKind::Tandem, &wt, 106) < 1e-25,
                "{p:?}"
            );
        }
    }

    #[test]
    fn minimality_examples() {
        let pts = critical_points(ModelKind::Tandem, &w(1, 2, 1, 2)).unwrap();
        let p = find(
            &pts,
            &Surd::from_rational(half()),
            &Surd::from_rational(half()),
            0,
        );
        assert!(p.is_minimal);
        assert_eq!(
            p.t(),
            &Surd::from_rational(BigRational::new(4.into(), 3.into()))
        );
        // Rotated companions have the same moduli and are minimal too.
        assert!(
            find(
                &pts,
                &Surd::from_rational(half()),
                &Surd::from_rational(half()),
                1
            )
            .is_minimal
        );
    }

    #[test]
    fn dominant_examples() {
        let d = dominant_point(ModelKind::Tandem, &w(4, 1, 1, 1)).unwrap();
        assert_eq!(d.base[1], Surd::from_rational(half()));
        assert_eq!(d.height_exact(), Surd::from_integer(5));
        let axial = dominant_point(ModelKind::Tandem, &w(4, 1, 2, 1)).unwrap();
        assert!(axial.x().is_one() && axial.y().is_one());
        assert_eq!(axial.stratum, Stratum::BOTH_POLES);
        let dt = dominant_point(ModelKind::DoubleTandem, &w(4, 1, 2, 1)).unwrap();
        assert_eq!(
            dt.height_exact(),
            Surd::from_rational(BigRational::new(37.into(), 4.into()))
        );
    }

    #[test]
    fn cone_examples() {
        let t = ModelKind::Tandem;
        let d = dominant_point(t, &w(4, 1, 1, 1)).unwrap();
        assert_eq!(
            normal_cone(&d, t, &w(4, 1, 1, 1)).status,
            ConeStatus::Interior
        );
        let s = dominant_point(t, &w(1, 1, 1, 4)).unwrap();
        assert_eq!(
            normal_cone(&s, t, &w(1, 1, 1, 4)).status,
            ConeStatus::Boundary
        );
        assert!(cone_boundary_test(&s, t, &w(1, 1, 1, 4)));
        let b = dominant_point(t, &w(1, 1, 1, 1)).unwrap();
        assert_eq!(
            b.t(),
            &Surd::from_rational(BigRational::new(1.into(), 3.into()))
        );
        assert_eq!(
            normal_cone(&b, t, &w(1, 1, 1, 1)).status,
            ConeStatus::Boundary
        );
        assert!(cone_boundary_test(&b, t, &w(1, 1, 1, 1)));
        let ax = dominant_point(t, &w(4, 1, 2, 1)).unwrap();
        assert!(!cone_boundary_test(&ax, t, &w(4, 1, 2, 1)));
        // (1, b/√a) with a = 2, b = 1: the x drift −a + b/(a·y) is nonzero.
        let p = dominant_point(t, &w(2, 1, 1, 1)).unwrap();
        assert!(!cone_boundary_test(&p, t, &w(2, 1, 1, 1)));
        assert!(drift(&p, t, &w(2, 1, 1, 1))[1].is_zero());
    }

    #[test]
    fn pole_strata_are_empty() {
        for s in Stratum::all().filter(|s| !s.contains(0)) {
            assert!(pole_only_points(s).is_empty());
        }
    }

    #[test]
    fn closed_form_t_has_removable_pole() {
        let wt = w(2, 1, 1, 1);
        let pts = critical_points(ModelKind::Tandem, &wt).unwrap();
        let p = pts
            .iter()
            .find(|p| p.stratum == Stratum::X_POLE && p.y().is_positive())
            .unwrap();
        assert_eq!(&tandem_x_stratum_t_closed_form(&wt).unwrap(), p.t());
    }
}
