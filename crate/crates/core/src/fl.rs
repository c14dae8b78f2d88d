//! Fourier–Laplace asymptotics of the diagonal coefficients.
//!
//! After the `t` integration the coefficient is the torus integral
//!
//! ```text
//! q(n) = (2π)^{-2} ∫∫ A(x, y) · P(x, y)^n dθ,   A = c·G / ((1−x)(1−y)·xy),
//! ```
//!
//! with `x = |x|e^{iθ₁}`, `y = |y|e^{iθ₂}` and `c = 1/(a³b³)`. Poles at `x = 1`
//! or `y = 1` are handled by residues, exactly when the kernel decreases
//! across the pole, and by a telescoping split of the numerator when the
//! saddle sits on the pole. Each remaining piece is a saddle integral of
//! arity 0, 1 or 2 expanded by [`fl_expand`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{critical_points, select_dominant, CriticalPoint};
use crate::gf::build_gf;
use crate::jet::{amplitude_jet, phase_jet, Jet, MAX_ORDER};
use crate::model::{classify, Model, ModelKind, Regime, Weights};
use crate::poly::{Poly, X, Y};
use crate::real::{Complex, Real, DEFAULT_PRECISION};
use crate::surd::Surd;

/// Relative threshold below which a constant `C_j` counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-9;

/// Largest `j` scanned by the pipeline; `6·j` must fit in the jet order.
pub const MAX_J: usize = MAX_ORDER / 6;

/// A saddle integral `∫ A(θ) e^{−nφ(θ)} dθ` over a neighbourhood of `0 ∈ ℝ^k`.
#[derive(Clone, Debug)]
pub struct FLProblem {
    pub amplitude: Jet,
    pub phase: Jet,
    pub arity: usize,
    /// Row-major `k × k`.
    pub hessian: Vec<Complex>,
    pub order: usize,
}

fn det(h: &[Complex], k: usize) -> Complex {
    if k == 1 {
        h[0].clone()
    } else {
        &(&h[0] * &h[3]) - &(&h[1] * &h[2])
    }
}

fn inverse(h: &[Complex], k: usize) -> Vec<Complex> {
    let d = det(h, k).recip();
    if k == 1 {
        vec![d]
    } else {
        vec![&h[3] * &d, -&(&h[1] * &d), -&(&h[2] * &d), &h[0] * &d]
    }
}

/// `det(ℋ)^{−1/2}` as the product of principal square roots of the eigenvalues.
fn det_inv_sqrt(h: &[Complex], k: usize, prec: u32) -> Complex {
    if k == 1 {
        return h[0].sqrt().recip();
    }
    let tr = &h[0] + &h[3];
    let d = det(h, k);
    let four = Complex::from_real(Real::from_i64(4, prec));
    let disc = (&(&tr * &tr) - &(&four * &d)).sqrt();
    let half = Complex::from_real(Real::from_i64(1, prec).mul_pow2(-1));
    let l1 = &(&tr + &disc) * &half;
    let l2 = &(&tr - &disc) * &half;
    (&l1.sqrt() * &l2.sqrt()).recip()
}

/// Largest coefficient of degree at most `deg`.
fn norm(j: &Jet, deg: usize) -> f64 {
    (0..=j.order().min(deg))
        .flat_map(|d| j.component(d).iter().map(|c| c.abs_f64()))
        .fold(0.0, f64::max)
}

impl FLProblem {
    /// Checks that the phase has a nondegenerate critical point at the origin
    /// with nonnegative real part nearby.
    pub fn new(amplitude: Jet, phase: Jet) -> Result<Self> {
        let arity = phase.arity();
        if amplitude.arity() != arity {
            return Err(Error::Inconsistent(
                "amplitude and phase arity differ".into(),
            ));
        }
        let order = amplitude.order().min(phase.order());
        if phase.coeff(0, 0).abs_f64() > 1e-20 {
            return Err(Error::NotCritical {
                gradient: phase.coeff(0, 0).abs_f64(),
            });
        }
        let grad = phase
            .gradient()
            .iter()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max);
        if grad > 1e-20 * (1.0 + norm(&phase, 2)) {
            return Err(Error::NotCritical { gradient: grad });
        }
        let hessian = phase.hessian();
        let scale = hessian
            .iter()
            .map(|c| c.abs_f64())
            .fold(0.0, f64::max)
            .max(1.0);
        if det(&hessian, arity).abs_f64() <= 1e-12 * libm::pow(scale, arity as f64) {
            return Err(Error::SingularHessian);
        }
        let p = FLProblem {
            amplitude,
            phase,
            arity,
            hessian,
            order,
        };
        if !p.phase_nonnegative_nearby() {
            return Err(Error::Inconsistent(
                "the phase has negative real part near the saddle".into(),
            ));
        }
        Ok(p)
    }

    /// Samples `Re φ` on a small grid using the quadratic and cubic terms.
    fn phase_nonnegative_nearby(&self) -> bool {
        let r = 1e-3;
        let steps = 8;
        let top = self.phase.order().min(3);
        for s in 0..steps {
            let ang = core::f64::consts::TAU * s as f64 / steps as f64;
            let th = if self.arity == 1 {
                [if libm::cos(ang) < 0.0 { -r } else { r }, 0.0]
            } else {
                [r * libm::cos(ang), r * libm::sin(ang)]
            };
            let mut re = 0.0;
            for d in 2..=top {
                for (j, c) in self.phase.component(d).iter().enumerate() {
                    let i = d - j;
                    re += c.to_f64().0 * libm::pow(th[0], i as f64) * libm::pow(th[1], j as f64);
                }
            }
            if re < -1e-12 * r * r {
                return false;
            }
        }
        true
    }
}

/// Constants `C_0, …, C_jmax` of the saddle expansion and the first nonzero index.
#[derive(Clone, Debug)]
pub struct FLExpansion {
    pub constants: Vec<Complex>,
    pub first_nonzero: usize,
    pub arity: usize,
    /// `det(ℋ)^{−1/2}`.
    pub det_inv_sqrt: Complex,
    /// Zero threshold for each `C_j`, scaled by the amplitude coefficients `C_j` reads.
    pub thresholds: Vec<f64>,
}

impl FLExpansion {
    /// `(2π/n)^{k/2} · det(ℋ)^{−1/2}`.
    pub fn prefactor(&self, n: f64) -> (f64, f64) {
        let s = libm::pow(core::f64::consts::TAU / n, self.arity as f64 / 2.0);
        let (re, im) = self.det_inv_sqrt.to_f64();
        (s * re, s * im)
    }

    /// The leading term `(2π/n)^{k/2}·det^{−1/2}·C_{j*}·n^{−j*}`.
    pub fn leading(&self, n: f64) -> (f64, f64) {
        let (pr, pi) = self.prefactor(n);
        let (cr, ci) = self.constants[self.first_nonzero].to_f64();
        let s = libm::pow(n, -(self.first_nonzero as f64));
        ((pr * cr - pi * ci) * s, (pr * ci + pi * cr) * s)
    }
}

fn factorial(k: usize, prec: u32) -> Real {
    (1..=k).fold(Real::one(prec), |acc, i| {
        acc * Real::from_i64(i as i64, prec)
    })
}

/// All constants `C_0..=C_jmax` at the problem's working precision.
fn constants(p: &FLProblem, jmax: usize) -> Result<Vec<Complex>> {
    let need = 6 * jmax;
    if need > p.order {
        return Err(Error::OrderExhausted { order: need });
    }
    let prec = p.phase.precision();
    let a = p.amplitude.truncate(need);
    let under = p.phase.truncate(need).without_quadratic();
    let m = inverse(&p.hessian, p.arity);
    let mut m_full = m.clone();
    if p.arity == 1 {
        m_full.extend([
            Complex::zero(prec),
            Complex::zero(prec),
            Complex::zero(prec),
        ]);
    }
    // A·φ̲^ℓ for ℓ ≤ 2·jmax.
    let mut terms = vec![a.clone()];
    for _ in 1..=2 * jmax {
        let next = terms.last().unwrap().mul(&under);
        terms.push(next);
    }
    let mut out = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let mut acc = Complex::zero(prec);
        for (l, f) in terms.iter().enumerate().take(2 * j + 1) {
            let d = f.apply_operator_power(&m_full, l + j);
            let den = Real::one(prec).mul_pow2((l + j) as i64)
                * factorial(l, prec)
                * factorial(l + j, prec);
            let t = d.scale(&den.recip());
            acc = if l % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        out.push(acc);
    }
    Ok(out)
}

/// Expands the saddle integral up to `C_jmax` and locates the first nonzero constant.
pub fn fl_expand(p: &FLProblem, jmax: usize) -> Result<FLExpansion> {
    let cs = constants(p, jmax)?;
    // C_j sees the amplitude only through its terms of degree ≤ 2j. Scaling by
    // the whole jet would let fast-growing high-order terms near a pole swamp it.
    let thresholds: Vec<f64> = (0..=jmax)
        .map(|j| ZERO_THRESHOLD * norm(&p.amplitude, 2 * j).max(1.0))
        .collect();
    let first_nonzero = cs
        .iter()
        .zip(&thresholds)
        .position(|(c, t)| c.abs_f64() >= *t)
        .ok_or(Error::OrderExhausted { order: 6 * jmax })?;
    Ok(FLExpansion {
        constants: cs,
        first_nonzero,
        arity: p.arity,
        det_inv_sqrt: det_inv_sqrt(&p.hessian, p.arity, p.phase.precision()),
        thresholds,
    })
}

/// Expands with the zero verdicts confirmed by a second build at doubled precision.
///
/// `build(prec, order)` must produce the same problem at any precision.
pub fn fl_expand_checked(
    build: impl Fn(u32, usize) -> Result<FLProblem>,
    prec: u32,
    j_start: usize,
) -> Result<FLExpansion> {
    let mut jmax = j_start.max(1);
    loop {
        let order = 6 * jmax;
        let lo = build(prec, order)?;
        match fl_expand(&lo, jmax) {
            Ok(e) => {
                let hi = build(2 * prec, order)?;
                let check = constants(&hi, e.first_nonzero)?;
                for (j, c) in check.iter().enumerate() {
                    let zero = c.abs_f64() < e.thresholds[j];
                    if zero != (j < e.first_nonzero) {
                        return Err(Error::UnstableZeroTest { index: j });
                    }
                }
                return Ok(e);
            }
            Err(Error::OrderExhausted { .. }) if jmax < MAX_J => jmax += 1,
            Err(e) => return Err(e),
        }
    }
}

/// First `j` that can be nonzero when the amplitude vanishes to order `k`.
pub fn vanishing_order_bound(k: u32) -> u32 {
    k.div_ceil(2)
}

/// Exact vanishing order of `G` at a real point.
pub fn numerator_vanishing_order(
    kind: ModelKind,
    weights: &Weights,
    x: &Surd,
    y: &Surd,
) -> Option<u32> {
    let g = build_gf(kind, weights).numerator_product();
    g.vanishing_order(x, y, |s: &Surd| s.is_zero())
}

/// One summand of the integrand after residues and splits.
///
/// The integrand is `c·N(x, y) / (x y · Π_{pole} (1 − v)) · P^n`, with the
/// variables in `fixed` already set to 1 by a residue.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub numerator: Poly,
    /// Axes whose `(1 − v)` factor is still in the denominator.
    pub poles: [bool; 2],
    /// Axes integrated out by a residue at `v = 1`.
    pub fixed: [bool; 2],
    pub multiplier: BigRational,
}

impl Piece {
    pub fn whole(kind: ModelKind, weights: &Weights) -> Self {
        let fr = build_gf(kind, weights);
        Piece {
            numerator: fr.numerator_product(),
            poles: [true, true],
            fixed: [false, false],
            multiplier: fr.scalar,
        }
    }

    fn free(&self) -> Vec<usize> {
        (0..2).filter(|&v| !self.fixed[v]).collect()
    }
}

/// Takes the residue at `v = 1` on `axis`: removes `(1 − v)` and evaluates there.
pub fn residue_reduce(piece: &Piece, axis: usize, point: &(Surd, Surd)) -> Result<Piece> {
    let coord = if axis == X { &point.0 } else { &point.1 };
    if !coord.is_one() || !piece.poles[axis] || piece.fixed[axis] {
        return Err(Error::AxisMismatch);
    }
    let mut out = piece.clone();
    out.poles[axis] = false;
    out.fixed[axis] = true;
    out.numerator = piece.numerator.substitute(axis, &BigRational::one());
    Ok(out)
}

/// Telescoping split `N = N|_{v=1} + (v − 1)·Q` on `axis`.
///
/// The first summand keeps the pole and does not depend on `v`; in the
/// second the factor `(v − 1)` cancels the pole, leaving `−Q`.
pub fn split_numerator(piece: &Piece, axis: usize) -> Result<(Piece, Piece)> {
    if !piece.poles[axis] {
        return Err(Error::NoSplit);
    }
    let at_one = piece.numerator.substitute(axis, &BigRational::one());
    let q = (&piece.numerator - &at_one)
        .div_by_var_minus_one(axis)
        .ok_or(Error::NoSplit)?;
    let kept = Piece {
        numerator: at_one,
        ..piece.clone()
    };
    let mut cancelled = Piece {
        numerator: -&q,
        ..piece.clone()
    };
    cancelled.poles[axis] = false;
    Ok((kept, cancelled))
}

/// Exact sign data of the kernel at a candidate point.
struct KernelData {
    xp: Poly,
    yp: Poly,
}

impl KernelData {
    fn new(kind: ModelKind, weights: &Weights) -> Self {
        let p = Model::new(kind, weights.clone()).inventory().kernel();
        KernelData {
            xp: p.euler(X),
            yp: p.euler(Y),
        }
    }
}

/// The minimizer of `P` over the positive region allowed by the remaining
/// poles: candidates are the closed forms, checked with exact first-order conditions.
fn constrained_saddle(k: &KernelData, weights: &Weights, poles: [bool; 2]) -> Result<(Surd, Surd)> {
    let a = Surd::from_rational(weights.a().clone());
    let b = Surd::from_rational(weights.b().clone());
    let one = Surd::from_integer(1);
    let candidates = [
        (a.clone(), b.clone()),
        (one.clone(), b / Surd::sqrt_of(weights.a())),
        (a / Surd::sqrt_of(weights.b()), one.clone()),
        (one.clone(), one.clone()),
    ];
    'next: for (x, y) in candidates {
        let d = [k.xp.eval2(&x, &y), k.yp.eval2(&x, &y)];
        for (v, c) in [&x, &y].into_iter().enumerate() {
            if poles[v] {
                match c.cmp_exact(&one) {
                    Ordering::Greater => continue 'next,
                    Ordering::Equal if d[v].signum() > 0 => continue 'next,
                    Ordering::Less if !d[v].is_zero() => continue 'next,
                    _ => {}
                }
            } else if !d[v].is_zero() {
                continue 'next;
            }
        }
        return Ok((x, y));
    }
    Err(Error::UnhandledRegime)
}

/// A piece ready for a saddle expansion, at a given point.
#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub piece: Piece,
    pub point: (Surd, Surd),
    /// Rotation exponent of the Tandem companions `(ω^k x, ω^{2k} y)`.
    pub rotation: u8,
}

/// How a piece was resolved; kept for reporting.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Residue { axis: usize },
    Split { axis: usize },
}

/// Recursively applies residues and splits until every piece is a saddle integral.
pub fn decompose(
    kind: ModelKind,
    weights: &Weights,
    piece: Piece,
    trace: &mut Vec<Step>,
    out: &mut Vec<Leaf>,
) -> Result<()> {
    let k = KernelData::new(kind, weights);
    let mut piece = piece;
    let constraint = [
        piece.poles[0] || piece.fixed[0],
        piece.poles[1] || piece.fixed[1],
    ];
    let point = constrained_saddle(&k, weights, constraint)?;
    let d = [
        k.xp.eval2(&point.0, &point.1),
        k.yp.eval2(&point.0, &point.1),
    ];
    let coord = [&point.0, &point.1];
    for v in 0..2 {
        if piece.poles[v] && coord[v].is_one() && d[v].signum() < 0 {
            piece = residue_reduce(&piece, v, &point)?;
            trace.push(Step::Residue { axis: v });
        }
    }
    for v in 0..2 {
        if piece.poles[v] && coord[v].is_one() {
            trace.push(Step::Split { axis: v });
            let (kept, cancelled) = split_numerator(&piece, v)?;
            let mut half = residue_reduce(&kept, v, &point)?;
            half.multiplier = &half.multiplier / BigRational::from_integer(BigInt::from(2));
            decompose(kind, weights, half, trace, out)?;
            return decompose(kind, weights, cancelled, trace, out);
        }
    }
    out.push(Leaf {
        piece,
        point,
        rotation: 0,
    });
    Ok(())
}

/// Saddle contribution of one leaf: `coefficient · P(w)^n · n^{−r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contribution {
    /// `|P(w)|`, the exponential growth of this term.
    pub modulus: Surd,
    /// `P(w) = modulus · ω^{−rotation}`.
    pub rotation: u8,
    /// Twice the exponent `r`.
    pub twice_r: u32,
    pub coefficient: (f64, f64),
    pub arity: usize,
    pub first_nonzero: usize,
}

impl Contribution {
    pub fn r(&self) -> BigRational {
        BigRational::new(BigInt::from(self.twice_r), BigInt::from(2))
    }
}

fn leaf_polys(kind: ModelKind, weights: &Weights, leaf: &Leaf) -> (Poly, Poly, Poly) {
    let one = BigRational::one();
    let mut num = leaf.piece.numerator.scale(&leaf.piece.multiplier);
    let mut den = Poly::monomial(one.clone(), [2, 2, 0]);
    for v in 0..2 {
        if leaf.piece.poles[v] {
            den = &den * &(&Poly::one() - &Poly::var(v));
        }
    }
    let mut phase = Model::new(kind, weights.clone()).inventory().kernel();
    for v in 0..2 {
        if leaf.piece.fixed[v] {
            num = num.substitute(v, &one);
            den = den.substitute(v, &one);
            phase = phase.substitute(v, &one);
        }
    }
    (num, den, phase)
}

fn base_point(leaf: &Leaf, prec: u32) -> [Complex; 2] {
    let k = leaf.rotation as i32;
    [
        &Complex::from_real(leaf.point.0.to_real(prec)) * &Complex::cube_root_of_unity(k, prec),
        &Complex::from_real(leaf.point.1.to_real(prec)) * &Complex::cube_root_of_unity(2 * k, prec),
    ]
}

/// Builds the saddle problem of a leaf at a precision and jet order.
pub fn leaf_problem(
    kind: ModelKind,
    weights: &Weights,
    leaf: &Leaf,
    prec: u32,
    order: usize,
) -> Result<FLProblem> {
    let (num, den, phase) = leaf_polys(kind, weights, leaf);
    let free = leaf.piece.free();
    let base = base_point(leaf, prec);
    let a = amplitude_jet(&num, &den, &base, &free, order, prec)?;
    let phi = phase_jet(&phase, &base, &free, order, prec)?;
    FLProblem::new(a, phi)
}

/// Expands one leaf.
pub fn contribution(
    kind: ModelKind,
    weights: &Weights,
    leaf: &Leaf,
    prec: u32,
) -> Result<Option<Contribution>> {
    let (num, den, phase) = leaf_polys(kind, weights, leaf);
    let modulus = phase.eval2(&leaf.point.0, &leaf.point.1).abs();
    let free = leaf.piece.free();
    if free.is_empty() {
        let value = num.eval2(&BigRational::one(), &BigRational::one())
            / den.eval2(&BigRational::one(), &BigRational::one());
        if value.is_zero() {
            return Ok(None);
        }
        let v = crate::ratio_to_f64(&value);
        return Ok(Some(Contribution {
            modulus,
            rotation: 0,
            twice_r: 0,
            coefficient: (v, 0.0),
            arity: 0,
            first_nonzero: 0,
        }));
    }
    // Numerators that vanish identically after the residue do not contribute.
    if num.is_zero() {
        return Ok(None);
    }
    let j_start = if leaf.rotation == 0 {
        let g_order = num
            .vanishing_order(&leaf.point.0, &leaf.point.1, |s: &Surd| s.is_zero())
            .unwrap_or(0);
        vanishing_order_bound(g_order) as usize
    } else {
        1
    };
    let expansion = match fl_expand_checked(
        |p, m| leaf_problem(kind, weights, leaf, p, m),
        prec,
        j_start,
    ) {
        Ok(e) => e,
        // Rotated companions only add oscillating corrections; one that
        // vanishes through the largest scanned order is dropped.
        Err(Error::OrderExhausted { .. }) if leaf.rotation != 0 => return Ok(None),
        Err(e) => return Err(e),
    };
    let k = free.len();
    let pref = Real::pi(prec).mul_pow2(1).powi(-(k as i32)).sqrt();
    let c = &(&expansion.constants[expansion.first_nonzero] * &expansion.det_inv_sqrt).scale(&pref);
    Ok(Some(Contribution {
        modulus,
        rotation: leaf.rotation,
        twice_r: (k + 2 * expansion.first_nonzero) as u32,
        coefficient: c.to_f64(),
        arity: k,
        first_nonzero: expansion.first_nonzero,
    }))
}

/// Options for the full pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub precision: u32,
    /// Apply the half factor on the boundary point of the starred regimes.
    pub half_factor: bool,
    /// Expand the rotated Tandem companions of the dominant point. They never
    /// change `ρ`, `r` or `γ`, only the oscillating terms.
    pub companions: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            precision: DEFAULT_PRECISION,
            half_factor: true,
            companions: true,
        }
    }
}

/// `q(n) ~ γ ρ^n n^{−r}` together with the oscillating companions of the same order.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticEstimate {
    pub kind: ModelKind,
    pub weights: Weights,
    pub regime: Regime,
    pub rho: Surd,
    pub r: BigRational,
    pub gamma: f64,
    /// Imaginary part left after summing the real contributions; should vanish.
    pub gamma_imag: f64,
    pub conjectured: bool,
    /// Contributions `c·(ρ ω^{−k})^n n^{−r}` with `k ≠ 0` and the leading `r`.
    pub oscillating: Vec<Contribution>,
    /// All contributions found, before selecting the leading order.
    pub contributions: Vec<Contribution>,
}

impl AsymptoticEstimate {
    pub fn r_f64(&self) -> f64 {
        crate::ratio_to_f64(&self.r)
    }

    /// `ln(γ ρ^n n^{−r})` for the non-oscillating part.
    pub fn ln_leading(&self, n: usize) -> f64 {
        let nf = n as f64;
        libm::log(self.gamma) + nf * self.rho.to_real(DEFAULT_PRECISION).ln_f64()
            - self.r_f64() * libm::log(nf)
    }

    /// Natural log of the full prediction including oscillating terms of the same order.
    pub fn ln_predict(&self, n: usize) -> f64 {
        let mut total = self.gamma;
        for c in &self.oscillating {
            let ang = -core::f64::consts::TAU * ((c.rotation as usize * n) % 3) as f64 / 3.0;
            total += c.coefficient.0 * libm::cos(ang) - c.coefficient.1 * libm::sin(ang);
        }
        self.ln_leading(n) - libm::log(self.gamma) + libm::log(total)
    }

    /// Relative error `(q − prediction)/q` given `ln q`.
    pub fn relative_error_ln(&self, n: usize, ln_q: f64) -> f64 {
        1.0 - libm::exp(self.ln_predict(n) - ln_q)
    }

    /// Relative error against an exact value.
    pub fn relative_error(&self, n: usize, q: &BigRational) -> f64 {
        self.relative_error_ln(n, crate::ln_ratio(q))
    }
}

/// Leaves of the decomposition for a weight pair, including rotated companions.
pub fn leaves(
    kind: ModelKind,
    weights: &Weights,
    dominant: &CriticalPoint,
    points: &[CriticalPoint],
    half_factor: bool,
    companions: bool,
) -> Result<(Vec<Leaf>, Vec<Step>)> {
    let regime = classify(weights, kind);
    let mut out = Vec::new();
    let mut trace = Vec::new();
    let whole = Piece::whole(kind, weights);
    if regime.conjectured() {
        // The saddle sits on a pole with the direction on the boundary of
        // the normal cone: half the residue on that axis.
        let axis = if dominant.x().is_one() { X } else { Y };
        let point = (dominant.x().clone(), dominant.y().clone());
        let mut p = residue_reduce(&whole, axis, &point)?;
        trace.push(Step::Residue { axis });
        if half_factor {
            p.multiplier = &p.multiplier / BigRational::from_integer(BigInt::from(2));
        }
        out.push(Leaf {
            piece: p,
            point,
            rotation: 0,
        });
    } else {
        decompose(kind, weights, whole.clone(), &mut trace, &mut out)?;
    }
    for cp in points
        .iter()
        .filter(|p| companions && p.rotation != 0 && p.is_minimal)
    {
        out.push(Leaf {
            piece: whole.clone(),
            point: (cp.x().clone(), cp.y().clone()),
            rotation: cp.rotation,
        });
    }
    Ok((out, trace))
}

/// The full pipeline with default options.
pub fn asymptotics(kind: ModelKind, weights: &Weights) -> Result<AsymptoticEstimate> {
    asymptotics_with(kind, weights, Options::default())
}

pub fn asymptotics_with(
    kind: ModelKind,
    weights: &Weights,
    opts: Options,
) -> Result<AsymptoticEstimate> {
    let regime = classify(weights, kind);
    let points = critical_points(kind, weights)?;
    let dominant = select_dominant(&points, kind, weights)?;
    let rho = dominant.height_exact();
    let (leaves, _) = leaves(
        kind,
        weights,
        &dominant,
        &points,
        opts.half_factor,
        opts.companions,
    )?;
    let mut contributions = Vec::new();
    for leaf in &leaves {
        if let Some(c) = contribution(kind, weights, leaf, opts.precision)? {
            contributions.push(c);
        }
    }
    // Only terms with the dominant growth matter; collect by exponent.
    if contributions
        .iter()
        .any(|c| c.modulus.cmp_exact(&rho) == Ordering::Greater)
    {
        return Err(Error::Inconsistent(
            "a piece grows faster than the dominant point".into(),
        ));
    }
    let top: Vec<&Contribution> = contributions.iter().filter(|c| c.modulus == rho).collect();
    let mut exponents: Vec<u32> = top
        .iter()
        .filter(|c| c.rotation == 0)
        .map(|c| c.twice_r)
        .collect();
    exponents.sort_unstable();
    exponents.dedup();
    let scale_of = |c: &Contribution| libm::hypot(c.coefficient.0, c.coefficient.1);
    for tr in exponents {
        let same: Vec<&&Contribution> = top
            .iter()
            .filter(|c| c.rotation == 0 && c.twice_r == tr)
            .collect();
        let re: f64 = same.iter().map(|c| c.coefficient.0).sum();
        let im: f64 = same.iter().map(|c| c.coefficient.1).sum();
        let size = same.iter().map(|c| scale_of(c)).fold(0.0, f64::max);
        if libm::fabs(re) <= 1e-9 * size {
            continue;
        }
        if re <= 0.0 {
            return Err(Error::Inconsistent(format!(
                "leading constant {re} is not positive"
            )));
        }
        let oscillating = top
            .iter()
            .filter(|c| c.rotation != 0 && c.twice_r == tr)
            .map(|c| (*c).clone())
            .collect();
        return Ok(AsymptoticEstimate {
            kind,
            weights: weights.clone(),
            regime,
            rho,
            r: BigRational::new(BigInt::from(tr), BigInt::from(2)),
            gamma: re,
            gamma_imag: im,
            conjectured: regime.conjectured() && opts.half_factor,
            oscillating,
            contributions: contributions.clone(),
        });
    }
    Err(Error::UnhandledRegime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(an: i64, ad: i64, bn: i64, bd: i64) -> Weights {
        Weights::from_fractions(an, ad, bn, bd).unwrap()
    }

    fn gaussian(order: usize, prec: u32) -> FLProblem {
        let a = Jet::constant(Complex::one(prec), 1, order).unwrap();
        let mut phi = Jet::zero(1, order, prec).unwrap();
        phi.set_coeff(2, 0, Complex::one(prec));
        FLProblem::new(a, phi).unwrap()
    }

    #[test]
    fn gaussian_kernel() {
        let e = fl_expand(&gaussian(30, 128), 5).unwrap();
        assert_eq!(e.first_nonzero, 0);
        assert!((&e.constants[0] - &Complex::one(128)).abs_f64() < 1e-30);
        for c in &e.constants[1..] {
            assert!(c.abs_f64() < 1e-30);
        }
        let (re, im) = e.leading(100.0);
        assert!((re - (core::f64::consts::PI / 100.0).sqrt()).abs() < 1e-15 && im.abs() < 1e-15);
    }

    #[test]
    fn quartic_correction() {
        // ∫ e^{−n(θ²/2 + θ⁴)} dθ = √(2π/n)(1 − 3/n + …)
        let prec = 128;
        let a = Jet::constant(Complex::one(prec), 1, 12).unwrap();
        let mut phi = Jet::zero(1, 12, prec).unwrap();
        phi.set_coeff(2, 0, Complex::from_f64(0.5, 0.0, prec));
        phi.set_coeff(4, 0, Complex::one(prec));
        let cs = constants(&FLProblem::new(a, phi).unwrap(), 2).unwrap();
        assert!((cs[1].to_f64().0 + 3.0).abs() < 1e-25);
        // 8!/(2⁴·2!·4!) from the squared quartic term.
        assert!((cs[2].to_f64().0 - 52.5).abs() < 1e-22);
    }

    #[test]
    fn bound_examples() {
        assert_eq!(vanishing_order_bound(0), 0);
        assert_eq!(vanishing_order_bound(1), 1);
        assert_eq!(vanishing_order_bound(3), 2);
    }

    #[test]
    fn axial_tandem_closed_form() {
        let est = asymptotics(ModelKind::Tandem, &w(4, 1, 2, 1)).unwrap();
        assert_eq!(est.rho, Surd::from_integer(5));
        assert_eq!(est.r, BigRational::new(1.into(), 2.into()));
        let expected = 49.0 * 10f64.sqrt() / (64.0 * core::f64::consts::PI.sqrt());
        assert!((est.gamma / expected - 1.0).abs() < 1e-12, "{}", est.gamma);
    }

    #[test]
    fn interior_is_geometric() {
        let est = asymptotics(ModelKind::Tandem, &w(2, 1, 3, 1)).unwrap();
        assert_eq!(est.r, BigRational::zero());
        assert!((est.gamma - 0.16203704).abs() < 1e-8);
    }

    #[test]
    fn splits_follow_the_axial_pattern() {
        let (kind, wt) = (ModelKind::Tandem, w(4, 1, 2, 1));
        let mut trace = Vec::new();
        let mut out = Vec::new();
        decompose(kind, &wt, Piece::whole(kind, &wt), &mut trace, &mut out).unwrap();
        assert_eq!(
            trace,
            vec![Step::Residue { axis: X }, Step::Split { axis: Y }]
        );
        assert_eq!(out.len(), 2);
        // The half-residue summand vanishes at x = y = 1.
        assert!(contribution(kind, &wt, &out[0], 106).unwrap().is_none());
    }

    #[test]
    fn residue_needs_unit_coordinate() {
        let wt = w(2, 1, 3, 1);
        let p = Piece::whole(ModelKind::Tandem, &wt);
        let pt = (Surd::from_integer(2), Surd::from_integer(3));
        assert_eq!(residue_reduce(&p, X, &pt), Err(Error::AxisMismatch));
    }
}
