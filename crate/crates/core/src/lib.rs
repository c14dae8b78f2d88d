//! Exact counts and leading-term asymptotics for centrally weighted walks in
//! the Weyl chamber A₂ (the Tandem and Double Tandem step sets).
//!
//! The crate is `no_std` and only needs `alloc`. It covers exact enumeration
//! (`oracle`), the factored rational generating functions and their diagonal
//! coefficients (`gf`), critical points and normal cones (`geometry`), Taylor
//! jets (`jet`) and the Fourier–Laplace engine that assembles `γ·ρⁿ·n^(−r)`
//! (`fl`).
#![no_std]

extern crate alloc;

pub mod error;
pub mod fl;
pub mod geometry;
pub mod gf;
pub mod jet;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod real;
pub mod scalar;
pub mod surd;

pub use error::{Error, Result};
pub use fl::{asymptotics, asymptotics_with, AsymptoticEstimate, Options};
pub use model::{
    classify, exponential_growth, growth_of, Inventory, Model, ModelKind, Regime, Weights,
};
pub use real::{Complex, Real, DEFAULT_PRECISION};
pub use surd::Surd;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Nearest `f64` to a rational, robust to huge numerators and denominators.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 1e300 && d < 1e300 {
            return n / d;
        }
    }
    Real::from_ratio(q, 64).to_f64()
}

/// Natural logarithm of a positive rational as an `f64`.
pub fn ln_ratio(q: &BigRational) -> f64 {
    assert!(q.is_positive(), "log of a non-positive rational");
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return libm::log(v.to_f64().unwrap_or(f64::MAX));
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(1.0);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}
