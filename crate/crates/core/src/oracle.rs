//! Exact enumeration of walks confined to the quadrant.
//!
//! Counts live in one flat buffer per length: the reachable cells of the
//! triangle `i + j ≤ n`, row by row, each cell as many little-endian `u64`
//! limbs as its value needs. A step adds at most six source cells limb by limb
//! with a `u128` accumulator, so no big-integer objects are created until
//! values are read out.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{ModelKind, Weights};

/// Default cap on the walk length.
pub const DEFAULT_MAX_LENGTH: usize = 10_000;
/// Default `n₀` for [`fit_growth`]: the series must reach `2·n₀`.
pub const DEFAULT_FIT_START: usize = 512;

/// Storage layout of one layer: the reachable cells of the triangle `i + j ≤ n`.
///
/// Tandem only reaches cells with `j ≡ i − n (mod 3)`. Double Tandem counts
/// are symmetric under `(i, j) ↔ (j, i)`, so only `j ≤ i` is stored.
#[derive(Clone, Debug)]
struct Layout {
    n: usize,
    period: usize,
    symmetric: bool,
    /// Ordinal of the first cell of row `i`; one extra entry at the end.
    row_first: Vec<usize>,
}

impl Layout {
    fn new(kind: ModelKind, n: usize) -> Self {
        let (period, symmetric) = match kind {
            ModelKind::Tandem => (3, false),
            ModelKind::DoubleTandem => (1, true),
        };
        let mut layout = Layout {
            n,
            period,
            symmetric,
            row_first: Vec::with_capacity(n + 2),
        };
        let mut acc = 0usize;
        for i in 0..=n {
            layout.row_first.push(acc);
            let j0 = layout.first_j(i);
            let hi = layout.last_j(i);
            if j0 <= hi {
                acc += (hi - j0) / period + 1;
            }
        }
        layout.row_first.push(acc);
        layout
    }

    #[inline(always)]
    fn first_j(&self, i: usize) -> usize {
        (i + 3 * self.n - self.n) % self.period
    }

    #[inline(always)]
    fn last_j(&self, i: usize) -> usize {
        if self.symmetric {
            i.min(self.n - i)
        } else {
            self.n - i
        }
    }

    fn cells(&self) -> usize {
        self.row_first[self.n + 1]
    }

    /// Ordinal of `(i, j)`, if that cell is stored (after symmetry folding).
    fn ordinal(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if self.symmetric && j > i {
            (j, i)
        } else {
            (i, j)
        };
        if i + j > self.n {
            return None;
        }
        let j0 = self.first_j(i);
        if j < j0 || !(j - j0).is_multiple_of(self.period) {
            return None;
        }
        Some(self.row_first[i] + (j - j0) / self.period)
    }
}

/// Rolling dynamic program over walk lengths.
///
/// Each cell keeps only the limbs its value needs, addressed through an
/// offset table, so the work per step follows the actual size of the counts.
#[derive(Clone, Debug)]
pub struct Enumerator {
    kind: ModelKind,
    cap: usize,
    layout: Layout,
    limbs: Vec<u64>,
    /// `offsets[c]..offsets[c + 1]` are the limbs of cell `c`.
    offsets: Vec<usize>,
    spare_limbs: Vec<u64>,
    spare_offsets: Vec<usize>,
}

impl Enumerator {
    pub fn new(kind: ModelKind) -> Self {
        Enumerator::with_cap(kind, DEFAULT_MAX_LENGTH)
    }

    pub fn with_cap(kind: ModelKind, cap: usize) -> Self {
        Enumerator {
            kind,
            cap,
            layout: Layout::new(kind, 0),
            limbs: vec![1],
            offsets: vec![0, 1],
            spare_limbs: Vec::new(),
            spare_offsets: Vec::new(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    /// Current walk length.
    pub fn length(&self) -> usize {
        self.layout.n
    }

    /// Advances by one step.
    pub fn step(&mut self) -> Result<()> {
        let n = self.layout.n + 1;
        if n > self.cap {
            return Err(Error::ResourceLimit {
                requested: n,
                cap: self.cap,
            });
        }
        match self.kind {
            ModelKind::Tandem => self.step_with::<3, false>(),
            ModelKind::DoubleTandem => self.step_with::<1, true>(),
        }
        Ok(())
    }

    fn step_with<const P: usize, const SYM: bool>(&mut self) {
        let n = self.layout.n + 1;
        let layout = Layout::new(self.kind, n);
        let mut out = core::mem::take(&mut self.spare_limbs);
        let mut offsets = core::mem::take(&mut self.spare_offsets);
        out.clear();
        offsets.clear();
        offsets.reserve(layout.cells() + 1);
        offsets.push(0);
        let steps = self.kind.steps();
        let old = &self.layout;
        let old_n = old.n;
        let src = &self.limbs;
        let src_off = &self.offsets;
        let mut srcs: [&[u64]; 6] = [&[]; 6];
        for i in 0..=n {
            let mut j = (i + 2 * n) % P;
            let hi = if SYM { i.min(n - i) } else { n - i };
            while j <= hi {
                let mut count = 0;
                for &(dx, dy) in steps {
                    let pi = i as isize - dx as isize;
                    let pj = j as isize - dy as isize;
                    if pi < 0 || pj < 0 || (pi + pj) as usize > old_n {
                        continue;
                    }
                    let (pi, pj) = if SYM && pj > pi {
                        (pj as usize, pi as usize)
                    } else {
                        (pi as usize, pj as usize)
                    };
                    let j0 = (pi + 2 * old_n) % P;
                    let o = old.row_first[pi] + (pj - j0) / P;
                    let s = &src[src_off[o]..src_off[o + 1]];
                    if !s.is_empty() {
                        srcs[count] = s;
                        count += 1;
                    }
                }
                match count {
                    0 => {}
                    1 => out.extend_from_slice(srcs[0]),
                    2 => accumulate::<2>(&srcs, &mut out),
                    3 => accumulate::<3>(&srcs, &mut out),
                    4 => accumulate::<4>(&srcs, &mut out),
                    5 => accumulate::<5>(&srcs, &mut out),
                    _ => accumulate::<6>(&srcs, &mut out),
                }
                offsets.push(out.len());
                j += P;
            }
        }
        self.spare_limbs = core::mem::replace(&mut self.limbs, out);
        self.spare_offsets = core::mem::replace(&mut self.offsets, offsets);
        self.layout = layout;
    }

    /// Advances to length `n` (which must not be below the current length).
    pub fn advance_to(&mut self, n: usize) -> Result<()> {
        if n > self.cap {
            return Err(Error::ResourceLimit {
                requested: n,
                cap: self.cap,
            });
        }
        while self.layout.n < n {
            self.step()?;
        }
        Ok(())
    }

    fn cell(&self, i: usize, j: usize) -> &[u64] {
        match self.layout.ordinal(i, j) {
            Some(o) => &self.limbs[self.offsets[o]..self.offsets[o + 1]],
            None => &[],
        }
    }

    /// Number of walks of the current length ending at `(i, j)`.
    pub fn count(&self, i: usize, j: usize) -> BigUint {
        limbs_to_biguint(self.cell(i, j))
    }

    /// Total number of walks of the current length.
    pub fn total(&self) -> BigUint {
        let n = self.layout.n;
        let mut sum = BigUint::zero();
        for i in 0..=n {
            for j in 0..=(n - i) {
                sum += limbs_to_biguint(self.cell(i, j));
            }
        }
        sum
    }

    /// Snapshot of the current layer.
    pub fn table(&self) -> CountTable {
        let n = self.layout.n;
        let mut counts = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=(n - i) {
                let c = limbs_to_biguint(self.cell(i, j));
                if !c.is_zero() {
                    counts.insert((i, j), c);
                }
            }
        }
        CountTable {
            kind: self.kind,
            n,
            counts,
        }
    }

    /// `Σ counts(i, j)·a^i·b^j` for the current length, exactly.
    pub fn weighted_sum(&self, weights: &Weights) -> BigRational {
        let n = self.layout.n;
        let (p1, q1) = (
            weights.a().numer().magnitude(),
            weights.a().denom().magnitude(),
        );
        let (p2, q2) = (
            weights.b().numer().magnitude(),
            weights.b().denom().magnitude(),
        );
        let q2_pows = powers(q2, n);
        let q1_pows = powers(q1, n);
        // Row i: Σ_j c_ij p2^j q2^(m−j) with m = n − i, then padded to degree n.
        let mut outer = BigUint::zero();
        for i in (0..=n).rev() {
            let m = n - i;
            let mut acc = BigUint::zero();
            for j in (0..=m).rev() {
                acc *= p2;
                let c = self.cell(i, j);
                if !c.is_empty() {
                    acc += limbs_to_biguint(c) * &q2_pows[m - j];
                }
            }
            let row = acc * &q2_pows[i];
            // Outer homogeneous Horner in (p1, q1) over rows.
            outer = outer * p1 + row * &q1_pows[n - i];
        }
        let den = &q1_pows[n] * &q2_pows[n];
        BigRational::new(BigInt::from(outer), BigInt::from(den))
    }
}

/// Appends the sum of the first `K` sources (little-endian limbs) to `out`.
#[inline(always)]
fn accumulate<const K: usize>(srcs: &[&[u64]; 6], out: &mut Vec<u64>) {
    let mut width = 0;
    let mut common = usize::MAX;
    for s in &srcs[..K] {
        width = width.max(s.len());
        common = common.min(s.len());
    }
    let cut: [&[u64]; K] = core::array::from_fn(|t| &srcs[t][..common]);
    let mut carry: u128 = 0;
    for k in 0..common {
        let mut acc = carry;
        for s in &cut {
            acc += s[k] as u128;
        }
        out.push(acc as u64);
        carry = acc >> 64;
    }
    for k in common..width {
        let mut acc = carry;
        for s in &srcs[..K] {
            if let Some(&v) = s.get(k) {
                acc += v as u128;
            }
        }
        out.push(acc as u64);
        carry = acc >> 64;
    }
    if carry != 0 {
        out.push(carry as u64);
    }
}

fn powers(base: &BigUint, n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = BigUint::one();
    for _ in 0..=n {
        out.push(cur.clone());
        if !base.is_one() {
            cur *= base;
        }
    }
    out
}

fn limbs_to_biguint(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

/// Endpoint counts for one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub kind: ModelKind,
    pub n: usize,
    /// Nonzero counts keyed by endpoint.
    pub counts: BTreeMap<(usize, usize), BigUint>,
}

impl CountTable {
    pub fn get(&self, i: usize, j: usize) -> BigUint {
        self.counts.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn weighted(&self, weights: &Weights) -> BigRational {
        let mut sum = BigRational::zero();
        for (&(i, j), c) in &self.counts {
            sum += BigRational::from_integer(BigInt::from(c.clone()))
                * weights.a().pow(i as i32)
                * weights.b().pow(j as i32);
        }
        sum
    }
}

/// Endpoint counts of all walks of length `n`.
pub fn count_endpoints(kind: ModelKind, n: usize) -> Result<CountTable> {
    count_endpoints_capped(kind, n, DEFAULT_MAX_LENGTH)
}

pub fn count_endpoints_capped(kind: ModelKind, n: usize, cap: usize) -> Result<CountTable> {
    let mut e = Enumerator::with_cap(kind, cap);
    e.advance_to(n)?;
    Ok(e.table())
}

/// Exact weighted counts `q(n)` at a set of lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    pub kind: ModelKind,
    pub weights: Weights,
    values: BTreeMap<usize, BigRational>,
}

impl QSeries {
    pub fn new(kind: ModelKind, weights: Weights) -> Self {
        QSeries {
            kind,
            weights,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, n: usize, q: BigRational) {
        self.values.insert(n, q);
    }

    pub fn get(&self, n: usize) -> Option<&BigRational> {
        self.values.get(&n)
    }

    /// Largest sampled length.
    pub fn max_length(&self) -> Option<usize> {
        self.values.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.values.iter().map(|(n, q)| (*n, q))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values as a dense list when every length `0..=N` is present.
    pub fn dense(&self) -> Option<Vec<BigRational>> {
        let n = self.max_length()?;
        if self.values.len() != n + 1 {
            return None;
        }
        Some(self.values.values().cloned().collect())
    }
}

/// `q(0), …, q(N)` for one weight pair.
pub fn q_series(kind: ModelKind, weights: &Weights, n_max: usize) -> Result<QSeries> {
    let lengths: Vec<usize> = (0..=n_max).collect();
    let mut out = sample_series(
        kind,
        core::slice::from_ref(weights),
        &lengths,
        DEFAULT_MAX_LENGTH,
    )?;
    Ok(out.pop().unwrap())
}

/// One enumeration pass that evaluates several weight pairs at selected lengths.
pub fn sample_series(
    kind: ModelKind,
    weights: &[Weights],
    lengths: &[usize],
    cap: usize,
) -> Result<Vec<QSeries>> {
    let mut sorted: Vec<usize> = lengths.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&last) = sorted.last() {
        if last > cap {
            return Err(Error::ResourceLimit {
                requested: last,
                cap,
            });
        }
    }
    let mut out: Vec<QSeries> = weights
        .iter()
        .map(|w| QSeries::new(kind, w.clone()))
        .collect();
    let mut e = Enumerator::with_cap(kind, cap);
    for &n in &sorted {
        e.advance_to(n)?;
        for s in out.iter_mut() {
            let q = e.weighted_sum(&s.weights);
            s.insert(n, q);
        }
    }
    Ok(out)
}

/// Lengths needed by [`fit_growth`] for a series ending at `n`.
pub fn fit_lengths(n: usize) -> [usize; 3] {
    [n / 2, n - 1, n]
}

/// Empirical growth rate and polynomial exponent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthFit {
    /// `q(N)/q(N−1)`.
    pub rho_hat: f64,
    /// `−log₂(q(2m)/(q(m)·ρ^m))` with `m = ⌊N/2⌋`.
    pub r_hat: f64,
}

/// Fits `ρ̂` and `r̂` from the largest sampled lengths, with `n₀` = 512.
pub fn fit_growth(qs: &QSeries, rho: f64) -> Result<GrowthFit> {
    fit_growth_from(qs, rho, DEFAULT_FIT_START)
}

pub fn fit_growth_from(qs: &QSeries, rho: f64, n0: usize) -> Result<GrowthFit> {
    let n = qs
        .max_length()
        .ok_or_else(|| Error::DegenerateSeries("empty series".into()))?;
    if n < 2 * n0 {
        return Err(Error::DegenerateSeries(format!(
            "series ends at {n}, need at least {}",
            2 * n0
        )));
    }
    let m = n / 2;
    let get = |k: usize| -> Result<&BigRational> {
        let q = qs
            .get(k)
            .ok_or_else(|| Error::DegenerateSeries(format!("q({k}) not sampled")))?;
        if q.is_zero() {
            return Err(Error::DegenerateSeries(format!("q({k}) is zero")));
        }
        Ok(q)
    };
    let rho_hat = libm::exp(crate::ln_ratio(get(n)?) - crate::ln_ratio(get(n - 1)?));
    let ln_ratio =
        crate::ln_ratio(get(2 * m)?) - crate::ln_ratio(get(m)?) - m as f64 * libm::log(rho);
    Ok(GrowthFit {
        rho_hat,
        r_hat: -ln_ratio / core::f64::consts::LN_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn brute_force(kind: ModelKind, n: usize) -> BTreeMap<(usize, usize), u64> {
        let mut layer: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        layer.insert((0, 0), 1);
        for _ in 0..n {
            let mut next = BTreeMap::new();
            for (&(i, j), &c) in &layer {
                for &(dx, dy) in kind.steps() {
                    let (u, v) = (i + dx as i64, j + dy as i64);
                    if u >= 0 && v >= 0 {
                        *next.entry((u, v)).or_insert(0) += c;
                    }
                }
            }
            layer = next;
        }
        layer
            .into_iter()
            .map(|((i, j), c)| ((i as usize, j as usize), c))
            .collect()
    }

    #[test]
    fn small_tables() {
        let t1 = count_endpoints(ModelKind::Tandem, 1).unwrap();
        assert_eq!(t1.counts.len(), 1);
        assert_eq!(t1.get(1, 0), BigUint::one());
        let t0 = count_endpoints(ModelKind::Tandem, 0).unwrap();
        assert_eq!(t0.get(0, 0), BigUint::one());
        let d1 = count_endpoints(ModelKind::DoubleTandem, 1).unwrap();
        assert_eq!(d1.counts.len(), 2);
        assert_eq!(d1.get(0, 1), BigUint::one());
    }

    #[test]
    fn matches_direct_enumeration() {
        for kind in [ModelKind::Tandem, ModelKind::DoubleTandem] {
            for n in 0..=10 {
                let t = count_endpoints(kind, n).unwrap();
                let b = brute_force(kind, n);
                let got: BTreeMap<(usize, usize), u64> = t
                    .counts
                    .iter()
                    .map(|(k, v)| (*k, v.iter_u64_digits().next().unwrap_or(0)))
                    .collect();
                assert_eq!(got, b, "{kind} n={n}");
            }
        }
    }

    #[test]
    fn multi_limb_counts_stay_exact() {
        // Large enough for several limbs; compare the weighted sum route with a table sum.
        let mut e = Enumerator::new(ModelKind::DoubleTandem);
        e.advance_to(90).unwrap();
        assert_eq!(e.count(3, 4), e.table().get(3, 4));
        let w = Weights::from_fractions(2, 3, 5, 7).unwrap();
        assert_eq!(e.weighted_sum(&w), e.table().weighted(&w));
        assert!(e.total().bits() > 128);
    }

    #[test]
    fn unweighted_series() {
        let w = Weights::from_fractions(1, 1, 1, 1).unwrap();
        let qs = q_series(ModelKind::Tandem, &w, 3).unwrap();
        let v: Vec<BigRational> = qs.dense().unwrap();
        let expect: Vec<BigRational> = [1, 1, 2, 4]
            .iter()
            .map(|&k| BigRational::from_integer(k.into()))
            .collect();
        assert_eq!(v, expect);
        let dt = q_series(ModelKind::DoubleTandem, &w, 1).unwrap();
        assert_eq!(dt.get(1), Some(&BigRational::from_integer(2.into())));
    }

    #[test]
    fn length_cap() {
        let mut e = Enumerator::with_cap(ModelKind::Tandem, 5);
        assert!(e.advance_to(5).is_ok());
        assert_eq!(
            e.step(),
            Err(Error::ResourceLimit {
                requested: 6,
                cap: 5
            })
        );
    }

    #[test]
    fn fit_needs_long_series() {
        let w = Weights::from_fractions(1, 1, 1, 1).unwrap();
        let qs = q_series(ModelKind::Tandem, &w, 20).unwrap();
        assert!(matches!(
            fit_growth(&qs, 3.0),
            Err(Error::DegenerateSeries(_))
        ));
        let fit = fit_growth_from(&qs, 3.0, 8).unwrap();
        assert!(fit.rho_hat > 2.0 && fit.rho_hat < 3.5);
    }
}
