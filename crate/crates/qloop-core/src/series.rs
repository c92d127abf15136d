//! Truncated formal power series in `q^{1/delta}`.
//!
//! Exponents are stored as integer numerators over a fixed per-series
//! grading denominator `delta`; an exponent numerator `e` means `q^{e/delta}`.
//! "Cutoff x" retains exponents `<= x` inclusive, with `x` an exact rational.
//! Mixed-delta arithmetic re-grades both operands to the lcm first, and
//! binary operations truncate to the smaller cutoff, so coefficients of every
//! retained exponent are exact. Coefficients are unbounded integers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Int, Rat};

/// A truncated series in `q^{1/delta}` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    delta: u64,
    cutoff: Rat,
    /// exponent numerator -> nonzero coefficient
    coeffs: BTreeMap<u64, Int>,
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    (a / a.gcd(&b)).checked_mul(b).expect("delta lcm overflow")
}

/// Largest exponent numerator within the cutoff: floor(delta * cutoff).
fn exponent_cap(delta: u64, cutoff: &Rat) -> Option<u64> {
    if cutoff.is_negative() {
        return None;
    }
    let scaled = (BigInt::from(delta) * cutoff.numer()).div_floor(cutoff.denom());
    Some(u64::try_from(scaled).expect("exponent cap overflow"))
}

impl QSeries {
    pub fn zero(delta: u64, cutoff: Rat) -> Self {
        assert!(delta > 0, "delta must be positive");
        QSeries {
            delta,
            cutoff,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(delta: u64, cutoff: Rat) -> Self {
        let mut s = Self::zero(delta, cutoff);
        s.add_term(0, Int::one());
        s
    }

    /// The monomial `q^{e/delta}` (zero if the exponent exceeds the cutoff).
    pub fn monomial(delta: u64, cutoff: Rat, e: u64) -> Self {
        let mut s = Self::zero(delta, cutoff);
        s.add_term(e, Int::one());
        s
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn cutoff(&self) -> &Rat {
        &self.cutoff
    }

    /// Max storable exponent numerator, if the cutoff is nonnegative.
    pub fn cap(&self) -> Option<u64> {
        exponent_cap(self.delta, &self.cutoff)
    }

    pub fn coeff(&self, e: u64) -> Int {
        self.coeffs.get(&e).cloned().unwrap_or_else(Int::zero)
    }

    /// Terms `(exponent numerator, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Int)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Add `c * q^{e/delta}` in place, dropping anything past the cutoff and
    /// pruning cancellations.
    pub fn add_term(&mut self, e: u64, c: Int) {
        if c.is_zero() || self.cap().is_none_or(|cap| e > cap) {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(Int::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Re-grade to a finer denominator (a multiple of the current one).
    pub fn regrade(&self, new_delta: u64) -> QSeries {
        assert!(
            new_delta.is_multiple_of(self.delta),
            "new delta must be a multiple of the old one"
        );
        let factor = new_delta / self.delta;
        QSeries {
            delta: new_delta,
            cutoff: self.cutoff.clone(),
            coeffs: self.coeffs.iter().map(|(&e, c)| (e * factor, c.clone())).collect(),
        }
    }

    /// Truncate to a smaller cutoff.
    pub fn truncate(&self, new_cutoff: Rat) -> QSeries {
        assert!(new_cutoff <= self.cutoff, "cannot extend a truncated series");
        let mut out = QSeries::zero(self.delta, new_cutoff);
        let cap = out.cap();
        for (&e, c) in &self.coeffs {
            match cap {
                Some(cap) if e <= cap => {
                    out.coeffs.insert(e, c.clone());
                }
                _ => break,
            }
        }
        out
    }

    fn align(a: &QSeries, b: &QSeries) -> (QSeries, QSeries) {
        let delta = lcm_u64(a.delta, b.delta);
        let cutoff = a.cutoff.clone().min(b.cutoff.clone());
        (
            a.regrade(delta).truncate(cutoff.clone()),
            b.regrade(delta).truncate(cutoff),
        )
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let (mut a, b) = Self::align(self, other);
        for (&e, c) in &b.coeffs {
            a.add_term(e, c.clone());
        }
        a
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let (mut a, b) = Self::align(self, other);
        for (&e, c) in &b.coeffs {
            a.add_term(e, -c.clone());
        }
        a
    }

    /// Cauchy product, truncated at the smaller cutoff.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let (a, b) = Self::align(self, other);
        let mut out = QSeries::zero(a.delta, a.cutoff.clone());
        let Some(cap) = out.cap() else {
            return out;
        };
        for (&ea, ca) in &a.coeffs {
            if ea > cap {
                break;
            }
            for (&eb, cb) in &b.coeffs {
                if ea + eb > cap {
                    break;
                }
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Equality of the parts both series determine: re-grade to the common
    /// denominator and compare up to the smaller cutoff.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let (a, b) = Self::align(self, other);
        a.coeffs == b.coeffs
    }
}

/// The finite q-Pochhammer product `(q)_n = (1 - q)(1 - q^2)...(1 - q^n)`.
pub fn pochhammer(n: u64, delta: u64, cutoff: &Rat) -> QSeries {
    let mut out = QSeries::one(delta, cutoff.clone());
    let Some(cap) = out.cap() else {
        return QSeries::zero(delta, cutoff.clone());
    };
    for k in 1..=n {
        let e = match k.checked_mul(delta) {
            Some(e) if e <= cap => e,
            // the factor 1 - q^k is 1 within the truncation window
            _ => continue,
        };
        let mut factor = QSeries::one(delta, cutoff.clone());
        factor.add_term(e, -Int::one());
        out = out.mul(&factor);
    }
    out
}

/// The reciprocal `1 / (q)_n`, i.e. the series inverse of [`pochhammer`];
/// computed as the product of truncated geometric series `sum_j q^{jk}`.
pub fn inv_pochhammer(n: u64, delta: u64, cutoff: &Rat) -> QSeries {
    let mut out = QSeries::one(delta, cutoff.clone());
    let Some(cap) = out.cap() else {
        return QSeries::zero(delta, cutoff.clone());
    };
    for k in 1..=n {
        let step = match k.checked_mul(delta) {
            Some(e) if e <= cap => e,
            _ => continue,
        };
        let mut geom = QSeries::zero(delta, cutoff.clone());
        let mut e = 0u64;
        while e <= cap {
            geom.add_term(e, Int::one());
            e += step;
        }
        out = out.mul(&geom);
    }
    out
}

/// Check the q-pentagon identity
///
/// ```text
/// 1/((q)_m (q)_n) = sum over r,s,t >= 0 with r+s = m, s+t = n of
///                   q^{rt} / ((q)_r (q)_s (q)_t)
/// ```
///
/// as truncated series (integral exponents, so delta = 1).
pub fn q_pentagon_check(m: u64, n: u64, cutoff: &Rat) -> bool {
    let delta = 1;
    let lhs = inv_pochhammer(m, delta, cutoff).mul(&inv_pochhammer(n, delta, cutoff));
    let mut rhs = QSeries::zero(delta, cutoff.clone());
    for s in 0..=m.min(n) {
        let r = m - s;
        let t = n - s;
        let term = QSeries::monomial(delta, cutoff.clone(), r * t)
            .mul(&inv_pochhammer(r, delta, cutoff))
            .mul(&inv_pochhammer(s, delta, cutoff))
            .mul(&inv_pochhammer(t, delta, cutoff));
        rhs = rhs.add(&term);
    }
    lhs.agrees_with(&rhs)
}

/// Product of `1/(q)_{k_t}` over a k-vector, with per-value caching: the same
/// small parts recur across a lattice sum, and this is the dominant cost.
pub struct PochhammerCache {
    delta: u64,
    cutoff: Rat,
    inv: BTreeMap<u64, QSeries>,
}

impl PochhammerCache {
    pub fn new(delta: u64, cutoff: Rat) -> Self {
        PochhammerCache {
            delta,
            cutoff,
            inv: BTreeMap::new(),
        }
    }

    pub fn inv_pochhammer(&mut self, n: u64) -> &QSeries {
        let (delta, cutoff) = (self.delta, self.cutoff.clone());
        self.inv
            .entry(n)
            .or_insert_with(|| inv_pochhammer(n, delta, &cutoff))
    }

    /// `prod_t 1/(q)_{k_t}` (factors with `k_t = 0` are 1 and skipped).
    pub fn inv_product(&mut self, k: &[u64]) -> QSeries {
        let mut out = QSeries::one(self.delta, self.cutoff.clone());
        let mut parts: Vec<u64> = k.iter().copied().filter(|&x| x > 0).collect();
        parts.sort_unstable();
        for n in parts {
            out = out.mul(self.inv_pochhammer(n));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(x: i64) -> Rat {
        Rat::from_integer(x.into())
    }

    fn int(x: i64) -> Int {
        Int::from(x)
    }

    #[test]
    fn mul_difference_of_squares() {
        let mut a = QSeries::one(1, rat(5));
        a.add_term(1, int(1)); // 1 + q
        let mut b = QSeries::one(1, rat(5));
        b.add_term(1, int(-1)); // 1 - q
        let p = a.mul(&b);
        assert_eq!(p.coeff(0), int(1));
        assert_eq!(p.coeff(1), int(0));
        assert_eq!(p.coeff(2), int(-1));
        assert_eq!(p.term_count(), 2);
    }

    #[test]
    fn mul_by_zero() {
        let a = inv_pochhammer(3, 1, &rat(8));
        let z = QSeries::zero(1, rat(8));
        assert!(a.mul(&z).is_zero());
    }

    #[test]
    fn geometric_telescopes() {
        // (sum_n q^n)(1 - q) = 1 at any cutoff
        let geom = inv_pochhammer(1, 1, &rat(12));
        let p1 = pochhammer(1, 1, &rat(12));
        assert!(geom.mul(&p1).agrees_with(&QSeries::one(1, rat(12))));
    }

    #[test]
    fn mul_tracks_min_cutoff() {
        let a = QSeries::one(1, rat(5));
        let b = QSeries::one(1, rat(3));
        assert_eq!(a.mul(&b).cutoff(), &rat(3));
    }

    #[test]
    fn pochhammer_small_cases() {
        assert!(pochhammer(0, 1, &rat(10)).agrees_with(&QSeries::one(1, rat(10))));
        let p2 = pochhammer(2, 1, &rat(10));
        // (q)_2 = 1 - q - q^2 + q^3
        assert_eq!(p2.coeff(0), int(1));
        assert_eq!(p2.coeff(1), int(-1));
        assert_eq!(p2.coeff(2), int(-1));
        assert_eq!(p2.coeff(3), int(1));
        assert_eq!(p2.term_count(), 4);
    }

    #[test]
    fn inv_pochhammer_small_cases() {
        assert!(inv_pochhammer(0, 1, &rat(10)).agrees_with(&QSeries::one(1, rat(10))));
        let g = inv_pochhammer(1, 1, &rat(10));
        for e in 0..=10 {
            assert_eq!(g.coeff(e), int(1));
        }
    }

    #[test]
    fn inv_pochhammer_inverts_pochhammer() {
        let cutoff = rat(20);
        for n in 0..=6 {
            let prod = inv_pochhammer(n, 1, &cutoff).mul(&pochhammer(n, 1, &cutoff));
            assert!(prod.agrees_with(&QSeries::one(1, cutoff.clone())), "n = {n}");
        }
    }

    #[test]
    fn inv_pochhammer_matches_partition_numbers() {
        // with all part sizes available, coefficients are the partition
        // numbers 1, 1, 2, 3, 5, 7, 11, ...
        let p = [1i64, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
        let s = inv_pochhammer(12, 1, &rat(12));
        for (n, &expect) in p.iter().enumerate() {
            assert_eq!(s.coeff(n as u64), int(expect), "p({n})");
        }
    }

    #[test]
    fn inv_pochhammer_counts_partitions_with_bounded_parts() {
        // coefficient of q^e in 1/(q)_n is the number of partitions of e
        // into parts <= n
        let s = inv_pochhammer(3, 1, &rat(8));
        // partitions of 5 into parts <= 3: 3+2, 3+1+1, 2+2+1, 2+1+1+1, 1^5
        assert_eq!(s.coeff(5), int(5));
        // of 6: 3+3, 3+2+1, 3+1^3, 2+2+2, 2+2+1+1, 2+1^4, 1^6
        assert_eq!(s.coeff(6), int(7));
    }

    #[test]
    fn regrade_and_mixed_delta_ops() {
        let a = QSeries::monomial(2, rat(3), 1); // q^{1/2}
        let b = QSeries::monomial(3, rat(3), 1); // q^{1/3}
        let p = a.mul(&b); // q^{5/6}
        assert_eq!(p.delta(), 6);
        assert_eq!(p.coeff(5), int(1));
        assert!(a.regrade(6).agrees_with(&a));
    }

    #[test]
    fn q_pentagon_trivial_and_small() {
        assert!(q_pentagon_check(0, 0, &rat(10)));
        assert!(q_pentagon_check(1, 1, &rat(15)));
        assert!(q_pentagon_check(2, 3, &rat(12)));
    }

    #[test]
    fn cache_matches_direct_product() {
        let cutoff = rat(9);
        let mut cache = PochhammerCache::new(1, cutoff.clone());
        let via_cache = cache.inv_product(&[2, 0, 3, 2]);
        let direct = inv_pochhammer(2, 1, &cutoff)
            .mul(&inv_pochhammer(3, 1, &cutoff))
            .mul(&inv_pochhammer(2, 1, &cutoff));
        assert!(via_cache.agrees_with(&direct));
    }
}
