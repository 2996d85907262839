//! Genus-two theta constants with half-integral characteristics.
//!
//! `theta_{a,b}(Z) = sum_{n in Z^2} e(1/2 t(n + a/2) Z (n + a/2) + t(n + a/2) b/2)`.
//! Writing `y = 2n + a`, the term is `i^{y.b} e(tr(T_y Z))` with
//! `T_y = y tY / 8`. Exponents are stored as integer triples
//! `(a8, b8, c8) = (8 T_11, 16 T_12, 8 T_22)`, so `T = [[a8/8, b8/16], [b8/16, c8/8]]`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::SkliftError;

/// Exponent `T` in units of 1/8: `(8 T_11, 16 T_12, 8 T_22)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpKey {
    pub a8: i64,
    pub b8: i64,
    pub c8: i64,
}

impl ExpKey {
    pub fn add(self, other: ExpKey) -> ExpKey {
        ExpKey { a8: self.a8 + other.a8, b8: self.b8 + other.b8, c8: self.c8 + other.c8 }
    }

    /// `T` is positive semidefinite.
    pub fn is_psd(&self) -> bool {
        self.a8 >= 0 && self.c8 >= 0 && self.b8 * self.b8 <= 4 * self.a8 * self.c8
    }
}

/// A down-closed region of exponents, described through the diagonal entries
/// of `T`. Products of series supported on positive semidefinite exponents
/// are exact inside such a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// `tr T <= bound`
    Trace(i64),
    /// union of boxes `T_11 <= x, T_22 <= y`
    Boxes(Vec<(i64, i64)>),
}

impl Truncation {
    pub fn contains(&self, key: &ExpKey) -> bool {
        match self {
            Truncation::Trace(t) => key.a8 + key.c8 <= 8 * t,
            Truncation::Boxes(boxes) => boxes.iter().any(|&(x, y)| key.a8 <= 8 * x && key.c8 <= 8 * y),
        }
    }

    /// Largest `8 T_11` and `8 T_22` admitted anywhere in the region.
    fn extent(&self) -> (i64, i64) {
        match self {
            Truncation::Trace(t) => (8 * t, 8 * t),
            Truncation::Boxes(boxes) => boxes
                .iter()
                .fold((0, 0), |(x, y), &(bx, by)| (x.max(8 * bx), y.max(8 * by))),
        }
    }
}

/// Theta characteristic `(a, b)` with `a, b in {0, 1}^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Characteristic {
    a: [u8; 2],
    b: [u8; 2],
}

impl Characteristic {
    /// Accepts only even characteristics (`a.b` even).
    pub fn new(a: [u8; 2], b: [u8; 2]) -> Result<Self, SkliftError> {
        if a.iter().chain(&b).any(|&x| x > 1) {
            return Err(SkliftError::InvalidCharacteristic { a, b });
        }
        if (a[0] * b[0] + a[1] * b[1]) % 2 == 1 {
            return Err(SkliftError::OddCharacteristic { a, b });
        }
        Ok(Self { a, b })
    }

    /// The ten even characteristics in genus two.
    pub fn all_even() -> Vec<Self> {
        let mut out = Vec::new();
        for bits in 0..16u8 {
            let a = [bits & 1, (bits >> 1) & 1];
            let b = [(bits >> 2) & 1, (bits >> 3) & 1];
            if let Ok(ch) = Self::new(a, b) {
                out.push(ch);
            }
        }
        out
    }

    pub fn a(&self) -> [u8; 2] {
        self.a
    }

    pub fn b(&self) -> [u8; 2] {
        self.b
    }
}

/// Truncated Fourier expansion with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    terms: HashMap<ExpKey, BigInt>,
    truncation: Truncation,
}

fn odd_range(limit_sq: i64, parity: u8) -> Vec<i64> {
    let mut out = Vec::new();
    let mut y = parity as i64;
    while y * y <= limit_sq {
        out.push(y);
        if y != 0 {
            out.push(-y);
        }
        y += 2;
    }
    out
}

/// Expansion of `theta_{a,b}` complete inside `truncation`.
pub fn theta_constant(ch: Characteristic, truncation: &Truncation) -> ThetaSeries {
    let (max_a8, max_c8) = truncation.extent();
    let mut terms: HashMap<ExpKey, BigInt> = HashMap::new();
    for y1 in odd_range(max_a8, ch.a[0]) {
        for y2 in odd_range(max_c8, ch.a[1]) {
            let key = ExpKey { a8: y1 * y1, b8: 2 * y1 * y2, c8: y2 * y2 };
            if !truncation.contains(&key) {
                continue;
            }
            // phase i^{y.b}; y.b is even for even characteristics
            let e = y1 * ch.b[0] as i64 + y2 * ch.b[1] as i64;
            debug_assert_eq!(e.rem_euclid(2), 0);
            let sign = if (e / 2).rem_euclid(2) == 0 { 1 } else { -1 };
            *terms.entry(key).or_insert_with(BigInt::zero) += sign;
        }
    }
    terms.retain(|_, v| !v.is_zero());
    ThetaSeries { terms, truncation: truncation.clone() }
}

impl ThetaSeries {
    pub fn one(truncation: &Truncation) -> Self {
        let mut terms = HashMap::new();
        terms.insert(ExpKey { a8: 0, b8: 0, c8: 0 }, BigInt::from(1));
        Self { terms, truncation: truncation.clone() }
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn coefficient(&self, key: &ExpKey) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpKey, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Truncated product. Both factors must share the truncation.
    pub fn mul(&self, other: &ThetaSeries) -> Result<ThetaSeries, SkliftError> {
        if self.truncation != other.truncation {
            return Err(SkliftError::TruncationMismatch);
        }
        // iterate the smaller series in the inner loop
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut small_terms: Vec<(ExpKey, &BigInt)> = small.terms.iter().map(|(k, v)| (*k, v)).collect();
        small_terms.sort_by_key(|(k, _)| (k.a8, k.c8));
        let mut out: HashMap<ExpKey, BigInt> = HashMap::with_capacity(big.len() * 2);
        for (k1, v1) in &big.terms {
            for (k2, v2) in &small_terms {
                let key = k1.add(*k2);
                if !self.truncation.contains(&key) {
                    continue;
                }
                let prod = v1 * *v2;
                match out.get_mut(&key) {
                    Some(acc) => *acc += prod,
                    None => {
                        out.insert(key, prod);
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        Ok(ThetaSeries { terms: out, truncation: self.truncation.clone() })
    }

    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|v| v.abs()).max().unwrap_or_default()
    }
}
