//! Exact Fourier coefficient tables of degree-2 Siegel cusp forms and the
//! line-oriented `SFC` text format.
//!
//! ```text
//! SFC 1
//! k 10 N1 1 N2 1 bound 10
//! 1 1 1 1/1
//! 1 0 1 -2/1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Result, SkliftError};
use crate::qform::QForm;

/// Coefficients `a(F, T)` keyed by positive definite `T`.
///
/// Complete for every `T` with `max(a, c) <= bound`: an absent key inside the
/// box is a zero coefficient. Keys outside the box may be stored; absent keys
/// outside the box are unknown and reading them is an error.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierTable {
    weight: u32,
    n1: u64,
    n2: u64,
    bound: u64,
    coeffs: BTreeMap<QForm, BigRational>,
}

impl FourierTable {
    pub fn new(weight: u32, n1: u64, n2: u64, bound: u64) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n2 % n1 != 0 {
            return Err(SkliftError::InvalidLevel { n1, n2 });
        }
        Ok(Self { weight, n1, n2, bound, coeffs: BTreeMap::new() })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn n2(&self) -> u64 {
        self.n2
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stored entries in key order, including explicit zeros.
    pub fn entries(&self) -> impl Iterator<Item = (&QForm, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn contains_key(&self, t: &QForm) -> bool {
        self.coeffs.contains_key(t)
    }

    /// `max(a, c) <= bound`.
    pub fn in_box(&self, t: &QForm) -> bool {
        let b = BigInt::from(self.bound);
        t.a() <= &b && t.c() <= &b
    }

    /// Stores (or overwrites) a coefficient.
    pub fn set(&mut self, t: QForm, value: BigRational) {
        self.coeffs.insert(t, value);
    }

    /// `a(T)`; zero for absent in-box keys, an error for absent keys outside.
    pub fn get(&self, t: &QForm) -> Result<BigRational> {
        match self.coeffs.get(t) {
            Some(v) => Ok(v.clone()),
            None if self.in_box(t) => Ok(BigRational::zero()),
            None => Err(SkliftError::OutOfBound(t.clone())),
        }
    }

    /// All positive definite `T` with `max(a, c) <= bound`, sorted.
    pub fn box_forms(&self) -> Vec<QForm> {
        box_forms(self.bound)
    }

    /// Box forms together with stored keys outside the box, sorted.
    pub fn known_forms(&self) -> Vec<QForm> {
        let mut out = self.box_forms();
        out.extend(self.coeffs.keys().filter(|t| !self.in_box(t)).cloned());
        out.sort();
        out
    }

    pub fn to_sfc(&self) -> String {
        let mut s = String::new();
        s.push_str("SFC 1\n");
        let _ = writeln!(s, "k {} N1 {} N2 {} bound {}", self.weight, self.n1, self.n2, self.bound);
        for (t, v) in &self.coeffs {
            let _ = writeln!(s, "{} {} {} {}/{}", t.a(), t.b(), t.c(), v.numer(), v.denom());
        }
        s
    }

    pub fn from_sfc(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let perr = |line: usize, msg: String| SkliftError::Parse { line, msg };

        let (ln, magic) = lines.next().ok_or_else(|| perr(1, "empty input".into()))?;
        if magic.trim() != "SFC 1" {
            return Err(perr(ln, format!("expected `SFC 1`, found `{}`", magic.trim())));
        }
        let (ln, header) = lines.next().ok_or_else(|| perr(2, "missing header line".into()))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 8 || toks[0] != "k" || toks[2] != "N1" || toks[4] != "N2" || toks[6] != "bound" {
            return Err(perr(ln, "expected `k <weight> N1 <n1> N2 <n2> bound <B>`".into()));
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| perr(ln, format!("invalid {what} `{s}`")))
        };
        let weight = u32::try_from(num(toks[1], "weight")?).map_err(|_| perr(ln, "weight too large".into()))?;
        let n1 = num(toks[3], "N1")?;
        let n2 = num(toks[5], "N2")?;
        let bound = num(toks[7], "bound")?;
        let mut table = Self::new(weight, n1, n2, bound).map_err(|e| perr(ln, e.to_string()))?;

        for (ln, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 {
                return Err(perr(ln, format!("expected `a b c num/den`, found `{line}`")));
            }
            let int = |s: &str| -> Result<BigInt> {
                s.parse::<BigInt>().map_err(|_| perr(ln, format!("invalid integer `{s}`")))
            };
            let (a, b, c) = (int(toks[0])?, int(toks[1])?, int(toks[2])?);
            let t = QForm::new(a, b, c).map_err(|e| perr(ln, e.to_string()))?;
            let value = parse_rational(toks[3]).ok_or_else(|| perr(ln, format!("malformed rational `{}`", toks[3])))?;
            if table.coeffs.contains_key(&t) {
                return Err(perr(ln, format!("duplicate key {t}")));
            }
            table.coeffs.insert(t, value);
        }
        Ok(table)
    }
}

/// `num/den` with an optional sign on `num` and `den > 0`.
fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    let n_body = n.strip_prefix('-').unwrap_or(n);
    if !digits(n_body) || !digits(d) {
        return None;
    }
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if !d.is_positive() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Positive definite `(a, b, c)` with `max(a, c) <= bound`, sorted.
pub fn box_forms(bound: u64) -> Vec<QForm> {
    let bound = bound as i64;
    let mut out = Vec::new();
    for a in 1..=bound {
        for c in 1..=bound {
            let lim = 4 * a * c;
            let mut b = 0i64;
            while (b + 1) * (b + 1) < lim {
                b += 1;
            }
            for b in -b..=b {
                out.push(QForm::from_i64(a, b, c).expect("b^2 < 4ac"));
            }
        }
    }
    out.sort();
    out
}
