//! Positive definite binary quadratic forms as half-integral matrices.
//!
//! A [`QForm`] `(a, b, c)` stands for `T = [[a, b/2], [b/2, c]]`. Unimodular
//! matrices act on the right, `T -> tU T U`. Besides Gauss reduction this
//! module decides `Gamma^0(N)`-equivalence with explicit witnesses,
//! enumerates the classes `H(dM^2, L; Gamma^0(N))` and the subset
//! `H_1(dM^2, L; Gamma^0(N))` hit by ray class group elements, and evaluates
//! the closed-form class counts.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::rayclass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QFormError {
    #[error("({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: BigInt, b: BigInt, c: BigInt },
    #[error("{0} is not a negative fundamental discriminant")]
    InvalidDiscriminant(BigInt),
    #[error("parameter {name} must be at least 1")]
    ZeroParameter { name: &'static str },
    #[error("matrix [[{p}, {q}], [{r}, {s}]] does not have determinant 1")]
    NotUnimodular { p: BigInt, q: BigInt, r: BigInt, s: BigInt },
    #[error("class count {count} for (d, M, N) = ({d}, {m}, {n}) is not an integer")]
    NonIntegralCount { d: i64, m: u64, n: u64, count: BigRational },
    #[error("|H_1| = {found} but |Cl_d(MN)| = {expected} for (d, M, L, N) = ({d}, {m}, {l}, {n})")]
    H1CardinalityMismatch { d: i64, m: u64, l: u64, n: u64, found: usize, expected: BigInt },
    #[error("|Cl_{d}({n})| formula gives {formula} but h(d N^2) = {oracle}")]
    RayClassMismatch { d: i64, n: u64, formula: BigInt, oracle: BigInt },
    #[error("form {0} is not Gamma^0({1})-equivalent to any enumerated representative")]
    Unclassified(QForm, u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub type Result<T> = std::result::Result<T, QFormError>;

/// `[[p, q], [r, s]]` with `ps - qr = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMatrix {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    s: BigInt,
}

impl UnimodularMatrix {
    pub fn new(p: BigInt, q: BigInt, r: BigInt, s: BigInt) -> Result<Self> {
        if &p * &s - &q * &r != BigInt::one() {
            return Err(QFormError::NotUnimodular { p, q, r, s });
        }
        Ok(Self { p, q, r, s })
    }

    pub fn from_i64(p: i64, q: i64, r: i64, s: i64) -> Result<Self> {
        Self::new(p.into(), q.into(), r.into(), s.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.p, &self.q, &self.r, &self.s]
    }

    pub fn upper_right(&self) -> &BigInt {
        &self.q
    }

    pub fn lower_left(&self) -> &BigInt {
        &self.r
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            p: &self.p * &rhs.p + &self.q * &rhs.r,
            q: &self.p * &rhs.q + &self.q * &rhs.s,
            r: &self.r * &rhs.p + &self.s * &rhs.r,
            s: &self.r * &rhs.q + &self.s * &rhs.s,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            p: self.s.clone(),
            q: -&self.q,
            r: -&self.r,
            s: self.p.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: -&self.p,
            q: -&self.q,
            r: -&self.r,
            s: -&self.s,
        }
    }

    /// Membership in `Gamma^0(N)`: upper-right entry divisible by `n`.
    pub fn in_gamma_upper(&self, n: u64) -> bool {
        self.q.mod_floor(&BigInt::from(n)).is_zero()
    }

    fn translation(k: BigInt) -> Self {
        Self { p: BigInt::one(), q: k, r: BigInt::zero(), s: BigInt::one() }
    }

    fn lower_translation(k: BigInt) -> Self {
        Self { p: BigInt::one(), q: BigInt::zero(), r: k, s: BigInt::one() }
    }

    fn swap() -> Self {
        Self::from_i64(0, -1, 1, 0).unwrap()
    }
}

impl fmt::Display for UnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}

/// Positive definite half-integral form `[[a, b/2], [b/2, c]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QForm {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QForm {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self> {
        if !a.is_positive() || !c.is_positive() || &b * &b - BigInt::from(4) * &a * &c >= BigInt::zero() {
            return Err(QFormError::NotPositiveDefinite { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// `4 det T = 4ac - b^2 = -disc`.
    pub fn four_det(&self) -> BigInt {
        -self.disc()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        debug_assert!(k.is_positive());
        Self { a: &self.a * k, b: &self.b * k, c: &self.c * k }
    }

    /// Divides every entry by `k`; `None` if `k` does not divide the content.
    pub fn divide(&self, k: &BigInt) -> Option<Self> {
        if k.is_positive() && self.content().mod_floor(k).is_zero() {
            Some(Self { a: &self.a / k, b: &self.b / k, c: &self.c / k })
        } else {
            None
        }
    }

    fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// `tU T U` for any unimodular `U`.
    pub fn transform(&self, u: &UnimodularMatrix) -> Self {
        self.transform_raw(&u.p, &u.q, &u.r, &u.s)
            .expect("unimodular action preserves definiteness")
    }

    /// `tA T A` for an arbitrary integer matrix `A = [[p, q], [r, s]]`;
    /// fails when `A` is singular.
    pub fn transform_raw(&self, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) -> Result<Self> {
        let a = self.eval(p, r);
        let c = self.eval(q, s);
        let b = BigInt::from(2) * &self.a * p * q
            + &self.b * (p * s + q * r)
            + BigInt::from(2) * &self.c * r * s;
        Self::new(a, b, c)
    }

    /// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
    pub fn is_reduced(&self) -> bool {
        let abs_b = self.b.abs();
        if abs_b > self.a || self.a > self.c {
            return false;
        }
        if (abs_b == self.a || self.a == self.c) && self.b.is_negative() {
            return false;
        }
        true
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// The form attached to the maximal order of discriminant `d`.
pub fn s_of_d(d: i64) -> Result<QForm> {
    let db = BigInt::from(d);
    if d >= 0 || !arith::is_fundamental_discriminant(&db) {
        return Err(QFormError::InvalidDiscriminant(db));
    }
    if d.rem_euclid(4) == 0 {
        QForm::new(BigInt::from(-d / 4), BigInt::zero(), BigInt::one())
    } else {
        QForm::new(BigInt::from((1 - d) / 4), BigInt::one(), BigInt::one())
    }
}

/// Gauss reduction. Returns the unique reduced form `R` of the class and a
/// witness `U` with `tU T U = R`.
pub fn reduce(t: &QForm) -> (QForm, UnimodularMatrix) {
    let mut form = t.clone();
    let mut witness = UnimodularMatrix::identity();
    loop {
        let two_a = BigInt::from(2) * &form.a;
        let k = (&form.a - &form.b).div_floor(&two_a);
        if !k.is_zero() {
            let step = UnimodularMatrix::translation(k);
            form = form.transform(&step);
            witness = witness.mul(&step);
        }
        if form.a > form.c {
            let step = UnimodularMatrix::swap();
            form = form.transform(&step);
            witness = witness.mul(&step);
        } else {
            break;
        }
    }
    if form.a == form.c && form.b.is_negative() {
        let step = UnimodularMatrix::swap();
        form = form.transform(&step);
        witness = witness.mul(&step);
    }
    debug_assert!(form.is_reduced());
    (form, witness)
}

/// `E(T) = {g in SL_2(Z) : tg T g = T}`.
pub fn automorphism_group(t: &QForm) -> Vec<UnimodularMatrix> {
    let content = t.content();
    let prim = t.divide(&content).expect("content divides the form");
    let one = UnimodularMatrix::identity();
    let mut group = vec![one.clone(), one.neg()];
    let d0 = prim.disc();
    let two = BigInt::from(2);
    if d0 == BigInt::from(-4) {
        // xi = [[b/2, c], [-a, -b/2]]
        let half_b = &prim.b / &two;
        let xi = UnimodularMatrix::new(half_b.clone(), prim.c.clone(), -&prim.a, -half_b).unwrap();
        group.push(xi.neg());
        group.push(xi);
    } else if d0 == BigInt::from(-3) {
        // +-(1/2 + xi) and +-(-1/2 + xi); b is odd here
        let plus = UnimodularMatrix::new(
            (BigInt::one() + &prim.b) / &two,
            prim.c.clone(),
            -&prim.a,
            (BigInt::one() - &prim.b) / &two,
        )
        .unwrap();
        let minus = UnimodularMatrix::new(
            (&prim.b - BigInt::one()) / &two,
            prim.c.clone(),
            -&prim.a,
            -(BigInt::one() + &prim.b) / &two,
        )
        .unwrap();
        group.push(plus.neg());
        group.push(plus);
        group.push(minus.neg());
        group.push(minus);
    }
    group
}

/// Witness `U in SL_2(Z)` with `tU T1 U = T2`, if any.
pub fn sl2_equivalent(t1: &QForm, t2: &QForm) -> Option<UnimodularMatrix> {
    let (r1, u1) = reduce(t1);
    let (r2, u2) = reduce(t2);
    (r1 == r2).then(|| u1.mul(&u2.inverse()))
}

/// Witness `U in Gamma^0(N)` with `tU T1 U = T2`, if any.
///
/// Every `SL_2(Z)` witness has the form `U1 E U2^-1` with `E` in the
/// automorphism group of the common reduced form, so the scan is finite.
pub fn gamma0_equivalent(t1: &QForm, t2: &QForm, n: u64) -> Option<UnimodularMatrix> {
    let (r1, u1) = reduce(t1);
    let (r2, u2) = reduce(t2);
    if r1 != r2 {
        return None;
    }
    let u2_inv = u2.inverse();
    automorphism_group(&r1)
        .iter()
        .map(|e| u1.mul(e).mul(&u2_inv))
        .find(|w| w.in_gamma_upper(n))
}

/// `[SL_2(Z) : Gamma^0(N)] = N prod_{p | N} (1 + 1/p)`.
pub fn gamma0_index(n: u64) -> u64 {
    arith::prime_divisors(n)
        .into_iter()
        .fold(n, |acc, p| acc / p * (p + 1))
}

/// Representatives of `SL_2(Z) / Gamma^0(N)` with second column `(u, v)`,
/// `v | N`, `u` running over residues mod `N/v`.
pub fn coset_reps_gamma0(n: u64) -> Result<Vec<UnimodularMatrix>> {
    if n == 0 {
        return Err(QFormError::ZeroParameter { name: "N" });
    }
    let mut reps = Vec::new();
    for v in arith::divisors(n) {
        let w = n / v;
        let g = v.gcd(&w);
        for u0 in 0..w {
            if u0.gcd(&g) != 1 {
                continue;
            }
            // lift u0 mod w to some u coprime to v
            let u = (0..)
                .map(|k| u0 + k * w)
                .find(|u| u.gcd(&v) == 1)
                .expect("a coprime lift exists");
            let (ub, vb) = (BigInt::from(u), BigInt::from(v));
            let (_, x, y) = arith::ext_gcd(&vb, &ub);
            // x v + y u = 1, so [[x, u], [-y, v]] has determinant 1
            reps.push(UnimodularMatrix::new(x, ub, -y, vb)?);
        }
    }
    Ok(reps)
}

/// All reduced primitive forms of discriminant `disc < 0`.
pub fn reduced_forms(disc: &BigInt) -> Vec<QForm> {
    assert!(disc.is_negative());
    let abs = disc.abs();
    let four = BigInt::from(4);
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while BigInt::from(3) * &a * &a <= abs {
        let mut b = -&a + BigInt::one();
        while b <= a {
            if (&b - disc).is_even() {
                let num = &b * &b - disc;
                let den = &four * &a;
                if num.mod_floor(&den).is_zero() {
                    let c = num / den;
                    if c >= a && !(c == a && b.is_negative()) && a.gcd(&b).gcd(&c).is_one() {
                        out.push(QForm { a: a.clone(), b: b.clone(), c });
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out
}

/// Representatives of `H(dM^2, L; Gamma^0(N))` or its subset `H_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSet {
    pub d: i64,
    pub m: u64,
    pub l: u64,
    pub n: u64,
    pub representatives: Vec<QForm>,
}

impl ClassSet {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// `d L^2 M^2`.
    pub fn discriminant(&self) -> BigInt {
        BigInt::from(self.d) * BigInt::from(self.l * self.m).pow(2)
    }
}

pub(crate) fn validate(d: i64, m: u64, l: u64, n: u64) -> Result<()> {
    let db = BigInt::from(d);
    if d >= 0 || !arith::is_fundamental_discriminant(&db) {
        return Err(QFormError::InvalidDiscriminant(db));
    }
    for (name, v) in [("M", m), ("L", l), ("N", n)] {
        if v == 0 {
            return Err(QFormError::ZeroParameter { name });
        }
    }
    Ok(())
}

/// Enumerates `H(dM^2, L; Gamma^0(N))` by moving the reduced forms of
/// discriminant `dM^2` (scaled by `L`) through the cosets of `Gamma^0(N)` and
/// discarding equivalent duplicates.
pub fn enumerate_classes(d: i64, m: u64, l: u64, n: u64) -> Result<ClassSet> {
    validate(d, m, l, n)?;
    let disc = BigInt::from(d) * BigInt::from(m).pow(2);
    let lb = BigInt::from(l);
    let cosets = coset_reps_gamma0(n)?;
    let mut representatives = Vec::new();
    for s in reduced_forms(&disc) {
        let scaled = s.scale(&lb);
        // forms from distinct reduced S are never SL_2(Z)-equivalent
        let mut local: Vec<QForm> = Vec::new();
        for a in &cosets {
            let cand = scaled.transform(a);
            if !local.iter().any(|r| gamma0_equivalent(&cand, r, n).is_some()) {
                local.push(cand);
            }
        }
        representatives.extend(local);
    }
    Ok(ClassSet { d, m, l, n, representatives })
}

fn u_of_d(d: i64) -> u64 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// `N prod_{p | N} (1 + 1/p)` as a rational.
fn psi_factor(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(gamma0_index(n)))
}

/// Closed-form `|H(dM^2, L; Gamma^0(N))|`.
pub fn count_classes_formula(d: i64, m: u64, l: u64, n: u64) -> Result<BigInt> {
    validate(d, m, l, n)?;
    let db = BigInt::from(d);
    let psi = psi_factor(n);
    let count = if (d == -4 || d == -3) && m == 1 {
        let (weight, roots) = if d == -4 {
            (2u32, arith::count_roots_minus_one(n)?)
        } else {
            (3u32, 2 * arith::count_roots_omega(n)?)
        };
        (psi + BigRational::from_integer(roots.into())) / BigRational::from_integer(weight.into())
    } else {
        let h = BigInt::from(reduced_forms(&db).len());
        let mut t = BigRational::new(h * BigInt::from(m), BigInt::from(u_of_d(d)));
        for p in arith::prime_divisors(m) {
            let chi = arith::kronecker(&db, &BigInt::from(p));
            t *= BigRational::one() - BigRational::new(BigInt::from(chi), BigInt::from(p));
        }
        t * psi
    };
    if !count.is_integer() {
        return Err(QFormError::NonIntegralCount { d, m, n, count });
    }
    Ok(count.to_integer())
}

/// Whether `tS` satisfies the congruences that cut out ray class images at
/// level `k`: `gcd(c, k) = 1` and `b = b0 (mod 2k)`, `b0` the middle entry of
/// `S(d)`.
fn in_ray_orbit(s: &QForm, b0: &BigInt, k: u64) -> bool {
    let kb = BigInt::from(k);
    s.c.gcd(&kb).is_one() && (&s.b - b0).mod_floor(&(BigInt::from(2) * &kb)).is_zero()
}

/// Enumerates `H_1(dM^2, L; Gamma^0(N))`: the classes containing a matrix
/// `L diag(M,1) S diag(M,1)` with `S` primitive of discriminant `d` lying, at
/// every `p | MN`, in the orbit of `S(d)` under matrices diagonal mod
/// `p^{ord_p MN}`. The result is checked against `|Cl_d(MN)|`.
pub fn h1_classes(d: i64, m: u64, l: u64, n: u64) -> Result<ClassSet> {
    let full = enumerate_classes(d, m, l, n)?;
    let k = m * n;
    let db = BigInt::from(d);
    let b0 = s_of_d(d)?.b;
    let (mb, lb) = (BigInt::from(m), BigInt::from(l));

    let mut by_reduced: HashMap<QForm, Vec<usize>> = HashMap::new();
    for (i, rep) in full.representatives.iter().enumerate() {
        by_reduced.entry(reduce(rep).0).or_default().push(i);
    }

    // Right multiplication by matrices diagonal mod k preserves both the
    // congruences and the Gamma^0(N)-class, so one g per coset suffices.
    let mut shifts = Vec::new();
    for a in coset_reps_gamma0(k)? {
        for w in 0..k {
            shifts.push(a.mul(&UnimodularMatrix::lower_translation(BigInt::from(w))));
        }
    }

    let mut hit = vec![false; full.len()];
    let mut seen: HashMap<QForm, usize> = HashMap::new();
    for s_j in reduced_forms(&db) {
        for g in &shifts {
            let s = s_j.transform(g);
            if !in_ray_orbit(&s, &b0, k) {
                continue;
            }
            let t = QForm { a: &s.a * &mb * &mb, b: &s.b * &mb, c: s.c.clone() }.scale(&lb);
            if let Some(&i) = seen.get(&t) {
                hit[i] = true;
                continue;
            }
            let reduced = reduce(&t).0;
            let idx = by_reduced
                .get(&reduced)
                .and_then(|cands| {
                    cands
                        .iter()
                        .copied()
                        .find(|&i| gamma0_equivalent(&t, &full.representatives[i], n).is_some())
                })
                .ok_or_else(|| QFormError::Unclassified(t.clone(), n))?;
            hit[idx] = true;
            seen.insert(t, idx);
        }
    }

    let representatives: Vec<QForm> = full
        .representatives
        .iter()
        .zip(&hit)
        .filter(|(_, &h)| h)
        .map(|(r, _)| r.clone())
        .collect();
    let expected = rayclass::raycl_size(d, k)?;
    if BigInt::from(representatives.len()) != expected {
        return Err(QFormError::H1CardinalityMismatch {
            d,
            m,
            l,
            n,
            found: representatives.len(),
            expected,
        });
    }
    Ok(ClassSet { d, m, l, n, representatives })
}

/// `(dM^2 / p) = -1` for every prime `p | N`.
pub fn is_phi_surjective(d: i64, m: u64, n: u64) -> bool {
    let dm2 = BigInt::from(d) * BigInt::from(m).pow(2);
    arith::prime_divisors(n)
        .into_iter()
        .all(|p| arith::kronecker(&dm2, &BigInt::from(p)) == -1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> QForm {
        QForm::from_i64(a, b, c).unwrap()
    }

    #[test]
    fn rejects_indefinite_and_degenerate() {
        assert!(QForm::from_i64(1, 3, 1).is_err());
        assert!(QForm::from_i64(1, 2, 1).is_err());
        assert!(QForm::from_i64(-1, 0, -1).is_err());
        assert!(UnimodularMatrix::from_i64(1, 1, 1, 1).is_err());
    }

    #[test]
    fn s_of_d_examples() {
        assert_eq!(s_of_d(-4).unwrap(), f(1, 0, 1));
        assert_eq!(s_of_d(-3).unwrap(), f(1, 1, 1));
        assert_eq!(s_of_d(-7).unwrap(), f(2, 1, 1));
        assert_eq!(s_of_d(-20).unwrap(), f(5, 0, 1));
        assert!(s_of_d(-12).is_err());
        assert!(s_of_d(5).is_err());
        for d in [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24] {
            let s = s_of_d(d).unwrap();
            assert_eq!(s.disc(), BigInt::from(d));
            assert!(s.content().is_one());
        }
    }

    #[test]
    fn reduce_examples() {
        let (r, u) = reduce(&f(2, 2, 3));
        assert_eq!(r, f(2, 2, 3));
        assert_eq!(u, UnimodularMatrix::identity());
        let (r, u) = reduce(&f(3, 2, 2));
        assert_eq!(r, f(2, 2, 3));
        assert_eq!(f(3, 2, 2).transform(&u), r);
        let (r, u) = reduce(&f(1, 0, 1));
        assert_eq!(r, f(1, 0, 1));
        assert_eq!(u, UnimodularMatrix::identity());
        // boundary cases pick b >= 0
        assert_eq!(reduce(&f(2, -2, 3)).0, f(2, 2, 3));
        assert_eq!(reduce(&f(3, -1, 3)).0, f(3, 1, 3));
    }

    #[test]
    fn automorphism_group_orders() {
        assert_eq!(automorphism_group(&f(1, 0, 1)).len(), 4);
        assert_eq!(automorphism_group(&f(1, 1, 1)).len(), 6);
        assert_eq!(automorphism_group(&f(1, 0, 2)).len(), 2);
        // M > 1 over d = -4
        assert_eq!(automorphism_group(&f(1, 0, 4)).len(), 2);
        // content does not matter
        assert_eq!(automorphism_group(&f(3, 3, 3)).len(), 6);
        for t in [f(1, 0, 1), f(1, 1, 1), f(2, 2, 2), f(5, 4, 1), f(7, 7, 7)] {
            for g in automorphism_group(&t) {
                assert_eq!(t.transform(&g), t);
            }
        }
    }

    /// Exhaustive stabilizer search over matrices with small entries.
    fn brute_stabilizer(t: &QForm, bound: i64) -> usize {
        let mut count = 0;
        for p in -bound..=bound {
            for q in -bound..=bound {
                for r in -bound..=bound {
                    for s in -bound..=bound {
                        if p * s - q * r == 1 {
                            let u = UnimodularMatrix::from_i64(p, q, r, s).unwrap();
                            if t.transform(&u) == *t {
                                count += 1;
                            }
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn automorphism_group_matches_search_on_reduced_forms() {
        for t in [f(1, 0, 1), f(1, 1, 1), f(2, 2, 3), f(1, 0, 5), f(2, 0, 2), f(1, 1, 2)] {
            assert_eq!(automorphism_group(&t).len(), brute_stabilizer(&t, 3), "{t}");
        }
    }

    #[test]
    fn sl2_equivalence_examples() {
        assert_eq!(sl2_equivalent(&f(1, 0, 1), &f(1, 0, 1)), Some(UnimodularMatrix::identity()));
        let w = sl2_equivalent(&f(3, 2, 2), &f(2, 2, 3)).unwrap();
        assert_eq!(f(3, 2, 2).transform(&w), f(2, 2, 3));
        assert!(sl2_equivalent(&f(1, 0, 5), &f(2, 2, 3)).is_none());
    }

    #[test]
    fn gamma0_equivalence_examples() {
        let t = f(2, 1, 4);
        assert_eq!(gamma0_equivalent(&t, &t, 7), Some(UnimodularMatrix::identity()));
        let a = UnimodularMatrix::from_i64(1, 3, 0, 1).unwrap();
        let i2 = f(1, 0, 1);
        let w = gamma0_equivalent(&i2, &i2.transform(&a), 3).unwrap();
        assert!(w.in_gamma_upper(3));
        assert_eq!(i2.transform(&w), i2.transform(&a));
    }

    /// Breadth-first search over words in generators of `Gamma^0(2)`.
    fn gamma0_2_words_reach(t1: &QForm, t2: &QForm, depth: usize) -> bool {
        let gens = [
            UnimodularMatrix::from_i64(1, 2, 0, 1).unwrap(),
            UnimodularMatrix::from_i64(1, -2, 0, 1).unwrap(),
            UnimodularMatrix::from_i64(1, 0, 1, 1).unwrap(),
            UnimodularMatrix::from_i64(1, 0, -1, 1).unwrap(),
            UnimodularMatrix::from_i64(-1, 0, 0, -1).unwrap(),
        ];
        let mut frontier = vec![t1.clone()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(t1.clone());
        for _ in 0..depth {
            let mut next = Vec::new();
            for form in &frontier {
                for g in &gens {
                    let img = form.transform(g);
                    if img == *t2 {
                        return true;
                    }
                    if seen.insert(img.clone()) {
                        next.push(img);
                    }
                }
            }
            frontier = next;
        }
        seen.contains(t2)
    }

    #[test]
    fn gamma0_level_two_agrees_with_word_search() {
        let i2 = f(1, 0, 1);
        let a = UnimodularMatrix::from_i64(1, 1, 0, 1).unwrap();
        let target = i2.transform(&a);
        let scan = gamma0_equivalent(&i2, &target, 2);
        assert_eq!(scan.is_some(), gamma0_2_words_reach(&i2, &target, 8));
        if let Some(w) = scan {
            assert!(w.in_gamma_upper(2));
            assert_eq!(i2.transform(&w), target);
        }
        // pairs from the coset orbit of a few forms
        for base in [f(1, 0, 1), f(1, 1, 1), f(2, 2, 3)] {
            let orbit: Vec<_> = coset_reps_gamma0(2).unwrap().iter().map(|a| base.transform(a)).collect();
            for x in &orbit {
                for y in &orbit {
                    assert_eq!(
                        gamma0_equivalent(x, y, 2).is_some(),
                        gamma0_2_words_reach(x, y, 8),
                        "{x} vs {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn coset_representatives() {
        assert_eq!(coset_reps_gamma0(1).unwrap(), vec![UnimodularMatrix::identity()]);
        assert_eq!(coset_reps_gamma0(2).unwrap().len(), 3);
        assert_eq!(coset_reps_gamma0(6).unwrap().len(), 12);
        assert!(coset_reps_gamma0(0).is_err());
        for n in 1..=40u64 {
            let reps = coset_reps_gamma0(n).unwrap();
            assert_eq!(reps.len() as u64, gamma0_index(n), "N = {n}");
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    assert!(!a.inverse().mul(b).in_gamma_upper(n), "N = {n}: {a} ~ {b}");
                }
            }
        }
    }

    #[test]
    fn reduced_form_lists() {
        assert_eq!(reduced_forms(&BigInt::from(-20)), vec![f(1, 0, 5), f(2, 2, 3)]);
        assert_eq!(reduced_forms(&BigInt::from(-23)), vec![f(1, 1, 6), f(2, -1, 3), f(2, 1, 3)]);
        assert_eq!(reduced_forms(&BigInt::from(-4)), vec![f(1, 0, 1)]);
        // primitive only: (2, 2, 2) has content 2
        assert_eq!(reduced_forms(&BigInt::from(-12)), vec![f(1, 0, 3)]);
    }

    #[test]
    fn enumerate_examples() {
        let c = enumerate_classes(-20, 1, 1, 1).unwrap();
        assert_eq!(c.representatives, vec![f(1, 0, 5), f(2, 2, 3)]);
        let c = enumerate_classes(-20, 1, 3, 1).unwrap();
        assert_eq!(c.representatives, vec![f(3, 0, 15), f(6, 6, 9)]);
        assert_eq!(enumerate_classes(-4, 1, 1, 1).unwrap().representatives, vec![f(1, 0, 1)]);
        assert_eq!(enumerate_classes(-3, 1, 1, 5).unwrap().len(), 2);
        assert!(enumerate_classes(-5, 1, 1, 1).is_err());
        assert!(enumerate_classes(-4, 0, 1, 1).is_err());
    }

    #[test]
    fn formula_examples() {
        assert_eq!(count_classes_formula(-20, 1, 1, 3).unwrap(), BigInt::from(8));
        assert_eq!(count_classes_formula(-4, 1, 1, 5).unwrap(), BigInt::from(4));
        assert_eq!(count_classes_formula(-3, 1, 1, 1).unwrap(), BigInt::from(1));
        assert_eq!(count_classes_formula(-3, 1, 1, 5).unwrap(), BigInt::from(2));
        assert_eq!(enumerate_classes(-20, 1, 1, 3).unwrap().len(), 8);
    }

    #[test]
    fn class_sets_respect_invariants() {
        let c = enumerate_classes(-7, 2, 3, 4).unwrap();
        for r in &c.representatives {
            assert_eq!(r.disc(), c.discriminant());
            assert_eq!(r.content(), BigInt::from(3));
        }
        for (i, x) in c.representatives.iter().enumerate() {
            for y in &c.representatives[i + 1..] {
                assert!(gamma0_equivalent(x, y, 4).is_none());
            }
        }
    }

    #[test]
    fn h1_examples() {
        let h = enumerate_classes(-4, 1, 1, 3).unwrap();
        assert_eq!(h1_classes(-4, 1, 1, 3).unwrap().representatives, h.representatives);
        assert_eq!(h1_classes(-4, 1, 1, 5).unwrap().len(), 2);
        assert_eq!(h1_classes(-3, 1, 1, 1).unwrap().representatives, vec![f(1, 1, 1)]);
    }

    #[test]
    fn surjectivity_examples() {
        assert!(is_phi_surjective(-4, 1, 3));
        assert!(!is_phi_surjective(-4, 1, 5));
        assert!(is_phi_surjective(-3, 1, 1));
        // p | gcd(M, N) gives symbol 0
        assert!(!is_phi_surjective(-4, 3, 3));
    }

    proptest::proptest! {
        #[test]
        fn reduction_is_idempotent_with_valid_witness(
            a in 1i64..200, b in -200i64..200, c in 1i64..200,
        ) {
            proptest::prop_assume!(b * b < 4 * a * c);
            let t = f(a, b, c);
            let (r, u) = reduce(&t);
            proptest::prop_assert!(r.is_reduced());
            proptest::prop_assert_eq!(t.transform(&u), r.clone());
            let (rr, uu) = reduce(&r);
            proptest::prop_assert_eq!(rr, r);
            proptest::prop_assert_eq!(uu, UnimodularMatrix::identity());
        }

        #[test]
        fn gl2_action_preserves_content_and_scales_disc(
            a in 1i64..60, c in 1i64..60, b_seed in 0i64..1000,
            word in proptest::collection::vec(-5i64..6, 1..6), flip in proptest::bool::ANY,
        ) {
            // |b| < 2 sqrt(ac)
            let mut bmax = 0i64;
            while (bmax + 1) * (bmax + 1) < 4 * a * c {
                bmax += 1;
            }
            let b = b_seed % (2 * bmax + 1) - bmax;
            // U = prod T^k S, optionally times diag(-1, 1)
            let (mut p, mut q, mut r, mut s) = (1i64, 0i64, 0i64, 1i64);
            for k in word {
                let (p1, q1, r1, s1) = (p, p * k + q, r, r * k + s);
                (p, q, r, s) = (q1, -p1, s1, -r1);
            }
            if flip {
                (p, r) = (-p, -r);
            }
            let det = p * s - q * r;
            let t = f(a, b, c);
            let img = t.transform_raw(&p.into(), &q.into(), &r.into(), &s.into()).unwrap();
            proptest::prop_assert_eq!(img.content(), t.content());
            proptest::prop_assert_eq!(img.disc(), t.disc() * BigInt::from(det * det));
        }
    }
}
