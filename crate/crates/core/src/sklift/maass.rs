//! Maass relations on Fourier coefficient tables.
//!
//! Classical (level 1):
//! `a(T) = sum_{r | gcd(a,b,c)} r^{k-1} a((ac/r^2, b/r, 1))`.
//!
//! Level `(N1, N2)`, for `T = L T0` with `L | N2^inf` and
//! `(disc T0 / p) = -1` for every `p | N1`:
//! `a(L T0) = sum_{r | gcd(T0), gcd(r, N2) = 1} r^{k-1} a(L (a0 c0/r^2, b0/r, 1))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::table::FourierTable;
use super::{Result, SkliftError};
use crate::arith;
use crate::qform::QForm;

fn require_level_one(table: &FourierTable) -> Result<()> {
    if table.n1() != 1 || table.n2() != 1 {
        return Err(SkliftError::LevelMismatch { n1: table.n1(), n2: table.n2(), e1: 1, e2: 1 });
    }
    Ok(())
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if let Some(small) = n.to_u64() {
        return arith::divisors(small).into_iter().map(BigInt::from).collect();
    }
    let f = arith::factor(&n).expect("content is nonzero");
    let mut out = vec![BigInt::one()];
    for (p, e) in f.factors() {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=*e {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `sum_r r^{k-1} a(L (a0 c0 / r^2, b0 / r, 1))` over `r | gcd(T0)` coprime to `n2`.
fn maass_rhs(table: &FourierTable, t0: &QForm, l: &BigInt, n2: u64) -> Result<BigRational> {
    let g = t0.content();
    let ac = t0.a() * t0.c();
    let n2b = BigInt::from(n2);
    let mut rhs = BigRational::zero();
    for r in positive_divisors(&g) {
        if !r.gcd(&n2b).is_one() {
            continue;
        }
        let inner = QForm::new(&ac / (&r * &r), t0.b() / &r, BigInt::one())?;
        let coeff = table.get(&inner.scale(l))?;
        let weight = num_traits::pow(r, table.weight() as usize - 1);
        rhs += coeff * BigRational::from_integer(weight);
    }
    Ok(rhs)
}

/// Right-hand side of the classical relation at `T`.
pub fn maass_rhs_classical(table: &FourierTable, t: &QForm) -> Result<BigRational> {
    require_level_one(table)?;
    maass_rhs(table, t, &BigInt::one(), 1)
}

/// Classical Maass relation at `T` on a level-(1, 1) table. Reading a
/// coefficient outside the table is an error, never `false`.
pub fn maass_check_classical(table: &FourierTable, t: &QForm) -> Result<bool> {
    let lhs = table.get(t)?;
    Ok(lhs == maass_rhs_classical(table, t)?)
}

/// Level-`(N1, N2)` relation at `T = L T0`.
///
/// `L` must divide the content of `T` and have all prime factors dividing
/// `N2`. Inputs violating the Kronecker condition on `disc T0` are rejected
/// as [`SkliftError::NotApplicable`].
pub fn maass_check_level_n(table: &FourierTable, t: &QForm, l: u64) -> Result<bool> {
    if table.weight() == 0 {
        return Err(SkliftError::NotApplicable { t: t.clone(), reason: "weight 0".into() });
    }
    let malformed = |reason: &str| SkliftError::Malformed { t: t.clone(), l, reason: reason.into() };
    if l == 0 {
        return Err(malformed("L must be positive"));
    }
    let lb = BigInt::from(l);
    if arith::smooth_part(&lb, table.n2())? != lb {
        return Err(malformed("L has a prime factor not dividing N2"));
    }
    let t0 = t.divide(&lb).ok_or_else(|| malformed("L does not divide the content"))?;
    let disc = t0.disc();
    for p in arith::prime_divisors(table.n1()) {
        if arith::kronecker(&disc, &BigInt::from(p)) != -1 {
            return Err(SkliftError::NotApplicable {
                t: t.clone(),
                reason: format!("({disc}/{p}) != -1"),
            });
        }
    }
    let lhs = table.get(t)?;
    Ok(lhs == maass_rhs(table, &t0, &lb, table.n2())?)
}

/// Level-`(N1, N2)` relation with `L = (gcd(a, b, c), N2^inf)`.
pub fn maass_check_level_n_default(table: &FourierTable, t: &QForm) -> Result<bool> {
    let l = arith::smooth_part(&t.content(), table.n2())?;
    let l = l.to_u64().ok_or_else(|| SkliftError::Malformed {
        t: t.clone(),
        l: 0,
        reason: "L exceeds 64 bits".into(),
    })?;
    maass_check_level_n(table, t, l)
}

/// `C(D) = a((n, r, 1))` with `D = 4n - r^2`, read from every available
/// representative; disagreeing representatives are a hard error.
pub fn extract_jacobi(table: &FourierTable) -> Result<BTreeMap<BigInt, BigRational>> {
    require_level_one(table)?;
    let mut seen: BTreeMap<BigInt, (QForm, BigRational)> = BTreeMap::new();
    let candidates = table.known_forms().into_iter().filter(|t| t.c().is_one());
    for t in candidates {
        let v = table.get(&t)?;
        let d = t.four_det();
        match seen.get(&d) {
            Some((t1, v1)) if *v1 != v => {
                return Err(SkliftError::JacobiInconsistent {
                    d,
                    t1: t1.clone(),
                    first: v1.clone(),
                    t2: t,
                    second: v,
                });
            }
            Some(_) => {}
            None => {
                seen.insert(d, (t, v));
            }
        }
    }
    Ok(seen.into_iter().map(|(d, (_, v))| (d, v)).collect())
}

/// Level-(1, 1) table on `max(a, c) <= bound` with
/// `a(T) = sum_{r | gcd(a,b,c)} r^{k-1} C(|disc T| / r^2)`.
pub fn lift_from_jacobi(c: &BTreeMap<BigInt, BigRational>, k: u32, bound: u64) -> Result<FourierTable> {
    let mut table = FourierTable::new(k, 1, 1, bound)?;
    for t in table.box_forms() {
        let d = t.four_det();
        let mut v = BigRational::zero();
        for r in positive_divisors(&t.content()) {
            let dr = &d / (&r * &r);
            let cd = c.get(&dr).ok_or(SkliftError::MissingJacobi(dr))?;
            v += cd * BigRational::from_integer(num_traits::pow(r, k as usize - 1));
        }
        if !v.is_zero() {
            table.set(t, v);
        }
    }
    Ok(table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Classical,
    LevelN,
}

/// A relation that failed, with both sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub t: QForm,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
    /// Index-one Jacobi dependence violation, level-(1, 1) tables only.
    pub jacobi_error: Option<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.jacobi_error.is_none()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

/// Checks the relation at every box form and every stored key. Forms whose
/// relation reaches outside the table (or, in level-N mode, whose
/// discriminant misses the Kronecker condition) are counted as skipped.
/// Level-(1, 1) tables also get the index-one Jacobi dependence check.
pub fn verify_table(table: &FourierTable, mode: VerifyMode) -> Result<VerifyReport> {
    if mode == VerifyMode::Classical {
        require_level_one(table)?;
    }
    let mut report = VerifyReport::default();
    for t in table.known_forms() {
        let outcome = match mode {
            VerifyMode::Classical => maass_check_classical(table, &t),
            VerifyMode::LevelN => maass_check_level_n_default(table, &t),
        };
        match outcome {
            Ok(true) => report.checked += 1,
            Ok(false) => {
                report.checked += 1;
                let lhs = table.get(&t)?;
                let rhs = match mode {
                    VerifyMode::Classical => maass_rhs_classical(table, &t)?,
                    VerifyMode::LevelN => {
                        let l = arith::smooth_part(&t.content(), table.n2())?;
                        maass_rhs(table, &t.divide(&l).expect("L divides content"), &l, table.n2())?
                    }
                };
                report.failures.push(Failure { t, lhs, rhs });
            }
            Err(SkliftError::OutOfBound(_)) | Err(SkliftError::NotApplicable { .. }) => report.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if table.n1() == 1 && table.n2() == 1 {
        match extract_jacobi(table) {
            Ok(_) => {}
            Err(e @ SkliftError::JacobiInconsistent { .. }) => report.jacobi_error = Some(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}
