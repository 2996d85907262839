//! Symbolic local Bessel values.
//!
//! Values `B_p(h(0, n))` of the spherical Bessel vector are kept as free
//! generators; [`BesselExpr`] is a rational linear combination of them at one
//! prime and [`BesselProductExpr`] a combination of products over several
//! primes. For spherical representations of type IIb
//!
//! ```text
//! B_p(h(l, m)) = sum_{i=0}^{l} p^{-i} B_p(h(0, l + m - i)),
//! ```
//!
//! which is all that is needed to verify the Maass relation identity at
//! primes away from the level.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BesselError {
    #[error("unknown representation type `{0}`")]
    UnknownType(String),
    #[error("unknown torus case `{0}` (expected `split` or `field`)")]
    UnknownCase(String),
}

/// `sum_n coeff(n) B_p(h(0, n))` at a fixed prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselExpr {
    prime: u64,
    terms: BTreeMap<u32, BigRational>,
}

impl BesselExpr {
    pub fn zero(prime: u64) -> Self {
        Self { prime, terms: BTreeMap::new() }
    }

    /// The generator `B_p(h(0, n))`.
    pub fn generator(prime: u64, n: u32) -> Self {
        let mut e = Self::zero(prime);
        e.add_term(n, BigRational::one());
        e
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn terms(&self) -> &BTreeMap<u32, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, n: u32) -> BigRational {
        self.terms.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, n: u32, coeff: BigRational) {
        let entry = self.terms.entry(n).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }
}

impl fmt::Display for BesselExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| format!("{c}*B{}(0,{n})", self.prime))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `p^{-i}` as an exact rational.
fn inverse_power(p: u64, i: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(p).pow(i))
}

/// `B_p(h(l, m))` for a type IIb spherical vector with trivial `Lambda`.
///
/// Vanishes for `l < 0` or `m < 0` (support of the spherical Bessel vector
/// when `c(Lambda) = 0`).
pub fn iib_value(p: u64, l: i64, m: i64) -> BesselExpr {
    let mut out = BesselExpr::zero(p);
    if l < 0 || m < 0 {
        return out;
    }
    let (l, m) = (l as u32, m as u32);
    for i in 0..=l {
        out.add_term(l + m - i, inverse_power(p, i));
    }
    out
}

/// Linear combination of products `prod_p B_p(h(0, n_p))` over a fixed,
/// ascending list of primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BesselProductExpr {
    primes: Vec<u64>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl BesselProductExpr {
    pub fn zero(primes: Vec<u64>) -> Self {
        Self { primes, terms: BTreeMap::new() }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn add_term(&mut self, indices: Vec<u32>, coeff: BigRational) {
        assert_eq!(indices.len(), self.primes.len());
        let entry = self.terms.entry(indices.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&indices);
        }
    }

    /// Expands `prod_i factors[i]`, one factor per prime. The empty product
    /// is the constant 1.
    pub fn product(factors: &[BesselExpr]) -> Self {
        let primes: Vec<u64> = factors.iter().map(BesselExpr::prime).collect();
        let mut acc: Vec<(Vec<u32>, BigRational)> = vec![(Vec::new(), BigRational::one())];
        for factor in factors {
            let mut next = Vec::with_capacity(acc.len() * factor.terms.len());
            for (idx, c) in &acc {
                for (n, fc) in &factor.terms {
                    let mut i = idx.clone();
                    i.push(*n);
                    next.push((i, c * fc));
                }
            }
            acc = next;
        }
        let mut out = Self::zero(primes);
        for (idx, c) in acc {
            out.add_term(idx, c);
        }
        out
    }
}

impl fmt::Display for BesselProductExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let gens: Vec<String> = self
                    .primes
                    .iter()
                    .zip(idx)
                    .map(|(p, n)| format!("B{p}(0,{n})"))
                    .collect();
                if gens.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", gens.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Primes dividing `LM` but not `N2`, ascending.
pub fn support_primes(l: u64, m: u64, n2: u64) -> Vec<u64> {
    arith::prime_divisors(l * m)
        .into_iter()
        .filter(|p| n2 % p != 0)
        .collect()
}

fn ord(x: u64, p: u64) -> u32 {
    let mut x = x;
    let mut e = 0;
    while x % p == 0 {
        x /= p;
        e += 1;
    }
    e
}

/// Both sides of the identity that makes the level-`N2` Maass relation hold:
///
/// ```text
/// prod_p sum_{i=0}^{l_p} p^{-i} B_p(0, l_p + m_p - i)
///     = sum_{r | L, gcd(r, N2) = 1} (1/r) prod_p B_p(0, l_p + m_p - r_p)
/// ```
///
/// with `p` over [`support_primes`], `l_p = ord_p L`, `m_p = ord_p M`.
pub fn maass_identity_sides(l: u64, m: u64, n2: u64) -> (BesselProductExpr, BesselProductExpr) {
    let primes = support_primes(l, m, n2);
    let factors: Vec<BesselExpr> = primes
        .iter()
        .map(|&p| iib_value(p, ord(l, p) as i64, ord(m, p) as i64))
        .collect();
    let lhs = BesselProductExpr::product(&factors);

    let mut rhs = BesselProductExpr::zero(primes.clone());
    for r in arith::divisors(l).into_iter().filter(|r| num_integer::gcd(*r, n2) == 1) {
        let idx: Vec<u32> = primes
            .iter()
            .map(|&p| ord(l, p) + ord(m, p) - ord(r, p))
            .collect();
        rhs.add_term(idx, BigRational::new(BigInt::one(), BigInt::from(r)));
    }
    (lhs, rhs)
}

pub fn maass_identity_check(l: u64, m: u64, n2: u64) -> bool {
    let (lhs, rhs) = maass_identity_sides(l, m, n2);
    lhs == rhs
}

/// Irreducible admissible representations of `GSp_4` induced from the Borel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReprType {
    I,
    IIa,
    IIb,
    IIIa,
    IIIb,
    IVa,
    IVb,
    IVc,
    IVd,
    Va,
    Vb,
    Vc,
    Vd,
    VIa,
    VIb,
    VIc,
    VId,
}

impl ReprType {
    pub const ALL: [ReprType; 17] = [
        ReprType::I,
        ReprType::IIa,
        ReprType::IIb,
        ReprType::IIIa,
        ReprType::IIIb,
        ReprType::IVa,
        ReprType::IVb,
        ReprType::IVc,
        ReprType::IVd,
        ReprType::Va,
        ReprType::Vb,
        ReprType::Vc,
        ReprType::Vd,
        ReprType::VIa,
        ReprType::VIb,
        ReprType::VIc,
        ReprType::VId,
    ];
}

impl FromStr for ReprType {
    type Err = BesselError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReprType::ALL
            .iter()
            .copied()
            .find(|t| format!("{t:?}") == s)
            .ok_or_else(|| BesselError::UnknownType(s.to_string()))
    }
}

/// Whether the torus `L` is `F + F` or a quadratic field extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TorusCase {
    Split,
    Field,
}

impl FromStr for TorusCase {
    type Err = BesselError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "split" => Ok(TorusCase::Split),
            "field" => Ok(TorusCase::Field),
            _ => Err(BesselError::UnknownCase(s.to_string())),
        }
    }
}

/// Characters of `F^x` appearing composed with the norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NormCharacter {
    /// `chi sigma`
    ChiSigma,
    /// `sigma`
    Sigma,
    /// `xi sigma`
    XiSigma,
}

/// Characters of `F^x` in the split-torus pair conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairCharacter {
    ChiSigma,
    Sigma,
    /// `nu sigma`
    NuSigma,
    /// `nu^{-1} sigma`
    NuInvSigma,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `Lambda = c o Norm`
    EqualsNormTwist(NormCharacter),
    /// `Lambda != c o Norm`
    NotEqualsNormTwist(NormCharacter),
    /// `Lambda = (chi_1, chi_2)` for one of the listed pairs (split torus)
    PairIn(Vec<(PairCharacter, PairCharacter)>),
}

/// When a `(Lambda, theta)`-Bessel functional exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BesselCondition {
    /// every `Lambda`
    All,
    /// no `Lambda`
    None,
    /// all clauses hold simultaneously
    AllOf(Vec<Clause>),
}

/// Existence table of Bessel functionals for representations induced from
/// the Borel subgroup.
pub fn bessel_exists_lookup(repr: ReprType, case: TorusCase) -> BesselCondition {
    use BesselCondition as B;
    use Clause::*;
    use NormCharacter::*;
    use PairCharacter as P;
    use TorusCase::*;

    let eq = |c| B::AllOf(vec![EqualsNormTwist(c)]);
    let ne = |c| B::AllOf(vec![NotEqualsNormTwist(c)]);
    match (repr, case) {
        (ReprType::I, _) | (ReprType::IIIa, _) => B::All,
        (ReprType::IIa, Split) => B::All,
        (ReprType::IIa, Field) => ne(ChiSigma),
        (ReprType::IIb, _) => eq(ChiSigma),
        (ReprType::IIIb, Split) => B::AllOf(vec![PairIn(vec![
            (P::ChiSigma, P::Sigma),
            (P::Sigma, P::ChiSigma),
        ])]),
        (ReprType::IIIb, Field) => B::None,
        (ReprType::IVa, Split) => B::All,
        (ReprType::IVa, Field) => ne(Sigma),
        (ReprType::IVb, _) => eq(Sigma),
        (ReprType::IVc, Split) => B::AllOf(vec![PairIn(vec![
            (P::NuSigma, P::NuInvSigma),
            (P::NuInvSigma, P::NuSigma),
        ])]),
        (ReprType::IVc, Field) | (ReprType::IVd, _) => B::None,
        (ReprType::Va, Split) => B::All,
        (ReprType::Va, Field) => B::AllOf(vec![NotEqualsNormTwist(Sigma), NotEqualsNormTwist(XiSigma)]),
        (ReprType::Vb, Split) => eq(Sigma),
        (ReprType::Vb, Field) => B::AllOf(vec![EqualsNormTwist(Sigma), NotEqualsNormTwist(XiSigma)]),
        (ReprType::Vc, Split) => eq(XiSigma),
        (ReprType::Vc, Field) => B::AllOf(vec![NotEqualsNormTwist(Sigma), EqualsNormTwist(XiSigma)]),
        (ReprType::Vd, Split) => B::None,
        (ReprType::Vd, Field) => B::AllOf(vec![EqualsNormTwist(Sigma), EqualsNormTwist(XiSigma)]),
        (ReprType::VIa, Split) => B::All,
        (ReprType::VIa, Field) => ne(Sigma),
        (ReprType::VIb, Split) => B::None,
        (ReprType::VIb, Field) => eq(Sigma),
        (ReprType::VIc, Split) | (ReprType::VId, Split) => eq(Sigma),
        (ReprType::VIc, Field) | (ReprType::VId, Field) => B::None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn iib_examples() {
        let e = iib_value(5, 1, 0);
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.coefficient(1), q(1, 1));
        assert_eq!(e.coefficient(0), q(1, 5));
        assert_eq!(iib_value(7, 0, 3), BesselExpr::generator(7, 3));
        assert!(iib_value(3, -1, 3).is_zero());
        assert!(iib_value(3, 2, -1).is_zero());
        let e = iib_value(2, 3, 1);
        assert_eq!(e.coefficient(4), q(1, 1));
        assert_eq!(e.coefficient(1), q(1, 8));
    }

    #[test]
    fn normalization_of_l_zero() {
        for p in [2, 3, 5, 7] {
            for m in 0..6 {
                let e = iib_value(p, 0, m);
                assert_eq!(e.terms().len(), 1);
                assert_eq!(e.coefficient(m as u32), BigRational::one());
            }
        }
    }

    #[test]
    fn identity_examples() {
        for p in [2u64, 3, 5, 11] {
            let (lhs, rhs) = maass_identity_sides(p, 1, 1);
            assert_eq!(lhs, rhs);
            assert_eq!(lhs.terms().len(), 2);
            assert_eq!(lhs.terms()[&vec![1]], q(1, 1));
            assert_eq!(lhs.terms()[&vec![0]], q(1, p as i64));
        }
        for (m, n2) in [(1, 1), (6, 1), (5, 2)] {
            let (lhs, rhs) = maass_identity_sides(1, m, n2);
            assert_eq!(lhs, rhs);
            assert_eq!(rhs.terms().len(), 1);
        }
        assert!(maass_identity_check(12, 2, 1));
        let (lhs, _) = maass_identity_sides(12, 2, 1);
        assert_eq!(lhs.primes(), &[2, 3]);
        // l_2 = 2, m_2 = 1 gives 3 terms, l_3 = 1 gives 2
        assert_eq!(lhs.terms().len(), 6);
    }

    #[test]
    fn level_primes_leave_the_support() {
        assert_eq!(support_primes(12, 5, 6), vec![5]);
        let (lhs, rhs) = maass_identity_sides(12, 5, 6);
        assert_eq!(lhs.primes(), &[5]);
        assert_eq!(lhs, rhs);
        // L a pure N2-power: only r = 1 survives
        let (lhs, rhs) = maass_identity_sides(8, 1, 2);
        assert_eq!(lhs, rhs);
        assert_eq!(rhs.terms().len(), 1);
    }

    #[test]
    fn product_equality_detects_perturbation() {
        let (lhs, rhs) = maass_identity_sides(36, 10, 1);
        assert_eq!(lhs, lhs.clone());
        assert_eq!(rhs, lhs);
        for key in lhs.terms().keys() {
            let mut mutated = lhs.clone();
            mutated.add_term(key.clone(), q(1, 1000));
            assert_ne!(mutated, rhs);
            assert_ne!(rhs, mutated);
        }
        let mut extra = lhs.clone();
        extra.add_term(vec![9, 9, 9], q(1, 1));
        assert_ne!(extra, rhs);
    }

    #[test]
    fn identity_grid() {
        for l in 1..=60u64 {
            for m in 1..=(200 / l) {
                for n2 in [1, 2, 3, 4, 6, 12] {
                    assert!(maass_identity_check(l, m, n2), "L={l} M={m} N2={n2}");
                }
            }
        }
    }

    #[test]
    fn table_lookup() {
        assert_eq!(bessel_exists_lookup(ReprType::I, TorusCase::Split), BesselCondition::All);
        assert_eq!(
            bessel_exists_lookup(ReprType::IIb, TorusCase::Field),
            BesselCondition::AllOf(vec![Clause::EqualsNormTwist(NormCharacter::ChiSigma)])
        );
        assert_eq!(bessel_exists_lookup(ReprType::IVd, TorusCase::Split), BesselCondition::None);
        assert_eq!(bessel_exists_lookup(ReprType::IVd, TorusCase::Field), BesselCondition::None);
        assert!(matches!(
            bessel_exists_lookup(ReprType::IIIb, TorusCase::Split),
            BesselCondition::AllOf(ref c) if matches!(c[0], Clause::PairIn(ref v) if v.len() == 2)
        ));
        assert_eq!("VIc".parse::<ReprType>().unwrap(), ReprType::VIc);
        assert!("VII".parse::<ReprType>().is_err());
        assert!("inert".parse::<TorusCase>().is_err());
        // every cell is defined
        for t in ReprType::ALL {
            for c in [TorusCase::Split, TorusCase::Field] {
                let _ = bessel_exists_lookup(t, c);
            }
        }
    }
}
