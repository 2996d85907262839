//! Exact integer utilities.
//!
//! Factorization by trial division, the Kronecker symbol, fundamental
//! discriminants, N-smooth parts and the two root-counting functions used by
//! the class-number formulas for discriminants -4 and -3.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("expected a positive integer, got {0}")]
    NotPositive(BigInt),
    #[error("expected a nonzero integer")]
    Zero,
    #[error("{0} is not a discriminant (must be nonzero and congruent to 0 or 1 mod 4)")]
    NotADiscriminant(BigInt),
    #[error("root count mismatch for n = {n}: closed form {closed}, brute force {brute}")]
    RootCountMismatch { n: u64, closed: u64, brute: u64 },
}

/// Prime factorization `n = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(BigInt, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn reconstruct(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Exact factorization of `n >= 1` by trial division.
pub fn factor(n: &BigInt) -> Result<Factorization, ArithError> {
    if !n.is_positive() {
        return Err(ArithError::NotPositive(n.clone()));
    }
    if let Some(small) = n.to_u64() {
        let factors = factor_u64_inner(small)
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
        return Ok(Factorization { factors });
    }
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    Ok(Factorization { factors })
}

fn factor_u64_inner(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime factorization of a machine-sized positive integer.
pub fn factor_u64(n: u64) -> Result<Vec<(u64, u32)>, ArithError> {
    if n == 0 {
        return Err(ArithError::NotPositive(BigInt::zero()));
    }
    Ok(factor_u64_inner(n))
}

/// Distinct primes dividing `n` (empty for `n <= 1`).
pub fn prime_divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    factor_u64_inner(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64_inner(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_u64() {
        Some(small) => is_prime_u64(small),
        None if n.is_negative() => false,
        None => factor(n).map(|f| f.len() == 1 && f.factors[0].1 == 1).unwrap_or(false),
    }
}

/// `ord_p(x)` for `x != 0`.
pub fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    debug_assert!(!x.is_zero());
    let mut rest = x.abs();
    let mut e = 0;
    while (&rest % p).is_zero() {
        rest /= p;
        e += 1;
    }
    e
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i8 {
    const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let eight = BigInt::from(8u32);
    let mod8 = |x: &BigInt| x.mod_floor(&eight).to_usize().unwrap_or(0);

    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut b = n.clone();
    if a.is_even() && b.is_even() {
        return 0;
    }
    let mut k: i8 = 1;
    let v = b.trailing_zeros().unwrap_or(0);
    b >>= v;
    if v % 2 == 1 {
        k = TAB2[mod8(&a)];
    }
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            k = -k;
        }
    }
    loop {
        if a.is_zero() {
            return if b.is_one() { k } else { 0 };
        }
        let v = a.trailing_zeros().unwrap_or(0);
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[mod8(&b)];
        }
        // reciprocity: both congruent to 3 mod 4
        if mod8(&a) % 4 == 3 && mod8(&b) % 4 == 3 {
            k = -k;
        }
        let r = a.abs();
        a = b.mod_floor(&r);
        b = r;
    }
}

pub fn kronecker_i64(a: i64, n: i64) -> i8 {
    kronecker(&BigInt::from(a), &BigInt::from(n))
}

/// Fundamental discriminant test: `d = 1 mod 4` squarefree, or `d = 4d'`
/// with `d'` squarefree and `d' = 2, 3 mod 4`.
pub fn is_fundamental_discriminant(d: &BigInt) -> bool {
    if d.is_zero() {
        return false;
    }
    let four = BigInt::from(4u32);
    let squarefree = |x: &BigInt| factor(&x.abs()).map(|f| f.is_squarefree()).unwrap_or(false);
    match d.mod_floor(&four).to_u32() {
        Some(1) => squarefree(d),
        Some(0) => {
            let inner = d / &four;
            let r = inner.mod_floor(&four).to_u32();
            matches!(r, Some(2) | Some(3)) && squarefree(&inner)
        }
        _ => false,
    }
}

/// Writes a discriminant `D` as `d * f^2` with `d` fundamental and `f >= 1`.
pub fn fundamental_decomposition(disc: &BigInt) -> Result<(BigInt, BigInt), ArithError> {
    let four = BigInt::from(4u32);
    let r = disc.mod_floor(&four);
    if disc.is_zero() || !(r.is_zero() || r.is_one()) {
        return Err(ArithError::NotADiscriminant(disc.clone()));
    }
    let fact = factor(&disc.abs())?;
    let mut core = if disc.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut root = BigInt::one();
    for (p, e) in fact.factors() {
        if e % 2 == 1 {
            core *= p;
        }
        root *= num_traits::pow(p.clone(), (e / 2) as usize);
    }
    if core.mod_floor(&four).is_one() {
        Ok((core, root))
    } else {
        // core = 2, 3 mod 4 forces root even since disc = 0 mod 4
        debug_assert!(root.is_even());
        Ok((core * 4, root / 2))
    }
}

/// `(x, n^inf) = prod_{p | n} p^{ord_p x}`.
pub fn smooth_part(x: &BigInt, n: u64) -> Result<BigInt, ArithError> {
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut out = BigInt::one();
    for p in prime_divisors(n) {
        let p = BigInt::from(p);
        let e = valuation(x, &p);
        out *= num_traits::pow(p, e as usize);
    }
    Ok(out)
}

/// Closed form for `#{u in (Z/n)^x : u^2 = -1}`.
pub fn roots_minus_one_closed(n: u64) -> u64 {
    let mut count = 1u64;
    for (p, e) in factor_u64_inner(n) {
        match p {
            2 if e <= 1 => {}
            p if p % 4 == 1 => count *= 2,
            _ => return 0,
        }
    }
    count
}

/// Closed form for `#{u in (Z/n)^x : u^2 + u + 1 = 0}`.
pub fn roots_omega_closed(n: u64) -> u64 {
    let mut count = 1u64;
    for (p, e) in factor_u64_inner(n) {
        match p {
            3 if e <= 1 => {}
            p if p % 6 == 1 => count *= 2,
            _ => return 0,
        }
    }
    count
}

pub fn roots_minus_one_brute(n: u64) -> u64 {
    (0..n)
        .filter(|&u| u.gcd(&n) == 1 && mul_mod(u, u, n) == (n - 1) % n)
        .count() as u64
}

pub fn roots_omega_brute(n: u64) -> u64 {
    (0..n)
        .filter(|&u| u.gcd(&n) == 1 && (mul_mod(u, u, n) + u + 1) % n == 0)
        .count() as u64
}

/// Number of units `u mod n` with `u^2 = -1`, computed by the closed form and
/// confirmed by direct count.
pub fn count_roots_minus_one(n: u64) -> Result<u64, ArithError> {
    if n == 0 {
        return Err(ArithError::NotPositive(BigInt::zero()));
    }
    let closed = roots_minus_one_closed(n);
    let brute = roots_minus_one_brute(n);
    if closed != brute {
        return Err(ArithError::RootCountMismatch { n, closed, brute });
    }
    Ok(closed)
}

/// Number of units `u mod n` with `u^2 + u + 1 = 0`, closed form confirmed by
/// direct count.
pub fn count_roots_omega(n: u64) -> Result<u64, ArithError> {
    if n == 0 {
        return Err(ArithError::NotPositive(BigInt::zero()));
    }
    let closed = roots_omega_closed(n);
    let brute = roots_omega_brute(n);
    if closed != brute {
        return Err(ArithError::RootCountMismatch { n, closed, brute });
    }
    Ok(closed)
}

/// Extended Euclid on big integers: `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let ext = a.extended_gcd(b);
    if ext.gcd.is_negative() {
        (-ext.gcd, -ext.x, -ext.y)
    } else {
        (ext.gcd, ext.x, ext.y)
    }
}
