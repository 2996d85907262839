//! Orders of the ray class groups `Cl_d(N)` of imaginary quadratic fields.
//!
//! The product formula is checked against the class number of the order of
//! conductor `N`, i.e. the number of reduced primitive forms of discriminant
//! `dN^2`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith;
use crate::qform::{self, QFormError, Result};

/// `|Cl_d(N)|` together with the inputs it was computed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayClassSize {
    pub d: i64,
    pub n: u64,
    pub size: BigInt,
}

/// Number of reduced primitive positive definite forms of discriminant `disc`.
pub fn class_number(disc: &BigInt) -> Result<BigInt> {
    let r = disc.mod_floor(&BigInt::from(4));
    if !disc.is_negative() || !(r == BigInt::from(0) || r.is_one()) {
        return Err(QFormError::InvalidDiscriminant(disc.clone()));
    }
    Ok(BigInt::from(qform::reduced_forms(disc).len()))
}

fn units_index(d: i64) -> u64 {
    match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    }
}

/// Product formula `h(d)/u(d) N prod_{p | N} (1 - (d/p)/p)`, or `h(d)` at
/// `N = 1`.
pub fn raycl_size_formula(d: i64, n: u64) -> Result<BigInt> {
    qform::validate(d, 1, 1, n)?;
    let db = BigInt::from(d);
    let h = class_number(&db)?;
    if n == 1 {
        return Ok(h);
    }
    let mut size = BigRational::new(h * BigInt::from(n), BigInt::from(units_index(d)));
    for p in arith::prime_divisors(n) {
        let chi = arith::kronecker(&db, &BigInt::from(p));
        size *= BigRational::one() - BigRational::new(BigInt::from(chi), BigInt::from(p));
    }
    if !size.is_integer() {
        return Err(QFormError::NonIntegralCount { d, m: 1, n, count: size });
    }
    Ok(size.to_integer())
}

/// `|Cl_d(N)|` with the class-number oracle `h(dN^2)` switched on or off.
pub fn raycl_size_checked(d: i64, n: u64, check_oracle: bool) -> Result<RayClassSize> {
    let size = raycl_size_formula(d, n)?;
    if check_oracle && n > 1 {
        let oracle = class_number(&(BigInt::from(d) * BigInt::from(n).pow(2)))?;
        if oracle != size {
            return Err(QFormError::RayClassMismatch { d, n, formula: size, oracle });
        }
    }
    Ok(RayClassSize { d, n, size })
}

/// `|Cl_d(N)|`, always cross-checked against `h(dN^2)`.
pub fn raycl_size(d: i64, n: u64) -> Result<BigInt> {
    raycl_size_checked(d, n, true).map(|r| r.size)
}
