//! The Igusa cusp form `chi_10` as the product of the squares of the ten even
//! theta constants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::table::FourierTable;
use super::theta::{theta_constant, Characteristic, ThetaSeries, Truncation};
use super::{Result, SkliftError};
use crate::qform::QForm;

/// Region computed by [`igusa_chi10`]: the box `max(a, c) <= bound` plus the
/// strip `a <= bound^2, c <= 1`, which holds every `(ac/r^2, b/r, 1)` needed
/// by the Maass relations of box entries.
pub fn chi10_region(bound: u64) -> Truncation {
    let b = bound as i64;
    Truncation::Boxes(vec![(b, b), (b * b, 1)])
}

/// Raw theta product `prod theta_m^2` on `region`, integer coefficients.
pub fn theta_product(region: &Truncation) -> Result<ThetaSeries> {
    let thetas: Vec<ThetaSeries> = Characteristic::all_even()
        .into_iter()
        .map(|ch| theta_constant(ch, region))
        .collect();
    // twenty multiplications by single thetas keep one factor sparse
    let mut acc = ThetaSeries::one(region);
    for th in thetas.iter().chain(thetas.iter()) {
        acc = acc.mul(th)?;
    }
    Ok(acc)
}

/// Weight-10 level-(1, 1) table of `chi_10`, normalized by `a((1, 1, 1)) = 1`.
///
/// Complete on `max(a, c) <= bound`; strip entries `(n, r, 1)` with
/// `n <= bound^2` are stored as well, zeros included.
pub fn igusa_chi10(bound: u64) -> Result<FourierTable> {
    if bound < 2 {
        return Err(SkliftError::BoundTooSmall { min: 2, got: bound });
    }
    let region = chi10_region(bound);
    let product = theta_product(&region)?;

    let mut raw: Vec<(QForm, BigInt)> = Vec::new();
    for (k, v) in product.terms() {
        if v.is_zero() {
            continue;
        }
        if k.a8 % 8 != 0 || k.b8 % 8 != 0 || k.c8 % 8 != 0 {
            return Err(SkliftError::NonHalfIntegral { a8: k.a8, b8: k.b8, c8: k.c8 });
        }
        let (a, b, c) = (k.a8 / 8, k.b8 / 8, k.c8 / 8);
        match QForm::from_i64(a, b, c) {
            Ok(t) => raw.push((t, v.clone())),
            Err(_) => return Err(SkliftError::NotCuspidal(format!("({a}, {b}, {c})"))),
        }
    }

    let unit = QForm::from_i64(1, 1, 1)?;
    let norm = raw
        .iter()
        .find(|(t, _)| *t == unit)
        .map(|(_, v)| v.clone())
        .ok_or(SkliftError::ZeroNormalization)?;

    let mut table = FourierTable::new(10, 1, 1, bound)?;
    for (t, v) in raw {
        table.set(t, BigRational::new(v, norm.clone()));
    }
    let b = bound as i64;
    for n in (b + 1)..=(b * b) {
        let mut r = 0i64;
        while (r + 1) * (r + 1) < 4 * n {
            r += 1;
        }
        for r in -r..=r {
            let t = QForm::from_i64(n, r, 1)?;
            if !table.contains_key(&t) {
                table.set(t, BigRational::zero());
            }
        }
    }
    debug_assert_eq!(table.get(&unit).ok(), Some(BigRational::one()));
    Ok(table)
}
