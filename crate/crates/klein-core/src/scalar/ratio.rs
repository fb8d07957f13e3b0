//! Reduced rational arithmetic for the hot paths, with a subquadratic gcd
//! once operands grow large.

use malachite_base::num::arithmetic::traits::Gcd;
use malachite_nz::natural::Natural;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Below this many bits the plain binary gcd is faster than converting.
const FAST_BITS: u64 = 384;

fn to_natural(n: &BigUint) -> Natural {
    Natural::from_limbs_asc(&n.to_u64_digits())
}

fn from_natural(n: &Natural) -> BigUint {
    let mut digits = Vec::new();
    for l in n.to_limbs_asc() {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

pub(crate) fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    if a.bits().min(b.bits()) < FAST_BITS {
        return a.gcd(b);
    }
    let g = (&to_natural(a.magnitude())).gcd(&to_natural(b.magnitude()));
    BigInt::from_biguint(Sign::Plus, from_natural(&g))
}

pub(crate) fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / gcd(a, b)) * b
}

pub(crate) fn mul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let g1 = gcd(a.numer(), b.denom());
    let g2 = gcd(b.numer(), a.denom());
    let n = (a.numer() / &g1) * (b.numer() / &g2);
    let d = (a.denom() / &g2) * (b.denom() / &g1);
    BigRational::new_raw(n, d)
}

pub(crate) fn add(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (an, ad, bn, bd) = (a.numer(), a.denom(), b.numer(), b.denom());
    let g = gcd(ad, bd);
    let t = if g.is_one() { an * bd + bn * ad } else { an * (bd / &g) + bn * (ad / &g) };
    if t.is_zero() {
        return BigRational::zero();
    }
    if g.is_one() {
        return BigRational::new_raw(t, ad * bd);
    }
    let g2 = gcd(&t, &g);
    BigRational::new_raw(&t / &g2, (ad / &g) * (bd / &g2))
}

pub(crate) fn sub(a: &BigRational, b: &BigRational) -> BigRational {
    add(a, &-b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn matches_reference_arithmetic() {
        let big = BigRational::new(BigInt::from(3).pow(700) * 10, BigInt::from(7).pow(500) * 6);
        let other = BigRational::new(BigInt::from(3).pow(650) * 14, BigInt::from(7).pow(520) * 9);
        for (a, b) in [
            (r(1, 6), r(-1, 10)),
            (r(0, 1), r(2, 3)),
            (big.clone(), other.clone()),
            (big.clone(), -big.clone()),
        ] {
            assert_eq!(add(&a, &b), &a + &b);
            assert_eq!(sub(&a, &b), &a - &b);
            assert_eq!(mul(&a, &b), &a * &b);
        }
        assert_eq!(gcd(big.numer(), other.numer()), big.numer().gcd(other.numer()));
    }
}
