//! Fixed-point dyadic intervals with outward rounding.
//!
//! An interval `[lo, hi]` at precision `p` denotes the real interval
//! `[lo / 2^p, hi / 2^p]`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Iv {
    pub lo: BigInt,
    pub hi: BigInt,
}

pub(crate) fn floor_shr(x: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return x.clone();
    }
    x.div_floor(&(BigInt::one() << k))
}

pub(crate) fn ceil_shr(x: &BigInt, k: u32) -> BigInt {
    -floor_shr(&-x, k)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl Iv {
    pub fn point(v: BigInt) -> Iv {
        Iv { lo: v.clone(), hi: v }
    }

    pub fn rational(r: &BigRational, p: u32) -> Iv {
        let n = r.numer() << p;
        let d = r.denom();
        Iv { lo: n.div_floor(d), hi: ceil_div(&n, d) }
    }

    /// Re-express an enclosure computed at precision `from` at the lower precision `to`.
    pub fn rescale(&self, from: u32, to: u32) -> Iv {
        debug_assert!(from >= to);
        let k = from - to;
        Iv { lo: floor_shr(&self.lo, k), hi: ceil_shr(&self.hi, k) }
    }

    pub fn add(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Iv) -> Iv {
        Iv { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn mul(&self, o: &Iv, p: u32) -> Iv {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let min = c.iter().min().unwrap();
        let max = c.iter().max().unwrap();
        Iv { lo: floor_shr(min, p), hi: ceil_shr(max, p) }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.sign() != Sign::Plus && self.hi.sign() != Sign::Minus
    }

    /// `None` when the divisor enclosure straddles zero.
    pub fn div(&self, o: &Iv, p: u32) -> Option<Iv> {
        if o.contains_zero() {
            return None;
        }
        let (dlo, dhi) = if o.lo.is_positive() { (o.lo.clone(), o.hi.clone()) } else { (-&o.hi, -&o.lo) };
        let flip = o.hi.is_negative();
        let nlo = &self.lo << p;
        let nhi = &self.hi << p;
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in [&nlo, &nhi] {
            for d in [&dlo, &dhi] {
                let (f, c) = if flip {
                    let m = -n;
                    (m.div_floor(d), ceil_div(&m, d))
                } else {
                    (n.div_floor(d), ceil_div(n, d))
                };
                lo = Some(match lo {
                    Some(x) if x < f => x,
                    _ => f,
                });
                hi = Some(match hi {
                    Some(x) if x > c => x,
                    _ => c,
                });
            }
        }
        Some(Iv { lo: lo.unwrap(), hi: hi.unwrap() })
    }

    /// `None` when the operand enclosure lies entirely below zero.
    pub fn sqrt(&self, p: u32) -> Option<Iv> {
        if self.hi.is_negative() {
            return None;
        }
        let lo = if self.lo.is_negative() { BigInt::zero() } else { (&self.lo << p).sqrt() };
        let h = &self.hi << p;
        let mut hi = h.sqrt();
        if &hi * &hi < h {
            hi += 1;
        }
        Some(Iv { lo, hi })
    }

    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }
}
