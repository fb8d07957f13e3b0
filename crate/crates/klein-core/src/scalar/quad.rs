//! Canonical exact form for elements of multiquadratic fields.
//!
//! A value is a rational combination of square roots of products of a set of
//! integer radicands. The radicands are kept pairwise coprime and none is a
//! perfect square, so the square roots of distinct subset products are
//! linearly independent over the rationals and zero testing is structural.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Iv;
use super::ratio;

/// Largest number of radicands a canonical value may carry.
pub(crate) const MAX_BASES: usize = 8;

const SQRT_DEPTH: u32 = 8;

type Terms = Vec<(u32, BigRational)>;

#[derive(Clone, Debug)]
pub(crate) struct Quad {
    bases: Arc<Vec<BigUint>>,
    terms: Terms,
}

fn empty_bases() -> Arc<Vec<BigUint>> {
    static EMPTY: std::sync::OnceLock<Arc<Vec<BigUint>>> = std::sync::OnceLock::new();
    EMPTY.get_or_init(|| Arc::new(Vec::new())).clone()
}

fn mask_product(bases: &[BigUint], mask: u32) -> BigUint {
    let mut p = BigUint::one();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        p *= &bases[i];
        m &= m - 1;
    }
    p
}

fn to_rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()))
}

/// Pairwise coprime, square-free-of-perfect-squares refinement of `nums`.
fn coprime_base(nums: Vec<BigUint>) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = Vec::new();
    let mut stack = nums;
    while let Some(x) = stack.pop() {
        if x.is_one() || x.is_zero() {
            continue;
        }
        if let Some(pos) = base.iter().position(|b| !b.gcd(&x).is_one()) {
            let b = base.swap_remove(pos);
            let g = b.gcd(&x);
            stack.push(&x / &g);
            stack.push(&b / &g);
            stack.push(g);
        } else {
            let s = x.sqrt();
            if &s * &s == x {
                stack.push(s);
            } else {
                base.push(x);
            }
        }
    }
    base.sort();
    base
}

/// Write `sqrt(b)` as `factor * sqrt(product of new[mask])`.
fn express(b: &BigUint, new: &[BigUint]) -> (BigUint, u32) {
    let mut rest = b.clone();
    let mut factor = BigUint::one();
    let mut mask = 0u32;
    for (j, q) in new.iter().enumerate() {
        let mut e = 0u32;
        loop {
            let (d, r) = rest.div_rem(q);
            if !r.is_zero() {
                break;
            }
            rest = d;
            e += 1;
        }
        if e >= 2 {
            factor *= q.pow(e / 2);
        }
        if e % 2 == 1 {
            mask |= 1 << j;
        }
    }
    debug_assert!(rest.is_one());
    (factor, mask)
}

fn reexpress(terms: &Terms, old: &[BigUint], new: &[BigUint]) -> Terms {
    let conv: Vec<(BigUint, u32)> = old.iter().map(|b| express(b, new)).collect();
    let mut out: BTreeMap<u32, BigRational> = BTreeMap::new();
    for (m, c) in terms {
        let mut f = BigUint::one();
        let mut mask = 0u32;
        let mut mm = *m;
        while mm != 0 {
            let i = mm.trailing_zeros() as usize;
            mm &= mm - 1;
            let (fi, mi) = &conv[i];
            f *= fi;
            f *= mask_product(new, mask & mi);
            mask ^= mi;
        }
        let v = ratio::mul(c, &to_rational(&f));
        let e = out.entry(mask).or_insert_with(BigRational::zero);
        *e = ratio::add(e, &v);
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn strip_small_squares(n: &BigUint) -> (BigUint, BigUint) {
    const PRIMES: [u32; 25] =
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
    let mut rest = n.clone();
    let mut f = BigUint::one();
    for p in PRIMES {
        let sq = BigUint::from(p * p);
        loop {
            let (d, r) = rest.div_rem(&sq);
            if !r.is_zero() {
                break;
            }
            rest = d;
            f *= p;
        }
    }
    (f, rest)
}

fn bit_len(n: &BigInt) -> f64 {
    n.bits() as f64
}

impl Quad {
    pub fn zero() -> Quad {
        Quad { bases: empty_bases(), terms: Vec::new() }
    }

    pub fn from_rational(r: BigRational) -> Quad {
        let terms = if r.is_zero() { Vec::new() } else { vec![(0, r)] };
        Quad { bases: empty_bases(), terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn radicands(&self) -> &[BigUint] {
        &self.bases
    }

    /// `(mask, coefficient)` pairs; a mask selects the radicands whose product is under the root.
    pub fn terms(&self) -> &[(u32, BigRational)] {
        &self.terms
    }

    fn build(bases: Arc<Vec<BigUint>>, map: BTreeMap<u32, BigRational>) -> Quad {
        let terms: Terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Quad::pruned(bases, terms)
    }

    fn pruned(bases: Arc<Vec<BigUint>>, terms: Terms) -> Quad {
        let used = terms.iter().fold(0u32, |acc, (m, _)| acc | m);
        let full = if bases.is_empty() { 0 } else { (1u32 << bases.len()) - 1 };
        if used == full {
            return Quad { bases, terms };
        }
        if used == 0 {
            return Quad { bases: empty_bases(), terms };
        }
        let keep: Vec<usize> = (0..bases.len()).filter(|i| used & (1 << i) != 0).collect();
        let nb: Vec<BigUint> = keep.iter().map(|&i| bases[i].clone()).collect();
        let remap = |m: u32| -> u32 {
            keep.iter()
                .enumerate()
                .fold(0, |acc, (k, &i)| if m & (1 << i) != 0 { acc | (1 << k) } else { acc })
        };
        let mut terms: Terms = terms.into_iter().map(|(m, c)| (remap(m), c)).collect();
        terms.sort_by_key(|(m, _)| *m);
        Quad { bases: Arc::new(nb), terms }
    }

    #[allow(clippy::type_complexity)]
    fn align<'a>(a: &'a Quad, b: &'a Quad) -> Option<(Arc<Vec<BigUint>>, Cow<'a, Terms>, Cow<'a, Terms>)> {
        if Arc::ptr_eq(&a.bases, &b.bases) || b.bases.is_empty() || a.bases == b.bases {
            return Some((a.bases.clone(), Cow::Borrowed(&a.terms), Cow::Borrowed(&b.terms)));
        }
        if a.bases.is_empty() {
            return Some((b.bases.clone(), Cow::Borrowed(&a.terms), Cow::Borrowed(&b.terms)));
        }
        let mut all: Vec<BigUint> = a.bases.iter().cloned().collect();
        all.extend(b.bases.iter().cloned());
        let nb = coprime_base(all);
        if nb.len() > MAX_BASES {
            return None;
        }
        let ta = reexpress(&a.terms, &a.bases, &nb);
        let tb = reexpress(&b.terms, &b.bases, &nb);
        Some((Arc::new(nb), Cow::Owned(ta), Cow::Owned(tb)))
    }

    pub fn neg(&self) -> Quad {
        Quad { bases: self.bases.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    fn combine(&self, o: &Quad, negate: bool) -> Option<Quad> {
        let (bases, ta, tb) = Quad::align(self, o)?;
        let mut map: BTreeMap<u32, BigRational> = ta.iter().cloned().collect();
        for (m, c) in tb.iter() {
            let e = map.entry(*m).or_insert_with(BigRational::zero);
            *e = if negate { ratio::sub(e, c) } else { ratio::add(e, c) };
        }
        Some(Quad::build(bases, map))
    }

    pub fn add(&self, o: &Quad) -> Option<Quad> {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Quad) -> Option<Quad> {
        self.combine(o, true)
    }

    pub fn mul(&self, o: &Quad) -> Option<Quad> {
        if self.is_zero() || o.is_zero() {
            return Some(Quad::zero());
        }
        let (bases, ta, tb) = Quad::align(self, o)?;
        let mut products: BTreeMap<u32, BigRational> = BTreeMap::new();
        let mut map: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (m1, c1) in ta.iter() {
            for (m2, c2) in tb.iter() {
                let common = m1 & m2;
                let mut v = ratio::mul(c1, c2);
                if common != 0 {
                    let f =
                        products.entry(common).or_insert_with(|| to_rational(&mask_product(&bases, common)));
                    v = ratio::mul(&v, f);
                }
                let e = map.entry(m1 ^ m2).or_insert_with(BigRational::zero);
                *e = ratio::add(e, &v);
            }
        }
        Some(Quad::build(bases, map))
    }

    fn scale(&self, r: &BigRational) -> Quad {
        if r.is_zero() {
            return Quad::zero();
        }
        Quad {
            bases: self.bases.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, ratio::mul(c, r))).collect(),
        }
    }

    /// Split as `a + c * sqrt(bases[j])` where neither `a` nor `c` uses radicand `j`.
    fn split(&self, j: usize) -> (Quad, Quad) {
        let bit = 1u32 << j;
        let mut a = Vec::new();
        let mut c = Vec::new();
        for (m, v) in &self.terms {
            if m & bit != 0 {
                c.push((m & !bit, v.clone()));
            } else {
                a.push((*m, v.clone()));
            }
        }
        c.sort_by_key(|(m, _)| *m);
        (Quad { bases: self.bases.clone(), terms: a }, Quad { bases: self.bases.clone(), terms: c })
    }

    fn top_radicand(&self) -> Option<usize> {
        let used = self.terms.iter().fold(0u32, |acc, (m, _)| acc | m);
        if used == 0 {
            None
        } else {
            Some(31 - used.leading_zeros() as usize)
        }
    }

    fn radicand_quad(&self, j: usize) -> Quad {
        Quad::from_rational(to_rational(&self.bases[j]))
    }

    /// Multiplicative inverse by repeated conjugation. Panics on zero.
    pub fn inv(&self) -> Quad {
        assert!(!self.is_zero(), "inverse of zero");
        match self.top_radicand() {
            None => Quad::from_rational(self.terms[0].1.recip()),
            Some(j) => {
                let (a, c) = self.split(j);
                let r = self.radicand_quad(j);
                let conj = {
                    let cs = Quad {
                        bases: self.bases.clone(),
                        terms: c.terms.iter().map(|(m, v)| (m | (1 << j), v.clone())).collect(),
                    };
                    a.sub(&cs).expect("same radicands")
                };
                let norm = a
                    .mul(&a)
                    .and_then(|aa| c.mul(&c).and_then(|cc| aa.sub(&cc.mul(&r)?)))
                    .expect("same radicands");
                conj.mul(&norm.inv()).expect("same radicands")
            }
        }
    }

    pub fn div(&self, o: &Quad) -> Option<Quad> {
        self.mul(&o.inv())
    }

    /// Square root of a non-negative rational.
    pub fn sqrt_rational(r: &BigRational) -> Quad {
        if r.is_zero() {
            return Quad::zero();
        }
        debug_assert!(r.is_positive());
        let n = (r.numer() * r.denom()).to_biguint().expect("non-negative");
        let den = BigRational::from_integer(r.denom().clone());
        let (f, rest) = strip_small_squares(&n);
        let s = rest.sqrt();
        if &s * &s == rest {
            return Quad::from_rational(to_rational(&(f * s)) / den);
        }
        Quad { bases: Arc::new(vec![rest]), terms: vec![(1, to_rational(&f) / den)] }
    }

    /// Square root inside the multiquadratic closure, if one is found.
    /// Requires `self >= 0`.
    pub fn sqrt(&self) -> Option<Quad> {
        self.sqrt_at(0)
    }

    fn sqrt_at(&self, depth: u32) -> Option<Quad> {
        if let Some(r) = self.as_rational() {
            return Some(Quad::sqrt_rational(&r));
        }
        if depth > SQRT_DEPTH {
            return None;
        }
        let j = self.top_radicand()?;
        let (a, c) = self.split(j);
        let r = self.radicand_quad(j);
        let norm = a.mul(&a)?.sub(&c.mul(&c)?.mul(&r)?)?;
        if norm.sign() < 0 {
            return None;
        }
        let n = norm.sqrt_at(depth + 1)?;
        let half = BigRational::new(1.into(), 2.into());
        let root = Quad { bases: self.bases.clone(), terms: vec![(1 << j, BigRational::one())] };
        for cand in [a.add(&n)?.scale(&half), a.sub(&n)?.scale(&half)] {
            if cand.is_zero() || cand.sign() < 0 {
                continue;
            }
            let attempt = || -> Option<Quad> {
                let u = cand.sqrt_at(depth + 1)?;
                let e = c.div(&u.scale(&BigRational::from_integer(2.into())))?;
                let y = u.add(&e.mul(&root)?)?;
                if y.mul(&y)?.sub(self)?.is_zero() {
                    Some(if y.sign() < 0 { y.neg() } else { y })
                } else {
                    None
                }
            };
            if let Some(y) = attempt() {
                return Some(y);
            }
        }
        None
    }

    pub fn enclose(&self, p: u32) -> Iv {
        let mut acc = Iv::point(BigInt::zero());
        for (m, c) in &self.terms {
            let iv = if *m == 0 {
                Iv::rational(c, p)
            } else {
                let n = BigInt::from_biguint(Sign::Plus, mask_product(&self.bases, *m) << (2 * p));
                let s_lo = n.sqrt();
                let s_hi = if &s_lo * &s_lo == n { s_lo.clone() } else { &s_lo + 1 };
                let (num, den) = (c.numer(), c.denom());
                let (a, b) = if num.is_negative() { (&s_hi, &s_lo) } else { (&s_lo, &s_hi) };
                let lo = (num * a).div_floor(den);
                let hi = -((-(num * b)).div_floor(den));
                Iv { lo, hi }
            };
            acc = acc.add(&iv);
        }
        acc
    }

    pub fn sign(&self) -> i8 {
        if let Some(r) = self.as_rational() {
            return match r.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            };
        }
        let mut p = super::initial_precision();
        loop {
            let iv = self.enclose(p);
            if iv.lo.is_positive() {
                return 1;
            }
            if iv.hi.is_negative() {
                return -1;
            }
            p = p.saturating_mul(2);
        }
    }

    /// log2 upper bounds `(u, l)` with the value equal to `A / B`, `A` an
    /// algebraic integer whose conjugates are at most `2^u` and `|B| <= 2^l`.
    pub fn height_bounds(&self) -> (f64, f64) {
        if self.terms.is_empty() {
            return (0.0, 0.0);
        }
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = ratio::lcm(&den, c.denom());
        }
        let mut top = 0.0f64;
        for (m, c) in &self.terms {
            let n = c.numer() * (&den / c.denom());
            let r = mask_product(&self.bases, *m).bits() as f64 / 2.0;
            top = top.max(bit_len(&n) + r);
        }
        let count = (self.terms.len() as f64).log2().ceil();
        (top + count + 1.0, bit_len(&den))
    }

    pub fn approx_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let s = mask_product(&self.bases, *m).to_f64().unwrap_or(f64::MAX).sqrt();
                c.to_f64().unwrap_or(0.0) * s
            })
            .sum()
    }

    pub fn to_expr(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if *m == 0 {
                    fmt_rational(c)
                } else {
                    let n = mask_product(&self.bases, *m);
                    if c.is_one() {
                        format!("sqrt({n})")
                    } else {
                        format!("({} * sqrt({n}))", fmt_rational(c))
                    }
                }
            })
            .collect();
        let mut it = parts.into_iter();
        match it.next() {
            None => "0".to_string(),
            Some(first) => it.fold(first, |acc, t| format!("({acc} + {t})")),
        }
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Quad {
        Quad::from_rational(BigRational::new(n.into(), d.into()))
    }

    fn root(n: i64) -> Quad {
        Quad::sqrt_rational(&BigRational::from_integer(n.into()))
    }

    #[test]
    fn coprime_refinement() {
        let b = coprime_base(vec![BigUint::from(6u32), BigUint::from(10u32)]);
        assert_eq!(b, vec![BigUint::from(2u32), BigUint::from(3u32), BigUint::from(5u32)]);
        let b = coprime_base(vec![BigUint::from(12u32), BigUint::from(3u32)]);
        assert_eq!(b, vec![BigUint::from(2u32), BigUint::from(3u32)]);
    }

    #[test]
    fn mixed_radicands_cancel() {
        let s6 = root(6);
        let s2s3 = root(2).mul(&root(3)).unwrap();
        assert!(s6.sub(&s2s3).unwrap().is_zero());
        let s12 = root(12);
        assert!(s12.sub(&root(3).scale(&BigRational::from_integer(2.into()))).unwrap().is_zero());
    }

    #[test]
    fn inverse_by_conjugation() {
        let x = q(1, 1).add(&root(2)).unwrap().add(&root(3)).unwrap();
        let y = x.mul(&x.inv()).unwrap();
        assert_eq!(y.as_rational(), Some(BigRational::one()));
    }

    #[test]
    fn denesting() {
        // sqrt(3 + 2 sqrt 2) = 1 + sqrt 2
        let x = q(3, 1).add(&root(2).scale(&BigRational::from_integer(2.into()))).unwrap();
        let y = x.sqrt().unwrap();
        assert!(y.sub(&q(1, 1).add(&root(2)).unwrap()).unwrap().is_zero());
        // sqrt(5 + 2 sqrt 6) = sqrt 2 + sqrt 3
        let x = q(5, 1).add(&root(6).scale(&BigRational::from_integer(2.into()))).unwrap();
        let y = x.sqrt().unwrap();
        assert!(y.sub(&root(2).add(&root(3)).unwrap()).unwrap().is_zero());
        // sqrt(1 + sqrt 2) does not denest
        assert!(q(1, 1).add(&root(2)).unwrap().sqrt().is_none());
    }

    #[test]
    fn signs() {
        assert_eq!(root(2).sub(&q(3, 2)).unwrap().sign(), -1);
        assert_eq!(q(3, 1).sub(&root(2).scale(&BigRational::from_integer(2.into()))).unwrap().sign(), 1);
    }
}
