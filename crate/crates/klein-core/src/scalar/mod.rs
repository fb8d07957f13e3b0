//! Exact constructible reals.
//!
//! A [`Real`] is an immutable expression DAG over rational leaves with the
//! operations `+ - * /` and square root. Values that stay inside a
//! multiquadratic field are folded eagerly into a canonical exact form whose
//! zero test is structural. Everything else is decided by interval refinement
//! backed by a root separation bound: once the enclosure is narrower than the
//! bound and still contains zero, the value is exactly zero.

mod interval;
mod quad;
mod ratio;
mod tower;

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};
use interval::Iv;
use quad::Quad;

pub type Rational = BigRational;

const DEFAULT_PRECISION: u32 = 64;

/// Separation bounds above this many bits are settled by exact tower arithmetic instead.
const TOWER_BITS: u64 = 1024;
/// Refinement precision after which such a value is handed to the tower.
const TOWER_PRECISION: u32 = 256;

static PRECISION_OVERRIDE: AtomicU32 = AtomicU32::new(0);

/// Starting precision (fractional bits) of every refinement loop.
///
/// Defaults to 64; `HYP_PRECISION_BITS` overrides it, and
/// [`set_initial_precision`] overrides both.
pub fn initial_precision() -> u32 {
    let o = PRECISION_OVERRIDE.load(AtomicOrdering::Relaxed);
    if o != 0 {
        return o;
    }
    static FROM_ENV: OnceLock<u32> = OnceLock::new();
    *FROM_ENV.get_or_init(|| {
        std::env::var("HYP_PRECISION_BITS")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .filter(|&b| b >= 8)
            .unwrap_or(DEFAULT_PRECISION)
    })
}

pub fn set_initial_precision(bits: u32) {
    PRECISION_OVERRIDE.store(bits.max(8), AtomicOrdering::Relaxed);
}

/// An exact element of the constructible closure of the rationals.
#[derive(Clone)]
pub struct Real(Arc<Node>);

struct Node {
    kind: Kind,
    sign: OnceLock<i8>,
    bounds: OnceLock<(f64, f64)>,
    cache: Mutex<Option<(u32, Iv)>>,
}

enum Kind {
    Exact(Quad),
    Add(Real, Real),
    Sub(Real, Real),
    Mul(Real, Real),
    Div(Real, Real),
    Sqrt(Real),
}

/// The four field operations accepted by [`Real::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Real {
    fn node(kind: Kind) -> Real {
        Real(Arc::new(Node { kind, sign: OnceLock::new(), bounds: OnceLock::new(), cache: Mutex::new(None) }))
    }

    fn exact(q: Quad) -> Real {
        Real::node(Kind::Exact(q))
    }

    pub fn zero() -> Real {
        static ZERO: OnceLock<Real> = OnceLock::new();
        ZERO.get_or_init(|| Real::exact(Quad::zero())).clone()
    }

    pub fn one() -> Real {
        static ONE: OnceLock<Real> = OnceLock::new();
        ONE.get_or_init(|| Real::from_int(1)).clone()
    }

    pub fn from_int(n: i64) -> Real {
        Real::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(r: Rational) -> Real {
        Real::exact(Quad::from_rational(r))
    }

    /// The rational `p/q`; fails when `q = 0`.
    pub fn ratio(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Real> {
        let q = q.into();
        if q.is_zero() {
            return Err(Error::Construction("zero denominator".into()));
        }
        Ok(Real::from_rational(BigRational::new(p.into(), q)))
    }

    /// Shorthand for small literal fractions; panics when `q = 0`.
    pub fn frac(p: i64, q: i64) -> Real {
        Real::ratio(p, q).expect("nonzero denominator")
    }

    fn as_exact(&self) -> Option<&Quad> {
        match &self.0.kind {
            Kind::Exact(q) => Some(q),
            _ => None,
        }
    }

    /// The value as a rational, when it is one in canonical form.
    pub fn to_rational(&self) -> Option<Rational> {
        self.as_exact().and_then(Quad::as_rational)
    }

    /// True when the value is held in the canonical multiquadratic form.
    pub fn is_canonical(&self) -> bool {
        self.as_exact().is_some()
    }

    pub fn arith(op: Op, a: &Real, b: &Real) -> Result<Real> {
        match op {
            Op::Add => Ok(a.add_r(b)),
            Op::Sub => Ok(a.sub_r(b)),
            Op::Mul => Ok(a.mul_r(b)),
            Op::Div => a.checked_div(b),
        }
    }

    fn add_r(&self, o: &Real) -> Real {
        if let (Some(a), Some(b)) = (self.as_exact(), o.as_exact()) {
            if let Some(c) = a.add(b) {
                return Real::exact(c);
            }
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        if self.is_exact_zero() {
            return o.clone();
        }
        Real::node(Kind::Add(self.clone(), o.clone()))
    }

    fn sub_r(&self, o: &Real) -> Real {
        if let (Some(a), Some(b)) = (self.as_exact(), o.as_exact()) {
            if let Some(c) = a.sub(b) {
                return Real::exact(c);
            }
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        if Arc::ptr_eq(&self.0, &o.0) {
            return Real::zero();
        }
        Real::node(Kind::Sub(self.clone(), o.clone()))
    }

    fn mul_r(&self, o: &Real) -> Real {
        if let (Some(a), Some(b)) = (self.as_exact(), o.as_exact()) {
            if let Some(c) = a.mul(b) {
                return Real::exact(c);
            }
        }
        if self.is_exact_zero() || o.is_exact_zero() {
            return Real::zero();
        }
        Real::node(Kind::Mul(self.clone(), o.clone()))
    }

    fn is_exact_zero(&self) -> bool {
        self.as_exact().is_some_and(Quad::is_zero)
    }

    pub fn checked_div(&self, o: &Real) -> Result<Real> {
        if o.sign() == 0 {
            return Err(Error::DivisionByZero);
        }
        if let (Some(a), Some(b)) = (self.as_exact(), o.as_exact()) {
            if let Some(c) = a.div(b) {
                return Ok(Real::exact(c));
            }
        }
        if self.is_exact_zero() {
            return Ok(Real::zero());
        }
        Ok(Real::node(Kind::Div(self.clone(), o.clone())))
    }

    /// Non-negative square root; fails on negative operands.
    pub fn sqrt(&self) -> Result<Real> {
        if self.sign() < 0 {
            return Err(Error::NegativeSqrt);
        }
        if let Some(q) = self.as_exact() {
            if let Some(r) = q.sqrt() {
                return Ok(Real::exact(r));
            }
        }
        Ok(Real::node(Kind::Sqrt(self.clone())))
    }

    pub fn square(&self) -> Real {
        self.mul_r(self)
    }

    /// Exact sign: −1, 0 or +1.
    pub fn sign(&self) -> i8 {
        *self.0.sign.get_or_init(|| self.compute_sign())
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Exact equality, decided by the sign of the difference.
    pub fn eq_exact(&self, o: &Real) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.sub_r(o).sign() == 0
    }

    pub fn cmp_exact(&self, o: &Real) -> Ordering {
        self.sub_r(o).sign().cmp(&0)
    }

    pub fn abs(&self) -> Real {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    fn compute_sign(&self) -> i8 {
        if let Some(q) = self.as_exact() {
            return q.sign();
        }
        let bound = self.zero_bound_bits();
        let mut p = initial_precision();
        loop {
            if p > TOWER_PRECISION && bound > TOWER_BITS {
                return tower::sign(self);
            }
            if let Some(iv) = self.enclosure(p) {
                if let Some(s) = iv.sign() {
                    return s;
                }
                if u64::from(p) > bound {
                    let t = BigInt::from(1) << (u64::from(p) - bound);
                    if iv.lo > -&t && iv.hi < t {
                        return 0;
                    }
                }
            }
            p = p.checked_mul(2).expect("precision overflow");
        }
    }

    /// Bits `B` such that a nonzero value has magnitude at least `2^-B`.
    fn zero_bound_bits(&self) -> u64 {
        let (u, l) = self.height_bounds();
        let k = self.degree_log2();
        let d = 2f64.powi(k as i32);
        let b = (d - 1.0) * u.max(0.0) + l.max(0.0) + 2.0;
        b.ceil() as u64
    }

    fn height_bounds(&self) -> (f64, f64) {
        *self.0.bounds.get_or_init(|| match &self.0.kind {
            Kind::Exact(q) => q.height_bounds(),
            Kind::Add(a, b) | Kind::Sub(a, b) => {
                let (u1, l1) = a.height_bounds();
                let (u2, l2) = b.height_bounds();
                ((u1 + l2).max(u2 + l1) + 1.0, l1 + l2)
            }
            Kind::Mul(a, b) => {
                let (u1, l1) = a.height_bounds();
                let (u2, l2) = b.height_bounds();
                (u1 + u2, l1 + l2)
            }
            Kind::Div(a, b) => {
                let (u1, l1) = a.height_bounds();
                let (u2, l2) = b.height_bounds();
                (u1 + l2, l1 + u2)
            }
            Kind::Sqrt(a) => {
                let (u1, l1) = a.height_bounds();
                ((u1 + l1) / 2.0 + 1.0, l1)
            }
        })
    }

    /// log2 of an upper bound on the degree of the field generated by the value.
    fn degree_log2(&self) -> u32 {
        let mut seen: HashSet<*const Node> = HashSet::new();
        let mut radicands: HashSet<BigUint> = HashSet::new();
        let mut roots = 0u32;
        let mut stack = vec![self.clone()];
        while let Some(r) = stack.pop() {
            if !seen.insert(Arc::as_ptr(&r.0)) {
                continue;
            }
            match &r.0.kind {
                Kind::Exact(q) => radicands.extend(q.radicands().iter().cloned()),
                Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Kind::Sqrt(a) => {
                    roots += 1;
                    stack.push(a.clone());
                }
            }
        }
        roots + radicands.len() as u32
    }

    /// Enclosure at `p` fractional bits; `None` when a divisor enclosure
    /// still straddles zero at this precision.
    fn enclosure(&self, p: u32) -> Option<Iv> {
        if let Some((q, iv)) = self.0.cache.lock().unwrap().as_ref() {
            if *q >= p {
                return Some(iv.rescale(*q, p));
            }
        }
        let iv = match &self.0.kind {
            Kind::Exact(q) => q.enclose(p),
            Kind::Add(a, b) => a.enclosure(p)?.add(&b.enclosure(p)?),
            Kind::Sub(a, b) => a.enclosure(p)?.sub(&b.enclosure(p)?),
            Kind::Mul(a, b) => a.enclosure(p)?.mul(&b.enclosure(p)?, p),
            Kind::Div(a, b) => a.enclosure(p)?.div(&b.enclosure(p)?, p)?,
            Kind::Sqrt(a) => a.enclosure(p)?.sqrt(p)?,
        };
        let mut guard = self.0.cache.lock().unwrap();
        match guard.as_ref() {
            Some((q, _)) if *q >= p => {}
            _ => *guard = Some((p, iv.clone())),
        }
        Some(iv)
    }

    /// An enclosure `[lo, hi]` of the value as rationals, with width at most
    /// `2^-bits` (up to rounding of the final step).
    pub fn enclose(&self, bits: u32) -> (Rational, Rational) {
        let mut p = bits.max(initial_precision()) + 4;
        loop {
            if let Some(iv) = self.enclosure(p) {
                let w = &iv.hi - &iv.lo;
                if w.bits() as i64 <= i64::from(p) - i64::from(bits) {
                    let den = BigInt::from(1) << p;
                    return (BigRational::new(iv.lo, den.clone()), BigRational::new(iv.hi, den));
                }
            }
            p = p.checked_mul(2).expect("precision overflow");
        }
    }

    /// Decimal approximation with `digits` digits after the point. Diagnostic only.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8;
        let (lo, hi) = match self.to_rational() {
            Some(r) => (r.clone(), r),
            None => self.enclose(bits),
        };
        let mid = (lo + hi) / BigRational::from_integer(2.into());
        format_decimal(&mid, digits)
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0.kind {
            Kind::Exact(q) => q.approx_f64(),
            _ => {
                let (lo, hi) = self.enclose(60);
                ((lo + hi) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
            }
        }
    }

    /// Parse an expression string: `num`, `(e + e)`, `(e - e)`, `(e * e)`,
    /// `(e / e)`, `sqrt(e)`, where `num` is `[-]digits[/digits]`.
    pub fn parse(s: &str) -> Result<Real> {
        let mut p = Parser { s: s.as_bytes(), i: 0 };
        let v = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("trailing input at byte {}", p.i)));
        }
        Ok(v)
    }
}

fn format_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a * BigRational::from_integer(scale.clone())).round().to_integer();
    let int = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut out = String::new();
    if neg && !scaled.is_zero() {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", frac.to_string(), width = digits));
    }
    out
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected '{}' at byte {}", c as char, self.i)))
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(Error::Parse(format!("expected digits at byte {start}")));
        }
        let t = std::str::from_utf8(&self.s[start..self.i]).expect("ascii");
        Ok(t.parse::<BigInt>().expect("digits"))
    }

    fn expr(&mut self) -> Result<Real> {
        self.ws();
        let rest = &self.s[self.i..];
        if rest.starts_with(b"sqrt") {
            self.i += 4;
            self.eat(b'(')?;
            let a = self.expr()?;
            self.eat(b')')?;
            return a.sqrt().map_err(|e| Error::Parse(e.to_string()));
        }
        match rest.first() {
            Some(b'(') => {
                self.i += 1;
                let a = self.expr()?;
                self.ws();
                let op = match self.s.get(self.i) {
                    Some(b'+') => Op::Add,
                    Some(b'-') => Op::Sub,
                    Some(b'*') => Op::Mul,
                    Some(b'/') => Op::Div,
                    _ => return Err(Error::Parse(format!("expected operator at byte {}", self.i))),
                };
                self.i += 1;
                let b = self.expr()?;
                self.eat(b')')?;
                Real::arith(op, &a, &b).map_err(|e| Error::Parse(e.to_string()))
            }
            Some(_) => {
                let neg = if self.s[self.i] == b'-' {
                    self.i += 1;
                    true
                } else {
                    false
                };
                let mut n = self.digits()?;
                if neg {
                    n = -n;
                }
                let d = if self.s.get(self.i) == Some(&b'/') {
                    self.i += 1;
                    self.digits()?
                } else {
                    BigInt::from(1)
                };
                Real::ratio(n, d).map_err(|e| Error::Parse(e.to_string()))
            }
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Exact(q) => f.write_str(&q.to_expr()),
            Kind::Add(a, b) => write!(f, "({a} + {b})"),
            Kind::Sub(a, b) => write!(f, "({a} - {b})"),
            Kind::Mul(a, b) => write!(f, "({a} * {b})"),
            Kind::Div(a, b) => write!(f, "({a} / {b})"),
            Kind::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({self} ≈ {})", self.to_decimal(12))
    }
}

impl From<i64> for Real {
    fn from(n: i64) -> Real {
        Real::from_int(n)
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Real {
        Real::from_rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl std::ops::$tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                $body(self, o)
            }
        }
        impl std::ops::$tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                $body(&self, &o)
            }
        }
        impl std::ops::$tr<&Real> for Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                $body(&self, o)
            }
        }
        impl std::ops::$tr<Real> for &Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                $body(self, &o)
            }
        }
    };
}

binop!(Add, add, |a: &Real, b: &Real| a.add_r(b));
binop!(Sub, sub, |a: &Real, b: &Real| a.sub_r(b));
binop!(Mul, mul, |a: &Real, b: &Real| a.mul_r(b));
// Panics on an exact zero divisor; use `checked_div` when that can happen.
binop!(Div, div, |a: &Real, b: &Real| a.checked_div(b).expect("division by an exact zero"));

impl std::ops::Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match &self.0.kind {
            Kind::Exact(q) => Real::exact(q.neg()),
            _ => Real::zero().sub_r(self),
        }
    }
}

impl std::ops::Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// The rational `p/q` as a constructible real.
pub fn cr_from_rational(p: i64, q: i64) -> Result<Real> {
    Real::ratio(p, q)
}

pub fn cr_arith(op: Op, a: &Real, b: &Real) -> Result<Real> {
    Real::arith(op, a, b)
}

pub fn cr_sqrt(a: &Real) -> Result<Real> {
    a.sqrt()
}

pub fn cr_sign(a: &Real) -> i8 {
    a.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nested(n: i64) -> Real {
        // sqrt(n + sqrt(2)) stays outside the canonical form
        (Real::from_int(n) + Real::from_int(2).sqrt().unwrap()).sqrt().unwrap()
    }

    #[test]
    fn nested_roots_leave_canonical_form() {
        let v = nested(1);
        assert!(!v.is_canonical());
        assert_eq!((v.square() - (Real::one() + Real::from_int(2).sqrt().unwrap())).sign(), 0);
    }

    #[test]
    fn nested_identity_is_zero() {
        let a = nested(1);
        let b = nested(3);
        let c = Real::from_int(5).sqrt().unwrap();
        let lhs = (&a + &b) * &c;
        let rhs = &a * &c + &b * &c;
        assert_eq!((lhs - rhs).sign(), 0);
        assert_eq!((&a - &b).sign(), -1);
    }

    #[test]
    fn division_through_dag() {
        let a = nested(2);
        let q = (&Real::one() / &a) * &a;
        assert!(q.eq_exact(&Real::one()));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(Real::frac(1, 3).to_decimal(5), "0.33333");
        assert_eq!(Real::frac(-2, 3).to_decimal(3), "-0.667");
        assert_eq!(Real::from_int(2).sqrt().unwrap().to_decimal(6), "1.414214");
    }
}
