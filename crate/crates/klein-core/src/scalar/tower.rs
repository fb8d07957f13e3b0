//! Exact zero tests in a tower of real quadratic extensions.
//!
//! Each square root met while walking an expression is either found inside
//! the field built so far or adjoined as a new generator, so every extension
//! step is proper and an element is zero exactly when all its coordinates are.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::Iv;
use super::quad::Quad;
use super::ratio;
use super::{initial_precision, Kind, Node, Real};

/// `Q(r)` is a rational; `P(k, a, b)` is `a + b·r_k` with `a`, `b` below level `k`
/// and `b` nonzero.
#[derive(Clone, Debug)]
enum El {
    Q(BigRational),
    P(usize, Box<El>, Box<El>),
}

impl El {
    fn zero() -> El {
        El::Q(BigRational::zero())
    }

    fn level(&self) -> usize {
        match self {
            El::Q(_) => 0,
            El::P(k, _, _) => *k,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, El::Q(q) if q.is_zero())
    }
}

fn make(k: usize, a: El, b: El) -> El {
    if b.is_zero() {
        a
    } else {
        El::P(k, Box::new(a), Box::new(b))
    }
}

fn split(x: &El, k: usize) -> (El, El) {
    match x {
        El::P(j, a, b) if *j == k => ((**a).clone(), (**b).clone()),
        _ => (x.clone(), El::zero()),
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRational::new(root(r.numer())?, root(r.denom())?))
}

struct Tower {
    /// `radicands[k - 1]` is the square of generator `r_k`.
    radicands: Vec<El>,
    gens: Vec<(u32, Iv)>,
    bases: HashMap<BigUint, El>,
}

impl Tower {
    fn new() -> Tower {
        Tower { radicands: Vec::new(), gens: Vec::new(), bases: HashMap::new() }
    }

    fn add(&self, x: &El, y: &El) -> El {
        if let (El::Q(a), El::Q(b)) = (x, y) {
            return El::Q(ratio::add(a, b));
        }
        let k = x.level().max(y.level());
        let (a1, b1) = split(x, k);
        let (a2, b2) = split(y, k);
        make(k, self.add(&a1, &a2), self.add(&b1, &b2))
    }

    fn neg(&self, x: &El) -> El {
        match x {
            El::Q(a) => El::Q(-a),
            El::P(k, a, b) => El::P(*k, Box::new(self.neg(a)), Box::new(self.neg(b))),
        }
    }

    fn sub(&self, x: &El, y: &El) -> El {
        self.add(x, &self.neg(y))
    }

    fn mul(&self, x: &El, y: &El) -> El {
        if let (El::Q(a), El::Q(b)) = (x, y) {
            return El::Q(ratio::mul(a, b));
        }
        if x.is_zero() || y.is_zero() {
            return El::zero();
        }
        let k = x.level().max(y.level());
        if x.level() < k {
            let (a, b) = split(y, k);
            return make(k, self.mul(x, &a), self.mul(x, &b));
        }
        if y.level() < k {
            return self.mul(y, x);
        }
        let (a1, b1) = split(x, k);
        let (a2, b2) = split(y, k);
        let bb = self.mul(&self.mul(&b1, &b2), &self.radicands[k - 1]);
        let a = self.add(&self.mul(&a1, &a2), &bb);
        let b = self.add(&self.mul(&a1, &b2), &self.mul(&a2, &b1));
        make(k, a, b)
    }

    fn scale(&self, x: &El, c: &BigRational) -> El {
        self.mul(x, &El::Q(c.clone()))
    }

    fn inv(&self, x: &El) -> El {
        match x {
            El::Q(a) => El::Q(a.recip()),
            El::P(k, a, b) => {
                let n = self.sub(&self.mul(a, a), &self.mul(&self.mul(b, b), &self.radicands[k - 1]));
                let ni = self.inv(&n);
                make(*k, self.mul(a, &ni), self.neg(&self.mul(b, &ni)))
            }
        }
    }

    /// A square root of `x` inside the field of the first `level` generators.
    fn sqrt_in(&self, x: &El, level: usize) -> Option<El> {
        if level == 0 {
            return match x {
                El::Q(r) => rational_sqrt(r).map(El::Q),
                El::P(..) => None,
            };
        }
        let below = level - 1;
        let big_r = &self.radicands[below];
        let (c, d) = split(x, level);
        if d.is_zero() {
            if let Some(a) = self.sqrt_in(&c, below) {
                return Some(a);
            }
            let b = self.sqrt_in(&self.mul(&c, &self.inv(big_r)), below)?;
            return Some(make(level, El::zero(), b));
        }
        let norm = self.sub(&self.mul(&c, &c), &self.mul(&self.mul(&d, &d), big_r));
        let m = self.sqrt_in(&norm, below)?;
        let half = BigRational::new(1.into(), 2.into());
        for cand in [self.add(&c, &m), self.sub(&c, &m)] {
            if cand.is_zero() {
                continue;
            }
            if let Some(a) = self.sqrt_in(&self.scale(&cand, &half), below) {
                let b = self.mul(&self.scale(&d, &half), &self.inv(&a));
                return Some(make(level, a, b));
            }
        }
        None
    }

    fn gen_enclosure(&mut self, k: usize, p: u32) -> Iv {
        let (q, iv) = &self.gens[k - 1];
        if *q >= p {
            return iv.rescale(*q, p);
        }
        let r = self.radicands[k - 1].clone();
        let iv = self.enclose(&r, p).sqrt(p).expect("radicand is positive");
        self.gens[k - 1] = (p, iv.clone());
        iv
    }

    fn enclose(&mut self, x: &El, p: u32) -> Iv {
        match x {
            El::Q(r) => Iv::rational(r, p),
            El::P(k, a, b) => {
                let g = self.gen_enclosure(*k, p);
                let ia = self.enclose(a, p);
                ia.add(&self.enclose(b, p).mul(&g, p))
            }
        }
    }

    fn sign(&mut self, x: &El) -> i8 {
        if let El::Q(r) = x {
            return if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            };
        }
        let mut p = initial_precision();
        loop {
            if let Some(s) = self.enclose(x, p).sign() {
                if s != 0 {
                    return s;
                }
            }
            p = p.checked_mul(2).expect("precision overflow");
        }
    }

    /// The nonnegative square root of `x >= 0`, adjoining a generator when needed.
    fn root(&mut self, x: El) -> El {
        if x.is_zero() {
            return x;
        }
        let level = self.radicands.len();
        if let Some(s) = self.sqrt_in(&x, level) {
            return if self.sign(&s) < 0 { self.neg(&s) } else { s };
        }
        self.radicands.push(x);
        self.gens.push((0, Iv::point(BigInt::zero())));
        make(self.radicands.len(), El::zero(), El::Q(BigRational::one()))
    }

    fn quad(&mut self, q: &Quad) -> El {
        let gens: Vec<El> = q
            .radicands()
            .iter()
            .map(|b| {
                if let Some(e) = self.bases.get(b) {
                    return e.clone();
                }
                let e = self.root(El::Q(BigRational::from_integer(BigInt::from(b.clone()))));
                self.bases.insert(b.clone(), e.clone());
                e
            })
            .collect();
        let mut acc = El::zero();
        for (m, c) in q.terms() {
            let mut t = El::Q(c.clone());
            for (i, g) in gens.iter().enumerate() {
                if m & (1 << i) != 0 {
                    t = self.mul(&t, g);
                }
            }
            acc = self.add(&acc, &t);
        }
        acc
    }

    fn eval(&mut self, x: &Real, memo: &mut HashMap<*const Node, El>) -> El {
        let key = Arc::as_ptr(&x.0);
        if let Some(e) = memo.get(&key) {
            return e.clone();
        }
        let e = match &x.0.kind {
            Kind::Exact(q) => self.quad(q),
            Kind::Add(a, b) => {
                let (a, b) = (self.eval(a, memo), self.eval(b, memo));
                self.add(&a, &b)
            }
            Kind::Sub(a, b) => {
                let (a, b) = (self.eval(a, memo), self.eval(b, memo));
                self.sub(&a, &b)
            }
            Kind::Mul(a, b) => {
                let (a, b) = (self.eval(a, memo), self.eval(b, memo));
                self.mul(&a, &b)
            }
            Kind::Div(a, b) => {
                let (a, b) = (self.eval(a, memo), self.eval(b, memo));
                self.mul(&a, &self.inv(&b))
            }
            Kind::Sqrt(a) => {
                let a = self.eval(a, memo);
                self.root(a)
            }
        };
        memo.insert(key, e.clone());
        e
    }
}

/// Exact sign of `x`.
pub(super) fn sign(x: &Real) -> i8 {
    let mut t = Tower::new();
    let e = t.eval(x, &mut HashMap::new());
    t.sign(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Real {
        Real::from(n)
    }

    #[test]
    fn nested_identity_is_zero() {
        // sqrt(3 + 2 sqrt 2) = 1 + sqrt 2
        let lhs = (r(3) + r(2) * r(2).sqrt().unwrap()).sqrt().unwrap();
        let rhs = r(1) + r(2).sqrt().unwrap();
        assert_eq!(sign(&(lhs.clone() - rhs.clone())), 0);
        assert_eq!(sign(&(lhs - rhs + Real::frac(1, 1 << 40))), 1);
    }

    #[test]
    fn independent_roots_do_not_cancel() {
        let a = (r(2) + r(3).sqrt().unwrap()).sqrt().unwrap();
        let b = (r(2) - r(3).sqrt().unwrap()).sqrt().unwrap();
        // a·b = 1 and a + b = sqrt 6
        assert_eq!(sign(&(a.clone() * b.clone() - r(1))), 0);
        assert_eq!(sign(&(a.clone() + b.clone() - r(6).sqrt().unwrap())), 0);
        assert_eq!(sign(&(a - b - r(1))), 1);
    }
}
