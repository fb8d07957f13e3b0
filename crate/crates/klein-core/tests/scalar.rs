use klein_core::scalar::{cr_arith, cr_from_rational, cr_sign, cr_sqrt, Op};
use klein_core::{Rational, Real};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Expr {
    Lit(i64, i64),
    Bin(Op, Box<Expr>, Box<Expr>),
    Sqrt(Box<Expr>),
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (-9i64..=9, 1i64..=9).prop_map(|(n, d)| Expr::Lit(n, d));
    leaf.prop_recursive(6, 48, 2, |inner| {
        let op = prop_oneof![Just(Op::Add), Just(Op::Sub), Just(Op::Mul), Just(Op::Div)];
        prop_oneof![
            3 => (op, inner.clone(), inner.clone())
                .prop_map(|(o, a, b)| Expr::Bin(o, Box::new(a), Box::new(b))),
            1 => inner.prop_map(|a| Expr::Sqrt(Box::new(a))),
        ]
    })
}

/// Exact value together with a float shadow; a zero divisor drops the
/// quotient and a negative radicand is replaced by its absolute value.
fn build(e: &Expr) -> (Real, f64) {
    match e {
        Expr::Lit(n, d) => (Real::frac(*n, *d), *n as f64 / *d as f64),
        Expr::Bin(op, a, b) => {
            let (x, fx) = build(a);
            let (y, fy) = build(b);
            match op {
                Op::Add => (&x + &y, fx + fy),
                Op::Sub => (&x - &y, fx - fy),
                Op::Mul => (&x * &y, fx * fy),
                Op::Div if y.is_zero() => (x, fx),
                Op::Div => (cr_arith(Op::Div, &x, &y).unwrap(), fx / fy),
            }
        }
        Expr::Sqrt(a) => {
            let (x, fx) = build(a);
            (cr_sqrt(&x.abs()).unwrap(), fx.abs().sqrt())
        }
    }
}

fn sqrt2() -> Real {
    Real::from_int(2).sqrt().unwrap()
}

#[test]
fn rationals_are_canonical() {
    assert!(cr_from_rational(0, 1).unwrap().is_zero());
    assert_eq!(cr_from_rational(6, -10).unwrap().to_rational(), Some(Rational::new((-3).into(), 5.into())));
    assert!(cr_from_rational(1, 0).is_err());
    let s = cr_arith(Op::Add, &Real::frac(1, 2), &Real::frac(1, 3)).unwrap();
    assert_eq!(s.to_rational(), Some(Rational::new(5.into(), 6.into())));
}

#[test]
fn root_identities() {
    let r = sqrt2();
    assert_eq!(cr_sign(&(&r * &r - Real::from_int(2))), 0);
    let v = cr_arith(Op::Div, &Real::one(), &r).unwrap();
    assert_eq!(cr_sign(&(&v * &r - Real::one())), 0);
    assert_eq!(cr_sign(&(cr_sqrt(&Real::frac(9, 25)).unwrap() - Real::frac(3, 5))), 0);
    assert!(cr_sqrt(&Real::zero()).unwrap().is_zero());
    assert!(cr_sqrt(&Real::frac(-1, 3)).is_err());
    assert!(cr_arith(Op::Div, &Real::one(), &(&r * &r - Real::from_int(2))).is_err());
}

#[test]
fn close_signs() {
    assert_eq!(cr_sign(&(sqrt2() - Real::frac(3, 2))), -1);
    assert_eq!(cr_sign(&(Real::from_int(3) - Real::from_int(2) * sqrt2())), 1);
    // 1 + sqrt 2 against sqrt(3 + 2 sqrt 2 + 2^-200)
    let tiny = Real::from_rational(Rational::new(1.into(), num_bigint::BigInt::from(1) << 200));
    let inner = Real::from_int(3) + Real::from_int(2) * sqrt2();
    let a = (&inner + &tiny).sqrt().unwrap();
    assert_eq!(cr_sign(&(a - Real::one() - sqrt2())), 1);
}

#[test]
fn root_two_enclosure() {
    let (lo, hi) = sqrt2().enclose(20);
    assert!(lo >= Rational::new(141421.into(), 100000.into()));
    assert!(hi <= Rational::new(141422.into(), 100000.into()));
}

#[test]
fn nested_denesting_identity() {
    // sqrt(5 + 2 sqrt 6) = sqrt 2 + sqrt 3
    let six = Real::from_int(6).sqrt().unwrap();
    let lhs = (Real::from_int(5) + Real::from_int(2) * six).sqrt().unwrap();
    let rhs = sqrt2() + Real::from_int(3).sqrt().unwrap();
    assert_eq!(cr_sign(&(lhs - rhs)), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn distributive((a, b, c) in (expr(), expr(), expr())) {
        let (a, b, c) = (build(&a).0, build(&b).0, build(&c).0);
        let lhs = (&a + &b) * &c;
        let rhs = &a * &c + &b * &c;
        prop_assert_eq!(cr_sign(&(lhs - rhs)), 0);
    }

    #[test]
    fn difference_of_squares((a, b) in (expr(), expr())) {
        let (a, b) = (build(&a).0, build(&b).0);
        let lhs = (&a - &b) * (&a + &b);
        prop_assert_eq!(cr_sign(&(lhs - (a.square() - b.square()))), 0);
    }

    #[test]
    fn quotient_inverts_product((a, b) in (expr(), expr())) {
        let (a, b) = (build(&a).0, build(&b).0);
        prop_assume!(!b.is_zero());
        let q = cr_arith(Op::Div, &(&a * &b), &b).unwrap();
        prop_assert_eq!(cr_sign(&(q - a)), 0);
    }

    #[test]
    fn root_squares_back(a in expr()) {
        let a = build(&a).0.abs();
        let r = cr_sqrt(&a).unwrap();
        prop_assert!(cr_sign(&r) >= 0);
        prop_assert_eq!(cr_sign(&(r.square() - a)), 0);
    }

    #[test]
    fn sign_matches_float_shadow(e in expr()) {
        let (v, f) = build(&e);
        prop_assume!(f.is_finite() && f.abs() > 1e-6);
        prop_assert_eq!(cr_sign(&v), if f > 0.0 { 1 } else { -1 });
    }

    #[test]
    fn perturbation_is_detected((a, k) in (expr(), 1u32..120)) {
        let a = build(&a).0;
        let eps = Real::from_rational(Rational::new(1.into(), num_bigint::BigInt::from(1) << k));
        prop_assert_eq!(cr_sign(&(&a + &eps - &a)), 1);
    }

    #[test]
    fn enclosures_contain_finer_ones((e, bits) in (expr(), 8u32..64)) {
        let v = build(&e).0;
        let (lo, hi) = v.enclose(bits);
        let (flo, fhi) = v.enclose(4 * bits);
        let reference = (flo + fhi) / Rational::from_integer(2.into());
        prop_assert!(lo <= reference && reference <= hi);
    }

    #[test]
    fn expression_strings_reload(e in expr()) {
        let v = build(&e).0;
        let back = Real::parse(&v.to_string()).unwrap();
        prop_assert_eq!(cr_sign(&(back - v)), 0);
    }
}
