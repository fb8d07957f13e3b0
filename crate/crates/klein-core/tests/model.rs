use klein_core::model::{
    between, bowtie, classify_pair, common_parallel, cyclic_order, line_through, meet, other_rimpoint,
    rimpoint_from_parameter, same_side, separation,
};
use klein_core::{AnyPoint, Intersection, Line, PairClass, Point, Rational, Ray, Real, Rimpoint};

fn q(n: i64, d: i64) -> Real {
    Real::frac(n, d)
}

fn pt(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
    Point::rat(xn, xd, yn, yd)
}

fn rim(xn: i64, xd: i64, yn: i64, yd: i64) -> Rimpoint {
    Rimpoint::rat(xn, xd, yn, yd)
}

fn vertical(n: i64, d: i64) -> Line {
    Line::from_coefficients(Real::one(), Real::zero(), -q(n, d)).unwrap()
}

fn x_axis() -> Line {
    Line::through_rims(&rim(1, 1, 0, 1), &rim(-1, 1, 0, 1)).unwrap()
}

fn y_axis() -> Line {
    Line::through_rims(&rim(0, 1, 1, 1), &rim(0, 1, -1, 1)).unwrap()
}

fn same_point(p: &Point, x: Real, y: Real) -> bool {
    p.x.eq_exact(&x) && p.y.eq_exact(&y)
}

fn same_rim(r: &Rimpoint, x: Real, y: Real) -> bool {
    r.x.eq_exact(&x) && r.y.eq_exact(&y)
}

#[test]
fn parameter_table() {
    assert!(same_rim(&rimpoint_from_parameter(Some(&Rational::from_integer(0.into()))), q(1, 1), q(0, 1)));
    assert!(same_rim(&Rimpoint::from_ratio(1, 1), q(0, 1), q(1, 1)));
    assert!(same_rim(&rimpoint_from_parameter(None), q(-1, 1), q(0, 1)));
    assert!(same_rim(&Rimpoint::from_ratio(1, 2), q(3, 5), q(4, 5)));
}

#[test]
fn lines_through_points() {
    let l = line_through(&pt(0, 1, 0, 1).into(), &pt(1, 2, 0, 1).into()).unwrap();
    assert!(l.eq_exact(&x_axis()));
    assert!(l.has_end(&rim(1, 1, 0, 1)) && l.has_end(&rim(-1, 1, 0, 1)));

    let r = line_through(&rim(1, 1, 0, 1).into(), &rim(0, 1, 1, 1).into()).unwrap();
    let (a, b, c) = r.coefficients();
    assert!((a + c).is_zero() && (b + c).is_zero());

    // chord x = 1/2 has ends (1/2, ±√3/2)
    let v = line_through(&pt(1, 2, 0, 1).into(), &pt(1, 2, 1, 4).into()).unwrap();
    let half_root3 = Real::from_int(3).sqrt().unwrap() * q(1, 2);
    for e in v.ends() {
        assert!(e.x.eq_exact(&q(1, 2)));
        assert!(e.y.abs().eq_exact(&half_root3));
        assert!((e.y.square() - q(3, 4)).is_zero());
    }
    assert_ne!(v.ends()[0].y.sign(), v.ends()[1].y.sign());

    assert!(line_through(&pt(1, 3, 0, 1).into(), &pt(1, 3, 0, 1).into()).is_err());
}

#[test]
fn other_rimpoint_examples() {
    let o = other_rimpoint(&rim(0, 1, 1, 1), &Point::origin());
    assert!(same_rim(&o, q(0, 1), q(-1, 1)));
    let o = other_rimpoint(&rim(1, 1, 0, 1), &pt(1, 2, 0, 1));
    assert!(same_rim(&o, q(-1, 1), q(0, 1)));
    let o = other_rimpoint(&rim(0, 1, -1, 1), &pt(1, 3, 0, 1));
    assert!(same_rim(&o, q(3, 5), q(4, 5)));
}

#[test]
fn meets() {
    match meet(&x_axis(), &y_axis()).unwrap() {
        Intersection::Finite(p) => assert!(same_point(&p, q(0, 1), q(0, 1))),
        other => panic!("{other:?}"),
    }
    assert!(matches!(meet(&vertical(1, 2), &vertical(-1, 2)).unwrap(), Intersection::Empty));
    let d = Line::through_rims(&rim(1, 1, 0, 1), &rim(0, 1, 1, 1)).unwrap();
    match meet(&x_axis(), &d).unwrap() {
        Intersection::Rim(r) => assert!(same_rim(&r, q(1, 1), q(0, 1))),
        other => panic!("{other:?}"),
    }
    assert!(meet(&x_axis(), &x_axis()).is_err());

    assert_eq!(classify_pair(&x_axis(), &y_axis()).unwrap(), PairClass::Intersecting);
    assert_eq!(classify_pair(&x_axis(), &d).unwrap(), PairClass::Parallel);
    assert_eq!(classify_pair(&vertical(1, 2), &vertical(-1, 2)).unwrap(), PairClass::Ultraparallel);
}

#[test]
fn separation_and_order() {
    let e = rim(1, 1, 0, 1);
    let n = rim(0, 1, 1, 1);
    let w = rim(-1, 1, 0, 1);
    let s = rim(0, 1, -1, 1);
    assert!(separation(&e, &w, &n, &s).unwrap());
    assert!(!separation(&e, &n, &w, &s).unwrap());
    let t = |k| Rimpoint::from_ratio(k, 1);
    assert!(separation(&t(0), &t(2), &t(1), &t(3)).unwrap());
    assert!(separation(&e, &e, &n, &s).is_err());

    assert!(cyclic_order(&e, &n, &w).unwrap());
    assert!(!cyclic_order(&e, &w, &n).unwrap());
    assert!(cyclic_order(&t(0), &t(2), &t(3)).unwrap());
}

#[test]
fn betweenness_and_sides() {
    assert!(between(&pt(1, 2, 0, 1), &Point::origin(), &pt(-1, 2, 0, 1)).unwrap());
    assert!(!between(&Point::origin(), &pt(1, 2, 0, 1), &pt(1, 4, 0, 1)).unwrap());
    assert!(between(&Point::origin(), &pt(1, 4, 0, 1), &pt(1, 2, 0, 1)).unwrap());
    assert!(between(&Point::origin(), &pt(1, 4, 0, 1), &pt(0, 1, 1, 2)).is_err());

    let h = x_axis();
    assert!(same_side(&h, &pt(0, 1, 1, 2).into(), &pt(1, 2, 1, 4).into()).unwrap());
    assert!(!same_side(&h, &rim(0, 1, 1, 1).into(), &rim(0, 1, -1, 1).into()).unwrap());
    assert!(!same_side(&vertical(1, 2), &Point::origin().into(), &pt(3, 5, 0, 1).into()).unwrap());
    assert!(same_side(&h, &Point::origin().into(), &pt(0, 1, 1, 2).into()).is_err());
}

#[test]
fn bowtie_examples() {
    let o = bowtie(&vertical(1, 2), &vertical(-1, 2)).unwrap();
    assert!(same_point(&o, q(0, 1), q(0, 1)));
    let o = bowtie(&x_axis(), &y_axis()).unwrap();
    assert!(same_point(&o, q(0, 1), q(0, 1)));

    // diagonals (1,0)–(−3/5,4/5) and (−1,0)–(3/5,4/5) meet on the y-axis at height 1/2
    let top = Line::through_rims(&rim(-3, 5, 4, 5), &rim(3, 5, 4, 5)).unwrap();
    let o = bowtie(&x_axis(), &top).unwrap();
    assert!(same_point(&o, q(0, 1), q(1, 2)));
    let back = bowtie(&top, &x_axis()).unwrap();
    assert!(o.eq_exact(&back));

    let d = Line::through_rims(&rim(1, 1, 0, 1), &rim(0, 1, 1, 1)).unwrap();
    assert!(bowtie(&x_axis(), &d).is_err());
}

#[test]
fn common_parallels() {
    let o = Point::origin();
    let r = Ray::new(o.clone(), rim(1, 1, 0, 1));
    let s = Ray::new(o, rim(0, 1, 1, 1));
    let c = common_parallel(&r, &s).unwrap();
    assert!(c.has_end(&rim(1, 1, 0, 1)) && c.has_end(&rim(0, 1, 1, 1)));

    let r = Ray::new(pt(0, 1, 1, 3), rim(1, 1, 0, 1));
    let s = Ray::new(pt(0, 1, -1, 3), rim(-1, 1, 0, 1));
    assert!(common_parallel(&r, &s).unwrap().eq_exact(&x_axis()));

    let r = Ray::new(pt(1, 3, 0, 1), rim(0, 1, 1, 1));
    let s = Ray::new(pt(-1, 3, 0, 1), rim(0, 1, -1, 1));
    assert!(common_parallel(&r, &s).unwrap().eq_exact(&y_axis()));

    let r = Ray::new(pt(1, 3, 0, 1), rim(1, 1, 0, 1));
    let s = Ray::new(pt(-1, 3, 0, 1), rim(-1, 1, 0, 1));
    assert!(common_parallel(&r, &s).is_err());
}

#[test]
fn checked_constructors() {
    assert!(Point::new(q(3, 5), q(4, 5)).is_err());
    assert!(Rimpoint::new(q(1, 2), q(1, 2)).is_err());
    assert!(Line::from_coefficients(Real::one(), Real::zero(), q(-1, 1)).is_err());
    let below: AnyPoint = rim(3, 5, -4, 5).into();
    let above: AnyPoint = pt(0, 1, 1, 2).into();
    assert_eq!(x_axis().side(&below), -x_axis().side(&above));
    assert_eq!(x_axis().side(&Point::origin().into()), 0);
}
