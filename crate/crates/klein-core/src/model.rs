//! Points, rimpoints and chords of the Cayley-Klein disk, with the incidence,
//! order and separation predicates.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::fault::{self, Fault};
use crate::scalar::{Rational, Real};
use crate::{Error, Result};

/// A point strictly inside the unit disk.
#[derive(Clone)]
pub struct Point {
    pub x: Real,
    pub y: Real,
}

/// A point on the unit circle.
#[derive(Clone)]
pub struct Rimpoint {
    pub x: Real,
    pub y: Real,
}

/// Either kind of point.
#[derive(Clone, Debug)]
pub enum AnyPoint {
    Finite(Point),
    Rim(Rimpoint),
}

/// A chord of the unit circle, stored by its two ends and the coefficients
/// of `a·x + b·y + c = 0`.
#[derive(Clone)]
pub struct Line(Arc<LineData>);

struct LineData {
    ends: [Rimpoint; 2],
    a: Real,
    b: Real,
    c: Real,
    axial: OnceLock<(Point, Point)>,
}

#[derive(Clone, Debug)]
pub struct Ray {
    pub origin: Point,
    pub end: Rimpoint,
}

#[derive(Clone, Debug)]
pub enum Intersection {
    Finite(Point),
    Rim(Rimpoint),
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    Intersecting,
    Parallel,
    Ultraparallel,
}

fn orient(ax: &Real, ay: &Real, bx: &Real, by: &Real, cx: &Real, cy: &Real) -> Real {
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Intersection of the lines `(a1,b1,c1)` and `(a2,b2,c2)` in homogeneous form.
fn cross(l: (&Real, &Real, &Real), m: (&Real, &Real, &Real)) -> (Real, Real, Real) {
    (l.1 * m.2 - l.2 * m.1, l.2 * m.0 - l.0 * m.2, l.0 * m.1 - l.1 * m.0)
}

impl Point {
    /// Checked constructor: fails unless `x² + y² < 1`.
    pub fn new(x: Real, y: Real) -> Result<Point> {
        let p = Point { x, y };
        if p.norm2_minus_one().sign() >= 0 {
            return Err(Error::Domain(format!("({}, {}) is not interior", p.x, p.y)));
        }
        Ok(p)
    }

    pub(crate) fn raw(x: Real, y: Real) -> Point {
        Point { x, y }
    }

    pub fn origin() -> Point {
        Point::raw(Real::zero(), Real::zero())
    }

    /// The point `(xn/xd, yn/yd)`; panics when it is not interior.
    pub fn rat(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(Real::frac(xn, xd), Real::frac(yn, yd)).expect("interior point")
    }

    pub fn from_rationals(x: Rational, y: Rational) -> Result<Point> {
        Point::new(Real::from_rational(x), Real::from_rational(y))
    }

    fn norm2_minus_one(&self) -> Real {
        self.x.square() + self.y.square() - Real::one()
    }

    pub fn eq_exact(&self, o: &Point) -> bool {
        self.x.eq_exact(&o.x) && self.y.eq_exact(&o.y)
    }

    /// Whether `self`, `q`, `r` are collinear.
    pub fn collinear(&self, q: &Point, r: &Point) -> bool {
        orient(&self.x, &self.y, &q.x, &q.y, &r.x, &r.y).is_zero()
    }
}

impl Rimpoint {
    /// Checked constructor: fails unless `x² + y² = 1`.
    pub fn new(x: Real, y: Real) -> Result<Rimpoint> {
        if !(x.square() + y.square() - Real::one()).is_zero() {
            return Err(Error::Domain(format!("({x}, {y}) is not on the unit circle")));
        }
        Ok(Rimpoint { x, y })
    }

    pub(crate) fn raw(x: Real, y: Real) -> Rimpoint {
        Rimpoint { x, y }
    }

    /// The rational parametrisation `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`, with
    /// `None` standing for `t = ∞ ↦ (−1, 0)`.
    pub fn from_parameter(t: Option<&Rational>) -> Rimpoint {
        match t {
            None => Rimpoint::raw(Real::from_int(-1), Real::zero()),
            Some(t) => {
                let one = Rational::from_integer(1.into());
                let t2 = t * t;
                let den = &one + &t2;
                Rimpoint::raw(Real::from_rational((&one - &t2) / &den), Real::from_rational((t + t) / den))
            }
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Rimpoint {
        Rimpoint::from_parameter(Some(&Rational::new(p.into(), q.into())))
    }

    /// Rimpoint with rational coordinates `(xn/xd, yn/yd)`; panics when off the circle.
    pub fn rat(xn: i64, xd: i64, yn: i64, yd: i64) -> Rimpoint {
        Rimpoint::new(Real::frac(xn, xd), Real::frac(yn, yd)).expect("point on the circle")
    }

    pub fn eq_exact(&self, o: &Rimpoint) -> bool {
        self.x.eq_exact(&o.x) && self.y.eq_exact(&o.y)
    }

    /// The second end of the chord through `self` and the interior point `a`.
    pub fn other_through(&self, a: &Point) -> Rimpoint {
        let dx = &a.x - &self.x;
        let dy = &a.y - &self.y;
        let dot = &self.x * &dx + &self.y * &dy;
        let len = dx.square() + dy.square();
        let t = Real::from_int(-2) * dot / len;
        Rimpoint::raw(&self.x + &t * &dx, &self.y + &t * &dy)
    }
}

/// The second circle point of the line through `x` and `a`.
pub fn other_rimpoint(x: &Rimpoint, a: &Point) -> Rimpoint {
    x.other_through(a)
}

impl AnyPoint {
    fn coords(&self) -> (&Real, &Real) {
        match self {
            AnyPoint::Finite(p) => (&p.x, &p.y),
            AnyPoint::Rim(r) => (&r.x, &r.y),
        }
    }

    pub fn eq_exact(&self, o: &AnyPoint) -> bool {
        let (a, b) = (self.coords(), o.coords());
        a.0.eq_exact(b.0) && a.1.eq_exact(b.1)
    }
}

impl From<Point> for AnyPoint {
    fn from(p: Point) -> AnyPoint {
        AnyPoint::Finite(p)
    }
}

impl From<Rimpoint> for AnyPoint {
    fn from(r: Rimpoint) -> AnyPoint {
        AnyPoint::Rim(r)
    }
}

impl Line {
    fn build(ends: [Rimpoint; 2], a: Real, b: Real, c: Real) -> Line {
        Line(Arc::new(LineData { ends, a, b, c, axial: OnceLock::new() }))
    }

    /// The chord with the two given ends.
    pub fn through_rims(p: &Rimpoint, q: &Rimpoint) -> Result<Line> {
        if p.eq_exact(q) {
            return Err(Error::Degenerate("chord ends coincide".into()));
        }
        Ok(Line::from_rims_unchecked(p, q))
    }

    pub(crate) fn from_rims_unchecked(p: &Rimpoint, q: &Rimpoint) -> Line {
        let a = &p.y - &q.y;
        let b = &q.x - &p.x;
        let c = &p.x * &q.y - &q.x * &p.y;
        Line::build([p.clone(), q.clone()], a, b, c)
    }

    /// The chord `a·x + b·y + c = 0`; fails unless it crosses the open disk.
    pub fn from_coefficients(a: Real, b: Real, c: Real) -> Result<Line> {
        let n = a.square() + b.square();
        if n.is_zero() {
            return Err(Error::Degenerate("zero line coefficients".into()));
        }
        let disc = &n - c.square();
        if disc.sign() <= 0 {
            return Err(Error::Precondition("line misses the open disk".into()));
        }
        let r = disc.sqrt()?;
        let ac = -(&a * &c);
        let bc = -(&b * &c);
        let e1 = Rimpoint::raw((&ac - &b * &r) / &n, (&bc + &a * &r) / &n);
        let e2 = Rimpoint::raw((&ac + &b * &r) / &n, (&bc - &a * &r) / &n);
        Ok(Line::build([e1, e2], a, b, c))
    }

    pub fn ends(&self) -> &[Rimpoint; 2] {
        &self.0.ends
    }

    pub fn coefficients(&self) -> (&Real, &Real, &Real) {
        (&self.0.a, &self.0.b, &self.0.c)
    }

    /// `a·x + b·y + c` at the given coordinates.
    pub fn eval(&self, x: &Real, y: &Real) -> Real {
        &self.0.a * x + &self.0.b * y + &self.0.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(&p.x, &p.y).is_zero()
    }

    /// Whether `r` is one of the two ends.
    pub fn has_end(&self, r: &Rimpoint) -> bool {
        self.eval(&r.x, &r.y).is_zero()
    }

    pub fn contains_any(&self, p: &AnyPoint) -> bool {
        let (x, y) = p.coords();
        self.eval(x, y).is_zero()
    }

    /// The end other than `r` (which must be an end).
    pub fn other_end(&self, r: &Rimpoint) -> &Rimpoint {
        if self.0.ends[0].eq_exact(r) {
            &self.0.ends[1]
        } else {
            &self.0.ends[0]
        }
    }

    pub fn eq_exact(&self, o: &Line) -> bool {
        if Arc::ptr_eq(&self.0, &o.0) {
            return true;
        }
        let (h1, h2, h3) = cross(self.coefficients(), o.coefficients());
        h1.is_zero() && h2.is_zero() && h3.is_zero()
    }

    /// Euclidean midpoint of the chord; a canonical interior point of the line.
    pub fn probe_point(&self) -> Point {
        let [e, f] = &self.0.ends;
        let half = Real::frac(1, 2);
        Point::raw((&e.x + &f.x) * &half, (&e.y + &f.y) * &half)
    }

    /// Two fixed distinct interior points of the chord at Euclidean
    /// parameters 1/2 and 3/4 from the first end.
    pub fn axial_pair(&self) -> &(Point, Point) {
        self.0.axial.get_or_init(|| {
            let [e, f] = &self.0.ends;
            let q = Real::frac(1, 4);
            let tq = Real::frac(3, 4);
            let second = Point::raw(&e.x * &q + &f.x * &tq, &e.y * &q + &f.y * &tq);
            (self.probe_point(), second)
        })
    }

    /// Which side of the line a point lies on: ±1, or 0 when incident.
    pub fn side(&self, p: &AnyPoint) -> i8 {
        let (x, y) = p.coords();
        self.eval(x, y).sign()
    }
}

/// The rimpoint `t ↦ ((1−t²)/(1+t²), 2t/(1+t²))`; `None` is `t = ∞`.
pub fn rimpoint_from_parameter(t: Option<&Rational>) -> Rimpoint {
    Rimpoint::from_parameter(t)
}

/// The unique line through two distinct points of either kind.
pub fn line_through(a: &AnyPoint, b: &AnyPoint) -> Result<Line> {
    if a.eq_exact(b) {
        return Err(Error::Degenerate("coincident points".into()));
    }
    match (a, b) {
        (AnyPoint::Rim(p), AnyPoint::Rim(q)) => Ok(Line::from_rims_unchecked(p, q)),
        (AnyPoint::Rim(x), AnyPoint::Finite(p)) | (AnyPoint::Finite(p), AnyPoint::Rim(x)) => {
            Ok(Line::from_rims_unchecked(x, &x.other_through(p)))
        }
        (AnyPoint::Finite(p), AnyPoint::Finite(q)) => finite_line(p, q),
    }
}

fn finite_line(p: &Point, q: &Point) -> Result<Line> {
    let a = &p.y - &q.y;
    let b = &q.x - &p.x;
    let c = &p.x * &q.y - &q.x * &p.y;
    Line::from_coefficients(a, b, c)
}

pub fn line_through_points(p: &Point, q: &Point) -> Result<Line> {
    if p.eq_exact(q) {
        return Err(Error::Degenerate("coincident points".into()));
    }
    finite_line(p, q)
}

pub fn line_through_rims(p: &Rimpoint, q: &Rimpoint) -> Result<Line> {
    Line::through_rims(p, q)
}

/// The chord through `x` and the interior point `p`.
pub fn line_rim_point(x: &Rimpoint, p: &Point) -> Line {
    Line::from_rims_unchecked(x, &x.other_through(p))
}

/// Intersection of two distinct lines.
pub fn meet(l: &Line, m: &Line) -> Result<Intersection> {
    if l.eq_exact(m) {
        return Err(Error::Degenerate("identical lines".into()));
    }
    Ok(meet_distinct(l, m))
}

pub(crate) fn meet_distinct(l: &Line, m: &Line) -> Intersection {
    let (hx, hy, hz) = cross(l.coefficients(), m.coefficients());
    if hz.is_zero() {
        return Intersection::Empty;
    }
    let x = &hx / &hz;
    let y = &hy / &hz;
    let s = x.square() + y.square() - Real::one();
    match s.sign() {
        -1 => Intersection::Finite(Point::raw(x, y)),
        0 => {
            let p = Rimpoint::raw(x, y);
            let [e, f] = l.ends();
            if e.eq_exact(&p) {
                Intersection::Rim(e.clone())
            } else if f.eq_exact(&p) {
                Intersection::Rim(f.clone())
            } else {
                Intersection::Rim(p)
            }
        }
        _ => Intersection::Empty,
    }
}

fn distinct_rims(pts: &[&Rimpoint]) -> Result<()> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i].eq_exact(pts[j]) {
                return Err(Error::Precondition("repeated rimpoints".into()));
            }
        }
    }
    Ok(())
}

fn rim_orient(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint) -> i8 {
    orient(&a.x, &a.y, &b.x, &b.y, &c.x, &c.y).sign()
}

/// Whether the chords `ab` and `cd` cross, for four distinct rimpoints.
pub(crate) fn crosses(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint, d: &Rimpoint) -> bool {
    rim_orient(a, b, c) * rim_orient(a, b, d) < 0
}

/// `AB // CD`: the chords `AB` and `CD` cross inside the disk.
pub fn separation(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint, d: &Rimpoint) -> Result<bool> {
    distinct_rims(&[a, b, c, d])?;
    Ok(crosses(a, b, c, d))
}

/// Counterclockwise order of three distinct rimpoints.
pub fn cyclic_order(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint) -> Result<bool> {
    distinct_rims(&[a, b, c])?;
    Ok(rim_orient(a, b, c) > 0)
}

/// Whether `b` lies strictly between `a` and `c` on their common line.
pub fn between(a: &Point, b: &Point, c: &Point) -> Result<bool> {
    if a.eq_exact(b) || b.eq_exact(c) || a.eq_exact(c) {
        return Err(Error::Precondition("repeated points".into()));
    }
    if !a.collinear(b, c) {
        return Err(Error::Precondition("points are not collinear".into()));
    }
    let dx = &c.x - &a.x;
    let dy = &c.y - &a.y;
    let dot = (&b.x - &a.x) * &dx + (&b.y - &a.y) * &dy;
    let len = dx.square() + dy.square();
    Ok(dot.is_positive() && (dot - len).is_negative())
}

/// Whether two points not on `l` lie on the same side of it.
pub fn same_side(l: &Line, x: &AnyPoint, y: &AnyPoint) -> Result<bool> {
    let (sx, sy) = (l.side(x), l.side(y));
    if sx == 0 || sy == 0 {
        return Err(Error::Precondition("point incident with the line".into()));
    }
    Ok(sx == sy)
}

fn chord_crossing(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint, d: &Rimpoint) -> Point {
    let l = Line::from_rims_unchecked(a, b);
    let m = Line::from_rims_unchecked(c, d);
    let (hx, hy, hz) = cross(l.coefficients(), m.coefficients());
    Point::raw(&hx / &hz, &hy / &hz)
}

/// `ℓ ⋈ m`: the crossing point of the two diagonals joining ends of `ℓ` to ends of `m`.
pub fn bowtie(l: &Line, m: &Line) -> Result<Point> {
    if l.eq_exact(m) {
        return Err(Error::Precondition("identical lines".into()));
    }
    let [l1, l2] = l.ends();
    let [m1, m2] = m.ends();
    if m.has_end(l1) || m.has_end(l2) {
        return Err(Error::Precondition("parallel lines have no bowtie".into()));
    }
    if crosses(l1, l2, m1, m2) && !fault::is_active(Fault::DroppedBowtieLabeling) {
        // concurrent lines: the only crossing pairing is the lines themselves
        return Ok(chord_crossing(l1, l2, m1, m2));
    }
    if fault::is_active(Fault::DroppedBowtieLabeling) || crosses(l1, m2, l2, m1) {
        Ok(chord_crossing(l1, m2, l2, m1))
    } else {
        Ok(chord_crossing(l1, m1, l2, m2))
    }
}

pub fn classify_pair(l: &Line, m: &Line) -> Result<PairClass> {
    Ok(match meet(l, m)? {
        Intersection::Finite(_) => PairClass::Intersecting,
        Intersection::Rim(_) => PairClass::Parallel,
        Intersection::Empty => PairClass::Ultraparallel,
    })
}

impl Intersection {
    /// Whether the lines share a point of the closed disk.
    pub fn is_some_point(&self) -> bool {
        !matches!(self, Intersection::Empty)
    }

    pub fn finite(self) -> Option<Point> {
        match self {
            Intersection::Finite(p) => Some(p),
            _ => None,
        }
    }
}

impl Ray {
    pub fn new(origin: Point, end: Rimpoint) -> Ray {
        Ray { origin, end }
    }

    pub fn carrier(&self) -> Line {
        line_rim_point(&self.end, &self.origin)
    }
}

/// The chord joining the ends of two non-collinear rays.
pub fn common_parallel(r: &Ray, s: &Ray) -> Result<Line> {
    if r.carrier().eq_exact(&s.carrier()) {
        return Err(Error::Precondition("collinear rays".into()));
    }
    if r.end.eq_exact(&s.end) {
        return Err(Error::Degenerate("rays share their end".into()));
    }
    Ok(Line::from_rims_unchecked(&r.end, &s.end))
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point({}, {})", self.x.to_decimal(10), self.y.to_decimal(10))
    }
}

impl fmt::Debug for Rimpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rim({}, {})", self.x.to_decimal(10), self.y.to_decimal(10))
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e, g] = self.ends();
        write!(f, "Line[{e:?} – {g:?}]")
    }
}
