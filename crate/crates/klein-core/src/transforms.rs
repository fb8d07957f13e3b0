//! Motions of the disk as words in half-turns and reflections, and the
//! constructions built from them: axial maps, midpoints, perpendiculars,
//! common perpendiculars, bisectors and glide rewriting.
//!
//! Words act on the right: `X^{PQ} = (X^P)^Q`, so the first generator of a
//! word is applied first.

use crate::fault::{self, Fault};
use crate::model::{
    bowtie, crosses, line_through_points, meet, meet_distinct, AnyPoint, Intersection, Line, Point, Rimpoint,
};
use crate::scalar::Real;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum Generator {
    HalfTurn(Point),
    Reflection(Line),
}

/// A finite word in half-turns and reflections.
#[derive(Clone, Debug, Default)]
pub struct Motion {
    word: Vec<Generator>,
}

/// The probe rimpoints at parameters `t = 0, 1, ∞`.
pub fn probes() -> [Rimpoint; 3] {
    [
        Rimpoint::raw(Real::one(), Real::zero()),
        Rimpoint::raw(Real::zero(), Real::one()),
        Rimpoint::raw(Real::from_int(-1), Real::zero()),
    ]
}

fn half_turn_rim(x: &Rimpoint, p: &Point) -> Rimpoint {
    if fault::is_active(Fault::SkewedHalfTurn) {
        // nudge the center toward the quarter-turn of x, so the chords stop being concurrent
        let k = Real::frac(1, 16);
        let w = Real::frac(15, 16);
        let q = Point::raw(&p.x * &w - &x.y * &k, &p.y * &w + &x.x * &k);
        return x.other_through(&q);
    }
    x.other_through(p)
}

fn reflect_rim(l: &Line, x: &Rimpoint) -> Rimpoint {
    if l.has_end(x) {
        return x.clone();
    }
    if fault::is_active(Fault::EuclideanMirror) {
        let (a, b, _) = l.coefficients();
        let t = Real::from_int(-2) * (&x.x * a + &x.y * b) / (a.square() + b.square());
        return Rimpoint::raw(&x.x + &t * a, &x.y + &t * b);
    }
    let (p, q) = l.axial_pair();
    let forward = x.other_through(p).other_through(q);
    let backward = x.other_through(q).other_through(p);
    let n = Line::from_rims_unchecked(&forward, &backward);
    let o = bowtie(l, &n).expect("axial images span a line ultraparallel to the axis");
    x.other_through(&o)
}

impl Generator {
    pub fn apply(&self, x: &Rimpoint) -> Rimpoint {
        match self {
            Generator::HalfTurn(p) => half_turn_rim(x, p),
            Generator::Reflection(l) => reflect_rim(l, x),
        }
    }
}

impl Motion {
    pub fn identity() -> Motion {
        Motion { word: Vec::new() }
    }

    pub fn from_word(word: Vec<Generator>) -> Motion {
        Motion { word }
    }

    pub fn half_turn(p: &Point) -> Motion {
        Motion::from_word(vec![Generator::HalfTurn(p.clone())])
    }

    pub fn reflection(l: &Line) -> Motion {
        Motion::from_word(vec![Generator::Reflection(l.clone())])
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    /// Number of reflections in the word, mod 2.
    pub fn parity(&self) -> u8 {
        (self.word.iter().filter(|g| matches!(g, Generator::Reflection(_))).count() % 2) as u8
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Motion) -> Motion {
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        Motion { word }
    }

    pub fn inverse(&self) -> Motion {
        Motion { word: self.word.iter().rev().cloned().collect() }
    }

    pub fn apply(&self, x: &Rimpoint) -> Rimpoint {
        self.word.iter().fold(x.clone(), |acc, g| g.apply(&acc))
    }

    pub fn apply_line(&self, l: &Line) -> Line {
        let [e, f] = l.ends();
        Line::from_rims_unchecked(&self.apply(e), &self.apply(f))
    }

    /// Image of an interior point, as the crossing of the images of two chords through it.
    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        let pr = probes();
        let first = (&pr[0], pr[0].other_through(p));
        let r1 = pr[0].other_through(p);
        let second = if r1.eq_exact(&pr[1]) { &pr[2] } else { &pr[1] };
        let c1 = Line::from_rims_unchecked(&self.apply(first.0), &self.apply(&first.1));
        let c2 = Line::from_rims_unchecked(&self.apply(second), &self.apply(&second.other_through(p)));
        match meet(&c1, &c2)? {
            Intersection::Finite(q) => Ok(q),
            _ => Err(Error::Construction("image chords do not cross".into())),
        }
    }

    /// Exact equality of the induced permutations of the rimpoints.
    pub fn equals(&self, other: &Motion) -> bool {
        self.parity() == other.parity() && probes().iter().all(|x| self.apply(x).eq_exact(&other.apply(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&Motion::identity())
    }

    pub fn is_involution(&self) -> bool {
        self.then(self).is_identity()
    }

    /// Action on the boundary parameter as a 2×2 matrix, up to scale.
    fn mobius(&self) -> [[Real; 2]; 2] {
        let [a, b, c] = probes().map(|x| to_proj(&self.apply(&x)));
        let (p0, q0) = a;
        let (p1, q1) = b;
        let (pi, qi) = c;
        let ka = &p1 * &q0 - &p0 * &q1;
        let kb = &pi * &q1 - &p1 * &qi;
        [[&ka * &pi, &kb * &p0], [&ka * &qi, &kb * &q0]]
    }
}

fn to_proj(x: &Rimpoint) -> (Real, Real) {
    let d = Real::one() + &x.x;
    if d.is_zero() {
        (Real::one(), Real::zero())
    } else {
        (x.y.clone(), d)
    }
}

fn from_proj(s: &Real, r: &Real) -> Rimpoint {
    let s2 = s.square();
    let r2 = r.square();
    let n = &s2 + &r2;
    Rimpoint::raw((&r2 - &s2) / &n, Real::from_int(2) * s * r / n)
}

/// Rimpoints fixed by `g`; `None` when `g` is the identity.
pub fn fixed_rimpoints(g: &Motion) -> Option<Vec<Rimpoint>> {
    let [[m11, m12], [m21, m22]] = g.mobius();
    let diff = &m22 - &m11;
    if m21.is_zero() {
        if diff.is_zero() {
            if m12.is_zero() {
                return None;
            }
            return Some(vec![from_proj(&Real::one(), &Real::zero())]);
        }
        return Some(vec![from_proj(&Real::one(), &Real::zero()), from_proj(&m12, &diff)]);
    }
    let disc = diff.square() + Real::from_int(4) * &m12 * &m21;
    let r = Real::from_int(2) * &m21;
    let base = &m11 - &m22;
    match disc.sign() {
        -1 => Some(Vec::new()),
        0 => Some(vec![from_proj(&base, &r)]),
        _ => {
            let root = disc.sqrt().expect("positive discriminant");
            Some(vec![from_proj(&(&base - &root), &r), from_proj(&(&base + &root), &r)])
        }
    }
}

/// Center of a motion known to be a half-turn.
pub fn half_turn_center(g: &Motion) -> Result<Point> {
    let pr = probes();
    let x1 = g.apply(&pr[0]);
    let y0 = if x1.eq_exact(&pr[1]) { &pr[2] } else { &pr[1] };
    let y1 = g.apply(y0);
    if x1.eq_exact(&pr[0]) || y1.eq_exact(y0) {
        return Err(Error::Precondition("motion fixes a probe rimpoint".into()));
    }
    let l = Line::from_rims_unchecked(&pr[0], &x1);
    let m = Line::from_rims_unchecked(y0, &y1);
    match meet(&l, &m)? {
        Intersection::Finite(p) => Ok(p),
        _ => Err(Error::Precondition("transposition chords are not concurrent".into())),
    }
}

/// Axis of a motion known to be a reflection.
pub fn reflection_axis(g: &Motion) -> Result<Line> {
    match fixed_rimpoints(g) {
        Some(f) if f.len() == 2 => Ok(Line::from_rims_unchecked(&f[0], &f[1])),
        _ => Err(Error::Precondition("motion does not fix exactly two rimpoints".into())),
    }
}

pub fn half_turn(p: &Point) -> Motion {
    Motion::half_turn(p)
}

pub fn reflection(l: &Line) -> Motion {
    Motion::reflection(l)
}

pub fn motion_apply(g: &Motion, x: &Rimpoint) -> Rimpoint {
    g.apply(x)
}

pub fn motion_compose(g: &Motion, h: &Motion) -> Motion {
    g.then(h)
}

pub fn motion_inverse(g: &Motion) -> Motion {
    g.inverse()
}

pub fn motion_equal(g: &Motion, h: &Motion) -> bool {
    g.equals(h)
}

/// The point `P'` with `P·Q·R = P'` for collinear `P, Q, R`.
pub fn collinear_third(p: &Point, q: &Point, r: &Point) -> Result<Point> {
    if !p.collinear(q, r) {
        return Err(Error::Precondition("points are not collinear".into()));
    }
    if p.eq_exact(q) {
        return Ok(r.clone());
    }
    if q.eq_exact(r) {
        return Ok(p.clone());
    }
    let g = Motion::from_word(vec![
        Generator::HalfTurn(p.clone()),
        Generator::HalfTurn(q.clone()),
        Generator::HalfTurn(r.clone()),
    ]);
    let c = half_turn_center(&g)?;
    if !p.collinear(q, &c) {
        return Err(Error::Construction("third point left the line".into()));
    }
    Ok(c)
}

/// Midpoint via two perpendiculars whose crossing diagonals meet on `PQ`.
pub fn midpoint(p: &Point, q: &Point) -> Result<Point> {
    if p.eq_exact(q) {
        return Ok(p.clone());
    }
    let d = line_through_points(p, q)?;
    let l = perp_at_point(&d, p)?;
    let m = perp_at_point(&d, q)?;
    let c = bowtie(&l, &m)?;
    if !d.contains(&c) {
        return Err(Error::Construction("diagonals do not meet on the segment line".into()));
    }
    Ok(c)
}

pub fn axial(p: &Point, q: &Point) -> Result<Motion> {
    if p.eq_exact(q) {
        return Err(Error::Degenerate("axial map of a repeated point is the identity".into()));
    }
    Ok(Motion::from_word(vec![Generator::HalfTurn(p.clone()), Generator::HalfTurn(q.clone())]))
}

fn rim_off(l: &Line) -> Rimpoint {
    let mut pr = probes().into_iter();
    let a = pr.next().unwrap();
    if !l.has_end(&a) {
        return a;
    }
    let b = pr.next().unwrap();
    if !l.has_end(&b) {
        return b;
    }
    pr.next().unwrap()
}

/// The point `Q` on the axis with `α = P·Q`.
pub fn axial_decompose(alpha: &Motion, axis: &Line, p: &Point) -> Result<Point> {
    if !axis.contains(p) {
        return Err(Error::Precondition("point not on the axis".into()));
    }
    let x = rim_off(axis);
    let xp = x.other_through(p);
    let xa = alpha.apply(&x);
    if xp.eq_exact(&xa) {
        return Err(Error::Precondition("motion is not axial along this line".into()));
    }
    let chord = Line::from_rims_unchecked(&xp, &xa);
    let q = match meet(axis, &chord)? {
        Intersection::Finite(q) => q,
        _ => return Err(Error::Precondition("motion is not axial along this line".into())),
    };
    let ok = if q.eq_exact(p) { alpha.is_identity() } else { alpha.equals(&axial(p, &q)?) };
    if !ok {
        return Err(Error::Precondition("motion is not axial along this line".into()));
    }
    Ok(q)
}

/// The axial map along `l` sending `u` to `v`.
pub fn axial_through(l: &Line, u: &Rimpoint, v: &Rimpoint) -> Result<Motion> {
    if l.has_end(u) || l.has_end(v) {
        return Err(Error::Precondition("rimpoint on the axis".into()));
    }
    if l.side(&AnyPoint::Rim(u.clone())) != l.side(&AnyPoint::Rim(v.clone())) {
        return Err(Error::Precondition("rimpoints on opposite sides of the axis".into()));
    }
    if u.eq_exact(v) {
        return Ok(Motion::identity());
    }
    let p = l.probe_point();
    let w = u.other_through(&p);
    let chord = Line::from_rims_unchecked(&w, v);
    match meet(&chord, l)? {
        Intersection::Finite(q) => axial(&p, &q),
        _ => Err(Error::Construction("transport chord misses the axis".into())),
    }
}

/// The axial square root with the same axis.
pub fn axial_sqrt(alpha: &Motion) -> Result<Motion> {
    if let [Generator::HalfTurn(p), Generator::HalfTurn(q)] = alpha.word() {
        if p.eq_exact(q) {
            return Ok(Motion::identity());
        }
        return axial(p, &midpoint(p, q)?);
    }
    if alpha.parity() != 0 {
        return Err(Error::Precondition("orientation-reversing motion is not axial".into()));
    }
    let fixed = match fixed_rimpoints(alpha) {
        None => return Ok(Motion::identity()),
        Some(f) if f.len() == 2 => f,
        Some(_) => return Err(Error::Precondition("motion is not axial".into())),
    };
    let axis = Line::from_rims_unchecked(&fixed[0], &fixed[1]);
    let p = axis.probe_point();
    let q = axial_decompose(alpha, &axis, &p)?;
    if q.eq_exact(&p) {
        return Ok(Motion::identity());
    }
    axial(&p, &midpoint(&p, &q)?)
}

/// The axial map `g` along `l` with `x4^{g²} = x3`.
pub fn half_transport(l: &Line, x3: &Rimpoint, x4: &Rimpoint) -> Result<Motion> {
    if x3.eq_exact(x4) {
        return Ok(Motion::identity());
    }
    let chord = Line::from_rims_unchecked(x3, x4);
    if meet(&chord, l)?.is_some_point() {
        return Err(Error::Precondition("chord is not ultraparallel to the axis".into()));
    }
    axial_sqrt(&axial_through(l, x4, x3)?)
}

/// `Q^σ`: the mirror image of an interior point.
pub fn reflect_point(l: &Line, q: &Point) -> Result<Point> {
    if l.contains(q) {
        return Ok(q.clone());
    }
    Motion::reflection(l).apply_point(q)
}

/// The perpendicular to `l` through the rimpoint `a`.
pub fn perp_from_rimpoint(l: &Line, a: &Rimpoint) -> Result<Line> {
    if l.has_end(a) {
        return Err(Error::Precondition("rimpoint is an end of the line".into()));
    }
    Line::through_rims(a, &reflect_rim(l, a))
}

/// The foot `R` of the perpendicular from `x` to `l`.
pub fn a11_foot(l: &Line, x: &Rimpoint) -> Result<Point> {
    let n = perp_from_rimpoint(l, x)?;
    match meet(l, &n)? {
        Intersection::Finite(r) => Ok(r),
        _ => Err(Error::Construction("perpendicular does not meet its base line".into())),
    }
}

pub fn is_perpendicular(l: &Line, m: &Line) -> Result<bool> {
    if !matches!(meet(l, m)?, Intersection::Finite(_)) {
        return Ok(false);
    }
    let [m1, m2] = m.ends();
    Ok(reflect_rim(l, m1).eq_exact(m2))
}

/// The perpendicular to `l` at a point `p` of `l`: the axis of `σ_l · P`.
pub fn perp_at_point(l: &Line, p: &Point) -> Result<Line> {
    if !l.contains(p) {
        return Err(Error::Precondition("point not on the line".into()));
    }
    let g = Motion::reflection(l).then(&Motion::half_turn(p));
    reflection_axis(&g)
}

/// The perpendicular to `l` through a point `p` off `l`.
pub fn perp_through_point(l: &Line, p: &Point) -> Result<Line> {
    if l.contains(p) {
        return Err(Error::Precondition("point lies on the line".into()));
    }
    let [x, y] = l.ends();
    let image = Line::from_rims_unchecked(&x.other_through(p), &y.other_through(p));
    common_perpendicular(&image, l)
}

/// The unique line perpendicular to two ultraparallel lines.
pub fn common_perpendicular(l: &Line, m: &Line) -> Result<Line> {
    if !matches!(meet(l, m)?, Intersection::Empty) {
        return Err(Error::Precondition("lines are not ultraparallel".into()));
    }
    let [x1, x2] = l.ends();
    let [m0, m1] = m.ends();
    let (x3, x4) = if crosses(x1, m1, x2, m0) { (m0, m1) } else { (m1, m0) };
    let g = half_transport(l, x3, x4)?;
    let h = half_transport(m, x1, x2)?;
    Line::through_rims(&g.apply(x4), &h.apply(x2))
}

/// Prescribed correspondence of ends: `x ↦ x_to`, `y ↦ y_to`.
#[derive(Clone, Debug)]
pub struct EndPairing {
    pub x: Rimpoint,
    pub x_to: Rimpoint,
    pub y: Rimpoint,
    pub y_to: Rimpoint,
}

/// The line `n` whose reflection exchanges `l` and `m` along the given pairing of ends.
pub fn bisector(l: &Line, m: &Line, pairing: &EndPairing) -> Result<Line> {
    if l.eq_exact(m) {
        return Err(Error::Degenerate("identical lines".into()));
    }
    let EndPairing { x, x_to, y, y_to } = pairing;
    if !(l.has_end(x) && l.has_end(y) && m.has_end(x_to) && m.has_end(y_to))
        || x.eq_exact(y)
        || x_to.eq_exact(y_to)
    {
        return Err(Error::Precondition("pairing does not match the ends".into()));
    }
    if x.eq_exact(x_to) {
        return perp_from_rimpoint(&Line::from_rims_unchecked(y, y_to), x);
    }
    if y.eq_exact(y_to) {
        return perp_from_rimpoint(&Line::from_rims_unchecked(x, x_to), y);
    }
    let k1 = Line::from_rims_unchecked(x, x_to);
    let k2 = Line::from_rims_unchecked(y, y_to);
    if k1.eq_exact(&k2) || !matches!(meet_distinct(&k1, &k2), Intersection::Empty) {
        return Err(Error::Precondition("pairing is not realised by a reflection".into()));
    }
    common_perpendicular(&k1, &k2)
}

/// Rewrite `A·E·σ_d` as `X·σ_y`.
pub fn glide_normalize(a: &Point, e: &Point, d: &Line) -> Result<(Point, Line)> {
    if a.eq_exact(e) {
        return Err(Error::Precondition("glide rewrite needs two distinct points".into()));
    }
    let x = line_through_points(a, e)?;
    if x.eq_exact(d) {
        return Ok((a.clone(), perp_at_point(d, e)?));
    }
    match meet_distinct(&x, d) {
        Intersection::Finite(y) => {
            let p = collinear_third(a, e, &y)?;
            Ok((p, perp_at_point(d, &y)?))
        }
        Intersection::Empty => {
            let q = common_perpendicular(&x, d)?;
            let xq = meet(&q, &x)?.finite().ok_or_else(|| Error::Construction("foot on x".into()))?;
            let dq = meet(&q, d)?.finite().ok_or_else(|| Error::Construction("foot on d".into()))?;
            let y = collinear_third(a, e, &xq)?;
            let perp = perp_at_point(&x, &y)?;
            Ok((dq.clone(), Motion::half_turn(&dq).apply_line(&perp)))
        }
        Intersection::Rim(_) => {
            // x and d are parallel: split the motion at a point of the glide axis
            let g = Motion::from_word(vec![
                Generator::HalfTurn(a.clone()),
                Generator::HalfTurn(e.clone()),
                Generator::Reflection(d.clone()),
            ]);
            let (p, q, r) = fixed_chord(&g)?;
            let n = p.square() + q.square();
            let foot = Point::new(-(&p * &r) / &n, -(&q * &r) / &n)?;
            // perpendicular at the foot: through it and conjugate to the axis
            let y = Line::from_coefficients(
                &q + &(&r * &foot.y),
                -(&p + &(&r * &foot.x)),
                &p * &foot.y - &q * &foot.x,
            )?;
            let x = half_turn_center(&g.then(&Motion::reflection(&y)))?;
            Ok((x, y))
        }
    }
}

/// Coefficients `(p, q, r)` of the chord `px + qy + r = 0` joining the two
/// rimpoints fixed by `g`, taken from the fixed-point quadratic without roots.
fn fixed_chord(g: &Motion) -> Result<(Real, Real, Real)> {
    let [[m11, m12], [m21, m22]] = g.mobius();
    let disc = (&m22 - &m11).square() + Real::from_int(4) * &m12 * &m21;
    if !disc.is_positive() {
        return Err(Error::Precondition("motion does not fix two rimpoints".into()));
    }
    Ok((&m21 + &m12, &m11 - &m22, &m12 - &m21))
}
