//! Seeded property suites over the exact model.
//!
//! Every check runs `trials` independent instances. Each instance draws from
//! its own ChaCha stream keyed by `(seed, check name, trial index)`, so reports
//! do not depend on scheduling. A failing instance records the scene it
//! generated; the five lowest-indexed failures are kept as witnesses.
//!
//! Checks marked [`Mode::Sampled`] test a universally quantified statement on a
//! bounded sample (counts are given per check below); all other checks are
//! exact predicates on the generated instance.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::fault::{with_fault, Fault};
use crate::model::{
    between, bowtie, classify_pair, common_parallel, cyclic_order, line_rim_point, line_through,
    line_through_points, meet, same_side, separation,
};
use crate::scalar::{Rational, Real};
use crate::scene::{Object, Scene};
use crate::transforms::{
    a11_foot, axial, axial_decompose, axial_sqrt, axial_through, bisector, collinear_third,
    common_perpendicular, fixed_rimpoints, glide_normalize, half_transport, half_turn_center,
    is_perpendicular, midpoint, perp_at_point, perp_from_rimpoint, perp_through_point, probes, reflect_point,
    reflection_axis, EndPairing, Generator, Motion,
};
use crate::{AnyPoint, Error, Intersection, Line, PairClass, Point, Ray, Result, Rimpoint};

/// Retained failure witnesses per check.
pub const MAX_WITNESSES: usize = 5;
/// Rejection cap per trial for conditioned generators.
pub const MAX_REJECTIONS: u64 = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sabotage {
    #[serde(rename = "euclidean-mirror")]
    EuclideanMirror,
    #[serde(rename = "skewed-halfturn")]
    SkewedHalfTurn,
    #[serde(rename = "dropped-bowtie-labeling")]
    DroppedBowtieLabeling,
}

impl Sabotage {
    pub const ALL: [Sabotage; 3] =
        [Sabotage::EuclideanMirror, Sabotage::SkewedHalfTurn, Sabotage::DroppedBowtieLabeling];

    pub fn fault(self) -> Fault {
        match self {
            Sabotage::EuclideanMirror => Fault::EuclideanMirror,
            Sabotage::SkewedHalfTurn => Fault::SkewedHalfTurn,
            Sabotage::DroppedBowtieLabeling => Fault::DroppedBowtieLabeling,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sabotage::EuclideanMirror => "euclidean-mirror",
            Sabotage::SkewedHalfTurn => "skewed-halfturn",
            Sabotage::DroppedBowtieLabeling => "dropped-bowtie-labeling",
        }
    }
}

impl FromStr for Sabotage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sabotage> {
        match s {
            "euclidean-mirror" => Ok(Sabotage::EuclideanMirror),
            "skewed-halfturn" => Ok(Sabotage::SkewedHalfTurn),
            "dropped-bowtie-labeling" | "dropped-bowtie" => Ok(Sabotage::DroppedBowtieLabeling),
            _ => Err(Error::Parse(format!("unknown sabotage kind \"{s}\""))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Axioms,
    Theorems,
    Metric,
    OvalSample,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Axioms, Suite::Theorems, Suite::Metric, Suite::OvalSample];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Theorems => "theorems",
            Suite::Metric => "metric",
            Suite::OvalSample => "oval-sample",
        }
    }

    fn checks(self) -> &'static [Check] {
        match self {
            Suite::Axioms => AXIOM_CHECKS,
            Suite::Theorems => THEOREM_CHECKS,
            Suite::Metric => METRIC_CHECKS,
            Suite::OvalSample => OVAL_CHECKS,
        }
    }

    pub fn check_names(self) -> Vec<&'static str> {
        self.checks().iter().map(|c| c.name).collect()
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite \"{s}\"")))
    }
}

/// Run parameters.
///
/// `max_expr_depth` bounds the size of generated rationals: numerators and
/// denominators of random parameters stay within `2 + 2·max_expr_depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: usize,
    /// Restrict to these check names; `None` runs every check of the suite.
    pub checks: Option<Vec<String>>,
    pub max_expr_depth: u32,
    pub sabotage: Option<Sabotage>,
}

impl TrialConfig {
    pub fn new(seed: u64, trials: usize) -> TrialConfig {
        TrialConfig { seed, trials, checks: None, max_expr_depth: 4, sabotage: None }
    }

    pub fn only(mut self, names: &[&str]) -> TrialConfig {
        self.checks = Some(names.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn with_sabotage(mut self, s: Option<Sabotage>) -> TrialConfig {
        self.sabotage = s;
        self
    }

    fn wants(&self, name: &str) -> bool {
        self.checks.as_ref().is_none_or(|c| c.iter().any(|n| n == name))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub mode: Mode,
    pub trials: usize,
    pub failures: usize,
    pub witnesses: Vec<Value>,
    /// Instances discarded by conditioned generators, summed over trials.
    pub rejections: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub overall: bool,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn from_checks(checks: Vec<CheckReport>) -> Report {
        Report { overall: checks.iter().all(|c| c.failures == 0), checks }
    }

    pub fn merge(reports: impl IntoIterator<Item = Report>) -> Report {
        Report::from_checks(reports.into_iter().flat_map(|r| r.checks).collect())
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().map(|c| c.failures).sum()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn run_suite(suite: Suite, cfg: &TrialConfig) -> Report {
    let checks = suite.checks().iter().filter(|c| cfg.wants(c.name)).map(|c| run_check(c, cfg)).collect();
    Report::from_checks(checks)
}

pub fn run_axiom_suite(cfg: &TrialConfig) -> Report {
    run_suite(Suite::Axioms, cfg)
}

pub fn run_theorem_suite(cfg: &TrialConfig) -> Report {
    run_suite(Suite::Theorems, cfg)
}

pub fn run_metric_plane_suite(cfg: &TrialConfig) -> Report {
    run_suite(Suite::Metric, cfg)
}

pub fn run_oval_sample_suite(cfg: &TrialConfig) -> Report {
    run_suite(Suite::OvalSample, cfg)
}

/// A motion of word length at most 2 taking the flag `(p, l)` to `(q, m)`.
pub fn flag_transport(p: &Point, l: &Line, q: &Point, m: &Line) -> Result<Motion> {
    if !l.contains(p) || !m.contains(q) {
        return Err(Error::Precondition("flag point is not on its line".into()));
    }
    let shift = if p.eq_exact(q) { Motion::identity() } else { Motion::half_turn(&midpoint(p, q)?) };
    let moved = shift.apply_line(l);
    if moved.eq_exact(m) {
        return Ok(shift);
    }
    let [x, y] = moved.ends();
    let [x_to, y_to] = m.ends();
    let pairing = EndPairing { x: x.clone(), x_to: x_to.clone(), y: y.clone(), y_to: y_to.clone() };
    let n = bisector(&moved, m, &pairing)?;
    Ok(shift.then(&Motion::reflection(&n)))
}

// ---------------------------------------------------------------------------
// harness

struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(e.to_string())
    }
}

type Out = std::result::Result<(), Fail>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Fail(format!($($msg)+)));
        }
    };
}

struct Check {
    name: &'static str,
    mode: Mode,
    run: fn(&mut Gen) -> Out,
}

const fn exact(name: &'static str, run: fn(&mut Gen) -> Out) -> Check {
    Check { name, mode: Mode::Exact, run }
}

const fn sampled(name: &'static str, run: fn(&mut Gen) -> Out) -> Check {
    Check { name, mode: Mode::Sampled, run }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn trial_seed(seed: u64, name: &str, index: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(name).to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    key
}

fn panic_text(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        "panic".to_string()
    }
}

fn run_check(check: &Check, cfg: &TrialConfig) -> CheckReport {
    let fault = cfg.sabotage.map(Sabotage::fault);
    let outcomes: Vec<(Option<Value>, u64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut g = Gen::new(trial_seed(cfg.seed, check.name, i as u64), cfg.max_expr_depth);
            let res = catch_unwind(AssertUnwindSafe(|| with_fault(fault, || (check.run)(&mut g))));
            let reason = match res {
                Ok(Ok(())) => None,
                Ok(Err(Fail(m))) => Some(m),
                Err(p) => Some(format!("panic: {}", panic_text(p))),
            };
            let witness = reason.map(|r| {
                let scene = catch_unwind(AssertUnwindSafe(|| g.scene.to_json())).unwrap_or(Value::Null);
                json!({"trial": i, "reason": r, "scene": scene})
            });
            (witness, g.rejections)
        })
        .collect();
    let failures = outcomes.iter().filter(|o| o.0.is_some()).count();
    let rejections = outcomes.iter().map(|o| o.1).sum();
    let witnesses = outcomes.into_iter().filter_map(|o| o.0).take(MAX_WITNESSES).collect();
    CheckReport {
        name: check.name.to_string(),
        mode: check.mode,
        trials: cfg.trials,
        failures,
        witnesses,
        rejections,
    }
}

/// Random instance generator that records what it draws.
struct Gen {
    rng: ChaCha8Rng,
    bound: i64,
    scene: Scene,
    rejections: u64,
}

impl Gen {
    fn new(seed: [u8; 32], depth: u32) -> Gen {
        Gen {
            rng: ChaCha8Rng::from_seed(seed),
            bound: 2 + 2 * depth.max(1) as i64,
            scene: Scene::new(),
            rejections: 0,
        }
    }

    fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    fn reject(&mut self) -> Out {
        self.rejections += 1;
        ensure!(self.rejections <= MAX_REJECTIONS, "rejection cap reached");
        Ok(())
    }

    fn note(&mut self, name: &str, o: Object) {
        self.scene.insert(name, o);
    }

    fn note_point(&mut self, name: &str, p: &Point) {
        self.note(name, Object::Point(AnyPoint::Finite(p.clone())));
    }

    fn note_rim(&mut self, name: &str, r: &Rimpoint) {
        self.note(name, Object::Point(AnyPoint::Rim(r.clone())));
    }

    fn note_line(&mut self, name: &str, l: &Line) {
        self.note(name, Object::Line(l.clone()));
    }

    fn note_motion(&mut self, name: &str, g: &Motion) {
        self.note(name, Object::Motion(g.clone()));
    }

    fn ratio(&mut self) -> Rational {
        let k = self.bound;
        let n = self.rng.gen_range(-k..=k);
        let d = self.rng.gen_range(1..=k);
        Rational::new(n.into(), d.into())
    }

    /// A rational strictly between 0 and 1.
    fn unit(&mut self) -> Real {
        let d = self.rng.gen_range(2..=self.bound);
        let n = self.rng.gen_range(1..d);
        Real::frac(n, d)
    }

    fn raw_rim(&mut self) -> Rimpoint {
        if self.rng.gen_ratio(1, 16) {
            Rimpoint::from_parameter(None)
        } else {
            let t = self.ratio();
            Rimpoint::from_parameter(Some(&t))
        }
    }

    fn rim(&mut self, name: &str) -> Rimpoint {
        let r = self.raw_rim();
        self.note_rim(name, &r);
        r
    }

    fn rim_avoiding(&mut self, name: &str, avoid: &[&Rimpoint]) -> Rimpoint {
        loop {
            let r = self.raw_rim();
            if avoid.iter().all(|a| !a.eq_exact(&r)) {
                self.note_rim(name, &r);
                return r;
            }
        }
    }

    fn rim_off(&mut self, name: &str, l: &Line) -> Rimpoint {
        let [a, b] = l.ends().clone();
        self.rim_avoiding(name, &[&a, &b])
    }

    fn rims(&mut self, names: &[&str]) -> Vec<Rimpoint> {
        let mut out: Vec<Rimpoint> = Vec::new();
        for n in names {
            let avoid: Vec<&Rimpoint> = out.iter().collect();
            let r = loop {
                let r = self.raw_rim();
                if avoid.iter().all(|a| !a.eq_exact(&r)) {
                    break r;
                }
            };
            self.note_rim(n, &r);
            out.push(r);
        }
        out
    }

    fn raw_point(&mut self) -> Point {
        loop {
            let d = self.rng.gen_range(2..=2 * self.bound);
            let x = self.rng.gen_range(1 - d..d);
            let y = self.rng.gen_range(1 - d..d);
            if x * x + y * y < d * d {
                return Point::rat(x, d, y, d);
            }
        }
    }

    fn point(&mut self, name: &str) -> Point {
        let p = self.raw_point();
        self.note_point(name, &p);
        p
    }

    fn point_avoiding(&mut self, name: &str, avoid: &[&Point]) -> Point {
        loop {
            let p = self.raw_point();
            if avoid.iter().all(|a| !a.eq_exact(&p)) {
                self.note_point(name, &p);
                return p;
            }
        }
    }

    fn any_point(&mut self, name: &str) -> AnyPoint {
        let p = if self.coin() { AnyPoint::Finite(self.raw_point()) } else { AnyPoint::Rim(self.raw_rim()) };
        self.note(name, Object::Point(p.clone()));
        p
    }

    fn line(&mut self, name: &str) -> Line {
        let a = self.raw_rim();
        let b = loop {
            let b = self.raw_rim();
            if !b.eq_exact(&a) {
                break b;
            }
        };
        let l = Line::from_rims_unchecked(&a, &b);
        self.note_line(name, &l);
        l
    }

    fn line_through(&mut self, name: &str, p: &Point) -> Line {
        let x = self.raw_rim();
        let l = line_rim_point(&x, p);
        self.note_line(name, &l);
        l
    }

    /// A line through `p` other than the ones listed.
    fn line_through_avoiding(&mut self, name: &str, p: &Point, avoid: &[&Line]) -> Line {
        loop {
            let x = self.raw_rim();
            let l = line_rim_point(&x, p);
            if avoid.iter().all(|a| !a.eq_exact(&l)) {
                self.note_line(name, &l);
                return l;
            }
        }
    }

    fn raw_point_on(&mut self, l: &Line) -> Point {
        let [a, b] = l.ends();
        let s = self.unit();
        let x = &a.x + &(&s * &(&b.x - &a.x));
        let y = &a.y + &(&s * &(&b.y - &a.y));
        Point::new(x, y).expect("interior of a chord")
    }

    fn point_on(&mut self, name: &str, l: &Line) -> Point {
        let p = self.raw_point_on(l);
        self.note_point(name, &p);
        p
    }

    fn points_on(&mut self, names: &[&str], l: &Line) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for n in names {
            let p = loop {
                let p = self.raw_point_on(l);
                if out.iter().all(|q| !q.eq_exact(&p)) {
                    break p;
                }
            };
            self.note_point(n, &p);
            out.push(p);
        }
        out
    }

    fn point_off(&mut self, name: &str, l: &Line) -> Point {
        loop {
            let p = self.raw_point();
            if !l.contains(&p) {
                self.note_point(name, &p);
                return p;
            }
        }
    }

    /// Two ultraparallel lines on four distinct rimpoints.
    fn ultraparallel(&mut self, a: &str, b: &str) -> Result<(Line, Line)> {
        let r = self.rims(&["U1", "U2", "U3", "U4"]);
        let (l, m) = if separation(&r[0], &r[1], &r[2], &r[3])? {
            (Line::from_rims_unchecked(&r[0], &r[2]), Line::from_rims_unchecked(&r[1], &r[3]))
        } else {
            (Line::from_rims_unchecked(&r[0], &r[1]), Line::from_rims_unchecked(&r[2], &r[3]))
        };
        self.note_line(a, &l);
        self.note_line(b, &m);
        Ok((l, m))
    }
}

// ---------------------------------------------------------------------------
// shared predicates

fn finite_meet(l: &Line, m: &Line) -> Result<Option<Point>> {
    if l.eq_exact(m) {
        return Ok(None);
    }
    Ok(meet(l, m)?.finite())
}

/// Lines share a finite point (identical lines count).
fn meets_finite(l: &Line, m: &Line) -> Result<bool> {
    Ok(l.eq_exact(m) || finite_meet(l, m)?.is_some())
}

/// `ab // cd` read as "the chords meet in a finite point".
fn chords_cross(a: &Rimpoint, b: &Rimpoint, c: &Rimpoint, d: &Rimpoint) -> Result<bool> {
    let l = Line::through_rims(a, b)?;
    let m = Line::through_rims(c, d)?;
    if l.eq_exact(&m) {
        return Ok(false);
    }
    Ok(matches!(meet(&l, &m)?, Intersection::Finite(_)))
}

fn halfturns(ps: &[&Point]) -> Motion {
    Motion::from_word(ps.iter().map(|p| Generator::HalfTurn((*p).clone())).collect())
}

fn refl(l: &Line) -> Motion {
    Motion::reflection(l)
}

fn ht(p: &Point) -> Motion {
    Motion::half_turn(p)
}

fn same_ends(a: &[Rimpoint], l: &Line) -> bool {
    a.len() == 2 && a.iter().all(|r| l.has_end(r)) && !a[0].eq_exact(&a[1])
}

fn perp_any(l: &Line, p: &Point) -> Result<Line> {
    if l.contains(p) {
        perp_at_point(l, p)
    } else {
        perp_through_point(l, p)
    }
}

/// Six rimpoints with `AB ∩ DE` and `BC ∩ EF` finite by construction.
fn hexagon(g: &mut Gen) -> std::result::Result<([Rimpoint; 6], Point, Point), Fail> {
    loop {
        let p = g.point("P");
        let q = g.point_avoiding("Q", &[&p]);
        let a = g.rim("A");
        let d = g.rim("D");
        let b = a.other_through(&p);
        let c = b.other_through(&q);
        let e = d.other_through(&p);
        let f = e.other_through(&q);
        let hex = [a, b, c, d, e, f];
        let distinct = (0..6).all(|i| (i + 1..6).all(|j| !hex[i].eq_exact(&hex[j])));
        if !distinct {
            g.reject()?;
            continue;
        }
        for (n, r) in ["A", "B", "C", "D", "E", "F"].iter().zip(hex.iter()) {
            g.note_rim(n, r);
        }
        return Ok((hex, p, q));
    }
}

fn midpoint_oracle(p: &Point, q: &Point) -> Result<Point> {
    let w = |a: &Point| (Real::one() - a.x.square() - a.y.square()).sqrt();
    let wp = w(p)?;
    let wq = w(q)?;
    let s = &wp + &wq;
    Point::new((&p.x * &wq + &q.x * &wp) / &s, (&p.y * &wq + &q.y * &wp) / &s)
}

/// Conjugacy of two chords with respect to the unit circle.
fn polar_conjugate(l: &Line, m: &Line) -> bool {
    let (a, b, c) = l.coefficients();
    let (a2, b2, c2) = m.coefficients();
    (a * a2 + b * b2 - c * c2).is_zero()
}

// ---------------------------------------------------------------------------
// axioms

const AXIOM_CHECKS: &[Check] = &[
    exact("A1", ax_a1),
    exact("A2", ax_a2),
    exact("A3", ax_a3),
    sampled("A4", ax_a4),
    sampled("A5", ax_a5),
    exact("A6", ax_a6),
    exact("A7", ax_a7),
    exact("A10", ax_a10),
    sampled("A11", ax_a11),
];

/// Lines sampled per instance for the sampled axioms.
const LINE_SAMPLES: usize = 20;
/// Points `S` sampled per instance for the foot axiom.
const FOOT_SAMPLES: usize = 10;

fn ax_a1(g: &mut Gen) -> Out {
    let a = g.any_point("A");
    let b = loop {
        let b = g.any_point("B");
        if !b.eq_exact(&a) {
            break b;
        }
    };
    let l = line_through(&a, &b)?;
    g.note_line("AB", &l);
    ensure!(l.contains_any(&a) && l.contains_any(&b), "line misses a defining point");
    let c = AnyPoint::Finite(g.point_on("C", &l));
    for (u, v) in [(&a, &c), (&b, &c)] {
        if !u.eq_exact(v) {
            ensure!(line_through(u, v)?.eq_exact(&l), "two lines through the same pair");
        }
    }
    Ok(())
}

fn ax_a2(g: &mut Gen) -> Out {
    let l = g.line("l");
    let [e, f] = l.ends();
    ensure!(!e.eq_exact(f), "line with a repeated rimpoint");
    for r in [e, f] {
        ensure!((r.x.square() + r.y.square() - Real::one()).is_zero(), "end off the circle");
    }
    let pts = g.points_on(&["P", "Q"], &l);
    for p in &pts {
        ensure!(l.contains(p), "generated point not on the line");
        ensure!((p.x.square() + p.y.square() - Real::one()).is_negative(), "point not interior");
    }
    Ok(())
}

fn ax_a3(g: &mut Gen) -> Out {
    let p = g.point("P");
    let q = g.point_avoiding("Q", &[&p]);
    let l = line_through_points(&p, &q)?;
    let r = g.point_off("R", &l);
    ensure!(!p.collinear(&q, &r), "triangle vertices collinear");
    for (u, v, w) in [(&p, &q, &r), (&q, &r, &p), (&r, &p, &q)] {
        ensure!(!line_through_points(u, v)?.contains(w), "one line through all three vertices");
    }
    Ok(())
}

fn ax_a4(g: &mut Gen) -> Out {
    let l = g.line("l");
    let pts = g.points_on(&["A", "B", "C"], &l);
    let mids: Vec<usize> =
        (0..3).filter(|&i| between(&pts[(i + 1) % 3], &pts[i], &pts[(i + 2) % 3]).unwrap_or(false)).collect();
    ensure!(mids.len() == 1, "{} of three collinear points lie between the others", mids.len());
    let i = mids[0];
    let (mid, u, w) = (&pts[i], &pts[(i + 1) % 3], &pts[(i + 2) % 3]);
    for k in 0..LINE_SAMPLES {
        let t = g.line_through(&format!("t{k}"), mid);
        let (a, c) = loop {
            let a = g.line_through(&format!("a{k}"), u);
            let c = g.line_through(&format!("c{k}"), w);
            if finite_meet(&a, &c)?.is_some() {
                break (a, c);
            }
            g.reject()?;
        };
        ensure!(
            meets_finite(&t, &a)? || meets_finite(&t, &c)?,
            "line {k} through the middle point misses both lines of an intersecting pair"
        );
    }
    Ok(())
}

fn ax_a5(g: &mut Gen) -> Out {
    let l = g.line("l");
    let p = g.point_off("P", &l);
    let [x1, x2] = l.ends();
    let p1 = line_rim_point(x1, &p);
    let p2 = line_rim_point(x2, &p);
    g.note_line("p1", &p1);
    g.note_line("p2", &p2);
    ensure!(!p1.eq_exact(&p2), "the two parallels coincide");
    ensure!(!meets_finite(&p1, &l)? && !meets_finite(&p2, &l)?, "a parallel meets the line");
    for k in 0..LINE_SAMPLES {
        let s = g.point_on(&format!("S{k}"), &l);
        let m = g.line_through_avoiding(&format!("m{k}"), &s, &[&l]);
        ensure!(
            meets_finite(&m, &p1)? || meets_finite(&m, &p2)?,
            "line {k} meets the base line but neither parallel"
        );
    }
    Ok(())
}

fn ax_a6(g: &mut Gen) -> Out {
    loop {
        let r = Ray::new(g.point("O1"), g.rim("E1"));
        let s = Ray::new(g.point("O2"), g.rim_avoiding("E2", &[&r.end]));
        let (cr, cs) = (r.carrier(), s.carrier());
        if cr.eq_exact(&cs) {
            g.reject()?;
            continue;
        }
        let c = common_parallel(&r, &s)?;
        if c.eq_exact(&cr) || c.eq_exact(&cs) {
            g.reject()?;
            continue;
        }
        g.note_line("c", &c);
        for (carrier, end) in [(&cr, &r.end), (&cs, &s.end)] {
            match meet(&c, carrier)? {
                Intersection::Rim(x) => ensure!(x.eq_exact(end), "parallel at the wrong end"),
                other => return Err(Fail(format!("common parallel meets a carrier: {other:?}"))),
            }
        }
        return Ok(());
    }
}

fn ax_a7(g: &mut Gen) -> Out {
    loop {
        let ([a, _b, c, d, _e, f], p, q) = hexagon(g)?;
        let cd = Line::from_rims_unchecked(&c, &d);
        let fa = Line::from_rims_unchecked(&f, &a);
        let Some(r) = finite_meet(&cd, &fa)? else {
            g.reject()?;
            continue;
        };
        g.note_point("R", &r);
        ensure!(p.collinear(&q, &r), "diagonal points not collinear");
        return Ok(());
    }
}

fn ax_a10(g: &mut Gen) -> Out {
    let p = g.point("P");
    let q = g.point_avoiding("Q", &[&p]);
    let d = line_through_points(&p, &q)?;
    let l = perp_at_point(&d, &p)?;
    let m = perp_at_point(&d, &q)?;
    g.note_line("l", &l);
    g.note_line("m", &m);
    let [l0, l1] = l.ends();
    let [m0, m1] = m.ends();
    let mut hits = Vec::new();
    for (a, b) in [((l0, m0), (l1, m1)), ((l0, m1), (l1, m0))] {
        let u = Line::through_rims(a.0, a.1)?;
        let v = Line::through_rims(b.0, b.1)?;
        if let Some(x) = finite_meet(&u, &v)? {
            hits.push(x);
        }
    }
    ensure!(hits.len() == 1, "{} pairs of common parallels cross", hits.len());
    let c = &hits[0];
    g.note_point("M", c);
    ensure!(d.contains(c), "common parallels meet off PQ");
    ensure!(midpoint(&p, &q)?.eq_exact(c), "crossing point is not the constructed midpoint");
    ensure!(ht(c).apply_point(&p)?.eq_exact(&q), "half-turn at the crossing does not swap P and Q");
    Ok(())
}

fn foot_holds(l: &Line, x: &Rimpoint, r: &Point, s: &Point) -> Result<bool> {
    let fwd = halfturns(&[s, r]).apply(x);
    let back = halfturns(&[r, s]).apply(x);
    let o = bowtie(l, &Line::through_rims(&fwd, &back)?)?;
    Ok(line_rim_point(x, r).contains(&o))
}

fn ax_a11(g: &mut Gen) -> Out {
    let l = g.line("l");
    let x = g.rim_off("X", &l);
    let r = a11_foot(&l, &x)?;
    g.note_point("R", &r);
    ensure!(l.contains(&r), "foot not on the line");
    let wrong = loop {
        let w = g.point_on("R_alt", &l);
        if !w.eq_exact(&r) {
            break w;
        }
    };
    let mut refuted = false;
    for k in 0..FOOT_SAMPLES {
        let s = loop {
            let s = g.point_on(&format!("S{k}"), &l);
            if !s.eq_exact(&r) && !s.eq_exact(&wrong) {
                break s;
            }
        };
        ensure!(foot_holds(&l, &x, &r, &s)?, "sample {k}: crossing point off XR");
        refuted |= !foot_holds(&l, &x, &wrong, &s)?;
    }
    ensure!(refuted, "a second foot passes every sample");
    Ok(())
}

// ---------------------------------------------------------------------------
// theorems

const THEOREM_CHECKS: &[Check] = &[
    exact("inv_then_collinear", th_inv_then_collinear),
    exact("third_point", th_third_point),
    exact("automorphism", th_automorphism),
    exact("fpfinv", th_fpfinv),
    exact("separation", th_separation),
    exact("cyclic_order", th_cyclic_order),
    exact("pasch", th_pasch),
    exact("pasch_corollary", th_pasch_corollary),
    exact("sides", th_sides),
    exact("acdf", th_acdf),
    exact("productperp", th_productperp),
    exact("perp_polarity", th_perp_polarity),
    exact("diagonalpointpolar", th_diagonalpointpolar),
    exact("a7star", th_a7star),
    exact("nocommonperp", th_nocommonperp),
    exact("fixedlines", th_fixedlines),
    exact("incidence", th_incidence),
    exact("tworefsfixed", th_tworefsfixed),
    exact("linerefauto", th_linerefauto),
    exact("bisector", th_bisector),
    exact("a8", th_a8),
    exact("a9", th_a9),
    exact("midpoint", th_midpoint),
    exact("axial_sqrt", th_axial_sqrt),
    exact("axial_commute", th_axial_commute),
    exact("axial_decompose", th_axial_decompose),
    exact("half_transport", th_half_transport),
    exact("axial_fixed", th_axial_fixed),
    exact("axial_through", th_axial_through),
    exact("commonaxis", th_commonaxis),
    exact("common_perpendicular", th_common_perpendicular),
    exact("perp_through_point", th_perp_through_point),
    exact("glide", th_glide),
    exact("probe_soundness", th_probe_soundness),
    exact("flag_transport", th_flag_transport),
];

/// Concurrent pairs per instance in the polarity check.
const POLARITY_PAIRS: usize = 6;
/// Quadruples and quintuples per instance in the order checks.
const ORDER_SAMPLES: usize = 10;

fn th_inv_then_collinear(g: &mut Gen) -> Out {
    let d = g.line("d");
    let pts = g.points_on(&["P", "Q", "R"], &d);
    let h = halfturns(&[&pts[0], &pts[1], &pts[2]]);
    ensure!(h.is_involution(), "collinear product is not an involution");
    let s = g.point_off("S", &d);
    let k = halfturns(&[&pts[0], &pts[1], &s]);
    ensure!(!k.is_involution(), "non-collinear product is an involution");
    Ok(())
}

fn th_third_point(g: &mut Gen) -> Out {
    let d = g.line("d");
    let pts = g.points_on(&["P", "Q", "R"], &d);
    let t = collinear_third(&pts[0], &pts[1], &pts[2])?;
    g.note_point("T", &t);
    ensure!(d.contains(&t), "third point off the line");
    ensure!(halfturns(&[&pts[0], &pts[1], &pts[2]]).equals(&ht(&t)), "product is not the half-turn");
    Ok(())
}

fn th_automorphism(g: &mut Gen) -> Out {
    let c = g.point("C");
    let h = ht(&c);
    let l = g.line("l");
    let pts = g.points_on(&["A", "B", "E"], &l);
    let img = pts.iter().map(|p| h.apply_point(p)).collect::<Result<Vec<_>>>()?;
    ensure!(img[0].collinear(&img[1], &img[2]), "collinearity not preserved");
    ensure!(h.apply_line(&l).contains(&img[0]), "image line misses an image point");
    let r = g.rims(&["X", "Y", "Z", "W"]);
    let ri: Vec<Rimpoint> = r.iter().map(|x| h.apply(x)).collect();
    ensure!(
        separation(&r[0], &r[1], &r[2], &r[3])? == separation(&ri[0], &ri[1], &ri[2], &ri[3])?,
        "separation not preserved"
    );
    ensure!(
        cyclic_order(&r[0], &r[1], &r[2])? == cyclic_order(&ri[0], &ri[1], &ri[2])?,
        "cyclic order not preserved"
    );
    let through = g.line_through("m", &c);
    ensure!(h.apply_line(&through).eq_exact(&through), "line through the center moved");
    if !l.contains(&c) {
        ensure!(!h.apply_line(&l).eq_exact(&l), "line off the center fixed");
    }
    Ok(())
}

fn th_fpfinv(g: &mut Gen) -> Out {
    let c = g.point("C");
    let l = g.line("l");
    let s = refl(&l);
    let f = s.then(&ht(&c)).then(&s);
    g.note_motion("g", &f);
    ensure!(f.is_involution(), "conjugate is not an involution");
    let r = g.rims(&["X", "Y"]);
    for x in &r {
        ensure!(!f.apply(x).eq_exact(x), "fixed rimpoint");
    }
    let (x, y) = (&r[0], &r[1]);
    let (fx, fy) = (f.apply(x), f.apply(y));
    if !fx.eq_exact(y) {
        ensure!(chords_cross(x, &fx, y, &fy)?, "transpositions do not separate");
    }
    let center = half_turn_center(&f)?;
    ensure!(f.equals(&ht(&center)), "involution is not the half-turn at its center");
    ensure!(center.eq_exact(&reflect_point(&l, &c)?), "center is not the mirror image");
    Ok(())
}

fn th_separation(g: &mut Gen) -> Out {
    for k in 0..ORDER_SAMPLES {
        let names: Vec<String> = ["A", "B", "C", "D", "X"].iter().map(|n| format!("{n}{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let r = g.rims(&refs);
        let (a, b, c, d, x) = (&r[0], &r[1], &r[2], &r[3], &r[4]);
        let sep = |p: &Rimpoint, q: &Rimpoint, s: &Rimpoint, t: &Rimpoint| chords_cross(p, q, s, t);
        ensure!(separation(a, a, c, d).is_err(), "S1: repeated rimpoint accepted");
        let ab_cd = sep(a, b, c, d)?;
        ensure!(ab_cd == separation(a, b, c, d)?, "meeting chords disagree with the order test");
        if ab_cd {
            ensure!(sep(a, b, d, c)?, "S2 fails");
            ensure!(!sep(a, c, b, d)?, "S3 fails");
            if sep(a, c, b, x)? {
                ensure!(sep(a, b, d, x)?, "S5 fails");
            }
        }
        let n = [sep(a, b, c, d)?, sep(a, c, b, d)?, sep(a, d, b, c)?].iter().filter(|v| **v).count();
        ensure!(n == 1, "S4: {n} of the three pairings separate");
        let cy = |p, q, s| cyclic_order(p, q, s);
        let via_order = (cy(a, b, c)? && cy(c, d, a)?) || (cy(a, d, c)? && cy(c, b, a)?);
        ensure!(sep(a, c, b, d)? == via_order, "separation disagrees with the cyclic order");
    }
    Ok(())
}

fn th_cyclic_order(g: &mut Gen) -> Out {
    for k in 0..ORDER_SAMPLES {
        let names: Vec<String> = ["X", "Y", "Z", "T"].iter().map(|n| format!("{n}{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let r = g.rims(&refs);
        let (x, y, z, t) = (&r[0], &r[1], &r[2], &r[3]);
        ensure!(cyclic_order(x, x, z).is_err(), "C1: repeated rimpoint accepted");
        ensure!(cyclic_order(x, y, z)? != cyclic_order(x, z, y)?, "C2 fails");
        if cyclic_order(x, y, z)? {
            ensure!(cyclic_order(y, z, x)?, "C3 fails");
            if cyclic_order(x, z, t)? {
                ensure!(cyclic_order(x, y, t)?, "C4 fails");
            }
        }
    }
    Ok(())
}

fn inside_segment(a: &Point, b: &Point, l: &Line) -> Result<bool> {
    let ab = line_through_points(a, b)?;
    Ok(match finite_meet(&ab, l)? {
        Some(x) => !x.eq_exact(a) && !x.eq_exact(b) && between(a, &x, b)?,
        None => false,
    })
}

fn th_pasch(g: &mut Gen) -> Out {
    let p = g.point("P");
    let q = g.point_avoiding("Q", &[&p]);
    let pq = line_through_points(&p, &q)?;
    let r = g.point_off("R", &pq);
    let s_par = g.unit();
    let s = Point::new(&p.x + &(&s_par * &(&q.x - &p.x)), &p.y + &(&s_par * &(&q.y - &p.y)))?;
    g.note_point("S", &s);
    let l = g.line_through_avoiding("l", &s, &[&pq]);
    if l.contains(&r) {
        return Ok(());
    }
    let hits = [inside_segment(&q, &r, &l)?, inside_segment(&r, &p, &l)?];
    ensure!(hits.iter().filter(|h| **h).count() == 1, "line enters the triangle and does not leave once");
    Ok(())
}

fn th_pasch_corollary(g: &mut Gen) -> Out {
    let r = g.rims(&["A", "B", "C", "M", "N"]);
    let (m, n) = (&r[3], &r[4]);
    let mut count = 0;
    for (x, y) in [(&r[0], &r[1]), (&r[1], &r[2]), (&r[2], &r[0])] {
        if chords_cross(m, n, x, y)? {
            count += 1;
        }
    }
    ensure!(count == 0 || count == 2, "chord MN crosses {count} sides");
    Ok(())
}

fn th_sides(g: &mut Gen) -> Out {
    let l = g.line("l");
    let mut pts: Vec<AnyPoint> = Vec::new();
    for k in 0..8 {
        let p = if g.coin() {
            AnyPoint::Finite(g.point_off(&format!("P{k}"), &l))
        } else {
            AnyPoint::Rim(g.rim_off(&format!("X{k}"), &l))
        };
        pts.push(p);
    }
    let s = g.point_on("S", &l);
    let flipped = match pts[0].clone() {
        AnyPoint::Finite(p) => AnyPoint::Finite(ht(&s).apply_point(&p)?),
        AnyPoint::Rim(x) => AnyPoint::Rim(ht(&s).apply(&x)),
    };
    g.note("flipped", Object::Point(flipped.clone()));
    pts.push(flipped);
    let n = pts.len();
    let rel = |i: usize, j: usize| same_side(&l, &pts[i], &pts[j]);
    ensure!(!rel(0, n - 1)?, "half-turn on the line kept a point on its side");
    for i in 0..n {
        ensure!(rel(i, i)?, "same_side not reflexive");
        for j in 0..n {
            ensure!(rel(i, j)? == rel(j, i)?, "same_side not symmetric");
            for k in 0..n {
                if rel(i, j)? && rel(j, k)? {
                    ensure!(rel(i, k)?, "same_side not transitive");
                }
            }
        }
    }
    let classes = (0..n).filter(|&i| (0..i).all(|j| !rel(i, j).unwrap_or(true))).count();
    ensure!(classes == 2, "{classes} sides");
    Ok(())
}

fn th_acdf(g: &mut Gen) -> Out {
    let l = g.line("l");
    let pts = g.points_on(&["P", "Q"], &l);
    let a = g.rim_off("A", &l);
    let d = loop {
        let d = g.rim_off("D", &l);
        if !same_side(&l, &a.clone().into(), &d.clone().into())? {
            break d;
        }
    };
    let pq = halfturns(&[&pts[0], &pts[1]]);
    let (a2, d2) = (pq.apply(&a), pq.apply(&d));
    ensure!(chords_cross(&a, &d2, &a2, &d)?, "A D^PQ does not separate A^PQ D");
    Ok(())
}

fn th_productperp(g: &mut Gen) -> Out {
    let l = g.line("l");
    let p = g.point_on("P", &l);
    let built_perp = g.coin();
    let m = if built_perp { perp_at_point(&l, &p)? } else { g.line_through_avoiding("m_try", &p, &[&l]) };
    g.note_line("m", &m);
    let perp = is_perpendicular(&l, &m)?;
    if built_perp {
        ensure!(perp, "constructed perpendicular is not perpendicular");
    }
    let product = refl(&l).then(&refl(&m));
    ensure!(perp == product.equals(&ht(&p)), "perpendicularity disagrees with the reflection product");
    Ok(())
}

fn th_perp_polarity(g: &mut Gen) -> Out {
    for k in 0..POLARITY_PAIRS {
        let p = g.point(&format!("P{k}"));
        let l = g.line_through(&format!("l{k}"), &p);
        let m = if g.coin() {
            let m = perp_at_point(&l, &p)?;
            g.note_line(&format!("m{k}"), &m);
            m
        } else {
            g.line_through_avoiding(&format!("m{k}"), &p, &[&l])
        };
        ensure!(
            is_perpendicular(&l, &m)? == polar_conjugate(&l, &m),
            "pair {k}: perpendicularity disagrees with polar conjugacy"
        );
    }
    Ok(())
}

fn th_diagonalpointpolar(g: &mut Gen) -> Out {
    let (l, m) = g.ultraparallel("l", "m")?;
    let o = bowtie(&l, &m)?;
    g.note_point("O", &o);
    let n = common_perpendicular(&l, &m)?;
    g.note_line("n", &n);
    ensure!(n.contains(&o), "crossing point off the common perpendicular");
    let fl = meet(&l, &n)?.finite().ok_or_else(|| Fail("perpendicular misses l".into()))?;
    let fm = meet(&m, &n)?.finite().ok_or_else(|| Fail("perpendicular misses m".into()))?;
    ensure!(ht(&o).apply_point(&fl)?.eq_exact(&fm), "crossing point is not the midpoint of the feet");
    Ok(())
}

fn th_a7star(g: &mut Gen) -> Out {
    let ([a, _b, c, d, _e, f], p, q) = hexagon(g)?;
    let cd = Line::from_rims_unchecked(&c, &d);
    let fa = Line::from_rims_unchecked(&f, &a);
    let pq = line_through_points(&p, &q)?;
    match finite_meet(&cd, &fa)? {
        Some(r) => ensure!(pq.contains(&r), "third diagonal point off PQ"),
        None => {
            let n = common_perpendicular(&cd, &fa)?;
            g.note_line("n", &n);
            ensure!(is_perpendicular(&n, &pq)?, "PQ is not perpendicular to the common perpendicular");
        }
    }
    Ok(())
}

fn th_nocommonperp(g: &mut Gen) -> Out {
    let l = g.line("l");
    let on = g.coin();
    let p = if on { g.point_on("P", &l) } else { g.point_off("P", &l) };
    let f = ht(&p).then(&refl(&l));
    let mut chords: Vec<Line> = Vec::new();
    while chords.len() < 3 {
        let x = g.rim(&format!("X{}", chords.len()));
        let fx = f.apply(&x);
        if fx.eq_exact(&x) {
            g.reject()?;
            continue;
        }
        let c = Line::through_rims(&x, &fx)?;
        if chords.iter().any(|k| k.eq_exact(&c)) {
            g.reject()?;
            continue;
        }
        chords.push(c);
    }
    if on {
        let y = perp_at_point(&l, &p)?;
        for c in &chords {
            ensure!(is_perpendicular(&y, c)?, "chord not perpendicular to the reflection axis");
        }
        return Ok(());
    }
    if classify_pair(&chords[0], &chords[1])? != PairClass::Ultraparallel {
        return Ok(());
    }
    let n = common_perpendicular(&chords[0], &chords[1])?;
    g.note_line("n", &n);
    ensure!(!is_perpendicular(&n, &chords[2])?, "three chords share a perpendicular with P off l");
    Ok(())
}

fn th_fixedlines(g: &mut Gen) -> Out {
    let l = g.line("l");
    let s = refl(&l);
    ensure!(s.apply_line(&l).eq_exact(&l), "axis not fixed");
    let x = g.rim_off("X", &l);
    let m = perp_from_rimpoint(&l, &x)?;
    g.note_line("m", &m);
    ensure!(s.apply_line(&m).eq_exact(&m), "perpendicular not fixed");
    ensure!(is_perpendicular(&l, &m)?, "fixed line is not perpendicular");
    let k = g.line("k");
    if s.apply_line(&k).eq_exact(&k) {
        ensure!(k.eq_exact(&l) || is_perpendicular(&l, &k)?, "fixed line neither axis nor perpendicular");
    }
    Ok(())
}

fn th_incidence(g: &mut Gen) -> Out {
    let l = g.line("l");
    let p = if g.coin() { g.point_on("P", &l) } else { g.point("P") };
    let (h, s) = (ht(&p), refl(&l));
    let a = l.contains(&p);
    let b = h.then(&s).equals(&s.then(&h));
    let c = h.then(&s).is_involution();
    ensure!(a == b && b == c, "incidence {a}, commuting {b}, involution {c}");
    Ok(())
}

fn th_tworefsfixed(g: &mut Gen) -> Out {
    let l = g.line("l");
    let m = match g.pick(3) {
        0 => {
            let p = g.point_on("P", &l);
            perp_at_point(&l, &p)?
        }
        1 => {
            let e = l.ends()[g.pick(2)].clone();
            let x = g.rim_avoiding("X", &l.ends().iter().collect::<Vec<_>>());
            Line::through_rims(&e, &x)?
        }
        _ => loop {
            let m = g.line("m_try");
            if !m.eq_exact(&l) {
                break m;
            }
        },
    };
    g.note_line("m", &m);
    let f = refl(&l).then(&refl(&m));
    let fixed =
        fixed_rimpoints(&f).ok_or_else(|| Fail("product of distinct reflections is the identity".into()))?;
    ensure!(fixed.len() <= 2, "{} fixed rimpoints", fixed.len());
    for x in &fixed {
        ensure!(f.apply(x).eq_exact(x), "reported fixed rimpoint moves");
    }
    Ok(())
}

fn th_linerefauto(g: &mut Gen) -> Out {
    let l = g.line("l");
    let s = refl(&l);
    let r = g.rims(&["X", "Y", "Z", "W"]);
    let ri: Vec<Rimpoint> = r.iter().map(|x| s.apply(x)).collect();
    ensure!(cyclic_order(&r[0], &r[1], &r[2])? != cyclic_order(&ri[0], &ri[1], &ri[2])?, "cyclic order kept");
    ensure!(
        separation(&r[0], &r[1], &r[2], &r[3])? == separation(&ri[0], &ri[1], &ri[2], &ri[3])?,
        "separation not preserved"
    );
    let p = g.point("P");
    let img = reflect_point(&l, &p)?;
    ensure!(s.then(&ht(&p)).then(&s).equals(&ht(&img)), "conjugate half-turn is not at the image point");
    let moved = ht(&p).apply_line(&l);
    ensure!(ht(&p).then(&s).then(&ht(&p)).equals(&refl(&moved)), "conjugate reflection has the wrong axis");
    let m = g.line("m");
    let sm = refl(&m);
    ensure!(sm.then(&s).then(&sm).equals(&refl(&sm.apply_line(&l))), "conjugate by a reflection");
    let q = g.point_on("Q", &l);
    ensure!(s.apply_point(&q)?.eq_exact(&q), "point on the axis moved");
    ensure!(s.apply_point(&p)?.eq_exact(&p) == l.contains(&p), "fixes an off-axis point");
    let u = g.line_through("u", &q);
    let v = perp_at_point(&u, &q)?;
    ensure!(is_perpendicular(&s.apply_line(&u), &s.apply_line(&v))?, "perpendicularity not preserved");
    Ok(())
}

fn th_bisector(g: &mut Gen) -> Out {
    let l = g.line("l");
    let [l0, l1] = l.ends().clone();
    let (m, pairing) = match g.pick(3) {
        0 => {
            let p = g.point_on("P", &l);
            let m = g.line_through_avoiding("m", &p, &[&l]);
            let [m0, m1] = m.ends().clone();
            let pr = if g.coin() {
                EndPairing { x: l0, x_to: m0, y: l1, y_to: m1 }
            } else {
                EndPairing { x: l0, x_to: m1, y: l1, y_to: m0 }
            };
            (m, pr)
        }
        1 => {
            let (l2, m) = g.ultraparallel("l", "m")?;
            let [a0, a1] = l2.ends().clone();
            let [m0, m1] = m.ends().clone();
            let pr = if separation(&a0, &m0, &a1, &m1)? {
                EndPairing { x: a0, x_to: m1, y: a1, y_to: m0 }
            } else {
                EndPairing { x: a0, x_to: m0, y: a1, y_to: m1 }
            };
            return bisector_holds(g, &l2, &m, &pr);
        }
        _ => {
            let x = g.rim_avoiding("X", &[&l0, &l1]);
            let m = Line::through_rims(&l0, &x)?;
            g.note_line("m", &m);
            (m, EndPairing { x: l0.clone(), x_to: l0, y: l1, y_to: x })
        }
    };
    bisector_holds(g, &l, &m, &pairing)
}

fn bisector_holds(g: &mut Gen, l: &Line, m: &Line, pr: &EndPairing) -> Out {
    let n = bisector(l, m, pr)?;
    g.note_line("n", &n);
    let s = refl(&n);
    ensure!(s.apply(&pr.x).eq_exact(&pr.x_to) && s.apply(&pr.y).eq_exact(&pr.y_to), "ends not exchanged");
    ensure!(refl(l).then(&s).equals(&s.then(&refl(m))), "bisector equation fails");
    Ok(())
}

fn th_a8(g: &mut Gen) -> Out {
    loop {
        let a = g.line("a");
        let b = g.line("b");
        if a.eq_exact(&b) {
            g.reject()?;
            continue;
        }
        let pa = g.points_on(&["A1", "A2", "A3"], &a);
        let pb = g.points_on(&["B1", "B2", "B3"], &b);
        if pa.iter().any(|p| b.contains(p)) || pb.iter().any(|p| a.contains(p)) {
            g.reject()?;
            continue;
        }
        let mut cross = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let u = line_through_points(&pa[i], &pb[j])?;
            let v = line_through_points(&pa[j], &pb[i])?;
            cross.push(finite_meet(&u, &v)?);
        }
        if cross.iter().any(Option::is_none) {
            g.reject()?;
            continue;
        }
        let c: Vec<Point> = cross.into_iter().flatten().collect();
        ensure!(c[0].collinear(&c[1], &c[2]), "Pappus points not collinear");
        return Ok(());
    }
}

fn th_a9(g: &mut Gen) -> Out {
    loop {
        let o = g.point("O");
        let lines = [g.line_through("a", &o), g.line_through("b", &o), g.line_through("c", &o)];
        if lines[0].eq_exact(&lines[1]) || lines[1].eq_exact(&lines[2]) || lines[0].eq_exact(&lines[2]) {
            g.reject()?;
            continue;
        }
        let mut pairs = Vec::new();
        for (k, l) in lines.iter().enumerate() {
            let p = g.points_on(&[&format!("{k}1"), &format!("{k}2")], l);
            if p.iter().any(|x| x.eq_exact(&o)) {
                break;
            }
            pairs.push(p);
        }
        if pairs.len() < 3 {
            g.reject()?;
            continue;
        }
        let mut cross = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let u = line_through_points(&pairs[i][0], &pairs[j][0])?;
            let v = line_through_points(&pairs[i][1], &pairs[j][1])?;
            cross.push(finite_meet(&u, &v)?);
        }
        if cross.iter().any(Option::is_none) {
            g.reject()?;
            continue;
        }
        let c: Vec<Point> = cross.into_iter().flatten().collect();
        ensure!(c[0].collinear(&c[1], &c[2]), "Desargues points not collinear");
        return Ok(());
    }
}

fn th_midpoint(g: &mut Gen) -> Out {
    let p = g.point("P");
    let q = g.point_avoiding("Q", &[&p]);
    let m = midpoint(&p, &q)?;
    g.note_point("M", &m);
    let h = ht(&m);
    ensure!(h.apply_point(&p)?.eq_exact(&q) && h.apply_point(&q)?.eq_exact(&p), "half-turn does not swap");
    ensure!(axial(&p, &m)?.equals(&axial(&m, &q)?), "PM differs from MQ");
    ensure!(m.eq_exact(&midpoint_oracle(&p, &q)?), "construction disagrees with the closed form");
    Ok(())
}

fn axial_on(g: &mut Gen, l: &Line) -> std::result::Result<(Motion, Vec<Point>), Fail> {
    let pts = g.points_on(&["P", "Q"], l);
    let a = axial(&pts[0], &pts[1])?;
    g.note_motion("alpha", &a);
    Ok((a, pts))
}

fn th_axial_sqrt(g: &mut Gen) -> Out {
    let l = g.line("l");
    let (a, pts) = axial_on(g, &l)?;
    let a = if g.coin() {
        let r = g.point_on("R", &l);
        halfturns(&[&pts[0], &r, &r, &pts[1]])
    } else {
        a
    };
    let b = axial_sqrt(&a)?;
    g.note_motion("beta", &b);
    ensure!(b.then(&b).equals(&a), "square of the root differs");
    let fixed = fixed_rimpoints(&b).ok_or_else(|| Fail("root is the identity".into()))?;
    ensure!(same_ends(&fixed, &l), "root has a different axis");
    Ok(())
}

fn th_axial_commute(g: &mut Gen) -> Out {
    let l = g.line("l");
    let pts = g.points_on(&["P", "Q", "R", "S"], &l);
    let a = axial(&pts[0], &pts[1])?;
    let b = axial(&pts[2], &pts[3])?;
    ensure!(a.then(&b).equals(&b.then(&a)), "axials on one axis do not commute");
    Ok(())
}

fn th_axial_decompose(g: &mut Gen) -> Out {
    let l = g.line("l");
    let (a, _) = axial_on(g, &l)?;
    let r = g.point_on("R", &l);
    let s = axial_decompose(&a, &l, &r)?;
    g.note_point("S", &s);
    ensure!(l.contains(&s), "second factor off the axis");
    ensure!(!s.eq_exact(&r) && a.equals(&axial(&r, &s)?), "factorisation fails");
    let other = loop {
        let t = g.point_on("S_alt", &l);
        if !t.eq_exact(&s) && !t.eq_exact(&r) {
            break t;
        }
    };
    ensure!(!a.equals(&axial(&r, &other)?), "second factorisation");
    Ok(())
}

fn th_half_transport(g: &mut Gen) -> Out {
    let l = g.line("l");
    let x3 = g.rim_off("X3", &l);
    let x4 = loop {
        let x = g.rim_off("X4", &l);
        if !x.eq_exact(&x3) && same_side(&l, &x.clone().into(), &x3.clone().into())? {
            break x;
        }
    };
    let h = half_transport(&l, &x3, &x4)?;
    g.note_motion("g", &h);
    ensure!(h.then(&h).apply(&x4).eq_exact(&x3), "square does not carry X4 to X3");
    let [e0, e1] = l.ends();
    ensure!(h.apply(e0).eq_exact(e0) && h.apply(e1).eq_exact(e1), "not axial along l");
    ensure!(half_transport(&l, &x4, &x3)?.equals(&h.inverse()), "reverse transport is not the inverse");
    let pts = g.points_on(&["P", "Q"], &l);
    let other = h.then(&axial(&pts[0], &pts[1])?);
    ensure!(!other.then(&other).apply(&x4).eq_exact(&x3), "a second axial solves the transport");
    Ok(())
}

fn th_axial_fixed(g: &mut Gen) -> Out {
    let l = g.line("l");
    let (a, _) = axial_on(g, &l)?;
    let fixed = fixed_rimpoints(&a).ok_or_else(|| Fail("axial is the identity".into()))?;
    ensure!(same_ends(&fixed, &l), "fixed rimpoints are not the axis ends");
    let x = g.rim_off("X", &l);
    let ax = a.apply(&x);
    ensure!(!ax.eq_exact(&x), "off-axis rimpoint fixed");
    ensure!(!a.apply(&ax).eq_exact(&x), "axial swaps a pair");
    Ok(())
}

fn th_axial_through(g: &mut Gen) -> Out {
    let l = g.line("l");
    let u = g.rim_off("U", &l);
    let v = loop {
        let v = g.rim_off("V", &l);
        if same_side(&l, &u.clone().into(), &v.clone().into())? {
            break v;
        }
    };
    let a = axial_through(&l, &u, &v)?;
    ensure!(a.apply(&u).eq_exact(&v), "U not carried to V");
    let [e0, e1] = l.ends();
    ensure!(a.apply(e0).eq_exact(e0) && a.apply(e1).eq_exact(e1), "axis ends moved");
    Ok(())
}

fn th_commonaxis(g: &mut Gen) -> Out {
    let l = g.line("l");
    let pts = g.points_on(&["P", "Q", "R", "S"], &l);
    let x = g.rim_off("A", &l);
    let mut feet = Vec::new();
    for m in [axial(&pts[0], &pts[1])?, axial(&pts[2], &pts[3])?] {
        let chord = Line::through_rims(&m.apply(&x), &m.inverse().apply(&x))?;
        feet.push(bowtie(&l, &chord)?);
    }
    ensure!(line_rim_point(&x, &feet[0]).contains(&feet[1]), "A and the two crossing points not collinear");
    Ok(())
}

fn th_common_perpendicular(g: &mut Gen) -> Out {
    let (l, m) = g.ultraparallel("l", "m")?;
    let n = common_perpendicular(&l, &m)?;
    g.note_line("n", &n);
    ensure!(is_perpendicular(&n, &l)? && is_perpendicular(&n, &m)?, "not perpendicular to both");
    Ok(())
}

fn th_perp_through_point(g: &mut Gen) -> Out {
    let l = g.line("l");
    let p = g.point_off("P", &l);
    let n = perp_through_point(&l, &p)?;
    g.note_line("n", &n);
    ensure!(n.contains(&p), "perpendicular misses P");
    ensure!(is_perpendicular(&l, &n)?, "not perpendicular");
    Ok(())
}

fn th_glide(g: &mut Gen) -> Out {
    let a = g.point("A");
    let e = g.point_avoiding("E", &[&a]);
    let d = if g.pick(3) == 0 {
        let x = line_through_points(&a, &e)?;
        let end = x.ends()[g.pick(2)].clone();
        let y = g.rim_avoiding("Y", &x.ends().iter().collect::<Vec<_>>());
        Line::through_rims(&end, &y)?
    } else {
        g.line("d_try")
    };
    g.note_line("d", &d);
    let (x, y) = glide_normalize(&a, &e, &d)?;
    g.note_point("X", &x);
    g.note_line("y", &y);
    let lhs = halfturns(&[&a, &e]).then(&refl(&d));
    ensure!(lhs.equals(&ht(&x).then(&refl(&y))), "rewritten glide differs");
    Ok(())
}

fn th_probe_soundness(g: &mut Gen) -> Out {
    let l = g.line("l");
    let pool = [
        Generator::HalfTurn(g.point("P")),
        Generator::HalfTurn(g.point("Q")),
        Generator::HalfTurn(g.point_on("R", &l)),
        Generator::Reflection(l.clone()),
    ];
    let extra = g.rims(&["X", "Y", "Z"]);
    let pr = probes();
    let n = pool.len();
    for len in 1..=3u32 {
        for code in 0..n.pow(len) {
            let word: Vec<Generator> = (0..len).map(|i| pool[code / n.pow(i) % n].clone()).collect();
            let w = Motion::from_word(word);
            if pr.iter().all(|x| w.apply(x).eq_exact(x)) {
                ensure!(w.parity() == 0, "orientation-reversing word fixes the probes");
                for x in &extra {
                    ensure!(w.apply(x).eq_exact(x), "word fixing the probes moves a rimpoint");
                }
            }
        }
    }
    Ok(())
}

fn th_flag_transport(g: &mut Gen) -> Out {
    let p = g.point("P");
    let l = g.line_through("l", &p);
    let q = g.point("Q");
    let m = g.line_through("m", &q);
    let f = flag_transport(&p, &l, &q, &m)?;
    g.note_motion("g", &f);
    ensure!(f.word().len() <= 4, "word too long");
    ensure!(f.apply_point(&p)?.eq_exact(&q), "point not carried");
    ensure!(f.apply_line(&l).eq_exact(&m), "line not carried");
    Ok(())
}

// ---------------------------------------------------------------------------
// metric plane

const METRIC_CHECKS: &[Check] = &[
    exact("I1", mp_i1),
    exact("I2", mp_i2),
    exact("I3", ax_a3),
    exact("P1", mp_p1),
    exact("P2", mp_p2),
    exact("M1", mp_m1),
    exact("M2", mp_m2),
    exact("M3", mp_m3),
    exact("M4", mp_m4),
    exact("not_V_star", mp_not_v_star),
    sampled("H", mp_h),
];

/// Lines through `P` sampled per instance for the hyperbolic axiom.
const PENCIL_SAMPLES: usize = 30;

fn mp_i1(g: &mut Gen) -> Out {
    let p = g.point("P");
    let q = g.point_avoiding("Q", &[&p]);
    let l = line_through_points(&p, &q)?;
    ensure!(l.contains(&p) && l.contains(&q), "line misses a point");
    let r = g.point_on("R", &l);
    if !r.eq_exact(&p) {
        ensure!(line_through_points(&p, &r)?.eq_exact(&l), "second line through P and R");
    }
    Ok(())
}

fn mp_i2(g: &mut Gen) -> Out {
    let l = if g.coin() {
        g.line("l")
    } else {
        let p = g.point("A");
        let q = g.point_avoiding("B", &[&p]);
        line_through_points(&p, &q)?
    };
    g.note_line("l", &l);
    let pts = g.points_on(&["P", "Q", "R"], &l);
    ensure!(pts.iter().all(|p| l.contains(p)), "point off the line");
    Ok(())
}

fn mp_p1(g: &mut Gen) -> Out {
    let a = g.line("a");
    let on = g.coin();
    let p = if on { g.point_on("P", &a) } else { g.point_off("P", &a) };
    let b = perp_any(&a, &p)?;
    g.note_line("b", &b);
    ensure!(b.contains(&p) && is_perpendicular(&a, &b)?, "no perpendicular through P");
    if on {
        let c = g.line_through_avoiding("c", &p, &[&a, &b]);
        ensure!(!is_perpendicular(&a, &c)?, "second perpendicular at P");
    }
    Ok(())
}

fn mp_p2(g: &mut Gen) -> Out {
    let a = g.line("a");
    let p = if g.coin() { g.point_on("P", &a) } else { g.point_off("P", &a) };
    let b = perp_any(&a, &p)?;
    g.note_line("b", &b);
    ensure!(matches!(meet(&a, &b)?, Intersection::Finite(_)), "perpendicular lines share no point");
    Ok(())
}

fn mp_m1(g: &mut Gen) -> Out {
    let l = g.line("l");
    let s = refl(&l);
    let q = g.point_on("S", &l);
    ensure!(s.apply_point(&q)?.eq_exact(&q), "axis not fixed pointwise");
    let k = g.line("k");
    let pts = g.points_on(&["A", "B", "C"], &k);
    let img = pts.iter().map(|p| s.apply_point(p)).collect::<Result<Vec<_>>>()?;
    ensure!(img[0].collinear(&img[1], &img[2]), "not a collineation");
    let u = g.line_through("u", &pts[0]);
    let v = perp_at_point(&u, &pts[0])?;
    ensure!(is_perpendicular(&s.apply_line(&u), &s.apply_line(&v))?, "perpendicularity not preserved");
    Ok(())
}

fn mp_m2(g: &mut Gen) -> Out {
    let l = g.line("l");
    let s = refl(&l);
    let p = g.point("P");
    ensure!(s.apply_point(&s.apply_point(&p)?)?.eq_exact(&p), "reflection twice moves a point");
    ensure!(s.is_involution(), "reflection is not an involution on rimpoints");
    Ok(())
}

fn mp_m3(g: &mut Gen) -> Out {
    let p = g.point("P");
    let l = g.line_through("l", &p);
    let m = g.line_through_avoiding("m", &p, &[&l]);
    let n = g.line_through_avoiding("n", &p, &[&m]);
    let x = &l.ends()[0];
    let turn = refl(&m).then(&refl(&n));
    let y = turn.apply(x);
    let product = refl(&l).then(&turn);
    let o = if y.eq_exact(x) { l.clone() } else { perp_any(&Line::through_rims(x, &y)?, &p)? };
    g.note_line("o", &o);
    ensure!(o.contains(&p), "fourth line misses the common point");
    ensure!(product.equals(&refl(&o)), "triple product is not the reflection in o");
    Ok(())
}

fn mp_m4(g: &mut Gen) -> Out {
    let k = g.line("k");
    let pts = g.points_on(&["A", "B", "C"], &k);
    let lines = pts.iter().map(|p| perp_at_point(&k, p)).collect::<Result<Vec<_>>>()?;
    let d = perp_at_point(&k, &collinear_third(&pts[0], &pts[1], &pts[2])?)?;
    g.note_line("d", &d);
    let product = refl(&lines[0]).then(&refl(&lines[1])).then(&refl(&lines[2]));
    ensure!(product.equals(&refl(&d)), "triple product is not the reflection in d");
    Ok(())
}

fn no_point_no_perp(a: &Line, b: &Line) -> Result<bool> {
    Ok(matches!(meet(a, b)?, Intersection::Rim(_)) && common_perpendicular(a, b).is_err())
}

fn mp_not_v_star(g: &mut Gen) -> Out {
    let x_axis = Line::through_rims(&Rimpoint::rat(1, 1, 0, 1), &Rimpoint::rat(-1, 1, 0, 1))?;
    let chord = Line::through_rims(&Rimpoint::rat(1, 1, 0, 1), &Rimpoint::rat(0, 1, 1, 1))?;
    ensure!(no_point_no_perp(&x_axis, &chord)?, "parallel pair has a common point or perpendicular");
    let v = |c: i64| Line::from_coefficients(Real::one(), Real::zero(), Real::frac(c, 2));
    let (a, b) = (v(-1)?, v(1)?);
    ensure!(!no_point_no_perp(&a, &b)?, "ultraparallel pair accepted");
    ensure!(common_perpendicular(&a, &b)?.eq_exact(&x_axis), "wrong common perpendicular");
    let l = g.line("l");
    let e = l.ends()[g.pick(2)].clone();
    let x = g.rim_avoiding("X", &l.ends().iter().collect::<Vec<_>>());
    let m = Line::through_rims(&e, &x)?;
    g.note_line("m", &m);
    ensure!(no_point_no_perp(&l, &m)?, "random parallel pair has a common point or perpendicular");
    Ok(())
}

fn mp_h(g: &mut Gen) -> Out {
    let l = g.line("l");
    let p = g.point_off("P", &l);
    let mut lonely: Vec<Line> = Vec::new();
    for k in 0..PENCIL_SAMPLES {
        let c = g.line_through(&format!("c{k}"), &p);
        let free = match classify_pair(&c, &l)? {
            PairClass::Intersecting => false,
            PairClass::Parallel => true,
            PairClass::Ultraparallel => {
                let n = common_perpendicular(&c, &l)?;
                !(is_perpendicular(&n, &c)? && is_perpendicular(&n, &l)?)
            }
        };
        if free && !lonely.iter().any(|x| x.eq_exact(&c)) {
            lonely.push(c);
        }
    }
    let [x1, x2] = l.ends();
    for par in [line_rim_point(x1, &p), line_rim_point(x2, &p)] {
        ensure!(no_point_no_perp(&par, &l)?, "parallel through P has a common point or perpendicular");
        if !lonely.iter().any(|x| x.eq_exact(&par)) {
            lonely.push(par);
        }
    }
    ensure!(lonely.len() <= 2, "{} lines through P share neither point nor perpendicular", lonely.len());
    Ok(())
}

// ---------------------------------------------------------------------------
// half-turns and reflections as an oval

const OVAL_CHECKS: &[Check] =
    &[exact("oval_cases", ov_cases), exact("oval_pascal", ov_pascal), exact("oval_regular", ov_regular)];

fn swaps(f: &Motion, a: &Rimpoint, b: &Rimpoint) -> bool {
    f.apply(a).eq_exact(b) && f.apply(b).eq_exact(a)
}

fn ov_cases(g: &mut Gen) -> Out {
    let r = g.rims(&["X", "Y", "Z", "W"]);
    let (x, y, z, w) = (&r[0], &r[1], &r[2], &r[3]);
    let xy = Line::through_rims(x, y)?;
    let zw = Line::through_rims(z, w)?;
    let centre = meet(&xy, &zw)?.finite();
    let axis = common_perpendicular(&xy, &zw).ok();
    match (centre, axis) {
        (Some(c), None) => {
            g.note_point("C", &c);
            ensure!(swaps(&ht(&c), x, y) && swaps(&ht(&c), z, w), "half-turn does not realise the swaps");
        }
        (None, Some(n)) => {
            g.note_line("n", &n);
            ensure!(
                swaps(&refl(&n), x, y) && swaps(&refl(&n), z, w),
                "reflection does not realise the swaps"
            );
        }
        (c, n) => {
            return Err(Fail(format!(
                "swap pair realised by {} half-turns and {} reflections",
                c.is_some() as u8,
                n.is_some() as u8
            )))
        }
    }
    let n = perp_from_rimpoint(&Line::through_rims(y, z)?, x)?;
    let s = refl(&n);
    ensure!(s.apply(x).eq_exact(x) && swaps(&s, y, z), "reflection fixing X does not swap Y, Z");
    let fixed = fixed_rimpoints(&s).ok_or_else(|| Fail("identity".into()))?;
    ensure!(fixed.len() == 2 && fixed.iter().any(|f| f.eq_exact(x)), "wrong fixed rimpoints");
    let sxy = refl(&xy);
    ensure!(sxy.apply(x).eq_exact(x) && sxy.apply(y).eq_exact(y), "reflection in XY moves its ends");
    Ok(())
}

/// A random half-turn on `l` or reflection in a perpendicular to `l`.
fn secant_involution(g: &mut Gen, name: &str, l: &Line) -> std::result::Result<Motion, Fail> {
    let p = g.point_on(name, l);
    let f = if g.coin() { ht(&p) } else { refl(&perp_at_point(l, &p)?) };
    g.note_motion(name, &f);
    Ok(f)
}

/// Identify `f` as a half-turn or a reflection.
fn as_involution(f: &Motion) -> std::result::Result<Generator, Fail> {
    if f.parity() == 0 {
        let c = half_turn_center(f)?;
        ensure!(f.equals(&ht(&c)), "even product is not a half-turn");
        Ok(Generator::HalfTurn(c))
    } else {
        let a = reflection_axis(f)?;
        ensure!(f.equals(&refl(&a)), "odd product is not a reflection");
        Ok(Generator::Reflection(a))
    }
}

fn ov_pascal(g: &mut Gen) -> Out {
    let l = g.line("l");
    let [x, y] = l.ends().clone();
    let fs =
        [secant_involution(g, "f1", &l)?, secant_involution(g, "f2", &l)?, secant_involution(g, "f3", &l)?];
    let f = fs[0].then(&fs[1]).then(&fs[2]);
    ensure!(swaps(&f, &x, &y), "product does not swap the secant ends");
    match as_involution(&f)? {
        Generator::HalfTurn(c) => ensure!(l.contains(&c), "half-turn centre off the secant"),
        Generator::Reflection(a) => ensure!(is_perpendicular(&a, &l)?, "reflection axis not perpendicular"),
    }
    Ok(())
}

fn random_involution(g: &mut Gen, name: &str) -> Motion {
    let f = if g.coin() { ht(&g.point(name)) } else { refl(&g.line(name)) };
    g.note_motion(&format!("{name}_map"), &f);
    f
}

fn ov_regular(g: &mut Gen) -> Out {
    let s = random_involution(g, "s");
    let t = random_involution(g, "t");
    let c = t.then(&s).then(&t);
    ensure!(c.is_involution(), "conjugate is not an involution");
    let kind = as_involution(&c)?;
    ensure!(matches!(kind, Generator::HalfTurn(_)) == (s.parity() == 0), "conjugation changed the kind");
    Ok(())
}
