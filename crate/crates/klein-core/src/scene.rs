//! JSON scenes: named points, rimpoints, lines and motions with exact
//! coordinates stored as expression strings.
//!
//! ```json
//! {
//!   "points": {"P": {"kind": "finite", "x": "1/3", "y": "0", "approx": {...}}},
//!   "lines": {"l": {"ends": [{"kind": "rim", "x": "1", "y": "0"}, ...]}},
//!   "motions": {"g": [{"kind": "halfturn", "p": {...}}, {"kind": "reflection", "line": {...}}]}
//! }
//! ```
//!
//! The `approx` fields are 20-digit decimals for reading only and are ignored on load.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::model::{AnyPoint, Line, Point, Rimpoint};
use crate::scalar::Real;
use crate::transforms::{Generator, Motion};
use crate::{Error, Result};

const APPROX_DIGITS: usize = 20;

#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub points: BTreeMap<String, AnyPoint>,
    pub lines: BTreeMap<String, Line>,
    pub motions: BTreeMap<String, Motion>,
}

/// Any single scene object.
#[derive(Clone, Debug)]
pub enum Object {
    Point(AnyPoint),
    Line(Line),
    Motion(Motion),
}

fn coords(x: &Real, y: &Real, kind: &str) -> Value {
    json!({
        "kind": kind,
        "x": x.to_string(),
        "y": y.to_string(),
        "approx": {"x": x.to_decimal(APPROX_DIGITS), "y": y.to_decimal(APPROX_DIGITS)},
    })
}

pub fn point_json(p: &Point) -> Value {
    coords(&p.x, &p.y, "finite")
}

pub fn rim_json(r: &Rimpoint) -> Value {
    coords(&r.x, &r.y, "rim")
}

pub fn any_point_json(p: &AnyPoint) -> Value {
    match p {
        AnyPoint::Finite(p) => point_json(p),
        AnyPoint::Rim(r) => rim_json(r),
    }
}

pub fn line_json(l: &Line) -> Value {
    let [e, f] = l.ends();
    json!({"ends": [rim_json(e), rim_json(f)]})
}

pub fn motion_json(g: &Motion) -> Value {
    Value::Array(
        g.word()
            .iter()
            .map(|gen| match gen {
                Generator::HalfTurn(p) => json!({"kind": "halfturn", "p": point_json(p)}),
                Generator::Reflection(l) => json!({"kind": "reflection", "line": line_json(l)}),
            })
            .collect(),
    )
}

pub fn object_json(o: &Object) -> Value {
    match o {
        Object::Point(p) => any_point_json(p),
        Object::Line(l) => line_json(l),
        Object::Motion(g) => motion_json(g),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field \"{key}\"")))
}

fn real_field(v: &Value, key: &str) -> Result<Real> {
    match field(v, key)? {
        Value::String(s) => Real::parse(s),
        Value::Number(n) => Real::parse(&n.to_string()),
        _ => Err(Error::Parse(format!("field \"{key}\" must be an expression string"))),
    }
}

pub fn parse_any_point(v: &Value) -> Result<AnyPoint> {
    let x = real_field(v, "x")?;
    let y = real_field(v, "y")?;
    match v.get("kind").and_then(Value::as_str).unwrap_or("finite") {
        "finite" => Ok(AnyPoint::Finite(Point::new(x, y)?)),
        "rim" => Ok(AnyPoint::Rim(Rimpoint::new(x, y)?)),
        other => Err(Error::Parse(format!("unknown point kind \"{other}\""))),
    }
}

pub fn parse_point(v: &Value) -> Result<Point> {
    match parse_any_point(v)? {
        AnyPoint::Finite(p) => Ok(p),
        AnyPoint::Rim(_) => Err(Error::Parse("expected a finite point".into())),
    }
}

pub fn parse_rim(v: &Value) -> Result<Rimpoint> {
    match parse_any_point(v)? {
        AnyPoint::Rim(r) => Ok(r),
        AnyPoint::Finite(_) => Err(Error::Parse("expected a rimpoint".into())),
    }
}

pub fn parse_line(v: &Value) -> Result<Line> {
    let ends = field(v, "ends")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse("\"ends\" must hold two rimpoints".into()))?;
    Line::through_rims(&parse_rim(&ends[0])?, &parse_rim(&ends[1])?)
}

pub fn parse_motion(v: &Value) -> Result<Motion> {
    let items = v.as_array().ok_or_else(|| Error::Parse("a motion is a list of generators".into()))?;
    let word = items
        .iter()
        .map(|g| match g.get("kind").and_then(Value::as_str) {
            Some("halfturn") => Ok(Generator::HalfTurn(parse_point(field(g, "p")?)?)),
            Some("reflection") => Ok(Generator::Reflection(parse_line(field(g, "line")?)?)),
            _ => Err(Error::Parse("generator kind must be halfturn or reflection".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Motion::from_word(word))
}

fn section<'a>(v: &'a Value, key: &str) -> Result<Option<&'a Map<String, Value>>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(_) => Err(Error::Parse(format!("\"{key}\" must be an object"))),
    }
}

impl Scene {
    pub fn new() -> Scene {
        Scene::default()
    }

    pub fn from_json(v: &Value) -> Result<Scene> {
        let mut s = Scene::new();
        for (k, p) in section(v, "points")?.into_iter().flatten() {
            s.points.insert(k.clone(), parse_any_point(p)?);
        }
        for (k, l) in section(v, "lines")?.into_iter().flatten() {
            s.lines.insert(k.clone(), parse_line(l)?);
        }
        for (k, g) in section(v, "motions")?.into_iter().flatten() {
            s.motions.insert(k.clone(), parse_motion(g)?);
        }
        Ok(s)
    }

    pub fn parse(text: &str) -> Result<Scene> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Scene::from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let points: Map<String, Value> =
            self.points.iter().map(|(k, p)| (k.clone(), any_point_json(p))).collect();
        let lines: Map<String, Value> = self.lines.iter().map(|(k, l)| (k.clone(), line_json(l))).collect();
        let motions: Map<String, Value> =
            self.motions.iter().map(|(k, g)| (k.clone(), motion_json(g))).collect();
        json!({"points": points, "lines": lines, "motions": motions})
    }

    pub fn insert(&mut self, name: &str, o: Object) {
        match o {
            Object::Point(p) => {
                self.points.insert(name.to_string(), p);
            }
            Object::Line(l) => {
                self.lines.insert(name.to_string(), l);
            }
            Object::Motion(g) => {
                self.motions.insert(name.to_string(), g);
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<Object> {
        if let Some(p) = self.points.get(name) {
            return Some(Object::Point(p.clone()));
        }
        if let Some(l) = self.lines.get(name) {
            return Some(Object::Line(l.clone()));
        }
        self.motions.get(name).map(|g| Object::Motion(g.clone()))
    }

    pub fn finite(&self, name: &str) -> Result<Point> {
        match self.points.get(name) {
            Some(AnyPoint::Finite(p)) => Ok(p.clone()),
            Some(_) => Err(Error::Parse(format!("\"{name}\" is not a finite point"))),
            None => Err(Error::Parse(format!("no point named \"{name}\""))),
        }
    }

    pub fn rim(&self, name: &str) -> Result<Rimpoint> {
        match self.points.get(name) {
            Some(AnyPoint::Rim(r)) => Ok(r.clone()),
            Some(_) => Err(Error::Parse(format!("\"{name}\" is not a rimpoint"))),
            None => Err(Error::Parse(format!("no point named \"{name}\""))),
        }
    }

    pub fn line(&self, name: &str) -> Result<Line> {
        self.lines.get(name).cloned().ok_or_else(|| Error::Parse(format!("no line named \"{name}\"")))
    }

    pub fn motion(&self, name: &str) -> Result<Motion> {
        self.motions.get(name).cloned().ok_or_else(|| Error::Parse(format!("no motion named \"{name}\"")))
    }
}
