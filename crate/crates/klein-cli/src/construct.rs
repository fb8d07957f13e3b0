//! Named constructions applied to scene objects.

use anyhow::{anyhow, bail, Result};
use klein_core::model::{bowtie, AnyPoint};
use klein_core::scene::{Object, Scene};
use klein_core::transforms::{
    a11_foot, axial, bisector, collinear_third, common_perpendicular, glide_normalize, midpoint,
    perp_at_point, perp_through_point, EndPairing,
};
use klein_core::Motion;

pub const OPS: &[(&str, &str)] = &[
    ("midpoint", "P Q"),
    ("perp_at_point", "l P"),
    ("perp_through_point", "l P"),
    ("common_perpendicular", "l m"),
    ("bisector", "l m"),
    ("bowtie", "l m"),
    ("reflection-apply", "l X"),
    ("axial-apply", "P Q X"),
    ("glide_normalize", "A E d"),
    ("collinear_third", "P Q R"),
    ("a11_foot", "l X"),
];

fn apply(g: &Motion, o: Object) -> Result<Object> {
    Ok(match o {
        Object::Point(AnyPoint::Finite(p)) => Object::Point(AnyPoint::Finite(g.apply_point(&p)?)),
        Object::Point(AnyPoint::Rim(r)) => Object::Point(AnyPoint::Rim(g.apply(&r))),
        Object::Line(l) => Object::Line(g.apply_line(&l)),
        Object::Motion(h) => Object::Motion(g.inverse().then(&h).then(g)),
    })
}

/// Run `op` on the named scene objects; the result is returned as a scene of
/// one or two objects.
pub fn construct(op: &str, scene: &Scene, args: &[String]) -> Result<Scene> {
    let arity = OPS
        .iter()
        .find(|(name, _)| *name == op)
        .map(|(_, sig)| sig.split(' ').count())
        .ok_or_else(|| anyhow!("unknown operation \"{op}\""))?;
    if args.len() != arity {
        bail!("{op} takes {arity} arguments, got {}", args.len());
    }
    let point = |i: usize| scene.finite(&args[i]);
    let line = |i: usize| scene.line(&args[i]);
    let object = |i: usize| scene.get(&args[i]).ok_or_else(|| anyhow!("no object named \"{}\"", args[i]));

    let mut out = Scene::new();
    let result = match op {
        "midpoint" => Object::Point(AnyPoint::Finite(midpoint(&point(0)?, &point(1)?)?)),
        "perp_at_point" => Object::Line(perp_at_point(&line(0)?, &point(1)?)?),
        "perp_through_point" => Object::Line(perp_through_point(&line(0)?, &point(1)?)?),
        "common_perpendicular" => Object::Line(common_perpendicular(&line(0)?, &line(1)?)?),
        "bisector" => {
            let (l, m) = (line(0)?, line(1)?);
            let [x, y] = l.ends().clone();
            let [x_to, y_to] = m.ends().clone();
            Object::Line(bisector(&l, &m, &EndPairing { x, x_to, y, y_to })?)
        }
        "bowtie" => Object::Point(AnyPoint::Finite(bowtie(&line(0)?, &line(1)?)?)),
        "reflection-apply" => apply(&Motion::reflection(&line(0)?), object(1)?)?,
        "axial-apply" => apply(&axial(&point(0)?, &point(1)?)?, object(2)?)?,
        "glide_normalize" => {
            let (x, y) = glide_normalize(&point(0)?, &point(1)?, &line(2)?)?;
            out.insert("point", Object::Point(AnyPoint::Finite(x)));
            out.insert("line", Object::Line(y));
            return Ok(out);
        }
        "collinear_third" => {
            Object::Point(AnyPoint::Finite(collinear_third(&point(0)?, &point(1)?, &point(2)?)?))
        }
        "a11_foot" => Object::Point(AnyPoint::Finite(a11_foot(&line(0)?, &scene.rim(&args[1])?)?)),
        _ => unreachable!("checked against OPS"),
    };
    out.insert("result", result);
    Ok(out)
}
