//! SVG rendering of a scene in the Klein disk.

use std::fmt::Write;

use klein_core::scene::Scene;
use klein_core::{AnyPoint, Real};

const DIGITS: usize = 32;

struct Frame {
    center: Real,
    radius: Real,
}

impl Frame {
    fn new(size: u32) -> Frame {
        let size = i64::from(size);
        Frame { center: Real::frac(size, 2), radius: Real::frac(15 * size, 32) }
    }

    fn x(&self, x: &Real) -> String {
        (&self.center + &(&self.radius * x)).to_decimal(DIGITS)
    }

    fn y(&self, y: &Real) -> String {
        (&self.center - &(&self.radius * y)).to_decimal(DIGITS)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn render(scene: &Scene, size: u32) -> String {
    let f = Frame::new(size);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, "<!-- klein {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        s,
        r#"  <circle cx="{}" cy="{}" r="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        f.center.to_decimal(DIGITS),
        f.center.to_decimal(DIGITS),
        f.radius.to_decimal(DIGITS)
    );
    for (name, l) in &scene.lines {
        let [a, b] = l.ends();
        let _ = writeln!(
            s,
            r#"  <line id="{}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="steelblue" stroke-width="1.5"/>"#,
            escape(name),
            f.x(&a.x),
            f.y(&a.y),
            f.x(&b.x),
            f.y(&b.y)
        );
    }
    for (name, p) in &scene.points {
        let (x, y, fill) = match p {
            AnyPoint::Finite(p) => (f.x(&p.x), f.y(&p.y), "black"),
            AnyPoint::Rim(r) => (f.x(&r.x), f.y(&r.y), "crimson"),
        };
        let _ = writeln!(
            s,
            r#"  <rect id="{0}" x="{1}" y="{2}" width="6" height="6" transform="translate(-3 -3)" fill="{fill}"/>"#,
            escape(name),
            x,
            y
        );
        let _ = writeln!(
            s,
            r#"  <text x="{x}" y="{y}" dx="5" dy="-5" font-size="12" font-family="sans-serif">{}</text>"#,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}
