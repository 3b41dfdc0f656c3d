//! SVG 1.1 rendering of the capped domain: four boundary paths, one path per
//! clipped geodesic arc, and a label at each face's sample point. Only here do
//! exact coordinates become decimals.

use std::fmt::Write;

use mlp_core::FaceComplex;
use mlp_core::Rational;
use num_traits::ToPrimitive;

const SCALE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// `v` rounded to `digits` significant digits, printed without trailing noise.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .expect("formatted float parses");
    format!("{rounded}")
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("finite rational")
}

struct Frame {
    top: f64,
    digits: usize,
}

impl Frame {
    fn pt(&self, x: f64, y: f64) -> String {
        let px = MARGIN + (x + 0.5) * SCALE;
        let py = MARGIN + (self.top - y) * SCALE;
        format!("{} {}", fmt_sig(px, self.digits), fmt_sig(py, self.digits))
    }

    fn len(&self, r: f64) -> String {
        fmt_sig(r * SCALE, self.digits)
    }
}

pub fn render(fc: &FaceComplex, digits: usize) -> String {
    let cap = to_f64(&fc.cap);
    let floor = 0.75f64.sqrt() - 0.05;
    let frame = Frame { top: cap, digits };
    let width = 2.0 * MARGIN + SCALE;
    let height = 2.0 * MARGIN + (cap - floor) * SCALE;
    let corner = 0.75f64.sqrt();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt_sig(width, digits),
        h = fmt_sig(height, digits)
    );
    let _ = writeln!(out, "  <title>Exceptional geodesics of discriminant {} in the standard domain</title>", fc.disc);

    let _ = writeln!(out, r#"  <g id="boundary" fill="none" stroke="black" stroke-width="1.5">"#);
    let boundary = [
        ("left-wall", format!("M {} L {}", frame.pt(-0.5, corner), frame.pt(-0.5, cap))),
        ("right-wall", format!("M {} L {}", frame.pt(0.5, corner), frame.pt(0.5, cap))),
        (
            "bottom-arc",
            format!("M {} A {r} {r} 0 0 1 {}", frame.pt(-0.5, corner), frame.pt(0.5, corner), r = frame.len(1.0)),
        ),
        ("cap", format!("M {} L {}", frame.pt(-0.5, cap), frame.pt(0.5, cap))),
    ];
    for (id, d) in boundary {
        let _ = writeln!(out, r#"    <path id="{id}" d="{d}"/>"#);
    }
    let _ = writeln!(out, "  </g>");

    let _ = writeln!(out, r#"  <g id="arcs" fill="none" stroke="firebrick" stroke-width="1">"#);
    for arc in &fc.arcs {
        let q = &arc.form;
        let d = if arc.is_vertical() {
            let x = to_f64(&arc.x_lo);
            format!("M {} L {}", frame.pt(x, (1.0 - x * x).sqrt()), frame.pt(x, cap))
        } else {
            let y = |x: &Rational| to_f64(&arc.height_sq_at(x)).max(0.0).sqrt();
            let radius = (to_f64(&Rational::new(q.discriminant(), &q.a * &q.a * 4))).sqrt();
            format!(
                "M {} A {r} {r} 0 0 1 {}",
                frame.pt(to_f64(&arc.x_lo), y(&arc.x_lo)),
                frame.pt(to_f64(&arc.x_hi), y(&arc.x_hi)),
                r = frame.len(radius)
            )
        };
        let _ = writeln!(out, r#"    <path data-form="[{},{},{}]" d="{d}"/>"#, q.a, q.b, q.c);
    }
    let _ = writeln!(out, "  </g>");

    let _ = writeln!(out, r#"  <g id="faces" font-family="sans-serif" font-size="12" text-anchor="middle">"#);
    for face in &fc.faces {
        let (x, y) = face.sample.to_f64();
        let px = MARGIN + (x + 0.5) * SCALE;
        let py = MARGIN + (cap - y) * SCALE;
        let _ = writeln!(
            out,
            r#"    <text x="{}" y="{}">{}</text>"#,
            fmt_sig(px, digits),
            fmt_sig(py, digits),
            face.id
        );
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    out
}
