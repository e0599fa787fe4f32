//! Standalone SVG figures. The y axis points up in world coordinates and
//! is flipped on output; numbers are printed with fixed precision so the
//! same scenario always renders to the same bytes.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use carousel_core::geom::tangent_points_from_point;
use carousel_core::hull::{hull_boundary, BoundaryPiece};
use carousel_core::sphere3::{axis_plane, example_4_1, example_4_2, Plane, Point3, Sphere3};
use carousel_core::{witness_search, Circle2, GeneratorSet, Point2, SearchConfig, Tolerance};
use carousel_core::carousel::corollary_witness_search;

use crate::check::{hull_generators, sweep_check};
use crate::scenario::{Kind, Scenario};
use crate::CliError;

const WIDTH: f64 = 640.0;
const MARGIN: f64 = 24.0;

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// World-to-screen mapping plus an element buffer.
struct Canvas {
    lo: Point2,
    hi: Point2,
    scale: f64,
    body: String,
}

impl Canvas {
    fn new(lo: Point2, hi: Point2) -> Self {
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Self {
            lo,
            hi,
            scale: (WIDTH - 2.0 * MARGIN) / span,
            body: String::new(),
        }
    }

    fn fit(items: impl IntoIterator<Item = Circle2>) -> Self {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in items {
            lo.x = lo.x.min(c.center.x - c.radius);
            lo.y = lo.y.min(c.center.y - c.radius);
            hi.x = hi.x.max(c.center.x + c.radius);
            hi.y = hi.y.max(c.center.y + c.radius);
        }
        Self::new(lo, hi)
    }

    fn size(&self) -> (f64, f64) {
        (
            (self.hi.x - self.lo.x) * self.scale + 2.0 * MARGIN,
            (self.hi.y - self.lo.y) * self.scale + 2.0 * MARGIN,
        )
    }

    fn xy(&self, p: Point2) -> String {
        let x = (p.x - self.lo.x) * self.scale + MARGIN;
        let y = (self.hi.y - p.y) * self.scale + MARGIN;
        format!("{},{}", num(x), num(y))
    }

    fn len(&self, v: f64) -> String {
        num(v * self.scale)
    }

    /// Counterclockwise (in world coordinates) arc of `c` from angle `a` to `b > a`.
    fn arc_to(&self, c: &Circle2, a: f64, b: f64) -> String {
        let r = self.len(c.radius);
        let sweep = b - a;
        if sweep >= TAU - 1e-12 {
            let mid = c.at(a + PI);
            return format!(
                " A {r} {r} 0 0 0 {} A {r} {r} 0 0 0 {}",
                self.xy(mid),
                self.xy(c.at(a + TAU))
            );
        }
        let large = (sweep > PI) as u8;
        format!(" A {r} {r} 0 {large} 0 {}", self.xy(c.at(b)))
    }

    fn path(&mut self, d: &str, class: &str) {
        let _ = writeln!(self.body, r#"<path class="{class}" d="{d}"/>"#);
    }

    fn circle(&mut self, c: &Circle2, class: &str) {
        if c.radius == 0.0 {
            self.dot(c.center, class);
            return;
        }
        let (cx, cy) = self.xy(c.center).split_once(',').map(|(a, b)| (a.to_string(), b.to_string())).unwrap();
        let _ = writeln!(
            self.body,
            r#"<circle class="{class}" cx="{cx}" cy="{cy}" r="{}"/>"#,
            self.len(c.radius)
        );
    }

    fn dot(&mut self, p: Point2, class: &str) {
        let (cx, cy) = self.xy(p).split_once(',').map(|(a, b)| (a.to_string(), b.to_string())).unwrap();
        let _ = writeln!(self.body, r#"<circle class="{class} dot" cx="{cx}" cy="{cy}" r="3.000"/>"#);
    }

    fn polygon(&mut self, pts: &[Point2], class: &str) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            d.push_str(if i == 0 { "M " } else { " L " });
            d.push_str(&self.xy(*p));
        }
        d.push_str(" Z");
        self.path(&d, class);
    }

    fn label(&mut self, p: Point2, text: &str) {
        let (x, y) = self.xy(p).split_once(',').map(|(a, b)| (a.to_string(), b.to_string())).unwrap();
        let text = text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text x="{x}" y="{y}">{text}</text>"#);
    }

    fn caption(&mut self, text: &str) {
        let text = text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;");
        let _ = writeln!(self.body, r#"<text class="caption" x="{}" y="{}">{text}</text>"#, num(MARGIN), num(MARGIN * 0.7));
    }

    fn finish(self) -> String {
        let (w, h) = self.size();
        let (w, h) = (num(w), num(h));
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        );
        out.push_str(STYLE);
        let _ = writeln!(out, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(out, r#"<clipPath id="view"><rect x="0" y="0" width="{w}" height="{h}"/></clipPath>"#);
        let _ = writeln!(out, r#"<g clip-path="url(#view)">"#);
        out.push_str(&self.body);
        out.push_str("</g>\n</svg>\n");
        out
    }
}

const STYLE: &str = r#"<style>
path, circle { fill: none; stroke: black; stroke-width: 1; }
.hull { fill: #9fd49f; fill-opacity: 0.45; stroke: #2e7d32; stroke-width: 1.5; }
.region { fill: #bbbbbb; fill-opacity: 0.6; stroke: black; }
.triangle { stroke: #777777; stroke-dasharray: 4 3; }
.u0 { stroke: #1565c0; stroke-width: 1.5; }
.u1 { stroke: #c62828; stroke-width: 1.5; }
.gen { stroke: #555555; }
.guide { stroke: #777777; stroke-dasharray: 2 3; }
.dot { fill: black; stroke: none; }
.marker { stroke: #ff6f00; stroke-width: 2; }
.marker.dot { fill: #ff6f00; }
text { font: 12px sans-serif; }
.caption { font-weight: bold; }
</style>
"#;

/// Boundary of the hull of `gens` as path data.
fn hull_path(canvas: &Canvas, gens: &GeneratorSet, tol: &Tolerance) -> Result<String, CliError> {
    let b = hull_boundary(gens, tol).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut d = format!("M {}", canvas.xy(b.pieces[0].start_point()));
    for p in &b.pieces {
        match *p {
            BoundaryPiece::Segment { end, .. } => {
                d.push_str(" L ");
                d.push_str(&canvas.xy(end));
            }
            BoundaryPiece::Arc {
                circle, start, end, ..
            } => d.push_str(&canvas.arc_to(&circle, start, end)),
        }
    }
    d.push_str(" Z");
    Ok(d)
}

fn draw_hull(canvas: &mut Canvas, gens: &GeneratorSet, tol: &Tolerance) -> Result<(), CliError> {
    let d = hull_path(canvas, gens, tol)?;
    canvas.path(&d, "hull");
    Ok(())
}

/// Renders a scenario to SVG text.
pub fn render_svg(sc: &Scenario) -> Result<String, CliError> {
    let tol = sc.tolerance();
    let invalid = |e: &dyn std::fmt::Display| CliError::Invalid(e.to_string());
    match sc.kind {
        Kind::Theorem2d | Kind::Points2d | Kind::Corollary2d => {
            let sites = sc.site_circles();
            let circles = sc.circle_list();
            let mut canvas = Canvas::fit(sites.iter().chain(&circles).copied());
            let ws = if sc.kind == Kind::Corollary2d {
                corollary_witness_search(&sc.corollary(), &tol).map_err(|e| invalid(&e))?
            } else {
                witness_search(&sc.instance(), &tol).map_err(|e| invalid(&e))?
            };
            if let Some(w) = ws.first() {
                let gens = if sc.kind == Kind::Corollary2d {
                    let mut g = vec![circles[w.k]];
                    g.extend((0..3).filter(|&i| i != w.j).map(|i| sites[i]));
                    GeneratorSet::new(g).map_err(|e| invalid(&e))?
                } else {
                    sc.instance().pair_generators(w.j, w.k)
                };
                draw_hull(&mut canvas, &gens, &tol)?;
                canvas.caption(&format!("witness j={} k={} slack={}", w.j, w.k, num(w.slack)));
            } else {
                canvas.caption("no witness");
            }
            let pts: Vec<Point2> = sites.iter().map(|c| c.center).collect();
            canvas.polygon(&pts, "triangle");
            for (i, s) in sites.iter().enumerate() {
                canvas.circle(s, "gen");
                canvas.label(s.center, &format!("A{i}"));
            }
            canvas.circle(&circles[0], "u0");
            canvas.circle(&circles[1], "u1");
            canvas.label(circles[0].center, "U0");
            canvas.label(circles[1].center, "U1");
            Ok(canvas.finish())
        }
        Kind::Sweep => {
            let inst = sc.instance();
            let p = sc.params();
            let (j, k) = (p.j.unwrap_or(0), p.k.unwrap_or(0));
            let s = sweep_check(&inst, j, k, p.tol.unwrap_or(1e-6), &tol)?;
            let at = inst.scaled(s.report.xi_star);
            let mut canvas = Canvas::fit(
                inst.sites
                    .iter()
                    .map(|&q| Circle2::point(q))
                    .chain(inst.circles),
            );
            draw_hull(&mut canvas, &at.pair_generators(j, k), &tol)?;
            canvas.polygon(&inst.sites, "triangle");
            for (i, q) in inst.sites.iter().enumerate() {
                canvas.dot(*q, "gen");
                canvas.label(*q, &format!("A{i}"));
            }
            canvas.circle(&inst.circles[k], if k == 0 { "u0 guide" } else { "u1 guide" });
            canvas.circle(&inst.circles[1 - k], if k == 0 { "u1 guide" } else { "u0 guide" });
            canvas.circle(&at.circles[0], "u0");
            canvas.circle(&at.circles[1], "u1");
            let target = at.circles[1 - k];
            let touch = target.at(s.report.direction);
            canvas.dot(touch, "marker");
            canvas.label(touch, &format!("{:?}", s.report.tangency));
            canvas.caption(&format!("j={j} k={k} xi*={}", num(s.report.xi_star)));
            Ok(canvas.finish())
        }
        Kind::Hull2d => {
            let gens = hull_generators(sc)?;
            let mut canvas = Canvas::fit(gens.iter().copied());
            draw_hull(&mut canvas, &gens, &tol)?;
            for g in gens.iter() {
                canvas.circle(g, "gen");
            }
            Ok(canvas.finish())
        }
        Kind::Reangle => {
            let f = sc.site_points()[0];
            let c = sc.circle_list()[0];
            let (t1, t2) = tangent_points_from_point(f, &c, &tol).map_err(|e| invalid(&e))?;
            let d = f.dist(c.center);
            // view: focus, disk, and as much again beyond the disk
            let far_pt = f + (c.center - f) * 2.0;
            let mut canvas = Canvas::fit([
                Circle2::new(f, 0.0),
                c,
                Circle2::new(far_pt, c.radius * 2.0),
            ]);
            let reach = 10.0 * (d + c.radius);
            let ray = |t: Point2| t + (t - f) * (reach / t.dist(f));
            let a1 = (t1 - c.center).angle();
            let mut a2 = (t2 - c.center).angle();
            while a2 < a1 {
                a2 += TAU;
            }
            let dpath = format!(
                "M {} L {}{} L {} Z",
                canvas.xy(ray(t1)),
                canvas.xy(t1),
                canvas.arc_to(&c, a1, a2),
                canvas.xy(ray(t2))
            );
            canvas.path(&dpath, "region");
            canvas.circle(&c, "gen");
            canvas.dot(f, "gen");
            canvas.label(f, "F");
            canvas.dot(t1, "marker");
            canvas.dot(t2, "marker");
            Ok(canvas.finish())
        }
        Kind::Sphere3Ex41 | Kind::Sphere3Ex42 => render_projection(sc, &tol),
    }
}

/// Cross-section in the plane through `A2`, `A3` and `B`.
fn render_projection(sc: &Scenario, tol: &Tolerance) -> Result<String, CliError> {
    let invalid = |e: &dyn std::fmt::Display| CliError::Invalid(e.to_string());
    let cfg = SearchConfig {
        icosphere_level: 2,
        seeds: 4,
    };
    let (vertices, spheres, guide): ([Point3; 4], Vec<(i64, Sphere3)>, Option<(Point3, f64)>) = match sc.kind {
        Kind::Sphere3Ex41 => {
            let (side, r) = sc.ex41();
            let rep = example_4_1(side, r, &cfg, tol).map_err(|e| invalid(&e))?;
            let sp = vec![
                (-1, Sphere3::new(rep.axis.p_minus1, r)),
                (0, Sphere3::new(rep.axis.p0, r)),
            ];
            (rep.vertices, sp, None)
        }
        _ => {
            let rep = example_4_2(&sc.ex42(), &cfg, tol).map_err(|e| invalid(&e))?;
            (rep.vertices, rep.spheres, Some((rep.guide_center, rep.guide_radius)))
        }
    };
    let plane: Plane = axis_plane(&vertices).map_err(|e| invalid(&e))?;
    let tri = [plane.project(vertices[2]), plane.project(vertices[3]), plane.project(vertices[0])];
    let circles: Vec<(i64, Circle2)> = spheres
        .iter()
        .map(|(l, s)| (*l, Circle2::new(plane.project(s.center), s.radius)))
        .collect();
    let mut canvas = Canvas::fit(tri.iter().map(|&p| Circle2::point(p)));
    canvas.polygon(&tri, "triangle");
    for (name, p) in ["A2", "A3", "B"].iter().zip(tri) {
        canvas.dot(p, "gen");
        canvas.label(p, name);
    }
    if let Some((o, r)) = guide {
        let o = plane.project(o);
        let angle = |c: &Circle2| (c.center - o).angle();
        let (lo, hi) = circles.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), (_, c)| {
            (a.min(angle(c)), b.max(angle(c)))
        });
        let pad = 0.15 * (hi - lo);
        let g = Circle2::new(o, r);
        let d = format!("M {}{}", canvas.xy(g.at(lo - pad)), canvas.arc_to(&g, lo - pad, hi + pad));
        canvas.path(&d, "guide");
    }
    for (l, c) in &circles {
        canvas.circle(c, "gen");
        canvas.label(c.center, &format!("S{l}"));
    }
    canvas.caption(&format!("{} cross-section", sc.kind));
    Ok(canvas.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_fixed_precision() {
        assert_eq!(num(1.0), "1.000");
        assert_eq!(num(-0.0001), "0.000");
        assert_eq!(num(-2.5), "-2.500");
    }

    #[test]
    fn full_circle_arc_is_split() {
        let canvas = Canvas::new(Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
        let a = canvas.arc_to(&Circle2::new(Point2::ORIGIN, 1.0), 0.0, TAU);
        assert_eq!(a.matches(" A ").count(), 2);
    }
}
