//! Deterministic SVG rendering of two-dimensional arrangements.
//!
//! All geometry is computed in exact rational arithmetic and only converted
//! to decimal strings (three fixed places, round half up) when written, so
//! the output is byte-stable for a fixed input. Affine arrangements are
//! drawn in a viewport padded around the bounding box of their vertices;
//! toric arrangements are drawn on the fundamental square `[0,1]²`, each
//! subtorus appearing as the finitely many segments of its lifts that cross
//! the square. Top cells are labeled `c0, c1, …` at their interior points,
//! zero-dimensional flats are marked with dots, and an optional flag layer
//! adds the flat labels themselves.

use arrangeval::affine::AffineGeometry;
use arrangeval::geometry::{ambient_flat, CellId, FlatId, Geometry};
use arrangeval::rational::{floor_int, q, qi};
use arrangeval::toric::ToricGeometry;
use arrangeval::Q;
use num_traits::{One, Signed, Zero};

const CANVAS: i64 = 600;
const MARGIN: i64 = 40;

/// Fixed-point decimal with three places, exact rounding (half away from
/// zero), purely in integer arithmetic.
fn fmt_coord(x: &Q) -> String {
    let scaled = x * qi(1000);
    let half = q(1, 2);
    let rounded = if scaled.is_negative() {
        -floor_int(&(-scaled + half))
    } else {
        floor_int(&(scaled + half))
    };
    let sign = if rounded.is_negative() { "-" } else { "" };
    let abs = rounded.abs();
    let int = &abs / 1000;
    let frac = &abs % 1000;
    format!("{sign}{int}.{frac:03}")
}

/// A viewport mapping world rationals to SVG coordinates (y flipped).
struct Viewport {
    minx: Q,
    maxy: Q,
    unit: Q,
}

impl Viewport {
    fn new(minx: Q, maxx: Q, miny: Q, maxy: Q) -> Viewport {
        let w = &maxx - &minx;
        let h = &maxy - &miny;
        let span = if w >= h { w } else { h };
        let span = if span.is_zero() { Q::one() } else { span };
        Viewport {
            minx,
            maxy,
            unit: qi(CANVAS) / span,
        }
    }

    fn x(&self, wx: &Q) -> String {
        fmt_coord(&((wx - &self.minx) * &self.unit + qi(MARGIN)))
    }

    fn y(&self, wy: &Q) -> String {
        fmt_coord(&((&self.maxy - wy) * &self.unit + qi(MARGIN)))
    }
}

/// Intersect the line `a·x = c` with a closed rectangle; the segment's
/// endpoints in lexicographic order, when the intersection is a segment.
fn clip_line(
    a: &[Q; 2],
    c: &Q,
    x0: &Q,
    x1: &Q,
    y0: &Q,
    y1: &Q,
) -> Option<(Vec<Q>, Vec<Q>)> {
    let mut pts: Vec<Vec<Q>> = Vec::new();
    let inside = |p: &[Q]| -> bool {
        &p[0] >= x0 && &p[0] <= x1 && &p[1] >= y0 && &p[1] <= y1
    };
    // Crossings with the vertical edges x = x0, x1.
    if !a[1].is_zero() {
        for xe in [x0, x1] {
            let y = (c - &a[0] * xe) / &a[1];
            let p = vec![xe.clone(), y];
            if inside(&p) {
                pts.push(p);
            }
        }
    }
    // Crossings with the horizontal edges y = y0, y1.
    if !a[0].is_zero() {
        for ye in [y0, y1] {
            let x = (c - &a[1] * ye) / &a[0];
            let p = vec![x, ye.clone()];
            if inside(&p) {
                pts.push(p);
            }
        }
    }
    pts.sort();
    pts.dedup();
    if pts.len() < 2 {
        return None;
    }
    let last = pts.pop().expect("len checked");
    let first = pts.swap_remove(0);
    Some((first, last))
}

fn svg_header(out: &mut String) {
    let side = CANVAS + 2 * MARGIN;
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" \
         viewBox=\"0 0 {side} {side}\">\n",
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
}

fn svg_line(out: &mut String, vp: &Viewport, p: &[Q], r: &[Q], class: &str) {
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
        vp.x(&p[0]),
        vp.y(&p[1]),
        vp.x(&r[0]),
        vp.y(&r[1]),
        class,
    ));
}

fn svg_dot(out: &mut String, vp: &Viewport, p: &[Q]) {
    out.push_str(&format!(
        "<circle cx=\"{}\" cy=\"{}\" r=\"3.5\" fill=\"black\"/>\n",
        vp.x(&p[0]),
        vp.y(&p[1]),
    ));
}

fn svg_text(out: &mut String, vp: &Viewport, p: &[Q], text: &str, class: &str) {
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{}\">{}</text>\n",
        vp.x(&p[0]),
        vp.y(&p[1]),
        class,
        xml_escape(text),
    ));
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn legend(out: &mut String, hyperplanes: usize, cells: usize) {
    out.push_str(&format!(
        "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"13\" fill=\"black\">\
         {hyperplanes} hyperplanes, {cells} cells</text>\n",
    ));
}

fn finish<G: Geometry + HyperplaneCount>(out: &mut String, g: &G, vp: &Viewport, flags: bool) {
    let ambient = ambient_flat(g);
    for f in 0..g.flat_count() {
        let f = FlatId(f);
        if g.codim(f) == g.dim() {
            svg_dot(out, vp, g.base_point(f));
        }
        if flags && g.codim(f) > 0 {
            svg_text(out, vp, g.base_point(f), &g.flat_label(f), "darkred");
        }
    }
    for c in 0..g.cell_count(ambient) {
        let p = g.interior_point(ambient, CellId(c));
        svg_text(out, vp, p, &format!("c{c}"), "navy");
    }
    legend(out, g.hyperplane_count_hint(), g.cell_count(ambient));
    out.push_str("</svg>\n");
}

/// A small extension so the shared footer can report the hyperplane count.
trait HyperplaneCount {
    fn hyperplane_count_hint(&self) -> usize;
}

impl HyperplaneCount for ToricGeometry {
    fn hyperplane_count_hint(&self) -> usize {
        self.hyperplanes().len()
    }
}

impl HyperplaneCount for AffineGeometry {
    fn hyperplane_count_hint(&self) -> usize {
        self.hyperplanes().len()
    }
}

/// Render a two-dimensional toric arrangement on the fundamental square.
pub fn render_toric(g: &ToricGeometry, flags: bool) -> String {
    let zero = Q::zero();
    let one = Q::one();
    let vp = Viewport::new(zero.clone(), one.clone(), zero.clone(), one.clone());
    let mut out = String::new();
    svg_header(&mut out);
    // Fundamental square border.
    let corners = [
        vec![qi(0), qi(0)],
        vec![qi(1), qi(0)],
        vec![qi(1), qi(1)],
        vec![qi(0), qi(1)],
    ];
    for i in 0..4 {
        svg_line(&mut out, &vp, &corners[i], &corners[(i + 1) % 4], "gray");
    }
    for h in g.hyperplanes() {
        let a = [
            Q::from_integer(h.normal[0].clone()),
            Q::from_integer(h.normal[1].clone()),
        ];
        // Lifts a·x = offset + k crossing the square: bound a·x over corners.
        let vals: Vec<Q> = corners.iter().map(|p| &a[0] * &p[0] + &a[1] * &p[1]).collect();
        let lo = vals.iter().min().expect("corners").clone();
        let hi = vals.iter().max().expect("corners").clone();
        let kmin = floor_int(&(lo - &h.offset));
        let kmax = floor_int(&(&hi - &h.offset));
        let mut k = kmin;
        while k <= kmax {
            let c = &h.offset + Q::from_integer(k.clone());
            if let Some((p, r)) = clip_line(&a, &c, &zero, &one, &zero, &one) {
                svg_line(&mut out, &vp, &p, &r, "black");
            }
            k += 1;
        }
    }
    finish(&mut out, g, &vp, flags);
    out
}

/// Render a two-dimensional affine arrangement around its vertices.
pub fn render_affine(g: &AffineGeometry, flags: bool) -> String {
    // Pad the bounding box of the 0-flats by one unit on each side.
    let vertices: Vec<&[Q]> = (0..g.flat_count())
        .map(FlatId)
        .filter(|&f| g.codim(f) == 2)
        .map(|f| g.base_point(f))
        .collect();
    let xs: Vec<&Q> = vertices.iter().map(|v| &v[0]).collect();
    let ys: Vec<&Q> = vertices.iter().map(|v| &v[1]).collect();
    let pad = qi(1);
    let minx = (*xs.iter().min().expect("arrangements have vertices")).clone() - &pad;
    let maxx = (*xs.iter().max().expect("arrangements have vertices")).clone() + &pad;
    let miny = (*ys.iter().min().expect("arrangements have vertices")).clone() - &pad;
    let maxy = (*ys.iter().max().expect("arrangements have vertices")).clone() + &pad;
    let vp = Viewport::new(minx.clone(), maxx.clone(), miny.clone(), maxy.clone());
    let mut out = String::new();
    svg_header(&mut out);
    for h in g.hyperplanes() {
        let a = [
            Q::from_integer(h.normal[0].clone()),
            Q::from_integer(h.normal[1].clone()),
        ];
        if let Some((p, r)) = clip_line(&a, &h.offset, &minx, &maxx, &miny, &maxy) {
            svg_line(&mut out, &vp, &p, &r, "black");
        }
    }
    finish(&mut out, g, &vp, flags);
    out
}
