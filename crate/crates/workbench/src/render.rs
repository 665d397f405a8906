//! Deterministic SVG drawings of almost-toric polygons.

use std::fmt::Write;

use atoric::exactmath::num::{rat, rat_int, to_decimal, Rat};
use atoric::lattice::{LatticeVector, PlanePoint};
use atoric::polygon::{GeoPolygon, PolygonError};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

const PLACES: u32 = 4;
const PIXEL_WIDTH: i64 = 640;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Viewport {
    #[serde(with = "atoric::exactmath::num::serde_rat")]
    pub x0: Rat,
    #[serde(with = "atoric::exactmath::num::serde_rat")]
    pub y0: Rat,
    #[serde(with = "atoric::exactmath::num::serde_rat")]
    pub x1: Rat,
    #[serde(with = "atoric::exactmath::num::serde_rat")]
    pub y1: Rat,
}

impl Viewport {
    pub fn new(x0: Rat, y0: Rat, x1: Rat, y1: Rat) -> Self {
        Viewport { x0, y0, x1, y1 }
    }

    pub fn is_empty(&self) -> bool {
        self.x0 >= self.x1 || self.y0 >= self.y1
    }

    /// Bounding box of the vertices and cut endpoints, padded by half its
    /// larger side (at least 1), or by the whole side when there are rays.
    pub fn fit(poly: &GeoPolygon) -> Self {
        let pts: Vec<&PlanePoint> = poly
            .vertices
            .iter()
            .chain(poly.cuts.iter().flat_map(|c| [&c.base, &c.terminus]))
            .collect();
        let first = pts.first().map(|p| (*p).clone()).unwrap_or_else(PlanePoint::origin);
        let (mut x0, mut y0, mut x1, mut y1) = (first.x.clone(), first.y.clone(), first.x.clone(), first.y.clone());
        for p in pts {
            x0 = x0.min(p.x.clone());
            y0 = y0.min(p.y.clone());
            x1 = x1.max(p.x.clone());
            y1 = y1.max(p.y.clone());
        }
        let side = (&x1 - &x0).max(&y1 - &y0).max(rat(1, 1));
        let pad = if poly.rays.is_empty() { side / rat(2, 1) } else { side };
        Viewport { x0: x0 - &pad, y0: y0 - &pad, x1: x1 + &pad, y1: y1 + pad }
    }
}

fn dec(r: &Rat) -> String {
    to_decimal(r, PLACES)
}

struct Frame<'a> {
    vp: &'a Viewport,
}

impl Frame<'_> {
    /// Plane y grows upwards, SVG y grows downwards.
    fn xy(&self, p: &PlanePoint) -> (String, String) {
        (dec(&(&p.x - &self.vp.x0)), dec(&(&self.vp.y1 - &p.y)))
    }
}

/// Parameter interval `[lo, hi]` of `p + t·v`, `t ≥ 0`, inside the convex
/// polygon with vertices `poly` (either orientation).
fn clip_ray_to_convex(p: &PlanePoint, v: &LatticeVector, poly: &[PlanePoint]) -> Option<(Rat, Rat)> {
    if poly.len() < 3 {
        return None;
    }
    let n = poly.len();
    let area: Rat = (0..n)
        .map(|i| {
            let (a, b) = (&poly[i], &poly[(i + 1) % n]);
            &a.x * &b.y - &b.x * &a.y
        })
        .sum();
    let orient = if area.is_negative() { -rat(1, 1) } else { rat(1, 1) };
    let (vx, vy) = (rat_int(&v.x), rat_int(&v.y));
    let mut lo = Rat::zero();
    let mut hi: Option<Rat> = None;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        let (ex, ey) = b.sub(a);
        let (dx, dy) = p.sub(a);
        let c0 = (&ex * &dy - &ey * &dx) * &orient;
        let cv = (&ex * &vy - &ey * &vx) * &orient;
        if cv.is_zero() {
            if c0.is_negative() {
                return None;
            }
        } else if cv.is_positive() {
            lo = lo.max(-c0 / cv);
        } else {
            let t = c0 / -cv;
            hi = Some(hi.map_or(t.clone(), |h: Rat| h.min(t)));
        }
    }
    let hi = hi?;
    (lo <= hi).then_some((lo, hi))
}

/// Renders `poly` inside `vp`. Element order is fixed: region, cuts,
/// extensions, termini.
pub fn render_svg(poly: &GeoPolygon, vp: &Viewport) -> Result<String, PolygonError> {
    if vp.is_empty() {
        return Err(PolygonError::EmptyViewport);
    }
    let region = poly.clip_to_box(&vp.x0, &vp.y0, &vp.x1, &vp.y1)?;
    let fr = Frame { vp };
    let w = &vp.x1 - &vp.x0;
    let h = &vp.y1 - &vp.y0;
    let unit = w.clone().max(h.clone()) / rat(200, 1);
    let stroke = dec(&unit);
    let mark = &unit * rat(3, 1);
    let bx = (&vp.x0, &vp.y0, &vp.x1, &vp.y1);

    let mut s = String::new();
    let height_px = rat(PIXEL_WIDTH, 1) * &h / &w;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PIXEL_WIDTH}" height="{}" viewBox="0 0 {} {}">"#,
        dec(&height_px),
        dec(&w),
        dec(&h)
    );
    if !region.is_empty() {
        let pts: Vec<String> = region
            .iter()
            .map(|p| {
                let (x, y) = fr.xy(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polygon class="region" points="{}" fill="#dbe5f4" stroke="#1f3b73" stroke-width="{stroke}"/>"##,
            pts.join(" ")
        );
    }
    for (i, c) in poly.cuts.iter().enumerate() {
        let (x1, y1) = fr.xy(&c.base);
        let (x2, y2) = fr.xy(&c.terminus);
        let _ = writeln!(
            s,
            r##"<line class="cut" data-cut="{i}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#b22222" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"##,
            dec(&(&unit * rat(4, 1))),
            dec(&(&unit * rat(2, 1)))
        );
    }
    for (i, c) in poly.cuts.iter().enumerate() {
        let seg = if region.len() >= 3 {
            clip_ray_to_convex(&c.terminus, &c.direction, &region)
                .map(|(lo, hi)| (c.terminus.add_vec(&c.direction, &lo), c.terminus.add_vec(&c.direction, &hi)))
        } else {
            GeoPolygon::clip_segment(&c.terminus, &c.direction, None, bx)
        };
        if let Some((a, b)) = seg {
            if a == b {
                continue;
            }
            let (x1, y1) = fr.xy(&a);
            let (x2, y2) = fr.xy(&b);
            let _ = writeln!(
                s,
                r##"<line class="extension" data-cut="{i}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#b22222" stroke-width="{}" stroke-dasharray="{} {}"/>"##,
                dec(&(&unit / rat(2, 1))),
                dec(&(&unit / rat(2, 1))),
                dec(&(&unit * rat(2, 1)))
            );
        }
    }
    for (i, c) in poly.cuts.iter().enumerate() {
        let t = &c.terminus;
        let corner = |dx: i64, dy: i64| PlanePoint::new(&t.x + &mark * rat(dx, 1), &t.y + &mark * rat(dy, 1));
        let (ax, ay) = fr.xy(&corner(-1, -1));
        let (bx_, by) = fr.xy(&corner(1, 1));
        let (cx, cy) = fr.xy(&corner(-1, 1));
        let (dx, dy) = fr.xy(&corner(1, -1));
        let _ = writeln!(
            s,
            r##"<path class="terminus" data-cut="{i}" d="M{ax},{ay} L{bx_},{by} M{cx},{cy} L{dx},{dy}" stroke="#000000" stroke-width="{stroke}"/>"##
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
