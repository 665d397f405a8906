//! Decorated convex polygons with exact vertices, unbounded rays and branch
//! cuts, plus the homogeneous-coordinate machinery used to cut them along
//! lines (mutation) and clip them to boxes (rendering).

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{rat_int, Int, Rat};
use crate::lattice::{nodal_trade, LatticeVector, Mat2, PlanePoint, ZAffineMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolygonError {
    #[error("no cut with index {0}")]
    NoSuchCut(usize),
    #[error("the line through cut {cut} is obstructed by cut {other}")]
    Obstructed { cut: usize, other: usize },
    #[error("the extension of cut {0} never leaves the polygon")]
    CutEscapes(usize),
    #[error("the extension of cut {0} does not meet the boundary beyond its terminus")]
    NoExit(usize),
    #[error("mutation produced a degenerate polygon")]
    Degenerate,
    #[error("viewport is empty")]
    EmptyViewport,
    #[error("polygon is not a two-vertex wedge")]
    NotAWedge,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchCut {
    pub base: PlanePoint,
    pub terminus: PlanePoint,
    pub direction: LatticeVector,
    pub monodromy: ZAffineMap,
    pub coorientation: LatticeVector,
}

impl BranchCut {
    /// Nodal-trade cut from `base` to `terminus` along primitive `direction`,
    /// cooriented to the right.
    pub fn nodal(base: PlanePoint, terminus: PlanePoint, direction: LatticeVector) -> BranchCut {
        let coorientation = LatticeVector::new(direction.y.clone(), -direction.x.clone());
        let monodromy = ZAffineMap::linear(nodal_trade(&direction)).expect("nodal trades are unimodular");
        BranchCut { base, terminus, direction, monodromy, coorientation }
    }

    pub fn coorientation_is_left(&self) -> bool {
        self.direction.cross(&self.coorientation).is_positive()
    }

    /// The same cut described with its coorientation on the left of its
    /// direction (flipping the coorientation inverts the monodromy).
    pub fn canonical(&self) -> BranchCut {
        let left = LatticeVector::new(-self.direction.y.clone(), self.direction.x.clone());
        let monodromy = if self.coorientation_is_left() {
            self.monodromy.clone()
        } else {
            self.monodromy.inverse()
        };
        BranchCut {
            base: self.base.clone(),
            terminus: self.terminus.clone(),
            direction: self.direction.clone(),
            monodromy,
            coorientation: left,
        }
    }

    fn transformed(&self, map: &ZAffineMap) -> BranchCut {
        let m = &map.m;
        let conj = m.mul(&self.monodromy.m).mul(&m.inverse());
        BranchCut {
            base: map.apply_point(&self.base),
            terminus: map.apply_point(&self.terminus),
            direction: m.apply(&self.direction),
            monodromy: ZAffineMap::linear(conj).expect("conjugate is unimodular"),
            coorientation: m.apply(&self.coorientation),
        }
    }
}

/// Convex polygon, vertices anticlockwise. When `rays` is present the polygon
/// is unbounded: `rays[0]` leaves the first vertex and `rays[1]` the last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeoPolygon {
    pub vertices: Vec<PlanePoint>,
    #[serde(rename = "rayDirections")]
    pub rays: Vec<LatticeVector>,
    pub cuts: Vec<BranchCut>,
}

/// Homogeneous point `(x, y, w)`, with `w = 1` for finite points and `w = 0`
/// for points at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoint {
    pub x: Rat,
    pub y: Rat,
    pub w: Rat,
}

impl HPoint {
    pub fn finite(p: &PlanePoint) -> Self {
        HPoint { x: p.x.clone(), y: p.y.clone(), w: Rat::one() }
    }

    pub fn ideal(v: &LatticeVector) -> Self {
        HPoint { x: rat_int(&v.x), y: rat_int(&v.y), w: Rat::zero() }
    }

    pub fn is_ideal(&self) -> bool {
        self.w.is_zero()
    }

    fn normalized(self) -> Self {
        if self.w.is_zero() {
            self
        } else {
            HPoint { x: &self.x / &self.w, y: &self.y / &self.w, w: Rat::one() }
        }
    }

    pub fn point(&self) -> Option<PlanePoint> {
        (!self.is_ideal()).then(|| PlanePoint::new(self.x.clone(), self.y.clone()))
    }

    /// Primitive lattice direction of an ideal point.
    pub fn direction(&self) -> LatticeVector {
        rational_direction(&self.x, &self.y)
    }

    fn combine(a: &Rat, p: &HPoint, b: &Rat, q: &HPoint) -> HPoint {
        HPoint { x: a * &p.x + b * &q.x, y: a * &p.y + b * &q.y, w: a * &p.w + b * &q.w }.normalized()
    }

    fn apply(&self, map: &ZAffineMap) -> HPoint {
        if self.is_ideal() {
            let (x, y) = map.m.apply_rat(&self.x, &self.y);
            HPoint { x, y, w: Rat::zero() }
        } else {
            HPoint::finite(&map.apply_point(&PlanePoint::new(self.x.clone(), self.y.clone())))
        }
    }
}

/// Primitive integer vector along a nonzero rational direction.
pub fn rational_direction(x: &Rat, y: &Rat) -> LatticeVector {
    let l = num_integer::lcm(x.denom().clone(), y.denom().clone());
    let v = LatticeVector::new((x * rat_int(&l)).to_integer(), (y * rat_int(&l)).to_integer());
    v.primitive().expect("nonzero direction")
}

/// Linear functional on homogeneous points: `a·x + b·y + c·w`.
#[derive(Clone, Debug)]
struct Functional {
    a: Rat,
    b: Rat,
    c: Rat,
}

impl Functional {
    /// `cross(d, X − w·z)`: positive to the left of the line through `z` along `d`.
    fn line(z: &PlanePoint, d: &LatticeVector) -> Self {
        let (dx, dy) = (rat_int(&d.x), rat_int(&d.y));
        Functional { c: -(&dx * &z.y - &dy * &z.x), a: -dy, b: dx }
    }

    fn eval(&self, p: &HPoint) -> Rat {
        &self.a * &p.x + &self.b * &p.y + &self.c * &p.w
    }
}

/// Inserts the crossings of a cyclic homogeneous polygon with the zero set of `f`.
fn insert_crossings(pts: &[HPoint], f: &Functional) -> Vec<HPoint> {
    let n = pts.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let p = &pts[i];
        let q = &pts[(i + 1) % n];
        out.push(p.clone());
        let (fp, fq) = (f.eval(p), f.eval(q));
        if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
            out.push(HPoint::combine(&-fq, p, &fp, q));
        }
    }
    out
}

/// Sutherland-Hodgman step keeping `f ≥ 0`.
fn clip_halfplane(pts: &[HPoint], f: &Functional) -> Vec<HPoint> {
    insert_crossings(pts, f).into_iter().filter(|p| !f.eval(p).is_negative()).collect()
}

fn edge_vector(from: &HPoint, to: &HPoint) -> (Rat, Rat) {
    match (from.is_ideal(), to.is_ideal()) {
        (false, false) => (&to.x - &from.x, &to.y - &from.y),
        (false, true) => (to.x.clone(), to.y.clone()),
        (true, false) => (-from.x.clone(), -from.y.clone()),
        (true, true) => (Rat::zero(), Rat::zero()),
    }
}

fn same_ideal(p: &HPoint, q: &HPoint) -> bool {
    p.is_ideal() && q.is_ideal() && (&p.x * &q.y - &p.y * &q.x).is_zero() && (&p.x * &q.x + &p.y * &q.y).is_positive()
}

/// Drops duplicates, straight-angle finite points, and ideal points strictly
/// inside a run of ideal points.
fn simplify(mut pts: Vec<HPoint>) -> Vec<HPoint> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let mut removed = None;
        for i in 0..n {
            let prev = &pts[(i + n - 1) % n];
            let cur = &pts[i];
            let next = &pts[(i + 1) % n];
            if cur == next || same_ideal(cur, next) {
                removed = Some(i);
                break;
            }
            if cur.is_ideal() {
                if prev.is_ideal() && next.is_ideal() {
                    removed = Some(i);
                    break;
                }
                continue;
            }
            let (ax, ay) = edge_vector(prev, cur);
            let (bx, by) = edge_vector(cur, next);
            let cross = &ax * &by - &ay * &bx;
            let dot = &ax * &bx + &ay * &by;
            if cross.is_zero() && !dot.is_negative() {
                removed = Some(i);
                break;
            }
        }
        match removed {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

impl GeoPolygon {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn homogeneous(&self) -> Vec<HPoint> {
        let mut out = Vec::with_capacity(self.vertices.len() + 2);
        if let Some(r) = self.rays.first() {
            out.push(HPoint::ideal(r));
        }
        out.extend(self.vertices.iter().map(HPoint::finite));
        if let Some(r) = self.rays.get(1) {
            out.push(HPoint::ideal(r));
        }
        out
    }

    fn from_homogeneous(pts: Vec<HPoint>, cuts: Vec<BranchCut>) -> Result<GeoPolygon, PolygonError> {
        let n = pts.len();
        let ideal: Vec<usize> = (0..n).filter(|&i| pts[i].is_ideal()).collect();
        match ideal.len() {
            0 => Ok(GeoPolygon { vertices: pts.iter().filter_map(HPoint::point).collect(), rays: vec![], cuts }),
            2 => {
                // The run at infinity must be cyclically contiguous: last → first.
                let (i, j) = (ideal[0], ideal[1]);
                let (end, start) = if j == i + 1 {
                    (i, j)
                } else if i == 0 && j == n - 1 {
                    (j, i)
                } else {
                    return Err(PolygonError::Degenerate);
                };
                let mut vertices = Vec::with_capacity(n - 2);
                let mut k = (start + 1) % n;
                while k != end {
                    vertices.push(pts[k].point().ok_or(PolygonError::Degenerate)?);
                    k = (k + 1) % n;
                }
                let rays = vec![pts[start].direction(), pts[end].direction()];
                Ok(GeoPolygon { vertices, rays, cuts })
            }
            _ => Err(PolygonError::Degenerate),
        }
    }

    pub fn transform(&self, map: &ZAffineMap) -> GeoPolygon {
        GeoPolygon {
            vertices: self.vertices.iter().map(|v| map.apply_point(v)).collect(),
            rays: self.rays.iter().map(|r| map.apply_vector(r)).collect(),
            cuts: self.cuts.iter().map(|c| c.transformed(map)).collect(),
        }
    }

    /// Cuts the polygon along the full line of cut `index`, moves the side
    /// opposite the coorientation by the cut's monodromy about its terminus,
    /// and replaces the cut by the opposite ray from the terminus.
    pub fn mutate_at(&self, index: usize) -> Result<GeoPolygon, PolygonError> {
        let cut = self.cuts.get(index).ok_or(PolygonError::NoSuchCut(index))?;
        let d = &cut.direction;
        let z = &cut.terminus;
        let f = Functional::line(z, d);
        let upper_sign = d.cross(&cut.coorientation).cmp(&Int::zero());
        let moved = |v: &Rat| v.cmp(&Rat::zero()) == upper_sign.reverse() && !v.is_zero();

        for (j, other) in self.cuts.iter().enumerate() {
            if j == index {
                continue;
            }
            let fb = f.eval(&HPoint::finite(&other.base));
            let ft = f.eval(&HPoint::finite(&other.terminus));
            if ft.is_zero() || (fb.is_positive() && ft.is_negative()) || (fb.is_negative() && ft.is_positive()) {
                return Err(PolygonError::Obstructed { cut: index, other: j });
            }
        }

        let pts = insert_crossings(&self.homogeneous(), &f);
        let dz = HPoint::finite(z);
        let mut exit: Option<(Rat, PlanePoint)> = None;
        for p in &pts {
            if !f.eval(p).is_zero() {
                continue;
            }
            if p.is_ideal() {
                if (&p.x * rat_int(&d.x) + &p.y * rat_int(&d.y)).is_positive() {
                    return Err(PolygonError::CutEscapes(index));
                }
                continue;
            }
            let proj = (&p.x - &dz.x) * rat_int(&d.x) + (&p.y - &dz.y) * rat_int(&d.y);
            if proj.is_positive() && exit.as_ref().map_or(true, |(best, _)| proj > *best) {
                exit = Some((proj, p.point().unwrap()));
            }
        }
        let exit = exit.ok_or(PolygonError::NoExit(index))?.1;

        let a = ZAffineMap::about(&cut.monodromy.m, z);
        let moved_pts: Vec<HPoint> =
            pts.into_iter().map(|p| if moved(&f.eval(&p)) { p.apply(&a) } else { p }).collect();
        let simplified = simplify(moved_pts);

        let cuts = self
            .cuts
            .iter()
            .enumerate()
            .map(|(j, c)| {
                if j == index {
                    BranchCut {
                        base: exit.clone(),
                        terminus: z.clone(),
                        direction: d.neg(),
                        monodromy: cut.monodromy.inverse(),
                        coorientation: cut.coorientation.clone(),
                    }
                } else if moved(&f.eval(&HPoint::finite(&c.terminus))) {
                    c.transformed(&a)
                } else {
                    c.clone()
                }
            })
            .collect();
        GeoPolygon::from_homogeneous(simplified, cuts)
    }

    /// Same vertices, rays, and cut data up to coorientation convention and
    /// terminus position, with cuts compared as a set.
    pub fn same_shape(&self, other: &GeoPolygon) -> bool {
        if self.vertices != other.vertices || self.rays != other.rays || self.cuts.len() != other.cuts.len() {
            return false;
        }
        let key = |c: &BranchCut| {
            let k = c.canonical();
            (k.base.x.clone(), k.base.y.clone(), k.direction.clone(), k.monodromy.m.rows())
        };
        let mut a: Vec<_> = self.cuts.iter().map(key).collect();
        let mut b: Vec<_> = other.cuts.iter().map(key).collect();
        a.sort();
        b.sort();
        a == b
    }

    /// Normal form of a two-vertex wedge: first vertex at the origin, the
    /// compact edge along +x, and `0 ≤ R₁.x < R₁.y`.
    pub fn renormalize(&self) -> Result<GeoPolygon, PolygonError> {
        if self.vertices.len() != 2 || self.rays.len() != 2 {
            return Err(PolygonError::NotAWedge);
        }
        let x1 = &self.vertices[0];
        let (ex, ey) = self.vertices[1].sub(x1);
        let e = rational_direction(&ex, &ey);
        let to_y = crate::lattice::normalizing_matrix(&e).expect("primitive");
        let rot = Mat2::from_i64s([[0, 1], [-1, 0]]);
        let m = rot.mul(&to_y);
        let r1 = m.apply(&self.rays[0]);
        if !r1.y.is_positive() {
            return Err(PolygonError::NotAWedge);
        }
        let k = -num_integer::Integer::div_floor(&r1.x, &r1.y);
        let shear = Mat2::new(Int::one(), k, Int::zero(), Int::one());
        let m = shear.mul(&m);
        let lin = ZAffineMap::linear(m).expect("unimodular");
        let shift = ZAffineMap::translation(-x1.x.clone(), -x1.y.clone());
        Ok(self.transform(&lin.compose(&shift)))
    }

    /// Clips to the box `[x0,x1] × [y0,y1]`, returning finite vertices.
    pub fn clip_to_box(&self, x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat) -> Result<Vec<PlanePoint>, PolygonError> {
        if x0 >= x1 || y0 >= y1 {
            return Err(PolygonError::EmptyViewport);
        }
        let o = Rat::one();
        let z = Rat::zero();
        let sides = [
            Functional { a: -o.clone(), b: z.clone(), c: x1.clone() },
            Functional { a: o.clone(), b: z.clone(), c: -x0.clone() },
            Functional { a: z.clone(), b: -o.clone(), c: y1.clone() },
            Functional { a: z, b: o, c: -y0.clone() },
        ];
        let mut pts = self.homogeneous();
        for s in &sides {
            pts = clip_halfplane(&pts, s);
        }
        Ok(simplify(pts).iter().filter_map(HPoint::point).collect())
    }

    /// Clips the segment from `p` along `v` (to infinity when `len` is
    /// `None`) to the box, returning its visible endpoints.
    pub fn clip_segment(
        p: &PlanePoint,
        v: &LatticeVector,
        len: Option<&Rat>,
        bx: (&Rat, &Rat, &Rat, &Rat),
    ) -> Option<(PlanePoint, PlanePoint)> {
        // Liang-Barsky on the parameter interval.
        let (vx, vy) = (rat_int(&v.x), rat_int(&v.y));
        let mut lo = Rat::zero();
        let mut hi: Option<Rat> = len.cloned();
        let checks = [
            (-vx.clone(), &p.x - bx.0),
            (vx.clone(), bx.2 - &p.x),
            (-vy.clone(), &p.y - bx.1),
            (vy.clone(), bx.3 - &p.y),
        ];
        for (pk, qk) in checks {
            match pk.cmp(&Rat::zero()) {
                Ordering::Equal => {
                    if qk.is_negative() {
                        return None;
                    }
                }
                Ordering::Less => {
                    let t = &qk / &pk;
                    if t > lo {
                        lo = t;
                    }
                }
                Ordering::Greater => {
                    let t = &qk / &pk;
                    if hi.as_ref().map_or(true, |h| t < *h) {
                        hi = Some(t);
                    }
                }
            }
        }
        let hi = hi?;
        if lo > hi {
            return None;
        }
        Some((p.add_vec(v, &lo), p.add_vec(v, &hi)))
    }
}
