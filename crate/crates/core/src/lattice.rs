//! ℤ-affine plane geometry: lattice vectors, rational points, unimodular maps,
//! cyclic-quotient vertex types and minimal resolutions.
//!
//! Outgoing edge pairs `(v1, v2)` at a vertex are always ordered
//! counterclockwise, so `det(v1, v2) > 0`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactmath::num::{fmt_rat, int, parse_rat, rat_int, Int, Rat};
use crate::exactmath::{cf_expand, Chain};
use crate::wedge::WedgeParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("vector {0} is not primitive")]
    NotPrimitive(LatticeVector),
    #[error("edges {0}, {1} are not counterclockwise (det = {2})")]
    NotCounterclockwise(LatticeVector, LatticeVector, Int),
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(Int),
    #[error("vertex type ({0},{1}) is smooth; nothing to resolve")]
    Smooth(Int, Int),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    pub x: Int,
    pub y: Int,
}

pub fn lv(x: i64, y: i64) -> LatticeVector {
    LatticeVector::new(int(x), int(y))
}

impl LatticeVector {
    pub fn new(x: Int, y: Int) -> Self {
        LatticeVector { x, y }
    }

    pub fn zero() -> Self {
        LatticeVector::new(Int::zero(), Int::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.x.gcd(&self.y).is_one()
    }

    /// The primitive vector pointing the same way.
    pub fn primitive(&self) -> Option<LatticeVector> {
        if self.is_zero() {
            return None;
        }
        let g = self.x.gcd(&self.y);
        Some(LatticeVector::new(&self.x / &g, &self.y / &g))
    }

    /// Lattice length: the gcd of the coordinates.
    pub fn lattice_length(&self) -> Int {
        self.x.gcd(&self.y)
    }

    pub fn cross(&self, o: &LatticeVector) -> Int {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn dot(&self, o: &LatticeVector) -> Int {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn add(&self, o: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn scale(&self, k: &Int) -> LatticeVector {
        LatticeVector::new(&self.x * k, &self.y * k)
    }

    pub fn neg(&self) -> LatticeVector {
        LatticeVector::new(-self.x.clone(), -self.y.clone())
    }

    pub fn is_parallel(&self, o: &LatticeVector) -> bool {
        self.cross(o).is_zero()
    }

    pub fn to_point(&self) -> PlanePoint {
        PlanePoint::new(rat_int(&self.x), rat_int(&self.y))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W<'a>(
            #[serde(with = "crate::exactmath::num::serde_int")] &'a Int,
            #[serde(with = "crate::exactmath::num::serde_int")] &'a Int,
        );
        W(&self.x, &self.y).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct W(
            #[serde(with = "crate::exactmath::num::serde_int")] Int,
            #[serde(with = "crate::exactmath::num::serde_int")] Int,
        );
        let W(x, y) = W::deserialize(d)?;
        Ok(LatticeVector::new(x, y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint {
    pub x: Rat,
    pub y: Rat,
}

pub fn pp(x: Rat, y: Rat) -> PlanePoint {
    PlanePoint::new(x, y)
}

impl PlanePoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        PlanePoint { x, y }
    }

    pub fn origin() -> Self {
        PlanePoint::new(Rat::zero(), Rat::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        PlanePoint::new(Rat::from_integer(int(x)), Rat::from_integer(int(y)))
    }

    pub fn add_vec(&self, v: &LatticeVector, t: &Rat) -> PlanePoint {
        PlanePoint::new(&self.x + t * rat_int(&v.x), &self.y + t * rat_int(&v.y))
    }

    pub fn sub(&self, o: &PlanePoint) -> (Rat, Rat) {
        (&self.x - &o.x, &self.y - &o.y)
    }

    /// `cross(v, self − base)`: positive when the point lies to the left of
    /// the line through `base` with direction `v`.
    pub fn side_of(&self, base: &PlanePoint, v: &LatticeVector) -> Rat {
        let (dx, dy) = self.sub(base);
        rat_int(&v.x) * dy - rat_int(&v.y) * dx
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [fmt_rat(&self.x), fmt_rat(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlanePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let x = parse_rat(&x).map_err(serde::de::Error::custom)?;
        let y = parse_rat(&y).map_err(serde::de::Error::custom)?;
        Ok(PlanePoint::new(x, y))
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mat2 {
    pub fn new(a: Int, b: Int, c: Int, d: Int) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64s(m: [[i64; 2]; 2]) -> Self {
        Mat2::new(int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1]))
    }

    pub fn identity() -> Self {
        Mat2::from_i64s([[1, 0], [0, 1]])
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        debug_assert!(self.det().is_one());
        Mat2::new(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(&self.a * &v.x + &self.b * &v.y, &self.c * &v.x + &self.d * &v.y)
    }

    pub fn apply_rat(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let (a, b, c, d) = (rat_int(&self.a), rat_int(&self.b), rat_int(&self.c), rat_int(&self.d));
        (&a * x + &b * y, &c * x + &d * y)
    }

    pub fn rows(&self) -> [[Int; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [lv_row(&self.a, &self.b), lv_row(&self.c, &self.d)].serialize(s)
    }
}

fn lv_row(a: &Int, b: &Int) -> LatticeVector {
    LatticeVector::new(a.clone(), b.clone())
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [r0, r1] = <[LatticeVector; 2]>::deserialize(d)?;
        Ok(Mat2::new(r0.x, r0.y, r1.x, r1.y))
    }
}

/// `x ↦ m·x + t` with `det m = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZAffineMap {
    pub m: Mat2,
    pub t: PlanePoint,
}

impl ZAffineMap {
    pub fn new(m: Mat2, t: PlanePoint) -> Result<Self, LatticeError> {
        let det = m.det();
        if !det.is_one() {
            return Err(LatticeError::NotUnimodular(det));
        }
        Ok(ZAffineMap { m, t })
    }

    pub fn linear(m: Mat2) -> Result<Self, LatticeError> {
        ZAffineMap::new(m, PlanePoint::origin())
    }

    pub fn identity() -> Self {
        ZAffineMap { m: Mat2::identity(), t: PlanePoint::origin() }
    }

    pub fn translation(x: Rat, y: Rat) -> Self {
        ZAffineMap { m: Mat2::identity(), t: PlanePoint::new(x, y) }
    }

    /// The linear map `m` acting about the fixed point `z`: `x ↦ z + m(x − z)`.
    pub fn about(m: &Mat2, z: &PlanePoint) -> Self {
        let (mx, my) = m.apply_rat(&z.x, &z.y);
        ZAffineMap { m: m.clone(), t: PlanePoint::new(&z.x - mx, &z.y - my) }
    }

    pub fn apply_point(&self, p: &PlanePoint) -> PlanePoint {
        let (x, y) = self.m.apply_rat(&p.x, &p.y);
        PlanePoint::new(x + &self.t.x, y + &self.t.y)
    }

    pub fn apply_vector(&self, v: &LatticeVector) -> LatticeVector {
        self.m.apply(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ZAffineMap) -> ZAffineMap {
        let t = self.apply_point(&other.t);
        ZAffineMap { m: self.m.mul(&other.m), t }
    }

    pub fn inverse(&self) -> ZAffineMap {
        let inv = self.m.inverse();
        let (x, y) = inv.apply_rat(&self.t.x, &self.t.y);
        ZAffineMap { m: inv, t: PlanePoint::new(-x, -y) }
    }
}

/// Cyclic quotient type `1/P(1,Q)`; `(1,0)` is smooth.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexType {
    #[serde(rename = "P", with = "crate::exactmath::num::serde_int")]
    pub p: Int,
    #[serde(rename = "Q", with = "crate::exactmath::num::serde_int")]
    pub q: Int,
}

impl VertexType {
    pub fn new(p: Int, q: Int) -> Self {
        VertexType { p, q }
    }

    pub fn is_smooth(&self) -> bool {
        self.p.is_one()
    }

    /// The Wahl type `(p², pq − 1)`, with smooth labels mapping to `(1,0)`.
    pub fn wahl(p: &Int, q: &Int) -> Self {
        if p.is_one() {
            VertexType::new(Int::one(), Int::zero())
        } else {
            VertexType::new(p * p, p * q - 1)
        }
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.p, self.q)
    }
}

/// Unimodular `M` with `M·v = (0,1)`, built from the extended gcd of `v`.
pub fn normalizing_matrix(v: &LatticeVector) -> Result<Mat2, LatticeError> {
    if !v.is_primitive() {
        return Err(LatticeError::NotPrimitive(v.clone()));
    }
    let e = v.x.extended_gcd(&v.y);
    // e.x·vx + e.y·vy = ±1.
    let (s, t) = if e.gcd.is_one() { (e.x, e.y) } else { (-e.x, -e.y) };
    Ok(Mat2::new(v.y.clone(), -v.x.clone(), s, t))
}

pub fn vertex_type(v1: &LatticeVector, v2: &LatticeVector) -> Result<VertexType, LatticeError> {
    if !v1.is_primitive() {
        return Err(LatticeError::NotPrimitive(v1.clone()));
    }
    let m = normalizing_matrix(v2)?;
    let p = v1.cross(v2);
    if !p.is_positive() {
        return Err(LatticeError::NotCounterclockwise(v1.clone(), v2.clone(), p));
    }
    let w = m.apply(v1);
    debug_assert_eq!(w.x, p);
    Ok(VertexType::new(p.clone(), w.y.mod_floor(&p)))
}

/// Linear map taking the standard model edges `(P,Q)`, `(0,1)` to `v1`, `v2`.
pub fn standard_model_map(v1: &LatticeVector, v2: &LatticeVector) -> Result<(VertexType, Mat2), LatticeError> {
    let t = vertex_type(v1, v2)?;
    let m = normalizing_matrix(v2)?;
    let w = m.apply(v1);
    // Shear [[1,0],[k,1]] fixes (0,1) and moves w.y to Q.
    let k = (&t.q - &w.y) / &t.p;
    let shear = Mat2::new(Int::one(), Int::zero(), k, Int::one());
    Ok((t, shear.mul(&m).inverse()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutSide {
    B1,
    B2,
}

/// Affine monodromy of a wedge's branch cut, with zero translation.
pub fn monodromy(side: CutSide, w: &WedgeParams) -> ZAffineMap {
    let m = match side {
        CutSide::B1 => {
            let (p, q) = (&w.p1, &w.q1);
            let pq = p - q;
            Mat2::new(Int::one() + p * q - p * p, &pq * &pq, -(p * p), Int::one() - p * q + p * p)
        }
        CutSide::B2 => {
            let (p, q, c) = (&w.p2, &w.q2, &w.c);
            let cq = c * p - q;
            Mat2::new(
                c * p * p - p * q + 1,
                -(&cq * &cq),
                p * p,
                Int::one() + p * q - c * p * p,
            )
        }
    };
    ZAffineMap::linear(m).expect("monodromy has determinant one")
}

/// Monodromy of a nodal trade along primitive `(p,q)`, for the coorientation
/// `(q,−p)` (to the right of the cut direction).
pub fn nodal_trade(dir: &LatticeVector) -> Mat2 {
    let (p, q) = (&dir.x, &dir.y);
    Mat2::new(Int::one() + p * q, -(p * p), q * q, Int::one() - p * q)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedEdge {
    pub direction: LatticeVector,
    #[serde(rename = "selfIntersection", with = "crate::exactmath::num::serde_int")]
    pub self_intersection: Int,
}

/// Minimal resolution of the vertex with outgoing edges `v1`, `v2`: the
/// directions `u_1..u_r` of the exceptional edges, traversed anticlockwise
/// from the `v2` side, with `u_{i+1} = b_i·u_i − u_{i−1}`, `u_0 = −v2`.
pub fn resolve_vertex(v1: &LatticeVector, v2: &LatticeVector) -> Result<Vec<ResolvedEdge>, LatticeError> {
    let (t, n) = standard_model_map(v1, v2)?;
    if t.is_smooth() {
        return Err(LatticeError::Smooth(t.p, t.q));
    }
    let chain = hj_chain(&t);
    let mut prev = v2.neg();
    let mut cur = n.apply(&lv(1, 0));
    let mut out = Vec::with_capacity(chain.len());
    for b in chain.entries() {
        out.push(ResolvedEdge { direction: cur.clone(), self_intersection: -b.clone() });
        let next = cur.scale(b).sub(&prev);
        prev = std::mem::replace(&mut cur, next);
    }
    debug_assert_eq!(cur, *v1);
    Ok(out)
}

fn hj_chain(t: &VertexType) -> Chain {
    cf_expand(&Rat::new(t.p.clone(), t.q.clone())).expect("P > Q ≥ 1 for singular types")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionProfile {
    pub edges: Vec<ResolvedEdge>,
    /// Corners of the resolved standard-model polygon, from the `(0,1)` ray to the `(P,Q)` ray.
    pub vertices: Vec<LatticeVector>,
}

impl ResolutionProfile {
    pub fn labels(&self) -> Vec<Int> {
        self.edges.iter().map(|e| e.self_intersection.clone()).collect()
    }
}

pub fn resolution_profile(t: &VertexType) -> Result<ResolutionProfile, LatticeError> {
    let v1 = LatticeVector::new(t.p.clone(), t.q.clone());
    let v2 = lv(0, 1);
    let edges = resolve_vertex(&v1, &v2)?;
    // Support lines: cross(u_i, x) = 1 on compact edges, 0 on the two rays.
    let mut dirs = vec![v2.neg()];
    dirs.extend(edges.iter().map(|e| e.direction.clone()));
    dirs.push(v1);
    let height = |i: usize| if i == 0 || i == dirs.len() - 1 { Int::zero() } else { Int::one() };
    let vertices = (0..dirs.len() - 1)
        .map(|i| intersect_support(&dirs[i], &height(i), &dirs[i + 1], &height(i + 1)))
        .collect();
    Ok(ResolutionProfile { edges, vertices })
}

/// Solves `cross(u, x) = h`, `cross(w, x) = k` for adjacent directions with `cross(u, w) = 1`.
fn intersect_support(u: &LatticeVector, h: &Int, w: &LatticeVector, k: &Int) -> LatticeVector {
    // cross(u,x) = u.x·y − u.y·x; Cramer's rule on [[−u.y, u.x], [−w.y, w.x]].
    let det = u.cross(w);
    debug_assert!(det.is_one());
    let x = (h * &w.x - k * &u.x) / &det;
    let y = (h * &w.y - k * &u.y) / &det;
    LatticeVector::new(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::num::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: the unique `Q ∈ [0,P)` with `v1 ≡ Q·v2 (mod P)`, by exhaustive search.
    fn brute_type(v1: &LatticeVector, v2: &LatticeVector) -> VertexType {
        let p = v1.cross(v2);
        let mut q = Int::zero();
        while q < p {
            let d = v1.sub(&v2.scale(&q));
            if (&d.x % &p).is_zero() && (&d.y % &p).is_zero() {
                return VertexType::new(p, q);
            }
            q += 1;
        }
        panic!("no residue found");
    }

    fn random_sl2(rng: &mut ChaCha8Rng) -> Mat2 {
        let mut m = Mat2::identity();
        for _ in 0..rng.gen_range(1..6) {
            let k = int(rng.gen_range(-4..=4));
            let g = if rng.gen_bool(0.5) {
                Mat2::new(Int::one(), k, Int::zero(), Int::one())
            } else {
                Mat2::new(Int::one(), Int::zero(), k, Int::one())
            };
            m = g.mul(&m);
        }
        m
    }

    #[test]
    fn apply_examples() {
        let a = ZAffineMap::linear(Mat2::from_i64s([[0, 1], [-1, 2]])).unwrap();
        assert_eq!(a.apply_vector(&lv(1, 1)), lv(1, 1));
        assert_eq!(a.apply_vector(&lv(1, 0)), lv(0, -1));
        let id = ZAffineMap::identity();
        assert_eq!(id.apply_point(&PlanePoint::from_ints(3, 7)), PlanePoint::from_ints(3, 7));
        assert!(ZAffineMap::linear(Mat2::from_i64s([[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn affine_maps_compose_and_invert() {
        let z = PlanePoint::new(rat(2, 1), rat(2, 1));
        let a = ZAffineMap::about(&Mat2::from_i64s([[0, 1], [-1, 2]]), &z);
        assert_eq!(a.apply_point(&z), z);
        assert_eq!(a.apply_point(&PlanePoint::from_ints(6, 0)), PlanePoint::from_ints(0, -6));
        let p = PlanePoint::new(rat(1, 3), rat(-5, 2));
        assert_eq!(a.inverse().apply_point(&a.apply_point(&p)), p);
        assert_eq!(a.compose(&a.inverse()), ZAffineMap::identity());
    }

    #[test]
    fn vertex_type_examples() {
        assert_eq!(vertex_type(&lv(11, 3), &lv(0, 1)).unwrap(), VertexType::new(int(11), int(3)));
        assert_eq!(vertex_type(&lv(1, 0), &lv(0, 1)).unwrap(), VertexType::new(int(1), int(0)));
        let t = vertex_type(&lv(11, 25), &lv(-1, 0)).unwrap();
        assert_eq!(t, VertexType::new(int(25), int(14)));
        assert_eq!(t, brute_type(&lv(11, 25), &lv(-1, 0)));
        assert!(matches!(vertex_type(&lv(2, 4), &lv(0, 1)), Err(LatticeError::NotPrimitive(_))));
        assert!(matches!(
            vertex_type(&lv(0, 1), &lv(1, 0)),
            Err(LatticeError::NotCounterclockwise(_, _, _))
        ));
    }

    #[test]
    fn vertex_type_is_shear_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let v1 = lv(rng.gen_range(-30..=30), rng.gen_range(-30..=30));
            let v2 = lv(rng.gen_range(-30..=30), rng.gen_range(-30..=30));
            if !v1.is_primitive() || !v2.is_primitive() || !v1.cross(&v2).is_positive() {
                continue;
            }
            let base = vertex_type(&v1, &v2).unwrap();
            assert_eq!(base, brute_type(&v1, &v2));
            for _ in 0..10 {
                let g = random_sl2(&mut rng);
                assert_eq!(vertex_type(&g.apply(&v1), &g.apply(&v2)).unwrap(), base);
            }
            checked += 1;
        }
    }

    #[test]
    fn nodal_trade_fixes_its_direction() {
        for (p, q) in [(1, 1), (2, 5), (3, -7), (0, 1)] {
            let v = lv(p, q);
            let m = nodal_trade(&v);
            assert!(m.det().is_one());
            assert_eq!(m.apply(&v), v);
        }
        assert_eq!(nodal_trade(&lv(1, 1)).inverse(), Mat2::from_i64s([[0, 1], [-1, 2]]));
    }

    #[test]
    fn resolution_profile_examples() {
        let r = resolution_profile(&VertexType::new(int(5), int(2))).unwrap();
        assert_eq!(r.labels(), vec![int(-3), int(-2)]);
        assert_eq!(r.vertices, vec![lv(0, 1), lv(2, 1), lv(5, 2)]);
        let r = resolution_profile(&VertexType::new(int(4), int(1))).unwrap();
        assert_eq!(r.labels(), vec![int(-4)]);
        let r = resolution_profile(&VertexType::new(int(25), int(14))).unwrap();
        assert_eq!(r.labels(), vec![int(-2), int(-5), int(-3)]);
        assert!(resolution_profile(&VertexType::new(int(1), int(0))).is_err());
    }

    #[test]
    fn resolution_labels_match_expansion() {
        for p in 2..=400i64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let t = VertexType::new(int(p), int(q));
                let r = resolution_profile(&t).unwrap();
                let expected: Vec<Int> = cf_expand(&rat(p, q)).unwrap().0.into_iter().map(|b| -b).collect();
                assert_eq!(r.labels(), expected);
                // Consecutive resolved directions form lattice bases (smoothness).
                if p <= 40 {
                    for w in r.edges.windows(2) {
                        assert!(w[0].direction.cross(&w[1].direction).is_one());
                    }
                    assert_eq!(r.vertices.last().unwrap(), &lv(p, q));
                }
            }
        }
    }

    #[test]
    fn serde_shapes() {
        let a = ZAffineMap::about(&Mat2::from_i64s([[0, 1], [-1, 2]]), &PlanePoint::new(rat(1, 2), rat(0, 1)));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"m":[[0,1],[-1,2]],"t":["1/2","1/2"]}"#);
        let back: ZAffineMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
