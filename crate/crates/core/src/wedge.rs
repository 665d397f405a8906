//! The decorated truncated wedge `Π(p₁,q₁,p₂,q₂,c,a)`.
//!
//! Side conventions: a smooth left vertex is labelled `(1,0)`, a smooth
//! right vertex `(1,1)`. Mixing them up silently corrupts every formula.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{fmt_rat, int, show_rat, modulo, rat_int, serde_int, serde_rat, ExtRational, Int, Rat};
use crate::exactmath::{cf_eval, recognize_wahl, wahl_chain, Chain};
use crate::hjchain::MarkedChain;
use crate::lattice::{monodromy, CutSide, LatticeVector, Mat2, PlanePoint, VertexType};
use crate::polygon::{BranchCut, GeoPolygon};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WedgeParams {
    #[serde(with = "serde_int")]
    pub p1: Int,
    #[serde(with = "serde_int")]
    pub q1: Int,
    #[serde(with = "serde_int")]
    pub p2: Int,
    #[serde(with = "serde_int")]
    pub q2: Int,
    #[serde(with = "serde_int")]
    pub c: Int,
    #[serde(with = "serde_rat")]
    pub a: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(format!("side must be left or right, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WedgeError {
    #[error("left vertex ({0},{1}): p and q are not coprime")]
    LeftNotCoprime(Int, Int),
    #[error("left vertex ({0},{1}) needs 0 <= q < p")]
    LeftOutOfRange(Int, Int),
    #[error("left vertex (1,1): a smooth left vertex must be written (1,0)")]
    LeftSmoothConvention,
    #[error("right vertex ({0},{1}): p and q are not coprime")]
    RightNotCoprime(Int, Int),
    #[error("right vertex ({0},{1}) needs 0 < q < p")]
    RightOutOfRange(Int, Int),
    #[error("right vertex (1,0): a smooth right vertex must be written (1,1)")]
    RightSmoothConvention,
    #[error("edge length must be positive, got {}", fmt_rat(.0))]
    NonPositiveLength(Rat),
    #[error("rays intersect, not a truncated wedge (Delta = {0})")]
    RaysIntersect(Int),
    #[error("bounded lengths must be positive")]
    NonPositiveBound,
    #[error("block {0} is not a Wahl chain")]
    NotWahl(Chain),
}

impl WedgeParams {
    /// Unchecked constructor; see [`validate`].
    pub fn new(p1: i64, q1: i64, p2: i64, q2: i64, c: i64, a: Rat) -> Self {
        WedgeParams { p1: int(p1), q1: int(q1), p2: int(p2), q2: int(q2), c: int(c), a }
    }

    pub fn validated(self) -> Result<Self, WedgeError> {
        validate(self.p1, self.q1, self.p2, self.q2, self.c, self.a)
    }

    pub fn with_a(&self, a: Rat) -> Self {
        WedgeParams { a, ..self.clone() }
    }

    pub fn sigma(&self) -> Int {
        (&self.c - 1) * &self.p1 * &self.p2 + &self.p2 * &self.q1 - &self.p1 * &self.q2
    }

    pub fn delta_big(&self) -> Int {
        &self.p1 * &self.p1 + &self.p2 * &self.p2 + self.sigma() * &self.p1 * &self.p2
    }

    /// Same `(p, q)` data, ignoring the edge length.
    pub fn same_shape(&self, o: &WedgeParams) -> bool {
        self.p1 == o.p1 && self.q1 == o.q1 && self.p2 == o.p2 && self.q2 == o.q2 && self.c == o.c
    }

    pub fn left_type(&self) -> VertexType {
        VertexType::wahl(&self.p1, &self.q1)
    }

    pub fn right_type(&self) -> VertexType {
        VertexType::wahl(&self.p2, &self.q2)
    }
}


impl fmt::Display for WedgeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Π({},{},{},{},{},{})", self.p1, self.q1, self.p2, self.q2, self.c, show_rat(&self.a))
    }
}

pub fn validate(p1: Int, q1: Int, p2: Int, q2: Int, c: Int, a: Rat) -> Result<WedgeParams, WedgeError> {
    if p1.is_one() && q1.is_one() {
        return Err(WedgeError::LeftSmoothConvention);
    }
    if !p1.is_positive() || q1.is_negative() || q1 >= p1 {
        return Err(WedgeError::LeftOutOfRange(p1, q1));
    }
    if !p1.gcd(&q1).is_one() {
        return Err(WedgeError::LeftNotCoprime(p1, q1));
    }
    if p2.is_one() && q2.is_zero() {
        return Err(WedgeError::RightSmoothConvention);
    }
    let right_smooth = p2.is_one() && q2.is_one();
    if !right_smooth && (!p2.is_positive() || !q2.is_positive() || q2 >= p2) {
        return Err(WedgeError::RightOutOfRange(p2, q2));
    }
    if !p2.gcd(&q2).is_one() {
        return Err(WedgeError::RightNotCoprime(p2, q2));
    }
    if !a.is_positive() {
        return Err(WedgeError::NonPositiveLength(a));
    }
    let w = WedgeParams { p1, q1, p2, q2, c, a };
    let big_delta = w.delta_big();
    if !big_delta.is_positive() {
        return Err(WedgeError::RaysIntersect(big_delta));
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KSign {
    KPositive,
    KNegative,
    KZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WedgeInvariants {
    #[serde(with = "serde_int")]
    pub sigma: Int,
    #[serde(rename = "Delta", with = "serde_int")]
    pub delta: Int,
    #[serde(rename = "Omega", with = "serde_int")]
    pub omega: Int,
    #[serde(with = "serde_int")]
    pub shear: Int,
    #[serde(rename = "Kpositivity")]
    pub k_sign: KSign,
}

pub fn invariants(w: &WedgeParams) -> WedgeInvariants {
    let sigma = w.sigma();
    let delta = w.delta_big();
    let (p1, q1, p2, q2) = (&w.p1, &w.q1, &w.p2, &w.q2);
    let raw = p1 * q1 + p2 * q2 - 1 + &sigma * p2 * q1 - (&w.c - 1) * p2 * p2;
    let k_sign = match sigma.sign() {
        num_bigint::Sign::Plus => KSign::KPositive,
        num_bigint::Sign::Minus => KSign::KNegative,
        num_bigint::Sign::NoSign => KSign::KZero,
    };
    WedgeInvariants { omega: modulo(&raw, &delta), delta, shear: w.c.clone(), k_sign, sigma }
}

pub fn r1_direction(w: &WedgeParams) -> LatticeVector {
    LatticeVector::new(&w.p1 * (&w.p1 - &w.q1) - 1, &w.p1 * &w.p1)
}

pub fn r2_direction(w: &WedgeParams) -> LatticeVector {
    LatticeVector::new(&w.c * &w.p2 * &w.p2 - &w.p2 * &w.q2 + 1, &w.p2 * &w.p2)
}

pub fn b1_direction(w: &WedgeParams) -> LatticeVector {
    LatticeVector::new(&w.p1 - &w.q1, w.p1.clone())
}

pub fn b2_direction(w: &WedgeParams) -> LatticeVector {
    LatticeVector::new(&w.c * &w.p2 - &w.q2, w.p2.clone())
}

/// Height of the point where the two cut lines meet, when they converge
/// above the compact edge (exactly the K-negative case).
pub fn cut_meeting_height(w: &WedgeParams) -> Option<Rat> {
    let d1 = b1_direction(w);
    let d2 = b2_direction(w);
    let cross = d1.cross(&d2);
    if !cross.is_positive() {
        return None;
    }
    // x1 + s·d1 = x2 + t·d2 with x2 − x1 = (a, 0): s = a·d2.y / cross(d1, d2).
    let s = &w.a * rat_int(&d2.y) / rat_int(&cross);
    Some(s * rat_int(&d1.y))
}

fn cuts_with_height(w: &WedgeParams, h: &Rat) -> Vec<BranchCut> {
    let x1 = PlanePoint::origin();
    let x2 = PlanePoint::new(w.a.clone(), Rat::zero());
    let d1 = b1_direction(w);
    let d2 = b2_direction(w);
    let z1 = x1.add_vec(&d1, &(h / rat_int(&d1.y)));
    let z2 = x2.add_vec(&d2, &(h / rat_int(&d2.y)));
    vec![
        BranchCut {
            base: x1,
            terminus: z1,
            coorientation: LatticeVector::new(-d1.y.clone(), d1.x.clone()),
            direction: d1,
            monodromy: monodromy(CutSide::B1, w),
        },
        BranchCut {
            base: x2,
            terminus: z2,
            coorientation: LatticeVector::new(d2.y.clone(), -d2.x.clone()),
            direction: d2,
            monodromy: monodromy(CutSide::B2, w),
        },
    ]
}

/// Terminus height: `fraction · min(a, meeting height, extra caps)`.
pub fn terminus_height(w: &WedgeParams, fraction: &Rat, caps: &[Rat]) -> Rat {
    let mut h = w.a.clone();
    if let Some(m) = cut_meeting_height(w) {
        h = h.min(m);
    }
    for c in caps {
        h = h.min(c.clone());
    }
    h * fraction
}

pub fn default_fraction() -> Rat {
    Rat::new(int(1), int(3))
}

pub fn realize(w: &WedgeParams) -> GeoPolygon {
    realize_with(w, &default_fraction())
}

pub fn realize_with(w: &WedgeParams, fraction: &Rat) -> GeoPolygon {
    let h = terminus_height(w, fraction, &[]);
    GeoPolygon {
        vertices: vec![PlanePoint::origin(), PlanePoint::new(w.a.clone(), Rat::zero())],
        rays: vec![r1_direction(w), r2_direction(w)],
        cuts: cuts_with_height(w, &h),
    }
}

/// The compact quadrilateral `x₁, x₂, y₂, y₁` with `yᵢ` at affine distance `ℓᵢ` along `Rᵢ`.
pub fn bounded(w: &WedgeParams, l1: &Rat, l2: &Rat) -> Result<GeoPolygon, WedgeError> {
    if !l1.is_positive() || !l2.is_positive() {
        return Err(WedgeError::NonPositiveBound);
    }
    let r1 = r1_direction(w);
    let r2 = r2_direction(w);
    let x1 = PlanePoint::origin();
    let x2 = PlanePoint::new(w.a.clone(), Rat::zero());
    let y1 = x1.add_vec(&r1, l1);
    let y2 = x2.add_vec(&r2, l2);
    let caps = [&y1.y * Rat::one(), y2.y.clone()];
    let h = terminus_height(w, &default_fraction(), &caps);
    Ok(GeoPolygon { vertices: vec![x1, x2, y2, y1], rays: vec![], cuts: cuts_with_height(w, &h) })
}

pub fn boundary_chain(w: &WedgeParams) -> MarkedChain {
    MarkedChain {
        left: wahl_chain(&w.p1, &w.q1).expect("validated left vertex"),
        c: w.c.clone(),
        right: wahl_chain(&w.p2, &w.q2).expect("validated right vertex"),
    }
}

pub fn from_chain(mc: &MarkedChain, a: Rat) -> Result<WedgeParams, WedgeError> {
    let (p1, q1) = if mc.left.is_empty() {
        (Int::one(), Int::zero())
    } else {
        recognize_wahl(&mc.left).ok_or_else(|| WedgeError::NotWahl(mc.left.clone()))?
    };
    let (p2, q2) = if mc.right.is_empty() {
        (Int::one(), Int::one())
    } else {
        recognize_wahl(&mc.right).ok_or_else(|| WedgeError::NotWahl(mc.right.clone()))?
    };
    validate(p1, q1, p2, q2, mc.c.clone(), a)
}

pub fn marked_cf(mc: &MarkedChain) -> ExtRational {
    cf_eval(&mc.flatten())
}

/// `(Δ, Ω)` read off a marked chain: `Δ = |N|`, `Ω = sign(N)·D mod Δ`.
pub fn chain_delta_omega(mc: &MarkedChain) -> Option<(Int, Int)> {
    let v = marked_cf(mc);
    let r = v.finite()?;
    let n = r.numer();
    if n.is_zero() {
        return None;
    }
    let delta = n.abs();
    let omega = modulo(&(r.denom() * n.signum()), &delta);
    Some((delta, omega))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingData {
    #[serde(rename = "areaOnGenerator", with = "serde_rat")]
    pub area_on_generator: Rat,
    #[serde(rename = "KdotC", with = "serde_rat")]
    pub k_dot_c: Rat,
}

pub fn pairing_data(w: &WedgeParams) -> PairingData {
    let pp = rat_int(&(&w.p1 * &w.p2));
    PairingData { area_on_generator: &pp * &w.a, k_dot_c: rat_int(&w.sigma()) / pp }
}

/// The unimodular matrix that carries `R₁` to `(0,1)` and `R₂` to `(Δ, Ω′)`.
pub fn standard_normalization(w: &WedgeParams) -> Mat2 {
    let (p, q) = (&w.p1, &w.q1);
    Mat2::new(p * p, Int::one() - p * p + p * q, p * q - 1, Int::one() - p * q + q * q)
}
