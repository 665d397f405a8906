//! The initial antiflip Π⁺ = Π(p₀,q₀,p₁,q₁,c,a⁺) ↦ Π⁻ = Π(p₁,q₁′,p₂,q₂,1,a⁻),
//! its inverse flip, bounded-subpolygon bookkeeping and the cohomology path.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{int, rat_int, serde_int, serde_rat, Int, Rat};
use crate::exactmath::QuadraticSurd;
use crate::mori::{budget, is_infinitely_right_mutable, max_antiflip_param, Budget, MoriError, Verdict};
use crate::mutate::{classify, minus_one_sphere, mutate, MinusOneSphere, MutabilityStatus, MutateError};
use crate::wedge::{validate, Side, WedgeError, WedgeParams};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FlipError {
    #[error("wedge must be K-positive, sigma = {0}")]
    NotKPositive(Int),
    #[error("wedge must be K-negative with c = 1 (sigma = {sigma}, c = {c})")]
    NotKNegative { sigma: Int, c: Int },
    #[error("edge length must be positive")]
    NonPositiveLength,
    #[error("p1 = {p1} does not divide delta + p2*q1' = {numerator}")]
    Divisibility { p1: Int, numerator: Int },
    #[error("antiflip result is not a valid wedge: {0}")]
    Invalid(WedgeError),
    #[error("no room: a- = {a_minus} leaves deficit {deficit} against l2 = {l2}")]
    NoRoom { a_minus: Rat, l2: Rat, deficit: Rat },
    #[error("left mutation of {0} climbs the Mori sequence instead of descending")]
    NotDescending(Box<WedgeParams>),
    #[error("no integral flip: {0}")]
    NoIntegralFlip(String),
    #[error("a+ = {actual} is not the canonical value delta/(p0 p1) = {expected}")]
    NotCanonical { expected: Rat, actual: Rat },
    #[error(transparent)]
    Mutation(#[from] MutateError),
    #[error(transparent)]
    Mori(#[from] MoriError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiflipResult {
    pub minus: WedgeParams,
    #[serde(rename = "deltaUsed", with = "serde_int")]
    pub delta_used: Int,
    #[serde(rename = "q1Adjusted")]
    pub q1_adjusted: bool,
}

fn require_positive(a: &Rat) -> Result<(), FlipError> {
    if a.is_positive() {
        Ok(())
    } else {
        Err(FlipError::NonPositiveLength)
    }
}

pub fn initial_antiflip(plus: &WedgeParams, a_minus: &Rat) -> Result<AntiflipResult, FlipError> {
    let delta = plus.sigma();
    if !delta.is_positive() {
        return Err(FlipError::NotKPositive(delta));
    }
    require_positive(a_minus)?;
    let (p0, p1, q1) = (&plus.p1, &plus.p2, &plus.q2);
    let adjusted = p1.is_one() && q1.is_one();
    let q1p = if adjusted { Int::zero() } else { q1.clone() };
    let p2 = &delta * p1 + p0;
    let numerator = &delta + &p2 * &q1p;
    let (q2, r) = numerator.div_rem(p1);
    if !r.is_zero() {
        return Err(FlipError::Divisibility { p1: p1.clone(), numerator });
    }
    let minus = validate(p1.clone(), q1p, p2, q2, Int::one(), a_minus.clone()).map_err(FlipError::Invalid)?;
    Ok(AntiflipResult { minus, delta_used: delta, q1_adjusted: adjusted })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedAntiflip {
    pub result: AntiflipResult,
    #[serde(rename = "newBounds")]
    pub new_bounds: Bounds,
    /// Present when `ℓ₂ − a⁻` strictly exceeds the budget bound.
    #[serde(rename = "infiniteMutabilityCertificate")]
    pub certificate: Option<Budget>,
    /// The budget over the finite horizon; absent when Π⁻ is not infinitely right-mutable.
    pub budget: Option<Budget>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(with = "serde_rat")]
    pub l1: Rat,
    #[serde(with = "serde_rat")]
    pub l2: Rat,
}

/// Horizon used for the finite part of the budget.
pub const BUDGET_HORIZON: usize = 30;

/// Replaces `Π⁺(a⁺)_{ℓ₁,ℓ₂}` by `Π⁻(a⁻)_{ℓ₁+a⁺, ℓ₂−a⁻}`.
pub fn antiflip_in_bounds(plus: &WedgeParams, l1: &Rat, l2: &Rat, a_minus: &Rat) -> Result<BoundedAntiflip, FlipError> {
    require_positive(l1)?;
    if a_minus >= l2 {
        return Err(FlipError::NoRoom { a_minus: a_minus.clone(), l2: l2.clone(), deficit: a_minus - l2 });
    }
    let result = initial_antiflip(plus, a_minus)?;
    let nl1 = l1 + &plus.a;
    let nl2 = l2 - a_minus;
    let b = if is_infinitely_right_mutable(&result.minus)? { Some(budget(&result.minus, &nl2, BUDGET_HORIZON)?) } else { None };
    let certificate = b.as_ref().filter(|b| b.verdict == Verdict::FitsForever).cloned();
    Ok(BoundedAntiflip { result, new_bounds: Bounds { l1: nl1, l2: nl2 }, certificate, budget: b })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FlipKind {
    FlipTo { plus: WedgeParams },
    DivisorialContraction { sphere: MinusOneSphere },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipResult {
    #[serde(flatten)]
    pub kind: FlipKind,
    /// Starting wedge followed by each left mutation.
    #[serde(rename = "descentOrbit")]
    pub descent_orbit: Vec<WedgeParams>,
}

/// Inverts the antiflip on a left-immutable K-negative wedge.
fn invert_antiflip(minus: &WedgeParams, a_plus: &Rat) -> Result<WedgeParams, FlipError> {
    let delta = -minus.sigma();
    let (p1, p2) = (&minus.p1, &minus.p2);
    let q1 = if p1.is_one() { Int::one() } else { minus.q1.clone() };
    let p0 = p2 - &delta * p1;
    if !p0.is_positive() {
        return Err(FlipError::NoIntegralFlip(format!("p0 = p2 - delta*p1 = {p0} is not positive")));
    }
    // δ = (c−1)p₀p₁ + p₁q₀ − p₀q₁ reads p₁·(q₀ + (c−1)p₀) = δ + p₀q₁.
    let num = &delta + &p0 * &q1;
    let (n, r) = num.div_rem(p1);
    if !r.is_zero() {
        return Err(FlipError::NoIntegralFlip(format!("p1 = {p1} does not divide delta + p0*q1 = {num}")));
    }
    let (cm1, q0) = n.div_mod_floor(&p0);
    if !p0.gcd(&q0).is_one() {
        return Err(FlipError::NoIntegralFlip(format!("gcd(p0, q0) = gcd({p0}, {q0}) != 1")));
    }
    let c = cm1 + Int::one();
    if c < Int::one() {
        return Err(FlipError::NoIntegralFlip(format!("c = {c} < 1")));
    }
    let plus = validate(p0, q0, p1.clone(), q1, c, a_plus.clone())
        .map_err(|e| FlipError::NoIntegralFlip(e.to_string()))?;
    if plus.sigma() != delta {
        return Err(FlipError::NoIntegralFlip(format!("sigma of the flip is {} instead of {delta}", plus.sigma())));
    }
    Ok(plus)
}

pub fn flip(minus: &WedgeParams, a_plus: &Rat) -> Result<FlipResult, FlipError> {
    let sigma = minus.sigma();
    if !sigma.is_negative() || !minus.c.is_one() {
        return Err(FlipError::NotKNegative { sigma, c: minus.c.clone() });
    }
    require_positive(a_plus)?;
    let mut descent = vec![minus.clone()];
    loop {
        let cur = descent.last().unwrap();
        match classify(cur, Side::Left).status {
            MutabilityStatus::Mutable => {
                let next = mutate(cur, Side::Left)?;
                if &next.p1 + &next.p2 >= &cur.p1 + &cur.p2 {
                    return Err(FlipError::NotDescending(Box::new(cur.clone())));
                }
                descent.push(next);
            }
            MutabilityStatus::Borderline => {
                let sphere = minus_one_sphere(cur, Side::Left)?;
                return Ok(FlipResult { kind: FlipKind::DivisorialContraction { sphere }, descent_orbit: descent });
            }
            MutabilityStatus::Immutable => {
                let plus = invert_antiflip(cur, a_plus)?;
                return Ok(FlipResult { kind: FlipKind::FlipTo { plus }, descent_orbit: descent });
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapWindow {
    #[serde(with = "serde_rat")]
    pub low: Rat,
    #[serde(with = "serde_rat")]
    pub high: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyPath {
    #[serde(with = "serde_rat")]
    pub start: Rat,
    #[serde(with = "serde_rat")]
    pub end: Rat,
    #[serde(rename = "affineDistance", with = "serde_rat")]
    pub affine_distance: Rat,
    /// `(δ, δ + ε]` with `ε = C·p₁p₂`, `C` a certified rational; absent when `δ < 2`.
    #[serde(rename = "gapWindow")]
    pub gap_window: Option<GapWindow>,
    #[serde(rename = "epsilonExact")]
    pub epsilon_exact: Option<QuadraticSurd>,
}

pub fn cohomology_path(plus: &WedgeParams, a_minus: &Rat, l2: &Rat) -> Result<CohomologyPath, FlipError> {
    let delta = plus.sigma();
    if !delta.is_positive() {
        return Err(FlipError::NotKPositive(delta));
    }
    let expected = Rat::new(delta.clone(), plus.p1.clone() * &plus.p2);
    if plus.a != expected {
        return Err(FlipError::NotCanonical { expected, actual: plus.a.clone() });
    }
    require_positive(l2)?;
    let minus = initial_antiflip(plus, a_minus)?.minus;
    let pp = rat_int(&(&minus.p1 * &minus.p2));
    let start = rat_int(&delta);
    let end = -(a_minus * &pp);
    let affine_distance = &start - &end;
    let (gap_window, epsilon_exact) = if delta >= int(2) {
        let cap = max_antiflip_param(l2, &delta)?;
        let eps = &cap.rational_under_approx * &pp;
        (Some(GapWindow { low: start.clone(), high: &start + eps }), Some(cap.exact.scale(&pp)))
    } else {
        (None, None)
    };
    Ok(CohomologyPath { start, end, affine_distance, gap_window, epsilon_exact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::num::rat;
    use crate::wedge::{invariants, pairing_data};

    fn w(p1: i64, q1: i64, p2: i64, q2: i64, c: i64, a: Rat) -> WedgeParams {
        WedgeParams::new(p1, q1, p2, q2, c, a)
    }

    #[test]
    fn printed_antiflips() {
        let q = initial_antiflip(&w(2, 1, 1, 1, 3, rat(3, 2)), &rat(1, 10)).unwrap();
        assert_eq!(q.minus, w(1, 0, 5, 3, 1, rat(1, 10)));
        assert!(q.q1_adjusted);
        assert_eq!(q.delta_used, int(3));
        let g = initial_antiflip(&w(4, 3, 5, 2, 1, rat(1, 1)), &rat(1, 100)).unwrap();
        assert_eq!(g.minus, w(5, 2, 39, 17, 1, rat(1, 100)));
        assert!(!g.q1_adjusted);
        for (plus, r) in [(w(2, 1, 1, 1, 3, rat(3, 2)), &q), (w(4, 3, 5, 2, 1, rat(1, 1)), &g)] {
            let (a, b) = (invariants(&plus), invariants(&r.minus));
            assert_eq!((a.delta, a.omega), (b.delta, b.omega));
            assert_eq!(a.sigma, -b.sigma);
        }
        assert!(matches!(initial_antiflip(&w(1, 0, 5, 3, 1, rat(1, 1)), &rat(1, 1)), Err(FlipError::NotKPositive(_))));
    }

    #[test]
    fn bounded() {
        let plus = w(2, 1, 1, 1, 3, rat(3, 2));
        let r = antiflip_in_bounds(&plus, &rat(1, 1), &rat(1, 1), &rat(1, 10)).unwrap();
        assert_eq!(r.new_bounds, Bounds { l1: rat(5, 2), l2: rat(9, 10) });
        assert!(r.certificate.is_some());
        assert!(matches!(antiflip_in_bounds(&plus, &rat(1, 1), &rat(1, 1), &rat(1, 1)), Err(FlipError::NoRoom { .. })));
        // Above the cap 0.854.. but below l2: no certificate.
        let r = antiflip_in_bounds(&plus, &rat(1, 1), &rat(1, 1), &rat(9, 10)).unwrap();
        assert!(r.certificate.is_none());
        assert!(matches!(r.budget.unwrap().verdict, Verdict::FitsUpTo(_)));
    }

    #[test]
    fn flips() {
        let r = flip(&w(5, 3, 14, 9, 1, rat(1, 1)), &rat(3, 2)).unwrap();
        assert_eq!(r.descent_orbit, vec![w(5, 3, 14, 9, 1, rat(1, 1)), w(1, 0, 5, 3, 1, rat(14, 1))]);
        assert_eq!(r.kind, FlipKind::FlipTo { plus: w(2, 1, 1, 1, 3, rat(3, 2)) });

        let r = flip(&w(5, 2, 39, 17, 1, rat(1, 1)), &rat(1, 1)).unwrap();
        assert_eq!(r.descent_orbit.len(), 1);
        assert_eq!(r.kind, FlipKind::FlipTo { plus: w(4, 3, 5, 2, 1, rat(1, 1)) });

        let r = flip(&w(1, 0, 1, 1, 1, rat(1, 1)), &rat(1, 1)).unwrap();
        assert!(matches!(r.kind, FlipKind::DivisorialContraction { .. }));
        assert!(matches!(flip(&w(2, 1, 1, 1, 3, rat(1, 1)), &rat(1, 1)), Err(FlipError::NotKNegative { .. })));
    }

    #[test]
    fn ascending_branch_is_refused() {
        assert!(matches!(flip(&w(20, 13, 3, 2, 1, rat(1, 1)), &rat(1, 1)), Err(FlipError::NotDescending(_))));
    }

    #[test]
    fn cohomology() {
        let plus = w(2, 1, 1, 1, 3, rat(3, 2));
        let c = cohomology_path(&plus, &rat(1, 10), &rat(1, 1)).unwrap();
        assert_eq!((c.start.clone(), c.end.clone(), c.affine_distance.clone()), (rat(3, 1), rat(-1, 2), rat(7, 2)));
        assert_eq!(c.start, pairing_data(&plus).area_on_generator);
        let minus = initial_antiflip(&plus, &rat(1, 10)).unwrap().minus;
        assert_eq!(c.end, -pairing_data(&minus).area_on_generator);
        let gw = c.gap_window.unwrap();
        assert_eq!(gw.low, rat(3, 1));
        assert_eq!(c.epsilon_exact.unwrap().cmp_rat(&(&gw.high - &gw.low)), std::cmp::Ordering::Greater);

        let gplus = w(4, 3, 5, 2, 1, rat(7, 20));
        let g = cohomology_path(&gplus, &rat(1, 100), &rat(1, 1)).unwrap();
        assert_eq!((g.start, g.end, g.affine_distance), (rat(7, 1), rat(-39, 20), rat(7, 1) + rat(39, 20)));
        assert!(matches!(cohomology_path(&w(2, 1, 1, 1, 3, rat(1, 1)), &rat(1, 10), &rat(1, 1)), Err(FlipError::NotCanonical { .. })));
    }
}
