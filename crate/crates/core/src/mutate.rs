//! Mutability, parametric mutation of wedges, geometric mutation of decorated
//! polygons, and the visible −1-sphere of the borderline case.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{rat_int, serde_int, serde_rat, Int, Rat};
use crate::lattice::{LatticeVector, PlanePoint};
use crate::polygon::{GeoPolygon, PolygonError};
use crate::wedge::{
    b1_direction, b2_direction, r1_direction, r2_direction, realize, validate, Side, WedgeError, WedgeParams,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutabilityStatus {
    Mutable,
    Borderline,
    Immutable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MutabilityWitness {
    /// Where the extended cut meets the far ray, at affine parameter `along_ray`.
    Intersection {
        point: PlanePoint,
        #[serde(rename = "alongRay", with = "serde_rat")]
        along_ray: Rat,
    },
    /// The extended cut and the far ray share this direction.
    Parallel { direction: LatticeVector },
    /// `cross` is `cross(R_near, B_far)` (left) or `cross(B_near, R_far)` (right),
    /// nonpositive when the extended cut misses the ray.
    Separation {
        #[serde(with = "serde_int")]
        cross: Int,
        #[serde(with = "serde_int")]
        shear: Int,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutability {
    pub side: Side,
    pub status: MutabilityStatus,
    /// `δp₂ − p₁` (right) or `δp₁ − p₂` (left), with `δ = p₁q₂ − p₂q₁`; it
    /// decides the status only when `c = 1`, otherwise the side is immutable.
    #[serde(with = "serde_int")]
    pub criterion: Int,
    pub witness: MutabilityWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MutateError {
    #[error("{side:?} side is {status:?}, not mutable", side = .0.side, status = .0.status)]
    NotMutable(Box<Mutability>),
    #[error("mutation produced invalid parameters: {0}")]
    Inconsistent(WedgeError),
    #[error("{0:?} side is not borderline")]
    NotBorderline(Side),
    #[error(transparent)]
    Geometry(#[from] PolygonError),
}

pub fn mori_delta(w: &WedgeParams) -> Int {
    &w.p1 * &w.q2 - &w.p2 * &w.q1
}

pub fn classify(w: &WedgeParams, side: Side) -> Mutability {
    let delta = mori_delta(w);
    let criterion = match side {
        Side::Right => &delta * &w.p2 - &w.p1,
        Side::Left => &delta * &w.p1 - &w.p2,
    };
    let status = if !w.c.is_one() || criterion.is_negative() {
        MutabilityStatus::Immutable
    } else if criterion.is_zero() {
        MutabilityStatus::Borderline
    } else {
        MutabilityStatus::Mutable
    };

    // Geometric witness on the realization; it must agree with the arithmetic.
    let x1 = PlanePoint::origin();
    let x2 = PlanePoint::new(w.a.clone(), Rat::zero());
    let (cut_dir, ray_dir, ray_base, cross, ray_len_num) = match side {
        Side::Right => {
            let d = b1_direction(w);
            let r = r2_direction(w);
            let cross = d.cross(&r);
            (d, r, x2, cross, &w.a * rat_int(&w.p1))
        }
        Side::Left => {
            let d = b2_direction(w);
            let r = r1_direction(w);
            let cross = r.cross(&d);
            (d, r, x1, cross, &w.a * rat_int(&w.p2))
        }
    };
    let witness = if cross.is_zero() {
        MutabilityWitness::Parallel { direction: cut_dir }
    } else if cross.is_positive() {
        let t = ray_len_num / rat_int(&cross);
        MutabilityWitness::Intersection { point: ray_base.add_vec(&ray_dir, &t), along_ray: t }
    } else {
        MutabilityWitness::Separation { cross: cross.clone(), shear: w.c.clone() }
    };
    let geometric = match &witness {
        MutabilityWitness::Intersection { .. } => MutabilityStatus::Mutable,
        MutabilityWitness::Parallel { .. } => MutabilityStatus::Borderline,
        MutabilityWitness::Separation { .. } => MutabilityStatus::Immutable,
    };
    assert_eq!(geometric, status, "geometric and arithmetic mutability disagree for {w}");
    Mutability { side, status, criterion, witness }
}

/// Brings a left label into `0 ≤ q < p`, compensating with the shear.
fn canonical_left(p: Int, q: Int, c: Int) -> (Int, Int, Int) {
    let (j, r) = q.div_mod_floor(&p);
    (p, r, c + j)
}

/// Brings a right label into `0 < q ≤ p`, compensating with the shear.
fn canonical_right(p: Int, q: Int, c: Int) -> (Int, Int, Int) {
    let (k, r) = (&q - Int::one()).div_mod_floor(&p);
    (p, r + 1, c - k)
}

/// Smooth labels are relabelled when a vertex changes side.
fn to_left(p: &Int, q: &Int) -> Int {
    if p.is_one() {
        Int::zero()
    } else {
        q.clone()
    }
}

fn to_right(p: &Int, q: &Int) -> Int {
    if p.is_one() {
        Int::one()
    } else {
        q.clone()
    }
}

pub fn mutate(w: &WedgeParams, side: Side) -> Result<WedgeParams, MutateError> {
    let m = classify(w, side);
    if m.status != MutabilityStatus::Mutable {
        return Err(MutateError::NotMutable(Box::new(m)));
    }
    let delta = -w.sigma();
    let out = match side {
        Side::Right => {
            let p3 = &delta * &w.p2 - &w.p1;
            let q3 = &delta * &w.q2 - &w.q1;
            let a = &w.a * rat_int(&w.p1) / rat_int(&p3);
            let (p3, q3, c) = canonical_right(p3, q3, Int::one());
            let q1 = to_left(&w.p2, &w.q2);
            validate(w.p2.clone(), q1, p3, q3, c, a)
        }
        Side::Left => {
            let p0 = &delta * &w.p1 - &w.p2;
            let q0 = &delta * &w.q1 - &w.q2;
            let a = &w.a * rat_int(&w.p2) / rat_int(&p0);
            let (p0, q0, c) = canonical_left(p0, q0, Int::one());
            let q2 = to_right(&w.p1, &w.q1);
            validate(p0, q0, w.p1.clone(), q2, c, a)
        }
    };
    out.map_err(MutateError::Inconsistent)
}

pub fn geometric_mutate(poly: &GeoPolygon, cut_index: usize) -> Result<GeoPolygon, MutateError> {
    Ok(poly.mutate_at(cut_index)?)
}

/// Mutates the realization of `w` along `B₁` (right) or `B₂` (left) and
/// returns it in wedge normal form.
pub fn geometric_mutate_wedge(w: &WedgeParams, side: Side) -> Result<GeoPolygon, MutateError> {
    let idx = match side {
        Side::Right => 0,
        Side::Left => 1,
    };
    Ok(realize(w).mutate_at(idx)?.renormalize()?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Edge {
    R1,
    R2,
}

/// Visible −1-sphere over a segment from a focus-focus point to the far ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusOneSphere {
    pub from: PlanePoint,
    /// Segment direction in the base (perpendicular to the cut, toward the ray).
    pub direction: LatticeVector,
    /// The collapsing cycle: the cut direction, parallel to the ray hit.
    pub cycle: LatticeVector,
    pub hits: Edge,
    pub at: PlanePoint,
}

/// The −1-sphere of a wedge that is borderline on `side`: for the left side
/// it joins `z₂` to `R₁`, for the right side `z₁` to `R₂`.
pub fn minus_one_sphere(w: &WedgeParams, side: Side) -> Result<MinusOneSphere, MutateError> {
    if classify(w, side).status != MutabilityStatus::Borderline {
        return Err(MutateError::NotBorderline(side));
    }
    let g = realize(w);
    let (cut, ray_base, ray, hits) = match side {
        Side::Left => (&g.cuts[1], &g.vertices[0], &g.rays[0], Edge::R1),
        Side::Right => (&g.cuts[0], &g.vertices[1], &g.rays[1], Edge::R2),
    };
    let d = &cut.direction;
    let mut v = LatticeVector::new(d.y.clone(), -d.x.clone());
    // Point toward the ray: the ray's base is on the side v points to.
    let (bx, by) = ray_base.sub(&cut.terminus);
    if (rat_int(&v.x) * bx + rat_int(&v.y) * by).is_negative() {
        v = v.neg();
    }
    // z + t·v on the ray line: cross(ray, z + t v − base) = 0.
    let s0 = cut.terminus.side_of(ray_base, ray);
    let t = -s0 / rat_int(&ray.cross(&v));
    Ok(MinusOneSphere {
        from: cut.terminus.clone(),
        at: cut.terminus.add_vec(&v, &t),
        direction: v,
        cycle: d.clone(),
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::num::{int, rat};
    use crate::lattice::lv;
    use crate::wedge::invariants;

    fn w(p1: i64, q1: i64, p2: i64, q2: i64, c: i64, a: Rat) -> WedgeParams {
        WedgeParams::new(p1, q1, p2, q2, c, a)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&w(2, 1, 1, 1, 3, rat(3, 2)), Side::Right).status, MutabilityStatus::Immutable);
        let m = classify(&w(1, 0, 5, 3, 1, rat(1, 1)), Side::Right);
        assert_eq!(m.status, MutabilityStatus::Mutable);
        assert_eq!(m.criterion, int(14));
        assert_eq!(
            m.witness,
            MutabilityWitness::Intersection { point: PlanePoint::new(rat(25, 14), rat(25, 14)), along_ray: rat(1, 14) }
        );
        let b = classify(&w(1, 0, 1, 1, 1, rat(1, 1)), Side::Right);
        assert_eq!(b.status, MutabilityStatus::Borderline);
        assert_eq!(b.witness, MutabilityWitness::Parallel { direction: lv(1, 1) });
        assert_eq!(classify(&w(1, 0, 1, 1, 1, rat(1, 1)), Side::Left).status, MutabilityStatus::Borderline);
    }

    #[test]
    fn mutate_examples() {
        let a = rat(3, 7);
        let p = w(1, 0, 5, 3, 1, a.clone());
        let r = mutate(&p, Side::Right).unwrap();
        assert_eq!(r, w(5, 3, 14, 9, 1, &a / rat(14, 1)));
        let rr = mutate(&r, Side::Right).unwrap();
        assert_eq!(rr, w(14, 9, 37, 24, 1, &a * rat(5, 14 * 37)));
        assert_eq!(mutate(&w(5, 3, 14, 9, 1, a.clone()), Side::Left).unwrap(), w(1, 0, 5, 3, 1, &a * rat(14, 1)));
        assert_eq!(mutate(&r, Side::Left).unwrap(), p);
        assert!(matches!(mutate(&w(2, 1, 1, 1, 3, rat(1, 1)), Side::Right), Err(MutateError::NotMutable(_))));
        for s in [&r, &rr] {
            let i = invariants(s);
            assert_eq!((i.delta, i.omega), (int(11), int(3)));
        }
    }

    #[test]
    fn geometric_matches_parametric() {
        for p in [w(1, 0, 5, 3, 1, rat(1, 1)), w(5, 3, 14, 9, 1, rat(2, 3)), w(5, 2, 39, 17, 1, rat(1, 5))] {
            let g = geometric_mutate_wedge(&p, Side::Right).unwrap();
            let expect = realize(&mutate(&p, Side::Right).unwrap());
            assert!(g.same_shape(&expect), "{p}: {g:?}\nvs {expect:?}");
        }
        let p = w(5, 3, 14, 9, 1, rat(1, 1));
        let g = geometric_mutate_wedge(&p, Side::Left).unwrap();
        assert!(g.same_shape(&realize(&mutate(&p, Side::Left).unwrap())));
    }

    #[test]
    fn borderline_escapes_geometrically() {
        let p = w(1, 0, 1, 1, 1, rat(1, 1));
        assert!(matches!(
            geometric_mutate_wedge(&p, Side::Right),
            Err(MutateError::Geometry(PolygonError::CutEscapes(0)))
        ));
    }

    #[test]
    fn minus_one_spheres() {
        let p = w(1, 0, 1, 1, 1, rat(2, 1));
        let s = minus_one_sphere(&p, Side::Left).unwrap();
        assert_eq!(s.cycle, lv(0, 1));
        assert!(s.cycle.is_parallel(&r1_direction(&p)));
        assert_eq!(s.hits, Edge::R1);
        assert_eq!(s.direction, lv(-1, 0));
        assert_eq!(s.at.x, rat(0, 1));

        // The mirror image: z₁ joined to R₂, as in the borderline picture.
        let m = minus_one_sphere(&p, Side::Right).unwrap();
        assert_eq!(m.cycle, lv(1, 1));
        assert_eq!(m.direction, lv(1, -1));
        assert_eq!(m.hits, Edge::R2);
        assert_eq!(m.at.side_of(&PlanePoint::new(rat(2, 1), rat(0, 1)), &lv(1, 1)), rat(0, 1));

        assert!(matches!(
            minus_one_sphere(&w(1, 0, 5, 3, 1, rat(1, 1)), Side::Right),
            Err(MutateError::NotBorderline(Side::Right))
        ));
    }
}
