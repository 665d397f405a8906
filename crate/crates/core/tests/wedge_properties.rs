mod common;

use atoric::exactmath::num::{int, modulo, rat, Int};
use atoric::exactmath::ExtRational;
use atoric::lattice::{monodromy, vertex_type, CutSide, LatticeVector, VertexType};
use atoric::wedge::{
    b1_direction, b2_direction, boundary_chain, chain_delta_omega, from_chain, invariants, marked_cf, r1_direction,
    r2_direction, realize, standard_normalization, WedgeParams,
};
use common::{left_pairs, right_pairs, valid_wedges, wedge};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn edge_dir(w: &WedgeParams) -> LatticeVector {
    let g = realize(w);
    let (dx, dy) = g.vertices[1].sub(&g.vertices[0]);
    assert!(dx.is_integer() && dy.is_integer(), "{w}: compact edge is not integral");
    LatticeVector::new(dx.to_integer(), dy.to_integer()).primitive().unwrap()
}

fn x1_type(w: &WedgeParams) -> VertexType {
    vertex_type(&edge_dir(w), &realize(w).rays[0]).unwrap()
}

fn x2_type(w: &WedgeParams) -> VertexType {
    vertex_type(&realize(w).rays[1], &edge_dir(w).neg()).unwrap()
}

fn expected(p: &Int, q: &Int) -> VertexType {
    if p.is_one() {
        VertexType::new(int(1), int(0))
    } else {
        VertexType::new(p * p, p * q - 1)
    }
}

#[test]
fn closed_formulas_agree_with_boundary_chain() {
    let ws = valid_wedges(12, &[1, 2, 3], rat(1, 1));
    assert!(ws.len() > 5000);
    for w in &ws {
        let inv = invariants(w);
        let mc = boundary_chain(w);
        let ExtRational::Finite(r) = marked_cf(&mc) else { panic!("{w}: chain {mc} is infinite") };
        assert_eq!(r.numer(), &inv.delta, "{w}");
        assert_eq!(modulo(r.denom(), &inv.delta), inv.omega, "{w}");
        assert_eq!(chain_delta_omega(&mc), Some((inv.delta.clone(), inv.omega.clone())), "{w}");
        assert_eq!(&from_chain(&mc, w.a.clone()).unwrap(), w);
    }
}

#[test]
fn realized_vertices_are_wahl() {
    for w in valid_wedges(20, &[1, 2, 3], rat(1, 1)).iter().chain(&valid_wedges(8, &(4..=20).collect::<Vec<_>>(), rat(1, 1))) {
        assert_eq!(x1_type(w), expected(&w.p1, &w.q1), "{w}");
        assert_eq!(x2_type(w), expected(&w.p2, &w.q2), "{w}");
    }
}

#[test]
fn normalization_reaches_standard_wedge() {
    for w in valid_wedges(12, &[1, 2, 3], rat(1, 1)) {
        let m = standard_normalization(&w);
        assert!(m.det().is_one());
        let inv = invariants(&w);
        assert_eq!(m.apply(&r1_direction(&w)), LatticeVector::new(int(0), int(1)), "{w}");
        let r2 = m.apply(&r2_direction(&w));
        assert_eq!(r2.x, inv.delta, "{w}");
        assert!(modulo(&(&r2.y - &inv.omega), &inv.delta).is_zero(), "{w}");
    }
}

#[test]
fn monodromies_fix_cut_directions() {
    for &(p, q) in &left_pairs(30) {
        let w = WedgeParams::new(p, q, 1, 1, 1, rat(1, 1));
        let m = monodromy(CutSide::B1, &w);
        assert!(m.m.det().is_one());
        let d = b1_direction(&w);
        let d = if p == 1 { LatticeVector::new(int(1), int(1)) } else { d };
        assert_eq!(m.apply_vector(&d), d, "B1 at ({p},{q})");
    }
    for &(p, q) in &right_pairs(30) {
        for c in 1..=30 {
            let w = WedgeParams::new(1, 0, p, q, c, rat(1, 1));
            let m = monodromy(CutSide::B2, &w);
            assert!(m.m.det().is_one());
            let d = b2_direction(&w);
            assert_eq!(d, LatticeVector::new(int(c * p - q), int(p)));
            assert_eq!(m.apply_vector(&d), d, "B2 at ({p},{q}), c = {c}");
        }
    }
}

proptest! {
    #[test]
    fn realized_cuts_are_eigenvectors(w in wedge(40, 6)) {
        for cut in realize(&w).cuts {
            prop_assert!(cut.monodromy.m.det().is_one());
            prop_assert_eq!(cut.monodromy.apply_vector(&cut.direction), cut.direction);
        }
    }

    #[test]
    fn chain_round_trip(w in wedge(60, 6)) {
        prop_assert_eq!(from_chain(&boundary_chain(&w), w.a.clone()).unwrap(), w);
    }
}
