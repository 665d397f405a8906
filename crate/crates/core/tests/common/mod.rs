#![allow(dead_code)]

use atoric::exactmath::num::{rat, Rat};
use atoric::wedge::WedgeParams;
use num_integer::Integer;
use proptest::prelude::*;

/// Vertex labels in the left convention: `(1,0)` and coprime `0 < q < p`.
pub fn left_pairs(pmax: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(1, 0)];
    for p in 2..=pmax {
        out.extend((1..p).filter(|q| p.gcd(q) == 1).map(|q| (p, q)));
    }
    out
}

/// Vertex labels in the right convention: `(1,1)` and coprime `0 < q < p`.
pub fn right_pairs(pmax: i64) -> Vec<(i64, i64)> {
    let mut out = left_pairs(pmax);
    out[0] = (1, 1);
    out
}

pub fn valid_wedges(pmax: i64, cs: &[i64], a: Rat) -> Vec<WedgeParams> {
    let mut out = Vec::new();
    for &(p1, q1) in &left_pairs(pmax) {
        for &(p2, q2) in &right_pairs(pmax) {
            for &c in cs {
                if let Ok(w) = WedgeParams::new(p1, q1, p2, q2, c, a.clone()).validated() {
                    out.push(w);
                }
            }
        }
    }
    out
}

fn pair_strategy(pmax: i64, smooth_q: i64) -> impl Strategy<Value = (i64, i64)> {
    (1..=pmax, 0..pmax).prop_filter_map("coprime label", move |(p, q)| {
        if p == 1 {
            Some((1, smooth_q))
        } else {
            let q = q % p;
            (q > 0 && p.gcd(&q) == 1).then_some((p, q))
        }
    })
}

pub fn left_pair(pmax: i64) -> impl Strategy<Value = (i64, i64)> {
    pair_strategy(pmax, 0)
}

pub fn right_pair(pmax: i64) -> impl Strategy<Value = (i64, i64)> {
    pair_strategy(pmax, 1)
}

pub fn edge_length() -> impl Strategy<Value = Rat> {
    (1i64..50, 1i64..50).prop_map(|(n, d)| rat(n, d))
}

/// Any valid wedge with the given bounds.
pub fn wedge(pmax: i64, cmax: i64) -> impl Strategy<Value = WedgeParams> {
    (left_pair(pmax), right_pair(pmax), 1..=cmax, edge_length()).prop_filter_map("valid wedge", |((p1, q1), (p2, q2), c, a)| {
        WedgeParams::new(p1, q1, p2, q2, c, a).validated().ok()
    })
}
