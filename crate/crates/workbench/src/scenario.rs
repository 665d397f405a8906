//! Fixed end-to-end pipelines with expected values, each run producing a
//! deterministic PASS/FAIL report.

use std::fmt;

use atoric::exactmath::num::{show_rat, int, rat, serde_int, serde_int_pairs, serde_int_vec, serde_rat, Int, Rat};
use atoric::flip::{antiflip_in_bounds, Bounds};
use atoric::hjchain::{k1a_parallelism, MarkedChain};
use atoric::lattice::{vertex_type, LatticeVector, Mat2, PlanePoint};
use atoric::mori::{generate, max_antiflip_param, mutation_orbit, orbit_pairs, MoriSeed};
use atoric::polygon::{BranchCut, GeoPolygon};
use atoric::wedge::{from_chain, r2_direction, WedgeParams};
use serde::{Deserialize, Serialize};

use crate::curve::verify_branch_curve;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    /// A documented divergence from a printed value that is not a failure.
    Note,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub stage: String,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    fn new(name: &str) -> Self {
        Report { name: name.to_string(), checks: Vec::new(), pass: true }
    }

    fn push(&mut self, stage: &str, name: &str, expected: String, actual: String, status: Status) {
        if status == Status::Fail {
            self.pass = false;
        }
        self.checks.push(Check { stage: stage.to_string(), name: name.to_string(), expected, actual, status });
    }

    fn compare<T: PartialEq>(&mut self, stage: &str, name: &str, expected: &T, actual: &T, show: impl Fn(&T) -> String) {
        let status = if expected == actual { Status::Pass } else { Status::Fail };
        self.push(stage, name, show(expected), show(actual), status);
    }

    fn fail(&mut self, stage: &str, name: &str, expected: String, error: impl fmt::Display) {
        self.push(stage, name, expected, format!("error: {error}"), Status::Fail);
    }

    pub fn failed_stage(&self) -> Option<&str> {
        self.checks.iter().find(|c| c.status == Status::Fail).map(|c| c.stage.as_str())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}", self.name)?;
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Note => "NOTE",
            };
            writeln!(f, "{tag} [{}] {}: expected {}, got {}", c.stage, c.name, c.expected, c.actual)?;
        }
        match self.failed_stage() {
            None => write!(f, "PASS {}", self.name),
            Some(stage) => write!(f, "FAIL {} (first failure at stage {stage})", self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub plus: WedgeParams,
    #[serde(with = "serde_int")]
    pub delta: Int,
    pub minus: WedgeParams,
    #[serde(rename = "newBounds")]
    pub new_bounds: Bounds,
    pub certificate: bool,
    /// Mori sequence prefix in the display convention.
    #[serde(with = "serde_int_pairs")]
    pub sequence: Vec<(Int, Int)>,
    /// q-values as printed in the literature, when they diverge from the recursion.
    #[serde(rename = "printedQ", default, skip_serializing_if = "Option::is_none")]
    pub printed_q: Option<PrintedQ>,
    #[serde(rename = "orbitPairs", with = "serde_int_pairs")]
    pub orbit_pairs: Vec<(Int, Int)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedQ(#[serde(with = "serde_int_vec")] pub Vec<Int>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(rename = "inputChain")]
    pub input_chain: String,
    #[serde(rename = "aPlus", with = "serde_rat")]
    pub a_plus: Rat,
    pub bounds: Bounds,
    #[serde(rename = "aMinus", with = "serde_rat")]
    pub a_minus: Rat,
    pub n: usize,
    pub expected: Expected,
}

fn pairs(v: &[(i64, i64)]) -> Vec<(Int, Int)> {
    v.iter().map(|&(p, q)| (int(p), int(q))).collect()
}

fn show_pairs(v: &Vec<(Int, Int)>) -> String {
    v.iter().map(|(p, q)| format!("({p},{q})")).collect::<Vec<_>>().join(",")
}

fn show_ints(v: &Vec<Int>) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn quintic() -> Scenario {
    Scenario {
        name: "quintic".into(),
        input_chain: "[4]-3-[]".into(),
        a_plus: rat(3, 2),
        bounds: Bounds { l1: rat(1, 1), l2: rat(1, 1) },
        a_minus: rat(1, 10),
        n: 5,
        expected: Expected {
            plus: WedgeParams::new(2, 1, 1, 1, 3, rat(3, 2)),
            delta: int(3),
            minus: WedgeParams::new(1, 0, 5, 3, 1, rat(1, 10)),
            new_bounds: Bounds { l1: rat(5, 2), l2: rat(9, 10) },
            certificate: true,
            sequence: pairs(&[(1, 1), (5, 3), (14, 9), (37, 24), (97, 63), (254, 165)]),
            printed_q: None,
            orbit_pairs: pairs(&[(5, 3), (14, 9), (37, 24), (97, 63), (254, 165)]),
        },
    }
}

pub fn godeaux() -> Scenario {
    Scenario {
        name: "godeaux".into(),
        input_chain: "[2,2,6]-1-[3,5,2]".into(),
        a_plus: rat(7, 20),
        bounds: Bounds { l1: rat(1, 1), l2: rat(1, 1) },
        a_minus: rat(1, 100),
        n: 4,
        expected: Expected {
            plus: WedgeParams::new(4, 3, 5, 2, 1, rat(7, 20)),
            delta: int(7),
            minus: WedgeParams::new(5, 2, 39, 17, 1, rat(1, 100)),
            new_bounds: Bounds { l1: rat(27, 20), l2: rat(99, 100) },
            certificate: true,
            sequence: pairs(&[(5, 2), (39, 17), (268, 117), (1837, 802), (12591, 5497)]),
            printed_q: Some(PrintedQ([2, 17, 49, 326, 2233].iter().map(|&q| int(q)).collect())),
            orbit_pairs: pairs(&[(39, 17), (268, 117), (1837, 802), (12591, 5497)]),
        },
    }
}

/// The quintic fixture with a deliberately wrong expected δ.
pub fn quintic_wrong_delta() -> Scenario {
    let mut s = quintic();
    s.name = "quintic-wrong-delta".into();
    s.expected.delta = int(4);
    s
}

pub fn run_scenario(s: &Scenario) -> Report {
    let mut r = Report::new(&s.name);
    let e = &s.expected;

    let mc = match MarkedChain::parse(&s.input_chain) {
        Ok(mc) => mc,
        Err(err) => {
            r.fail("from_chain", "parse", s.input_chain.clone(), err);
            return r;
        }
    };
    let plus = match from_chain(&mc, s.a_plus.clone()) {
        Ok(w) => w,
        Err(err) => {
            r.fail("from_chain", "Π⁺", e.plus.to_string(), err);
            return r;
        }
    };
    r.compare("from_chain", "Π⁺", &e.plus, &plus, |w| w.to_string());

    let delta = plus.sigma();
    r.compare("invariants", "δ = σ(Π⁺)", &e.delta, &delta, |d| d.to_string());

    let bounded = match antiflip_in_bounds(&plus, &s.bounds.l1, &s.bounds.l2, &s.a_minus) {
        Ok(b) => b,
        Err(err) => {
            r.fail("initial_antiflip", "Π⁻", e.minus.to_string(), err);
            return r;
        }
    };
    let minus = bounded.result.minus.clone();
    r.compare("initial_antiflip", "Π⁻", &e.minus, &minus, |w| w.to_string());
    match max_antiflip_param(&s.bounds.l2, &delta) {
        Ok(cap) => {
            let ok = cap.exact.cmp_rat(&s.a_minus) == std::cmp::Ordering::Greater;
            r.push(
                "initial_antiflip",
                "a⁻ below cap ℓ₂(1 − λ₋²)",
                format!("a⁻ < {} ≈ {}", cap.exact, cap.exact.to_decimal(6)),
                show_rat(&s.a_minus),
                if ok { Status::Pass } else { Status::Fail },
            );
        }
        Err(err) => r.fail("initial_antiflip", "a⁻ below cap ℓ₂(1 − λ₋²)", "a cap".into(), err),
    }
    r.compare("initial_antiflip", "new bounds (ℓ₁, ℓ₂)", &e.new_bounds, &bounded.new_bounds, |b| {
        format!("({}, {})", show_rat(&b.l1), show_rat(&b.l2))
    });

    let verdict = bounded.budget.as_ref().map_or("no budget".to_string(), |b| format!("{:?}", b.verdict));
    r.push(
        "budget",
        "infinite mutability certificate",
        if e.certificate { "granted".into() } else { "withheld".into() },
        format!("{} ({verdict})", if bounded.certificate.is_some() { "granted" } else { "withheld" }),
        if bounded.certificate.is_some() == e.certificate { Status::Pass } else { Status::Fail },
    );

    let seq = generate(&MoriSeed::of_wedge(&minus), e.sequence.len());
    let shown = seq.display_pairs();
    let p_exp: Vec<Int> = e.sequence.iter().map(|(p, _)| p.clone()).collect();
    let p_act: Vec<Int> = shown.iter().map(|(p, _)| p.clone()).collect();
    r.compare("mori", "p-values", &p_exp, &p_act, show_ints);
    let q_exp: Vec<Int> = e.sequence.iter().map(|(_, q)| q.clone()).collect();
    let q_act: Vec<Int> = shown.iter().map(|(_, q)| q.clone()).collect();
    r.compare("mori", "q-values (recursion)", &q_exp, &q_act, show_ints);
    if let Some(PrintedQ(printed)) = &e.printed_q {
        let status = if *printed == q_act { Status::Pass } else { Status::Note };
        r.push("mori", "q-values as printed", show_ints(printed), show_ints(&q_act), status);
    }
    for (i, c) in seq.certificates.iter().enumerate() {
        if c.det != delta || !c.coprime || c.p_invariant != seq.certificates[0].p_invariant {
            r.push("mori", &format!("certificate {i}"), "det = δ, coprime, invariant constant".into(), format!("{c:?}"), Status::Fail);
        }
    }

    match mutation_orbit(&minus, s.n) {
        Ok(orbit) => {
            r.compare("orbit", "orbit pairs", &e.orbit_pairs, &orbit_pairs(&orbit), show_pairs);
        }
        Err(err) => r.fail("orbit", "orbit pairs", show_pairs(&e.orbit_pairs), err),
    }
    r
}

/// The moment triangle of ℂP² with three nodal-trade cuts toward its barycentre.
pub fn cp2_triangle() -> GeoPolygon {
    let p = PlanePoint::from_ints;
    let v = |x, y| LatticeVector::new(int(x), int(y));
    let b = BranchCut::nodal(p(0, 0), p(2, 2), v(1, 1));
    let b = BranchCut { coorientation: v(-1, 1), monodromy: b.monodromy.inverse(), ..b };
    GeoPolygon {
        vertices: vec![p(0, 0), p(6, 0), p(0, 6)],
        rays: vec![],
        cuts: vec![b, BranchCut::nodal(p(6, 0), p(4, 1), v(-2, 1)), BranchCut::nodal(p(0, 6), p(1, 4), v(1, -2))],
    }
}

fn show_points(v: &Vec<PlanePoint>) -> String {
    v.iter().map(|p| format!("({},{})", p.x, p.y)).collect::<Vec<_>>().join(",")
}

pub fn run_cp2() -> Report {
    let mut r = Report::new("cp2");
    let t = cp2_triangle();
    let m = match t.mutate_at(0) {
        Ok(m) => m,
        Err(err) => {
            r.fail("mutate", "vertices", "(0,-6),(0,6),(3,3)".into(), err);
            return r;
        }
    };
    let mut vs = m.vertices.clone();
    vs.sort_by(|a, b| (&a.x, &a.y).cmp(&(&b.x, &b.y)));
    let p = PlanePoint::from_ints;
    r.compare("mutate", "vertices", &vec![p(0, -6), p(0, 6), p(3, 3)], &vs, show_points);
    let c = m.cuts[0].canonical();
    r.compare("mutate", "new cut base", &p(3, 3), &c.base, |p| format!("({},{})", p.x, p.y));
    r.compare("mutate", "monodromy", &Mat2::from_i64s([[0, 1], [-1, 2]]), &c.monodromy.m, |m| format!("{:?}", m.rows()));
    r
}

pub fn run_k1a() -> Report {
    let mut r = Report::new("k1a");
    let w = WedgeParams::new(5, 3, 14, 9, 1, rat(1, 1));
    let t = vertex_type(&r2_direction(&w), &LatticeVector::new(int(-1), int(0))).map(|t| (t.p, t.q));
    r.compare("k1a", "right vertex type", &Ok((int(196), int(125))), &t, |t| format!("{t:?}"));
    let k = k1a_parallelism(&w);
    r.compare("k1a", "B₁ direction", &LatticeVector::new(int(2), int(5)), &k.cut_direction, |v| format!("({},{})", v.x, v.y));
    r.compare("k1a", "parallel resolved edge index", &Some(3), &k.index, |i| format!("{i:?}"));
    let dirs: Vec<String> = k.resolution.iter().map(|e| format!("({},{})", e.direction.x, e.direction.y)).collect();
    r.push("k1a", "resolution directions", "-".into(), dirs.join(","), Status::Pass);
    r
}

pub fn run_curve() -> Report {
    let mut r = Report::new("curve");
    let c = verify_branch_curve();
    for ch in &c.checks {
        let var = if ch.name == "x=0" { "y" } else { "x" };
        let actual = ch.square_root.as_ref().map_or("not a square".to_string(), |s| format!("({})^2", s.render(var)));
        r.push(
            "branch_curve",
            &format!("restriction {} = {}", ch.name, ch.restriction.render(var)),
            format!("({})^2 with {} double roots", ch.expected_root.render(var), ch.expected_double_roots),
            format!("{actual} with {} double roots", ch.double_roots),
            if ch.pass { Status::Pass } else { Status::Fail },
        );
    }
    r
}

pub const SCENARIOS: &[&str] = &["quintic", "godeaux", "cp2", "k1a", "curve"];

pub fn run_named(name: &str) -> Option<Report> {
    Some(match name {
        "quintic" => run_scenario(&quintic()),
        "godeaux" => run_scenario(&godeaux()),
        "cp2" => run_cp2(),
        "k1a" => run_k1a(),
        "curve" => run_curve(),
        _ => return None,
    })
}
