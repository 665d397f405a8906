//! Mori sequences `p_{i+2} = δp_{i+1} − p_i`, `q_{i+2} = δq_{i+1} − q_i`,
//! their asymptotics, and the affine-length budget for infinitely many right
//! mutations inside a bounded subpolygon.

use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::num::{int, rat_int, serde_int, serde_int_pairs, serde_rat, serde_rat_vec, Int, Rat};
use crate::exactmath::{cf_division_by_zero, eigenvalues, wahl_chain, Chain, QuadraticSurd};
use crate::hjchain::MarkedChain;
use crate::mutate::{mutate, MutateError};
use crate::wedge::{Side, WedgeParams};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoriError {
    #[error("({0},{1}) are not coprime")]
    NotCoprime(Int, Int),
    #[error("({0},{1}) needs 0 <= q <= p with p > 0")]
    OutOfRange(Int, Int),
    #[error("delta = {0} must be positive")]
    NonPositiveDelta(Int),
    #[error("p1^2 + p2^2 - delta*p1*p2 = {0} must be positive")]
    NonPositiveSeedDelta(Int),
    #[error("the marked chain divides by zero at entry {0}")]
    ChainDivisionByZero(usize),
    #[error("wedge must be K-negative with c = 1 (sigma = {sigma}, c = {c})")]
    WrongWedge { sigma: Int, c: Int },
    #[error("wedge is not infinitely right-mutable (delta = {delta}, p1 = {p1}, p2 = {p2})")]
    NotInfinitelyMutable { delta: Int, p1: Int, p2: Int },
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(Int),
    #[error("l2 must be positive")]
    NonPositiveLength,
    #[error("mutation {step} failed: {source}")]
    MutabilityLost { step: usize, source: Box<MutateError> },
    #[error("only {fits} mutations are certified to fit, {requested} requested")]
    BudgetExceeded { fits: usize, requested: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoriSeed {
    #[serde(with = "serde_int")]
    pub p1: Int,
    #[serde(with = "serde_int")]
    pub q1: Int,
    #[serde(with = "serde_int")]
    pub p2: Int,
    #[serde(with = "serde_int")]
    pub q2: Int,
    #[serde(with = "serde_int")]
    pub delta: Int,
}

impl MoriSeed {
    pub fn seed_delta(&self) -> Int {
        &self.p1 * &self.p1 + &self.p2 * &self.p2 - &self.delta * &self.p1 * &self.p2
    }

    pub fn of_wedge(w: &WedgeParams) -> MoriSeed {
        MoriSeed { p1: w.p1.clone(), q1: w.q1.clone(), p2: w.p2.clone(), q2: w.q2.clone(), delta: -w.sigma() }
    }
}

fn check_pair(p: &Int, q: &Int) -> Result<(), MoriError> {
    if !p.is_positive() || q.is_negative() || q > p {
        return Err(MoriError::OutOfRange(p.clone(), q.clone()));
    }
    if !p.gcd(q).is_one() {
        return Err(MoriError::NotCoprime(p.clone(), q.clone()));
    }
    Ok(())
}

fn block(p: &Int, q: &Int) -> Chain {
    if p.is_one() {
        Chain::empty()
    } else {
        wahl_chain(p, q).expect("checked pair")
    }
}

/// Validates a seed. A leading `(1,1)` is read in the display convention and
/// stored as `(1,0)`.
pub fn validate_seed(p1: Int, q1: Int, p2: Int, q2: Int) -> Result<MoriSeed, MoriError> {
    let q1 = if p1.is_one() { Int::zero() } else { q1 };
    check_pair(&p1, &q1)?;
    check_pair(&p2, &q2)?;
    let delta = &p1 * &q2 - &p2 * &q1;
    if !delta.is_positive() {
        return Err(MoriError::NonPositiveDelta(delta));
    }
    let seed = MoriSeed { p1, q1, p2, q2, delta };
    let sd = seed.seed_delta();
    if !sd.is_positive() {
        return Err(MoriError::NonPositiveSeedDelta(sd));
    }
    let mc = MarkedChain::new(block(&seed.p1, &seed.q1), Int::one(), block(&seed.p2, &seed.q2));
    if let Some(pos) = cf_division_by_zero(&mc.flatten()) {
        return Err(MoriError::ChainDivisionByZero(pos));
    }
    Ok(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Asymptotics {
    IncreasingToLambdaPlus,
    DecreasingTerminating,
    BetweenEigenrays,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepCertificate {
    #[serde(rename = "pInvariant", with = "serde_int")]
    pub p_invariant: Int,
    #[serde(rename = "qInvariant", with = "serde_int")]
    pub q_invariant: Int,
    #[serde(with = "serde_int")]
    pub det: Int,
    pub coprime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoriSequence {
    pub seed: MoriSeed,
    /// Stored pairs; a smooth first pair is `(1,0)`.
    #[serde(with = "serde_int_pairs")]
    pub pairs: Vec<(Int, Int)>,
    pub classification: Asymptotics,
    pub terminated: bool,
    /// One certificate per consecutive pair `(i, i+1)`.
    pub certificates: Vec<StepCertificate>,
}

impl MoriSequence {
    /// Pairs with a smooth first pair shown as `(1,1)`.
    pub fn display_pairs(&self) -> Vec<(Int, Int)> {
        let mut out = self.pairs.clone();
        if let Some(first) = out.first_mut() {
            if first.0.is_one() {
                first.1 = Int::one();
            }
        }
        out
    }

    pub fn p_values(&self) -> Vec<Int> {
        self.pairs.iter().map(|(p, _)| p.clone()).collect()
    }
}

fn certificate(delta: &Int, a: &(Int, Int), b: &(Int, Int)) -> StepCertificate {
    let (p, q) = a;
    let (pn, qn) = b;
    StepCertificate {
        p_invariant: p * p + pn * pn - delta * p * pn,
        q_invariant: q * q + qn * qn - delta * q * qn,
        det: p * qn - pn * q,
        coprime: p.gcd(q).is_one() && pn.gcd(qn).is_one(),
    }
}

/// The first `n` pairs, stopping early once `p` leaves the positive quadrant.
pub fn generate(seed: &MoriSeed, n: usize) -> MoriSequence {
    let mut pairs: Vec<(Int, Int)> = Vec::with_capacity(n);
    let mut terminated = false;
    for i in 0..n {
        let next = match i {
            0 => (seed.p1.clone(), seed.q1.clone()),
            1 => (seed.p2.clone(), seed.q2.clone()),
            _ => {
                let (a, b) = (&pairs[i - 2], &pairs[i - 1]);
                (&seed.delta * &b.0 - &a.0, &seed.delta * &b.1 - &a.1)
            }
        };
        if !next.0.is_positive() {
            terminated = true;
            break;
        }
        pairs.push(next);
    }
    let certificates = pairs.windows(2).map(|w| certificate(&seed.delta, &w[0], &w[1])).collect();
    MoriSequence { seed: seed.clone(), classification: classify_asymptotics(seed).classification, pairs, terminated, certificates }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub classification: Asymptotics,
    #[serde(rename = "lambdaPlus", skip_serializing_if = "Option::is_none")]
    pub lambda_plus: Option<QuadraticSurd>,
    /// `p_{i+1}/p_i` for the first terms, when increasing.
    #[serde(with = "serde_rat_vec")]
    pub ratios: Vec<Rat>,
}

pub fn classify_asymptotics(seed: &MoriSeed) -> AsymptoticReport {
    if seed.delta < int(2) {
        return AsymptoticReport { classification: Asymptotics::DecreasingTerminating, lambda_plus: None, ratios: vec![] };
    }
    let (lm, lp) = eigenvalues(&seed.delta).expect("delta >= 2");
    let p1 = rat_int(&seed.p1);
    let p2 = rat_int(&seed.p2);
    let above_plus = lp.scale(&p1).cmp_rat(&p2) == Ordering::Less;
    let below_minus = lm.scale(&p1).cmp_rat(&p2) == Ordering::Greater;
    let classification = if above_plus {
        Asymptotics::IncreasingToLambdaPlus
    } else if below_minus {
        Asymptotics::DecreasingTerminating
    } else {
        Asymptotics::BetweenEigenrays
    };
    let mut ratios = Vec::new();
    if classification == Asymptotics::IncreasingToLambdaPlus {
        let (mut a, mut b) = (seed.p1.clone(), seed.p2.clone());
        for _ in 0..8 {
            ratios.push(Rat::new(b.clone(), a.clone()));
            let c = &seed.delta * &b - &a;
            a = std::mem::replace(&mut b, c);
        }
    }
    AsymptoticReport { classification, lambda_plus: Some(lp), ratios }
}

fn require_k_negative_c1(w: &WedgeParams) -> Result<Int, MoriError> {
    let sigma = w.sigma();
    if !sigma.is_negative() || !w.c.is_one() {
        return Err(MoriError::WrongWedge { sigma, c: w.c.clone() });
    }
    Ok(-sigma)
}

pub fn is_infinitely_right_mutable(w: &WedgeParams) -> Result<bool, MoriError> {
    let delta = require_k_negative_c1(w)?;
    Ok(delta >= int(2) && w.p1 <= w.p2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    FitsForever,
    FitsUpTo(usize),
    Exceeds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overflow {
    pub step: usize,
    #[serde(with = "serde_rat")]
    pub sum: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    #[serde(rename = "aMinus", with = "serde_rat")]
    pub a_minus: Rat,
    #[serde(with = "serde_rat_vec")]
    pub consumed: Vec<Rat>,
    #[serde(rename = "partialSums", with = "serde_rat_vec")]
    pub partial_sums: Vec<Rat>,
    /// `a⁻/(λ₊² − 1)`; absent when `δ = 2`, where it is infinite.
    pub bound: Option<QuadraticSurd>,
    #[serde(with = "serde_rat")]
    pub l2: Rat,
    pub verdict: Verdict,
    /// First partial sum reaching `ℓ₂`, if any within the horizon.
    pub overflow: Option<Overflow>,
    #[serde(rename = "unboundedRoomRequired")]
    pub unbounded_room_required: bool,
}

/// `a⁻/(λ₊² − 1)` for `δ ≥ 3`.
pub fn budget_bound(a_minus: &Rat, delta: &Int) -> Result<Option<QuadraticSurd>, MoriError> {
    if *delta < int(2) {
        return Err(MoriError::DeltaTooSmall(delta.clone()));
    }
    if *delta == int(2) {
        return Ok(None);
    }
    let (_, lp) = eigenvalues(delta).expect("delta >= 2");
    let denom = lp.mul(&lp).expect("same d").add_rat(&-Rat::one());
    let num = QuadraticSurd::rational(a_minus.clone(), lp.d.clone());
    Ok(Some(num.div(&denom).expect("lambda_plus > 1")))
}

pub fn budget(w: &WedgeParams, l2: &Rat, n: usize) -> Result<Budget, MoriError> {
    if !is_infinitely_right_mutable(w)? {
        return Err(MoriError::NotInfinitelyMutable { delta: -w.sigma(), p1: w.p1.clone(), p2: w.p2.clone() });
    }
    if !l2.is_positive() {
        return Err(MoriError::NonPositiveLength);
    }
    let delta = -w.sigma();
    let mut p = vec![w.p1.clone(), w.p2.clone()];
    while p.len() < n + 2 {
        let k = p.len();
        p.push(&delta * &p[k - 1] - &p[k - 2]);
    }
    let mut consumed: Vec<Rat> = Vec::with_capacity(n);
    let mut partial_sums = Vec::with_capacity(n);
    let mut sum = Rat::zero();
    for k in 0..n {
        // a_1 = a⁻p_1/p_3, a_k = a_{k−1}·p_k/p_{k+2}.
        let prev = if k == 0 { w.a.clone() } else { consumed[k - 1].clone() };
        let ak = prev * rat_int(&p[k]) / rat_int(&p[k + 2]);
        sum += &ak;
        consumed.push(ak);
        partial_sums.push(sum.clone());
    }
    let bound = budget_bound(&w.a, &delta)?;
    let overflow = partial_sums
        .iter()
        .position(|s| s >= l2)
        .map(|i| Overflow { step: i + 1, sum: partial_sums[i].clone() });
    let fits_forever = bound.as_ref().is_some_and(|b| b.cmp_rat(l2) == Ordering::Less);
    let verdict = if fits_forever {
        Verdict::FitsForever
    } else {
        match &overflow {
            Some(o) if o.step == 1 => Verdict::Exceeds,
            Some(o) => Verdict::FitsUpTo(o.step - 1),
            None => Verdict::FitsUpTo(n),
        }
    };
    Ok(Budget {
        a_minus: w.a.clone(),
        consumed,
        partial_sums,
        bound,
        l2: l2.clone(),
        verdict,
        overflow,
        unbounded_room_required: delta == int(2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiflipCap {
    pub exact: QuadraticSurd,
    #[serde(rename = "rationalUnderApprox", with = "serde_rat")]
    pub rational_under_approx: Rat,
}

/// Supremum `ℓ₂(1 − λ₋²)` of antiflip parameters leaving room for every right
/// mutation afterwards, with a rational convergent below it.
pub fn max_antiflip_param(l2: &Rat, delta: &Int) -> Result<AntiflipCap, MoriError> {
    if *delta < int(2) {
        return Err(MoriError::DeltaTooSmall(delta.clone()));
    }
    if !l2.is_positive() {
        return Err(MoriError::NonPositiveLength);
    }
    let (lm, _) = eigenvalues(delta).expect("delta >= 2");
    let one_minus = lm.mul(&lm).expect("same d").scale(&-Rat::one()).add_rat(&Rat::one());
    let exact = one_minus.scale(l2);
    let under = if exact.is_rational() { exact.a.clone() } else { exact.rational_lower_bound(&int(1_000_000)) };
    Ok(AntiflipCap { exact, rational_under_approx: under })
}

/// `[w, 𝕽(w), 𝕽²(w), …]` with `n` right mutations.
pub fn mutation_orbit(w: &WedgeParams, n: usize) -> Result<Vec<WedgeParams>, MoriError> {
    if !is_infinitely_right_mutable(w)? {
        return Err(MoriError::NotInfinitelyMutable { delta: -w.sigma(), p1: w.p1.clone(), p2: w.p2.clone() });
    }
    let mut out = vec![w.clone()];
    for step in 1..=n {
        let next = mutate(out.last().unwrap(), Side::Right)
            .map_err(|e| MoriError::MutabilityLost { step, source: Box::new(e) })?;
        out.push(next);
    }
    Ok(out)
}

/// As [`mutation_orbit`], but refuses more steps than the budget certifies.
pub fn certified_orbit(w: &WedgeParams, l2: &Rat, n: usize) -> Result<(Vec<WedgeParams>, Budget), MoriError> {
    let b = budget(w, l2, n)?;
    let fits = match b.verdict {
        Verdict::FitsForever => n,
        Verdict::FitsUpTo(k) => k,
        Verdict::Exceeds => 0,
    };
    if fits < n {
        return Err(MoriError::BudgetExceeded { fits, requested: n });
    }
    Ok((mutation_orbit(w, n)?, b))
}

/// Left vertex labels of `orbit[1..]`: the Mori pairs realised by the orbit.
pub fn orbit_pairs(orbit: &[WedgeParams]) -> Vec<(Int, Int)> {
    orbit.iter().skip(1).map(|w| (w.p1.clone(), w.q1.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::num::rat;
    use crate::exactmath::surd_cmp;
    use crate::wedge::invariants;

    fn seed(p1: i64, q1: i64, p2: i64, q2: i64) -> MoriSeed {
        validate_seed(int(p1), int(q1), int(p2), int(q2)).unwrap()
    }

    fn pairs(v: &[(i64, i64)]) -> Vec<(Int, Int)> {
        v.iter().map(|&(p, q)| (int(p), int(q))).collect()
    }

    #[test]
    fn seed_validation() {
        assert_eq!(seed(1, 0, 5, 3).delta, int(3));
        assert_eq!(seed(1, 1, 5, 3).q1, int(0));
        assert_eq!(seed(5, 2, 39, 17).delta, int(7));
        assert_eq!(seed(1, 1, 2, 1).delta, int(1));
        assert!(matches!(validate_seed(int(2), int(1), int(5), int(4)), Err(MoriError::NonPositiveSeedDelta(_))));
        assert!(matches!(validate_seed(int(2), int(1), int(3), int(1)), Err(MoriError::NonPositiveDelta(_))));
        assert!(matches!(validate_seed(int(4), int(2), int(5), int(3)), Err(MoriError::NotCoprime(_, _))));
    }

    #[test]
    fn printed_sequences() {
        let m = generate(&seed(1, 0, 5, 3), 6);
        assert_eq!(m.display_pairs(), pairs(&[(1, 1), (5, 3), (14, 9), (37, 24), (97, 63), (254, 165)]));
        assert_eq!(generate(&seed(2, 1, 7, 5), 5).pairs, pairs(&[(2, 1), (7, 5), (19, 14), (50, 37), (131, 97)]));
        assert_eq!(generate(&seed(4, 1, 33, 10), 4).pairs, pairs(&[(4, 1), (33, 10), (227, 69), (1556, 473)]));
        let g = generate(&seed(5, 2, 39, 17), 5);
        assert_eq!(g.p_values(), vec![int(5), int(39), int(268), int(1837), int(12591)]);
        assert_eq!(g.pairs[2].1, int(117));
    }

    #[test]
    fn certificates_are_constant() {
        for s in [seed(1, 0, 5, 3), seed(2, 1, 7, 5), seed(4, 1, 33, 10), seed(5, 2, 39, 17)] {
            let m = generate(&s, 30);
            assert_eq!(m.pairs.len(), 30);
            let first = m.certificates[0].clone();
            assert_eq!(first.p_invariant, s.seed_delta());
            for c in &m.certificates {
                assert_eq!(c.p_invariant, first.p_invariant);
                assert_eq!(c.q_invariant, first.q_invariant);
                assert_eq!(c.det, s.delta);
                assert!(c.coprime);
            }
        }
    }

    #[test]
    fn asymptotics() {
        let r = classify_asymptotics(&seed(1, 0, 5, 3));
        assert_eq!(r.classification, Asymptotics::IncreasingToLambdaPlus);
        let lp = r.lambda_plus.unwrap();
        for w in r.ratios.windows(2) {
            assert!(w[1] < w[0]);
            assert_eq!(lp.cmp_rat(&w[1]), Ordering::Less);
        }
        // Swapping roles gives the decreasing branch, which terminates.
        let s = MoriSeed { p1: int(5), q1: int(2), p2: int(1), q2: int(1), delta: int(3) };
        assert_eq!(classify_asymptotics(&s).classification, Asymptotics::DecreasingTerminating);
        assert!(generate(&s, 10).terminated);
    }

    #[test]
    fn infinite_mutability() {
        assert!(is_infinitely_right_mutable(&WedgeParams::new(1, 0, 5, 3, 1, rat(1, 1))).unwrap());
        assert!(is_infinitely_right_mutable(&WedgeParams::new(5, 2, 39, 17, 1, rat(1, 1))).unwrap());
        assert!(!is_infinitely_right_mutable(&WedgeParams::new(5, 3, 1, 1, 1, rat(1, 1))).unwrap());
        assert!(is_infinitely_right_mutable(&WedgeParams::new(2, 1, 1, 1, 3, rat(1, 1))).is_err());
    }

    #[test]
    fn budget_examples() {
        let w = WedgeParams::new(1, 0, 5, 3, 1, rat(1, 1));
        let b = budget(&w, &rat(1, 1), 50).unwrap();
        assert_eq!(&b.consumed[..3], &[rat(1, 14), rat(5, 518), rat(35, 25123)]);
        let bound = b.bound.clone().unwrap();
        assert_eq!(bound, QuadraticSurd::new(rat(-1, 2), rat(3, 10), int(5)).unwrap());
        assert_eq!(b.verdict, Verdict::FitsForever);
        for s in &b.partial_sums {
            assert_eq!(bound.cmp_rat(s), Ordering::Greater);
        }
        for w2 in b.partial_sums.windows(2) {
            assert!(w2[0] < w2[1]);
        }

        let low = budget(&w, &rat(17, 100), 20).unwrap();
        assert_eq!(low.verdict, Verdict::FitsUpTo(20));
        assert!(low.overflow.is_none());
        let tight = budget(&w, &rat(8, 100), 20).unwrap();
        assert_eq!(tight.verdict, Verdict::FitsUpTo(1));
        assert_eq!(tight.overflow.as_ref().unwrap().step, 2);

        let exact = budget(&w, &rat(1, 14), 1).unwrap();
        assert_eq!(exact.verdict, Verdict::Exceeds);
    }

    #[test]
    fn antiflip_caps() {
        let c = max_antiflip_param(&rat(1, 1), &int(3)).unwrap();
        assert_eq!(c.exact, QuadraticSurd::new(rat(-5, 2), rat(3, 2), int(5)).unwrap());
        let (lm, _) = eigenvalues(&int(3)).unwrap();
        assert_eq!(lm.mul(&lm).unwrap().add(&c.exact).unwrap(), QuadraticSurd::rational(rat(1, 1), int(5)));
        assert_eq!(c.exact.cmp_rat(&c.rational_under_approx), Ordering::Greater);
        assert_eq!(c.exact.to_decimal(3), "0.854");

        let z = max_antiflip_param(&rat(1, 1), &int(2)).unwrap();
        assert_eq!(z.rational_under_approx, rat(0, 1));

        let c7 = max_antiflip_param(&rat(20, 1), &int(7)).unwrap();
        let (lm7, _) = eigenvalues(&int(7)).unwrap();
        let expect = lm7.mul(&lm7).unwrap().scale(&rat(-20, 1)).add_rat(&rat(20, 1));
        assert_eq!(surd_cmp(&c7.exact, &expect).unwrap(), Ordering::Equal);
        assert!(max_antiflip_param(&rat(1, 1), &int(1)).is_err());
    }

    #[test]
    fn orbits() {
        let w = WedgeParams::new(1, 0, 5, 3, 1, rat(1, 1));
        let o = mutation_orbit(&w, 5).unwrap();
        assert_eq!(orbit_pairs(&o), pairs(&[(5, 3), (14, 9), (37, 24), (97, 63), (254, 165)]));
        assert_eq!(o[1], WedgeParams::new(5, 3, 14, 9, 1, rat(1, 14)));
        let b = budget(&w, &rat(1, 1), 5).unwrap();
        for k in 1..=5 {
            assert_eq!(o[k].a, b.consumed[k - 1]);
            let i = invariants(&o[k]);
            assert_eq!((i.delta, i.omega), (int(11), int(3)));
        }
        assert_eq!(mutation_orbit(&w, 0).unwrap(), vec![w.clone()]);
        assert!(matches!(certified_orbit(&w, &rat(8, 100), 3), Err(MoriError::BudgetExceeded { fits: 1, requested: 3 })));
        assert_eq!(certified_orbit(&w, &rat(1, 1), 3).unwrap().0.len(), 4);
    }
}
