//! Hirzebruch-Jung (negative) continued fractions `[b₁,…,b_r] = b₁ − 1/(b₂ − …)`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::num::{exact_sqrt, int, serde_int_vec, ExtRational, Int, Rat};
use super::ExactError;

/// A chain of integers `[b₁,…,b_r]`. Canonical chains have every entry ≥ 2;
/// chains in the middle of blow-up bookkeeping may contain 1s (or anything).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chain(#[serde(with = "serde_int_vec")] pub Vec<Int>);

impl Chain {
    pub fn new(entries: Vec<Int>) -> Self {
        Chain(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        Chain(entries.iter().map(|&b| int(b)).collect())
    }

    pub fn empty() -> Self {
        Chain(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Int] {
        &self.0
    }

    pub fn is_canonical(&self) -> bool {
        self.0.iter().all(|b| *b >= int(2))
    }

    pub fn reversed(&self) -> Chain {
        Chain(self.0.iter().rev().cloned().collect())
    }

    pub fn concat(parts: &[&Chain]) -> Chain {
        Chain(parts.iter().flat_map(|c| c.0.iter().cloned()).collect())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// Projective evaluation right to left. The empty chain is ∞, a zero tail
/// turns into ∞ at the next step, and `b − 1/∞ = b`.
pub fn cf_eval(chain: &Chain) -> ExtRational {
    // Track (num, den) projectively; start from ∞ = (1, 0).
    let (mut num, mut den) = (Int::one(), Int::zero());
    for b in chain.0.iter().rev() {
        // b − den/num, as a pair: (b·num − den, num).
        let next_num = b * &num - &den;
        let next_den = num;
        let g = next_num.gcd(&next_den);
        if g.is_zero() {
            unreachable!("projective pair never collapses to (0, 0)");
        }
        num = next_num / &g;
        den = next_den / &g;
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    ExtRational::from_pair(num, den)
}

/// Position (0-based, counted from the left) where a strict evaluation would
/// divide by zero, if any. The empty chain counts as undefined at position 0.
pub fn cf_division_by_zero(chain: &Chain) -> Option<usize> {
    if chain.is_empty() {
        return Some(0);
    }
    let mut tail: Option<Rat> = None;
    for (i, b) in chain.0.iter().enumerate().rev() {
        let v = match tail {
            None => Rat::from_integer(b.clone()),
            Some(t) => {
                if t.is_zero() {
                    return Some(i);
                }
                Rat::from_integer(b.clone()) - t.recip()
            }
        };
        tail = Some(v);
    }
    None
}

/// Strict evaluation: a finite rational, or the first position where a
/// division by zero occurs.
pub fn cf_eval_strict(chain: &Chain) -> Result<Rat, ExactError> {
    if let Some(pos) = cf_division_by_zero(chain) {
        return Err(ExactError::InternalDivisionByZero(pos));
    }
    match cf_eval(chain) {
        ExtRational::Finite(r) => Ok(r),
        ExtRational::Infinity => unreachable!("strict evaluation checked"),
    }
}

/// Hirzebruch-Jung expansion of `x = P/Q > 1` into a chain with all entries ≥ 2.
pub fn cf_expand(x: &Rat) -> Result<Chain, ExactError> {
    if *x <= Rat::one() {
        return Err(ExactError::ExpandDomain(x.clone()));
    }
    let (mut p, mut q) = (x.numer().clone(), x.denom().clone());
    let mut out = Vec::new();
    while !q.is_zero() {
        // b = ⌈p/q⌉, then recurse on q/(b·q − p).
        let b = p.div_ceil(&q);
        let r = &b * &q - &p;
        out.push(b);
        p = q;
        q = r;
    }
    Ok(Chain(out))
}

pub fn cf_expand_ext(x: &ExtRational) -> Result<Chain, ExactError> {
    match x {
        ExtRational::Finite(r) => cf_expand(r),
        ExtRational::Infinity => Err(ExactError::ExpandInfinity),
    }
}

fn check_wahl_params(p: &Int, q: &Int) -> Result<(), ExactError> {
    if !p.is_positive() {
        return Err(ExactError::WahlDomain(p.clone(), q.clone()));
    }
    if p.is_one() && (q.is_zero() || q.is_one()) {
        return Ok(());
    }
    if !(q.is_positive() && q < p) {
        return Err(ExactError::WahlDomain(p.clone(), q.clone()));
    }
    if !p.gcd(q).is_one() {
        return Err(ExactError::NotCoprime(p.clone(), q.clone()));
    }
    Ok(())
}

/// Chain resolving the Wahl singularity `1/p²(1, pq−1)`; empty for the smooth
/// labels `(1,0)` and `(1,1)`.
pub fn wahl_chain(p: &Int, q: &Int) -> Result<Chain, ExactError> {
    check_wahl_params(p, q)?;
    if p.is_one() {
        return Ok(Chain::empty());
    }
    cf_expand(&Rat::new(p * p, p * q - 1))
}

/// Inverse of [`wahl_chain`] on nonempty chains.
pub fn recognize_wahl(chain: &Chain) -> Option<(Int, Int)> {
    if chain.is_empty() {
        return None;
    }
    let v = match cf_eval(chain) {
        ExtRational::Finite(v) => v,
        ExtRational::Infinity => return None,
    };
    if !v.denom().is_positive() || !v.numer().is_positive() {
        return None;
    }
    let p = exact_sqrt(v.numer())?;
    let (q, rem) = (v.denom() + Int::one()).div_rem(&p);
    if !rem.is_zero() || !q.is_positive() || q >= p || !p.gcd(&q).is_one() {
        return None;
    }
    Some((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::num::rat;
    use proptest::prelude::*;

    /// Oracle: left-to-right product of the matrices [[b, −1], [1, 0]].
    fn matrix_eval(chain: &Chain) -> ExtRational {
        let (mut a, mut b, mut c, mut d) = (Int::one(), Int::zero(), Int::zero(), Int::one());
        for x in &chain.0 {
            let (na, nb) = (&a * x + &b, -a.clone());
            let (nc, nd) = (&c * x + &d, -c.clone());
            a = na;
            b = nb;
            c = nc;
            d = nd;
        }
        // Column (a, c) is the value as a projective pair.
        ExtRational::from_pair(a, c)
    }

    fn ch(v: &[i64]) -> Chain {
        Chain::from_i64s(v)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(cf_eval(&ch(&[4])), ExtRational::Finite(rat(4, 1)));
        assert_eq!(cf_eval(&ch(&[2, 5, 3])), ExtRational::Finite(rat(25, 14)));
        assert_eq!(cf_eval(&ch(&[2, 3, 2, 2, 7, 3])), ExtRational::Finite(rat(196, 125)));
        assert_eq!(cf_eval(&ch(&[2, 1, 1])), ExtRational::Infinity);
        assert_eq!(cf_eval(&Chain::empty()), ExtRational::Infinity);
        for c in [ch(&[2, 5, 3]), ch(&[2, 3, 2, 2, 7, 3]), ch(&[2, 1, 1]), ch(&[1, 1, 1])] {
            assert_eq!(cf_eval(&c), matrix_eval(&c), "{c}");
        }
    }

    #[test]
    fn strict_eval_reports_position() {
        assert_eq!(cf_division_by_zero(&ch(&[2, 1, 1])), Some(0));
        assert_eq!(cf_division_by_zero(&ch(&[2, 5, 3])), None);
        assert!(matches!(
            cf_eval_strict(&ch(&[3, 2, 1, 1])),
            Err(ExactError::InternalDivisionByZero(1))
        ));
        assert_eq!(cf_eval_strict(&ch(&[4, 3])).unwrap(), rat(11, 3));
    }

    #[test]
    fn expand_examples() {
        assert_eq!(cf_expand(&rat(11, 3)).unwrap(), ch(&[4, 3]));
        assert_eq!(cf_expand(&rat(25, 14)).unwrap(), ch(&[2, 5, 3]));
        assert_eq!(cf_expand(&rat(2, 1)).unwrap(), ch(&[2]));
        assert!(matches!(cf_expand(&rat(1, 1)), Err(ExactError::ExpandDomain(_))));
        assert!(matches!(cf_expand(&rat(1, 2)), Err(ExactError::ExpandDomain(_))));
        assert!(matches!(cf_expand_ext(&ExtRational::Infinity), Err(ExactError::ExpandInfinity)));
    }

    #[test]
    fn wahl_examples() {
        assert_eq!(wahl_chain(&int(2), &int(1)).unwrap(), ch(&[4]));
        assert_eq!(wahl_chain(&int(5), &int(3)).unwrap(), ch(&[2, 5, 3]));
        assert_eq!(wahl_chain(&int(4), &int(3)).unwrap(), ch(&[2, 2, 6]));
        assert_eq!(wahl_chain(&int(1), &int(0)).unwrap(), Chain::empty());
        assert_eq!(wahl_chain(&int(1), &int(1)).unwrap(), Chain::empty());
        assert!(matches!(wahl_chain(&int(4), &int(2)), Err(ExactError::NotCoprime(_, _))));
        assert!(matches!(wahl_chain(&int(4), &int(5)), Err(ExactError::WahlDomain(_, _))));

        assert_eq!(recognize_wahl(&ch(&[3, 5, 2])), Some((int(5), int(2))));
        assert_eq!(recognize_wahl(&ch(&[2, 3, 2, 2, 7, 3])), Some((int(14), int(9))));
        assert_eq!(recognize_wahl(&ch(&[3, 3])), None);
        assert_eq!(recognize_wahl(&Chain::empty()), None);
    }

    #[test]
    fn wahl_suite_up_to_200() {
        for p in 2..=200i64 {
            for q in 1..p {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                let c = wahl_chain(&int(p), &int(q)).unwrap();
                assert_eq!(recognize_wahl(&c), Some((int(p), int(q))));
                assert_eq!(cf_expand(&cf_eval(&c).finite().unwrap().clone()).unwrap(), c);
                if p <= 50 {
                    // Reading the chain backwards swaps q and p − q.
                    let rev = cf_eval(&c.reversed());
                    assert_eq!(rev, ExtRational::Finite(rat(p * p, p * (p - q) - 1)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn expand_inverts_eval(entries in proptest::collection::vec(2i64..=9, 1..=12)) {
            let c = Chain::from_i64s(&entries);
            let v = cf_eval(&c);
            prop_assert_eq!(&v, &matrix_eval(&c));
            prop_assert_eq!(cf_expand_ext(&v).unwrap(), c);
        }

        #[test]
        fn projective_eval_matches_matrix_oracle(entries in proptest::collection::vec(-3i64..=6, 0..=10)) {
            let c = Chain::from_i64s(&entries);
            prop_assert_eq!(cf_eval(&c), matrix_eval(&c));
        }
    }
}
