//! Real quadratic numbers `a + b·√d` with rational `a`, `b` and a fixed
//! nonnegative integer discriminant `d`.
//!
//! Comparison is decided by squaring with a sign case analysis, so it never
//! touches floating point. When `d` is a perfect square the surd part is folded
//! into `a`, which keeps structural equality equal to value equality.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::num::{exact_sqrt, fmt_rat, int, rat_int, serde_int, serde_rat, to_decimal, Int, Rat};
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticSurd {
    #[serde(with = "serde_rat")]
    pub a: Rat,
    #[serde(with = "serde_rat")]
    pub b: Rat,
    #[serde(with = "serde_int")]
    pub d: Int,
}

impl QuadraticSurd {
    pub fn new(a: Rat, b: Rat, d: Int) -> Result<Self, ExactError> {
        if d.is_negative() {
            return Err(ExactError::NegativeDiscriminant(d));
        }
        Ok(Self::normalized(a, b, d))
    }

    fn normalized(a: Rat, b: Rat, d: Int) -> Self {
        if let Some(root) = exact_sqrt(&d) {
            if !b.is_zero() {
                return QuadraticSurd {
                    a: a + b * rat_int(&root),
                    b: Rat::zero(),
                    d,
                };
            }
        }
        QuadraticSurd { a, b, d }
    }

    pub fn rational(a: Rat, d: Int) -> Self {
        QuadraticSurd { a, b: Rat::zero(), d }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn check(&self, other: &Self) -> Result<(), ExactError> {
        if self.d != other.d {
            return Err(ExactError::DiscriminantMismatch(self.d.clone(), other.d.clone()));
        }
        Ok(())
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rat::zero());
        let sb = self.b.cmp(&Rat::zero());
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Mixed signs: the larger magnitude wins.
            (Ordering::Greater, Ordering::Less) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * rat_int(&self.d);
                a2.cmp(&b2d)
            }
            (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * rat_int(&self.d);
                b2d.cmp(&a2)
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, self.d.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, self.d.clone()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        let d = rat_int(&self.d);
        let a = &self.a * &other.a + &self.b * &other.b * d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, self.d.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, ExactError> {
        self.check(other)?;
        // Multiply through by the conjugate; the norm vanishes only for zero.
        let norm = &other.a * &other.a - &other.b * &other.b * rat_int(&other.d);
        if norm.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        let conj = QuadraticSurd { a: other.a.clone(), b: -other.b.clone(), d: other.d.clone() };
        let num = self.mul(&conj)?;
        Ok(Self::normalized(num.a / &norm, num.b / &norm, self.d.clone()))
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::normalized(&self.a * k, &self.b * k, self.d.clone())
    }

    pub fn add_rat(&self, k: &Rat) -> Self {
        Self::normalized(&self.a + k, self.b.clone(), self.d.clone())
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        self.add_rat(&-r.clone()).signum()
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Int {
        // Integer-sqrt estimate, then exact correction.
        let t = &self.b * &self.b * rat_int(&self.d);
        let root_est = (t.numer() * t.denom()).sqrt();
        let mag = Rat::new(root_est, t.denom().clone());
        let est = if self.b.is_negative() { &self.a - mag } else { &self.a + mag };
        let mut g = est.floor().to_integer();
        while self.cmp_rat(&rat_int(&g)) == Ordering::Less {
            g -= 1;
        }
        while self.cmp_rat(&rat_int(&(&g + 1))) != Ordering::Less {
            g += 1;
        }
        g
    }

    /// Regular continued-fraction convergents `h/k` of the value, at most `max_terms`.
    /// Stops early when the value is rational and the expansion ends.
    pub fn convergents(&self, max_terms: usize) -> Vec<Rat> {
        let mut out = Vec::new();
        let (mut h_prev, mut h) = (Int::zero(), Int::one());
        let (mut k_prev, mut k) = (Int::one(), Int::zero());
        let one = QuadraticSurd::rational(Rat::one(), self.d.clone());
        let mut x = self.clone();
        for _ in 0..max_terms {
            let a = x.floor();
            let h_next = &a * &h + &h_prev;
            let k_next = &a * &k + &k_prev;
            out.push(Rat::new(h_next.clone(), k_next.clone()));
            h_prev = std::mem::replace(&mut h, h_next);
            k_prev = std::mem::replace(&mut k, k_next);
            let frac = x.add_rat(&-rat_int(&a));
            if frac.signum() == Ordering::Equal {
                break;
            }
            x = one.div(&frac).expect("nonzero fractional part");
        }
        out
    }

    /// Best rational strictly below the value (or equal, when the value is
    /// rational) among convergents whose denominator stays within `max_den`.
    pub fn rational_lower_bound(&self, max_den: &Int) -> Rat {
        let mut best = rat_int(&self.floor());
        for c in self.convergents(256) {
            if c.denom() > max_den {
                break;
            }
            if self.cmp_rat(&c) != Ordering::Less && c > best {
                best = c;
            }
        }
        best
    }

    pub fn to_decimal(&self, places: u32) -> String {
        let scale = int(10).pow(places);
        let scaled = self.scale(&rat_int(&scale));
        to_decimal(&Rat::new(scaled.floor(), scale), places)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", fmt_rat(&self.a))
        } else {
            write!(f, "{} + ({})*sqrt({})", fmt_rat(&self.a), fmt_rat(&self.b), self.d)
        }
    }
}

/// Exact ordering of two surds sharing a discriminant.
pub fn surd_cmp(x: &QuadraticSurd, y: &QuadraticSurd) -> Result<Ordering, ExactError> {
    Ok(x.sub(y)?.signum())
}

/// Eigenvalues `(δ ∓ √(δ²−4))/2` of the Mori transfer matrix `[[0,1],[−1,δ]]`.
pub fn eigenvalues(delta: &Int) -> Result<(QuadraticSurd, QuadraticSurd), ExactError> {
    if *delta < int(2) {
        return Err(ExactError::DeltaTooSmall(delta.clone()));
    }
    let d = delta * delta - int(4);
    let half = Rat::new(Int::one(), int(2));
    let a = rat_int(delta) * &half;
    let minus = QuadraticSurd::normalized(a.clone(), -half.clone(), d.clone());
    let plus = QuadraticSurd::normalized(a, half, d);
    Ok((minus, plus))
}

/// `true` when the value is a root of `x² − δx + 1`.
pub fn is_mori_eigenvalue(x: &QuadraticSurd, delta: &Int) -> bool {
    let sq = x.mul(x).expect("same discriminant");
    let lin = x.scale(&rat_int(delta));
    let val = sq.sub(&lin).expect("same discriminant").add_rat(&Rat::one());
    val.signum() == Ordering::Equal
}
