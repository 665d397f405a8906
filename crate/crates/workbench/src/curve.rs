//! Exact polynomial checks on the quintic branch curve
//! `1 − 2y³ + y⁶ + 2x³ − xy⁵ − 2x⁵y + x⁶y⁶`: its restrictions to the ruling
//! `x = 0` and the diagonal `y = x` must be squares of squarefree polynomials.

use std::fmt;

use atoric::exactmath::num::{show_rat, rat, serde_rat_vec, Rat};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial1V {
    #[serde(with = "serde_rat_vec")]
    coeffs: Vec<Rat>,
}

impl Polynomial1V {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial1V { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x, 1)).collect())
    }

    pub fn zero() -> Self {
        Polynomial1V { coeffs: vec![] }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64, 1)).collect())
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut r = self.clone();
        let mut q = vec![Rat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = r.degree().filter(|&rd| rd >= dd) {
            let k = r.leading() / &lead;
            let shift = rd - dd;
            let mut t = vec![Rat::zero(); shift];
            t.extend(d.coeffs.iter().map(|c| c * &k));
            q[shift] = k;
            r = r.sub(&Self::new(t));
        }
        (Self::new(q), r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = std::mem::replace(&mut b, r);
        }
        if a.is_zero() {
            return a;
        }
        let l = a.leading();
        a.scale(&(Rat::one() / l))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Exact square root, normalized so its lowest nonzero coefficient is
    /// positive, or `None` when this is not the square of a rational polynomial.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let d = self.degree()?;
        if d % 2 == 1 {
            return None;
        }
        let n = d / 2;
        let top = rat_sqrt(&self.leading())?;
        // Solve for g top-down: the coefficient of x^(n+k) in g² fixes g_k.
        let mut g = vec![Rat::zero(); n + 1];
        g[n] = top.clone();
        let two_top = &top * rat(2, 1);
        for k in (0..n).rev() {
            let mut acc = self.coeff(n + k);
            for i in (k + 1)..=n {
                let j = n + k - i;
                if j > k && j <= n {
                    acc -= &g[i] * &g[j];
                }
            }
            g[k] = acc / &two_top;
        }
        let mut root = Self::new(g);
        if root.mul(&root) != *self {
            return None;
        }
        if root.coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative()) {
            root = root.neg();
        }
        Some(root)
    }
}

fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Rat::new(n, d))
}

impl fmt::Display for Polynomial1V {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_in(f, "x")
    }
}

impl Polynomial1V {
    fn write_in(&self, f: &mut impl fmt::Write, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if mono.is_empty() || !abs.is_one() {
                write!(f, "{}", show_rat(&abs))?;
            }
            write!(f, "{mono}")?;
        }
        Ok(())
    }

    pub fn render(&self, var: &str) -> String {
        let mut s = String::new();
        self.write_in(&mut s, var).expect("writing to a String");
        s
    }
}

/// Bivariate polynomial as a list of `(coefficient, deg_x, deg_y)` terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate {
    pub terms: Vec<(Rat, usize, usize)>,
}

impl Bivariate {
    pub fn from_i64s(terms: &[(i64, usize, usize)]) -> Self {
        Bivariate { terms: terms.iter().map(|&(c, i, j)| (rat(c, 1), i, j)).collect() }
    }

    fn collect(&self, pick: impl Fn(usize, usize) -> Option<usize>) -> Polynomial1V {
        let mut out: Vec<Rat> = Vec::new();
        for (c, i, j) in &self.terms {
            if let Some(k) = pick(*i, *j) {
                if out.len() <= k {
                    out.resize(k + 1, Rat::zero());
                }
                out[k] += c;
            }
        }
        Polynomial1V::new(out)
    }

    /// `f(0, y)` as a polynomial in `y`.
    pub fn restrict_x_zero(&self) -> Polynomial1V {
        self.collect(|i, j| (i == 0).then_some(j))
    }

    /// `f(x, x)` as a polynomial in `x`.
    pub fn restrict_diagonal(&self) -> Polynomial1V {
        self.collect(|i, j| Some(i + j))
    }
}

pub fn branch_curve() -> Bivariate {
    Bivariate::from_i64s(&[(1, 0, 0), (-2, 0, 3), (1, 0, 6), (2, 3, 0), (-1, 1, 5), (-2, 5, 1), (1, 6, 6)])
}

/// The branch curve with the sign of `2x³` flipped, as a negative control.
pub fn perturbed_branch_curve() -> Bivariate {
    Bivariate::from_i64s(&[(1, 0, 0), (-2, 0, 3), (1, 0, 6), (-2, 3, 0), (-1, 1, 5), (-2, 5, 1), (1, 6, 6)])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCheck {
    pub name: String,
    pub restriction: Polynomial1V,
    #[serde(rename = "expectedRoot")]
    pub expected_root: Polynomial1V,
    #[serde(rename = "squareRoot")]
    pub square_root: Option<Polynomial1V>,
    /// Distinct double roots of the restriction, counted as the degree of a
    /// squarefree square root.
    #[serde(rename = "doubleRoots")]
    pub double_roots: usize,
    #[serde(rename = "expectedDoubleRoots")]
    pub expected_double_roots: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveReport {
    pub checks: Vec<CurveCheck>,
    pub pass: bool,
}

fn check(name: &str, restriction: Polynomial1V, expected_root: Polynomial1V, expected_double_roots: usize) -> CurveCheck {
    let square_root = restriction.sqrt_exact();
    let double_roots = match &square_root {
        Some(r) if r.is_squarefree() => r.degree().unwrap_or(0),
        _ => 0,
    };
    let pass = square_root.as_ref() == Some(&expected_root) && double_roots == expected_double_roots;
    CurveCheck { name: name.to_string(), restriction, expected_root, square_root, double_roots, expected_double_roots, pass }
}

pub fn verify_curve(f: &Bivariate) -> CurveReport {
    let checks = vec![
        check("x=0", f.restrict_x_zero(), Polynomial1V::from_i64s(&[1, 0, 0, -1]), 3),
        check("y=x", f.restrict_diagonal(), Polynomial1V::from_i64s(&[1, 0, 0, 0, 0, 0, -1]), 6),
    ];
    let pass = checks.iter().all(|c| c.pass);
    CurveReport { checks, pass }
}

pub fn verify_branch_curve() -> CurveReport {
    verify_curve(&branch_curve())
}

impl fmt::Display for CurveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let var = if c.name == "x=0" { "y" } else { "x" };
            let root = c.square_root.as_ref().map_or("none".to_string(), |r| format!("({})^2", r.render(var)));
            writeln!(
                f,
                "{} restriction {}: {} = {}; double roots {} (expected {})",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.restriction.render(var),
                root,
                c.double_roots,
                c.expected_double_roots
            )?;
        }
        write!(f, "{}", if self.pass { "PASS branch curve" } else { "FAIL branch curve" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial1V {
        Polynomial1V::from_i64s(c)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(p(&[1, 0, 0, -1]).mul(&p(&[1, 0, 0, -1])), p(&[1, 0, 0, -2, 0, 0, 1]));
        let (q, r) = p(&[-1, 0, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!((q, r), (p(&[1, 1, 1]), Polynomial1V::zero()));
        assert_eq!(p(&[1, 0, 0, -1]).gcd(&p(&[0, 0, -3])), p(&[1]));
        assert!(!p(&[1, -2, 1]).is_squarefree());
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        assert_eq!(p(&[1, -2, 0, 1]).render("y"), "1 - 2y + y^3");
    }

    #[test]
    fn square_roots() {
        assert_eq!(p(&[1, 0, 0, -2, 0, 0, 1]).sqrt_exact(), Some(p(&[1, 0, 0, -1])));
        assert_eq!(p(&[4, 4, 1]).sqrt_exact(), Some(p(&[2, 1])));
        assert_eq!(p(&[1, 0, 1]).sqrt_exact(), None);
        assert_eq!(p(&[1, 2]).sqrt_exact(), None);
        let q = Polynomial1V::new(vec![rat(1, 4), rat(-1, 1), rat(1, 1)]);
        assert_eq!(q.sqrt_exact(), Some(Polynomial1V::new(vec![rat(1, 2), rat(-1, 1)])));
    }

    #[test]
    fn branch_curve_restrictions() {
        let f = branch_curve();
        assert_eq!(f.restrict_x_zero(), p(&[1, 0, 0, -2, 0, 0, 1]));
        assert_eq!(f.restrict_diagonal(), p(&[1, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 1]));
        let r = verify_branch_curve();
        assert!(r.pass, "{r}");
        assert_eq!(r.checks[1].square_root, Some(p(&[1, 0, 0, 0, 0, 0, -1])));
        assert!(!verify_curve(&perturbed_branch_curve()).pass);
    }
}
