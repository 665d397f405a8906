//! Exact arithmetic: big rationals, the projective line, quadratic surds and
//! Hirzebruch-Jung continued fractions.

pub mod cf;
pub mod num;
pub mod surd;

pub use cf::{
    cf_division_by_zero, cf_eval, cf_eval_strict, cf_expand, cf_expand_ext, recognize_wahl,
    wahl_chain, Chain,
};
pub use num::{fmt_rat, int, parse_rat, rat, rat_int, to_decimal, ExtRational, Int, Rat};
pub use surd::{eigenvalues, is_mori_eigenvalue, surd_cmp, QuadraticSurd};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative discriminant {0}")]
    NegativeDiscriminant(Int),
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(Int, Int),
    #[error("delta must be at least 2, got {0}")]
    DeltaTooSmall(Int),
    #[error("continued fraction divides by zero at entry {0}")]
    InternalDivisionByZero(usize),
    #[error("expansion needs x > 1, got {}", fmt_rat(.0))]
    ExpandDomain(Rat),
    #[error("cannot expand infinity")]
    ExpandInfinity,
    #[error("({0},{1}) is outside the Wahl range 0 < q < p")]
    WahlDomain(Int, Int),
    #[error("({0},{1}) are not coprime")]
    NotCoprime(Int, Int),
}
