//! Exact integer/rational arithmetic used throughout the crate.
//!
//! Polynomials follow one convention everywhere: they are polynomials in `t`
//! with the constant term first, and a factor `1 - γt` is read as "has
//! eigenvalue γ". A characteristic polynomial `det(1 - Frob·t | V)` is an
//! [`IntPoly`] with constant term one whose eigenvalues are the Frobenius
//! eigenvalues on `V`.

mod int;
mod poly;
mod resultant;
mod series;
mod sturm;

pub use int::{
    binomial, divisors, factor_prime_power, is_prime, isqrt_u128, mobius, padic_valuation, squarefree_decomposition,
    PrimePower,
};
pub use poly::{poly_arith, root_multiplicity, IntPoly, PolyOp, RatPoly};
pub use resultant::{composed_product, resultant};
pub use series::{
    coefficients_from_power_sums, power_map, power_sums, series_log_zeta, RatSeries, ZetaSign,
};
pub use sturm::{count_distinct_real_roots, count_roots_above, squarefree_part};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomial {divisor} does not divide {dividend} exactly")]
    NonDivisible { dividend: String, divisor: String },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("series factor must have constant term 1, got {0}")]
    ConstantTermNotOne(String),
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("power sums do not come from an integer polynomial (step {0})")]
    NonIntegralPowerSums(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}
