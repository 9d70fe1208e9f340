use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraError, IntPoly};

/// Truncated power series with rational coefficients; terms of degree
/// `>= order()` are discarded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![BigRational::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = BigRational::one();
        }
        s
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        Self {
            coeffs: (0..order).map(|k| BigRational::from_integer(p.coeff(k))).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: self.coeffs.iter().take(order).cloned().collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        let mut out = vec![BigRational::zero(); n];
        out[0] = c0.recip();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -acc / c0;
        }
        Ok(Self { coeffs: out })
    }

    /// `self^k` for any integer `k`; negative powers need an invertible series.
    pub fn pow(&self, k: i64) -> Result<Self, AlgebraError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut exp = k.unsigned_abs();
        let mut acc = Self::one(self.order());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq);
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Substitutes `t -> t^d`.
    pub fn inflate(&self, d: usize) -> Self {
        assert!(d >= 1);
        let n = self.order();
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k * d >= n {
                break;
            }
            out[k * d] = c.clone();
        }
        Self { coeffs: out }
    }

    /// `t·f'(t)/f(t)`.
    pub fn log_derivative(&self) -> Result<Self, AlgebraError> {
        let t_deriv = Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        };
        Ok(t_deriv.mul(&self.inverse()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZetaSign {
    Numerator,
    Denominator,
}

/// `t·d/dt log Z` for `Z` an alternating product of polynomial factors.
///
/// The returned series has order `n + 1`; its coefficient of `t^k` for
/// `1 <= k <= n` is the Lefschetz number `Σ_w (-1)^w Σ γ^k`, i.e. the point
/// count over the degree-`k` extension when `Z` is a zeta function. The
/// constant coefficient is always zero.
pub fn series_log_zeta(factors: &[(IntPoly, ZetaSign)], n: usize) -> Result<RatSeries, AlgebraError> {
    let order = n + 1;
    let mut acc = RatSeries::zero(order);
    for (poly, sign) in factors {
        if !poly.constant_term().is_one() {
            return Err(AlgebraError::ConstantTermNotOne(poly.to_string()));
        }
        let ld = RatSeries::from_poly(poly, order).log_derivative()?;
        acc = match sign {
            ZetaSign::Numerator => acc.add(&ld),
            ZetaSign::Denominator => acc.sub(&ld),
        };
    }
    Ok(acc)
}

/// Power sums `p_k = Σ γ^k` for `0 <= k <= max_k`, via Newton's identities.
/// Entry 0 is the number of eigenvalues.
pub fn power_sums(p: &IntPoly, max_k: usize) -> Result<Vec<BigInt>, AlgebraError> {
    if !p.constant_term().is_one() {
        return Err(AlgebraError::ConstantTermNotOne(p.to_string()));
    }
    let mut ps = Vec::with_capacity(max_k + 1);
    ps.push(BigInt::from(p.len_degree()));
    for k in 1..=max_k {
        // k c_k + Σ_{i=1}^{k} p_i c_{k-i} = 0
        let mut acc = BigInt::from(k) * p.coeff(k);
        for i in 1..k {
            acc += &ps[i] * p.coeff(k - i);
        }
        ps.push(-acc);
    }
    Ok(ps)
}

/// Inverse of [`power_sums`]: the polynomial of the given degree with constant
/// term 1 whose eigenvalue power sums are `ps[1..]`.
pub fn coefficients_from_power_sums(ps: &[BigInt], degree: usize) -> Result<IntPoly, AlgebraError> {
    assert!(ps.len() > degree, "need power sums up to the degree");
    let mut c = vec![BigInt::one()];
    for k in 1..=degree {
        let mut acc = ps[k].clone();
        for i in 1..k {
            acc += &ps[i] * &c[k - i];
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(AlgebraError::NonIntegralPowerSums(k));
        }
        c.push(-quot);
    }
    Ok(IntPoly::new(c))
}

/// Polynomial whose eigenvalues are the `d`-th powers of those of `p`.
pub fn power_map(p: &IntPoly, d: usize) -> Result<IntPoly, AlgebraError> {
    let deg = p.len_degree();
    let ps = power_sums(p, d * deg)?;
    let mapped: Vec<BigInt> = (0..=deg).map(|k| ps[d * k].clone()).collect();
    coefficients_from_power_sums(&mapped, deg)
}
