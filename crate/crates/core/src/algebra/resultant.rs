use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraError, IntPoly, RatPoly};

/// Fraction-free (Bareiss) determinant.
fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Resultant of `a` and `b` taken at their formal degrees `deg_a`, `deg_b`
/// (coefficient vectors are ascending).
fn sylvester_resultant(a: &[BigInt], deg_a: usize, b: &[BigInt], deg_b: usize) -> BigInt {
    let size = deg_a + deg_b;
    let coeff = |v: &[BigInt], k: usize| v.get(k).cloned().unwrap_or_else(BigInt::zero);
    let mut rows = Vec::with_capacity(size);
    for shift in 0..deg_b {
        let mut row = vec![BigInt::zero(); size];
        for k in 0..=deg_a {
            row[shift + k] = coeff(a, deg_a - k);
        }
        rows.push(row);
    }
    for shift in 0..deg_a {
        let mut row = vec![BigInt::zero(); size];
        for k in 0..=deg_b {
            row[shift + k] = coeff(b, deg_b - k);
        }
        rows.push(row);
    }
    bareiss_determinant(rows)
}

/// Resultant of two nonzero integer polynomials at their true degrees.
pub fn resultant(a: &IntPoly, b: &IntPoly) -> BigInt {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return BigInt::zero();
    };
    sylvester_resultant(a.coeffs(), da, b.coeffs(), db)
}

/// Interpolates the unique polynomial of degree `< xs.len()` through the points.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> RatPoly {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    // Horner on the Newton form.
    let mut acc = RatPoly::new(vec![dd[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        let factor = RatPoly::new(vec![BigRational::from_integer(-xs[i].clone()), BigRational::one()]);
        acc = &acc * &factor;
        let mut coeffs = acc.coeffs().to_vec();
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        coeffs[0] += &dd[i];
        acc = RatPoly::new(coeffs);
    }
    acc
}

/// Polynomial whose eigenvalues are the pairwise products of the eigenvalues
/// of `p` and `q`.
///
/// With `p(t) = p_0 ∏(1 - γt)` and `q(t) = q_0 ∏(1 - δt)`, this returns
/// `p_0^{deg q} q_0^{deg p} ∏(1 - γδt)`, obtained as `Res_y(y^{deg p} p(1/y), q(ty))`
/// evaluated at `deg p · deg q + 1` integer points and interpolated.
pub fn composed_product(p: &IntPoly, q: &IntPoly) -> Result<IntPoly, AlgebraError> {
    if p.constant_term().is_zero() || q.constant_term().is_zero() {
        return Err(AlgebraError::ZeroConstantTerm);
    }
    let n = p.len_degree();
    let m = q.len_degree();
    if n == 0 {
        return Ok(IntPoly::new(vec![num_traits::pow(p.constant_term(), m)]));
    }
    if m == 0 {
        return Ok(IntPoly::new(vec![num_traits::pow(q.constant_term(), n)]));
    }
    let reversed: Vec<BigInt> = p.coeffs().iter().rev().cloned().collect();
    let points = n * m + 1;
    let xs: Vec<BigInt> = (1..=points).map(BigInt::from).collect();
    let ys: Vec<BigInt> = xs
        .iter()
        .map(|x| {
            let scaled = q.scale_variable(x);
            sylvester_resultant(&reversed, n, scaled.coeffs(), m)
        })
        .collect();
    let poly = interpolate(&xs, &ys);
    Ok(poly.to_integer().expect("resultant interpolation of integer data is integral"))
}
