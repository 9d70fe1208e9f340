//! Elliptic curves in short Weierstrass form over `F_{p^e}` and abstract
//! curves given by their zeta numerator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    binomial, count_distinct_real_roots, count_roots_above, divisors, mobius, power_sums, squarefree_decomposition,
    squarefree_part, AlgebraError, IntPoly, PrimePower,
};
use crate::gf::{gf_make, GfElem, GfError, PrimePowerField, ENUMERATION_BOUND};
use crate::quadfield::WeilNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    Singular,
    #[error("invalid zeta numerator: {0}")]
    BadZetaNumerator(String),
    #[error("characteristic {0} is not supported for Weierstrass models")]
    Char2Or3Unsupported(u64),
    #[error("coefficient {value} is not a field-element index below {q}")]
    CoefficientOutOfRange { value: i64, q: u64 },
    #[error("negative or non-integral closed point count in degree {0}")]
    NegativeClosedPointCount(usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("trace {a} violates the Hasse bound for q = {q}")]
    HasseViolation { a: i64, q: u64 },
    #[error("curve is supersingular (p = {p} divides the trace {a})")]
    NotOrdinary { p: u64, a: i64 },
    #[error("naive count {naive} disagrees with the trace recurrence {recurrence} in degree {n}")]
    CountMismatch { n: u32, naive: u64, recurrence: BigInt },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Ordinary,
    Supersingular,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ordinary => "ordinary",
            Self::Supersingular => "supersingular",
        })
    }
}

/// `y² = x³ + Ax + B` over `F_{p^e}`.
///
/// `A` and `B` are kept as base-`p` digit indices into the field (for `e = 1`
/// just residues), which is also the external encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassModel {
    field: PrimePowerField,
    a: u64,
    b: u64,
}

impl WeierstrassModel {
    pub fn new(p: u64, e: u32, a: i64, b: i64) -> Result<Self, CurveError> {
        if p == 2 || p == 3 {
            return Err(CurveError::Char2Or3Unsupported(p));
        }
        let field = gf_make(p, e)?;
        let q = field.q();
        let encode = |v: i64| -> Result<u64, CurveError> {
            if e == 1 {
                Ok(v.rem_euclid(p as i64) as u64)
            } else if v >= 0 && (v as u64) < q {
                Ok(v as u64)
            } else {
                Err(CurveError::CoefficientOutOfRange { value: v, q })
            }
        };
        let model = Self { a: encode(a)?, b: encode(b)?, field };
        let f = &model.field;
        let (ca, cb) = (model.coeff_a(), model.coeff_b());
        let disc = f.add(
            &f.mul(&f.from_int(4), &f.mul(&ca, &f.square(&ca))),
            &f.mul(&f.from_int(27), &f.square(&cb)),
        );
        if f.is_zero(&disc) {
            return Err(CurveError::Singular);
        }
        Ok(model)
    }

    pub fn field(&self) -> &PrimePowerField {
        &self.field
    }

    pub fn a_index(&self) -> u64 {
        self.a
    }

    pub fn b_index(&self) -> u64 {
        self.b
    }

    pub fn coeff_a(&self) -> GfElem {
        self.field.from_index(self.a)
    }

    pub fn coeff_b(&self) -> GfElem {
        self.field.from_index(self.b)
    }
}

/// Image of the base-field generator in `F_{p^{en}}`: the first root of the
/// base modulus in index order.
fn embed_generator(small: &PrimePowerField, large: &PrimePowerField) -> GfElem {
    if small.e() == 1 {
        return large.from_int(small.generator().coords()[0] as i64);
    }
    large
        .elements()
        .find(|x| large.is_zero(&large.eval_prime_poly(small.modulus(), x)))
        .expect("a degree-e extension contains the base field")
}

fn embed(small: &PrimePowerField, large: &PrimePowerField, theta: &GfElem, x: &GfElem) -> GfElem {
    let mut acc = large.zero();
    for &c in x.coords().iter().rev() {
        acc = large.add(&large.mul(&acc, theta), &large.from_int(c as i64));
    }
    debug_assert_eq!(x.coords().len(), small.e() as usize);
    acc
}

/// `|E(F_{q^n})|` by enumerating x and looking up the number of square roots
/// of `x³ + Ax + B` in a table of squares.
pub fn naive_point_count(model: &WeierstrassModel, n: u32) -> Result<u64, CurveError> {
    if n == 0 {
        return Err(CurveError::ZeroDegree);
    }
    let small = &model.field;
    let large = gf_make(small.p(), small.e() * n)?;
    let theta = embed_generator(small, &large);
    let a = embed(small, &large, &theta, &model.coeff_a());
    let b = embed(small, &large, &theta, &model.coeff_b());
    let size = large.q();

    let square_indices: Vec<u64> = (0..size)
        .into_par_iter()
        .map(|i| {
            let y = large.from_index(i);
            large.index(&large.square(&y))
        })
        .collect();
    let mut roots = vec![0u8; size as usize];
    for idx in square_indices {
        roots[idx as usize] += 1;
    }

    let affine: u64 = (0..size)
        .into_par_iter()
        .map(|i| {
            let x = large.from_index(i);
            let rhs = large.add(&large.mul(&large.add(&large.square(&x), &a), &x), &b);
            roots[large.index(&rhs) as usize] as u64
        })
        .sum();
    Ok(affine + 1)
}

/// Traces `a_n = α^n + ᾱ^n` for `0 <= n <= max_n` from
/// `a_{n+1} = a·a_n - q·a_{n-1}`.
pub fn trace_sequence(q: PrimePower, a: i64, max_n: usize) -> Vec<BigInt> {
    let qb = q.to_bigint();
    let ab = BigInt::from(a);
    let mut out = vec![BigInt::from(2), ab.clone()];
    while out.len() <= max_n {
        let k = out.len();
        let next = &ab * &out[k - 1] - &qb * &out[k - 2];
        out.push(next);
    }
    out.truncate(max_n + 1);
    out
}

pub fn recurrence_point_count(q: PrimePower, a: i64, n: u32) -> BigInt {
    let a_n = trace_sequence(q, a, n as usize).pop().expect("nonempty");
    q.pow(n) + BigInt::one() - a_n
}

/// Classification data derived from `(q, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmData {
    pub classification: Classification,
    pub trace: i64,
    /// `a² - 4q`.
    pub cm_disc: i64,
    /// Squarefree part `m` and conductor `f` with `a² - 4q = f² d_K`, when negative,
    /// where `d_K` is the discriminant of `Q(√m)`.
    pub m: Option<i64>,
    pub conductor: Option<u64>,
}

pub fn classify_trace(q: PrimePower, a: i64) -> Result<CmData, CurveError> {
    let disc = a as i128 * a as i128 - 4 * q.value() as i128;
    if disc > 0 {
        return Err(CurveError::HasseViolation { a, q: q.value() });
    }
    let classification =
        if a.rem_euclid(q.p() as i64) == 0 { Classification::Supersingular } else { Classification::Ordinary };
    let (m, conductor) = if disc < 0 {
        let (f, m) = squarefree_decomposition(disc);
        // a² - 4q ≡ 0, 1 mod 4, so f is even whenever d_K = 4m.
        let f = if m.rem_euclid(4) == 1 { f } else { f / 2 };
        (Some(m as i64), Some(f as u64))
    } else {
        (None, None)
    };
    Ok(CmData { classification, trace: a, cm_disc: disc as i64, m, conductor })
}

/// A validated elliptic curve with its Frobenius data.
///
/// `model` is absent for isogeny classes given only by `(q, a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticCurveData {
    q: PrimePower,
    model: Option<WeierstrassModel>,
    cm: CmData,
    alpha: Option<WeilNumber>,
}

impl EllipticCurveData {
    pub fn from_weierstrass(p: u64, e: u32, a: i64, b: i64) -> Result<Self, CurveError> {
        let model = WeierstrassModel::new(p, e, a, b)?;
        let q = model.field.order();
        let count = naive_point_count(&model, 1)?;
        let trace = q.value() as i64 + 1 - count as i64;
        let mut curve = Self::from_trace(q, trace)?;
        curve.model = Some(model);
        Ok(curve)
    }

    pub fn from_trace(q: PrimePower, a: i64) -> Result<Self, CurveError> {
        let cm = classify_trace(q, a)?;
        Ok(Self { q, model: None, alpha: WeilNumber::frobenius(q, a), cm })
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn model(&self) -> Option<&WeierstrassModel> {
        self.model.as_ref()
    }

    pub fn trace(&self) -> i64 {
        self.cm.trace
    }

    pub fn classify(&self) -> &CmData {
        &self.cm
    }

    pub fn is_ordinary(&self) -> bool {
        self.cm.classification == Classification::Ordinary
    }

    /// The Frobenius root with positive imaginary part.
    pub fn alpha(&self) -> Option<&WeilNumber> {
        self.alpha.as_ref()
    }

    pub fn ordinary_alpha(&self) -> Result<&WeilNumber, CurveError> {
        match (&self.alpha, self.is_ordinary()) {
            (Some(alpha), true) => Ok(alpha),
            _ => Err(CurveError::NotOrdinary { p: self.q.p(), a: self.trace() }),
        }
    }

    /// `1 - a t + q t²`.
    pub fn char_poly(&self) -> IntPoly {
        IntPoly::new(vec![BigInt::one(), BigInt::from(-self.trace()), self.q.to_bigint()])
    }

    /// `|E(F_{q^n})|`. Counted naively when the model is known and the field
    /// is small enough, in which case the recurrence must agree.
    pub fn point_count(&self, n: u32) -> Result<BigInt, CurveError> {
        if n == 0 {
            return Err(CurveError::ZeroDegree);
        }
        let recurrence = recurrence_point_count(self.q, self.trace(), n);
        if let Some(model) = &self.model {
            let within_bound =
                self.q.value().checked_pow(n).is_some_and(|size| size <= ENUMERATION_BOUND);
            if within_bound {
                let naive = naive_point_count(model, n)?;
                if BigInt::from(naive) != recurrence {
                    return Err(CurveError::CountMismatch { n, naive, recurrence });
                }
            }
        }
        Ok(recurrence)
    }

    /// The same curve over `F_{q^n}`, given by its trace `a_n`.
    pub fn base_change(&self, n: u32) -> Result<Self, CurveError> {
        let qn = self.q.extend(n).ok_or(CurveError::HasseViolation { a: self.trace(), q: self.q.value() })?;
        let a_n = trace_sequence(self.q, self.trace(), n as usize)
            .pop()
            .and_then(|a| a.to_i64())
            .ok_or(CurveError::HasseViolation { a: self.trace(), q: self.q.value() })?;
        Self::from_trace(qn, a_n)
    }
}

/// A curve known through `(q, P_1)` only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractCurve {
    q: PrimePower,
    p1: IntPoly,
}

impl AbstractCurve {
    pub fn new(q: PrimePower, p1: IntPoly) -> Result<Self, CurveError> {
        validate_zeta_numerator(q, &p1)?;
        Ok(Self { q, p1 })
    }

    pub fn projective_line(q: PrimePower) -> Self {
        Self { q, p1: IntPoly::one() }
    }
}

/// Checks that `p1` is the `H¹` numerator of a curve over `F_q`: constant term
/// one, even degree `2g`, `c_{2g-k} = q^{g-k} c_k`, and every inverse root of
/// absolute value `√q`.
///
/// The weight condition is decided exactly. Writing `p1(t) = t^g h(1/t + qt)`,
/// the inverse roots have absolute value `√q` iff `h` has only real roots, all
/// in `[-2√q, 2√q]`.
pub fn validate_zeta_numerator(q: PrimePower, p1: &IntPoly) -> Result<(), CurveError> {
    let bad = |msg: String| Err(CurveError::BadZetaNumerator(msg));
    if !p1.constant_term().is_one() {
        return bad("constant term must be 1".into());
    }
    let deg = p1.len_degree();
    if deg % 2 == 1 {
        return bad(format!("odd degree {deg}"));
    }
    let g = deg / 2;
    let qb = q.to_bigint();
    for k in 0..=g {
        let expected = num_traits::pow(qb.clone(), g - k) * p1.coeff(k);
        if p1.coeff(2 * g - k) != expected {
            return bad(format!("functional equation fails at t^{}", 2 * g - k));
        }
    }
    if g == 0 {
        return Ok(());
    }

    // h_{g-m} = c_m - Σ_{l>=1} h_{g-m+2l} binom(g-m+2l, l) q^l
    let mut h = vec![BigInt::zero(); g + 1];
    for m in 0..=g {
        let mut acc = p1.coeff(m);
        let mut l = 1;
        while g - m + 2 * l <= g {
            let k = g - m + 2 * l;
            acc -= &h[k] * binomial(k as u64, l as u64) * num_traits::pow(qb.clone(), l);
            l += 1;
        }
        h[g - m] = acc;
    }
    let h = IntPoly::new(h);
    let real_roots = count_distinct_real_roots(&h);
    if real_roots != squarefree_part(&h).degree().unwrap_or(0) {
        return bad("inverse roots off the circle of radius sqrt(q)".into());
    }
    // h(z) h(-z) as a polynomial in y = z²; its roots are the squared roots of h.
    let h_neg = IntPoly::new(
        h.coeffs().iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect(),
    );
    let even = &h * &h_neg;
    let s = IntPoly::new(even.coeffs().iter().step_by(2).cloned().collect());
    let four_q = BigRational::from_integer(BigInt::from(4) * &qb);
    if count_roots_above(&s, &four_q) > 0 {
        return bad("inverse roots off the circle of radius sqrt(q)".into());
    }
    Ok(())
}

/// A base or fiber curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurveDescriptor {
    Elliptic(EllipticCurveData),
    Abstract(AbstractCurve),
}

impl CurveDescriptor {
    pub fn q(&self) -> PrimePower {
        match self {
            Self::Elliptic(e) => e.q(),
            Self::Abstract(c) => c.q,
        }
    }

    pub fn p1(&self) -> IntPoly {
        match self {
            Self::Elliptic(e) => e.char_poly(),
            Self::Abstract(c) => c.p1.clone(),
        }
    }

    pub fn genus(&self) -> usize {
        self.p1().len_degree() / 2
    }

    /// Genus-one data viewed as an elliptic curve (isogeny class).
    pub fn as_elliptic(&self) -> Result<EllipticCurveData, CurveError> {
        match self {
            Self::Elliptic(e) => Ok(e.clone()),
            Self::Abstract(c) if c.p1.len_degree() == 2 => {
                let a = (-c.p1.coeff(1)).to_i64().expect("bounded by Hasse");
                EllipticCurveData::from_trace(c.q, a)
            }
            Self::Abstract(c) => {
                Err(CurveError::BadZetaNumerator(format!("genus {} is not elliptic", c.p1.len_degree() / 2)))
            }
        }
    }

    /// `|C(F_{q^n})|` for `1 <= n <= max_n`, from the zeta data.
    pub fn point_counts(&self, max_n: usize) -> Result<Vec<BigInt>, CurveError> {
        let ps = power_sums(&self.p1(), max_n)?;
        let q = self.q();
        Ok((1..=max_n).map(|n| q.pow(n as u32) + BigInt::one() - &ps[n]).collect())
    }
}

/// Closed points of degree `n` for `1 <= n <= max_n`, by Möbius inversion of
/// `Σ_{d|n} d·b_d = |C(F_{q^n})|`.
pub fn closed_point_counts(curve: &CurveDescriptor, max_n: usize) -> Result<Vec<BigInt>, CurveError> {
    if max_n == 0 {
        return Err(CurveError::ZeroDegree);
    }
    let counts = curve.point_counts(max_n)?;
    (1..=max_n)
        .map(|n| {
            let mut acc = BigInt::zero();
            for d in divisors(n as u64) {
                acc += &counts[d as usize - 1] * mobius(n as u64 / d);
            }
            let (b, rem) = acc.div_rem(&BigInt::from(n));
            if !rem.is_zero() || b.is_negative() {
                return Err(CurveError::NegativeClosedPointCount(n));
            }
            Ok(b)
        })
        .collect()
}
