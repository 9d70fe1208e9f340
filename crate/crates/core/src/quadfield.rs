//! Imaginary quadratic fields `Q(√m)`, Weil numbers in them, splitting of
//! rational primes and `p`-adic valuations at the primes above a split `p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{padic_valuation, squarefree_decomposition, PrimePower};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("{0} is not a negative squarefree integer")]
    BadDiscriminant(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{p} does not split in Q(√{m})")]
    NotSplit { m: i64, p: u64 },
    #[error("valuation of zero")]
    ZeroElement,
    #[error("Frobenius trace {trace} is divisible by p = {p}: not ordinary")]
    NotOrdinary { trace: BigInt, p: u64 },
    #[error("{value} is not a Weil {q}-integer of weight {weight}")]
    NotWeilInteger { value: String, q: u64, weight: u32 },
    #[error("elements of different fields: Q(√{0}) and Q(√{1})")]
    FieldMismatch(i64, i64),
}

/// `Q(√m)` with `m < 0` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    pub fn new(m: i64) -> Result<Self, QuadError> {
        if m >= 0 || squarefree_decomposition(m as i128).0 != 1 {
            return Err(QuadError::BadDiscriminant(m));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// Field discriminant: `m` if `m ≡ 1 (mod 4)`, else `4m`.
    pub fn disc(&self) -> i64 {
        if self.m.rem_euclid(4) == 1 {
            self.m
        } else {
            4 * self.m
        }
    }

    pub fn element(&self, x: BigRational, y: BigRational) -> QuadElement {
        QuadElement { m: self.m, x, y }
    }

    pub fn from_ints(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadElement {
        self.element(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    /// `(x + y√m) / 2`.
    pub fn from_halves(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadElement {
        let two = BigInt::from(2);
        self.element(BigRational::new(x.into(), two.clone()), BigRational::new(y.into(), two))
    }

    pub fn rational(&self, x: BigRational) -> QuadElement {
        self.element(x, BigRational::zero())
    }

    /// Membership in the maximal order.
    pub fn is_integral(&self, a: &QuadElement) -> bool {
        let two = BigRational::from_integer(BigInt::from(2));
        let (tx, ty) = (&a.x * &two, &a.y * &two);
        if !tx.is_integer() || !ty.is_integer() {
            return false;
        }
        if self.m.rem_euclid(4) == 1 {
            (tx.to_integer() - ty.to_integer()).is_even()
        } else {
            a.x.is_integer() && a.y.is_integer()
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{})", self.m)
    }
}

/// `x + y√m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElement {
    m: i64,
    x: BigRational,
    y: BigRational,
}

impl QuadElement {
    pub fn field(&self) -> QuadField {
        QuadField { m: self.m }
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { m: self.m, x: self.x.clone(), y: -&self.y }
    }

    /// `x² - m y²`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - BigRational::from_integer(BigInt::from(self.m)) * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        &self.x + &self.x
    }

    pub fn one_like(&self) -> Self {
        Self { m: self.m, x: BigRational::one(), y: BigRational::zero() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { m: self.m, x: &self.x * c, y: &self.y * c }
    }

    pub fn inv(&self) -> Result<Self, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        Ok(self.conj().scale(&self.norm().recip()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow_signed(&self, k: i64) -> Result<Self, QuadError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(base.pow(k.unsigned_abs() as u32))
    }

    /// `Some(s)` when the element equals `q^s` for some integer `s` (any sign).
    pub fn as_power_of(&self, q: &BigInt) -> Option<i64> {
        if !self.is_rational() || !self.x.is_positive() {
            return None;
        }
        let (num, den) = (self.x.numer().clone(), self.x.denom().clone());
        let exact_log = |mut n: BigInt| -> Option<i64> {
            let mut s = 0;
            while !n.is_one() {
                let (quot, rem) = n.div_rem(q);
                if !rem.is_zero() {
                    return None;
                }
                n = quot;
                s += 1;
            }
            Some(s)
        };
        match (num.is_one(), den.is_one()) {
            (_, true) => exact_log(num),
            (true, false) => exact_log(den).map(|s| -s),
            _ => None,
        }
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let root = if self.m == -1 { "i".to_string() } else { format!("√{}", self.m) };
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        let sign = if self.y.is_negative() { "-" } else { "+" };
        let mag = self.y.abs();
        let coeff = if mag.is_one() { String::new() } else { format!("{mag}·") };
        if self.x.is_zero() {
            let lead = if self.y.is_negative() { "-" } else { "" };
            write!(f, "{lead}{coeff}{root}")
        } else {
            write!(f, "{} {sign} {coeff}{root}", self.x)
        }
    }
}

fn same_field(a: &QuadElement, b: &QuadElement) {
    assert_eq!(a.m, b.m, "arithmetic across different quadratic fields");
}

impl Add for &QuadElement {
    type Output = QuadElement;

    fn add(self, rhs: &QuadElement) -> QuadElement {
        same_field(self, rhs);
        QuadElement { m: self.m, x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &QuadElement {
    type Output = QuadElement;

    fn sub(self, rhs: &QuadElement) -> QuadElement {
        same_field(self, rhs);
        QuadElement { m: self.m, x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;

    fn neg(self) -> QuadElement {
        QuadElement { m: self.m, x: -&self.x, y: -&self.y }
    }
}

impl Mul for &QuadElement {
    type Output = QuadElement;

    fn mul(self, rhs: &QuadElement) -> QuadElement {
        same_field(self, rhs);
        let m = BigRational::from_integer(BigInt::from(self.m));
        QuadElement {
            m: self.m,
            x: &self.x * &rhs.x + m * &self.y * &rhs.y,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfOp {
    Add,
    Mul,
    Conj,
    Norm,
    Trace,
    Inv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QfValue {
    Element(QuadElement),
    Rational(BigRational),
}

/// Single entry point for field arithmetic; unary operations ignore `b`.
pub fn qf_ops(a: &QuadElement, b: &QuadElement, op: QfOp) -> Result<QfValue, QuadError> {
    if matches!(op, QfOp::Add | QfOp::Mul) && a.m != b.m {
        return Err(QuadError::FieldMismatch(a.m, b.m));
    }
    Ok(match op {
        QfOp::Add => QfValue::Element(a + b),
        QfOp::Mul => QfValue::Element(a * b),
        QfOp::Conj => QfValue::Element(a.conj()),
        QfOp::Norm => QfValue::Rational(a.norm()),
        QfOp::Trace => QfValue::Rational(a.trace()),
        QfOp::Inv => QfValue::Element(a.inv()?),
    })
}

/// An algebraic integer of `Q(√m)` with `value · conj(value) = q^weight`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeilNumber {
    value: QuadElement,
    q: PrimePower,
    weight: u32,
}

impl WeilNumber {
    pub fn new(value: QuadElement, q: PrimePower, weight: u32) -> Result<Self, QuadError> {
        let ok = value.field().is_integral(&value)
            && value.norm() == BigRational::from_integer(q.pow(weight));
        if !ok {
            return Err(QuadError::NotWeilInteger { value: value.to_string(), q: q.value(), weight });
        }
        Ok(Self { value, q, weight })
    }

    /// The Frobenius root `α = (a + f√m)/2` of `1 - a t + q t²`, choosing the
    /// root with positive `√m`-coordinate. `None` when `a² - 4q >= 0`.
    pub fn frobenius(q: PrimePower, trace: i64) -> Option<Self> {
        let disc = (trace as i128) * (trace as i128) - 4 * q.value() as i128;
        if disc >= 0 {
            return None;
        }
        let (f, m) = squarefree_decomposition(disc);
        let field = QuadField::new(m as i64).ok()?;
        let value = field.from_halves(trace, BigInt::from(f));
        Some(Self::new(value, q, 1).expect("Frobenius root is a Weil integer"))
    }

    pub fn value(&self) -> &QuadElement {
        &self.value
    }

    pub fn field(&self) -> QuadField {
        self.value.field()
    }

    pub fn q(&self) -> PrimePower {
        self.q
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn conj(&self) -> Self {
        Self { value: self.value.conj(), q: self.q, weight: self.weight }
    }

    /// Integer trace `α + ᾱ`.
    pub fn trace(&self) -> BigInt {
        self.value.trace().to_integer()
    }

    /// Weight-one Weil integer whose trace is prime to `p`.
    pub fn is_ordinary(&self) -> bool {
        self.weight == 1 && !(self.trace() % BigInt::from(self.q.p())).is_zero()
    }

    pub(crate) fn ensure_ordinary(&self) -> Result<(), QuadError> {
        if self.is_ordinary() {
            Ok(())
        } else {
            Err(QuadError::NotOrdinary { trace: self.trace(), p: self.q.p() })
        }
    }
}

impl fmt::Display for WeilNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

/// Kronecker-symbol decision `(disc / p)`.
pub fn splitting_type(field: &QuadField, p: u64) -> SplittingType {
    let disc = field.disc();
    if disc.rem_euclid(p as i64) == 0 {
        return SplittingType::Ramified;
    }
    if p == 2 {
        return if disc.rem_euclid(8) == 1 { SplittingType::Split } else { SplittingType::Inert };
    }
    let residue = disc.rem_euclid(p as i64) as u64;
    if pow_mod_u64(residue, (p - 1) / 2, p) == 1 {
        SplittingType::Split
    } else {
        SplittingType::Inert
    }
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let ext = a.mod_floor(modulus).extended_gcd(modulus);
    assert!(ext.gcd.is_one(), "not invertible");
    ext.x.mod_floor(modulus)
}

/// Newton iteration for a simple root of a monic quadratic `x² + c1 x + c0`
/// modulo `p^precision`, starting from `r0`.
fn hensel_lift(c0: &BigInt, c1: &BigInt, r0: BigInt, p: u64, precision: u32) -> BigInt {
    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    let mut r = r0;
    let mut reached = 1u32;
    while reached < precision {
        let f = &r * &r + c1 * &r + c0;
        let df = BigInt::from(2) * &r + c1;
        r = (&r - f * mod_inverse(&df, &modulus)).mod_floor(&modulus);
        reached = reached.saturating_mul(2);
    }
    r
}

/// The image of `√m` under the embedding `O_F → Z_p / p^precision` that
/// defines the first prime over a split `p`.
fn sqrt_m_lift(m: i64, p: u64, precision: u32) -> BigInt {
    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    if p == 2 {
        // Lift a root of ω² - ω + (1-m)/4 starting at 0, then √m = 2ω - 1.
        let c0 = BigInt::from((1 - m) / 4);
        let omega = hensel_lift(&c0, &BigInt::from(-1), BigInt::zero(), 2, precision);
        return (BigInt::from(2) * omega - BigInt::one()).mod_floor(&modulus);
    }
    let residue = m.rem_euclid(p as i64) as u64;
    let s0 = (0..p)
        .find(|s| (*s as u128 * *s as u128 % p as u128) as u64 == residue)
        .expect("m is a square modulo a split prime");
    hensel_lift(&BigInt::from(-m), &BigInt::zero(), BigInt::from(s0), p, precision)
}

/// Valuations of a nonzero element at the two primes above a split `p`.
///
/// The first prime is the one on which `√m ≡ s₀ (mod p)` for the least
/// nonnegative square root `s₀` of `m` modulo `p` (for `p = 2`, the prime on
/// which `(1+√m)/2 ≡ 0`). Non-integral elements get negative valuations.
pub fn element_valuations(a: &QuadElement, p: u64) -> Result<(i64, i64), QuadError> {
    let field = a.field();
    if splitting_type(&field, p) != SplittingType::Split {
        return Err(QuadError::NotSplit { m: field.m(), p });
    }
    if a.is_zero() {
        return Err(QuadError::ZeroElement);
    }
    let denom = a.x.denom().lcm(a.y.denom());
    let x = (&a.x * BigRational::from_integer(denom.clone())).to_integer();
    let y = (&a.y * BigRational::from_integer(denom.clone())).to_integer();
    let norm = &x * &x - BigInt::from(field.m()) * &y * &y;
    let total = padic_valuation(&norm, p);
    // Two guard digits beyond the largest possible single valuation.
    let precision = total + 2;
    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    let s = sqrt_m_lift(field.m(), p, precision);
    let val = |image: BigInt| -> u32 {
        let image = image.mod_floor(&modulus);
        if image.is_zero() {
            precision
        } else {
            padic_valuation(&image, p)
        }
    };
    let v1 = val(&x + &y * &s);
    let v2 = val(&x - &y * &s);
    debug_assert_eq!(v1 + v2, total, "valuations must add up to v_p(norm)");
    let shift = padic_valuation(&denom, p) as i64;
    Ok((v1 as i64 - shift, v2 as i64 - shift))
}

pub fn padic_valuations(alpha: &WeilNumber, p: u64) -> Result<(i64, i64), QuadError> {
    element_valuations(alpha.value(), p)
}

/// All Weil `q`-integers of weight `w` in `field`, ordered by ascending `y`,
/// then ascending `x`.
pub fn weil_enumerate(field: &QuadField, q: PrimePower, w: u32) -> Vec<WeilNumber> {
    let target = q.pow(w) * BigInt::from(4);
    let abs_m = BigInt::from(field.m().unsigned_abs());
    let half_lattice = field.m().rem_euclid(4) == 1;
    let y_max = (&target / &abs_m).sqrt();
    let mut out = Vec::new();
    let mut big_y = -y_max.clone();
    while big_y <= y_max {
        let rest = &target - &abs_m * &big_y * &big_y;
        if !rest.is_negative() {
            let root = rest.sqrt();
            if &root * &root == rest {
                let candidates = if root.is_zero() { vec![root.clone()] } else { vec![-root.clone(), root] };
                for big_x in candidates {
                    let admissible = if half_lattice {
                        (&big_x - &big_y).is_even()
                    } else {
                        big_x.is_even() && big_y.is_even()
                    };
                    if admissible {
                        let value = field.from_halves(big_x, big_y.clone());
                        out.push(WeilNumber::new(value, q, w).expect("enumerated on the norm equation"));
                    }
                }
            }
        }
        big_y += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndependenceWitness {
    /// `α^r β = q^s` with `β` of weight `w < r`.
    PowerOfQ { r: u32, beta: String, weight: u32, s: i64 },
    /// `q^s / α^{2s-1}` turned out integral.
    IntegralQuotient { s: u32 },
    /// `α^r β = q^s` for a weight-one `β ∉ {α, ᾱ}`.
    WeightOneRelation { r: i64, s: i64, beta: String },
}

impl fmt::Display for IndependenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerOfQ { r, beta, weight, s } => {
                write!(f, "alpha^{r} * ({beta}) = q^{s} with weight({beta}) = {weight}")
            }
            Self::IntegralQuotient { s } => write!(f, "q^{s} / alpha^{} is integral", 2 * s - 1),
            Self::WeightOneRelation { r, s, beta } => write!(f, "alpha^{r} * ({beta}) = q^{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub alpha: WeilNumber,
    pub valuations: (i64, i64),
    pub checks: u64,
    pub witnesses: Vec<IndependenceWitness>,
}

impl IndependenceReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Exhaustive check of the non-relations satisfied by an ordinary Frobenius
/// root `α`:
///
/// 1. `α^r β` is never a power of `q` for `1 <= r <= max_r`, `0 <= w < r`,
///    and `β` any Weil `q`-integer of weight `w` in `F` or in `Q`;
/// 2. `q^s / α^{2s-1}` is not integral for `2 <= s <= max_s`;
/// 3. `α^r β ≠ q^s` for weight-one `β ∉ {α, ᾱ}` and `|r| <= max_r`, `|s| <= max_s`.
pub fn verify_lemma62(alpha: &WeilNumber, max_r: u32, max_s: u32) -> Result<IndependenceReport, QuadError> {
    alpha.ensure_ordinary()?;
    let field = alpha.field();
    let q = alpha.q();
    let qb = q.to_bigint();
    let a = alpha.value();
    let mut checks = 0u64;
    let mut witnesses = Vec::new();

    let valuations = padic_valuations(alpha, q.p())?;

    for r in 1..=max_r {
        let ar = a.pow(r);
        for w in 0..r {
            let mut betas: Vec<QuadElement> =
                weil_enumerate(&field, q, w).into_iter().map(|b| b.value).collect();
            if w % 2 == 0 {
                let root = field.rational(BigRational::from_integer(q.pow(w / 2)));
                for beta in [root.clone(), -&root] {
                    if !betas.contains(&beta) {
                        betas.push(beta);
                    }
                }
            }
            for beta in betas {
                checks += 1;
                if let Some(s) = (&ar * &beta).as_power_of(&qb) {
                    witnesses.push(IndependenceWitness::PowerOfQ { r, beta: beta.to_string(), weight: w, s });
                }
            }
        }
    }

    for s in 2..=max_s {
        checks += 1;
        let quotient = a.pow(2 * s - 1).inv()?.scale(&BigRational::from_integer(q.pow(s)));
        let (v1, v2) = element_valuations(&quotient, q.p())?;
        let integral_by_valuation = v1 >= 0 && v2 >= 0;
        debug_assert_eq!(integral_by_valuation, field.is_integral(&quotient));
        if integral_by_valuation {
            witnesses.push(IndependenceWitness::IntegralQuotient { s });
        }
    }

    let conj = a.conj();
    let max_r = max_r as i64;
    let max_s = max_s as i64;
    for beta in weil_enumerate(&field, q, 1) {
        let beta = beta.value;
        if beta == *a || beta == conj {
            continue;
        }
        for r in -max_r..=max_r {
            let prod = &a.pow_signed(r)? * &beta;
            for s in -max_s..=max_s {
                checks += 1;
                if prod.as_power_of(&qb) == Some(s) {
                    witnesses.push(IndependenceWitness::WeightOneRelation { r, s, beta: beta.to_string() });
                }
            }
        }
    }

    Ok(IndependenceReport { alpha: alpha.clone(), valuations, checks, witnesses })
}

/// Convenience for tests and reports: `x`, `y` as `i64` when they are integers.
pub fn integer_coordinates(a: &QuadElement) -> Option<(i64, i64)> {
    if a.x.is_integer() && a.y.is_integer() {
        Some((a.x.to_integer().to_i64()?, a.y.to_integer().to_i64()?))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn gauss() -> QuadField {
        QuadField::new(-1).unwrap()
    }

    fn q5() -> PrimePower {
        PrimePower::new(5, 1).unwrap()
    }

    #[test]
    fn field_construction() {
        assert!(QuadField::new(-4).is_err());
        assert!(QuadField::new(3).is_err());
        assert_eq!(QuadField::new(-1).unwrap().disc(), -4);
        assert_eq!(QuadField::new(-3).unwrap().disc(), -3);
        assert_eq!(QuadField::new(-7).unwrap().disc(), -7);
        assert_eq!(QuadField::new(-2).unwrap().disc(), -8);
    }

    #[test]
    fn basic_operations() {
        let f = gauss();
        let a = f.from_ints(1, 2);
        assert_eq!(qf_ops(&a, &a, QfOp::Norm).unwrap(), QfValue::Rational(rat(5)));
        assert_eq!(a.conj().conj(), a);
        let i = f.from_ints(0, 1);
        assert_eq!(qf_ops(&i, &i, QfOp::Trace).unwrap(), QfValue::Rational(rat(0)));
        let zero = f.from_ints(0, 0);
        assert_eq!(qf_ops(&zero, &zero, QfOp::Inv), Err(QuadError::DivisionByZero));
        assert_eq!(&a * &a.inv().unwrap(), a.one_like());
        let other = QuadField::new(-2).unwrap().from_ints(1, 1);
        assert_eq!(qf_ops(&a, &other, QfOp::Add), Err(QuadError::FieldMismatch(-1, -2)));
    }

    #[test]
    fn integrality() {
        let f = QuadField::new(-3).unwrap();
        assert!(f.is_integral(&f.from_halves(1, 1)));
        assert!(!f.is_integral(&f.from_halves(1, 2)));
        let g = gauss();
        assert!(!g.is_integral(&g.from_halves(1, 1)));
        assert!(g.is_integral(&g.from_ints(3, -4)));
    }

    #[test]
    fn splitting() {
        let g = gauss();
        assert_eq!(splitting_type(&g, 5), SplittingType::Split);
        assert_eq!(splitting_type(&g, 2), SplittingType::Ramified);
        assert_eq!(splitting_type(&g, 3), SplittingType::Inert);
        let f7 = QuadField::new(-7).unwrap();
        assert_eq!(splitting_type(&f7, 2), SplittingType::Split);
        assert_eq!(splitting_type(&f7, 7), SplittingType::Ramified);
        assert_eq!(splitting_type(&QuadField::new(-3).unwrap(), 2), SplittingType::Inert);
    }

    /// Splitting type against a direct count of roots of the minimal polynomial
    /// of the ring generator modulo p.
    #[test]
    fn splitting_matches_root_count() {
        for m in [-1i64, -2, -3, -5, -6, -7, -11, -15, -19, -23] {
            let f = QuadField::new(m).unwrap();
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                let roots = (0..p as i64)
                    .filter(|&x| {
                        let v = if m.rem_euclid(4) == 1 { x * x - x + (1 - m) / 4 } else { x * x - m };
                        v.rem_euclid(p as i64) == 0
                    })
                    .count();
                let expected = match roots {
                    2 => SplittingType::Split,
                    1 => SplittingType::Ramified,
                    _ => SplittingType::Inert,
                };
                assert_eq!(splitting_type(&f, p), expected, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn frobenius_of_running_example() {
        let alpha = WeilNumber::frobenius(q5(), 2).unwrap();
        assert_eq!(alpha.field().m(), -1);
        assert_eq!(integer_coordinates(alpha.value()), Some((1, 2)));
        assert!(alpha.is_ordinary());
        assert!(WeilNumber::frobenius(PrimePower::new(7, 2).unwrap(), 14).is_none());
        let ss = WeilNumber::frobenius(PrimePower::new(7, 2).unwrap(), 7).unwrap();
        assert!(!ss.is_ordinary());
    }

    #[test]
    fn valuations_running_example() {
        let alpha = WeilNumber::frobenius(q5(), 2).unwrap();
        assert_eq!(padic_valuations(&alpha, 5).unwrap(), (1, 0));
        let five = WeilNumber::new(gauss().from_ints(5, 0), q5(), 2).unwrap();
        assert_eq!(padic_valuations(&five, 5).unwrap(), (1, 1));
        let sq = gauss().from_ints(-3, 4);
        assert_eq!(alpha.value().pow(2), sq);
        assert_eq!(element_valuations(&sq, 5).unwrap(), (2, 0));
        assert_eq!(padic_valuations(&alpha, 3), Err(QuadError::NotSplit { m: -1, p: 3 }));
        assert_eq!(element_valuations(&gauss().from_ints(0, 0), 5), Err(QuadError::ZeroElement));
    }

    #[test]
    fn valuation_properties_exhaustive() {
        for (m, p) in [(-1i64, 5u64), (-1, 13), (-2, 3), (-7, 2), (-7, 11), (-3, 7)] {
            let f = QuadField::new(m).unwrap();
            let q = PrimePower::new(p, 1).unwrap();
            let elems: Vec<QuadElement> =
                (0..=2).flat_map(|w| weil_enumerate(&f, q, w)).map(|b| b.value().clone()).collect();
            assert!(!elems.is_empty());
            for a in &elems {
                let va = element_valuations(a, p).unwrap();
                assert_eq!(element_valuations(&a.conj(), p).unwrap(), (va.1, va.0));
                for b in &elems {
                    let vb = element_valuations(b, p).unwrap();
                    let vab = element_valuations(&(a * b), p).unwrap();
                    assert_eq!(vab, (va.0 + vb.0, va.1 + vb.1));
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let g = gauss();
        let w1 = weil_enumerate(&g, q5(), 1);
        let coords: Vec<(i64, i64)> = w1.iter().map(|b| integer_coordinates(b.value()).unwrap()).collect();
        assert_eq!(coords, vec![(-1, -2), (1, -2), (-2, -1), (2, -1), (-2, 1), (2, 1), (-1, 2), (1, 2)]);
        let w0 = weil_enumerate(&g, q5(), 0);
        let units: Vec<(i64, i64)> = w0.iter().map(|b| integer_coordinates(b.value()).unwrap()).collect();
        assert_eq!(units, vec![(0, -1), (-1, 0), (1, 0), (0, 1)]);
        assert!(weil_enumerate(&QuadField::new(-3).unwrap(), q5(), 1).is_empty());
        // Eisenstein units are six half-integral points.
        assert_eq!(weil_enumerate(&QuadField::new(-3).unwrap(), q5(), 0).len(), 6);
    }

    /// Direct lattice scan over a box, independent of the y-bound in the
    /// enumerator.
    #[test]
    fn enumeration_matches_lattice_scan() {
        for m in [-1i64, -2, -3, -7, -11, -15] {
            let f = QuadField::new(m).unwrap();
            for (p, e) in [(5u64, 1u32), (7, 1), (11, 1), (3, 2)] {
                let q = PrimePower::new(p, e).unwrap();
                for w in 0..=2u32 {
                    let target = 4 * (q.value() as i64).pow(w);
                    let bound = 2 * (target as f64).sqrt() as i64 + 2;
                    let mut count = 0;
                    for bx in -bound..=bound {
                        for by in -bound..=bound {
                            if bx * bx - m * by * by == target {
                                let value = f.from_halves(bx, by);
                                if f.is_integral(&value) {
                                    count += 1;
                                }
                            }
                        }
                    }
                    let listed = weil_enumerate(&f, q, w);
                    assert_eq!(listed.len(), count, "m={m} q={q} w={w}");
                    let mut dedup = listed.clone();
                    dedup.dedup();
                    assert_eq!(dedup.len(), listed.len());
                }
            }
        }
    }

    #[test]
    fn q_power_over_odd_alpha_power_is_not_integral() {
        let alpha = WeilNumber::frobenius(q5(), 2).unwrap();
        let a3 = alpha.value().pow(3);
        assert_eq!(a3, gauss().from_ints(-11, -2));
        let quotient = a3.inv().unwrap().scale(&rat(25));
        let fifth = BigRational::new(BigInt::from(1), BigInt::from(5));
        assert_eq!(quotient, gauss().from_ints(-11, 2).scale(&fifth));
        assert!(!gauss().is_integral(&quotient));
    }

    #[test]
    fn independence_check_passes_for_e0() {
        let alpha = WeilNumber::frobenius(q5(), 2).unwrap();
        let report = verify_lemma62(&alpha, 4, 4).unwrap();
        assert!(report.passed(), "{:?}", report.witnesses);
        assert!(report.checks > 100);
        // r = 1 with β = 1 is the degenerate case.
        assert_eq!(alpha.value().as_power_of(&BigInt::from(5)), None);
    }

    #[test]
    fn independence_check_rejects_supersingular() {
        let ss = WeilNumber::new(gauss().from_ints(0, 5), PrimePower::new(5, 2).unwrap(), 1);
        // 5i has norm 25 = q with q = 25; trace 0 is divisible by 5.
        let ss = ss.unwrap();
        assert!(matches!(verify_lemma62(&ss, 2, 2), Err(QuadError::NotOrdinary { .. })));
    }

    #[test]
    fn conjugate_product_is_a_power_of_q() {
        // The one relation the checker must not flag: α·ᾱ = q.
        let alpha = WeilNumber::frobenius(q5(), 2).unwrap();
        let prod = alpha.value() * &alpha.value().conj();
        assert_eq!(prod.as_power_of(&BigInt::from(5)), Some(1));
        assert_eq!(prod.inv().unwrap().as_power_of(&BigInt::from(5)), Some(-1));
    }

    #[test]
    fn norm_is_multiplicative_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for _ in 0..1000 {
            let m = [-1i64, -2, -3, -5, -7, -11][rng.random_range(0..6)];
            let f = QuadField::new(m).unwrap();
            let mut r = || BigRational::new(rng.random_range(-50i64..50).into(), rng.random_range(1i64..9).into());
            let a = f.element(r(), r());
            let b = f.element(r(), r());
            assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }
}
