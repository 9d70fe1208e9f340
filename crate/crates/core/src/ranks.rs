//! Tate classes, Picard numbers and the order of vanishing of `L`-functions
//! of constant families `E^g × C → C`, all decided on Frobenius eigenvalues.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    binomial, composed_product, power_map, root_multiplicity, AlgebraError, IntPoly, RatPoly, RatSeries,
};
use crate::curves::{closed_point_counts, CurveDescriptor, CurveError, EllipticCurveData};
use crate::motive::{kunneth, summand_charpoly, Level, MotiveError, MotiveSummand, SummandKind};
use crate::quadfield::{QuadElement, WeilNumber};

/// Largest truncation order accepted by [`l_euler_check`].
pub const MAX_EULER_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("curve is not ordinary")]
    NotOrdinary,
    #[error("codimension {i} out of range {min}..={max}")]
    DegreeOutOfRange { i: u32, min: u32, max: u32 },
    #[error("base curve is over F_{base}, fiber over F_{fiber}")]
    FieldMismatch { base: u64, fiber: u64 },
    #[error("denominator vanishes at t = q^-{0}")]
    DenominatorVanishes(u32),
    #[error("eigenvalue count {count} disagrees with the closed form {closed_form}")]
    ClosedFormMismatch { count: u64, closed_form: u64 },
    #[error("pairing count {pairing} disagrees with the order of vanishing {order}")]
    RankRoutesDisagree { pairing: u64, order: u64 },
    #[error("truncation order {0} exceeds {MAX_EULER_ORDER}")]
    OrderTooLarge(usize),
    #[error(transparent)]
    Motive(#[from] MotiveError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn ordinary_alpha(e: &EllipticCurveData) -> Result<&WeilNumber, RankError> {
    e.ordinary_alpha().map_err(|_| RankError::NotOrdinary)
}

fn check_base(e: &EllipticCurveData, base: Option<&CurveDescriptor>) -> Result<(), RankError> {
    match base {
        Some(c) if c.q() != e.q() => Err(RankError::FieldMismatch { base: c.q().value(), fiber: e.q().value() }),
        _ => Ok(()),
    }
}

/// Eigenvalues of a summand without its base factor, as elements of `F`.
fn summand_eigenvalues(s: &MotiveSummand, alpha: &WeilNumber) -> Vec<QuadElement> {
    let value = alpha.value();
    let qj = value.one_like().scale(&BigRational::from_integer(alpha.q().pow(s.j())));
    match s.kind {
        SummandKind::Lefschetz { .. } => vec![qj],
        SummandKind::UnitF { .. } => vec![qj.clone(), qj],
        SummandKind::Tensor { i, .. } => {
            let ai = value.pow(i);
            vec![&qj * &ai, &qj * &ai.conj()]
        }
    }
}

/// `det(1 - x t)` over `Q` for `x ∈ F`, as a primitive integer polynomial.
fn eigenvalue_factor(x: &QuadElement) -> IntPoly {
    let one = BigRational::one();
    let rat = if x.is_rational() {
        RatPoly::new(vec![one, -x.x().clone()])
    } else {
        RatPoly::new(vec![one, -x.trace(), x.norm()])
    };
    rat.primitive_integer()
}

/// Number of eigenvalues `β` of `p1` with `γ·β = target`.
fn pairing_count(p1: &IntPoly, gamma: &QuadElement, target: &BigInt) -> usize {
    let x = gamma.inv().expect("eigenvalues are nonzero").scale(&BigRational::from_integer(target.clone()));
    root_multiplicity(p1, &eigenvalue_factor(&x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateReport {
    pub tate_dim: u64,
    /// Predicted rank of the image of the cycle class map; equal to `tate_dim`.
    pub predicted_chow_dim: u64,
    pub witnesses: Vec<String>,
}

/// Multiplicity of the eigenvalue `q^i` on `H^{2i}(E^g)` or `H^{2i}(E^g × C)`.
pub fn tate_class_dim(
    e: &EllipticCurveData,
    g: u32,
    i: u32,
    base: Option<&CurveDescriptor>,
) -> Result<TateReport, RankError> {
    let alpha = ordinary_alpha(e)?;
    check_base(e, base)?;
    let max = g + u32::from(base.is_some());
    if i > max {
        return Err(RankError::DegreeOutOfRange { i, min: 0, max });
    }
    let target = e.q().pow(i);
    let target_elem = alpha.value().one_like().scale(&BigRational::from_integer(target.clone()));
    let summands = kunneth(g, 2 * i as usize, base, Level::Q)?;
    let mut count = 0u64;
    let mut witnesses = Vec::new();
    for (s, &k) in summands.entries() {
        let mut per_copy = 0u64;
        for gamma in summand_eigenvalues(s, alpha) {
            per_copy += if s.base_factor {
                let p1 = base.expect("base summands need a base").p1();
                pairing_count(&p1, &gamma, &target) as u64
            } else {
                u64::from(gamma == target_elem)
            };
        }
        if per_copy > 0 {
            witnesses.push(format!("{k} x {s}: {per_copy} eigenvalue(s) equal to q^{i}"));
            count += per_copy * k;
        }
    }
    Ok(TateReport { tate_dim: count, predicted_chow_dim: count, witnesses })
}

/// `Σ_{α' ∈ {α, ᾱ}}` multiplicity of `q/α'` among the eigenvalues of `P_1(C)`.
pub fn hom_rank(c: &CurveDescriptor, e: &EllipticCurveData) -> Result<u64, RankError> {
    let alpha = ordinary_alpha(e)?;
    check_base(e, Some(c))?;
    let p1 = c.p1();
    let q = e.q().to_bigint();
    Ok([alpha.value().clone(), alpha.value().conj()].iter().map(|a| pairing_count(&p1, a, &q) as u64).sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardReport {
    pub picard: u64,
    /// `g + 2·binom(g, 2)`, plus `1 + g·hom_rank` with a base curve.
    pub closed_form: u64,
    pub hom_rank: Option<u64>,
    pub witnesses: Vec<String>,
}

pub fn picard_number(
    e: &EllipticCurveData,
    g: u32,
    base: Option<&CurveDescriptor>,
) -> Result<PicardReport, RankError> {
    let tate = tate_class_dim(e, g, 1, base)?;
    let pairs: u64 = binomial(g as u64, 2).try_into().expect("small");
    let mut closed_form = g as u64 + 2 * pairs;
    let hom = match base {
        Some(c) => {
            let h = hom_rank(c, e)?;
            closed_form += 1 + g as u64 * h;
            Some(h)
        }
        None => None,
    };
    if closed_form != tate.tate_dim {
        return Err(RankError::ClosedFormMismatch { count: tate.tate_dim, closed_form });
    }
    Ok(PicardReport { picard: tate.tate_dim, closed_form, hom_rank: hom, witnesses: tate.witnesses })
}

/// `L(H^{2i-1}(E^g), t)` over the complete curve `C` as numerator/denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LFunction {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
    /// `det(1 - Frob t | H^{2i-1}(E^g))`.
    pub chi_v: IntPoly,
}

impl LFunction {
    pub fn series(&self, order: usize) -> Result<RatSeries, RankError> {
        let den = RatSeries::from_poly(&self.denominator, order).inverse()?;
        Ok(RatSeries::from_poly(&self.numerator, order).mul(&den))
    }
}

fn check_codim(g: u32, i: u32) -> Result<(), RankError> {
    if i < 1 || i > g {
        return Err(RankError::DegreeOutOfRange { i, min: 1, max: g });
    }
    Ok(())
}

fn chi_v(e: &EllipticCurveData, g: u32, i: u32) -> Result<(IntPoly, Vec<(MotiveSummand, u64)>), RankError> {
    let summands = kunneth(g, 2 * i as usize - 1, None, Level::Q)?;
    let mut chi = IntPoly::one();
    for (s, &k) in summands.entries() {
        chi = &chi * &summand_charpoly(s, e, None)?.pow(k as u32);
    }
    Ok((chi, summands.entries().iter().map(|(s, k)| (*s, *k)).collect()))
}

pub fn l_cohomological(e: &EllipticCurveData, g: u32, i: u32, c: &CurveDescriptor) -> Result<LFunction, RankError> {
    l_cohomological_with(e, g, i, c, &c.p1())
}

/// As [`l_cohomological`] with `P_1(C)` replaced by `p1`.
pub fn l_cohomological_with(
    e: &EllipticCurveData,
    g: u32,
    i: u32,
    c: &CurveDescriptor,
    p1: &IntPoly,
) -> Result<LFunction, RankError> {
    ordinary_alpha(e)?;
    check_base(e, Some(c))?;
    check_codim(g, i)?;
    let (chi, _) = chi_v(e, g, i)?;
    let numerator = composed_product(p1, &chi)?;
    let denominator = &chi * &chi.scale_variable(&e.q().to_bigint());
    let at = BigRational::new(BigInt::one(), e.q().pow(i));
    if denominator.eval(&at).is_zero() {
        return Err(RankError::DenominatorVanishes(i));
    }
    Ok(LFunction { numerator, denominator, chi_v: chi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BbReport {
    pub bb_rank: u64,
    /// `ord_{t = q^{-i}}` of the numerator, computed independently.
    pub order_of_vanishing: u64,
    pub witnesses: Vec<String>,
    /// No independent check exists for `g >= 2`, `i >= 2`.
    pub prediction_only: bool,
}

/// Order of vanishing of `L(H^{2i-1}(E^g), t)` at `t = q^{-i}`, as a count of
/// pairs `γ·β = q^i` with `γ` on `H^{2i-1}(E^g)` and `β` on `H¹(C)`.
pub fn bb_rank(e: &EllipticCurveData, g: u32, i: u32, c: &CurveDescriptor) -> Result<BbReport, RankError> {
    let alpha = ordinary_alpha(e)?;
    let l = l_cohomological(e, g, i, c)?;
    let (_, summands) = chi_v(e, g, i)?;
    let p1 = c.p1();
    let target = e.q().pow(i);
    let mut pairing = 0u64;
    let mut witnesses = Vec::new();
    for (s, k) in summands {
        for gamma in summand_eigenvalues(&s, alpha) {
            let m = pairing_count(&p1, &gamma, &target) as u64;
            if m > 0 {
                witnesses.push(format!("{k} x {s}: eigenvalue {gamma} pairs with {m} eigenvalue(s) of P1(C)"));
                pairing += m * k;
            }
        }
    }
    let linear = IntPoly::new(vec![BigInt::one(), -target]);
    let order = root_multiplicity(&l.numerator, &linear) as u64;
    if order != pairing {
        return Err(RankError::RankRoutesDisagree { pairing, order });
    }
    Ok(BbReport { bb_rank: pairing, order_of_vanishing: order, witnesses, prediction_only: g >= 2 && i >= 2 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerCheck {
    pub order: usize,
    /// Index of the first differing coefficient, if any.
    pub first_mismatch: Option<usize>,
    pub euler: Vec<BigRational>,
    pub cohomological: Vec<BigRational>,
}

impl EulerCheck {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// `Π_x det(1 - Frob_x t^{deg x} | V)^{-1}` over closed points of `C`, to order `n`.
pub fn l_euler_series(e: &EllipticCurveData, g: u32, i: u32, c: &CurveDescriptor, n: usize) -> Result<RatSeries, RankError> {
    check_codim(g, i)?;
    let (chi, _) = chi_v(e, g, i)?;
    let b = closed_point_counts(c, n)?;
    let order = n + 1;
    let mut acc = RatSeries::one(order);
    for (d, b_d) in (1..=n).zip(b) {
        if b_d.is_zero() {
            continue;
        }
        let local = RatSeries::from_poly(&power_map(&chi, d)?, order).inflate(d);
        let exp: i64 = (-b_d).try_into().expect("closed point counts fit in i64");
        acc = acc.mul(&local.pow(exp)?);
    }
    Ok(acc)
}

/// Compares the Euler product with the cohomological expression to order `n`.
pub fn l_euler_check(e: &EllipticCurveData, g: u32, i: u32, c: &CurveDescriptor, n: usize) -> Result<EulerCheck, RankError> {
    l_euler_compare(e, g, i, c, &c.p1(), n)
}

/// As [`l_euler_check`] but with the cohomological side built from `p1`; the
/// Euler side always uses the closed points of `c`.
pub fn l_euler_compare(
    e: &EllipticCurveData,
    g: u32,
    i: u32,
    c: &CurveDescriptor,
    p1: &IntPoly,
    n: usize,
) -> Result<EulerCheck, RankError> {
    if n > MAX_EULER_ORDER {
        return Err(RankError::OrderTooLarge(n));
    }
    let euler = l_euler_series(e, g, i, c, n)?;
    let cohomological = l_cohomological_with(e, g, i, c, p1)?.series(n + 1)?;
    let first_mismatch = (0..=n).find(|&k| euler.coeff(k) != cohomological.coeff(k));
    Ok(EulerCheck {
        order: n,
        first_mismatch,
        euler: euler.coeffs().to_vec(),
        cohomological: cohomological.coeffs().to_vec(),
    })
}
