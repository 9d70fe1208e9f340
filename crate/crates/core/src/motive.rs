//! Symbolic Chow–Künneth summands of `E^g` and `E^g × C` for an ordinary CM
//! elliptic curve `E`, tracked through their Frobenius eigenvalues.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    binomial, composed_product, series_log_zeta, AlgebraError, IntPoly, PrimePower, RatPoly, RatSeries, ZetaSign,
};
use crate::curves::{trace_sequence, CurveDescriptor, CurveError, EllipticCurveData};
use crate::quadfield::WeilNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotiveError {
    #[error("curve is not ordinary")]
    NotOrdinary,
    #[error("summand has a base-curve factor but no base curve was given")]
    MissingBase,
    #[error("degree {n} out of range 0..={max}")]
    DegreeOutOfRange { n: usize, max: usize },
    #[error("no Frobenius root given for Q(√{0})")]
    MissingAlpha(i64),
    #[error("Frobenius roots must share q: {0} vs {1}")]
    MixedQ(u64, u64),
    #[error("factor for (m={m}, r={r}, s={s}) is reducible over Q")]
    Reducible { m: i64, r: u32, s: i64 },
    #[error("equal polynomials with different parameters: {0}")]
    ParameterMismatch(String),
    #[error("functional equation fails between degrees {0} and {1}")]
    FunctionalEquation(usize, usize),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Ordering is the canonical one: Lefschetz < unit < tensor, then by indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SummandKind {
    /// `1(-j)`.
    Lefschetz { j: u32 },
    /// `1_F(-j)`.
    UnitF { j: u32 },
    /// `(⊗_F^i h¹(E))(-j)` or its conjugate, `i >= 1`.
    Tensor { i: u32, j: u32, conj: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotiveSummand {
    pub kind: SummandKind,
    /// Tensored with `h¹(C)` of the base curve.
    pub base_factor: bool,
}

impl MotiveSummand {
    pub fn lefschetz(j: u32) -> Self {
        Self { kind: SummandKind::Lefschetz { j }, base_factor: false }
    }

    pub fn unit_f(j: u32) -> Self {
        Self { kind: SummandKind::UnitF { j }, base_factor: false }
    }

    pub fn tensor(i: u32, j: u32, conj: bool) -> Self {
        assert!(i >= 1, "tensor summands have i >= 1");
        Self { kind: SummandKind::Tensor { i, j, conj }, base_factor: false }
    }

    pub fn with_base(self) -> Self {
        Self { base_factor: true, ..self }
    }

    pub fn twist(self, k: u32) -> Self {
        let kind = match self.kind {
            SummandKind::Lefschetz { j } => SummandKind::Lefschetz { j: j + k },
            SummandKind::UnitF { j } => SummandKind::UnitF { j: j + k },
            SummandKind::Tensor { i, j, conj } => SummandKind::Tensor { i, j: j + k, conj },
        };
        Self { kind, ..self }
    }

    pub fn j(&self) -> u32 {
        match self.kind {
            SummandKind::Lefschetz { j } | SummandKind::UnitF { j } | SummandKind::Tensor { j, .. } => j,
        }
    }

    /// The `i` of a tensor summand, 0 otherwise.
    pub fn i(&self) -> u32 {
        match self.kind {
            SummandKind::Tensor { i, .. } => i,
            _ => 0,
        }
    }

    pub fn weight(&self) -> u32 {
        self.i() + 2 * self.j() + u32::from(self.base_factor)
    }

    /// Number of Frobenius eigenvalues (dimension of the `ℓ`-adic realization).
    pub fn eigenvalue_degree(&self, base_genus: usize) -> u64 {
        let own = match self.kind {
            SummandKind::Lefschetz { .. } => 1,
            SummandKind::UnitF { .. } | SummandKind::Tensor { .. } => 2,
        };
        if self.base_factor {
            own * 2 * base_genus as u64
        } else {
            own
        }
    }
}

impl fmt::Display for MotiveSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let twist = |j: u32| if j == 0 { String::new() } else { format!("(-{j})") };
        match self.kind {
            SummandKind::Lefschetz { j } => write!(f, "1{}", twist(j))?,
            SummandKind::UnitF { j } => write!(f, "1_F{}", twist(j))?,
            SummandKind::Tensor { i, j, conj } => {
                let bar = if conj { "conj " } else { "" };
                write!(f, "{bar}(h1^{i}){}", twist(j))?
            }
        }
        if self.base_factor {
            write!(f, " x h1(C)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// Motives with coefficients in the CM field.
    F,
    /// Rational motives: conjugates identified, `1_F(-j) = 2·1(-j)`.
    Q,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::F => "F",
            Level::Q => "Q",
        })
    }
}

/// Summands with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SummandMultiset {
    level: Level,
    entries: BTreeMap<MotiveSummand, u64>,
}

impl SummandMultiset {
    pub fn new(level: Level) -> Self {
        Self { level, entries: BTreeMap::new() }
    }

    pub fn from_entries(level: Level, entries: impl IntoIterator<Item = (MotiveSummand, u64)>) -> Self {
        let mut out = Self::new(level);
        for (s, k) in entries {
            out.add(s, k);
        }
        out
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn entries(&self) -> &BTreeMap<MotiveSummand, u64> {
        &self.entries
    }

    pub fn multiplicity(&self, s: &MotiveSummand) -> u64 {
        self.entries.get(s).copied().unwrap_or(0)
    }

    pub fn add(&mut self, s: MotiveSummand, k: u64) {
        if k == 0 {
            return;
        }
        let (s, k) = match (self.level, s.kind) {
            (Level::Q, SummandKind::Tensor { i, j, .. }) => {
                (MotiveSummand { kind: SummandKind::Tensor { i, j, conj: false }, ..s }, k)
            }
            (Level::Q, SummandKind::UnitF { j }) => (MotiveSummand { kind: SummandKind::Lefschetz { j }, ..s }, 2 * k),
            _ => (s, k),
        };
        *self.entries.entry(s).or_insert(0) += k;
    }

    pub fn extend(&mut self, other: &SummandMultiset, scale: u64, map: impl Fn(MotiveSummand) -> MotiveSummand) {
        for (s, k) in &other.entries {
            self.add(map(*s), k * scale);
        }
    }

    pub fn to_q_level(&self) -> Self {
        let mut out = Self::new(Level::Q);
        out.extend(self, 1, |s| s);
        out
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Total number of Frobenius eigenvalues.
    pub fn dimension(&self, base_genus: usize) -> u64 {
        self.entries.iter().map(|(s, k)| s.eigenvalue_degree(base_genus) * k).sum()
    }

    /// Eigenvalue multiset with each eigenvalue written as `q^a·α^b`.
    pub fn symbolic_eigenvalues(&self) -> BTreeMap<SymbolicEigenvalue, u64> {
        let mut out = BTreeMap::new();
        for (s, k) in &self.entries {
            let base = s.base_factor;
            let j = s.j();
            let list: Vec<SymbolicEigenvalue> = match s.kind {
                SummandKind::Lefschetz { .. } => vec![SymbolicEigenvalue { q_power: j, alpha_power: 0, base }],
                SummandKind::UnitF { .. } => vec![SymbolicEigenvalue { q_power: j, alpha_power: 0, base }; 2],
                SummandKind::Tensor { i, .. } => vec![
                    SymbolicEigenvalue { q_power: j, alpha_power: i as i32, base },
                    SymbolicEigenvalue { q_power: j, alpha_power: -(i as i32), base },
                ],
            };
            for ev in list {
                *out.entry(ev).or_insert(0) += k;
            }
        }
        out
    }
}

impl fmt::Display for SummandMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(s, k)| format!("{k}·{s}")).collect();
        write!(f, "[{}] {}", self.level, parts.join(" + "))
    }
}

/// `q^{q_power}·α^{alpha_power}` (negative powers mean `ᾱ`), times one
/// eigenvalue of `H¹(C)` when `base` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicEigenvalue {
    pub q_power: u32,
    pub alpha_power: i32,
    pub base: bool,
}

/// Decomposition of `⊗^g h¹(E)`.
///
/// `g = 0` gives the unit motive `1(0)` at both levels.
pub fn cm_tensor_decompose(g: u32, level: Level) -> SummandMultiset {
    if g == 0 {
        return SummandMultiset::from_entries(level, [(MotiveSummand::lefschetz(0), 1)]);
    }
    let mut current = SummandMultiset::from_entries(Level::F, [(MotiveSummand::tensor(1, 0, false), 1)]);
    for _ in 1..g {
        let mut next = SummandMultiset::new(Level::F);
        for (s, &k) in current.entries() {
            match s.kind {
                SummandKind::Tensor { i, j, conj } => {
                    next.add(MotiveSummand::tensor(i + 1, j, conj), k);
                    if i == 1 {
                        next.add(MotiveSummand::unit_f(j + 1), k);
                    } else {
                        next.add(MotiveSummand::tensor(i - 1, j + 1, conj), k);
                    }
                }
                SummandKind::UnitF { j } => {
                    next.add(MotiveSummand::tensor(1, j, false), k);
                    next.add(MotiveSummand::tensor(1, j, true), k);
                }
                SummandKind::Lefschetz { .. } => unreachable!("no Lefschetz pieces at the F-level"),
            }
        }
        current = next;
    }
    match level {
        Level::F => current,
        Level::Q => current.to_q_level(),
    }
}

/// Rational multiplicity of `(⊗^i h¹)(-j)` inside `⊗^{i+2j} h¹(E)`: `binom(i+2j, j)`,
/// and of `1(-j)` inside `⊗^{2j}`: `binom(2j, j)`.
pub fn q_level_multiplicity(i: u32, j: u32) -> BigInt {
    binomial((i + 2 * j) as u64, j as u64)
}

/// The recurrence `a_{i,j} = a_{i-1,j} + a_{i+1,j-1}` with `a_{i,0} = 1` and
/// `a_{-1,j} = 0`.
pub fn printed_recurrence(i: u32, j: u32) -> BigInt {
    fn go(i: i64, j: u32, memo: &mut BTreeMap<(i64, u32), BigInt>) -> BigInt {
        if i < 0 {
            return BigInt::zero();
        }
        if j == 0 {
            return BigInt::one();
        }
        if let Some(v) = memo.get(&(i, j)) {
            return v.clone();
        }
        let v = go(i - 1, j, memo) + go(i + 1, j - 1, memo);
        memo.insert((i, j), v.clone());
        v
    }
    go(i as i64, j, &mut BTreeMap::new())
}

/// A place where the recurrence disagrees with the eigenvalue count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceDiscrepancy {
    pub i: u32,
    pub j: u32,
    pub recurrence: BigInt,
    pub f_level_plain: u64,
    pub q_level: BigInt,
}

/// Compares both multiplicity views for every `(i, j)` with `i + 2j = g`, `i >= 1`.
pub fn recurrence_discrepancies(g: u32) -> Vec<RecurrenceDiscrepancy> {
    let f_level = cm_tensor_decompose(g, Level::F);
    let mut out = Vec::new();
    for j in 0..=g / 2 {
        let i = g - 2 * j;
        if i == 0 {
            continue;
        }
        let recurrence = printed_recurrence(i, j);
        let q_level = q_level_multiplicity(i, j);
        if recurrence != q_level {
            out.push(RecurrenceDiscrepancy {
                i,
                j,
                recurrence,
                f_level_plain: f_level.multiplicity(&MotiveSummand::tensor(i, j, false)),
                q_level,
            });
        }
    }
    out
}

/// Summands of `hⁿ(E^g)`, or of `hⁿ(E^g × C)` with a base curve.
pub fn kunneth(g: u32, n: usize, base: Option<&CurveDescriptor>, level: Level) -> Result<SummandMultiset, MotiveError> {
    let max = 2 * g as usize + if base.is_some() { 2 } else { 0 };
    if n > max {
        return Err(MotiveError::DegreeOutOfRange { n, max });
    }
    let Some(curve) = base else {
        return Ok(kunneth_power(g, n, level));
    };
    let mut out = kunneth_power(g, n, level);
    if n >= 1 && n - 1 <= 2 * g as usize && curve.genus() > 0 {
        out.extend(&kunneth_power(g, n - 1, level), 1, MotiveSummand::with_base);
    }
    if n >= 2 && n - 2 <= 2 * g as usize {
        out.extend(&kunneth_power(g, n - 2, level), 1, |s| s.twist(1));
    }
    Ok(out)
}

fn kunneth_power(g: u32, n: usize, level: Level) -> SummandMultiset {
    let mut out = SummandMultiset::new(level);
    if n > 2 * g as usize {
        return out;
    }
    let n = n as u32;
    for k2 in 0..=n / 2 {
        let k1 = n - 2 * k2;
        if k1 + k2 > g {
            continue;
        }
        let k0 = g - k1 - k2;
        // g! / (k0! k1! k2!)
        let ways = binomial(g as u64, k1 as u64) * binomial((k0 + k2) as u64, k2 as u64);
        let ways: u64 = ways.try_into().expect("multinomial fits in u64");
        out.extend(&cm_tensor_decompose(k1, level), ways, |s| s.twist(k2));
    }
    out
}

fn ensure_ordinary(e: &EllipticCurveData) -> Result<&WeilNumber, MotiveError> {
    e.ordinary_alpha().map_err(|_| MotiveError::NotOrdinary)
}

/// `det(1 - Frob·t)` on the realization of one summand.
pub fn summand_charpoly(
    s: &MotiveSummand,
    e: &EllipticCurveData,
    base: Option<&CurveDescriptor>,
) -> Result<IntPoly, MotiveError> {
    ensure_ordinary(e)?;
    let q = e.q();
    let qj = q.pow(s.j());
    let own = match s.kind {
        SummandKind::Lefschetz { .. } => IntPoly::new(vec![BigInt::one(), -qj]),
        SummandKind::UnitF { .. } => IntPoly::new(vec![BigInt::one(), -qj]).pow(2),
        SummandKind::Tensor { i, .. } => {
            let a_i = trace_sequence(q, e.trace(), i as usize).pop().expect("nonempty");
            IntPoly::new(vec![BigInt::one(), -(&qj * a_i), &qj * &qj * q.pow(i)])
        }
    };
    if !s.base_factor {
        return Ok(own);
    }
    let curve = base.ok_or(MotiveError::MissingBase)?;
    Ok(composed_product(&curve.p1(), &own)?)
}

/// `P_0, …, P_{2d}` with `Z(t) = Π P_n^{(-1)^{n+1}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaFunction {
    pub q: PrimePower,
    pub dimension: usize,
    pub parts: Vec<IntPoly>,
}

impl ZetaFunction {
    /// `|X(F_{q^k})|` for `1 <= k <= n`, read off `t·d/dt log Z`.
    pub fn point_counts(&self, n: usize) -> Result<Vec<BigInt>, MotiveError> {
        let factors: Vec<(IntPoly, ZetaSign)> = self
            .parts
            .iter()
            .enumerate()
            .map(|(k, p)| (p.clone(), if k % 2 == 1 { ZetaSign::Numerator } else { ZetaSign::Denominator }))
            .collect();
        let series: RatSeries = series_log_zeta(&factors, n)?;
        let ints = series.integer_coeffs().expect("point counts are integers");
        Ok(ints[1..].to_vec())
    }
}

/// The polynomial whose eigenvalues are `c/γ` for the eigenvalues `γ` of `p`.
pub fn reflect(p: &IntPoly, c: &BigInt) -> Result<IntPoly, MotiveError> {
    let b = p.len_degree();
    let coeffs: Vec<BigInt> = (0..=b).map(|k| p.coeff(b - k) * num_traits::pow(c.clone(), k)).collect();
    Ok(IntPoly::new(coeffs).exact_div(&IntPoly::new(vec![p.coeff(b)]))?)
}

pub fn assemble_zeta(
    e: &EllipticCurveData,
    g: u32,
    base: Option<&CurveDescriptor>,
) -> Result<ZetaFunction, MotiveError> {
    ensure_ordinary(e)?;
    let d = g as usize + usize::from(base.is_some());
    let q = e.q();
    let parts = (0..=2 * d)
        .map(|n| {
            let summands = kunneth(g, n, base, Level::Q)?;
            let mut acc = IntPoly::one();
            for (s, &k) in summands.entries() {
                acc = &acc * &summand_charpoly(s, e, base)?.pow(k as u32);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>, MotiveError>>()?;
    let qd = q.pow(d as u32);
    for n in 0..=d {
        if reflect(&parts[n], &qd)? != parts[2 * d - n] {
            return Err(MotiveError::FunctionalEquation(n, 2 * d - n));
        }
    }
    Ok(ZetaFunction { q, dimension: d, parts })
}

/// One factor `(m, r, s)`: `(⊗^r h¹(E_m))(s)` for the ordinary curve with CM
/// by `Q(√m)`; `r = 0` is the pure twist `1(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchEntry {
    pub m: i64,
    pub r: u32,
    pub s: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    /// `left[k]` corresponds to `right[perm[k]]`.
    Matched(Vec<usize>),
    /// The first left entry without a partner (or, if all were paired, the
    /// first unpaired right entry) and its polynomial.
    NoMatch { side: MatchSide, index: usize, poly: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchSide {
    Left,
    Right,
}

/// `(1 - q^{-s} α^r t)(1 - q^{-s} ᾱ^r t)`.
pub fn match_polynomial(entry: &MatchEntry, alphas: &BTreeMap<i64, WeilNumber>, q: PrimePower) -> Result<RatPoly, MotiveError> {
    let scale = |k: i64| -> BigRational {
        let qk = BigRational::from_integer(q.pow(k.unsigned_abs() as u32));
        if k >= 0 {
            qk
        } else {
            qk.recip()
        }
    };
    let one = BigRational::one();
    if entry.r == 0 {
        let c = scale(-entry.s);
        return Ok(RatPoly::new(vec![one, -(&c + &c), &c * &c]));
    }
    let alpha = alphas.get(&entry.m).ok_or(MotiveError::MissingAlpha(entry.m))?;
    if !alpha.is_ordinary() {
        return Err(MotiveError::NotOrdinary);
    }
    let ar = alpha.value().pow(entry.r);
    let (trace, norm) = (ar.trace(), ar.norm());
    let c = scale(-entry.s);
    if &trace * &trace - BigRational::from_integer(BigInt::from(4)) * &norm >= BigRational::zero() {
        return Err(MotiveError::Reducible { m: entry.m, r: entry.r, s: entry.s });
    }
    Ok(RatPoly::new(vec![one, -(&c * trace), &c * &c * norm]))
}

/// Pairs the factors of two decompositions by equality of their Frobenius
/// polynomials, then confirms the pairing on the parameters themselves.
pub fn match_decompositions(
    left: &[MatchEntry],
    right: &[MatchEntry],
    alphas: &BTreeMap<i64, WeilNumber>,
) -> Result<MatchOutcome, MotiveError> {
    let mut qs = alphas.values().map(|a| a.q());
    let q = match qs.next() {
        Some(q) => q,
        None => PrimePower::new(2, 1).expect("2 is prime"),
    };
    if let Some(other) = qs.find(|o| *o != q) {
        return Err(MotiveError::MixedQ(q.value(), other.value()));
    }
    let lp: Vec<RatPoly> = left.iter().map(|e| match_polynomial(e, alphas, q)).collect::<Result<_, _>>()?;
    let rp: Vec<RatPoly> = right.iter().map(|e| match_polynomial(e, alphas, q)).collect::<Result<_, _>>()?;
    let mut used = vec![false; right.len()];
    let mut perm = Vec::with_capacity(left.len());
    for (k, poly) in lp.iter().enumerate() {
        let Some(partner) = (0..right.len()).find(|&j| !used[j] && rp[j] == *poly) else {
            return Ok(MatchOutcome::NoMatch { side: MatchSide::Left, index: k, poly: format!("{poly}") });
        };
        used[partner] = true;
        perm.push(partner);
    }
    if let Some(j) = used.iter().position(|u| !u) {
        return Ok(MatchOutcome::NoMatch { side: MatchSide::Right, index: j, poly: format!("{}", rp[j]) });
    }
    for (k, &j) in perm.iter().enumerate() {
        let (a, b) = (&left[k], &right[j]);
        let same = a.r == b.r && a.s == b.s && (a.r == 0 || a.m == b.m);
        if !same {
            return Err(MotiveError::ParameterMismatch(format!("{a:?} vs {b:?}")));
        }
    }
    Ok(MatchOutcome::Matched(perm))
}
