use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A prime power `q = p^e` with `e >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

impl PrimePower {
    /// Returns `None` if `p` is not prime, `e == 0`, or `p^e` overflows `u64`.
    pub fn new(p: u64, e: u32) -> Option<Self> {
        if e == 0 || !is_prime(p) {
            return None;
        }
        let q = p.checked_pow(e)?;
        Some(Self { p, e, q })
    }

    pub fn from_value(q: u64) -> Result<Self, AlgebraError> {
        factor_prime_power(q)
            .and_then(|(p, e)| Self::new(p, e))
            .ok_or(AlgebraError::NotPrimePower(q))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> u64 {
        self.q
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.q)
    }

    pub fn pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), k as usize)
    }

    /// `q^n` as a prime power, if it fits.
    pub fn extend(&self, n: u32) -> Option<Self> {
        Self::new(self.p, self.e.checked_mul(n)?)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

fn integer_root(n: u64, k: u32) -> Option<u64> {
    let guess = (n as f64).powf(1.0 / k as f64).round() as u64;
    for cand in guess.saturating_sub(1)..=guess + 1 {
        if cand.checked_pow(k) == Some(n) {
            return Some(cand);
        }
    }
    None
}

/// Writes `q = p^e` with `p` prime, or returns `None`.
pub fn factor_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    for e in (1..=63u32).rev() {
        if let Some(root) = integer_root(q, e) {
            if is_prime(root) {
                return Some((root, e));
            }
        }
    }
    None
}

pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Writes a nonzero `n` as `f^2 * m` with `f > 0` and `m` squarefree, sign carried by `m`.
pub fn squarefree_decomposition(n: i128) -> (u128, i128) {
    assert!(n != 0, "squarefree decomposition of zero");
    let mut rest = n.unsigned_abs();
    let mut f: u128 = 1;
    let mut m: u128 = 1;
    let mut d: u128 = 2;
    while d * d <= rest {
        let mut k = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            k += 1;
        }
        f *= d.pow(k / 2);
        if k % 2 == 1 {
            m *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    m *= rest;
    let m = if n < 0 { -(m as i128) } else { m as i128 };
    (f, m)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `v_p(n)` for nonzero `n`.
pub fn padic_valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (quot, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return v;
        }
        n = quot;
        v += 1;
        if n.is_one() {
            return v;
        }
    }
}
